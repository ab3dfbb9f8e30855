use std::sync::Arc;

use crate::ideal::Ideal;
use crate::poly::Poly;
use crate::vars::VarTable;

/// Dense rectangular matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    table: Arc<VarTable>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(table: &Arc<VarTable>, rows: usize, cols: usize) -> Self {
        PolyMatrix { table: table.clone(), rows, cols, entries: vec![Poly::zero(table); rows * cols] }
    }

    /// Builds a matrix from row vectors; panics if they are ragged.
    pub fn from_rows(table: &Arc<VarTable>, rows: Vec<Vec<Poly>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        PolyMatrix { table: table.clone(), rows: n, cols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(table: &Arc<VarTable>, n: usize) -> Self {
        let mut m = Self::zeros(table, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(table));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, mut f: impl FnMut(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { table: self.table.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(&mut f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        PolyMatrix { table: self.table.clone(), rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(&self.table, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.table);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let all: Vec<usize> = (0..self.cols).collect();
        self.det_of(0, &all)
    }

    fn det_of(&self, row: usize, cols: &[usize]) -> Poly {
        match cols.len() {
            0 => Poly::one(&self.table),
            1 => self.get(row, cols[0]).clone(),
            _ => {
                let mut acc = Poly::zero(&self.table);
                for (k, &c) in cols.iter().enumerate() {
                    let e = self.get(row, c);
                    if e.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let t = e * &self.det_of(row + 1, &rest);
                    acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                acc
            }
        }
    }

    /// Classical adjugate, so that `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> PolyMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = Self::zeros(&self.table, n, n);
        if n == 1 {
            out.set(0, 0, Poly::one(&self.table));
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let rs: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cs: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let m = self.submatrix(&rs, &cs).det();
                out.set(i, j, if (i + j) % 2 == 0 { m } else { -m });
            }
        }
        out
    }

    /// All `k × k` minors, with the usual conventions at the ends.
    pub fn minors(&self, k: i64) -> Ideal {
        if k <= 0 {
            return Ideal::unit(&self.table);
        }
        let k = k as usize;
        if k > self.rows.min(self.cols) {
            return Ideal::zero(&self.table);
        }
        let mut gens = Vec::new();
        for rs in subsets(self.rows, k) {
            for cs in subsets(self.cols, k) {
                let d = self.submatrix(&rs, &cs).det();
                if !d.is_zero() && !gens.contains(&d) {
                    gens.push(d);
                }
            }
        }
        Ideal::new(&self.table, gens)
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
