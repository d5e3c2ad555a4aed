//! Exact linear algebra over a `Field`: dense matrices with row reduction,
//! sparse row-echelon span tracking, and Jordan types of nilpotent maps.
//!
//! Vectors are row vectors throughout, so a matrix acts on the right and
//! composites of right actions multiply in reading order.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use std::collections::BTreeMap;

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn sparse_scale(field: &Field, v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, field.mul(x, c))).collect()
}

pub fn sparse_add_scaled(field: &Field, acc: &mut SparseVec, v: &SparseVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let delta = field.mul(x, c);
        match acc.remove(k) {
            None => {
                if !delta.is_zero() {
                    acc.insert(*k, delta);
                }
            }
            Some(old) => {
                let s = field.add(&old, &delta);
                if !s.is_zero() {
                    acc.insert(*k, s);
                }
            }
        }
    }
}

/// A sparse matrix with rows indexed 0..rows; `entries[i]` holds the sorted
/// nonzero columns of row i.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize, field: &Field) -> SparseMatrix {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, Scalar)>>) -> SparseMatrix {
        debug_assert_eq!(data.len(), rows);
        SparseMatrix { rows, cols, entries: data }
    }

    /// Row vector times matrix.
    pub fn apply(&self, field: &Field, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v {
            sparse_add_scaled_row(field, &mut out, &self.entries[*i], c);
        }
        out
    }

    /// Standard product; composing right actions in application order.
    pub fn mul(&self, field: &Field, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let entries = self
            .entries
            .iter()
            .map(|row| {
                let mut acc = SparseVec::new();
                for (j, c) in row {
                    sparse_add_scaled_row(field, &mut acc, &other.entries[*j], c);
                }
                acc.into_iter().collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, entries }
    }

    pub fn add_scaled(&self, field: &Field, other: &SparseMatrix, c: &Scalar) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let mut acc: SparseVec = a.iter().cloned().collect();
                sparse_add_scaled_row(field, &mut acc, b, c);
                acc.into_iter().collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    pub fn to_dense(&self, field: &Field) -> Matrix {
        let mut m = Matrix::zero(self.rows, self.cols, field);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, c) in row {
                m.set(i, *j, c.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries = vec![Vec::new(); self.cols];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, c) in row {
                entries[*j].push((i, c.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Kronecker product, matching the index pairing (i1, i2) -> i1*n2 + i2.
    pub fn kron(&self, field: &Field, other: &SparseMatrix) -> SparseMatrix {
        let mut entries = Vec::with_capacity(self.rows * other.rows);
        for r1 in &self.entries {
            for r2 in &other.entries {
                let mut row = Vec::with_capacity(r1.len() * r2.len());
                for (j1, c1) in r1 {
                    for (j2, c2) in r2 {
                        row.push((j1 * other.cols + j2, field.mul(c1, c2)));
                    }
                }
                row.sort_by_key(|(j, _)| *j);
                entries.push(row);
            }
        }
        SparseMatrix { rows: self.rows * other.rows, cols: self.cols * other.cols, entries }
    }
}

fn sparse_add_scaled_row(
    field: &Field,
    acc: &mut SparseVec,
    row: &[(usize, Scalar)],
    c: &Scalar,
) {
    if c.is_zero() {
        return;
    }
    for (k, x) in row {
        let delta = field.mul(x, c);
        match acc.remove(k) {
            None => {
                if !delta.is_zero() {
                    acc.insert(*k, delta);
                }
            }
            Some(old) => {
                let s = field.add(&old, &delta);
                if !s.is_zero() {
                    acc.insert(*k, s);
                }
            }
        }
    }
}

/// Dense row-major matrix of scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: &Field) -> Matrix {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: &Field) -> Matrix {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Scalar>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        let _ = field;
        Matrix { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = field.add(out.get(i, j), &field.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let a = self.get(r, j).clone();
                    let b = self.get(pr, j).clone();
                    self.set(r, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = field.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = field.sub(self.get(i, j), &field.mul(&f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// A basis of the right nullspace {x : self * x^T = 0}, as rows.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(m.get(ri, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution x of self * x^T = b^T, if the system is consistent.
    pub fn solve(&self, field: &Field, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(ri, self.cols).clone();
        }
        Some(x)
    }
}

/// Incremental row-echelon span with combination tracking: every stored row
/// remembers how it was formed from the inserted vectors, so dependencies
/// come back as explicit linear combinations of earlier inputs.
pub struct SpanBuilder {
    field: Field,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    row_of_pivot: BTreeMap<usize, usize>,
    inputs: usize,
}

pub enum Reduction {
    /// The vector was independent; it is now part of the span with this
    /// input index.
    Independent { index: usize },
    /// The vector equals the recorded combination of earlier inputs.
    Dependent { combination: SparseVec },
}

impl SpanBuilder {
    pub fn new(field: Field) -> SpanBuilder {
        SpanBuilder {
            field,
            rows: Vec::new(),
            combos: Vec::new(),
            row_of_pivot: BTreeMap::new(),
            inputs: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    fn eliminate(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let f = &self.field;
        let mut work = v.clone();
        let mut acc = SparseVec::new();
        loop {
            let Some((&p, _)) = work.first_key_value() else { break };
            let Some(&ri) = self.row_of_pivot.get(&p) else { break };
            let factor = work.get(&p).unwrap().clone();
            let neg = f.neg(&factor);
            sparse_add_scaled(f, &mut work, &self.rows[ri], &neg);
            sparse_add_scaled(f, &mut acc, &self.combos[ri], &factor);
            debug_assert!(!work.contains_key(&p));
        }
        (work, acc)
    }

    /// Reduces v against the span without inserting; returns the combination
    /// of inputs if v lies in the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, acc) = self.eliminate(v);
        if rem.is_empty() {
            Some(acc)
        } else {
            None
        }
    }

    pub fn insert(&mut self, v: SparseVec) -> Reduction {
        let index = self.inputs;
        self.inputs += 1;
        let (mut work, acc) = self.eliminate(&v);
        if work.is_empty() {
            return Reduction::Dependent { combination: acc };
        }
        // full reduction: clear the new pivot from stored rows
        let f = self.field.clone();
        let (&p, c) = work.first_key_value().expect("nonzero remainder");
        let inv = f.inv(c).expect("leading coefficient is nonzero");
        work = sparse_scale(&f, &work, &inv);
        // combo for the stored row: (input_index - acc) * inv
        let mut combo = sparse_scale(&f, &acc, &f.neg(&inv));
        let prev = combo.insert(index, inv.clone());
        debug_assert!(prev.is_none());
        for ri in 0..self.rows.len() {
            if let Some(coef) = self.rows[ri].get(&p).cloned() {
                let neg = f.neg(&coef);
                let row = work.clone();
                let cmb = combo.clone();
                sparse_add_scaled(&f, &mut self.rows[ri], &row, &neg);
                sparse_add_scaled(&f, &mut self.combos[ri], &cmb, &neg);
            }
        }
        self.row_of_pivot.insert(p, self.rows.len());
        self.rows.push(work);
        self.combos.push(combo);
        Reduction::Independent { index }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.express(v).is_some()
    }
}

/// The Jordan type of a nilpotent matrix: block sizes in weakly decreasing
/// order, computed from the rank sequence of its powers.
pub fn jordan_type(field: &Field, m: &Matrix) -> Result<Vec<usize>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut ranks = vec![n];
    let mut pw = m.clone();
    let mut k = 1;
    loop {
        let r = pw.rank(field);
        ranks.push(r);
        if r == 0 {
            break;
        }
        if k > n {
            return Err(Error::NotNilpotent);
        }
        pw = pw.mul(field, m);
        k += 1;
    }
    // blocks of size >= k number ranks[k-1] - ranks[k]
    let mut ge: Vec<usize> = Vec::new();
    for k in 1..ranks.len() {
        ge.push(ranks[k - 1] - ranks[k]);
    }
    let mut out = Vec::new();
    for k in 0..ge.len() {
        let exactly = ge[k] - ge.get(k + 1).copied().unwrap_or(0);
        for _ in 0..exactly {
            out.push(k + 1);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(out.iter().sum::<usize>(), n);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(field: &Field, v: i64) -> Scalar {
        field.from_i64(v)
    }

    #[test]
    fn rref_and_rank() {
        let f = Field::cyclotomic(3).unwrap();
        let m = Matrix::from_rows(
            &f,
            &[
                vec![rat(&f, 1), rat(&f, 2), rat(&f, 3)],
                vec![rat(&f, 2), rat(&f, 4), rat(&f, 6)],
                vec![rat(&f, 0), rat(&f, 1), rat(&f, 1)],
            ],
        );
        assert_eq!(m.rank(&f), 2);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 1);
        // check A * x = 0
        for row in 0..3 {
            let mut acc = f.zero();
            for j in 0..3 {
                acc = f.add(&acc, &f.mul(m.get(row, j), &ns[0][j]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Field::finite(2, 2, 3).unwrap();
        let m = Matrix::from_rows(
            &f,
            &[
                vec![f.one(), f.q()],
                vec![f.zero(), f.one()],
            ],
        );
        let b = vec![f.q(), f.one()];
        let x = m.solve(&f, &b).unwrap();
        for i in 0..2 {
            let mut acc = f.zero();
            for j in 0..2 {
                acc = f.add(&acc, &f.mul(m.get(i, j), &x[j]));
            }
            assert_eq!(acc, b[i]);
        }
        let sing = Matrix::from_rows(&f, &[vec![f.one(), f.one()], vec![f.one(), f.one()]]);
        assert!(sing.solve(&f, &[f.zero(), f.one()]).is_none());
    }

    #[test]
    fn span_builder_reports_exact_combinations() {
        let f = Field::cyclotomic(5).unwrap();
        let mut sp = SpanBuilder::new(f.clone());
        let v = |pairs: &[(usize, i64)]| -> SparseVec {
            pairs.iter().map(|&(k, c)| (k, f.from_i64(c))).collect()
        };
        assert!(matches!(sp.insert(v(&[(0, 1), (1, 2)])), Reduction::Independent { index: 0 }));
        assert!(matches!(sp.insert(v(&[(1, 1), (2, 1)])), Reduction::Independent { index: 1 }));
        // 2*first - 3*second
        let dep = v(&[(0, 2), (1, 1), (2, -3)]);
        match sp.insert(dep) {
            Reduction::Dependent { combination } => {
                assert_eq!(combination, v(&[(0, 2), (1, -3)]));
            }
            _ => panic!("expected a dependency"),
        }
        assert_eq!(sp.dim(), 2);
        assert!(sp.contains(&v(&[(0, 5), (1, 10)])));
        assert!(!sp.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn jordan_types_from_rank_sequences() {
        let f = Field::cyclotomic(3).unwrap();
        // single size-3 block plus a size-1 block
        let mut n = Matrix::zero(4, 4, &f);
        n.set(0, 1, f.one());
        n.set(1, 2, f.one());
        assert_eq!(jordan_type(&f, &n).unwrap(), vec![3, 1]);
        let z = Matrix::zero(2, 2, &f);
        assert_eq!(jordan_type(&f, &z).unwrap(), vec![1, 1]);
        let id = Matrix::identity(3, &f);
        assert!(matches!(jordan_type(&f, &id), Err(Error::NotNilpotent)));
    }

    #[test]
    fn sparse_dense_agreement() {
        let f = Field::finite(5, 1, 4).unwrap();
        let a = SparseMatrix::from_rows(
            2,
            3,
            vec![vec![(0, f.one()), (2, f.q())], vec![(1, f.from_i64(3))]],
        );
        let b = SparseMatrix::from_rows(
            3,
            2,
            vec![vec![(0, f.q())], vec![(1, f.one())], vec![(0, f.one()), (1, f.one())]],
        );
        let prod = a.mul(&f, &b).to_dense(&f);
        let dense = a.to_dense(&f).mul(&f, &b.to_dense(&f));
        assert_eq!(prod, dense);
        let t = a.transpose().to_dense(&f);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(a.to_dense(&f).get(i, j), t.get(j, i));
            }
        }
    }

    #[test]
    fn kron_matches_index_pairing() {
        let f = Field::cyclotomic(3).unwrap();
        let a = SparseMatrix::from_rows(2, 2, vec![vec![(0, f.one())], vec![(1, f.q())]]);
        let b = SparseMatrix::from_rows(
            2,
            2,
            vec![vec![(1, f.one())], vec![(0, f.one())]],
        );
        let k = a.kron(&f, &b);
        assert_eq!((k.rows, k.cols), (4, 4));
        let kd = k.to_dense(&f);
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        let lhs = kd.get(i1 * 2 + i2, j1 * 2 + j2).clone();
                        let rhs = f.mul(
                            a.to_dense(&f).get(i1, j1),
                            b.to_dense(&f).get(i2, j2),
                        );
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_apply_is_row_vector_action() {
        let f = Field::cyclotomic(3).unwrap();
        let m = SparseMatrix::from_rows(
            2,
            2,
            vec![vec![(0, f.one()), (1, f.one())], vec![(1, f.q())]],
        );
        let v: SparseVec = [(0usize, f.one()), (1usize, f.one())].into_iter().collect();
        let out = m.apply(&f, &v);
        let expect: SparseVec =
            [(0usize, f.one()), (1usize, f.add(&f.one(), &f.q()))].into_iter().collect();
        assert_eq!(out, expect);
    }
}
