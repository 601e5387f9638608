//! Sparse exact linear algebra over cyclotomic fields.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{CycScalar, CycloField};

/// Sparse vector: sorted `(index, value)` pairs with no stored zeros.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, CycScalar)>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: &Arc<CycloField>) -> Self {
        SparseVec { entries: vec![(i, CycScalar::one(field))] }
    }

    /// Builds from arbitrary pairs; duplicates are summed and zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, CycScalar)>) -> Self {
        let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
        for (i, v) in pairs {
            if v.is_zero() {
                continue;
            }
            match acc.get_mut(&i) {
                Some(x) => *x = &*x + &v,
                None => {
                    acc.insert(i, v);
                }
            }
        }
        SparseVec { entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(v: &[CycScalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, dim: usize, field: &Arc<CycloField>) -> Vec<CycScalar> {
        let mut out = vec![CycScalar::zero(field); dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, CycScalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, CycScalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Option<&CycScalar> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn lead(&self) -> Option<&(usize, CycScalar)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// self + c * other.
    pub fn axpy(&self, c: &CycScalar, other: &SparseVec) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, c * y));
                }
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        out.push(a.next().unwrap().clone());
                    } else if j < i {
                        let (j, y) = b.next().unwrap();
                        out.push((*j, c * y));
                    } else {
                        let (i, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                    }
                }
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        match other.entries.first() {
            None => self.clone(),
            Some((_, v)) => self.axpy(&CycScalar::one(v.field()), other),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        match other.entries.first() {
            None => self.clone(),
            Some((_, v)) => self.axpy(&-CycScalar::one(v.field()), other),
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Option<CycScalar> {
        let mut acc: Option<CycScalar> = None;
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                let p = x * y;
                acc = Some(match acc {
                    None => p,
                    Some(s) => s + p,
                });
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Remaps indices; `f` must be injective.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVec { entries }
    }
}

/// Accumulates a linear combination of sparse vectors in a dense buffer.
pub struct Accumulator {
    slots: Vec<Option<CycScalar>>,
    touched: Vec<usize>,
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Accumulator { slots: vec![None; dim], touched: Vec::new() }
    }

    pub fn add_scaled(&mut self, c: &CycScalar, v: &SparseVec) {
        for (i, x) in v.iter() {
            let t = c * x;
            self.add_at(*i, t);
        }
    }

    pub fn add_at(&mut self, i: usize, t: CycScalar) {
        match &mut self.slots[i] {
            Some(s) => *s = &*s + &t,
            slot @ None => {
                *slot = Some(t);
                self.touched.push(i);
            }
        }
    }

    pub fn finish(mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for i in self.touched {
            if let Some(v) = self.slots[i].take() {
                if !v.is_zero() {
                    entries.push((i, v));
                }
            }
        }
        SparseVec { entries }
    }
}

/// Column-major sparse matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    field: Arc<CycloField>,
    data: Vec<SparseVec>,
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{}", self.rows, self.cols)?;
        for (j, c) in self.data.iter().enumerate() {
            if !c.is_zero() {
                writeln!(f, "  col {j}: {c:?}")?;
            }
        }
        Ok(())
    }
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize, field: &Arc<CycloField>) -> Self {
        SparseMat { rows, cols, field: field.clone(), data: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize, field: &Arc<CycloField>) -> Self {
        Self::diagonal((0..n).map(|_| CycScalar::one(field)).collect(), field)
    }

    pub fn diagonal(d: Vec<CycScalar>, field: &Arc<CycloField>) -> Self {
        let n = d.len();
        let data = d
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { SparseVec::new() } else { SparseVec { entries: vec![(i, v)] } })
            .collect();
        SparseMat { rows: n, cols: n, field: field.clone(), data }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>, field: &Arc<CycloField>) -> Self {
        debug_assert!(cols.iter().all(|c| c.entries.last().is_none_or(|(i, _)| *i < rows)));
        SparseMat { rows, cols: cols.len(), field: field.clone(), data: cols }
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec], field: &Arc<CycloField>) -> Self {
        SparseMat::from_columns(cols, rows.to_vec(), field).transpose()
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        trips: impl IntoIterator<Item = (usize, usize, CycScalar)>,
        field: &Arc<CycloField>,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, CycScalar)>> = vec![Vec::new(); cols];
        for (i, j, v) in trips {
            per_col[j].push((i, v));
        }
        let data = per_col.into_iter().map(SparseVec::from_pairs).collect();
        SparseMat { rows, cols, field: field.clone(), data }
    }

    pub fn from_dense(rows: &[Vec<CycScalar>], field: &Arc<CycloField>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let trips = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(r, c, trips, field)
    }

    pub fn to_dense(&self) -> Vec<Vec<CycScalar>> {
        let mut out = vec![vec![CycScalar::zero(&self.field); self.cols]; self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, v) in c.iter() {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.data[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> CycScalar {
        self.data[j].get(i).cloned().unwrap_or_else(|| CycScalar::zero(&self.field))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(j, c)| c.nnz() == 1 && c.entries[0].0 == j && c.entries[0].1.is_one())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.rows);
        for (j, x) in v.iter() {
            acc.add_scaled(x, &self.data[*j]);
        }
        acc.finish()
    }

    /// self * other.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let data = other.data.iter().map(|c| self.apply(c)).collect();
        SparseMat { rows: self.rows, cols: other.cols, field: self.field.clone(), data }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        self.axpy(&CycScalar::one(&self.field), other)
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.axpy(&-CycScalar::one(&self.field), other)
    }

    /// self + c * other.
    pub fn axpy(&self, c: &CycScalar, other: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in matrix sum");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.axpy(c, b)).collect();
        SparseMat { rows: self.rows, cols: self.cols, field: self.field.clone(), data }
    }

    pub fn scale(&self, c: &CycScalar) -> SparseMat {
        let data = self.data.iter().map(|a| a.scale(c)).collect();
        SparseMat { rows: self.rows, cols: self.cols, field: self.field.clone(), data }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut per_row: Vec<Vec<(usize, CycScalar)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.data.iter().enumerate() {
            for (i, v) in c.iter() {
                per_row[*i].push((j, v.clone()));
            }
        }
        let data = per_row.into_iter().map(|entries| SparseVec { entries }).collect();
        SparseMat { rows: self.cols, cols: self.rows, field: self.field.clone(), data }
    }

    /// Row vectors of the matrix.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    /// Kronecker product with a per-entry sign: entry ((i,k),(j,m)) is
    /// a_ij * b_km * sign(j, m), where `sign` returns true for a minus sign.
    pub fn kron_signed(a: &SparseMat, b: &SparseMat, sign: impl Fn(usize, usize) -> bool) -> SparseMat {
        let rows = a.rows * b.rows;
        let cols = a.cols * b.cols;
        let mut data = Vec::with_capacity(cols);
        for j in 0..a.cols {
            for m in 0..b.cols {
                let mut entries = Vec::with_capacity(a.data[j].nnz() * b.data[m].nnz());
                for (i, x) in a.data[j].iter() {
                    for (k, y) in b.data[m].iter() {
                        let p = x * y;
                        entries.push((i * b.rows + k, if sign(j, m) { -p } else { p }));
                    }
                }
                data.push(SparseVec { entries });
            }
        }
        SparseMat { rows, cols, field: a.field.clone(), data }
    }

    pub fn kron(a: &SparseMat, b: &SparseMat) -> SparseMat {
        Self::kron_signed(a, b, |_, _| false)
    }

    /// Whether the matrix is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(j, c)| c.iter().all(|(i, _)| *i == j))
    }

    /// Exact inverse via Gauss-Jordan; errors if singular.
    pub fn inverse(&self) -> Result<SparseMat> {
        if self.rows != self.cols {
            return Err(Error::Precondition("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let rows: Vec<SparseVec> = self
            .row_vectors()
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut entries = r.entries;
                entries.push((n + i, CycScalar::one(&self.field)));
                SparseVec { entries }
            })
            .collect();
        let ech = Echelon::from_rows(rows, 2 * n);
        if ech.rank() != n || ech.pivots().iter().enumerate().any(|(k, p)| *p != k) {
            return Err(Error::Solver("matrix is singular".into()));
        }
        let inv_rows: Vec<SparseVec> = ech
            .rows()
            .iter()
            .map(|r| SparseVec { entries: r.entries.iter().filter(|(j, _)| *j >= n).map(|(j, v)| (j - n, v.clone())).collect() })
            .collect();
        Ok(SparseMat::from_rows(n, &inv_rows, &self.field))
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.row_vectors(), self.cols).rank()
    }
}

/// Reduced row echelon form built incrementally. Pivots are the first
/// nonzero column of each row, scaled to a leading one; rows are fully reduced.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivot_rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivot_rows: BTreeMap::new() }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, CycScalar)> =
            v.iter().filter(|(c, _)| self.pivot_rows.contains_key(c)).cloned().collect();
        if hits.is_empty() {
            return v.clone();
        }
        let field = hits[0].1.field().clone();
        let mut acc = Accumulator::new(self.ncols);
        acc.add_scaled(&CycScalar::one(&field), v);
        for (c, x) in &hits {
            acc.add_scaled(&-x, &self.pivot_rows[c]);
        }
        acc.finish()
    }

    /// Inserts a row; returns true if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        let Some((p, lead)) = r.lead().cloned() else {
            return false;
        };
        let r = r.scale(&lead.inv().expect("nonzero lead"));
        for row in self.pivot_rows.values_mut() {
            if let Some(x) = row.get(p).cloned() {
                *row = row.axpy(&-x, &r);
            }
        }
        self.pivot_rows.insert(p, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.pivot_rows.keys().copied().collect()
    }

    pub fn rows(&self) -> Vec<SparseVec> {
        self.pivot_rows.values().cloned().collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis (its entries at pivot columns),
    /// or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<(usize, CycScalar)>> {
        if !self.contains(v) {
            return None;
        }
        let pos: BTreeMap<usize, usize> = self.pivot_rows.keys().enumerate().map(|(k, p)| (*p, k)).collect();
        Some(v.iter().filter_map(|(c, x)| pos.get(c).map(|k| (*k, x.clone()))).collect())
    }

    /// Canonical basis of the null space of the row system.
    pub fn kernel(&self, field: &Arc<CycloField>) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivot_rows.contains_key(&f) {
                continue;
            }
            let mut pairs = vec![(f, CycScalar::one(field))];
            for (p, row) in &self.pivot_rows {
                if let Some(x) = row.get(f) {
                    pairs.push((*p, -x));
                }
            }
            out.push(SparseVec::from_pairs(pairs));
        }
        out
    }
}

/// Basis of the solution space of `rows * x = 0` in `ncols` unknowns.
pub fn null_space(rows: impl IntoIterator<Item = SparseVec>, ncols: usize, field: &Arc<CycloField>) -> Vec<SparseVec> {
    Echelon::from_rows(rows, ncols).kernel(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RootConfig;

    #[test]
    fn inverse_roundtrip() {
        let cfg = RootConfig::new(5, 1).unwrap();
        let f = cfg.field();
        let q = cfg.q_int(1);
        let m = SparseMat::from_dense(
            &[vec![q.clone(), cfg.one(), cfg.zero()], vec![cfg.zero(), cfg.int(2), q.clone()], vec![cfg.one(), cfg.zero(), cfg.int(3)]],
            f,
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn kernel_is_annihilated() {
        let cfg = RootConfig::new(3, 1).unwrap();
        let f = cfg.field();
        let rows = vec![
            SparseVec::from_pairs(vec![(0, cfg.one()), (2, cfg.q_int(1))]),
            SparseVec::from_pairs(vec![(1, cfg.one()), (2, cfg.int(-1))]),
            SparseVec::from_pairs(vec![(0, cfg.int(2)), (2, cfg.q_int(1).scale_int(2))]),
        ];
        let ker = null_space(rows.clone(), 4, f);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            for r in &rows {
                assert!(r.dot(k).is_none_or(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn singular_inverse_rejected() {
        let cfg = RootConfig::new(3, 1).unwrap();
        let m = SparseMat::from_dense(&[vec![cfg.one(), cfg.one()], vec![cfg.one(), cfg.one()]], cfg.field());
        assert!(m.inverse().is_err());
    }
}
