//! Exact sparse linear algebra: vectors, matrices, row reduction, kernels,
//! solving and cohomology extraction.
//!
//! Every routine is deterministic: pivots are chosen as the first nonzero
//! entry in a column scanning rows in their stored order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Sparse vector indexed by `usize`; never stores zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(i, Scalar::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (i, c) in pairs {
            v.add_at(i, &c);
        }
        v
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        Self::from_pairs(values.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn get_ref(&self, i: usize) -> Option<&Scalar> {
        self.entries.get(&i)
    }

    pub fn set(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn add_at(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(x) => {
                let s = x.add_ref(c);
                if s.is_zero() {
                    self.entries.remove(&i);
                } else {
                    *x = s;
                }
            }
            None => {
                self.entries.insert(i, c.clone());
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_at(*i, &x.mul_ref(c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x.mul_ref(c))).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x.neg_ref())).collect(),
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let (small, big) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        let mut acc = Scalar::zero();
        for (i, x) in &small.entries {
            if let Some(y) = big.entries.get(i) {
                acc = acc.add_ref(&x.mul_ref(y));
            }
        }
        acc
    }

    /// Re-indexes entries through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in &self.entries {
            if let Some(j) = f(*i) {
                out.add_at(j, c);
            }
        }
        out
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (*i, f(c))))
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(i, c)| format!("{c}*e{i}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<SparseVec>,
}

/// Output of [`SparseMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: SparseMatrix,
    pub pivots: Vec<usize>,
    /// Invertible `T` with `T * M = reduced`.
    pub transform: SparseMatrix,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        SparseMatrix { rows, cols, field, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.data[i] = SparseVec::unit(i).map_scalars(|c| c.coerce(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<SparseVec>, cols: usize, field: Field) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.max_index() {
                if c >= cols {
                    return Err(Error::Dimension(format!("row {r} has column {c} >= {cols}")));
                }
            }
        }
        Ok(SparseMatrix { rows: rows.len(), cols, field, data: rows })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[SparseVec], rows: usize, field: Field) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len(), field);
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.iter() {
                if i >= rows {
                    return Err(Error::Dimension(format!("column {j} has row {i} >= {rows}")));
                }
                m.data[i].set(j, c.clone());
            }
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<Scalar>], field: Field) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| SparseVec::from_dense(r)).collect();
        SparseMatrix { rows: rows.len(), cols, field, data }
    }

    pub fn from_ints(rows: &[&[i64]], field: Field) -> Self {
        let dense: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::from_dense(&dense, field)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r].set(c, x);
    }

    pub fn add_at(&mut self, r: usize, c: usize, x: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r].add_at(c, x);
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn column(&self, c: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for (r, row) in self.data.iter().enumerate() {
            if let Some(x) = row.get_ref(c) {
                v.set(r, x.clone());
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![SparseVec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row.iter() {
                cols[c].set(r, x.clone());
            }
        }
        cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, c, x)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix { rows: self.cols, cols: self.rows, field: self.field, data: self.columns() }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        if v.is_zero() {
            return out;
        }
        for (r, row) in self.data.iter().enumerate() {
            let x = row.dot(v);
            if !x.is_zero() {
                out.set(r, x);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols, self.field);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, x) in row.iter() {
                acc.add_scaled(&other.data[k], x);
            }
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, field: self.field, data })
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add(&other.scaled(&Scalar::from_int(-1)))
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    /// Sub-matrix of the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = BTreeMap::new();
        for (j, &c) in cols.iter().enumerate() {
            pos.insert(c, j);
        }
        let data = rows.iter().map(|&r| self.data[r].remap(|c| pos.get(&c).copied())).collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), field: self.field, data }
    }

    /// Reduced row-echelon form with transform.
    pub fn rref(&self) -> Rref {
        let (reduced, pivots, transform) = self.reduce(true);
        Rref { reduced, pivots, transform: transform.unwrap() }
    }

    pub fn rank(&self) -> usize {
        self.reduce(false).1.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.reduce(false).1
    }

    fn reduce(&self, track: bool) -> (SparseMatrix, Vec<usize>, Option<SparseMatrix>) {
        let mut a = self.data.clone();
        let mut t: Vec<SparseVec> = if track {
            (0..self.rows).map(SparseVec::unit).collect()
        } else {
            Vec::new()
        };
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow >= self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| a[r].get_ref(col).is_some()) else {
                continue;
            };
            a.swap(prow, found);
            if track {
                t.swap(prow, found);
            }
            let inv = a[prow].get(col).inv();
            a[prow] = a[prow].scaled(&inv);
            if track {
                t[prow] = t[prow].scaled(&inv);
            }
            let pivot_row = a[prow].clone();
            let pivot_t = if track { t[prow].clone() } else { SparseVec::new() };
            for r in 0..self.rows {
                if r == prow {
                    continue;
                }
                if let Some(x) = a[r].get_ref(col) {
                    let c = x.neg_ref();
                    a[r].add_scaled(&pivot_row, &c);
                    if track {
                        t[r].add_scaled(&pivot_t, &c);
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let reduced = SparseMatrix { rows: self.rows, cols: self.cols, field: self.field, data: a };
        let transform = track.then(|| SparseMatrix {
            rows: self.rows,
            cols: self.rows,
            field: self.field,
            data: t.into_iter().map(|r| r.map_scalars(|c| c.coerce(self.field))).collect(),
        });
        (reduced, pivots, transform)
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let (r, pivots, _) = self.reduce(false);
        let mut pivot_of_col = BTreeMap::new();
        for (row, &c) in pivots.iter().enumerate() {
            pivot_of_col.insert(c, row);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_of_col.contains_key(c)) {
            let mut v = SparseVec::new();
            v.set(free, self.field.one());
            for (row, &p) in pivots.iter().enumerate() {
                let x = r.data[row].get(free);
                if !x.is_zero() {
                    v.set(p, x.neg_ref());
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &SparseVec) -> Result<Option<SparseVec>> {
        if let Some(i) = b.max_index() {
            if i >= self.rows {
                return Err(Error::Dimension(format!(
                    "right-hand side has index {i} but matrix has {} rows",
                    self.rows
                )));
            }
        }
        let rr = self.rref();
        let tb = rr.transform.apply(b);
        let rank = rr.pivots.len();
        if tb.indices().any(|i| i >= rank) {
            return Ok(None);
        }
        let mut x = SparseVec::new();
        for (row, &p) in rr.pivots.iter().enumerate() {
            x.set(p, tb.get(row));
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<SparseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let rr = self.rref();
        (rr.pivots.len() == self.rows).then_some(rr.transform)
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Cohomology of `C_prev --d_in--> C --d_out--> C_next` at the middle term,
/// together with the splitting `C = B ⊕ H ⊕ W` it was computed from.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub h_dim: usize,
    /// `h_dim x n`; kills the boundaries and the complement `W`.
    pub proj: SparseMatrix,
    /// `n x h_dim`; columns are the representatives.
    pub incl: SparseMatrix,
    pub reps: Vec<SparseVec>,
    /// Indices `p` in `C_prev` whose images `d_in(e_p)` form the boundary basis.
    pub boundary_sources: Vec<usize>,
    /// `|B| x n`; coordinates along the boundary basis.
    pub boundary_coords: SparseMatrix,
    /// Indices `q` in `C` with `e_q` spanning the complement `W` of the cycles.
    pub complement: Vec<usize>,
}

impl CohomologyData {
    pub fn rank_in(&self) -> usize {
        self.boundary_sources.len()
    }

    pub fn rank_out(&self) -> usize {
        self.complement.len()
    }
}

/// Computes cohomology with representatives and a projection at the middle
/// term of `d_out ∘ d_in`.
pub fn cohomology_data(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<CohomologyData> {
    let n = d_in.rows();
    if d_out.cols() != n {
        return Err(Error::Dimension(format!(
            "d_in lands in dimension {n} but d_out starts from {}",
            d_out.cols()
        )));
    }
    let field = d_in.field();
    let comp = d_out.mul(d_in)?;
    if let Some((r, c, x)) = comp.entries().next() {
        return Err(Error::NotComplex(format!("d_out * d_in has entry {x} at ({r},{c})")));
    }
    let boundary_sources = d_in.pivots();
    let boundaries: Vec<SparseVec> = boundary_sources.iter().map(|&p| d_in.column(p)).collect();
    let cycles = d_out.kernel_basis();
    let mut cols = boundaries.clone();
    cols.extend(cycles.iter().cloned());
    let piv = SparseMatrix::from_columns(&cols, n, field)?.pivots();
    let reps: Vec<SparseVec> = piv
        .iter()
        .filter(|&&p| p >= boundaries.len())
        .map(|&p| cycles[p - boundaries.len()].clone())
        .collect();
    let complement = d_out.pivots();
    let mut basis = boundaries.clone();
    basis.extend(reps.iter().cloned());
    basis.extend(complement.iter().map(|&q| SparseVec::unit(q)));
    debug_assert_eq!(basis.len(), n);
    let change = SparseMatrix::from_columns(&basis, n, field)?;
    let coords = change.inverse().ok_or_else(|| {
        Error::NotComplex("boundaries, representatives and complement are not a basis".into())
    })?;
    let nb = boundaries.len();
    let h_dim = reps.len();
    let boundary_coords = coords.select(&(0..nb).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    let proj = coords.select(&(nb..nb + h_dim).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    let incl = SparseMatrix::from_columns(&reps, n, field)?;
    Ok(CohomologyData { h_dim, proj, incl, reps, boundary_sources, boundary_coords, complement })
}
