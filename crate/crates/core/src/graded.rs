//! Graded vector spaces, graded maps, cochain complexes, contractions and cones.
//!
//! A [`GradedSpace`] fixes a global basis ordering: degrees ascending, and
//! within a degree the local basis order. Graded maps are stored as one
//! global sparse matrix whose entries must respect the degree shift.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{cohomology_data, CohomologyData, SparseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    /// `(degree, dim)` sorted by degree; zero-dimensional degrees are dropped.
    blocks: Vec<(i32, usize)>,
    offsets: Vec<usize>,
    degree_of: Vec<i32>,
    labels: Vec<String>,
}

impl GradedSpace {
    pub fn new(field: Field, dims: &BTreeMap<i32, usize>) -> Self {
        let labels = dims
            .iter()
            .flat_map(|(&d, &n)| (0..n).map(move |i| format!("x{d}_{i}")))
            .collect();
        Self::with_labels(field, dims, labels)
    }

    pub fn from_dims(field: Field, dims: &[(i32, usize)]) -> Self {
        let mut map = BTreeMap::new();
        for &(d, n) in dims {
            *map.entry(d).or_insert(0) += n;
        }
        Self::new(field, &map)
    }

    /// `labels` must list the global basis in order.
    pub fn with_labels(field: Field, dims: &BTreeMap<i32, usize>, labels: Vec<String>) -> Self {
        let blocks: Vec<(i32, usize)> = dims.iter().filter(|(_, &n)| n > 0).map(|(&d, &n)| (d, n)).collect();
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut degree_of = Vec::new();
        let mut acc = 0;
        for &(d, n) in &blocks {
            offsets.push(acc);
            acc += n;
            degree_of.extend(std::iter::repeat(d).take(n));
        }
        assert_eq!(labels.len(), acc, "label count must match dimension");
        GradedSpace { field, blocks, offsets, degree_of, labels }
    }

    pub fn empty(field: Field) -> Self {
        Self::new(field, &BTreeMap::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn total_dim(&self) -> usize {
        self.degree_of.len()
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.block_index(degree).map_or(0, |b| self.blocks[b].1)
    }

    fn block_index(&self, degree: i32) -> Option<usize> {
        self.blocks.binary_search_by_key(&degree, |b| b.0).ok()
    }

    /// Global index of the first basis vector in `degree` (or where it would be).
    pub fn offset(&self, degree: i32) -> usize {
        match self.blocks.binary_search_by_key(&degree, |b| b.0) {
            Ok(b) => self.offsets[b],
            Err(b) if b < self.blocks.len() => self.offsets[b],
            Err(_) => self.total_dim(),
        }
    }

    pub fn range(&self, degree: i32) -> std::ops::Range<usize> {
        let o = self.offset(degree);
        o..o + self.dim(degree)
    }

    pub fn degree_of(&self, index: usize) -> i32 {
        self.degree_of[index]
    }

    pub fn global(&self, degree: i32, local: usize) -> usize {
        assert!(local < self.dim(degree), "local index {local} out of range in degree {degree}");
        self.offset(degree) + local
    }

    pub fn local(&self, index: usize) -> (i32, usize) {
        let d = self.degree_of[index];
        (d, index - self.offset(d))
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.blocks.iter().map(|b| b.0)
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.blocks.iter().copied().collect()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.blocks.first().map(|b| b.0)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.blocks.last().map(|b| b.0)
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when every entry of `v` lies in `degree`.
    pub fn is_homogeneous(&self, v: &SparseVec, degree: i32) -> bool {
        v.indices().all(|i| self.degree_of[i] == degree)
    }

    /// Splits a vector into its homogeneous components.
    pub fn components(&self, v: &SparseVec) -> BTreeMap<i32, SparseVec> {
        let mut out: BTreeMap<i32, SparseVec> = BTreeMap::new();
        for (i, c) in v.iter() {
            out.entry(self.degree_of[i]).or_default().set(i, c.clone());
        }
        out
    }

    /// Restricts `v` to its degree-`degree` part, in local coordinates.
    pub fn local_part(&self, v: &SparseVec, degree: i32) -> SparseVec {
        let r = self.range(degree);
        v.remap(|i| r.contains(&i).then(|| i - r.start))
    }

    /// Embeds a local degree-`degree` vector into global coordinates.
    pub fn embed_local(&self, v: &SparseVec, degree: i32) -> SparseVec {
        let o = self.offset(degree);
        v.remap(|i| Some(i + o))
    }
}

/// Linear map of fixed degree between graded spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub degree: i32,
    /// `target.total_dim() x source.total_dim()`
    pub matrix: SparseMatrix,
}

impl GradedMap {
    pub fn new(source: GradedSpace, target: GradedSpace, degree: i32, matrix: SparseMatrix) -> Result<Self> {
        if matrix.rows() != target.total_dim() || matrix.cols() != source.total_dim() {
            return Err(Error::Dimension(format!(
                "graded map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.total_dim(),
                source.total_dim()
            )));
        }
        for (r, c, _) in matrix.entries() {
            if target.degree_of(r) != source.degree_of(c) + degree {
                return Err(Error::Dimension(format!(
                    "entry ({r},{c}) maps degree {} to degree {}, map has degree {degree}",
                    source.degree_of(c),
                    target.degree_of(r)
                )));
            }
        }
        Ok(GradedMap { source, target, degree, matrix })
    }

    pub fn zero(source: GradedSpace, target: GradedSpace, degree: i32) -> Self {
        let m = SparseMatrix::zeros(target.total_dim(), source.total_dim(), source.field());
        GradedMap { source, target, degree, matrix: m }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let m = SparseMatrix::identity(space.total_dim(), space.field());
        GradedMap { source: space.clone(), target: space.clone(), degree: 0, matrix: m }
    }

    /// Builds a map from per-degree blocks `source degree k -> target degree k + degree`.
    pub fn from_blocks(
        source: GradedSpace,
        target: GradedSpace,
        degree: i32,
        blocks: &BTreeMap<i32, SparseMatrix>,
    ) -> Result<Self> {
        let mut m = SparseMatrix::zeros(target.total_dim(), source.total_dim(), source.field());
        for (&k, b) in blocks {
            if b.cols() != source.dim(k) || b.rows() != target.dim(k + degree) {
                return Err(Error::Dimension(format!(
                    "block at degree {k} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    target.dim(k + degree),
                    source.dim(k)
                )));
            }
            let (ro, co) = (target.offset(k + degree), source.offset(k));
            for (r, c, x) in b.entries() {
                m.set(ro + r, co + c, x.clone());
            }
        }
        Ok(GradedMap { source, target, degree, matrix: m })
    }

    /// Block from source degree `k` to target degree `k + self.degree`.
    pub fn block(&self, k: i32) -> SparseMatrix {
        let rows: Vec<usize> = self.target.range(k + self.degree).collect();
        let cols: Vec<usize> = self.source.range(k).collect();
        self.matrix.select(&rows, &cols)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::Dimension("composition of graded maps with mismatched spaces".into()));
        }
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("sum of incompatible graded maps".into()));
        }
        Ok(GradedMap { matrix: self.matrix.add(&other.matrix)?, ..self.clone() })
    }

    pub fn scaled(&self, c: &Scalar) -> GradedMap {
        GradedMap { matrix: self.matrix.scaled(c), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// First nonzero entry as `(row, col, value)`.
    pub fn first_entry(&self) -> Option<(usize, usize, Scalar)> {
        self.matrix.entries().next().map(|(r, c, x)| (r, c, x.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub space: GradedSpace,
    pub differential: GradedMap,
}

/// Where `d ∘ d` first fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexWitness {
    pub degree: i32,
    pub row: usize,
    pub col: usize,
    pub value: Scalar,
}

impl CochainComplex {
    /// Wraps a degree-one differential without checking `d² = 0`; see [`check_complex`].
    pub fn new(space: GradedSpace, differential: SparseMatrix) -> Result<Self> {
        let d = GradedMap::new(space.clone(), space.clone(), 1, differential)?;
        Ok(CochainComplex { space, differential: d })
    }

    pub fn from_blocks(space: GradedSpace, blocks: &BTreeMap<i32, SparseMatrix>) -> Result<Self> {
        let d = GradedMap::from_blocks(space.clone(), space.clone(), 1, blocks)?;
        Ok(CochainComplex { space, differential: d })
    }

    pub fn zero(space: GradedSpace) -> Self {
        let d = GradedMap::zero(space.clone(), space.clone(), 1);
        CochainComplex { space, differential: d }
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn d(&self, v: &SparseVec) -> SparseVec {
        self.differential.apply(v)
    }

    /// Degree-`k` block of the differential.
    pub fn d_block(&self, k: i32) -> SparseMatrix {
        self.differential.block(k)
    }

    /// Degrees at which cohomology may be nonzero.
    fn degree_span(&self) -> Vec<i32> {
        self.space.degrees().collect()
    }

    pub fn cohomology_at(&self, k: i32) -> Result<CohomologyData> {
        cohomology_data(&self.d_block(k - 1), &self.d_block(k))
    }

    pub fn cohomology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        let mut out = BTreeMap::new();
        for k in self.degree_span() {
            let h = self.cohomology_at(k)?.h_dim;
            if h > 0 {
                out.insert(k, h);
            }
        }
        Ok(out)
    }
}

/// Checks `d ∘ d = 0`, returning the first failing degree and entry.
pub fn check_complex(c: &CochainComplex) -> std::result::Result<(), ComplexWitness> {
    for k in c.space.degrees() {
        let dd = c.d_block(k + 1).mul(&c.d_block(k)).expect("block shapes agree");
        let first = dd.entries().next().map(|(row, col, x)| (row, col, x.clone()));
        if let Some((row, col, value)) = first {
            return Err(ComplexWitness { degree: k, row, col, value });
        }
    }
    Ok(())
}

/// Strong deformation retract of a complex onto its cohomology.
#[derive(Clone, Debug)]
pub struct ContractionData {
    pub target: GradedSpace,
    pub proj: GradedMap,
    pub incl: GradedMap,
    pub homotopy: GradedMap,
}

impl ContractionData {
    /// Verifies `p∘i = id`, `id - i∘p = dh + hd`, `h∘i = 0`, `p∘h = 0`, `h∘h = 0`.
    pub fn verify(&self, c: &CochainComplex) -> Result<()> {
        let bad = |what: &str| Err(Error::Invalid(format!("contraction identity fails: {what}")));
        if self.proj.compose(&self.incl)? != GradedMap::identity(&self.target) {
            return bad("proj ∘ incl = id");
        }
        let ip = self.incl.compose(&self.proj)?;
        let lhs = GradedMap::identity(&c.space).add(&ip.scaled(&Scalar::from_int(-1)))?;
        let dh = c.differential.compose(&self.homotopy)?;
        let hd = self.homotopy.compose(&c.differential)?;
        let mut rhs = dh.add(&hd)?;
        rhs.degree = 0;
        if lhs.matrix != rhs.matrix {
            return bad("id - incl ∘ proj = d h + h d");
        }
        if !self.homotopy.compose(&self.incl)?.is_zero() {
            return bad("homotopy ∘ incl = 0");
        }
        if !self.proj.compose(&self.homotopy)?.is_zero() {
            return bad("proj ∘ homotopy = 0");
        }
        if !self.homotopy.compose(&self.homotopy)?.is_zero() {
            return bad("homotopy ∘ homotopy = 0");
        }
        Ok(())
    }

    /// Induced cohomology coordinates of a cocycle.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.proj.apply(v)
    }
}

/// Contraction of `c` onto cohomology representatives chosen by row reduction.
///
/// In each degree the space splits as boundaries ⊕ representatives ⊕ a
/// coordinate complement of the cycles; the homotopy inverts `d` from the
/// boundaries back onto the complement one degree down, which makes all three
/// side conditions hold.
pub fn contraction(c: &CochainComplex) -> Result<ContractionData> {
    let field = c.field();
    let mut per_degree: BTreeMap<i32, CohomologyData> = BTreeMap::new();
    let mut hdims = BTreeMap::new();
    for k in c.space.degrees() {
        let h = c.cohomology_at(k)?;
        hdims.insert(k, h.h_dim);
        per_degree.insert(k, h);
    }
    let target = GradedSpace::new(field, &hdims);
    let n = c.space.total_dim();
    let mut proj = SparseMatrix::zeros(target.total_dim(), n, field);
    let mut incl = SparseMatrix::zeros(n, target.total_dim(), field);
    let mut homotopy = SparseMatrix::zeros(n, n, field);
    for (&k, h) in &per_degree {
        let co = c.space.offset(k);
        let to = target.offset(k);
        for (r, col, x) in h.proj.entries() {
            proj.set(to + r, co + col, x.clone());
        }
        for (r, col, x) in h.incl.entries() {
            incl.set(co + r, to + col, x.clone());
        }
        let prev = c.space.offset(k - 1);
        for (b, &src) in h.boundary_sources.iter().enumerate() {
            for (col, x) in h.boundary_coords.row(b).iter() {
                homotopy.set(prev + src, co + col, x.clone());
            }
        }
    }
    Ok(ContractionData {
        proj: GradedMap::new(c.space.clone(), target.clone(), 0, proj)?,
        incl: GradedMap::new(target.clone(), c.space.clone(), 0, incl)?,
        homotopy: GradedMap::new(c.space.clone(), c.space.clone(), -1, homotopy)?,
        target,
    })
}

/// A degree-zero map between complexes, checked to commute with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: CochainComplex,
    pub target: CochainComplex,
    pub map: GradedMap,
}

impl ChainMap {
    pub fn new(source: CochainComplex, target: CochainComplex, map: GradedMap) -> Result<Self> {
        if map.degree != 0 || map.source != source.space || map.target != target.space {
            return Err(Error::Dimension("chain map must be a degree-0 map between the complexes".into()));
        }
        let lhs = target.differential.compose(&map)?;
        let rhs = map.compose(&source.differential)?;
        if lhs.matrix != rhs.matrix {
            let diff = lhs.matrix.sub(&rhs.matrix)?;
            let (r, c, x) = diff.entries().next().map(|(r, c, x)| (r, c, x.clone())).unwrap();
            return Err(Error::NotChainMap(format!("d f - f d has entry {x} at ({r},{c})")));
        }
        Ok(ChainMap { source, target, map })
    }

    /// Matrix of `H^k(f)` in the representative bases of the two contractions.
    pub fn cohomology_map(&self, src: &ContractionData, dst: &ContractionData, k: i32) -> SparseMatrix {
        let m = dst.proj.compose(&self.map).unwrap().compose(&src.incl).unwrap();
        m.block(k)
    }
}

/// Index bookkeeping for `Cone^i = V^i ⊕ W^{i-1}`: in every degree the
/// `V`-part comes first, then the `W`-part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeLayout {
    pub space: GradedSpace,
    v_to_cone: Vec<usize>,
    w_to_cone: Vec<usize>,
    /// For each cone index: `Ok(v index)` or `Err(w index)`.
    origin: Vec<std::result::Result<usize, usize>>,
}

impl ConeLayout {
    pub fn new(v: &GradedSpace, w: &GradedSpace) -> Self {
        let mut dims = BTreeMap::new();
        for d in v.degrees() {
            *dims.entry(d).or_insert(0) += v.dim(d);
        }
        for d in w.degrees() {
            *dims.entry(d + 1).or_insert(0) += w.dim(d);
        }
        let mut labels = Vec::new();
        let mut v_to_cone = vec![0; v.total_dim()];
        let mut w_to_cone = vec![0; w.total_dim()];
        let mut origin = Vec::new();
        for &deg in dims.keys() {
            for i in v.range(deg) {
                v_to_cone[i] = origin.len();
                origin.push(Ok(i));
                labels.push(v.label(i).to_string());
            }
            for i in w.range(deg - 1) {
                w_to_cone[i] = origin.len();
                origin.push(Err(i));
                labels.push(format!("s{}", w.label(i)));
            }
        }
        let space = GradedSpace::with_labels(v.field(), &dims, labels);
        ConeLayout { space, v_to_cone, w_to_cone, origin }
    }

    pub fn from_v(&self, i: usize) -> usize {
        self.v_to_cone[i]
    }

    pub fn from_w(&self, i: usize) -> usize {
        self.w_to_cone[i]
    }

    pub fn origin(&self, cone_index: usize) -> std::result::Result<usize, usize> {
        self.origin[cone_index]
    }

    pub fn embed_v(&self, v: &SparseVec) -> SparseVec {
        v.remap(|i| Some(self.v_to_cone[i]))
    }

    pub fn embed_w(&self, w: &SparseVec) -> SparseVec {
        w.remap(|i| Some(self.w_to_cone[i]))
    }

    /// Splits a cone vector into its `(V, W)` parts.
    pub fn split(&self, x: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = SparseVec::new();
        let mut w = SparseVec::new();
        for (i, c) in x.iter() {
            match self.origin[i] {
                Ok(j) => v.set(j, c.clone()),
                Err(j) => w.set(j, c.clone()),
            }
        }
        (v, w)
    }
}

/// Mapping cone with differential `(v, w) ↦ (-dv, -f(v) + dw)`.
pub fn cone_complex(f: &ChainMap) -> Result<(CochainComplex, ConeLayout)> {
    let layout = ConeLayout::new(&f.source.space, &f.target.space);
    let n = layout.space.total_dim();
    let mut d = SparseMatrix::zeros(n, n, f.source.field());
    for (r, c, x) in f.source.differential.matrix.entries() {
        d.set(layout.from_v(r), layout.from_v(c), x.neg_ref());
    }
    for (r, c, x) in f.map.matrix.entries() {
        d.add_at(layout.from_w(r), layout.from_v(c), &x.neg_ref());
    }
    for (r, c, x) in f.target.differential.matrix.entries() {
        d.add_at(layout.from_w(r), layout.from_w(c), x);
    }
    let complex = CochainComplex::new(layout.space.clone(), d)?;
    if let Err(w) = check_complex(&complex) {
        return Err(Error::NotComplex(format!("cone differential squares to nonzero at degree {}", w.degree)));
    }
    Ok((complex, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn q() -> Field {
        Field::Rationals
    }

    fn line_complex(dims: &[(i32, usize)], blocks: &[(i32, &[&[i64]])]) -> CochainComplex {
        let space = GradedSpace::from_dims(q(), dims);
        let b: BTreeMap<i32, SparseMatrix> =
            blocks.iter().map(|(k, m)| (*k, SparseMatrix::from_ints(m, q()))).collect();
        CochainComplex::from_blocks(space, &b).unwrap()
    }

    #[test]
    fn check_complex_examples() {
        let z = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 2), (1, 1)]));
        assert!(check_complex(&z).is_ok());
        let c = line_complex(&[(0, 1), (1, 1), (2, 1)], &[(0, &[&[1]]), (1, &[&[1]])]);
        let w = check_complex(&c).unwrap_err();
        assert_eq!(w.degree, 0);
        assert_eq!(w.value, Scalar::one());
    }

    #[test]
    fn contraction_of_zero_differential_is_identity() {
        let c = CochainComplex::zero(GradedSpace::from_dims(q(), &[(-1, 1), (0, 2), (2, 1)]));
        let h = contraction(&c).unwrap();
        h.verify(&c).unwrap();
        assert_eq!(h.proj.matrix, SparseMatrix::identity(4, q()));
        assert_eq!(h.incl.matrix, SparseMatrix::identity(4, q()));
        assert!(h.homotopy.is_zero());
    }

    #[test]
    fn contraction_of_acyclic_pair() {
        let c = line_complex(&[(0, 1), (1, 1)], &[(0, &[&[3]])]);
        let h = contraction(&c).unwrap();
        h.verify(&c).unwrap();
        assert_eq!(h.target.total_dim(), 0);
        assert_eq!(h.homotopy.matrix.get(0, 1), Scalar::ratio(1, 3));
    }

    #[test]
    fn contraction_identities_on_random_complexes() {
        for seed in [5, 6, 7, 8, 9] {
            let c = samples::random_complex(seed, -1..=3, 4, q());
            let h = contraction(&c).unwrap();
            h.verify(&c).unwrap();
            let again = contraction(&c).unwrap();
            assert_eq!(again.homotopy, h.homotopy);
        }
    }

    #[test]
    fn empty_complex_is_legal() {
        let c = CochainComplex::zero(GradedSpace::empty(q()));
        assert!(check_complex(&c).is_ok());
        let h = contraction(&c).unwrap();
        h.verify(&c).unwrap();
        assert_eq!(h.target.total_dim(), 0);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = samples::random_complex(3, 0..=2, 3, q());
        let f = ChainMap::new(c.clone(), c.clone(), GradedMap::identity(&c.space)).unwrap();
        let (cone, _) = cone_complex(&f).unwrap();
        assert!(cone.cohomology_dims().unwrap().is_empty());
    }

    #[test]
    fn cone_of_zero_map_is_direct_sum() {
        let v = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 2), (1, 1)]));
        let w = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 1), (2, 3)]));
        let f = ChainMap::new(v.clone(), w.clone(), GradedMap::zero(v.space.clone(), w.space.clone(), 0)).unwrap();
        let (cone, _) = cone_complex(&f).unwrap();
        let dims = cone.cohomology_dims().unwrap();
        assert_eq!(dims, BTreeMap::from([(0, 2), (1, 2), (3, 3)]));
    }

    #[test]
    fn cone_of_line_into_plane() {
        let v = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 1)]));
        let w = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 2)]));
        let m = GradedMap::new(v.space.clone(), w.space.clone(), 0, SparseMatrix::from_ints(&[&[1], &[0]], q())).unwrap();
        let f = ChainMap::new(v, w, m).unwrap();
        let (cone, _) = cone_complex(&f).unwrap();
        // coker H^0(f) has dim 1 and sits in cone degree 1; ker H^0(f) = 0
        assert_eq!(cone.cohomology_dims().unwrap(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let v = line_complex(&[(0, 1), (1, 1)], &[(0, &[&[1]])]);
        let w = CochainComplex::zero(v.space.clone());
        let r = ChainMap::new(v.clone(), w, GradedMap::identity(&v.space));
        assert!(matches!(r, Err(Error::NotChainMap(_))));
    }
}
