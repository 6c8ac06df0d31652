//! Plücker coordinates and Grassmannian enumeration.
//!
//! Multi-indices are sorted strictly-increasing tuples from {1..N},
//! enumerated and ranked lexicographically. A Plücker vector lists the
//! maximal minors of a full-row-rank matrix in that order; projective
//! points are normalized by scaling the first nonzero coordinate to 1.
//! Decomposability is decided by checking every Grassmann–Plücker
//! quadratic relation, with no attempt at a minimal generating set.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{lex_subsets, ConstMatrix};
use crate::poly::binomial_integer;
use num::{BigUint, Integer, One, Zero};
use std::fmt;

/// A sorted strictly-increasing tuple from {1..N}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    indices: Vec<usize>,
    ambient: usize,
}

impl MultiIndex {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<MultiIndex> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        if indices.first().is_some_and(|&a| a == 0) || indices.last().is_some_and(|&a| a > ambient)
        {
            return Err(Error::Parse(format!(
                "indices {indices:?} outside 1..={ambient}"
            )));
        }
        Ok(MultiIndex { indices, ambient })
    }

    /// All size-k multi-indices in {1..N}, lexicographic order.
    pub fn all(size: usize, ambient: usize) -> Vec<MultiIndex> {
        lex_subsets(ambient, size)
            .into_iter()
            .map(|s| MultiIndex {
                indices: s.iter().map(|x| x + 1).collect(),
                ambient,
            })
            .collect()
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Zero-based column indices.
    pub fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|a| a - 1).collect()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.indices.binary_search(&x).is_ok()
    }

    /// Position in the lexicographic enumeration of same-size indices.
    pub fn lex_rank(&self) -> usize {
        let k = self.size();
        let mut rank = 0usize;
        let mut prev = 0usize;
        for (i, &a) in self.indices.iter().enumerate() {
            for v in prev + 1..a {
                rank += usize::try_from(binomial_integer(self.ambient - v, k - i - 1))
                    .expect("subset count fits usize");
            }
            prev = a;
        }
        rank
    }

    pub fn unrank(mut rank: usize, size: usize, ambient: usize) -> MultiIndex {
        let mut indices = Vec::with_capacity(size);
        let mut v = 1usize;
        for i in 0..size {
            loop {
                let below = usize::try_from(binomial_integer(ambient - v, size - i - 1))
                    .expect("subset count fits usize");
                if rank < below {
                    break;
                }
                rank -= below;
                v += 1;
            }
            indices.push(v);
            v += 1;
        }
        MultiIndex { indices, ambient }
    }

    pub fn complement(&self) -> MultiIndex {
        let indices: Vec<usize> = (1..=self.ambient).filter(|x| !self.contains(*x)).collect();
        MultiIndex {
            indices,
            ambient: self.ambient,
        }
    }

    /// The weight Σ (α_i − i).
    pub fn weight(&self) -> usize {
        self.indices
            .iter()
            .enumerate()
            .map(|(i, &a)| a - (i + 1))
            .sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Plücker coordinates of an m-plane in N-space, indexed by lex rank of
/// size-m multi-indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    field: Field,
    size: usize,
    ambient: usize,
    coords: Vec<Scalar>,
}

impl PluckerVector {
    pub fn from_coords(
        field: &Field,
        size: usize,
        ambient: usize,
        coords: Vec<Scalar>,
    ) -> Result<PluckerVector> {
        let expect =
            usize::try_from(binomial_integer(ambient, size)).expect("coordinate count fits usize");
        if coords.len() != expect {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for Grass({size}, {ambient}), expected {expect}",
                coords.len()
            )));
        }
        for c in &coords {
            if c.field() != field {
                return Err(Error::FieldMismatch(
                    field.spec_string(),
                    c.field().spec_string(),
                ));
            }
        }
        Ok(PluckerVector {
            field: field.clone(),
            size,
            ambient,
            coords,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, idx: &MultiIndex) -> &Scalar {
        &self.coords[idx.lex_rank()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> PluckerVector {
        PluckerVector {
            field: self.field.clone(),
            size: self.size,
            ambient: self.ambient,
            coords: self.coords.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Canonical projective representative: first nonzero coordinate
    /// scaled to 1.
    pub fn normalize_projective(&self) -> Result<PluckerVector> {
        let lead = self
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroVector)?;
        Ok(self.scale(&lead.inv().expect("lead is nonzero")))
    }
}

/// The Plücker coordinates (maximal minors in lex order) of a
/// full-row-rank matrix.
pub fn plucker_of_matrix(m: &ConstMatrix) -> Result<PluckerVector> {
    let coords = m.maximal_minors()?;
    if coords.iter().all(Scalar::is_zero) {
        return Err(Error::RankDeficient);
    }
    PluckerVector::from_coords(m.field(), m.rows(), m.cols(), coords)
}

/// True iff every Grassmann–Plücker relation vanishes: for each σ of size
/// m−1 and τ of size m+1, Σ_k ±v_{σ∪τ_k}·v_{τ∖τ_k} = 0, where the sign
/// alternates in k and accounts for sorting τ_k into σ; terms with
/// τ_k ∈ σ drop. Decides membership in the Grassmannian cone exactly,
/// over any field.
pub fn is_decomposable(v: &PluckerVector) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (m, n) = (v.size(), v.ambient());
    if m == 0 || m + 1 > n {
        return Ok(true);
    }
    let sigmas = MultiIndex::all(m - 1, n);
    let taus = MultiIndex::all(m + 1, n);
    for sigma in &sigmas {
        for tau in &taus {
            let mut acc = v.field().zero();
            for (k, &t) in tau.indices().iter().enumerate() {
                if sigma.contains(t) {
                    continue;
                }
                let mut joined = sigma.indices().to_vec();
                let pos = joined.partition_point(|&x| x < t);
                joined.insert(pos, t);
                let first = MultiIndex::new(joined, n).expect("sorted insert");
                let rest: Vec<usize> = tau.indices().iter().copied().filter(|&x| x != t).collect();
                let second = MultiIndex::new(rest, n).expect("subset stays sorted");
                // Sign: alternation in k, then sorting t past the tail of σ.
                let swaps = k + (sigma.size() - pos);
                let term = v.coord(&first).mul(v.coord(&second));
                acc = if swaps % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Inverts the Plücker embedding: returns the matrix whose columns at the
/// anchor index (the lex-least nonzero coordinate) form an identity block
/// and whose remaining entries are coordinate ratios. Round-trips through
/// plucker_of_matrix up to the anchor scale; failure of that check
/// reports NotDecomposable.
pub fn reconstruct_matrix(v: &PluckerVector) -> Result<ConstMatrix> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let field = v.field().clone();
    let (m, n) = (v.size(), v.ambient());
    let anchor_rank = v
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("vector is nonzero");
    let anchor = MultiIndex::unrank(anchor_rank, m, n);
    let a = anchor.zero_based();
    let scale = v.coords()[anchor_rank]
        .inv()
        .expect("anchor coordinate is nonzero");

    let mat = ConstMatrix::from_fn(&field, m, n, |r, j0| {
        let j = j0 + 1;
        if let Some(l) = a.iter().position(|&x| x == j0) {
            return if l == r { field.one() } else { field.zero() };
        }
        // Replace anchor entry r by column j and sort it into place.
        let mut idx: Vec<usize> = anchor
            .indices()
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != r)
            .map(|(_, &x)| x)
            .collect();
        let t = idx.partition_point(|&x| x < j);
        idx.insert(t, j);
        let mi = MultiIndex::new(idx, n).expect("sorted insert");
        let c = v.coord(&mi).mul(&scale);
        if (r + t) % 2 == 0 {
            c
        } else {
            c.neg()
        }
    });

    let back = plucker_of_matrix(&mat).expect("identity block gives full rank");
    let normalized = v.scale(&scale);
    if back != normalized {
        return Err(Error::NotDecomposable);
    }
    Ok(mat)
}

/// The Gaussian binomial coefficient: number of m-subspaces of F_q^n.
pub fn gaussian_binomial(n: usize, m: usize, q: u64) -> BigUint {
    if m > n {
        return BigUint::ZERO;
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=m {
        num *= qb.pow((n - m + i) as u32) - BigUint::one();
        den *= qb.pow(i as u32) - BigUint::one();
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero(), "Gaussian binomial divides exactly");
    quot
}

/// Streams every m-dimensional subspace of F_q^n exactly once, as its
/// canonical reduced-echelon matrix: pivot subsets advance in lex order
/// and the free entries (right of each pivot, outside pivot columns) run
/// through the field in enumeration order, row-major.
pub struct GrassmannianIter {
    field: Field,
    ambient: usize,
    elems: Vec<Scalar>,
    pivot_sets: Vec<Vec<usize>>,
    pivot_at: usize,
    free_cells: Vec<(usize, usize)>,
    odometer: Vec<usize>,
    exhausted: bool,
}

/// Iterator over Grass(m, F_q^n); the point count is the Gaussian
/// binomial.
pub fn enumerate_grassmannian(m: usize, n: usize, field: &Field) -> Result<GrassmannianIter> {
    if !field.is_finite() {
        return Err(Error::InfiniteField);
    }
    if m == 0 || m > n {
        return Err(Error::DimensionMismatch(format!(
            "Grass({m}, {n}) needs 1 <= m <= n"
        )));
    }
    let mut it = GrassmannianIter {
        field: field.clone(),
        ambient: n,
        elems: field.enumerate()?,
        pivot_sets: lex_subsets(n, m),
        pivot_at: 0,
        free_cells: Vec::new(),
        odometer: Vec::new(),
        exhausted: false,
    };
    it.load_pivot_set();
    Ok(it)
}

impl GrassmannianIter {
    fn load_pivot_set(&mut self) {
        let pivots = &self.pivot_sets[self.pivot_at];
        self.free_cells.clear();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..self.ambient {
                if !pivots.contains(&j) {
                    self.free_cells.push((i, j));
                }
            }
        }
        self.odometer = vec![0; self.free_cells.len()];
    }

    fn emit(&self) -> ConstMatrix {
        let pivots = &self.pivot_sets[self.pivot_at];
        let mut m = ConstMatrix::zeros(&self.field, pivots.len(), self.ambient);
        for (i, &p) in pivots.iter().enumerate() {
            m.set(i, p, self.field.one());
        }
        for (cell, &e) in self.free_cells.iter().zip(&self.odometer) {
            m.set(cell.0, cell.1, self.elems[e].clone());
        }
        m
    }

    fn advance(&mut self) {
        // Last free cell runs fastest.
        let mut i = self.free_cells.len();
        loop {
            if i == 0 {
                self.pivot_at += 1;
                if self.pivot_at == self.pivot_sets.len() {
                    self.exhausted = true;
                } else {
                    self.load_pivot_set();
                }
                return;
            }
            i -= 1;
            self.odometer[i] += 1;
            if self.odometer[i] < self.elems.len() {
                return;
            }
            self.odometer[i] = 0;
        }
    }
}

impl Iterator for GrassmannianIter {
    type Item = ConstMatrix;

    fn next(&mut self) -> Option<ConstMatrix> {
        if self.exhausted {
            return None;
        }
        let m = self.emit();
        self.advance();
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> Field {
        Field::finite(q).unwrap()
    }

    fn pv(field: &Field, size: usize, ambient: usize, coords: &[i64]) -> PluckerVector {
        PluckerVector::from_coords(
            field,
            size,
            ambient,
            coords.iter().map(|&c| field.embed_int(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn multi_index_lex_enumeration() {
        let all = MultiIndex::all(2, 4);
        let tuples: Vec<Vec<usize>> = all.iter().map(|m| m.indices().to_vec()).collect();
        assert_eq!(
            tuples,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        for (r, mi) in all.iter().enumerate() {
            assert_eq!(mi.lex_rank(), r);
            assert_eq!(&MultiIndex::unrank(r, 2, 4), mi);
        }
        for (r, mi) in MultiIndex::all(3, 6).iter().enumerate() {
            assert_eq!(mi.lex_rank(), r);
            assert_eq!(&MultiIndex::unrank(r, 3, 6), mi);
        }
    }

    #[test]
    fn complement_and_weight() {
        let mi = MultiIndex::new(vec![1, 3], 4).unwrap();
        assert_eq!(mi.complement().indices(), &[2, 4]);
        let w = MultiIndex::new(vec![2, 4], 4).unwrap();
        assert_eq!(w.weight(), 3);
        assert_eq!(MultiIndex::new(vec![1, 2], 4).unwrap().weight(), 0);
        assert!(MultiIndex::new(vec![2, 2], 4).is_err());
        assert!(MultiIndex::new(vec![0, 1], 4).is_err());
        assert!(MultiIndex::new(vec![5], 4).is_err());
    }

    #[test]
    fn plucker_of_identity_block() {
        let q = Field::rationals();
        let m = ConstMatrix::from_int_rows(&q, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let v = plucker_of_matrix(&m).unwrap();
        assert_eq!(v, pv(&q, 2, 4, &[1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn plucker_of_echelon_compensator() {
        let f5 = f(5);
        let m = ConstMatrix::from_int_rows(&f5, &[&[0, 1, 2, 0], &[0, 0, 0, 1]]);
        let v = plucker_of_matrix(&m).unwrap();
        assert_eq!(v, pv(&f5, 2, 4, &[0, 0, 0, 0, 1, 2]));
    }

    #[test]
    fn plucker_rank_deficient_rejected() {
        let f5 = f(5);
        let m = ConstMatrix::from_int_rows(&f5, &[&[1, 0, 1, 0], &[2, 0, 2, 0]]);
        assert_eq!(plucker_of_matrix(&m), Err(Error::RankDeficient));
    }

    #[test]
    fn plucker_scales_by_determinant_of_row_operations() {
        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut tried = 0;
        while tried < 20 {
            let m = ConstMatrix::random(&f7, 2, 4, &mut rng);
            let u = ConstMatrix::random(&f7, 2, 2, &mut rng);
            let (Ok(v), Ok(du)) = (plucker_of_matrix(&m), u.det()) else {
                continue;
            };
            if du.is_zero() {
                continue;
            }
            let w = plucker_of_matrix(&u.mul(&m)).unwrap();
            assert_eq!(w, v.scale(&du));
            tried += 1;
        }
    }

    #[test]
    fn decomposability_examples() {
        let f2 = f(2);
        let off = pv(&f2, 2, 4, &[1, 0, 0, 0, 0, 1]);
        assert!(!is_decomposable(&off).unwrap());
        let on = pv(&f2, 2, 4, &[1, 0, 0, 0, 0, 0]);
        assert!(is_decomposable(&on).unwrap());
        let zero = pv(&f2, 2, 4, &[0, 0, 0, 0, 0, 0]);
        assert_eq!(is_decomposable(&zero), Err(Error::ZeroVector));
    }

    #[test]
    fn decomposability_matches_single_quadric_for_2_4_over_f2() {
        // In Grass(2,4) the relations reduce to p12 p34 - p13 p24 + p14 p23.
        let f2 = f(2);
        let mut on_quadric = 0;
        for bits in 1..64u32 {
            let coords: Vec<i64> = (0..6).map(|i| ((bits >> i) & 1) as i64).collect();
            let v = pv(&f2, 2, 4, &coords);
            let q = v.coords()[0]
                .mul(&v.coords()[5])
                .sub(&v.coords()[1].mul(&v.coords()[4]))
                .add(&v.coords()[2].mul(&v.coords()[3]));
            assert_eq!(is_decomposable(&v).unwrap(), q.is_zero(), "bits {bits}");
            if q.is_zero() {
                on_quadric += 1;
            }
        }
        assert_eq!(on_quadric, 35);
    }

    #[test]
    fn plucker_outputs_are_decomposable() {
        let f3 = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut tried = 0;
        while tried < 30 {
            let m = ConstMatrix::random(&f3, 2, 5, &mut rng);
            if let Ok(v) = plucker_of_matrix(&m) {
                assert!(is_decomposable(&v).unwrap());
                tried += 1;
            }
        }
    }

    #[test]
    fn reconstruct_identity_block() {
        let q = Field::rationals();
        let v = pv(&q, 2, 4, &[1, 0, 0, 0, 0, 0]);
        let m = reconstruct_matrix(&v).unwrap();
        assert_eq!(
            m,
            ConstMatrix::from_int_rows(&q, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])
        );
    }

    #[test]
    fn reconstruct_round_trips_row_space() {
        let f7 = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut tried = 0;
        while tried < 100 {
            let m = ConstMatrix::random(&f7, 2, 4, &mut rng);
            let Ok(v) = plucker_of_matrix(&m) else {
                continue;
            };
            let r = reconstruct_matrix(&v).unwrap();
            // Same row space: stacking does not raise the rank.
            assert_eq!(m.vstack(&r).rank(), 2);
            let w = plucker_of_matrix(&r).unwrap();
            assert_eq!(
                w.normalize_projective().unwrap(),
                v.normalize_projective().unwrap()
            );
            tried += 1;
        }
    }

    #[test]
    fn reconstruct_rejects_off_quadric_point() {
        let f2 = f(2);
        let v = pv(&f2, 2, 4, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(reconstruct_matrix(&v), Err(Error::NotDecomposable));
        let zero = pv(&f2, 2, 4, &[0; 6]);
        assert_eq!(reconstruct_matrix(&zero), Err(Error::ZeroVector));
    }

    #[test]
    fn grassmannian_counts() {
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(2, 1, 3), BigUint::from(4u32));
        assert_eq!(gaussian_binomial(3, 3, 5), BigUint::one());
        assert_eq!(gaussian_binomial(5, 2, 3), BigUint::from(1210u32));
        assert_eq!(gaussian_binomial(2, 3, 2), BigUint::ZERO);

        let pts: Vec<ConstMatrix> = enumerate_grassmannian(2, 4, &f(2)).unwrap().collect();
        assert_eq!(pts.len(), 35);
        assert_eq!(enumerate_grassmannian(1, 2, &f(3)).unwrap().count(), 4);
        assert_eq!(enumerate_grassmannian(3, 3, &f(5)).unwrap().count(), 1);
        assert!(matches!(
            enumerate_grassmannian(2, 4, &Field::rationals()),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn grassmannian_points_are_canonical_and_distinct() {
        for (m, n, q) in [(2usize, 4usize, 2u64), (2, 4, 3), (1, 3, 3), (2, 5, 2)] {
            let field = f(q);
            let pts: Vec<ConstMatrix> = enumerate_grassmannian(m, n, &field).unwrap().collect();
            assert_eq!(
                BigUint::from(pts.len() as u64),
                gaussian_binomial(n, m, q),
                "count for Grass({m},{n}) over F_{q}"
            );
            let mut seen = std::collections::HashSet::new();
            for p in &pts {
                assert_eq!(p.rank(), m);
                let (r, _, _) = p.rref();
                assert_eq!(&r, p, "already in reduced echelon form");
                let v = plucker_of_matrix(p).unwrap();
                assert!(is_decomposable(&v).unwrap());
                assert!(seen.insert(format!("{p}")), "duplicate point");
            }
        }
    }
}
