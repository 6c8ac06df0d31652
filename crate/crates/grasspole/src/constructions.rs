//! Builders and exact checkers for structured systems: osculating normal
//! curves in classical and Hasse derivative form, monomial systems with
//! their degree matrices, Cauchy-based nondegenerate constructions, and
//! MDS / superregular tests.
//!
//! A monomial system is stored as a coefficient matrix plus a degree
//! matrix.  The degree law `d_{i,j} = r_i + c_j` is required only on the
//! support of the coefficient matrix (entries that actually appear); it
//! forces every maximal minor of the realized matrix to collapse to a
//! single term, with exponent determined by the row and column offsets.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grassmann::MultiIndex;
use crate::matrix::{lex_subsets, ConstMatrix, PolyMatrix};
use crate::poly::Poly;
use crate::systems::FactoredSystem;
use num::traits::ToPrimitive;
use num::BigUint;
use std::collections::VecDeque;

/// Grid of entry degrees `d_{i,j}` for a monomial system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMatrix {
    rows: usize,
    cols: usize,
    d: Vec<usize>,
}

impl DegreeMatrix {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<DegreeMatrix> {
        if grid.is_empty() || grid[0].is_empty() {
            return Err(Error::DimensionMismatch("empty degree matrix".into()));
        }
        let cols = grid[0].len();
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged degree matrix".into()));
        }
        Ok(DegreeMatrix {
            rows: grid.len(),
            cols,
            d: grid.into_iter().flatten().collect(),
        })
    }

    /// Staircase pattern `d_{i,j} = max(j - i, 0)`, the degree profile of
    /// the generic construction.
    pub fn staircase(rows: usize, cols: usize) -> DegreeMatrix {
        DegreeMatrix {
            rows,
            cols,
            d: (0..rows)
                .flat_map(|i| (0..cols).map(move |j| j.saturating_sub(i)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i < self.rows && j < self.cols);
        self.d[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: usize) {
        assert!(i < self.rows && j < self.cols);
        self.d[i * self.cols + j] = v;
    }
}

/// Row and column offsets with `d_{i,j} = r_i + c_j` on the support of
/// the coefficient matrix, found by propagation over the bipartite
/// support graph; disconnected rows and columns default to offset zero.
fn support_offsets(coeffs: &ConstMatrix, degrees: &DegreeMatrix) -> Result<(Vec<i64>, Vec<i64>)> {
    let rows = coeffs.rows();
    let cols = coeffs.cols();
    let mut r: Vec<Option<i64>> = vec![None; rows];
    let mut c: Vec<Option<i64>> = vec![None; cols];
    let mut queue: VecDeque<(bool, usize)> = VecDeque::new();
    for start in 0..rows {
        if r[start].is_some() {
            continue;
        }
        r[start] = Some(0);
        queue.push_back((true, start));
        while let Some((is_row, idx)) = queue.pop_front() {
            if is_row {
                let ri = r[idx].unwrap();
                for j in 0..cols {
                    if coeffs.get(idx, j).is_zero() {
                        continue;
                    }
                    let want = degrees.get(idx, j) as i64 - ri;
                    match c[j] {
                        None => {
                            c[j] = Some(want);
                            queue.push_back((false, j));
                        }
                        Some(have) if have != want => {
                            return Err(Error::DegreeLawViolation(format!(
                                "entry ({}, {}) needs column offset {want}, got {have}",
                                idx + 1,
                                j + 1
                            )));
                        }
                        Some(_) => {}
                    }
                }
            } else {
                let cj = c[idx].unwrap();
                for i in 0..rows {
                    if coeffs.get(i, idx).is_zero() {
                        continue;
                    }
                    let want = degrees.get(i, idx) as i64 - cj;
                    match r[i] {
                        None => {
                            r[i] = Some(want);
                            queue.push_back((true, i));
                        }
                        Some(have) if have != want => {
                            return Err(Error::DegreeLawViolation(format!(
                                "entry ({}, {}) needs row offset {want}, got {have}",
                                i + 1,
                                idx + 1
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok((
        r.into_iter().map(|v| v.unwrap_or(0)).collect(),
        c.into_iter().map(|v| v.unwrap_or(0)).collect(),
    ))
}

/// Monomial system: coefficient matrix, degree matrix, and the realized
/// polynomial matrix with entries `a_{i,j} s^{d_{i,j}}`.  Every maximal
/// minor of the realized matrix is a single term (or zero), cached as a
/// (coefficient, exponent) pair in lexicographic column-subset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSystem {
    coeffs: ConstMatrix,
    degrees: DegreeMatrix,
    realized: PolyMatrix,
    minor_monomials: Vec<(Scalar, usize)>,
}

impl MonomialSystem {
    pub fn field(&self) -> &Field {
        self.coeffs.field()
    }

    pub fn coeffs(&self) -> &ConstMatrix {
        &self.coeffs
    }

    pub fn degrees(&self) -> &DegreeMatrix {
        &self.degrees
    }

    pub fn realized(&self) -> &PolyMatrix {
        &self.realized
    }

    /// Maximal minors as (coefficient, exponent) pairs in lexicographic
    /// column-subset order; zero minors are stored as (0, 0).
    pub fn minor_monomials(&self) -> &[(Scalar, usize)] {
        &self.minor_monomials
    }

    /// Split the realized matrix `[N | D]` into a factored system.
    pub fn to_factored(&self) -> Result<FactoredSystem> {
        let m = self.realized.cols() - self.realized.rows();
        FactoredSystem::from_full(&self.realized, m)
    }
}

/// Build a monomial system from a coefficient and a degree matrix,
/// checking the support-restricted degree law and verifying that every
/// maximal minor of the realized matrix is a single term.
pub fn monomial_matrix(coeffs: &ConstMatrix, degrees: &DegreeMatrix) -> Result<MonomialSystem> {
    if coeffs.rows() != degrees.rows() || coeffs.cols() != degrees.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} coefficients against {}x{} degrees",
            coeffs.rows(),
            coeffs.cols(),
            degrees.rows(),
            degrees.cols()
        )));
    }
    if coeffs.rows() > coeffs.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system matrix must have at least as many columns as rows",
            coeffs.rows(),
            coeffs.cols()
        )));
    }
    let (r_off, c_off) = support_offsets(coeffs, degrees)?;
    let field = coeffs.field().clone();
    let realized = PolyMatrix::from_fn(&field, coeffs.rows(), coeffs.cols(), |i, j| {
        Poly::monomial(coeffs.get(i, j).clone(), degrees.get(i, j))
    });

    let realized_minors = realized.maximal_minors()?;
    let row_sum: i64 = r_off.iter().sum();
    let mut minor_monomials = Vec::with_capacity(realized_minors.len());
    let all_rows: Vec<usize> = (0..coeffs.rows()).collect();
    for (subset, minor) in lex_subsets(coeffs.cols(), coeffs.rows())
        .iter()
        .zip(&realized_minors)
    {
        let m_alpha = coeffs.submatrix(&all_rows, subset).det()?;
        if m_alpha.is_zero() {
            if !minor.is_zero() {
                return Err(Error::NotMonomial(format!(
                    "minor at columns {subset:?} should vanish but is {minor}"
                )));
            }
            minor_monomials.push((m_alpha, 0));
            continue;
        }
        let exponent = row_sum + subset.iter().map(|&j| c_off[j]).sum::<i64>();
        let expected = usize::try_from(exponent)
            .map(|e| Poly::monomial(m_alpha.clone(), e))
            .map_err(|_| Error::NotMonomial(format!("negative exponent at {subset:?}")))?;
        if minor != &expected {
            return Err(Error::NotMonomial(format!(
                "minor at columns {subset:?} is {minor}, expected {expected}"
            )));
        }
        minor_monomials.push((m_alpha, exponent as usize));
    }
    Ok(MonomialSystem {
        coeffs: coeffs.clone(),
        degrees: degrees.clone(),
        realized,
        minor_monomials,
    })
}

/// Osculating normal curve in classical derivative form: the `p x (m+p)`
/// matrix with entry `(i, j)` equal to the `i`-th derivative of `s^j`.
/// In characteristic `q < p` some rows collapse to zero.
pub fn osculating_curve_classical(p: usize, m: usize, field: &Field) -> PolyMatrix {
    PolyMatrix::from_fn(field, p, m + p, |i, j| {
        Poly::monomial(field.one(), j).classical_derivative(i)
    })
}

/// Osculating normal curve in Hasse derivative form: entry `(i, j)` is
/// `C(j, i) s^{j-i}`.  Rows never vanish identically, whatever the
/// characteristic; for `p <= 2` it coincides with the classical form.
pub fn osculating_curve_hasse(p: usize, m: usize, field: &Field) -> PolyMatrix {
    PolyMatrix::from_fn(field, p, m + p, |i, j| {
        Poly::monomial(field.one(), j).hasse_derivative(i)
    })
}

/// Lexicographically least column subset whose maximal minor is the zero
/// polynomial, if any.  A matrix with more rows than columns has no
/// maximal minors and reports `None`.
pub fn find_zero_maximal_minor(mat: &PolyMatrix) -> Option<MultiIndex> {
    if mat.rows() > mat.cols() {
        return None;
    }
    let all_rows: Vec<usize> = (0..mat.rows()).collect();
    for alpha in MultiIndex::all(mat.rows(), mat.cols()) {
        let det = mat
            .submatrix(&all_rows, &alpha.zero_based())
            .det()
            .expect("square submatrix");
        if det.is_zero() {
            return Some(alpha);
        }
    }
    None
}

/// A `p x N` matrix with `p <= N` is MDS exactly when all its maximal
/// minors are nonzero.
pub fn mds_check(mat: &ConstMatrix) -> Result<bool> {
    if mat.rows() > mat.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix cannot be MDS-checked",
            mat.rows(),
            mat.cols()
        )));
    }
    Ok(mat.maximal_minors()?.iter().all(|d| !d.is_zero()))
}

/// A matrix is superregular when the minors of all sizes, not only the
/// maximal ones, are nonzero.  `[I | R]` is MDS exactly when `R` is
/// superregular.
pub fn superregular_check(r: &ConstMatrix) -> bool {
    for k in 1..=r.rows().min(r.cols()) {
        for row_set in lex_subsets(r.rows(), k) {
            for col_set in lex_subsets(r.cols(), k) {
                let det = r
                    .submatrix(&row_set, &col_set)
                    .det()
                    .expect("square submatrix");
                if det.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// First `count` field elements in a fixed deterministic order (digit
/// expansions over the prime subfield), without materializing the whole
/// field.
fn field_prefix(field: &Field, count: usize) -> Result<Vec<Scalar>> {
    let order = field.order().ok_or(Error::InfiniteField)?;
    let ch = field.characteristic();
    let k = field.extension_degree();
    let mut out = Vec::new();
    for e in 0..count as u64 {
        if BigUint::from(e) >= order {
            break;
        }
        let mut digits = vec![0u64; k];
        let mut v = e;
        for d in digits.iter_mut() {
            *d = v % ch;
            v /= ch;
        }
        out.push(field.from_coeffs(&digits)?);
    }
    Ok(out)
}

/// Cauchy parameters: `x_1..x_p` and `y_1..y_m`, each family distinct,
/// with every sum `x_i + y_j` nonzero.  The integer shifts `x_i = i-1`,
/// `y_j = p+j-1` are preferred; otherwise a deterministic greedy search
/// runs over the field in enumeration order.
pub(crate) fn cauchy_parameters(
    p: usize,
    m: usize,
    field: &Field,
) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let valid = |xs: &[Scalar], ys: &[Scalar]| -> bool {
        let distinct = |v: &[Scalar]| {
            v.iter()
                .enumerate()
                .all(|(i, a)| v[..i].iter().all(|b| b != a))
        };
        distinct(xs) && distinct(ys) && xs.iter().all(|x| ys.iter().all(|y| !x.add(y).is_zero()))
    };

    let xs: Vec<Scalar> = (0..p).map(|i| field.embed_int(i as i64)).collect();
    let ys: Vec<Scalar> = (0..m).map(|j| field.embed_int((p + j) as i64)).collect();
    if valid(&xs, &ys) {
        return Ok((xs, ys));
    }

    let needed = (p + m) as u64;
    let stream = field_prefix(field, p + m)?;
    if stream.len() < p + m {
        let order = field.order().and_then(|o| o.to_u64()).unwrap_or(u64::MAX);
        return Err(Error::FieldTooSmall { order, needed });
    }
    let xs = stream[..p].to_vec();
    let mut ys = Vec::with_capacity(m);
    for cand in &stream {
        if ys.len() == m {
            break;
        }
        if xs.iter().all(|x| !x.add(cand).is_zero()) {
            ys.push(cand.clone());
        }
    }
    if ys.len() < m || !valid(&xs, &ys) {
        let order = field.order().and_then(|o| o.to_u64()).unwrap_or(u64::MAX);
        return Err(Error::FieldTooSmall { order, needed });
    }
    Ok((xs, ys))
}

/// Generic nondegenerate monomial system of degree `n` (default `mp`):
/// coefficient matrix `[I_p | R]` with `R` a Cauchy matrix
/// `R_{i,j} = 1/(x_i + y_j)`, hence superregular, and staircase degrees
/// `d_{i,j} = max(j - i, 0)`; for `n > mp` the last column degrees are
/// raised to `n - mp + m + p - i`.  Needs `q >= p + m` over a finite
/// field.
pub fn cauchy_monomial_system(
    p: usize,
    m: usize,
    n: Option<usize>,
    field: &Field,
) -> Result<MonomialSystem> {
    if p == 0 || m == 0 {
        return Err(Error::DimensionMismatch(
            "system needs at least one input and one output".into(),
        ));
    }
    let needed = (p + m) as u64;
    if let Some(order) = field.order() {
        if order < BigUint::from(needed) {
            return Err(Error::FieldTooSmall {
                order: order.to_u64().expect("small order fits u64"),
                needed,
            });
        }
    }
    let total = n.unwrap_or(m * p);
    if total < m * p {
        return Err(Error::DegreeTooSmall {
            given: total,
            minimum: m * p,
        });
    }

    let (xs, ys) = cauchy_parameters(p, m, field)?;
    let r = ConstMatrix::from_fn(field, p, m, |i, j| {
        xs[i]
            .add(&ys[j])
            .inv()
            .expect("Cauchy parameter sums are nonzero")
    });
    if !superregular_check(&r) {
        return Err(Error::Internal(
            "Cauchy matrix failed the superregularity check".into(),
        ));
    }
    let coeffs = ConstMatrix::identity(field, p).hstack(&r);

    let mut degrees = DegreeMatrix::staircase(p, m + p);
    if total > m * p {
        for i in 0..p {
            degrees.set(i, m + p - 1, total - m * p + m + p - 1 - i);
        }
    }
    let system = monomial_matrix(&coeffs, &degrees)?;
    debug_assert_eq!(
        system
            .minor_monomials()
            .iter()
            .map(|(_, e)| *e)
            .max()
            .unwrap_or(0),
        total
    );
    Ok(system)
}
