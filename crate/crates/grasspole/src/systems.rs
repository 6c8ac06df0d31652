//! Linear systems in state-space and polynomial matrix-fraction form,
//! the exact translation between the two, and the coefficient matrix
//! that turns pole placement by static output feedback into linear
//! algebra on Plucker coordinates.
//!
//! Conventions fixed by this module:
//!
//! * A [`StateSpace`] holds `(A, B, C)` with `A` of size `n x n`, `B` of
//!   size `n x m`, and `C` of size `p x n`, all over one field.
//! * A [`FactoredSystem`] holds a left matrix fraction `D(s)^{-1} N(s)`
//!   with `D` square `p x p`, `det D != 0`, and `N` of size `p x m`.
//!   The full-size matrix is `M(s) = [N(s) | D(s)]` of size
//!   `p x (m + p)`, and the system degree is the maximal degree over
//!   the `p x p` minors of `M`.
//! * A [`ProjectiveCompensator`] is a full-rank `m x (m + p)` matrix
//!   `[K1 | K2]`; the plain feedback law `u = K y` corresponds to
//!   `[I | K]`.  The closed-loop characteristic polynomial is the
//!   determinant of the stack `[[K1, K2], [N, D]]`.
//! * [`left_coprime_factorization`] scales its output so that
//!   `det D = det(sI - A)` holds exactly, which makes the three
//!   characteristic polynomial computations in this module agree
//!   coefficient for coefficient.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grassmann::{enumerate_grassmannian, is_decomposable};
use crate::grassmann::{plucker_of_matrix, MultiIndex, PluckerVector};
use crate::matrix::{left_kernel_min_basis, si_minus_a, stacked_det, ConstMatrix, PolyMatrix};
use crate::poly::{Degree, Poly};
use rayon::prelude::*;

/// State-space realization `(A, B, C)` of a linear system with `n`
/// states, `m` inputs and `p` outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    a: ConstMatrix,
    b: ConstMatrix,
    c: ConstMatrix,
}

impl StateSpace {
    pub fn new(a: ConstMatrix, b: ConstMatrix, c: ConstMatrix) -> Result<StateSpace> {
        if a.rows() != a.cols() {
            return Err(Error::NonSquare(a.rows(), a.cols()));
        }
        let n = a.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "B has {} rows, expected {n}",
                b.rows()
            )));
        }
        if c.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "C has {} columns, expected {n}",
                c.cols()
            )));
        }
        for other in [b.field(), c.field()] {
            if other != a.field() {
                return Err(Error::FieldMismatch(
                    a.field().spec_string(),
                    other.spec_string(),
                ));
            }
        }
        Ok(StateSpace { a, b, c })
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn a(&self) -> &ConstMatrix {
        &self.a
    }

    pub fn b(&self) -> &ConstMatrix {
        &self.b
    }

    pub fn c(&self) -> &ConstMatrix {
        &self.c
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Number of inputs.
    pub fn m(&self) -> usize {
        self.b.cols()
    }

    /// Number of outputs.
    pub fn p(&self) -> usize {
        self.c.rows()
    }

    /// Open-loop characteristic polynomial `det(sI - A)`, monic of
    /// degree `n`.
    pub fn charpoly(&self) -> Poly {
        si_minus_a(&self.a)
            .and_then(|m| m.det())
            .expect("A is square by construction")
    }
}

/// Static output feedback law `u = K y` with `K` of size `m x p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compensator {
    k: ConstMatrix,
}

impl Compensator {
    pub fn new(k: ConstMatrix) -> Compensator {
        Compensator { k }
    }

    pub fn matrix(&self) -> &ConstMatrix {
        &self.k
    }

    pub fn m(&self) -> usize {
        self.k.rows()
    }

    pub fn p(&self) -> usize {
        self.k.cols()
    }
}

/// Compensator in homogeneous form: a full-rank `m x (m + p)` matrix
/// `[K1 | K2]` determined up to left multiplication by an invertible
/// matrix.  `[I | K]` recovers the plain feedback law `u = K y`;
/// compensators with singular `K1` have no such affine form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveCompensator {
    mat: ConstMatrix,
}

impl ProjectiveCompensator {
    pub fn new(mat: ConstMatrix) -> Result<ProjectiveCompensator> {
        if mat.rows() == 0 || mat.cols() <= mat.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} compensator must be m x (m + p) with m, p >= 1",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.rank() < mat.rows() {
            return Err(Error::RankDeficientCompensator);
        }
        Ok(ProjectiveCompensator { mat })
    }

    /// Homogeneous form `[I | K]` of a plain feedback law; always full
    /// rank thanks to the identity block.
    pub fn from_feedback(k: &Compensator) -> ProjectiveCompensator {
        let identity = ConstMatrix::identity(k.matrix().field(), k.m());
        ProjectiveCompensator {
            mat: identity.hstack(k.matrix()),
        }
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }

    pub fn matrix(&self) -> &ConstMatrix {
        &self.mat
    }

    pub fn m(&self) -> usize {
        self.mat.rows()
    }

    pub fn p(&self) -> usize {
        self.mat.cols() - self.mat.rows()
    }

    /// Left block `K1`, square of size `m`.
    pub fn k1(&self) -> ConstMatrix {
        let rows: Vec<usize> = (0..self.m()).collect();
        let cols: Vec<usize> = (0..self.m()).collect();
        self.mat.submatrix(&rows, &cols)
    }

    /// Right block `K2` of size `m x p`.
    pub fn k2(&self) -> ConstMatrix {
        let rows: Vec<usize> = (0..self.m()).collect();
        let cols: Vec<usize> = (self.m()..self.m() + self.p()).collect();
        self.mat.submatrix(&rows, &cols)
    }
}

/// Left matrix fraction `D(s)^{-1} N(s)` with the maximal minors of
/// `[N | D]` cached in lexicographic column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredSystem {
    n_mat: PolyMatrix,
    d_mat: PolyMatrix,
    big: PolyMatrix,
    minors: Vec<Poly>,
    degree: usize,
}

impl FactoredSystem {
    pub fn new(n_mat: PolyMatrix, d_mat: PolyMatrix) -> Result<FactoredSystem> {
        if d_mat.rows() != d_mat.cols() {
            return Err(Error::NonSquare(d_mat.rows(), d_mat.cols()));
        }
        let p = d_mat.rows();
        if n_mat.rows() != p {
            return Err(Error::DimensionMismatch(format!(
                "N has {} rows, D has {p}",
                n_mat.rows()
            )));
        }
        if n_mat.field() != d_mat.field() {
            return Err(Error::FieldMismatch(
                n_mat.field().spec_string(),
                d_mat.field().spec_string(),
            ));
        }
        if d_mat.det()?.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        let big = n_mat.hstack(&d_mat);
        let minors = big.maximal_minors()?;
        let degree = minors
            .iter()
            .filter_map(|g| g.degree().finite())
            .max()
            .expect("det D is a nonzero minor");
        Ok(FactoredSystem {
            n_mat,
            d_mat,
            big,
            minors,
            degree,
        })
    }

    /// Split a full-size matrix `[N | D]` with `m` numerator columns.
    pub fn from_full(mat: &PolyMatrix, m: usize) -> Result<FactoredSystem> {
        if mat.cols() != m + mat.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix cannot split into {m} numerator and {} denominator columns",
                mat.rows(),
                mat.cols(),
                mat.rows()
            )));
        }
        let rows: Vec<usize> = (0..mat.rows()).collect();
        let n_cols: Vec<usize> = (0..m).collect();
        let d_cols: Vec<usize> = (m..mat.cols()).collect();
        FactoredSystem::new(mat.submatrix(&rows, &n_cols), mat.submatrix(&rows, &d_cols))
    }

    pub fn field(&self) -> &Field {
        self.d_mat.field()
    }

    pub fn m(&self) -> usize {
        self.n_mat.cols()
    }

    pub fn p(&self) -> usize {
        self.d_mat.rows()
    }

    pub fn numerator(&self) -> &PolyMatrix {
        &self.n_mat
    }

    pub fn denominator(&self) -> &PolyMatrix {
        &self.d_mat
    }

    /// Full-size matrix `[N | D]` of size `p x (m + p)`.
    pub fn big_m(&self) -> &PolyMatrix {
        &self.big
    }

    /// Maximal minors of `[N | D]` in lexicographic column-subset order.
    pub fn minors(&self) -> &[Poly] {
        &self.minors
    }

    /// System degree: the maximal degree over the cached minors.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The fraction is left coprime exactly when the minors have no
    /// common root in any extension, i.e. their gcd is constant.
    pub fn is_coprime(&self) -> bool {
        let mut g = Poly::zero(self.field());
        for minor in &self.minors {
            g = g.gcd(minor);
            if g.degree() == Degree::Of(0) {
                return true;
            }
        }
        g.degree() == Degree::Of(0)
    }
}

/// Closed-loop characteristic polynomial `det(sI - A - BKC)`, monic of
/// degree `n`.
pub fn closed_loop_charpoly(ss: &StateSpace, k: &Compensator) -> Result<Poly> {
    if k.m() != ss.m() || k.p() != ss.p() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} feedback for a system with {} inputs and {} outputs",
            k.m(),
            k.p(),
            ss.m(),
            ss.p()
        )));
    }
    if k.matrix().field() != ss.field() {
        return Err(Error::FieldMismatch(
            ss.field().spec_string(),
            k.matrix().field().spec_string(),
        ));
    }
    let closed = ss.a.add(&ss.b.mul(k.matrix()).mul(&ss.c));
    si_minus_a(&closed)?.det()
}

/// Characteristic polynomial as the determinant of the square stack
/// `[[K1, K2], [N, D]]`.
pub fn charpoly_via_factors(fs: &FactoredSystem, pk: &ProjectiveCompensator) -> Result<Poly> {
    if pk.m() != fs.m() || pk.p() != fs.p() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} compensator for a {}-input {}-output fraction",
            pk.m(),
            pk.matrix().cols(),
            fs.m(),
            fs.p()
        )));
    }
    stacked_det(pk.matrix(), fs.big_m())
}

/// Characteristic polynomial as the determinant of the block matrix
/// `[[sI - A, B], [K2 C, K1]]`, bypassing the matrix fraction.
pub fn charpoly_via_state_block(ss: &StateSpace, pk: &ProjectiveCompensator) -> Result<Poly> {
    if pk.m() != ss.m() || pk.p() != ss.p() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} compensator for a system with {} inputs and {} outputs",
            pk.m(),
            pk.matrix().cols(),
            ss.m(),
            ss.p()
        )));
    }
    if pk.field() != ss.field() {
        return Err(Error::FieldMismatch(
            ss.field().spec_string(),
            pk.field().spec_string(),
        ));
    }
    let top = si_minus_a(&ss.a)?.hstack(&ss.b.to_poly());
    let bottom = pk.k2().mul(&ss.c).to_poly().hstack(&pk.k1().to_poly());
    top.vstack(&bottom).det()
}

/// Rank of the observability matrix `[C; CA; ...; CA^{n-1}]`; the pair
/// `(C, A)` is observable exactly when this equals `n`.
pub fn observability_rank(ss: &StateSpace) -> usize {
    let mut stack = ss.c.clone();
    let mut cur = ss.c.clone();
    for _ in 1..ss.n() {
        cur = cur.mul(&ss.a);
        stack = stack.vstack(&cur);
    }
    stack.rank()
}

/// Rank of the reachability matrix `[B, AB, ..., A^{n-1}B]`; the pair
/// `(A, B)` is reachable exactly when this equals `n`.
pub fn reachability_rank(ss: &StateSpace) -> usize {
    let mut stack = ss.b.clone();
    let mut cur = ss.b.clone();
    for _ in 1..ss.n() {
        cur = ss.a.mul(&cur);
        stack = stack.hstack(&cur);
    }
    stack.rank()
}

/// Left matrix fraction of the transfer function `C (sI - A)^{-1} B`,
/// scaled so that `det D = det(sI - A)` exactly.
///
/// The rows `[X | D]` of the minimal left kernel basis of the stack
/// `[[sI - A], [C]]` satisfy `X (sI - A) = -D C`, so `N := -X B` gives
/// `N = D C (sI - A)^{-1} B`.  The identity
/// `N det(sI - A) = D C adj(sI - A) B` is checked before returning.
/// The fraction is coprime exactly when `(A, B)` is also reachable.
pub fn left_coprime_factorization(ss: &StateSpace) -> Result<FactoredSystem> {
    let n = ss.n();
    let p = ss.p();
    if observability_rank(ss) < n {
        return Err(Error::NotObservable);
    }
    let t = si_minus_a(&ss.a)?.vstack(&ss.c.to_poly());
    let mut basis = left_kernel_min_basis(&t)?;
    let phi = ss.charpoly();

    // det D = c * det(sI - A) for a nonzero constant c; rescaling one
    // basis row by 1/c normalizes the determinant without disturbing
    // the kernel property.
    let d_cols: Vec<usize> = (n..n + p).collect();
    let all_rows: Vec<usize> = (0..p).collect();
    let det_d = basis.submatrix(&all_rows, &d_cols).det()?;
    if det_d.degree() != Degree::Of(n) {
        return Err(Error::NotObservable);
    }
    let ratio = det_d.div_exact(&phi)?;
    if ratio.degree() != Degree::Of(0) {
        return Err(Error::Internal(
            "kernel basis determinant is not a constant multiple of det(sI - A)".into(),
        ));
    }
    let scale = ratio.coeff(0).inv()?;
    for j in 0..n + p {
        let scaled = basis.get(0, j).scale(&scale);
        basis.set(0, j, scaled);
    }

    let x_cols: Vec<usize> = (0..n).collect();
    let x = basis.submatrix(&all_rows, &x_cols);
    let d_mat = basis.submatrix(&all_rows, &d_cols);
    let minus_one = ss.field().one().neg();
    let n_mat = x.mul(&ss.b.to_poly()).scale(&minus_one);

    let lhs = n_mat.scale_poly(&phi);
    let rhs = d_mat
        .mul(&ss.c.to_poly())
        .mul(&si_minus_a(&ss.a)?.adjugate()?)
        .mul(&ss.b.to_poly());
    if !lhs.sub(&rhs).is_zero() {
        return Err(Error::Internal(
            "matrix fraction failed the adjugate identity".into(),
        ));
    }
    FactoredSystem::new(n_mat, d_mat)
}

/// Sign attached to the top-block column set `beta` in the Laplace
/// expansion of `det [[K], [M]]` along the first `m` rows:
/// `(-1)^(m(m+1)/2 + sum(beta))` with 1-based column indices.
fn laplace_sign(field: &Field, beta: &MultiIndex) -> Scalar {
    let m = beta.size();
    let exponent = m * (m + 1) / 2 + beta.indices().iter().sum::<usize>();
    if exponent % 2 == 0 {
        field.one()
    } else {
        field.one().neg()
    }
}

/// Matrix of minor coefficients: column at the lexicographic rank of a
/// `p`-subset `alpha` of the columns of `[N | D]` holds the
/// coefficients (degrees `0..=n`) of the minor at `alpha`.
///
/// Together with [`CoefficientMatrix::signed_plucker`] this linearizes
/// pole placement: the characteristic polynomial of any compensator is
/// the matrix applied to its signed Plucker vector.
#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    mat: ConstMatrix,
    m: usize,
    p: usize,
    degree: usize,
}

/// Coefficient matrix of a factored system, of size
/// `(n + 1) x C(m + p, p)` where `n` is the system degree.
pub fn coefficient_matrix(fs: &FactoredSystem) -> CoefficientMatrix {
    let n = fs.degree();
    let minors = fs.minors();
    let mat = ConstMatrix::from_fn(fs.field(), n + 1, minors.len(), |i, j| minors[j].coeff(i));
    CoefficientMatrix {
        mat,
        m: fs.m(),
        p: fs.p(),
        degree: n,
    }
}

impl CoefficientMatrix {
    pub fn field(&self) -> &Field {
        self.mat.field()
    }

    pub fn matrix(&self) -> &ConstMatrix {
        &self.mat
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// System degree `n`; the matrix has `n + 1` rows.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Plucker vector of the compensator relabeled by complementary
    /// column sets and signed to match the Laplace expansion: the
    /// coordinate at a `p`-subset `alpha` is
    /// `sign(alpha^c) * minor_{alpha^c}(K)`.
    pub fn signed_plucker(&self, pk: &ProjectiveCompensator) -> Result<PluckerVector> {
        if pk.m() != self.m || pk.p() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} compensator against an {}-input {}-output coefficient matrix",
                pk.m(),
                pk.matrix().cols(),
                self.m,
                self.p
            )));
        }
        let raw = plucker_of_matrix(pk.matrix())?;
        let field = self.field().clone();
        let mut coords = Vec::with_capacity(self.mat.cols());
        for alpha in MultiIndex::all(self.p, self.m + self.p) {
            let beta = alpha.complement();
            let sign = laplace_sign(&field, &beta);
            coords.push(sign.mul(&raw.coords()[beta.lex_rank()]));
        }
        PluckerVector::from_coords(&field, self.p, self.m + self.p, coords)
    }

    /// Characteristic polynomial of the compensator, computed as the
    /// coefficient matrix applied to the signed Plucker vector.  Agrees
    /// with [`charpoly_via_factors`] coefficient for coefficient.
    pub fn charpoly(&self, pk: &ProjectiveCompensator) -> Result<Poly> {
        let sp = self.signed_plucker(pk)?;
        let field = self.field().clone();
        let coeffs = (0..=self.degree)
            .map(|i| {
                let mut acc = field.zero();
                for (j, c) in sp.coords().iter().enumerate() {
                    acc = acc.add(&self.mat.get(i, j).mul(c));
                }
                acc
            })
            .collect();
        Ok(Poly::from_coeffs(&field, coeffs))
    }

    /// Dual form acting on raw compensator Plucker vectors: the column
    /// at the lexicographic rank of an `m`-subset `beta` is
    /// `sign(beta)` times the coefficient column of the minor at
    /// `beta^c`.  Applying it to `plucker_of_matrix([K1 | K2])` gives
    /// the characteristic polynomial coefficients directly, so its
    /// kernel describes the compensators annihilated by the system.
    pub fn compensator_matrix(&self) -> ConstMatrix {
        let field = self.field().clone();
        let betas = MultiIndex::all(self.m, self.m + self.p);
        let signs: Vec<Scalar> = betas.iter().map(|b| laplace_sign(&field, b)).collect();
        let comp_rank: Vec<usize> = betas.iter().map(|b| b.complement().lex_rank()).collect();
        ConstMatrix::from_fn(&field, self.degree + 1, betas.len(), |i, j| {
            signs[j].mul(self.mat.get(i, comp_rank[j]))
        })
    }
}

/// Verdict of the exact degeneracy test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// No compensator over any field extension has an identically zero
    /// characteristic polynomial.
    Nondegenerate,
    /// Some compensator, possibly over an extension, is annihilated.
    Degenerate,
    /// The shape is outside the decidable cases `min(m, p) = 1` and
    /// `m = p = 2`.
    Unsupported,
}

/// Exact degeneracy test over the algebraic closure, decided from the
/// kernel of the dual coefficient matrix.
///
/// For `min(m, p) = 1` every nonzero Plucker vector is decomposable,
/// so the system is degenerate exactly when the kernel is nonzero.
/// For `m = p = 2` a one-dimensional kernel is degenerate exactly when
/// its generator lies on the Plucker quadric, and a kernel of dimension
/// two or more always meets the quadric over the closure.  Other shapes
/// report [`Degeneracy::Unsupported`].
pub fn is_degenerate_exact(fs: &FactoredSystem) -> Result<Degeneracy> {
    let (m, p) = (fs.m(), fs.p());
    let small = m.min(p) == 1;
    let square2 = m == 2 && p == 2;
    if !small && !square2 {
        return Ok(Degeneracy::Unsupported);
    }
    let kernel = coefficient_matrix(fs)
        .compensator_matrix()
        .right_nullspace();
    match kernel.len() {
        0 => Ok(Degeneracy::Nondegenerate),
        1 => {
            let v = PluckerVector::from_coords(fs.field(), m, m + p, kernel[0].clone())?;
            if is_decomposable(&v)? {
                Ok(Degeneracy::Degenerate)
            } else {
                Ok(Degeneracy::Nondegenerate)
            }
        }
        // A pencil of binary quadratic forms always has a zero over the
        // closure, and for min(m, p) = 1 every kernel point counts.
        _ => Ok(Degeneracy::Degenerate),
    }
}

/// Search for a compensator over the base field with identically zero
/// characteristic polynomial, scanning the rational points of the
/// compensator Grassmannian in enumeration order.  Returns the first
/// witness, or `None` when every rational compensator keeps a nonzero
/// characteristic polynomial.
pub fn is_degenerate_rational(fs: &FactoredSystem) -> Result<Option<ProjectiveCompensator>> {
    if fs.field().is_rationals() {
        return Err(Error::InfiniteField);
    }
    let (m, p) = (fs.m(), fs.p());
    let cm = coefficient_matrix(fs);
    let cg = cm.compensator_matrix();
    // Full column rank means no Plucker vector is annihilated at all.
    if cg.rank() == cg.cols() {
        return Ok(None);
    }

    let annihilated = |point: &ConstMatrix| -> bool {
        let raw = plucker_of_matrix(point).expect("enumerated points have full rank");
        (0..cg.rows()).all(|i| {
            let mut acc = cg.field().zero();
            for (j, c) in raw.coords().iter().enumerate() {
                acc = acc.add(&cg.get(i, j).mul(c));
            }
            acc.is_zero()
        })
    };

    const CHUNK: usize = 2048;
    let mut points = enumerate_grassmannian(m, m + p, fs.field())?;
    loop {
        let chunk: Vec<ConstMatrix> = points.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        if let Some(i) = chunk.par_iter().position_first(|k| annihilated(k)) {
            let witness = ProjectiveCompensator::new(chunk[i].clone())?;
            if !charpoly_via_factors(fs, &witness)?.is_zero() {
                return Err(Error::Internal(
                    "fast annihilation test disagrees with the stacked determinant".into(),
                ));
            }
            return Ok(Some(witness));
        }
    }
}

/// Point of the system's Plucker curve at `lambda`: the Plucker vector
/// of `M(lambda) = [N(lambda) | D(lambda)]`.  Fails with
/// [`Error::RankDeficient`] at common roots of all minors, which exist
/// only for non-coprime fractions.
pub fn evaluate_curve_point(fs: &FactoredSystem, lambda: &Scalar) -> Result<PluckerVector> {
    if lambda.field() != fs.field() {
        return Err(Error::FieldMismatch(
            fs.field().spec_string(),
            lambda.field().spec_string(),
        ));
    }
    plucker_of_matrix(&fs.big_m().eval_at(lambda))
}

/// Plain feedback law from a homogeneous compensator `[K1 | K2]`,
/// namely `K = K1^{-1} K2`.  Compensators with singular `K1` fail with
/// [`Error::DependentAtInfinity`].
pub fn recover_feedback(pk: &ProjectiveCompensator) -> Result<Compensator> {
    let k1 = pk.k1();
    let inv = match k1.inverse() {
        Ok(inv) => inv,
        Err(Error::ZeroDeterminant) => return Err(Error::DependentAtInfinity),
        Err(e) => return Err(e),
    };
    Ok(Compensator::new(inv.mul(&pk.k2())))
}
