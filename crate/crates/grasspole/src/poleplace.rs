//! Pole placement as a map from compensators to characteristic
//! polynomials: closed-form root counts, exhaustive censuses over finite
//! fields, exact fiber solving for two-input two-output systems of degree
//! four, and a machine-checked certificate that no nondegenerate such
//! system over F_2 places poles onto all of P^4(F_2).
//!
//! Census conventions: affine mode iterates every constant feedback K in
//! F_q^{m x p}, evaluates det [[I, K], [N, D]], and buckets the results
//! that are monic of degree n; everything else (degree drops, non-monic
//! leading terms) is counted in `dropped`.  Projective mode iterates all
//! points of the Grassmannian of m-planes in F_q^{m+p} and buckets the
//! projectively normalized coefficient vectors; compensators annihilated
//! by the system (identically zero polynomial) are counted in `dropped`,
//! not treated as fatal.  Histograms map fiber size to the number of
//! image points with that fiber size, so the sizes times counts plus
//! `dropped` always add up to the domain size.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigUint, Integer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grassmann::{
    enumerate_grassmannian, gaussian_binomial, is_decomposable, plucker_of_matrix,
    reconstruct_matrix, PluckerVector,
};
use crate::matrix::ConstMatrix;
use crate::poly::{Degree, Poly};
use crate::systems::{
    coefficient_matrix, is_degenerate_exact, recover_feedback, Compensator, Degeneracy,
    FactoredSystem, ProjectiveCompensator,
};

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Number of complex solutions of the pole placement problem for a generic
/// m-input p-output system of degree mp:
///
///   1! 2! ... (p-1)! (mp)!  /  ( m! (m+1)! ... (m+p-1)! )
///
/// This equals the degree of the Grassmannian of p-planes in (m+p)-space
/// in its Pluecker embedding and is symmetric in m and p.
pub fn schubert_number(m: usize, p: usize) -> BigUint {
    assert!(m >= 1 && p >= 1, "dimensions must be positive");
    let mut num = factorial(m * p);
    for i in 1..p {
        num *= factorial(i);
    }
    let mut den = BigUint::from(1u32);
    for i in 0..p {
        den *= factorial(m + i);
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem == BigUint::from(0u32), "count is always an integer");
    quot
}

/// Which space of compensators a census sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    /// Constant feedback matrices K, bucketing monic degree-n results.
    Affine,
    /// Full Grassmannian of projective compensators, bucketing points of
    /// P^n(F_q).
    Projective,
}

impl std::fmt::Display for CensusMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CensusMode::Affine => "affine",
            CensusMode::Projective => "projective",
        })
    }
}

/// Exhaustive sweep of the pole placement map of one system.
///
/// Keys in `missed` are coefficient vectors, ascending degree, each
/// coordinate in its canonical element encoding.  In affine mode the
/// targets are the monic polynomials of degree `degree`; missed ones are
/// listed with the free coefficients varying lowest degree fastest.  In
/// projective mode the targets are points of P^degree(F_q) normalized so
/// the first nonzero coordinate is 1, listed with ascending position of
/// that pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub field: String,
    pub mode: CensusMode,
    pub degree: usize,
    pub domain_size: u64,
    pub image_size: u64,
    pub target_size: u64,
    pub dropped: u64,
    /// fiber size -> number of image points with exactly that fiber size
    pub histogram: BTreeMap<u64, u64>,
    pub missed: Vec<Vec<String>>,
}

/// Calls `f` once per tuple in {0,..,radix-1}^slots, first slot fastest.
fn odometer(slots: usize, radix: usize, mut f: impl FnMut(&[usize])) {
    assert!(radix > 0, "empty radix");
    let mut idx = vec![0usize; slots];
    loop {
        f(&idx);
        let mut i = 0;
        loop {
            if i == slots {
                return;
            }
            idx[i] += 1;
            if idx[i] < radix {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn report_from_counts(
    fs: &FactoredSystem,
    mode: CensusMode,
    domain_size: u64,
    target_size: u64,
    dropped: u64,
    counts: BTreeMap<Vec<String>, u64>,
    targets: Vec<Vec<String>>,
) -> CensusReport {
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for c in counts.values() {
        *histogram.entry(*c).or_insert(0) += 1;
    }
    let missed: Vec<Vec<String>> = targets
        .into_iter()
        .filter(|t| !counts.contains_key(t))
        .collect();
    CensusReport {
        field: fs.field().spec_string(),
        mode,
        degree: fs.degree(),
        domain_size,
        image_size: counts.len() as u64,
        target_size,
        dropped,
        histogram,
        missed,
    }
}

/// Enumerates the full pole placement map of `fs` over its (finite)
/// coefficient field and reports image, fiber histogram, and missed
/// targets.  Exact and exhaustive; the domain must fit in a u64.
pub fn census(fs: &FactoredSystem, mode: CensusMode) -> Result<CensusReport> {
    let field = fs.field().clone();
    if !field.is_finite() {
        return Err(Error::InfiniteField);
    }
    let elems = field.enumerate()?;
    let q = elems.len() as u64;
    let (m, p, n) = (fs.m(), fs.p(), fs.degree());
    let cg = coefficient_matrix(fs).compensator_matrix();
    let one_str = field.one().to_string();
    let zero_str = field.zero().to_string();

    match mode {
        CensusMode::Affine => {
            let domain_size = q.checked_pow((m * p) as u32).ok_or_else(|| {
                Error::UnsupportedShape(format!("affine census domain {q}^{} exceeds u64", m * p))
            })?;
            let target_size = q.checked_pow(n as u32).ok_or_else(|| {
                Error::UnsupportedShape(format!("affine census target {q}^{n} exceeds u64"))
            })?;
            let identity = ConstMatrix::identity(&field, m);
            let mut counts: BTreeMap<Vec<String>, u64> = BTreeMap::new();
            let mut dropped = 0u64;
            let mut failure = None;
            odometer(m * p, elems.len(), |idx| {
                if failure.is_some() {
                    return;
                }
                let k = ConstMatrix::from_fn(&field, m, p, |i, j| elems[idx[i * p + j]].clone());
                match plucker_of_matrix(&identity.hstack(&k)) {
                    Ok(pl) => {
                        let coeffs = cg.apply(pl.coords());
                        if coeffs[n].is_one() {
                            let key: Vec<String> = coeffs.iter().map(Scalar::to_string).collect();
                            *counts.entry(key).or_insert(0) += 1;
                        } else {
                            dropped += 1;
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            let mut targets = Vec::new();
            odometer(n, elems.len(), |idx| {
                let mut key: Vec<String> = idx.iter().map(|&i| elems[i].to_string()).collect();
                key.push(one_str.clone());
                targets.push(key);
            });
            Ok(report_from_counts(
                fs,
                mode,
                domain_size,
                target_size,
                dropped,
                counts,
                targets,
            ))
        }
        CensusMode::Projective => {
            let gb = gaussian_binomial(m + p, m, q);
            let domain_size = u64::try_from(&gb).map_err(|_| {
                Error::UnsupportedShape(format!("projective census domain {gb} exceeds u64"))
            })?;
            let mut tgt = BigUint::from(0u32);
            for _ in 0..=n {
                tgt = tgt * q + 1u32;
            }
            let target_size = u64::try_from(&tgt).map_err(|_| {
                Error::UnsupportedShape(format!("projective census target {tgt} exceeds u64"))
            })?;
            let mut counts: BTreeMap<Vec<String>, u64> = BTreeMap::new();
            let mut dropped = 0u64;
            let mut seen = 0u64;
            for mat in enumerate_grassmannian(m, m + p, &field)? {
                seen += 1;
                let pl = plucker_of_matrix(&mat)?;
                let coeffs = cg.apply(pl.coords());
                match coeffs.iter().position(|c| !c.is_zero()) {
                    None => dropped += 1,
                    Some(first) => {
                        let inv = coeffs[first].inv()?;
                        let key: Vec<String> =
                            coeffs.iter().map(|c| c.mul(&inv).to_string()).collect();
                        *counts.entry(key).or_insert(0) += 1;
                    }
                }
            }
            debug_assert_eq!(seen, domain_size, "Grassmannian point count");
            let mut targets = Vec::new();
            for pivot in 0..=n {
                odometer(n - pivot, elems.len(), |idx| {
                    let mut key = vec![zero_str.clone(); pivot];
                    key.push(one_str.clone());
                    key.extend(idx.iter().map(|&i| elems[i].to_string()));
                    targets.push(key);
                });
            }
            Ok(report_from_counts(
                fs,
                mode,
                domain_size,
                target_size,
                dropped,
                counts,
                targets,
            ))
        }
    }
}

/// One projective compensator in a fiber of the pole placement map.
#[derive(Clone, Debug)]
pub struct FiberEntry {
    /// Pluecker coordinates, normalized so the first nonzero one is 1.
    /// Lives over the base field, or over its quadratic extension when
    /// `in_extension` is set.
    pub point: PluckerVector,
    pub in_extension: bool,
    pub multiplicity: usize,
    pub k1_invertible: bool,
    /// The constant feedback realizing the point, when K1 is invertible.
    pub feedback: Option<Compensator>,
}

/// Complete fiber of the pole placement map over one monic target.
///
/// The multiplicities always add up to 2, the generic fiber size of a
/// two-input two-output system of degree four.  Over the rationals a
/// conjugate pair of irrational solutions is reported symbolically: no
/// entries, but `irrational_discriminant` holds the non-square rational
/// whose square roots parameterize the pair.
#[derive(Clone, Debug)]
pub struct FiberSolution {
    pub target: Poly,
    pub entries: Vec<FiberEntry>,
    pub total_multiplicity: usize,
    /// Field spec of the quadratic extension, when entries needed one.
    pub extension_field: Option<String>,
    /// Set only over the rationals, for a fiber with no rational points.
    pub irrational_discriminant: Option<Scalar>,
}

/// Value of the Grassmannian quadric on lex-ordered Pluecker coordinates
/// of 2-planes in 4-space: x0 x5 - x1 x4 + x2 x3.
fn quadric_form(x: &[Scalar]) -> Scalar {
    x[0].mul(&x[5]).sub(&x[1].mul(&x[4])).add(&x[2].mul(&x[3]))
}

fn add6(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

/// Square root of a nonnegative rational scalar, if it is one.
fn rational_sqrt(x: &Scalar) -> Result<Option<Scalar>> {
    let field = x.field().clone();
    if !field.is_rationals() {
        return Err(Error::Internal("rational_sqrt off the rationals".into()));
    }
    if x.is_zero() {
        return Ok(Some(field.zero()));
    }
    let text = x.to_string();
    if text.starts_with('-') {
        return Ok(None);
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.to_string(), d.to_string()),
        None => (text, "1".to_string()),
    };
    let num: BigUint = num
        .parse()
        .map_err(|_| Error::Internal("numerator".into()))?;
    let den: BigUint = den
        .parse()
        .map_err(|_| Error::Internal("denominator".into()))?;
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn != num || &sd * &sd != den {
        return Ok(None);
    }
    Ok(Some(field.parse_scalar(&format!("{sn}/{sd}"))?))
}

fn fiber_entry(
    field: &Field,
    coords: Vec<Scalar>,
    multiplicity: usize,
    in_extension: bool,
    cg: &ConstMatrix,
    target_coeffs: &[Scalar],
) -> Result<FiberEntry> {
    let raw = PluckerVector::from_coords(field, 2, 4, coords)?;
    let got = cg.apply(raw.coords());
    if got != target_coeffs {
        return Err(Error::Internal(
            "fiber point fails its characteristic polynomial check".into(),
        ));
    }
    let point = raw.normalize_projective()?;
    let pc = ProjectiveCompensator::new(reconstruct_matrix(&point)?)?;
    let (k1_invertible, feedback) = match recover_feedback(&pc) {
        Ok(k) => (true, Some(k)),
        Err(Error::DependentAtInfinity) => (false, None),
        Err(e) => return Err(e),
    };
    Ok(FiberEntry {
        point,
        in_extension,
        multiplicity,
        k1_invertible,
        feedback,
    })
}

/// Solves the pole placement problem exactly for a nondegenerate
/// two-input two-output system of degree four: returns every projective
/// compensator whose closed loop realizes the given monic degree-4
/// polynomial, with multiplicities adding up to 2.  Roots that only exist
/// over the quadratic extension of a finite base field are returned over
/// that extension; over the rationals an irrational conjugate pair is
/// reported through its discriminant instead.
pub fn fiber_solve_2x2(fs: &FactoredSystem, target: &Poly) -> Result<FiberSolution> {
    if fs.m() != 2 || fs.p() != 2 {
        return Err(Error::UnsupportedShape(format!(
            "fiber solving needs 2 inputs and 2 outputs, got {} and {}",
            fs.m(),
            fs.p()
        )));
    }
    if fs.degree() != 4 {
        return Err(Error::UnsupportedShape(format!(
            "fiber solving needs system degree 4, got {}",
            fs.degree()
        )));
    }
    let field = fs.field().clone();
    if target.field() != &field {
        return Err(Error::FieldMismatch(
            field.spec_string(),
            target.field().spec_string(),
        ));
    }
    if target.degree() != Degree::Of(4) || !target.is_monic() {
        return Err(Error::DimensionMismatch(
            "target must be monic of degree 4".into(),
        ));
    }
    if is_degenerate_exact(fs)? != Degeneracy::Nondegenerate {
        return Err(Error::DegenerateSystem);
    }

    let cg = coefficient_matrix(fs).compensator_matrix();
    let phi: Vec<Scalar> = (0..=4).map(|i| target.coeff(i)).collect();
    // Nondegeneracy of a degree-4 system forces the 5x6 coefficient map to
    // have full row rank with a one dimensional kernel off the quadric.
    let k0 = cg
        .solve(&phi)?
        .ok_or_else(|| Error::Internal("full row rank map must be solvable".into()))?;
    let kernel = cg.right_nullspace();
    if kernel.len() != 1 {
        return Err(Error::Internal(format!(
            "nondegenerate degree-4 system with kernel dimension {}",
            kernel.len()
        )));
    }
    let v = &kernel[0];

    // The fiber is the line k0 + t v cut by the quadric; in t that is
    // Q(v) t^2 + B(k0, v) t + Q(k0) with the polarization B(x, y) =
    // Q(x+y) - Q(x) - Q(y), valid in every characteristic.
    let a = quadric_form(v);
    let c = quadric_form(&k0);
    let b = quadric_form(&add6(&k0, v)).sub(&a).sub(&c);
    if a.is_zero() {
        return Err(Error::Internal(
            "kernel generator lies on the quadric".into(),
        ));
    }

    let mut entries = Vec::new();
    let mut extension_field = None;
    let mut irrational_discriminant = None;

    if field.is_finite() {
        let quad = Poly::from_coeffs(&field, vec![c.clone(), b.clone(), a.clone()]);
        let base_roots = quad.roots_in_field()?;
        let base_total: usize = base_roots.iter().map(|(_, mult)| mult).sum();
        if base_total == 2 {
            for (t, mult) in base_roots {
                let coords: Vec<Scalar> =
                    k0.iter().zip(v).map(|(k, w)| k.add(&w.mul(&t))).collect();
                entries.push(fiber_entry(&field, coords, mult, false, &cg, &phi)?);
            }
        } else if base_total == 0 {
            // Irreducible quadratic: both roots live in the quadratic
            // extension (finite fields are perfect, so they are distinct).
            let (_, emb) = field.quadratic_extension()?;
            let big_roots = quad.map_into(&emb).roots_in_field()?;
            let big_total: usize = big_roots.iter().map(|(_, mult)| mult).sum();
            if big_total != 2 {
                return Err(Error::Internal(
                    "quadratic fails to split in its own splitting field".into(),
                ));
            }
            let cg_big = ConstMatrix::from_fn(emb.target(), cg.rows(), cg.cols(), |i, j| {
                emb.embed(cg.get(i, j))
            });
            let phi_big: Vec<Scalar> = phi.iter().map(|x| emb.embed(x)).collect();
            let k0_big: Vec<Scalar> = k0.iter().map(|x| emb.embed(x)).collect();
            let v_big: Vec<Scalar> = v.iter().map(|x| emb.embed(x)).collect();
            for (t, mult) in big_roots {
                let coords: Vec<Scalar> = k0_big
                    .iter()
                    .zip(&v_big)
                    .map(|(k, w)| k.add(&w.mul(&t)))
                    .collect();
                entries.push(fiber_entry(
                    emb.target(),
                    coords,
                    mult,
                    true,
                    &cg_big,
                    &phi_big,
                )?);
            }
            extension_field = Some(emb.target().spec_string());
        } else {
            return Err(Error::Internal(
                "quadratic with exactly one root counting multiplicity".into(),
            ));
        }
    } else {
        // Rationals: solve a t^2 + b t + c by discriminant.
        let disc = b.mul(&b).sub(&field.embed_int(4).mul(&a).mul(&c));
        match rational_sqrt(&disc)? {
            Some(root) => {
                let two_a = field.embed_int(2).mul(&a);
                let ts: Vec<(Scalar, usize)> = if disc.is_zero() {
                    vec![(b.neg().div(&two_a)?, 2)]
                } else {
                    vec![
                        (b.neg().sub(&root).div(&two_a)?, 1),
                        (b.neg().add(&root).div(&two_a)?, 1),
                    ]
                };
                for (t, mult) in ts {
                    let coords: Vec<Scalar> =
                        k0.iter().zip(v).map(|(k, w)| k.add(&w.mul(&t))).collect();
                    entries.push(fiber_entry(&field, coords, mult, false, &cg, &phi)?);
                }
            }
            None => irrational_discriminant = Some(disc),
        }
    }

    let total_multiplicity = if irrational_discriminant.is_some() {
        2
    } else {
        entries.iter().map(|e| e.multiplicity).sum()
    };
    Ok(FiberSolution {
        target: target.clone(),
        entries,
        total_multiplicity,
        extension_field,
        irrational_discriminant,
    })
}

/// One annihilator hyperplane case of the binary certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Case {
    /// The off-quadric kernel direction, as a 0/1 vector of length 6.
    pub kernel: Vec<u64>,
    /// Number of distinct points of P^4(F_2) hit by the 35 compensators.
    pub image_size: usize,
    /// The points of P^4(F_2) never hit, as 0/1 vectors of length 5.
    pub missed: Vec<Vec<u64>>,
}

/// One of the four published coefficient matrices, checked against the
/// case sharing its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2CanonicalCase {
    pub kernel: Vec<u64>,
    pub image_size: usize,
    /// The published matrix has the same row space as the case's RREF
    /// annihilator.
    pub row_space_matches: bool,
    /// The published missed target for this case.
    pub listed_missed: Vec<u64>,
    pub listed_missed_confirmed: bool,
}

/// Outcome of the exhaustive binary non-surjectivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Report {
    pub quadric_points: usize,
    pub off_quadric_points: usize,
    pub cases: Vec<F2Case>,
    pub all_nonsurjective: bool,
    pub canonical_cases: Vec<F2CanonicalCase>,
    /// Orbit sizes of the off-quadric points under the six coordinate
    /// swaps, ascending.
    pub orbit_sizes: Vec<usize>,
    /// The orbits are exactly four and contain one canonical kernel each.
    pub orbits_match_canonical: bool,
}

/// Bit vector of length `len` with coordinate i taken from bit len-1-i,
/// so ascending masks give ascending lex vectors.
fn mask_bits(mask: u32, len: usize) -> Vec<u64> {
    (0..len)
        .map(|i| ((mask >> (len - 1 - i)) & 1) as u64)
        .collect()
}

fn bits_scalars(field: &Field, bits: &[u64]) -> Vec<Scalar> {
    bits.iter().map(|&b| field.embed_int(b as i64)).collect()
}

fn scalars_bits(xs: &[Scalar]) -> Vec<u64> {
    xs.iter().map(|x| if x.is_zero() { 0 } else { 1 }).collect()
}

/// Partitions `points` into orbits under the group generated by the given
/// axis permutations (each maps axis i to perm[i]).  Orbits include every
/// point reachable from a seed, are sorted internally, and are listed by
/// ascending least member.
pub fn orbit_decomposition(points: &[Vec<u64>], swaps: &[Vec<usize>]) -> Vec<Vec<Vec<u64>>> {
    let seeds: BTreeSet<Vec<u64>> = points.iter().cloned().collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut orbits = Vec::new();
    for seed in &seeds {
        if seen.contains(seed) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<u64>> = BTreeSet::new();
        orbit.insert(seed.clone());
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(cur) = queue.pop_front() {
            for perm in swaps {
                assert_eq!(perm.len(), cur.len(), "permutation length");
                let mut img = vec![0u64; cur.len()];
                for (i, &to) in perm.iter().enumerate() {
                    img[to] = cur[i];
                }
                if orbit.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect::<Vec<_>>());
    }
    orbits.sort();
    orbits
}

/// The six coordinate swaps of the Pluecker axes {12,13,14,23,24,34}
/// induced by transposing two of the four columns: written as axis
/// permutations (image of axis i at position i).
pub fn plucker_axis_swaps() -> Vec<Vec<usize>> {
    vec![
        vec![5, 1, 2, 3, 4, 0],
        vec![0, 4, 2, 3, 1, 5],
        vec![0, 1, 3, 2, 4, 5],
        vec![1, 0, 2, 3, 5, 4],
        vec![2, 1, 0, 5, 4, 3],
        vec![0, 2, 1, 4, 3, 5],
    ]
}

/// Exhaustively certifies that every nondegenerate two-input two-output
/// system of degree four over F_2 misses some target: splits the 63
/// points of P^5(F_2) into 35 on the quadric and 28 off it, and for each
/// off-quadric direction v builds the RREF basis of v-perp as a 5x6
/// coefficient matrix, maps all 35 compensators through it, and checks
/// the image misses part of P^4(F_2).  Also replays the four published
/// coefficient matrices and the symmetry orbits of the 28 directions.
pub fn verify_f2_nonsurjectivity() -> Result<F2Report> {
    let f2 = Field::finite(2)?;
    let mut on_quadric: Vec<Vec<u64>> = Vec::new();
    let mut off_quadric: Vec<Vec<u64>> = Vec::new();
    for mask in 1u32..64 {
        let bits = mask_bits(mask, 6);
        let pl = PluckerVector::from_coords(&f2, 2, 4, bits_scalars(&f2, &bits))?;
        if is_decomposable(&pl)? {
            on_quadric.push(bits);
        } else {
            off_quadric.push(bits);
        }
    }

    let all_p4: Vec<Vec<u64>> = (1u32..32).map(|mask| mask_bits(mask, 5)).collect();
    let mut cases = Vec::new();
    for v in &off_quadric {
        let vm = ConstMatrix::from_rows(&f2, vec![bits_scalars(&f2, v)])?;
        let perp = vm.right_nullspace();
        debug_assert_eq!(perp.len(), 5);
        let (annihilator, rank, _) = ConstMatrix::from_rows(&f2, perp)?.rref();
        debug_assert_eq!(rank, 5);
        let mut image: BTreeSet<Vec<u64>> = BTreeSet::new();
        for w in &on_quadric {
            let out = annihilator.apply(&bits_scalars(&f2, w));
            debug_assert!(out.iter().any(|x| !x.is_zero()), "quadric meets the kernel");
            image.insert(scalars_bits(&out));
        }
        let missed: Vec<Vec<u64>> = all_p4
            .iter()
            .filter(|t| !image.contains(*t))
            .cloned()
            .collect();
        cases.push(F2Case {
            kernel: v.clone(),
            image_size: image.len(),
            missed,
        });
    }
    let all_nonsurjective = cases.iter().all(|c| c.image_size < all_p4.len());

    // The four published coefficient matrices and, for each, one target
    // they provably miss.
    let published: [([[i64; 6]; 5], [u64; 5]); 4] = [
        (
            [
                [1, 0, 0, 0, 0, 1],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1, 0],
            ],
            [1, 1, 1, 0, 1],
        ),
        (
            [
                [1, 0, 0, 0, 0, 1],
                [0, 1, 0, 0, 0, 1],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1, 0],
            ],
            [1, 1, 1, 1, 0],
        ),
        (
            [
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 1],
                [0, 0, 0, 1, 0, 1],
                [0, 0, 0, 0, 1, 1],
            ],
            [0, 1, 0, 0, 1],
        ),
        (
            [
                [1, 0, 0, 0, 0, 1],
                [0, 1, 0, 0, 0, 1],
                [0, 0, 1, 0, 0, 1],
                [0, 0, 0, 1, 0, 1],
                [0, 0, 0, 0, 1, 1],
            ],
            [1, 1, 0, 0, 1],
        ),
    ];
    let mut canonical_cases = Vec::new();
    for (rows, listed) in &published {
        let mat_rows: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let mat = ConstMatrix::from_int_rows(&f2, &mat_rows);
        let kernel_vecs = mat.right_nullspace();
        if kernel_vecs.len() != 1 {
            return Err(Error::Internal("published matrix without rank 5".into()));
        }
        let kernel = scalars_bits(&kernel_vecs[0]);
        let case = cases
            .iter()
            .find(|c| c.kernel == kernel)
            .ok_or_else(|| Error::Internal("published kernel lies on the quadric".into()))?;
        // Row space equality of two rank-5 matrices: identical RREF.
        let vm = ConstMatrix::from_rows(&f2, vec![bits_scalars(&f2, &kernel)])?;
        let annihilator = ConstMatrix::from_rows(&f2, vm.right_nullspace())?.rref().0;
        let row_space_matches = mat.rref().0 == annihilator;
        let listed_missed: Vec<u64> = listed.to_vec();
        let listed_missed_confirmed = case.missed.contains(&listed_missed);
        canonical_cases.push(F2CanonicalCase {
            kernel,
            image_size: case.image_size,
            row_space_matches,
            listed_missed,
            listed_missed_confirmed,
        });
    }

    let orbits = orbit_decomposition(&off_quadric, &plucker_axis_swaps());
    let mut orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    orbit_sizes.sort_unstable();
    let orbits_match_canonical = orbits.len() == 4
        && orbit_sizes.iter().sum::<usize>() == off_quadric.len()
        && canonical_cases
            .iter()
            .all(|cc| orbits.iter().filter(|o| o.contains(&cc.kernel)).count() == 1)
        && orbits.iter().all(|o| {
            canonical_cases
                .iter()
                .filter(|cc| o.contains(&cc.kernel))
                .count()
                == 1
        });

    Ok(F2Report {
        quadric_points: on_quadric.len(),
        off_quadric_points: off_quadric.len(),
        cases,
        all_nonsurjective,
        canonical_cases,
        orbit_sizes,
        orbits_match_canonical,
    })
}
