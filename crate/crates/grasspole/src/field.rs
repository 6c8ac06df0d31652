//! Exact scalar arithmetic over the rationals and over finite fields F_{p^k}.
//!
//! Every scalar carries a handle to its field. Rationals are stored as
//! reduced `BigRational` values. Finite field elements are coefficient
//! vectors over F_p in the power basis of the modulus, stored inline as
//! `[u64; 4]` with entries in `[0, p)`; unused slots are always zero, so
//! derived equality and hashing are structural. Extension degrees up to 4
//! are supported and the modulus is verified irreducible at construction.

use crate::error::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, One, Zero};
use std::fmt;
use std::sync::Arc;

pub const MAX_EXTENSION_DEGREE: usize = 4;

/// Largest characteristic accepted for proper extension fields; keeps all
/// convolution intermediates inside u128.
const MAX_EXTENSION_CHARACTERISTIC: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum FieldRepr {
    Rationals,
    Finite {
        p: u64,
        k: usize,
        /// Monic modulus, ascending coefficients, length k+1. Only
        /// meaningful for k >= 2; for prime fields it is x (unused).
        modulus: [u64; MAX_EXTENSION_DEGREE + 1],
    },
}

/// A field handle. Cheap to clone; equality is structural on the spec.
#[derive(Clone)]
pub struct Field(Arc<FieldRepr>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec_string())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    /// Coefficient vector over F_p; entries beyond `len` are zero.
    Fin {
        len: u8,
        c: [u64; MAX_EXTENSION_DEGREE],
    },
}

/// An element of a specific field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

// Arithmetic mod p on u64, with u128 intermediates for products.

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a.wrapping_add(b);
    if s >= p || s < a {
        s.wrapping_sub(p)
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    acc
}

fn invm(a: u64, p: u64) -> u64 {
    // Extended Euclid; a is nonzero mod p.
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin; this witness set is exact for all u64.
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Dense polynomials over F_p as Vec<u64>, ascending, no trailing zeros.
// Used for modulus validation and inversion; not performance critical.

fn fpoly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fpoly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(ai, bj, p), p);
        }
    }
    fpoly_trim(&mut out);
    out
}

fn fpoly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(!f.is_empty());
    let mut r = a.to_vec();
    fpoly_trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = invm(f[df], p);
    while r.len() > df {
        let c = mulm(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - df;
        for (j, &fj) in f.iter().enumerate() {
            r[shift + j] = subm(r[shift + j], mulm(c, fj, p), p);
        }
        fpoly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fpoly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fpoly_trim(&mut x);
    fpoly_trim(&mut y);
    while !y.is_empty() {
        let r = fpoly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn fpoly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    fpoly_rem(&fpoly_mul(a, b, p), f, p)
}

fn fpoly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64 % p];
    fpoly_trim(&mut acc);
    let mut b = fpoly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fpoly_mulmod(&acc, &b, f, p);
        }
        b = fpoly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

/// Complete irreducibility criterion over F_p: f of degree k is irreducible
/// iff x^(p^k) = x mod f and gcd(x^(p^(k/t)) - x, f) = 1 for every prime t
/// dividing k. Equivalent to exhaustive factor search and cross-checked
/// against it in tests.
fn fpoly_is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    debug_assert!(k >= 1);
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let prime_divisors: &[usize] = match k {
        2 => &[2],
        3 => &[3],
        4 => &[2],
        _ => unreachable!("extension degree capped at 4"),
    };
    // frob[i] = x^(p^i) mod f, computed by iterated powering by p.
    let mut frob = fpoly_rem(&x, f, p);
    for i in 1..=k {
        frob = fpoly_powmod(&frob, p, f, p);
        if prime_divisors.contains(&(k / i)) && i < k {
            let mut diff = frob.clone();
            while diff.len() < 2 {
                diff.push(0);
            }
            diff[1] = subm(diff[1], 1, p);
            fpoly_trim(&mut diff);
            let g = fpoly_gcd(&diff, f, p);
            if g.len() != 1 {
                return false;
            }
        }
    }
    // frob now holds x^(p^k) mod f; it must equal x.
    let mut diff = frob;
    while diff.len() < 2 {
        diff.push(0);
    }
    diff[1] = subm(diff[1], 1, p);
    fpoly_trim(&mut diff);
    diff.is_empty()
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldRepr::Rationals))
    }

    /// The prime field F_p.
    pub fn finite(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        Ok(Field(Arc::new(FieldRepr::Finite {
            p,
            k: 1,
            modulus: [0, 1, 0, 0, 0],
        })))
    }

    /// The extension field F_{p^k} with the given monic modulus of degree
    /// k in 2..=4, ascending coefficients (length k+1). Coefficients are
    /// reduced mod p; irreducibility is verified.
    pub fn extension(p: u64, modulus_coeffs: &[u64]) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        let k = modulus_coeffs.len().saturating_sub(1);
        if !(2..=MAX_EXTENSION_DEGREE).contains(&k) {
            return Err(Error::UnsupportedExtension(format!(
                "modulus degree {k} outside 2..=4"
            )));
        }
        if p >= MAX_EXTENSION_CHARACTERISTIC {
            return Err(Error::UnsupportedExtension(format!(
                "characteristic {p} too large for an extension field"
            )));
        }
        let reduced: Vec<u64> = modulus_coeffs.iter().map(|&c| c % p).collect();
        if reduced[k] != 1 {
            return Err(Error::InvalidModulus(format!(
                "leading coefficient must be 1 mod {p}"
            )));
        }
        if !fpoly_is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus(
                reduced
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        let mut modulus = [0u64; MAX_EXTENSION_DEGREE + 1];
        modulus[..=k].copy_from_slice(&reduced);
        Ok(Field(Arc::new(FieldRepr::Finite { p, k, modulus })))
    }

    /// Parses a field spec string: "QQ" for the rationals, a prime "q",
    /// or "p^k:modulus=c0,c1,...,ck" for an extension field.
    pub fn parse_spec(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "QQ" {
            return Ok(Field::rationals());
        }
        if let Some((head, tail)) = s.split_once(':') {
            let (p_str, k_str) = head
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected p^k before ':' in {s:?}")))?;
            let p: u64 = p_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad characteristic {p_str:?}")))?;
            let k: usize = k_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad extension degree {k_str:?}")))?;
            let coeffs_str = tail
                .strip_prefix("modulus=")
                .ok_or_else(|| Error::Parse(format!("expected modulus= after ':' in {s:?}")))?;
            let coeffs: Vec<u64> = coeffs_str
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad modulus coefficient {c:?}")))
                })
                .collect::<Result<_>>()?;
            if coeffs.len() != k + 1 {
                return Err(Error::InvalidModulus(format!(
                    "degree {k} needs {} coefficients, got {}",
                    k + 1,
                    coeffs.len()
                )));
            }
            return Field::extension(p, &coeffs);
        }
        let q: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec {s:?}")))?;
        Field::finite(q)
    }

    pub fn spec_string(&self) -> String {
        match &*self.0 {
            FieldRepr::Rationals => "QQ".to_string(),
            FieldRepr::Finite { p, k: 1, .. } => p.to_string(),
            FieldRepr::Finite { p, k, modulus } => {
                let coeffs: Vec<String> = modulus[..=*k].iter().map(u64::to_string).collect();
                format!("{p}^{k}:modulus={}", coeffs.join(","))
            }
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldRepr::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rationals()
    }

    /// 0 for the rationals, p for F_{p^k}.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldRepr::Rationals => 0,
            FieldRepr::Finite { p, .. } => *p,
        }
    }

    /// 1 for the rationals and prime fields, k for F_{p^k}.
    pub fn extension_degree(&self) -> usize {
        match &*self.0 {
            FieldRepr::Rationals => 1,
            FieldRepr::Finite { k, .. } => *k,
        }
    }

    pub fn order(&self) -> Option<BigUint> {
        match &*self.0 {
            FieldRepr::Rationals => None,
            FieldRepr::Finite { p, k, .. } => Some(BigUint::from(*p).pow(*k as u32)),
        }
    }

    /// The order as u64; all supported finite fields fit.
    pub fn order_u64(&self) -> Option<u64> {
        match &*self.0 {
            FieldRepr::Rationals => None,
            FieldRepr::Finite { p, k, .. } => Some(p.pow(*k as u32)),
        }
    }

    /// Ascending modulus coefficients for extension fields (k >= 2).
    pub fn modulus(&self) -> Option<Vec<u64>> {
        match &*self.0 {
            FieldRepr::Finite { k, modulus, .. } if *k >= 2 => Some(modulus[..=*k].to_vec()),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldRepr::Rationals => Scalar {
                field: self.clone(),
                value: Value::Rat(BigRational::zero()),
            },
            FieldRepr::Finite { .. } => Scalar {
                field: self.clone(),
                value: Value::Fin {
                    len: self.extension_degree() as u8,
                    c: [0; MAX_EXTENSION_DEGREE],
                },
            },
        }
    }

    pub fn one(&self) -> Scalar {
        self.embed_int(1)
    }

    /// The generator x of the power basis (only meaningful for k >= 2,
    /// where it is a root of the modulus; for k = 1 it embeds 0 + 1*x = x
    /// which reduces to nothing useful, so it is restricted).
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            FieldRepr::Finite { k, .. } if *k >= 2 => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                c[1] = 1;
                Some(Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                })
            }
            _ => None,
        }
    }

    pub fn embed_int(&self, n: i64) -> Scalar {
        match &*self.0 {
            FieldRepr::Rationals => Scalar {
                field: self.clone(),
                value: Value::Rat(BigRational::from_integer(BigInt::from(n))),
            },
            FieldRepr::Finite { p, k, .. } => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                c[0] = (n as i128).rem_euclid(*p as i128) as u64;
                Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                }
            }
        }
    }

    pub fn embed_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            FieldRepr::Rationals => Scalar {
                field: self.clone(),
                value: Value::Rat(BigRational::from_integer(n.clone())),
            },
            FieldRepr::Finite { p, k, .. } => {
                let pb = BigInt::from(*p);
                let mut r = n % &pb;
                if r.sign() == Sign::Minus {
                    r += &pb;
                }
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                c[0] = r.to_u64_digits().1.first().copied().unwrap_or(0);
                Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                }
            }
        }
    }

    /// Builds a finite field element from power basis coefficients
    /// (ascending, at most k entries, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar> {
        match &*self.0 {
            FieldRepr::Rationals => Err(Error::InfiniteField),
            FieldRepr::Finite { p, k, .. } => {
                if coeffs.len() > *k {
                    return Err(Error::Parse(format!(
                        "{} coefficients for extension degree {k}",
                        coeffs.len()
                    )));
                }
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for (i, &v) in coeffs.iter().enumerate() {
                    c[i] = v % *p;
                }
                Ok(Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                })
            }
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Result<Scalar> {
        match &*self.0 {
            FieldRepr::Rationals => Ok(Scalar {
                field: self.clone(),
                value: Value::Rat(r),
            }),
            FieldRepr::Finite { .. } => {
                let num = self.embed_bigint(r.numer());
                let den = self.embed_bigint(r.denom());
                num.div(&den)
            }
        }
    }

    /// Parses the canonical element string: "a" or "a/b" over the
    /// rationals, "c0" or "c0,c1,...,c_{k-1}" over finite fields. Integer
    /// parts may be negative; they are reduced into canonical range.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match &*self.0 {
            FieldRepr::Rationals => {
                if let Some((n, d)) = s.split_once('/') {
                    let num: BigInt = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
                    let den: BigInt = d
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(Scalar {
                        field: self.clone(),
                        value: Value::Rat(BigRational::new(num, den)),
                    })
                } else {
                    let num: BigInt = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                    Ok(Scalar {
                        field: self.clone(),
                        value: Value::Rat(BigRational::from_integer(num)),
                    })
                }
            }
            FieldRepr::Finite { p, k, .. } => {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() > *k {
                    return Err(Error::Parse(format!(
                        "{} coefficients for extension degree {k}",
                        parts.len()
                    )));
                }
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for (i, part) in parts.iter().enumerate() {
                    let v: i128 = part
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
                    c[i] = v.rem_euclid(*p as i128) as u64;
                }
                Ok(Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                })
            }
        }
    }

    /// All field elements in lexicographic order on coefficient vectors
    /// (c0 most significant), so enumeration starts at 0.
    pub fn enumerate(&self) -> Result<Vec<Scalar>> {
        match &*self.0 {
            FieldRepr::Rationals => Err(Error::InfiniteField),
            FieldRepr::Finite { p, k, .. } => {
                let q = p.pow(*k as u32);
                let mut out = Vec::with_capacity(q as usize);
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                loop {
                    out.push(Scalar {
                        field: self.clone(),
                        value: Value::Fin { len: *k as u8, c },
                    });
                    // Odometer with the last coordinate fastest.
                    let mut i = *k;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        c[i] += 1;
                        if c[i] < *p {
                            break;
                        }
                        c[i] = 0;
                    }
                }
            }
        }
    }

    /// Uniform random element of a finite field; over the rationals a
    /// small fraction, which is enough for randomized identity sweeps.
    pub fn random_scalar<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        match &*self.0 {
            FieldRepr::Rationals => {
                let num = rng.gen_range(-20i64..=20);
                let den = rng.gen_range(1i64..=10);
                Scalar {
                    field: self.clone(),
                    value: Value::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
                }
            }
            FieldRepr::Finite { p, k, .. } => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for slot in c.iter_mut().take(*k) {
                    *slot = rng.gen_range(0..*p);
                }
                Scalar {
                    field: self.clone(),
                    value: Value::Fin { len: *k as u8, c },
                }
            }
        }
    }

    /// The degree 2 extension of a finite field, together with the
    /// embedding of the base field. Prime fields of odd characteristic get
    /// the modulus x^2 - c for the least quadratic nonresidue c; F_2 gets
    /// x^2 + x + 1. Extension bases get the lexicographically least
    /// irreducible modulus of degree 2k over F_p, with the embedding found
    /// by locating a root of the base modulus in the new field.
    pub fn quadratic_extension(&self) -> Result<(Field, FieldEmbedding)> {
        match &*self.0 {
            FieldRepr::Rationals => Err(Error::InfiniteField),
            FieldRepr::Finite { p, k: 1, .. } => {
                let modulus: Vec<u64> = if *p == 2 {
                    vec![1, 1, 1]
                } else {
                    let mut c = 2u64;
                    // Euler's criterion; c is a nonresidue iff c^((p-1)/2) != 1.
                    while powm(c, (p - 1) / 2, *p) == 1 {
                        c += 1;
                    }
                    vec![p - c, 0, 1]
                };
                let big = Field::extension(*p, &modulus)?;
                let root = big.generator().expect("degree 2 extension has a generator");
                Ok((
                    big.clone(),
                    FieldEmbedding {
                        small: self.clone(),
                        big,
                        root,
                    },
                ))
            }
            FieldRepr::Finite { p, k, modulus } => {
                if 2 * *k > MAX_EXTENSION_DEGREE {
                    return Err(Error::UnsupportedExtension(format!(
                        "degree {} above the cap {MAX_EXTENSION_DEGREE}",
                        2 * *k
                    )));
                }
                let kk = 2 * *k;
                // Lexicographically least irreducible monic modulus of
                // degree 2k, comparing ascending coefficient tuples with
                // c0 most significant.
                let mut coeffs = vec![0u64; kk + 1];
                coeffs[kk] = 1;
                let big = 'search: loop {
                    if fpoly_is_irreducible(&coeffs, *p) {
                        break Field::extension(*p, &coeffs)?;
                    }
                    let mut i = kk;
                    loop {
                        if i == 0 {
                            break 'search Err(Error::Internal(
                                "no irreducible modulus found".into(),
                            ))?;
                        }
                        i -= 1;
                        coeffs[i] += 1;
                        if coeffs[i] < *p {
                            break;
                        }
                        coeffs[i] = 0;
                    }
                };
                // The base modulus has a root in the big field; take the
                // first one in enumeration order as the embedding of x.
                let base_modulus: Vec<Scalar> = modulus[..=*k]
                    .iter()
                    .map(|&c| big.embed_int(c as i64))
                    .collect();
                let root = big
                    .enumerate()?
                    .into_iter()
                    .find(|cand| {
                        let mut acc = big.zero();
                        for c in base_modulus.iter().rev() {
                            acc = acc.mul(cand).add(c);
                        }
                        acc.is_zero()
                    })
                    .ok_or_else(|| Error::Internal("base modulus has no root".into()))?;
                Ok((
                    big.clone(),
                    FieldEmbedding {
                        small: self.clone(),
                        big,
                        root,
                    },
                ))
            }
        }
    }

    fn finite_parts(&self) -> (u64, usize, &[u64; MAX_EXTENSION_DEGREE + 1]) {
        match &*self.0 {
            FieldRepr::Finite { p, k, modulus } => (*p, *k, modulus),
            FieldRepr::Rationals => panic!("finite_parts on the rationals"),
        }
    }
}

/// Embedding of a finite field into its quadratic extension: maps the
/// power basis generator of the base field to a fixed root of the base
/// modulus in the big field.
pub struct FieldEmbedding {
    small: Field,
    big: Field,
    root: Scalar,
}

impl FieldEmbedding {
    pub fn source(&self) -> &Field {
        &self.small
    }

    pub fn target(&self) -> &Field {
        &self.big
    }

    pub fn embed(&self, s: &Scalar) -> Scalar {
        assert!(
            s.field == self.small,
            "embedding applied to {} element",
            s.field
        );
        match &s.value {
            Value::Rat(_) => unreachable!("embeddings are between finite fields"),
            Value::Fin { len, c } => {
                let mut acc = self.big.zero();
                for i in (0..*len as usize).rev() {
                    acc = acc.mul(&self.root).add(&self.big.embed_int(c[i] as i64));
                }
                acc
            }
        }
    }
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_zero(),
            Value::Fin { len, c } => c[..*len as usize].iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_one(),
            Value::Fin { len, c } => c[0] == 1 && c[1..*len as usize].iter().all(|&x| x == 0),
        }
    }

    /// Power basis coefficients for finite field elements.
    pub fn coeffs(&self) -> Option<&[u64]> {
        match &self.value {
            Value::Rat(_) => None,
            Value::Fin { len, c } => Some(&c[..*len as usize]),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rat(r) => Some(r),
            Value::Fin { .. } => None,
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert!(
            self.field == other.field,
            "mixed fields {} and {}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same_field(other);
        match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Scalar {
                field: self.field.clone(),
                value: Value::Rat(a + b),
            },
            (Value::Fin { len, c: a }, Value::Fin { c: b, .. }) => {
                let (p, _, _) = self.field.finite_parts();
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for i in 0..*len as usize {
                    c[i] = addm(a[i], b[i], p);
                }
                Scalar {
                    field: self.field.clone(),
                    value: Value::Fin { len: *len, c },
                }
            }
            _ => unreachable!("value kind matches field kind"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.assert_same_field(other);
        match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Scalar {
                field: self.field.clone(),
                value: Value::Rat(a - b),
            },
            (Value::Fin { len, c: a }, Value::Fin { c: b, .. }) => {
                let (p, _, _) = self.field.finite_parts();
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for i in 0..*len as usize {
                    c[i] = subm(a[i], b[i], p);
                }
                Scalar {
                    field: self.field.clone(),
                    value: Value::Fin { len: *len, c },
                }
            }
            _ => unreachable!("value kind matches field kind"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match &self.value {
            Value::Rat(a) => Scalar {
                field: self.field.clone(),
                value: Value::Rat(-a),
            },
            Value::Fin { len, c: a } => {
                let (p, _, _) = self.field.finite_parts();
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for i in 0..*len as usize {
                    c[i] = if a[i] == 0 { 0 } else { p - a[i] };
                }
                Scalar {
                    field: self.field.clone(),
                    value: Value::Fin { len: *len, c },
                }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same_field(other);
        match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Scalar {
                field: self.field.clone(),
                value: Value::Rat(a * b),
            },
            (Value::Fin { len, c: a }, Value::Fin { c: b, .. }) => {
                let (p, k, modulus) = self.field.finite_parts();
                let n = *len as usize;
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                if n == 1 {
                    c[0] = mulm(a[0], b[0], p);
                } else {
                    // Convolution, then reduction by the monic modulus.
                    let mut conv = [0u128; 2 * MAX_EXTENSION_DEGREE - 1];
                    for i in 0..n {
                        if a[i] == 0 {
                            continue;
                        }
                        for j in 0..n {
                            conv[i + j] += a[i] as u128 * b[j] as u128;
                        }
                    }
                    let pw = p as u128;
                    let mut red = [0u64; 2 * MAX_EXTENSION_DEGREE - 1];
                    for (r, v) in red.iter_mut().zip(conv.iter()) {
                        *r = (v % pw) as u64;
                    }
                    for i in (k..2 * n - 1).rev() {
                        let coef = red[i];
                        if coef == 0 {
                            continue;
                        }
                        red[i] = 0;
                        for (j, &mj) in modulus[..k].iter().enumerate() {
                            red[i - k + j] = subm(red[i - k + j], mulm(coef, mj, p), p);
                        }
                    }
                    c[..k].copy_from_slice(&red[..k]);
                }
                Scalar {
                    field: self.field.clone(),
                    value: Value::Fin { len: *len, c },
                }
            }
            _ => unreachable!("value kind matches field kind"),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.value {
            Value::Rat(a) => Ok(Scalar {
                field: self.field.clone(),
                value: Value::Rat(a.recip()),
            }),
            Value::Fin { len, c: a } => {
                let (p, k, modulus) = self.field.finite_parts();
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                if k == 1 {
                    c[0] = invm(a[0], p);
                } else {
                    // Extended Euclid over F_p[x] against the modulus.
                    let mut r0: Vec<u64> = modulus[..=k].to_vec();
                    let mut r1: Vec<u64> = a[..k].to_vec();
                    fpoly_trim(&mut r1);
                    let mut t0: Vec<u64> = vec![];
                    let mut t1: Vec<u64> = vec![1];
                    while !r1.is_empty() && r1.len() > 1 {
                        let (q, r) = fpoly_divrem(&r0, &r1, p);
                        let qt1 = fpoly_mul(&q, &t1, p);
                        let mut t2 = fpoly_sub(&t0, &qt1, p);
                        fpoly_trim(&mut t2);
                        r0 = std::mem::replace(&mut r1, r);
                        t0 = std::mem::replace(&mut t1, t2);
                    }
                    debug_assert!(!r1.is_empty(), "element is a unit");
                    let scale = invm(r1[0], p);
                    for (i, &t) in t1.iter().enumerate() {
                        c[i] = mulm(t, scale, p);
                    }
                }
                Ok(Scalar {
                    field: self.field.clone(),
                    value: Value::Fin { len: *len, c },
                })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            exp >>= 1;
        }
        Ok(acc)
    }
}

fn fpoly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        out[i] = subm(ai, bi, p);
    }
    fpoly_trim(&mut out);
    out
}

fn fpoly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    let db = b.len() - 1;
    let mut r = a.to_vec();
    fpoly_trim(&mut r);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = invm(b[db], p);
    while r.len() > db {
        let c = mulm(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - db;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = subm(r[shift + j], mulm(c, bj, p), p);
        }
        fpoly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    fpoly_trim(&mut q);
    (q, r)
}

/// Checked arithmetic entry point: verifies the operands share a field and
/// reports division by zero.
pub fn arith(op: ArithOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(
            a.field.spec_string(),
            b.field.spec_string(),
        ));
    }
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Sub => Ok(a.sub(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Fin { len, c } => {
                let parts: Vec<String> = c[..*len as usize].iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        assert!(Field::finite(101).is_ok());
        assert_eq!(Field::finite(4), Err(Error::NonPrimeCharacteristic(4)));
        assert_eq!(Field::finite(1), Err(Error::NonPrimeCharacteristic(1)));
        assert_eq!(
            Field::parse_spec("4"),
            Err(Error::NonPrimeCharacteristic(4))
        );
    }

    #[test]
    fn extension_construction_and_generator_square() {
        let f4 = Field::parse_spec("2^2:modulus=1,1,1").unwrap();
        assert_eq!(f4.order_u64(), Some(4));
        let x = f4.generator().unwrap();
        // x^2 = x + 1 under x^2 + x + 1 = 0.
        let expect = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(x.mul(&x), expect);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 over F_2 and x^2 + 1 = (x+1)^2 over F_2.
        assert!(matches!(
            Field::extension(2, &[0, 0, 1]),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            Field::extension(2, &[1, 0, 1]),
            Err(Error::ReducibleModulus(_))
        ));
        // x^2 - 1 over F_5.
        assert!(matches!(
            Field::extension(5, &[4, 0, 1]),
            Err(Error::ReducibleModulus(_))
        ));
    }

    #[test]
    fn irreducibility_matches_exhaustive_search() {
        // Oracle: a monic polynomial of degree <= 4 over F_q is reducible
        // iff it has a monic factor of degree 1 or 2, found by brute force.
        for p in [2u64, 3, 5] {
            for k in 2..=4usize {
                let mut coeffs = vec![0u64; k + 1];
                coeffs[k] = 1;
                let total = p.pow(k as u32);
                for idx in 0..total {
                    let mut v = idx;
                    for c in coeffs.iter_mut().take(k) {
                        *c = v % p;
                        v /= p;
                    }
                    let fast = fpoly_is_irreducible(&coeffs, p);
                    let slow = exhaustive_irreducible(&coeffs, p);
                    assert_eq!(fast, slow, "p={p} coeffs={coeffs:?}");
                }
            }
        }
    }

    fn exhaustive_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        let max_factor_degree = k / 2;
        for d in 1..=max_factor_degree {
            let mut g = vec![0u64; d + 1];
            g[d] = 1;
            let total = p.pow(d as u32);
            for idx in 0..total {
                let mut v = idx;
                for c in g.iter_mut().take(d) {
                    *c = v % p;
                    v /= p;
                }
                if fpoly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::finite(5).unwrap();
        let two = f5.embed_int(2);
        let three = f5.embed_int(3);
        assert_eq!(two.mul(&three), f5.one());
        assert_eq!(two.inv().unwrap(), three);
        assert!(two.add(&three).is_zero());
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(f5.embed_int(-1), f5.embed_int(4));
    }

    #[test]
    fn extension_inverse_and_fermat() {
        for spec in [
            "2^2:modulus=1,1,1",
            "3^2:modulus=1,0,1",
            "2^3:modulus=1,1,0,1",
        ] {
            let f = Field::parse_spec(spec).unwrap();
            let q = f.order_u64().unwrap() as i64;
            for a in f.enumerate().unwrap() {
                assert_eq!(a.pow(q).unwrap(), a, "x^q = x in {spec}");
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn rational_arithmetic_is_canonical() {
        let q = Field::rationals();
        let half = q.parse_scalar("2/4").unwrap();
        assert_eq!(half.to_string(), "1/2");
        let one = half.add(&q.parse_scalar("1/2").unwrap());
        assert_eq!(one, q.one());
        assert_eq!(q.embed_int(3).to_string(), "3");
        assert_eq!(q.parse_scalar("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse_scalar("1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn arith_reports_field_mismatch() {
        let f2 = Field::finite(2).unwrap();
        let f3 = Field::finite(3).unwrap();
        let e = arith(ArithOp::Add, &f2.one(), &f3.one());
        assert_eq!(e, Err(Error::FieldMismatch("2".into(), "3".into())));
    }

    #[test]
    fn enumeration_order_is_lex_on_coefficients() {
        let f4 = Field::parse_spec("2^2:modulus=1,1,1").unwrap();
        let elems = f4.enumerate().unwrap();
        let strings: Vec<String> = elems.iter().map(Scalar::to_string).collect();
        assert_eq!(strings, ["0,0", "0,1", "1,0", "1,1"]);
        assert!(elems[0].is_zero());
        assert_eq!(Field::rationals().enumerate(), Err(Error::InfiniteField));
        assert_eq!(Field::finite(3).unwrap().enumerate().unwrap().len(), 3);
    }

    #[test]
    fn quadratic_extension_of_f5_uses_least_nonresidue() {
        // Squares mod 5 are {0, 1, 4}, so 2 is the least nonresidue and
        // the modulus is x^2 - 2 = x^2 + 3.
        let f5 = Field::finite(5).unwrap();
        let squares: std::collections::HashSet<u64> = (0..5).map(|a| (a * a) % 5).collect();
        assert!(!squares.contains(&2));
        let (f25, emb) = f5.quadratic_extension().unwrap();
        assert_eq!(f25.spec_string(), "5^2:modulus=3,0,1");
        let g = f25.generator().unwrap();
        assert_eq!(g.mul(&g), emb.embed(&f5.embed_int(2)));
        // The embedding is a ring homomorphism on a spot check.
        let a = f5.embed_int(3);
        let b = f5.embed_int(4);
        assert_eq!(emb.embed(&a.mul(&b)), emb.embed(&a).mul(&emb.embed(&b)));
    }

    #[test]
    fn quadratic_extension_of_f2_and_of_f4() {
        let f2 = Field::finite(2).unwrap();
        let (f4, _) = f2.quadratic_extension().unwrap();
        assert_eq!(f4.spec_string(), "2^2:modulus=1,1,1");

        let (f16, emb) = f4.quadratic_extension().unwrap();
        assert_eq!(f16.order_u64(), Some(16));
        // The image of the F_4 generator still satisfies x^2 + x + 1 = 0.
        let rho = emb.embed(&f4.generator().unwrap());
        let val = rho.mul(&rho).add(&rho).add(&f16.one());
        assert!(val.is_zero());
        // Embedding is injective on all four elements.
        let images: std::collections::HashSet<Scalar> = f4
            .enumerate()
            .unwrap()
            .iter()
            .map(|a| emb.embed(a))
            .collect();
        assert_eq!(images.len(), 4);
    }

    #[test]
    fn spec_string_round_trip() {
        for spec in ["QQ", "7", "101", "2^2:modulus=1,1,1", "5^2:modulus=3,0,1"] {
            let f = Field::parse_spec(spec).unwrap();
            assert_eq!(f.spec_string(), spec);
            assert_eq!(Field::parse_spec(&f.spec_string()).unwrap(), f);
        }
    }

    #[test]
    fn scalar_parse_round_trip() {
        let f9 = Field::parse_spec("3^2:modulus=1,0,1").unwrap();
        for s in f9.enumerate().unwrap() {
            assert_eq!(f9.parse_scalar(&s.to_string()).unwrap(), s);
        }
        let q = Field::rationals();
        for text in ["0", "-7", "22/7"] {
            let s = q.parse_scalar(text).unwrap();
            assert_eq!(q.parse_scalar(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn negative_coefficients_reduce() {
        let f7 = Field::finite(7).unwrap();
        assert_eq!(f7.parse_scalar("-1").unwrap(), f7.embed_int(6));
        let f4 = Field::parse_spec("2^2:modulus=1,1,1").unwrap();
        assert_eq!(
            f4.parse_scalar("-1,3").unwrap(),
            f4.from_coeffs(&[1, 1]).unwrap()
        );
    }
}
