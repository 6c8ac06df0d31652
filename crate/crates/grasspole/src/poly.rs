//! Dense univariate polynomials over an exact field.
//!
//! Coefficients are stored ascending with no trailing zeros, so the zero
//! polynomial has an empty coefficient list and its degree is the
//! distinguished sentinel `Degree::NegInf`. Binomial coefficients for the
//! Hasse derivative are computed over the integers with arbitrary
//! precision and only then reduced into the field; in-field factorial
//! division would vanish in positive characteristic.

use crate::error::{Error, Result};
use crate::field::{Field, FieldEmbedding, Scalar};
use num::{BigInt, BigUint, One};
use std::cell::RefCell;
use std::fmt;

/// Degree with an explicit sentinel for the zero polynomial, ordered below
/// every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Of(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Of(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Of(d) => write!(f, "{d}"),
        }
    }
}

/// Pascal triangle over arbitrary-precision integers, extended on demand.
pub struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new() -> BinomialTable {
        BinomialTable {
            rows: vec![vec![BigUint::one()]],
        }
    }

    pub fn get(&mut self, j: usize, i: usize) -> BigUint {
        if i > j {
            return BigUint::ZERO;
        }
        while self.rows.len() <= j {
            let prev = self.rows.last().unwrap();
            let n = prev.len();
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for t in 1..n {
                row.push(&prev[t - 1] + &prev[t]);
            }
            row.push(BigUint::one());
            self.rows.push(row);
        }
        self.rows[j][i].clone()
    }
}

impl Default for BinomialTable {
    fn default() -> Self {
        Self::new()
    }
}

thread_local! {
    static BINOMIALS: RefCell<BinomialTable> = RefCell::new(BinomialTable::new());
}

/// C(j, i) as an exact integer.
pub fn binomial_integer(j: usize, i: usize) -> BigUint {
    BINOMIALS.with(|t| t.borrow_mut().get(j, i))
}

/// C(j, i) reduced into the field.
pub fn binomial_in_field(j: usize, i: usize, field: &Field) -> Scalar {
    field.embed_bigint(&BigInt::from(binomial_integer(j, i)))
}

/// A univariate polynomial over a fixed field, canonical ascending
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field().clone();
        let mut p = Poly {
            field,
            coeffs: vec![c],
        };
        p.normalize();
        p
    }

    /// The variable s.
    pub fn var(field: &Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// c * s^e.
    pub fn monomial(c: Scalar, e: usize) -> Poly {
        let field = c.field().clone();
        if c.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![field.zero(); e + 1];
        coeffs[e] = c;
        Poly { field, coeffs }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Scalar>) -> Poly {
        for c in &coeffs {
            assert!(c.field() == field, "coefficient from {}", c.field());
        }
        let mut p = Poly {
            field: field.clone(),
            coeffs,
        };
        p.normalize();
        p
    }

    /// Embeds small integer coefficients; convenient in tests.
    pub fn from_int_coeffs(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.embed_int(c)).collect())
    }

    /// Parses the external encoding: canonical element strings, ascending.
    pub fn from_coeff_strings<S: AsRef<str>>(field: &Field, coeffs: &[S]) -> Result<Poly> {
        let parsed: Vec<Scalar> = coeffs
            .iter()
            .map(|c| field.parse_scalar(c.as_ref()))
            .collect::<Result<_>>()?;
        Ok(Poly::from_coeffs(field, parsed))
    }

    /// Monic product of (s - r) over the given roots.
    pub fn from_roots(field: &Field, roots: &[Scalar]) -> Poly {
        let mut acc = Poly::one(field);
        for r in roots {
            let factor = Poly::from_coeffs(field, vec![r.neg(), field.one()]);
            acc = acc.mul(&factor);
        }
        acc
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map(Scalar::is_zero) == Some(true) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of s^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Of(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().map(Scalar::is_one) == Some(true)
    }

    fn assert_same_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "mixed fields {} and {}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        let mut p = Poly {
            field: self.field.clone(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).sub(&other.coeff(i)));
        }
        let mut p = Poly {
            field: self.field.clone(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut p = Poly {
            field: self.field.clone(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        assert!(c.field() == &self.field, "scale from {}", c.field());
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Multiplication by s^e.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        assert!(x.field() == &self.field, "eval at {} point", x.field());
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Divides by the leading coefficient. Returns the monic polynomial
    /// and the leading coefficient that was removed.
    pub fn monic_normalize(&self) -> Result<(Poly, Scalar)> {
        let lead = self.leading_coeff().ok_or(Error::ZeroPolynomial)?.clone();
        let inv = lead.inv().expect("leading coefficient is nonzero");
        Ok((self.scale(&inv), lead))
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.assert_same_field(divisor);
        let d_lead = divisor.leading_coeff().ok_or(Error::DivisionByZero)?;
        let d_deg = divisor.coeffs.len() - 1;
        let lead_inv = d_lead.inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = if rem.len() > d_deg {
            vec![self.field.zero(); rem.len() - d_deg]
        } else {
            Vec::new()
        };
        while rem.len() > d_deg {
            let c = rem.last().unwrap().mul(&lead_inv);
            let shift = rem.len() - 1 - d_deg;
            if !c.is_zero() {
                quot[shift] = c.clone();
                for (j, dj) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].sub(&c.mul(dj));
                }
            }
            while rem.last().map(Scalar::is_zero) == Some(true) {
                rem.pop();
            }
            if rem.len() <= d_deg {
                break;
            }
        }
        let q = Poly::from_coeffs(&self.field, quot);
        let r = Poly::from_coeffs(&self.field, rem);
        Ok((q, r))
    }

    /// Division known to be exact; a nonzero remainder is an internal
    /// arithmetic error.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("inexact division: remainder {r}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        match a.monic_normalize() {
            Ok((monic, _)) => monic,
            Err(_) => a,
        }
    }

    /// i-th classical derivative: s^j maps to (j)(j-1)...(j-i+1) s^{j-i},
    /// with the falling factorial computed over the integers and reduced.
    pub fn classical_derivative(&self, i: usize) -> Poly {
        if i == 0 {
            return self.clone();
        }
        let mut coeffs = Vec::new();
        for (j, u) in self.coeffs.iter().enumerate().skip(i) {
            let mut fall = BigInt::one();
            for k in 0..i {
                fall *= BigInt::from((j - k) as u64);
            }
            coeffs.push(self.field.embed_bigint(&fall).mul(u));
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// i-th Hasse derivative: s^j maps to C(j, i) s^{j-i} with the
    /// binomial reduced into the field.
    pub fn hasse_derivative(&self, i: usize) -> Poly {
        if i == 0 {
            return self.clone();
        }
        let mut coeffs = Vec::new();
        for (j, u) in self.coeffs.iter().enumerate().skip(i) {
            coeffs.push(binomial_in_field(j, i, &self.field).mul(u));
        }
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// All roots in a finite field with multiplicities, by exhaustive
    /// evaluation and repeated division.
    pub fn roots_in_field(&self) -> Result<Vec<(Scalar, usize)>> {
        if self.field.is_rationals() {
            return Err(Error::InfiniteField);
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        let mut f = self.clone();
        for x in self.field.enumerate()? {
            if f.degree() == Degree::Of(0) {
                break;
            }
            let mut mult = 0usize;
            let linear = Poly::from_coeffs(&self.field, vec![x.neg(), self.field.one()]);
            while f.eval(&x).is_zero() && !matches!(f.degree(), Degree::Of(0)) {
                f = f.div_exact(&linear).expect("root divides");
                mult += 1;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        Ok(out)
    }

    /// Applies a field embedding coefficientwise.
    pub fn map_into(&self, emb: &FieldEmbedding) -> Poly {
        Poly::from_coeffs(
            emb.target(),
            self.coeffs.iter().map(|c| emb.embed(c)).collect(),
        )
    }

    /// External encoding: canonical element strings, ascending degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(Scalar::to_string).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let wrap = self.field.extension_degree() > 1;
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = c.to_string();
            let show_coeff = e == 0 || !c.is_one();
            if show_coeff {
                if wrap {
                    write!(f, "({cs})")?;
                } else {
                    f.write_str(&cs)?;
                }
            }
            if e > 0 {
                if show_coeff {
                    f.write_str("*")?;
                }
                if e == 1 {
                    f.write_str("s")?;
                } else {
                    write!(f, "s^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::finite(q).unwrap()
    }

    #[test]
    fn degree_ordering_and_sentinel() {
        assert!(Degree::NegInf < Degree::Of(0));
        assert!(Degree::Of(0) < Degree::Of(3));
        let z = Poly::zero(&f(2));
        assert_eq!(z.degree(), Degree::NegInf);
        assert_eq!(Poly::one(&f(2)).degree(), Degree::Of(0));
    }

    #[test]
    fn freshman_dream_in_char_two() {
        let f2 = f(2);
        let s_plus_1 = Poly::from_int_coeffs(&f2, &[1, 1]);
        let sq = s_plus_1.mul(&s_plus_1);
        assert_eq!(sq, Poly::from_int_coeffs(&f2, &[1, 0, 1]));
    }

    #[test]
    fn eval_is_plain_substitution() {
        let f2 = f(2);
        let p = Poly::from_int_coeffs(&f2, &[1, 1, 0, 1]);
        assert_eq!(p.eval(&f2.one()), f2.one());
        assert_eq!(p.eval(&f2.zero()), f2.one());
    }

    #[test]
    fn monic_normalize_divides_by_leading() {
        let f5 = f(5);
        let p = Poly::from_int_coeffs(&f5, &[3, 0, 3]);
        let (monic, lead) = p.monic_normalize().unwrap();
        assert_eq!(monic, Poly::from_int_coeffs(&f5, &[1, 0, 1]));
        assert_eq!(lead, f5.embed_int(3));
        assert_eq!(
            Poly::zero(&f5).monic_normalize().unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn hasse_derivative_examples() {
        let f2 = f(2);
        let s2 = Poly::from_int_coeffs(&f2, &[0, 0, 1]);
        assert!(s2.hasse_derivative(1).is_zero());

        let q = Field::rationals();
        let s3 = Poly::from_int_coeffs(&q, &[0, 0, 0, 1]);
        assert_eq!(s3.hasse_derivative(2), Poly::from_int_coeffs(&q, &[0, 3]));

        let u = Poly::from_int_coeffs(&q, &[7, -2, 5, 1]);
        assert_eq!(u.hasse_derivative(0), u);
    }

    #[test]
    fn classical_derivative_examples() {
        let q = Field::rationals();
        let s3 = Poly::from_int_coeffs(&q, &[0, 0, 0, 1]);
        assert_eq!(
            s3.classical_derivative(2),
            Poly::from_int_coeffs(&q, &[0, 6])
        );
        let f2 = f(2);
        let s4 = Poly::from_int_coeffs(&f2, &[0, 0, 0, 0, 1]);
        assert!(s4.classical_derivative(1).is_zero());
    }

    #[test]
    fn classical_equals_factorial_times_hasse_in_char_zero() {
        let q = Field::rationals();
        let s5 = Poly::monomial(q.one(), 5);
        let mut factorial = 1i64;
        for i in 0..=5usize {
            if i > 0 {
                factorial *= i as i64;
            }
            let lhs = s5.classical_derivative(i);
            let rhs = s5.hasse_derivative(i).scale(&q.embed_int(factorial));
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn classical_vanishes_above_characteristic_but_hasse_does_not() {
        let f3 = f(3);
        for j in 0..10usize {
            let m = Poly::monomial(f3.one(), j);
            assert!(m.classical_derivative(3).is_zero(), "d^3 s^{j}");
        }
        for i in 0..10usize {
            let m = Poly::monomial(f3.one(), i);
            assert_eq!(m.hasse_derivative(i), Poly::one(&f3), "hasse^{i} s^{i}");
        }
    }

    #[test]
    fn binomial_reduction() {
        assert_eq!(binomial_integer(6, 4), BigUint::from(15u32));
        assert_eq!(binomial_in_field(6, 4, &f(2)), f(2).one());
        assert_eq!(binomial_integer(3, 5), BigUint::ZERO);
        assert_eq!(
            binomial_in_field(10, 5, &Field::rationals()),
            Field::rationals().embed_int(252)
        );
    }

    #[test]
    fn gcd_is_monic() {
        let q = Field::rationals();
        let a = Poly::from_int_coeffs(&q, &[-1, 0, 1]);
        let b = Poly::from_int_coeffs(&q, &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        let a2 = a.scale(&q.embed_int(7));
        assert_eq!(a2.gcd(&b), b);
        assert!(Poly::zero(&q).gcd(&Poly::zero(&q)).is_zero());
    }

    #[test]
    fn roots_with_multiplicity() {
        let f2 = f(2);
        let p = Poly::from_int_coeffs(&f2, &[0, 1, 1]);
        let roots = p.roots_in_field().unwrap();
        assert_eq!(roots, vec![(f2.zero(), 1), (f2.one(), 1)]);

        let f5 = f(5);
        let dbl = Poly::from_roots(&f5, &[f5.embed_int(2), f5.embed_int(2)]);
        assert_eq!(dbl.roots_in_field().unwrap(), vec![(f5.embed_int(2), 2)]);

        let irr = Poly::from_int_coeffs(&f2, &[1, 1, 1]);
        assert!(irr.roots_in_field().unwrap().is_empty());

        assert_eq!(
            Poly::one(&Field::rationals()).roots_in_field().unwrap_err(),
            Error::InfiniteField
        );
    }

    #[test]
    fn divrem_round_trip() {
        let f7 = f(7);
        let a = Poly::from_int_coeffs(&f7, &[3, 1, 4, 1, 5]);
        let b = Poly::from_int_coeffs(&f7, &[2, 0, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(b.mul(&q).add(&r), a);
        assert!(r.degree() < b.degree());
        assert!(a.divrem(&Poly::zero(&f7)).is_err());
    }

    #[test]
    fn from_roots_expands() {
        let f5 = f(5);
        let p = Poly::from_roots(&f5, &[f5.embed_int(1), f5.embed_int(2)]);
        // (s-1)(s-2) = s^2 - 3s + 2.
        assert_eq!(p, Poly::from_int_coeffs(&f5, &[2, -3, 1]));
        assert!(p.is_monic());
    }

    #[test]
    fn display_and_string_round_trip() {
        let f5 = f(5);
        let p = Poly::from_int_coeffs(&f5, &[1, 0, 2]);
        assert_eq!(p.to_string(), "2*s^2 + 1");
        assert_eq!(p.coeff_strings(), vec!["1", "0", "2"]);
        let back = Poly::from_coeff_strings(&f5, &p.coeff_strings()).unwrap();
        assert_eq!(back, p);
        assert_eq!(Poly::zero(&f5).to_string(), "0");
        assert_eq!(Poly::var(&f5).to_string(), "s");

        let f4 = Field::parse_spec("2^2:modulus=1,1,1").unwrap();
        let g = f4.generator().unwrap();
        let pe = Poly::from_coeffs(&f4, vec![g.clone(), f4.one()]);
        assert_eq!(pe.to_string(), "s + (0,1)");
    }

    #[test]
    fn hasse_product_rule_spot_check() {
        let f3 = f(3);
        let a = Poly::from_int_coeffs(&f3, &[1, 2, 0, 1]);
        let b = Poly::from_int_coeffs(&f3, &[2, 1, 1]);
        for i in 0..=6usize {
            let lhs = a.mul(&b).hasse_derivative(i);
            let mut rhs = Poly::zero(&f3);
            for t in 0..=i {
                rhs = rhs.add(&a.hasse_derivative(t).mul(&b.hasse_derivative(i - t)));
            }
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn hasse_composition_rule_on_monomials() {
        let q = Field::rationals();
        for d in 0..=12usize {
            let m = Poly::monomial(q.one(), d);
            for i in 0..=4usize {
                for j in 0..=4usize {
                    let lhs = m.hasse_derivative(j).hasse_derivative(i);
                    let rhs = m
                        .hasse_derivative(i + j)
                        .scale(&binomial_in_field(i + j, i, &q));
                    assert_eq!(lhs, rhs, "d={d} i={i} j={j}");
                }
            }
        }
    }
}
