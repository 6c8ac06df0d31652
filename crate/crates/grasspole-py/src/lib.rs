//! Python bindings for the grasspole library.
//!
//! Conventions mirror the JSON report format: field elements are strings
//! in the field's display form, constant matrices are nested lists of
//! element strings, polynomials are lists of ascending coefficient
//! strings, and polynomial matrices nest those.  Census, fiber, and
//! certificate reports come back as JSON strings ready for `json.loads`.

use num::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use grasspole as gp;

fn perr(e: gp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_const(field: &gp::Field, rows: &[Vec<String>]) -> PyResult<gp::ConstMatrix> {
    let rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| field.parse_scalar(c))
                .collect::<gp::Result<Vec<gp::Scalar>>>()
        })
        .collect::<gp::Result<Vec<Vec<gp::Scalar>>>>()
        .map_err(perr)?;
    gp::ConstMatrix::from_rows(field, rows).map_err(perr)
}

fn parse_poly(field: &gp::Field, coeffs: &[String]) -> PyResult<gp::Poly> {
    gp::Poly::from_coeff_strings(field, coeffs).map_err(perr)
}

fn parse_poly_matrix(field: &gp::Field, rows: &[Vec<Vec<String>>]) -> PyResult<gp::PolyMatrix> {
    let rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| parse_poly(field, cell))
                .collect::<PyResult<Vec<gp::Poly>>>()
        })
        .collect::<PyResult<Vec<Vec<gp::Poly>>>>()?;
    gp::PolyMatrix::from_rows(field, rows).map_err(perr)
}

fn const_to_lists(m: &gp::ConstMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

/// An exact field: a prime field F_p, an extension F_{p^k} with an
/// explicit modulus, or the rationals ("QQ").
#[pyclass(name = "Field", skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: gp::Field,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyField {
            inner: gp::Field::parse_spec(spec).map_err(perr)?,
        })
    }

    fn spec(&self) -> String {
        self.inner.spec_string()
    }

    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    fn extension_degree(&self) -> usize {
        self.inner.extension_degree()
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    fn order(&self) -> Option<BigUint> {
        self.inner.order()
    }

    fn zero(&self) -> String {
        self.inner.zero().to_string()
    }

    fn one(&self) -> String {
        self.inner.one().to_string()
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = self.pair(a, b)?;
        Ok(a.add(&b).to_string())
    }

    fn sub(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = self.pair(a, b)?;
        Ok(a.sub(&b).to_string())
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = self.pair(a, b)?;
        Ok(a.mul(&b).to_string())
    }

    fn div(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = self.pair(a, b)?;
        a.div(&b).map(|c| c.to_string()).map_err(perr)
    }

    fn neg(&self, a: &str) -> PyResult<String> {
        Ok(self.inner.parse_scalar(a).map_err(perr)?.neg().to_string())
    }

    fn inv(&self, a: &str) -> PyResult<String> {
        self.inner
            .parse_scalar(a)
            .map_err(perr)?
            .inv()
            .map(|c| c.to_string())
            .map_err(perr)
    }

    /// All elements of a finite field, in enumeration order.
    fn elements(&self) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .enumerate()
            .map_err(perr)?
            .iter()
            .map(gp::Scalar::to_string)
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Field({:?})", self.inner.spec_string())
    }
}

impl PyField {
    fn pair(&self, a: &str, b: &str) -> PyResult<(gp::Scalar, gp::Scalar)> {
        Ok((
            self.inner.parse_scalar(a).map_err(perr)?,
            self.inner.parse_scalar(b).map_err(perr)?,
        ))
    }
}

/// A linear system, either a state space (A, B, C) or a left matrix
/// fraction (N, D).
#[pyclass(name = "System", skip_from_py_object)]
#[derive(Clone)]
struct PySystem {
    inner: gp::SystemInput,
}

impl PySystem {
    fn factored_inner(&self) -> PyResult<gp::FactoredSystem> {
        self.inner.to_factored().map_err(perr)
    }
}

#[pymethods]
impl PySystem {
    /// Build a state-space system from entry-string matrices.
    #[staticmethod]
    fn state_space(
        field: &PyField,
        a: Vec<Vec<String>>,
        b: Vec<Vec<String>>,
        c: Vec<Vec<String>>,
    ) -> PyResult<Self> {
        let a = parse_const(&field.inner, &a)?;
        let b = parse_const(&field.inner, &b)?;
        let c = parse_const(&field.inner, &c)?;
        Ok(PySystem {
            inner: gp::SystemInput::State(gp::StateSpace::new(a, b, c).map_err(perr)?),
        })
    }

    /// Build a factored system from coefficient-list matrices N and D.
    #[staticmethod]
    fn factored(
        field: &PyField,
        n: Vec<Vec<Vec<String>>>,
        d: Vec<Vec<Vec<String>>>,
    ) -> PyResult<Self> {
        let n = parse_poly_matrix(&field.inner, &n)?;
        let d = parse_poly_matrix(&field.inner, &d)?;
        Ok(PySystem {
            inner: gp::SystemInput::Factored(gp::FactoredSystem::new(n, d).map_err(perr)?),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PySystem {
            inner: gp::system_from_json(&v).map_err(perr)?,
        })
    }

    fn to_json(&self) -> String {
        gp::system_to_json(&self.inner).to_string()
    }

    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    fn m(&self) -> PyResult<usize> {
        Ok(self.factored_inner()?.m())
    }

    fn p(&self) -> PyResult<usize> {
        Ok(self.factored_inner()?.p())
    }

    fn degree(&self) -> PyResult<usize> {
        Ok(self.factored_inner()?.degree())
    }

    fn is_coprime(&self) -> PyResult<bool> {
        Ok(self.factored_inner()?.is_coprime())
    }

    /// The left coprime factorization as a new factored system.
    fn factorize(&self) -> PyResult<Self> {
        Ok(PySystem {
            inner: gp::SystemInput::Factored(self.factored_inner()?),
        })
    }

    /// Maximal minors of [N | D] in lexicographic column order, as
    /// ascending coefficient lists.
    fn minors(&self) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .factored_inner()?
            .minors()
            .iter()
            .map(gp::Poly::coeff_strings)
            .collect())
    }

    /// Closed-loop characteristic polynomial for a static feedback K
    /// (an m x p matrix of entry strings).
    fn charpoly(&self, k: Vec<Vec<String>>) -> PyResult<Vec<String>> {
        let fs = self.factored_inner()?;
        let k = parse_const(fs.field(), &k)?;
        let pk = gp::ProjectiveCompensator::from_feedback(&gp::Compensator::new(k));
        Ok(gp::charpoly_via_factors(&fs, &pk)
            .map_err(perr)?
            .coeff_strings())
    }

    /// "degenerate", "nondegenerate", or "unsupported" (shapes beyond
    /// the exact test's reach).
    fn degeneracy_exact(&self) -> PyResult<String> {
        Ok(
            match gp::is_degenerate_exact(&self.factored_inner()?).map_err(perr)? {
                gp::Degeneracy::Degenerate => "degenerate",
                gp::Degeneracy::Nondegenerate => "nondegenerate",
                gp::Degeneracy::Unsupported => "unsupported",
            }
            .to_string(),
        )
    }

    /// Scan every rational projective compensator; the first annihilated
    /// one is returned as an entry-string matrix, or None.
    fn degeneracy_scan(&self) -> PyResult<Option<Vec<Vec<String>>>> {
        Ok(gp::is_degenerate_rational(&self.factored_inner()?)
            .map_err(perr)?
            .map(|w| const_to_lists(w.matrix())))
    }

    /// Exhaustive pole placement census ("affine" or "projective") as a
    /// JSON string.
    fn census(&self, mode: &str) -> PyResult<String> {
        let mode = match mode {
            "affine" => gp::CensusMode::Affine,
            "projective" => gp::CensusMode::Projective,
            other => {
                return Err(PyValueError::new_err(format!(
                    "census mode must be \"affine\" or \"projective\", not {other:?}"
                )))
            }
        };
        let report = gp::census(&self.factored_inner()?, mode).map_err(perr)?;
        Ok(gp::report::census_to_json(&report).to_string())
    }

    /// Solve the fiber over a monic degree-4 target (ascending
    /// coefficient strings) for a 2x2 system; returns a JSON string.
    fn fiber(&self, target: Vec<String>) -> PyResult<String> {
        let fs = self.factored_inner()?;
        let target = parse_poly(fs.field(), &target)?;
        let sol = gp::fiber_solve_2x2(&fs, &target).map_err(perr)?;
        Ok(gp::report::fiber_to_json(&sol).to_string())
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            gp::SystemInput::State(ss) => format!(
                "System(state_space, n={}, m={}, p={})",
                ss.n(),
                ss.m(),
                ss.p()
            ),
            gp::SystemInput::Factored(fs) => format!(
                "System(factored, m={}, p={}, degree={})",
                fs.m(),
                fs.p(),
                fs.degree()
            ),
        }
    }
}

/// Number of pole placements of a generic m-input p-output system of
/// degree m*p over the complex numbers.
#[pyfunction]
fn schubert_number(m: usize, p: usize) -> BigUint {
    gp::schubert_number(m, p)
}

/// Number of m-dimensional subspaces of F_q^n.
#[pyfunction]
fn gaussian_binomial(n: usize, m: usize, q: u64) -> BigUint {
    gp::gaussian_binomial(n, m, q)
}

/// Osculating normal curve system; rows are derivatives of the rational
/// normal curve (divided-power derivatives when `hasse` is set).
#[pyfunction]
#[pyo3(signature = (field, p, m, hasse = false))]
fn onc(field: &PyField, p: usize, m: usize, hasse: bool) -> PyResult<PySystem> {
    let mat = if hasse {
        gp::osculating_curve_hasse(p, m, &field.inner)
    } else {
        gp::osculating_curve_classical(p, m, &field.inner)
    };
    Ok(PySystem {
        inner: gp::SystemInput::Factored(gp::FactoredSystem::from_full(&mat, m).map_err(perr)?),
    })
}

/// Nondegenerate monomial system built from a Cauchy coefficient block;
/// degree defaults to the minimum m*p.
#[pyfunction]
#[pyo3(signature = (field, p, m, n = None))]
fn cauchy_system(field: &PyField, p: usize, m: usize, n: Option<usize>) -> PyResult<PySystem> {
    let ms = gp::cauchy_monomial_system(p, m, n, &field.inner).map_err(perr)?;
    Ok(PySystem {
        inner: gp::SystemInput::Factored(ms.to_factored().map_err(perr)?),
    })
}

/// Realize a coefficient matrix and an additive degree grid as a
/// monomial system.
#[pyfunction]
fn monomial_system(
    field: &PyField,
    coeffs: Vec<Vec<String>>,
    degrees: Vec<Vec<usize>>,
) -> PyResult<PySystem> {
    let coeffs = parse_const(&field.inner, &coeffs)?;
    let degrees = gp::DegreeMatrix::new(degrees).map_err(perr)?;
    let ms = gp::monomial_matrix(&coeffs, &degrees).map_err(perr)?;
    Ok(PySystem {
        inner: gp::SystemInput::Factored(ms.to_factored().map_err(perr)?),
    })
}

/// True when every maximal minor of the matrix is nonzero.
#[pyfunction]
fn mds_check(field: &PyField, matrix: Vec<Vec<String>>) -> PyResult<bool> {
    gp::mds_check(&parse_const(&field.inner, &matrix)?).map_err(perr)
}

/// True when every minor of every size is nonzero.
#[pyfunction]
fn superregular_check(field: &PyField, matrix: Vec<Vec<String>>) -> PyResult<bool> {
    Ok(gp::superregular_check(&parse_const(&field.inner, &matrix)?))
}

/// Certificate that no nondegenerate 2x2 degree-4 system over F_2 places
/// poles onto all of P^4(F_2); returns a JSON string.
#[pyfunction]
fn verify_f2() -> PyResult<String> {
    let report = gp::verify_f2_nonsurjectivity().map_err(perr)?;
    Ok(gp::report::f2_to_json(&report).to_string())
}

#[pymodule]
fn grasspole_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(schubert_number, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(onc, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_system, m)?)?;
    m.add_function(wrap_pyfunction!(monomial_system, m)?)?;
    m.add_function(wrap_pyfunction!(mds_check, m)?)?;
    m.add_function(wrap_pyfunction!(superregular_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_f2, m)?)?;
    Ok(())
}
