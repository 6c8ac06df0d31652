//! JSON and CSV encodings for systems and reports.
//!
//! Conventions: field elements are canonical strings; polynomials are
//! arrays of element strings ascending by degree; matrices are nested row
//! arrays; big integers are decimal strings.  JSON objects are emitted
//! with sorted keys, so identical runs are byte identical.  CSV output is
//! limited to census histograms and minor tables; nested structures stay
//! in JSON.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grassmann::PluckerVector;
use crate::matrix::{ConstMatrix, PolyMatrix};
use crate::poleplace::{CensusReport, F2Report, FiberSolution};
use crate::poly::Poly;
use crate::systems::{left_coprime_factorization, FactoredSystem, StateSpace};

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeff_strings().into_iter().map(Value::String).collect())
}

pub fn poly_from_json(field: &Field, v: &Value) -> Result<Poly> {
    let coeffs = as_array(v, "polynomial")?
        .iter()
        .map(|c| as_str(c, "coefficient").map(str::to_string))
        .collect::<Result<Vec<String>>>()?;
    Poly::from_coeff_strings(field, &coeffs)
}

pub fn const_matrix_to_json(m: &ConstMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn const_matrix_from_json(field: &Field, v: &Value) -> Result<ConstMatrix> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|row| {
            as_array(row, "matrix row")?
                .iter()
                .map(|c| field.parse_scalar(as_str(c, "entry")?))
                .collect::<Result<Vec<Scalar>>>()
        })
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    ConstMatrix::from_rows(field, rows)
}

pub fn poly_matrix_to_json(m: &PolyMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| poly_to_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn poly_matrix_from_json(field: &Field, v: &Value) -> Result<PolyMatrix> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|row| {
            as_array(row, "matrix row")?
                .iter()
                .map(|p| poly_from_json(field, p))
                .collect::<Result<Vec<Poly>>>()
        })
        .collect::<Result<Vec<Vec<Poly>>>>()?;
    PolyMatrix::from_rows(field, rows)
}

/// A system as read from a JSON file: either state-space matrices or a
/// left factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemInput {
    State(StateSpace),
    Factored(FactoredSystem),
}

impl SystemInput {
    pub fn field(&self) -> &Field {
        match self {
            SystemInput::State(ss) => ss.field(),
            SystemInput::Factored(fs) => fs.field(),
        }
    }

    /// The system's left coprime factorization: computed for state-space
    /// input, as given for factored input.
    pub fn to_factored(&self) -> Result<FactoredSystem> {
        match self {
            SystemInput::State(ss) => left_coprime_factorization(ss),
            SystemInput::Factored(fs) => Ok(fs.clone()),
        }
    }
}

pub fn system_to_json(sys: &SystemInput) -> Value {
    match sys {
        SystemInput::State(ss) => json!({
            "field": ss.field().spec_string(),
            "kind": "state_space",
            "A": const_matrix_to_json(ss.a()),
            "B": const_matrix_to_json(ss.b()),
            "C": const_matrix_to_json(ss.c()),
        }),
        SystemInput::Factored(fs) => json!({
            "field": fs.field().spec_string(),
            "kind": "factored",
            "N": poly_matrix_to_json(fs.numerator()),
            "D": poly_matrix_to_json(fs.denominator()),
        }),
    }
}

pub fn system_from_json(v: &Value) -> Result<SystemInput> {
    let field = Field::parse_spec(as_str(get(v, "field")?, "field")?)?;
    match as_str(get(v, "kind")?, "kind")? {
        "state_space" => {
            let a = const_matrix_from_json(&field, get(v, "A")?)?;
            let b = const_matrix_from_json(&field, get(v, "B")?)?;
            let c = const_matrix_from_json(&field, get(v, "C")?)?;
            Ok(SystemInput::State(StateSpace::new(a, b, c)?))
        }
        "factored" => {
            let n = poly_matrix_from_json(&field, get(v, "N")?)?;
            let d = poly_matrix_from_json(&field, get(v, "D")?)?;
            Ok(SystemInput::Factored(FactoredSystem::new(n, d)?))
        }
        other => Err(Error::Parse(format!("unknown system kind {other:?}"))),
    }
}

pub fn read_system(path: &std::path::Path) -> Result<SystemInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("invalid JSON in {}: {e}", path.display())))?;
    system_from_json(&v)
}

pub fn plucker_to_json(v: &PluckerVector) -> Value {
    json!({
        "field": v.coords()[0].field().spec_string(),
        "m": v.size(),
        "ambient": v.ambient(),
        "coords": v.coords().iter().map(|c| c.to_string()).collect::<Vec<String>>(),
    })
}

pub fn census_to_json(r: &CensusReport) -> Value {
    json!({
        "field": &r.field,
        "mode": r.mode.to_string(),
        "degree": r.degree,
        "domain_size": r.domain_size,
        "image_size": r.image_size,
        "target_size": r.target_size,
        "dropped": r.dropped,
        "histogram": r.histogram.iter().map(|(k, v)| json!([k, v])).collect::<Vec<Value>>(),
        "missed": &r.missed,
    })
}

pub fn census_histogram_csv(r: &CensusReport) -> String {
    let mut out = String::from("fiber_size,image_points\n");
    for (size, count) in &r.histogram {
        out.push_str(&format!("{size},{count}\n"));
    }
    out
}

/// Rows of (1-based column subset, maximal minor).
pub fn minors_csv(rows: &[(Vec<usize>, Poly)]) -> String {
    let mut out = String::from("columns,minor\n");
    for (cols, minor) in rows {
        let cols: Vec<String> = cols.iter().map(usize::to_string).collect();
        out.push_str(&format!("{},\"{minor}\"\n", cols.join(" ")));
    }
    out
}

pub fn fiber_to_json(s: &FiberSolution) -> Value {
    json!({
        "target": poly_to_json(&s.target),
        "total_multiplicity": s.total_multiplicity,
        "extension_field": &s.extension_field,
        "irrational_discriminant": s.irrational_discriminant.as_ref().map(|d| d.to_string()),
        "entries": s.entries.iter().map(|e| json!({
            "point": plucker_to_json(&e.point),
            "in_extension": e.in_extension,
            "multiplicity": e.multiplicity,
            "k1_invertible": e.k1_invertible,
            "feedback": e.feedback.as_ref().map(|k| const_matrix_to_json(k.matrix())),
        })).collect::<Vec<Value>>(),
    })
}

pub fn f2_to_json(r: &F2Report) -> Value {
    json!({
        "quadric_points": r.quadric_points,
        "off_quadric_points": r.off_quadric_points,
        "all_nonsurjective": r.all_nonsurjective,
        "cases": r.cases.iter().map(|c| json!({
            "kernel": &c.kernel,
            "image_size": c.image_size,
            "missed": &c.missed,
        })).collect::<Vec<Value>>(),
        "canonical_cases": r.canonical_cases.iter().map(|c| json!({
            "kernel": &c.kernel,
            "image_size": c.image_size,
            "row_space_matches": c.row_space_matches,
            "listed_missed": &c.listed_missed,
            "listed_missed_confirmed": c.listed_missed_confirmed,
        })).collect::<Vec<Value>>(),
        "orbit_sizes": &r.orbit_sizes,
        "orbits_match_canonical": r.orbits_match_canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::si_minus_a;

    fn f(q: u64) -> Field {
        Field::finite(q).unwrap()
    }

    #[test]
    fn poly_round_trip() {
        let f5 = f(5);
        let p = Poly::from_int_coeffs(&f5, &[1, 0, 2]);
        let v = poly_to_json(&p);
        assert_eq!(v, json!(["1", "0", "2"]));
        assert_eq!(poly_from_json(&f5, &v).unwrap(), p);

        let f4 = Field::parse_spec("2^2:modulus=1,1,1").unwrap();
        let q = Poly::from_coeffs(&f4, vec![f4.generator().unwrap(), f4.one()]);
        let round = poly_from_json(&f4, &poly_to_json(&q)).unwrap();
        assert_eq!(round, q);
    }

    #[test]
    fn system_round_trip_both_kinds() {
        let f3 = f(3);
        let a = ConstMatrix::from_int_rows(&f3, &[&[0, 1], &[1, 1]]);
        let b = ConstMatrix::from_int_rows(&f3, &[&[0], &[1]]);
        let c = ConstMatrix::from_int_rows(&f3, &[&[1, 0]]);
        let state = SystemInput::State(StateSpace::new(a, b, c).unwrap());
        let v = system_to_json(&state);
        assert_eq!(system_from_json(&v).unwrap(), state);
        // parse -> serialize -> parse is the identity
        assert_eq!(system_to_json(&system_from_json(&v).unwrap()), v);

        let n = PolyMatrix::from_rows(&f3, vec![vec![Poly::one(&f3)]]).unwrap();
        let d = PolyMatrix::from_rows(&f3, vec![vec![Poly::var(&f3)]]).unwrap();
        let factored = SystemInput::Factored(FactoredSystem::new(n, d).unwrap());
        let v = system_to_json(&factored);
        assert_eq!(system_from_json(&v).unwrap(), factored);
        assert_eq!(system_to_json(&system_from_json(&v).unwrap()), v);
    }

    #[test]
    fn state_input_factors_on_demand() {
        let f2 = f(2);
        let a = ConstMatrix::from_int_rows(&f2, &[&[0]]);
        let b = ConstMatrix::from_int_rows(&f2, &[&[1]]);
        let c = ConstMatrix::from_int_rows(&f2, &[&[1]]);
        let ss = StateSpace::new(a.clone(), b, c).unwrap();
        let fs = SystemInput::State(ss).to_factored().unwrap();
        assert_eq!(
            fs.denominator().det().unwrap(),
            si_minus_a(&a).unwrap().det().unwrap()
        );
    }

    #[test]
    fn parse_errors_are_reported() {
        let f3 = f(3);
        assert!(matches!(
            poly_from_json(&f3, &json!("7")),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            system_from_json(&json!({"field": "3", "kind": "mystery"})),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            system_from_json(&json!({"kind": "factored"})),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            const_matrix_from_json(&f3, &json!([["1"], ["2", "0"]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn csv_tables() {
        let f2 = f(2);
        let n = PolyMatrix::from_rows(&f2, vec![vec![Poly::one(&f2)]]).unwrap();
        let d = PolyMatrix::from_rows(&f2, vec![vec![Poly::var(&f2)]]).unwrap();
        let fs = FactoredSystem::new(n, d).unwrap();
        let report = crate::poleplace::census(&fs, crate::poleplace::CensusMode::Affine).unwrap();
        let csv = census_histogram_csv(&report);
        assert_eq!(csv, "fiber_size,image_points\n1,2\n");

        let rows = vec![
            (vec![1, 2], Poly::var(&f2)),
            (vec![1, 3], Poly::from_int_coeffs(&f2, &[1, 1])),
        ];
        let csv = minors_csv(&rows);
        assert_eq!(csv, "columns,minor\n1 2,\"s\"\n1 3,\"s + 1\"\n");
    }

    #[test]
    fn json_objects_have_sorted_keys() {
        let v = json!({"zebra": 1, "alpha": 2});
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            "{\"alpha\":2,\"zebra\":1}"
        );
    }
}
