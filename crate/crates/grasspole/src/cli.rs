//! Command line interface: builders, checks, censuses, solvers, and the
//! binary certificate, with JSON, CSV, or text output.
//!
//! Exit codes: 0 on success, 1 on a mathematical finding contrary to
//! expectation (or a failed verification), 2 on usage errors.  Usage
//! problems go to stderr; mathematical outcomes, including negative ones,
//! are emitted as structured report fields on the selected output.  CSV
//! is only available for census histograms and minor tables.  The
//! GRASSPOLE_THREADS environment variable caps the worker count.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::constructions::{
    cauchy_monomial_system, cauchy_parameters, find_zero_maximal_minor, mds_check, monomial_matrix,
    osculating_curve_classical, osculating_curve_hasse, superregular_check, DegreeMatrix,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::grassmann::MultiIndex;
use crate::matrix::ConstMatrix;
use crate::poleplace::{
    census, fiber_solve_2x2, schubert_number, verify_f2_nonsurjectivity, CensusMode,
};
use crate::poly::Poly;
use crate::report::{
    census_histogram_csv, census_to_json, const_matrix_from_json, const_matrix_to_json, f2_to_json,
    fiber_to_json, minors_csv, poly_matrix_to_json, read_system, system_to_json, SystemInput,
};
use crate::systems::{
    charpoly_via_factors, charpoly_via_state_block, closed_loop_charpoly, coefficient_matrix,
    is_degenerate_exact, is_degenerate_rational, left_coprime_factorization, observability_rank,
    reachability_rank, Compensator, Degeneracy, FactoredSystem, ProjectiveCompensator, StateSpace,
};

#[derive(Parser)]
#[command(
    name = "grasspole",
    version,
    about = "Exact pole placement over finite fields and the rationals"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format (csv only for census histograms and minor tables).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Scan all rational projective compensators for an annihilated one.
    Enumerate,
    /// Kernel dimension plus quadric membership; exact over extensions.
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Degenerate,
    Nondegenerate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Affine,
    Projective,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a field spec: characteristic, order, extension modulus.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
    /// Maximal minors of [N | D] with their column subsets.
    Minors {
        #[arg(long)]
        system: PathBuf,
        /// Optional cross-check against the system file's field.
        #[arg(long)]
        field: Option<String>,
    },
    /// Decide degeneracy of a system's pole placement map.
    Degeneracy {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Exit 1 when the verdict contradicts this.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Left coprime factorization of a state-space system.
    Factorize {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Osculating normal curve system: row i holds derivatives of s^j.
    Onc {
        #[arg(long)]
        field: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
        /// Use Hasse derivatives instead of classical ones.
        #[arg(long)]
        hasse: bool,
    },
    /// Realize a coefficient/degree-matrix pair as a monomial system.
    Monomial {
        /// JSON file with "field", "coeffs" (element strings), "degrees".
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Nondegenerate monomial system built from a Cauchy matrix.
    CauchySystem {
        #[arg(long)]
        field: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
        /// System degree; defaults to the minimum m*p.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check a constant matrix for nonzero maximal minors (MDS) and for
    /// nonzero minors of every size (superregular).
    MdsCheck {
        /// JSON file with "field" and "matrix" (rows of element strings).
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Generic number of pole placements for an (m, p) system of degree mp.
    Schubert {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
    },
    /// Exhaustive image and fiber census of the pole placement map.
    Census {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        field: Option<String>,
    },
    /// Solve the fiber over one monic degree-4 target (2x2 systems).
    Fiber {
        #[arg(long)]
        system: PathBuf,
        /// Ascending coefficients, comma separated (semicolons between
        /// coefficients when the elements themselves contain commas).
        #[arg(long)]
        target: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Certify that no nondegenerate 2x2 degree-4 system over F_2 places
    /// poles onto all of P^4(F_2).
    VerifyF2,
    /// Random determinant-identity sweeps over observable state spaces.
    Identities {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
}

/// A finished subcommand: structured report plus renderings and the exit
/// code implied by the mathematics (0 or 1).
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    exit: i32,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report {
            json,
            text,
            csv: None,
            exit: 0,
        }
    }
}

/// Errors that abort the invocation (exit 2) rather than report a
/// mathematical outcome.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::NonPrimeCharacteristic(_)
            | Error::ReducibleModulus(_)
            | Error::InvalidModulus(_)
            | Error::UnsupportedExtension(_)
            | Error::FieldMismatch(_, _)
            | Error::InfiniteField
            | Error::DimensionMismatch(_)
            | Error::NonSquare(_, _)
    )
}

fn math_error_report(e: &Error) -> Report {
    Report {
        json: json!({ "error": e.to_string() }),
        text: format!("error: {e}"),
        csv: None,
        exit: 1,
    }
}

fn init_threads() {
    if let Ok(text) = std::env::var("GRASSPOLE_THREADS") {
        if let Ok(k) = text.parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn load_system(path: &Path, field_flag: &Option<String>) -> Result<SystemInput> {
    let sys = read_system(path)?;
    if let Some(spec) = field_flag {
        let flag_field = Field::parse_spec(spec)?;
        if &flag_field != sys.field() {
            return Err(Error::FieldMismatch(
                flag_field.spec_string(),
                sys.field().spec_string(),
            ));
        }
    }
    Ok(sys)
}

fn parse_target(field: &Field, text: &str) -> Result<Poly> {
    let parts: Vec<&str> = if text.contains(';') {
        text.split(';').collect()
    } else {
        text.split(',').collect()
    };
    Poly::from_coeff_strings(field, &parts)
}

fn subsets_with<'a, T>(fs_minors: &'a [T], p: usize, width: usize) -> Vec<(Vec<usize>, &'a T)> {
    MultiIndex::all(p, width)
        .into_iter()
        .zip(fs_minors)
        .map(|(idx, minor)| (idx.indices().to_vec(), minor))
        .collect()
}

fn field_info(spec: &str) -> Result<Report> {
    let field = Field::parse_spec(spec)?;
    let json = json!({
        "spec": field.spec_string(),
        "finite": field.is_finite(),
        "characteristic": field.characteristic(),
        "order": field.order().map(|o| o.to_string()),
        "extension_degree": field.extension_degree(),
        "modulus": field.modulus().map(|m| m.iter().map(u64::to_string).collect::<Vec<_>>()),
    });
    let text = if field.is_finite() {
        format!(
            "field {} : order {}, characteristic {}, extension degree {}\n",
            field.spec_string(),
            field.order().expect("finite"),
            field.characteristic(),
            field.extension_degree()
        )
    } else {
        "field QQ : the rationals, characteristic 0\n".to_string()
    };
    Ok(Report::ok(json, text))
}

fn minor_rows(fs: &FactoredSystem) -> Vec<(Vec<usize>, Poly)> {
    subsets_with(fs.minors(), fs.p(), fs.m() + fs.p())
        .into_iter()
        .map(|(cols, minor)| (cols, minor.clone()))
        .collect()
}

fn minors_report(sys: &SystemInput) -> Result<Report> {
    let fs = sys.to_factored()?;
    let rows = minor_rows(&fs);
    let json = json!({
        "field": fs.field().spec_string(),
        "m": fs.m(),
        "p": fs.p(),
        "degree": fs.degree(),
        "coprime": fs.is_coprime(),
        "minors": rows.iter().map(|(cols, minor)| json!({
            "columns": cols,
            "minor": minor.coeff_strings(),
        })).collect::<Vec<Value>>(),
    });
    let mut text = format!(
        "{}x{} system over {}, degree {}\n",
        fs.p(),
        fs.m() + fs.p(),
        fs.field().spec_string(),
        fs.degree()
    );
    for (cols, minor) in &rows {
        let cols: Vec<String> = cols.iter().map(usize::to_string).collect();
        text.push_str(&format!("  {{{}}}: {minor}\n", cols.join(",")));
    }
    let csv = Some(minors_csv(&rows));
    Ok(Report {
        json,
        text,
        csv,
        exit: 0,
    })
}

fn degeneracy_report(
    sys: &SystemInput,
    method: Method,
    expect: Option<Expectation>,
) -> Result<Report> {
    let fs = sys.to_factored()?;
    let (verdict, witness): (&str, Option<&ProjectiveCompensator>);
    let held;
    match method {
        Method::Exact => {
            verdict = match is_degenerate_exact(&fs)? {
                Degeneracy::Degenerate => "degenerate",
                Degeneracy::Nondegenerate => "nondegenerate",
                Degeneracy::Unsupported => "unsupported",
            };
            witness = None;
        }
        Method::Enumerate => {
            held = is_degenerate_rational(&fs)?;
            witness = held.as_ref();
            verdict = if witness.is_some() {
                "degenerate"
            } else {
                "nondegenerate"
            };
        }
    }
    if verdict == "unsupported" && expect.is_some() {
        return Err(Error::UnsupportedShape(
            "the exact method only decides single-input, single-output, or 2x2 shapes; \
             use --method enumerate"
                .into(),
        ));
    }
    let exit = match expect {
        None => 0,
        Some(Expectation::Degenerate) if verdict == "degenerate" => 0,
        Some(Expectation::Nondegenerate) if verdict == "nondegenerate" => 0,
        Some(_) => 1,
    };
    let method_name = match method {
        Method::Exact => "exact",
        Method::Enumerate => "enumerate",
    };
    let json = json!({
        "field": fs.field().spec_string(),
        "method": method_name,
        "verdict": verdict,
        "witness": witness.map(|w| const_matrix_to_json(w.matrix())),
    });
    let mut text = format!("degeneracy ({method_name}): {verdict}\n");
    if let Some(w) = witness {
        text.push_str(&format!("witness compensator:\n{}\n", w.matrix()));
    }
    Ok(Report {
        json,
        text,
        csv: None,
        exit,
    })
}

fn factorize_report(sys: &SystemInput) -> Result<Report> {
    let fs = sys.to_factored()?;
    let wrapped = SystemInput::Factored(fs.clone());
    let json = json!({
        "system": system_to_json(&wrapped),
        "degree": fs.degree(),
        "coprime": fs.is_coprime(),
    });
    let text = format!(
        "left coprime factorization over {}: degree {}\nN =\n{}\nD =\n{}\n",
        fs.field().spec_string(),
        fs.degree(),
        fs.numerator(),
        fs.denominator()
    );
    Ok(Report::ok(json, text))
}

fn onc_report(spec: &str, p: usize, m: usize, hasse: bool) -> Result<Report> {
    let field = Field::parse_spec(spec)?;
    if p == 0 || m == 0 {
        return Err(Error::DimensionMismatch("p and m must be positive".into()));
    }
    let mat = if hasse {
        osculating_curve_hasse(p, m, &field)
    } else {
        osculating_curve_classical(p, m, &field)
    };
    let zero_minor = find_zero_maximal_minor(&mat);
    let mds = zero_minor.is_none();
    let system = FactoredSystem::from_full(&mat, m)
        .ok()
        .map(|fs| system_to_json(&SystemInput::Factored(fs)));
    let json = json!({
        "field": field.spec_string(),
        "matrix": poly_matrix_to_json(&mat),
        "zero_minor": zero_minor.as_ref().map(|idx| idx.indices().to_vec()),
        "mds": mds,
        "system": system,
        "provenance": {
            "construction": "osculating_curve",
            "p": p,
            "m": m,
            "hasse": hasse,
        },
    });
    let text = format!(
        "osculating curve ({}) p={p} m={m} over {}: {}\n",
        if hasse { "Hasse" } else { "classical" },
        field.spec_string(),
        match &zero_minor {
            Some(idx) => format!("zero minor at columns {:?}", idx.indices()),
            None => "all maximal minors nonzero".to_string(),
        }
    );
    Ok(Report::ok(json, text))
}

fn monomial_report(path: &Path, field_flag: &Option<String>) -> Result<Report> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("invalid JSON in {}: {e}", path.display())))?;
    let spec = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing field spec".into()))?;
    let field = Field::parse_spec(spec)?;
    if let Some(flag) = field_flag {
        let flag_field = Field::parse_spec(flag)?;
        if flag_field != field {
            return Err(Error::FieldMismatch(
                flag_field.spec_string(),
                field.spec_string(),
            ));
        }
    }
    let coeffs = const_matrix_from_json(
        &field,
        v.get("coeffs")
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?,
    )?;
    let degrees_json = v
        .get("degrees")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing degrees".into()))?;
    let mut degree_rows: Vec<Vec<usize>> = Vec::new();
    for row in degrees_json {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("degrees rows must be arrays".into()))?;
        degree_rows.push(
            row.iter()
                .map(|x| {
                    x.as_u64()
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse("degrees must be nonnegative ints".into()))
                })
                .collect::<Result<Vec<usize>>>()?,
        );
    }
    let degrees = DegreeMatrix::new(degree_rows)?;
    let ms = monomial_matrix(&coeffs, &degrees)?;
    let fs = ms.to_factored()?;
    let rows = ms.realized().rows();
    let width = ms.realized().cols();
    let monomials = subsets_with(ms.minor_monomials(), rows, width);
    let json = json!({
        "system": system_to_json(&SystemInput::Factored(fs.clone())),
        "realized": poly_matrix_to_json(ms.realized()),
        "degree": fs.degree(),
        "minor_monomials": monomials.iter().map(|(cols, (c, e))| json!({
            "columns": cols,
            "coefficient": c.to_string(),
            "exponent": e,
        })).collect::<Vec<Value>>(),
        "provenance": { "construction": "monomial" },
    });
    let text = format!(
        "monomial system over {}: degree {}\n{}\n",
        field.spec_string(),
        fs.degree(),
        ms.realized()
    );
    Ok(Report::ok(json, text))
}

fn cauchy_report(spec: &str, p: usize, m: usize, n: Option<usize>) -> Result<Report> {
    let field = Field::parse_spec(spec)?;
    let ms = cauchy_monomial_system(p, m, n, &field)?;
    let fs = ms.to_factored()?;
    let (x, y) = cauchy_parameters(p, m, &field)?;
    let json = json!({
        "system": system_to_json(&SystemInput::Factored(fs.clone())),
        "degree": fs.degree(),
        "superregular": true,
        "provenance": {
            "construction": "cauchy",
            "p": p,
            "m": m,
            "n": fs.degree(),
            "x": x.iter().map(Scalar::to_string).collect::<Vec<String>>(),
            "y": y.iter().map(Scalar::to_string).collect::<Vec<String>>(),
        },
    });
    let text = format!(
        "Cauchy monomial system p={p} m={m} degree {} over {}\n{}\n",
        fs.degree(),
        field.spec_string(),
        ms.realized()
    );
    Ok(Report::ok(json, text))
}

fn read_matrix_file(path: &Path, field_flag: &Option<String>) -> Result<ConstMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("invalid JSON in {}: {e}", path.display())))?;
    let spec = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing field spec".into()))?;
    let field = Field::parse_spec(spec)?;
    if let Some(flag) = field_flag {
        let flag_field = Field::parse_spec(flag)?;
        if flag_field != field {
            return Err(Error::FieldMismatch(
                flag_field.spec_string(),
                field.spec_string(),
            ));
        }
    }
    const_matrix_from_json(
        &field,
        v.get("matrix")
            .ok_or_else(|| Error::Parse("missing matrix".into()))?,
    )
}

fn mds_report(mat: &ConstMatrix) -> Result<Report> {
    let mds = mds_check(mat)?;
    let superregular = superregular_check(mat);
    let zero = if mds {
        None
    } else {
        let minors = mat.maximal_minors()?;
        MultiIndex::all(mat.rows(), mat.cols())
            .into_iter()
            .zip(minors)
            .find(|(_, minor)| minor.is_zero())
            .map(|(idx, _)| idx.indices().to_vec())
    };
    let json = json!({
        "field": mat.field().spec_string(),
        "rows": mat.rows(),
        "cols": mat.cols(),
        "mds": mds,
        "superregular": superregular,
        "zero_minor": zero,
    });
    let text = match &zero {
        Some(cols) => format!("not MDS: zero maximal minor at columns {cols:?}\n"),
        None => format!("MDS: all maximal minors nonzero; superregular: {superregular}\n"),
    };
    Ok(Report::ok(json, text))
}

fn schubert_report(m: usize, p: usize) -> Result<Report> {
    if m == 0 || p == 0 {
        return Err(Error::DimensionMismatch("m and p must be positive".into()));
    }
    let d = schubert_number(m, p);
    let json = json!({ "d": d.to_string() });
    let text = format!("d({m},{p}) = {d}\n");
    Ok(Report::ok(json, text))
}

fn census_report(sys: &SystemInput, mode: Mode) -> Result<Report> {
    let fs = sys.to_factored()?;
    let mode = match mode {
        Mode::Affine => CensusMode::Affine,
        Mode::Projective => CensusMode::Projective,
    };
    let report = census(&fs, mode)?;
    let json = census_to_json(&report);
    let text = format!(
        "{} census over {}: domain {}, image {} of {} targets, dropped {}\n",
        report.mode,
        report.field,
        report.domain_size,
        report.image_size,
        report.target_size,
        report.dropped
    );
    let csv = Some(census_histogram_csv(&report));
    Ok(Report {
        json,
        text,
        csv,
        exit: 0,
    })
}

fn fiber_report(sys: &SystemInput, target_text: &str) -> Result<Report> {
    let fs = sys.to_factored()?;
    let target = parse_target(fs.field(), target_text)?;
    let sol = fiber_solve_2x2(&fs, &target)?;
    let json = fiber_to_json(&sol);
    let mut text = format!(
        "fiber over {}: total multiplicity {}\n",
        sol.target, sol.total_multiplicity
    );
    for e in &sol.entries {
        text.push_str(&format!(
            "  multiplicity {}{}{}\n",
            e.multiplicity,
            if e.in_extension {
                ", in the quadratic extension"
            } else {
                ""
            },
            if e.k1_invertible {
                ", K1 invertible"
            } else {
                ", K1 singular"
            }
        ));
    }
    if let Some(d) = &sol.irrational_discriminant {
        text.push_str(&format!(
            "  conjugate irrational pair with discriminant {d}\n"
        ));
    }
    Ok(Report::ok(json, text))
}

fn verify_f2_report() -> Result<Report> {
    let report = verify_f2_nonsurjectivity()?;
    let passed = report.all_nonsurjective
        && report.orbits_match_canonical
        && report
            .canonical_cases
            .iter()
            .all(|c| c.row_space_matches && c.listed_missed_confirmed);
    let json = f2_to_json(&report);
    let text = format!(
        "{} quadric / {} off-quadric kernels; all non-surjective: {}; \
         canonical matrices reproduced: {}\n",
        report.quadric_points, report.off_quadric_points, report.all_nonsurjective, passed
    );
    Ok(Report {
        json,
        text,
        csv: None,
        exit: if passed { 0 } else { 1 },
    })
}

fn random_observable(
    field: &Field,
    n: usize,
    m: usize,
    p: usize,
    rng: &mut impl Rng,
) -> Result<StateSpace> {
    for _ in 0..10_000 {
        let a = ConstMatrix::random(field, n, n, rng);
        let b = ConstMatrix::random(field, n, m, rng);
        let c = ConstMatrix::random(field, p, n, rng);
        let ss = StateSpace::new(a, b, c)?;
        if observability_rank(&ss) == n {
            return Ok(ss);
        }
    }
    Err(Error::Internal(
        "no observable system found in 10000 samples".into(),
    ))
}

fn identities_report(
    spec: &str,
    n: usize,
    m: usize,
    p: usize,
    seed: u64,
    trials: usize,
) -> Result<Report> {
    let field = Field::parse_spec(spec)?;
    if n == 0 || m == 0 || p == 0 {
        return Err(Error::DimensionMismatch(
            "n, m, and p must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<(&str, bool)> = vec![
        ("denominator_determinant_is_charpoly", true),
        ("coprime_iff_reachable", true),
        ("charpoly_forms_agree", true),
        ("coefficient_matrix_agrees", true),
    ];
    for _ in 0..trials {
        let ss = random_observable(&field, n, m, p, &mut rng)?;
        let fs = left_coprime_factorization(&ss)?;
        let phi = ss.charpoly();
        if fs.denominator().det()? != phi {
            checks[0].1 = false;
        }
        if fs.is_coprime() != (reachability_rank(&ss) == n) {
            checks[1].1 = false;
        }
        let k = Compensator::new(ConstMatrix::random(&field, m, p, &mut rng));
        let pk = ProjectiveCompensator::from_feedback(&k);
        let direct = closed_loop_charpoly(&ss, &k)?;
        let factored = charpoly_via_factors(&fs, &pk)?;
        let block = charpoly_via_state_block(&ss, &pk)?;
        if direct != factored || direct != block {
            checks[2].1 = false;
        }
        if coefficient_matrix(&fs).charpoly(&pk)? != direct {
            checks[3].1 = false;
        }
    }
    let all_passed = checks.iter().all(|(_, ok)| *ok);
    let json = json!({
        "field": field.spec_string(),
        "n": n,
        "m": m,
        "p": p,
        "seed": seed,
        "trials": trials,
        "checks": checks.iter().map(|(name, ok)| json!({
            "name": name,
            "passed": ok,
        })).collect::<Vec<Value>>(),
        "all_passed": all_passed,
    });
    let mut text = format!(
        "identity sweep over {}: n={n} m={m} p={p} seed={seed} trials={trials}\n",
        field.spec_string()
    );
    for (name, ok) in &checks {
        text.push_str(&format!(
            "  {name}: {}\n",
            if *ok { "passed" } else { "FAILED" }
        ));
    }
    Ok(Report {
        json,
        text,
        csv: None,
        exit: if all_passed { 0 } else { 1 },
    })
}

fn execute(cmd: &Cmd) -> Result<Report> {
    match cmd {
        Cmd::FieldInfo { field } => field_info(field),
        Cmd::Minors { system, field } => minors_report(&load_system(system, field)?),
        Cmd::Degeneracy {
            system,
            method,
            expect,
            field,
        } => degeneracy_report(&load_system(system, field)?, *method, *expect),
        Cmd::Factorize { system, field } => factorize_report(&load_system(system, field)?),
        Cmd::Onc { field, p, m, hasse } => onc_report(field, *p, *m, *hasse),
        Cmd::Monomial { system, field } => monomial_report(system, field),
        Cmd::CauchySystem { field, p, m, n } => cauchy_report(field, *p, *m, *n),
        Cmd::MdsCheck { matrix, field } => mds_report(&read_matrix_file(matrix, field)?),
        Cmd::Schubert { m, p } => schubert_report(*m, *p),
        Cmd::Census {
            system,
            mode,
            field,
        } => census_report(&load_system(system, field)?, *mode),
        Cmd::Fiber {
            system,
            target,
            field,
        } => fiber_report(&load_system(system, field)?, target),
        Cmd::VerifyF2 => verify_f2_report(),
        Cmd::Identities {
            field,
            n,
            m,
            p,
            seed,
            trials,
        } => identities_report(field, *n, *m, *p, *seed, *trials),
    }
}

fn emit(report: &Report, format: Format, out: &Option<PathBuf>) -> std::result::Result<(), String> {
    let rendered = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json)
                .map_err(|e| format!("serialization failed: {e}"))?;
            s.push('\n');
            s
        }
        Format::Csv => report.csv.clone().ok_or_else(|| {
            "csv output is limited to census histograms and minor tables".to_string()
        })?,
        Format::Text => report.text.clone(),
    };
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

/// Parses argv and runs one subcommand; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_threads();
    let report = match execute(&cli.cmd) {
        Ok(report) => report,
        Err(e) if is_usage_error(&e) => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(e) => math_error_report(&e),
    };
    match emit(&report, cli.format, &cli.out) {
        Ok(()) => report.exit,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
