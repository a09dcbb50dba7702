//! Command dispatch behind the `toricfan` binary.
//!
//! Every command produces one JSON report with sorted keys. Exit codes:
//! 0 when a report was computed, 1 when a check-style command failed its
//! check, 2 on input errors.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::ab::{self, Coefficients};
use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};
use crate::fanfile::{parse_fan, write_fan};
use crate::linalg::json::Big;
use crate::poly::GradedPolySpace;
use crate::pp;
use crate::topo::{self, Field};

/// A command with its options. As JSON, the name goes under `"command"`
/// in kebab case, e.g. `{"command": "ab-check", "max_degree": 2, "mod": 3}`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Validate,
    Complete,
    Smooth,
    Simplicial,
    Hereditary,
    Components,
    Hilbert { max_degree: Option<u32> },
    PpBasis { degree: u32 },
    AbCheck {
        max_degree: Option<u32>,
        #[serde(rename = "mod")]
        modulus: Option<u64>,
    },
    Evenness {
        max_degree: Option<u32>,
        #[serde(rename = "mod")]
        modulus: Option<u64>,
    },
    Torsion { max_degree: Option<u32> },
    Sweep { max_degree: Option<u32> },
    Links,
    Cubes,
    Census { field: Field },
    Subdivide {
        out: PathBuf,
        #[serde(default)]
        cone: usize,
    },
    CheckCompletion { ambient: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    fn query(report: Value) -> Self {
        Outcome { report, exit_code: 0 }
    }

    fn check(report: Value, ok: bool) -> Self {
        Outcome {
            report,
            exit_code: if ok { 0 } else { 1 },
        }
    }

    pub fn error(e: &Error) -> Self {
        Outcome {
            report: json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
            exit_code: 2,
        }
    }

    /// Pretty-printed report with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn coefficients(modulus: Option<u64>) -> Result<Coefficients> {
    match modulus {
        None => Ok(Coefficients::Integers),
        Some(p) if is_prime(p) && p < (1 << 32) => Ok(Coefficients::Prime(p)),
        Some(p) => Err(Error::Parse(format!("--mod {p}: expected a prime below 2^32"))),
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn cone_label(fan: &Fan, c: ConeId) -> Value {
    json!({ "id": c.0, "dim": fan.dim(c), "rays": fan.ray_ids(c) })
}

/// Default degree bound `2n`.
fn bound(fan: &Fan, d: Option<u32>) -> u32 {
    d.unwrap_or(2 * fan.ambient_rank() as u32)
}

pub fn run_command(fan: &Fan, cmd: &Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Validate => {
            let oc = fan.order_complex();
            Outcome::query(json!({
                "valid": true,
                "dim": fan.ambient_rank(),
                "rays": fan.rays(),
                "cones": fan.len(),
                "f_vector": (0..=fan.ambient_rank()).map(|d| fan.cones_of_dim(d).len()).collect::<Vec<_>>(),
                "maximal": fan.maximal().iter().map(|&m| fan.ray_ids(m)).collect::<Vec<_>>(),
                "order_complex_f_vector": oc.f_vector(),
            }))
        }
        Command::Complete => Outcome::query(json!({ "complete": fan.is_complete() })),
        Command::Smooth => Outcome::query(json!({ "smooth": fan.is_smooth() })),
        Command::Simplicial => Outcome::query(json!({ "simplicial": fan.is_simplicial() })),
        Command::Hereditary => Outcome::query(to_value(&fan.hereditary_report())),
        Command::Components => {
            let c = pp::piecewise_constant_components(fan);
            Outcome::query(json!({
                "count": c.count,
                "degenerate": c.degenerate,
                "labels": c.labels.iter().map(|(s, k)| json!({ "cone": fan.ray_ids(*s), "component": k })).collect::<Vec<_>>(),
            }))
        }
        Command::Hilbert { max_degree } => {
            let d = bound(fan, *max_degree);
            Outcome::query(json!({
                "max_degree": d,
                "ranks": pp::hilbert_function(fan, d),
                "cohomological_degrees": (0..=d).map(|q| 2 * q).collect::<Vec<_>>(),
            }))
        }
        Command::PpBasis { degree } => {
            let q = *degree;
            let basis = pp::pp_basis(fan, q);
            let cones: Vec<Value> = fan
                .maximal()
                .iter()
                .map(|&m| {
                    let space = GradedPolySpace::new(fan.cone(m), q);
                    json!({
                        "rays": fan.ray_ids(m),
                        "lattice_basis": space.lattice_basis(),
                        "monomials": space.monomials(),
                    })
                })
                .collect();
            let elements: Vec<Value> = basis
                .iter()
                .map(|e| {
                    Value::Array(
                        e.pieces()
                            .iter()
                            .map(|p| to_value(&p.coefficients.iter().map(Big).collect::<Vec<_>>()))
                            .collect(),
                    )
                })
                .collect();
            Outcome::query(json!({
                "degree": q,
                "rank": basis.len(),
                "maximal_cones": cones,
                "basis": elements,
            }))
        }
        Command::AbCheck { max_degree, modulus } => {
            let coeffs = coefficients(*modulus)?;
            let mut ok = true;
            let mut degrees = Vec::new();
            for q in 0..=bound(fan, *max_degree) {
                let c = ab::build_ab(fan, q)?;
                let h = c.cohomology(coeffs);
                let zero = c.squares_to_zero();
                ok &= zero;
                degrees.push(json!({
                    "degree": q,
                    "term_ranks": c.term_ranks(),
                    "differential_ranks": c.differential_ranks(coeffs),
                    "d_squared_zero": zero,
                    "euler": c.euler_characteristic(),
                    "cohomology": to_value(&h),
                }));
            }
            Outcome::check(json!({ "coefficients": to_value(&coeffs), "degrees": degrees, "ok": ok }), ok)
        }
        Command::Evenness { max_degree, modulus } => {
            let r = ab::evenness_probe(fan, bound(fan, *max_degree), coefficients(*modulus)?)?;
            Outcome::check(to_value(&r), r.pass)
        }
        Command::Torsion { max_degree } => {
            let r = ab::torsion_probe(fan, bound(fan, *max_degree))?;
            let clean = !r.any_torsion && !r.any_mismatch;
            Outcome::check(to_value(&r), clean)
        }
        Command::Sweep { max_degree } => {
            let r = ab::orbit_closure_sweep(fan, bound(fan, *max_degree))?;
            Outcome::check(to_value(&r), r.failing.is_empty())
        }
        Command::Links => {
            let mut links = Vec::new();
            let mut all_free = true;
            for s in fan.ids() {
                let free = topo::free_link_check(fan, s)?;
                all_free &= free;
                let mut entry = cone_label(fan, s);
                entry["homology"] = to_value(&topo::link_homology(fan, s)?);
                entry["free"] = json!(free);
                links.push(entry);
            }
            Outcome::query(json!({ "all_free": all_free, "links": links }))
        }
        Command::Cubes => {
            let c = topo::cubical_subdivision(fan)?;
            let cubes: Vec<Value> = c
                .cubes
                .iter()
                .map(|q| {
                    json!({
                        "lower": fan.ray_ids(q.lower),
                        "upper": fan.ray_ids(q.upper),
                        "dim": q.dim,
                        "simplices": q.simplices.len(),
                    })
                })
                .collect();
            Outcome::query(json!({ "counts": c.counts, "euler": c.euler, "cubes": cubes }))
        }
        Command::Census { field } => Outcome::query(to_value(&topo::cell_census(fan, *field))),
        Command::Subdivide { out, cone } => {
            let sigma = ConeId(*cone);
            let b = fan.barycentric_fan(sigma)?;
            write_fan(out, &b, Some(format!("barycentric subdivision of the star of cone {cone}")))?;
            Outcome::query(json!({
                "written": out.display().to_string(),
                "dim": b.ambient_rank(),
                "rays": b.rays().len(),
                "maximal": b.maximal().len(),
                "cones": b.len(),
            }))
        }
        Command::CheckCompletion { ambient } => {
            let g = parse_fan(ambient)?;
            let ok = fan.is_completed_by(&g);
            Outcome::check(json!({ "completes": ok, "ambient_complete": g.is_complete() }), ok)
        }
    })
}

impl Command {
    pub fn from_json(text: &str) -> Result<Command> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("command: {e}")))
    }
}

/// Loads the fan file and runs the command; errors become exit code 2.
pub fn run(path: &std::path::Path, cmd: &Command) -> Outcome {
    parse_fan(path)
        .and_then(|f| run_command(&f, cmd))
        .unwrap_or_else(|e| Outcome::error(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    #[test]
    fn hilbert_report() {
        let out = run_command(&load("p2").unwrap(), &Command::Hilbert { max_degree: Some(3) }).unwrap();
        assert_eq!(out.report["ranks"], json!([1, 3, 6, 9]));
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn queries_and_checks() {
        let orthant = load("orthant").unwrap();
        let out = run_command(&orthant, &Command::Complete).unwrap();
        assert_eq!((out.report.clone(), out.exit_code), (json!({ "complete": false }), 0));
        let census = run_command(&load("p2").unwrap(), &Command::Census { field: Field::Complex }).unwrap();
        assert_eq!(census.report["euler"], json!(3));
        let e = run_command(&orthant, &Command::Evenness { max_degree: Some(1), modulus: None }).unwrap_err();
        assert_eq!(Outcome::error(&e).exit_code, 2);
        assert!(coefficients(Some(4)).is_err());
    }

    #[test]
    fn commands_from_json() {
        assert_eq!(
            Command::from_json(r#"{"command":"ab-check","max_degree":2,"mod":3}"#).unwrap(),
            Command::AbCheck { max_degree: Some(2), modulus: Some(3) }
        );
        assert_eq!(
            Command::from_json(r#"{"command":"census","field":"R+"}"#).unwrap(),
            Command::Census { field: Field::NonNegative }
        );
        assert_eq!(Command::from_json(r#"{"command":"links"}"#).unwrap(), Command::Links);
        assert!(Command::from_json(r#"{"command":"hilbert","bogus":1}"#).is_err());
        assert!(Command::from_json(r#"{"command":"nope"}"#).is_err());
    }
}
