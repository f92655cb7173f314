//! Command-line front end. Output is JSON on stdout unless `--format dot`
//! is asked of a graph command.
//!
//! Exit codes: 0 ok, 1 parse or internal error, 2 validation violations,
//! 64 usage error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::endspace::{self, count_genus_ends, count_nonorientable_ends, validate_closedness, EndExpr};
use crate::exhaustion::{alexander_system, build_exhaustion, validate_exhaustion, CurveId};
use crate::mcgword::{
    self, act_on_window, conjugate_rewrite, free_reduce, kernel_coordinate_test, phi, psi, substitute_compact,
    torsion_abelianization_gate, Word,
};
use crate::pants::{cut_vertex_check, enumerate_pants_decompositions, validate_pants};
use crate::shiftbasis::{
    self, classify_shift, dyck_normal_form, ends_graph, good_basis, nteg, rank_r, strip_relation_check,
    teg, Rank, TokenKind, WindowSpec,
};
use crate::surface::{
    alexander_applicable, excluded_for_rigidity, forget_planar, homeomorphic, validate_surface, FiniteSurface,
    SurfaceSpec,
};

pub const DEFAULT_DEPTH: usize = 4;
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "surfcalc", version, about = "Ends, exhaustions, pants decompositions and handle-shifts of surfaces")]
struct Cli {
    /// Truncation depth (default 4, or SURFCALC_DEPTH)
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Eg,
    Teg,
    Nteg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether two surfaces are homeomorphic
    Classify { a: PathBuf, b: PathBuf },
    /// Canonical form of an end expression (a file holding an expression or a surface)
    EndsNormalize {
        file: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Principal exhaustion to the given depth
    Exhaust { file: PathBuf },
    /// Alexander curve system of the exhaustion
    Alexander {
        file: PathBuf,
        /// Curve to test for local finiteness (`c<n>`); a fresh disjoint curve if omitted
        #[arg(long)]
        probe: Option<String>,
    },
    /// Enumerate pants decompositions and compare cut vertices with non-outer separating curves
    PantsCheck {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        punctures: u32,
        #[arg(long, default_value_t = 0)]
        boundary: u32,
        #[arg(long)]
        nonorientable: bool,
        #[arg(long, default_value_t = 10_000)]
        max: usize,
    },
    /// Good basis of separating curves and their handle-shifts
    Basis { file: PathBuf },
    /// Ends graph, its spanning tree, or the nonorientable subtree
    ShiftGraph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphKind::Teg)]
        graph: GraphKind,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// r, with the window homology check
    Rank { file: PathBuf },
    /// Evaluate phi and the rewrites on a word
    WordEval {
        word: String,
        /// Number of shifts, or `inf`
        #[arg(long, default_value = "inf")]
        rank: String,
        #[arg(long)]
        psi: Option<usize>,
        /// Replace shift `i` by compact letters agreeing on `--window`
        #[arg(long)]
        substitute: Option<usize>,
        /// Comma-separated support ids
        #[arg(long, default_value = "")]
        window: String,
        #[arg(long, default_value_t = 0)]
        random_relators: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strip-model check of the three-shift relation
    RelationCheck {
        #[arg(long, default_value_t = 16)]
        window: u32,
        /// Also normalize a column such as `handle,crosscap`
        #[arg(long)]
        dyck: Option<String>,
    },
    /// First integral cohomology of the pure mapping class group
    Cohomology { file: PathBuf },
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, v: Value) -> Outcome {
        Outcome { code, stdout: format!("{v}\n"), stderr: String::new() }
    }

    fn text(code: i32, s: String) -> Outcome {
        Outcome { code, stdout: s, stderr: String::new() }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Outcome {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

type Run = Result<Outcome, Outcome>;

fn fail(message: impl std::fmt::Display) -> Outcome {
    Outcome::error(EXIT_ERROR, message)
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| fail(format_args!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<SurfaceSpec, Outcome> {
    SurfaceSpec::from_json(&read(path)?).map_err(|e| fail(format_args!("{}: {e}", path.display())))
}

/// Load and validate; violations end the run with exit 2.
fn load_valid(path: &Path) -> Result<SurfaceSpec, Outcome> {
    let s = load_spec(path)?;
    let v = validate_surface(&s);
    if v.is_empty() {
        Ok(s)
    } else {
        Err(Outcome::json(EXIT_VIOLATIONS, json!({ "file": path.display().to_string(), "violations": v })))
    }
}

fn depth_from(flag: Option<usize>, env: Option<&str>) -> Result<usize, Outcome> {
    let d = match (flag, env) {
        (Some(d), _) => d,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| Outcome::error(EXIT_USAGE, format_args!("SURFCALC_DEPTH must be a positive integer, got {s:?}")))?,
        (None, None) => DEFAULT_DEPTH,
    };
    if d == 0 {
        return Err(Outcome::error(EXIT_USAGE, "depth must be positive"));
    }
    Ok(d)
}

fn parse_rank(s: &str) -> Result<Rank, Outcome> {
    if s == "inf" {
        return Ok(Rank::CountablyInfinite);
    }
    s.parse().map(Rank::Finite).map_err(|_| Outcome::error(EXIT_USAGE, format_args!("bad --rank {s:?}")))
}

fn hat(s: &SurfaceSpec) -> Result<SurfaceSpec, Outcome> {
    forget_planar(s).map_err(fail)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Run with the process environment.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var("SURFCALC_DEPTH").ok();
    run_with_env(args, env.as_deref())
}

/// Run with an explicit `SURFCALC_DEPTH` value.
pub fn run_with_env<I, S>(args: I, depth_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::text(EXIT_OK, rendered),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered },
            };
        }
    };
    dispatch(cli, depth_env).unwrap_or_else(|o| o)
}

fn dispatch(cli: Cli, depth_env: Option<&str>) -> Run {
    let depth = || depth_from(cli.depth, depth_env);
    match &cli.command {
        Command::Classify { a, b } => {
            let (a, b) = (load_valid(a)?, load_valid(b)?);
            Ok(Outcome::json(EXIT_OK, json!({ "verdict": homeomorphic(&a, &b) })))
        }
        Command::EndsNormalize { file, expr } => ends_normalize(file.as_deref(), expr.as_deref()),
        Command::Exhaust { file } => {
            let s = load_valid(file)?;
            let pe = build_exhaustion(&s, depth()?).map_err(fail)?;
            let violations = validate_exhaustion(&pe);
            let code = if violations.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
            Ok(Outcome::json(code, json!({ "exhaustion": pe, "violations": violations })))
        }
        Command::Alexander { file, probe } => {
            let s = load_valid(file)?;
            let pe = build_exhaustion(&s, depth()?).map_err(fail)?;
            let mut sys = match alexander_system(&pe) {
                Ok(sys) => sys,
                Err(e) => return Ok(Outcome::json(EXIT_VIOLATIONS, json!({ "error": e.to_string() }))),
            };
            let probe = match probe {
                Some(p) => p
                    .strip_prefix('c')
                    .and_then(|n| n.parse().ok())
                    .map(CurveId)
                    .ok_or_else(|| Outcome::error(EXIT_USAGE, format_args!("bad probe {p:?}, expected c<n>")))?,
                None => sys.register_probe(),
            };
            let meets = sys.check_local_finiteness(probe).map_err(fail)?;
            Ok(Outcome::json(
                EXIT_OK,
                json!({
                    "system": sys,
                    "curve_count": sys.curves().count(),
                    "probe": { "curve": probe, "meets": meets },
                }),
            ))
        }
        Command::PantsCheck { genus, punctures, boundary, nonorientable, max } => {
            let f = if *nonorientable {
                FiniteSurface::nonorientable(*genus, *punctures, *boundary)
            } else {
                FiniteSurface::orientable(*genus, *punctures, *boundary)
            };
            pants_check(&f, *max)
        }
        Command::Basis { file } => {
            let s = hat(&load_valid(file)?)?;
            let basis = good_basis(&s, depth()?).map_err(fail)?;
            let shifts: Vec<_> = basis.curves.iter().map(classify_shift).collect();
            Ok(Outcome::json(EXIT_OK, json!({ "basis": basis, "shifts": shifts, "r": rank_r(&basis) })))
        }
        Command::ShiftGraph { file, graph, format } => {
            let s = hat(&load_valid(file)?)?;
            let d = depth()?;
            let out = match graph {
                GraphKind::Eg => {
                    let eg = ends_graph(&s, d).map_err(fail)?;
                    match format {
                        Format::Dot => eg.to_dot(),
                        Format::Json => format!("{}\n", to_value(&eg)),
                    }
                }
                GraphKind::Teg | GraphKind::Nteg => {
                    let basis = good_basis(&s, d).map_err(fail)?;
                    let mut tree = teg(&basis).map_err(fail)?;
                    let name = if *graph == GraphKind::Nteg {
                        tree = nteg(&tree).map_err(fail)?;
                        "nTEG"
                    } else {
                        "TEG"
                    };
                    match format {
                        Format::Dot => tree.to_dot(name),
                        Format::Json => format!("{}\n", to_value(&tree)),
                    }
                }
            };
            Ok(Outcome::text(EXIT_OK, out))
        }
        Command::Rank { file } => {
            let s = hat(&load_valid(file)?)?;
            let d = depth()?;
            let basis = good_basis(&s, d).map_err(fail)?;
            let r = rank_r(&basis);
            let window = WindowSpec::from_spec(&s, d).map_err(fail)?;
            let report = shiftbasis::homology_oracle(&window);
            let agrees = match r {
                Rank::Finite(n) => Some(n == report.separating_rank_f2 as u64),
                Rank::CountablyInfinite => None,
            };
            let code = if agrees == Some(false) { EXIT_VIOLATIONS } else { EXIT_OK };
            Ok(Outcome::json(code, json!({ "r": r, "oracle": report, "agrees": agrees })))
        }
        Command::WordEval { word, rank, psi: psi_index, substitute, window, random_relators, seed } => {
            let w: Word = word.parse().map_err(fail)?;
            let rank = parse_rank(rank)?;
            word_eval(&w, rank, *psi_index, *substitute, window, *random_relators, *seed)
        }
        Command::RelationCheck { window, dyck } => {
            let holds = strip_relation_check(*window).map_err(|e| Outcome::error(EXIT_USAGE, e))?;
            let mut out = json!({ "relation_eq1": holds });
            if let Some(col) = dyck {
                let tokens = col
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| match t.trim() {
                        "handle" => Ok(TokenKind::Handle),
                        "crosscap" => Ok(TokenKind::Crosscap),
                        other => Err(Outcome::error(EXIT_USAGE, format_args!("unknown token {other:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out["dyck_normal_form"] = to_value(&dyck_normal_form(&tokens));
            }
            Ok(Outcome::json(if holds { EXIT_OK } else { EXIT_VIOLATIONS }, out))
        }
        Command::Cohomology { file } => {
            let s = load_valid(file)?;
            match mcgword::cohomology(&s, depth()?) {
                Ok(c) => Ok(Outcome::json(EXIT_OK, json!({ "H1_PMod": c }))),
                Err(e @ mcgword::CohomologyError::GenusTooSmall(_)) => {
                    Ok(Outcome::json(EXIT_VIOLATIONS, json!({ "error": "genus_too_small", "detail": e.to_string() })))
                }
                Err(e) => Err(fail(e)),
            }
        }
    }
}

fn ends_normalize(file: Option<&Path>, expr: Option<&str>) -> Run {
    let text = match (file, expr) {
        (_, Some(e)) => e.to_string(),
        (Some(f), None) => read(f)?,
        (None, None) => return Err(Outcome::error(EXIT_USAGE, "give a file or --expr")),
    };
    let e: EndExpr = match SurfaceSpec::from_json(&text) {
        Ok(s) => s.ends,
        Err(_) => text.trim().parse().map_err(fail)?,
    };
    let violations = validate_closedness(&e);
    if !violations.is_empty() {
        return Ok(Outcome::json(EXIT_VIOLATIONS, json!({ "violations": violations })));
    }
    let cf = endspace::normalize(&e).map_err(fail)?;
    Ok(Outcome::json(
        EXIT_OK,
        json!({
            "canonical": cf.to_string(),
            "expr": cf.to_expr().to_string(),
            "form": cf,
            "genus_ends": count_genus_ends(&e).to_string(),
            "nonorientable_ends": count_nonorientable_ends(&e).to_string(),
        }),
    ))
}

fn pants_check(f: &FiniteSurface, max: usize) -> Run {
    let all = enumerate_pants_decompositions(f, max).map_err(fail)?;
    let mut agree = 0;
    let mut mismatches = Vec::new();
    let mut invalid = Vec::new();
    for (i, pd) in all.iter().enumerate() {
        let v = validate_pants(pd, f);
        if !v.is_empty() {
            invalid.push(json!({ "index": i, "violations": v.iter().map(ToString::to_string).collect::<Vec<_>>() }));
        }
        let report = cut_vertex_check(pd);
        if report.coincide {
            agree += 1;
        } else {
            mismatches.push(json!({ "index": i, "decomposition": pd, "report": report }));
        }
    }
    let code = if mismatches.is_empty() && invalid.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
    Ok(Outcome::json(
        code,
        json!({
            "surface": f.to_string(),
            "euler_characteristic": f.euler_characteristic(),
            "decompositions": all.len(),
            "agree": agree,
            "mismatches": mismatches,
            "invalid": invalid,
            "alexander_applicable": alexander_applicable(f),
            "excluded_for_rigidity": excluded_for_rigidity(f).ok(),
            "torsion_gate": torsion_abelianization_gate(f),
        }),
    ))
}

fn word_eval(
    w: &Word,
    rank: Rank,
    psi_index: Option<usize>,
    substitute: Option<usize>,
    window: &str,
    relators: usize,
    seed: u64,
) -> Run {
    let invalid = |e: mcgword::WordError| Outcome::json(EXIT_VIOLATIONS, json!({ "error": e.to_string() }));
    let v = phi(w, rank).map_err(invalid)?;
    let normal = conjugate_rewrite(w);
    let mut out = json!({
        "word": w,
        "phi": v,
        "kernel": kernel_coordinate_test(w),
        "reduced": free_reduce(w),
        "normal_form": normal,
        "normal_form_phi_agrees": phi(&normal, rank).ok() == Some(v.clone()),
    });
    if let Some(i) = psi_index {
        out["psi"] = json!(psi(w, i, rank).map_err(invalid)?);
    }
    let ids: BTreeSet<String> = window.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    if let Some(i) = substitute {
        let sub = substitute_compact(w, i, &ids).map_err(invalid)?;
        out["substituted"] = json!({
            "word": sub,
            "phi": phi(&sub, Rank::CountablyInfinite).expect("unbounded rank"),
            "window_image_agrees": act_on_window(&sub, &ids) == act_on_window(w, &ids),
        });
    }
    if relators > 0 {
        let Rank::Finite(r) = rank else {
            return Err(Outcome::error(EXIT_USAGE, "--random-relators needs a finite --rank"));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let longer = mcgword::random::insert_relators(&mut rng, w, relators, r as usize);
        let pv = phi(&longer, rank).map_err(invalid)?;
        out["with_relators"] = json!({ "word": longer, "phi": pv, "phi_unchanged": pv == v });
    }
    Ok(Outcome::json(EXIT_OK, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_precedence() {
        assert_eq!(depth_from(Some(3), Some("7")).unwrap(), 3);
        assert_eq!(depth_from(None, Some("7")).unwrap(), 7);
        assert_eq!(depth_from(None, None).unwrap(), DEFAULT_DEPTH);
        assert_eq!(depth_from(None, Some("x")).unwrap_err().code, EXIT_USAGE);
        assert_eq!(depth_from(Some(0), None).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_with_env(["surfcalc"], None).code, EXIT_USAGE);
        assert_eq!(run_with_env(["surfcalc", "frobnicate"], None).code, EXIT_USAGE);
        let help = run_with_env(["surfcalc", "--help"], None);
        assert_eq!(help.code, EXIT_OK);
        assert!(help.stdout.contains("cohomology"));
    }

    #[test]
    fn relation() {
        let o = run_with_env(["surfcalc", "relation-check", "--window", "16"], None);
        assert_eq!(o.stdout, "{\"relation_eq1\":true}\n");
        let o = run_with_env(["surfcalc", "relation-check", "--window", "2"], None);
        assert_eq!(o.code, EXIT_USAGE);
    }
}
