//! Command-line front end. Every command reads one JSON job of the form
//! `{"ring": ..., <command fields>}` and writes one canonical JSON report.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::endo::{classify, endo_algebra, finite_endo, ideal_predicates, locality_criteria_check, FINITE_LIMIT};
use crate::error::{Error, Result};
use crate::invariants::{class_equal, decompose_field, diag_equiv, match_decompositions, ClassTag, ClassVerdict};
use crate::matrix::ExactMatrix;
use crate::module::FPModule;
use crate::morph::{hom_space, iso_test, verify_canonical_sequence, DecisionPolicy, MorphObject, Verdict};
use crate::oracle::{brute_force_hom_count, brute_force_iso, generate_corpus, CorpusSpec};
use crate::ring::Ring;
use crate::triangular::check_ideal_lemmas;

#[derive(Parser, Debug)]
#[command(name = "morphcat", version, about = "Exact computations in the morphism category of modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Job file (JSON); `-` reads standard input.
    #[arg(long, global = true, default_value = "-")]
    pub input: String,
    /// Report destination; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random trials for searches beyond the exhaustive ceiling.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Rank decomposition over a field.
    Decompose,
    /// Endomorphism ring: radical, blocks, type, maximal ideals.
    Endo,
    /// Domain/codomain and uniserial class relations between two objects.
    Classes,
    /// Permutation matching of two lists of summands.
    Match,
    /// Equivalence of two diagonal matrices.
    EquivDiag,
    /// Canonical sequence, triangular-ring ideal lemmas and locality criteria.
    Verify,
    /// Cross-check fast paths against brute force on a generated corpus.
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Exit status of a job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    InputError = 2,
    Undecided = 3,
}

fn field<'a>(job: &'a Value, key: &str) -> Result<&'a Value> {
    job.get(key).ok_or_else(|| Error::Parse(format!("job is missing \"{key}\"")))
}

fn parse_ring(job: &Value) -> Result<Ring> {
    let r = field(job, "ring")?;
    Ring::parse(r.as_str().ok_or_else(|| Error::Parse("\"ring\" must be a string".into()))?)
}

/// `{"m0", "m1", "mu"}`, or `{"mu": rows}` for free modules (with optional `"dims": [n0, n1]`).
pub fn parse_object(ring: &Ring, v: &Value) -> Result<MorphObject> {
    if v.get("m0").is_some() {
        return MorphObject::from_json(ring, v);
    }
    let mu = v.get("mu").ok_or_else(|| Error::Parse("object needs \"mu\"".into()))?;
    let rows = mu.as_array().map_or(0, Vec::len);
    let cols = mu.get(0).and_then(Value::as_array).map_or(0, Vec::len);
    let (n0, n1) = match v.get("dims").and_then(Value::as_array) {
        Some(d) if d.len() == 2 => (
            d[0].as_u64().ok_or_else(|| Error::Parse("dims must be integers".into()))? as usize,
            d[1].as_u64().ok_or_else(|| Error::Parse("dims must be integers".into()))? as usize,
        ),
        Some(_) => return Err(Error::Parse("dims must be [dim M0, dim M1]".into())),
        None => (cols, rows),
    };
    let m = if n1 == 0 || n0 == 0 {
        ExactMatrix::zeros(ring, n1, n0)
    } else {
        ExactMatrix::from_json(ring, mu, Some((n1, n0)))?
    };
    MorphObject::new(FPModule::free(ring, n0), FPModule::free(ring, n1), m)
}

fn parse_objects(ring: &Ring, v: &Value) -> Result<Vec<MorphObject>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected a list of objects".into()))?
        .iter()
        .map(|o| parse_object(ring, o))
        .collect()
}

fn parse_tags(job: &Value, default: &[ClassTag]) -> Result<Vec<ClassTag>> {
    match job.get("tags") {
        None => Ok(default.to_vec()),
        Some(t) => t
            .as_array()
            .ok_or_else(|| Error::Parse("tags must be a list".into()))?
            .iter()
            .map(|x| ClassTag::parse(x.as_str().unwrap_or("")))
            .collect(),
    }
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Isomorphic => Status::Ok,
        Verdict::Not => Status::Negative,
        Verdict::Undecided => Status::Undecided,
    }
}

fn policy(cli: &Cli) -> DecisionPolicy {
    let mut p = DecisionPolicy::with_seed(cli.seed);
    if let Some(t) = cli.trials {
        p.trials = t;
    }
    p
}

/// Runs a parsed job, returning the report and its status.
pub fn execute(command: Command, job: &Value, cli: &Cli) -> Result<(Value, Status)> {
    let ring = parse_ring(job)?;
    let policy = policy(cli);
    match command {
        Command::Decompose => {
            let m = parse_object(&ring, field(job, "object")?)?;
            let d = decompose_field(&m)?;
            let (n0, n1) = d.psi();
            let mut report = d.to_json();
            report["psi"] = json!([n0, n1]);
            Ok((report, Status::Ok))
        }
        Command::Endo => {
            let m = parse_object(&ring, field(job, "object")?)?;
            let mut report = if ring.is_field() {
                classify(&endo_algebra(&m)?).to_json()
            } else {
                let fe = finite_endo(&m, FINITE_LIMIT)?;
                json!({
                    "order": fe.order(),
                    "radical_size": fe.radical().len(),
                    "is_local": fe.is_local(),
                })
            };
            match ideal_predicates(&m) {
                Ok(preds) if ring.is_finite() => {
                    let fe = finite_endo(&m, FINITE_LIMIT)?;
                    report["predicates"] = preds.iter().map(|p| fe.analyze(*p).to_json()).collect();
                }
                Ok(preds) => report["predicates"] = preds.iter().map(|p| json!(p.tag.name())).collect(),
                Err(e) => report["predicates_unavailable"] = json!(e.to_string()),
            }
            Ok((report, Status::Ok))
        }
        Command::Classes => {
            let (m, n) = (parse_object(&ring, field(job, "left")?)?, parse_object(&ring, field(job, "right")?)?);
            let tags = parse_tags(job, &ClassTag::PAIR)?;
            let reports = tags.iter().map(|&t| class_equal(&m, &n, t, &policy)).collect::<Result<Vec<_>>>()?;
            let status = if reports.iter().any(|r| r.verdict == ClassVerdict::NotEqual) {
                Status::Negative
            } else if reports.iter().any(|r| r.verdict == ClassVerdict::Undecided) {
                Status::Undecided
            } else {
                Status::Ok
            };
            Ok((json!({"reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()}), status))
        }
        Command::Match => {
            let (ms, ns) = (parse_objects(&ring, field(job, "left")?)?, parse_objects(&ring, field(job, "right")?)?);
            let tags = parse_tags(job, &ClassTag::PAIR)?;
            let r = match_decompositions(&ms, &ns, &tags, &policy)?;
            Ok((r.to_json(), verdict_status(r.verdict)))
        }
        Command::EquivDiag => {
            let elems = |key: &str| -> Result<Vec<_>> {
                field(job, key)?
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("\"{key}\" must be a list")))?
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => ring.parse_elem(s),
                        other => ring.parse_elem(&other.to_string()),
                    })
                    .collect()
            };
            let r = diag_equiv(&ring, &elems("a")?, &elems("b")?)?;
            let status = if r.equivalent { Status::Ok } else { Status::Negative };
            Ok((r.to_json(), status))
        }
        Command::Verify => {
            let m = parse_object(&ring, field(job, "object")?)?;
            let mut ok = true;
            let sequence = match verify_canonical_sequence(&m) {
                Ok(s) => s.to_json(),
                Err(e) => {
                    ok = false;
                    json!({"error": e.to_string()})
                }
            };
            let lemmas = match check_ideal_lemmas(&ring, job.get("sample").and_then(Value::as_u64).unwrap_or(64) as usize) {
                Ok(r) => {
                    ok &= r.passed();
                    r.to_json()
                }
                Err(e) => json!({"skipped": e.to_string()}),
            };
            let locality = match locality_criteria_check(&m) {
                Ok(r) => {
                    ok &= r.agree();
                    r.to_json()
                }
                Err(e) => json!({"skipped": e.to_string()}),
            };
            let report = json!({"sequence": sequence, "ideal_lemmas": lemmas, "locality": locality, "passed": ok});
            Ok((report, if ok { Status::Ok } else { Status::Negative }))
        }
        Command::Oracle => {
            let num = |k: &str, d: u64| job.get(k).and_then(Value::as_u64).unwrap_or(d);
            let spec = CorpusSpec {
                ring: ring.clone(),
                max_gens: num("max_gens", 2) as usize,
                max_exponent: num("max_exponent", 2) as u32,
                random: num("random", 8) as usize,
                seed: cli.seed,
            };
            let corpus = generate_corpus(&spec)?;
            let limit = num("pairs", 400) as usize;
            let (mut checked, mut iso_mismatch, mut hom_mismatch, mut undecided, mut too_large) = (0, 0, 0, 0, 0);
            let objs = &corpus.objects;
            'outer: for a in objs {
                for b in objs {
                    if checked >= limit {
                        break 'outer;
                    }
                    let Ok(truth) = brute_force_iso(a, b) else {
                        too_large += 1;
                        continue;
                    };
                    checked += 1;
                    match iso_test(a, b, &policy).verdict {
                        Verdict::Undecided => undecided += 1,
                        v => iso_mismatch += ((v == Verdict::Isomorphic) != truth) as usize,
                    }
                    if let (Ok(count), Some(order)) = (brute_force_hom_count(a, b), hom_space(a, b).order()) {
                        hom_mismatch += (order != count.into()) as usize;
                    }
                }
            }
            let report = json!({
                "objects": objs.len(),
                "pairs_checked": checked,
                "iso_mismatches": iso_mismatch,
                "hom_count_mismatches": hom_mismatch,
                "undecided": undecided,
                "skipped_too_large": too_large,
            });
            let status = if iso_mismatch + hom_mismatch > 0 { Status::Negative } else { Status::Ok };
            Ok((report, status))
        }
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => report.to_string(),
        Format::Text => match report.as_object() {
            Some(map) => map.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n"),
            None => report.to_string(),
        },
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(".{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("report")));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn read_input(input: &str) -> std::io::Result<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(input)
    }
}

/// Parses arguments, runs the job and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError as i32 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let text = match read_input(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.input);
            return Status::InputError as i32;
        }
    };
    let job: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: invalid JSON input: {e}");
            return Status::InputError as i32;
        }
    };
    let (report, status) = match execute(cli.command, &job, &cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::InputError as i32;
        }
    };
    let out = render(&report, cli.format) + "\n";
    let written = match &cli.output {
        Some(p) => write_atomic(p, &out),
        None => std::io::stdout().write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return Status::InputError as i32;
    }
    status as i32
}
