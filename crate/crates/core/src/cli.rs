//! The `nielsen` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 insufficient data, 4 invalid
//! database. Answers go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    classify_projective, classify_space_form, classify_sphere_target, AntipodalInput, CaseId,
    ClassifyError, CoincidenceAnswer, Count, DomainCase, ProjectiveClass, SpaceFormAnswer,
    SpaceFormQuery, ROWS,
};
use crate::db::{validate, Database, DbError, Field, Loc, SpaceId, DEFAULT_DATABASE};
use crate::fgab::GroupElement;
use crate::selfcoincidence::{self_verdict, LoosenessVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;
pub const EXIT_DB_INVALID: i32 = 4;

/// Environment variable naming the database file when `--db` is absent.
pub const DB_ENV: &str = "NIELSEN_DB";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "nielsen",
    version,
    about = "Nielsen and minimum coincidence numbers for maps out of spheres"
)]
struct Cli {
    /// Database file (defaults to $NIELSEN_DB, then the built-in database).
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    Sphere,
    SimplyConnected,
}

/// Comma-separated integer coordinates; empty for the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Coords(Vec<BigInt>);

fn parse_coords(s: &str) -> Result<Coords, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Coords(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("`{}` is not an integer", t.trim()))
        })
        .collect::<Result<_, _>>()
        .map(Coords)
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a pair of maps S^m -> KP(n') by their sphere components.
    Classify {
        #[arg(long = "K", value_parser = parse_field)]
        field: Field,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        nprime: u32,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        f1: Coords,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        f2: Coords,
        /// Residue of the first map in π_{m-1}(S^{d-1}).
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        r1: Option<Coords>,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        r2: Option<Coords>,
    },
    /// Looseness of the self-coincidence pair (f, f) for f: S^m -> KP(n').
    #[command(name = "self")]
    SelfPair {
        #[arg(long = "K", value_parser = parse_field)]
        field: Field,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        nprime: u32,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        f: Coords,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        r: Option<Coords>,
    },
    /// Classify a pair of maps S^m -> S^n.
    Sphere {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        f1: Coords,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        f2: Coords,
        /// Assert whether f1 ~ A∘f2 instead of using the stored antipodal action.
        #[arg(long, action = ArgAction::Set)]
        antipodal: Option<bool>,
    },
    /// Maps into a spherical space form S^n/G.
    Spaceform {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, action = ArgAction::Set)]
        homotopic: bool,
        /// Dimension of the domain.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_enum, default_value_t = DomainArg::Sphere)]
        domain: DomainArg,
    },
    /// Check a database file and report every violation.
    DbValidate,
    /// List the groups and homomorphisms of the database.
    DbShow,
}

/// Structured answer printed in machine mode, one JSON document per run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineRecord {
    pub command: String,
    pub case_id: CaseId,
    pub nielsen: Value,
    pub mcc: Value,
    /// `null` when undetermined.
    pub mc: Option<Count>,
    pub reidemeister: Option<Count>,
    pub flags: FlagsRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub residue_present: bool,
    pub notes: Vec<String>,
    pub db_version: String,
}

/// A determined number, or the set of values still possible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(u64),
    OneOf(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsRecord {
    pub omega_sharp_zero: Option<bool>,
    pub loose: Option<bool>,
    pub loose_small: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub small_deformation: bool,
    pub loose: bool,
    pub coincidence_producing: bool,
    pub omega_sharp_zero: bool,
    pub lifted_pair_loose: Option<bool>,
    pub gap_witness: bool,
}

impl From<LoosenessVerdict> for VerdictRecord {
    fn from(v: LoosenessVerdict) -> Self {
        VerdictRecord {
            small_deformation: v.small_deformation,
            loose: v.loose,
            coincidence_producing: v.coincidence_producing,
            omega_sharp_zero: v.omega_sharp_zero,
            lifted_pair_loose: v.lifted_pair_loose,
            gap_witness: v.gap_witness,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::InsufficientData(_) => EXIT_INSUFFICIENT,
            ClassifyError::Inconsistent { .. } | ClassifyError::BadEntry { .. } => EXIT_DB_INVALID,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

/// Runs the command line with the process environment.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(argv, |k| std::env::var(k).ok())
}

/// Runs the command line, looking up environment variables through `env`.
pub fn run_with_env<I, T>(argv: I, env: impl Fn(&str) -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE.max(code),
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let db_path = cli
        .db
        .clone()
        .or_else(|| env(DB_ENV).filter(|s| !s.is_empty()).map(PathBuf::from));
    match execute(&cli, db_path) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read_db_text(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        None => Ok(DEFAULT_DATABASE.to_string()),
        Some(p) => std::fs::read_to_string(p).map_err(|e| {
            Failure::new(
                EXIT_USAGE,
                format!("cannot read database {}: {e}", p.display()),
            )
        }),
    }
}

fn load_db(path: &Option<PathBuf>) -> Result<Database, Failure> {
    let text = read_db_text(path)?;
    Database::from_text(&text).map_err(|e| db_failure(path, e))
}

fn db_failure(path: &Option<PathBuf>, e: DbError) -> Failure {
    let name = path.as_ref().map_or_else(
        || "built-in database".to_string(),
        |p| p.display().to_string(),
    );
    Failure::new(EXIT_DB_INVALID, format!("{name}: {e}"))
}

fn execute(cli: &Cli, db_path: Option<PathBuf>) -> Result<String, Failure> {
    let machine = cli.output == OutputMode::Machine;
    match &cli.command {
        Command::DbValidate => {
            let text = read_db_text(&db_path)?;
            let db = Database::parse_unvalidated(&text).map_err(|e| db_failure(&db_path, e))?;
            let violations = validate(&db);
            if !violations.is_empty() {
                return Err(db_failure(&db_path, DbError::Validation(violations)));
            }
            Ok(if machine {
                json(&serde_json::json!({
                    "valid": true,
                    "groups": db.groups().len(),
                    "homs": db.homs().len(),
                    "assertions": db.assertions().len(),
                    "db_version": db.version(),
                }))
            } else {
                format!(
                    "database {} is valid: {} groups, {} homomorphisms, {} assertions\n",
                    db.version(),
                    db.groups().len(),
                    db.homs().len(),
                    db.assertions().len()
                )
            })
        }
        Command::DbShow => {
            let db = load_db(&db_path)?;
            Ok(if machine {
                show_machine(&db)
            } else {
                show_text(&db)
            })
        }
        Command::Classify {
            field,
            m,
            nprime,
            f1,
            f2,
            r1,
            r2,
        } => {
            let db = load_db(&db_path)?;
            let c1 = ProjectiveClass::new(
                &db,
                *field,
                *m,
                *nprime,
                &f1.0,
                r1.as_ref().map(|r| r.0.as_slice()),
            )?;
            let c2 = ProjectiveClass::new(
                &db,
                *field,
                *m,
                *nprime,
                &f2.0,
                r2.as_ref().map(|r| r.0.as_slice()),
            )?;
            let answer = classify_projective(&db, &c1, &c2)?;
            if machine {
                return Ok(json(&record("classify", &answer, None, None, &db)));
            }
            let mut out = String::new();
            let loc = Loc::sphere(field.dim() * (nprime + 1) - 1, *m);
            writeln!(
                out,
                "maps S^{m} -> {field}P({nprime}), sphere components in π_{m}({})",
                loc.space
            )
            .unwrap();
            writeln!(out, "f1 = {}", show_element(&db, loc, c1.lift())).unwrap();
            writeln!(out, "f2 = {}", show_element(&db, loc, c2.lift())).unwrap();
            write_answer(&mut out, &answer);
            Ok(out)
        }
        Command::SelfPair {
            field,
            m,
            nprime,
            f,
            r,
        } => {
            let db = load_db(&db_path)?;
            let class = ProjectiveClass::new(
                &db,
                *field,
                *m,
                *nprime,
                &f.0,
                r.as_ref().map(|r| r.0.as_slice()),
            )?;
            let verdict = self_verdict(&db, &class)?;
            let answer = classify_projective(&db, &class, &class)?;
            if machine {
                return Ok(json(&record("self", &answer, Some(verdict), None, &db)));
            }
            let mut out = String::new();
            let loc = Loc::sphere(field.dim() * (nprime + 1) - 1, *m);
            writeln!(
                out,
                "f = {} in π_{m}({})",
                show_element(&db, loc, class.lift()),
                loc.space
            )
            .unwrap();
            write_verdict(&mut out, *field, &verdict);
            write_answer(&mut out, &answer);
            Ok(out)
        }
        Command::Sphere {
            m,
            n,
            f1,
            f2,
            antipodal,
        } => {
            let db = load_db(&db_path)?;
            let input = antipodal.map_or(AntipodalInput::FromDatabase, AntipodalInput::Given);
            let answer = classify_sphere_target(&db, *m, *n, &f1.0, &f2.0, input)?;
            if machine {
                return Ok(json(&record("sphere", &answer, None, None, &db)));
            }
            let mut out = String::new();
            let loc = Loc::sphere(*n, *m);
            writeln!(out, "maps S^{m} -> S^{n}").unwrap();
            if answer.case == CaseId::Circle {
                writeln!(
                    out,
                    "degrees {} and {}",
                    show_coords(&f1.0),
                    show_coords(&f2.0)
                )
                .unwrap();
            } else {
                writeln!(out, "f1 = {}", show_raw(&db, loc, &f1.0)).unwrap();
                writeln!(out, "f2 = {}", show_raw(&db, loc, &f2.0)).unwrap();
            }
            write_answer(&mut out, &answer);
            Ok(out)
        }
        Command::Spaceform {
            order,
            n,
            homotopic,
            m,
            domain,
        } => {
            let db = load_db(&db_path)?;
            let domain = match (domain, m) {
                (DomainArg::Sphere, m) => DomainCase::Sphere { m: *m },
                (DomainArg::SimplyConnected, Some(m)) => DomainCase::SimplyConnected { m: *m },
                (DomainArg::SimplyConnected, None) => {
                    return Err(Failure::new(
                        EXIT_USAGE,
                        "--domain simply-connected requires --m",
                    ));
                }
            };
            let q = SpaceFormQuery {
                group_order: *order,
                n: *n,
                homotopic: *homotopic,
                domain,
            };
            let answer = classify_space_form(&q)?;
            if machine {
                return Ok(json(&space_form_record(&answer, &db)));
            }
            let mut out = String::new();
            writeln!(
                out,
                "maps into S^{n}/G with #G = {order}, {}",
                if *homotopic { "f1 ~ f2" } else { "f1 !~ f2" }
            )
            .unwrap();
            match &answer {
                SpaceFormAnswer::Determined {
                    answer,
                    certificate,
                } => {
                    writeln!(out, "case {}", answer.case).unwrap();
                    if let Some(c) = certificate {
                        writeln!(out, "certificate: {c}").unwrap();
                    }
                    writeln!(out, "N#=MCC={}", answer.nielsen).unwrap();
                    writeln!(out, "MC={}", show_mc(answer.mc)).unwrap();
                }
                SpaceFormAnswer::Partial {
                    case,
                    nielsen,
                    mcc,
                    mc_equals_mcc,
                    note,
                    ..
                } => {
                    writeln!(out, "case {case}: only partially determined").unwrap();
                    writeln!(out, "N# ∈ {{{}}}", join(nielsen)).unwrap();
                    writeln!(out, "MCC ∈ {{{}}}", join(mcc)).unwrap();
                    if *mc_equals_mcc {
                        writeln!(out, "MC = MCC").unwrap();
                    }
                    writeln!(out, "{note}").unwrap();
                }
            }
            Ok(out)
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("records serialize");
    s.push('\n');
    s
}

fn flags_record(a: &CoincidenceAnswer) -> FlagsRecord {
    FlagsRecord {
        omega_sharp_zero: a.flags.omega_sharp_zero,
        loose: a.flags.loose,
        loose_small: a.flags.loose_small,
    }
}

fn record(
    command: &str,
    a: &CoincidenceAnswer,
    verdict: Option<LoosenessVerdict>,
    certificate: Option<String>,
    db: &Database,
) -> MachineRecord {
    MachineRecord {
        command: command.into(),
        case_id: a.case,
        nielsen: Value::Exact(a.nielsen),
        mcc: Value::Exact(a.mcc),
        mc: a.mc,
        reidemeister: Some(a.reidemeister),
        flags: flags_record(a),
        verdict: verdict.map(Into::into),
        certificate,
        residue_present: a.residue_present,
        notes: a.notes.clone(),
        db_version: db.version().to_string(),
    }
}

fn space_form_record(answer: &SpaceFormAnswer, db: &Database) -> MachineRecord {
    match answer {
        SpaceFormAnswer::Determined {
            answer,
            certificate,
        } => record("spaceform", answer, None, certificate.clone(), db),
        SpaceFormAnswer::Partial {
            case,
            nielsen,
            mcc,
            mc_equals_mcc,
            reidemeister,
            note,
        } => {
            let mut notes = vec![note.clone()];
            if *mc_equals_mcc {
                notes.push("MC = MCC".into());
            }
            MachineRecord {
                command: "spaceform".into(),
                case_id: *case,
                nielsen: Value::OneOf(nielsen.clone()),
                mcc: Value::OneOf(mcc.clone()),
                mc: None,
                reidemeister: Some(Count::Finite(*reidemeister)),
                flags: FlagsRecord {
                    omega_sharp_zero: None,
                    loose: None,
                    loose_small: None,
                },
                verdict: None,
                certificate: None,
                residue_present: false,
                notes,
                db_version: db.version().to_string(),
            }
        }
    }
}

fn show_mc(mc: Option<Count>) -> String {
    mc.map_or_else(|| "unknown".to_string(), |c| c.to_string())
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undetermined",
    }
}

fn write_answer(out: &mut String, a: &CoincidenceAnswer) {
    let numbers = format!("{} {} {}", a.nielsen, a.mcc, show_mc(a.mc));
    match a.case {
        CaseId::Row(r) => {
            writeln!(
                out,
                "case {r}: {} | {numbers}",
                ROWS[r as usize - 1].condition
            )
            .unwrap();
        }
        CaseId::SphereAntipodal => writeln!(out, "case {}: f1 ~ A∘f2 | {numbers}", a.case).unwrap(),
        CaseId::SphereGeneric => writeln!(out, "case {}: f1 !~ A∘f2 | {numbers}", a.case).unwrap(),
        CaseId::Circle => {
            writeln!(out, "case {}: |d1 - d2| coincidences | {numbers}", a.case).unwrap()
        }
        other => writeln!(out, "case {other} | {numbers}").unwrap(),
    }
    writeln!(out, "N#={} MCC={} MC={}", a.nielsen, a.mcc, show_mc(a.mc)).unwrap();
    writeln!(
        out,
        "omega#=0: {}; loose: {}; loose by small deformation: {}",
        yes_no(a.flags.omega_sharp_zero),
        yes_no(a.flags.loose),
        yes_no(a.flags.loose_small)
    )
    .unwrap();
    writeln!(out, "#π0(E) = {}", a.reidemeister).unwrap();
    for note in &a.notes {
        writeln!(out, "note: {note}").unwrap();
    }
}

fn write_verdict(out: &mut String, field: Field, v: &LoosenessVerdict) {
    let omega = if v.omega_sharp_zero {
        "omega#=0"
    } else {
        "omega#!=0"
    };
    let pair = if v.loose {
        "loose; by small deformation"
    } else {
        "NOT loose; coincidence producing"
    };
    writeln!(out, "(f, f): {pair}; {omega}").unwrap();
    let small = if field == Field::R {
        "small deformation"
    } else {
        "small ξ_K-deformation"
    };
    let lifted = match (v.lifted_pair_loose, v.small_deformation) {
        (Some(true), true) => format!("loose; by {small}"),
        (Some(true), false) => format!("loose; NOT by {small}"),
        (Some(false), _) => "NOT loose".to_string(),
        (None, _) => "looseness undetermined".to_string(),
    };
    writeln!(out, "(f~, f~): {lifted}; {omega}").unwrap();
    if v.gap_witness {
        writeln!(
            out,
            "OMEGA#-BLIND: omega#(f, f) = 0 but (f, f) is not loose"
        )
        .unwrap();
    }
}

fn show_coords(c: &[BigInt]) -> String {
    c.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn show_element(db: &Database, loc: Loc, x: &GroupElement) -> String {
    show_raw(db, loc, x.coords())
}

/// `2*w6 + 1*e` using the stored generator labels; coordinates alone if
/// the labels are unavailable.
fn show_raw(db: &Database, loc: Loc, coords: &[BigInt]) -> String {
    let labels = db.labels(loc).filter(|l| l.len() == coords.len());
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != BigInt::from(0))
        .map(|(i, c)| match labels {
            Some(l) => format!("{c}*{}", l[i]),
            None => format!("{c}*g{i}"),
        })
        .collect();
    let body = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    };
    format!("{body}  [coordinates ({})]", show_coords(coords))
}

fn show_text(db: &Database) -> String {
    let mut out = String::new();
    writeln!(out, "nielsendb {}", db.version()).unwrap();
    writeln!(out, "groups:").unwrap();
    for g in db.groups() {
        let labels = if g.generator_labels.is_empty() {
            "-".to_string()
        } else {
            g.generator_labels.join(" ")
        };
        writeln!(
            out,
            "  π_{}({}) = {}  gens {}  ({})",
            g.loc.degree, g.loc.space, g.group, labels, g.provenance
        )
        .unwrap();
    }
    writeln!(out, "homomorphisms:").unwrap();
    for h in db.homs() {
        let rows: Vec<String> = h
            .rows
            .iter()
            .map(|r| format!("[{}]", show_coords(r)))
            .collect();
        writeln!(out, "  {}  [{}]  ({})", h.key, rows.join(","), h.provenance).unwrap();
    }
    writeln!(out, "assertions: {}", db.assertions().len()).unwrap();
    out
}

fn show_machine(db: &Database) -> String {
    let space = |s: SpaceId| s.to_string();
    let groups: Vec<_> = db
        .groups()
        .iter()
        .map(|g| {
            serde_json::json!({
                "space": space(g.loc.space),
                "m": g.loc.degree,
                "free_rank": g.group.free_rank(),
                "torsion": g.group.torsion().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "generators": g.generator_labels,
                "provenance": g.provenance,
            })
        })
        .collect();
    let homs: Vec<_> = db
        .homs()
        .iter()
        .map(|h| {
            serde_json::json!({
                "key": h.key.to_string(),
                "matrix": h.rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "provenance": h.provenance,
            })
        })
        .collect();
    json(&serde_json::json!({
        "db_version": db.version(),
        "groups": groups,
        "homs": homs,
    }))
}
