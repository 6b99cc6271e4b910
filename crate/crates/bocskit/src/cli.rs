//! The `bocskit` command line.

use crate::format::{parse_biquiver, write_biquiver, write_presentation, ParseError};
use crate::json::{self, ClassificationJson, ComplexJson, DimJson, DualJson, JsonError, ObjectJson, ObjectKind};
use bocs_core::bocs::{validate, Bocs};
use bocs_core::classify::classify;
use bocs_core::dg::DiffBiquiver;
use bocs_core::koszul::{
    hom_ext_matrices, koszul_dual_with, regularize, regularize_dual, ringel_dual_with, DualPresentation, SignRule,
};
use bocs_core::rep::{
    box_complex, check_n_morphism, check_n_object, check_r_morphism, check_r_object, cohomology_dims,
    diamond_complex, phi, verify_complex, xi_expand, NObject,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "bocskit", version, about = "Directed bocses, their duals and small classifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Signs {
    Graded,
    Positive,
}

impl From<Signs> for SignRule {
    fn from(s: Signs) -> Self {
        match s {
            Signs::Graded => SignRule::Graded,
            Signs::Positive => SignRule::Positive,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the differential of a biquiver.
    Validate {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Koszul (or Ringel) dual presentation.
    Dual {
        input: PathBuf,
        #[arg(long)]
        ringel: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "graded")]
        signs: Signs,
    },
    /// Remove superfluous pairs from a biquiver or from one of its duals.
    Regularize {
        input: PathBuf,
        #[arg(long, conflicts_with = "ringel")]
        dual: bool,
        #[arg(long)]
        ringel: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "graded")]
        signs: Signs,
    },
    /// The complexes Box_i and Diamond_i.
    Box {
        input: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Generator counts, Hom and Ext dimensions and dim R.
    Dims {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check an object or morphism given as JSON.
    Check {
        input: PathBuf,
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classify curve-like biquivers on n vertices.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Json { path: String, source: JsonError },
    /// A well-formed input on which the requested computation fails.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<DiffBiquiver, CliError> {
    parse_biquiver(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn load_bocs(path: &Path) -> Result<Bocs, CliError> {
    let q = load(path)?;
    let report = validate(&q);
    if let Some(v) = report.violations.first() {
        return Err(CliError::Failed(format!("not a valid bocs: {}: {}", v.generator, v.residue)));
    }
    Bocs::new(&q).map_err(|e| CliError::Failed(e.to_string()))
}

fn failed(e: impl ToString) -> CliError {
    CliError::Failed(e.to_string())
}

fn dual_of(b: &Bocs, ringel: bool, signs: Signs) -> Result<DualPresentation, CliError> {
    let r = if ringel { ringel_dual_with(b, signs.into()) } else { koszul_dual_with(b, signs.into()) };
    r.map_err(failed)
}

fn render_dual(p: &DualPresentation, steps: &[bocs_core::koszul::RegStep], as_json: bool) -> Result<String, CliError> {
    if as_json {
        return Ok(json::to_string(&DualJson::new(p, steps).map_err(failed)?));
    }
    let mut s = String::new();
    for st in steps {
        let _ = writeln!(s, "# removed {} with {}", st.removed, st.with);
    }
    s.push_str(&write_presentation(p).map_err(failed)?);
    Ok(s)
}

fn matrix_text(m: &[Vec<usize>]) -> String {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

#[derive(Serialize)]
struct BoxJson {
    vertex: usize,
    #[serde(rename = "box")]
    box_: ComplexJson,
    diamond: ComplexJson,
}

#[derive(Serialize)]
struct CheckJson {
    passed: bool,
    /// Residues of the defining identity in the `c`-form.
    direct: Vec<String>,
    /// Residues in the dual `s`-form.
    dual: Vec<String>,
    filtration: Option<bool>,
    complex: Vec<String>,
}

fn run_check(b: &Bocs, obj: &ObjectJson) -> Result<CheckJson, JsonError> {
    let sy = obj.source.sdata(b)?;
    let ny = NObject { vertex: obj.source.vertex.clone(), labels: obj.source.labels.clone(), c: phi(&sy) };
    match obj.kind {
        ObjectKind::Object => {
            let r = check_n_object(b, &ny);
            let dual = check_r_object(b, &sy);
            let complex = if r.linear {
                verify_complex(b, &xi_expand(b, &ny)).map(|c| c.residues).unwrap_or_else(|e| vec![e.to_string()])
            } else {
                vec!["structure map is not vertex-preserving".into()]
            };
            let direct: Vec<String> = r.residues.iter().map(|(y, t)| format!("{y}: {t}")).collect();
            Ok(CheckJson {
                passed: r.passed() && dual.is_empty(),
                direct,
                dual,
                filtration: Some(r.filtration),
                complex,
            })
        }
        ObjectKind::Morphism => {
            let Some(t) = &obj.target else {
                return Err(JsonError::Content("a morphism needs a target".into()));
            };
            let sz = t.sdata(b)?;
            let nz = NObject { vertex: t.vertex.clone(), labels: t.labels.clone(), c: phi(&sz) };
            let sf = obj.morphism_data(b)?;
            let direct: Vec<String> =
                check_n_morphism(b, &phi(&sf), &ny, &nz).into_iter().map(|(y, t)| format!("{y}: {t}")).collect();
            let dual = check_r_morphism(b, &sf, &sy, &sz);
            Ok(CheckJson { passed: direct.is_empty() && dual.is_empty(), direct, dual, filtration: None, complex: vec![] })
        }
    }
}

/// Executes a parsed command. Returns the exit code and the text for
/// standard output.
pub fn execute(cmd: &Command) -> Result<(i32, String), CliError> {
    let mut out = String::new();
    let code = match cmd {
        Command::Validate { input, json: as_json } => {
            let q = load(input)?;
            let r = validate(&q);
            if *as_json {
                out = json::to_string(&json::ValidationJson::from(&r));
            } else if r.passed() {
                out.push_str("ok\n");
            } else {
                for v in &r.violations {
                    let _ = writeln!(out, "{}: {}", v.generator, v.residue);
                }
            }
            if r.passed() {
                0
            } else {
                1
            }
        }
        Command::Dual { input, ringel, json: as_json, signs } => {
            let b = load_bocs(input)?;
            out = render_dual(&dual_of(&b, *ringel, *signs)?, &[], *as_json)?;
            0
        }
        Command::Regularize { input, dual, ringel, json: as_json, signs } => {
            if *dual || *ringel {
                let b = load_bocs(input)?;
                let (p, steps) = regularize_dual(&dual_of(&b, *ringel, *signs)?);
                out = render_dual(&p, &steps, *as_json)?;
            } else {
                let q = load(input)?;
                let (r, steps) = regularize(&q);
                let p = DualPresentation { dg: r, ringel: false };
                if *as_json {
                    out = render_dual(&p, &steps, true)?;
                } else {
                    for st in &steps {
                        let _ = writeln!(out, "# removed {} with {}", st.removed, st.with);
                    }
                    out.push_str(&write_biquiver(&p.dg));
                }
            }
            0
        }
        Command::Box { input, vertex, json: as_json } => {
            let b = load_bocs(input)?;
            let vertices: Vec<usize> = match vertex {
                Some(v) if (1..=b.n()).contains(v) => vec![*v],
                Some(v) => return Err(failed(format!("vertex {v} is out of range"))),
                None => (1..=b.n()).collect(),
            };
            let op = b.opposite();
            let mut docs = Vec::new();
            for &i in &vertices {
                let bx = box_complex(&b, i);
                let dm = diamond_complex(&b, i);
                if *as_json {
                    docs.push(BoxJson {
                        vertex: i,
                        box_: ComplexJson::from_complex(&b, &bx),
                        diamond: ComplexJson::from_complex(&op, &dm),
                    });
                    continue;
                }
                let h: Vec<String> =
                    cohomology_dims(&bx, i).iter().map(|(d, h)| format!("H^{d}={h}")).collect();
                let _ = writeln!(out, "Box_{i}: degrees {}..{}, dims {:?}, {}", bx.lo, bx.lo + bx.terms.len() as i32 - 1, bx.dims(), h.join(" "));
                let _ = writeln!(out, "Diamond_{i}: degrees {}..{}, dims {:?}", dm.lo, dm.lo + dm.terms.len() as i32 - 1, dm.dims());
            }
            if *as_json {
                out = json::to_string(&docs);
            }
            0
        }
        Command::Dims { input, json: as_json } => {
            let b = load_bocs(input)?;
            let r = hom_ext_matrices(&b);
            if *as_json {
                out = json::to_string(&DimJson::from(&r));
            } else {
                let _ = writeln!(out, "dim A = {}\ndim Vbar = {}\ndim R = {}", r.dim_a, r.dim_vbar, r.right_algebra);
                for (name, m) in [("solid", &r.solid), ("dashed", &r.dashed), ("hom", &r.hom), ("ext", &r.ext)] {
                    let _ = writeln!(out, "{name}:\n{}", matrix_text(m));
                }
            }
            0
        }
        Command::Check { input, object, json: as_json } => {
            let b = load_bocs(input)?;
            let text = read(object)?;
            let path = object.display().to_string();
            let obj: ObjectJson = serde_json::from_str(&text)
                .map_err(|e| CliError::Json { path: path.clone(), source: JsonError::Syntax(e) })?;
            let r = run_check(&b, &obj).map_err(|source| CliError::Json { path, source })?;
            if *as_json {
                out = json::to_string(&r);
            } else {
                let _ = writeln!(out, "{}", if r.passed { "ok" } else { "failed" });
                for (head, list) in [("direct", &r.direct), ("dual", &r.dual), ("complex", &r.complex)] {
                    for x in list {
                        let _ = writeln!(out, "{head}: {x}");
                    }
                }
                if r.filtration == Some(false) {
                    out.push_str("filtration: kernel tower does not exhaust the object\n");
                }
            }
            if r.passed {
                0
            } else {
                1
            }
        }
        Command::Classify { n, json: as_json } => {
            let r = classify(*n).map_err(failed)?;
            if *as_json {
                out = json::to_string(&ClassificationJson::from(&r));
            } else {
                let _ = writeln!(out, "{} classes on {} vertices", r.classes.len(), r.n);
                for (c, d) in r.classes.iter().zip(&r.ringel) {
                    let dual = d.as_deref().unwrap_or("?");
                    let _ = writeln!(out, "{}  (Ringel dual {dual})", c.label);
                    for (g, t) in c.differential() {
                        let _ = writeln!(out, "    d({g}) = {t}");
                    }
                }
                for e in &r.excluded {
                    let _ = writeln!(out, "excluded {} [{}]: {}", e.candidate.label, e.reason.code(), e.witness);
                }
            }
            0
        }
    };
    Ok((code, out))
}

/// Parses `argv` (including the program name), runs the command and
/// writes to the given streams. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((code, text)) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
