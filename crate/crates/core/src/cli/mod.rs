//! Command-line pipeline: read a code spec, build, check, synthesize the
//! copy-cup circuit, compute its logical action, report parameters, and
//! search splittings.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on invalid
//! input or I/O errors.

pub mod spec;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{search_splittings, search_splittings_lambda, ConstructionError};
use crate::css::{classical_parameters, CodeParameters};
use crate::gates::{
    circuit_depth_certificate, dual_bases, logical_action, psi_polynomial, synth_circuit, verify_invariance,
    CircuitExport, GateError, LogicalAction,
};
use crate::group::AbelianGroup;
use crate::orientation::{check_associativity, check_integrated_leibniz, check_nonoverlap};
pub use spec::{Algebra, Built, CheckOutcome, CodeSpec, Construction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Build,
    Check,
    Synth,
    Action,
    Params,
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    /// Künneth basis for tensor products, otherwise the code's X logicals.
    Default,
    /// Per-copy dual bases diagonalizing the `Λ = 2` pairing.
    Dual,
}

#[derive(Debug, Parser)]
#[command(name = "cupforge", version, about = "Cup-product codes and copy-cup gates")]
pub struct Cli {
    pub command: Command,
    /// Code spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Copies for the gate stage and `Λ` for the Leibniz checks.
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Largest weight enumerated by the distance search.
    #[arg(long, default_value_t = 6)]
    pub weight_cap: usize,
    /// Directory for output files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = BasisChoice::Default)]
    pub basis: BasisChoice,
    /// Trials of the randomized distance upper bound.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid spec: {0}")]
    Spec(#[from] serde_json::Error),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub kind: String,
    pub n: usize,
    pub k: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircuitSummary {
    pub lambda: usize,
    pub gates: usize,
    pub depth: usize,
    pub depth_bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub code: CodeSummary,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<CodeParameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<LogicalAction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splittings: Option<serde_json::Value>,
    pub files: Vec<PathBuf>,
    pub elapsed_ms: f64,
}

impl Report {
    #[must_use]
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    #[must_use]
    pub fn to_text(&self) -> String {
        let c = &self.code;
        let mut s = format!("{} {}: n = {}, k = {}, dims = {:?}\n", self.command, c.kind, c.n, c.k, c.dims);
        for ch in &self.checks {
            s.push_str(&format!("  [{}] {}", if ch.ok { "ok" } else { "FAIL" }, ch.name));
            if let Some(d) = &ch.detail {
                s.push_str(&format!(": {d}"));
            }
            s.push('\n');
        }
        if let Some(p) = &self.params {
            s.push_str(&format!("  parameters {p} ({})\n", p.method));
        }
        if let Some(ci) = &self.circuit {
            s.push_str(&format!(
                "  circuit: {} gates on {} copies, depth {} (bound {})\n",
                ci.gates, ci.lambda, ci.depth, ci.depth_bound
            ));
        }
        if let Some(a) = &self.action {
            s.push_str(&format!("  logical action: {} terms, level {}\n", a.terms.len(), a.level));
            for t in &a.terms {
                s.push_str(&format!("    {t:?}\n"));
            }
            if let Some(d) = &a.diagnostic {
                s.push_str(&format!("    {d}\n"));
            }
        }
        if let Some(sp) = &self.splittings {
            s.push_str(&format!("  splittings: {sp}\n"));
        }
        for f in &self.files {
            s.push_str(&format!("  wrote {}\n", f.display()));
        }
        s
    }
}

fn kind_name(c: &Construction) -> &'static str {
    match c {
        Construction::Torus { .. } => "torus",
        Construction::PlaquetteIsing { .. } => "plaquette_ising",
        Construction::Lineon { .. } => "lineon",
        Construction::GroupAlgebra { .. } => "group_algebra",
        Construction::BivariateBicycle { .. } => "bivariate_bicycle",
        Construction::SipserSpielman { .. } => "sipser_spielman",
        Construction::Explicit { .. } => "explicit",
    }
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })?;
    files.push(path);
    Ok(())
}

/// Checks on every classical factor and, when `Λ` matches the top degree,
/// cohomology invariance of the copy-cup polynomial.
fn condition_checks(built: &Built, lambda: usize, seed: u64) -> Result<Vec<CheckOutcome>, CliError> {
    let mut out = built.hypotheses.clone();
    out.push(match built.code.complex().validate() {
        Ok(()) => CheckOutcome::pass("δδ = 0"),
        Err(v) => CheckOutcome::fail("δδ = 0", v.to_string()),
    });
    let many = built.factors.len() > 1;
    for (i, f) in built.factors.iter().enumerate() {
        let tag = if many { format!(" (factor {i})") } else { String::new() };
        out.push(match check_nonoverlap(f) {
            Ok(()) => CheckOutcome::pass(format!("non-overlapping bits{tag}")),
            Err(v) => CheckOutcome::fail(format!("non-overlapping bits{tag}"), format!("{v:?}")),
        });
        out.push(match check_associativity(f) {
            Ok(()) => CheckOutcome::pass(format!("associativity{tag}")),
            Err(t) => CheckOutcome::fail(format!("associativity{tag}"), format!("{t:?}")),
        });
        let name = format!("integrated Leibniz Λ={lambda}{tag}");
        out.push(match check_integrated_leibniz(f, lambda) {
            Ok(()) => CheckOutcome::pass(name),
            Err(v) => CheckOutcome::fail(name, format!("tuple {:?}: {}", v.tuple, v.condition)),
        });
    }
    let alg = built.algebra.as_dyn();
    if lambda == alg.top_degree() && alg.integral_defined() {
        let p = psi_polynomial(alg, lambda)?;
        let cocycles = built.code.complex().cocycle_basis(1).map_err(GateError::from)?;
        out.push(
            match verify_invariance(&p, &built.code.x_checks, &built.basis, &cocycles, 500, seed) {
                Ok(r) => CheckOutcome {
                    name: "cohomology invariance".into(),
                    ok: true,
                    detail: Some(format!(
                        "{} basis tuples, {} cocycle tuples{}",
                        r.basis_tuples,
                        r.cocycle_tuples,
                        if r.cocycles_exhaustive { " (exhaustive)" } else { " (sampled)" }
                    )),
                },
                Err(c) => CheckOutcome::fail("cohomology invariance", c.to_string()),
            },
        );
    }
    Ok(out)
}

fn action_bases(built: &Built, p: &crate::gates::PhasePolynomial, choice: BasisChoice) -> Vec<Vec<crate::f2linalg::BitVector>> {
    match choice {
        BasisChoice::Dual if p.lambda() == 2 => {
            let (a, b) = dual_bases(p, &built.basis);
            vec![a, b]
        }
        _ => vec![built.basis.clone(); p.lambda()],
    }
}

/// Runs one command and returns its report.
///
/// # Errors
/// On unreadable or invalid specs, construction failures, or I/O errors.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let text = fs::read_to_string(&cli.spec).map_err(|source| CliError::Read {
        path: cli.spec.clone(),
        source,
    })?;
    let spec: CodeSpec = serde_json::from_str(&text)?;
    let built = spec.build()?;
    let lambda = cli.lambda.unwrap_or_else(|| spec.gate_lambda(&built));
    let mut report = Report {
        command: format!("{:?}", cli.command).to_lowercase(),
        code: CodeSummary {
            kind: kind_name(&spec.construction).into(),
            n: built.code.n,
            k: built.code.k,
            dims: built.code.complex().dims(),
        },
        checks: Vec::new(),
        params: None,
        circuit: None,
        action: None,
        splittings: None,
        files: Vec::new(),
        elapsed_ms: 0.0,
    };
    let labels = built.code.complex().labels(1).to_vec();
    match cli.command {
        Command::Build => {
            report.checks = built.hypotheses.clone();
            if let Some(dir) = &cli.out {
                let canonical = serde_json::to_string_pretty(&spec)?;
                write_file(dir, "code.json", &canonical, &mut report.files)?;
                let dump = json!({
                    "complex": built.code.complex().to_json(),
                    "factors": built
                        .factors
                        .iter()
                        .map(|f| json!({"complex": f.complex().to_json(), "orientation": f.orientation()}))
                        .collect::<Vec<_>>(),
                });
                write_file(dir, "complex.json", &serde_json::to_string_pretty(&dump)?, &mut report.files)?;
            }
        }
        Command::Check => {
            report.checks = condition_checks(&built, lambda, cli.seed)?;
        }
        Command::Synth => {
            let p = psi_polynomial(built.algebra.as_dyn(), lambda)?;
            let c = synth_circuit(&p);
            let cert = circuit_depth_certificate(&c);
            report.circuit = Some(CircuitSummary {
                lambda,
                gates: c.gates.len(),
                depth: cert.depth,
                depth_bound: cert.bound,
            });
            if let Some(dir) = &cli.out {
                write_file(dir, "circuit.txt", &c.to_text(&labels), &mut report.files)?;
                let export = CircuitExport::new(&p, &labels, None);
                write_file(dir, "circuit.json", &serde_json::to_string_pretty(&export)?, &mut report.files)?;
            }
        }
        Command::Action => {
            let p = psi_polynomial(built.algebra.as_dyn(), lambda)?;
            let cocycles = built.code.complex().cocycle_basis(1).map_err(GateError::from)?;
            let bases = action_bases(&built, &p, cli.basis);
            match logical_action(&p, &built.code.x_checks, &bases, &cocycles) {
                Ok(a) => {
                    report.checks.push(CheckOutcome::pass("cohomology invariance"));
                    if let Some(dir) = &cli.out {
                        let export = CircuitExport::new(&p, &labels, Some(a.clone()));
                        write_file(dir, "action.json", &serde_json::to_string_pretty(&export)?, &mut report.files)?;
                    }
                    report.action = Some(a);
                }
                Err(GateError::Invariance(c)) => {
                    report.checks.push(CheckOutcome::fail("cohomology invariance", c.to_string()));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Params => {
            let params = if matches!(built.algebra, Algebra::Classical(_)) {
                classical_parameters(built.code.complex(), cli.weight_cap)
            } else {
                let mut d = built.code.distance_exhaustive(cli.weight_cap);
                if d.exact().is_none() {
                    if let Some((w, _)) = built.code.distance_upper_bound(cli.trials, cli.seed) {
                        d = d.with_upper(w);
                    }
                }
                CodeParameters::new(built.code.n, built.code.k, d)
            };
            report.params = Some(params);
        }
        Command::Search => {
            let Construction::GroupAlgebra { group, c, .. } = &spec.construction else {
                return Err(ConstructionError::Parameter("search needs a group_algebra spec".into()).into());
            };
            let g = AbelianGroup::new(group).map_err(ConstructionError::from)?;
            let c = g.parse_polynomial(c).map_err(ConstructionError::from)?;
            let render = |v: Vec<crate::constructions::Splitting>| -> Vec<serde_json::Value> {
                v.iter()
                    .map(|s| {
                        let r = |x: &[usize]| x.iter().map(|&e| g.render(e)).collect::<Vec<_>>().join(" + ");
                        json!({"in": r(&s.c_in), "out": r(&s.c_out), "free": r(&s.c_free)})
                    })
                    .collect()
            };
            let mut found = json!({ "hypotheses": render(search_splittings(&g, &c)) });
            if let Some(l) = cli.lambda {
                found["leibniz"] = json!({ "lambda": l, "splittings": render(search_splittings_lambda(&g, &c, l)) });
            }
            if let Some(dir) = &cli.out {
                write_file(dir, "splittings.json", &serde_json::to_string_pretty(&found)?, &mut report.files)?;
            }
            report.splittings = Some(found);
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default()),
                Format::Text => print!("{}", report.to_text()),
            }
            i32::from(!report.all_ok())
        }
        Err(e) => {
            let kind = match &e {
                CliError::Read { .. } | CliError::Write { .. } => "io",
                CliError::Spec(_) => "spec",
                CliError::Construction(_) => "construction",
                CliError::Gate(_) => "gate",
            };
            eprintln!("{}", json!({"error": e.to_string(), "kind": kind}));
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(command: Command, spec: &Path) -> Cli {
        Cli {
            command,
            spec: spec.to_path_buf(),
            lambda: None,
            weight_cap: 4,
            out: None,
            format: Format::Json,
            basis: BasisChoice::Default,
            trials: 20,
            seed: 0,
        }
    }

    fn temp_spec(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("cupforge-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("spec.json");
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn torus_params_and_action() {
        let p = temp_spec("torus", r#"{"kind":"torus","lambda":2,"l":3}"#);
        let r = execute(&cli(Command::Params, &p)).unwrap();
        let params = r.params.unwrap();
        assert_eq!((params.n, params.k, params.d_exact), (18, 2, Some(3)));
        let r = execute(&cli(Command::Action, &p)).unwrap();
        assert_eq!(r.action.unwrap().terms, vec![vec![0, 1], vec![1, 0]]);
        let r = execute(&cli(Command::Check, &p)).unwrap();
        assert!(r.all_ok(), "{:?}", r.checks);
    }

    #[test]
    fn missing_file_is_error() {
        assert_eq!(run(["cupforge", "check", "--spec", "/nonexistent/spec.json"]), 2);
    }

    #[test]
    fn search_on_group_algebra() {
        let p = temp_spec("search", r#"{"kind":"group_algebra","group":[6],"c":"x + x^5 + x^2 + x^4"}"#);
        let r = execute(&cli(Command::Search, &p)).unwrap();
        let hyp = r.splittings.unwrap()["hypotheses"].as_array().unwrap().len();
        assert_eq!(hyp, 4);
    }
}
