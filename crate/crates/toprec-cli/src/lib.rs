//! Batch front end: every subcommand computes or verifies one table and
//! writes it to stdout or `--out`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use toprec::builtin::{builtin, builtin_algebra, default_truncation, Builtin, BUILTIN_IDS};
use toprec::coeff::rational_to_string;
use toprec::frobenius::{airy_from_frobenius, tqft_amplitude, verify_cc, FrobeniusAlgebra};
use toprec::givental::CohftSpec;
use toprec::loopspace::psi_table;
use toprec::mirzakhani::{volume, volumes_via_airy, VolumePolynomial};
use toprec::tr::{self, cells_at, is_stable};
use toprec::{graphs, AiryStructure, AmplitudeTable, Error, PiPoly, Rational, Scalar};

#[derive(Parser, Debug)]
#[command(name = "toprec", version, about = "Topological recursion on quantum Airy structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the defining relations of a structure.
    AiryCheck(Common),
    /// Compute the amplitude table of a structure and verify its symmetry.
    Tr(Common),
    /// Count or list the graphs of 𝔾_{g,n}.
    Graphs {
        #[command(subcommand)]
        action: GraphsAction,
    },
    /// ψ-class intersection numbers.
    Wk(Common),
    /// Weil–Petersson volumes.
    Volumes {
        #[command(flatten)]
        common: Common,
        /// Compare the direct recursion with the Airy-structure pipeline.
        #[arg(long)]
        verify: bool,
    },
    /// 2d TQFT amplitudes of a Frobenius algebra.
    Tqft {
        #[command(flatten)]
        common: Common,
        /// Check F_{g,n} = |𝔾_{g,n}| 𝓕(Σ_{g,n}) up to --chi-max.
        #[arg(long)]
        verify: bool,
    },
    /// Amplitudes of a semisimple CohFT given as a JSON spec.
    Cohft {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphsAction {
    Count(GraphArgs),
    List(GraphArgs),
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub g: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in id or path to a JSON file.
    #[arg(long)]
    pub structure: Option<String>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub chi_max: u64,
    /// Maximal grade kept in graded structures.
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub g: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(cli.command) {
        Ok(Report { text, out, failure }) => {
            let mut outcome = Outcome::default();
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        return Outcome { code: 1, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) };
                    }
                }
                None => outcome.stdout = text,
            }
            if let Some(f) = failure {
                outcome.code = 1;
                outcome.stderr = f;
            }
            outcome
        }
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Parse(_)) | Some(Error::InvalidArgument(_)) => 2,
                Some(_) => 1,
                // Unreadable input files.
                None => 2,
            };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e:#}\n") }
        }
    }
}

struct Report {
    text: String,
    out: Option<PathBuf>,
    /// Set when a verification failed; holds the diagnostic.
    failure: Option<String>,
}

impl Report {
    fn ok(text: String, out: Option<PathBuf>) -> Self {
        Report { text, out, failure: None }
    }
}

fn execute(cmd: Command) -> anyhow::Result<Report> {
    match cmd {
        Command::AiryCheck(c) => airy_check(c),
        Command::Tr(c) => tr_table(c),
        Command::Graphs { action } => graphs_cmd(action),
        Command::Wk(c) => wk(c),
        Command::Volumes { common, verify } => volumes(common, verify),
        Command::Tqft { common, verify } => tqft(common, verify),
        Command::Cohft { common, spec } => cohft(common, &spec),
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!(Error::parse(format!("{}: {e}", path.display()))))
}

/// A built-in id, a Frobenius algebra file (has `"mu"`) or a structure file.
fn load_structure(c: &Common) -> anyhow::Result<Builtin> {
    let id = c.structure.as_deref().ok_or_else(|| anyhow!(Error::invalid("--structure is required")))?;
    let chi = c.chi_max as usize;
    if BUILTIN_IDS.contains(&id) || id == "wk-misindexed" {
        let n = c.truncation.unwrap_or_else(|| default_truncation(id, chi));
        return Ok(builtin(id, n)?);
    }
    let path = Path::new(id);
    if !path.exists() {
        bail!(Error::invalid(format!("{id:?} is neither a file nor one of {}", BUILTIN_IDS.join(", "))));
    }
    let v = read_json(path)?;
    if v.get("mu").is_some() {
        return Ok(Builtin::Rational(airy_from_frobenius(&FrobeniusAlgebra::from_json(&v)?)));
    }
    let ring = v.get("ring").and_then(Value::as_str).unwrap_or("rational");
    let s = if ring == "pi2" {
        Builtin::Pi2(toprec::airy::structure_from_json(&v)?)
    } else {
        Builtin::Rational(toprec::airy::structure_from_json(&v)?)
    };
    Ok(match (s, c.truncation) {
        (Builtin::Rational(s), Some(n)) if s.index_set().is_graded() => Builtin::Rational(s.truncate(n)),
        (Builtin::Pi2(s), Some(n)) if s.index_set().is_graded() => Builtin::Pi2(s.truncate(n)),
        (s, _) => s,
    })
}

fn airy_check(c: Common) -> anyhow::Result<Report> {
    match load_structure(&c)? {
        Builtin::Rational(s) => check_report(&s, c),
        Builtin::Pi2(s) => check_report(&s, c),
    }
}

fn check_report<S: Scalar>(s: &AiryStructure<S>, c: Common) -> anyhow::Result<Report> {
    let r = s.check_relations()?;
    let text = match c.format {
        Some(Format::Json) => {
            let results: Vec<Value> =
                r.results.iter().map(|(rel, ok)| json!({ "relation": rel.to_string(), "passed": ok })).collect();
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| json!({ "relation": v.relation.to_string(), "indices": v.indices, "lhs": v.lhs.to_json(), "rhs": v.rhs.to_json() }))
                .collect();
            let v = json!({
                "passed": r.passed(),
                "results": results,
                "violations": violations,
                "tuples_checked": r.tuples_checked,
                "tuples_skipped": r.tuples_skipped,
                "truncation_caveat": r.truncation_caveat,
            });
            pretty(&v)
        }
        Some(f) => bail!(Error::invalid(format!("airy-check does not support {f:?} output"))),
        None => r.summary(),
    };
    let failure = (!r.passed()).then(|| r.summary());
    Ok(Report { text, out: c.out, failure })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn index_list(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Keeps the `(g, n)` cells selected by `--g`/`--n`.
fn selected(c: &Common, g: usize, n: usize) -> bool {
    c.g.is_none_or(|x| x == g) && c.n.is_none_or(|x| x == n)
}

fn render_table<S: Scalar>(t: &AmplitudeTable<S>, c: &Common) -> String {
    let keep: Vec<(&(usize, Vec<usize>), &S)> =
        t.entries().iter().filter(|((g, idx), _)| selected(c, *g, idx.len())).collect();
    match c.format {
        Some(Format::Json) => {
            let items: Vec<Value> =
                keep.iter().map(|((g, idx), v)| json!({ "g": g, "indices": idx, "value": v.to_json() })).collect();
            pretty(&Value::Array(items))
        }
        Some(Format::Csv) => {
            let max_deg = keep.iter().filter_map(|(_, v)| v.to_pipoly().degree()).max().unwrap_or(0);
            let mut out = String::from("g,n,indices,value_rational");
            for d in 1..=max_deg {
                let _ = write!(out, ",value_pi2_degree_{d}");
            }
            out.push('\n');
            for ((g, idx), v) in keep {
                let p = v.to_pipoly();
                let ix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                let _ = write!(out, "{g},{},{},{}", idx.len(), ix.join(" "), p.coeff(0));
                for d in 1..=max_deg {
                    let _ = write!(out, ",{}", p.coeff(d));
                }
                out.push('\n');
            }
            out
        }
        Some(Format::Latex) => {
            let mut out = String::new();
            for ((g, idx), v) in keep {
                let ix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "F_{{{g},{}}}[{}] = {} \\\\", idx.len(), ix.join(","), v.to_pipoly().to_latex());
            }
            out
        }
        None => {
            let mut out = String::new();
            for ((g, idx), v) in keep {
                let _ = writeln!(out, "F_{{{g},{}}}{} = {v}", idx.len(), index_list(idx));
            }
            out
        }
    }
}

fn tr_table(c: Common) -> anyhow::Result<Report> {
    match load_structure(&c)? {
        Builtin::Rational(s) => tr_report(&s, c),
        Builtin::Pi2(s) => tr_report(&s, c),
    }
}

fn tr_report<S: Scalar>(s: &AiryStructure<S>, c: Common) -> anyhow::Result<Report> {
    let t = tr::compute(s, c.chi_max as usize)?;
    let sym = t.verify_symmetry();
    let text = render_table(&t, &c);
    let failure = (!sym.passed()).then(|| {
        let mut msg = format!("symmetry fails on {} entries\n", sym.mismatches.len());
        for m in sym.mismatches.iter().take(20) {
            let _ = writeln!(
                msg,
                "  F_{{{},{}}}{} with index {} first: {} (expected {})",
                m.g,
                m.indices.len(),
                index_list(&m.indices),
                m.first,
                m.found,
                m.expected
            );
        }
        msg
    });
    Ok(Report { text, out: c.out, failure })
}

fn graphs_cmd(action: GraphsAction) -> anyhow::Result<Report> {
    match action {
        GraphsAction::Count(a) => {
            let count = graphs::count(a.g, a.n);
            let text = match a.format {
                Some(Format::Json) => pretty(&json!({ "g": a.g, "n": a.n, "count": rational_to_string(&count) })),
                Some(Format::Latex) => format!("|\\mathbb{{G}}_{{{},{}}}| = {}\n", a.g, a.n, PiPoly::constant(count).to_latex()),
                Some(Format::Csv) => format!("g,n,count\n{},{},{}\n", a.g, a.n, rational_to_string(&count)),
                None => format!("{}\n", rational_to_string(&count)),
            };
            Ok(Report::ok(text, a.out))
        }
        GraphsAction::List(a) => {
            let list = graphs::enumerate(a.g, a.n);
            let text = match a.format {
                Some(Format::Json) => pretty(&Value::Array(list.iter().map(|g| g.to_json()).collect())),
                Some(f) => bail!(Error::invalid(format!("graphs list does not support {f:?} output"))),
                None => list.iter().map(|g| g.to_dot()).collect(),
            };
            Ok(Report::ok(text, a.out))
        }
    }
}

/// Smallest χ covering the requested cell, or `--chi-max`.
fn chi_for(c: &Common) -> anyhow::Result<usize> {
    match (c.g, c.n) {
        (Some(g), Some(n)) => {
            if !is_stable(g, n) {
                bail!(Error::invalid(format!("(g, n) = ({g}, {n}) is unstable")));
            }
            Ok(2 * g + n - 2)
        }
        _ => Ok(c.chi_max as usize),
    }
}

fn wk(c: Common) -> anyhow::Result<Report> {
    let t = psi_table(chi_for(&c)?)?;
    Ok(Report::ok(render_table(&t, &c), c.out.clone()))
}

fn volumes(c: Common, verify: bool) -> anyhow::Result<Report> {
    let chi = chi_for(&c)?;
    let vols: Vec<VolumePolynomial> = (1..=chi)
        .flat_map(cells_at)
        .filter(|&(g, n)| selected(&c, g, n))
        .map(|(g, n)| volume(g, n))
        .collect();
    let mut failure = None;
    if verify {
        let other = volumes_via_airy(chi)?;
        let mut msg = String::new();
        for v in &vols {
            match other.iter().find(|w| w.g == v.g && w.n == v.n) {
                Some(w) if w == v => {}
                Some(w) => {
                    let _ = writeln!(msg, "V_{{{},{}}}: recursion {v} but Airy structure {w}", v.g, v.n);
                }
                None => {
                    let _ = writeln!(msg, "V_{{{},{}}} missing from the Airy-structure pipeline", v.g, v.n);
                }
            }
        }
        if !msg.is_empty() {
            failure = Some(msg);
        }
    }
    let single = c.g.is_some() && c.n.is_some();
    let text = match c.format {
        Some(Format::Json) if single => pretty(&vols[0].to_json()),
        Some(Format::Json) => pretty(&Value::Array(vols.iter().map(VolumePolynomial::to_json).collect())),
        Some(Format::Csv) if single => vols[0].to_csv(),
        Some(Format::Csv) => {
            let mut out = String::new();
            for v in &vols {
                let csv = v.to_csv();
                let mut lines = csv.lines();
                let header = lines.next().unwrap_or_default();
                let _ = writeln!(out, "g,n,{header}");
                for l in lines {
                    let _ = writeln!(out, "{},{},{l}", v.g, v.n);
                }
            }
            out
        }
        Some(Format::Latex) => vols.iter().map(|v| format!("V_{{{},{}}} = {}\n", v.g, v.n, v.to_latex())).collect(),
        None if single => format!("{}\n", vols[0]),
        None => vols.iter().map(|v| format!("V_{{{},{}}} = {v}\n", v.g, v.n)).collect(),
    };
    Ok(Report { text, out: c.out, failure })
}

fn load_algebra(c: &Common) -> anyhow::Result<FrobeniusAlgebra> {
    let id = c.structure.as_deref().unwrap_or("tqft-a2");
    if let Some(a) = builtin_algebra(id) {
        return Ok(a);
    }
    let path = Path::new(id);
    if !path.exists() {
        bail!(Error::invalid(format!("{id:?} is neither a file nor one of tqft-a2, tqft-diag, tqft-poly")));
    }
    Ok(FrobeniusAlgebra::from_json(&read_json(path)?)?)
}

fn tqft(c: Common, verify: bool) -> anyhow::Result<Report> {
    let alg = load_algebra(&c)?;
    let chi = c.chi_max as usize;
    let cells: Vec<(usize, usize)> = (1..=chi).flat_map(cells_at).filter(|&(g, n)| selected(&c, g, n)).collect();
    let mut rows = Vec::new();
    for &(g, n) in &cells {
        let f = tqft_amplitude(&alg, g, n)?;
        for idx in multi_indices(alg.dim(), n) {
            let v = f.get(&idx);
            if !num_traits::Zero::is_zero(v) {
                rows.push((g, idx, v.clone()));
            }
        }
    }
    let text = match c.format {
        Some(Format::Json) => pretty(&Value::Array(
            rows.iter().map(|(g, idx, v)| json!({ "g": g, "indices": idx, "value": rational_to_string(v) })).collect(),
        )),
        Some(Format::Csv) => {
            let mut out = String::from("g,n,indices,value\n");
            for (g, idx, v) in &rows {
                let ix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "{g},{},{},{}", idx.len(), ix.join(" "), rational_to_string(v));
            }
            out
        }
        Some(Format::Latex) => rows
            .iter()
            .map(|(g, idx, v)| {
                let ix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("\\mathcal{{F}}_{{{g},{}}}[{}] = {} \\\\\n", idx.len(), ix.join(","), PiPoly::constant(v.clone()).to_latex())
            })
            .collect(),
        None => rows.iter().map(|(g, idx, v)| format!("F_{{{g},{}}}{} = {v}\n", idx.len(), index_list(idx))).collect(),
    };
    let mut failure = None;
    if verify {
        let mut msg = String::new();
        for &(g, n) in &cells {
            let r = verify_cc(&alg, g, n)?;
            if !r.passed() {
                let _ = writeln!(msg, "({g},{n}): |G| = {}, mismatches at {:?}", r.graph_count, r.failures);
            }
        }
        if !msg.is_empty() {
            failure = Some(msg);
        }
    }
    Ok(Report { text, out: c.out, failure })
}

fn multi_indices(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (0..dim).map(move |i| [p.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

fn cohft(c: Common, spec: &Path) -> anyhow::Result<Report> {
    let spec = CohftSpec::from_json(&read_json(spec)?)?;
    let chi = c.chi_max as usize;
    let n = c.truncation.unwrap_or_else(|| default_truncation("wk", chi));
    let s: AiryStructure<Rational> = spec.airy(n)?;
    tr_report(&s, c)
}
