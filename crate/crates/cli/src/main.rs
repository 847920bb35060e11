use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use topvertex::context::{Ctx, Mutation};
use topvertex::hodge::{expg_series, tri_series_json, w_series};
use topvertex::kp::{build_tau, TauSpec};
use topvertex::oracle::{run_oracles, summarize, OracleBounds, Scope};
use topvertex::qscalar::{format_rational, lattice_for_tau, parse_rational, Rational, Ring};
use topvertex::report::{combined_status, CheckReport, Outcome, Status};
use topvertex::suites::{run_suite, Suite, SuiteBounds};
use topvertex::vertex::{lllz_coefficient, parse_triple, tilde_c_from_vertex, vertex_c, vertex_c_via_fock};
use topvertex::Error;

const USAGE_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "topvertex", version, about = "Exact q-series checks for the two-leg Hodge vertex")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// TOML file with defaults for any of the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// truncation width above the valuation, lattice units
    #[arg(long, global = true)]
    window: Option<u32>,
    /// L: exponents live in (1/(2L)) Z
    #[arg(long = "lattice-denom", global = true)]
    lattice_denom: Option<u32>,
    #[arg(long = "min-width", global = true)]
    min_width: Option<i64>,
    #[arg(long = "fock-cutoff", global = true)]
    fock_cutoff: Option<u32>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// inject a deliberate fault (negative controls only)
    #[arg(long, global = true)]
    mutate: Option<String>,
    /// run oracles at their full bounds
    #[arg(long, global = true)]
    full: bool,
    #[arg(long, global = true, value_delimiter = ',')]
    tau: Vec<String>,
    #[arg(long = "N", global = true, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, global = true)]
    weight: Option<u32>,
    #[arg(long, global = true)]
    degree: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// C, tildeC and the Theorem 1 comparison for one triple
    Vertex {
        /// JSON array of three partitions, e.g. "[[2],[1],[]]"
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum)]
        check: Option<VertexCheck>,
    },
    /// run a verification suite
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// emit a truncated generating series
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        /// weight cutoff of the formal p^(2) variables in `tau`
        #[arg(long = "p2-weight", default_value_t = 0)]
        p2_weight: u32,
    },
    /// run brute-force oracles
    Oracles {
        #[arg(long, value_delimiter = ',', value_parser = parse_scope)]
        scope: Vec<Scope>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VertexCheck {
    Theorem1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesKind {
    #[value(name = "W")]
    W,
    #[value(name = "expG")]
    ExpG,
    #[value(name = "tau")]
    Tau,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Csv,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scope(s: &str) -> std::result::Result<Scope, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Keys accepted in the config file; every one optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    window: Option<u32>,
    lattice_denom: Option<u32>,
    min_width: Option<i64>,
    fock_cutoff: Option<u32>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    mutate: Option<String>,
    full: Option<bool>,
    tau: Option<Vec<String>>,
    n: Option<Vec<u32>>,
    weight: Option<u32>,
    degree: Option<u32>,
}

/// The effective configuration after flags > config file > defaults.
#[derive(Debug, Serialize)]
struct RunConfig {
    lattice_denom: u32,
    window: u32,
    min_width: i64,
    fock_cutoff: u32,
    jobs: usize,
    out: Option<PathBuf>,
    format: Format,
    mutate: Option<Mutation>,
    full: bool,
    tau: Vec<String>,
    n: Vec<u32>,
    weight: Option<u32>,
    degree: Option<u32>,
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

impl RunConfig {
    fn resolve(f: &Flags) -> Result<Self> {
        let file: FileConfig = match &f.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let tau = if f.tau.is_empty() { file.tau.unwrap_or_default() } else { f.tau.clone() };
        let taus = parse_taus(&tau)?;
        let needed = taus.iter().try_fold(1u32, |l, t| lattice_for_tau(t).map(|x| lcm(l, x)))?;
        let lattice_denom = match f.lattice_denom.or(file.lattice_denom) {
            Some(l) if l == 0 => return Err(usage("--lattice-denom must be positive")),
            Some(l) if l % needed != 0 => {
                return Err(usage(format!(
                    "--lattice-denom {l} cannot hold the requested tau; use a multiple of {needed}, e.g. --lattice-denom {}",
                    lcm(l, needed)
                )))
            }
            Some(l) => l,
            None => needed,
        };
        let mutate = match f.mutate.clone().or(file.mutate) {
            Some(m) => Some(m.parse::<Mutation>().map_err(|e| usage(e.to_string()))?),
            None => None,
        };
        let cfg = RunConfig {
            lattice_denom,
            window: f.window.or(file.window).unwrap_or(40),
            min_width: f.min_width.or(file.min_width).unwrap_or(20),
            fock_cutoff: f.fock_cutoff.or(file.fock_cutoff).unwrap_or(12),
            jobs: f.jobs.or(file.jobs).unwrap_or(0),
            out: f.out.clone().or(file.out),
            format: f.format.or(file.format).unwrap_or_default(),
            mutate,
            full: f.full || file.full.unwrap_or(false),
            tau,
            n: if f.n.is_empty() { file.n.unwrap_or_default() } else { f.n.clone() },
            weight: f.weight.or(file.weight),
            degree: f.degree.or(file.degree),
        };
        if cfg.window == 0 {
            return Err(usage("--window must be positive"));
        }
        if cfg.min_width > cfg.window as i64 {
            return Err(usage(format!("--min-width {} exceeds --window {}", cfg.min_width, cfg.window)));
        }
        if cfg.n.contains(&0) {
            return Err(usage("--N must be positive"));
        }
        Ok(cfg)
    }

    fn ctx(&self) -> Result<Ctx> {
        let ring = Ring::new(self.lattice_denom, self.window)?;
        let mut c = Ctx::new(ring).with_mutation(self.mutate);
        c.min_width = self.min_width;
        c.fock_cutoff = self.fock_cutoff;
        Ok(c)
    }

    fn taus(&self) -> Result<Vec<Rational>> {
        parse_taus(&self.tau)
    }

    fn bounds(&self) -> Result<SuiteBounds> {
        let taus = self.taus()?;
        Ok(SuiteBounds {
            weight: self.weight,
            degree: self.degree,
            ns: (!self.n.is_empty()).then(|| self.n.clone()),
            taus: (!taus.is_empty()).then_some(taus),
            full: self.full,
        })
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn parse_taus(v: &[String]) -> Result<Vec<Rational>> {
    v.iter()
        .map(|s| parse_rational(s).map_err(|e| usage(format!("--tau {s:?}: {e}"))))
        .collect()
}

/// A command's result: JSON body, CSV rows and exit status.
struct Output {
    body: Value,
    rows: Vec<Vec<String>>,
    header: Vec<&'static str>,
    status: Status,
}

fn report_rows(reports: &[CheckReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            let failing = r.failures.iter().filter(|f| f.status == Status::Fail).count();
            vec![
                r.identity.clone(),
                r.status.to_string(),
                r.pairs_checked.to_string(),
                failing.to_string(),
            ]
        })
        .collect()
}

const REPORT_HEADER: [&str; 4] = ["identity", "status", "checked", "failing"];

fn cmd_vertex(mu: &str, check: Option<VertexCheck>, cfg: &RunConfig) -> Result<Output> {
    let t = parse_triple(mu).map_err(|e| usage(format!("--mu: {e}")))?;
    let ctx = cfg.ctx()?;
    let c = vertex_c(&t, &ctx);
    let tilde = lllz_coefficient(&t, &ctx);
    let rhs = tilde_c_from_vertex(&t, &ctx);
    let mut rep = CheckReport::new("theorem1").param("triple", &t);
    let outcome = match tilde.agree_on_common_window(&rhs, ctx.min_width) {
        Ok(a) if a.is_equal() => Outcome::Pass,
        Ok(a) => Outcome::fail(format!("{a:?}")),
        Err(e) => Outcome::Inconclusive(e.to_string()),
    };
    rep.record(t.to_string(), outcome);
    let mut body = json!({
        "triple": t,
        "C": c,
        "tildeC": tilde,
        "theorem1": rep,
    });
    let mut rows = vec![
        vec!["C".to_string(), c.to_string()],
        vec!["tildeC".to_string(), tilde.to_string()],
        vec!["theorem1".to_string(), rep.status.to_string()],
    ];
    let taus = cfg.taus()?;
    if !taus.is_empty() {
        let mut fock = serde_json::Map::new();
        for tau in &taus {
            let v = vertex_c_via_fock(&t, tau, &ctx)?;
            rows.push(vec![format!("C via fock tau={}", format_rational(tau)), v.to_string()]);
            fock.insert(format_rational(tau), serde_json::to_value(v)?);
        }
        body["C_via_fock"] = Value::Object(fock);
    }
    let status = if check.is_some() { rep.status } else { Status::Pass };
    Ok(Output {
        body,
        rows,
        header: vec!["quantity", "value"],
        status,
    })
}

fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Output> {
    let run = run_suite(suite, &cfg.bounds()?, &cfg.ctx()?)?;
    let mut rows = report_rows(&run.reports);
    for r in report_rows(&run.informational) {
        rows.push(vec![format!("{} (informational)", r[0]), r[1].clone(), r[2].clone(), r[3].clone()]);
    }
    Ok(Output {
        status: run.status,
        body: serde_json::to_value(&run)?,
        rows,
        header: REPORT_HEADER.to_vec(),
    })
}

fn series_rows(v: &Value) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    if let Some(terms) = v.get("terms").and_then(Value::as_array) {
        for t in terms {
            rows.push(vec![t["exps"].to_string(), t["coeff"].to_string()]);
        }
    } else if let Some(m) = v.as_object() {
        for (k, c) in m {
            rows.push(vec![k.clone(), c.to_string()]);
        }
    }
    rows
}

fn cmd_series(kind: SeriesKind, p2_weight: u32, cfg: &RunConfig) -> Result<Output> {
    let ctx = cfg.ctx()?;
    let body = match kind {
        SeriesKind::W | SeriesKind::ExpG => {
            let taus = cfg.taus()?;
            let tau = match taus.as_slice() {
                [] => Rational::from_integer(1.into()),
                [t] => t.clone(),
                _ => return Err(usage("series takes a single --tau")),
            };
            let w = cfg.weight.unwrap_or(2);
            let s = match kind {
                SeriesKind::W => w_series(&tau, [w, w, w], &ctx)?,
                _ => expg_series(&tau, [w, w, w], &ctx)?,
            };
            json!({"kind": if matches!(kind, SeriesKind::W) { "W" } else { "expG" },
                   "tau": format_rational(&tau), "cutoffs": [w, w, w], "series": tri_series_json(&s)})
        }
        SeriesKind::Tau => {
            let n = match cfg.n.as_slice() {
                [] => 1,
                [n] => *n,
                _ => return Err(usage("series tau takes a single --N")),
            };
            let spec = TauSpec::new(n, 0, p2_weight, cfg.degree.unwrap_or(4));
            json!({"kind": "tau", "tau_series": build_tau(&spec, &ctx)?})
        }
    };
    let rows = match kind {
        SeriesKind::Tau => series_rows(&body["tau_series"]["body"]),
        _ => series_rows(&body["series"]),
    };
    Ok(Output {
        body,
        rows,
        header: vec!["monomial", "coeff"],
        status: Status::Pass,
    })
}

fn cmd_oracles(scopes: &[Scope], cfg: &RunConfig) -> Result<Output> {
    let scopes = if scopes.is_empty() { Scope::ALL.to_vec() } else { scopes.to_vec() };
    let bounds = if cfg.full { OracleBounds::full() } else { OracleBounds::quick() };
    let items = run_oracles(&scopes, &bounds, &cfg.ctx()?)?;
    let summary = summarize(&items);
    let status = combined_status(&summary);
    let rows = items
        .iter()
        .map(|i| vec![i.target.clone(), i.instance.clone(), i.verdict.to_string()])
        .collect();
    Ok(Output {
        body: json!({"bounds": bounds, "scopes": scopes, "summary": summary, "items": items}),
        rows,
        header: vec!["target", "instance", "verdict"],
        status,
    })
}

fn emit(out: &Output, cmd: &str, cfg: &RunConfig) -> Result<()> {
    let text = match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": cmd,
                "config": cfg,
                "version": concat!("topvertex ", env!("CARGO_PKG_VERSION")),
                "status": out.status,
                "result": out.body,
            });
            // serde_json maps are ordered by key, so the output is canonical
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.header)?;
            for r in &out.rows {
                w.write_record(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    match &cfg.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let (name, out) = match &cli.cmd {
        Cmd::Vertex { mu, check } => ("vertex", cmd_vertex(mu, *check, &cfg)?),
        Cmd::Verify { suite } => ("verify", cmd_verify(*suite, &cfg)?),
        Cmd::Series { kind, p2_weight } => ("series", cmd_series(*kind, *p2_weight, &cfg)?),
        Cmd::Oracles { scope } => ("oracles", cmd_oracles(scope, &cfg)?),
    };
    emit(&out, name, &cfg)?;
    Ok(out.status)
}

fn is_usage(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::Config(_)
                | Error::InvalidArgument(_)
                | Error::InvalidPartition(_)
                | Error::OffLattice(..)
                | Error::LatticeMismatch(..)
        )
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                if let Some(Error::OffLattice(..)) = e.downcast_ref::<Error>() {
                    eprintln!("hint: pass a larger --lattice-denom");
                }
                ExitCode::from(USAGE_EXIT)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
