//! `smallball`: small-ball laws, spectra and verification suites from the command line.

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use smallball_core::asymptotics::{
    assembled_law, closed_law, rank_beta_patterns, RankGroup, SmallBallLaw, ASSEMBLY_COUNT,
};
use smallball_core::catalog::{catalog_process, Family, ProcessParams, ProcessSpec};
use smallball_core::oracle::{asymptotic_eval, prob_imhof, prob_saddlepoint, tail_completed_spectrum, DEFAULT_TAIL_LENGTH};
use smallball_core::spectral::{spectrum, DEFAULT_GRID};
use smallball_core::verify::{all_pass, run_suite, Check, Suite, VerifyConfig, ORACLE_ROOTS, SUITE_VERSION};
use smallball_core::Error;
use std::fmt::Write as _;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn process_help() -> String {
    let mut s = String::from("Process ids:\n");
    for f in Family::ALL {
        let _ = writeln!(s, "  {:<14} {}", f.id(), f.description());
    }
    s
}

#[derive(Parser, Debug)]
#[command(name = "smallball", version, about = "Exact L2 small-ball asymptotics of Gaussian processes")]
#[command(after_help = process_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the process families.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Eigenvalues from the characteristic roots.
    Spectrum {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Small-ball law `K ε^a exp(−E ε^{−d})`.
    Law {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, value_enum, default_value_t = LawPath::Closed)]
        path: LawPath,
        /// Eigenvalues used when the distortion constant is numeric.
        #[arg(long, default_value_t = ASSEMBLY_COUNT)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Asymptotic law against the probability oracles.
    Eval {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.2, 0.1, 0.05])]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value_t = LawPath::Closed)]
        path: LawPath,
        /// Characteristic roots computed before the tail model takes over.
        #[arg(long, default_value_t = ORACLE_ROOTS)]
        roots: usize,
        /// Total spectrum length M.
        #[arg(long, default_value_t = DEFAULT_TAIL_LENGTH)]
        tail: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = PossibleValuesParser::new(
            Suite::CONCRETE.iter().map(|s| s.id()).chain(["all"])))]
        suite: String,
        /// Override the tolerance of every comparison in the suite.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nyström grid intervals.
        #[arg(long, env = "SMALLBALL_GRID", default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rank the β patterns of a family by their prefactor K.
    Rank {
        #[arg(long, value_parser = family_parser())]
        family: String,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn family_parser() -> PossibleValuesParser {
    PossibleValuesParser::new(Family::ALL.map(|f| f.id()))
}

#[derive(Args, Debug)]
struct ProcessArgs {
    #[arg(long, value_parser = family_parser())]
    process: String,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Bit string of integration endpoints, e.g. `01` (default all zero).
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum LawPath {
    Closed,
    Assembled,
    Both,
}

enum Failure {
    Usage(String),
    Verify,
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

/// `%.17g`
fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exp) {
        let body = if exp >= 0 {
            let p = exp as usize + 1;
            format!("{}.{}", &digits[..p], &digits[p..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        format!("{sign}{}", trim(body))
    } else {
        let m = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        format!("{sign}{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn resolve(p: &ProcessArgs) -> Result<ProcessSpec, Failure> {
    let family: Family = p.process.parse()?;
    let mut params = ProcessParams { c: p.c, l: p.l, m: p.m, beta: None };
    if let Some(b) = &p.beta {
        params.beta = Some(smallball_core::catalog::parse_beta(b)?);
    } else if let Some(m) = p.m {
        params.beta = Some(vec![0; m]);
    }
    if params.beta.is_some() && params.m.is_none() {
        params.m = params.beta.as_ref().map(Vec::len);
    }
    Ok(catalog_process(family, &params)?)
}

fn process_json(s: &ProcessSpec) -> Value {
    let beta: String = s.beta.iter().map(|b| char::from(b'0' + b)).collect();
    json!({
        "process": s.family.id(),
        "c": s.c,
        "l": s.family.uses_l().then_some(s.l),
        "m": s.family.uses_m().then_some(s.m),
        "beta": s.family.uses_m().then_some(beta),
    })
}

fn echo(mut cfg: Value) {
    if let Value::Object(map) = &mut cfg {
        map.insert("version".into(), json!(VERSION));
    }
    eprintln!("config {}", serde_json::to_string(&cfg).expect("config json"));
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut x), Value::Object(y)) => {
            x.extend(y);
            Value::Object(x)
        }
        (a, _) => a,
    }
}

fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells.iter().zip(&w).map(|(c, &n)| format!("{c:<n$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let esc = |c: &str| {
        if c.contains([',', '"', '\n']) {
            format!("\"{}\"", c.replace('"', "\"\""))
        } else {
            c.to_string()
        }
    };
    let mut out = header.join(",") + "\n";
    for r in rows {
        out += &(r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(",") + "\n");
    }
    out
}

fn tabular(format: Format, header: &[&str], rows: &[Vec<String>], json_rows: Value) -> String {
    match format {
        Format::Csv => csv(header, rows),
        Format::Text => text_table(header, rows),
        Format::Json => serde_json::to_string_pretty(&json_rows).expect("json") + "\n",
    }
}

fn cmd_list(format: Format) -> Outcome {
    echo(json!({"command": "list", "format": format}));
    let params = |f: Family| {
        let mut p = Vec::new();
        if f.uses_c() {
            p.push("c");
        }
        if f.uses_l() {
            p.push("l");
        }
        if f.uses_m() {
            p.extend(["m", "beta"]);
        }
        p.join(" ")
    };
    let rows: Vec<Vec<String>> =
        Family::ALL.iter().map(|&f| vec![f.id().to_string(), params(f), f.description().to_string()]).collect();
    let js = Value::Array(
        Family::ALL
            .iter()
            .map(|&f| json!({"id": f.id(), "parameters": params(f), "description": f.description()}))
            .collect(),
    );
    Ok(tabular(format, &["id", "parameters", "description"], &rows, js))
}

fn cmd_spectrum(p: &ProcessArgs, count: usize, format: Format) -> Outcome {
    let spec = resolve(p)?;
    echo(merge(json!({"command": "spectrum"}), merge(process_json(&spec), json!({"count": count, "format": format}))));
    if count == 0 {
        return Err(Failure::Usage("count must be positive".into()));
    }
    let sp = spectrum(&spec, count)?;
    let flat = sp.flat_roots();
    let rows: Vec<Vec<String>> = flat
        .iter()
        .enumerate()
        .map(|(i, &(r, mult))| {
            let mu = sp.leading_factor * r.powi(2 * sp.ell as i32);
            vec![(i + 1).to_string(), g17(r), g17(mu), g17(1.0 / mu), mult.to_string()]
        })
        .collect();
    let js = Value::Array(
        flat.iter()
            .enumerate()
            .map(|(i, &(r, mult))| {
                let mu = sp.leading_factor * r.powi(2 * sp.ell as i32);
                json!({"n": i + 1, "r_n": r, "mu_n": mu, "lambda_n": 1.0 / mu, "multiplicity": mult})
            })
            .collect(),
    );
    Ok(tabular(format, &["n", "r_n", "mu_n", "lambda_n", "multiplicity"], &rows, js))
}

fn law_for(spec: &ProcessSpec, path: LawPath, count: usize) -> Result<Vec<(&'static str, SmallBallLaw)>, Failure> {
    Ok(match path {
        LawPath::Closed => vec![("closed", closed_law(spec)?)],
        LawPath::Assembled => vec![("assembled", assembled_law(spec, count)?)],
        LawPath::Both => vec![("closed", closed_law(spec)?), ("assembled", assembled_law(spec, count)?)],
    })
}

fn law_json(path: &str, l: &SmallBallLaw) -> Value {
    merge(serde_json::to_value(l).expect("law json"), json!({"path": path}))
}

fn cmd_law(p: &ProcessArgs, path: LawPath, count: usize, format: Format) -> Outcome {
    let spec = resolve(p)?;
    echo(merge(json!({"command": "law"}), merge(process_json(&spec), json!({"path": path, "count": count, "format": format}))));
    let laws = law_for(&spec, path, count)?;
    let header = ["path", "K", "a", "d", "E", "variable"];
    let rows: Vec<Vec<String>> = laws
        .iter()
        .map(|(p, l)| vec![p.to_string(), g17(l.k), g17(l.a), g17(l.d), g17(l.e), "norm_eps".to_string()])
        .collect();
    if format == Format::Json {
        let v = if laws.len() == 1 {
            law_json(laws[0].0, &laws[0].1)
        } else {
            Value::Array(laws.iter().map(|(p, l)| law_json(p, l)).collect())
        };
        return Ok(serde_json::to_string(&v).expect("json") + "\n");
    }
    Ok(tabular(format, &header, &rows, Value::Null))
}

fn cmd_eval(p: &ProcessArgs, eps: &[f64], path: LawPath, roots: usize, tail: usize, format: Format) -> Outcome {
    let spec = resolve(p)?;
    echo(merge(
        json!({"command": "eval"}),
        merge(process_json(&spec), json!({"eps": eps, "path": path, "roots": roots, "tail": tail, "format": format})),
    ));
    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Failure::Usage("eps values must be positive".into()));
    }
    if path == LawPath::Both {
        return Err(Failure::Usage("eval takes --path closed or --path assembled".into()));
    }
    let law = law_for(&spec, path, ASSEMBLY_COUNT)?[0].1;
    let cs = tail_completed_spectrum(&spectrum(&spec, roots)?, &spec, tail)?;
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for &e in eps {
        let a = asymptotic_eval(&law, e);
        let s = prob_saddlepoint(&cs, e)?;
        let im = match prob_imhof(&cs, e) {
            Ok(v) => Some(v),
            Err(err) => {
                eprintln!("imhof at eps={}: {err}", g17(e));
                None
            }
        };
        rows.push(vec![g17(e), g17(a), g17(s), im.map(g17).unwrap_or_default(), g17(a / s)]);
        js.push(json!({"eps": e, "asymptotic": a, "saddlepoint": s, "imhof": im, "ratio": a / s}));
    }
    Ok(tabular(format, &["eps", "asymptotic", "saddlepoint", "imhof", "ratio"], &rows, Value::Array(js)))
}

fn check_row(c: &Check) -> Vec<String> {
    vec![
        c.suite.id().to_string(),
        c.name.clone(),
        g17(c.measured),
        g17(c.target),
        g17(c.tol),
        c.relation.id().to_string(),
        if c.pass { "pass" } else { "FAIL" }.to_string(),
        c.note.clone(),
    ]
}

fn cmd_verify(suite: &str, cfg: VerifyConfig, format: Format) -> Outcome {
    let s: Suite = suite.parse()?;
    echo(json!({
        "command": "verify", "suite": s.id(), "suite_version": SUITE_VERSION, "seed": cfg.seed,
        "tol": cfg.tol, "grid": cfg.grid, "format": format,
    }));
    let rows = run_suite(s, &cfg);
    let header = ["suite", "check", "measured", "target", "tol", "relation", "result", "note"];
    let table: Vec<Vec<String>> = rows.iter().map(check_row).collect();
    let mut out = tabular(format, &header, &table, serde_json::to_value(&rows).expect("json"));
    let failed = rows.iter().filter(|r| !r.pass).count();
    if format == Format::Text {
        let _ = writeln!(out, "{} checks, {} failed", rows.len(), failed);
    }
    if all_pass(&rows) {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verify)
    }
}

fn cmd_rank(family: &str, c: Option<f64>, l: Option<usize>, m: usize, format: Format) -> Outcome {
    let f: Family = family.parse()?;
    let params = ProcessParams { c, l, m: Some(m), beta: Some(vec![0; m]) };
    echo(json!({"command": "rank", "family": f.id(), "c": c, "l": l, "m": m, "format": format}));
    let groups: Vec<RankGroup> = rank_beta_patterns(f, &params)?;
    let bits = |p: &[u8]| -> String { p.iter().map(|b| char::from(b'0' + b)).collect() };
    let mut rows = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        for p in &g.patterns {
            rows.push(vec![(i + 1).to_string(), g17(g.k), bits(p)]);
        }
    }
    let js = Value::Array(
        groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                json!({"group": i + 1, "K": g.k, "patterns": g.patterns.iter().map(|p| bits(p)).collect::<Vec<_>>()})
            })
            .collect(),
    );
    Ok(tabular(format, &["group", "K", "beta"], &rows, js))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::List { format } => cmd_list(format),
        Command::Spectrum { process, count, format } => cmd_spectrum(&process, count, format),
        Command::Law { process, path, count, format } => cmd_law(&process, path, count, format),
        Command::Eval { process, eps, path, roots, tail, format } => {
            cmd_eval(&process, &eps, path, roots, tail, format)
        }
        Command::Verify { suite, tol, seed, grid, format } => cmd_verify(&suite, VerifyConfig { seed, tol, grid }, format),
        Command::Rank { family, c, l, m, format } => cmd_rank(&family, c, l, m, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical guard: {m}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::g17;

    #[test]
    fn seventeen_digits() {
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(-2.5), "-2.5");
        assert_eq!(g17(39.478417604357432), "39.478417604357432");
        assert_eq!(g17(3.0665402050110769e-22), "3.0665402050110769e-22");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(0.0001), "0.0001");
        for x in [0.1, 1.0 / 3.0, 2.2567583341910251, 1e-300, 6.02e23] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
