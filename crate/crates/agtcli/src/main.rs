use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use agt_core::exactmath::{fmt_rat, int, random_point, rat, QSeries};
use agt_core::nekrasov::{z_direct, GaugeConfig, Torus};
use agt_core::virasoro::{agt_substitution, block};
use agt_core::Rat;
use agtcli::{run_check, CheckName, CheckSpec, CliError, CliResult, Format, Mode};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "agtcli", about = "Exact checks of instanton partition functions against conformal blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Nekrasov partition function at a random parameter point.
    Nek(Common),
    /// Print the torus conformal block under the AGT dictionary at a random point.
    Block(Common),
    /// Run a verification pipeline and emit a report.
    Check {
        name: CheckName,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    rank: Option<usize>,
    /// Number of punctures (necklace nodes).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Special)]
    mode: Mode,
    /// Comma-separated integer charges.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    charges: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn spec(&self, check: CheckName) -> CheckSpec {
        CheckSpec {
            check,
            rank: self.rank,
            points: self.points,
            order: self.order,
            degree: self.degree,
            seed: self.seed,
            mode: self.mode,
            charges: self.charges.clone(),
            format: self.format,
        }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Coulomb parameters, masses and `(t1, t2)` for `nek` and `block`.
struct Point {
    t1: Rat,
    t2: Rat,
    a: Vec<Rat>,
    m: Vec<Rat>,
}

fn point(c: &Common) -> CliResult<Point> {
    let n = c.points.unwrap_or(1);
    let names: Vec<String> = ["t1", "t2"]
        .iter()
        .map(|s| s.to_string())
        .chain((0..n).flat_map(|i| [format!("a{i}"), format!("m{i}")]))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pt = random_point(c.seed, &refs);
    let get = |s: String| pt.value(&s).cloned();
    let m = (0..n).map(|i| get(format!("m{i}"))).collect::<agt_core::Result<Vec<_>>>()?;
    Ok(match c.mode {
        Mode::Generic => Point {
            t1: get("t1".into())?,
            t2: get("t2".into())?,
            a: (0..n).map(|i| get(format!("a{i}"))).collect::<agt_core::Result<_>>()?,
            m,
        },
        Mode::Special => {
            let ks = c.charges.clone().unwrap_or_else(|| (0..n as i64).collect());
            if ks.len() != n {
                return Err(CliError::InvalidSpec(format!("need {n} charges, got {}", ks.len())));
            }
            Point { t1: int(1), t2: int(-1), a: ks.iter().map(|&k| int(k) + rat(1, 4)).collect(), m }
        }
    })
}

fn render(c: &Common, p: &Point, label: &str, series: &QSeries) -> CliResult<String> {
    let mut params = serde_json::Map::new();
    params.insert("t1".into(), fmt_rat(&p.t1).into());
    params.insert("t2".into(), fmt_rat(&p.t2).into());
    for (i, (a, m)) in p.a.iter().zip(&p.m).enumerate() {
        params.insert(format!("a{i}"), fmt_rat(a).into());
        params.insert(format!("m{i}"), fmt_rat(m).into());
    }
    Ok(match c.format {
        Format::Text => {
            let mut out = String::new();
            for (k, v) in &params {
                out.push_str(&format!("{k} = {}\n", v.as_str().unwrap_or_default()));
            }
            out.push_str(&format!("{label} = {series}\n"));
            out
        }
        Format::Json => {
            let coeffs: serde_json::Map<String, serde_json::Value> = series
                .coeffs()
                .map(|(e, v)| (format!("{e:?}"), fmt_rat(v).into()))
                .collect();
            let doc = serde_json::json!({ "quantity": label, "parameters": params, "order": series.order(), "coefficients": coeffs });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    })
}

fn nek(c: &Common) -> CliResult<()> {
    let p = point(c)?;
    let r = c.rank.unwrap_or(2);
    if r != 2 {
        return Err(CliError::InvalidSpec("nek pairs framings as (a, −a) and needs rank 2".into()));
    }
    let torus = if (&p.t1 + &p.t2) == int(0) { Torus::Special { t: p.t1.clone() } } else { Torus::General { t1: p.t1.clone(), t2: p.t2.clone() } };
    let framings = p.a.iter().map(|x| vec![x.clone(), -x.clone()]).collect();
    let cfg = GaugeConfig::new(torus, framings, p.m.clone(), c.order.unwrap_or(2))?;
    c.emit(&render(c, &p, "Z", &z_direct(&cfg)?)?)
}

fn conformal_block(c: &Common) -> CliResult<()> {
    let p = point(c)?;
    let (central, nodes) = agt_substitution(&p.t1, &p.t2, &p.a, &p.m)?;
    let ks: Vec<Rat> = nodes.iter().map(|n| n.k.clone()).collect();
    let hs: Vec<Rat> = nodes.iter().map(|n| n.h.clone()).collect();
    let b = block(&central, &ks, &hs, c.order.unwrap_or(2))?;
    c.emit(&render(c, &p, "B", &b)?)
}

fn run(cli: Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Nek(c) => nek(c).map(|_| 0),
        Command::Block(c) => conformal_block(c).map(|_| 0),
        Command::Check { name, common } => {
            let report = run_check(&common.spec(*name))?;
            let text = match common.format {
                Format::Json => report.to_json()? + "\n",
                Format::Text => report.to_text(),
            };
            common.emit(&text)?;
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
