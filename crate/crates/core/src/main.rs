use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cubic_split::cayley::{build_ball, export, parse_json, ExportFormat};
use cubic_split::classify::classify;
use cubic_split::group::{build_rewrite_system, Family, FamilySpec, DEFAULT_RULE_CAP};
use cubic_split::report::{verify_all, Outcome, DEFAULT_RADIUS};
use cubic_split::separation::DEFAULT_MARGIN;
use cubic_split::Error;

#[derive(Parser)]
#[command(name = "cubic-split", version, about = "Splittings of groups with cubic Cayley graphs of connectivity two")]
struct Cli {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CellArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    margin: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ball of the Cayley graph and write it as JSON.
    Build {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline on one cell and write the report.
    Analyze {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the claimed splitting and the presentation.
    Classify {
        #[command(flatten)]
        cell: CellArgs,
    },
    /// Convert a JSON ball to another format.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify one cell, or a parameter grid with --all-params "n=2..4,m=2..3".
    Verify {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        all_params: Option<String>,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::CompletionOverflow(_) | Error::BallTooLarge(_) => 3,
        Error::InvalidParameters(_) | Error::Config(_) | Error::Parse(_) | Error::UnknownFormat(_) => 2,
        Error::BallTooSmall { .. } | Error::BadParameter(_) | Error::Io(_) | Error::Json(_) => 2,
        _ => 1,
    })
}

fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !["family", "n", "m", "radius", "margin", "all-params"].contains(&k.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k, v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

struct Cell {
    family: Option<Family>,
    n: Option<u32>,
    m: Option<u32>,
    radius: usize,
    margin: usize,
}

fn merge(cell: &CellArgs, config: &BTreeMap<String, String>) -> Result<Cell, Error> {
    let num = |key: &str| -> Result<Option<usize>, Error> {
        config
            .get(key)
            .map(|v| v.parse::<usize>().map_err(|_| Error::Config(format!("{key} must be an integer, got {v:?}"))))
            .transpose()
    };
    let family = match cell.family.as_ref().or(config.get("family")) {
        Some(f) => Some(f.parse::<Family>()?),
        None => None,
    };
    Ok(Cell {
        family,
        n: cell.n.or(num("n")?.map(|v| v as u32)),
        m: cell.m.or(num("m")?.map(|v| v as u32)),
        radius: cell.radius.or(num("radius")?).unwrap_or(DEFAULT_RADIUS),
        margin: cell.margin.or(num("margin")?).unwrap_or(DEFAULT_MARGIN),
    })
}

impl Cell {
    fn spec(&self) -> Result<FamilySpec, Error> {
        let family = self.family.ok_or_else(|| Error::Config("missing --family".into()))?;
        let n = self.n.ok_or_else(|| Error::Config("missing --n".into()))?;
        FamilySpec::new(family, n, if family.needs_m() { self.m } else { None })
    }
}

fn range(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Config(format!("bad range {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn grid(family: Family, spec: &str) -> Result<Vec<FamilySpec>, Error> {
    let mut ns = vec![];
    let mut ms = vec![];
    for part in spec.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected n=.. or m=.., got {part:?}")))?;
        match k.trim() {
            "n" => ns = range(v)?,
            "m" => ms = range(v)?,
            other => return Err(Error::Config(format!("unknown grid key {other:?}"))),
        }
    }
    if ns.is_empty() {
        return Err(Error::Config("grid needs n=".into()));
    }
    let mut out = Vec::new();
    for &n in &ns {
        if family.needs_m() {
            if ms.is_empty() {
                return Err(Error::Config(format!("{family} needs m= in the grid")));
            }
            for &m in &ms {
                out.push(FamilySpec::new(family, n, Some(m))?);
            }
        } else {
            out.push(FamilySpec::new(family, n, None)?);
        }
    }
    Ok(out)
}

fn severity(o: Outcome) -> u8 {
    match o {
        Outcome::Pass => 0,
        Outcome::ClaimDiscrepancy => 1,
        Outcome::Fail => 2,
        Outcome::ConfigError => 3,
        Outcome::ResourceCap => 4,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let config = match &cli.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    match cli.command {
        Command::Build { cell, out } => {
            let cell = merge(&cell, &config)?;
            let rs = build_rewrite_system(&cell.spec()?, DEFAULT_RULE_CAP)?;
            let ball = build_ball(&rs, cell.radius)?;
            std::fs::write(&out, export(&ball, ExportFormat::Json))?;
            eprintln!("{} vertices written to {}", ball.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { cell, report } => {
            let cell = merge(&cell, &config)?;
            let r = verify_all(&cell.spec()?, cell.radius, cell.margin);
            let json = r.to_json();
            match report {
                Some(p) => std::fs::write(p, json + "\n")?,
                None => println!("{json}"),
            }
            Ok(ExitCode::from(r.outcome.exit_code() as u8))
        }
        Command::Classify { cell } => {
            let cell = merge(&cell, &config)?;
            let spec = cell.spec()?;
            let claim = classify(&spec)?;
            println!("{spec}");
            println!("presentation: {}", spec.presentation_string());
            println!("splitting: {}", claim.name);
            for f in &claim.factors {
                let gens: Vec<String> = f.generators.iter().map(|g| g.to_string()).collect();
                println!("  factor {} = <{}>", f.group, gens.join(", "));
            }
            if let Some(t) = &claim.stable_letter {
                println!("  stable letter {t}");
            }
            if claim.under_test {
                println!("  claim under test");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { input, format, out } => {
            let format: ExportFormat = format.parse()?;
            let ball = parse_json(&std::fs::read_to_string(input)?)?;
            std::fs::write(out, export(&ball, format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { cell, all_params } => {
            let all_params = all_params.or_else(|| config.get("all-params").cloned());
            let cell = merge(&cell, &config)?;
            let specs = match all_params {
                Some(g) => grid(cell.family.ok_or_else(|| Error::Config("missing --family".into()))?, &g)?,
                None => vec![cell.spec()?],
            };
            let mut worst = Outcome::Pass;
            for spec in specs {
                let r = verify_all(&spec, cell.radius, cell.margin);
                let failed: Vec<&str> = r
                    .checks
                    .iter()
                    .filter(|(_, c)| c.status == cubic_split::treedec::Status::Fail)
                    .map(|(k, _)| k.as_str())
                    .collect();
                let mut line = format!("{spec}: {:?}", r.outcome);
                if !failed.is_empty() {
                    line += &format!(" [{}]", failed.join(", "));
                }
                for e in &r.errors {
                    line += &format!(" error: {e}");
                }
                println!("{line}");
                if severity(r.outcome) > severity(worst) {
                    worst = r.outcome;
                }
            }
            Ok(ExitCode::from(worst.exit_code() as u8))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}
