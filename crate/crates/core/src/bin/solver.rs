use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use perrin_repdigits::baker::{ConstantsMode, InitialBounds};
use perrin_repdigits::contfrac::{expand, Stop};
use perrin_repdigits::pipeline::{
    emit_report, max_precision_from_env, run_pipeline_with, stage1_sweep, stage2_instances, stage2_sweep, Format,
    ReductionContext,
};
use perrin_repdigits::realfield::parse_decimal;
use perrin_repdigits::search::brute_search;
use perrin_repdigits::sequences::RootData;
use perrin_repdigits::{exec::Strategy, Error, Precision};

#[derive(Parser)]
#[command(name = "solver", version, about = "Perrin numbers that are concatenations of two repdigits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Tau,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scan P(0..=max_n) for two-run decimal expansions.
    Search {
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        /// One JSON object per line.
        #[arg(long)]
        json: bool,
    },
    /// Certified continued fraction of log 10 / log alpha.
    #[command(group(ArgGroup::new("stop").required(true).args(["count", "until_q"])))]
    Cf {
        #[arg(long, value_enum, default_value = "tau")]
        target: Target,
        #[arg(long)]
        count: Option<usize>,
        /// Stop at the first convergent denominator above this value.
        #[arg(long)]
        until_q: Option<String>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Derivation chain of the initial bounds (both modes unless one is given).
    Bound {
        #[arg(long, value_enum)]
        mode: Option<ConstantsMode>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Run reduction instances and print one JSON record per instance.
    Reduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        stage: u8,
        #[arg(long)]
        d1: Option<u8>,
        #[arg(long)]
        d2: Option<u8>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, value_enum, default_value = "fidelity")]
        mode: ConstantsMode,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Full replay; exits 0 iff the certificate is consistent.
    Pipeline {
        #[arg(long, default_value_t = 256)]
        precision: u32,
        #[arg(long, value_enum, default_value = "fidelity")]
        mode: ConstantsMode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cap = max_precision_from_env();
    match cmd {
        Cmd::Search { max_n, json } => {
            for r in brute_search(0, max_n) {
                if json {
                    let line = json!({
                        "n": r.n,
                        "value": r.value.to_string(),
                        "d1": r.pattern.d1,
                        "d2": r.pattern.d2,
                        "ell": r.pattern.ell,
                        "m": r.pattern.m,
                    });
                    println!("{line}");
                } else {
                    println!("P({}) = {}  [{}]", r.n, r.value, r.pattern);
                }
            }
        }
        Cmd::Cf {
            target: Target::Tau,
            count,
            until_q,
            precision,
        } => {
            let stop = match (count, until_q) {
                (Some(k), _) => Stop::Count(k),
                (None, Some(b)) => Stop::DenominatorAbove {
                    bound: parse_bound(&b)?,
                    lookahead: 0,
                },
                (None, None) => unreachable!("clap enforces the group"),
            };
            let (cf, used) = expand(|p| Ok(RootData::new(p).tau()), &stop, Precision::digits(precision), cap)?;
            let convergents: Vec<Value> = cf
                .convergents()
                .iter()
                .map(|(p, q)| json!({"p": p.to_string(), "q": q.to_string()}))
                .collect();
            let out = json!({
                "target": "tau",
                "precision_used": used,
                "quotients": cf.quotients().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "convergents": convergents,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Cmd::Bound { mode, precision } => {
            let roots = RootData::new(Precision::digits(precision));
            let modes = match mode {
                Some(m) => vec![m],
                None => vec![ConstantsMode::Fidelity, ConstantsMode::Audit],
            };
            let mut chains = Vec::new();
            for m in modes {
                chains.push(chain_json(&InitialBounds::derive(m, &roots)?));
            }
            println!("{}", serde_json::to_string_pretty(&chains)?);
        }
        Cmd::Reduce {
            stage,
            d1,
            d2,
            ell,
            mode,
            precision,
        } => {
            let (ctx, _) = ReductionContext::from_bounds(Precision::digits(precision), mode, cap)?;
            let records = if stage == 1 {
                match d1 {
                    Some(d) => vec![ctx.stage1_instance(d)?],
                    None => stage1_sweep(&ctx, Strategy::default())?.outcomes,
                }
            } else {
                let ell_max = match ell {
                    Some(l) => l,
                    None => u32::try_from(stage1_sweep(&ctx, Strategy::default())?.bound)?,
                };
                let instances: Vec<_> = stage2_instances(ell_max)
                    .into_iter()
                    .filter(|&(a, b, l)| {
                        d1.is_none_or(|x| x == a) && d2.is_none_or(|x| x == b) && ell.is_none_or(|x| x == l)
                    })
                    .collect();
                stage2_sweep(&ctx, &instances, Strategy::default())?.outcomes
            };
            for r in records {
                println!("{}", serde_json::to_string(&r)?);
            }
        }
        Cmd::Pipeline {
            precision,
            mode,
            out,
            format,
        } => {
            let cert = run_pipeline_with(Precision::digits(precision), mode, cap, Strategy::default())?;
            let doc = emit_report(&cert, format);
            match out {
                Some(path) => std::fs::write(path, doc + "\n")?,
                None => println!("{doc}"),
            }
            return Ok(if cert.consistency {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Integer or decimal (e.g. `3.6e48`) bound, truncated to an integer.
fn parse_bound(s: &str) -> Result<BigInt, Error> {
    parse_decimal(s)
        .map(|r| r.floor().to_integer())
        .ok_or_else(|| Error::Domain {
            op: "cf",
            detail: format!("cannot parse bound {s:?}"),
        })
}

fn chain_json(b: &InitialBounds) -> Value {
    let links: Vec<Value> = b
        .links
        .iter()
        .map(|l| {
            json!({
                "name": l.name,
                "meaning": l.meaning,
                "computed_upper": l.computed.upper_sci(6),
                "published": l.published_text,
                "carried_upper": l.carried.upper_sci(6),
                "dominated": l.dominated(),
            })
        })
        .collect();
    json!({
        "mode": b.mode,
        "links": links,
        "n_bound": b.n_bound_int().to_string(),
        "ell_plus_m_bound": b.m_bound().to_string(),
    })
}
