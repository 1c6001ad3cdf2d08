use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::info;
use mslope::campaign::{cmd_verify, generate, CampaignConfig};
use mslope::{report, svg, Format};
use mslope_core::edgepath::{slope_bounds, EdgepathError};
use mslope_core::enumerate::{verify_twist_ordering, EnumerationLimits};
use mslope_core::montesinos::KnotCondition;
use mslope_core::{parse_expression, MontesinosExpression};

#[derive(Parser)]
#[command(name = "mslope", version, about = "Boundary-slope bounds for Montesinos knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crossing counts, edgepath twists and slope bounds of expressions.
    Analyze {
        /// Expressions such as "1/2,1/3,-2/3".
        expressions: Vec<String>,
        /// Read expressions from a file, one per line.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Analyze the restricted form instead of the input.
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Random verification campaign over every checked property.
    Verify {
        #[command(flatten)]
        campaign: CampaignArgs,
        #[arg(long)]
        no_minimality: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate type II/III candidate systems and check the twist ordering.
    Enumerate {
        expressions: Vec<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Allow consecutive edges on one triangle.
        #[arg(long)]
        no_minimality: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_systems: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Draw the three bound systems of one expression.
    Svg {
        expression: String,
        #[arg(long)]
        restricted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print seeded random expressions.
    Random {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// Also emit links.
        #[arg(long)]
        links: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_denominator: i64,
    /// Bound on |P/Q| of every tangle.
    #[arg(long, default_value_t = 4)]
    max_magnitude: i64,
    #[arg(long, default_value_t = 3)]
    min_tangles: usize,
    #[arg(long, default_value_t = 6)]
    max_tangles: usize,
}

impl CampaignArgs {
    fn config(&self) -> CampaignConfig {
        CampaignConfig {
            count: self.count,
            seed: self.seed,
            min_tangles: self.min_tangles,
            max_tangles: self.max_tangles,
            max_denominator: self.max_denominator,
            max_magnitude: self.max_magnitude,
            ..CampaignConfig::default()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_expressions(args: &[String], input: Option<&Path>) -> anyhow::Result<Vec<MontesinosExpression>> {
    let mut texts: Vec<String> = args.to_vec();
    if let Some(path) = input {
        let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        texts.extend(
            body.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    if texts.is_empty() {
        bail!("no expressions given");
    }
    texts
        .iter()
        .map(|t| parse_expression(t.trim()).with_context(|| format!("parsing {t:?}")))
        .collect()
}

fn explain(err: EdgepathError) -> anyhow::Error {
    match err {
        EdgepathError::Link(KnotCondition::Link) => anyhow::anyhow!(
            "expression is a link: the knot condition needs exactly one even denominator, \
             or all denominators odd with an odd number of odd numerators"
        ),
        e => e.into(),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            expressions,
            input,
            restricted,
            output,
        } => {
            let mut reports = Vec::new();
            let mut notes = String::new();
            for e in read_expressions(&expressions, input.as_deref())? {
                let target = if restricted {
                    let r = e.to_restricted().expression;
                    notes.push_str(&format!("restricted: M({e}) -> M({r})\n"));
                    r
                } else {
                    e.clone()
                };
                reports.push(slope_bounds(&target).map_err(explain).with_context(|| format!("M({target})"))?);
            }
            if output.format == Format::Plain {
                notes.push_str(&report::render_bounds(&reports, output.format)?);
                emit(output.out.as_deref(), &notes)?;
            } else {
                if restricted {
                    eprint!("{notes}");
                }
                emit(output.out.as_deref(), &report::render_bounds(&reports, output.format)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            campaign,
            no_minimality,
            output,
        } => {
            let mut config = campaign.config();
            config.limits.minimality = !no_minimality;
            let summary = cmd_verify(&config)?;
            info!("{} failures", summary.failures.len());
            emit(output.out.as_deref(), &report::render_summary(&summary, output.format)?)?;
            Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Enumerate {
            expressions,
            input,
            no_minimality,
            max_systems,
            output,
        } => {
            let limits = EnumerationLimits {
                minimality: !no_minimality,
                max_systems,
                ..EnumerationLimits::default()
            };
            let reports = read_expressions(&expressions, input.as_deref())?
                .iter()
                .map(|e| verify_twist_ordering(e, &limits).with_context(|| format!("M({e})")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            emit(output.out.as_deref(), &report::render_ordering(&reports, output.format)?)?;
            let ok = reports.iter().all(|r| r.passed());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Svg {
            expression,
            restricted,
            out,
        } => {
            let mut e = parse_expression(expression.trim())?;
            if restricted {
                e = e.to_restricted().expression;
            }
            let r = slope_bounds(&e).map_err(explain)?;
            emit(out.as_deref(), &svg::render(&r))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Random { campaign, links, out } => {
            let mut config = campaign.config();
            config.knots_only = !links;
            let mut text = String::new();
            for e in generate(&config)? {
                text.push_str(&e.to_string());
                text.push('\n');
            }
            emit(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// An expression such as `-1/2,1/3,1/7` looks like a short flag to clap; a
/// leading space keeps it positional and is trimmed again by the parser.
fn shield_negative_expressions() -> Vec<OsString> {
    std::env::args_os()
        .map(|a| match a.to_str() {
            Some(s) if s.len() > 1 && s.starts_with('-') && s.as_bytes()[1].is_ascii_digit() => format!(" {s}").into(),
            _ => a,
        })
        .collect()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MSLOPE_LOG")).init();
    match run(Cli::parse_from(shield_negative_expressions())) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
