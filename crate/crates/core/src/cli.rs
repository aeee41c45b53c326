//! Command-line front end.

use std::fmt::Write;

use clap::{Args, Parser, Subcommand};

use crate::enumerate::{enumerate_null_classes, exceptional_type_census};
use crate::error::Error;
use crate::lattice::{PicardClass, Rank};
use crate::literal::parse_class;
use crate::positivity::{adjoint_kva_check, is_k_very_ample, k_very_ample};
use crate::reider::{consistency_sweep, SweepDomain, DESK_SCALE_MAX_K};
use crate::report::{render_positivity, render_sweep, to_json};
use crate::surface::SurfaceContext;
use crate::tables::{all_tables, decomposition_table, null_class_table};

/// Largest sample accepted by `verify`.
pub const MAX_SAMPLE: usize = 100_000;
/// Largest unpruned box accepted by `verify`.
pub const MAX_BOX: u128 = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Positivity of line bundles on Del Pezzo surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exceptional classes of S_r.
    Exceptional {
        #[arg(long, value_parser = rank_arg)]
        r: usize,
        /// Counts per type.
        #[arg(long, conflicts_with = "list")]
        types: bool,
        /// Every class, one per line.
        #[arg(long)]
        list: bool,
    },
    /// Classes with D^2 = 0 and K.D = -2, and their splittings.
    NullClasses {
        #[arg(long, value_parser = rank_arg)]
        r: usize,
    },
    /// Positivity report for one class.
    Check(ClassArgs),
    /// Obstruction-search consistency sweep.
    Verify {
        #[arg(long, value_parser = rank_arg)]
        r: usize,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Exhaustive box 0 <= b_i <= a <= A.
        #[arg(long = "box", value_name = "A", conflicts_with = "sample")]
        max_a: Option<i64>,
        /// Sweep only classes with b non-decreasing.
        #[arg(long, requires = "max_a")]
        sorted: bool,
        /// Number of sampled nef classes.
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
        /// Largest a drawn when sampling.
        #[arg(long, default_value_t = 12)]
        sample_max_a: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// K + L and its (k-1)-very ampleness.
    Adjoint(ClassArgs),
    /// Census, null-class and splitting tables for S_8.
    Tables,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long, value_parser = rank_arg)]
    pub r: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    /// Zero-pad coefficient lists shorter than r.
    #[arg(long)]
    pub pad: bool,
    #[arg(long)]
    pub json: bool,
    /// `a;b1,..,br` or `(a0;m1^n1,..)`.
    #[arg(allow_hyphen_values = true)]
    pub class: String,
}

fn rank_arg(s: &str) -> Result<usize, String> {
    let r: usize = s.parse().map_err(|_| format!("`{s}` is not a rank"))?;
    Rank::new(r).map(Rank::get).map_err(|e| e.to_string())
}

/// What a command printed and the exit status it asks for.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// A failure reported on stderr with exit status 2.
#[derive(Debug, PartialEq, Eq)]
pub struct Failure(pub String);

fn fail(e: Error) -> Failure {
    Failure(format!("error: {e}"))
}

fn parse_input(text: &str, rank: Rank, pad: bool) -> Result<PicardClass, Failure> {
    parse_class(text, rank, pad).map_err(|e| match &e {
        Error::Parse(p) => {
            let caret = " ".repeat(p.column.saturating_sub(1));
            Failure(format!("error: {e}\n  {text}\n  {caret}^"))
        }
        _ => fail(e),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Exceptional { r, types, list } => {
            let ctx = SurfaceContext::for_rank(*r).map_err(fail)?;
            let mut out = String::new();
            if *list {
                for xi in ctx.exceptional() {
                    writeln!(out, "{xi}").unwrap();
                }
            } else if *types {
                let census = exceptional_type_census(&ctx);
                for (ty, n) in &census.counts {
                    writeln!(out, "{:<12}{n:>4}", ty.to_string()).unwrap();
                }
                writeln!(out, "{:<12}{:>4}", "total", census.total()).unwrap();
            } else {
                writeln!(out, "{}", ctx.exceptional().len()).unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Command::NullClasses { r } => {
            let ctx = SurfaceContext::for_rank(*r).map_err(fail)?;
            let records = enumerate_null_classes(&ctx);
            Ok(Outcome::ok(format!(
                "{}\n{}",
                null_class_table(&records, ctx.rank()),
                decomposition_table(&records)
            )))
        }
        Command::Check(args) => {
            let ctx = SurfaceContext::for_rank(args.r).map_err(fail)?;
            let class = parse_input(&args.class, ctx.rank(), args.pad)?;
            let report = is_k_very_ample(&class, args.k, &ctx).map_err(fail)?;
            Ok(Outcome::ok(if args.json {
                to_json(&report)
            } else {
                render_positivity(&report)
            }))
        }
        Command::Verify {
            r,
            k,
            max_a,
            sorted,
            sample,
            sample_max_a,
            seed,
            json,
        } => {
            let ctx = SurfaceContext::for_rank(*r).map_err(fail)?;
            if *k < 0 {
                return Err(fail(Error::NegativeK(*k)));
            }
            if *k > DESK_SCALE_MAX_K {
                return Err(Failure(format!(
                    "error: refusing k = {k}: the obstruction search is limited to k <= \
                     {DESK_SCALE_MAX_K}, since its box grows roughly like (12k+6)^(r+1)"
                )));
            }
            let domain = match (max_a, sample) {
                (Some(a), _) => SweepDomain::Box {
                    max_a: *a,
                    sorted: *sorted,
                },
                (None, Some(n)) => SweepDomain::Sample {
                    count: *n,
                    max_a: *sample_max_a,
                    seed: *seed,
                },
                (None, None) if *r <= 4 => SweepDomain::Box {
                    max_a: 10,
                    sorted: false,
                },
                (None, None) => SweepDomain::Sample {
                    count: 1000,
                    max_a: *sample_max_a,
                    seed: *seed,
                },
            };
            match domain {
                SweepDomain::Box { sorted: false, .. } => {
                    let size = domain.box_size(ctx.rank()).unwrap_or(0);
                    if size > MAX_BOX {
                        return Err(Failure(format!(
                            "error: refusing box of {size} classes (limit {MAX_BOX}); use --sorted or --sample"
                        )));
                    }
                }
                SweepDomain::Box {
                    sorted: true,
                    max_a,
                } => {
                    if max_a > 40 {
                        return Err(Failure(
                            "error: refusing sorted box beyond a = 40".to_string(),
                        ));
                    }
                }
                SweepDomain::Sample { count, max_a, .. } => {
                    if count > MAX_SAMPLE || max_a < 1 {
                        return Err(Failure(format!(
                            "error: --sample must be at most {MAX_SAMPLE} and --sample-max-a at least 1"
                        )));
                    }
                }
            }
            let summary = consistency_sweep(*k, domain, &ctx).map_err(fail)?;
            let code = u8::from(!summary.violations.is_empty());
            let stdout = if *json {
                to_json(&summary)
            } else {
                let mut s = String::new();
                if let SweepDomain::Sample { seed, .. } = domain {
                    writeln!(s, "seed: {seed}").unwrap();
                }
                s + &render_sweep(&summary)
            };
            Ok(Outcome { stdout, code })
        }
        Command::Adjoint(args) => {
            let ctx = SurfaceContext::for_rank(args.r).map_err(fail)?;
            let class = parse_input(&args.class, ctx.rank(), args.pad)?;
            let holds = adjoint_kva_check(&class, args.k, &ctx).map_err(fail)?;
            let adjoint = class.adjoint();
            let level = args.k - 1;
            let stdout = if args.json {
                to_json(&serde_json::json!({
                    "subject": class,
                    "r": args.r,
                    "k": args.k,
                    "adjoint": adjoint,
                    "level": level,
                    "k_very_ample": k_very_ample(&class, args.k, &ctx),
                    "adjoint_very_ample": holds,
                }))
            } else {
                format!(
                    "class: {class} on S_{} (k = {})\nadjoint: {adjoint}\n{level}-very ample: {holds}\n",
                    args.r, args.k
                )
            };
            Ok(Outcome::ok(stdout))
        }
        Command::Tables => Ok(Outcome::ok(all_tables())),
    }
}
