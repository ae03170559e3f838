//! Command-line front end for the tentlim library.
//!
//! Every command emits a machine-readable document (JSON by default, CSV or
//! plain text where it makes sense) built from exact arithmetic: numbers are
//! exact strings such as "169/289", never floats, unless `--approx` adds
//! decimal annotations.  Output is deterministic; the timestamp field is
//! suppressed by `--no-meta`.
//!
//! Exit codes: 0 success, 2 usage/parse/domain error, 3 budget exhaustion,
//! 4 undecided comparison.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tentlim::chains::{build_chain, itinerary};
use tentlim::classify::{bridges, distinguish, reduce_slope, RenormStep};
use tentlim::composant::{folding_pattern, ray_segment, snappy_points};
use tentlim::numerics::{parse_slope, Scalar, SlopeValue};
use tentlim::symmetry::{asymmetry_scan, select_params, verify_params};
use tentlim::tentmap::TentMap;
use tentlim::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tentlim",
    version,
    about = "Exact combinatorial invariants of tent-map inverse limit spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the document to a file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the generatedAt metadata field for byte-stable output.
    #[arg(long)]
    no_meta: bool,
    /// Annotate exact values with decimal approximations.
    #[arg(long)]
    approx: bool,
    /// Cap, in bits, on the size of any exact scalar produced.
    #[arg(long)]
    bit_cap: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the first `count` folding-pattern entries of a slope.
    Fp {
        #[arg(long)]
        slope: String,
        #[arg(long, default_value_t = 44)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the folding patterns of two slopes after renormalization.
    Distinguish {
        #[arg(short = 'a', long)]
        a: String,
        #[arg(short = 'b', long)]
        b: String,
        #[arg(long, default_value_t = 32)]
        max_depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Asymmetry falsification scan over a grid of intervals around c.
    Scan {
        #[arg(long)]
        slope: String,
        /// Largest iterate n checked per interval.
        #[arg(long, default_value_t = 12)]
        max_depth: u32,
        /// Number of grid intervals sampled.
        #[arg(long, default_value_t = 32)]
        count: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Natural chain summary, or the link itinerary of a ray segment as CSV.
    Chain {
        #[arg(long)]
        slope: String,
        /// Chain scale p.
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Depth of the enumerated ray segment.
        #[arg(long, default_value_t = 5)]
        max_depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// The first `count` snappy points of the ray.
    Snappy {
        #[arg(long)]
        slope: String,
        #[arg(long, default_value_t = 6)]
        count: u32,
        /// Projection scale p.
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Select and certify the symmetry parameters N0, N, delta, r0, epsilon.
    Params {
        #[arg(long)]
        slope: String,
        /// Search bound for admissible orders.
        #[arg(long, default_value_t = 60)]
        budget: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Renormalization reduction of a slope with its conjugacy certificate.
    Renormalize {
        #[arg(long)]
        slope: String,
        #[command(flatten)]
        common: Common,
    },
    /// Bridge decomposition of the ray segment at a chain scale.
    Bridges {
        #[arg(long)]
        slope: String,
        /// Chain scale q of the level-0 points.
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 5)]
        max_depth: u32,
        #[command(flatten)]
        common: Common,
    },
}

fn mk_tm<S: Scalar>(s: S, cap: Option<u64>) -> Result<TentMap<S>> {
    match cap {
        Some(c) => TentMap::with_bit_cap(s, c),
        None => TentMap::new(s),
    }
}

/// Runs `body` with a TentMap over the exact field the slope parses into.
macro_rules! with_tm {
    ($slope:expr, $cap:expr, |$tm:ident| $body:expr) => {
        match parse_slope($slope)? {
            SlopeValue::Rational(q) => {
                let $tm = mk_tm(q, $cap)?;
                $body
            }
            SlopeValue::Quadratic(x) => {
                let $tm = mk_tm(x, $cap)?;
                $body
            }
        }
    };
}

/// A rendered document plus the process exit code.
struct Outcome {
    body: String,
    exit: u8,
}

fn finish_json(mut doc: Value, common: &Common) -> Result<String> {
    if !common.no_meta {
        doc["generatedAt"] = json!(chrono::Utc::now().to_rfc3339());
    }
    serde_json::to_string_pretty(&doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Domain(e.to_string()))
}

fn unsupported_format(cmd: &str, fmt: &str) -> Error {
    Error::Parse(format!("command {cmd} has no {fmt} output"))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Cmd::Fp { slope, count, common } => {
            with_tm!(&slope, common.bit_cap, |tm| {
                let fp = folding_pattern(&tm, count)?;
                let entries: Vec<Value> = fp
                    .entries
                    .iter()
                    .map(|l| match l.as_number() {
                        None => json!("*"),
                        Some(n) => json!(n),
                    })
                    .collect();
                let body = match common.format {
                    Format::Json => {
                        let mut doc = json!({
                            "slope": tm.slope().exact_str(),
                            "depth": fp.depth,
                            "entries": entries,
                        });
                        if common.approx {
                            doc["slopeApprox"] = json!(tm.slope().approx());
                        }
                        finish_json(doc, &common)?
                    }
                    Format::Text => {
                        let words: Vec<String> =
                            fp.entries.iter().map(|l| l.to_string()).collect();
                        format!("{}\n", words.join(" "))
                    }
                    Format::Csv => {
                        let mut s = String::from("index,entry\n");
                        for (k, l) in fp.entries.iter().enumerate() {
                            s.push_str(&format!("{},{}\n", k + 1, l));
                        }
                        s
                    }
                };
                Ok(Outcome { body, exit: 0 })
            })
        }
        Cmd::Distinguish { a, b, max_depth, common } => {
            if common.format == Format::Csv {
                return Err(unsupported_format("distinguish", "csv"));
            }
            let va = parse_slope(&a)?;
            let vb = parse_slope(&b)?;
            let rep = distinguish(&va, &vb, max_depth)?;
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            let undecided = rep.first_discrepancy.is_none() && !rep.slopes_equal;
            let body = match common.format {
                Format::Json => finish_json(rep.to_json(), &common)?,
                _ => match rep.first_discrepancy {
                    Some(k) => format!("first discrepancy at entry {k}\n"),
                    None if rep.slopes_equal => "slopes are equal; no discrepancy\n".into(),
                    None => format!("undecided up to depth {}\n", rep.depth_used),
                },
            };
            Ok(Outcome { body, exit: if undecided { 4 } else { 0 } })
        }
        Cmd::Scan { slope, max_depth, count, common } => {
            if common.format != Format::Json {
                return Err(unsupported_format("scan", "non-JSON"));
            }
            with_tm!(&slope, common.bit_cap, |tm| {
                let params = select_params(&tm, 60)?;
                let outcome = asymmetry_scan(&tm, &params, max_depth, count)?;
                let body = finish_json(outcome.to_json(common.approx), &common)?;
                Ok(Outcome { body, exit: 0 })
            })
        }
        Cmd::Chain { slope, p, max_depth, common } => {
            with_tm!(&slope, common.bit_cap, |tm| {
                let chain = build_chain(&tm, p)?;
                let seg = ray_segment(&tm, max_depth, p)?;
                let itin = itinerary(&tm, &seg, &chain)?;
                let body = match common.format {
                    Format::Csv => {
                        const ROW_CAP: u64 = 2_000_000;
                        let steps = itin.materialize(ROW_CAP)?;
                        let mut s = String::from("step,linkIndex,kind,pPointLevel\n");
                        for (n, link) in steps.iter().enumerate() {
                            match itin.turn_at(n as u64) {
                                Some(t) => {
                                    s.push_str(&format!("{n},{link},turn,{}\n", t.level))
                                }
                                None => s.push_str(&format!("{n},{link},straight,\n")),
                            }
                        }
                        s
                    }
                    Format::Json => {
                        let mut doc = json!({
                            "slope": tm.slope().exact_str(),
                            "p": chain.p,
                            "links": chain.link_count(),
                            "width": chain.width.exact_str(),
                            "segmentDepth": seg.depth,
                            "totalSteps": itin.total_steps,
                            "turnCount": itin.turns.len(),
                        });
                        if common.approx {
                            doc["widthApprox"] = json!(Scalar::approx(&chain.width));
                        }
                        finish_json(doc, &common)?
                    }
                    Format::Text => format!(
                        "p={} links={} width={} steps={} turns={}\n",
                        chain.p,
                        chain.link_count(),
                        chain.width.exact_str(),
                        itin.total_steps,
                        itin.turns.len()
                    ),
                };
                Ok(Outcome { body, exit: 0 })
            })
        }
        Cmd::Snappy { slope, count, p, common } => {
            if common.format == Format::Csv {
                return Err(unsupported_format("snappy", "csv"));
            }
            with_tm!(&slope, common.bit_cap, |tm| {
                let (seg, pts) = snappy_points(&tm, p, count)?;
                let indices: Vec<usize> = pts.iter().map(|pt| pt.arc_index).collect();
                let body = match common.format {
                    Format::Json => {
                        let points: Vec<Value> = pts
                            .iter()
                            .map(|pt| {
                                let mut o = json!({
                                    "arcIndex": pt.arc_index,
                                    "level": pt.level,
                                    "position": pt.position.exact_str(),
                                });
                                if common.approx {
                                    o["positionApprox"] =
                                        json!(Scalar::approx(&pt.position));
                                }
                                o
                            })
                            .collect();
                        let doc = json!({
                            "slope": tm.slope().exact_str(),
                            "p": seg.p,
                            "count": count,
                            "indices": indices,
                            "points": points,
                        });
                        finish_json(doc, &common)?
                    }
                    _ => {
                        let words: Vec<String> =
                            indices.iter().map(|i| i.to_string()).collect();
                        format!("{}\n", words.join(","))
                    }
                };
                Ok(Outcome { body, exit: 0 })
            })
        }
        Cmd::Params { slope, budget, common } => {
            if common.format != Format::Json {
                return Err(unsupported_format("params", "non-JSON"));
            }
            with_tm!(&slope, common.bit_cap, |tm| {
                let p = select_params(&tm, budget)?;
                let certs = verify_params(&tm, &p)?;
                let mut doc = json!({
                    "slope": tm.slope().exact_str(),
                    "N0": p.n0,
                    "N": p.n,
                    "zN": p.z_n.exact_str(),
                    "delta": p.delta.exact_str(),
                    "epsilon": p.epsilon.exact_str(),
                    "r0": p.r0,
                    "theta": p.theta.exact_str(),
                    "certificates": serde_json::to_value(&certs)
                        .map_err(|e| Error::Domain(e.to_string()))?,
                });
                if common.approx {
                    doc["deltaApprox"] = json!(Scalar::approx(&p.delta));
                    doc["epsilonApprox"] = json!(Scalar::approx(&p.epsilon));
                }
                let body = finish_json(doc, &common)?;
                Ok(Outcome { body, exit: 0 })
            })
        }
        Cmd::Renormalize { slope, common } => {
            if common.format == Format::Csv {
                return Err(unsupported_format("renormalize", "csv"));
            }
            match parse_slope(&slope)? {
                SlopeValue::Rational(q) => {
                    let step = reduce_slope(&q)?;
                    render_renorm(step, &common)
                }
                SlopeValue::Quadratic(x) => {
                    let step = reduce_slope(&x)?;
                    render_renorm(step, &common)
                }
            }
        }
        Cmd::Bridges { slope, p, max_depth, common } => {
            if common.format != Format::Json {
                return Err(unsupported_format("bridges", "non-JSON"));
            }
            with_tm!(&slope, common.bit_cap, |tm| {
                let bs = bridges(&tm, p, max_depth)?;
                let list: Vec<Value> = bs
                    .iter()
                    .map(|b| {
                        json!({
                            "endpoints": [b.endpoints.0.arc_index, b.endpoints.1.arc_index],
                            "interiorLevels": b.interior_levels,
                        })
                    })
                    .collect();
                let doc = json!({
                    "slope": tm.slope().exact_str(),
                    "q": p,
                    "depth": max_depth,
                    "bridges": list,
                });
                let body = finish_json(doc, &common)?;
                Ok(Outcome { body, exit: 0 })
            })
        }
    }
}

fn render_renorm<S: Scalar>(step: RenormStep<S>, common: &Common) -> Result<Outcome> {
    let body = match common.format {
        Format::Json => {
            let mut doc = json!({
                "n": step.n,
                "reducedSlope": step.reduced_slope.exact_str(),
                "fixedPoint": step.fixed_point.exact_str(),
                "certSamples": step.cert_samples,
            });
            if common.approx {
                doc["reducedSlopeApprox"] = json!(step.reduced_slope.approx());
            }
            finish_json(doc, common)?
        }
        _ => format!(
            "n={} reducedSlope={} fixedPoint={}\n",
            step.n,
            step.reduced_slope.exact_str(),
            step.fixed_point.exact_str()
        ),
    };
    Ok(Outcome { body, exit: 0 })
}

/// Atomic write: stage in the target directory, then rename into place.
fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Domain(_) | Error::IndexTooSmall(_) | Error::BadCenter(_) => 2,
        Error::BudgetExceeded { .. } | Error::NotFoundWithinBound(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out_path, to_stdout) = match &cli.cmd {
        Cmd::Fp { common, .. }
        | Cmd::Distinguish { common, .. }
        | Cmd::Scan { common, .. }
        | Cmd::Chain { common, .. }
        | Cmd::Snappy { common, .. }
        | Cmd::Params { common, .. }
        | Cmd::Renormalize { common, .. }
        | Cmd::Bridges { common, .. } => (common.out.clone(), common.out.is_none()),
    };
    match run(cli) {
        Ok(outcome) => {
            if let Some(path) = out_path {
                if let Err(e) = write_atomic(&path, &outcome.body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if to_stdout {
                print!("{}", outcome.body);
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
