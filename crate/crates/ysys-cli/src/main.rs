//! Command line surface for the engine: validation, reports, evolution,
//! reddening/periodicity, classification, q-series expansion, and quantum
//! dilogarithm identity checks.
//!
//! Exit codes are a stable contract: 0 ok, 2 validation failure, 3
//! mathematical property failure, 4 resource bound exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ysys::classifier;
use ysys::nahm;
use ysys::polymat::{check_symplectic, matrices_to_coeff_lists};
use ysys::presets;
use ysys::qdilog;
use ysys::ysystem::{find_period, find_reddening, quiver_to_json, QuiverData};
use ysys::{Error, Strategy, YDatum};

#[derive(Parser)]
#[command(name = "ysys", version, about = "Exact engine for rank-2 Y-systems")]
struct Cli {
    /// Worker threads for data-parallel stages; 1 forces the sequential
    /// fallback, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArg {
    /// Preset name (`table1:1`..`table1:6`, `table1:Kop`, `slice:a2`,
    /// `zero:R`) or path to a pair JSON file.
    #[arg(long)]
    pair: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a pair is a structurally valid symplectic Y-datum.
    Validate(PairArg),
    /// Unified JSON report: quiver, reddening lengths, period, K matrix.
    Report {
        #[command(flatten)]
        pair: PairArg,
        /// Emit the quiver in DOT format instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Evolve the tropical seed and print the c-vectors at each step.
    Evolve {
        #[command(flatten)]
        pair: PairArg,
        /// Number of evolution steps (negative runs the inverse evolution).
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        steps: i64,
    },
    /// Compute the positive and negative reddening lengths.
    Reddening {
        #[command(flatten)]
        pair: PairArg,
        /// Step bound before giving up.
        #[arg(long, default_value_t = 1000)]
        max: u32,
    },
    /// Find the exact period of the evolution.
    Period {
        #[command(flatten)]
        pair: PairArg,
        /// Step bound before giving up.
        #[arg(long, default_value_t = 1000)]
        max: u32,
    },
    /// Run the finite-type classification pipeline.
    Classify {
        /// Bound on the recurrence orders searched for lift instances.
        #[arg(long, default_value_t = 12)]
        rmax: u32,
        /// Ablation: skip the candidate ban patterns.
        #[arg(long)]
        no_ban: bool,
        /// Verify the class table against the embedded goldens and exit
        /// nonzero on mismatch.
        #[arg(long)]
        golden: bool,
    },
    /// Expand the q-series attached to the tabulated pairs.
    Nahm {
        /// Truncation order of the expansions.
        #[arg(long, default_value_t = 10)]
        order: i64,
        /// Check the rank-1 sums against their mod-5 product expansions
        /// instead of printing the table.
        #[arg(long)]
        against_product: bool,
    },
    /// Check the quantum dilogarithm identity for a pair.
    Qdilog {
        #[command(flatten)]
        pair: PairArg,
        /// Total-degree truncation of the quantum torus series.
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
}

fn load_pair(spec: &str) -> Result<YDatum, Error> {
    if let Ok(d) = presets::by_name(spec) {
        return Ok(d);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        Error::Validation(format!(
            "{spec} is neither a preset ({}) nor a readable file: {e}",
            presets::all_names().join(", ")
        ))
    })?;
    YDatum::from_json(&text)
}

fn rational_str(x: &num::BigRational) -> String {
    x.to_string()
}

fn qmat_json(k: &nahm::QMat) -> serde_json::Value {
    serde_json::Value::Array(
        k.m.iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter().map(|x| json!(rational_str(x))).collect(),
                )
            })
            .collect(),
    )
}

fn qseries_json(s: &nahm::QSeries) -> serde_json::Value {
    serde_json::Value::Array(
        s.terms()
            .map(|(e, c)| json!([rational_str(e), rational_str(c)]))
            .collect(),
    )
}

fn run(cli: Cli) -> Result<(), Error> {
    let strategy = if cli.jobs == 1 {
        Strategy::Sequential
    } else {
        if cli.jobs > 1 {
            // Best effort: a second initialization in the same process fails
            // harmlessly and the default pool is used instead.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs)
                .build_global();
        }
        Strategy::Parallel
    };
    match cli.command {
        Command::Validate(p) => {
            let d = load_pair(&p.pair)?;
            let m = d.to_matrices();
            if !check_symplectic(&m) {
                return Err(Error::Property("symplectic property fails".into()));
            }
            println!(
                "{}",
                json!({"pair": p.pair, "valid": true, "size": d.size()})
            );
            Ok(())
        }
        Command::Report { pair, dot } => {
            let d = load_pair(&pair.pair)?;
            let q = QuiverData::build(&d)?;
            if dot {
                println!("{}", q.to_dot());
                return Ok(());
            }
            let hp = find_reddening(&q, true, 1000)?;
            let hm = find_reddening(&q, false, 1000)?;
            let period = find_period(&q, 4 * (hp + hm), strategy)?;
            let k = nahm::compute_k(&d.to_matrices())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "pair": pair.pair,
                    "matrices": matrices_to_coeff_lists(&d.to_matrices()),
                    "quiver": quiver_to_json(&q),
                    "h_plus": hp,
                    "h_minus": hm,
                    "period": period,
                    "K": qmat_json(&k),
                }))
                .expect("serializable"),
            );
            Ok(())
        }
        Command::Evolve { pair, steps } => {
            let d = load_pair(&pair.pair)?;
            let q = QuiverData::build(&d)?;
            let mut seed = q.initial_tropical_seed();
            let mut rows = Vec::new();
            for u in 0..=steps.unsigned_abs() {
                rows.push(json!({
                    "u": if steps < 0 { -(u as i64) } else { u as i64 },
                    "c_vectors": seed.c_vectors(),
                    "sign_coherent": seed.is_sign_coherent(),
                }));
                seed = if steps < 0 {
                    q.step_back(&seed, strategy)?
                } else {
                    q.step(&seed, strategy)?
                };
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "pair": pair.pair,
                    "trace": rows,
                }))
                .expect("serializable"),
            );
            Ok(())
        }
        Command::Reddening { pair, max } => {
            let d = load_pair(&pair.pair)?;
            let q = QuiverData::build(&d)?;
            let hp = find_reddening(&q, true, max)?;
            let hm = find_reddening(&q, false, max)?;
            println!("{}", json!({"pair": pair.pair, "h_plus": hp, "h_minus": hm}));
            Ok(())
        }
        Command::Period { pair, max } => {
            let d = load_pair(&pair.pair)?;
            let q = QuiverData::build(&d)?;
            let period = find_period(&q, max, strategy)?;
            println!("{}", json!({"pair": pair.pair, "period": period}));
            Ok(())
        }
        Command::Classify {
            rmax,
            no_ban,
            golden,
        } => {
            let report = classifier::classify_with_options(rmax, !no_ban, strategy)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            if golden {
                let h_golden = [(3, 2), (8, 6), (18, 10), (3, 3), (5, 3), (5, 2)];
                let period_golden = [10, 14, 28, 12, 8, 7];
                if report.classes.len() != 6 {
                    return Err(Error::Property(format!(
                        "expected 6 classes, found {}",
                        report.classes.len()
                    )));
                }
                for (idx, cls) in report.classes.iter().enumerate() {
                    if (cls.h_plus, cls.h_minus) != h_golden[idx]
                        || cls.period != period_golden[idx]
                    {
                        return Err(Error::Property(format!(
                            "class {} disagrees with the golden table",
                            idx + 1
                        )));
                    }
                }
            }
            Ok(())
        }
        Command::Nahm {
            order,
            against_product,
        } => {
            let order = num::BigRational::from_integer(order.into());
            if against_product {
                let k = nahm::QMat::from_i64(&[&[2]]);
                let zero = num::BigRational::from_integer(0.into());
                let one = num::BigRational::from_integer(1.into());
                let mut verdicts = Vec::new();
                for (b, residue) in [(zero.clone(), 1u32), (one, 2u32)] {
                    let sum = nahm::nahm_expand(
                        &k,
                        std::slice::from_ref(&b),
                        &zero,
                        &order,
                        10_000,
                        nahm::NahmEnumeration::Box,
                        strategy,
                    )?;
                    let product = nahm::rr_product(residue, &order);
                    let ok = sum.eq_below(&product, &order);
                    verdicts.push(json!({
                        "linear_term": rational_str(&b),
                        "product_residue": residue,
                        "agree": ok,
                    }));
                    if !ok {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({"identities": verdicts}))
                                .expect("serializable")
                        );
                        return Err(Error::Property(
                            "sum and product expansions disagree".into(),
                        ));
                    }
                }
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"identities": verdicts}))
                        .expect("serializable")
                );
                return Ok(());
            }
            let entries = nahm::table2_report(&order, strategy)?;
            let rows: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "K": qmat_json(&e.k),
                        "symmetric": e.symmetric,
                        "positive_definite": e.positive_definite,
                        "minus_24C": rational_str(&e.minus_24c),
                        "expansion": qseries_json(&e.expansion),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"entries": rows})).expect("serializable")
            );
            Ok(())
        }
        Command::Qdilog { pair, degree } => {
            let d = load_pair(&pair.pair)?;
            let q = QuiverData::build(&d)?;
            let hp = find_reddening(&q, true, 1000)?;
            let hm = find_reddening(&q, false, 1000)?;
            let fwd = qdilog::dt_invariant(&q, hp as i64, degree)?;
            let bwd = qdilog::dt_invariant(&q, -(hm as i64), degree)?;
            match fwd.first_difference(&bwd) {
                None => {
                    println!(
                        "{}",
                        json!({
                            "pair": pair.pair,
                            "degree": degree,
                            "h_plus": hp,
                            "h_minus": hm,
                            "identity": true,
                        })
                    );
                    Ok(())
                }
                Some(mono) => {
                    println!(
                        "{}",
                        json!({
                            "pair": pair.pair,
                            "degree": degree,
                            "h_plus": hp,
                            "h_minus": hm,
                            "identity": false,
                            "first_disagreement": mono,
                        })
                    );
                    Err(Error::Property(
                        "quantum dilogarithm identity fails".into(),
                    ))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli)));
    let err = match outcome {
        Ok(Ok(())) => return ExitCode::SUCCESS,
        Ok(Err(e)) => e,
        Err(payload) => {
            // Panics from deep arithmetic are resource-cap overruns
            // (monomial caps assert by panicking); report them as such.
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".to_string());
            Error::Resource(msg)
        }
    };
    eprintln!("error: {err}");
    ExitCode::from(match err {
        Error::Validation(_) => 2,
        Error::Property(_) => 3,
        Error::Resource(_) => 4,
        Error::Internal(_) => 4,
    })
}
