//! `diffalg` — batch command-line interface over the differential-algebra
//! library: module construction, verification suites, Groebner checks and
//! classification, with JSON import/export.
//!
//! Exit codes: 0 success, 1 a check or assertion failed, 2 usage or input
//! error.

use diffalg_cli::{json, suites};

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use diffalg_core::classify::{classify_extension, classify_gm, ExtTag};
use diffalg_core::groebner::detprime_check;
use diffalg_core::modules::{
    construct_pdk, construct_ud, construct_wd, dual, prolongation, pullback, pushout, socle,
    iso_test, FinModule,
};

use json::{
    finmodule_from_json, finmodule_to_json, gmrep_from_json, mat_from_json, mat_to_json,
    mat_to_text, nilarray_to_json, FinModuleJson, GmRepJson, JsonError, SquareInputJson,
};

#[derive(Parser)]
#[command(name = "diffalg", version, about = "Exact differential-algebra toolkit")]
struct Cli {
    /// Maximum derivative order allowed during quotient-ring reduction
    /// (at least 4; the environment variable DIFFALG_ORDER_CAP also sets it).
    #[arg(long, global = true)]
    order_cap: Option<u32>,

    /// Cross-check pseudo-reduction equalities with the truncated Groebner
    /// membership fallback where supported.
    #[arg(long, global = true, default_value_t = false)]
    groebner_fallback: bool,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Output format for reports and results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pdk,
    Ud,
    Wd,
    Prolong,
    Dual,
    Pullback,
    Pushout,
}

#[derive(Subcommand)]
enum Command {
    /// Build a module and write it as JSON.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Degree parameter for pdk/ud/wd.
        #[arg(long)]
        d: Option<u32>,
        /// Weight bound for pdk.
        #[arg(long)]
        k: Option<u32>,
        /// Input module JSON (prolong, dual) or combined square input
        /// (pullback, pushout).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Number of randomized trials where applicable.
        #[arg(long, default_value_t = 200)]
        trials: u32,
    },
    /// Run the four-part determinant-derivative primality check.
    Groebner {
        #[arg(long)]
        q: u32,
    },
    /// Classify a module with two irreducible layers.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Classify a torus representation into isotypic components.
    ClassifyGm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute the socle of a module.
    Socle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Test two modules for isomorphism.
    Iso {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.order_cap.or_else(|| {
        std::env::var("DIFFALG_ORDER_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(cap) = cap {
        if cap < 4 {
            eprintln!("error: order cap must be at least 4");
            return ExitCode::from(2);
        }
        diffalg_core::set_order_cap(cap);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn read_module(path: &PathBuf) -> Result<FinModule, JsonError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| JsonError(format!("cannot read {}: {}", path.display(), e)))?;
    let j: FinModuleJson = serde_json::from_str(&text)
        .map_err(|e| JsonError(format!("bad module JSON in {}: {}", path.display(), e)))?;
    finmodule_from_json(&j)
}

fn write_output(output: &Option<PathBuf>, text: &str) -> Result<(), JsonError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| JsonError(format!("cannot write {}: {}", path.display(), e))),
        None => {
            let mut out = std::io::stdout();
            out.write_all(text.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .map_err(|e| JsonError(format!("cannot write to stdout: {}", e)))
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, JsonError> {
    match &cli.command {
        Command::Construct {
            kind,
            d,
            k,
            input,
            output,
        } => {
            let module = build_module(*kind, *d, *k, input)?;
            let text = serde_json::to_string_pretty(&finmodule_to_json(&module))
                .expect("module JSON serializes");
            write_output(output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, trials } => {
            let report = suites::run_suite(suite, *trials, cli.seed, cli.groebner_fallback)
                .ok_or_else(|| {
                    JsonError(format!(
                        "unknown suite {:?}; available: {}",
                        suite,
                        suites::SUITES.join(", ")
                    ))
                })?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => {
                    for line in &report.lines {
                        let tag = match line.status {
                            suites::Status::Pass => "PASS",
                            suites::Status::Fail => "FAIL",
                            suites::Status::Note => "NOTE",
                        };
                        println!("{} [{}] {}", tag, line.anchor, line.detail);
                    }
                    println!(
                        "suite {}: {}",
                        report.suite,
                        if report.passed { "passed" } else { "FAILED" }
                    );
                }
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Groebner { q } => {
            if *q < 1 {
                return Err(JsonError("q must be at least 1".to_string()));
            }
            let report = detprime_check(*q);
            match cli.format {
                Format::Json => {
                    let j = serde_json::json!({
                        "q": report.q,
                        "leadingMonomials": report.leading_monomials_ok,
                        "pairwiseCoprime": report.pairwise_coprime_ok,
                        "basisUnchanged": report.basis_unchanged_ok,
                        "elimination": report.elimination_ok,
                        "passed": report.passed(),
                        "failure": report.failure,
                    });
                    println!("{}", serde_json::to_string_pretty(&j).unwrap());
                }
                Format::Text => {
                    println!(
                        "q = {}: leading monomials {}, pairwise coprime {}, basis unchanged {}, elimination {}",
                        report.q,
                        report.leading_monomials_ok,
                        report.pairwise_coprime_ok,
                        report.basis_unchanged_ok,
                        report.elimination_ok
                    );
                    if let Some(f) = &report.failure {
                        println!("failure: {}", f);
                    }
                }
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Classify { input } => {
            let module = read_module(input)?;
            match classify_extension(&module) {
                Ok(c) => {
                    let tag = match c.tag {
                        ExtTag::Ud => "Ud",
                        ExtTag::Wd => "Wd",
                        ExtTag::WdDual => "WdDual",
                        ExtTag::Split => "split",
                    };
                    match cli.format {
                        Format::Json => {
                            let j = serde_json::json!({
                                "tag": tag,
                                "d": if c.tag == ExtTag::Split { None } else { Some(c.d) },
                                "witness": c.witness.as_ref().map(mat_to_json),
                            });
                            println!("{}", serde_json::to_string_pretty(&j).unwrap());
                        }
                        Format::Text => {
                            if c.tag == ExtTag::Split {
                                println!("split");
                            } else {
                                println!("{} with d = {}", tag, c.d);
                            }
                            if let Some(w) = &c.witness {
                                println!("witness: {}", mat_to_text(w));
                            }
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("classification failed: {}", e);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::ClassifyGm { input } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| JsonError(format!("cannot read {}: {}", input.display(), e)))?;
            let j: GmRepJson = serde_json::from_str(&text)
                .map_err(|e| JsonError(format!("bad torus-representation JSON: {}", e)))?;
            let rep = gmrep_from_json(&j)?;
            match classify_gm(&rep) {
                Ok(comps) => {
                    match cli.format {
                        Format::Json => {
                            let out: Vec<_> = comps
                                .iter()
                                .map(|c| {
                                    serde_json::json!({
                                        "d": c.d,
                                        "N": nilarray_to_json(&c.nil),
                                        "basis": mat_to_json(&c.basis),
                                    })
                                })
                                .collect();
                            println!("{}", serde_json::to_string_pretty(&out).unwrap());
                        }
                        Format::Text => {
                            for c in &comps {
                                println!(
                                    "component d = {:?}, dim {}, {} nilpotent slots",
                                    c.d,
                                    c.basis.cols(),
                                    c.nil.entries().count()
                                );
                            }
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("classification failed: {}", e);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Socle { input } => {
            let module = read_module(input)?;
            let s = socle(&module);
            match cli.format {
                Format::Json => {
                    let rows: Vec<Vec<json::CoeffJson>> = s
                        .basis()
                        .iter()
                        .map(|v| v.iter().map(json::ratfunc_to_json).collect())
                        .collect();
                    let j = serde_json::json!({ "dim": s.dim(), "basis": rows });
                    println!("{}", serde_json::to_string_pretty(&j).unwrap());
                }
                Format::Text => {
                    println!("socle dimension {}", s.dim());
                    for v in s.basis() {
                        let cells: Vec<String> =
                            v.iter().map(|x| format!("{}", x)).collect();
                        println!("  [{}]", cells.join(", "));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso { left, right } => {
            let m1 = read_module(left)?;
            let m2 = read_module(right)?;
            match iso_test(&m1, &m2) {
                Some(t) => {
                    match cli.format {
                        Format::Json => {
                            let j = serde_json::json!({
                                "isomorphic": true,
                                "witness": mat_to_json(&t),
                            });
                            println!("{}", serde_json::to_string_pretty(&j).unwrap());
                        }
                        Format::Text => {
                            println!("isomorphic; witness {}", mat_to_text(&t));
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    match cli.format {
                        Format::Json => {
                            println!("{}", serde_json::json!({ "isomorphic": false }));
                        }
                        Format::Text => println!("not isomorphic"),
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn build_module(
    kind: Kind,
    d: Option<u32>,
    k: Option<u32>,
    input: &Option<PathBuf>,
) -> Result<FinModule, JsonError> {
    let need_d = || d.ok_or_else(|| JsonError("--d is required for this kind".to_string()));
    let need_input = || {
        input
            .as_ref()
            .ok_or_else(|| JsonError("--input is required for this kind".to_string()))
    };
    match kind {
        Kind::Pdk => {
            let d = need_d()?;
            let k = k.ok_or_else(|| JsonError("--k is required for pdk".to_string()))?;
            if d < 1 {
                return Err(JsonError("d must be at least 1".to_string()));
            }
            Ok(construct_pdk(d, k))
        }
        Kind::Ud => construct_ud(need_d()?)
            .map_err(|e| JsonError(format!("construction rejected: {}", e))),
        Kind::Wd => construct_wd(need_d()?)
            .map_err(|e| JsonError(format!("construction rejected: {}", e))),
        Kind::Prolong => Ok(prolongation(&read_module(need_input()?)?)),
        Kind::Dual => Ok(dual(&read_module(need_input()?)?)),
        Kind::Pullback | Kind::Pushout => {
            let path = need_input()?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| JsonError(format!("cannot read {}: {}", path.display(), e)))?;
            let j: SquareInputJson = serde_json::from_str(&text)
                .map_err(|e| JsonError(format!("bad combined input JSON: {}", e)))?;
            let m1 = finmodule_from_json(&j.m1)?;
            let m2 = finmodule_from_json(&j.m2)?;
            let shared = finmodule_from_json(&j.shared)?;
            let map1 = mat_from_json(&j.map1)?;
            let map2 = mat_from_json(&j.map2)?;
            let result = match kind {
                Kind::Pullback => pullback(&m1, &m2, &shared, &map1, &map2),
                _ => pushout(&m1, &m2, &shared, &map1, &map2),
            };
            result.map_err(|e| JsonError(format!("construction rejected: {}", e)))
        }
    }
}
