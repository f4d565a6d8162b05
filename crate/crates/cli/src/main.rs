//! `boselab <suite> verify` and `boselab scroll order-dim`.

use std::path::PathBuf;
use std::process::ExitCode;

use boselab_core::harness::{plane_order_control, quadric_order_control, scroll_order_dimension};
use boselab_core::{run_suite, BoseFrame, Rng, SuiteParams, DEFAULT_CAP, SUITES};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "boselab",
    version,
    about = "Verify the Bose representation of PG(2,q³) in PG(8,q)"
)]
struct Cli {
    /// One of: fields, spread, subline, subplane, conic, fqconic, cone, extension, scroll.
    suite: String,

    action: Action,

    /// Order of the base field.
    #[arg(long)]
    q: u32,

    /// Cubic modulus t0,t1,t2 of x³ − t2·x² − t1·x − t0 over GF(q).
    #[arg(long, value_parser = parse_modulus)]
    modulus: Option<[u32; 3]>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long, default_value_t = 10)]
    samples: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Largest point set any single enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,

    /// Ternary form over GF(q³) for `conic verify`, e.g. "x*z:1, y^2:-1".
    #[arg(long)]
    form: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Action {
    Verify,
    OrderDim,
}

fn parse_modulus(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<u32>| format!("expected three coefficients, got {}", v.len()))
}

fn run(cli: &Cli) -> Result<(Value, bool), String> {
    if !SUITES.contains(&cli.suite.as_str()) {
        return Err(format!(
            "unknown suite {:?}; expected one of {}",
            cli.suite,
            SUITES.join(", ")
        ));
    }
    let params = SuiteParams {
        q: cli.q,
        modulus: cli.modulus,
        seed: cli.seed,
        samples: cli.samples,
        cap: cli.cap,
        form: cli.form.clone(),
    };
    match cli.action {
        Action::Verify => {
            let report = run_suite(&cli.suite, &params).map_err(|e| e.to_string())?;
            let pass = report.pass;
            let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            if cli.suite == "spread" {
                let frame = BoseFrame::new(params.tower().map_err(|e| e.to_string())?);
                let spread = frame.verify_spread(cli.cap).map_err(|e| e.to_string())?;
                value["spread"] = serde_json::to_value(&spread).map_err(|e| e.to_string())?;
            }
            Ok((value, pass))
        }
        Action::OrderDim => {
            if cli.suite != "scroll" {
                return Err("order-dim is only defined for the scroll suite".into());
            }
            let tower = params.tower().map_err(|e| e.to_string())?;
            let root = Rng::new(cli.seed);
            let scroll = scroll_order_dimension(
                &tower,
                &mut root.split("scroll_order"),
                cli.samples,
                cli.cap,
            )
            .map_err(|e| e.to_string())?;
            let plane = plane_order_control(
                &tower,
                &mut root.split("plane_order_control"),
                cli.samples,
                cli.cap,
            )
            .map_err(|e| e.to_string())?;
            let quadric = quadric_order_control(
                &tower,
                &mut root.split("quadric_order_control"),
                cli.samples,
                cli.cap,
            )
            .map_err(|e| e.to_string())?;
            let pass = scroll.max_hits <= 6
                && scroll.histogram.get("overflow").copied().unwrap_or(0) == 0
                && plane.max_hits == 1
                && quadric.max_hits <= 2;
            let value = json!({
                "tool_version": boselab_core::harness::TOOL_VERSION,
                "params": {
                    "q": tower.q(),
                    "p": tower.p(),
                    "e": tower.e(),
                    "modulus": tower.modulus_string(),
                    "sextic_modulus": tower.sextic_modulus_string(),
                    "seed": cli.seed,
                    "samples": cli.samples,
                },
                "scroll": scroll,
                "plane_control": plane,
                "quadric_control": quadric,
                "pass": pass,
            });
            Ok((value, pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, pass)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            match &cli.json {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("boselab: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    eprintln!(
                        "{} {}: {}",
                        cli.suite,
                        if pass { "PASS" } else { "FAIL" },
                        path.display()
                    );
                }
                None => println!("{text}"),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("boselab: {e}");
            ExitCode::from(2)
        }
    }
}
