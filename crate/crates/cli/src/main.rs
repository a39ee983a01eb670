use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use scllab_core::costmodel::{bundled_table2, cost_report, estimate_lut_gain, parse_table2};
use scllab_core::harness::{
    emit_csv, emit_plot_data, run_equivalence, run_fer, run_proposition_audit, to_svg, PrunerKind,
    SimConfig,
};
use scllab_core::pruning::{build_bitonic, build_mvf, verify_zero_one, ZeroOneOutcome};
use scllab_core::{PolarCode, SorterDesign};

#[derive(Parser)]
#[command(
    name = "scllab",
    version,
    about = "Polar SCL decoding lab with index-ordered survivor sorting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polar code and write its frozen set.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        z0: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a Monte Carlo FER sweep from a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides `output_path`. Stdout if neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot_data: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decode the same frames with conventional and index-sorted pruning and compare.
    Equivalence {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        list: usize,
        /// One or more comma-separated SNR points.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        snr_db: Vec<f64>,
        #[arg(long)]
        frames: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "proposed")]
        pruner: PrunerKind,
    },
    /// Check the reduced crossbar against every survivor subset.
    AuditProposition {
        #[arg(long, value_delimiter = ',', required = true)]
        list: Vec<usize>,
    },
    /// Print crossbar, sorter and latency figures.
    Cost {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        list: usize,
        #[arg(long, default_value_t = 1)]
        design: u8,
        /// CSV of conventional crossbar LUTs (`L,N,luts`); the bundled table otherwise.
        #[arg(long)]
        table2: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        metric_bits: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Exhaustive 0-1 checks of the bitonic sorters and MVF selectors.
    ValidateSorters {
        #[arg(long, default_value_t = 16)]
        max_width: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Construct { n, k, z0, out } => {
            let code = PolarCode::construct(n, k, z0)?;
            fs::write(&out, code.to_code_file())
                .with_context(|| format!("writing {}", out.display()))?;
            println!("wrote ({n}, {k}) code to {}", out.display());
            Ok(true)
        }
        Command::Simulate {
            config,
            out,
            plot_data,
            svg,
        } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let cfg = SimConfig::parse(&text)?;
            let result = run_fer(&cfg)?;
            match out.or(cfg.output_path.clone()) {
                Some(path) => emit_csv(&result, fs::File::create(&path)?)?,
                None => emit_csv(&result, std::io::stdout().lock())?,
            }
            if let Some(path) = plot_data {
                emit_plot_data(&result, fs::File::create(&path)?)?;
            }
            if let Some(path) = svg {
                let title = format!("N={} K={} L={} {}", cfg.n, cfg.k, cfg.list_size, cfg.pruner);
                fs::write(&path, to_svg(&result, &title))?;
            }
            Ok(true)
        }
        Command::Equivalence {
            n,
            k,
            list,
            snr_db,
            frames,
            seed,
            pruner,
        } => {
            let cfg = SimConfig {
                n,
                k,
                list_size: list,
                pruner,
                snr_points_db: snr_db,
                max_frames: frames,
                seed,
                ..SimConfig::default()
            };
            let report = run_equivalence(&cfg)?;
            println!("{report}");
            Ok(report.passed())
        }
        Command::AuditProposition { list } => {
            let reports = run_proposition_audit(&list)?;
            for r in &reports {
                print!("{r}");
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Cost {
            n,
            p,
            list,
            design,
            table2,
            metric_bits,
            csv,
        } => {
            let design = SorterDesign::from_id(design)?;
            let index_bits = (2 * list).next_power_of_two().trailing_zeros();
            let report = cost_report(n, p, list, metric_bits, index_bits, design)?;
            if csv {
                print!("{}", report.to_csv());
            } else {
                println!("{report}");
            }
            let cells = match table2 {
                Some(path) => parse_table2(&fs::read_to_string(&path)?)?,
                None => bundled_table2(),
            };
            println!("\nestimated crossbar LUT gain (conventional LUTs x (L-2)/2L)");
            println!("{:>4} {:>6} {:>10} {:>10}", "L", "N", "luts", "gain");
            for c in cells {
                let gain = estimate_lut_gain(c.luts, c.list_size)?;
                println!(
                    "{:>4} {:>6} {:>10} {:>10}",
                    c.list_size, c.block_length, c.luts, gain
                );
            }
            Ok(true)
        }
        Command::ValidateSorters { max_width } => {
            if !(2..=30).contains(&max_width) {
                bail!("--max-width must be within 2..=30");
            }
            let mut ok = true;
            let mut width = 2;
            while width <= max_width {
                for (name, net) in [
                    ("bitonic", build_bitonic(width)?),
                    ("mvf", build_mvf(width)?),
                ] {
                    let outcome = verify_zero_one(&net)?;
                    let verdict = match &outcome {
                        ZeroOneOutcome::Pass { inputs } => format!("PASS ({inputs} inputs)"),
                        ZeroOneOutcome::Fail { input } => format!("FAIL on {input:?}"),
                    };
                    println!(
                        "{name:<8} width={width:<3} comparators={:<4} depth={:<3} {verdict}",
                        net.comparator_count(),
                        net.depth()
                    );
                    ok &= outcome.passed();
                }
                width *= 2;
            }
            Ok(ok)
        }
    }
}
