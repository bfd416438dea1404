use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use exact_solver::{epsilon_constraint_front, ExactConfig};
use harness_cli::bench::{run_benchmark, workers_from_env, BenchResult, BenchmarkPlan};
use harness_cli::io::{front_records, load_instance, save_instance, write_front_csv, write_front_json};
use harness_cli::report::{write_csv, write_svg};
use harness_cli::taguchi::{taguchi_tune, DesignKind, TaguchiDesign};
use instancegen::{generate, table6, table7, GenSpec};
use model_core::model::Dims;
use model_core::pareto::ParetoFront;
use nsga2::{run_nsga2, NsgaConfig};

/// Relief location-distribution experiments.
#[derive(Parser)]
#[command(name = "relief", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    Generate {
        /// 1-based row of the five-row ladder.
        #[arg(long, conflicts_with_all = ["table6", "dims"])]
        table7: Option<usize>,
        /// 1-based row of the 22-row ladder.
        #[arg(long, conflicts_with = "dims")]
        table6: Option<usize>,
        /// `I,J,K,M`.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Round every drawn value.
        #[arg(long)]
        integral: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Exact front by the ε-constraint sweep.
    SolveExact {
        instance: PathBuf,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Approximate front by NSGA-II.
    SolveNsga2 {
        instance: PathBuf,
        #[arg(long, default_value_t = 150)]
        pop: usize,
        #[arg(long, default_value_t = 50)]
        gens: usize,
        #[arg(long, default_value_t = 0.9)]
        cx: f64,
        #[arg(long = "mut", default_value_t = 0.2)]
        mutation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Per-generation log as JSON lines.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Taguchi tuning of NSGA-II on generated instances.
    Tune {
        /// Rows of the five-row ladder to train on.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        table7: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Design::Full)]
        design: Design,
        #[arg(long, default_value_t = 3)]
        replications: usize,
        #[arg(long, default_value_t = 50)]
        gens: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark plan; writes results.json, metrics.csv and runtime.csv.
    Bench {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, short, default_value = "bench-out")]
        out: PathBuf,
    },
    /// Render a saved results.json.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Design {
    Full,
    L9,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

fn ladder_row(specs: Vec<GenSpec>, row: usize) -> Result<GenSpec> {
    match row.checked_sub(1).and_then(|i| specs.get(i)) {
        Some(s) => Ok(s.clone()),
        None => bail!("no ladder row {row}"),
    }
}

fn write_front(front: &ParetoFront, note: &str, out: &Path, csv: Option<&Path>) -> Result<()> {
    write_front_json(out, &front_records(front, note))?;
    if let Some(csv) = csv {
        write_front_csv(csv, &front.objectives())?;
    }
    println!("{} points -> {}", front.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            table7: t7,
            table6: t6,
            dims,
            seed,
            integral,
            out,
        } => {
            let mut spec = match (t7, t6, dims) {
                (Some(r), _, _) => ladder_row(table7(), r)?,
                (_, Some(r), _) => ladder_row(table6(), r)?,
                (_, _, Some(d)) if d.len() == 4 => GenSpec::new(Dims::new(d[0], d[1], d[2], d[3]), 0),
                (_, _, Some(_)) => bail!("--dims takes I,J,K,M"),
                _ => bail!("one of --table7, --table6 or --dims is required"),
            };
            if let Some(s) = seed {
                spec.seed = s;
            }
            spec.integral = integral;
            let inst = generate(&spec)?;
            save_instance(&out, &inst, Some(spec.seed))?;
            println!("wrote {}", out.display());
        }
        Command::SolveExact {
            instance,
            grid,
            time_limit,
            node_limit,
            out,
            csv,
        } => {
            let inst = load_instance(&instance)?;
            let mut cfg = ExactConfig {
                time_limit: time_limit.map(Duration::from_secs_f64),
                ..ExactConfig::default()
            };
            if let Some(n) = node_limit {
                cfg.node_limit = n;
            }
            let front = epsilon_constraint_front(&inst, grid, &cfg)?;
            write_front(&front, "exact", &out, csv.as_deref())?;
        }
        Command::SolveNsga2 {
            instance,
            pop,
            gens,
            cx,
            mutation,
            seed,
            out,
            csv,
            log,
        } => {
            let inst = load_instance(&instance)?;
            let cfg = NsgaConfig {
                population: pop,
                generations: gens,
                crossover_rate: cx,
                mutation_rate: mutation,
                seed,
            };
            let (front, stats) = run_nsga2(&inst, &cfg)?;
            if let Some(log) = log {
                fs::write(&log, stats.log_lines()?).with_context(|| format!("writing {}", log.display()))?;
            }
            write_front(&front, "nsga2", &out, csv.as_deref())?;
        }
        Command::Tune {
            table7: rows,
            design,
            replications,
            gens,
            seed,
            out,
        } => {
            let specs = table7();
            let instances = rows
                .iter()
                .map(|&r| Ok(generate(&ladder_row(specs.clone(), r)?)?))
                .collect::<Result<Vec<_>>>()?;
            let design = TaguchiDesign {
                kind: match design {
                    Design::Full => DesignKind::FullFactorial,
                    Design::L9 => DesignKind::L9,
                },
                replications,
                ..TaguchiDesign::default()
            };
            let base = NsgaConfig {
                generations: gens,
                seed,
                ..NsgaConfig::default()
            };
            let (cfg, result) = taguchi_tune(&design, &instances, base)?;
            for (f, effect) in design.factors.iter().zip(&result.main_effects) {
                println!(
                    "{:<16} S/N {:>9.4} {:>9.4} {:>9.4}",
                    f.name, effect[0], effect[1], effect[2]
                );
            }
            let text = serde_json::to_string_pretty(&cfg)?;
            println!("{text}");
            if let Some(out) = out {
                let body = serde_json::json!({ "config": cfg, "tuning": result });
                fs::write(&out, serde_json::to_string_pretty(&body)? + "\n")?;
            }
        }
        Command::Bench { plan, out } => {
            let text = fs::read_to_string(&plan).with_context(|| format!("reading {}", plan.display()))?;
            let plan = BenchmarkPlan::from_json(&text)?;
            let result = run_benchmark(&plan, workers_from_env())?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("results.json"), serde_json::to_string_pretty(&result)? + "\n")?;
            for p in write_csv(&result, &out)? {
                println!("wrote {}", p.display());
            }
            if result.has_failures() {
                eprintln!("some rows failed; see runtime.csv");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Report { input, format, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let result: BenchResult = serde_json::from_str(&text)?;
            let written = match format {
                Format::Csv => write_csv(&result, &out)?,
                Format::Svg => write_svg(&result, &out)?,
            };
            for p in written {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // Usage errors are fatal (1); 2 is reserved for partial bench failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
