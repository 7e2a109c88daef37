use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use risuav::experiment::config::{McSettings, PointOverrides};
use risuav::experiment::{self, mc_deviation, ExperimentConfig, OutputFormat};
use risuav::Error;

#[derive(Parser)]
#[command(name = "risuav", version, about = "Performance of a multi-RIS-assisted UAV relay link")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured sweep.
    Sweep(RunArgs),
    /// Split a total power budget between the hops (total_power sweeps).
    Optimize(RunArgs),
    /// Compare closed forms against Monte-Carlo at every sweep point.
    McValidate(RunArgs),
    /// Print the derived channel constants of a configuration.
    ShowDerived(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Monte-Carlo seed (enables Monte-Carlo together with --trials).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Config { .. } => 2,
        Error::Io(_) => 3,
        _ => 4,
    }
}

fn load(args: &RunArgs, force_mc: bool) -> Result<ExperimentConfig, Error> {
    let mut cfg = experiment::load_config(&args.config)?;
    if force_mc || args.trials.is_some() || args.seed.is_some() {
        let mut mc = cfg.mc.unwrap_or_default();
        if let Some(t) = args.trials {
            mc.trials = t;
        }
        if let Some(s) = args.seed {
            mc.seed = s;
        }
        if let Some(n) = args.threads {
            mc.streams = n;
        }
        cfg.mc = Some(mc);
        cfg.validate()?;
    }
    Ok(cfg)
}

fn write_out(bytes: &[u8], out: Option<&Path>) -> Result<(), Error> {
    use std::io::Write;
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(bytes)?;
            o.flush()?;
            Ok(())
        }
    }
}

fn format_of(f: Format) -> OutputFormat {
    match f {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    }
}

fn show_derived(args: &RunArgs) -> Result<(), Error> {
    let cfg = experiment::load_config(&args.config)?;
    let d = cfg.derive(&PointOverrides::default())?;
    let mut entries: Vec<(String, f64)> = Vec::new();
    for (i, (f, s)) in d.fits.iter().zip(&d.specs).enumerate() {
        entries.push((format!("ris{i}.n_elements"), s.n_elements as f64));
        entries.push((format!("ris{i}.a"), f.a));
        entries.push((format!("ris{i}.b"), f.b));
        entries.push((format!("ris{i}.path_loss"), f.path_loss));
        entries.push((format!("ris{i}.path_loss_db"), risuav::channel::linear_to_db(f.path_loss)));
        if d.distances.is_some() {
            entries.push((format!("ris{i}.d1"), s.d1));
            entries.push((format!("ris{i}.d2"), s.d2));
        }
    }
    entries.push(("a2g.loss".into(), d.loss));
    entries.push(("a2g.k0".into(), d.k0));
    entries.push(("a2g.k0_db".into(), risuav::channel::linear_to_db(d.k0)));
    if let Some(p) = d.p_los {
        entries.push(("a2g.p_los".into(), p));
    }
    if let Some(dist) = &d.distances {
        entries.push(("a2g.r0".into(), dist.r0));
    }
    let bytes = match args.format {
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in &entries {
                s.push_str(&format!("{k},{}\n", experiment::emit::format_float(*v)));
            }
            s.into_bytes()
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                entries.into_iter().map(|(k, v)| (k, serde_json::json!(v))).collect();
            let mut s = serde_json::to_string_pretty(&map).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
    };
    write_out(&bytes, args.out.as_deref())
}

fn run(cli: Cli) -> Result<(), Error> {
    let args = match &cli.command {
        Command::Sweep(a) | Command::Optimize(a) | Command::McValidate(a) | Command::ShowDerived(a) => a,
    };
    if let Some(n) = args.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Sweep(a) => {
            let cfg = load(a, false)?;
            let r = experiment::run_sweep(&cfg)?;
            experiment::emit(&r, &cfg, format_of(a.format), a.out.as_deref())
        }
        Command::Optimize(a) => {
            let cfg = load(a, false)?;
            let r = experiment::run_optimize(&cfg)?;
            experiment::emit(&r, &cfg, format_of(a.format), a.out.as_deref())
        }
        Command::McValidate(a) => {
            let cfg = load(a, true)?;
            let r = experiment::run_sweep(&cfg)?;
            if a.out.is_some() {
                experiment::emit(&r, &cfg, format_of(a.format), a.out.as_deref())?;
            }
            let d = mc_deviation(&r, &cfg.modulation.build()?);
            let trials = cfg.mc.map_or(McSettings::default().trials, |m| m.trials);
            eprintln!("points: {}  trials/point: {trials}", d.rows);
            println!("max |op - mc| / se: {:.3}", d.op_sigmas);
            println!("max |asep - mc| / se: {:.3}", d.asep_sigmas);
            println!("max |capacity - mc|: {:.3e} bit/s/Hz", d.capacity_abs);
            Ok(())
        }
        Command::ShowDerived(a) => show_derived(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
