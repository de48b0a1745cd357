use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use thermowork::error::{Error, Result};
use thermowork::matfile::{read_system, write_system};
use thermowork::protocol::run_protocol;
use thermowork::rabi::{work_report_with, RabiParams, SolveOptions, DEFAULT_FOCK_CAP};
use thermowork::sweep::{format_float, parse_list, parse_outputs, run_sweep, write_csv, SweepConfig};
use thermowork::thermo::Temperature;
use thermowork::toymodel::{toy_closed_form, toy_to_matrices, ToyModelParams};

/// Free-energy bookkeeping for switched couplings between quantum systems.
/// Energies are in units of the oscillator frequency.
#[derive(Parser)]
#[command(name = "thermowork", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the Rabi-model coupling and write a CSV table.
    RabiSweep(SweepArgs),
    /// Work report for a single Rabi-model point.
    RabiPoint(PointArgs),
    /// Run the switching protocol on Hamiltonians read from a matrix file.
    ProtocolRun(ProtocolArgs),
    /// Evaluate the diagonal toy model.
    Toy(ToyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    g_max: Option<f64>,
    #[arg(long)]
    g_steps: Option<usize>,
    /// Comma-separated detunings (2 Delta - omega) / omega.
    #[arg(long, allow_hyphen_values = true)]
    detunings: Option<String>,
    /// Comma-separated subset of W, eta, eta_A, eta_B, entanglement, E0, hI.
    #[arg(long)]
    outputs: Option<String>,
    #[arg(long)]
    fock_cap: Option<usize>,
    /// Cross-check every point against exact diagonalization.
    #[arg(long)]
    oracle_check: bool,
    /// Output path; standard output when absent or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("gap").required(true).args(["half_gap", "detuning"])))]
struct PointArgs {
    /// Delta in H = Delta sigma_z + n + g sigma_x (a + a^dagger).
    #[arg(long, allow_negative_numbers = true)]
    half_gap: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    detuning: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, default_value_t = DEFAULT_FOCK_CAP)]
    fock_cap: usize,
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("temperature").required(true).args(["beta", "zero_temperature"])))]
struct ProtocolArgs {
    file: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    zero_temperature: bool,
}

#[derive(Args)]
struct ToyArgs {
    /// Comma-separated levels of A, starting at 0.
    #[arg(long)]
    levels_a: String,
    #[arg(long)]
    levels_b: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// G, the interaction energy of |A_0 B_0>.
    #[arg(long, allow_negative_numbers = true)]
    coupling: f64,
    #[arg(long)]
    epsilon: f64,
    /// Also write the materialized Hamiltonians as a matrix file.
    #[arg(long)]
    emit_matrices: Option<PathBuf>,
    /// Also run the generic protocol on the materialized Hamiltonians.
    #[arg(long)]
    via_protocol: bool,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_float)
}

fn rabi_sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(&std::fs::read_to_string(path)?)?;
    }
    if let Some(v) = args.g_min {
        cfg.g_min = v;
    }
    if let Some(v) = args.g_max {
        cfg.g_max = v;
    }
    if let Some(v) = args.g_steps {
        cfg.g_steps = v;
    }
    if let Some(v) = &args.detunings {
        cfg.detunings = parse_list(v)?;
    }
    if let Some(v) = &args.outputs {
        cfg.outputs = parse_outputs(v)?;
    }
    if let Some(v) = args.fock_cap {
        cfg.fock_cap = v;
    }
    cfg.oracle_check |= args.oracle_check;
    let rows = run_sweep(&cfg)?;
    match args.out.as_deref() {
        Some(p) if p.as_os_str() != "-" => {
            let mut w = BufWriter::new(File::create(p)?);
            write_csv(&cfg, &rows, &mut w)?;
            w.flush()?;
        }
        _ => write_csv(&cfg, &rows, io::stdout().lock())?,
    }
    Ok(())
}

fn rabi_point(args: PointArgs) -> Result<()> {
    let params = match (args.half_gap, args.detuning) {
        (Some(d), _) => RabiParams::new(d, args.g)?,
        (None, Some(delta)) => RabiParams::from_detuning(delta, args.g)?,
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let opts = SolveOptions { fock_cap: args.fock_cap, oracle_check: args.oracle_check, precision_bits: None };
    let r = work_report_with(params, &opts)?;
    let lines = [
        ("half_gap", format_float(params.half_gap())),
        ("detuning", format_float(params.detuning())),
        ("g", format_float(params.coupling())),
        ("E0", format_float(r.e0)),
        ("W", format_float(r.work)),
        ("W_A", format_float(r.work_a)),
        ("W_B", format_float(r.work_b)),
        ("h_A", format_float(r.h_a)),
        ("h_B", format_float(r.h_b)),
        ("hI", format_float(r.h_i)),
        ("eta", opt(r.eta)),
        ("eta_A", opt(r.eta_a)),
        ("eta_B", opt(r.eta_b)),
        ("entanglement_bits", format_float(r.entanglement_bits)),
        ("n_fock", r.n_fock.to_string()),
        ("method", format!("{:?}", r.method)),
    ];
    print_report(&lines);
    Ok(())
}

fn protocol_run(args: ProtocolArgs) -> Result<()> {
    let sys = read_system(&args.file)?;
    let t = match args.beta {
        Some(beta) => Temperature::finite(beta)?,
        None => Temperature::Zero,
    };
    let l = run_protocol(&sys, t)?;
    let lines = [
        ("F1", format_float(l.f1)),
        ("F2", format_float(l.f2)),
        ("F3", format_float(l.f3)),
        ("F4", format_float(l.f4)),
        ("hI_t2", format_float(l.h_i_t2)),
        ("hI_t3", format_float(l.h_i_t3)),
        ("delta_F_A", format_float(l.delta_f_a)),
        ("delta_F_B", format_float(l.delta_f_b)),
        ("defect", format_float(l.defect)),
        ("W", format_float(l.work)),
        ("W_local", format_float(l.local_work)),
        ("eta", opt(l.eta)),
        ("eta_local", opt(l.eta_local)),
    ];
    print_report(&lines);
    Ok(())
}

fn toy(args: ToyArgs) -> Result<()> {
    let p = ToyModelParams::new(
        parse_list(&args.levels_a)?,
        parse_list(&args.levels_b)?,
        args.n,
        args.m,
        args.coupling,
        args.epsilon,
    )?;
    let (w, eta) = toy_closed_form(&p);
    let mut lines = vec![("W", format_float(w)), ("eta", format_float(eta))];
    if args.emit_matrices.is_some() || args.via_protocol {
        let sys = toy_to_matrices(&p, p.levels_a().len(), p.levels_b().len())?;
        if let Some(path) = &args.emit_matrices {
            write_system(&sys, path)?;
        }
        if args.via_protocol {
            let l = run_protocol(&sys, Temperature::Zero)?;
            lines.push(("W_protocol", format_float(l.work)));
            lines.push(("eta_protocol", opt(l.eta)));
        }
    }
    print_report(&lines);
    Ok(())
}

fn print_report(lines: &[(&str, String)]) {
    let mut out = io::stdout().lock();
    for (k, v) in lines {
        let _ = writeln!(out, "{k} = {v}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::RabiSweep(a) => rabi_sweep(a),
        Command::RabiPoint(a) => rabi_point(a),
        Command::ProtocolRun(a) => protocol_run(a),
        Command::Toy(a) => toy(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else {
        3
    }
}
