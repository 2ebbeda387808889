//! `grpd`: validate VB-groupoid spec files and verify the algebra built on
//! top of them — frame-bundle groupoid laws, the `GL(l,k)` 2-action with its
//! change-of-coordinates laws, duality, and the associated-bundle round
//! trips — all in exact rational arithmetic.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use grpd_cli::emit::{self, Format};
use grpd_cli::spec;
use grpd_core::action::{self, sample_frames};
use grpd_core::report::Report;
use grpd_core::suite;
use grpd_core::vbg::VBGroupoid;

#[derive(Parser)]
#[command(name = "grpd", version, about = "Exact verification of VB-groupoids and their frame bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a spec file and report every violated axiom instance.
    Validate { spec: PathBuf },
    /// Print the core fiber dimension and core-anchor matrix per object.
    Core { spec: PathBuf },
    /// Sample s-bisection frames and print them as rational grids tagged
    /// with their arrow.
    Frames {
        spec: PathBuf,
        #[arg(long, env = "GRPD_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long = "per-arrow", default_value_t = 8)]
        per_arrow: usize,
    },
    /// Run a verification suite against the instance.
    Check {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
        suite: SuiteChoice,
        #[arg(long, env = "GRPD_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = FormatChoice::Text)]
        format: FormatChoice,
    },
    /// Write the dual VB-groupoid as an explicit spec file.
    Dual {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteChoice {
    Groupoid,
    Gl2,
    Action,
    Duality,
    Roundtrip,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatChoice {
    Text,
    Machine,
}

impl From<FormatChoice> for Format {
    fn from(f: FormatChoice) -> Format {
        match f {
            FormatChoice::Text => Format::Text,
            FormatChoice::Machine => Format::Machine,
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes, like other line-oriented
    // tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, spec::SpecError> {
    match cli.command {
        Command::Validate { spec: path } => {
            let parsed = spec::parse_file(&path)?;
            let v = spec::build(&parsed)?;
            let violations = v.validate();
            if violations.is_empty() {
                println!(
                    "{}: valid VB-groupoid of rank ({},{}) over {} objects, {} arrows",
                    parsed.name,
                    v.core_rank(),
                    v.base_rank(),
                    v.base().object_count(),
                    v.base().arrow_count()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{}: {} violation(s)", parsed.name, violations.len());
                for viol in &violations {
                    println!("  [{}] {}: {}", viol.law, viol.location, viol.detail);
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Core { spec: path } => {
            let (name, v) = spec::load(&path)?;
            println!("{name}: rank ({},{})", v.core_rank(), v.base_rank());
            for x in 0..v.base().object_count() {
                let (core, rho) = v.core(x);
                println!(
                    "object {}: core dim {}, basis {}, anchor {}",
                    v.base().object_id(x),
                    core.dim(),
                    core.basis(),
                    rho
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Frames { spec: path, seed, per_arrow } => {
            let (name, v) = spec::load(&path)?;
            let sp = sample_frames(&v, seed, per_arrow, 0);
            for frames_at_g in &sp.frames {
                for f in frames_at_g {
                    println!("arrow {}: {}", v.base().arrow_id(f.arrow), f.phi);
                }
            }
            let report = suite::sample_integrity(&v, &name, &sp);
            print!("{}", emit::emit(&report, Format::Text));
            Ok(exit_for(&report))
        }
        Command::Check { spec: path, suite: which, seed, trials, format } => {
            let (name, v) = spec::load(&path)?;
            let report = run_suite(&v, &name, which, seed, trials);
            print!("{}", emit::emit(&report, format.into()));
            Ok(exit_for(&report))
        }
        Command::Dual { spec: path, output } => {
            let (name, v) = spec::load(&path)?;
            let dual = v.dual().map_err(|e| spec::SpecError::Malformed(format!("{e}")))?;
            spec::save(&dual, &format!("{name}_dual"), &output)?;
            println!("wrote dual of {name} to {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(report: &Report) -> ExitCode {
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_suite(v: &VBGroupoid, name: &str, which: SuiteChoice, seed: u64, trials: u64) -> Report {
    let mut total = Report::new("check", name, seed);
    let (l, k) = (v.core_rank(), v.base_rank());
    if matches!(which, SuiteChoice::Groupoid | SuiteChoice::All) {
        total.merge(suite::frame_groupoid_laws(v, name, trials, seed));
    }
    if matches!(which, SuiteChoice::Gl2 | SuiteChoice::All) {
        total.merge(suite::gl2_laws(l, k, trials, seed));
        total.merge(suite::crossed_module_laws(l, k, 2, trials.div_ceil(2), seed));
    }
    if matches!(which, SuiteChoice::Action | SuiteChoice::All) {
        total.merge(action::verify_2action(v, name, trials, seed));
        total.merge(action::principality_check(v, name, trials, seed));
        total.merge(suite::coords_laws(v, name, trials, seed));
    }
    if matches!(which, SuiteChoice::Duality | SuiteChoice::All) {
        total.merge(suite::duality_laws(v, name, trials, seed));
    }
    if matches!(which, SuiteChoice::Roundtrip | SuiteChoice::All) {
        let sp = sample_frames(v, seed, 8, 4);
        total.merge(suite::sample_integrity(v, name, &sp));
        total.merge(action::associated_vb(v, name, &sp, 20, seed));
        total.merge(action::roundtrip_frames(v, name, &sp, seed));
        total.merge(suite::f_bijection_laws(v, name, trials, seed));
    }
    total
}
