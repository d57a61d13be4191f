use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skolemlab::io::{run_report, Command, Common, Construct, Spectra, Suite};
use skolemlab::skolem::CertifyMode;

/// Exact experiments with rational functions over valued fields.
#[derive(Parser, Debug)]
#[command(name = "skolemlab", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Scene file, or preset name a..e.
    #[arg(long, global = true, default_value = "a")]
    scene: String,
    /// RNG seed; defaults to the scene's seed. SKOLEMLAB_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit with code 3 when some outcome is unknown.
    #[arg(long, global = true)]
    strict: bool,
    /// Print a human summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a rational function at a point of K.
    Eval {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        at: String,
    },
    /// Lower envelope of a polynomial or rational function, as JSON.
    Minval {
        #[arg(long, alias = "phi")]
        poly: String,
    },
    /// Local polynomial of f at an element t.
    Locpoly {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        at: String,
    },
    /// Compare v(f(a)) with the envelope prediction.
    Exactness {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        at: String,
    },
    /// Pointwise Skolem-closure membership of psi in an ideal.
    SkCheck {
        #[arg(long)]
        psi: String,
        /// Comma-separated generators.
        #[arg(long)]
        ideal: String,
        /// Comma-separated points; otherwise samples of the domain.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Decide whether phi maps the valuation ring into itself.
    Certify {
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    #[command(subcommand)]
    Construct(ConstructCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Spectra(SpectraCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Auto,
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Profile function peaking at c.
    Lemz {
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// t(1+x^4)/((1+tx^2)(t+x^2)).
    Theta,
    /// phi1 + theta(phi1/phi2) phi2.
    Rho {
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// tx against (x^2, t^2) on a non-discrete valuation domain.
    Vx2t2 {
        #[arg(long)]
        samples: Option<usize>,
        /// Replace the ideal under test.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// x against (x^2, m) on a pseudovaluation domain.
    PvdX2m {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Random profile-function constructions.
    Lemz {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SpectraCmd {
    /// Finite intersection property of the characteristic sets.
    Fip {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        points: String,
    },
    /// Characteristic sets, value ideals and the rho cross-check.
    Probe {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn to_command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Eval { phi, at } => Command::Eval { phi, at },
        Cmd::Minval { poly } => Command::Minval { poly },
        Cmd::Locpoly { poly, at } => Command::Locpoly { poly, at },
        Cmd::Exactness { poly, at } => Command::Exactness { poly, at },
        Cmd::SkCheck {
            psi,
            ideal,
            points,
            samples,
        } => Command::SkCheck {
            psi,
            ideal,
            points,
            samples,
        },
        Cmd::Certify { phi, depth, mode } => Command::Certify {
            phi,
            depth,
            mode: match mode {
                Mode::Exhaustive => CertifyMode::Exhaustive,
                Mode::Auto => CertifyMode::Auto,
            },
        },
        Cmd::Construct(c) => Command::Construct(match c {
            ConstructCmd::Lemz { eps, delta, c } => Construct::Lemz { eps, delta, c },
            ConstructCmd::Theta => Construct::Theta,
            ConstructCmd::Rho { phi1, phi2 } => Construct::Rho { phi1, phi2 },
        }),
        Cmd::Verify(v) => Command::Verify(match v {
            VerifyCmd::Vx2t2 { samples, ideal } => Suite::Vx2t2 { samples, ideal },
            VerifyCmd::PvdX2m { samples } => Suite::PvdX2m { samples },
            VerifyCmd::Lemz { trials } => Suite::Lemz { trials },
        }),
        Cmd::Spectra(s) => Command::Spectra(match s {
            SpectraCmd::Fip { ideal, points } => Spectra::Fip { ideal, points },
            SpectraCmd::Probe {
                ideal,
                points,
                samples,
            } => Spectra::Probe {
                ideal,
                points,
                samples,
            },
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut seed = cli.global.seed;
    if let Ok(s) = std::env::var("SKOLEMLAB_SEED") {
        match s.trim().parse() {
            Ok(v) => seed = Some(v),
            Err(_) => {
                eprintln!("error: SKOLEMLAB_SEED must be an unsigned integer");
                return ExitCode::from(2);
            }
        }
    }
    let common = Common {
        scene: cli.global.scene,
        seed,
        strict: cli.global.strict,
        pretty: cli.global.pretty,
    };
    let out = run_report(&common, &to_command(cli.cmd));
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit as u8)
}
