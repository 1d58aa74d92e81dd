use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperpell_cli::parse::Poly;
use hyperpell_cli::{run, Command, Report, RunConfig, Verdict};

/// Polynomial Pell and almost-Pell equations A^2 - D*B^2 = F.
///
/// Polynomials are written in X (and optionally the parameter t) with
/// explicit '*' and '^', e.g. "X*(X^7-X^3-1)" or "X^6+X+t".
#[derive(Parser, Debug)]
#[command(name = "hyperpell", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Continued fraction steps (default 64 over Q, 16 over Q(t))
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Bound on |l| in the Jacobian search (default 2d+10)
    #[arg(long, global = true)]
    l_bound: Option<i64>,
    /// Height bound for `scan`
    #[arg(long, global = true, default_value_t = 3)]
    height_bound: u64,
    /// Largest order tried by `order`
    #[arg(long, global = true, default_value_t = 12)]
    order_bound: u64,
    /// Per-coordinate box for `relation`
    #[arg(long, global = true, default_value_t = 6)]
    box_bound: i64,
    /// Substitute t = T0 before solving
    #[arg(long, global = true, value_name = "T0", allow_hyphen_values = true)]
    t0: Option<String>,
    /// Emit the JSON report
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Partial quotients and convergents of sqrt(D)
    Cfrac {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
    },
    /// Solve A^2 - D*B^2 = 1
    Pell {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
    },
    /// Solve A^2 - D*B^2 = F
    AlmostPell {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
        #[arg(long = "F", allow_hyphen_values = true)]
        f: String,
    },
    /// Relations among the points above the roots of F and inf+ - inf-
    Relation {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
        #[arg(long = "F", allow_hyphen_values = true)]
        f: String,
    },
    /// Order of [inf+ - inf-], or of [(x, sqrt D(x)) - inf-] with --point
    Order {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Specialise a family at all t0 of bounded height
    Scan {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: String,
        #[arg(long = "F", default_value = "1", allow_hyphen_values = true)]
        f: String,
    },
    /// Check the built-in worked identities
    VerifyExamples,
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Sub::Cfrac { d } => Command::Cfrac { d },
        Sub::Pell { d } => Command::Pell { d },
        Sub::AlmostPell { d, f } => Command::AlmostPell { d, f },
        Sub::Relation { d, f } => Command::Relation { d, f },
        Sub::Order { d, point } => Command::Order { d, point },
        Sub::Scan { d, f } => Command::Scan { d, f },
        Sub::VerifyExamples => Command::VerifyExamples,
    };
    let o = cli.opts;
    let t0 = match o.t0.as_deref().map(Poly::parse) {
        None => None,
        Some(Ok(Poly::Q(p))) if p.is_constant() => Some(p.coeff(0)),
        _ => {
            let mut r = Report::new(command.name());
            r.entry("error", serde_json::json!({ "message": "--t0 must be a rational number" }));
            return emit(&r.finish(Verdict::InputError), o.json);
        }
    };
    let cfg = RunConfig {
        max_steps: o.max_steps,
        l_bound: o.l_bound,
        height_bound: o.height_bound,
        order_bound: o.order_bound,
        box_bound: o.box_bound,
        t0,
    };
    emit(&run(&command, &cfg), o.json)
}
