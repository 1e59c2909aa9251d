//! `weil`: character tables, explicit matrices, factorizations and
//! verification suites for the Weil representation of Sp(2n, q).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use weil_core::config::Config;
use weil_core::factorize::{factor, verify_factorization};
use weil_core::matrix_rep::{eta_closed, eta_det, j_matrix, s_matrix, t_matrix, weil_values, LagrangianFrame};
use weil_core::symplectic::{GroupElement, SympSpace};
use weil_core::table::CharacterTable;
use weil_core::verify::{self, Suite, VerifyOptions};
use weil_core::{Error, Exec};

#[derive(Parser)]
#[command(name = "weil", version, about = "Exact Weil representation of Sp(2n, q) for odd q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Field order, an odd prime power.
    #[arg(long)]
    q: u64,
    /// Half the dimension of V.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Monic modulus for GF(q), comma-separated coefficients from the constant term up.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// JSON file overriding moduli and size limits.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run batch work on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Which {
    S,
    T,
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Weil character values on every conjugacy class.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The matrix of s(g), t(g) or j in the standard frame.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// Group element: a JSON matrix of field indices, or "1" / "-1".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        g: String,
        #[arg(long, value_enum, default_value_t = Which::T)]
        which: Which,
    },
    /// η(g) by both formulas, with the Weil character values.
    Eta {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// A minimal factorization of g into transvections.
    Factor {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Run an invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Context {
    space: SympSpace,
    config: Config,
    exec: Exec,
}

impl Context {
    fn new(c: &Common) -> Result<Self, Failure> {
        let config = match &c.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let field = config.field(c.q, c.modulus.clone())?;
        let space = SympSpace::standard(&field, c.n)?;
        let exec = if c.sequential { Exec::Sequential } else { Exec::Parallel };
        Ok(Context { space, config, exec })
    }

    fn element(&self, text: &str) -> Result<GroupElement, Failure> {
        match text.trim() {
            "1" => Ok(self.space.identity()),
            "-1" => Ok(self.space.minus_one()),
            s => {
                let rows: Vec<Vec<u32>> =
                    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("malformed g: {e}")))?;
                Ok(self.space.element_from_indices(&rows)?)
            }
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Table { common, format } => {
            let ctx = Context::new(&common)?;
            let table = CharacterTable::build(&ctx.space, ctx.config.group_cap(), ctx.exec)?;
            Ok(match format {
                Format::Csv => table.to_csv(),
                Format::Json | Format::Text => table.to_json(),
            })
        }
        Command::Matrix { common, g, which } => {
            let ctx = Context::new(&common)?;
            let g = ctx.element(&g)?;
            let frame = LagrangianFrame::standard(&ctx.space);
            let m = match which {
                Which::S => s_matrix(&g, &frame)?,
                Which::T => t_matrix(&g, &frame)?,
                Which::J => j_matrix(&frame),
            };
            let wstar: Vec<_> = m.order.iter().map(|&i| indices(frame.wstar_vector(i))).collect();
            Ok(pretty(&json!({ "order": m.order, "wstar": wstar, "entries": m.entries })))
        }
        Command::Eta { common, g } => {
            let ctx = Context::new(&common)?;
            let g = ctx.element(&g)?;
            let frame = LagrangianFrame::standard(&ctx.space);
            let det = eta_det(&g, &frame)?;
            let closed = eta_closed(&g);
            Ok(pretty(&json!({
                "eta_det": det,
                "eta_closed": closed,
                "agree": det == closed,
                "values": weil_values(&g),
            })))
        }
        Command::Factor { common, g } => {
            let ctx = Context::new(&common)?;
            let g = ctx.element(&g)?;
            let seq = factor(&g)?;
            if !verify_factorization(&g, &seq)?.ok() {
                return Err(Failure::Verification(pretty(&seq)));
            }
            Ok(pretty(&seq))
        }
        Command::Verify { common, suite, seed, samples, format } => {
            let ctx = Context::new(&common)?;
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions {
                seed,
                samples,
                exec: ctx.exec,
                group_cap: ctx.config.group_cap(),
                brute_dim_limit: ctx.config.brute_dim_limit(),
            };
            let report = verify::run(&ctx.space, suite, &opts)?;
            let text = match format {
                Format::Json => pretty(&json!({ "ok": report.ok(), "report": report })),
                Format::Text | Format::Csv => report.to_text(),
            };
            if report.ok() {
                Ok(text)
            } else {
                Err(Failure::Verification(text))
            }
        }
    }
}

fn indices(v: &[weil_core::FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.index()).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            println!("{}", out.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
