use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use odeq_core::engine::{
    default_table, default_table_text, load_table, load_table_str, pushforward,
    solve_with_signature, LoadedTable, Match, TargetEntry,
};
use odeq_core::expr::{bar, Bindings};
use odeq_core::odeparse::{parse_ode, parse_rhs};
use odeq_core::symmetry::signature;
use odeq_core::{Error, Expr, VarId};

const OK: u8 = 0;
const VERIFIED_FALSE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const NO_MATCH: u8 = 3;
const NOT_INVERTIBLE: u8 = 4;
const TABLE_INCONSISTENT: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "odeq",
    version,
    about = "Equivalence of y'' = f(x, y, y') with known target equations"
)]
struct Cli {
    /// Target table file; the bundled table when absent.
    #[arg(long, global = true, env = "ODEQ_TABLE")]
    table: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a target equation and a verified point transformation onto it.
    Solve {
        /// The equation, e.g. "y'' = -y'^4 - y".
        #[arg(allow_hyphen_values = true)]
        ode: String,
        /// Report every verified branch of every matching entry.
        #[arg(long)]
        all_branches: bool,
    },
    /// Print the symmetry signature of an equation.
    Signature {
        #[arg(allow_hyphen_values = true)]
        ode: String,
    },
    /// Check that x̄ = XI, ȳ = ETA maps the equation onto TARGET.
    Verify {
        #[arg(allow_hyphen_values = true)]
        ode: String,
        #[arg(allow_hyphen_values = true)]
        xi: String,
        #[arg(allow_hyphen_values = true)]
        eta: String,
        /// Right-hand side of the target, or a full "y'' = ..." equation.
        #[arg(allow_hyphen_values = true)]
        target: String,
    },
    /// Recompute and check every entry of the table.
    TableCheck,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotInvertible => NOT_INVERTIBLE,
        Error::EntryInconsistent { .. } => TABLE_INCONSISTENT,
        _ => INPUT_ERROR,
    }
}

fn parse_equation(text: &str) -> Result<Expr, Error> {
    if text.contains('=') {
        parse_ode(text).map(|o| o.rhs)
    } else {
        parse_rhs(text)
    }
}

fn unbar(e: &Expr) -> Result<Expr, Error> {
    let mut b = Bindings::new();
    b.insert(VarId::XB, Expr::x());
    b.insert(VarId::YB, Expr::y());
    b.insert(VarId::PB, Expr::p());
    e.substitute(&b)
}

fn load(cli: &Cli) -> Result<LoadedTable, Error> {
    match &cli.table {
        Some(path) => load_table(path),
        None => load_table_str(default_table_text()),
    }
}

/// Explicit x̄, ȳ, p̄ in source coordinates when every relation is linear.
fn explicit(m: &Match) -> Option<[Expr; 3]> {
    let mut known = Bindings::new();
    let mut out = Vec::new();
    for v in [VarId::XB, VarId::YB, VarId::PB] {
        let value = m.branch.value(&v)?.substitute(&known).ok()?;
        known.insert(v, value.clone());
        out.push(value);
    }
    out.try_into().ok()
}

fn report(
    out: &mut impl Write,
    format: Format,
    m: &Match,
    entry: Option<&TargetEntry>,
) -> std::io::Result<()> {
    let values = explicit(m);
    match format {
        Format::Machine => {
            writeln!(out, "entry={}", m.entry_id)?;
            match &values {
                Some([x, y, p]) => {
                    writeln!(out, "xbar={x}")?;
                    writeln!(out, "ybar={y}")?;
                    writeln!(out, "pbar={p}")?;
                }
                None => {
                    for r in m.branch.relations.relations() {
                        writeln!(out, "relation={r}")?;
                    }
                }
            }
            writeln!(out, "verified=true")
        }
        Format::Human => {
            match entry {
                Some(e) => writeln!(out, "{} ({}): y'' = {}", e.id, e.name, e.rhs)?,
                None => writeln!(out, "{}", m.entry_id)?,
            }
            match &values {
                Some([x, y, p]) => {
                    writeln!(out, "  xbar = {x}")?;
                    writeln!(out, "  ybar = {y}")?;
                    writeln!(out, "  pbar = {p}")?;
                }
                None => {
                    for r in m.branch.relations.relations() {
                        writeln!(out, "  {r}")?;
                    }
                }
            }
            for n in &m.branch.note {
                writeln!(out, "  root choice: {n}")?;
            }
            writeln!(out, "  verified")
        }
    }
}

fn solve(cli: &Cli, ode: &str, all: bool) -> Result<u8, Error> {
    let f = parse_equation(ode)?;
    let table = match &cli.table {
        Some(_) => {
            let loaded = load(cli)?;
            for e in loaded.problems() {
                eprintln!("warning: skipping {e}");
            }
            loaded.entries
        }
        None => default_table(),
    };
    let sig = signature(&f)?;
    if !table.iter().any(|e| e.signature.matches(&sig)) {
        eprintln!("no signature match in table (signature {sig})");
        return Ok(NO_MATCH);
    }
    let found = solve_with_signature(&f, &sig, &table);
    if found.is_empty() {
        eprintln!("no verified transformation onto a table entry (signature {sig})");
        return Ok(NO_MATCH);
    }
    let shown = if all { found.len() } else { 1 };
    let mut out = std::io::stdout().lock();
    for (i, m) in found.iter().take(shown).enumerate() {
        if i > 0 {
            let _ = writeln!(out);
        }
        let entry = table.iter().find(|e| e.id == m.entry_id);
        let _ = report(&mut out, cli.format, m, entry);
    }
    Ok(OK)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Solve { ode, all_branches } => solve(cli, ode, *all_branches),
        Command::Signature { ode } => {
            let sig = signature(&parse_equation(ode)?)?;
            match cli.format {
                Format::Human => println!("{sig}"),
                Format::Machine => println!("signature={sig}"),
            }
            Ok(OK)
        }
        Command::Verify {
            ode,
            xi,
            eta,
            target,
        } => {
            let f = parse_equation(ode)?;
            let (xi, eta) = (parse_rhs(xi)?, parse_rhs(eta)?);
            let target = parse_equation(target)?;
            let image = pushforward(&f, &xi, &eta)?;
            let ok = image == bar(&target)?;
            match cli.format {
                Format::Human if ok => println!("verified: y'' = {target}"),
                Format::Human => println!("not verified: the image is y'' = {}", unbar(&image)?),
                Format::Machine => {
                    println!("image={}", unbar(&image)?);
                    println!("verified={ok}");
                }
            }
            Ok(if ok { OK } else { VERIFIED_FALSE })
        }
        Command::TableCheck => {
            let loaded = load(cli)?;
            for (id, problem) in &loaded.status {
                match (cli.format, problem) {
                    (Format::Human, None) => println!("{id}: ok"),
                    (Format::Human, Some(e)) => println!("{id}: {e}"),
                    (Format::Machine, None) => println!("{id}=ok"),
                    (Format::Machine, Some(e)) => println!("{id}=inconsistent {e}"),
                }
            }
            Ok(if loaded.is_consistent() {
                OK
            } else {
                TABLE_INCONSISTENT
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
