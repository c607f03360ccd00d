//! `defset`: verify, bound, search and enumerate defining sets of full
//! balanced rectangles and full designs.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "defset", version, about = "Defining sets of full balanced rectangles and full designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a partial object is a defining set of the full one.
    Verify(VerifyArgs),
    /// Evaluate the lower-bound formulas.
    Bound(BoundArgs),
    /// Greedy minimisation of a defining set with seeded restarts.
    Search(SearchArgs),
    /// Bound-versus-construction comparison tables as TSV.
    Tables(TablesArgs),
    /// Count or stream every completion of a partial object.
    Oracle(OracleArgs),
    /// Check that D∩L defines L for every Latin square L.
    Intersect(IntersectArgs),
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct InputFile {
    /// Partial rectangle file.
    #[arg(long, value_name = "FILE")]
    rect: Option<std::path::PathBuf>,
    /// Partial design file.
    #[arg(long, value_name = "FILE")]
    design: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Params {
    /// Rectangle parameters.
    #[arg(long, num_args = 3, value_names = ["M", "N", "T"])]
    rect: Option<Vec<usize>>,
    /// Design parameters.
    #[arg(long, num_args = 2, value_names = ["V", "K"])]
    design: Option<Vec<usize>>,
}

/// Caps for the exhaustive search. `none` lifts a cap.
#[derive(Args, Clone)]
struct BudgetArgs {
    #[arg(long, value_name = "N|none", value_parser = parse_cap)]
    max_solutions: Option<Cap>,
    /// Search nodes per first-level branch.
    #[arg(long, value_name = "N|none", value_parser = parse_cap)]
    max_nodes: Option<Cap>,
    /// Seconds.
    #[arg(long, value_name = "SECS|none", value_parser = parse_cap)]
    time_cap: Option<Cap>,
    /// Lift the desk-scale size guard (m·n·t ≤ 64, C(v,k) ≤ 40).
    #[arg(long)]
    no_guard: bool,
}

#[derive(Clone, Copy)]
struct Cap(Option<u64>);

fn parse_cap(s: &str) -> Result<Cap, String> {
    if s == "none" {
        return Ok(Cap(None));
    }
    s.parse().map(|v| Cap(Some(v))).map_err(|_| format!("expected a number or `none`, got `{s}`"))
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Certificate,
    Oracle,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputFile,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum VariantArg {
    Verbatim,
    Corrected,
    All,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    params: Params,
    /// Which Theorem 2 variant to print for rectangles.
    #[arg(long, value_enum, default_value_t = VariantArg::All)]
    variant: VariantArg,
}

#[derive(Copy, Clone, ValueEnum)]
enum OrderArg {
    Random,
    SizeGreedy,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, value_enum, default_value_t = OrderArg::Random)]
    order: OrderArg,
    /// Print every deletion attempt.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct TablesArgs {
    /// Square rectangles F_{n,n,n}, 2 ≤ n ≤ MAX_N.
    #[arg(long, requires = "max_n", conflicts_with = "design")]
    rect: bool,
    #[arg(long)]
    max_n: Option<usize>,
    /// Full designs F(v,k), k < v ≤ MAX_V.
    #[arg(long, requires = "max_v")]
    design: bool,
    #[arg(long)]
    max_v: Option<usize>,
    /// Block sizes for the design table.
    #[arg(long = "k", value_delimiter = ',', default_value = "3")]
    ks: Vec<usize>,
    /// Fill best_search by searching every row up to this n (rectangles)
    /// or with C(v,k) ≤ 40 up to this v (designs). 0 skips the search.
    #[arg(long, default_value_t = 0)]
    search_up_to: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum OracleAction {
    Count,
    Stream,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    action: OracleAction,
    #[command(flatten)]
    input: InputFile,
    /// Pair multiplicity for designs; defaults to the file's value.
    #[arg(long)]
    lambda: Option<u64>,
    /// Count classes under row/column/symbol permutations instead
    /// (empty rectangles only; changes the count).
    #[arg(long)]
    up_to_isomorphism: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct IntersectArgs {
    /// A defining set of F_{n,n,n}, n ≤ 3.
    #[arg(long, value_name = "FILE")]
    rect: std::path::PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Bound(a) => commands::bound(a),
        Command::Search(a) => commands::search(a),
        Command::Tables(a) => commands::tables(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Intersect(a) => commands::intersect(a),
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::Exit::Input as u8)
        }
    }
}
