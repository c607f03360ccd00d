use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use defset::design_analysis::{
    design_certificate_with, lemma6_bound, theorem5_bound, theorem7_bound, DesignBoundReport,
};
use defset::model::io::{parse_partial_design, parse_rectangle, serialize_candidate, serialize_rectangle};
use defset::model::{full_lambda, PartialDesign, PartialRectangle};
use defset::oracle::{
    self, EnumStatus, EnumerationBudget, OracleVerdict, PartialLatinSquare, VerdictStatus, DESIGN_BLOCK_GUARD,
    RECT_UNIT_GUARD,
};
use defset::rect_analysis::{corollary3_bound, lemma1_certificate_with, theorem2_bound, BoundVariant};
use defset::search::{self, DeletionOrder, FalsificationMonitor, SearchConfig, Target};
use defset::{AnalysisError, ParseError};

use crate::{
    BoundArgs, BudgetArgs, InputFile, IntersectArgs, Mode, OracleAction, OracleArgs, OrderArg, Params, SearchArgs,
    TablesArgs, VariantArg, VerifyArgs,
};

/// `print!`/`println!` that end the process quietly when stdout is a closed
/// pipe, as with `defset ... | head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = write!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    () => { out!("\n") };
    ($($arg:tt)*) => {{ out!($($arg)*); out!("\n") }};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    NotDefining = 1,
    Unknown = 2,
    Input = 3,
    Falsified = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_rect(path: &Path) -> Result<PartialRectangle> {
    let r = parse_rectangle(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })?;
    r.validate().map_err(|v| CliError::Usage(format!("{}: {v}", path.display())))?;
    Ok(r)
}

fn load_design(path: &Path) -> Result<(PartialDesign, u64)> {
    parse_partial_design(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn budget(args: &BudgetArgs, base: EnumerationBudget) -> Result<EnumerationBudget> {
    let b = EnumerationBudget {
        max_solutions: args.max_solutions.map_or(base.max_solutions, |c| c.0),
        max_nodes: args.max_nodes.map_or(base.max_nodes, |c| c.0),
        time_cap: args.time_cap.map_or(base.time_cap, |c| c.0.map(std::time::Duration::from_secs)),
    };
    if !b.is_bounded() {
        return Err(CliError::Usage("at least one of --max-solutions, --max-nodes, --time-cap must be finite".into()));
    }
    Ok(b)
}

fn guards(args: &BudgetArgs) -> (Option<usize>, Option<u64>) {
    if args.no_guard {
        (None, None)
    } else {
        (Some(RECT_UNIT_GUARD), Some(DESIGN_BLOCK_GUARD))
    }
}

fn target(p: &Params) -> Target {
    match (&p.rect, &p.design) {
        (Some(r), _) => Target::Rect { m: r[0], n: r[1], t: r[2] },
        (_, Some(d)) => Target::Design { v: d[0], k: d[1] },
        _ => unreachable!("clap requires one of --rect/--design"),
    }
}

fn print_verdict<T>(v: &OracleVerdict<T>, show: impl Fn(&T) -> String) -> Exit {
    outln!("verdict: {}", v.status.name());
    outln!("method: oracle");
    outln!("completions-found: {}", v.completions_found);
    for w in &v.witnesses {
        outln!("---");
        out!("{}", show(w));
    }
    match v.status {
        VerdictStatus::Defining => Exit::Success,
        VerdictStatus::NotDefining => Exit::NotDefining,
        VerdictStatus::BudgetExhausted => Exit::Unknown,
    }
}

/// Prints the monitor report when it saw anything to report; exit 4 on a
/// verbatim violation.
fn finish_monitor(mon: &FalsificationMonitor, to_stderr: bool, otherwise: Exit) -> Exit {
    if !mon.events.is_empty() || !to_stderr {
        let report = mon.report();
        if to_stderr {
            eprint!("{report}");
        } else {
            out!("{report}");
        }
    }
    if mon.verbatim_violations() > 0 {
        Exit::Falsified
    } else {
        otherwise
    }
}

pub fn verify(a: VerifyArgs) -> Result<Exit> {
    let b = budget(&a.budget, EnumerationBudget::verdict())?;
    let (rect_guard, design_guard) = guards(&a.budget);
    let certificate = matches!(a.mode, Mode::Certificate | Mode::Both);
    let exhaustive = matches!(a.mode, Mode::Oracle | Mode::Both);
    let mut mon = FalsificationMonitor::new();

    if let Some(path) = &a.input.rect {
        let d = load_rect(path)?;
        let (m, n, t) = d.dims();
        if !d.is_subset_of(&PartialRectangle::full(m, n, t).map_err(AnalysisError::from)?) {
            outln!("verdict: not-defining");
            outln!("reason: not contained in F_{{{m},{n},{t}}}");
            return Ok(Exit::NotDefining);
        }
        if certificate && t >= 2 {
            if let Some(c) = lemma1_certificate_with(&d, a.workers)? {
                outln!("verdict: not-defining");
                outln!("method: certificate");
                out!("{}", c.to_text()?);
                return Ok(Exit::NotDefining);
            }
        }
        if !exhaustive {
            outln!("verdict: unknown");
            outln!("method: certificate");
            return Ok(Exit::Unknown);
        }
        let v = oracle::is_defining_rect(&d, &b, a.workers, rect_guard)?;
        let exit = print_verdict(&v, |w| serialize_rectangle(w));
        if v.status == VerdictStatus::Defining {
            mon.observe_rect(&d, &format!("verify --rect {}", path.display()))?;
            return Ok(finish_monitor(&mon, false, exit));
        }
        return Ok(exit);
    }

    let path = a.input.design.as_ref().expect("clap requires an input");
    let (d, lambda) = load_design(path)?;
    let full = full_lambda(d.v(), d.k());
    if lambda != full {
        return Err(CliError::Usage(format!(
            "{}: lambda {lambda} differs from F({},{})'s {full}",
            path.display(),
            d.v(),
            d.k()
        )));
    }
    if certificate && d.k() >= 3 {
        if let Some(c) = design_certificate_with(&d, a.workers)? {
            outln!("verdict: not-defining");
            outln!("method: certificate");
            out!("{}", c.to_text()?);
            return Ok(Exit::NotDefining);
        }
    }
    if !exhaustive {
        outln!("verdict: unknown");
        outln!("method: certificate");
        return Ok(Exit::Unknown);
    }
    let v = oracle::is_defining_design(&d, &b, a.workers, design_guard)?;
    let exit = print_verdict(&v, serialize_candidate);
    if v.status == VerdictStatus::Defining {
        mon.observe_design(&d, &format!("verify --design {}", path.display()))?;
        return Ok(finish_monitor(&mon, false, exit));
    }
    Ok(exit)
}

fn design_line(b: &DesignBoundReport) -> String {
    format!(
        "design {} {} {} value {:.6} ceil {} blocks {} complement_fraction {:.6} vacuous {}",
        b.v,
        b.k,
        b.kind.name(),
        b.value,
        b.value_ceil,
        b.block_total,
        b.complement_fraction,
        u8::from(b.vacuous)
    )
}

pub fn bound(a: BoundArgs) -> Result<Exit> {
    match target(&a.params) {
        Target::Rect { m, n, t } => {
            let variants = match a.variant {
                VariantArg::Verbatim => vec![BoundVariant::Verbatim],
                VariantArg::Corrected => vec![BoundVariant::Corrected],
                VariantArg::All => vec![BoundVariant::Verbatim, BoundVariant::Corrected],
            };
            for v in variants {
                let r = theorem2_bound(m, n, t, v)?;
                let mut line = format!(
                    "rect {m} {n} {t} theorem2 {} value {:.6} ceil {} lambda_prime {:.6} e_star {:.6}",
                    v.name(),
                    r.lower_bound,
                    r.lower_bound_ceil,
                    r.lambda_prime,
                    r.e_star
                );
                if m == n && n == t {
                    let (_, ratio) = corollary3_bound(n, v)?;
                    let _ = write!(line, " ratio {ratio:.6}");
                }
                outln!("{line}");
            }
        }
        Target::Design { v, k } => {
            if k == 3 {
                outln!("{}", design_line(&theorem5_bound(v)?));
            }
            outln!("{}", design_line(&lemma6_bound(v, k)?));
            outln!("{}", design_line(&theorem7_bound(v, k)?));
        }
    }
    Ok(Exit::Success)
}

fn observe_outcomes(mon: &mut FalsificationMonitor, report: &search::SearchReport) -> Result<()> {
    for o in report.restarts.iter().filter(|o| o.is_verified()) {
        let replay = format!(
            "search {} seed {} restart {} order {}\n{}",
            report.target,
            report.config.seed,
            o.restart,
            report.config.deletion_order.name(),
            o.defining_set.to_text()
        );
        match &o.defining_set {
            search::Subject::Rect(r) => mon.observe_rect(r, &replay)?,
            search::Subject::Design(d) => mon.observe_design(d, &replay)?,
        }
    }
    Ok(())
}

pub fn search(a: SearchArgs) -> Result<Exit> {
    let config = SearchConfig {
        seed: a.seed,
        restarts: a.restarts,
        deletion_order: match a.order {
            OrderArg::Random => DeletionOrder::Random,
            OrderArg::SizeGreedy => DeletionOrder::SizeGreedy,
        },
        budget: budget(&a.budget, EnumerationBudget::verdict())?,
    };
    let target = target(&a.params);
    let (rect_guard, design_guard) = guards(&a.budget);
    match target {
        Target::Rect { m, n, t } if rect_guard.is_some_and(|g| m * n * t > g) => {
            return Err(AnalysisError::TooLarge { vertices: m * n * t, limit: RECT_UNIT_GUARD }.into());
        }
        Target::Design { v, k } if design_guard.is_some_and(|g| defset::numeric::binomial(v as u64, k as u64) > g) => {
            return Err(AnalysisError::TooLarge { vertices: v, limit: DESIGN_BLOCK_GUARD as usize }.into());
        }
        _ => {}
    }
    let report = search::minimize_defining_set(target, &config, a.workers)?;
    out!("{}", report.to_text(a.trace));
    let mut mon = FalsificationMonitor::new();
    observe_outcomes(&mut mon, &report)?;
    let otherwise = if report.best.is_some() { Exit::Success } else { Exit::Unknown };
    Ok(finish_monitor(&mon, false, otherwise))
}

pub fn tables(a: TablesArgs) -> Result<Exit> {
    let b = budget(&a.budget, EnumerationBudget::verdict())?;
    let config = SearchConfig { seed: a.seed, restarts: a.restarts, deletion_order: DeletionOrder::Random, budget: b };
    let mut mon = FalsificationMonitor::new();
    let mut searched = false;
    let tsv = if a.rect {
        let max_n = a.max_n.expect("clap requires --max-n");
        let mut best = BTreeMap::new();
        for n in 2..=max_n.min(a.search_up_to) {
            let report = search::minimize_defining_set(Target::Rect { m: n, n, t: n }, &config, a.workers)?;
            observe_outcomes(&mut mon, &report)?;
            searched = true;
            if let Some(o) = report.best() {
                best.insert(n, o.size);
            }
        }
        search::rect_table(max_n, &best)?.1
    } else if a.design {
        let max_v = a.max_v.expect("clap requires --max-v");
        let mut best = BTreeMap::new();
        for &k in &a.ks {
            for v in (k + 1).max(4)..=max_v.min(a.search_up_to) {
                if defset::numeric::binomial(v as u64, k as u64) > DESIGN_BLOCK_GUARD {
                    continue;
                }
                let report = search::minimize_defining_set(Target::Design { v, k }, &config, a.workers)?;
                observe_outcomes(&mut mon, &report)?;
                searched = true;
                if let Some(o) = report.best() {
                    best.insert((v, k), o.size);
                }
            }
        }
        search::design_table(&a.ks, max_v, &best)?.1
    } else {
        return Err(CliError::Usage("choose --rect --max-n N or --design --max-v V".into()));
    };
    out!("{tsv}");
    if searched {
        eprint!("{}", mon.report());
    }
    Ok(finish_monitor(&mon, true, Exit::Success))
}

fn enum_exit(status: EnumStatus) -> Exit {
    match status {
        EnumStatus::Exhausted(_) => Exit::Unknown,
        _ => Exit::Success,
    }
}

fn status_name(status: EnumStatus) -> &'static str {
    match status {
        EnumStatus::Complete => "complete",
        EnumStatus::SolutionCap => "solution-cap",
        EnumStatus::Exhausted(oracle::Exhaustion::Nodes) => "budget-exhausted nodes",
        EnumStatus::Exhausted(oracle::Exhaustion::Time) => "budget-exhausted time",
    }
}

fn emit(action: OracleAction, records: Vec<String>, status: EnumStatus) -> Exit {
    match action {
        OracleAction::Count => {
            outln!("count {}", records.len());
            outln!("status {}", status_name(status));
        }
        OracleAction::Stream => {
            let body = records.join("---\n");
            out!("{body}");
            eprintln!("status {} count {}", status_name(status), records.len());
        }
    }
    enum_exit(status)
}

pub fn oracle(a: OracleArgs) -> Result<Exit> {
    let b = budget(&a.budget, EnumerationBudget::enumerate_all())?;
    let (rect_guard, design_guard) = guards(&a.budget);
    let InputFile { rect, design } = &a.input;
    if let Some(path) = rect {
        let d = load_rect(path)?;
        if a.up_to_isomorphism {
            if d.size() > 0 || !matches!(a.action, OracleAction::Count) {
                return Err(CliError::Usage(
                    "--up-to-isomorphism is a census: count on an empty rectangle only".into(),
                ));
            }
            let (m, n, t) = d.dims();
            let (count, status) = oracle::rect_census(m, n, t, true, &b, a.workers)?;
            outln!("count {count}");
            outln!("status {}", status_name(status));
            outln!("note classes under row, column and symbol permutations");
            return Ok(enum_exit(status));
        }
        let e = oracle::enumerate_rect_completions(&d, &b, a.workers, rect_guard)?;
        let records = e.solutions.iter().map(|r| serialize_rectangle(r)).collect();
        return Ok(emit(a.action, records, e.status));
    }
    let path = design.as_ref().expect("clap requires an input");
    if a.up_to_isomorphism {
        return Err(CliError::Usage("--up-to-isomorphism applies to rectangles".into()));
    }
    let (d, file_lambda) = load_design(path)?;
    let e = oracle::enumerate_design_candidates(&d, a.lambda.unwrap_or(file_lambda), &b, a.workers, design_guard)?;
    let records = e.solutions.iter().map(serialize_candidate).collect();
    Ok(emit(a.action, records, e.status))
}

fn latin_text(p: &PartialLatinSquare) -> String {
    let mut out = String::new();
    for r in 1..=p.n() {
        let row: Vec<String> = (1..=p.n()).map(|c| p.get(r, c).map_or(".".into(), |s| s.to_string())).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn intersect(a: IntersectArgs) -> Result<Exit> {
    let d = load_rect(&a.rect)?;
    let b = budget(&a.budget, EnumerationBudget::verdict())?;
    let r = search::intersection_check(&d, &b)?;
    outln!(
        "intersection n {} squares {} violations {} exhausted {}",
        r.n,
        r.squares_checked,
        r.violations.len(),
        r.exhausted
    );
    for (l, p, count) in &r.violations {
        outln!("---");
        out!("L\n{}D∩L completions {count}\n{}", latin_text(l), latin_text(p));
    }
    Ok(if !r.violations.is_empty() {
        Exit::NotDefining
    } else if r.exhausted > 0 {
        Exit::Unknown
    } else {
        Exit::Success
    })
}
