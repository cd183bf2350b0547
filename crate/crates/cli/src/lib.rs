//! Batch command-line front end for `lpq-core`.
//!
//! Exit codes: 0 success (valid, holds), 1 invalid labeling or a failed
//! check, 2 usage or range error, 3 search budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use lpq_core::document::{LabelingDocument, ReportDocument, ReportWitness};
use lpq_core::graph::{torus, ProductKind};
use lpq_core::labeling::{validate, ConstraintParams, Labeling};
use lpq_core::patterns::{
    concatenated_strong_pattern, exists_cycle_pattern, l21_cycle_pattern, lift_diagonal,
    semigroup_decompose, validate_pattern, ConditionVector, Pattern, STRONG_PATTERN_7,
};
use lpq_core::solver::{SolveBudget, Solver};
use lpq_core::theorems::{
    descent_terminal, lambda_cartesian, lambda_strong, verify_l2211_periodicity,
    verify_lemma_cartesian_local, verify_lemma_strong_local, Certificate, LambdaResult,
    LemmaReport, TerminalClass,
};
use lpq_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lpq", version, about = "L(p,q)-labelings of oriented cycles and their products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Product {
    Cartesian,
    Strong,
}

impl From<Product> for ProductKind {
    fn from(p: Product) -> Self {
        match p {
            Product::Cartesian => ProductKind::Cartesian,
            Product::Strong => ProductKind::Strong,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Which {
    CartesianLocal,
    StrongLocal,
    L2211,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    /// 024-blocks closed by 0314 or 13
    L21,
    /// 0246135 and 02461357 blocks
    Strong,
    /// exhaustive search under the product's condition vector
    Search,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    /// Compute exactly by search, including below the theorem ranges.
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value_t = SolveBudget::default().max_nodes)]
    budget_nodes: u64,
    /// Split the search across threads.
    #[arg(long)]
    parallel: bool,
}

impl SolveArgs {
    fn solver(&self) -> Solver {
        Solver::new(SolveBudget::nodes(self.budget_nodes)).parallel(self.parallel)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// λ of C_m ∘ C_n with a certificate.
    Lambda {
        #[arg(long, value_enum)]
        product: Product,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build the periodic labeling available for C_m ∘ C_n.
    Construct {
        #[arg(long, value_enum)]
        product: Product,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Check a JSON labeling document.
    Verify { file: PathBuf },
    /// Run the exhaustive lemma checks.
    Lemmas {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        #[arg(long, default_value_t = 28)]
        d_max: usize,
        #[arg(long)]
        parallel: bool,
        /// Report file (JSON array of reports).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or search for a cyclic pattern and check it.
    Pattern {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "strong")]
        product: Product,
        #[arg(long, default_value_t = 6)]
        max_span: u32,
    },
    /// Write t = a*m + b*n with a, b >= 0.
    Decompose {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Repeated row reduction of C_m ∘ C_n.
    Descent {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Failure carrying its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted {
                last_resolved_k: Some(k),
                ..
            } => Fail(EXIT_BUDGET, format!("{e}; no labeling exists at k = {k}")),
            Error::BudgetExhausted { .. } => Fail(EXIT_BUDGET, e.to_string()),
            Error::Internal(_) => Fail(EXIT_INVALID, e.to_string()),
            _ => Fail(EXIT_USAGE, e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail(EXIT_USAGE, e.to_string())
    }
}

type CmdResult = Result<i32, Fail>;

/// Runs the CLI against the process's standard streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Fail(code, message)) => {
            let _ = writeln!(io.err, "error: {message}");
            code
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> CmdResult {
    match command {
        Command::Lambda {
            product,
            m,
            n,
            p,
            q,
            solve,
            out,
            format,
        } => lambda(product.into(), m, n, ConstraintParams::new(p, q), &solve, out, format, io),
        Command::Construct {
            product,
            m,
            n,
            out,
            format,
        } => construct(product.into(), m, n, out, format, io),
        Command::Verify { file } => verify(file, io),
        Command::Lemmas {
            which,
            d_max,
            parallel,
            out,
        } => lemmas(which, d_max, parallel, out, io),
        Command::Pattern {
            family,
            length,
            product,
            max_span,
        } => pattern(family, length, product.into(), max_span, io),
        Command::Decompose { t, m, n } => {
            match semigroup_decompose(t, m, n)? {
                Some(d) => writeln!(io.out, "{t} = {}*{m} + {}*{n}", d.a, d.b)?,
                None => writeln!(io.out, "{t} is not in S({m}, {n})")?,
            }
            Ok(EXIT_OK)
        }
        Command::Descent { m, n } => {
            let t = descent_terminal(m, n)?;
            let path: Vec<String> = t.path.iter().map(|(a, b)| format!("({a},{b})")).collect();
            writeln!(io.out, "{}", path.join(" -> "))?;
            let class = match t.class {
                TerminalClass::Gcd(d) => format!("Gcd(d={d})"),
                TerminalClass::KPlus1(k) => format!("KPlus1(k={k})"),
                TerminalClass::KPlus2(k) => format!("KPlus2(k={k})"),
            };
            writeln!(io.out, "terminal ({}, {}): {class}", t.terminal.0, t.terminal.1)?;
            Ok(EXIT_OK)
        }
    }
}

fn emit_labeling(
    kind: Option<ProductKind>,
    f: &Labeling,
    params: ConstraintParams,
    pattern: Option<Pattern>,
    out: Option<PathBuf>,
    format: Option<Format>,
    io: &mut Io,
) -> Result<(), Fail> {
    let doc = LabelingDocument::new(kind, f, params, pattern);
    match format {
        Some(Format::Json) => writeln!(io.out, "{}", doc.to_json())?,
        Some(Format::Grid) => write!(io.out, "{}", f.grid_string())?,
        None => {}
    }
    if let Some(path) = out {
        fs::write(&path, doc.to_json() + "\n")?;
        writeln!(io.out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn report_doc(r: &LemmaReport, kind: Option<ProductKind>) -> ReportDocument {
    ReportDocument {
        check: r.check.clone(),
        holds: r.holds,
        count: r.count,
        witness: r.counterexample.as_ref().map(|f| {
            ReportWitness::Labeling(LabelingDocument::new(kind, f, ConstraintParams::L21, None))
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn lambda(
    kind: ProductKind,
    m: usize,
    n: usize,
    params: ConstraintParams,
    solve: &SolveArgs,
    out: Option<PathBuf>,
    format: Option<Format>,
    io: &mut Io,
) -> CmdResult {
    if params != ConstraintParams::L21 {
        if !solve.solve {
            return Err(Fail(
                EXIT_USAGE,
                "values other than L(2,1) are only available with --solve".into(),
            ));
        }
        let g = torus(kind, m, n)?;
        let w = solve.solver().exact_lambda(&g, params)?;
        writeln!(io.out, "Exact {}", w.lambda)?;
        writeln!(io.out, "exact search for L({},{}) on C_{m} {kind} C_{n}", params.p, params.q)?;
        emit_labeling(Some(kind), &w.witness, params, None, out, format, io)?;
        return Ok(EXIT_OK);
    }
    let solver = solve.solver();
    let solver = solve.solve.then_some(&solver);
    let result: LambdaResult = match kind {
        ProductKind::Cartesian => lambda_cartesian(m, n, solver)?,
        ProductKind::Strong => lambda_strong(m, n, solver)?,
    };
    writeln!(io.out, "{}", result.value)?;
    writeln!(io.out, "{}", result.note)?;
    match result.certificate {
        Certificate::ConstructedLabeling {
            labeling, pattern, ..
        } => {
            writeln!(io.out, "certificate: labeling at budget {} (validated)", labeling.k_budget())?;
            emit_labeling(Some(kind), &labeling, params, pattern, out, format, io)?;
        }
        Certificate::CitedUpperPlusVerifiedLower {
            cited,
            local_lemma,
            descent,
        } => {
            writeln!(io.out, "upper bound (cited): {cited}")?;
            writeln!(
                io.out,
                "lower bound: {} holds = {} over {} labelings; descent ends at {:?}",
                local_lemma.check, local_lemma.holds, local_lemma.count, descent.terminal
            )?;
            if let Some(path) = out {
                fs::write(&path, report_doc(&local_lemma, Some(kind)).to_json() + "\n")?;
                writeln!(io.out, "wrote {}", path.display())?;
            }
        }
        Certificate::IntervalCited { cited } => {
            writeln!(io.out, "interval (cited): {cited}")?;
            if out.is_some() {
                writeln!(io.err, "no labeling certificate exists for an interval result; nothing written")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The pattern whose diagonal lift labels `C_m ∘ C_n`, if one of the known
/// families applies.
fn construction_for(kind: ProductKind, m: usize, n: usize) -> Result<Pattern, Fail> {
    let d = gcd(m, n);
    let found = match kind {
        ProductKind::Cartesian if d >= 3 => Some(l21_cycle_pattern(d)?),
        ProductKind::Strong if m.is_multiple_of(7) && n.is_multiple_of(7) => Some(Pattern::new(STRONG_PATTERN_7.to_vec())?),
        ProductKind::Strong => concatenated_strong_pattern(d).ok(),
        _ => None,
    };
    found.ok_or_else(|| {
        Fail(
            EXIT_USAGE,
            format!("no periodic construction for C_{m} {kind} C_{n} (gcd {d})"),
        )
    })
}

fn construct(
    kind: ProductKind,
    m: usize,
    n: usize,
    out: Option<PathBuf>,
    format: Option<Format>,
    io: &mut Io,
) -> CmdResult {
    if m < 3 || n < 3 {
        return Err(Fail(EXIT_USAGE, format!("cycles need length >= 3, got ({m}, {n})")));
    }
    let pattern = construction_for(kind, m, n)?;
    let (g, f) = lift_diagonal(&pattern, m, n, kind)?;
    let bad = validate(&g, &f, ConstraintParams::L21)?;
    writeln!(
        io.out,
        "C_{m} {kind} C_{n}: lift of {pattern} at budget {}, {} violations",
        f.k_budget(),
        bad.len()
    )?;
    emit_labeling(Some(kind), &f, ConstraintParams::L21, Some(pattern), out, format, io)?;
    Ok(if bad.is_empty() { EXIT_OK } else { EXIT_INVALID })
}

fn verify(file: PathBuf, io: &mut Io) -> CmdResult {
    let text = fs::read_to_string(&file)?;
    let doc = LabelingDocument::from_json(&text)?;
    let graph = doc.graph()?;
    if let Some((i, j, c)) = doc
        .labels
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &c)| (i, j, c)))
        .find(|&(_, _, c)| c > doc.k)
    {
        writeln!(io.out, "cell ({i}, {j}) has color {c} above the budget {}", doc.k)?;
        return Ok(EXIT_INVALID);
    }
    let f = doc.labeling()?;
    let violations = validate(&graph, &f, doc.params())?;
    let (_, cols) = graph.layout();
    for v in &violations {
        let (u, w) = v.pair;
        writeln!(
            io.out,
            "{v}; cells ({}, {}) and ({}, {})",
            u / cols,
            u % cols,
            w / cols,
            w % cols
        )?;
    }
    if violations.is_empty() {
        writeln!(
            io.out,
            "valid {}-L({},{})-labeling of {} vertices",
            doc.k,
            doc.p,
            doc.q,
            graph.n_vertices()
        )?;
        Ok(EXIT_OK)
    } else {
        writeln!(io.out, "invalid: {} violations", violations.len())?;
        Ok(EXIT_INVALID)
    }
}

fn lemmas(which: Which, d_max: usize, parallel: bool, out: Option<PathBuf>, io: &mut Io) -> CmdResult {
    let solver = Solver::default().parallel(parallel);
    let mut reports = Vec::new();
    if matches!(which, Which::CartesianLocal | Which::All) {
        let r = verify_lemma_cartesian_local(&solver)?;
        reports.push(report_doc(&r, None));
    }
    if matches!(which, Which::StrongLocal | Which::All) {
        let r = verify_lemma_strong_local(&solver)?;
        reports.push(report_doc(&r, None));
    }
    if matches!(which, Which::L2211 | Which::All) {
        let found = verify_l2211_periodicity(d_max)?;
        let lengths: Vec<usize> = found.keys().copied().collect();
        let expected: Vec<usize> = (3..=d_max).filter(|d| d % 7 == 0).collect();
        writeln!(io.out, "l2211-periodicity: feasible lengths {lengths:?}")?;
        reports.push(ReportDocument {
            check: "l2211-periodicity".into(),
            holds: lengths == expected,
            count: lengths.len() as u64,
            witness: found.values().next().cloned().map(ReportWitness::Pattern),
        });
    }
    for r in &reports {
        writeln!(io.out, "{}: holds={} count={}", r.check, r.holds, r.count)?;
    }
    if let Some(path) = out {
        let body: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| serde_json::from_str(&r.to_json()).expect("report JSON round-trips"))
            .collect();
        fs::write(&path, serde_json::Value::Array(body).to_string() + "\n")?;
        writeln!(io.out, "wrote {}", path.display())?;
    }
    Ok(if reports.iter().all(|r| r.holds) {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn pattern(family: Family, length: usize, kind: ProductKind, max_span: u32, io: &mut Io) -> CmdResult {
    let cv = ConditionVector::for_kind(kind);
    let found = match family {
        Family::L21 => Some(l21_cycle_pattern(length)?),
        Family::Strong => Some(concatenated_strong_pattern(length)?),
        Family::Search => exists_cycle_pattern(length, max_span, &cv)?,
    };
    let Some(p) = found else {
        writeln!(
            io.out,
            "no pattern of length {length} with span <= {max_span} satisfies {:?}",
            cv.gaps()
        )?;
        return Ok(EXIT_INVALID);
    };
    let violations = validate_pattern(&p, &cv);
    writeln!(io.out, "{p}")?;
    writeln!(
        io.out,
        "length {}, span {}, canonical {}, {} violations against {:?}",
        p.len(),
        p.span(),
        p.canonical(),
        violations.len(),
        cv.gaps()
    )?;
    Ok(if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}
