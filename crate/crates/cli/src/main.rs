//! `levelposet`: command-line access to the level poset computations.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 input or
//! usage error, 3 a series or index is not cd-expressible.

mod series_file;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levelposet::algebra::{GradedMatrixSeries, Polynomial, Word};
use levelposet::enumeration::{
    ab_index_interval, cd_series_from_ab, psi_truncation, verify_derivation_identity,
    DEFAULT_DEGREE_CAP,
};
use levelposet::matrix::{
    cyclic_classes, exponent, horizontal_double, is_indecomposable, is_primitive, vertical_double,
};
use levelposet::poset::{
    check_level_eulerian, check_level_half_eulerian, flag_f_matrix, flag_f_vector, flag_h_from_f,
    hasse_connected, CheckOptions, IntervalRef, RankSubset, VerificationReport,
};
use levelposet::shelling::{
    find_vertex_shelling_order, is_vertex_shelling_order, reduced_z_power_table, render_walk,
    render_z_table, VertexOrder,
};
use levelposet::{io, BinaryMatrix, Error, LevelPoset};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "levelposet",
    version,
    about = "Exact computations on level posets"
)]
struct Cli {
    /// Render as plain text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Matrix file (text 0/1 rows or JSON); `-` reads standard input.
    matrix: PathBuf,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    /// Bottom vertex, by label or 1-based index.
    #[arg(long)]
    from: String,
    /// Top vertex, by label or 1-based index.
    #[arg(long)]
    to: String,
    /// Rank difference of the interval.
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Debug)]
struct DegreeCap {
    /// Truncation degree.
    #[arg(short = 'N', long = "max-degree", env = "LEVELPOSET_MAX_DEGREE", default_value_t = DEFAULT_DEGREE_CAP)]
    max_degree: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Period, index, primitivity and cyclic classes.
    Analyze(Input),
    /// Level Eulerian check.
    Eulerian {
        #[command(flatten)]
        input: Input,
        /// Also evaluate the odd values of p.
        #[arg(long)]
        include_odd: bool,
    },
    /// Level half-Eulerian check.
    HalfEulerian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        include_odd: bool,
    },
    /// Vertex shelling order check or search.
    Shelling {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertices, least first.
        #[arg(long, conflicts_with = "search", required_unless_present = "search")]
        order: Option<String>,
        /// Find the lexicographically first shelling order.
        #[arg(long)]
        search: bool,
        /// Longest walk length to check; required for decomposable matrices.
        #[arg(long)]
        kmax: Option<usize>,
        /// Also print the reduced Z^1..Z^K tables.
        #[arg(long, value_name = "K")]
        tables: Option<usize>,
    },
    /// Flag f- and h-vectors of an interval, or one F_S matrix.
    Flag {
        #[command(flatten)]
        input: Input,
        /// Rank difference of the interval.
        #[arg(long)]
        rank: usize,
        /// Comma-separated rank set S inside 1..rank-1.
        #[arg(long, default_value = "")]
        subset: String,
        /// Bottom vertex; without --from/--to the F_S matrix is printed.
        #[arg(long, requires = "to")]
        from: Option<String>,
        /// Top vertex.
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// ab-index of one interval.
    Abindex {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        interval: IntervalArgs,
    },
    /// cd-index of one interval.
    Cdindex {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        interval: IntervalArgs,
    },
    /// Truncated cd-series matrix.
    Cdseries {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        cap: DegreeCap,
    },
    /// Check a series against the derivation identity.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        cap: DegreeCap,
        /// Series file to check instead of the computed truncation; its
        /// length sets the degree cap.
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Horizontal or vertical double of the matrix.
    Double {
        #[command(flatten)]
        input: Input,
        /// Horizontal double.
        #[arg(
            long,
            conflicts_with = "vertical",
            required_unless_present = "vertical"
        )]
        horizontal: bool,
        /// Vertical double.
        #[arg(long)]
        vertical: bool,
        /// Write to a file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Lib(Error::NotCdExpressible(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

struct Outcome {
    output: String,
    holds: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            holds: true,
        }
    }
}

fn read_matrix(input: &Input) -> Result<BinaryMatrix, CliError> {
    let raw = if input.matrix.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(&input.matrix)
            .map_err(|e| CliError::Usage(format!("{}: {e}", input.matrix.display())))?
    };
    Ok(io::parse_matrix(&raw)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect()
}

/// Big counts as JSON numbers when they fit, strings otherwise.
fn count_value(c: &impl ToString) -> Value {
    let s = c.to_string();
    match s.parse::<i64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn grid(cells: &[Vec<String>]) -> String {
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| format!("{s:<width$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn analyze(m: &BinaryMatrix, text: bool) -> Result<Outcome, CliError> {
    let poset = LevelPoset::new(m.clone());
    let p = poset.profile();
    let indecomposable = is_indecomposable(m);
    let classes = cyclic_classes(m)
        .ok()
        .map(|c| c.classes.iter().map(|cl| one_based(cl)).collect::<Vec<_>>());
    let hasse = hasse_connected(&poset).ok();
    let report = json!({
        "n": m.order(),
        "d": p.period,
        "gamma": p.index,
        "indecomposable": indecomposable,
        "primitive": is_primitive(m),
        "exponent": exponent(m),
        "cyclic_classes": classes,
        "hasse_connected": hasse,
    });
    if !text {
        return Ok(Outcome::ok(pretty(&report)));
    }
    let mut out = format!(
        "n = {}\nd = {}\nγ = {}\nindecomposable: {}\nprimitive: {}",
        m.order(),
        p.period,
        p.index,
        indecomposable,
        is_primitive(m)
    );
    if let Some(e) = exponent(m) {
        out.push_str(&format!("\nexponent = {e}"));
    }
    if let Some(cs) = classes {
        let rendered: Vec<String> = cs
            .iter()
            .enumerate()
            .map(|(q, c)| {
                let names: Vec<String> = c.iter().map(|v| m.label(v - 1)).collect();
                format!("C_{q} = {{{}}}", names.join(", "))
            })
            .collect();
        out.push_str(&format!("\ncyclic classes: {}", rendered.join(", ")));
    }
    if let Some(h) = hasse {
        out.push_str(&format!("\nhasse diagram connected: {h}"));
    }
    Ok(Outcome::ok(out))
}

fn verification(report: VerificationReport, name: &str, text: bool) -> Outcome {
    let holds = report.eulerian;
    let output = if text {
        let checked: Vec<String> = report.checked_p.iter().map(|p| p.to_string()).collect();
        let mut s = format!(
            "{name}: {}\nd = {}, γ = {}, p < {}\nchecked p = {}",
            if holds { "yes" } else { "no" },
            report.d,
            report.gamma,
            report.bound,
            checked.join(", ")
        );
        if let Some(p) = report.failed_p {
            s.push_str(&format!("\nfailed at p = {p}"));
        }
        s
    } else {
        pretty(&serde_json::to_value(&report).unwrap())
    };
    Outcome { output, holds }
}

fn parse_order(m: &BinaryMatrix, s: &str) -> Result<VertexOrder, CliError> {
    let seq = parse_list(s)
        .into_iter()
        .map(|t| m.resolve_vertex(t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexOrder::new(seq)?)
}

fn tables_value(
    m: &BinaryMatrix,
    order: &VertexOrder,
    k_max: usize,
) -> Result<(Value, String), CliError> {
    let mut json_tables = Vec::new();
    let mut text = Vec::new();
    for k in 1..=k_max {
        let t = reduced_z_power_table(m, order, k)?;
        let cells: Vec<Vec<String>> = t
            .iter()
            .map(|r| r.iter().map(render_walk).collect())
            .collect();
        json_tables.push(json!({ "k": k, "entries": cells }));
        text.push(format!("Z^{k} =\n{}", render_z_table(&t)));
    }
    Ok((Value::Array(json_tables), text.join("\n\n")))
}

fn shelling(
    m: &BinaryMatrix,
    order: Option<&str>,
    kmax: Option<usize>,
    tables: Option<usize>,
    text: bool,
) -> Result<Outcome, CliError> {
    let (order, mut report, holds) = match order {
        Some(s) => {
            let order = parse_order(m, s)?;
            let v = is_vertex_shelling_order(m, &order, kmax)?;
            let violation = v.violation.as_ref().map(|x| {
                json!({ "from": x.from + 1, "to": x.to + 1, "k": x.k, "count": count_value(&x.count) })
            });
            let report = json!({
                "order": one_based(order.sequence()),
                "shelling": v.shelling,
                "k_max": v.k_max,
                "violation": violation,
            });
            (Some(order), report, v.shelling)
        }
        None => {
            let found = find_vertex_shelling_order(m, kmax)?;
            let report = json!({
                "order": found.as_ref().map(|o| one_based(o.sequence())),
                "found": found.is_some(),
            });
            let holds = found.is_some();
            (found, report, holds)
        }
    };
    let mut table_text = None;
    if let (Some(k), Some(o), true) = (tables, order.as_ref(), holds) {
        let (v, t) = tables_value(m, o, k)?;
        report["tables"] = v;
        table_text = Some(t);
    }
    if !text {
        return Ok(Outcome {
            output: pretty(&report),
            holds,
        });
    }
    let mut out = match &order {
        Some(o) => {
            let names: Vec<String> = o.sequence().iter().map(|&v| m.label(v)).collect();
            format!(
                "order {}: {}",
                names.join(" < "),
                if holds {
                    "vertex shelling order"
                } else {
                    "not a vertex shelling order"
                }
            )
        }
        None => "no vertex shelling order".to_string(),
    };
    if let Some(v) = report.get("violation").filter(|v| !v.is_null()) {
        out.push_str(&format!(
            "\nZ^{} entry ({}, {}) has {} surviving walks",
            v["k"], v["from"], v["to"], v["count"]
        ));
    }
    if let Some(t) = table_text {
        out.push_str("\n\n");
        out.push_str(&t);
    }
    Ok(Outcome { output: out, holds })
}

fn parse_subset(s: &str, m: usize) -> Result<RankSubset, CliError> {
    let elements = parse_list(s)
        .into_iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("rank set entry {t:?} is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankSubset::new(m, &elements)?)
}

fn interval_value(m: &BinaryMatrix, iv: &IntervalRef) -> Value {
    json!({ "from": iv.from + 1, "to": iv.to + 1, "rank": iv.rank, "from_label": m.label(iv.from), "to_label": m.label(iv.to) })
}

fn resolve_interval(
    poset: &LevelPoset,
    from: &str,
    to: &str,
    rank: usize,
) -> Result<IntervalRef, CliError> {
    let m = poset.matrix();
    let (u, v) = (m.resolve_vertex(from)?, m.resolve_vertex(to)?);
    Ok(poset.interval(u, v, rank)?)
}

fn flag(
    m: &BinaryMatrix,
    rank: usize,
    subset: &str,
    ends: Option<(&str, &str)>,
    text: bool,
) -> Result<Outcome, CliError> {
    if rank == 0 {
        return Err(Error::ZeroRank.into());
    }
    let poset = LevelPoset::new(m.clone());
    let Some((from, to)) = ends else {
        let s = parse_subset(subset, rank - 1)?;
        let f = flag_f_matrix(&poset, &s);
        let cells: Vec<Vec<String>> = f
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        if text {
            return Ok(Outcome::ok(format!(
                "F_{{{}}} =\n{}",
                s.elements()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                grid(&cells)
            )));
        }
        let rows: Vec<Vec<Value>> = f
            .to_rows()
            .iter()
            .map(|r| r.iter().map(count_value).collect())
            .collect();
        return Ok(Outcome::ok(pretty(&json!({
            "rank": rank,
            "subset": s.elements(),
            "matrix": rows,
        }))));
    };
    let iv = resolve_interval(&poset, from, to, rank)?;
    let f = flag_f_vector(&poset, &iv)?;
    let h = flag_h_from_f(&f);
    let only = if subset.trim().is_empty() {
        None
    } else {
        Some(parse_subset(subset, rank - 1)?)
    };
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (s, fv) in f.iter() {
        if only.is_some_and(|o| o != s) {
            continue;
        }
        let hv = h.get(&s);
        let label = s
            .elements()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        lines.push(format!("S = {{{label}}}: f = {fv}, h = {hv}"));
        entries.push(json!({ "S": s.elements(), "f": count_value(fv), "h": count_value(hv) }));
    }
    if text {
        return Ok(Outcome::ok(lines.join("\n")));
    }
    Ok(Outcome::ok(pretty(&json!({
        "interval": interval_value(m, &iv),
        "flags": entries,
    }))))
}

fn word_map<W: Word>(p: &Polynomial<W>) -> Value {
    let map: serde_json::Map<String, Value> = p
        .to_word_map()
        .into_iter()
        .map(|(w, c)| (w, count_value(&c)))
        .collect();
    Value::Object(map)
}

fn index(
    m: &BinaryMatrix,
    args: &IntervalArgs,
    want_cd: bool,
    text: bool,
) -> Result<Outcome, CliError> {
    let poset = LevelPoset::new(m.clone());
    let iv = resolve_interval(&poset, &args.from, &args.to, args.rank)?;
    let ab = ab_index_interval(&poset, &iv)?;
    let cd = levelposet::algebra::ab_to_cd(&ab);
    if text {
        return if want_cd {
            Ok(Outcome::ok(cd.map_err(Error::from)?.to_power_string()))
        } else {
            Ok(Outcome::ok(ab.to_power_string()))
        };
    }
    let cd_value = match &cd {
        Ok(q) => word_map(q),
        Err(_) => json!("not_expressible"),
    };
    let report = json!({
        "interval": interval_value(m, &iv),
        "ab_index": word_map(&ab),
        "cd_index": cd_value,
    });
    match cd {
        Err(e) if want_cd => {
            // the JSON still goes out so the residual can be inspected
            println!("{}", pretty(&report));
            Err(Error::from(e).into())
        }
        _ => Ok(Outcome::ok(pretty(&report))),
    }
}

fn series_text<W: Word>(s: &GradedMatrixSeries<W>) -> String {
    (0..=s.cap())
        .map(|k| {
            let cells: Vec<Vec<String>> = (0..s.order())
                .map(|x| {
                    (0..s.order())
                        .map(|y| s.entry(k, x, y).to_power_string())
                        .collect()
                })
                .collect();
            format!("degree {k}:\n{}", grid(&cells))
        })
        .collect::<Vec<_>>()
        .join("\n\n")
}

fn cdseries(m: &BinaryMatrix, cap: usize, text: bool) -> Result<Outcome, CliError> {
    let poset = LevelPoset::new(m.clone());
    let series = cd_series_from_ab(&psi_truncation(&poset, cap))?;
    if text {
        return Ok(Outcome::ok(series_text(&series)));
    }
    Ok(Outcome::ok(pretty(&series_file::to_value(&series, "cd"))))
}

fn verify(
    m: &BinaryMatrix,
    cap: usize,
    series: Option<&PathBuf>,
    text: bool,
) -> Result<Outcome, CliError> {
    let poset = LevelPoset::new(m.clone());
    let candidate = match series {
        Some(path) => {
            let raw = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            series_file::parse(&raw, m.order()).map_err(CliError::Usage)?
        }
        None => psi_truncation(&poset, cap),
    };
    let r = verify_derivation_identity(&poset, &candidate);
    let failure = r.failure.as_ref().map(|f| {
        json!({ "degree": f.degree, "row": f.row + 1, "col": f.col + 1, "condition": f.condition })
    });
    let output = if text {
        match &r.failure {
            None => format!("derivation identity holds through degree {}", r.max_degree),
            Some(f) => format!(
                "derivation identity fails: {:?} condition at entry ({}, {}), degree {}",
                f.condition,
                f.row + 1,
                f.col + 1,
                f.degree
            ),
        }
    } else {
        pretty(&json!({ "passed": r.passed, "max_degree": r.max_degree, "failure": failure }))
    };
    Ok(Outcome {
        output,
        holds: r.passed,
    })
}

fn double(
    m: &BinaryMatrix,
    horizontal: bool,
    output: Option<&PathBuf>,
    text: bool,
) -> Result<Outcome, CliError> {
    let d = if horizontal {
        horizontal_double(m)
    } else {
        vertical_double(m)
    };
    let rendered = if text {
        io::to_text(&d)
    } else {
        io::to_json(&d)
    };
    match output {
        Some(path) => {
            fs::write(path, format!("{rendered}\n"))
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(rendered.trim_end().to_string())),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let text = cli.text;
    let opts = |include_odd| CheckOptions { include_odd };
    match &cli.command {
        Command::Analyze(input) => analyze(&read_matrix(input)?, text),
        Command::Eulerian { input, include_odd } => {
            let poset = LevelPoset::new(read_matrix(input)?);
            Ok(verification(
                check_level_eulerian(&poset, opts(*include_odd)),
                "eulerian",
                text,
            ))
        }
        Command::HalfEulerian { input, include_odd } => {
            let poset = LevelPoset::new(read_matrix(input)?);
            Ok(verification(
                check_level_half_eulerian(&poset, opts(*include_odd)),
                "half-eulerian",
                text,
            ))
        }
        Command::Shelling {
            input,
            order,
            search: _,
            kmax,
            tables,
        } => shelling(&read_matrix(input)?, order.as_deref(), *kmax, *tables, text),
        Command::Flag {
            input,
            rank,
            subset,
            from,
            to,
        } => {
            let ends = from.as_deref().zip(to.as_deref());
            flag(&read_matrix(input)?, *rank, subset, ends, text)
        }
        Command::Abindex { input, interval } => index(&read_matrix(input)?, interval, false, text),
        Command::Cdindex { input, interval } => index(&read_matrix(input)?, interval, true, text),
        Command::Cdseries { input, cap } => cdseries(&read_matrix(input)?, cap.max_degree, text),
        Command::Verify { input, cap, series } => {
            verify(&read_matrix(input)?, cap.max_degree, series.as_ref(), text)
        }
        Command::Double {
            input,
            horizontal,
            vertical: _,
            output,
        } => double(&read_matrix(input)?, *horizontal, output.as_ref(), text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if !out.output.is_empty() {
                println!("{}", out.output);
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("levelposet: {e}");
            ExitCode::from(e.code())
        }
    }
}
