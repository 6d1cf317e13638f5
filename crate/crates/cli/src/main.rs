use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3_sixteen::classify::{self, CandidateRow, ReportFormat};
use k3_sixteen::elliptic::{self, WeierstrassModel};
use k3_sixteen::lattice::{named_lattice, GramLattice};
use k3_sixteen::lefschetz::{self, ChainPoint};
use serde::Serialize;

const GOLDEN: &str = include_str!("../golden/published_rows.csv");

#[derive(Parser)]
#[command(name = "k3sixteen", version, about = "Order-16 non-symplectic automorphisms of K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate candidate invariant rows for a Picard rank.
    Classify {
        #[arg(long, default_value = "all")]
        rank: RankArg,
        #[arg(long, default_value = "on")]
        geometry: Switch,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Compare against the bundled table; exit 1 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Compare the holomorphic Lefschetz residual with the linear relations.
    Verify {
        #[arg(long, default_value_t = 16)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = classify::MAX_K)]
        max_k: u32,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Exit 1 if any counterexample is found.
        #[arg(long)]
        check: bool,
    },
    /// Singular fibers of y^2 = x^3 + a(t)x + b(t).
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Invariants of a lattice expression such as "U(2)+D4+E8".
    Lattice {
        expr: String,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Exponent pairs along a chain of invariant rational curves.
    Chain {
        /// Starting pair "j,k" with j + k = 1 mod order.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 16)]
        order: u32,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RankArg {
    #[value(name = "6")]
    Six,
    #[value(name = "14")]
    Fourteen,
    All,
}

impl RankArg {
    fn ranks(self) -> &'static [u32] {
        match self {
            RankArg::Six => &[6],
            RankArg::Fourteen => &[14],
            RankArg::All => &[6, 14],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

/// Failure of a subcommand: `Usage` maps to exit 2, `Mismatch` to exit 1.
enum Failure {
    Usage(String),
    Mismatch(String),
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// `(rank, invariants, Picard lattice, status, tabulated N)`.
type Key = (u32, [u32; 7], String, String, Option<u32>);

fn golden_rows() -> BTreeSet<Key> {
    let mut rdr = csv::Reader::from_reader(GOLDEN.as_bytes());
    rdr.records()
        .map(|rec| {
            let rec = rec.expect("bundled golden file is valid csv");
            let num = |i: usize| rec[i].parse::<u32>().expect("bundled golden file has integers");
            (
                num(0),
                [num(1), num(2), num(3), num(4), num(5), num(6), num(7)],
                rec[8].to_string(),
                rec[9].to_string(),
                rec[10].parse().ok(),
            )
        })
        .collect()
}

fn row_key(row: &CandidateRow) -> Key {
    (row.rank(), row.invariants(), row.picard.name.clone(), format!("{:?}", row.status), row.table_n)
}

fn check_rows(rank: u32, rows: &[CandidateRow], geometry: bool) -> Result<(), String> {
    let expected: BTreeSet<Key> = golden_rows().into_iter().filter(|k| k.0 == rank).collect();
    let got: BTreeSet<Key> = rows.iter().map(row_key).collect();
    let missing: Vec<_> = expected.difference(&got).collect();
    let extra: Vec<_> = if geometry { got.difference(&expected).collect() } else { Vec::new() };
    if missing.is_empty() && extra.is_empty() {
        return Ok(());
    }
    let mut msg = format!("rank {rank}: table mismatch");
    for k in missing {
        msg.push_str(&format!("\n  missing {:?} {} {}", k.1, k.2, k.3));
    }
    for k in extra {
        msg.push_str(&format!("\n  unexpected {:?} {} {}", k.1, k.2, k.3));
    }
    Err(msg)
}

fn run_classify(rank: RankArg, geometry: Switch, format: Format, check: bool) -> Result<String, Failure> {
    let geometry = matches!(geometry, Switch::On);
    let mut docs = Vec::new();
    let mut mismatches = Vec::new();
    for &r in rank.ranks() {
        let rows = classify::classify(r, geometry).map_err(usage)?;
        if check {
            if let Err(m) = check_rows(r, &rows, geometry) {
                mismatches.push(m);
            }
        }
        docs.push(classify::report(r, &rows, format.into()));
    }
    let out = match (format, docs.len()) {
        (_, 1) => docs.pop().unwrap(),
        (Format::Json, _) => format!("[\n{}]\n", docs.iter().map(|d| d.trim_end()).collect::<Vec<_>>().join(",\n")),
        (Format::Csv, _) => {
            let mut out = docs[0].clone();
            for d in &docs[1..] {
                out.extend(d.lines().skip(1).map(|l| format!("{l}\n")));
            }
            out
        }
        (Format::Text, _) => docs.join("\n"),
    };
    if mismatches.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Mismatch(mismatches.join("\n")))
    }
}

fn run_verify(order: u32, bound: u32, max_k: u32, format: Format, check: bool) -> Result<String, Failure> {
    let report = lefschetz::verify_equivalence(order, bound, max_k).map_err(usage)?;
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
        _ => {
            let mut s = format!(
                "order {}  bound {}  k <= {}\nchecked {}  residual zero {}  counterexamples {}\n",
                report.order,
                report.bound,
                report.max_k,
                report.checked,
                report.residual_zero,
                report.counterexamples.len()
            );
            for (counts, k) in &report.counterexamples {
                s.push_str(&format!("  counts {counts:?}  k {k}\n"));
            }
            s.push_str(if report.holds() { "equivalent\n" } else { "NOT equivalent\n" });
            s
        }
    };
    if check && !report.holds() {
        print!("{out}");
        return Err(Failure::Mismatch(format!("{} counterexamples", report.counterexamples.len())));
    }
    Ok(out)
}

fn run_fiber(a: &str, b: &str, format: Format) -> Result<String, Failure> {
    let w = WeierstrassModel::parse(a, b).map_err(usage)?;
    let reports = elliptic::fiber_analysis(&w).map_err(usage)?;
    Ok(match format {
        Format::Json => elliptic::fiber_json(&w, &reports) + "\n",
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["place", "type", "count", "euler"]).expect("in-memory write");
            for r in &reports {
                let (place, count) = match &r.place {
                    elliptic::PlaceLabel::Finite(x) => (x.to_string(), 1),
                    elliptic::PlaceLabel::Infinity => ("inf".to_string(), 1),
                    elliptic::PlaceLabel::Cluster(d) => ("cluster".to_string(), *d),
                };
                wtr.write_record([place, r.kodaira.to_string(), count.to_string(), r.euler.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => elliptic::fiber_text(&w, &reports),
    })
}

#[derive(Serialize)]
struct LatticeSummary {
    expr: String,
    rank: usize,
    determinant: String,
    signature: (usize, usize),
    discriminant_group: Vec<String>,
    a: Option<usize>,
    genus: Option<u32>,
    rational_curves: Option<u32>,
    fixed_locus: Option<String>,
}

fn summarise(expr: &str, l: &GramLattice) -> Result<LatticeSummary, Failure> {
    let signature = l.signature().map_err(usage)?;
    let group = l.discriminant_group().map_err(usage)?;
    let a = l.two_elementary_a().ok();
    let fixed = l.nikulin_fixed_locus().ok();
    Ok(LatticeSummary {
        expr: expr.to_string(),
        rank: l.rank(),
        determinant: l.determinant().to_string(),
        signature,
        discriminant_group: group.iter().map(ToString::to_string).collect(),
        a,
        genus: fixed.as_ref().and_then(|f| f.genus),
        rational_curves: fixed.as_ref().and_then(|f| f.rational_curves),
        fixed_locus: fixed.map(|f| format!("{:?}", f.kind)),
    })
}

fn run_lattice(expr: &str, format: Format) -> Result<String, Failure> {
    let l = named_lattice(expr).map_err(usage)?;
    let s = summarise(expr, &l)?;
    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".to_string());
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&s).expect("summary serialises") + "\n",
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["expr", "rank", "det", "signature", "discriminant", "a", "g", "k"])
                .expect("in-memory write");
            wtr.write_record([
                s.expr.clone(),
                s.rank.to_string(),
                s.determinant.clone(),
                format!("({},{})", s.signature.0, s.signature.1),
                s.discriminant_group.join(";"),
                opt(s.a.map(|x| x.to_string())),
                opt(s.genus.map(|x| x.to_string())),
                opt(s.rational_curves.map(|x| x.to_string())),
            ])
            .expect("in-memory write");
            String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let group = if s.discriminant_group.is_empty() {
                "0".to_string()
            } else {
                s.discriminant_group.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
            };
            format!(
                "lattice {}\nrank {}\ndeterminant {}\nsignature ({},{})\ndiscriminant group {}\na {}\nfixed locus {}\ng {}\nk {}\n",
                s.expr,
                s.rank,
                s.determinant,
                s.signature.0,
                s.signature.1,
                group,
                opt(s.a.map(|x| x.to_string())),
                opt(s.fixed_locus.clone()),
                opt(s.genus.map(|x| x.to_string())),
                opt(s.rational_curves.map(|x| x.to_string())),
            )
        }
    })
}

fn run_chain(start: &str, order: u32, steps: usize) -> Result<String, Failure> {
    let (j, k) = start
        .split_once(',')
        .and_then(|(j, k)| Some((j.trim().parse().ok()?, k.trim().parse().ok()?)))
        .ok_or_else(|| Failure::Usage(format!("--start expects \"j,k\", got {start:?}")))?;
    let p = ChainPoint::new(order, j, k).map_err(usage)?;
    let pts = lefschetz::chain(p, steps);
    Ok(pts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { rank, geometry, format, check } => run_classify(*rank, *geometry, *format, *check),
        Command::Verify { order, bound, max_k, format, check } => {
            run_verify(*order, *bound, *max_k, *format, *check)
        }
        Command::Fiber { a, b, format } => run_fiber(a, b, *format),
        Command::Lattice { expr, format } => run_lattice(expr, *format),
        Command::Chain { start, order, steps } => run_chain(start, *order, *steps),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
