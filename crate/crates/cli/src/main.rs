//! `thom`: command-line front end for the Lie group cohomology catalog,
//! Bockstein computations and the Thom-morphism obstruction search.
//!
//! Every subcommand renders as plain text by default or as a JSON report
//! (`--format json`, schema `thom-report/1`). Diagram-producing commands also
//! accept `--format dot`.

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use thom_core::bockstein::{reconstruct_integral, BocksteinPage};
use thom_core::cellular::{self, IntegerChainComplex};
use thom_core::liegroups::{group, GroupData, TABLE1_INSTANCES};
use thom_core::steenrod::OperationWord;
use thom_core::thom::{table1, Analyzer, ObstructionVerdict, SearchConfig, Status, Surjectivity, Table1Row};

const SCHEMA: &str = "thom-report/1";

/// Exit code for `--strict` when a result depends on an ABSENT table entry.
const EXIT_TAINTED: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser)]
#[command(name = "thom", version, about = "Cohomology operations on compact Lie groups and Thom-morphism obstructions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text", env = "THOM_FORMAT")]
    format: Format,
    /// Longest operation word tried by the witness search.
    #[arg(long, global = true, default_value_t = 6)]
    max_word_length: usize,
    /// Cap on the total degree of witness words.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Exit with status 3 when a result used an unknown operation value.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monomial basis of H^deg(G; F_p).
    Basis { spec: String, prime: u32, degree: u32 },
    /// Apply an operation word such as `Sq1,Sq2` or `P1,beta` to an element.
    Apply { spec: String, prime: u32, word: String, element: String },
    /// Bockstein ranks and Bockstein cohomology by degree.
    Bockstein {
        spec: String,
        prime: u32,
        /// Emit the beta action as a DOT graph.
        #[arg(long)]
        diagram: bool,
    },
    /// Integral cohomology pattern localized at p.
    Integral { spec: String, prime: u32 },
    /// Obstruction verdict for the reduction of a free integral class.
    Verdict {
        spec: String,
        degree: u32,
        /// Prime to test (defaults to the smallest torsion prime).
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Decide surjectivity of the Thom morphism and the minimal failing degree.
    Scan { spec: String },
    /// Scan several groups (all catalog instances when none are given).
    Table1 {
        specs: Vec<String>,
        /// Scan the full list of catalog instances.
        #[arg(long)]
        all_defaults: bool,
    },
    /// Cell structure of SO(n).
    Cells {
        n: u32,
        /// Emit the incidence diagram as a DOT graph.
        #[arg(long, conflicts_with = "homology")]
        diagram: bool,
        /// Integral homology from the cellular chain complex.
        #[arg(long)]
        homology: bool,
    },
    /// Multiplier bound m with m * H^deg(G; Z) inside the image of the Thom morphism.
    Bound { spec: String, degree: u32 },
    /// Catalog data: dimension, rational degrees, rings and operation tables.
    Catalog { spec: String },
}

/// A rendered result: JSON payload, text rendering and taint flag.
struct Report {
    command: &'static str,
    payload: Value,
    text: String,
    dot: Option<String>,
    tainted: bool,
}

impl Report {
    fn new(command: &'static str, payload: impl Serialize, text: String) -> Result<Self> {
        Ok(Report {
            command,
            payload: serde_json::to_value(payload)?,
            text,
            dot: None,
            tainted: false,
        })
    }
}

fn load(spec: &str) -> Result<GroupData> {
    group(spec).with_context(|| format!("unknown group `{spec}`"))
}

fn config(cli: &Cli) -> SearchConfig {
    SearchConfig {
        max_word_length: cli.max_word_length,
        max_degree: cli.max_degree,
    }
}

fn basis(spec: &str, p: u32, degree: u32) -> Result<Report> {
    let g = load(spec)?;
    let pres = g.prime_data(p)?.presentation();
    let b = pres.basis(degree);
    let monomials: Vec<String> = b.monomials.iter().map(|m| pres.format_monomial(m)).collect();
    let mut text = format!("H^{degree}({}; F_{p}) has dimension {}\n", g.spec, monomials.len());
    for m in &monomials {
        writeln!(text, "  {m}")?;
    }
    Report::new(
        "basis",
        json!({ "group": g.spec, "prime": p, "degree": degree, "basis": monomials }),
        text,
    )
}

fn apply(spec: &str, p: u32, word: &str, element: &str) -> Result<Report> {
    let g = load(spec)?;
    let ops = &g.prime_data(p)?.ops;
    let pres = ops.presentation();
    let w: OperationWord = word.parse().map_err(|e| anyhow!("bad operation word `{word}`: {e}"))?;
    let x = pres.parse_element(element)?;
    let r = ops.apply_word(&w, &x)?;
    let value = pres.format_element(&r.value);
    let mut text = format!("{w}({}) = {value}\n", pres.format_element(&x));
    if r.tainted {
        text.push_str("warning: an unknown table entry was treated as 0\n");
    }
    let mut report = Report::new(
        "apply",
        json!({
            "group": g.spec, "prime": p, "word": w, "element": pres.format_element(&x),
            "value": value, "tainted": r.tainted,
        }),
        text,
    )?;
    report.tainted = r.tainted;
    Ok(report)
}

fn bockstein(spec: &str, p: u32, diagram: bool) -> Result<Report> {
    let g = load(spec)?;
    let page = BocksteinPage::new(&g.prime_data(p)?.ops);
    let mut rows = Vec::new();
    let mut text = format!("Bockstein data for {} at p = {p}\n degree  dim  rank  BH  uncertain\n", g.spec);
    let mut tainted = false;
    for n in 0..=g.dim {
        let (dim, rank, bh, unc) = (page.dimension(n), page.rank(n)?, page.bh_dimension(n)?, page.is_uncertain(n)?);
        tainted |= unc;
        let reps: Vec<String> = page
            .bh_representatives(n)?
            .iter()
            .map(|v| page.ops().presentation().format_element(&page.element(n, v)))
            .collect();
        writeln!(text, "{n:>7} {dim:>4} {rank:>5} {bh:>3}  {}", if unc { "yes" } else { "" })?;
        rows.push(json!({ "degree": n, "dimension": dim, "rank": rank, "bh": bh, "bh_representatives": reps, "uncertain": unc }));
    }
    let mut report = Report::new("bockstein", json!({ "group": g.spec, "prime": p, "degrees": rows }), text)?;
    report.tainted = tainted;
    if diagram {
        report.dot = Some(page.diagram_dot(&g.spec.to_string(), g.dim)?);
    }
    Ok(report)
}

fn integral(spec: &str, p: u32) -> Result<Report> {
    let g = load(spec)?;
    let page = BocksteinPage::new(&g.prime_data(p)?.ops);
    let pat = reconstruct_integral(&page, &g.free_ranks())?;
    let mut text = format!("H^*({}; Z) localized at {p}\n degree  free  Z/{p}  Z/{p}^k\n", g.spec);
    for c in &pat.degrees {
        writeln!(text, "{:>7} {:>5} {:>5} {:>7}", c.degree, c.free, c.z1, c.zk)?;
    }
    if pat.tainted {
        text.push_str("warning: beta uses unknown table entries; counts are provisional\n");
    }
    let mut report = Report::new("integral", json!({ "group": g.spec, "pattern": pat }), text)?;
    report.tainted = pat.tainted;
    Ok(report)
}

fn verdict_text(v: &ObstructionVerdict) -> String {
    let mut text = format!("{} degree {} at p = {}: {}\n", v.group, v.degree, v.prime, v.status);
    if v.ambiguous {
        let _ = writeln!(text, "  ambiguous: {} Bockstein classes", v.classes.len());
    }
    for c in &v.classes {
        let _ = writeln!(text, "  class {c}");
    }
    for a in &v.ambiguity {
        let _ = writeln!(text, "  ambiguity {a}");
    }
    let _ = writeln!(text, "  candidates: {}", v.candidate_count);
    for w in &v.witnesses {
        let _ = writeln!(text, "  witness {} on {} gives {}", w.word, w.candidate, w.value);
    }
    for w in &v.tainted_words {
        let _ = writeln!(text, "  tainted word {w}");
    }
    for n in &v.notes {
        let _ = writeln!(text, "  note: {n}");
    }
    text
}

fn verdict(spec: &str, degree: u32, prime: Option<u32>, config: SearchConfig) -> Result<Report> {
    let g = load(spec)?;
    let p = match prime {
        Some(p) => p,
        None => *g
            .torsion_primes
            .first()
            .ok_or_else(|| anyhow!("{} has torsion-free cohomology; pass --prime", g.spec))?,
    };
    let v = Analyzer::new(&g, config).verdict(p, degree)?;
    let text = verdict_text(&v);
    let tainted = v.status == Status::Tainted;
    let mut report = Report::new("verdict", &v, text)?;
    report.tainted = tainted;
    Ok(report)
}

fn row_text(r: &Table1Row) -> String {
    let degree = r.minimal_failing_degree.map_or("-".to_string(), |d| d.to_string());
    format!("{:<10} {:<12} {:>6}  {}\n", r.group, r.surjective.to_string(), degree, r.reason)
}

const ROW_HEADER: &str = "group      surjective   degree  reason\n";

fn scan(spec: &str, config: SearchConfig) -> Result<Report> {
    let g = load(spec)?;
    let row = Analyzer::new(&g, config).scan()?;
    let mut text = format!("{ROW_HEADER}{}", row_text(&row));
    if let Some(v) = &row.verdict {
        text.push_str(&verdict_text(v));
    }
    let tainted = row.surjective == Surjectivity::Conditional;
    let mut report = Report::new("scan", &row, text)?;
    report.tainted = tainted;
    Ok(report)
}

fn table(specs: &[String], all: bool, config: SearchConfig) -> Result<Report> {
    let specs: Vec<&str> = if all || specs.is_empty() {
        TABLE1_INSTANCES.to_vec()
    } else {
        specs.iter().map(String::as_str).collect()
    };
    let rows = table1(&specs, config)?;
    let mut text = ROW_HEADER.to_string();
    for r in &rows {
        text.push_str(&row_text(r));
    }
    let tainted = rows.iter().any(|r| r.surjective == Surjectivity::Conditional);
    let mut report = Report::new("table1", json!({ "rows": rows }), text)?;
    report.tainted = tainted;
    Ok(report)
}

fn cells(n: u32, diagram: bool, homology: bool) -> Result<Report> {
    if n == 0 {
        bail!("SO(0) has no cell structure");
    }
    if homology {
        let h = IntegerChainComplex::so(n).homology();
        let mut text = format!("H_*(SO({n}); Z)\n");
        for s in &h {
            writeln!(text, "{:>4}  {s}", s.degree)?;
        }
        return Report::new("cells", json!({ "n": n, "homology": h }), text);
    }
    let by_dim = cellular::cells_so(n);
    let mut text = format!("cells of SO({n})\n");
    for (d, cs) in by_dim.iter().enumerate() {
        let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        writeln!(text, "{d:>4}  {}", names.join(" "))?;
    }
    let edges: Vec<Value> = cellular::incidence_edges(n)
        .into_iter()
        .map(|(face, cell, k)| json!({ "face": face, "cell": cell, "incidence": k }))
        .collect();
    let mut report = Report::new("cells", json!({ "n": n, "cells": by_dim, "edges": edges }), text)?;
    if diagram {
        report.dot = Some(cellular::incidence_diagram(n));
    }
    Ok(report)
}

fn bound(spec: &str, degree: u32, config: SearchConfig) -> Result<Report> {
    let g = load(spec)?;
    let m = Analyzer::new(&g, config).multiplier_bound(degree)?;
    let text = format!("{} degree {degree}: multiplier {m}\n", g.spec);
    Report::new("bound", json!({ "group": g.spec, "degree": degree, "multiplier": m.to_string() }), text)
}

fn catalog(spec: &str) -> Result<Report> {
    let g = load(spec)?;
    let d = g.dump();
    let mut text = format!(
        "{}\n  dimension {}\n  rational degrees {:?}\n  torsion primes {:?}\n",
        d.group, d.dim, d.rational_degrees, d.torsion_primes
    );
    for p in &d.primes {
        writeln!(text, "  mod {}: {}", p.prime, p.ring)?;
        writeln!(text, "    atomics {}", p.atomics.join(", "))?;
        for a in &p.actions {
            writeln!(text, "    {a}")?;
        }
    }
    Report::new("catalog", &d, text)
}

fn run(cli: &Cli) -> Result<Report> {
    let cfg = config(cli);
    match &cli.command {
        Command::Basis { spec, prime, degree } => basis(spec, *prime, *degree),
        Command::Apply { spec, prime, word, element } => apply(spec, *prime, word, element),
        Command::Bockstein { spec, prime, diagram } => bockstein(spec, *prime, *diagram || cli.format == Format::Dot),
        Command::Integral { spec, prime } => integral(spec, *prime),
        Command::Verdict { spec, degree, prime } => verdict(spec, *degree, *prime, cfg),
        Command::Scan { spec } => scan(spec, cfg),
        Command::Table1 { specs, all_defaults } => table(specs, *all_defaults, cfg),
        Command::Cells { n, diagram, homology } => cells(*n, *diagram || (cli.format == Format::Dot && !homology), *homology),
        Command::Bound { spec, degree } => bound(spec, *degree, cfg),
        Command::Catalog { spec } => catalog(spec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    match cli.format {
        Format::Json => {
            let doc = json!({ "schema": SCHEMA, "command": report.command, "result": report.payload });
            println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values always serialize"));
        }
        Format::Dot => match &report.dot {
            Some(dot) => print!("{dot}"),
            None => {
                eprintln!("error: `{}` has no DOT rendering", report.command);
                return ExitCode::FAILURE;
            }
        },
        Format::Text => {
            print!("{}", report.text);
            if let Some(dot) = &report.dot {
                print!("{dot}");
            }
        }
    }
    if cli.strict && report.tainted {
        eprintln!("error: result depends on unknown operation values");
        return ExitCode::from(EXIT_TAINTED);
    }
    ExitCode::SUCCESS
}
