//! `defeasible`: command-line front end for the defeasible reasoner.
//!
//! Exit codes: 0 success, 1 I/O error or failed check, 2 parse or usage
//! error, 3 unsatisfiable knowledge base, 4 size cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use defeasible::closures::{BasesAnswer, RelevantAnswer};
use defeasible::harness::{self, KbGenerator, SuiteConfig, SuiteReport, Trial};
use defeasible::semantics::{chain_heights, violations, World};
use defeasible::{
    DefaultSet, Error, Evidence, KnowledgeBase, Limits, Method, QueryOutcome, Rank, Reasoner,
    Seriousness, Signature, Valuation,
};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "defeasible",
    version,
    about = "Defeasible entailment over propositional conditional knowledge bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include the evidence behind each answer.
    #[arg(long, global = true)]
    explain: bool,
    /// Largest signature whose valuations may be enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().max_atoms)]
    max_atoms: usize,
    /// Largest knowledge base whose subsets may be enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().max_defaults)]
    max_defaults: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank every default and print the exceptionality chain.
    Rank { kb: PathBuf },
    /// Answer `A |~ B` under one closure.
    Query {
        kb: PathBuf,
        query: String,
        #[arg(long, default_value = "rc", value_parser = parse_method)]
        method: Method,
    },
    /// List the bases for an antecedent.
    Bases {
        kb: PathBuf,
        antecedent: String,
        #[arg(long, value_enum, default_value_t = BasesMethod::Mp)]
        method: BasesMethod,
    },
    /// Dump the worlds of a model.
    Model {
        kb: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelMethod::Rc)]
        method: ModelMethod,
    },
    /// Answer one query under every closure.
    Compare { kb: PathBuf, query: String },
    /// Run the cross-checks on a KB file, or on random KBs.
    Check {
        /// KB file whose signature the sampled queries are drawn over.
        kb: Option<PathBuf>,
        /// Generate random KBs instead of reading one.
        #[arg(long, conflicts_with = "kb")]
        random: bool,
        /// Seed of the first trial; trial i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random KBs.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Queries and postulate triples per KB.
        #[arg(long, default_value_t = 5)]
        queries: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasesMethod {
    Mp,
    Lc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelMethod {
    Rc,
    Mp,
    Mpr,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

enum Failure {
    Io(String),
    Logic(Error),
    CheckFailed(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Logic(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Syntax { .. } | Error::EmptyFormula => 2,
        Error::UnsatisfiableKb => 3,
        Error::AtomCap { .. } | Error::DefaultCap { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Logic(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::CheckFailed(n)) => {
            eprintln!("error: {n} check(s) failed");
            ExitCode::from(1)
        }
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        max_atoms: cli.max_atoms,
        max_defaults: cli.max_defaults,
    }
}

fn load(path: &Path, cli: &Cli) -> Result<Reasoner, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let kb = KnowledgeBase::parse(&text)?;
    Ok(Reasoner::new(kb, limits(cli))?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Rank { kb } => cmd_rank(&load(kb, cli)?, cli),
        Command::Query { kb, query, method } => cmd_query(load(kb, cli)?, query, *method, cli),
        Command::Bases {
            kb,
            antecedent,
            method,
        } => cmd_bases(load(kb, cli)?, antecedent, *method, cli),
        Command::Model { kb, method } => cmd_model(&load(kb, cli)?, *method, cli),
        Command::Compare { kb, query } => cmd_compare(load(kb, cli)?, query, cli),
        Command::Check {
            kb,
            random: _,
            seed,
            count,
            queries,
        } => cmd_check(kb.as_deref(), *seed, *count, *queries, cli),
    }
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn indices(s: DefaultSet) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

fn rank_json(r: Rank) -> Value {
    json!({ "rank": r.finite(), "infinite": r.is_infinite() })
}

fn atoms(v: Valuation, sig: &Signature) -> Vec<String> {
    v.true_atoms().map(|a| sig.name(a).to_string()).collect()
}

fn atoms_text(v: Valuation, sig: &Signature) -> String {
    format!("{{{}}}", atoms(v, sig).join(","))
}

fn cmd_rank(r: &Reasoner, cli: &Cli) -> Result<(), Failure> {
    let (kb, rt) = (r.kb(), r.ranking());
    let sig = kb.signature();
    if cli.json {
        let defaults: Vec<Value> = kb
            .defaults()
            .iter()
            .map(|d| {
                let rank = rt.rank_of_default(d.index);
                json!({
                    "index": d.index,
                    "default": d.display(sig),
                    "rank": rank.finite(),
                    "infinite": rank.is_infinite(),
                })
            })
            .collect();
        let chain: Vec<Value> = rt.chain().iter().map(|&c| indices(c)).collect();
        print_json(&json!({ "defaults": defaults, "order_k": rt.order(), "chain": chain }));
        return Ok(());
    }
    for d in kb.defaults() {
        println!(
            "{}: rank {}  {}",
            d.index,
            rt.rank_of_default(d.index),
            d.display(sig)
        );
    }
    println!("order_k: {}", rt.order());
    for (i, c) in rt.chain().iter().enumerate() {
        println!("C_{i}: {c}");
    }
    Ok(())
}

fn bases_json(ans: &BasesAnswer) -> Value {
    json!({
        "antecedent_rank": rank_json(ans.antecedent_rank),
        "bases": ans.bases.iter().map(|&b| indices(b)).collect::<Vec<_>>(),
        "counterexamples": ans.counterexamples.iter().map(|&b| indices(b)).collect::<Vec<_>>(),
    })
}

fn relevant_json(ans: &RelevantAnswer) -> Value {
    json!({
        "antecedent_rank": rank_json(ans.antecedent_rank),
        "justifications": ans.justifications.iter().map(|&j| indices(j)).collect::<Vec<_>>(),
        "relevant": indices(ans.relevant),
        "removed": indices(ans.removed),
        "remainder": indices(ans.remainder),
        "fallback": ans.fallback,
    })
}

fn evidence_json(e: &Evidence, sig: &Signature) -> Value {
    match e {
        Evidence::Ranks {
            antecedent,
            violation,
        } => json!({
            "antecedent_rank": rank_json(*antecedent),
            "violation_rank": rank_json(*violation),
        }),
        Evidence::Bases(ans) => bases_json(ans),
        Evidence::Relevant(ans) => relevant_json(ans),
        Evidence::Worlds { height, minimal } => json!({
            "height": height,
            "minimal_worlds": minimal.iter().map(|&v| atoms(v, sig)).collect::<Vec<_>>(),
        }),
    }
}

fn evidence_lines(e: &Evidence, sig: &Signature) -> Vec<String> {
    let sets = |label: &str, xs: &[DefaultSet]| -> String {
        let parts: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
        format!(
            "{label}: {}",
            if parts.is_empty() {
                "none".into()
            } else {
                parts.join(" ")
            }
        )
    };
    match e {
        Evidence::Ranks {
            antecedent,
            violation,
        } => {
            vec![
                format!("rank(A) = {antecedent}"),
                format!("rank(A & !B) = {violation}"),
            ]
        }
        Evidence::Bases(ans) => vec![
            format!("rank(A) = {}", ans.antecedent_rank),
            sets("bases", &ans.bases),
            sets("bases not entailing B", &ans.counterexamples),
        ],
        Evidence::Relevant(ans) => vec![
            format!("rank(A) = {}", ans.antecedent_rank),
            sets("justifications", &ans.justifications),
            format!("relevant: {}", ans.relevant),
            format!("removed: {}", ans.removed),
            format!("remainder: {}", ans.remainder),
        ],
        Evidence::Worlds { height, minimal } => {
            let h = height.map_or("none".to_string(), |h| h.to_string());
            let mut out = vec![format!("minimal A-worlds at height {h}:")];
            out.extend(minimal.iter().map(|&v| format!("  {}", atoms_text(v, sig))));
            out
        }
    }
}

fn cmd_query(mut r: Reasoner, text: &str, method: Method, cli: &Cli) -> Result<(), Failure> {
    let q = r.parse_query(text)?;
    let started = Instant::now();
    let outcome = r.query(method, &q)?;
    let elapsed = started.elapsed();
    let sig = r.kb().signature();
    let fallback = matches!(&outcome.evidence, Evidence::Relevant(a) if a.fallback);
    if cli.json {
        print_json(&query_json(&outcome, &q.display(sig), sig));
        return Ok(());
    }
    println!("{}", if outcome.accepted { "yes" } else { "no" });
    if fallback {
        println!("fallback: no rank-wise removal restored consistency; reasoned from K \\ R");
    }
    if cli.explain {
        for line in evidence_lines(&outcome.evidence, sig) {
            println!("{line}");
        }
        println!("time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    }
    Ok(())
}

fn query_json(outcome: &QueryOutcome, query: &str, sig: &Signature) -> Value {
    json!({
        "method": outcome.method.name(),
        "query": query,
        "answer": outcome.accepted,
        "evidence": evidence_json(&outcome.evidence, sig),
    })
}

fn cmd_bases(mut r: Reasoner, text: &str, method: BasesMethod, cli: &Cli) -> Result<(), Failure> {
    let a = r.parse_formula(text)?;
    let ordering = match method {
        BasesMethod::Mp => Seriousness::Multipreference,
        BasesMethod::Lc => Seriousness::Lexicographic,
    };
    let rank = r.rank(&a);
    let bases = if rank.is_infinite() {
        Vec::new()
    } else {
        r.bases(&a, ordering)
    };
    if cli.json {
        print_json(&json!({
            "antecedent": a.display(r.kb().signature()).to_string(),
            "antecedent_rank": rank_json(rank),
            "bases": bases.iter().map(|&b| indices(b)).collect::<Vec<_>>(),
        }));
        return Ok(());
    }
    if rank.is_infinite() {
        eprintln!("note: the antecedent has infinite rank, so it has no bases");
    }
    for b in bases {
        println!("{b}");
    }
    Ok(())
}

struct WorldRow {
    world: World,
    true_atoms: Vec<usize>,
    rc: usize,
    height: usize,
    violated: DefaultSet,
}

fn cmd_model(r: &Reasoner, method: ModelMethod, cli: &Cli) -> Result<(), Failure> {
    let kb = r.kb();
    let sig = kb.signature();
    let m = r.min_canonical()?;
    let n = r.mp_model()?;
    let heights = chain_heights(&n);
    let mut rows: Vec<WorldRow> = m
        .worlds()
        .iter()
        .map(|&w| WorldRow {
            world: w,
            true_atoms: w.valuation.true_atoms().map(|a| a.index()).collect(),
            rc: m.rank(w.id),
            height: heights[n.class_of(w.id)],
            violated: violations(&w, kb),
        })
        .collect();
    rows.sort_by(|a, b| a.true_atoms.cmp(&b.true_atoms));
    // covering pairs of the MP order, by position in the sorted listing
    let covers: Vec<(usize, usize)> = if method == ModelMethod::Mp {
        let ids: Vec<usize> = rows.iter().map(|row| row.world.id).collect();
        let mut out = Vec::new();
        for (i, &x) in ids.iter().enumerate() {
            for (j, &y) in ids.iter().enumerate() {
                if n.less(x, y) && !ids.iter().any(|&z| n.less(x, z) && n.less(z, y)) {
                    out.push((i, j));
                }
            }
        }
        out
    } else {
        Vec::new()
    };
    let which = match method {
        ModelMethod::Rc => "rc",
        ModelMethod::Mp => "mp",
        ModelMethod::Mpr => "mpr",
    };
    if cli.json {
        let worlds: Vec<Value> = rows
            .iter()
            .map(|row| {
                json!({
                    "atoms": atoms(row.world.valuation, sig),
                    "rc_rank": row.rc,
                    "mpr_rank": row.height,
                    "violated": indices(row.violated),
                })
            })
            .collect();
        let mut out = json!({ "model": which, "worlds": worlds });
        if method == ModelMethod::Mp {
            out["order"] = json!(covers.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>());
        }
        print_json(&out);
        return Ok(());
    }
    for (i, row) in rows.iter().enumerate() {
        println!(
            "{i}: {}  rc={}  mpr={}  violated={}",
            atoms_text(row.world.valuation, sig),
            row.rc,
            row.height,
            row.violated
        );
    }
    if method == ModelMethod::Mp {
        println!("order (covering pairs, lower first):");
        for (i, j) in covers {
            println!("  {i} < {j}");
        }
    }
    Ok(())
}

fn cmd_compare(mut r: Reasoner, text: &str, cli: &Cli) -> Result<(), Failure> {
    let q = r.parse_query(text)?;
    let matrix = harness::compare_all(&r, &q)?;
    let broken = matrix.violations();
    if cli.json {
        let mut cells = serde_json::Map::new();
        for m in Method::ALL {
            cells.insert(m.name().into(), json!(matrix.get(m)));
        }
        print_json(&json!({
            "query": q.display(r.kb().signature()),
            "answers": cells,
            "inclusion_violations": broken,
        }));
    } else {
        for m in Method::ALL {
            println!(
                "{:<17} {}",
                format!("{m}:"),
                if matrix.get(m) { "yes" } else { "no" }
            );
        }
        for b in &broken {
            println!("inclusion violated: {b}");
        }
    }
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::CheckFailed(broken.len()))
    }
}

fn trial_json(t: &Trial) -> Value {
    json!({
        "seed": t.seed,
        "kb": t.kb_text,
        "queries": t.queries,
        "cases": t.cases,
        "failures": t.failures.iter().map(|(c, w)| json!({ "check": c, "witness": w })).collect::<Vec<_>>(),
    })
}

fn cmd_check(
    kb: Option<&Path>,
    seed: u64,
    count: usize,
    queries: usize,
    cli: &Cli,
) -> Result<(), Failure> {
    let report = match kb {
        Some(path) => {
            let r = load(path, cli)?;
            let mut gen = KbGenerator::over(seed, r.kb().signature().clone(), 0, 3);
            let trial = harness::check_kb(r.kb().clone(), &mut gen, queries)?;
            SuiteReport {
                config: SuiteConfig {
                    seed,
                    kbs: 1,
                    queries_per_kb: queries,
                    ..SuiteConfig::default()
                },
                trials: vec![trial],
            }
        }
        None => harness::run_suite(SuiteConfig {
            seed,
            kbs: count,
            queries_per_kb: queries,
            ..SuiteConfig::default()
        })?,
    };
    let failures = report.failures().count();
    if cli.json {
        let totals: serde_json::Map<String, Value> = report
            .totals()
            .into_iter()
            .map(|(k, (cases, failed))| {
                (k.to_string(), json!({ "cases": cases, "failures": failed }))
            })
            .collect();
        print_json(&json!({
            "seed": seed,
            "trials": report.trials.iter().map(trial_json).collect::<Vec<_>>(),
            "totals": totals,
        }));
    } else {
        for line in report.lines() {
            println!("{line}");
        }
        print!("{}", report.summary());
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::CheckFailed(failures))
    }
}
