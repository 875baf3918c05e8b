//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.
//!
//! Bundled example KBs number their defaults from 0; every expected index
//! set below is written 0-based.

use std::process::ExitCode;
use std::time::Instant;

use defeasible::closures::{self, RelevantVariant, Seriousness};
use defeasible::harness::{self, Postulate, SuiteConfig, SuiteReport};
use defeasible::ranking::compute_ranking;
use defeasible::semantics::build_min_canonical;
use defeasible::{examples, DefaultSet, KnowledgeBase, Limits, Method, Rank, Reasoner};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn set(xs: &[usize]) -> DefaultSet {
    xs.iter().copied().collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn answer(kb: &KnowledgeBase, method: Method, query: &str) -> Result<bool, String> {
    let mut r = Reasoner::new(kb.clone(), Limits::default()).map_err(|e| e.to_string())?;
    let q = r.parse_query(query).map_err(|e| e.to_string())?;
    r.accepts(method, &q).map_err(|e| e.to_string())
}

fn expect_answer(kb: &KnowledgeBase, method: Method, query: &str, want: bool) -> Outcome {
    expect(
        &format!("{method} on '{query}'"),
        answer(kb, method, query)?,
        want,
    )
}

fn bases(kb: &KnowledgeBase, antecedent: &str, ordering: Seriousness) -> Vec<DefaultSet> {
    let mut kb = kb.clone();
    let a = kb.parse_formula(antecedent).unwrap();
    let rt = compute_ranking(&kb);
    closures::enumerate_bases(&kb, &rt, &a, ordering)
}

fn ranking() -> Outcome {
    let f = Rank::Finite;
    let kb = examples::students();
    let rt = compute_ranking(&kb);
    expect(
        "students ranks",
        rt.default_ranks(),
        &[f(0), f(0), f(1)][..],
    )?;
    expect(
        "students chain",
        rt.chain(),
        &[kb.all(), set(&[2]), DefaultSet::EMPTY][..],
    )?;
    expect("students order", rt.order(), 2)?;
    let rt = compute_ranking(&examples::bright_students());
    expect(
        "bright students ranks",
        rt.default_ranks(),
        &[f(0), f(0), f(0), f(1)][..],
    )?;
    let rt = compute_ranking(&examples::residence());
    let inf = Rank::Infinite;
    expect(
        "residence ranks",
        rt.default_ranks(),
        &[f(0), f(0), inf, inf, inf][..],
    )
}

fn rational_closure() -> Outcome {
    let kb = examples::students();
    expect_answer(&kb, Method::Rc, "Student & Italian |~ !Pay_Taxes", true)?;
    expect_answer(&kb, Method::Rc, "Employee & Student |~ Young", false)?;
    expect_answer(&kb, Method::Rc, "Employee & Student |~ !Young", false)
}

fn canonical_model() -> Outcome {
    let kb = examples::students();
    let rt = compute_ranking(&kb);
    let m = build_min_canonical(&kb, &rt, 20).map_err(|e| e.to_string())?;
    let strata: [&[&str]; 3] = [
        &["", "p", "y", "py", "e", "ey", "ep", "eyp", "sy"],
        &["sep", "sepy", "s", "sp", "spy"],
        &["se", "sey"],
    ];
    let name = |c: char| match c {
        's' => "Student",
        'e' => "Employee",
        'p' => "Pay_Taxes",
        'y' => "Young",
        _ => unreachable!(),
    };
    let sig = kb.signature();
    expect("world count", m.worlds().len(), 16)?;
    for (rank, worlds) in strata.iter().enumerate() {
        for w in worlds.iter() {
            let bits = w
                .chars()
                .fold(0u64, |acc, c| acc | 1 << sig.get(name(c)).unwrap().index());
            let world = m
                .worlds()
                .iter()
                .find(|x| x.valuation.bits() == bits)
                .ok_or(format!("missing world {{{w}}}"))?;
            expect(&format!("rank of {{{w}}}"), m.rank(world.id), rank)?;
        }
    }
    Ok(())
}

fn lc_mp_divergence() -> Outcome {
    let kb = examples::employed_students();
    let q = "Employee & Student |~ Young & !Pay_Taxes";
    expect_answer(&kb, Method::Lc, q, true)?;
    expect(
        "LC bases",
        bases(&kb, "Employee & Student", Seriousness::Lexicographic),
        vec![set(&[0, 1, 3])],
    )?;
    expect_answer(&kb, Method::Mp, q, false)?;
    expect(
        "MP bases",
        bases(&kb, "Employee & Student", Seriousness::Multipreference),
        vec![set(&[0, 1, 3]), set(&[2, 3])],
    )?;
    let split = examples::employed_students_split();
    expect_answer(&split, Method::Lc, q, false)?;
    expect_answer(&split, Method::Mp, q, false)
}

fn evidence_weight() -> Outcome {
    let kb = examples::swimmers();
    let a = "Olympic_Swimmer & Adult & Employee";
    expect_answer(&kb, Method::Lc, &format!("{a} |~ !Young"), true)?;
    expect(
        "LC bases",
        bases(&kb, a, Seriousness::Lexicographic),
        vec![set(&[1, 2])],
    )?;
    expect_answer(&kb, Method::Mp, &format!("{a} |~ Young"), false)?;
    expect_answer(&kb, Method::Mp, &format!("{a} |~ !Young"), false)
}

fn rm_counterexample() -> Outcome {
    let kb = examples::merry_students();
    expect_answer(&kb, Method::Mp, "Student & Adult |~ Young <-> Merry", true)?;
    expect_answer(&kb, Method::Mp, "Student & Adult |~ Young", false)?;
    expect_answer(
        &kb,
        Method::Mp,
        "Student & Adult & !Young |~ Young <-> Merry",
        false,
    )?;
    expect_answer(&kb, Method::Lc, "Student & Adult |~ Young", true)
}

fn ranked_refinement() -> Outcome {
    let kb = examples::merry_students();
    expect_answer(&kb, Method::Mpr, "Student & Adult |~ Young", true)?;
    expect_answer(&kb, Method::Mp, "Student & Adult |~ Young", false)?;
    let kb = examples::redundant();
    expect_answer(&kb, Method::Mpr, "A & C |~ !E", true)?;
    expect_answer(&kb, Method::Mpr, "A & C |~ E", false)?;
    expect_answer(&kb, Method::Lc, "A & C |~ E", true)?;
    expect_answer(&kb, Method::Lc, "A & C |~ !E", false)
}

fn relevant_closure() -> Outcome {
    let kb = examples::residence();
    let q = "Italian & German |~ Has_Residence";
    expect_answer(&kb, Method::BasicRelevant, q, false)?;
    expect_answer(&kb, Method::MinimalRelevant, q, false)?;
    expect_answer(&kb, Method::Mp, q, true)?;
    expect_answer(&kb, Method::Lc, q, true)?;

    let mut kb = examples::employed_students();
    let q = kb
        .parse_query("Employee & Student |~ Young & !Pay_Taxes")
        .unwrap();
    let rt = compute_ranking(&kb);
    for variant in [RelevantVariant::Basic, RelevantVariant::Minimal] {
        let ans = closures::relevant_answer(&kb, &rt, &q, variant);
        expect(&format!("{variant:?} answer"), ans.accepted, false)?;
        expect(
            &format!("{variant:?} justifications"),
            ans.justifications,
            vec![set(&[0, 2]), set(&[1, 2])],
        )?;
    }
    Ok(())
}

fn suite_checks(report: &SuiteReport, checks: &[&str]) -> Outcome {
    let totals = report.totals();
    let mut problems = Vec::new();
    for check in checks {
        let (cases, failed) = totals[check];
        if cases == 0 {
            problems.push(format!("{check}: no cases"));
        }
        if failed > 0 {
            problems.push(format!("{check}: {failed} of {cases} failed"));
        }
    }
    for (trial, (check, witness)) in report
        .failures()
        .filter(|(_, (c, _))| checks.contains(c))
        .take(5)
    {
        problems.push(format!("seed {} {check}: {witness}", trial.seed));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}

fn theorem_oracles(report: &SuiteReport) -> Outcome {
    expect("satisfiable KBs", report.trials.len() >= 200, true)?;
    expect(
        "queries per KB",
        report.trials.iter().all(|t| t.queries >= 5),
        true,
    )?;
    suite_checks(
        report,
        &[
            "rc-model",
            "mp-model",
            "inclusions",
            "mp-oracle",
            "brewka",
            "heights",
            "coarseness",
        ],
    )
}

fn postulates(report: &SuiteReport) -> Outcome {
    suite_checks(
        report,
        &["postulates-mp", "postulates-mpr", "postulates-rm-mpr"],
    )?;
    let mut kb = examples::merry_students();
    let a = kb.parse_formula("Student & Adult").unwrap();
    let b = kb.parse_formula("!Young").unwrap();
    let c = kb.parse_formula("Young <-> Merry").unwrap();
    let r = Reasoner::new(kb, Limits::default()).map_err(|e| e.to_string())?;
    let rep = harness::check_postulates(&r, Method::Mp, &[Postulate::Rm], &[(a, b, c)])
        .map_err(|e| e.to_string())?;
    expect(
        "RM failures for MP on the merry students",
        rep.violations_of(Postulate::Rm).count(),
        1,
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let report = harness::run_suite(SuiteConfig {
        seed: 2024,
        kbs: 200,
        queries_per_kb: 5,
        max_atoms: 4,
        max_defaults: 6,
        depth: 3,
    });
    let suite_time = started.elapsed();

    let criteria: Vec<Criterion> = vec![
        ("ranking of three example KBs", Box::new(ranking)),
        ("rational closure queries", Box::new(rational_closure)),
        ("minimal canonical model strata", Box::new(canonical_model)),
        (
            "LC and MP diverge on bundled defaults",
            Box::new(lc_mp_divergence),
        ),
        ("LC weighs evidence, MP does not", Box::new(evidence_weight)),
        (
            "MP violates rational monotonicity",
            Box::new(rm_counterexample),
        ),
        ("MP^R versus MP and LC", Box::new(ranked_refinement)),
        (
            "basic and minimal relevant closure",
            Box::new(relevant_closure),
        ),
        ("model and syntactic engines agree on random KBs", {
            let report = report.clone();
            Box::new(move || theorem_oracles(report.as_ref().map_err(|e| e.to_string())?))
        }),
        ("postulates on random KBs", {
            let report = report.clone();
            Box::new(move || postulates(report.as_ref().map_err(|e| e.to_string())?))
        }),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if let Ok(report) = &report {
        print!("{}", report.summary());
    }
    println!(
        "random suite {:.2}s, total {:.2}s; {} of {} criteria passed",
        suite_time.as_secs_f64(),
        started.elapsed().as_secs_f64(),
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
