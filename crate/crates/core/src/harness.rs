//! Randomized cross-checking: knowledge-base generation, the closure
//! comparison matrix, postulate checks and a brute-force MP oracle.
//!
//! Every trial is reproducible from its seed. Reports are line-oriented:
//! one `trial` record per knowledge base, then a summary block.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closures::{brewka_subset_less, lex_less_serious, mp_less_serious};
use crate::defaults::DefaultSet;
use crate::error::{Error, Result};
use crate::kb::{Conditional, KnowledgeBase};
use crate::prop::{self, Atom, Formula, Signature};
use crate::ranking::{compute_ranking, rank_of_formula};
use crate::reasoner::{Limits, Method, Reasoner};
use crate::semantics::{self, chain_heights, layer_heights};

const ATOM_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// Seeded source of random knowledge bases and formulas.
#[derive(Debug, Clone)]
pub struct KbGenerator {
    pub seed: u64,
    pub max_atoms: usize,
    pub max_defaults: usize,
    pub depth: usize,
    rng: ChaCha8Rng,
    names: Signature,
}

impl KbGenerator {
    pub fn new(seed: u64) -> Self {
        Self::with_bounds(seed, 4, 7, 3)
    }

    pub fn with_bounds(seed: u64, max_atoms: usize, max_defaults: usize, depth: usize) -> Self {
        assert!((1..=ATOM_NAMES.len()).contains(&max_atoms));
        let mut names = Signature::new();
        for n in &ATOM_NAMES[..max_atoms] {
            names.intern(n);
        }
        Self::over(seed, names, max_defaults, depth)
    }

    /// Draws formulas over the atoms of `names`, e.g. an existing KB's
    /// signature.
    pub fn over(seed: u64, names: Signature, max_defaults: usize, depth: usize) -> Self {
        let max_atoms = names.len();
        KbGenerator {
            seed,
            max_atoms,
            max_defaults,
            depth,
            rng: ChaCha8Rng::seed_from_u64(seed),
            names,
        }
    }

    /// A formula over the generator's atoms, as text.
    pub fn formula_text(&mut self) -> String {
        let f = self.formula(self.depth);
        f.display(&self.names).to_string()
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if self.max_atoms == 0 {
            return if self.rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            };
        }
        if depth == 0 || self.rng.gen_bool(0.5) {
            let a = prop::atom(Atom(self.rng.gen_range(0..self.max_atoms as u32)));
            return if self.rng.gen_bool(0.5) {
                a
            } else {
                prop::not(a)
            };
        }
        match self.rng.gen_range(0..11) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => prop::not(self.formula(depth - 1)),
            4 | 5 => prop::and(self.formula(depth - 1), self.formula(depth - 1)),
            6 | 7 => prop::or(self.formula(depth - 1), self.formula(depth - 1)),
            8 | 9 => prop::implies(self.formula(depth - 1), self.formula(depth - 1)),
            _ => prop::iff(self.formula(depth - 1), self.formula(depth - 1)),
        }
    }

    /// A knowledge base in text form; may be unsatisfiable.
    pub fn kb_text(&mut self) -> String {
        let n = self.rng.gen_range(1..=self.max_defaults);
        (0..n)
            .map(|_| format!("{} |~ {}\n", self.formula_text(), self.formula_text()))
            .collect()
    }

    /// A knowledge base whose material counterpart is consistent.
    pub fn satisfiable_kb(&mut self) -> KnowledgeBase {
        loop {
            let kb = KnowledgeBase::parse(&self.kb_text()).expect("generated text parses");
            if prop::is_consistent(&kb.materialize(kb.all())) {
                return kb;
            }
        }
    }

    /// Parses a random formula into `kb`'s signature.
    pub fn formula_for(&mut self, kb: &mut KnowledgeBase) -> Formula {
        let text = self.formula_text();
        kb.parse_formula(&text).expect("generated text parses")
    }

    pub fn query_for(&mut self, kb: &mut KnowledgeBase) -> Conditional {
        let a = self.formula_for(kb);
        let b = self.formula_for(kb);
        Conditional::new(a, b)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Membership of one query in each closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureMatrix {
    pub rc: bool,
    pub mp: bool,
    pub lc: bool,
    pub basic_relevant: bool,
    pub minimal_relevant: bool,
    pub mpr: bool,
}

impl ClosureMatrix {
    pub fn get(&self, method: Method) -> bool {
        match method {
            Method::Rc => self.rc,
            Method::Mp => self.mp,
            Method::Lc => self.lc,
            Method::BasicRelevant => self.basic_relevant,
            Method::MinimalRelevant => self.minimal_relevant,
            Method::Mpr => self.mpr,
        }
    }

    /// Known inclusions `a ⊆ b` between the closures.
    pub const INCLUSIONS: [(Method, Method); 5] = [
        (Method::Rc, Method::Mp),
        (Method::Mp, Method::Lc),
        (Method::Mp, Method::Mpr),
        (Method::BasicRelevant, Method::MinimalRelevant),
        (Method::MinimalRelevant, Method::Mp),
    ];

    /// Inclusions broken by this query, as `a => b`.
    pub fn violations(&self) -> Vec<String> {
        Self::INCLUSIONS
            .iter()
            .filter(|(a, b)| self.get(*a) && !self.get(*b))
            .map(|(a, b)| format!("{a} => {b}"))
            .collect()
    }
}

impl fmt::Display for ClosureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = Method::ALL
            .iter()
            .map(|&m| format!("{m}={}", if self.get(m) { "yes" } else { "no" }))
            .collect();
        f.write_str(&cells.join(" "))
    }
}

pub fn compare_all(r: &Reasoner, q: &Conditional) -> Result<ClosureMatrix> {
    Ok(ClosureMatrix {
        rc: r.accepts(Method::Rc, q)?,
        mp: r.accepts(Method::Mp, q)?,
        lc: r.accepts(Method::Lc, q)?,
        basic_relevant: r.accepts(Method::BasicRelevant, q)?,
        minimal_relevant: r.accepts(Method::MinimalRelevant, q)?,
        mpr: r.accepts(Method::Mpr, q)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Postulate {
    /// Left logical equivalence.
    Lle,
    /// Right weakening.
    Rw,
    Refl,
    And,
    Or,
    /// Cautious monotonicity.
    Cm,
    /// Rational monotonicity.
    Rm,
}

impl Postulate {
    pub const PREFERENTIAL: [Postulate; 6] = [
        Postulate::Lle,
        Postulate::Rw,
        Postulate::Refl,
        Postulate::And,
        Postulate::Or,
        Postulate::Cm,
    ];

    pub const ALL: [Postulate; 7] = [
        Postulate::Lle,
        Postulate::Rw,
        Postulate::Refl,
        Postulate::And,
        Postulate::Or,
        Postulate::Cm,
        Postulate::Rm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::Lle => "LLE",
            Postulate::Rw => "RW",
            Postulate::Refl => "Refl",
            Postulate::And => "And",
            Postulate::Or => "Or",
            Postulate::Cm => "CM",
            Postulate::Rm => "RM",
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A postulate instance whose premises hold and conclusion fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateViolation {
    pub postulate: Postulate,
    pub method: Method,
    /// The failing conclusion, rendered.
    pub conclusion: String,
    /// The `(A, B, C)` triple it came from, rendered.
    pub triple: [String; 3],
}

impl fmt::Display for PostulateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} A={} B={} C={} fails {}",
            self.method,
            self.postulate,
            self.triple[0],
            self.triple[1],
            self.triple[2],
            self.conclusion
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PostulateReport {
    /// Instances whose premises held, per postulate.
    pub instances: BTreeMap<Postulate, usize>,
    pub violations: Vec<PostulateViolation>,
}

impl PostulateReport {
    pub fn violations_of(&self, p: Postulate) -> impl Iterator<Item = &PostulateViolation> {
        self.violations.iter().filter(move |v| v.postulate == p)
    }
}

/// Checks `postulates` for `method` on each `(A, B, C)` triple.
///
/// For the rules whose side condition is classical (LLE, RW) the triple
/// is turned into an instance by construction: `A` is rewritten into
/// equivalent forms, and `C` is weakened to `B | C`.
pub fn check_postulates(
    r: &Reasoner,
    method: Method,
    postulates: &[Postulate],
    sample: &[(Formula, Formula, Formula)],
) -> Result<PostulateReport> {
    let sig = r.kb().signature();
    let ask = |a: &Formula, b: &Formula| r.accepts(method, &Conditional::new(a.clone(), b.clone()));
    let mut report = PostulateReport::default();
    for (a, b, c) in sample {
        let triple = [a, b, c].map(|f| f.display(sig).to_string());
        let mut record =
            |postulate: Postulate, premises: bool, conclusion: (Formula, Formula), holds: bool| {
                if !premises {
                    return;
                }
                *report.instances.entry(postulate).or_default() += 1;
                if !holds {
                    report.violations.push(PostulateViolation {
                        postulate,
                        method,
                        conclusion: Conditional::new(conclusion.0, conclusion.1).display(sig),
                        triple: triple.clone(),
                    });
                }
            };
        for &p in postulates {
            match p {
                Postulate::Refl => {
                    record(p, true, (a.clone(), a.clone()), ask(a, a)?);
                }
                Postulate::Lle => {
                    let premise = ask(a, c)?;
                    let mut rewrites = vec![
                        prop::not(prop::not(a.clone())),
                        prop::and(a.clone(), a.clone()),
                        prop::or(a.clone(), prop::and(a.clone(), b.clone())),
                    ];
                    if prop::equivalent(a, b) {
                        rewrites.push(b.clone());
                    }
                    for a2 in rewrites {
                        let holds = !premise || ask(&a2, c)?;
                        record(p, premise, (a2, c.clone()), holds);
                    }
                }
                Postulate::Rw => {
                    let premise = ask(a, b)?;
                    let mut weaker = vec![prop::or(b.clone(), c.clone())];
                    if prop::entails([b], c) {
                        weaker.push(c.clone());
                    }
                    for c2 in weaker {
                        let holds = !premise || ask(a, &c2)?;
                        record(p, premise, (a.clone(), c2), holds);
                    }
                }
                Postulate::And => {
                    let premise = ask(a, b)? && ask(a, c)?;
                    let both = prop::and(b.clone(), c.clone());
                    let holds = !premise || ask(a, &both)?;
                    record(p, premise, (a.clone(), both), holds);
                }
                Postulate::Or => {
                    let premise = ask(a, c)? && ask(b, c)?;
                    let either = prop::or(a.clone(), b.clone());
                    let holds = !premise || ask(&either, c)?;
                    record(p, premise, (either, c.clone()), holds);
                }
                Postulate::Cm => {
                    let premise = ask(a, b)? && ask(a, c)?;
                    let ab = prop::and(a.clone(), b.clone());
                    let holds = !premise || ask(&ab, c)?;
                    record(p, premise, (ab, c.clone()), holds);
                }
                Postulate::Rm => {
                    let premise = ask(a, c)? && !ask(a, &prop::not(b.clone()))?;
                    let ab = prop::and(a.clone(), b.clone());
                    let holds = !premise || ask(&ab, c)?;
                    record(p, premise, (ab, c.clone()), holds);
                }
            }
        }
    }
    Ok(report)
}

/// MP membership straight from the definition: every subset of the KB is
/// tested for consistency with the antecedent and compared against every
/// other consistent subset. No pruning and no caching.
pub fn oracle_mp_query(kb: &KnowledgeBase, q: &Conditional) -> Result<bool> {
    let cap = Limits::default().max_defaults;
    if kb.len() > cap {
        return Err(Error::DefaultCap {
            defaults: kb.len(),
            cap,
        });
    }
    let rt = compute_ranking(kb);
    if rank_of_formula(&q.antecedent, &rt, kb).is_infinite() {
        return Ok(true);
    }
    let consistent: Vec<DefaultSet> = kb
        .all()
        .subsets()
        .filter(|&d| {
            let mut fs = kb.materialize(d);
            fs.push(q.antecedent.clone());
            prop::is_consistent(&fs)
        })
        .collect();
    Ok(consistent
        .iter()
        .filter(|&&d| !consistent.iter().any(|&b| mp_less_serious(d, b, &rt)))
        .all(|&d| {
            let mut fs = kb.materialize(d);
            fs.push(q.antecedent.clone());
            prop::entails(&fs, &q.consequent)
        }))
}

/// Parameters of a randomized run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub kbs: usize,
    pub queries_per_kb: usize,
    pub max_atoms: usize,
    pub max_defaults: usize,
    pub depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            kbs: 200,
            queries_per_kb: 5,
            max_atoms: 4,
            max_defaults: 6,
            depth: 3,
        }
    }
}

/// Names of the checks run on every trial.
pub const CHECKS: [&str; 10] = [
    "rc-model",
    "mp-model",
    "inclusions",
    "mp-oracle",
    "brewka",
    "heights",
    "coarseness",
    "postulates-mp",
    "postulates-mpr",
    "postulates-rm-mpr",
];

/// The result of checking one knowledge base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub kb_text: String,
    pub queries: usize,
    /// Cases examined per check.
    pub cases: BTreeMap<&'static str, usize>,
    /// `(check, witness)` for every failed case.
    pub failures: Vec<(&'static str, String)>,
}

impl Trial {
    pub fn line(&self) -> String {
        let cases: Vec<String> = self.cases.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        format!(
            "trial seed={} defaults={} queries={} failures={} cases={}",
            self.seed,
            self.kb_text.lines().count(),
            self.queries,
            self.failures.len(),
            cases.join(",")
        )
    }
}

/// Runs every check on `kb` with queries and triples drawn from `gen`.
pub fn check_kb(kb: KnowledgeBase, gen: &mut KbGenerator, queries: usize) -> Result<Trial> {
    let mut kb = kb;
    let kb_text = kb.to_text();
    let qs: Vec<Conditional> = (0..queries).map(|_| gen.query_for(&mut kb)).collect();
    let triples: Vec<(Formula, Formula, Formula)> = (0..queries)
        .map(|_| {
            (
                gen.formula_for(&mut kb),
                gen.formula_for(&mut kb),
                gen.formula_for(&mut kb),
            )
        })
        .collect();
    let r = Reasoner::new(kb, Limits::default())?;
    let (kb, rt) = (r.kb(), r.ranking());
    let sig = kb.signature();
    let mut cases: BTreeMap<&'static str, usize> = CHECKS.iter().map(|&c| (c, 0)).collect();
    let mut failures = Vec::new();
    let mut tally = |check: &'static str, ok: bool, witness: &dyn Fn() -> String| {
        *cases.get_mut(check).expect("known check") += 1;
        if !ok {
            failures.push((check, witness()));
        }
    };

    let m = r.min_canonical()?;
    let n = semantics::functor_f(&m, kb, rt);
    for q in &qs {
        let text = || q.display(sig);
        let matrix = compare_all(&r, q)?;
        tally("rc-model", matrix.rc == m.satisfies(q)?, &text);
        tally("mp-model", matrix.mp == n.satisfies(q)?, &text);
        let broken = matrix.violations();
        tally("inclusions", broken.is_empty(), &|| {
            format!("{} breaks {}", text(), broken.join(", "))
        });
        tally("mp-oracle", matrix.mp == oracle_mp_query(kb, q)?, &text);
    }

    let all: Vec<u64> = prop::all_valuations(sig, Limits::default().max_atoms)?
        .map(|v| v.bits())
        .collect();
    let violated = |bits: u64| kb.all().difference(kb.satisfied_by(bits));
    for &x in &all {
        for &y in &all {
            let direct = brewka_subset_less(x, y, kb, rt);
            let via_violations = mp_less_serious(violated(x), violated(y), rt);
            tally("brewka", direct == via_violations, &|| {
                format!("valuations {x:b} {y:b}")
            });
        }
    }
    tally("heights", chain_heights(&n) == layer_heights(&n), &|| {
        "class heights differ".into()
    });
    for d in kb.all().subsets() {
        for b in kb.all().subsets() {
            let ok = !mp_less_serious(d, b, rt) || lex_less_serious(d, b, rt);
            tally("coarseness", ok, &|| format!("{d} {b}"));
        }
    }

    let mp = check_postulates(&r, Method::Mp, &Postulate::PREFERENTIAL, &triples)?;
    let mpr = check_postulates(&r, Method::Mpr, &Postulate::PREFERENTIAL, &triples)?;
    let rm = check_postulates(&r, Method::Mpr, &[Postulate::Rm], &triples)?;
    for (check, report) in [
        ("postulates-mp", &mp),
        ("postulates-mpr", &mpr),
        ("postulates-rm-mpr", &rm),
    ] {
        let n: usize = report.instances.values().sum();
        *cases.get_mut(check).expect("known check") += n;
        failures.extend(report.violations.iter().map(|v| (check, v.to_string())));
    }

    Ok(Trial {
        seed: gen.seed,
        kb_text,
        queries: qs.len(),
        cases,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub trials: Vec<Trial>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = (&Trial, &(&'static str, String))> {
        self.trials
            .iter()
            .flat_map(|t| t.failures.iter().map(move |f| (t, f)))
    }

    /// Cases and failures per check, summed over trials.
    pub fn totals(&self) -> BTreeMap<&'static str, (usize, usize)> {
        let mut totals: BTreeMap<&'static str, (usize, usize)> =
            CHECKS.iter().map(|&c| (c, (0, 0))).collect();
        for t in &self.trials {
            for (check, n) in &t.cases {
                totals.get_mut(check).expect("known check").0 += n;
            }
            for (check, _) in &t.failures {
                totals.get_mut(check).expect("known check").1 += 1;
            }
        }
        totals
    }

    /// One line per trial, then one `failure` line per failed case.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.trials.iter().map(Trial::line).collect();
        out.extend(self.failures().map(|(t, (check, witness))| {
            format!("failure seed={} check={check} {witness}", t.seed)
        }));
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "summary seed={} kbs={} queries_per_kb={}\n",
            self.config.seed,
            self.trials.len(),
            self.config.queries_per_kb
        );
        for (check, (cases, failed)) in self.totals() {
            out.push_str(&format!(
                "  {check:<18} cases={cases:<7} failures={failed}\n"
            ));
        }
        out
    }
}

/// Trial `i` uses seed `config.seed + i`, so any trial can be rerun alone.
pub fn run_suite(config: SuiteConfig) -> Result<SuiteReport> {
    let mut trials = Vec::with_capacity(config.kbs);
    for i in 0..config.kbs as u64 {
        let mut gen = KbGenerator::with_bounds(
            config.seed.wrapping_add(i),
            config.max_atoms,
            config.max_defaults,
            config.depth,
        );
        let kb = gen.satisfiable_kb();
        trials.push(check_kb(kb, &mut gen, config.queries_per_kb)?);
    }
    Ok(SuiteReport { config, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn generator_is_deterministic() {
        let a = KbGenerator::new(7).kb_text();
        let b = KbGenerator::new(7).kb_text();
        assert_eq!(a, b);
        let kb = KbGenerator::new(7).satisfiable_kb();
        assert!(kb.len() <= 7 && kb.signature().len() <= 4);
    }

    #[test]
    fn oracle_examples() {
        let mut kb = examples::employed_students();
        let q = kb
            .parse_query("Employee & Student |~ Young & !Pay_Taxes")
            .unwrap();
        assert!(!oracle_mp_query(&kb, &q).unwrap());
        let mut kb = examples::bright_students();
        let q = kb.parse_query("Employee & Student |~ Bright").unwrap();
        assert!(oracle_mp_query(&kb, &q).unwrap());
    }

    #[test]
    fn matrix_for_employed_students() {
        let mut kb = examples::employed_students();
        let q = kb
            .parse_query("Employee & Student |~ Young & !Pay_Taxes")
            .unwrap();
        let r = Reasoner::new(kb, Limits::default()).unwrap();
        let m = compare_all(&r, &q).unwrap();
        assert_eq!(
            (m.rc, m.mp, m.lc, m.basic_relevant, m.minimal_relevant),
            (false, false, true, false, false)
        );
        assert!(m.violations().is_empty());
    }

    #[test]
    fn rational_monotonicity_fails_for_mp_on_merry_students() {
        let mut kb = examples::merry_students();
        let a = kb.parse_formula("Student & Adult").unwrap();
        let b = kb.parse_formula("!Young").unwrap();
        let c = kb.parse_formula("Young <-> Merry").unwrap();
        let r = Reasoner::new(kb, Limits::default()).unwrap();
        let sample = [(a, b, c)];
        let mp = check_postulates(&r, Method::Mp, &[Postulate::Rm], &sample).unwrap();
        assert_eq!(mp.violations_of(Postulate::Rm).count(), 1);
        let lc = check_postulates(&r, Method::Lc, &[Postulate::Rm], &sample).unwrap();
        assert!(lc.violations.is_empty());
        let refl = check_postulates(&r, Method::Mp, &[Postulate::Refl], &sample).unwrap();
        assert_eq!(refl.instances[&Postulate::Refl], 1);
        assert!(refl.violations.is_empty());
    }

    #[test]
    fn small_suite_is_clean() {
        let report = run_suite(SuiteConfig {
            seed: 11,
            kbs: 5,
            ..SuiteConfig::default()
        })
        .unwrap();
        assert_eq!(report.failures().count(), 0, "{:#?}", report.lines());
        assert_eq!(report.lines().len(), 5);
        assert!(report.summary().starts_with("summary seed=11 kbs=5"));
    }
}
