use defeasible::closures::{self, lex_less_serious, mp_less_serious, Seriousness};
use defeasible::harness::{oracle_mp_query, KbGenerator};
use defeasible::prop::{self, Atom, Backend, Formula, Signature};
use defeasible::ranking::{compute_ranking, rank_of_formula, rc_query};
use defeasible::semantics::build_min_canonical;
use defeasible::{Conditional, KnowledgeBase, Rank};
use proptest::prelude::*;

const ATOMS: u32 = 5;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..ATOMS).prop_map(|i| prop::atom(Atom(i))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(prop::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| prop::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| prop::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| prop::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| prop::iff(a, b)),
        ]
    })
}

fn signature() -> Signature {
    let mut sig = Signature::new();
    for name in ["a", "b", "c", "d", "e"] {
        sig.intern(name);
    }
    sig
}

fn random_kb(seed: u64) -> (KnowledgeBase, KbGenerator) {
    let mut gen = KbGenerator::with_bounds(seed, 4, 6, 3);
    let kb = gen.satisfiable_kb();
    (kb, gen)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn backends_agree(fs in proptest::collection::vec(formula(), 0..4)) {
        let refs: Vec<&Formula> = fs.iter().collect();
        prop_assert_eq!(
            prop::satisfiable_with(Backend::Enumeration, &refs),
            prop::satisfiable_with(Backend::Search, &refs)
        );
    }

    #[test]
    fn deduction_theorem(gamma in proptest::collection::vec(formula(), 0..3), a in formula(), b in formula()) {
        let mut with_a = gamma.clone();
        with_a.push(a.clone());
        prop_assert_eq!(prop::entails(&with_a, &b), prop::entails(&gamma, &prop::implies(a, b)));
    }

    #[test]
    fn tautology_iff_negation_unsatisfiable(f in formula()) {
        let none: [&Formula; 0] = [];
        prop_assert_eq!(prop::entails(none, &f), !prop::is_consistent([&prop::not(f.clone())]));
    }

    #[test]
    fn print_parse_round_trip(f in formula()) {
        let sig = signature();
        let text = f.display(&sig).to_string();
        let mut again = sig.clone();
        let parsed = prop::parse_formula(&text, &mut again).unwrap();
        prop_assert_eq!(parsed, f);
        prop_assert_eq!(again, sig);
    }

    #[test]
    fn kb_text_round_trip(seed in any::<u64>()) {
        let (kb, _) = random_kb(seed);
        let again = KnowledgeBase::parse(&kb.to_text()).unwrap();
        prop_assert_eq!(again.defaults(), kb.defaults());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranking_invariants(seed in any::<u64>()) {
        let (mut kb, mut gen) = random_kb(seed);
        let rt = compute_ranking(&kb);
        prop_assert!(rt.chain().windows(2).all(|w| w[1].is_subset(w[0])));
        prop_assert!(rt.chain().len() <= kb.len() + 1);
        prop_assert!(rt.order() == 0 || !rt.chain()[rt.order() - 1].difference(rt.chain()[rt.order()]).is_empty());
        for _ in 0..5 {
            let a = gen.formula_for(&mut kb);
            let b = gen.formula_for(&mut kb);
            let ra = rank_of_formula(&a, &rt, &kb);
            let rab = rank_of_formula(&prop::and(a.clone(), b), &rt, &kb);
            prop_assert!(ra <= rab);
            let top = Conditional::new(Formula::True, prop::not(a.clone()));
            prop_assert_eq!(rc_query(&kb, &rt, &top), ra >= Rank::Finite(1));
            if !prop::is_consistent([&a]) {
                prop_assert_eq!(ra, Rank::Infinite);
            }
        }
    }

    #[test]
    fn model_ranks_match_formula_ranks(seed in any::<u64>()) {
        let (mut kb, mut gen) = random_kb(seed);
        let formulas: Vec<Formula> = (0..8).map(|_| gen.formula_for(&mut kb)).collect();
        let rt = compute_ranking(&kb);
        let m = build_min_canonical(&kb, &rt, 20).unwrap();
        for a in &formulas {
            let from_model = m.formula_rank(a).unwrap().map_or(Rank::Infinite, Rank::Finite);
            prop_assert_eq!(from_model, rank_of_formula(a, &rt, &kb));
        }
    }

    #[test]
    fn orderings_are_strict_partial_orders(seed in any::<u64>()) {
        let (kb, _) = random_kb(seed);
        let rt = compute_ranking(&kb);
        let subsets: Vec<_> = kb.all().subsets().collect();
        for less in [lex_less_serious, mp_less_serious] {
            for &x in &subsets {
                prop_assert!(!less(x, x, &rt));
                for &y in &subsets {
                    if !less(x, y, &rt) {
                        continue;
                    }
                    prop_assert!(!less(y, x, &rt));
                    for &z in &subsets {
                        if less(y, z, &rt) {
                            prop_assert!(less(x, z, &rt));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bases_and_closures_nest(seed in any::<u64>()) {
        let (mut kb, mut gen) = random_kb(seed);
        let queries: Vec<Conditional> = (0..6).map(|_| gen.query_for(&mut kb)).collect();
        let rt = compute_ranking(&kb);
        for q in &queries {
            if rank_of_formula(&q.antecedent, &rt, &kb).is_infinite() {
                continue;
            }
            let lc = closures::enumerate_bases(&kb, &rt, &q.antecedent, Seriousness::Lexicographic);
            let mp = closures::enumerate_bases(&kb, &rt, &q.antecedent, Seriousness::Multipreference);
            prop_assert!(!lc.is_empty());
            prop_assert!(lc.iter().all(|d| mp.contains(d)));
            let rc = rc_query(&kb, &rt, q);
            let mp_ans = closures::mp_query(&kb, &rt, q);
            let lc_ans = closures::lc_query(&kb, &rt, q);
            prop_assert!(!rc || mp_ans);
            prop_assert!(!mp_ans || lc_ans);
            prop_assert_eq!(mp_ans, oracle_mp_query(&kb, q).unwrap());
        }
    }
}
