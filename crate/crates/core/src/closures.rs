//! Syntactic closures built on maxiconsistent sets of defaults.
//!
//! Both the lexicographic closure and the multipreference (MP) closure
//! accept `A |~ B` when `B` follows classically from `A` together with the
//! material counterpart of every *basis* for `A`. They differ only in how
//! candidate sets are compared: by the number of defaults per rank (LC) or
//! by set inclusion per rank (MP). Relevant closure instead removes
//! low-ranked defaults that take part in some conflict with `A`.

use std::cmp::Ordering;
use std::fmt;

use crate::defaults::DefaultSet;
use crate::kb::{Conditional, KnowledgeBase};
use crate::prop::{self, Formula};
use crate::ranking::{rank_of_formula, Rank, RankingTable};

/// A default set split by rank, most serious part first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPartitionTuple {
    pub infinite: DefaultSet,
    /// Parts for ranks `k-1` down to `0`.
    pub finite: Vec<DefaultSet>,
}

impl RankPartitionTuple {
    /// All parts, unranked first.
    pub fn parts(&self) -> impl Iterator<Item = DefaultSet> + '_ {
        std::iter::once(self.infinite).chain(self.finite.iter().copied())
    }

    pub fn part(&self, rank: Rank) -> DefaultSet {
        match rank {
            Rank::Infinite => self.infinite,
            Rank::Finite(i) => {
                let k = self.finite.len();
                if i < k {
                    self.finite[k - 1 - i]
                } else {
                    DefaultSet::EMPTY
                }
            }
        }
    }

    pub fn counts(&self) -> NumericTuple {
        NumericTuple(self.parts().map(DefaultSet::len).collect())
    }
}

impl fmt::Display for RankPartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().map(|p| p.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// `<n_0, n_1, …, n_k>`: unranked count first, then counts for ranks
/// `k-1` down to `0`. Compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumericTuple(pub Vec<usize>);

pub fn partition(d: DefaultSet, rt: &RankingTable) -> RankPartitionTuple {
    let mut parts = rt.strata().iter().map(|&(_, s)| d.intersection(s));
    let infinite = parts.next().unwrap_or_default();
    RankPartitionTuple {
        infinite,
        finite: parts.collect(),
    }
}

/// Lexicographic-closure seriousness: `d ≺ b` on count tuples.
pub fn lex_less_serious(d: DefaultSet, b: DefaultSet, rt: &RankingTable) -> bool {
    for &(_, stratum) in rt.strata() {
        match d
            .intersection(stratum)
            .len()
            .cmp(&b.intersection(stratum).len())
        {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

/// MP seriousness `d ≺^MP b`: at the most serious rank where the parts
/// differ, `d`'s part must be a strict subset of `b`'s.
pub fn mp_less_serious(d: DefaultSet, b: DefaultSet, rt: &RankingTable) -> bool {
    mp_less_by_strata(d, b, rt.strata())
}

/// The MP comparison over an arbitrary stratification, listed from most
/// to least serious.
pub fn mp_less_by_strata(d: DefaultSet, b: DefaultSet, strata: &[(Rank, DefaultSet)]) -> bool {
    for &(_, stratum) in strata {
        let (dp, bp) = (d.intersection(stratum), b.intersection(stratum));
        if dp != bp {
            return dp.is_strict_subset(bp);
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Seriousness {
    Lexicographic,
    Multipreference,
}

impl Seriousness {
    pub fn less(self, d: DefaultSet, b: DefaultSet, rt: &RankingTable) -> bool {
        match self {
            Seriousness::Lexicographic => lex_less_serious(d, b, rt),
            Seriousness::Multipreference => mp_less_serious(d, b, rt),
        }
    }
}

/// The inclusion-maximal sets of defaults whose materialization is
/// consistent with `a`, in increasing bit order.
///
/// Each model of `a` satisfies some set of defaults, and a set is
/// consistent with `a` iff it is contained in one of those; so the
/// maximal sets are the maximal "satisfied" sets over models of `a`.
pub fn maximal_consistent_sets(kb: &KnowledgeBase, a: &Formula) -> Vec<DefaultSet> {
    let mask = kb.defaults().iter().fold(a.atom_mask(), |m, d| {
        m | d.antecedent.atom_mask() | d.consequent.atom_mask()
    });
    let mut seen: Vec<DefaultSet> = (0..1u64 << mask.count_ones())
        .map(|c| prop::deposit(c, mask))
        .filter(|&bits| a.holds(bits))
        .map(|bits| kb.satisfied_by(bits))
        .collect();
    seen.sort();
    seen.dedup();
    seen.iter()
        .copied()
        .filter(|s| !seen.iter().any(|t| s.is_strict_subset(*t)))
        .collect()
}

/// Every basis for `a` under the given seriousness ordering, sorted.
///
/// Any set that is strictly less serious than a consistent set is also
/// less serious than the maximal consistent set containing it, so only
/// inclusion-maximal candidates need comparing.
pub fn enumerate_bases(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    a: &Formula,
    ordering: Seriousness,
) -> Vec<DefaultSet> {
    let candidates = maximal_consistent_sets(kb, a);
    let mut bases: Vec<DefaultSet> = candidates
        .iter()
        .copied()
        .filter(|&d| !candidates.iter().any(|&b| ordering.less(d, b, rt)))
        .collect();
    sort_index_sets(&mut bases);
    bases
}

/// Sorts by the ascending member list, e.g. `{0,1,3}` before `{2,3}`.
pub fn sort_index_sets(sets: &mut [DefaultSet]) {
    sets.sort_by_key(|s| s.iter().collect::<Vec<_>>());
}

/// Outcome of a basis-driven query, with enough evidence to recheck it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasesAnswer {
    pub accepted: bool,
    pub antecedent_rank: Rank,
    pub bases: Vec<DefaultSet>,
    /// Bases under which the consequent does not follow.
    pub counterexamples: Vec<DefaultSet>,
}

pub fn bases_query(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    q: &Conditional,
    ordering: Seriousness,
) -> BasesAnswer {
    let antecedent_rank = rank_of_formula(&q.antecedent, rt, kb);
    if antecedent_rank.is_infinite() {
        return BasesAnswer {
            accepted: true,
            antecedent_rank,
            bases: Vec::new(),
            counterexamples: Vec::new(),
        };
    }
    let bases = enumerate_bases(kb, rt, &q.antecedent, ordering);
    let counterexamples: Vec<DefaultSet> = bases
        .iter()
        .copied()
        .filter(|&d| !follows_from(kb, d, &q.antecedent, &q.consequent))
        .collect();
    BasesAnswer {
        accepted: counterexamples.is_empty(),
        antecedent_rank,
        bases,
        counterexamples,
    }
}

/// `materialize(d) ∪ {a} ⊨ b`.
pub fn follows_from(kb: &KnowledgeBase, d: DefaultSet, a: &Formula, b: &Formula) -> bool {
    let mut premises = kb.materialize(d);
    premises.push(a.clone());
    prop::entails(&premises, b)
}

pub fn lc_query(kb: &KnowledgeBase, rt: &RankingTable, q: &Conditional) -> bool {
    bases_query(kb, rt, q, Seriousness::Lexicographic).accepted
}

pub fn mp_query(kb: &KnowledgeBase, rt: &RankingTable, q: &Conditional) -> bool {
    bases_query(kb, rt, q, Seriousness::Multipreference).accepted
}

// ---------------------------------------------------------------------------
// Relevant closure

/// An inclusion-minimal set of defaults whose materialization refutes `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub members: DefaultSet,
    pub target: Formula,
}

/// All justifications for `a`, sorted by member list.
pub fn find_justifications(kb: &KnowledgeBase, a: &Formula) -> Vec<Justification> {
    let maximal = maximal_consistent_sets(kb, a);
    let consistent = |s: DefaultSet| maximal.iter().any(|m| s.is_subset(*m));
    let mut found: Vec<DefaultSet> = kb
        .all()
        .subsets()
        .filter(|&s| {
            !consistent(s)
                && s.iter()
                    .all(|d| consistent(s.difference(DefaultSet::EMPTY.with(d))))
        })
        .collect();
    sort_index_sets(&mut found);
    found
        .into_iter()
        .map(|members| Justification {
            members,
            target: a.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelevantVariant {
    /// Every member of every justification is eligible for removal.
    Basic,
    /// Only the lowest-ranked members of each justification are eligible.
    Minimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantAnswer {
    pub accepted: bool,
    pub antecedent_rank: Rank,
    pub justifications: Vec<DefaultSet>,
    /// Defaults eligible for removal.
    pub relevant: DefaultSet,
    pub removed: DefaultSet,
    /// What is left after removal; the consequent is checked against it.
    pub remainder: DefaultSet,
    /// Set when no rank-by-rank removal restored consistency and the
    /// remainder fell back to `K \ R`.
    pub fallback: bool,
}

pub fn relevant_answer(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    q: &Conditional,
    variant: RelevantVariant,
) -> RelevantAnswer {
    let a = &q.antecedent;
    let antecedent_rank = rank_of_formula(a, rt, kb);
    let justifications: Vec<DefaultSet> = find_justifications(kb, a)
        .into_iter()
        .map(|j| j.members)
        .collect();
    let relevant = justifications.iter().fold(DefaultSet::EMPTY, |acc, &j| {
        acc.union(match variant {
            RelevantVariant::Basic => j,
            RelevantVariant::Minimal => lowest_rank_slice(j, rt),
        })
    });
    if antecedent_rank.is_infinite() {
        return RelevantAnswer {
            accepted: true,
            antecedent_rank,
            justifications,
            relevant,
            removed: DefaultSet::EMPTY,
            remainder: kb.all(),
            fallback: false,
        };
    }

    let consistent_with_a = |d: DefaultSet| {
        let mut fs = kb.materialize(d);
        fs.push(a.clone());
        prop::is_consistent(&fs)
    };
    let mut remainder = kb.all();
    let mut fallback = false;
    let mut rank = 0;
    while !consistent_with_a(remainder) {
        if rank >= rt.order() {
            remainder = kb.all().difference(relevant);
            fallback = true;
            break;
        }
        remainder = remainder.difference(rt.slice(relevant, Rank::Finite(rank)));
        rank += 1;
    }
    RelevantAnswer {
        accepted: follows_from(kb, remainder, a, &q.consequent),
        antecedent_rank,
        justifications,
        relevant,
        removed: kb.all().difference(remainder),
        remainder,
        fallback,
    }
}

fn lowest_rank_slice(j: DefaultSet, rt: &RankingTable) -> DefaultSet {
    let lowest = j.iter().map(|d| rt.rank_of_default(d)).min();
    match lowest {
        Some(r) => rt.slice(j, r),
        None => DefaultSet::EMPTY,
    }
}

pub fn relevant_query(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    q: &Conditional,
    variant: RelevantVariant,
) -> bool {
    relevant_answer(kb, rt, q, variant).accepted
}

// ---------------------------------------------------------------------------
// Subset strategy over ranked formulas

/// Strict subset-strategy preference `m1 <_⊆ m2` over the ranked
/// materializations of the KB (unranked defaults form the top rank).
///
/// `m1 ≤ m2` iff every rank has the same satisfied formulas, or at some
/// rank `m1` satisfies a strict superset of `m2` while all higher ranks
/// agree.
pub fn brewka_subset_less(m1: u64, m2: u64, kb: &KnowledgeBase, rt: &RankingTable) -> bool {
    preferred_or_equal(m1, m2, kb, rt) && !preferred_or_equal(m2, m1, kb, rt)
}

fn preferred_or_equal(m1: u64, m2: u64, kb: &KnowledgeBase, rt: &RankingTable) -> bool {
    // ranks ascending, unranked last
    let mut levels: Vec<Rank> = (0..rt.order()).map(Rank::Finite).collect();
    levels.push(Rank::Infinite);
    let satisfied = |m: u64, r: Rank| -> Vec<usize> {
        kb.defaults()
            .iter()
            .filter(|d| rt.rank_of_default(d.index) == r && d.material().holds(m))
            .map(|d| d.index)
            .collect()
    };
    let k1: Vec<Vec<usize>> = levels.iter().map(|&r| satisfied(m1, r)).collect();
    let k2: Vec<Vec<usize>> = levels.iter().map(|&r| satisfied(m2, r)).collect();
    if k1 == k2 {
        return true;
    }
    (0..levels.len()).any(|i| {
        let strict_superset = k2[i].iter().all(|x| k1[i].contains(x)) && k1[i].len() > k2[i].len();
        strict_superset && (i + 1..levels.len()).all(|j| k1[j] == k2[j])
    })
}
