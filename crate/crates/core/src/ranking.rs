//! Rational closure: the exceptionality chain, default and formula ranks,
//! and rational-closure membership.
//!
//! Exceptionality is decided through the material counterpart: `A` is
//! exceptional for `C` iff the materialization of `C` classically entails
//! `!A`.

use std::fmt;

use crate::defaults::DefaultSet;
use crate::kb::{Conditional, KnowledgeBase};
use crate::prop::{self, Formula};

/// A rank in the rational closure. `Infinite` sits above every finite rank
/// and is not below itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rank::Finite(i) => Some(i),
            Rank::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Rank::Infinite
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(i) => write!(f, "{i}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// The chain `C_0 ⊇ C_1 ⊇ … ⊇ C_k` together with per-default ranks.
///
/// `chain[0]` is the whole KB and `chain[order]` is the fixpoint, i.e. the
/// defaults without a finite rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingTable {
    chain: Vec<DefaultSet>,
    default_rank: Vec<Rank>,
    order: usize,
    strata: Vec<(Rank, DefaultSet)>,
}

impl RankingTable {
    pub fn chain(&self) -> &[DefaultSet] {
        &self.chain
    }

    /// The order `k`: least `i` with `C_i − C_{i+1} = ∅`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank_of_default(&self, index: usize) -> Rank {
        self.default_rank[index]
    }

    pub fn default_ranks(&self) -> &[Rank] {
        &self.default_rank
    }

    /// Defaults without a finite rank.
    pub fn infinite(&self) -> DefaultSet {
        self.chain[self.order]
    }

    /// Rank slices from most to least serious: unranked first, then
    /// `k-1` down to `0`. Slice `k` is always empty and is omitted.
    pub fn strata(&self) -> &[(Rank, DefaultSet)] {
        &self.strata
    }

    /// Members of `set` with rank exactly `rank`.
    pub fn slice(&self, set: DefaultSet, rank: Rank) -> DefaultSet {
        set.iter()
            .filter(|&i| self.default_rank[i] == rank)
            .collect()
    }
}

/// Does the materialization of `c` classically entail `!a`?
pub fn is_exceptional(a: &Formula, c: DefaultSet, kb: &KnowledgeBase) -> bool {
    let material = kb.materialize(c);
    prop::entails(&material, &prop::not(a.clone()))
}

/// The defaults of `c` whose antecedent is exceptional for `c`.
fn exceptional_part(c: DefaultSet, kb: &KnowledgeBase) -> DefaultSet {
    let material = kb.materialize(c);
    c.iter()
        .filter(|&i| prop::entails(&material, &prop::not(kb.get(i).antecedent.clone())))
        .collect()
}

pub fn compute_ranking(kb: &KnowledgeBase) -> RankingTable {
    let mut chain = vec![kb.all()];
    loop {
        let current = *chain.last().expect("chain starts non-empty");
        let next = exceptional_part(current, kb);
        if next == current {
            break;
        }
        chain.push(next);
    }
    let order = chain.len() - 1;
    let mut default_rank = vec![Rank::Infinite; kb.len()];
    for (i, pair) in chain.windows(2).enumerate() {
        for d in pair[0].difference(pair[1]).iter() {
            default_rank[d] = Rank::Finite(i);
        }
    }
    let mut strata = vec![(Rank::Infinite, chain[order])];
    for i in (0..order).rev() {
        strata.push((Rank::Finite(i), chain[i].difference(chain[i + 1])));
    }
    RankingTable {
        chain,
        default_rank,
        order,
        strata,
    }
}

/// Least `i` such that `a` is not exceptional for `C_i`.
pub fn rank_of_formula(a: &Formula, rt: &RankingTable, kb: &KnowledgeBase) -> Rank {
    rt.chain
        .iter()
        .position(|&c| !is_exceptional(a, c, kb))
        .map_or(Rank::Infinite, Rank::Finite)
}

/// Membership in the rational closure given precomputed ranks of `A` and
/// `A & !B`.
pub fn rc_accepts(rank_a: Rank, rank_a_not_b: Rank) -> bool {
    rank_a.is_infinite() || rank_a < rank_a_not_b
}

pub fn rc_query(kb: &KnowledgeBase, rt: &RankingTable, q: &Conditional) -> bool {
    let rank_a = rank_of_formula(&q.antecedent, rt, kb);
    if rank_a.is_infinite() {
        return true;
    }
    rc_accepts(rank_a, rank_of_formula(&q.violation(), rt, kb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn set(xs: &[usize]) -> DefaultSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn rank_ordering() {
        assert!(Rank::Finite(100) < Rank::Infinite);
        assert!(!(Rank::Infinite < Rank::Infinite));
        assert_eq!(Rank::Infinite.to_string(), "inf");
    }

    #[test]
    fn students_ranking() {
        let kb = examples::students();
        let rt = compute_ranking(&kb);
        assert_eq!(
            rt.default_ranks(),
            [Rank::Finite(0), Rank::Finite(0), Rank::Finite(1)]
        );
        assert_eq!(rt.chain(), [kb.all(), set(&[2]), DefaultSet::EMPTY]);
        assert_eq!(rt.order(), 2);
    }

    #[test]
    fn bright_students_ranking() {
        let kb = examples::bright_students();
        let rt = compute_ranking(&kb);
        let f = Rank::Finite;
        assert_eq!(rt.default_ranks(), [f(0), f(0), f(0), f(1)]);
    }

    #[test]
    fn residence_ranking_has_unranked_defaults() {
        let kb = examples::residence();
        let rt = compute_ranking(&kb);
        let f = Rank::Finite;
        let inf = Rank::Infinite;
        assert_eq!(rt.default_ranks(), [f(0), f(0), inf, inf, inf]);
        assert_eq!(rt.order(), 1);
        assert_eq!(rt.infinite(), set(&[2, 3, 4]));
    }

    #[test]
    fn empty_kb() {
        let kb = KnowledgeBase::new();
        let rt = compute_ranking(&kb);
        assert_eq!(rt.order(), 0);
        assert_eq!(rt.chain(), [DefaultSet::EMPTY]);
    }

    #[test]
    fn exceptionality_examples() {
        let mut kb = examples::students();
        let student = kb.parse_formula("Student").unwrap();
        let emp_student = kb.parse_formula("Employee & Student").unwrap();
        assert!(!is_exceptional(&student, kb.all(), &kb));
        assert!(is_exceptional(&emp_student, kb.all(), &kb));
        assert!(is_exceptional(&Formula::False, kb.all(), &kb));
        assert!(is_exceptional(&Formula::False, DefaultSet::EMPTY, &kb));
    }

    #[test]
    fn formula_ranks() {
        let mut kb = examples::students();
        let rt = compute_ranking(&kb);
        let student = kb.parse_formula("Student").unwrap();
        let emp_student = kb.parse_formula("Employee & Student").unwrap();
        assert_eq!(rank_of_formula(&student, &rt, &kb), Rank::Finite(0));
        assert_eq!(rank_of_formula(&emp_student, &rt, &kb), Rank::Finite(1));
        assert_eq!(rank_of_formula(&Formula::False, &rt, &kb), Rank::Infinite);
    }

    #[test]
    fn rational_closure_queries() {
        let mut kb = examples::students();
        let yes = kb.parse_query("Student & Italian |~ !Pay_Taxes").unwrap();
        let no = kb.parse_query("Employee & Student |~ Young").unwrap();
        let no_neg = kb.parse_query("Employee & Student |~ !Young").unwrap();
        let taxes = kb
            .parse_query("Employee & Student & Italian |~ Pay_Taxes")
            .unwrap();
        let vacuous = kb.parse_query("false |~ Young & !Young").unwrap();
        let rt = compute_ranking(&kb);
        assert!(rc_query(&kb, &rt, &yes));
        assert!(!rc_query(&kb, &rt, &no));
        assert!(!rc_query(&kb, &rt, &no_neg));
        assert!(rc_query(&kb, &rt, &taxes));
        assert!(rc_query(&kb, &rt, &vacuous));
    }
}
