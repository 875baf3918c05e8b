//! Model-theoretic side: the minimal canonical ranked model of the
//! rational closure, the functor `F` that refines it into a preferential
//! MP-model, and the functor `F^R` that collapses a preferential model
//! back into a ranked one by chain height.
//!
//! Worlds range over the knowledge base's current signature, so queries
//! must be parsed (extending the signature) before a model is built.

use crate::closures::mp_less_by_strata;
use crate::defaults::DefaultSet;
use crate::error::{Error, Result};
use crate::kb::{Conditional, KnowledgeBase};
use crate::prop::{self, Formula, Valuation};
use crate::ranking::{Rank, RankingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct World {
    pub id: usize,
    pub valuation: Valuation,
}

impl World {
    pub fn satisfies(&self, f: &Formula) -> bool {
        f.holds(self.valuation.bits())
    }
}

fn check_width(width: usize, f: &Formula) -> Result<()> {
    if f.width() > width {
        return Err(Error::UnresolvedAtom(f.width() - 1));
    }
    Ok(())
}

/// Worlds with an integer rank each; lower is more normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedInterpretation {
    width: usize,
    worlds: Vec<World>,
    ranks: Vec<usize>,
}

impl RankedInterpretation {
    /// `ranks[i]` is the rank of `worlds[i]`; world ids must be `0..n`.
    pub fn new(width: usize, worlds: Vec<World>, ranks: Vec<usize>) -> Self {
        assert_eq!(worlds.len(), ranks.len());
        debug_assert!(worlds.iter().enumerate().all(|(i, w)| w.id == i));
        RankedInterpretation {
            width,
            worlds,
            ranks,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, id: usize) -> usize {
        self.ranks[id]
    }

    /// `k_M(a)`: least rank of a world satisfying `a`; `None` if there is none.
    pub fn formula_rank(&self, a: &Formula) -> Result<Option<usize>> {
        check_width(self.width, a)?;
        Ok(self
            .worlds
            .iter()
            .filter(|w| w.satisfies(a))
            .map(|w| self.ranks[w.id])
            .min())
    }

    /// The lowest-ranked worlds satisfying `a`, by id.
    pub fn minimal_worlds(&self, a: &Formula) -> Result<Vec<usize>> {
        let Some(r) = self.formula_rank(a)? else {
            return Ok(Vec::new());
        };
        Ok(self
            .worlds
            .iter()
            .filter(|w| self.ranks[w.id] == r && w.satisfies(a))
            .map(|w| w.id)
            .collect())
    }

    pub fn satisfies(&self, q: &Conditional) -> Result<bool> {
        check_width(self.width, &q.consequent)?;
        let min = self.minimal_worlds(&q.antecedent)?;
        Ok(min
            .iter()
            .all(|&id| self.worlds[id].satisfies(&q.consequent)))
    }
}

/// Worlds under a strict partial order.
///
/// The order is stored over classes of worlds: two worlds in the same
/// class are incomparable and relate identically to every other world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferentialInterpretation {
    width: usize,
    worlds: Vec<World>,
    class_of: Vec<usize>,
    /// `less[c][d]`: class `c` is preferred to class `d`.
    less: Vec<Vec<bool>>,
}

impl PreferentialInterpretation {
    /// Panics unless `less` is irreflexive and transitive.
    pub fn new(
        width: usize,
        worlds: Vec<World>,
        class_of: Vec<usize>,
        less: Vec<Vec<bool>>,
    ) -> Self {
        assert_eq!(worlds.len(), class_of.len());
        assert!(class_of.iter().all(|&c| c < less.len()));
        let n = PreferentialInterpretation {
            width,
            worlds,
            class_of,
            less,
        };
        assert!(
            n.is_strict_partial_order(),
            "preference relation is not a strict partial order"
        );
        n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn class_count(&self) -> usize {
        self.less.len()
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id]
    }

    /// `x < y` on world ids.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.less[self.class_of[x]][self.class_of[y]]
    }

    pub fn class_less(&self, c: usize, d: usize) -> bool {
        self.less[c][d]
    }

    pub fn is_strict_partial_order(&self) -> bool {
        let n = self.less.len();
        (0..n).all(|c| !self.less[c][c])
            && (0..n).all(|a| {
                (0..n)
                    .filter(|&b| self.less[a][b])
                    .all(|b| (0..n).all(|c| !self.less[b][c] || self.less[a][c]))
            })
    }

    /// Worlds satisfying `a` with no preferred world satisfying `a`.
    pub fn minimal_worlds(&self, a: &Formula) -> Result<Vec<usize>> {
        check_width(self.width, a)?;
        let mut present = vec![false; self.less.len()];
        for w in self.worlds.iter().filter(|w| w.satisfies(a)) {
            present[self.class_of[w.id]] = true;
        }
        let minimal: Vec<bool> = (0..self.less.len())
            .map(|c| present[c] && !(0..self.less.len()).any(|d| present[d] && self.less[d][c]))
            .collect();
        Ok(self
            .worlds
            .iter()
            .filter(|w| minimal[self.class_of[w.id]] && w.satisfies(a))
            .map(|w| w.id)
            .collect())
    }

    pub fn satisfies(&self, q: &Conditional) -> Result<bool> {
        check_width(self.width, &q.consequent)?;
        let min = self.minimal_worlds(&q.antecedent)?;
        Ok(min
            .iter()
            .all(|&id| self.worlds[id].satisfies(&q.consequent)))
    }
}

/// `V(w)`: the defaults whose antecedent holds at `w` and consequent fails.
pub fn violations(w: &World, kb: &KnowledgeBase) -> DefaultSet {
    kb.all().difference(kb.satisfied_by(w.valuation.bits()))
}

/// The minimal canonical ranked model over the current signature: one
/// world per valuation compatible with the unranked defaults, placed at
/// the least `i` whose chain member it satisfies.
pub fn build_min_canonical(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    max_atoms: usize,
) -> Result<RankedInterpretation> {
    let width = kb.signature().len();
    let valuations = prop::valuations_of_width(width, max_atoms)?;
    if !prop::is_consistent(&kb.materialize(kb.all())) {
        return Err(Error::UnsatisfiableKb);
    }
    let chain = rt.chain();
    let mut worlds = Vec::new();
    let mut ranks = Vec::new();
    for v in valuations {
        let satisfied = kb.satisfied_by(v.bits());
        if !rt.infinite().is_subset(satisfied) {
            continue;
        }
        let rank = chain
            .iter()
            .position(|c| c.is_subset(satisfied))
            .expect("the fixpoint is satisfied");
        worlds.push(World {
            id: worlds.len(),
            valuation: v,
        });
        ranks.push(rank);
    }
    Ok(RankedInterpretation::new(width, worlds, ranks))
}

/// The stratification induced by a ranked model: each default sits at the
/// rank of its antecedent in `m`, or unranked if no world satisfies it.
/// Ordered most serious first, like [`RankingTable::strata`].
pub fn model_strata(
    m: &RankedInterpretation,
    kb: &KnowledgeBase,
) -> Result<Vec<(Rank, DefaultSet)>> {
    let mut by_rank: Vec<(Rank, DefaultSet)> = Vec::new();
    for d in kb.defaults() {
        let rank = m
            .formula_rank(&d.antecedent)?
            .map_or(Rank::Infinite, Rank::Finite);
        match by_rank.iter_mut().find(|(r, _)| *r == rank) {
            Some((_, set)) => set.insert(d.index),
            None => by_rank.push((rank, DefaultSet::EMPTY.with(d.index))),
        }
    }
    by_rank.sort_by_key(|b| std::cmp::Reverse(b.0));
    Ok(by_rank)
}

/// `F(M)` under an explicit stratification: `x <' y` iff `V(x)` is
/// MP-less serious than `V(y)`.
pub fn functor_f_by(
    m: &RankedInterpretation,
    kb: &KnowledgeBase,
    strata: &[(Rank, DefaultSet)],
) -> PreferentialInterpretation {
    let mut classes: Vec<DefaultSet> = Vec::new();
    let mut class_of = Vec::with_capacity(m.worlds().len());
    for w in m.worlds() {
        let v = violations(w, kb);
        let c = match classes.iter().position(|&c| c == v) {
            Some(c) => c,
            None => {
                classes.push(v);
                classes.len() - 1
            }
        };
        class_of.push(c);
    }
    let less = classes
        .iter()
        .map(|&x| {
            classes
                .iter()
                .map(|&y| mp_less_by_strata(x, y, strata))
                .collect()
        })
        .collect();
    PreferentialInterpretation::new(m.width(), m.worlds().to_vec(), class_of, less)
}

/// `F(M)` with the rational-closure ranks.
pub fn functor_f(
    m: &RankedInterpretation,
    kb: &KnowledgeBase,
    rt: &RankingTable,
) -> PreferentialInterpretation {
    functor_f_by(m, kb, rt.strata())
}

/// Class heights by longest chain: a class with no predecessor has height
/// 0, any other sits one above its highest predecessor.
pub fn chain_heights(n: &PreferentialInterpretation) -> Vec<usize> {
    let c = n.class_count();
    let preds: Vec<Vec<usize>> = (0..c)
        .map(|y| (0..c).filter(|&x| n.class_less(x, y)).collect())
        .collect();
    // Under a transitive order every predecessor has strictly fewer predecessors.
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&y| preds[y].len());
    let mut height = vec![0; c];
    for y in order {
        height[y] = preds[y].iter().map(|&x| height[x] + 1).max().unwrap_or(0);
    }
    height
}

/// Class heights by peeling: `U_0` is the set of minimal classes, `U_i`
/// the minimal classes once `U_0..U_{i-1}` are removed.
pub fn layer_heights(n: &PreferentialInterpretation) -> Vec<usize> {
    let c = n.class_count();
    let mut height = vec![usize::MAX; c];
    let mut layer = 0;
    let mut left = c;
    while left > 0 {
        let current: Vec<usize> = (0..c)
            .filter(|&y| {
                height[y] == usize::MAX
                    && !(0..c).any(|x| height[x] == usize::MAX && n.class_less(x, y))
            })
            .collect();
        assert!(
            !current.is_empty(),
            "finite strict order has minimal elements"
        );
        for &y in &current {
            height[y] = layer;
        }
        left -= current.len();
        layer += 1;
    }
    height
}

/// `F^R(N)`: each world ranked by the height of its class.
pub fn functor_fr(n: &PreferentialInterpretation) -> RankedInterpretation {
    let heights = chain_heights(n);
    debug_assert_eq!(heights, layer_heights(n));
    let ranks = n
        .worlds()
        .iter()
        .map(|w| heights[n.class_of(w.id)])
        .collect();
    RankedInterpretation::new(n.width(), n.worlds().to_vec(), ranks)
}

/// The ranked model `F^R(F(M))` for the minimal canonical `M`.
pub fn mpr_model(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    max_atoms: usize,
) -> Result<RankedInterpretation> {
    let m = build_min_canonical(kb, rt, max_atoms)?;
    Ok(functor_fr(&functor_f(&m, kb, rt)))
}

pub fn mpr_query(
    kb: &KnowledgeBase,
    rt: &RankingTable,
    q: &Conditional,
    max_atoms: usize,
) -> Result<bool> {
    mpr_model(kb, rt, max_atoms)?.satisfies(q)
}

/// Is `M` unchanged by `F^R ∘ F`, where `F` compares violations by the
/// ranks that `M` itself gives to antecedents?
pub fn is_fr_fixed_point(m: &RankedInterpretation, kb: &KnowledgeBase) -> Result<bool> {
    let strata = model_strata(m, kb)?;
    let image = functor_fr(&functor_f_by(m, kb, &strata));
    Ok(image.ranks() == m.ranks())
}
