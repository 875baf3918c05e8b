use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use crate::closures::{self, BasesAnswer, RelevantAnswer, RelevantVariant, Seriousness};
use crate::defaults::DefaultSet;
use crate::error::{Error, Result};
use crate::kb::{Conditional, KnowledgeBase};
use crate::prop::{Formula, Valuation};
use crate::ranking::{self, Rank, RankingTable};
use crate::semantics::{self, PreferentialInterpretation, RankedInterpretation};

/// Size caps protecting the exponential procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest signature whose valuations are enumerated.
    pub max_atoms: usize,
    /// Largest knowledge base whose subsets are enumerated.
    pub max_defaults: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atoms: 20,
            max_defaults: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Rc,
    Mp,
    Lc,
    BasicRelevant,
    MinimalRelevant,
    Mpr,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Rc,
        Method::Mp,
        Method::Lc,
        Method::BasicRelevant,
        Method::MinimalRelevant,
        Method::Mpr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rc => "rc",
            Method::Mp => "mp",
            Method::Lc => "lc",
            Method::BasicRelevant => "basic-relevant",
            Method::MinimalRelevant => "minimal-relevant",
            Method::Mpr => "mpr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// What an engine looked at to reach its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Ranks {
        antecedent: Rank,
        violation: Rank,
    },
    Bases(BasesAnswer),
    Relevant(RelevantAnswer),
    /// The minimal antecedent worlds of the ranked MP model and their height.
    Worlds {
        height: Option<usize>,
        minimal: Vec<Valuation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub method: Method,
    pub accepted: bool,
    pub evidence: Evidence,
}

/// A knowledge base with its ranking, size caps and a formula-rank cache.
#[derive(Debug)]
pub struct Reasoner {
    kb: KnowledgeBase,
    ranking: RankingTable,
    limits: Limits,
    ranks: RwLock<HashMap<Formula, Rank>>,
}

impl Reasoner {
    /// Fails with [`Error::DefaultCap`] or [`Error::AtomCap`] when the KB
    /// exceeds `limits`.
    pub fn new(kb: KnowledgeBase, limits: Limits) -> Result<Self> {
        if kb.len() > limits.max_defaults {
            return Err(Error::DefaultCap {
                defaults: kb.len(),
                cap: limits.max_defaults,
            });
        }
        check_atoms(&kb, limits)?;
        let ranking = ranking::compute_ranking(&kb);
        Ok(Reasoner {
            kb,
            ranking,
            limits,
            ranks: RwLock::new(HashMap::new()),
        })
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn ranking(&self) -> &RankingTable {
        &self.ranking
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Parses `A |~ B`, extending the signature with any new atoms.
    pub fn parse_query(&mut self, text: &str) -> Result<Conditional> {
        let q = self.kb.parse_query(text)?;
        check_atoms(&self.kb, self.limits)?;
        Ok(q)
    }

    pub fn parse_formula(&mut self, text: &str) -> Result<Formula> {
        let f = self.kb.parse_formula(text)?;
        check_atoms(&self.kb, self.limits)?;
        Ok(f)
    }

    pub fn rank(&self, a: &Formula) -> Rank {
        if let Some(&r) = self.ranks.read().expect("rank cache poisoned").get(a) {
            return r;
        }
        let r = ranking::rank_of_formula(a, &self.ranking, &self.kb);
        self.ranks
            .write()
            .expect("rank cache poisoned")
            .insert(a.clone(), r);
        r
    }

    pub fn accepts(&self, method: Method, q: &Conditional) -> Result<bool> {
        Ok(self.query(method, q)?.accepted)
    }

    pub fn query(&self, method: Method, q: &Conditional) -> Result<QueryOutcome> {
        let (accepted, evidence) = match method {
            Method::Rc => {
                let antecedent = self.rank(&q.antecedent);
                let violation = self.rank(&q.violation());
                (
                    ranking::rc_accepts(antecedent, violation),
                    Evidence::Ranks {
                        antecedent,
                        violation,
                    },
                )
            }
            Method::Mp | Method::Lc => {
                let ordering = if method == Method::Mp {
                    Seriousness::Multipreference
                } else {
                    Seriousness::Lexicographic
                };
                let ans = closures::bases_query(&self.kb, &self.ranking, q, ordering);
                (ans.accepted, Evidence::Bases(ans))
            }
            Method::BasicRelevant | Method::MinimalRelevant => {
                let variant = if method == Method::BasicRelevant {
                    RelevantVariant::Basic
                } else {
                    RelevantVariant::Minimal
                };
                let ans = closures::relevant_answer(&self.kb, &self.ranking, q, variant);
                (ans.accepted, Evidence::Relevant(ans))
            }
            Method::Mpr => {
                let model = self.mpr_model()?;
                let ids = model.minimal_worlds(&q.antecedent)?;
                let accepted = model.satisfies(q)?;
                let minimal: Vec<Valuation> =
                    ids.iter().map(|&id| model.worlds()[id].valuation).collect();
                let height = ids.first().map(|&id| model.rank(id));
                (accepted, Evidence::Worlds { height, minimal })
            }
        };
        Ok(QueryOutcome {
            method,
            accepted,
            evidence,
        })
    }

    pub fn bases(&self, a: &Formula, ordering: Seriousness) -> Vec<DefaultSet> {
        closures::enumerate_bases(&self.kb, &self.ranking, a, ordering)
    }

    pub fn min_canonical(&self) -> Result<RankedInterpretation> {
        semantics::build_min_canonical(&self.kb, &self.ranking, self.limits.max_atoms)
    }

    pub fn mp_model(&self) -> Result<PreferentialInterpretation> {
        Ok(semantics::functor_f(
            &self.min_canonical()?,
            &self.kb,
            &self.ranking,
        ))
    }

    pub fn mpr_model(&self) -> Result<RankedInterpretation> {
        semantics::mpr_model(&self.kb, &self.ranking, self.limits.max_atoms)
    }
}

fn check_atoms(kb: &KnowledgeBase, limits: Limits) -> Result<()> {
    let atoms = kb.signature().len();
    if atoms > limits.max_atoms {
        return Err(Error::AtomCap {
            atoms,
            cap: limits.max_atoms,
        });
    }
    Ok(())
}
