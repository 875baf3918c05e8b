//! Conditionals, knowledge bases and the line-oriented KB text format.
//!
//! One default per line, `<formula> |~ <formula>`. `#` starts a comment;
//! blank lines are skipped. Line order fixes the 0-based default index.

use crate::defaults::DefaultSet;
use crate::error::{Error, Result};
use crate::prop::{self, Formula, Signature};

/// `antecedent |~ consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub antecedent: Formula,
    pub consequent: Formula,
    /// Position in the owning knowledge base; 0 for free-standing queries.
    pub index: usize,
}

impl Conditional {
    pub fn new(antecedent: Formula, consequent: Formula) -> Self {
        Conditional {
            antecedent,
            consequent,
            index: 0,
        }
    }

    /// The material counterpart `A -> B`.
    pub fn material(&self) -> Formula {
        prop::implies(self.antecedent.clone(), self.consequent.clone())
    }

    /// `A & !B`: the worlds violating this default.
    pub fn violation(&self) -> Formula {
        prop::and(self.antecedent.clone(), prop::not(self.consequent.clone()))
    }

    pub fn width(&self) -> usize {
        self.antecedent.width().max(self.consequent.width())
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> String {
        format!(
            "{} |~ {}",
            self.antecedent.display(sig),
            self.consequent.display(sig)
        )
    }
}

/// Parses `A |~ B` against `sig`, extending it with new atoms.
pub fn parse_conditional(text: &str, sig: &mut Signature) -> Result<Conditional> {
    let Some(split) = text.find("|~") else {
        return Err(Error::Syntax {
            offset: text.len(),
            message: "expected '|~' between antecedent and consequent".into(),
        });
    };
    let (lhs, rhs) = (&text[..split], &text[split + 2..]);
    if let Some(extra) = rhs.find("|~") {
        return Err(Error::Syntax {
            offset: split + 2 + extra,
            message: "more than one '|~'".into(),
        });
    }
    let mut scratch = sig.clone();
    let antecedent = prop::parse_formula(lhs, &mut scratch)?;
    let consequent = prop::parse_formula(rhs, &mut scratch).map_err(|e| match e {
        Error::Syntax { offset, message } => Error::Syntax {
            offset: offset + split + 2,
            message,
        },
        other => other,
    })?;
    *sig = scratch;
    Ok(Conditional::new(antecedent, consequent))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    defaults: Vec<Conditional>,
    signature: Signature,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a knowledge base from already-parsed conditionals over `signature`.
    pub fn from_conditionals(
        signature: Signature,
        defaults: impl IntoIterator<Item = Conditional>,
    ) -> Self {
        let defaults = defaults
            .into_iter()
            .enumerate()
            .map(|(index, c)| Conditional { index, ..c })
            .collect();
        KnowledgeBase {
            defaults,
            signature,
        }
    }

    /// Parses the KB text format. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kb = KnowledgeBase::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            kb.push_text(line).map_err(|e| e.at_line(n + 1))?;
        }
        Ok(kb)
    }

    /// Appends one default given as `A |~ B`.
    pub fn push_text(&mut self, text: &str) -> Result<usize> {
        let c = parse_conditional(text, &mut self.signature)?;
        Ok(self.push(c))
    }

    pub fn push(&mut self, c: Conditional) -> usize {
        let index = self.defaults.len();
        self.defaults.push(Conditional { index, ..c });
        index
    }

    /// Parses a query, extending the signature with its atoms.
    pub fn parse_query(&mut self, text: &str) -> Result<Conditional> {
        parse_conditional(text, &mut self.signature)
    }

    /// Parses a formula, extending the signature with its atoms.
    pub fn parse_formula(&mut self, text: &str) -> Result<Formula> {
        prop::parse_formula(text, &mut self.signature)
    }

    pub fn defaults(&self) -> &[Conditional] {
        &self.defaults
    }

    pub fn get(&self, index: usize) -> &Conditional {
        &self.defaults[index]
    }

    pub fn len(&self) -> usize {
        self.defaults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defaults.is_empty()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_mut(&mut self) -> &mut Signature {
        &mut self.signature
    }

    pub fn all(&self) -> DefaultSet {
        DefaultSet::full(self.defaults.len())
    }

    /// Material counterpart of the defaults in `set`.
    pub fn materialize(&self, set: DefaultSet) -> Vec<Formula> {
        set.iter().map(|i| self.defaults[i].material()).collect()
    }

    /// The defaults whose material counterpart holds under `bits`.
    pub fn satisfied_by(&self, bits: u64) -> DefaultSet {
        self.defaults
            .iter()
            .filter(|d| !d.antecedent.holds(bits) || d.consequent.holds(bits))
            .map(|d| d.index)
            .collect()
    }

    /// Re-renders the KB in its text format.
    pub fn to_text(&self) -> String {
        self.defaults
            .iter()
            .map(|d| d.display(&self.signature) + "\n")
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STUDENTS: &str = "\
# students
Student |~ !Pay_Taxes
Student |~ Young

Employee & Student |~ Pay_Taxes   # employed students
";

    #[test]
    fn parses_file_format() {
        let kb = KnowledgeBase::parse(STUDENTS).unwrap();
        assert_eq!(kb.len(), 3);
        assert_eq!(
            kb.signature().names(),
            ["Student", "Pay_Taxes", "Young", "Employee"]
        );
        assert_eq!(kb.get(2).index, 2);
        let round = KnowledgeBase::parse(&kb.to_text()).unwrap();
        assert_eq!(round, kb);
    }

    #[test]
    fn materialize_default_three() {
        let kb = KnowledgeBase::parse(STUDENTS).unwrap();
        let m = kb.materialize(DefaultSet::EMPTY.with(2));
        assert_eq!(m.len(), 1);
        assert_eq!(
            m[0].display(kb.signature()).to_string(),
            "Employee & Student -> Pay_Taxes"
        );
        assert!(kb.materialize(DefaultSet::EMPTY).is_empty());
        assert_eq!(kb.materialize(kb.all()).len(), 3);
    }

    #[test]
    fn reports_line_numbers() {
        let err = KnowledgeBase::parse("a |~ b\n\nc |~ (d\n").unwrap_err();
        match err {
            Error::Line { line, source } => {
                assert_eq!(line, 3);
                assert!(matches!(*source, Error::Syntax { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = KnowledgeBase::parse("a -> b\n").unwrap_err();
        assert!(matches!(err.root(), Error::Syntax { .. }));
    }

    #[test]
    fn query_extends_signature() {
        let mut kb = KnowledgeBase::parse(STUDENTS).unwrap();
        let q = kb.parse_query("Student & Italian |~ !Pay_Taxes").unwrap();
        assert_eq!(kb.signature().len(), 5);
        assert_eq!(kb.signature().name(crate::prop::Atom(4)), "Italian");
        assert_eq!(q.width(), 5);
    }

    #[test]
    fn consequent_offsets_are_absolute() {
        let mut sig = Signature::new();
        match parse_conditional("a |~ b &", &mut sig) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
