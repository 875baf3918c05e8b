//! Propositional syntax over a finite signature: formulas, parsing,
//! valuations and classical entailment.
//!
//! Valuations are bit vectors (`u64`), so a signature holds at most
//! [`MAX_SIGNATURE`] atoms. The enumeration cap actually enforced by the
//! reasoner is much lower (see [`crate::Limits`]).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling imposed by the `u64` valuation encoding.
pub const MAX_SIGNATURE: usize = 63;

/// Index of an atom in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// Ordered atom names; order is first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    lookup: HashMap<String, Atom>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the atom for `name`, appending it if unseen.
    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&atom) = self.lookup.get(name) {
            return atom;
        }
        let atom = Atom(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.lookup.insert(name.to_owned(), atom);
        atom
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len() as u32).map(Atom)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

pub fn atom(a: Atom) -> Formula {
    Formula::Atom(a)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

/// Left-nested conjunction; `True` for an empty input.
pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
    fs.into_iter().reduce(and).unwrap_or(Formula::True)
}

impl Formula {
    /// Bit mask of the atoms occurring in the formula.
    pub fn atom_mask(&self) -> u64 {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Atom(a) => a.bit(),
            Formula::Not(f) => f.atom_mask(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.atom_mask() | b.atom_mask(),
        }
    }

    /// Number of atoms a valuation must cover to evaluate this formula.
    pub fn width(&self) -> usize {
        64 - self.atom_mask().leading_zeros() as usize
    }

    /// Evaluates against a raw bit assignment; atoms beyond the assignment
    /// read as false. Callers must have checked coverage.
    pub fn holds(&self, bits: u64) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => bits & a.bit() != 0,
            Formula::Not(f) => !f.holds(bits),
            Formula::And(a, b) => a.holds(bits) && b.holds(bits),
            Formula::Or(a, b) => a.holds(bits) || b.holds(bits),
            Formula::Implies(a, b) => !a.holds(bits) || b.holds(bits),
            Formula::Iff(a, b) => a.holds(bits) == b.holds(bits),
        }
    }

    /// Classical truth value under `v`.
    pub fn eval(&self, v: &Valuation) -> Result<bool> {
        let width = self.width();
        if width > v.width {
            return Err(Error::UnresolvedAtom(width - 1));
        }
        Ok(self.holds(v.bits))
    }

    /// Three-valued evaluation under a partial assignment: `known` marks
    /// the assigned atoms, `bits` their values.
    fn partial(&self, known: u64, bits: u64) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Atom(a) => (known & a.bit() != 0).then(|| bits & a.bit() != 0),
            Formula::Not(f) => f.partial(known, bits).map(|b| !b),
            Formula::And(a, b) => match (a.partial(known, bits), b.partial(known, bits)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Formula::Or(a, b) => match (a.partial(known, bits), b.partial(known, bits)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Implies(a, b) => match (a.partial(known, bits), b.partial(known, bits)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Iff(a, b) => match (a.partial(known, bits), b.partial(known, bits)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            },
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::True | Formula::False | Formula::Atom(_) => 6,
        }
    }
}

/// Prints with the fewest parentheses that still parse back to the same tree.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, sub: &Formula, parens: bool| -> fmt::Result {
            if parens {
                write!(f, "(")?;
                self.write(f, sub)?;
                write!(f, ")")
            } else {
                self.write(f, sub)
            }
        };
        let p = node.precedence();
        match node {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{}", self.sig.name(*a)),
            Formula::Not(sub) => {
                write!(f, "!")?;
                child(f, sub, sub.precedence() < p)
            }
            Formula::Implies(a, b) => {
                child(f, a, a.precedence() <= p)?;
                write!(f, " -> ")?;
                child(f, b, b.precedence() < p)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                let op = match node {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                child(f, a, a.precedence() < p)?;
                write!(f, "{op}")?;
                child(f, b, b.precedence() <= p)
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Ident(&'a str),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Token::Ident(&text[start..=i])
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, 's> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
    sig: &'s mut Signature,
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Token<'_>) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Token::Iff) {
            lhs = iff(lhs, self.implication()?);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Implies) {
            return Ok(implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Token::Or) {
            lhs = or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Token::Not) {
            return Ok(not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(match name {
                    "true" => Formula::True,
                    "false" => Formula::False,
                    _ => Formula::Atom(self.sig.intern(name)),
                })
            }
            Some(_) => Err(self.error("expected an atom, constant, '!' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses `text`, appending unseen atoms to `sig` in first-occurrence order.
///
/// On error the signature is left untouched.
pub fn parse_formula(text: &str, sig: &mut Signature) -> Result<Formula> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::EmptyFormula);
    }
    let mut scratch = sig.clone();
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        sig: &mut scratch,
    };
    let formula = parser.iff()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    *sig = scratch;
    Ok(formula)
}

// ---------------------------------------------------------------------------
// Valuations and entailment

/// Total assignment over the first `width` atoms of a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    bits: u64,
    width: usize,
}

impl Valuation {
    pub fn new(bits: u64, width: usize) -> Self {
        debug_assert!(width <= MAX_SIGNATURE);
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        Valuation {
            bits: bits & mask,
            width,
        }
    }

    /// Valuation making exactly `true_atoms` true.
    pub fn from_atoms(true_atoms: impl IntoIterator<Item = Atom>, width: usize) -> Self {
        let bits = true_atoms.into_iter().fold(0u64, |acc, a| acc | a.bit());
        Valuation::new(bits, width)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, atom: Atom) -> bool {
        self.bits & atom.bit() != 0
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.width as u32).map(Atom).filter(|a| self.get(*a))
    }
}

/// All `2^|sig|` valuations in binary counting order (first atom is the
/// least significant bit).
pub fn all_valuations(sig: &Signature, cap: usize) -> Result<impl Iterator<Item = Valuation>> {
    valuations_of_width(sig.len(), cap)
}

pub(crate) fn valuations_of_width(
    width: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Valuation>> {
    if width > cap.min(MAX_SIGNATURE) {
        return Err(Error::AtomCap { atoms: width, cap });
    }
    Ok((0..1u64 << width).map(move |bits| Valuation { bits, width }))
}

/// Spreads the low bits of `counter` onto the set bits of `positions`.
pub(crate) fn deposit(counter: u64, positions: u64) -> u64 {
    let mut out = 0;
    let mut rest = positions;
    let mut i = 0;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if counter >> i & 1 == 1 {
            out |= low;
        }
        rest &= rest - 1;
        i += 1;
    }
    out
}

/// Which procedure decides satisfiability. Both must always agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Exhaustive enumeration over the atoms that occur.
    #[default]
    Enumeration,
    /// Backtracking over atoms with three-valued pruning.
    Search,
}

/// Is there an assignment making every formula true?
pub fn satisfiable_with(backend: Backend, fs: &[&Formula]) -> bool {
    let mask = fs.iter().fold(0, |m, f| m | f.atom_mask());
    match backend {
        Backend::Enumeration => {
            let n = mask.count_ones();
            (0..1u64 << n).any(|c| {
                let bits = deposit(c, mask);
                fs.iter().all(|f| f.holds(bits))
            })
        }
        Backend::Search => search(fs, mask, 0, 0),
    }
}

fn search(fs: &[&Formula], unassigned: u64, known: u64, bits: u64) -> bool {
    let mut open = false;
    for f in fs {
        match f.partial(known, bits) {
            Some(false) => return false,
            Some(true) => {}
            None => open = true,
        }
    }
    if !open {
        return true;
    }
    let next = unassigned & unassigned.wrapping_neg();
    let rest = unassigned & !next;
    search(fs, rest, known | next, bits | next) || search(fs, rest, known | next, bits)
}

pub fn entails_with<'a>(
    backend: Backend,
    premises: impl IntoIterator<Item = &'a Formula>,
    goal: &Formula,
) -> bool {
    let negated = not(goal.clone());
    let mut all: Vec<&Formula> = premises.into_iter().collect();
    all.push(&negated);
    !satisfiable_with(backend, &all)
}

/// Classical consequence: every model of `premises` is a model of `goal`.
pub fn entails<'a>(premises: impl IntoIterator<Item = &'a Formula>, goal: &Formula) -> bool {
    entails_with(Backend::Enumeration, premises, goal)
}

pub fn is_consistent<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> bool {
    let all: Vec<&Formula> = fs.into_iter().collect();
    satisfiable_with(Backend::Enumeration, &all)
}

/// Semantic equality: mutual entailment.
pub fn equivalent(a: &Formula, b: &Formula) -> bool {
    entails([a], b) && entails([b], a)
}
