use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("empty formula")]
    EmptyFormula,

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("atom index {0} is outside the valuation's signature")]
    UnresolvedAtom(usize),

    #[error("signature has {atoms} atoms, enumeration cap is {cap}")]
    AtomCap { atoms: usize, cap: usize },

    #[error("knowledge base has {defaults} defaults, subset enumeration cap is {cap}")]
    DefaultCap { defaults: usize, cap: usize },

    #[error("knowledge base is unsatisfiable: its material counterpart is inconsistent")]
    UnsatisfiableKb,
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::Line {
            line,
            source: Box::new(self),
        }
    }

    /// Strips line wrappers, so callers can classify the root cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::Line { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
