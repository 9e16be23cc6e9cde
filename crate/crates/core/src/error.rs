use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("not an inverse semigroup: {0}")]
    NotInverse(String),
    #[error("element {0} is not a zero")]
    BadZero(usize),
    #[error("semigroup has no zero")]
    NoZero,
    #[error("semigroup already has a zero ({0})")]
    AlreadyHasZero(usize),
    #[error("elements {0} and {1} are not compatible")]
    NotCompatible(usize, usize),
    #[error("semigroup is not weakly boolean")]
    NotWeaklyBoolean,
    #[error("semigroup is not boolean")]
    NotBoolean,
    #[error("{0} is not below {1}")]
    NotBelow(usize, usize),
    #[error("semigroup is not distributive")]
    NotDistributive,
    #[error("filters belong to different semigroups")]
    DifferentParents,
    #[error("filter class {0} not closed under the groupoid operations")]
    ClassNotClosed(String),
    #[error("unsupported coverage kind: {0}")]
    UnsupportedKind(String),
    #[error("too large: {what} has {count} members (limit {limit})")]
    TooLarge {
        what: String,
        count: usize,
        limit: usize,
    },
    #[error("coverage is not idempotent-pure: {0}")]
    NotIdempotentPure(String),
    #[error("open-set lattice too large: {0} points")]
    LatticeTooLarge(usize),
    #[error("preimage of prime filter {0:?} is not a filter")]
    PreimageNotFilter(Vec<usize>),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("morphism is not callitic")]
    NotCallitic,
    #[error("morphism is not surjective")]
    NotSurjective,
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("groupoid axioms fail: {0}")]
    NotGroupoid(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadTable(_) => "BadTable",
            Error::NotAssociative { .. } => "NotAssociative",
            Error::NotInverse(_) => "NotInverse",
            Error::BadZero(_) => "BadZero",
            Error::NoZero => "NoZero",
            Error::AlreadyHasZero(_) => "AlreadyHasZero",
            Error::NotCompatible(..) => "NotCompatible",
            Error::NotWeaklyBoolean => "NotWeaklyBoolean",
            Error::NotBoolean => "NotBoolean",
            Error::NotBelow(..) => "NotBelow",
            Error::NotDistributive => "NotDistributive",
            Error::DifferentParents => "DifferentParents",
            Error::ClassNotClosed(_) => "ClassNotClosed",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotIdempotentPure(_) => "NotIdempotentPure",
            Error::LatticeTooLarge(_) => "LatticeTooLarge",
            Error::PreimageNotFilter(_) => "PreimageNotFilter",
            Error::FlavorMismatch(_) => "FlavorMismatch",
            Error::NotCallitic => "NotCallitic",
            Error::NotSurjective => "NotSurjective",
            Error::NotHomomorphism(_) => "NotHomomorphism",
            Error::NotGroupoid(_) => "NotGroupoid",
            Error::CheckFailed(_) => "CheckFailed",
            Error::Parse(_) => "ParseError",
        }
    }
}
