use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no factorization")]
    ZeroInput,

    #[error("{0} exceeds the supported magnitude bound")]
    TooLarge(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("modulus is reducible over F_{p}; factor {witness}")]
    ReducibleModulus { p: u64, witness: String },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("field of order {0} is larger than the supported 2^40")]
    FieldTooLarge(String),

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("zero has no multiplicative order")]
    ZeroOrder,

    #[error("{r} does not divide the group order {n}")]
    NotDivisor { r: u128, n: u128 },

    #[error("{0} is not the order of a subfield")]
    NotSubfield(u64),

    #[error("element {0} does not lie in the subfield F_{1}")]
    NotInSubfield(String, u64),

    #[error("character sums need a discrete-log table (field has {0} elements, limit 2^22)")]
    MissingLogTable(u64),

    #[error("degenerate quadratic: b^2 - 4ac = 0")]
    DegenerateDiscriminant,

    #[error("character hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("resource guard exceeded: q^m = {order} > guard {guard}")]
    GuardExceeded { order: u64, guard: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
