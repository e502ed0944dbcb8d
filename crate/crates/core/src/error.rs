use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {p}^{f} exceeds the table cap of {cap} elements")]
    FieldTooLarge { p: u64, f: u32, cap: u64 },
    #[error("invalid field element {0}")]
    InvalidElement(u64),
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("{a} and {n} are not coprime")]
    NotCoprime { a: i64, n: u64 },
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("{n} does not divide q - 1 = {q_minus_one}")]
    NotADivisor { n: u64, q_minus_one: u64 },
    #[error("index {index} out of range for Z_{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error("partition does not define an association scheme")]
    NotAScheme,
    #[error("eigenmatrix is numerically singular")]
    SingularP,
    #[error("malformed fusion partition: {0}")]
    MalformedPartition(String),
    #[error("field of order {q} is too large for the brute-force oracle (limit {limit})")]
    TooLargeForOracle { q: u64, limit: u64 },
    #[error("characteristic 2 has no quadratic Gauss sum formula")]
    EvenCharacteristic,
    #[error("discriminant -{0} is not admissible (need a prime p1 > 3, p1 = 3 mod 4)")]
    BadDiscriminant(u64),
    #[error("no solution to 4p^h = b^2 + p1 c^2 with the required congruence")]
    NoSolution,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("neither orientation of the five-class split verified")]
    OrientationAmbiguous,
    #[error("template precondition violated: {0}")]
    TemplatePreconditionViolated(String),
    #[error("no affine image of the index sets verifies as a scheme")]
    NoOrbitMemberVerifies,
    #[error("group ring modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("search budget exceeded: {candidates} candidates > budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
