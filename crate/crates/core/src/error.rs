use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit {index} is out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} is targeted more than once")]
    DuplicateQubit(usize),

    #[error("operator claimed unitary deviates from U\u{2020}U = 1 by {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("not a density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("{name} = {value} is outside its admissible range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("{0} must not be empty")]
    EmptyArgument(&'static str),

    #[error("Kraus operators are not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("basis family {family} fails orthonormality (deviation {deviation:e})")]
    NotOrthonormal {
        family: &'static str,
        deviation: f64,
    },

    #[error("qubit {qubit} is not a resource qubit of protocol {protocol}")]
    InvalidTarget {
        protocol: &'static str,
        qubit: usize,
    },

    #[error("invalid Pauli letter {0:?}")]
    InvalidPauli(char),

    #[error("unknown {kind} name")]
    UnknownName { kind: &'static str },
}
