//! Local operators: a small matrix plus the register qubits it acts on.

use alloc::vec::Vec;
use core::fmt;

use crate::{linalg, Error, Matrix, Result, C64, TOLERANCE};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        Matrix::from_row_slice(2, 2, &entries)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauli(other)),
        }
    }

    /// Pauli class of a product of Paulis, ignoring the overall phase.
    pub fn product_class(word: &[Pauli]) -> Pauli {
        // X ~ (1,0), Z ~ (0,1), Y ~ (1,1) in the symplectic picture.
        let (mut x, mut z) = (false, false);
        for p in word {
            match p {
                Pauli::I => {}
                Pauli::X => x = !x,
                Pauli::Z => z = !z,
                Pauli::Y => {
                    x = !x;
                    z = !z;
                }
            }
        }
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A matrix acting on an ordered list of register qubits. The first target is
/// the most significant bit of the operator's row index.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    matrix: Matrix,
    targets: Vec<usize>,
    unitary: bool,
}

impl LocalOperator {
    /// Operator claimed unitary; the claim is checked to 1e-9.
    pub fn unitary(matrix: Matrix, targets: Vec<usize>) -> Result<Self> {
        check_shape(&matrix, &targets)?;
        let deviation = linalg::unitarity_deviation(&matrix);
        if deviation > TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            matrix,
            targets,
            unitary: true,
        })
    }

    /// Operator with no unitarity claim, e.g. a single Kraus operator.
    pub fn general(matrix: Matrix, targets: Vec<usize>) -> Result<Self> {
        check_shape(&matrix, &targets)?;
        Ok(Self {
            matrix,
            targets,
            unitary: false,
        })
    }

    pub fn pauli(p: Pauli, target: usize) -> Self {
        Self {
            matrix: p.matrix(),
            targets: alloc::vec![target],
            unitary: true,
        }
    }

    /// Tensor product of single-qubit Paulis on consecutive qubits
    /// `first, first + 1, …`.
    pub fn pauli_string(letters: &[Pauli], first: usize) -> Self {
        let mut matrix = Matrix::identity(1, 1);
        for p in letters {
            matrix = linalg::kron(&matrix, &p.matrix());
        }
        Self {
            matrix,
            targets: (first..first + letters.len()).collect(),
            unitary: true,
        }
    }

    pub fn identity(targets: Vec<usize>) -> Self {
        let dim = 1usize << targets.len();
        Self {
            matrix: Matrix::identity(dim, dim),
            targets,
            unitary: true,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Same matrix acting on different qubits.
    pub fn retarget(&self, targets: Vec<usize>) -> Result<Self> {
        check_shape(&self.matrix, &targets)?;
        Ok(Self {
            matrix: self.matrix.clone(),
            targets,
            unitary: self.unitary,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            targets: self.targets.clone(),
            unitary: self.unitary,
        }
    }

    /// Entrywise complex conjugate, `U*`.
    pub fn conjugate(&self) -> Self {
        Self {
            matrix: self.matrix.map(|z| z.conj()),
            targets: self.targets.clone(),
            unitary: self.unitary,
        }
    }

    /// Verifies the target list against a register size.
    pub fn check_targets(&self, num_qubits: usize) -> Result<()> {
        check_targets(&self.targets, num_qubits)
    }
}

fn check_shape(matrix: &Matrix, targets: &[usize]) -> Result<()> {
    let dim = 1usize << targets.len();
    if matrix.nrows() != dim || matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: matrix.nrows(),
        });
    }
    check_distinct(targets)
}

fn check_distinct(targets: &[usize]) -> Result<()> {
    for (i, a) in targets.iter().enumerate() {
        if targets[..i].contains(a) {
            return Err(Error::DuplicateQubit(*a));
        }
    }
    Ok(())
}

/// Targets must be distinct and inside the register.
pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    if let Some(&index) = targets.iter().find(|&&t| t >= num_qubits) {
        return Err(Error::QubitOutOfRange { index, num_qubits });
    }
    check_distinct(targets)
}
