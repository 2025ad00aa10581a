//! Parametrized entangled bases: generalized Bell (qudit pairs), the
//! two-qubit θ-basis, the GHZ and W three-qubit bases, and the rotated
//! single-qubit basis used by the relay party in GHZ-channel teleportation.
//!
//! Two opposite conventions for the pair `(b₀, b₁)` coexist: the GHZ basis
//! uses `b₀ = cos θ, b₁ = sin θ` while the relay basis uses
//! `b₀ = sin θ, b₁ = cos θ`. [`BasisAngles`] exposes both under distinct
//! names.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{linalg, DensityOp, Error, Result, StateVector, C64, TOLERANCE};

/// Angle pair `(θ, φ)`, both in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisAngles {
    theta: f64,
    phi: f64,
}

impl BasisAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_angle("theta", theta)?;
        check_angle("phi", phi)?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `cos θ`, the GHZ-basis `b₀`.
    pub fn ghz_b0(&self) -> f64 {
        self.theta.cos()
    }

    /// `sin θ`, the GHZ-basis `b₁`.
    pub fn ghz_b1(&self) -> f64 {
        self.theta.sin()
    }

    /// `sin θ`, the relay-basis `b₀`.
    pub fn relay_b0(&self) -> f64 {
        self.theta.sin()
    }

    /// `cos θ`, the relay-basis `b₁`.
    pub fn relay_b1(&self) -> f64 {
        self.theta.cos()
    }
}

pub(crate) fn check_angle(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&value) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

/// Real coefficient table `β_{km}` for the `d²`-element generalized Bell
/// basis. Stored column-wise: `columns[m][k] = β_{km}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralBellSpec {
    d: usize,
    columns: Vec<Vec<f64>>,
}

impl GeneralBellSpec {
    /// Every column must be a unit vector so each basis element is normalized.
    pub fn new(d: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
            });
        }
        if columns.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: columns.len(),
            });
        }
        for column in &columns {
            if column.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: column.len(),
                });
            }
            let norm_sqr: f64 = column.iter().map(|b| b * b).sum();
            if (norm_sqr - 1.0).abs() > TOLERANCE {
                return Err(Error::NotNormalized { norm_sqr });
            }
        }
        Ok(Self { d, columns })
    }

    /// `β_{km} = 1/√d`: the maximally entangled basis.
    pub fn maximal(d: usize) -> Result<Self> {
        let b = 1.0 / (d as f64).sqrt();
        Self::new(d, vec![vec![b; d]; d])
    }

    /// The qubit family `φ₀₀ = cos θ|00⟩ + sin θ|11⟩, φ₁₀ = sin θ|00⟩ − cos θ|11⟩, …`.
    pub fn qubit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            d: 2,
            columns: vec![vec![c, s], vec![s, c]],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self, k: usize, m: usize) -> f64 {
        self.columns[m][k]
    }
}

/// Bell label `(m, n)`: `m` selects the phase, `n` the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellLabel {
    pub m: usize,
    pub n: usize,
}

impl BellLabel {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// The four qubit labels in lexicographic order.
    pub fn qubit_labels() -> [BellLabel; 4] {
        [
            Self::new(0, 0),
            Self::new(0, 1),
            Self::new(1, 0),
            Self::new(1, 1),
        ]
    }
}

/// GHZ label `(μ, λ, ω)`, each a bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GhzLabel {
    mu: u8,
    lambda: u8,
    omega: u8,
}

impl GhzLabel {
    pub fn new(mu: u8, lambda: u8, omega: u8) -> Result<Self> {
        for (name, v) in [("mu", mu), ("lambda", lambda), ("omega", omega)] {
            if v > 1 {
                return Err(Error::OutOfRange {
                    name,
                    value: v as f64,
                });
            }
        }
        Ok(Self { mu, lambda, omega })
    }

    /// All eight labels in lexicographic order.
    pub fn all() -> impl Iterator<Item = GhzLabel> {
        (0u8..8).map(|i| GhzLabel {
            mu: i >> 2,
            lambda: (i >> 1) & 1,
            omega: i & 1,
        })
    }

    pub fn mu(&self) -> u8 {
        self.mu
    }

    pub fn lambda(&self) -> u8 {
        self.lambda
    }

    pub fn omega(&self) -> u8 {
        self.omega
    }
}

/// Two-qudit ket of local dimension `d`, index `k·d + l` for `|k, l⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    d: usize,
    amplitudes: Vec<C64>,
}

impl PairState {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> DensityOp {
        DensityOp::from_ket(&self.amplitudes).expect("Bell kets are normalized")
    }

    /// Reinterprets a `d = 2` pair as a two-qubit register.
    pub fn into_qubits(self) -> Result<StateVector> {
        if self.d != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.d,
            });
        }
        StateVector::new(self.amplitudes)
    }
}

/// `Σ_k ω_d^{mk} β_{km} |k, k ⊕ n⟩` with `ω_d = e^{2πi/d}`.
pub fn general_bell(spec: &GeneralBellSpec, label: BellLabel) -> Result<PairState> {
    let d = spec.d;
    if label.m >= d || label.n >= d {
        return Err(Error::OutOfRange {
            name: "bell label",
            value: label.m.max(label.n) as f64,
        });
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let phase = C64::from_polar(1.0, 2.0 * PI * ((label.m * k) % d) as f64 / d as f64);
        amplitudes[k * d + (k + label.n) % d] = phase * spec.beta(k, label.m);
    }
    Ok(PairState { d, amplitudes })
}

/// Maximally entangled qudit pair `|φ₀₀^{(d)}⟩`.
pub fn max_entangled(d: usize) -> Result<PairState> {
    general_bell(&GeneralBellSpec::maximal(d)?, BellLabel::new(0, 0))
}

/// Two-qubit θ-basis element; at θ = π/4 these are the Bell states with
/// `(1,1)` the singlet.
pub fn bell2(theta: f64, label: BellLabel) -> Result<StateVector> {
    if label.m > 1 || label.n > 1 {
        return Err(Error::OutOfRange {
            name: "bell label",
            value: label.m.max(label.n) as f64,
        });
    }
    general_bell(&GeneralBellSpec::qubit(theta), label)?.into_qubits()
}

/// Maximal Bell state, `bell2(π/4, label)`.
pub fn bell(label: BellLabel) -> StateVector {
    bell2(core::f64::consts::FRAC_PI_4, label).expect("qubit label")
}

/// `Σ_j (−1)^{μj} b_{μ⊕j} |j, j⊕λ, j⊕ω⟩` with `b₀ = cos θ, b₁ = sin θ`.
pub fn ghz_basis(theta: f64, label: GhzLabel) -> StateVector {
    let b = [theta.cos(), theta.sin()];
    let mut amplitudes = vec![C64::new(0.0, 0.0); 8];
    for j in 0..2u8 {
        let sign = if label.mu & j == 1 { -1.0 } else { 1.0 };
        let index = (j << 2 | (j ^ label.lambda) << 1 | (j ^ label.omega)) as usize;
        amplitudes[index] = C64::new(sign * b[(label.mu ^ j) as usize], 0.0);
    }
    StateVector::from_parts_unchecked(3, amplitudes)
}

type WTerm = (f64, usize);

fn w_terms(theta: f64, phi: f64, k: usize, as_printed: bool) -> Result<[WTerm; 3]> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let flip = if as_printed { 1.0 } else { -1.0 };
    let terms = match k {
        1 => [(st * cp, 0b001), (st * sp, 0b010), (ct, 0b100)],
        2 => [(st * sp, 0b001), (-st * cp, 0b010), (ct, 0b111)],
        3 => [(-st * sp, 0b100), (ct, 0b010), (st * cp, 0b111)],
        4 => [(st * cp, 0b100), (flip * ct, 0b001), (st * sp, 0b111)],
        5 => [(st * cp, 0b110), (st * sp, 0b101), (ct, 0b011)],
        6 => [(st * sp, 0b110), (-st * cp, 0b101), (ct, 0b000)],
        7 => [(-st * sp, 0b011), (ct, 0b101), (st * cp, 0b000)],
        8 => [(st * cp, 0b011), (flip * ct, 0b110), (st * sp, 0b000)],
        _ => {
            return Err(Error::OutOfRange {
                name: "k",
                value: k as f64,
            })
        }
    };
    Ok(terms)
}

fn w_state(terms: [WTerm; 3]) -> StateVector {
    let mut amplitudes = vec![C64::new(0.0, 0.0); 8];
    for (c, index) in terms {
        amplitudes[index] = C64::new(c, 0.0);
    }
    StateVector::from_parts_unchecked(3, amplitudes)
}

/// W-basis element `|W_k⟩`, `k ∈ 1..=8`.
///
/// `|W₄⟩` and `|W₈⟩` carry `−cos θ` on `|001⟩` and `|110⟩` respectively;
/// with a plus sign they overlap `|W₁⟩, |W₂⟩` (resp. `|W₅⟩, |W₆⟩`).
/// [`w_basis_as_printed`] keeps the plus-sign variant.
pub fn w_basis(theta: f64, phi: f64, k: usize) -> Result<StateVector> {
    Ok(w_state(w_terms(theta, phi, k, false)?))
}

/// The W family with `+cos θ` in `|W₄⟩` and `|W₈⟩`, which is not orthogonal
/// for generic angles. Kept as a known-bad fixture.
pub fn w_basis_as_printed(theta: f64, phi: f64, k: usize) -> Result<StateVector> {
    Ok(w_state(w_terms(theta, phi, k, true)?))
}

/// Rotated relay basis `(|x₀⟩, |x₁⟩)` defined through
/// `|0⟩ = sin θ|x₀⟩ + cos θ|x₁⟩`, `|1⟩ = cos θ|x₀⟩ − sin θ|x₁⟩`.
pub fn relay_basis(theta: f64) -> (StateVector, StateVector) {
    // The 2×2 change of basis is real, symmetric and orthogonal, so it is
    // its own inverse.
    let (s, c) = theta.sin_cos();
    let x0 = StateVector::from_parts_unchecked(1, vec![C64::new(s, 0.0), C64::new(c, 0.0)]);
    let x1 = StateVector::from_parts_unchecked(1, vec![C64::new(c, 0.0), C64::new(-s, 0.0)]);
    (x0, x1)
}

/// Three-party amplitudes `a|100⟩ + b|010⟩ + c|001⟩` of a W-type channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WChannelSpec {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl WChannelSpec {
    pub fn new(a: C64, b: C64, c: C64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { a, b, c })
    }

    pub fn normalized(a: C64, b: C64, c: C64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
            c: c / norm,
        })
    }

    /// `a = b = c = 1/√3`.
    pub fn symmetric() -> Self {
        let v = C64::new(1.0 / 3f64.sqrt(), 0.0);
        Self { a: v, b: v, c: v }
    }

    pub fn state(&self) -> StateVector {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 8];
        amplitudes[0b100] = self.a;
        amplitudes[0b010] = self.b;
        amplitudes[0b001] = self.c;
        StateVector::from_parts_unchecked(3, amplitudes)
    }
}

/// A named family of basis vectors, as dumped by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub family: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub vectors: Vec<Vec<C64>>,
}

impl Basis {
    pub fn bell2(theta: f64) -> Self {
        let vectors = BellLabel::qubit_labels()
            .iter()
            .map(|&l| bell2(theta, l).expect("qubit label").into_amplitudes())
            .collect();
        Self {
            family: "bell2",
            params: vec![("theta", theta)],
            vectors,
        }
    }

    /// All `d²` vectors ordered by `(m, n)`.
    pub fn general_bell(spec: &GeneralBellSpec) -> Self {
        let d = spec.d();
        let vectors = (0..d)
            .flat_map(|m| (0..d).map(move |n| BellLabel::new(m, n)))
            .map(|l| general_bell(spec, l).expect("label in range").amplitudes)
            .collect();
        Self {
            family: "general-bell",
            params: vec![("d", d as f64)],
            vectors,
        }
    }

    pub fn ghz(theta: f64) -> Self {
        let vectors = GhzLabel::all()
            .map(|l| ghz_basis(theta, l).into_amplitudes())
            .collect();
        Self {
            family: "ghz",
            params: vec![("theta", theta)],
            vectors,
        }
    }

    /// The eight W vectors, rejected if the Gram check fails.
    pub fn w(theta: f64, phi: f64) -> Result<Self> {
        let vectors = (1..=8)
            .map(|k| w_basis(theta, phi, k).map(StateVector::into_amplitudes))
            .collect::<Result<Vec<_>>>()?;
        let basis = Self {
            family: "w",
            params: vec![("theta", theta), ("phi", phi)],
            vectors,
        };
        basis.check_orthonormal()?;
        Ok(basis)
    }

    pub fn relay(theta: f64) -> Self {
        let (x0, x1) = relay_basis(theta);
        Self {
            family: "relay",
            params: vec![("theta", theta)],
            vectors: vec![x0.into_amplitudes(), x1.into_amplitudes()],
        }
    }

    /// Largest entrywise deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let refs: Vec<&[C64]> = self.vectors.iter().map(Vec::as_slice).collect();
        let g = linalg::gram(&refs);
        linalg::max_abs_diff(&g, &linalg::identity(refs.len()))
    }

    pub fn check_orthonormal(&self) -> Result<()> {
        let deviation = self.gram_deviation();
        if deviation > TOLERANCE {
            return Err(Error::NotOrthonormal {
                family: self.family,
                deviation,
            });
        }
        Ok(())
    }
}
