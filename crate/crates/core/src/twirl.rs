//! Werner and isotropic two-qudit states, the generalized three-qubit Werner
//! state, and Monte-Carlo twirling that converges onto these families.
//!
//! The flip operator and the projectors are assembled from explicit dyads
//! (`V = Σ |jk⟩⟨kj|`, `P₊ = |φ₀₀⟩⟨φ₀₀|`), so their matrix entries can be read
//! off directly against the defining sums.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::bases::{ghz_basis, max_entangled, GhzLabel};
use crate::haar::haar_unitary;
use crate::{linalg, DensityOp, Error, Matrix, Result, C64};

/// Flip operator `V = Σ_{jk} |jk⟩⟨kj|` on `d ⊗ d`.
pub fn flip_operator(d: usize) -> Matrix {
    let mut v = Matrix::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            v[(j * d + k, k * d + j)] = C64::new(1.0, 0.0);
        }
    }
    v
}

/// `P⁺ = (1 + V)/2`.
pub fn symmetric_projector(d: usize) -> Matrix {
    (linalg::identity(d * d) + flip_operator(d)).scale(0.5)
}

/// `P⁻ = (1 − V)/2`.
pub fn antisymmetric_projector(d: usize) -> Matrix {
    (linalg::identity(d * d) - flip_operator(d)).scale(0.5)
}

/// `P₊ = |φ₀₀^{(d)}⟩⟨φ₀₀^{(d)}|` with the maximal generalized Bell state.
pub fn max_entangled_projector(d: usize) -> Result<Matrix> {
    Ok(max_entangled(d)?.projector().into_matrix())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    d: usize,
    p: f64,
}

impl WernerParams {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        check_d(d)?;
        check_unit("p", p)?;
        Ok(Self { d, p })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicParams {
    d: usize,
    f: f64,
}

impl IsotropicParams {
    /// Accepts the whole positive range `f ∈ [0, 1]`.
    pub fn new(d: usize, f: f64) -> Result<Self> {
        check_d(d)?;
        check_unit("f", f)?;
        Ok(Self { d, f })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn f(&self) -> f64 {
        self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenWerner3Q {
    p: f64,
    theta: f64,
}

impl GenWerner3Q {
    pub fn new(p: f64, theta: f64) -> Result<Self> {
        check_unit("p", p)?;
        crate::bases::check_angle("theta", theta)?;
        Ok(Self { p, theta })
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    Ok(())
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

/// `(1−p)·2/(d²+d)·P⁺ + p·2/(d²−d)·P⁻`.
pub fn werner(params: WernerParams) -> DensityOp {
    let d = params.d as f64;
    let sym = symmetric_projector(params.d).scale((1.0 - params.p) * 2.0 / (d * d + d));
    let anti = antisymmetric_projector(params.d).scale(params.p * 2.0 / (d * d - d));
    DensityOp::from_matrix_unchecked(sym + anti)
}

/// `(1−f)/(d²−1)·1 + (f d² − 1)/(d²−1)·P₊`.
pub fn isotropic(params: IsotropicParams) -> DensityOp {
    let d2 = (params.d * params.d) as f64;
    let p_plus = max_entangled_projector(params.d).expect("d ≥ 2");
    let m = linalg::identity(params.d * params.d).scale((1.0 - params.f) / (d2 - 1.0))
        + p_plus.scale((params.f * d2 - 1.0) / (d2 - 1.0));
    DensityOp::from_matrix_unchecked(m)
}

/// `p|ψ₀₀₀(θ)⟩⟨ψ₀₀₀(θ)| + (1−p)/8 · 1₈`.
pub fn gen_werner_3q(params: GenWerner3Q) -> DensityOp {
    let ghz = ghz_basis(params.theta, GhzLabel::new(0, 0, 0).expect("valid label"));
    let m = linalg::outer(ghz.amplitudes()).scale(params.p)
        + linalg::identity(8).scale((1.0 - params.p) / 8.0);
    DensityOp::from_matrix_unchecked(m)
}

/// Local dimension of a `d ⊗ d` operator.
fn local_dim(rho: &DensityOp) -> Result<usize> {
    let dim = rho.dim();
    let d = (dim as f64).sqrt().round() as usize;
    if d * d != dim || d < 2 {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: dim,
        });
    }
    Ok(d)
}

/// Werner invariant `tr(P⁻ ρ)`.
pub fn werner_invariant(rho: &DensityOp) -> Result<f64> {
    let d = local_dim(rho)?;
    Ok(rho.expectation(&antisymmetric_projector(d))?.re)
}

/// Isotropic invariant `tr(P₊ ρ)`.
pub fn isotropic_invariant(rho: &DensityOp) -> Result<f64> {
    let d = local_dim(rho)?;
    Ok(rho.expectation(&max_entangled_projector(d)?)?.re)
}

/// Which correlated local unitaries a twirl applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlKind {
    /// `U ⊗ U`, converging to the Werner state.
    Werner,
    /// `U ⊗ U*`, converging to the isotropic state.
    Isotropic,
}

impl TwirlKind {
    /// The exact twirl of `rho`: the family member with the same invariant.
    pub fn fixed_point(self, rho: &DensityOp) -> Result<DensityOp> {
        let d = local_dim(rho)?;
        match self {
            TwirlKind::Werner => {
                let p = werner_invariant(rho)?.clamp(0.0, 1.0);
                Ok(werner(WernerParams::new(d, p)?))
            }
            TwirlKind::Isotropic => {
                let f = isotropic_invariant(rho)?.clamp(0.0, 1.0);
                Ok(isotropic(IsotropicParams::new(d, f)?))
            }
        }
    }
}

/// Running average of `(U ⊗ V) ρ (U ⊗ V)†` over Haar draws.
#[derive(Debug, Clone)]
pub struct Twirler {
    kind: TwirlKind,
    d: usize,
    input: Matrix,
    sum: Matrix,
    samples: usize,
}

impl Twirler {
    pub fn new(kind: TwirlKind, rho: &DensityOp) -> Result<Self> {
        let d = local_dim(rho)?;
        Ok(Self {
            kind,
            d,
            input: rho.matrix().clone(),
            sum: Matrix::zeros(d * d, d * d),
            samples: 0,
        })
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let u = haar_unitary(self.d, rng);
        let v = match self.kind {
            TwirlKind::Werner => u.clone(),
            TwirlKind::Isotropic => u.map(|z| z.conj()),
        };
        let w = linalg::kron(&u, &v);
        self.sum += &w * &self.input * w.adjoint();
        self.samples += 1;
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Empirical average so far; the input itself before any sample.
    pub fn mean(&self) -> DensityOp {
        if self.samples == 0 {
            return DensityOp::from_matrix_unchecked(self.input.clone());
        }
        let m = self.sum.scale(1.0 / self.samples as f64);
        DensityOp::from_matrix_unchecked((&m + m.adjoint()).scale(0.5))
    }
}

fn twirl<R: Rng + ?Sized>(
    kind: TwirlKind,
    rho: &DensityOp,
    samples: usize,
    rng: &mut R,
) -> Result<DensityOp> {
    if samples == 0 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: 0.0,
        });
    }
    let mut t = Twirler::new(kind, rho)?;
    for _ in 0..samples {
        t.step(rng);
    }
    Ok(t.mean())
}

/// Monte-Carlo estimate of `∫ U⊗U ρ U†⊗U† dU`.
pub fn twirl_uu<R: Rng + ?Sized>(
    rho: &DensityOp,
    samples: usize,
    rng: &mut R,
) -> Result<DensityOp> {
    twirl(TwirlKind::Werner, rho, samples, rng)
}

/// Monte-Carlo estimate of `∫ U⊗U* ρ (U⊗U*)† dU`.
pub fn twirl_uustar<R: Rng + ?Sized>(
    rho: &DensityOp,
    samples: usize,
    rng: &mut R,
) -> Result<DensityOp> {
    twirl(TwirlKind::Isotropic, rho, samples, rng)
}
