//! Pseudo-Hermitian dissipation operators and the damping block they induce.
//!
//! Each Lindblad operator carries the same four-parameter shape as the
//! Hamiltonian,
//!
//! L_j = ( r_j e^{iφ_j}   s_j e^{iϕ_j} )
//!       ( s_j e^{−iϕ_j}  r_j e^{−iφ_j} )
//!     = L⁰σ₀ + L¹σ₁ + L²σ₂ + L³σ₃,
//!
//! with (L⁰, L¹, L², L³) = (r_j cos φ_j, s_j cos ϕ_j, −s_j sin ϕ_j, i r_j sin φ_j).
//! That shape makes [L_j, PT] = 0 exact and makes a_j − d_j and b_j − c_j purely
//! imaginary — the necessary conditions for η-pseudo-Hermiticity. Full
//! pseudo-Hermiticity under a *particular* metric of angle α additionally ties
//! the parameters together: r_j sin φ_j = sin α · s_j cos ϕ_j. The residual
//! ‖η L η⁻¹ − L†‖ measures exactly that coupling; it vanishes for every α when
//! ϕ_j = π/2 (the ζ damping case) but only at α = 0 when ϕ_j = 0 (the ξ case) —
//! which is why ζ-damped systems solve exactly while ξ-damped ones only admit
//! a series in α.
//!
//! A two-level system takes at most N² − 1 = 3 operators. Their effect on the
//! Bloch vector is channeled entirely through six sums A…F over the operator
//! set; the dissipator acts as Γ̇|_diss = (0, −2K Γ⃗) with the symmetric damping
//! matrix
//!
//! K = ( A D E )
//!     ( D B F )
//!     ( E F C ).

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::bloch::GammaVector;
use crate::hamiltonian::Metric;
use crate::{C64, Error, Result};

/// One pseudo-Hermitian-shaped Lindblad operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladOperator {
    r: f64,
    s: f64,
    diag_phase: f64,
    offdiag_phase: f64,
}

impl LindbladOperator {
    /// General four-parameter operator (the paper-shaped r_j, s_j, φ_j, ϕ_j).
    pub fn new(r: f64, s: f64, diag_phase: f64, offdiag_phase: f64) -> Self {
        Self { r, s, diag_phase, offdiag_phase }
    }

    /// The A = 0 damping channel: r = 0, s = √ξ, ϕ = 0, giving B = C = ξ.
    pub fn case_a_zero(xi: f64) -> Result<Self> {
        if xi < 0.0 || xi.is_nan() {
            return Err(Error::OutOfDomain(format!("damping rate xi = {xi} must be >= 0")));
        }
        Ok(Self::new(0.0, xi.sqrt(), 0.0, 0.0))
    }

    /// The B = 0 damping channel: r = 0, s = √ζ, ϕ = π/2, giving A = C = ζ.
    pub fn case_b_zero(zeta: f64) -> Result<Self> {
        if zeta < 0.0 || zeta.is_nan() {
            return Err(Error::OutOfDomain(format!("damping rate zeta = {zeta} must be >= 0")));
        }
        Ok(Self::new(0.0, zeta.sqrt(), 0.0, std::f64::consts::FRAC_PI_2))
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn diag_phase(&self) -> f64 {
        self.diag_phase
    }
    pub fn offdiag_phase(&self) -> f64 {
        self.offdiag_phase
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        let d = C64::from_polar(self.r, self.diag_phase);
        let o = C64::from_polar(self.s, self.offdiag_phase);
        Matrix2::new(d, o, o.conj(), d.conj())
    }

    /// (L⁰, L¹, L², L³): σ₀ and σ₁, σ₂ parts real, σ₃ part purely imaginary.
    pub fn pauli_coefficients(&self) -> [C64; 4] {
        [
            C64::new(self.r * self.diag_phase.cos(), 0.0),
            C64::new(self.s * self.offdiag_phase.cos(), 0.0),
            C64::new(-self.s * self.offdiag_phase.sin(), 0.0),
            C64::new(0.0, self.r * self.diag_phase.sin()),
        ]
    }

    /// ‖η L η⁻¹ − L†‖ against a system metric.
    pub fn pseudo_hermiticity_residual(&self, eta: &Metric) -> f64 {
        pseudo_hermiticity_residual(&self.matrix(), eta)
    }
}

/// ‖η M η⁻¹ − M†‖ for an arbitrary matrix (negative controls included).
pub fn pseudo_hermiticity_residual(m: &Matrix2<C64>, eta: &Metric) -> f64 {
    (eta.matrix * m * eta.inverse - m.adjoint()).norm()
}

/// The six damping sums A…F over an operator set.
///
/// A = Σ (s_j² sin²ϕ_j − r_j² sin²φ_j)   D = Σ s_j² sin ϕ_j cos ϕ_j
/// B = Σ (s_j² cos²ϕ_j − r_j² sin²φ_j)   E = −i Σ r_j s_j cos ϕ_j sin φ_j
/// C = Σ s_j²                            F = +i Σ r_j s_j sin ϕ_j sin φ_j
///
/// A, B, C, D are real and E, F purely imaginary; everything is stored as
/// complex because the generator they feed is complex anyway.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DissipatorCoefficients {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
}

impl DissipatorCoefficients {
    pub fn zero() -> Self {
        Self { a: C64::ZERO, b: C64::ZERO, c: C64::ZERO, d: C64::ZERO, e: C64::ZERO, f: C64::ZERO }
    }

    /// Sum the six coefficients over at most three operators.
    pub fn from_operators(ops: &[LindbladOperator]) -> Result<Self> {
        if ops.len() > 3 {
            return Err(Error::TooManyOperators(ops.len()));
        }
        let mut out = Self::zero();
        for op in ops {
            let sv = op.diag_phase.sin();
            let (so, co) = op.offdiag_phase.sin_cos();
            let (r2, s2) = (op.r * op.r, op.s * op.s);
            out.a += C64::new(s2 * so * so - r2 * sv * sv, 0.0);
            out.b += C64::new(s2 * co * co - r2 * sv * sv, 0.0);
            out.c += C64::new(s2, 0.0);
            out.d += C64::new(s2 * so * co, 0.0);
            out.e += C64::new(0.0, -op.r * op.s * co * sv);
            out.f += C64::new(0.0, op.r * op.s * so * sv);
        }
        Ok(out)
    }

    /// Coefficients of the single ξ-channel operator: A = 0, B = C = ξ.
    pub fn case_a_zero(xi: f64) -> Result<Self> {
        Self::from_operators(&[LindbladOperator::case_a_zero(xi)?])
    }

    /// Coefficients of the single ζ-channel operator: B = 0, A = C = ζ.
    pub fn case_b_zero(zeta: f64) -> Result<Self> {
        Self::from_operators(&[LindbladOperator::case_b_zero(zeta)?])
    }

    pub fn is_zero(&self) -> bool {
        self.a == C64::ZERO
            && self.b == C64::ZERO
            && self.c == C64::ZERO
            && self.d == C64::ZERO
            && self.e == C64::ZERO
            && self.f == C64::ZERO
    }

    /// The symmetric damping matrix K entering Γ̇|_diss = −2KΓ⃗.
    pub fn damping_matrix(&self) -> Matrix3<C64> {
        Matrix3::new(
            self.a, self.d, self.e, //
            self.d, self.b, self.f, //
            self.e, self.f, self.c,
        )
    }

    /// Bloch-space dissipator: Γ₀ is untouched (trace row is zero), the
    /// vector part maps to −2KΓ⃗. Agrees with the direct matrix evaluation
    /// −½Σ(L_j²ρ + ρL_j²) + Σ L_j ρ L_j of the pseudo-Hermitian Lindblad term.
    pub fn action(&self, g: &GammaVector) -> GammaVector {
        let v = Vector3::new(g.g1(), g.g2(), g.g3());
        let w = self.damping_matrix() * v * C64::new(-2.0, 0.0);
        GammaVector::new(C64::ZERO, w[0], w[1], w[2])
    }
}
