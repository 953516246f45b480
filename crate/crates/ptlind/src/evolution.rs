//! Bloch-space generator assembly, exact exponentiation, and integrators.
//!
//! In Pauli components the master equation for the generalized density
//! matrix is linear, Γ̇(t) = −2RΓ(t), with a 4×4 generator R whose row and
//! column 0 vanish (Γ₀, the trace, is conserved). The lower-right 3×3 block
//! combines the damping matrix of the dissipator with the Hamiltonian's
//! vector components H₁ = s cos ϕ, H₂ = −s sin ϕ, H₃ = i r sin φ:
//!
//! R₃ = ( A       D + H₃   E − H₂ )
//!      ( D − H₃  B        F + H₁ )
//!      ( E + H₂  F − H₁   C      ).
//!
//! The propagator M(t) = exp(−2Rt) is produced exactly by Cayley–Hamilton:
//! subtract the trace, S = R₃ − (tr R₃/3)·1, find the three roots of the
//! depressed characteristic cubic, and interpolate e^x through the nodes
//! x_i = −2λ_i t with a quadratic — a 3×3 matrix satisfies its own
//! characteristic equation, so the quadratic reproduces the exponential
//! exactly. A trace factor Φ = e^{−2t·tr R₃/3} restores the shift.
//!
//! Near-degenerate root triples make the interpolation singular; there the
//! propagator falls back to a scaled-and-squared Taylor series, which is
//! exact to tolerance and immune to confluence.
//!
//! The normalized density matrix ρ_N = ρ/tr ρ obeys a different, nonlinear
//! equation: its Γ̇ has a linear part coupling Γ₀ to Γ⃗ through Im H_μ plus a
//! quadratic term −4(Σ_μ Im(H_μ)Γ_μ)Γ. The quadratic term is what holds
//! tr ρ_N = 1; integrating without it visibly breaks normalization.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::bloch::{DensityKind, DensityMatrix, GammaVector};
use crate::cubic::depressed_cubic_roots;
use crate::hamiltonian::PTHamiltonian;
use crate::lindblad::DissipatorCoefficients;
use crate::{C64, Error, Result};

/// Minimum pairwise root separation (relative to 1 + max |λ|) below which
/// the Cayley–Hamilton interpolation is abandoned for the series fallback.
const DEGENERACY_TOL: f64 = 1e-6;

/// Structural label for reporting which regime a generator came from.
///
/// Nothing dispatches on this — propagation is uniform — but figures, CSV
/// headers, and error messages want to know.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// ξ damping channel (A = 0) with a generic PT Hamiltonian.
    AZero,
    /// ζ damping channel (B = 0) with a generic PT Hamiltonian.
    BZero,
    /// Anything else built from a PT Hamiltonian.
    General,
    /// ω-diagonal Hermitian Hamiltonian diag(−ω, ω).
    Neutrino,
    /// r = 0: the Hamiltonian is Hermitian.
    HermitianR0,
    /// s = 0: the Hamiltonian is diagonal and the two levels decouple.
    DiagonalS0,
}

/// The 4×4 generator R of Γ̇ = −2RΓ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Generator {
    matrix: Matrix4<C64>,
    kind: GeneratorKind,
}

impl Generator {
    /// Generator for a PT Hamiltonian plus dissipator (any off-diagonal
    /// phase ϕ; the special structures of the formula families all have
    /// ϕ = 0 but the assembly is general).
    pub fn new(h: &PTHamiltonian, coeffs: &DissipatorCoefficients) -> Self {
        let h_vec = Vector3::new(
            C64::new(h.s() * h.offdiag_phase().cos(), 0.0),
            C64::new(-h.s() * h.offdiag_phase().sin(), 0.0),
            C64::new(0.0, h.r() * h.diag_phase().sin()),
        );
        let kind = if h.s() == 0.0 {
            GeneratorKind::DiagonalS0
        } else if h.r() == 0.0 {
            GeneratorKind::HermitianR0
        } else if !coeffs.is_zero() && coeffs.a == C64::ZERO {
            GeneratorKind::AZero
        } else if !coeffs.is_zero() && coeffs.b == C64::ZERO {
            GeneratorKind::BZero
        } else {
            GeneratorKind::General
        };
        Self::from_bloch(h_vec, coeffs, kind)
    }

    /// Generator for the ω-diagonal Hermitian Hamiltonian diag(−ω, ω),
    /// whose only vector component is the real H₃ = −ω.
    pub fn neutrino(omega: f64, coeffs: &DissipatorCoefficients) -> Self {
        let h_vec = Vector3::new(C64::ZERO, C64::ZERO, C64::new(-omega, 0.0));
        Self::from_bloch(h_vec, coeffs, GeneratorKind::Neutrino)
    }

    /// Assemble R from raw Pauli components (H₁, H₂, H₃) and a dissipator.
    pub fn from_bloch(h_vec: Vector3<C64>, coeffs: &DissipatorCoefficients, kind: GeneratorKind) -> Self {
        let (h1, h2, h3) = (h_vec[0], h_vec[1], h_vec[2]);
        let mut m = Matrix4::zeros();
        m[(1, 1)] = coeffs.a;
        m[(1, 2)] = coeffs.d + h3;
        m[(1, 3)] = coeffs.e - h2;
        m[(2, 1)] = coeffs.d - h3;
        m[(2, 2)] = coeffs.b;
        m[(2, 3)] = coeffs.f + h1;
        m[(3, 1)] = coeffs.e + h2;
        m[(3, 2)] = coeffs.f - h1;
        m[(3, 3)] = coeffs.c;
        Self { matrix: m, kind }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// The lower-right 3×3 block (row/column 0 of R are zero).
    pub fn block(&self) -> Matrix3<C64> {
        self.matrix.fixed_view::<3, 3>(1, 1).into_owned()
    }

    /// Traceless reduction: S = R₃ − (tr R₃/3)·1 and the shift tr R₃/3
    /// feeding the prefactor Φ = e^{−2t·shift}.
    pub fn depressed(&self) -> (Matrix3<C64>, C64) {
        let block = self.block();
        let shift = block.trace() / C64::new(3.0, 0.0);
        (block - Matrix3::identity() * shift, shift)
    }

    /// Frobenius norm of R (row/column 0 vanish, so this equals ‖R₃‖).
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Exact propagator M(t) = exp(−2Rt).
    pub fn propagator(&self, t: f64) -> Propagator {
        Propagator::build(self, t)
    }
}

/// Roots of the depressed characteristic cubic of a traceless 3×3 matrix:
/// λ³ + c₁λ + c₀ = 0 with c₁ = −tr(S²)/2 and c₀ = −det S.
pub fn cubic_roots(s: &Matrix3<C64>) -> [C64; 3] {
    let c1 = -(s * s).trace() * C64::new(0.5, 0.0);
    let c0 = -s.determinant();
    depressed_cubic_roots(c1, c0)
}

/// M(t) = exp(−2Rt) together with the spectral data that produced it.
///
/// `coeffs` holds the interpolation coefficients (a₀, a₁, a₂) of
/// M₃ = Φ(a₀·1 + a₁X + a₂X²), X = −2St; it is `None` when the root triple
/// was too close and the series fallback produced the matrix instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator {
    pub matrix: Matrix4<C64>,
    pub cubic_roots: [C64; 3],
    pub coeffs: Option<(C64, C64, C64)>,
}

impl Propagator {
    fn build(g: &Generator, t: f64) -> Self {
        let (s, shift) = g.depressed();
        let roots = cubic_roots(&s);
        if t == 0.0 {
            return Self {
                matrix: Matrix4::identity(),
                cubic_roots: roots,
                coeffs: Some((C64::ONE, C64::ZERO, C64::ZERO)),
            };
        }

        let max_mag = roots.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let min_sep = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (roots[i] - roots[j]).norm())
            .fold(f64::INFINITY, f64::min);

        let (m3, coeffs) = if min_sep < DEGENERACY_TOL * (1.0 + max_mag) {
            // Confluent interpolation nodes: the linear solve for (a₀,a₁,a₂)
            // is singular, so exponentiate −2R₃t by series directly.
            (series_expm3(&(g.block() * C64::new(-2.0 * t, 0.0))), None)
        } else {
            let x: [C64; 3] = std::array::from_fn(|i| roots[i] * (-2.0 * t));
            // Newton divided differences of e^x through the three nodes.
            let f1 = x[0].exp();
            let f12 = (x[1].exp() - f1) / (x[1] - x[0]);
            let f23 = (x[2].exp() - x[1].exp()) / (x[2] - x[1]);
            let f123 = (f23 - f12) / (x[2] - x[0]);
            let a0 = f1 - f12 * x[0] + f123 * x[0] * x[1];
            let a1 = f12 - f123 * (x[0] + x[1]);
            let a2 = f123;
            let big_x = s * C64::new(-2.0 * t, 0.0);
            let phi = (shift * (-2.0 * t)).exp();
            let m3 = (Matrix3::identity() * a0 + big_x * a1 + big_x * big_x * a2) * phi;
            (m3, Some((a0, a1, a2)))
        };

        let mut m = Matrix4::identity();
        for i in 0..3 {
            for j in 0..3 {
                m[(i + 1, j + 1)] = m3[(i, j)];
            }
        }
        Self { matrix: m, cubic_roots: roots, coeffs }
    }

    /// Whether the series fallback produced the matrix.
    pub fn via_series(&self) -> bool {
        self.coeffs.is_none()
    }

    /// Γ(t) = M(t)Γ(0). The Γ₀ component passes through untouched.
    pub fn apply(&self, g: &GammaVector) -> GammaVector {
        GammaVector(self.matrix * g.0)
    }
}

/// Scaled-and-squared 30-term Taylor exponential of a 3×3 complex matrix.
fn series_expm3(x: &Matrix3<C64>) -> Matrix3<C64> {
    let norm = x.norm();
    let k: u32 = if norm <= 0.5 { 0 } else { (norm / 0.5).log2().ceil() as u32 };
    let scaled = x / C64::new(2f64.powi(k as i32), 0.0);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for n in 1..=30 {
        term = term * scaled / C64::new(n as f64, 0.0);
        sum += term;
    }
    for _ in 0..k {
        sum = sum * sum;
    }
    sum
}

/// Classical fixed-step RK4 on Γ̇ = f(Γ).
fn rk4<F: Fn(&Vector4<C64>) -> Vector4<C64>>(f: F, y0: Vector4<C64>, t: f64, steps: usize) -> Vector4<C64> {
    let h = t / steps as f64;
    let half = C64::new(0.5 * h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&(y + k1 * half));
        let k3 = f(&(y + k2 * half));
        let k4 = f(&(y + k3 * C64::new(h, 0.0)));
        y += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    y
}

fn default_steps(t: f64, norm: f64) -> usize {
    ((2000.0 * t * norm.max(1.0)).ceil() as usize).max(1)
}

/// Fixed-step RK4 integration of Γ̇ = −2RΓ — the independent check on the
/// exact propagator. `steps = None` picks ⌈2000·t·max(1, ‖R‖)⌉.
pub fn integrate_oracle(g: &Generator, gamma0: &GammaVector, t: f64, steps: Option<usize>) -> Result<GammaVector> {
    if t == 0.0 {
        return Ok(*gamma0);
    }
    let norm = g.norm();
    let steps = steps.unwrap_or_else(|| default_steps(t, norm));
    let coarseness = 2.0 * norm * t / steps as f64;
    if coarseness >= 0.1 {
        return Err(Error::StepTooLarge(coarseness));
    }
    let r = *g.matrix();
    let minus_two = C64::new(-2.0, 0.0);
    Ok(GammaVector(rk4(|y| r * y * minus_two, gamma0.0, t, steps)))
}

/// The 4×4 linear part of the normalized-density-matrix equation. Unlike R,
/// its row and column 0 carry −Im H_μ: the trace of ρ is not conserved, and
/// ρ_N compensates through the quadratic term.
fn normalized_linear_part(h: &PTHamiltonian, coeffs: &DissipatorCoefficients) -> Matrix4<C64> {
    let h1 = C64::new(h.s() * h.offdiag_phase().cos(), 0.0);
    let h2 = C64::new(-h.s() * h.offdiag_phase().sin(), 0.0);
    let h3 = C64::new(0.0, h.r() * h.diag_phase().sin());
    let im = |z: C64| C64::new(z.im, 0.0);
    let re = |z: C64| C64::new(z.re, 0.0);
    let mut m = Matrix4::zeros();
    for (idx, hmu) in [(1, h1), (2, h2), (3, h3)] {
        m[(0, idx)] = -im(hmu);
        m[(idx, 0)] = -im(hmu);
    }
    m[(1, 1)] = coeffs.a;
    m[(1, 2)] = coeffs.d + re(h3);
    m[(1, 3)] = coeffs.e - re(h2);
    m[(2, 1)] = coeffs.d - re(h3);
    m[(2, 2)] = coeffs.b;
    m[(2, 3)] = coeffs.f + re(h1);
    m[(3, 1)] = coeffs.e + re(h2);
    m[(3, 2)] = coeffs.f - re(h1);
    m[(3, 3)] = coeffs.c;
    m
}

fn evolve_normalized_impl(
    h: &PTHamiltonian,
    coeffs: &DissipatorCoefficients,
    rho0: &DensityMatrix,
    t: f64,
    steps: Option<usize>,
    with_quadratic: bool,
) -> Result<DensityMatrix> {
    let trace = rho0.trace();
    if (trace - C64::ONE).norm() > 1e-10 {
        return Err(Error::OutOfDomain(format!(
            "normalized evolution requires tr rho(0) = 1, got {trace}"
        )));
    }
    let gamma0 = rho0.gamma();
    if t == 0.0 {
        return Ok(gamma0.density(DensityKind::Ordinary));
    }
    let lin = normalized_linear_part(h, coeffs);
    let norm = lin.norm();
    let steps = steps.unwrap_or_else(|| default_steps(t, norm));
    let coarseness = 2.0 * norm.max(1.0) * t / steps as f64;
    if coarseness >= 0.1 {
        return Err(Error::StepTooLarge(coarseness));
    }
    // Im H_μ: H₀ = r cos φ, H₁ = s cos ϕ, H₂ = −s sin ϕ are all real for the
    // four-parameter form; only H₃ = i r sin φ contributes.
    let im_h = Vector4::new(
        C64::ZERO,
        C64::ZERO,
        C64::ZERO,
        C64::new(h.r() * h.diag_phase().sin(), 0.0),
    );
    let minus_two = C64::new(-2.0, 0.0);
    let minus_four = C64::new(-4.0, 0.0);
    let out = rk4(
        |y| {
            let mut dy = lin * y * minus_two;
            if with_quadratic {
                let coupling = (0..4).map(|mu| im_h[mu] * y[mu]).sum::<C64>();
                dy += y * (coupling * minus_four);
            }
            dy
        },
        gamma0.0,
        t,
        steps,
    );
    Ok(GammaVector(out).density(DensityKind::Ordinary))
}

/// Integrate the nonlinear normalized-density-matrix equation, quadratic
/// term included; tr ρ_N stays 1 to integrator accuracy.
pub fn evolve_normalized(
    h: &PTHamiltonian,
    coeffs: &DissipatorCoefficients,
    rho0: &DensityMatrix,
    t: f64,
    steps: Option<usize>,
) -> Result<DensityMatrix> {
    evolve_normalized_impl(h, coeffs, rho0, t, steps, true)
}

/// Same integration with the quadratic term deleted — the defective linear
/// truncation, kept so its trace drift can be demonstrated.
pub fn evolve_normalized_linear_only(
    h: &PTHamiltonian,
    coeffs: &DissipatorCoefficients,
    rho0: &DensityMatrix,
    t: f64,
    steps: Option<usize>,
) -> Result<DensityMatrix> {
    evolve_normalized_impl(h, coeffs, rho0, t, steps, false)
}
