//! The four-parameter non-Hermitian Hamiltonian and its PT machinery.
//!
//! H = ( r e^{iφ}   s e^{iϕ} )
//!     ( s e^{−iϕ}  r e^{−iφ} )
//!
//! with field strengths r, s ≥ 0, diagonal phase φ and off-diagonal phase ϕ.
//! H commutes with PT, where P swaps the basis states and T conjugates.
//! Its eigenvalues λ± = r cos φ ± √(s² − r² sin²φ) are real — the PT-symmetric
//! phase — exactly when s² > r² sin²φ; they are independent of ϕ.
//!
//! In the unbroken phase (and at ϕ = 0) everything is controlled by the
//! single angle α = arcsin(r sin φ / s) ∈ (−π/2, π/2): eigenvectors, the
//! pseudo-Hermiticity metric η, and the similarity transform G = η^{1/2}
//! that maps H to an honest Hermitian matrix.

use nalgebra::{Matrix2, Vector2};

use crate::{C64, Error, Result};

/// Relative tolerance below which s² − r² sin²φ counts as "at the boundary".
const BOUNDARY_TOL: f64 = 1e-12;

/// Both eigenvalues of H. `plus` carries the +√ branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    pub plus: C64,
    pub minus: C64,
}

impl Spectrum {
    /// λ₊ + λ₋ = tr H = 2 r cos φ.
    pub fn sum(&self) -> C64 {
        self.plus + self.minus
    }

    /// λ₊ λ₋ = det H = r² − s².
    pub fn product(&self) -> C64 {
        self.plus * self.minus
    }
}

/// The pseudo-Hermiticity metric η satisfying η H η⁻¹ = H†.
///
/// For ϕ = 0: η = ( sec α   −i tan α )   η⁻¹ = ( sec α    i tan α )
///                ( i tan α   sec α  ),        ( −i tan α   sec α ).
///
/// det η = 1. η also equals (|u₊⟩⟨u₊| + |u₋⟩⟨u₋|)⁻¹, the inverse of the
/// eigenvector completeness sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    pub matrix: Matrix2<C64>,
    pub inverse: Matrix2<C64>,
}

/// G = η^{1/2}: the similarity transform with G H G⁻¹ Hermitian.
///
/// G = ( cos(α/2)   −i sin(α/2) ) / √cos α,   G² = η,   G⁻¹ = G* = Gᵀ.
///     ( i sin(α/2)   cos(α/2)  )
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityTransform {
    pub matrix: Matrix2<C64>,
    pub inverse: Matrix2<C64>,
}

/// A PT-symmetric two-level Hamiltonian in the unbroken phase.
///
/// Construction rejects parameter points where the metric would blow up:
/// for s > 0 the gap s² − r² sin²φ must exceed 1e−12 · s². The diagonal
/// limit s = 0 is admitted unconditionally (the system decouples and no
/// metric is needed), even though r sin φ ≠ 0 there means complex
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PTHamiltonian {
    r: f64,
    s: f64,
    diag_phase: f64,
    offdiag_phase: f64,
}

impl PTHamiltonian {
    pub fn new(r: f64, s: f64, diag_phase: f64, offdiag_phase: f64) -> Result<Self> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::OutOfDomain(format!("field strength r = {r} must be finite and >= 0")));
        }
        if s < 0.0 || !s.is_finite() {
            return Err(Error::OutOfDomain(format!("field strength s = {s} must be finite and >= 0")));
        }
        if !diag_phase.is_finite() || !offdiag_phase.is_finite() {
            return Err(Error::OutOfDomain("phases must be finite".into()));
        }
        if s > 0.0 {
            let gap = s * s - r * r * diag_phase.sin().powi(2);
            if gap < BOUNDARY_TOL * s * s {
                return Err(Error::PhaseBoundary { gap });
            }
        }
        Ok(Self { r, s, diag_phase, offdiag_phase })
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

    /// The matrix H itself.
    pub fn matrix(&self) -> Matrix2<C64> {
        let d = C64::from_polar(self.r, self.diag_phase);
        let o = C64::from_polar(self.s, self.offdiag_phase);
        Matrix2::new(d, o, o.conj(), d.conj())
    }

    /// s² − r² sin²φ: positive inside the unbroken phase.
    pub fn boundary_gap(&self) -> f64 {
        self.s * self.s - self.r * self.r * self.diag_phase.sin().powi(2)
    }

    /// Strict unbroken-phase predicate s² > r² sin²φ.
    pub fn pt_symmetric(&self) -> bool {
        self.boundary_gap() > 0.0
    }

    /// λ± = r cos φ ± √(s² − r² sin²φ).
    ///
    /// The square root is taken in ℂ so the s → 0 diagonal limit
    /// (λ± = r e^{±iφ} up to branch labeling) comes out continuous.
    pub fn eigenvalues(&self) -> Spectrum {
        let root = C64::new(self.boundary_gap(), 0.0).sqrt();
        let base = C64::new(self.r * self.diag_phase.cos(), 0.0);
        Spectrum { plus: base + root, minus: base - root }
    }

    /// α = arcsin(r sin φ / s), the single angle steering metric and states.
    ///
    /// Construction guarantees |r sin φ / s| < 1 whenever s > 0; in the
    /// decoupled limit s = 0 the angle plays no role and is reported as 0.
    pub fn alpha(&self) -> f64 {
        if self.s == 0.0 {
            0.0
        } else {
            (self.r * self.diag_phase.sin() / self.s).asin()
        }
    }

    fn require_zero_offdiag_phase(&self) -> Result<()> {
        if self.offdiag_phase != 0.0 {
            return Err(Error::UnsupportedPhase(self.offdiag_phase));
        }
        Ok(())
    }

    /// Normalized eigenvectors (ϕ = 0 only):
    ///
    /// |u±⟩ = ( e^{±iα/2}, ±e^{∓iα/2} )ᵀ / √(2 cos α),
    ///
    /// biorthogonal under η rather than orthogonal under ⟨·|·⟩.
    /// For s = 0 the Hamiltonian is diagonal and the basis vectors are
    /// returned.
    pub fn eigenvectors(&self) -> Result<(Vector2<C64>, Vector2<C64>)> {
        self.require_zero_offdiag_phase()?;
        if self.s == 0.0 {
            return Ok((Vector2::new(C64::ONE, C64::ZERO), Vector2::new(C64::ZERO, C64::ONE)));
        }
        let a = self.alpha();
        let norm = C64::new((2.0 * a.cos()).sqrt(), 0.0);
        let ep = C64::from_polar(1.0, a / 2.0);
        let em = C64::from_polar(1.0, -a / 2.0);
        Ok((
            Vector2::new(ep / norm, em / norm),
            Vector2::new(em / norm, -ep / norm),
        ))
    }

    /// The metric η with η H η⁻¹ = H† (ϕ = 0 only; identity for s = 0).
    pub fn metric(&self) -> Result<Metric> {
        self.require_zero_offdiag_phase()?;
        if self.s == 0.0 {
            return Ok(Metric { matrix: Matrix2::identity(), inverse: Matrix2::identity() });
        }
        let a = self.alpha();
        let sec = C64::new(1.0 / a.cos(), 0.0);
        let it = C64::new(0.0, a.tan());
        Ok(Metric {
            matrix: Matrix2::new(sec, -it, it, sec),
            inverse: Matrix2::new(sec, it, -it, sec),
        })
    }

    /// G = η^{1/2} with G H G⁻¹ Hermitian (ϕ = 0 only; identity for s = 0).
    pub fn similarity_transform(&self) -> Result<SimilarityTransform> {
        self.require_zero_offdiag_phase()?;
        if self.s == 0.0 {
            return Ok(SimilarityTransform {
                matrix: Matrix2::identity(),
                inverse: Matrix2::identity(),
            });
        }
        let a = self.alpha();
        let norm = a.cos().sqrt();
        let c = C64::new((a / 2.0).cos() / norm, 0.0);
        let is = C64::new(0.0, (a / 2.0).sin() / norm);
        let g = Matrix2::new(c, -is, is, c);
        // G has real diagonal and anti-symmetric imaginary off-diagonal, so
        // G⁻¹ = G* = Gᵀ.
        Ok(SimilarityTransform { matrix: g, inverse: g.conjugate() })
    }

    /// Max-norm residual of [H, PT] applied to the basis vectors.
    pub fn pt_commutator_check(&self) -> f64 {
        pt_commutator_residual(&self.matrix())
    }
}

/// ‖[H, PT] e_k‖ maximized over the basis vectors e₁, e₂, where P swaps the
/// two components and T conjugates.
///
/// [H, PT] is antilinear, so vanishing on a basis implies vanishing on all
/// of ℂ²; two vectors suffice for an exact check.
pub fn pt_commutator_residual(h: &Matrix2<C64>) -> f64 {
    let p = Matrix2::new(C64::ZERO, C64::ONE, C64::ONE, C64::ZERO);
    let mut worst: f64 = 0.0;
    for k in 0..2 {
        let mut e = Vector2::new(C64::ZERO, C64::ZERO);
        e[k] = C64::ONE;
        let lhs = h * (p * e.conjugate());
        let rhs = p * (h * e).conjugate();
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}
