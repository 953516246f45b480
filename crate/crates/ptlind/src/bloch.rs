//! Pauli algebra and the Γ-vector ↔ density-matrix transform.
//!
//! Any 2×2 complex matrix X expands uniquely as X = X₀σ₀ + X₁σ₁ + X₂σ₂ + X₃σ₃
//! with complex coefficients X_μ = tr(Xσ_μ)/2. For a density matrix the
//! coefficient 4-vector is written Γ and obeys
//!
//! Γ₀ = (ρ₁₁ + ρ₂₂)/2, Γ₁ = (ρ₁₂ + ρ₂₁)/2, Γ₂ = (ρ₂₁ − ρ₁₂)/(2i), Γ₃ = (ρ₁₁ − ρ₂₂)/2,
//!
//! an exact linear bijection. Components stay complex: the generalized
//! density matrix ρ_G = ρη is not Hermitian and its Γ₃ picks up an imaginary
//! part.

use nalgebra::{Matrix2, Vector4};

use crate::C64;

/// σ₀ = identity.
pub fn sigma0() -> Matrix2<C64> {
    Matrix2::identity()
}

/// σ₁ = (0 1; 1 0).
pub fn sigma1() -> Matrix2<C64> {
    Matrix2::new(C64::ZERO, C64::ONE, C64::ONE, C64::ZERO)
}

/// σ₂ = (0 −i; i 0).
pub fn sigma2() -> Matrix2<C64> {
    Matrix2::new(C64::ZERO, -C64::I, C64::I, C64::ZERO)
}

/// σ₃ = (1 0; 0 −1).
pub fn sigma3() -> Matrix2<C64> {
    Matrix2::new(C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE)
}

/// The four Pauli matrices indexed 0..=3.
pub fn sigma(mu: usize) -> Matrix2<C64> {
    match mu {
        0 => sigma0(),
        1 => sigma1(),
        2 => sigma2(),
        3 => sigma3(),
        _ => panic!("Pauli index {mu} out of range"),
    }
}

/// Pauli coefficients of an arbitrary 2×2 matrix: X_μ = tr(Xσ_μ)/2.
pub fn pauli_expand(x: &Matrix2<C64>) -> [C64; 4] {
    let half = C64::new(0.5, 0.0);
    [
        (x[(0, 0)] + x[(1, 1)]) * half,
        (x[(0, 1)] + x[(1, 0)]) * half,
        (x[(1, 0)] - x[(0, 1)]) / C64::new(0.0, 2.0),
        (x[(0, 0)] - x[(1, 1)]) * half,
    ]
}

/// Rebuild Σ X_μ σ_μ from Pauli coefficients.
pub fn pauli_reconstruct(c: &[C64; 4]) -> Matrix2<C64> {
    Matrix2::new(
        c[0] + c[3],
        c[1] - C64::I * c[2],
        c[1] + C64::I * c[2],
        c[0] - c[3],
    )
}

/// Which object a [`DensityMatrix`] represents.
///
/// `Ordinary` is the textbook ρ (Hermitian). `Generalized` is ρ_G = ρη, the
/// object whose Lindblad equation keeps the Hermitian-theory form; it equals
/// a Hermitian matrix times the metric and is generally non-Hermitian.
/// `GeneralizedNormalized` divides a generalized flavor state by its trace so
/// that transition probabilities stay in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityKind {
    Ordinary,
    Generalized,
    GeneralizedNormalized,
}

/// A 2×2 density matrix together with the convention it lives in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: Matrix2<C64>,
    pub kind: DensityKind,
}

impl DensityMatrix {
    pub fn new(matrix: Matrix2<C64>, kind: DensityKind) -> Self {
        Self { matrix, kind }
    }

    /// Pauli-coefficient vector Γ of this matrix.
    pub fn gamma(&self) -> GammaVector {
        GammaVector::from_matrix(&self.matrix)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// The Pauli-coefficient 4-vector Γ of a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaVector(pub Vector4<C64>);

impl GammaVector {
    pub fn new(g0: C64, g1: C64, g2: C64, g3: C64) -> Self {
        Self(Vector4::new(g0, g1, g2, g3))
    }

    /// Γ of an arbitrary 2×2 matrix (the Eq.-level component relations).
    pub fn from_matrix(m: &Matrix2<C64>) -> Self {
        let half = C64::new(0.5, 0.0);
        Self(Vector4::new(
            (m[(0, 0)] + m[(1, 1)]) * half,
            (m[(0, 1)] + m[(1, 0)]) * half,
            (m[(1, 0)] - m[(0, 1)]) / C64::new(0.0, 2.0),
            (m[(0, 0)] - m[(1, 1)]) * half,
        ))
    }

    /// Inverse transform: ρ = Γ₀σ₀ + Γ·σ, tagged with `kind`.
    pub fn density(&self, kind: DensityKind) -> DensityMatrix {
        let g = &self.0;
        DensityMatrix::new(
            Matrix2::new(
                g[0] + g[3],
                g[1] - C64::I * g[2],
                g[1] + C64::I * g[2],
                g[0] - g[3],
            ),
            kind,
        )
    }

    pub fn g0(&self) -> C64 {
        self.0[0]
    }
    pub fn g1(&self) -> C64 {
        self.0[1]
    }
    pub fn g2(&self) -> C64 {
        self.0[2]
    }
    pub fn g3(&self) -> C64 {
        self.0[3]
    }
}

/// tr(XY) for 2×2 matrices via Pauli components: tr(XY) = 2 Σ X_μ Y_μ.
pub fn trace_product(x: &GammaVector, y: &GammaVector) -> C64 {
    (x.0[0] * y.0[0] + x.0[1] * y.0[1] + x.0[2] * y.0[2] + x.0[3] * y.0[3]) * C64::new(2.0, 0.0)
}
