//! Initial density matrices: mass, flavor, normalized-flavor, and θ-rotated.
//!
//! Everything is pinned to the angle α = arcsin(r sin φ / s) of the system.
//! The generalized mass-basis states are ρ_G,± = |u±⟩⟨u±|η,
//!
//! ρ_G,±(0) = ½ ( 1 ± i tan α   ±sec α      )
//!              ( ±sec α        1 ∓ i tan α ),
//!
//! each of trace 1, summing to the identity. The flavor states
//!
//! ρ_G,a(0) = ( sec α  −i tan α )    ρ_G,b(0) = ( 0        0     )
//!            ( 0       0       ),              ( i tan α  sec α )
//!
//! carry trace sec α; their normalized variants divide by that trace,
//! (1, −i sin α; 0, 0) and (0, 0; i sin α, 1). θ-rotated projectors are the
//! real computational-basis matrices with cos²θ / sin²θ on the diagonal,
//! independent of the metric.
//!
//! In the decoupled limit s = 0 the mass and flavor bases coincide with the
//! computational basis and the mixing matrix is trivial.

use nalgebra::Matrix2;

use crate::bloch::{DensityKind, DensityMatrix};
use crate::hamiltonian::PTHamiltonian;
use crate::{C64, Error, Result};

/// Which initial state to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateLabel {
    MassPlus,
    MassMinus,
    FlavorA,
    FlavorB,
    RotatedAlpha(f64),
    RotatedBeta(f64),
}

/// The change of basis 𝒜⁻¹ between mass and flavor states.
///
/// 𝒜⁻¹ = (1/√(2 cos α)) ( e^{iα/2}   e^{−iα/2} )
///                       ( e^{−iα/2}  −e^{iα/2} )
///
/// — the column matrix of eigenvectors (|u₊⟩ |u₋⟩), so H𝒜⁻¹ = 𝒜⁻¹·diag(λ₊, λ₋)
/// and each row, read as coefficients on (|u₊⟩, |u₋⟩), rebuilds a canonical
/// flavor vector. At α = 0 it reduces to the symmetric (1, 1; 1, −1)/√2.
/// For s = 0 the bases coincide and the matrix is the identity, flagged
/// `trivial`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingMatrix {
    pub matrix: Matrix2<C64>,
    pub trivial: bool,
}

/// Build the initial density matrix for `label`.
///
/// `normalized` divides the generalized flavor states by their trace sec α so
/// downstream transition probabilities stay within [0, 1]; it is a no-op for
/// the mass states (already trace 1) and the rotated projectors.
pub fn initial_density(label: StateLabel, h: &PTHamiltonian, normalized: bool) -> Result<DensityMatrix> {
    match label {
        StateLabel::RotatedAlpha(theta) | StateLabel::RotatedBeta(theta) => {
            if !theta.is_finite() {
                return Err(Error::OutOfDomain(format!("rotation angle theta = {theta} must be finite")));
            }
            let (sn, cs) = theta.sin_cos();
            let (d1, d2, off) = match label {
                StateLabel::RotatedAlpha(_) => (cs * cs, sn * sn, sn * cs),
                _ => (sn * sn, cs * cs, -sn * cs),
            };
            let re = |x: f64| C64::new(x, 0.0);
            Ok(DensityMatrix::new(
                Matrix2::new(re(d1), re(off), re(off), re(d2)),
                DensityKind::Ordinary,
            ))
        }
        StateLabel::MassPlus | StateLabel::MassMinus | StateLabel::FlavorA | StateLabel::FlavorB => {
            if h.offdiag_phase() != 0.0 {
                return Err(Error::UnsupportedPhase(h.offdiag_phase()));
            }
            let kind = if normalized { DensityKind::GeneralizedNormalized } else { DensityKind::Generalized };
            if h.s() == 0.0 {
                // Decoupled limit: mass and flavor bases coincide.
                let top = matches!(label, StateLabel::MassPlus | StateLabel::FlavorA);
                let (p, q) = if top { (C64::ONE, C64::ZERO) } else { (C64::ZERO, C64::ONE) };
                return Ok(DensityMatrix::new(
                    Matrix2::new(p, C64::ZERO, C64::ZERO, q),
                    kind,
                ));
            }
            let a = h.alpha();
            let sec = C64::new(1.0 / a.cos(), 0.0);
            let it = C64::new(0.0, a.tan());
            let half = C64::new(0.5, 0.0);
            let matrix = match label {
                StateLabel::MassPlus => {
                    Matrix2::new(C64::ONE + it, sec, sec, C64::ONE - it) * half
                }
                StateLabel::MassMinus => {
                    Matrix2::new(C64::ONE - it, -sec, -sec, C64::ONE + it) * half
                }
                StateLabel::FlavorA => {
                    if normalized {
                        let isin = C64::new(0.0, a.sin());
                        Matrix2::new(C64::ONE, -isin, C64::ZERO, C64::ZERO)
                    } else {
                        Matrix2::new(sec, -it, C64::ZERO, C64::ZERO)
                    }
                }
                StateLabel::FlavorB => {
                    if normalized {
                        let isin = C64::new(0.0, a.sin());
                        Matrix2::new(C64::ZERO, C64::ZERO, isin, C64::ONE)
                    } else {
                        Matrix2::new(C64::ZERO, C64::ZERO, it, sec)
                    }
                }
                _ => unreachable!(),
            };
            Ok(DensityMatrix::new(matrix, kind))
        }
    }
}

/// The mass↔flavor change of basis for this system (ϕ = 0 only).
pub fn mixing_matrix(h: &PTHamiltonian) -> Result<MixingMatrix> {
    if h.offdiag_phase() != 0.0 {
        return Err(Error::UnsupportedPhase(h.offdiag_phase()));
    }
    if h.s() == 0.0 {
        return Ok(MixingMatrix { matrix: Matrix2::identity(), trivial: true });
    }
    let a = h.alpha();
    let norm = C64::new((2.0 * a.cos()).sqrt(), 0.0);
    let ep = C64::from_polar(1.0, a / 2.0);
    let em = C64::from_polar(1.0, -a / 2.0);
    Ok(MixingMatrix {
        matrix: Matrix2::new(ep / norm, em / norm, em / norm, -ep / norm),
        trivial: false,
    })
}
