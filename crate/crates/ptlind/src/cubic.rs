//! Closed-form roots of a depressed complex cubic λ³ + c₁λ + c₀ = 0.
//!
//! Cardano in ℂ: with Δ = (c₀/2)² + (c₁/3)³ and u³ = −c₀/2 ± √Δ (the branch
//! of larger magnitude, avoiding cancellation), the roots are ωᵏu + ω̄ᵏ c₁/(−3u)
//! for the cube roots of unity ωᵏ. One Newton step per root polishes the
//! cube-root rounding back to machine precision.
//!
//! Traceless 3×3 matrices land here: their characteristic polynomial is
//! depressed with c₁ = −tr(S²)/2 and c₀ = −det S.

use crate::C64;

/// All three roots of λ³ + c₁λ + c₀ = 0, in no particular order.
pub fn depressed_cubic_roots(c1: C64, c0: C64) -> [C64; 3] {
    if c0.norm() == 0.0 && c1.norm() == 0.0 {
        return [C64::ZERO; 3];
    }
    let half_q = c0 * 0.5;
    let p_third = c1 / 3.0;
    let disc = half_q * half_q + p_third * p_third * p_third;
    let sq = disc.sqrt();
    // u³ candidates −c₀/2 ± √Δ multiply to −(c₁/3)³ and sum to −c₀, so the
    // larger-magnitude one is nonzero unless both coefficients vanish.
    let cand_a = -half_q + sq;
    let cand_b = -half_q - sq;
    let u3 = if cand_a.norm() >= cand_b.norm() { cand_a } else { cand_b };
    if u3.norm() == 0.0 {
        return [C64::ZERO; 3];
    }
    let u = u3.cbrt();
    let v = -p_third / u;
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3);
    let raw = [
        u + v,
        omega * u + omega.conj() * v,
        omega.conj() * u + omega * v,
    ];
    raw.map(|x| newton_polish(x, c1, c0))
}

/// One Newton–Raphson step on f(λ) = λ³ + c₁λ + c₀.
fn newton_polish(x: C64, c1: C64, c0: C64) -> C64 {
    let f = x * x * x + c1 * x + c0;
    let df = x * x * 3.0 + c1;
    if df.norm() > f64::MIN_POSITIVE { x - f / df } else { x }
}
