//! Transition probabilities: exact propagation vs closed forms.
//!
//! The numeric path propagates Γ⃗ with the exact 4×4 propagator and reads off
//!
//! ```text
//! P_{x→y}(t) = tr[ρ_x(t) ρ_y(0)] = 2 Σ_μ Γ_μ(t) Γ'_μ(0),
//! ```
//!
//! the trace inner product of [`bloch`](crate::bloch). The closed-form path
//! evaluates the analytically solvable parameter families ([`FormulaFamily`]):
//! single-channel dissipators aligned with σ₁ (B = 0, exactly solvable) or
//! with σ₂ (A = 0, solvable in special limits, otherwise a secular series in
//! the small parameters φ and ξ). Each path cross-checks the other through
//! [`compare`].

use crate::bloch::{trace_product, DensityMatrix};
use crate::evolution::Generator;
use crate::hamiltonian::PTHamiltonian;
use crate::lindblad::DissipatorCoefficients;
use crate::states::{initial_density, StateLabel};
use crate::{Error, Result, C64};

/// Largest imaginary residue tolerated when a trace is reported as a real
/// probability; larger residues raise [`Error::NonRealProbability`].
pub const IMAG_TOL: f64 = 1e-8;

/// Which pair of initial states is probed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbBasis {
    /// Generalized eigenstate pair ρ_G,± (the "+/−" channels).
    Mass,
    /// Normalized generalized pair ρ_GN,a / ρ_GN,b (the "a/b" channels).
    Flavor,
    /// Angle-parametrized projector pair ρ_α(θ), ρ_β(θ); reported in the
    /// a/b columns.
    Rotated(f64),
}

impl ProbBasis {
    /// Column labels in quad order (1→1, 1→2, 2→1, 2→2).
    pub fn column_labels(&self) -> [&'static str; 4] {
        match self {
            ProbBasis::Mass => ["P_pp", "P_pm", "P_mp", "P_mm"],
            ProbBasis::Flavor | ProbBasis::Rotated(_) => ["P_aa", "P_ab", "P_ba", "P_bb"],
        }
    }
}

/// All four transition probabilities between a state pair at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityQuad {
    pub basis: ProbBasis,
    /// `[P(1→1), P(1→2), P(2→1), P(2→2)]` where (1, 2) is (+, −), (a, b) or
    /// (α, β) according to `basis`.
    pub p: [f64; 4],
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::NonRealProbability(z.im));
    }
    Ok(z.re)
}

/// P_{from→to}(t) = tr[ρ_from(t) ρ_to(0)] with ρ_from propagated exactly.
pub fn transition_probability(
    gen: &Generator,
    from: &DensityMatrix,
    to: &DensityMatrix,
    t: f64,
) -> Result<f64> {
    let m = gen.propagator(t);
    real_part(trace_product(&m.apply(&from.gamma()), &to.gamma()))
}

/// All four channels between `pair` at time `t`, sharing one propagator build.
pub fn transition_quad(
    gen: &Generator,
    basis: ProbBasis,
    pair: &[DensityMatrix; 2],
    t: f64,
) -> Result<ProbabilityQuad> {
    let m = gen.propagator(t);
    let g0 = [pair[0].gamma(), pair[1].gamma()];
    let gt = [m.apply(&g0[0]), m.apply(&g0[1])];
    let mut p = [0.0; 4];
    for (k, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        p[k] = real_part(trace_product(&gt[i], &g0[j]))?;
    }
    Ok(ProbabilityQuad { basis, p })
}

/// The state pair probed in `basis` for the system `h`.
pub fn basis_pair(h: &PTHamiltonian, basis: ProbBasis) -> Result<[DensityMatrix; 2]> {
    match basis {
        ProbBasis::Mass => Ok([
            initial_density(StateLabel::MassPlus, h, false)?,
            initial_density(StateLabel::MassMinus, h, false)?,
        ]),
        ProbBasis::Flavor => Ok([
            initial_density(StateLabel::FlavorA, h, true)?,
            initial_density(StateLabel::FlavorB, h, true)?,
        ]),
        ProbBasis::Rotated(theta) => Ok([
            initial_density(StateLabel::RotatedAlpha(theta), h, false)?,
            initial_density(StateLabel::RotatedBeta(theta), h, false)?,
        ]),
    }
}

/// State pair for the Hermitian oscillation system H = diag(−ω, ω): the mass
/// states are the computational projectors, the flavor states the θ-rotated
/// pair.
pub fn neutrino_pair(theta: f64, basis: ProbBasis) -> Result<[DensityMatrix; 2]> {
    let angle = match basis {
        ProbBasis::Mass => 0.0,
        ProbBasis::Flavor => theta,
        ProbBasis::Rotated(a) => a,
    };
    // H is irrelevant for projector states; any valid system carries them.
    let h = PTHamiltonian::new(0.0, 0.0, 0.0, 0.0)?;
    basis_pair(&h, ProbBasis::Rotated(angle))
}

/// (cos Ωt, sin(Ωt)/Ω) for Ω = √w2, continued through w2 ≤ 0: hyperbolic
/// (cosh, sinh/|Ω|) in the overdamped regime and (1, t) at w2 = 0.
///
/// The continuation is exact — the underlying propagator entry is an entire
/// function of w2 — so one formula covers oscillatory, critically damped and
/// overdamped parameters.
fn cos_sinc(w2: f64, t: f64) -> (f64, f64) {
    let omega = C64::new(w2, 0.0).sqrt();
    if omega.norm() == 0.0 {
        return (1.0, t);
    }
    let z = omega * t;
    (z.cos().re, (z.sin() / omega).re)
}

/// Analytically solvable parameter families.
///
/// `A0`/`B0` names the vanishing dissipator coefficient: a single channel
/// aligned with σ₂ leaves A = 0, one aligned with σ₁ leaves B = 0. `rate` is
/// the channel strength (ξ or ζ respectively). Hamiltonian parameters follow
/// [`PTHamiltonian`]; `S0`/`R0` are the s = 0 and r = 0 degenerations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FormulaFamily {
    /// Hermitian H = diag(−ω, ω) with the σ₂ channel: damped oscillation of a
    /// two-state mixing system.
    NeutrinoA0 { omega: f64, rate: f64, theta: f64 },
    /// Hermitian H = diag(−ω, ω) with the σ₁ channel; differs from the σ₂
    /// case only in the sign of the rate in front of the sin term.
    NeutrinoB0 { omega: f64, rate: f64, theta: f64 },
    /// No dissipator: undamped oscillation set by β = 2√(s² − r² sin²φ).
    NoLindblad { r: f64, s: f64, diag_phase: f64 },
    /// s = 0 with the σ₂ channel: pure exponential approach to ½ in both
    /// bases, independent of r and φ.
    S0A0 { rate: f64 },
    /// s = 0 with the σ₁ channel: identical curves to [`FormulaFamily::S0A0`].
    S0B0 { rate: f64 },
    /// s = 0 probed with θ-rotated projectors: hyperbolic growth at rate
    /// Ω̂ = √(4r² sin²φ + rate²) under the e^{−rate·t} envelope.
    S0A0Rotated { r: f64, diag_phase: f64, rate: f64, theta: f64 },
    /// As [`FormulaFamily::S0A0Rotated`] for the σ₁ channel (sinh sign flips).
    S0B0Rotated { r: f64, diag_phase: f64, rate: f64, theta: f64 },
    /// Hermitian r = 0 limit with the σ₂ channel: mass channels frozen at
    /// 1/0, flavor channels damped at twice the rate of the σ₁ case.
    R0A0 { s: f64, rate: f64 },
    /// Hermitian r = 0 limit with the σ₁ channel: Σ = √(4s² − rate²).
    R0B0 { s: f64, rate: f64 },
    /// Full PT system with the σ₁ channel — the exactly solvable family,
    /// oscillating at Ξ = √(4(s² − r² sin²φ) − rate²) (continued through
    /// Ξ² ≤ 0).
    GeneralB0Exact { r: f64, s: f64, diag_phase: f64, rate: f64 },
    /// Full PT system with the σ₂ channel: second-order series in φ and the
    /// rate, with secular ξt terms limiting validity to small times.
    GeneralA0Series { r: f64, s: f64, diag_phase: f64, rate: f64 },
}

impl FormulaFamily {
    /// Checks the family's parameter domain.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, what: &str| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfDomain(format!("{what} must be finite")))
            }
        };
        let rate_ok = |rate: f64| -> Result<()> {
            finite(rate, "rate")?;
            if rate < 0.0 {
                return Err(Error::OutOfDomain(format!("negative rate {rate}")));
            }
            Ok(())
        };
        match *self {
            FormulaFamily::NeutrinoA0 { omega, rate, theta }
            | FormulaFamily::NeutrinoB0 { omega, rate, theta } => {
                finite(omega, "omega")?;
                finite(theta, "theta")?;
                rate_ok(rate)
            }
            FormulaFamily::NoLindblad { r, s, diag_phase } => {
                PTHamiltonian::new(r, s, diag_phase, 0.0).map(|_| ())
            }
            FormulaFamily::S0A0 { rate } | FormulaFamily::S0B0 { rate } => rate_ok(rate),
            FormulaFamily::S0A0Rotated { r, diag_phase, rate, theta }
            | FormulaFamily::S0B0Rotated { r, diag_phase, rate, theta } => {
                PTHamiltonian::new(r, 0.0, diag_phase, 0.0)?;
                finite(theta, "theta")?;
                rate_ok(rate)
            }
            FormulaFamily::R0A0 { s, rate } | FormulaFamily::R0B0 { s, rate } => {
                finite(s, "s")?;
                if s <= 0.0 {
                    return Err(Error::OutOfDomain(format!(
                        "r = 0 family needs s > 0, got {s}; use the s = 0 family instead"
                    )));
                }
                rate_ok(rate)
            }
            FormulaFamily::GeneralB0Exact { r, s, diag_phase, rate }
            | FormulaFamily::GeneralA0Series { r, s, diag_phase, rate } => {
                PTHamiltonian::new(r, s, diag_phase, 0.0)?;
                if s <= 0.0 {
                    return Err(Error::OutOfDomain(format!(
                        "general family needs s > 0, got {s}; use the s = 0 family instead"
                    )));
                }
                rate_ok(rate)
            }
        }
    }

    /// The bases this family's formulas cover.
    pub fn bases(&self) -> Vec<ProbBasis> {
        match *self {
            FormulaFamily::S0A0Rotated { theta, .. } | FormulaFamily::S0B0Rotated { theta, .. } => {
                vec![ProbBasis::Rotated(theta)]
            }
            _ => vec![ProbBasis::Mass, ProbBasis::Flavor],
        }
    }

    fn supported(&self, basis: ProbBasis) -> Result<()> {
        if self.bases().contains(&basis) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!(
                "basis {basis:?} is not covered by this formula family"
            )))
        }
    }

    /// The dissipator strength, if the family has one.
    pub fn rate(&self) -> Option<f64> {
        match *self {
            FormulaFamily::NoLindblad { .. } => None,
            FormulaFamily::NeutrinoA0 { rate, .. }
            | FormulaFamily::NeutrinoB0 { rate, .. }
            | FormulaFamily::S0A0 { rate }
            | FormulaFamily::S0B0 { rate }
            | FormulaFamily::S0A0Rotated { rate, .. }
            | FormulaFamily::S0B0Rotated { rate, .. }
            | FormulaFamily::R0A0 { rate, .. }
            | FormulaFamily::R0B0 { rate, .. }
            | FormulaFamily::GeneralB0Exact { rate, .. }
            | FormulaFamily::GeneralA0Series { rate, .. } => Some(rate),
        }
    }

    /// Bases whose four channels all relax to ½ as t → ∞.
    ///
    /// Excluded: the dissipator-free family, the frozen mass channels of the
    /// r = 0 σ₂ case, the hyperbolically growing rotated s = 0 probes, and
    /// the secular series (valid only at small t anyway).
    pub fn damped_bases(&self) -> Vec<ProbBasis> {
        if self.rate().unwrap_or(0.0) <= 0.0 {
            return Vec::new();
        }
        match *self {
            FormulaFamily::NoLindblad { .. }
            | FormulaFamily::S0A0Rotated { .. }
            | FormulaFamily::S0B0Rotated { .. }
            | FormulaFamily::GeneralA0Series { .. } => Vec::new(),
            FormulaFamily::R0A0 { .. } => vec![ProbBasis::Flavor],
            _ => self.bases(),
        }
    }

    /// True when every basis the family covers is fully damped.
    pub fn is_fully_damped(&self) -> bool {
        let damped = self.damped_bases();
        !damped.is_empty() && damped.len() == self.bases().len()
    }

    /// True when a nominally oscillatory family sits in its hyperbolic
    /// regime (squared frequency ≤ 0); the closed forms remain exact there
    /// by analytic continuation.
    pub fn overdamped(&self) -> bool {
        match *self {
            FormulaFamily::NeutrinoA0 { omega, rate, .. }
            | FormulaFamily::NeutrinoB0 { omega, rate, .. } => {
                4.0 * omega * omega - rate * rate <= 0.0
            }
            FormulaFamily::R0B0 { s, rate } => 4.0 * s * s - rate * rate <= 0.0,
            FormulaFamily::GeneralB0Exact { r, s, diag_phase, rate } => {
                let gap = s * s - r * r * diag_phase.sin().powi(2);
                4.0 * gap - rate * rate <= 0.0
            }
            _ => false,
        }
    }

    /// Closed-form quad at time `t` in `basis`.
    pub fn quad(&self, basis: ProbBasis, t: f64) -> Result<ProbabilityQuad> {
        self.validate()?;
        self.supported(basis)?;
        let p = match *self {
            FormulaFamily::NeutrinoA0 { omega, rate, theta } => {
                neutrino_quad(omega, rate, theta, 1.0, basis, t)
            }
            FormulaFamily::NeutrinoB0 { omega, rate, theta } => {
                neutrino_quad(omega, rate, theta, -1.0, basis, t)
            }
            FormulaFamily::NoLindblad { r, s, diag_phase } => match basis {
                ProbBasis::Mass => [1.0, 0.0, 0.0, 1.0],
                _ => {
                    let rsp = r * diag_phase.sin();
                    let alpha = if s == 0.0 { 0.0 } else { (rsp / s).asin() };
                    let beta = 2.0 * (s * s - rsp * rsp).max(0.0).sqrt();
                    let paa = (beta * t / 2.0).cos().powi(2);
                    let pab = (alpha - beta * t / 2.0).sin().powi(2);
                    let pba = (alpha + beta * t / 2.0).sin().powi(2);
                    [paa, pab, pba, paa]
                }
            },
            FormulaFamily::S0A0 { rate } | FormulaFamily::S0B0 { rate } => {
                // Both channels leave Γ₃ decaying at 2·rate and never mix it
                // into Γ₁, Γ₂; diagonal projector states see only Γ₀, Γ₃.
                symmetric_quad(0.5 * (1.0 + (-2.0 * rate * t).exp()))
            }
            FormulaFamily::S0A0Rotated { r, diag_phase, rate, theta } => {
                let w2 = -(4.0 * (r * diag_phase.sin()).powi(2) + rate * rate);
                rotated_envelope_quad(rate, theta, w2, rate, t)
            }
            FormulaFamily::S0B0Rotated { r, diag_phase, rate, theta } => {
                let w2 = -(4.0 * (r * diag_phase.sin()).powi(2) + rate * rate);
                rotated_envelope_quad(rate, theta, w2, -rate, t)
            }
            FormulaFamily::R0A0 { s, rate } => match basis {
                ProbBasis::Mass => [1.0, 0.0, 0.0, 1.0],
                _ => symmetric_quad(0.5 * (1.0 + (-2.0 * rate * t).exp() * (2.0 * s * t).cos())),
            },
            FormulaFamily::R0B0 { s, rate } => match basis {
                ProbBasis::Mass => symmetric_quad(0.5 * (1.0 + (-2.0 * rate * t).exp())),
                _ => {
                    let (c, sn) = cos_sinc(4.0 * s * s - rate * rate, t);
                    symmetric_quad(0.5 * (1.0 + (-rate * t).exp() * (c - rate * sn)))
                }
            },
            FormulaFamily::GeneralB0Exact { r, s, diag_phase, rate } => match basis {
                ProbBasis::Mass => symmetric_quad(0.5 * (1.0 + (-2.0 * rate * t).exp())),
                _ => {
                    let rsp = r * diag_phase.sin();
                    let sa2 = rsp * rsp / (s * s);
                    let k = rsp * (1.0 - sa2);
                    let w2 = 4.0 * (s * s - rsp * rsp) - rate * rate;
                    let (c, sn) = cos_sinc(w2, t);
                    let env = (-rate * t).exp();
                    let paa = 0.5 * (1.0 + env * (c - rate * (1.0 - 2.0 * sa2) * sn));
                    let pab = 0.5 * (1.0 - env * ((1.0 - 2.0 * sa2) * c - (rate - 4.0 * k) * sn));
                    let pba = 0.5 * (1.0 - env * ((1.0 - 2.0 * sa2) * c - (rate + 4.0 * k) * sn));
                    [paa, pab, pba, paa]
                }
            },
            FormulaFamily::GeneralA0Series { r, s, diag_phase, rate } => match basis {
                ProbBasis::Mass => {
                    let ppp = series_mass_stay(r, s, diag_phase, rate, t);
                    [ppp, 1.0 - ppp, 1.0 - ppp, ppp]
                }
                _ => {
                    let paa = series_flavor_stay(r, s, diag_phase, rate, t);
                    let pab = series_flavor_cross(r, s, diag_phase, rate, t, 1.0);
                    let pba = series_flavor_cross(r, s, diag_phase, rate, t, -1.0);
                    [paa, pab, pba, paa]
                }
            },
        };
        Ok(ProbabilityQuad { basis, p })
    }

    /// P_ab(t) − P_ba(t) for the exactly solvable family:
    /// −(4K/Ξ) e^{−ζt} sin Ξt with K = r sinφ (1 − r² sin²φ/s²).
    pub fn ab_ba_difference(&self, t: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            FormulaFamily::GeneralB0Exact { r, s, diag_phase, rate } => {
                let rsp = r * diag_phase.sin();
                let k = rsp * (1.0 - rsp * rsp / (s * s));
                let w2 = 4.0 * (s * s - rsp * rsp) - rate * rate;
                let (_, sn) = cos_sinc(w2, t);
                Ok(-4.0 * k * (-rate * t).exp() * sn)
            }
            _ => Err(Error::OutOfDomain(
                "channel asymmetry formula applies to the exactly solvable family".into(),
            )),
        }
    }

    /// Row sums Σ_y P_{a→y}, Σ_y P_{b→y} of the series family, in the compact
    /// resummed form; matches the termwise sums of the quad identically.
    pub fn series_row_sums(&self, t: f64) -> Result<(f64, f64)> {
        self.validate()?;
        match *self {
            FormulaFamily::GeneralA0Series { r, s, diag_phase, rate } => {
                let phi = diag_phase;
                let (c2, s2) = ((2.0 * s * t).cos(), (2.0 * s * t).sin());
                let secular = 1.0 + 2.0 * rate * t * (rate * t - 1.0);
                let lead = r * phi / (s * s);
                Ok((
                    1.0 + lead * (r * phi * c2 - s * s2) * secular,
                    1.0 + lead * (r * phi * c2 + s * s2) * secular,
                ))
            }
            _ => Err(Error::OutOfDomain(
                "row-sum formula applies to the series family".into(),
            )),
        }
    }

    /// max(ξt, (ξt)²): the size of the secular terms that limit the series
    /// family's validity. Zero for every closed (non-series) family.
    pub fn secular_indicator(&self, t: f64) -> f64 {
        match *self {
            FormulaFamily::GeneralA0Series { rate, .. } => {
                let x = (rate * t).abs();
                x.max(x * x)
            }
            _ => 0.0,
        }
    }

    /// The generator and state pair this family's formulas describe, for
    /// cross-checking against exact propagation.
    pub fn numeric_setup(&self, basis: ProbBasis) -> Result<(Generator, [DensityMatrix; 2])> {
        self.validate()?;
        self.supported(basis)?;
        match *self {
            FormulaFamily::NeutrinoA0 { omega, rate, theta } => Ok((
                Generator::neutrino(omega, &DissipatorCoefficients::case_a_zero(rate)?),
                neutrino_pair(theta, basis)?,
            )),
            FormulaFamily::NeutrinoB0 { omega, rate, theta } => Ok((
                Generator::neutrino(omega, &DissipatorCoefficients::case_b_zero(rate)?),
                neutrino_pair(theta, basis)?,
            )),
            FormulaFamily::NoLindblad { r, s, diag_phase } => {
                let h = PTHamiltonian::new(r, s, diag_phase, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::zero());
                Ok((gen, basis_pair(&h, basis)?))
            }
            // The s = 0 curves are independent of r and φ (Γ₃ decouples), so
            // the trivial Hamiltonian serves as the numeric companion.
            FormulaFamily::S0A0 { rate } => {
                let h = PTHamiltonian::new(0.0, 0.0, 0.0, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_a_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::S0B0 { rate } => {
                let h = PTHamiltonian::new(0.0, 0.0, 0.0, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_b_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::S0A0Rotated { r, diag_phase, rate, .. } => {
                let h = PTHamiltonian::new(r, 0.0, diag_phase, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_a_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::S0B0Rotated { r, diag_phase, rate, .. } => {
                let h = PTHamiltonian::new(r, 0.0, diag_phase, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_b_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::R0A0 { s, rate } => {
                let h = PTHamiltonian::new(0.0, s, 0.0, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_a_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::R0B0 { s, rate } => {
                let h = PTHamiltonian::new(0.0, s, 0.0, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_b_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::GeneralB0Exact { r, s, diag_phase, rate } => {
                let h = PTHamiltonian::new(r, s, diag_phase, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_b_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
            FormulaFamily::GeneralA0Series { r, s, diag_phase, rate } => {
                let h = PTHamiltonian::new(r, s, diag_phase, 0.0)?;
                let gen = Generator::new(&h, &DissipatorCoefficients::case_a_zero(rate)?);
                Ok((gen, basis_pair(&h, basis)?))
            }
        }
    }
}

// All symmetric families have P(1→1) = P(2→2) and P(1→2) = P(2→1) = 1 − P(1→1).
fn symmetric_quad(stay: f64) -> [f64; 4] {
    [stay, 1.0 - stay, 1.0 - stay, stay]
}

// ½(1 + e^{−2ρt} cos²2θ + e^{−ρt} sin²2θ (cos Ωt ± ρ sin(Ωt)/Ω)); covers both
// Hermitian oscillation cases (sign = ±rate) with Ω² = 4ω² − rate².
fn neutrino_quad(omega: f64, rate: f64, theta: f64, sign: f64, basis: ProbBasis, t: f64) -> [f64; 4] {
    match basis {
        ProbBasis::Mass => symmetric_quad(0.5 * (1.0 + (-2.0 * rate * t).exp())),
        _ => {
            let w2 = 4.0 * omega * omega - rate * rate;
            rotated_envelope_quad(rate, theta, w2, sign * rate, t)
        }
    }
}

// Shared ½(1 + e^{−2ρt}cos²2θ + e^{−ρt}sin²2θ(cos_like + k·sinc)) shape of the
// rotated-projector families; w2 < 0 turns the trigonometry hyperbolic.
fn rotated_envelope_quad(rate: f64, theta: f64, w2: f64, k: f64, t: f64) -> [f64; 4] {
    let (c, sn) = cos_sinc(w2, t);
    let (c2t, s2t) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let stay = 0.5
        * (1.0
            + (-2.0 * rate * t).exp() * c2t * c2t
            + (-rate * t).exp() * s2t * s2t * (c + k * sn));
    symmetric_quad(stay)
}

// Series in φ and ξ through second order; secular ξt factors appear from the
// first order on.
fn series_mass_stay(r: f64, s: f64, phi: f64, xi: f64, t: f64) -> f64 {
    let st = (s * t).sin();
    1.0 + r * r * t / (s * s) * phi * phi * xi
        - r * r * st * st / (s * s * s * s) * phi * phi * xi * xi
}

fn series_flavor_stay(r: f64, s: f64, phi: f64, xi: f64, t: f64) -> f64 {
    let (c2, s2) = ((2.0 * s * t).cos(), (2.0 * s * t).sin());
    let c = (s * t).cos();
    let p2 = phi * phi;
    c * c - t * c2 * xi + t * t * c2 * xi * xi
        + r * r * t * s2 / (2.0 * s) * p2
        - r * r * (s2 + 2.0 * s * t * (c2 + 2.0 * s * t * s2)) / (4.0 * s * s * s) * p2 * xi
        + r * r * t * t * (c2 + s * t * s2) / (s * s) * p2 * xi * xi
}

// sign = +1 for a→b, −1 for b→a; the odd-in-φ terms carry the asymmetry.
fn series_flavor_cross(r: f64, s: f64, phi: f64, xi: f64, t: f64, sign: f64) -> f64 {
    let (c2, s2) = ((2.0 * s * t).cos(), (2.0 * s * t).sin());
    let sn = (s * t).sin();
    let p2 = phi * phi;
    sn * sn - sign * r * s2 / s * phi + t * c2 * xi + sign * 2.0 * r * t * s2 / s * phi * xi
        + r * r * (2.0 * c2 - s * t * s2) / (2.0 * s * s) * p2
        - t * t * c2 * xi * xi
        - sign * 2.0 * r * t * t * s2 / s * phi * xi * xi
        + r * r * ((1.0 + 4.0 * s * s * t * t) * s2 - 6.0 * s * t * c2) / (4.0 * s * s * s) * p2 * xi
        + r * r * t * t * (c2 - s * t * s2) / (s * s) * p2 * xi * xi
}

/// One grid point of a closed-form vs numeric comparison.
#[derive(Clone, Copy, Debug)]
pub struct ComparisonRow {
    pub t: f64,
    pub numeric: ProbabilityQuad,
    pub closed_form: ProbabilityQuad,
}

impl ComparisonRow {
    /// |numeric − closed| per channel.
    pub fn diffs(&self) -> [f64; 4] {
        std::array::from_fn(|k| (self.numeric.p[k] - self.closed_form.p[k]).abs())
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.diffs().into_iter().fold(0.0, f64::max)
    }
}

/// Evaluates both paths of `family` in `basis` over `times`.
pub fn compare(
    family: &FormulaFamily,
    basis: ProbBasis,
    times: &[f64],
) -> Result<Vec<ComparisonRow>> {
    let (gen, pair) = family.numeric_setup(basis)?;
    crate::grid::map_times(times, |t| {
        Ok(ComparisonRow {
            t,
            numeric: transition_quad(&gen, basis, &pair, t)?,
            closed_form: family.quad(basis, t)?,
        })
    })
    .into_iter()
    .collect()
}

/// Exact-propagation curve over `times` for an arbitrary generator and pair.
pub fn numeric_curve(
    gen: &Generator,
    basis: ProbBasis,
    pair: &[DensityMatrix; 2],
    times: &[f64],
) -> Result<Vec<ProbabilityQuad>> {
    crate::grid::map_times(times, |t| transition_quad(gen, basis, pair, t))
        .into_iter()
        .collect()
}

/// Closed-form curve of `family` over `times`.
pub fn closed_curve(
    family: &FormulaFamily,
    basis: ProbBasis,
    times: &[f64],
) -> Result<Vec<ProbabilityQuad>> {
    family.validate()?;
    family.supported(basis)?;
    crate::grid::map_times(times, |t| family.quad(basis, t))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, PI};

    const R: f64 = 0.1;
    const S: f64 = 0.2;

    fn exact_family() -> FormulaFamily {
        FormulaFamily::GeneralB0Exact { r: R, s: S, diag_phase: FRAC_PI_3, rate: 0.1 }
    }

    fn series_family() -> FormulaFamily {
        FormulaFamily::GeneralA0Series { r: R, s: S, diag_phase: FRAC_PI_3, rate: 0.1 }
    }

    // 2√(s² − r² sin²φ) for the shared test system.
    const BETA: f64 = 0.36055512754639896;

    /// Every closed (non-series) family must reproduce its own exact
    /// propagation, including overdamped and critically damped parameters.
    #[test]
    fn closed_families_match_exact_propagation() {
        let families = [
            FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 },
            FormulaFamily::NeutrinoB0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 },
            // overdamped: 4ω² < rate²
            FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.5, theta: FRAC_PI_3 },
            FormulaFamily::NoLindblad { r: R, s: S, diag_phase: FRAC_PI_3 },
            FormulaFamily::S0A0 { rate: 0.1 },
            FormulaFamily::S0B0 { rate: 0.1 },
            FormulaFamily::S0A0Rotated { r: R, diag_phase: FRAC_PI_3, rate: 0.1, theta: FRAC_PI_3 },
            FormulaFamily::S0B0Rotated { r: R, diag_phase: FRAC_PI_3, rate: 0.1, theta: FRAC_PI_3 },
            FormulaFamily::R0A0 { s: S, rate: 0.1 },
            FormulaFamily::R0B0 { s: S, rate: 0.1 },
            FormulaFamily::R0B0 { s: S, rate: 0.5 },
            exact_family(),
            FormulaFamily::GeneralB0Exact { r: R, s: S, diag_phase: FRAC_PI_3, rate: 0.8 },
            // Ξ = 0 exactly (rate = β): the sin(Ξt)/Ξ → t limit
            FormulaFamily::GeneralB0Exact { r: R, s: S, diag_phase: FRAC_PI_3, rate: BETA },
        ];
        for family in families {
            for basis in family.bases() {
                let rows = compare(&family, basis, &[0.0, 0.7, 3.1, 12.5, 40.0]).unwrap();
                for row in rows {
                    assert!(
                        row.max_abs_diff() < 1e-11,
                        "{family:?} {basis:?} t={} diff={}",
                        row.t,
                        row.max_abs_diff()
                    );
                }
            }
        }
    }

    #[test]
    fn exact_family_mass_decay_value() {
        let q = exact_family().quad(ProbBasis::Mass, 5.0).unwrap();
        // ½(1 + e^{−1})
        assert_abs_diff_eq!(q.p[0], 0.6839397205857212, epsilon = 1e-15);
        assert_abs_diff_eq!(q.p[0] + q.p[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.p[3], q.p[0], epsilon = 0.0);
    }

    #[test]
    fn initial_values_carry_the_metric() {
        for family in [exact_family(), series_family()] {
            let q = family.quad(ProbBasis::Flavor, 0.0).unwrap();
            match family {
                FormulaFamily::GeneralB0Exact { .. } => {
                    assert_abs_diff_eq!(q.p[0], 1.0, epsilon = 1e-12);
                    // sin²α = r² sin²φ/s² = 3/16
                    assert_abs_diff_eq!(q.p[1], 0.1875, epsilon = 1e-12);
                    assert_abs_diff_eq!(q.p[2], 0.1875, epsilon = 1e-12);
                }
                _ => {
                    assert_abs_diff_eq!(q.p[0], 1.0, epsilon = 1e-12);
                    // the series sees the small-φ surrogate (rφ/s)² instead
                    let expect = (R * FRAC_PI_3 / S).powi(2);
                    assert_abs_diff_eq!(q.p[1], expect, epsilon = 1e-12);
                }
            }
            let m = family.quad(ProbBasis::Mass, 0.0).unwrap();
            assert_abs_diff_eq!(m.p[0], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m.p[1], 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn channel_asymmetry_peak_value() {
        let family = exact_family();
        let xi_freq = 0.3464101615137755;
        let t = PI / (2.0 * xi_freq);
        let d = family.ab_ba_difference(t).unwrap();
        assert_abs_diff_eq!(d, -0.5162886834784234, epsilon = 1e-14);
        // consistent with the quad itself
        let q = family.quad(ProbBasis::Flavor, t).unwrap();
        assert_abs_diff_eq!(q.p[1] - q.p[2], d, epsilon = 1e-14);
        assert!(series_family().ab_ba_difference(1.0).is_err());
    }

    #[test]
    fn overdamped_flag_tracks_the_frequency_sign() {
        assert!(!exact_family().overdamped());
        assert!(FormulaFamily::GeneralB0Exact { r: R, s: S, diag_phase: FRAC_PI_3, rate: 0.8 }
            .overdamped());
        assert!(FormulaFamily::GeneralB0Exact { r: R, s: S, diag_phase: FRAC_PI_3, rate: BETA }
            .overdamped());
        assert!(FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.5, theta: 0.3 }.overdamped());
        assert!(!FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.1, theta: 0.3 }.overdamped());
        assert!(!FormulaFamily::S0A0 { rate: 5.0 }.overdamped());
    }

    #[test]
    fn neutrino_channel_signs_mirror_each_other() {
        // A0 and B0 differ only in the ±rate·sin(Ωt)/Ω term.
        let a = FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 };
        let b = FormulaFamily::NeutrinoB0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 };
        let omega_big = 0.3872983346207417; // √(4·0.04 − 0.01)
        for t in [0.5, 2.0, 7.0, 19.0] {
            let qa = a.quad(ProbBasis::Flavor, t).unwrap();
            let qb = b.quad(ProbBasis::Flavor, t).unwrap();
            let asym = qa.p[0] - qb.p[0];
            let expect = (-0.1 * t).exp() * (2.0_f64 * FRAC_PI_3).sin().powi(2) * 0.1
                * (omega_big * t).sin() / omega_big;
            assert_abs_diff_eq!(asym, expect, epsilon = 1e-14);
            // mass channels agree exactly
            let ma = a.quad(ProbBasis::Mass, t).unwrap();
            let mb = b.quad(ProbBasis::Mass, t).unwrap();
            assert_abs_diff_eq!(ma.p[0], mb.p[0], epsilon = 0.0);
        }
    }

    #[test]
    fn neutrino_without_damping_is_the_textbook_oscillation() {
        let f = FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.0, theta: FRAC_PI_3 };
        for t in [0.0, 1.3, 6.0, 15.0] {
            let q = f.quad(ProbBasis::Flavor, t).unwrap();
            let expect = (2.0_f64 * FRAC_PI_3).sin().powi(2) * (0.2 * t).sin().powi(2);
            assert_abs_diff_eq!(q.p[1], expect, epsilon = 1e-12);
            let m = f.quad(ProbBasis::Mass, t).unwrap();
            assert_abs_diff_eq!(m.p[0], 1.0, epsilon = 0.0);
        }
    }

    #[test]
    fn free_oscillation_frequency_and_offsets() {
        let f = FormulaFamily::NoLindblad { r: R, s: S, diag_phase: FRAC_PI_3 };
        let alpha = 0.44783239692893245_f64;
        let q0 = f.quad(ProbBasis::Flavor, 0.0).unwrap();
        assert_abs_diff_eq!(q0.p[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q0.p[1], alpha.sin().powi(2), epsilon = 1e-15);
        // one full period of cos²(βt/2)
        let q = f.quad(ProbBasis::Flavor, 2.0 * PI / BETA).unwrap();
        assert_abs_diff_eq!(q.p[0], 1.0, epsilon = 1e-10);
        let m = f.quad(ProbBasis::Mass, 17.0).unwrap();
        assert_eq!(m.p, [1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn degenerate_sigma_channels_coincide() {
        let a = FormulaFamily::S0A0 { rate: 0.1 };
        let b = FormulaFamily::S0B0 { rate: 0.1 };
        for t in [0.0, 0.9, 4.0, 33.0] {
            for basis in [ProbBasis::Mass, ProbBasis::Flavor] {
                assert_eq!(a.quad(basis, t).unwrap().p, b.quad(basis, t).unwrap().p);
            }
        }
    }

    #[test]
    fn damped_families_relax_to_half() {
        let families = [
            FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 },
            FormulaFamily::NeutrinoB0 { omega: 0.2, rate: 0.1, theta: FRAC_PI_3 },
            FormulaFamily::S0A0 { rate: 0.1 },
            FormulaFamily::S0B0 { rate: 0.1 },
            FormulaFamily::R0A0 { s: S, rate: 0.1 },
            FormulaFamily::R0B0 { s: S, rate: 0.1 },
            exact_family(),
        ];
        for family in families {
            let rate = family.rate().unwrap();
            let t = 40.0 / rate;
            for basis in family.damped_bases() {
                let q = family.quad(basis, t).unwrap();
                for p in q.p {
                    assert!((p - 0.5).abs() < 1e-8, "{family:?} {basis:?} p={p}");
                }
            }
        }
        // the frozen mass channels of the r = 0 σ₂ case never relax
        let r0 = FormulaFamily::R0A0 { s: S, rate: 0.1 };
        assert_eq!(r0.damped_bases(), vec![ProbBasis::Flavor]);
        assert!(!r0.is_fully_damped());
        assert!(exact_family().is_fully_damped());
        assert!(!FormulaFamily::NoLindblad { r: R, s: S, diag_phase: 0.3 }.is_fully_damped());
        assert!(!series_family().is_fully_damped());
        assert!(FormulaFamily::S0A0 { rate: 0.0 }.damped_bases().is_empty());
    }

    #[test]
    fn series_mass_window_agreement_and_breakdown() {
        let family = series_family();
        let (gen, pair) = family.numeric_setup(ProbBasis::Mass).unwrap();
        let mut small_t = 0.0_f64;
        for k in 0..=25 {
            let t = 0.2 * k as f64;
            let n = transition_quad(&gen, ProbBasis::Mass, &pair, t).unwrap();
            let c = family.quad(ProbBasis::Mass, t).unwrap();
            small_t = small_t.max((n.p[0] - c.p[0]).abs());
        }
        assert!(small_t < 0.02, "small-t deviation {small_t}");
        let mut late = 0.0_f64;
        for k in 0..=40 {
            let t = 12.0 + 0.2 * k as f64;
            let n = transition_quad(&gen, ProbBasis::Mass, &pair, t).unwrap();
            let c = family.quad(ProbBasis::Mass, t).unwrap();
            late = late.max((n.p[0] - c.p[0]).abs());
        }
        assert!(late > 0.05, "secular breakdown too small: {late}");
    }

    #[test]
    fn series_row_sums_match_termwise_sums() {
        let family = series_family();
        let t = 3.7;
        let (row_a, row_b) = family.series_row_sums(t).unwrap();
        assert_abs_diff_eq!(row_a, 0.7349235407745889, epsilon = 1e-13);
        let q = family.quad(ProbBasis::Flavor, t).unwrap();
        assert_abs_diff_eq!(q.p[0] + q.p[1], row_a, epsilon = 1e-12);
        assert_abs_diff_eq!(q.p[3] + q.p[2], row_b, epsilon = 1e-12);
        assert!(exact_family().series_row_sums(1.0).is_err());
    }

    #[test]
    fn series_without_dissipation_freezes_the_mass_channels() {
        let f = FormulaFamily::GeneralA0Series { r: R, s: S, diag_phase: FRAC_PI_3, rate: 0.0 };
        for t in [0.0, 2.0, 11.0] {
            let q = f.quad(ProbBasis::Mass, t).unwrap();
            assert_eq!(q.p, [1.0, 0.0, 0.0, 1.0]);
        }
        assert_abs_diff_eq!(f.secular_indicator(9.0), 0.0, epsilon = 0.0);
        let xi = series_family();
        assert_abs_diff_eq!(xi.secular_indicator(5.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(xi.secular_indicator(20.0), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn rotated_probes_grow_hyperbolically() {
        let f = FormulaFamily::S0A0Rotated { r: R, diag_phase: FRAC_PI_3, rate: 0.1, theta: FRAC_PI_3 };
        assert_eq!(f.bases(), vec![ProbBasis::Rotated(FRAC_PI_3)]);
        assert!(f.damped_bases().is_empty());
        // Ω̂ = √(4r²sin²φ + ξ²) = 0.2 > ξ ⟹ the envelope loses to the growth
        let q = f.quad(ProbBasis::Rotated(FRAC_PI_3), 60.0).unwrap();
        assert!(q.p[0] > 1.0);
        // rows still sum to one: projector pairs partition the identity
        assert_abs_diff_eq!(q.p[0] + q.p[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn basis_gating() {
        assert!(exact_family().quad(ProbBasis::Rotated(0.3), 1.0).is_err());
        let f = FormulaFamily::S0A0Rotated { r: R, diag_phase: 0.2, rate: 0.1, theta: 0.5 };
        assert!(f.quad(ProbBasis::Mass, 1.0).is_err());
        assert!(f.quad(ProbBasis::Rotated(0.4), 1.0).is_err());
        assert!(f.quad(ProbBasis::Rotated(0.5), 1.0).is_ok());
    }

    #[test]
    fn domain_validation() {
        assert!(matches!(
            FormulaFamily::S0A0 { rate: -0.1 }.validate(),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            FormulaFamily::R0A0 { s: 0.0, rate: 0.1 }.validate(),
            Err(Error::OutOfDomain(_))
        ));
        // broken PT phase propagates out of the embedded constructor
        assert!(matches!(
            FormulaFamily::GeneralB0Exact { r: 1.0, s: 0.1, diag_phase: PI / 2.0, rate: 0.1 }
                .validate(),
            Err(Error::PhaseBoundary { .. })
        ));
        assert!(FormulaFamily::NeutrinoA0 { omega: 0.2, rate: 0.0, theta: 0.1 }
            .validate()
            .is_ok());
    }

    #[test]
    fn column_labels_follow_the_basis() {
        assert_eq!(ProbBasis::Mass.column_labels(), ["P_pp", "P_pm", "P_mp", "P_mm"]);
        assert_eq!(ProbBasis::Flavor.column_labels(), ["P_aa", "P_ab", "P_ba", "P_bb"]);
        assert_eq!(ProbBasis::Rotated(0.7).column_labels()[0], "P_aa");
    }

    #[test]
    fn comparison_rows_carry_the_grid() {
        let times = [0.0, 1.0, 2.5];
        let rows = compare(&exact_family(), ProbBasis::Flavor, &times).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, t) in rows.iter().zip(times) {
            assert_eq!(row.t, t);
            assert!(row.max_abs_diff() < 1e-12);
        }
    }

    #[test]
    fn curves_agree_with_pointwise_evaluation() {
        let family = exact_family();
        let times = [0.3, 1.1, 8.0];
        let closed = closed_curve(&family, ProbBasis::Mass, &times).unwrap();
        for (q, t) in closed.iter().zip(times) {
            assert_eq!(q.p, family.quad(ProbBasis::Mass, t).unwrap().p);
        }
        let (gen, pair) = family.numeric_setup(ProbBasis::Mass).unwrap();
        let numeric = numeric_curve(&gen, ProbBasis::Mass, &pair, &times).unwrap();
        for (q, t) in numeric.iter().zip(times) {
            assert_eq!(q.p, transition_quad(&gen, ProbBasis::Mass, &pair, t).unwrap().p);
        }
    }
}
