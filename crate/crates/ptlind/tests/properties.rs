//! Randomized invariants: spectral reality, metric identities, dissipator
//! assembly, propagator exactness and semigroup structure, root basis
//! independence, initial-state identities, and closed-form/numeric agreement.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use proptest::prelude::*;

use ptlind::bloch::{pauli_expand, pauli_reconstruct, sigma, trace_product};
use ptlind::evolution::cubic_roots;
use ptlind::probabilities::transition_quad;
use ptlind::states::{initial_density, mixing_matrix};
use ptlind::{
    C64, DensityKind, DissipatorCoefficients, FormulaFamily, GammaVector, Generator,
    GeneratorKind, LindbladOperator, PTHamiltonian, ProbBasis, StateLabel,
};

// Systems comfortably inside the unbroken region: r²sin²φ < 0.81 s², so the
// metric stays bounded and tolerances are parameter-independent.
fn unbroken_system() -> impl Strategy<Value = PTHamiltonian> {
    (0.05f64..1.0, -PI..PI, 0.0f64..2.0).prop_filter_map(
        "inside the unbroken region",
        |(s, phase, ru)| {
            let r = ru * s;
            if r * r * phase.sin().powi(2) < 0.81 * s * s {
                PTHamiltonian::new(r, s, phase, 0.0).ok()
            } else {
                None
            }
        },
    )
}

fn operator() -> impl Strategy<Value = LindbladOperator> {
    (0.0f64..0.8, 0.0f64..0.8, -PI..PI, -PI..PI)
        .prop_map(|(r, s, vphi, phi)| LindbladOperator::new(r, s, vphi, phi))
}

fn operator_set() -> impl Strategy<Value = Vec<LindbladOperator>> {
    proptest::collection::vec(operator(), 1..=3)
}

// Raw draws for metric-compatible channels: (strength, coupling phase,
// diagonal-phase magnitude kept away from 0 and π so the compatibility
// solve for r stays bounded).
fn raw_channels() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    proptest::collection::vec((0.05f64..0.8, -PI..PI, 0.3f64..(PI - 0.3)), 1..=3)
}

// Channels obeying r_j sin(varphi_j) = sin(alpha) s_j cos(phi_j), the
// condition for the dissipator to respect the system metric. Only these are
// non-expanding on the generalized density, so only they admit an absolute
// tolerance on long-time propagator identities.
fn compatible_operators(h: &PTHamiltonian, raw: &[(f64, f64, f64)]) -> Vec<LindbladOperator> {
    let sa = h.alpha().sin();
    raw.iter()
        .map(|&(s, phi, vmag)| {
            let target = sa * s * phi.cos();
            let r = target.abs() / vmag.sin();
            let vphi = if target < 0.0 { -vmag } else { vmag };
            LindbladOperator::new(r, s, vphi, phi)
        })
        .collect()
}

fn gamma_vector() -> impl Strategy<Value = GammaVector> {
    proptest::array::uniform8(-1.0f64..1.0).prop_map(|v| {
        GammaVector::new(
            C64::new(v[0], v[1]),
            C64::new(v[2], v[3]),
            C64::new(v[4], v[5]),
            C64::new(v[6], v[7]),
        )
    })
}

fn entrywise2(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn entrywise4(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// Test-local exponential oracle: scaling-and-squaring over a 30-term Taylor
// sum, sharing nothing with the library's root-based construction.
fn expm_series(m: &Matrix4<C64>) -> Matrix4<C64> {
    let squarings = m.norm().log2().ceil().max(0.0) as i32;
    let a = m * C64::new(0.5f64.powi(squarings), 0.0);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for n in 1..=30 {
        term = term * a * C64::new(1.0 / n as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

// Best multiset match between two root triples: minimum over the six
// pairings of the largest pairwise distance.
fn multiset_distance(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| {
            (0..3)
                .map(|i| (a[i] - b[p[i]]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn spectra_are_real_and_the_metric_hermitizes(h in unbroken_system()) {
        let spec = h.eigenvalues();
        prop_assert!(spec.plus.im.abs() < 1e-12 && spec.minus.im.abs() < 1e-12);

        let m = h.matrix();
        let (vp, vm) = h.eigenvectors().unwrap();
        prop_assert!((m * vp - vp * spec.plus).norm() < 1e-10);
        prop_assert!((m * vm - vm * spec.minus).norm() < 1e-10);

        let eta = h.metric().unwrap();
        prop_assert!(entrywise2(&(eta.matrix * m * eta.inverse - m.adjoint())) < 1e-12);
        prop_assert!((eta.matrix.determinant() - C64::ONE).norm() < 1e-12);

        let g = h.similarity_transform().unwrap();
        prop_assert!(entrywise2(&(g.matrix * g.matrix - eta.matrix)) < 1e-12);

        // eigenprojector completeness: |u₊⟩⟨u₊|η + |u₋⟩⟨u₋|η = 1
        let proj = vp * vp.adjoint() * eta.matrix + vm * vm.adjoint() * eta.matrix;
        prop_assert!(entrywise2(&(proj - Matrix2::identity())) < 1e-12);
    }

    #[test]
    fn eigenvalues_ignore_the_offdiagonal_phase(
        h in unbroken_system(),
        offdiag in -PI..PI,
    ) {
        let shifted =
            PTHamiltonian::new(h.r(), h.s(), h.diag_phase(), offdiag).unwrap();
        let a = h.eigenvalues();
        let b = shifted.eigenvalues();
        prop_assert!((a.plus - b.plus).norm() < 1e-12);
        prop_assert!((a.minus - b.minus).norm() < 1e-12);
    }

    #[test]
    fn damping_block_matches_the_operator_sum(
        ops in operator_set(),
        gamma in gamma_vector(),
    ) {
        let coeffs = DissipatorCoefficients::from_operators(&ops).unwrap();
        let rho = gamma.density(DensityKind::Ordinary).matrix;
        let half = C64::new(0.5, 0.0);
        let mut brute: Matrix2<C64> = Matrix2::zeros();
        for op in &ops {
            let l = op.matrix();
            let l2 = l * l;
            brute += l * rho * l - (l2 * rho + rho * l2) * half;
        }
        let direct = coeffs.action(&gamma).density(DensityKind::Ordinary).matrix;
        prop_assert!(entrywise2(&(brute - direct)) < 1e-12);
    }

    #[test]
    fn propagator_matches_the_series_oracle(
        h in unbroken_system(),
        ops in operator_set(),
        t in 0.0f64..3.0,
    ) {
        let coeffs = DissipatorCoefficients::from_operators(&ops).unwrap();
        let gen = Generator::new(&h, &coeffs);
        // rescale so the generator norm is at most 1; R is linear in both
        // its Hamiltonian and damping inputs
        let n = gen.norm().max(1.0);
        let inv = C64::new(1.0 / n, 0.0);
        let h_vec = Vector3::new(
            C64::new(h.s(), 0.0) * inv,
            C64::ZERO,
            C64::new(0.0, h.r() * h.diag_phase().sin()) * inv,
        );
        let scaled = DissipatorCoefficients {
            a: coeffs.a * inv,
            b: coeffs.b * inv,
            c: coeffs.c * inv,
            d: coeffs.d * inv,
            e: coeffs.e * inv,
            f: coeffs.f * inv,
        };
        let gen = Generator::from_bloch(h_vec, &scaled, GeneratorKind::General);
        let oracle = expm_series(&(gen.matrix() * C64::new(-2.0 * t, 0.0)));
        prop_assert!(entrywise4(&(gen.propagator(t).matrix - oracle)) < 1e-10);
    }

    #[test]
    fn propagators_compose_as_a_semigroup(
        h in unbroken_system(),
        raw in raw_channels(),
        t1 in 0.0f64..10.0,
        t2 in 0.0f64..10.0,
    ) {
        let ops = compatible_operators(&h, &raw);
        let eta = h.metric().unwrap();
        for op in &ops {
            prop_assert!(op.pseudo_hermiticity_residual(&eta) < 1e-12);
        }
        let coeffs = DissipatorCoefficients::from_operators(&ops).unwrap();
        let gen = Generator::new(&h, &coeffs);
        let composed = gen.propagator(t1).matrix * gen.propagator(t2).matrix;
        prop_assert!(entrywise4(&(composed - gen.propagator(t1 + t2).matrix)) < 1e-9);
    }

    #[test]
    fn generalized_trace_never_moves(
        h in unbroken_system(),
        ops in operator_set(),
        gamma in gamma_vector(),
        t in 0.0f64..25.0,
    ) {
        let coeffs = DissipatorCoefficients::from_operators(&ops).unwrap();
        let gen = Generator::new(&h, &coeffs);
        let moved = gen.propagator(t).apply(&gamma);
        prop_assert!(2.0 * (moved.g0() - gamma.g0()).norm() < 1e-12);
    }

    #[test]
    fn cubic_roots_survive_a_change_of_basis(
        h in unbroken_system(),
        ops in operator_set(),
    ) {
        let coeffs = DissipatorCoefficients::from_operators(&ops).unwrap();
        let gen = Generator::new(&h, &coeffs);
        let block = gen.block();

        // Bloch-space image of conjugation by the mass↔flavor matrix:
        // T_ij = ½ tr[σ_i U σ_j U⁻¹]; σ₀ is fixed, so the block transforms
        // by T alone.
        let u = mixing_matrix(&h).unwrap().matrix;
        let u_inv = u.try_inverse().unwrap();
        let mut t3: Matrix3<C64> = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t3[(i, j)] = (sigma(i + 1) * u * sigma(j + 1) * u_inv).trace() * C64::new(0.5, 0.0);
            }
        }
        let conjugated = t3 * block * t3.try_inverse().unwrap();
        let d = multiset_distance(&cubic_roots(&block), &cubic_roots(&conjugated));
        prop_assert!(d < 1e-10);
    }

    #[test]
    fn initial_states_carry_the_metric_offsets(h in unbroken_system()) {
        // completeness of the generalized mass pair
        let plus = initial_density(StateLabel::MassPlus, &h, false).unwrap();
        let minus = initial_density(StateLabel::MassMinus, &h, false).unwrap();
        prop_assert!(entrywise2(&(plus.matrix + minus.matrix - Matrix2::identity())) < 1e-14);

        // normalized flavor pair: unit trace, unit survival, sin²α overlap
        let a = initial_density(StateLabel::FlavorA, &h, true).unwrap();
        let b = initial_density(StateLabel::FlavorB, &h, true).unwrap();
        prop_assert!((a.trace() - C64::ONE).norm() < 1e-12);
        prop_assert!((b.trace() - C64::ONE).norm() < 1e-12);
        let (ga, gb) = (a.gamma(), b.gamma());
        let sin2 = h.alpha().sin().powi(2);
        prop_assert!((trace_product(&ga, &ga) - C64::ONE).norm() < 1e-12);
        prop_assert!((trace_product(&ga, &gb) - C64::new(sin2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn bases_coincide_without_coupling(r in 0.0f64..1.0, phase in -PI..PI) {
        let h = PTHamiltonian::new(r, 0.0, phase, 0.0).unwrap();
        let mass = initial_density(StateLabel::MassPlus, &h, false).unwrap();
        let flavor = initial_density(StateLabel::FlavorA, &h, false).unwrap();
        prop_assert!(entrywise2(&(mass.matrix - flavor.matrix)) < 1e-14);
        prop_assert!(mixing_matrix(&h).unwrap().trivial);
    }

    #[test]
    fn pauli_expansion_round_trips(v in proptest::array::uniform8(-1.0f64..1.0)) {
        let m = Matrix2::new(
            C64::new(v[0], v[1]),
            C64::new(v[2], v[3]),
            C64::new(v[4], v[5]),
            C64::new(v[6], v[7]),
        );
        let back = pauli_reconstruct(&pauli_expand(&m));
        prop_assert!(entrywise2(&(back - m)) < 1e-15);
    }

    #[test]
    fn exact_family_tracks_the_propagator_everywhere(
        h in unbroken_system(),
        rate in 0.0f64..0.3,
        t in 0.0f64..50.0,
    ) {
        let family = FormulaFamily::GeneralB0Exact {
            r: h.r(),
            s: h.s(),
            diag_phase: h.diag_phase(),
            rate,
        };
        let (gen, pair) = family.numeric_setup(ProbBasis::Flavor).unwrap();
        let numeric = transition_quad(&gen, ProbBasis::Flavor, &pair, t).unwrap();
        let closed = family.quad(ProbBasis::Flavor, t).unwrap();
        for k in 0..4 {
            prop_assert!((numeric.p[k] - closed.p[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn channel_asymmetry_is_the_damped_sine(
        h in unbroken_system(),
        rate in 0.0f64..0.3,
        t in 0.0f64..50.0,
    ) {
        let family = FormulaFamily::GeneralB0Exact {
            r: h.r(),
            s: h.s(),
            diag_phase: h.diag_phase(),
            rate,
        };
        let q = family.quad(ProbBasis::Flavor, t).unwrap();
        let diff = family.ab_ba_difference(t).unwrap();
        prop_assert!((q.p[1] - q.p[2] - diff).abs() < 1e-12);
        prop_assert!(family.ab_ba_difference(0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn aligned_channels_stay_symmetric(
        s in 0.05f64..1.0,
        rate in 0.0f64..0.3,
        t in 0.0f64..50.0,
    ) {
        // r sinφ = 0 ⟹ no a↔b asymmetry at any time
        let family = FormulaFamily::GeneralB0Exact { r: 0.0, s, diag_phase: 0.3, rate };
        prop_assert!(family.ab_ba_difference(t).unwrap().abs() < 1e-15);
    }
}
