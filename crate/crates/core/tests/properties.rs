use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steering_core::gaussian::{self, CovarianceMatrix, SymplecticForm};
use steering_core::lhs;
use steering_core::qcore::{self, ComplexMatrix, HaarSampler, Subsystem, C64};
use steering_core::states::{self, Family, FamilySpec, ProjectiveBasis};
use steering_core::stats;

fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_density(d: usize, seed: u64) -> ComplexMatrix {
    let g = random_matrix(d, d, seed);
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Werner), Just(Family::Isotropic)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kron_is_associative(d in 1usize..4, seed in any::<u64>()) {
        let a = random_matrix(d, d + 1, seed);
        let b = random_matrix(2, d, seed ^ 1);
        let c = random_matrix(d, 2, seed ^ 2);
        let lhs = qcore::kron(&qcore::kron(&a, &b), &c);
        let rhs = qcore::kron(&a, &qcore::kron(&b, &c));
        prop_assert!(qcore::max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn kron_is_bilinear(seed in any::<u64>(), s in -2.0f64..2.0) {
        let a = random_matrix(2, 2, seed);
        let a2 = random_matrix(2, 2, seed ^ 5);
        let b = random_matrix(3, 3, seed ^ 7);
        let k = C64::new(s, 0.5);
        let lhs = qcore::kron(&(&a + &a2 * k), &b);
        let rhs = qcore::kron(&a, &b) + qcore::kron(&a2, &b) * k;
        prop_assert!(qcore::max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let sigma = random_density(da, seed);
        let rho = random_density(db, seed ^ 3);
        let w = qcore::kron(&sigma, &rho);
        let bob = qcore::partial_trace(&w, da, db, Subsystem::Alice).unwrap();
        let alice = qcore::partial_trace(&w, da, db, Subsystem::Bob).unwrap();
        prop_assert!(qcore::max_abs_diff(&bob, &rho) < 1e-12);
        prop_assert!(qcore::max_abs_diff(&alice, &sigma) < 1e-12);
    }

    #[test]
    fn min_eigenvalue_is_unitarily_invariant(d in 1usize..6, seed in any::<u64>()) {
        let mut s = HaarSampler::new(d, seed);
        let u = s.haar_unitary();
        let diag: Vec<f64> = (0..d).map(|_| s.rng().random_range(-3.0..3.0)).collect();
        let dm = ComplexMatrix::from_fn(d, d, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) });
        let m = &u * dm * u.adjoint();
        let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let want = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((qcore::min_eigenvalue_hermitian(&m).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn conditioned_ensembles_sum_to_bob_marginal(f in family(), d in 2usize..5, eta in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = FamilySpec::new(f, d, eta).unwrap().state();
        let basis = ProjectiveBasis::haar_random(&mut HaarSampler::new(d, seed));
        let ens = states::conditioned_ensemble(&w, &basis).unwrap();
        prop_assert!(qcore::max_abs_diff(&ens.total(), &w.bob_marginal()) < 1e-12);
        let p: f64 = ens.probabilities().iter().sum();
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn summed_overlap_is_basis_independent(f in family(), d in 2usize..5, eta in 0.0f64..=1.0, seed in any::<u64>()) {
        let spec = FamilySpec::new(f, d, eta).unwrap();
        let basis = ProjectiveBasis::haar_random(&mut HaarSampler::new(d, seed));
        let ens = states::conditioned_ensemble(&spec.state(), &basis).unwrap();
        let s = ens.summed_overlap(&f.bob_frame(&basis));
        let df = d as f64;
        let per_outcome = match f {
            Family::Werner => (1.0 - eta) / (df * df),
            Family::Isotropic => eta / df + (1.0 - eta) / (df * df),
        };
        prop_assert!((s - df * per_outcome).abs() < 1e-12);
        prop_assert!((states::overlap_statistic(&spec) - per_outcome).abs() < 1e-12);
    }

    #[test]
    fn joint_probabilities_are_consistent(f in family(), d in 2usize..4, eta in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = FamilySpec::new(f, d, eta).unwrap().state();
        let mut s = HaarSampler::new(d, seed);
        let ba = ProjectiveBasis::haar_random(&mut s);
        let bb = ProjectiveBasis::haar_random(&mut s);
        let ens = states::conditioned_ensemble(&w, &ba).unwrap();
        let mut total = 0.0;
        for a in 0..d {
            let mut marginal = 0.0;
            for b in 0..d {
                let p = states::joint_probability(&w, &ba, a, &bb, b).unwrap();
                prop_assert!(p >= -1e-12);
                // Same number through Bob's conditioned state.
                let q = qcore::expectation(ens.member(a), &bb.vector(b));
                prop_assert!((p - q).abs() < 1e-12);
                marginal += p;
            }
            prop_assert!((marginal - ens.probabilities()[a]).abs() < 1e-12);
            total += marginal;
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ppt_sign_matches_entanglement_threshold(f in family(), d in 2usize..5, eta in 0.0f64..1.0) {
        let ent = lhs::eta_ent(d);
        prop_assume!((eta - ent).abs() > 1e-6);
        let m = states::ppt_min_eigenvalue(&FamilySpec::new(f, d, eta).unwrap().state());
        prop_assert_eq!(m < -1e-12, eta > ent, "eta {} min eig {}", eta, m);
    }

    #[test]
    fn symplectic_samples_preserve_the_form(modes in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = gaussian::random_symplectic(modes, 0.5, &mut rng);
        let j = SymplecticForm::new(modes);
        let back = &s * j.matrix() * s.transpose();
        prop_assert!((back - j.matrix()).abs().max() < 1e-9);
    }

    #[test]
    fn steerable_implies_npt(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = gaussian::random_valid_cm(1, 1, 3.0, &mut rng);
        if gaussian::steerable_by_alice(&v).unwrap() || gaussian::steerable_by_bob(&v).unwrap() {
            prop_assert!(!gaussian::is_valid_state(&v.partial_transpose()));
        }
    }

    #[test]
    fn alice_local_symplectics_keep_the_verdict(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = gaussian::random_valid_cm(1, 1, 3.0, &mut rng);
        let margin = gaussian::alice_steering_margin(&v);
        prop_assume!(!margin.is_boundary() && margin.min_eigenvalue.abs() > 1e-6);
        let s = gaussian::random_symplectic(1, 0.5, &mut rng);
        let mut l = DMatrix::<f64>::identity(4, 4);
        l.view_mut((0, 0), (2, 2)).copy_from(&s);
        let m = &l * v.matrix() * l.transpose();
        let m = (&m + m.transpose()) * 0.5;
        let w = CovarianceMatrix::new(1, 1, m).unwrap();
        prop_assert_eq!(gaussian::steerable_by_alice(&v).unwrap(), gaussian::steerable_by_alice(&w).unwrap());
    }

    #[test]
    fn conditioned_bob_state_is_physical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = gaussian::random_valid_cm(1, 1, 3.0, &mut rng);
        let t = gaussian::random_measurement(1, &mut rng);
        let cond = gaussian::conditioned_cm(&v, &t).unwrap();
        prop_assert!(gaussian::bob_uncertainty_margin(&cond).unwrap().is_psd());
    }
}

#[test]
fn threshold_hierarchy_holds_for_large_d() {
    for d in 2..=500 {
        let ent = lhs::eta_ent(d);
        assert!(ent < lhs::eta_steer(Family::Werner, d));
        assert!(ent < lhs::eta_steer(Family::Isotropic, d));
        assert!(lhs::eta_steer(Family::Werner, d + 1) > lhs::eta_steer(Family::Werner, d));
        assert!(lhs::eta_steer(Family::Isotropic, d + 1) < lhs::eta_steer(Family::Isotropic, d));
    }
}

#[test]
fn two_qubit_families_share_a_spectrum() {
    for eta in [0.0, 0.2, 0.5, 0.9, 1.0] {
        let mut w = states::werner_state(2, eta).unwrap().eigenvalues();
        let mut i = states::isotropic_state(2, eta).unwrap().eigenvalues();
        w.sort_by(f64::total_cmp);
        i.sort_by(f64::total_cmp);
        for (a, b) in w.iter().zip(&i) {
            assert!((a - b).abs() < 1e-12, "{w:?} vs {i:?}");
        }
    }
}

#[test]
fn haar_overlaps_are_invariant_under_a_fixed_unitary() {
    let d = 3;
    let n = 100_000;
    let mut s = HaarSampler::new(d, 99);
    let u = s.haar_unitary();
    let probe = s.haar_vector();
    let mut plain = Vec::with_capacity(n);
    let mut rotated = Vec::with_capacity(n);
    for _ in 0..n {
        plain.push(probe.dotc(&s.haar_vector()).norm_sqr());
        rotated.push(probe.dotc(&(&u * s.haar_vector())).norm_sqr());
    }
    let ks = stats::ks_statistic(&plain, &rotated);
    assert!(ks < stats::ks_critical_1pct(n, n), "KS {ks}");
    // |⟨φ|ψ⟩|² is Beta(1, d−1): mean 1/d.
    let mean = plain.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.0 / d as f64).abs() < 0.005);
}
