use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superqubit::grassmann::{Complex, Parity, Supernumber};
use superqubit::sample;
use superqubit::superstate::*;
use superqubit::supermatrix::Supermatrix;
use superqubit::uosp::{group_element, GroupElementParams};

const TOL: f64 = 1e-12;

fn random_state(seed: u64, parties: usize, order: u8) -> SuperState {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let col = sample::column(&mut r, order, &grading(parties), Parity::Even);
    SuperState::from_column(parties, &col).unwrap()
}

fn metric_matrix(parties: usize, order: u8) -> Supermatrix {
    let dim = 3usize.pow(parties as u32);
    let mut entries = vec![Supernumber::zero(order); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = Supernumber::from_real(order, metric(parties, i));
    }
    Supermatrix::new(order, grading(parties), grading(parties), entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_hermitian(seed in any::<u64>(), parties in 1usize..3) {
        let u = random_state(seed, parties, 4);
        let v = random_state(seed ^ 0xABCD, parties, 4);
        let uv = inner_product(&u, &v).unwrap();
        let vu = inner_product(&v, &u).unwrap();
        prop_assert!(uv.hash().approx_eq(&vu, TOL));
    }

    #[test]
    fn inner_product_is_antilinear_on_the_left(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let u = random_state(seed, 1, 4);
        let v = random_state(seed.wrapping_add(1), 1, 4);
        let a = Complex::new(re, im);
        let lhs = inner_product(&u.scale(a), &v).unwrap();
        let rhs = inner_product(&u, &v).unwrap().scale(a.conj());
        prop_assert!(lhs.approx_eq(&rhs, TOL));
        let lin = inner_product(&u, &v.scale(a)).unwrap();
        prop_assert!(lin.approx_eq(&inner_product(&u, &v).unwrap().scale(a), TOL));
    }

    #[test]
    fn bodies_reduce_to_the_complex_inner_product(seed in any::<u64>(), parties in 1usize..3) {
        let u = random_state(seed, parties, 4);
        let v = random_state(seed ^ 0x5555, parties, 4);
        // Only |••⟩ among the even kets carries a negative metric sign.
        let expect: Complex = u
            .bodies()
            .iter()
            .zip(v.bodies())
            .enumerate()
            .map(|(i, (a, b))| a.conj() * b * metric(parties, i))
            .sum();
        prop_assert!((inner_product(&u, &v).unwrap().body() - expect).norm() < TOL);
    }

    #[test]
    fn group_elements_are_isometries(seed in any::<u64>(), theta in -3.2f64..3.2, phi in -3.2f64..3.2, p in -0.5f64..0.5) {
        let u = random_state(seed, 1, 4);
        let v = random_state(seed ^ 0x77, 1, 4);
        let z = group_element(4, 2, GroupElementParams::new(theta, phi, p));
        let before = inner_product(&u, &v).unwrap();
        let after = inner_product(&u.apply(&z).unwrap(), &v.apply(&z).unwrap()).unwrap();
        prop_assert!(before.approx_eq(&after, 1e-11));
    }

    #[test]
    fn local_rotations_preserve_the_metric(ta in -3.2f64..3.2, pa in -0.5f64..0.5, tb in -3.2f64..3.2, pb in -0.5f64..0.5) {
        // K^‡ G K = G for K = Z_A ⊗ Z_B.
        let za = group_element(4, 1, GroupElementParams::new(ta, 0.3, pa));
        let zb = group_element(4, 2, GroupElementParams::new(tb, -0.8, pb));
        let k = za.graded_kron(&zb).unwrap();
        let g = metric_matrix(2, 4);
        prop_assert!((&(&k.grade_adjoint() * &g) * &k).approx_eq(&g, 1e-11));
    }

    #[test]
    fn swapping_parties_is_an_isometry(seed in any::<u64>()) {
        let u = random_state(seed, 2, 4);
        let v = random_state(seed ^ 0x99, 2, 4);
        let su = u.swap_parties().unwrap();
        let sv = v.swap_parties().unwrap();
        prop_assert!(inner_product(&su, &sv).unwrap().approx_eq(&inner_product(&u, &v).unwrap(), TOL));
        prop_assert_eq!(su.swap_parties().unwrap(), u);
    }

    #[test]
    fn outcome_probabilities_sum_to_the_norm(seed in any::<u64>(), parties in 1usize..3) {
        let v = random_state(seed, parties, 4);
        let total = measure_grassmann(&v).iter().fold(Supernumber::zero(4), |acc, p| &acc + p);
        prop_assert!(total.approx_eq(&inner_product(&v, &v).unwrap(), TOL));
    }

    #[test]
    fn transition_probability_factorizes_over_parties(
        a in (-0.5f64..0.5, -3.2f64..3.2, -3.2f64..3.2),
        b in (-0.5f64..0.5, -3.2f64..3.2, -3.2f64..3.2),
        c in (-0.5f64..0.5, -3.2f64..3.2, -3.2f64..3.2),
        d in (-0.5f64..0.5, -3.2f64..3.2, -3.2f64..3.2),
    ) {
        let a1 = superqubit_on(4, 1, a.0, a.1, a.2);
        let c1 = superqubit_on(4, 1, c.0, c.1, c.2);
        let b2 = superqubit_on(4, 2, b.0, b.1, b.2);
        let d2 = superqubit_on(4, 2, d.0, d.1, d.2);
        let joint = transition_probability(&tensor(&a1, &b2).unwrap(), &tensor(&c1, &d2).unwrap()).unwrap();
        let split = transition_probability(&a1, &c1).unwrap() * transition_probability(&b2, &d2).unwrap();
        prop_assert!((joint - split).abs() < 1e-12);
    }

    #[test]
    fn density_supertrace_matches_bra_ket(seed in any::<u64>()) {
        let v = random_state(seed, 1, 4);
        let rho = v.density_matrix();
        let bk = (&v.bra() * &v.to_column()).get(0, 0).clone();
        prop_assert!(rho.supertrace().unwrap().approx_eq(&bk, TOL));
    }

    #[test]
    fn compactification_lands_in_the_physical_range(p in -1e4f64..1e4) {
        let c = compactify(p).unwrap();
        prop_assert!((-0.5..0.5).contains(&c));
        prop_assert!(is_physical(c));
        let shifted = compactify(p + std::f64::consts::TAU).unwrap();
        prop_assert!((shifted - c).abs() < 1e-9 || (shifted - c).abs() > 1.0 - 1e-9);
    }
}

#[test]
fn basis_bullet_states_have_negative_norm() {
    let bb = SuperState::basis_ket(2, 4, &[Ket::Bullet, Ket::Bullet]).unwrap();
    assert_eq!(inner_product(&bb, &bb).unwrap(), Supernumber::from_real(4, -1.0));
    // A single odd ket needs an odd coefficient.
    assert!(SuperState::basis_ket(1, 2, &[Ket::Bullet]).is_err());
}

#[test]
fn single_superqubit_outcomes() {
    let probs = measure_real(&superqubit(0.3, 0.0, 0.0)).unwrap();
    let expect = [0.91, 0.0, 0.09];
    for (p, e) in probs.iter().zip(expect) {
        assert!((p - e).abs() < 1e-14, "{probs:?}");
    }
}

#[test]
fn upsilon_matches_a_tensor_of_rotated_qubits_at_zero_displacement() {
    // With pA = pB = 0 it is the Bell state, so transitions to |00⟩ are 1/2.
    let bell = upsilon(0.0, 0.0);
    let zz = SuperState::basis_ket(2, 4, &[Ket::Zero, Ket::Zero]).unwrap();
    assert!((transition_probability(&zz, &bell).unwrap() - 0.5).abs() < 1e-15);
    let v = upsilon(0.3, 0.4);
    let total: f64 = measure_real(&v).unwrap().iter().sum();
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn overlapping_supports_are_rejected() {
    let a = superqubit_on(4, 1, 0.2, 0.1, 0.0);
    assert!(matches!(tensor(&a, &a), Err(superqubit::Error::OverlappingGenerators(_))));
    assert!(compactify(f64::NAN).is_err());
    assert_eq!(physical_pair(0.7, 0.2), PhysicalPair { s1: true, s2: false });
}
