use std::f64::consts::{FRAC_1_SQRT_2, PI};

use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use superqubit::chsh::*;
use superqubit::chsh::Strategy;
use superqubit::grassmann::Complex;
use superqubit::superstate::{transition_probability, upsilon, Ket};
use superqubit::uosp::GroupElementParams;

/// SU(2) block `[[α, −β̄], [β, ᾱ]]`.
fn su2(a: Angles) -> [[Complex; 2]; 2] {
    let g = GroupElementParams::new(a.theta, a.phi, 0.0);
    let (al, be) = (g.alpha(), g.beta());
    [[al, -be.conj()], [be, al.conj()]]
}

/// Outcome probabilities of the Bell state rotated by `U_A ⊗ U_B`, computed
/// with plain complex arithmetic.
fn qubit_probs(a: Angles, b: Angles) -> [[f64; 2]; 2] {
    let (ua, ub) = (su2(a), su2(b));
    let bell = [[Complex::new(FRAC_1_SQRT_2, 0.0), Complex::new(0.0, 0.0)], [Complex::new(0.0, 0.0), Complex::new(FRAC_1_SQRT_2, 0.0)]];
    let mut out = [[0.0; 2]; 2];
    for m in 0..2 {
        for n in 0..2 {
            let mut amp = Complex::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    amp += ua[m][k] * ub[n][l] * bell[k][l];
                }
            }
            out[m][n] = amp.norm_sqr();
        }
    }
    out
}

fn qubit_win(s: &Strategy) -> f64 {
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let p = qubit_probs(s.alice[i], s.bob[j]);
            for (m, row) in p.iter().enumerate() {
                for (n, v) in row.iter().enumerate() {
                    if (m ^ n) == (i & j) {
                        total += v;
                    }
                }
            }
        }
    }
    total / 4.0
}

fn angles() -> impl proptest::strategy::Strategy<Value = Angles> {
    (-3.2f64..3.2, -3.2f64..3.2).prop_map(|(t, f)| Angles::new(t, f))
}

fn super_params() -> impl proptest::strategy::Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-0.5f64..0.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zero_displacement_matches_qubit_oracle(a0 in angles(), a1 in angles(), b0 in angles(), b1 in angles()) {
        let s = Strategy { alice: [a0, a1], bob: [b0, b1], ..Strategy::default() };
        let e = evaluate(&s).unwrap();
        prop_assert!((e.p_win - qubit_win(&s)).abs() < 1e-10);
        for i in 0..2 {
            for j in 0..2 {
                let q = qubit_probs(s.alice[i], s.bob[j]);
                for k in 0..9 {
                    let (m, n) = (k / 3, k % 3);
                    let want = if m < 2 && n < 2 { q[m][n] } else { 0.0 };
                    prop_assert!((e.tables[i][j][k] - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn tables_sum_to_one(x in super_params(), a0 in angles(), a1 in angles(), b0 in angles(), b1 in angles()) {
        let s = Strategy { pa: x[0], pb: x[1], r: [x[2], x[3]], s: [x[4], x[5]], alice: [a0, a1], bob: [b0, b1] };
        let e = evaluate(&s).unwrap();
        for t in e.tables.iter().flatten() {
            prop_assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        prop_assert!(e.violation >= 0.0);
    }

    #[test]
    fn exchanging_players_preserves_the_win(x in super_params(), a0 in angles(), a1 in angles(), b0 in angles(), b1 in angles()) {
        // The winning condition is symmetric under a ↔ b, i ↔ j.
        let s = Strategy { pa: x[0], pb: x[1], r: [x[2], x[3]], s: [x[4], x[5]], alice: [a0, a1], bob: [b0, b1] };
        let t = Strategy { pa: x[1], pb: x[0], r: [x[4], x[5]], s: [x[2], x[3]], alice: [b0, b1], bob: [a0, a1] };
        prop_assert!((win_prob(&s).unwrap() - win_prob(&t).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn upsilon_transitions_factorize(pa in -0.5f64..0.5, pb in -0.5f64..0.5, qa in -0.5f64..0.5, qb in -0.5f64..0.5) {
        let got = transition_probability(&upsilon(pa, pb), &upsilon(qa, qb)).unwrap();
        let want = (1.0 - (pa - qa).powi(2)) * (1.0 - (pb - qb).powi(2));
        prop_assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn win_is_a_probability_for_feasible_strategies(x in super_params(), a0 in angles(), a1 in angles(), b0 in angles(), b1 in angles()) {
        let s = Strategy { pa: x[0], pb: x[1], r: [x[2], x[3]], s: [x[4], x[5]], alice: [a0, a1], bob: [b0, b1] };
        let e = evaluate(&s).unwrap();
        if e.violation == 0.0 {
            prop_assert!((0.0..=1.0).contains(&e.p_win));
        }
    }
}

#[test]
fn identity_settings_reproduce_upsilon_outcomes() {
    let (pa, pb) = (0.3, -0.4);
    let s = Strategy { pa, pb, ..Strategy::default() };
    let e = evaluate(&s).unwrap();
    let (xa, xb) = (pa * pa, pb * pb);
    let mut want = [0.0; 9];
    want[0] = 0.5 * (1.0 - xa) * (1.0 - xb);
    want[4] = want[0];
    want[5] = (1.0 - xa) * xb;
    want[7] = xa * (1.0 - xb);
    want[8] = xa * xb;
    for t in e.tables.iter().flatten() {
        for (g, w) in t.iter().zip(want) {
            assert!((g - w).abs() < 1e-13, "{t:?}");
        }
    }
}

#[test]
fn known_values() {
    let t = win_prob(&Strategy::tsirelson()).unwrap();
    assert!((t - (PI / 8.0).cos().powi(2)).abs() < 1e-12);
    assert_eq!(classical_optimum().0, 0.75);
    assert!(is_winning(1, 1, Ket::One, Ket::Zero));
    assert!(!is_winning(1, 1, Ket::Bullet, Ket::Bullet));
    assert!(is_winning(0, 1, Ket::Bullet, Ket::Bullet));
}

#[test]
fn bounds_are_part_of_the_violation() {
    let s = Strategy { pa: 0.8, ..Strategy::tsirelson() };
    assert!(constraint_violation(&s).unwrap() >= 0.3 - 1e-15);
    let bad = Strategy { pb: f64::NAN, ..Strategy::default() };
    assert!(evaluate(&bad).is_err());
}

#[test]
fn invalid_configurations_are_rejected() {
    for cfg in [
        OptimizeConfig { restarts: 0, ..OptimizeConfig::default() },
        OptimizeConfig { penalty_weight: -1.0, ..OptimizeConfig::default() },
        OptimizeConfig { tolerance: 0.0, ..OptimizeConfig::default() },
    ] {
        assert!(matches!(optimize(&cfg), Err(superqubit::Error::InvalidParameter(_))));
    }
}

#[test]
fn optimizer_is_deterministic_and_feasible() {
    let cfg = OptimizeConfig { seed: 3, restarts: 4, max_iters: 200, ..OptimizeConfig::default() };
    let a = optimize(&cfg).unwrap();
    let b = optimize(&OptimizeConfig { parallel: true, ..cfg.clone() }).unwrap();
    assert_eq!(a, b);
    assert!(a.evaluation.violation <= cfg.tolerance);
    assert!(a.strategy.box_excess() == 0.0);
}

#[test]
fn reported_winning_parameters_under_a_guessed_layout() {
    // The published list names only four angles; read them as the θ of
    // Alice's and Bob's settings with all phases zero.
    let s = Strategy {
        pa: -0.5,
        pb: 0.0,
        r: [-0.3450, 0.3465],
        s: [0.0, 0.0],
        alice: [Angles::new(1.7768, 0.0), Angles::new(-1.7749, 0.0)],
        bob: [Angles::new(PI / 2.0, 0.0), Angles::new(-PI / 4.0, 0.0)],
    };
    let e = evaluate(&s).unwrap();
    println!("guessed layout: p_win = {:.6}, violation = {:.3e}", e.p_win, e.violation);
    assert!(e.p_win.is_finite());
}
