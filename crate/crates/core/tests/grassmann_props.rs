use proptest::prelude::*;
use superqubit::grassmann::{Complex, Generator, Parity, Supernumber};

const N: u8 = 4;

fn coeff() -> impl Strategy<Value = Complex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn supernumber() -> impl Strategy<Value = Supernumber> {
    prop::collection::vec((0u32..16, coeff()), 0..8)
        .prop_map(|terms| Supernumber::from_terms(N, terms))
}

fn homogeneous() -> impl Strategy<Value = (Supernumber, Parity)> {
    (supernumber(), any::<bool>()).prop_map(|(a, odd)| {
        let p = Parity::from_odd(odd);
        (a.part(p), p)
    })
}

fn even() -> impl Strategy<Value = Supernumber> {
    supernumber().prop_map(|a| a.part(Parity::Even))
}

/// Even element supported on the given pair only: `a + b·η_kη_k^#`.
fn pair_even(pair: u8) -> impl Strategy<Value = Supernumber> {
    (coeff(), coeff()).prop_map(move |(a, b)| {
        &Supernumber::from_complex(N, a) + &Supernumber::pair_product(N, pair).scale(b)
    })
}

const TOL: f64 = 1e-12;

proptest! {
    #[test]
    fn supercommutativity((a, pa) in homogeneous(), (b, pb) in homogeneous()) {
        let ab = &a * &b;
        let ba = (&b * &a).scale_real(pa.koszul(pb));
        prop_assert!(ab.approx_eq(&ba, TOL));
    }

    #[test]
    fn hash_is_a_grade_involution(a in supernumber()) {
        let (e, o) = a.grade_parts();
        prop_assert!(a.hash().hash().approx_eq(&(&e - &o), TOL));
    }

    #[test]
    fn star_is_an_involution(a in supernumber()) {
        prop_assert!(a.star().star().approx_eq(&a, TOL));
    }

    #[test]
    fn hash_is_multiplicative(a in supernumber(), b in supernumber()) {
        prop_assert!((&a * &b).hash().approx_eq(&(&a.hash() * &b.hash()), TOL));
    }

    #[test]
    fn star_reverses_products(a in supernumber(), b in supernumber()) {
        prop_assert!((&a * &b).star().approx_eq(&(&b.star() * &a.star()), TOL));
    }

    #[test]
    fn reality_of_norm_squares((a, _) in homogeneous()) {
        let h = &a * &a.hash();
        prop_assert!(h.hash().approx_eq(&h, TOL));
        let s = &a * &a.star();
        prop_assert!(s.star().approx_eq(&s, TOL));
    }

    #[test]
    fn berezin_is_linear_and_nilpotent(a in supernumber(), b in supernumber(), slot in 0u8..N, k in coeff()) {
        let g = Generator::from_slot(slot);
        let lhs = (&a + &b.scale(k)).berezin(g);
        let rhs = &a.berezin(g) + &b.berezin(g).scale(k);
        prop_assert!(lhs.approx_eq(&rhs, TOL));
        prop_assert!(a.berezin(g).berezin(g).is_zero());
    }

    #[test]
    fn modified_rogers_factorizes(a in pair_even(1), b in pair_even(2)) {
        let lhs = (&a * &b).modified_rogers_complex().unwrap();
        let rhs = a.modified_rogers_complex().unwrap() * b.modified_rogers_complex().unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn modified_rogers_matches_pair_sum(a in even()) {
        // Only masks that are unions of whole pairs survive, with sign (−1)^{#pairs}.
        let mut expect = Complex::new(0.0, 0.0);
        for &(mask, c) in a.terms() {
            let whole_pairs = (0..N / 2).all(|k| {
                let pair = (mask >> (2 * k)) & 0b11;
                pair == 0 || pair == 0b11
            });
            if whole_pairs {
                let pairs = mask.count_ones() / 2;
                expect += if pairs % 2 == 1 { -c } else { c };
            }
        }
        let got = a.modified_rogers_complex().unwrap();
        prop_assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn inverses_are_exact(a in even(), body in 0.5f64..3.0) {
        let a = &a.soul() + &Supernumber::from_real(N, body);
        let one = Supernumber::one(N);
        prop_assert!((&a.invert().unwrap() * &a).approx_eq(&one, 1e-12));
        let r = a.inv_sqrt().unwrap();
        prop_assert!((&(&r * &r) * &a).approx_eq(&one, 1e-12));
    }

    #[test]
    fn odd_input_is_rejected_by_rogers(a in supernumber()) {
        let odd = a.part(Parity::Odd);
        prop_assume!(!odd.is_zero());
        prop_assert!(odd.modified_rogers().is_err());
    }
}

#[test]
fn generator_names() {
    assert_eq!(Generator::eta(2).to_string(), "η2");
    assert_eq!(Generator::eta_hash(1).to_string(), "η1#");
    assert_eq!(Generator::eta(1).index(), 1);
    assert_eq!(Generator::eta_hash(2).index(), 4);
}
