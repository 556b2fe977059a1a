//! Self-checks of the algebraic identities the library relies on.
//!
//! Each check reports its largest residual over randomized or fixed cases.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chsh::{self, Strategy};
use crate::grassmann::{Complex, Generator, Parity, Supernumber};
use crate::sample;
use crate::superstate::{
    self, inner_product, measure_grassmann, superqubit, upsilon, Ket,
    SuperState,
};
use crate::supermatrix::{standard_grading, Supermatrix};
use crate::uosp::{self, GroupElementParams};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random cases per check.
    pub samples: usize,
    /// Flips one sign in the grade-adjoint check so that it must fail.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            samples: 200,
            inject_fault: false,
        }
    }
}

const PARITIES: [Parity; 2] = [Parity::Even, Parity::Odd];

/// The bilinear form `⟨a, b⟩ = (a^‡ b)` on column supervectors.
pub fn form(a: &Supermatrix, b: &Supermatrix) -> Supernumber {
    (&a.grade_adjoint() * b).get(0, 0).clone()
}

/// `max |⟨Sz, s⟩ − (−1)^{|S||z|}⟨z, S^‡s⟩|` over random homogeneous inputs.
pub fn grade_adjoint_residual(rng: &mut ChaCha8Rng, order: u8, samples: usize, fault: bool) -> f64 {
    let g = standard_grading(2, 1);
    let mut worst: f64 = 0.0;
    for ps in PARITIES {
        for pz in PARITIES {
            for _ in 0..samples {
                let s_mat = sample::matrix(rng, order, &g, &g, ps);
                let z = sample::column(rng, order, &g, pz);
                let ps2 = PARITIES[rng.gen_range(0..2)];
                let s = sample::column(rng, order, &g, ps2);
                let lhs = form(&(&s_mat * &z), &s);
                let mut sign = ps.koszul(pz);
                if fault {
                    sign = -sign;
                }
                let rhs = form(&z, &(&s_mat.grade_adjoint() * &s)).scale_real(sign);
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    worst
}

/// Residual of `ST⁴ = id` and `(XY)^ST = (−1)^{|X||Y|} Y^ST X^ST`.
pub fn supertranspose_residual(rng: &mut ChaCha8Rng, order: u8, samples: usize) -> f64 {
    let g = standard_grading(2, 1);
    let h = standard_grading(1, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let px = PARITIES[rng.gen_range(0..2)];
        let py = PARITIES[rng.gen_range(0..2)];
        let x = sample::matrix(rng, order, &g, &h, px);
        let y = sample::matrix(rng, order, &h, &g, py);
        let four = x.supertranspose().supertranspose().supertranspose().supertranspose();
        worst = worst.max(four.max_abs_diff(&x));
        let lhs = (&x * &y).supertranspose();
        let rhs = (&y.supertranspose() * &x.supertranspose()).scale(Complex::new(px.koszul(py), 0.0));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    worst
}

/// `exp(2pηQ₁ + 2pη^#Q₂)` against the closed form.
pub fn s_matrix_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    (0..samples)
        .map(|_| {
            let p = rng.gen_range(-3.0..3.0);
            let zeta = Supernumber::eta(2, 1).scale_real(p);
            let e = uosp::odd_exponent(&zeta).unwrap().exp_nilpotent().unwrap();
            e.max_abs_diff(&uosp::s_matrix(2, 1, p))
        })
        .fold(0.0, f64::max)
}

/// `S(p)S(q) = S(p+q)` and `Z^‡Z = ZZ^‡ = 1`.
pub fn group_law_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (p, q) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let prod = &uosp::s_matrix(2, 1, p) * &uosp::s_matrix(2, 1, q);
        worst = worst.max(prod.max_abs_diff(&uosp::s_matrix(2, 1, p + q)));
        let params = GroupElementParams::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), p);
        worst = worst.max(uosp::superunitarity_residual(&uosp::group_element(2, 1, params)));
    }
    worst
}

/// `⟨ψ|ψ⟩ = 1` and `sTr |ψ⟩⟨ψ| = 1`.
pub fn normalization_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let one = Supernumber::one(2);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let s = superqubit(rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        worst = worst.max(inner_product(&s, &s).unwrap().max_abs_diff(&one));
        worst = worst.max(s.density_matrix().supertrace().unwrap().max_abs_diff(&one));
    }
    worst
}

/// Berezin and Rogers conventions on fixed and random examples.
pub fn rogers_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let one = Supernumber::one(2);
    let x = Supernumber::pair_product(2, 1);
    let mut worst: f64 = 0.0;
    let eta_int = Supernumber::eta(2, 1).berezin(Generator::eta(1));
    worst = worst.max(eta_int.max_abs_diff(&one));
    let top = (-&x).berezin(Generator::eta_hash(1)).berezin(Generator::eta(1));
    worst = worst.max(top.max_abs_diff(&one));
    for _ in 0..samples {
        let c = rng.gen_range(0.0..1.0);
        let tau = &one + &x.scale_real(c);
        worst = worst.max((tau.modified_rogers().unwrap() - (1.0 - c)).abs());
        worst = worst.max((tau.rogers_r1() - (1.0 + c)).abs());
    }
    worst
}

/// Real transition probability against `|γ̄α + δ̄β|²(1 − (p − q)²)`.
pub fn transition_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (p, q) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (t1, f1, t2, f2) = (
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
        );
        let u = superqubit(q, t2, f2);
        let v = superqubit(p, t1, f1);
        let a = GroupElementParams::new(t1, f1, 0.0);
        let b = GroupElementParams::new(t2, f2, 0.0);
        let overlap = b.alpha().conj() * a.alpha() + b.beta().conj() * a.beta();
        let expect = overlap.norm_sqr() * (1.0 - (p - q) * (p - q));
        let got = superstate::transition_probability(&u, &v).unwrap();
        worst = worst.max((got - expect).abs());
    }
    worst
}

/// Two-party structure: the tensor-product expansion, `⟨••|••⟩ = −1` and
/// `Σ p_Γ = 1` for rotated `Υ`.
pub fn two_party_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    const N: u8 = 4;
    let mut worst: f64 = 0.0;
    let bb = SuperState::basis_ket(2, N, &[Ket::Bullet, Ket::Bullet]).unwrap();
    worst = worst.max(inner_product(&bb, &bb).unwrap().max_abs_diff(&-Supernumber::one(N)));
    for _ in 0..samples {
        let (pa, pb) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let a = original_form(N, 1, pa, rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let b = original_form(N, 2, pb, rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let t = superstate::tensor(&a.0, &b.0).unwrap();
        worst = worst.max(expansion_residual(&t, pa, pb, a.1, b.1));

        let strat = Strategy::from_slice(
            &(0..chsh::DIM)
                .map(|k| if k < 6 { rng.gen_range(-0.5..0.5) } else { rng.gen_range(-PI..PI) })
                .collect::<Vec<_>>(),
        );
        let za = chsh::local_rotation(1, strat.r[0], strat.alice[0]);
        let zb = chsh::local_rotation(2, strat.s[1], strat.bob[1]);
        let rotated = upsilon(strat.pa, strat.pb).apply_local(&za, &zb).unwrap();
        let total = measure_grassmann(&rotated)
            .iter()
            .fold(Supernumber::zero(N), |acc, p| &acc + p);
        worst = worst.max(total.max_abs_diff(&Supernumber::one(N)));
    }
    worst
}

/// Single superqubit `γ(α|0⟩ + β|1⟩) + pη|•⟩` in left-coefficient form, with
/// `γ = 1 + (p²/2)ηη^#`. Returns the state and `(α, β)`.
fn original_form(order: u8, pair: u8, p: f64, theta: f64, phi: f64) -> (SuperState, (Complex, Complex)) {
    let g = GroupElementParams::new(theta, phi, 0.0);
    let gamma = &Supernumber::one(order) + &Supernumber::pair_product(order, pair).scale_real(p * p / 2.0);
    let left = vec![
        gamma.scale(g.alpha()),
        gamma.scale(g.beta()),
        Supernumber::eta(order, pair).scale_real(p),
    ];
    (SuperState::from_left_coeffs(1, order, left).unwrap(), (g.alpha(), g.beta()))
}

/// Compares a product state with the printed two-party expansion.
fn expansion_residual(t: &SuperState, pa: f64, pb: f64, ab: (Complex, Complex), cd: (Complex, Complex)) -> f64 {
    const N: u8 = 4;
    let one = Supernumber::one(N);
    let ga = &one + &Supernumber::pair_product(N, 1).scale_real(pa * pa / 2.0);
    let gb = &one + &Supernumber::pair_product(N, 2).scale_real(pb * pb / 2.0);
    let (ea, eb) = (Supernumber::eta(N, 1), Supernumber::eta(N, 2));
    let amp_a = [ab.0, ab.1];
    let amp_b = [cd.0, cd.1];
    let mut worst: f64 = 0.0;
    for m in Ket::ALL {
        for n in Ket::ALL {
            let expect = match (m, n) {
                (Ket::Bullet, Ket::Bullet) => (&ea * &eb).scale_real(-pa * pb),
                (Ket::Bullet, n) => (&ea * &gb).scale(amp_b[n.index()] * pa),
                (m, Ket::Bullet) => (&eb * &ga).scale(amp_a[m.index()] * pb),
                (m, n) => (&ga * &gb).scale(amp_a[m.index()] * amp_b[n.index()]),
            };
            worst = worst.max(t.left_coeff(&[m, n]).max_abs_diff(&expect));
        }
    }
    worst
}

/// Involution laws of hash and star on random supernumbers.
pub fn involution_residual(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a = sample::any_supernumber(rng, 4);
        let b = sample::any_supernumber(rng, 4);
        let (ae, ao) = a.grade_parts();
        worst = worst.max(a.hash().hash().max_abs_diff(&(&ae - &ao)));
        worst = worst.max(a.star().star().max_abs_diff(&a));
        worst = worst.max((&a * &b).hash().max_abs_diff(&(&a.hash() * &b.hash())));
        worst = worst.max((&a * &b).star().max_abs_diff(&(&b.star() * &a.star())));
    }
    worst
}

/// Winning probabilities of the reference strategies.
pub fn baseline_residual() -> f64 {
    let tsirelson = chsh::win_prob(&Strategy::tsirelson()).unwrap();
    let quantum = (tsirelson - (PI / 8.0).cos().powi(2)).abs();
    let classical = (chsh::classical_optimum().0 - 0.75).abs();
    quantum.max(classical)
}

/// Runs every check.
pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = opts.samples.max(1);
    let small = (n / 4).max(1);
    vec![
        Check {
            name: "grade adjoint identity (N=2)",
            residual: grade_adjoint_residual(&mut rng, 2, small, opts.inject_fault),
            tolerance: 1e-12,
        },
        Check {
            name: "grade adjoint identity (N=4)",
            residual: grade_adjoint_residual(&mut rng, 4, small, opts.inject_fault),
            tolerance: 1e-12,
        },
        Check {
            name: "supertranspose order 4 and composition",
            residual: supertranspose_residual(&mut rng, 4, small),
            tolerance: 1e-14,
        },
        Check {
            name: "closed-form S matrix",
            residual: s_matrix_residual(&mut rng, n),
            tolerance: 1e-13,
        },
        Check {
            name: "group law and superunitarity",
            residual: group_law_residual(&mut rng, n),
            tolerance: 1e-12,
        },
        Check {
            name: "superqubit normalization",
            residual: normalization_residual(&mut rng, n),
            tolerance: 1e-12,
        },
        Check {
            name: "Berezin and Rogers conventions",
            residual: rogers_residual(&mut rng, n),
            tolerance: 1e-15,
        },
        Check {
            name: "transition probability formula",
            residual: transition_residual(&mut rng, n),
            tolerance: 1e-12,
        },
        Check {
            name: "two-party structure",
            residual: two_party_residual(&mut rng, small),
            tolerance: 1e-12,
        },
        Check {
            name: "hash and star involutions",
            residual: involution_residual(&mut rng, n),
            tolerance: 1e-12,
        },
        Check {
            name: "CHSH reference values",
            residual: baseline_residual(),
            tolerance: 1e-12,
        },
    ]
}
