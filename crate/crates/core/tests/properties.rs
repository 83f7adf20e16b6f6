//! Property suite for the algebra and bracket laws.

mod common;

use bigbracket::{
    basis_sections, bracket, deform_theta, endo_of, func_of, rat, BracketOp, Generator,
    PreCourant, Rat, Section, Signature, SuperPolynomial, TensorFunction,
};
use common::{random_homogeneous, random_monomial, sig};
use num_traits::One;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng as _;
use rand::SeedableRng;

fn shifted_sign(f: u32, g: u32) -> Rat {
    // (-1)^{(f-2)(g-2)}; only the parities matter
    if (f % 2) * (g % 2) == 1 {
        -Rat::one()
    } else {
        Rat::one()
    }
}

fn arb_signature() -> impl Strategy<Value = Signature> {
    (0u8..=2, 1u8..=4).prop_map(|(n, d)| sig(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Canonical form does not depend on the input term order.
    #[test]
    fn normalize_independent_of_term_order(seed in any::<u64>(), shuffle_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let s = sig(2, 3);
        let mut rng = StdRng::seed_from_u64(seed);
        let mut raw = Vec::new();
        for _ in 0..4 {
            let t = rng.gen_range(0..=4u32);
            if let Some(term) = random_monomial(&mut rng, s, t) {
                raw.push(term);
            }
        }
        let a = SuperPolynomial::normalize(s, &raw).unwrap();
        let mut shuffled = raw.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(shuffle_seed));
        // also shuffle each word by bubbling random adjacent transpositions,
        // tracking the Koszul sign by hand
        let b = SuperPolynomial::normalize(s, &shuffled).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Reordering generators inside a word only contributes the permutation
    /// sign of its odd part.
    #[test]
    fn normalize_word_reordering_sign(seed in any::<u64>(), swaps in proptest::collection::vec(any::<u16>(), 0..12)) {
        let s = sig(2, 3);
        let mut rng = StdRng::seed_from_u64(seed);
        let t = rng.gen_range(0..=4u32);
        let Some((word, coeff)) = random_monomial(&mut rng, s, t) else { return Ok(()); };
        let base = SuperPolynomial::normalize(s, &[(word.clone(), coeff.clone())]).unwrap();
        // apply adjacent transpositions, tracking the Koszul sign by hand
        let mut shuffled = word.clone();
        let mut sign = Rat::one();
        for raw in swaps {
            if shuffled.len() < 2 {
                break;
            }
            let i = raw as usize % (shuffled.len() - 1);
            if shuffled[i].is_odd() && shuffled[i + 1].is_odd() {
                sign = -sign;
            }
            shuffled.swap(i, i + 1);
        }
        let redone = SuperPolynomial::normalize(s, &[(shuffled, coeff)]).unwrap();
        prop_assert_eq!(redone, base.scale(&sign));
    }

    /// F*G = (-1)^{fg} G*F for homogeneous F, G.
    #[test]
    fn graded_commutativity(s in arb_signature(), f_deg in 0u32..=4, g_deg in 0u32..=4,
                            f_seed in any::<u64>(), g_seed in any::<u64>()) {
        let f = {
            let mut rng = StdRng::seed_from_u64(f_seed);
            random_homogeneous(&mut rng, s, f_deg)
        };
        let g = {
            let mut rng = StdRng::seed_from_u64(g_seed);
            random_homogeneous(&mut rng, s, g_deg)
        };
        let fg = f.mul(&g).unwrap();
        let gf = g.mul(&f).unwrap();
        let sign = if (f_deg % 2) * (g_deg % 2) == 1 { -Rat::one() } else { Rat::one() };
        prop_assert_eq!(fg, gf.scale(&sign));
    }

    #[test]
    fn associativity(s in arb_signature(), seeds in any::<[u64; 3]>(), degs in [0u32..=3, 0u32..=3, 0u32..=3]) {
        let p = |seed, t| {
            let mut rng = StdRng::seed_from_u64(seed);
            random_homogeneous(&mut rng, s, t)
        };
        let (f, g, h) = (p(seeds[0], degs[0]), p(seeds[1], degs[1]), p(seeds[2], degs[2]));
        let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// bidegree(F*G) = bidegree(F) + bidegree(G) on homogeneous inputs.
    #[test]
    fn bidegree_additivity(s in arb_signature(), f_seed in any::<u64>(), g_seed in any::<u64>(),
                           f_deg in 0u32..=3, g_deg in 0u32..=3) {
        let f = {
            let mut rng = StdRng::seed_from_u64(f_seed);
            random_homogeneous(&mut rng, s, f_deg)
        };
        let g = {
            let mut rng = StdRng::seed_from_u64(g_seed);
            random_homogeneous(&mut rng, s, g_deg)
        };
        let fg = f.mul(&g).unwrap();
        for bf in f.bidegrees() {
            // multiply the single-bidegree pieces and check the support
            for bg in g.bidegrees() {
                let piece = f.bidegree_project(bf).mul(&g.bidegree_project(bg)).unwrap();
                if !piece.is_zero() {
                    prop_assert_eq!(piece.bidegrees(), vec![bf.plus(bg)]);
                }
            }
        }
        let _ = fg;
    }

    /// {F,G} + (-1)^{(f-2)(g-2)} {G,F} = 0.
    #[test]
    fn bracket_graded_antisymmetry(s in arb_signature(), f_seed in any::<u64>(), g_seed in any::<u64>(),
                                   f_deg in 0u32..=4, g_deg in 0u32..=4) {
        let f = {
            let mut rng = StdRng::seed_from_u64(f_seed);
            random_homogeneous(&mut rng, s, f_deg)
        };
        let g = {
            let mut rng = StdRng::seed_from_u64(g_seed);
            random_homogeneous(&mut rng, s, g_deg)
        };
        let fg = bracket(&f, &g).unwrap();
        let gf = bracket(&g, &f).unwrap();
        prop_assert!(fg.add(&gf.scale(&shifted_sign(f_deg, g_deg))).unwrap().is_zero());
    }

    /// {F, G H} = {F,G} H + (-1)^{(f-2)g} G {F,H}.
    #[test]
    fn bracket_leibniz(s in arb_signature(), seeds in any::<[u64; 3]>(),
                       f_deg in 0u32..=4, g_deg in 0u32..=3, h_deg in 0u32..=3) {
        let p = |seed, t| {
            let mut rng = StdRng::seed_from_u64(seed);
            random_homogeneous(&mut rng, s, t)
        };
        let (f, g, h) = (p(seeds[0], f_deg), p(seeds[1], g_deg), p(seeds[2], h_deg));
        let lhs = bracket(&f, &g.mul(&h).unwrap()).unwrap();
        let sign = if ((f_deg + 2) % 2) * (g_deg % 2) == 1 { -Rat::one() } else { Rat::one() };
        let rhs = bracket(&f, &g).unwrap().mul(&h).unwrap()
            .add(&g.mul(&bracket(&f, &h).unwrap()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// {F,{G,H}} = {{F,G},H} + (-1)^{(f-2)(g-2)} {G,{F,H}}.
    #[test]
    fn bracket_graded_jacobi(s in arb_signature(), seeds in any::<[u64; 3]>(),
                             f_deg in 0u32..=4, g_deg in 0u32..=4, h_deg in 0u32..=4) {
        let p = |seed, t| {
            let mut rng = StdRng::seed_from_u64(seed);
            random_homogeneous(&mut rng, s, t)
        };
        let (f, g, h) = (p(seeds[0], f_deg), p(seeds[1], g_deg), p(seeds[2], h_deg));
        let lhs = bracket(&f, &bracket(&g, &h).unwrap()).unwrap();
        let rhs = bracket(&bracket(&f, &g).unwrap(), &h).unwrap()
            .add(&bracket(&g, &bracket(&f, &h).unwrap()).unwrap().scale(&shifted_sign(f_deg, g_deg)))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// bidegree({F,G}) = bidegree(F) + bidegree(G) - (1,1).
    #[test]
    fn bracket_bidegree_drop(s in arb_signature(), f_seed in any::<u64>(), g_seed in any::<u64>(),
                             f_deg in 1u32..=4, g_deg in 1u32..=4) {
        let f = {
            let mut rng = StdRng::seed_from_u64(f_seed);
            random_homogeneous(&mut rng, s, f_deg)
        };
        let g = {
            let mut rng = StdRng::seed_from_u64(g_seed);
            random_homogeneous(&mut rng, s, g_deg)
        };
        for bf in f.bidegrees() {
            for bg in g.bidegrees() {
                let piece = bracket(&f.bidegree_project(bf), &g.bidegree_project(bg)).unwrap();
                if !piece.is_zero() {
                    let expect = bigbracket::Bidegree::new(bf.k + bg.k - 1, bf.l + bg.l - 1);
                    prop_assert_eq!(piece.bidegrees(), vec![expect]);
                }
            }
        }
    }

    /// {X,Y} recovers the canonical pairing on degree-1 elements.
    #[test]
    fn pairing_recovery(s in arb_signature(), x_seed in any::<u64>(), y_seed in any::<u64>()) {
        let x = {
            let mut rng = StdRng::seed_from_u64(x_seed);
            random_homogeneous(&mut rng, s, 1)
        };
        let y = {
            let mut rng = StdRng::seed_from_u64(y_seed);
            random_homogeneous(&mut rng, s, 1)
        };
        // independent oracle: <X,Y> = sum_a (X_theta^a Y_xi_a + X_xi_a Y_theta^a)
        let mut expected = SuperPolynomial::zero(s);
        for a in 1..=s.d {
            let xt = bigbracket::left_partial(&x, Generator::Theta(a));
            let yx = bigbracket::left_partial(&y, Generator::Xi(a));
            let xx = bigbracket::left_partial(&x, Generator::Xi(a));
            let yt = bigbracket::left_partial(&y, Generator::Theta(a));
            expected = expected.add(&xt.mul(&yx).unwrap()).unwrap();
            expected = expected.add(&xx.mul(&yt).unwrap()).unwrap();
        }
        prop_assert_eq!(bracket(&x, &y).unwrap(), expected);
    }

    /// Round trip: func_of(endo_of(J)) = J, and the other way on skew
    /// matrices.
    #[test]
    fn tensor_roundtrip(seed in any::<u64>(), d in 2u8..=4) {
        let s = sig(1, d);
        let mut rng = StdRng::seed_from_u64(seed);
        // random degree-2 momentum-free function with x-dependence
        let mut raw = Vec::new();
        for _ in 0..4 {
            if let Some((mut word, c)) = random_monomial(&mut rng, s, 2) {
                if word.iter().any(|g| matches!(g, Generator::P(_))) {
                    continue;
                }
                word.push(Generator::X(1));
                raw.push((word, c));
            }
        }
        let j = TensorFunction::new(SuperPolynomial::normalize(s, &raw).unwrap()).unwrap();
        let e = endo_of(&j);
        prop_assert!(e.is_skew());
        prop_assert_eq!(func_of(&e).unwrap(), j.clone());
        // two-path deformation contract on a structure
        let theta = PreCourant::new(poly_theta(s)).unwrap();
        let deformed = deform_theta(&theta, &j).unwrap();
        let op = BracketOp::new(theta).deform(&e);
        for x in basis_sections(s) {
            for y in basis_sections(s) {
                prop_assert_eq!(deformed.dorfman(&x, &y).unwrap(), op.eval(&x, &y).unwrap());
            }
        }
    }
}

/// A fixed inhomogeneous-coefficient structure used by the round-trip test.
fn poly_theta(s: Signature) -> SuperPolynomial {
    let x1 = SuperPolynomial::generator(s, Generator::X(1)).unwrap();
    let base = SuperPolynomial::normalize(
        s,
        &[
            (
                vec![Generator::Xi(1), Generator::Xi(2), Generator::Theta(2)],
                rat(1, 1),
            ),
            (vec![Generator::Xi(1), Generator::P(1)], rat(1, 1)),
        ],
    )
    .unwrap();
    base.add(
        &x1.mul(
            &SuperPolynomial::normalize(
                s,
                &[(
                    vec![Generator::Xi(2), Generator::Xi(1), Generator::Theta(1)],
                    rat(1, 2),
                )],
            )
            .unwrap(),
        )
        .unwrap(),
    )
    .unwrap()
}

#[test]
fn dorfman_leibniz_property() {
    // [X, fY] = f [X,Y] + (rho(X).f) Y on random sections and functions
    let s = sig(2, 2);
    let theta = PreCourant::new(
        SuperPolynomial::normalize(
            s,
            &[
                (vec![Generator::Xi(1), Generator::P(1)], rat(1, 1)),
                (vec![Generator::Xi(2), Generator::P(2)], rat(1, 1)),
                (
                    vec![Generator::Xi(1), Generator::Xi(2), Generator::Theta(1)],
                    rat(2, 1),
                ),
            ],
        )
        .unwrap(),
    )
    .unwrap();
    let mut rng = StdRng::seed_from_u64(17);
    let basis = basis_sections(s);
    for _ in 0..20 {
        let f = {
            let x1 = SuperPolynomial::generator(s, Generator::X(1)).unwrap();
            let x2 = SuperPolynomial::generator(s, Generator::X(2)).unwrap();
            let c = common::small_rat(&mut rng);
            x1.mul(&x2)
                .unwrap()
                .scale(&c)
                .add(&x1.scale(&common::small_rat(&mut rng)))
                .unwrap()
        };
        for x in &basis {
            for y in &basis {
                let lhs = theta.dorfman(x, &y.scale_fn(&f).unwrap()).unwrap();
                let rhs = theta
                    .dorfman(x, y)
                    .unwrap()
                    .scale_fn(&f)
                    .unwrap()
                    .add(&y.scale_fn(&theta.anchor_apply(x, &f).unwrap()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn axiom_soundness_on_random_structures() {
    // both pre-Courant axioms hold identically for any degree-3 function
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..8 {
        let s = sig(rng.gen_range(0..=1), rng.gen_range(2..=3));
        let theta = PreCourant::new(random_homogeneous(&mut rng, s, 3)).unwrap();
        let mut sections = basis_sections(s);
        if s.n > 0 {
            let x1 = SuperPolynomial::generator(s, Generator::X(1)).unwrap();
            let extra: Vec<Section> = sections
                .iter()
                .map(|sec| sec.scale_fn(&x1).unwrap())
                .collect();
            sections.extend(extra);
        }
        let residuals = theta.axiom_residuals(&sections).unwrap();
        assert!(
            residuals.is_empty(),
            "axiom residuals on {}: {:?}",
            theta.as_poly(),
            residuals.len()
        );
    }
}
