use hexlink::quadpoly::{invariant_quads, invariant_quads_elim, quad_poly_elim, QuadPolynomial, DEFAULT_SEED};
use hexlink::sample::random_linkage;
use hexlink::{act, DualQuatQ, Rational, Scalar};
use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cq(re: i64, im: i64) -> Complex<Rational> {
    Complex::new(Rational::from_i64(re), Rational::from_i64(im))
}

fn quad() -> impl Strategy<Value = QuadPolynomial<Rational>> {
    prop::array::uniform4(-20i64..=20).prop_map(|[a, b, c, d]| QuadPolynomial::new(cq(a, b), cq(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shifts_compose_and_keep_discriminant(p in quad(), w in (-9i64..=9, -9i64..=9), v in (-9i64..=9, -9i64..=9)) {
        let (w, v) = (cq(w.0, w.1), cq(v.0, v.1));
        prop_assert_eq!(p.shift(&w).shift(&v), p.shift(&(w.clone() + v)));
        prop_assert_eq!(p.shift(&w).discriminant(), p.discriminant());
        prop_assert_eq!(p.shift(&w).root_mean(), p.root_mean() - w.clone());
        let x = cq(3, -2);
        prop_assert_eq!(p.shift(&w).eval(&x), p.eval(&(x + w)));
    }

    #[test]
    fn gcd_degree_is_symmetric(p in quad(), q in quad()) {
        prop_assert_eq!(p.gcd_degree(&q), q.gcd_degree(&p));
        prop_assert_eq!(p.gcd_degree(&p), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reversing_outer_axes_conjugates(seed in any::<u64>()) {
        let l = random_linkage(&mut rng(seed), true);
        let h = l.axes();
        let q = quad_poly_elim([&h[0], &h[1], &h[2], &h[3]], DEFAULT_SEED).unwrap();
        let outer = quad_poly_elim([&h[0].reversed(), &h[1], &h[2], &h[3].reversed()], DEFAULT_SEED).unwrap();
        let inner = quad_poly_elim([&h[0], &h[1].reversed(), &h[2].reversed(), &h[3]], DEFAULT_SEED).unwrap();
        prop_assert_eq!(outer, q.conj());
        prop_assert_eq!(inner, q);
    }

    #[test]
    fn quads_ignore_the_choice_of_frame(seed in any::<u64>(), g in prop::array::uniform8(-4i64..=4)) {
        let g = DualQuatQ::new(g.map(Rational::from_i64));
        prop_assume!(g.primal().iter().any(|c| *c != Rational::from_i64(0)));
        let l = random_linkage(&mut rng(seed), true);
        let h = l.axes();
        let m: Vec<_> = h.iter().map(|a| act(&g, a).unwrap()).collect();
        let q = quad_poly_elim([&h[0], &h[1], &h[2], &h[3]], DEFAULT_SEED).unwrap();
        let moved = quad_poly_elim([&m[0], &m[1], &m[2], &m[3]], DEFAULT_SEED).unwrap();
        prop_assert_eq!(moved, q);
    }

    #[test]
    fn closed_form_matches_elimination(seed in any::<u64>()) {
        let l = random_linkage(&mut rng(seed), true);
        let Ok(elim) = invariant_quads_elim(&l, DEFAULT_SEED) else {
            // Opposite axes parallel: no elimination generator.
            return Ok(());
        };
        prop_assert_eq!(elim, invariant_quads(&l.dh_params().unwrap()));
    }
}
