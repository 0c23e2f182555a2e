use proptest::prelude::*;

use kasep_core::composition::prec;
use kasep_core::limits::richardson;
use kasep_core::{
    dominance_leq, orbit, preceq, BigFloat, Composition, HeckeContext, Jet, LaurentPolynomial, ParameterPoint, Rational,
    Scalar, Substitution,
};

type Poly = LaurentPolynomial<Rational>;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=25).prop_map(|(n, d)| Rational::new(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=25, any::<bool>()).prop_map(|(n, d, neg)| Rational::new(if neg { -n } else { n }, d))
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, nvars), rational()), 0..7).prop_map(move |terms| {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            p.add_term(Composition::new(e), c);
        }
        p
    })
}

fn composition(n: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(-2i32..=2, n).prop_map(Composition::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_display_roundtrip(r in rational()) {
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!((a.clone() + &b) * &c, a.clone() * &c + b.clone() * &c);
        prop_assert_eq!((a.clone() / &c) * &c, a.clone());
        prop_assert_eq!(a.clone() - &a, Rational::zero(&()));
    }

    #[test]
    fn polynomial_ring_axioms(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(2), b in poly(2), x in nonzero_rational(), y in nonzero_rational()) {
        let pt = [x, y];
        let (va, vb) = (a.evaluate(&pt).unwrap(), b.evaluate(&pt).unwrap());
        prop_assert_eq!((&a * &b).evaluate(&pt).unwrap(), va.clone() * &vb);
        prop_assert_eq!((&a - &b).evaluate(&pt).unwrap(), va - vb);
    }

    #[test]
    fn substitutions_act_on_values(f in poly(3), c in nonzero_rational(), x in prop::collection::vec(nonzero_rational(), 3)) {
        let fx = |p: &[Rational]| f.evaluate(p).unwrap();
        let scaled = f.substitute(&Substitution::Scale(1, c.clone())).unwrap();
        prop_assert_eq!(scaled.evaluate(&x).unwrap(), fx(&[x[0].clone(), x[1].clone() * &c, x[2].clone()]));
        let refl = f.substitute(&Substitution::Reflect(0, c.clone())).unwrap();
        prop_assert_eq!(refl.evaluate(&x).unwrap(), fx(&[c.clone() / &x[0], x[1].clone(), x[2].clone()]));
        let swap = f.substitute(&Substitution::Swap(0, 2)).unwrap();
        prop_assert_eq!(swap.evaluate(&x).unwrap(), fx(&[x[2].clone(), x[1].clone(), x[0].clone()]));
    }

    #[test]
    fn substitution_inverses(f in poly(2), c in nonzero_rational()) {
        for s in [
            Substitution::Scale(0, c.clone()),
            Substitution::Reflect(1, c.clone()),
            Substitution::Invert(0),
            Substitution::Swap(0, 1),
        ] {
            let back = f.substitute(&s).unwrap().substitute(&s.inverse()).unwrap();
            prop_assert_eq!(&back, &f);
        }
    }

    #[test]
    fn orders_are_partial_orders(a in composition(3), b in composition(3), c in composition(3)) {
        for leq in [dominance_leq, preceq] {
            prop_assert!(leq(&a, &a).unwrap());
            if leq(&a, &b).unwrap() && leq(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if leq(&a, &b).unwrap() && leq(&b, &c).unwrap() {
                prop_assert!(leq(&a, &c).unwrap());
            }
        }
        prop_assert!(!prec(&a, &a).unwrap());
    }

    #[test]
    fn dominant_weight_is_in_orbit_and_tops_it(a in composition(3)) {
        let plus = a.plus();
        prop_assert!(plus.is_partition());
        let o = orbit(&a);
        prop_assert!(o.contains(&plus) && o.contains(&a));
        for mu in &o {
            prop_assert_eq!(mu.plus(), plus.clone());
            prop_assert!(dominance_leq(mu, &plus).unwrap());
        }
    }

    #[test]
    fn jets_differentiate_polynomials(coeffs in prop::collection::vec(rational(), 1..6), x in nonzero_rational()) {
        // p(x) = sum c_k x^k, p'(x) = sum k c_k x^(k-1)
        let j = Jet::variable(x.clone());
        let mut val = Jet::constant(Rational::zero(&()));
        let mut power = Jet::constant(Rational::one(&()));
        let mut deriv = Rational::zero(&());
        for (k, c) in coeffs.iter().enumerate() {
            val = val + Jet::constant(c.clone()) * &power;
            if k > 0 {
                deriv = deriv + Rational::from(k as i64) * c * &x.pow_i(k as i64 - 1);
            }
            power = power * &j;
        }
        prop_assert_eq!(val.deriv, deriv);
    }

    #[test]
    fn richardson_is_exact_on_low_degree(c0 in rational(), c1 in rational(), c2 in rational()) {
        let ms = [8usize, 16, 32, 64];
        let vals: Vec<BigFloat> = ms
            .iter()
            .map(|&m| {
                let h = Rational::new(1, m as i64);
                BigFloat::from_rational(&(c0.clone() + c1.clone() * &h + c2.clone() * &h * &h), 256)
            })
            .collect();
        let est = richardson(&ms, &vals, 256).unwrap();
        let target = BigFloat::from_rational(&c0, 256);
        prop_assert!((est.extrapolated.clone() - &target).magnitude() < 1e-60);
        prop_assert!(est.error_estimate.magnitude() < 1e-60);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hecke_generators_are_invertible_and_quadratic(f in poly(2), i in 0usize..=2) {
        let h = HeckeContext::exact(&ParameterPoint::default_point(), 2).unwrap();
        let g = h.apply_t(i, false, &f).unwrap();
        prop_assert_eq!(&h.apply_t(i, true, &g).unwrap(), &f);
        // (T - k)(T + 1/k) = 0 with k the generator's parameter
        let k = h.generator_parameter(i);
        let tg = h.apply_t(i, false, &g).unwrap();
        let quad = &(&tg + &g.scale(&(k.inv() - &k))) - &f;
        prop_assert!(quad.is_zero());
    }
}
