use proptest::prelude::*;
use quantmet::partial::{check_omega_laws, check_partial_axioms, from_omega_set, random_frame, random_matrix_space, random_partial_space, to_omega_set};
use quantmet::quantale::{Ddf, Quantale, Value};
use quantmet::sample::{random_ddf, random_value, Sampler};
use quantmet::structures::{compose, identity_map};
use quantmet::vmetric::{check_axioms, product_space, self_space, DEFAULT_PRODUCT_BOUND};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![8 => 0.0..50.0f64, 1 => Just(0.0), 1 => Just(f64::INFINITY)]
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![8 => 0.0..=1.0f64, 1 => Just(0.0), 1 => Just(1.0)]
}

/// A value of every instance drawn from one seed.
fn values(q: &Quantale, seed: u64, n: usize) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_value(q, &mut rng)).collect()
}

fn instances() -> Vec<Quantale> {
    vec![Quantale::truth(), Quantale::ext_real(), Quantale::unit(), Quantale::errors(), Quantale::ddf()]
}

proptest! {
    #[test]
    fn ext_real_residuation(p in real(), q in real(), r in real()) {
        let k = Quantale::ext_real();
        let (p, q, r) = (Value::ExtReal(p), Value::ExtReal(q), Value::ExtReal(r));
        let lhs = k.leq(&q, &k.add(&p, &r).unwrap()).unwrap();
        let rhs = k.leq(&k.truncated_sub(&q, &p).unwrap(), &r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_addition_is_a_commutative_monoid(a in unit(), b in unit(), c in unit()) {
        let k = Quantale::unit();
        let (a, b, c) = (Value::Unit(a), Value::Unit(b), Value::Unit(c));
        let ab_c = k.add(&k.add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = k.add(&a, &k.add(&b, &c).unwrap()).unwrap();
        prop_assert!(k.eq(&ab_c, &a_bc).unwrap());
        prop_assert!(k.eq(&k.add(&a, &b).unwrap(), &k.add(&b, &a).unwrap()).unwrap());
        prop_assert!(k.eq(&k.add(&a, &k.zero()).unwrap(), &a).unwrap());
    }

    #[test]
    fn errors_truncation_recovers(p in unit(), q in unit()) {
        let k = Quantale::errors();
        let (p, q) = (Value::Errors(p), Value::Errors(q));
        let back = k.add(&p, &k.truncated_sub(&q, &p).unwrap()).unwrap();
        prop_assert!(k.leq(&q, &back).unwrap());
    }

    #[test]
    fn order_and_lattice_operations(seed in any::<u64>()) {
        for q in instances() {
            let v = values(&q, seed, 3);
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            prop_assert!(q.leq(a, a).unwrap());
            if q.leq(a, b).unwrap() && q.leq(b, c).unwrap() {
                prop_assert!(q.leq(a, c).unwrap());
            }
            let m = q.meet2(a, b).unwrap();
            let j = q.join2(a, b).unwrap();
            prop_assert!(q.leq(&m, a).unwrap() && q.leq(&m, b).unwrap());
            prop_assert!(q.leq(a, &j).unwrap() && q.leq(b, &j).unwrap());
            prop_assert!(q.leq(&q.zero(), a).unwrap() && q.leq(a, &q.top()).unwrap());
        }
    }

    #[test]
    fn way_above_implies_order(seed in any::<u64>()) {
        for q in instances() {
            let v = values(&q, seed, 2);
            if q.way_above(&v[0], &v[1]).unwrap() {
                prop_assert!(q.leq(&v[1], &v[0]).unwrap());
            }
        }
    }

    #[test]
    fn ddf_boxplus_commutes_with_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_ddf(&mut rng), random_ddf(&mut rng));
        prop_assert_eq!(f.boxplus(&g), g.boxplus(&f));
        prop_assert_eq!(f.boxplus(&Ddf::eps0()), f.clone());
        let q = Quantale::ddf();
        let h = random_ddf(&mut rng);
        let lhs = f.boxplus(&g).boxplus(&h);
        let rhs = f.boxplus(&g.boxplus(&h));
        prop_assert!(q.eq(&Value::Ddf(lhs), &Value::Ddf(rhs)).unwrap());
    }

    #[test]
    fn self_space_and_products_are_spaces(seed in any::<u64>(), n in 1usize..5) {
        for q in instances() {
            let s = self_space(&q, &values(&q, seed, n)).unwrap();
            prop_assert!(check_axioms(&s).unwrap().passed());
            let p = product_space(&s, 2, DEFAULT_PRODUCT_BOUND).unwrap();
            prop_assert!(check_axioms(&p).unwrap().passed());
        }
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>()) {
        for q in instances() {
            let a: Vec<Value> = Sampler::new(&q, seed).take(40).collect();
            let b: Vec<Value> = Sampler::new(&q, seed).take(40).collect();
            prop_assert_eq!(&a[..2], &[q.zero(), q.top()][..]);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn composition_is_associative(f in prop::collection::vec(0usize..5, 5), g in prop::collection::vec(0usize..5, 5), h in prop::collection::vec(0usize..5, 5)) {
        prop_assert_eq!(compose(&compose(&f, &g), &h), compose(&f, &compose(&g, &h)));
        prop_assert_eq!(compose(&identity_map(5), &f), f.clone());
        prop_assert_eq!(compose(&f, &identity_map(5)), f);
    }

    #[test]
    fn dualization_round_trips_and_transports_laws(seed in any::<u64>(), n in 1usize..5, lawful in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&mut rng);
        let s = if lawful { random_partial_space(&frame, n, &mut rng) } else { random_matrix_space(&frame, n, &mut rng) };
        let o = to_omega_set(&s).unwrap();
        prop_assert_eq!(from_omega_set(&o).unwrap(), s.clone());
        prop_assert_eq!(check_partial_axioms(&s).unwrap().passed(), check_omega_laws(&o).passed());
        if lawful {
            prop_assert!(check_omega_laws(&o).passed());
        }
    }
}
