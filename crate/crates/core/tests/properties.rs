use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splice_conway::link::{builtin_catalog, torus_link, LinkSpec};
use splice_conway::selftest::sample_links;
use splice_conway::splice::random::ExprGenerator;
use splice_conway::splice::{verify_symmetry, Engine, SpliceError};
use splice_conway::symalg::{gcd, parse_ratfn, LaurentPoly, Monomial, RatFn};
use splice_conway::torsion::random::{random_complex, random_invertible, random_witness, Bounds};
use splice_conway::torsion::{BasedComplex, Field, SesWitness};

type Q = BigRational;

const VARS: [&str; 3] = ["t_a", "t_b", "t_c"];

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -2i64..=2, -2i64..=2, -2i64..=2), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(c, a, b, d)| {
            let m = Monomial::from_pairs([(VARS[0], a), (VARS[1], b), (VARS[2], d)]);
            (m, BigInt::from(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn renamed(spec: &LinkSpec, prefix: &str) -> LinkSpec {
    let mapping: BTreeMap<String, String> = spec
        .components
        .iter()
        .map(|c| (c.clone(), format!("{prefix}{c}")))
        .collect();
    spec.relabel(&mapping).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in ratfn(), b in ratfn(), c in ratfn()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form_is_structural(a in ratfn(), b in ratfn(), h in nonzero_poly()) {
        let again = RatFn::new(a.numerator().clone(), a.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        let scaled = RatFn::new(a.numerator() * &h, a.denominator() * &h).unwrap();
        prop_assert_eq!(&scaled, &a);
        let cross = a.numerator() * b.denominator() == b.numerator() * a.denominator();
        prop_assert_eq!(cross, a == b);
    }

    #[test]
    fn display_parses_back(a in ratfn()) {
        prop_assert_eq!(parse_ratfn(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        let (_, c) = c.normalize_shift();
        let (_, g) = g.normalize_shift();
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn invert_vars_is_an_involution(a in ratfn()) {
        prop_assert_eq!(a.invert_vars().invert_vars(), a);
    }

    #[test]
    fn invertible_substitution_round_trips(a in ratfn(), eb in -2i64..=2, ec in -2i64..=2) {
        let m = Monomial::from_pairs([("t_b", eb), ("t_c", ec)]);
        let forward = Monomial::var("t_z").mul(&m);
        let back = Monomial::var("t_a").mul(&m.inverse());
        let there = a.substitute_monomial("t_a", &forward).unwrap();
        prop_assert_eq!(there.substitute_monomial("t_z", &back).unwrap(), a);
    }

    #[test]
    fn diagonal_then_one_matches_full_specialization(a in ratfn()) {
        let at_one: BigInt = a.denominator().terms().map(|(_, c)| c).sum();
        prop_assume!(at_one != BigInt::from(0));
        let full = VARS.iter().try_fold(a.clone(), |f, v| f.specialize_one(v));
        let diag = a.diagonal("t").and_then(|d| d.specialize_one("t"));
        if let (Ok(full), Ok(diag)) = (full, diag) {
            prop_assert_eq!(full, diag);
        }
    }

    #[test]
    fn torus_family_is_valid(p in -7i64..=7, q in -7i64..=7, d in 1i64..=3) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let spec = torus_link(p, q, d).unwrap();
        prop_assert!(spec.validate().is_empty(), "{:?}", spec.validate());
    }

    #[test]
    fn relabel_commutes_with_validate(which in 0usize..8, coef in -2i64..=2, bump in 0i64..=1) {
        let mut spec = sample_links()[which].clone();
        spec.conway = &spec.conway * &RatFn::constant(coef);
        if bump == 1 && spec.n() > 1 {
            let v = spec.lk.get(0, 1);
            spec.lk.set(0, 1, v + 1);
        }
        let prefixed = renamed(&spec, "z");
        let kinds = |s: &LinkSpec| s.validate().iter().map(std::mem::discriminant).collect::<Vec<_>>();
        prop_assert_eq!(kinds(&spec), kinds(&prefixed));
        let back: BTreeMap<String, String> = prefixed.components.iter().zip(&spec.components).map(|(a, b)| (a.clone(), b.clone())).collect();
        prop_assert_eq!(prefixed.relabel(&back).unwrap(), spec);
    }

    #[test]
    fn generated_results_are_symmetric(seed in any::<u64>()) {
        let mut g = ExprGenerator::new(seed);
        let engine = Engine::new();
        for _ in 0..3 {
            match g.next_evaluated(&engine) {
                Ok((e, s)) => prop_assert!(verify_symmetry(&s), "{}: {}", e, s.conway),
                Err((e, err)) => prop_assert!(false, "{}: {}", e, err),
            }
        }
    }

    #[test]
    fn splice_is_symmetric(i in 0usize..8, j in 0usize..8, a in 0usize..3, b in 0usize..3) {
        let links = sample_links();
        let (l, r) = (&links[i], &renamed(&links[j], "r"));
        let (lc, rc) = (&l.components[a % l.n()], &r.components[b % r.n()]);
        let engine = Engine::new();
        match (engine.splice(l, lc, r, rc), engine.splice(r, rc, l, lc)) {
            (Ok(x), Ok(y)) => prop_assert!(x.equivalent_unordered(&y), "{} vs {}", x.conway, y.conway),
            (Err(x), Err(y)) => prop_assert_eq!(std::mem::discriminant(&x), std::mem::discriminant(&y)),
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn splice_order_independence(j in 0usize..8, k in 0usize..8, b in 0usize..3, c in 0usize..3) {
        let links = sample_links();
        let base = builtin_catalog().get("tilde").unwrap();
        let (x, y) = (renamed(&links[j], "p"), renamed(&links[k], "q"));
        let (xc, yc) = (&x.components[b % x.n()], &y.components[c % y.n()]);
        let engine = Engine::new();
        let first = engine.splice(&base, "x", &x, xc).and_then(|s| engine.splice(&s, "y", &y, yc));
        let second = engine.splice(&base, "y", &y, yc).and_then(|s| engine.splice(&s, "x", &x, xc));
        match (first, second) {
            (Ok(f), Ok(s)) => prop_assert!(f.equivalent_unordered(&s), "{} vs {}", f.conway, s.conway),
            (Err(f), Err(s)) => {
                let missing = |e: &SpliceError| matches!(e, SpliceError::MissingSublinkData { .. });
                prop_assert!(missing(&f) && missing(&s), "{} / {}", f, s);
            }
            (f, s) => prop_assert!(false, "{:?} vs {:?}", f, s),
        }
    }

    #[test]
    fn torsion_basis_covariance(seed in any::<u64>(), degree in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: BasedComplex<Q> = random_complex(&mut rng, Bounds::default());
        let i = degree % (c.length() + 1);
        let m = random_invertible(&mut rng, c.dim(i));
        let tau = c.torsion().unwrap();
        let det = m.det();
        let expected = if i.is_multiple_of(2) { tau.mul(&det) } else { tau.div(&det) };
        prop_assert_eq!(c.rebase(i, &m).unwrap().torsion().unwrap(), expected);
    }

    #[test]
    fn generated_complexes_square_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: BasedComplex<Q> = random_complex(&mut rng, Bounds::default());
        for i in 1..c.length() {
            prop_assert!(c.boundary(i).mul(c.boundary(i + 1)).is_zero());
        }
        prop_assert_eq!(c.torsion_with_choices(&mut rng).unwrap(), c.torsion().unwrap());
    }

    #[test]
    fn multiplicativity_on_witnesses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: SesWitness<Q> = random_witness(&mut rng, Bounds::default());
        let report = w.check().unwrap();
        prop_assert!(report.holds, "{:?}", report);
    }
}
