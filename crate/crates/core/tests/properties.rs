use proptest::prelude::*;

use tautjac::lie::{verify_bracket, BracketKind};
use tautjac::newton::{d_to_w_rational, w_to_d_rational};
use tautjac::{
    enumerate_monomials, parse_poly, rat, Exec, FourierMap, LieContext, Monomial, Operator, Poly,
    Rational, RelationIdeal, Var,
};

fn var() -> impl Strategy<Value = Var> {
    (1u32..=4, any::<bool>()).prop_map(|(i, is_p)| if is_p { Var::p(i) } else { Var::q(i) })
}

fn monomial(max_len: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(var(), 0..=max_len).prop_map(Monomial::from_vars)
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(3), coeff()), 0..5).prop_map(Poly::from_terms)
}

fn operator(window: i64) -> impl Strategy<Value = Operator> {
    prop::collection::vec((coeff(), monomial(2), monomial(2)), 1..4)
        .prop_map(move |terms| Operator::from_terms(terms, window))
}

/// Independent count of multisets of (kind, index) pairs with index sum `w`.
fn count_multisets(w: u32) -> u64 {
    // partitions where each part of size i comes in two colours
    let w = w as usize;
    let mut ways = vec![0u64; w + 1];
    ways[0] = 1;
    for part in 1..=w {
        for _ in 0..2 {
            for s in part..=w {
                ways[s] += ways[s - part];
            }
        }
    }
    ways[w]
}

#[test]
fn monomial_counts_match_independent_counter() {
    for w in 0..=12 {
        let monos = enumerate_monomials(w);
        assert_eq!(monos.len() as u64, count_multisets(w), "weight {w}");
        assert!(monos.windows(2).all(|p| p[0] < p[1]));
        assert!(monos.iter().all(|m| m.weight() == w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn gradings_are_additive(a in monomial(4), b in monomial(4)) {
        let ab = a.mul(&b);
        prop_assert_eq!(ab.weight(), a.weight() + b.weight());
        prop_assert_eq!(ab.sdeg(), a.sdeg() + b.sdeg());
        prop_assert_eq!(ab.pdeg() + ab.qdeg(), ab.degree());
    }

    #[test]
    fn grade_sums_back(f in poly()) {
        let mut sum = Poly::zero();
        for ((w, s), part) in f.grade() {
            prop_assert!(part.monomials().all(|m| m.weight() == w && m.sdeg() == s));
            sum += &part;
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn partials_commute(f in poly(), u in var(), v in var()) {
        prop_assert_eq!(f.partial(u).partial(v), f.partial(v).partial(u));
    }

    #[test]
    fn compose_matches_sequential_apply(a in operator(20), b in operator(20), f in poly()) {
        let lhs = a.compose(&b).apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative(a in operator(20), b in operator(20), c in operator(20)) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        let w = left.window().min(right.window());
        prop_assert!(left.op_equal(&right, w).unwrap());
    }

    #[test]
    fn jacobi_identity(a in operator(20), b in operator(20), c in operator(20)) {
        let jac = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
            + &c.commutator(&a.commutator(&b));
        prop_assert!(jac.op_equal(&Operator::zero(), jac.window()).unwrap());
    }

    #[test]
    fn parser_round_trip(f in poly()) {
        let text = f.to_string();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn newton_round_trip(w in prop::collection::vec(coeff(), 1..=10)) {
        prop_assert_eq!(d_to_w_rational(&w_to_d_rational(&w)), w);
    }
}

#[test]
fn x_and_y_shift_the_bigrading() {
    for g in [2, 4] {
        let ctx = LieContext::new(g, 7).unwrap();
        let report = verify_bracket(BracketKind::HGrading, 4, &ctx, Exec::Sequential);
        assert!(report.all_passed(), "{:?}", report.first_failure());
    }
}

#[test]
fn built_ideals_are_closed() {
    for g in 2..=5 {
        let ideal = RelationIdeal::build(g, g + 2).unwrap();
        ideal.check_closure(Exec::Parallel).unwrap();
    }
}

#[test]
fn larger_caps_give_the_same_quotient() {
    for g in 2..=4 {
        let small = RelationIdeal::build(g, g + 1).unwrap();
        let large = RelationIdeal::build(g, g + 4).unwrap();
        for w in 0..=g {
            assert_eq!(small.relations(w).unwrap(), large.relations(w).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pontryagin_is_associative_at_genus_three(
        ca in prop::collection::vec(coeff(), 16),
        cb in prop::collection::vec(coeff(), 16),
        cc in prop::collection::vec(coeff(), 16),
    ) {
        let s = FourierMap::new(RelationIdeal::build(3, 6).unwrap());
        let basis = s.ideal().full_quotient_basis();
        let elem = |cs: &[Rational]| Poly::from_terms(basis.iter().cloned().zip(cs.iter().cloned()));
        let (a, b, c) = (elem(&ca), elem(&cb), elem(&cc));
        let left = s.pontryagin(&s.pontryagin(&a, &b).unwrap(), &c).unwrap();
        let right = s.pontryagin(&a, &s.pontryagin(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let sab = s.fourier(&s.pontryagin(&a, &b).unwrap()).unwrap();
        let prod = s.ideal().project(&(s.fourier(&a).unwrap() * s.fourier(&b).unwrap()));
        prop_assert_eq!(sab, prod);
    }
}
