use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use superverma::pbw::{PbwAlgebra, PbwOrder, UeaElement};
use superverma::root_data::{AlgebraData, CaseId};
use superverma::singular::{self, CaseParams};
use superverma::superalgebra::BracketTable;
use superverma::verma::VermaModule;
use superverma::{Scalar, Weight, Q};

const CASES: [&str; 6] = ["B-I:m=1,n=1", "B-II:m=1,n=1", "D-I:m=1,n=2", "D-II:m=1,n=2", "G3", "F31"];

fn tables() -> &'static Vec<Arc<BracketTable<Q>>> {
    static T: OnceLock<Vec<Arc<BracketTable<Q>>>> = OnceLock::new();
    T.get_or_init(|| {
        CASES
            .iter()
            .map(|s| {
                let alg = AlgebraData::build(s.parse::<CaseId>().unwrap()).unwrap();
                Arc::new(BracketTable::build(Arc::new(alg)).unwrap())
            })
            .collect()
    })
}

fn algebra(which: usize) -> PbwAlgebra<Q> {
    PbwAlgebra::new(Arc::new(PbwOrder::standard(tables()[which].clone())))
}

// raw indices, reduced mod the basis size once the case is known
fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..1000, 0..=3)
}

fn neg_word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..1000, 0..=3)
}

fn fit(t: &BracketTable<Q>, w: &[usize]) -> Vec<usize> {
    w.iter().map(|&i| i % t.dim()).collect()
}

fn fit_neg(t: &BracketTable<Q>, w: &[usize]) -> Vec<usize> {
    w.iter().map(|&i| t.neg(i % t.num_positive())).collect()
}

fn module(which: usize, coords: &[i64]) -> VermaModule<Q> {
    let t = tables()[which].clone();
    let lambda = Weight::from_ints(&coords[..t.rank()]);
    VermaModule::new(Arc::new(PbwOrder::standard(t)), lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(which in 0..CASES.len(), a in word(), b in word(), c in word()) {
        let alg = algebra(which);
        let t = alg.table();
        let (a, b, c) = (alg.word(&fit(t, &a)), alg.word(&fit(t, &b)), alg.word(&fit(t, &c)));
        let left = alg.multiply(&alg.multiply(&a, &b), &c);
        let right = alg.multiply(&a, &alg.multiply(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn generator_supercommutator_is_the_bracket(which in 0..CASES.len(), x in 0usize..1000, y in 0usize..1000) {
        let alg = algebra(which);
        let t = alg.table();
        let (x, y) = (x % t.dim(), y % t.dim());
        let lhs = alg.supercommutator(&alg.generator(x), &alg.generator(y));
        prop_assert_eq!(lhs, alg.lie(t.bracket(x, y)));
    }

    #[test]
    fn action_is_a_module_action(
        which in 0..CASES.len(),
        coords in prop::collection::vec(-3i64..=3, 8),
        x in word(), y in word(), body in neg_word(),
    ) {
        let m = module(which, &coords);
        let t = m.order().table.clone();
        let v = m.vector(m.algebra.word(&fit_neg(&t, &body))).unwrap();
        let (x, y) = (m.algebra.word(&fit(&t, &x)), m.algebra.word(&fit(&t, &y)));
        let nested = m.act(&x, &m.act(&y, &v));
        let product = m.act(&m.algebra.multiply(&x, &y), &v);
        prop_assert_eq!(nested.body, product.body);
    }

    #[test]
    fn action_matches_straightening(
        which in 0..CASES.len(),
        coords in prop::collection::vec(-3i64..=3, 8),
        x in word(), body in neg_word(),
    ) {
        let m = module(which, &coords);
        let t = m.order().table.clone();
        let v = m.vector(m.algebra.word(&fit_neg(&t, &body))).unwrap();
        let x = m.algebra.word(&fit(&t, &x));
        prop_assert_eq!(m.act(&x, &v).body, m.act_by_straightening(&x, &v).body);
    }

    #[test]
    fn basis_action_shifts_weight(
        which in 0..CASES.len(),
        coords in prop::collection::vec(-3i64..=3, 8),
        x in 0usize..1000, body in neg_word(),
    ) {
        let m = module(which, &coords);
        let t = m.order().table.clone();
        let x = x % t.dim();
        let v = m.vector(m.algebra.word(&fit_neg(&t, &body))).unwrap();
        let w = m.act_basis(x, &v);
        if !w.is_zero() {
            let expected = &m.weight_of(&v).unwrap() + &t.weight(x);
            prop_assert_eq!(m.weight_of(&w).unwrap(), expected);
        }
    }

    #[test]
    fn right_divide_undoes_power(which in 0..CASES.len(), g in 0usize..1000, p in 1u32..=3, body in neg_word()) {
        let t = tables()[which].clone();
        let even: Vec<usize> = (0..t.num_positive()).map(|i| t.neg(i)).filter(|&x| !t.is_odd(x)).collect();
        let g = even[g % even.len()];
        let order = Arc::new(PbwOrder::with_rightmost(t.clone(), g).unwrap());
        let alg = PbwAlgebra::new(order);
        let x = alg.word(&fit_neg(&t, &body));
        let xp = alg.multiply(&x, &alg.power(g, p));
        prop_assert_eq!(alg.right_divide(&xp, g, p).unwrap(), x);
    }
}

#[test]
fn right_divide_rejects_odd_generators() {
    let t = tables()[2].clone();
    let g = (0..t.num_positive()).map(|i| t.neg(i)).find(|&x| t.is_odd(x)).unwrap();
    let alg = PbwAlgebra::new(Arc::new(PbwOrder::with_rightmost(t, g).unwrap()));
    assert!(alg.right_divide(&alg.generator(g), g, 1).is_err());
}

fn case_module(s: &str, n_value: u32, seed: u64) -> (VermaModule<Q>, CaseParams<Q>) {
    let alg = Arc::new(AlgebraData::build(s.parse::<CaseId>().unwrap()).unwrap());
    let lambda = singular::default_lambda(&alg, n_value, seed).unwrap();
    let params = CaseParams::new(&alg, n_value, lambda.clone()).unwrap();
    let t = Arc::new(BracketTable::build(alg).unwrap());
    (VermaModule::new(Arc::new(PbwOrder::standard(t)), lambda), params)
}

#[test]
fn di_power_alone_is_killed_by_its_raising_partner() {
    for (s, n) in [("D-I:m=1,n=2", 2u32), ("D-I:m=2,n=2", 2), ("D-I:m=1,n=3", 3)] {
        for big_n in 1..=2 {
            let (m, p) = case_module(s, big_n, 5);
            let t = m.order().table.clone();
            let mm = &s[s.find("m=").unwrap() + 2..][..1];
            let f = t.root_vector_by_name(&format!("-2δ{mm}")).unwrap();
            let e = t.root_vector_by_name(&format!("2δ{mm}")).unwrap();
            let v = m.vector(m.algebra.power(f, big_n + n)).unwrap();
            assert!(m.act_basis(e, &v).is_zero(), "{s} N={big_n}");
            // one power fewer is not
            let w = m.vector(m.algebra.power(f, big_n + n - 1)).unwrap();
            assert!(!m.act_basis(e, &w).is_zero(), "{s} N={big_n}");
            assert_eq!(p.n_value, big_n);
        }
    }
}

#[test]
fn dropping_a_factor_breaks_singularity() {
    for s in ["B-I:m=1,n=1", "B-II:m=1,n=1", "D-I:m=1,n=2", "D-II:m=1,n=2", "G3"] {
        let (m, p) = case_module(s, 1, 0);
        let shape = singular::candidate_shape(p.case, 1).unwrap();
        let t = m.order().table.clone();
        let factors: Vec<usize> = shape.factors.iter().map(|f| t.root_vector_by_name(f).unwrap()).collect();
        let start = m.algebra.power(t.root_vector_by_name(&shape.power_root).unwrap(), shape.power);
        assert!(m.is_singular(&singular::apply_factors(&m, &factors, start.clone())).singular(), "{s}");
        let short = singular::apply_factors(&m, &factors[1..], start);
        assert!(short.is_zero() || !m.is_singular(&short).singular(), "{s}");
    }
}

#[test]
fn reversed_factor_order_is_proportional() {
    for s in ["D-I:m=1,n=2", "G3", "B-II:m=2,n=1"] {
        let (m, p) = case_module(s, 1, 2);
        let u = singular::candidate_u(&m, &p).unwrap();
        let k = singular::candidate_shape(p.case, 1).unwrap().factors.len();
        let rev: Vec<usize> = (0..k).rev().collect();
        let r = singular::permuted_u(&m, &p, &rev).unwrap();
        let c = singular::proportionality(&r.body, &u.body).expect("proportional");
        assert!(c == Q::from_int(1) || c == Q::from_int(-1), "{s}: {}", c.render());
    }
}

#[test]
fn weight_of_candidate_is_lambda_minus_gamma_multiple() {
    let (m, p) = case_module("B-I:m=1,n=1", 3, 1);
    let u = singular::candidate_u(&m, &p).unwrap();
    let e: UeaElement<Q> = u.body.clone();
    let w = e.weight(m.order()).unwrap().unwrap();
    // N+2n copies of -δ1 plus the factors δ1±ε1 (sum 2δ1): net -(N)δ1
    let expected = Weight::from_ints(&[-3, 0]);
    assert_eq!(w, expected);
}
