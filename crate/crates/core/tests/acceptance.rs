//! Acceptance criteria 1–8. Each test prints one `criterion k: PASS|FAIL` line.

use std::io::Write;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use superverma::pbw::{PbwAlgebra, PbwOrder, UeaElement};
use superverma::report::{self, Check, TableCache, VerifyRequest};
use superverma::root_data::{AlgebraData, CaseId, Family, RootParity};
use superverma::singular::{self, CaseParams};
use superverma::superalgebra::{self, BracketTable};
use superverma::verma::VermaModule;
use superverma::{Error, Scalar, Q};

fn case(s: &str) -> CaseId {
    s.parse().unwrap()
}

fn table(c: CaseId) -> Arc<BracketTable<Q>> {
    Arc::new(BracketTable::build(Arc::new(AlgebraData::build(c).unwrap())).unwrap())
}

fn verdict(k: u32, failures: &[String], summary: &str) {
    // straight to the handle so libtest's capture doesn't swallow it
    let line = if failures.is_empty() {
        format!("criterion {k}: PASS ({summary})")
    } else {
        format!("criterion {k}: FAIL ({} failures; first: {})", failures.len(), failures[0])
    };
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    assert!(failures.is_empty(), "criterion {k}: {failures:#?}");
}

fn rank_grid(family: Family, ms: &[usize], ns: &[usize]) -> Vec<CaseId> {
    ms.iter().flat_map(|&m| ns.iter().map(move |&n| CaseId::new(family, m, n).unwrap())).collect()
}

fn theorem_grid() -> Vec<(CaseId, Vec<u32>)> {
    let mut g = Vec::new();
    for c in rank_grid(Family::BI, &[1, 2], &[1, 2]) {
        g.push((c, vec![1, 3]));
    }
    for c in rank_grid(Family::BII, &[1, 2], &[1, 2]) {
        g.push((c, vec![1, 2, 3]));
    }
    for c in rank_grid(Family::DI, &[1, 2], &[2, 3]) {
        g.push((c, vec![1, 2]));
    }
    for c in rank_grid(Family::DII, &[1, 2], &[2, 3]) {
        g.push((c, vec![1, 2]));
    }
    g.push((CaseId::f31(), vec![1, 2, 3]));
    g.push((CaseId::g3(), vec![1, 3]));
    g
}

#[test]
fn criterion_1_singularity_grid() {
    let mut reqs = Vec::new();
    for (c, ns) in theorem_grid() {
        for n_value in ns {
            for seed in 0..3 {
                reqs.push(VerifyRequest {
                    case: c,
                    n_value,
                    lambda: None,
                    seed,
                    checks: vec![Check::Singular],
                    timing: false,
                });
            }
        }
    }
    let results = report::verify_grid(&reqs);
    let mut failures = Vec::new();
    for (req, r) in reqs.iter().zip(&results) {
        match r {
            Ok(r) if r.passed() && r.residuals.iter().all(|x| x.terms == 0) => {}
            Ok(r) => failures.push(r.to_text()),
            Err(e) => failures.push(format!("{} N={}: {e}", req.case, req.n_value)),
        }
    }
    verdict(1, &failures, &format!("{} grid points, u ≠ 0, weight λ−ρ−Nγ, all simple e_α u = 0", reqs.len()));
}

#[test]
fn criterion_2_nonzero_witnesses() {
    let mut failures = Vec::new();
    let mut count = 0;
    for (c, n_value) in [(CaseId::f31(), 1), (CaseId::g3(), 1), (CaseId::g3(), 3)] {
        let t = table(c);
        let order = Arc::new(singular::printed_order(t.clone()).unwrap());
        let lambda = singular::default_lambda(&t.algebra, n_value, 0).unwrap();
        let module = VermaModule::new(order, lambda.clone());
        let params = CaseParams::new(&t.algebra, n_value, lambda).unwrap();
        for w in singular::witness_checks(&module, &params).unwrap() {
            count += 1;
            if w.coefficient.is_zero() {
                failures.push(format!("{c} N={n_value}: {} ({}) has coefficient 0", w.label, w.monomial));
            }
        }
    }
    verdict(2, &failures, &format!("{count} witness coefficients nonzero"));
}

#[test]
fn criterion_3_reorder_sign() {
    let smallest = [
        case("B-I:m=1,n=1"),
        case("B-II:m=1,n=1"),
        case("D-I:m=1,n=2"),
        case("D-II:m=1,n=2"),
        CaseId::f31(),
        CaseId::g3(),
    ];
    let failures: Vec<String> = smallest
        .par_iter()
        .flat_map_iter(|&c| {
            let t = table(c);
            let lambda = singular::default_lambda(&t.algebra, 1, 0).unwrap();
            let module = VermaModule::new(Arc::new(PbwOrder::standard(t.clone())), lambda.clone());
            let params = CaseParams::new(&t.algebra, 1, lambda).unwrap();
            let u = singular::candidate_u(&module, &params).unwrap();
            let k = singular::candidate_shape(c, 1).unwrap().factors.len();
            let mut rng = singular::seeded_rng(31);
            let mut out = Vec::new();
            for _ in 0..20 {
                let perm = singular::random_permutation(k, &mut rng);
                let pu = singular::permuted_u(&module, &params, &perm).unwrap();
                let ok = pu.body == u.body || pu.body == u.body.scale(&-Q::one());
                if !ok {
                    out.push(format!("{c}: permutation {perm:?} is not ±u"));
                }
            }
            out
        })
        .collect();
    verdict(3, &failures, "20 permutations in each of 6 cases give ±u");
}

#[test]
fn criterion_4_orbit_chains() {
    let runs: Vec<(CaseId, u32, Vec<usize>, Vec<&str>)> = vec![
        (case("D-I:m=3,n=2"), 1, vec![1], vec!["2δ3", "2δ2", "2δ1"]),
        (case("D-I:m=3,n=2"), 2, vec![1], vec!["2δ3", "2δ2", "2δ1"]),
        (case("B-I:m=3,n=1"), 1, vec![1], vec!["δ3", "δ2", "δ1"]),
        (case("B-I:m=3,n=1"), 3, vec![1], vec!["δ3", "δ2", "δ1"]),
        (case("B-II:m=1,n=3"), 1, vec![1], vec!["ε3", "ε2", "ε1"]),
        (case("B-II:m=1,n=3"), 2, vec![1], vec!["ε3", "ε2", "ε1"]),
        (case("D-II:m=1,n=3"), 1, vec![1, 2], vec!["ε2+ε3", "ε1+ε3", "ε1+ε2"]),
        (case("D-II:m=1,n=3"), 2, vec![1, 2], vec!["ε2+ε3", "ε1+ε3", "ε1+ε2"]),
    ];
    let failures: Vec<String> = runs
        .par_iter()
        .flat_map_iter(|(c, cc, target, roots)| {
            let mut out = Vec::new();
            for p in [1, 2] {
                match report::run_orbit(*c, *cc, p, target, 0, false) {
                    Ok(r) => {
                        let mut chain = vec![r.start_root.clone()];
                        chain.extend(r.steps.iter().map(|s| s.to.clone()));
                        if chain != *roots {
                            out.push(format!("{c} C={cc}: chain {chain:?}"));
                        }
                        if !r.passed {
                            out.push(r.to_text());
                        }
                    }
                    Err(e) => out.push(format!("{c} C={cc} p={p}: {e}")),
                }
            }
            out
        })
        .collect();
    verdict(4, &failures, "every step singular in M(μ) and M(ν), exact right-division round trip");
}

#[test]
fn criterion_5_identities() {
    let mut failures = Vec::new();

    // e f^{2k+1} v⁺ = 2a(½⟨λ−ρ,h⟩ − k) f^{2k} v⁺, a from [e, f] = a h
    let t = table(case("B-I:m=2,n=1"));
    let alg = t.algebra.clone();
    let d = alg.parse_weight("δ2").unwrap();
    let e = t.root_vector(&d).unwrap();
    let f = t.root_vector(&-&d).unwrap();
    let a = t.bracket(e, f).ratio_to(&t.coroot(&d).unwrap()).unwrap();
    let lambda = alg.parse_weight("1/3δ1+5/7δ2-2ε1").unwrap();
    let module = VermaModule::new(Arc::new(PbwOrder::standard(t.clone())), lambda.clone());
    let big = alg.coroot_pairing(&(&lambda - &alg.rho), &d).unwrap();
    for k in 0..=4u32 {
        let v = module.vector(module.algebra.power(f, 2 * k + 1)).unwrap();
        let lhs = module.act_basis(e, &v).body;
        let c = Q::from_int(2) * a.clone() * (big.clone() / Q::from_int(2) - Q::from_int(k as i64));
        if lhs != module.algebra.power(f, 2 * k).scale(&c) {
            failures.push(format!("osp(1|2) identity fails at k={k}"));
        }
    }

    // e_κ f_κ^l θ v⁺ = l(p+2C−l) f_κ^{l−1} θ v⁺ with θ v⁺ singular of h_κ-weight p−1+2C
    let t = table(case("D-I:m=2,n=2"));
    let alg = t.algebra.clone();
    let beta = alg.parse_weight("2δ2").unwrap();
    let kappa = alg.parse_weight("δ1-δ2").unwrap();
    let ek = t.root_vector(&kappa).unwrap();
    let fk = t.root_vector(&-&kappa).unwrap();
    let order = Arc::new(PbwOrder::standard(t.clone()));
    let mut sl2_cases = 0;
    for cc in 1..=3u32 {
        for p in 1..=(8 - 2 * cc) {
            let mu = singular::orbit_start_weight(&alg, &beta, std::slice::from_ref(&kappa), cc, p, 11).unwrap();
            let module = VermaModule::new(order.clone(), mu.clone());
            let params = CaseParams::new(&alg, cc, mu).unwrap();
            let mut prev = singular::candidate_u(&module, &params).unwrap();
            for l in 1..=(p + 2 * cc) {
                let cur = module.act_basis(fk, &prev);
                let lhs = module.act_basis(ek, &cur);
                let coeff = Q::from_int((l * (p + 2 * cc - l)) as i64);
                if lhs.body != prev.body.scale(&coeff) {
                    failures.push(format!("sl2 identity fails at C={cc} p={p} l={l}"));
                }
                prev = cur;
            }
            sl2_cases += 1;
        }
    }

    // f_δ² = c f_{2δ}, c ≠ 0
    for (c, r) in [("B-I:m=1,n=2", "δ1"), ("B-II:m=2,n=1", "δ2"), ("G3", "δ")] {
        let t = table(case(c));
        let d = t.algebra.parse_weight(r).unwrap();
        let algebra = PbwAlgebra::new(Arc::new(PbwOrder::standard(t.clone())));
        let f = t.root_vector(&-&d).unwrap();
        let f2 = t.root_vector(&-&d.scale_int(2)).unwrap();
        let sq = algebra.multiply(&algebra.generator(f), &algebra.generator(f));
        let ok = sq.len() == 1 && report_ratio(&sq, &algebra.generator(f2)).is_some_and(|k| !k.is_zero());
        if !ok {
            failures.push(format!("{c}: f_{r}² = {}", sq.render(&algebra.order)));
        }
    }

    // f^l θ = Σ_i C(l,i) (ad f)^i θ · f^{l−i}
    let algebra = PbwAlgebra::new(order.clone());
    let mut rng = singular::seeded_rng(5);
    for trial in 0..6 {
        let theta = random_element(&algebra, &mut rng, 3, 3, true);
        for l in 0..=6u32 {
            let lhs = algebra.multiply(&algebra.power(fk, l), &theta);
            let mut rhs = UeaElement::zero();
            let mut ad = theta.clone();
            let mut binom = 1i64;
            for i in 0..=l {
                rhs.add_scaled(&algebra.multiply(&ad, &algebra.power(fk, l - i)), &Q::from_int(binom));
                ad = algebra.ad(fk, &ad);
                binom = binom * (l - i) as i64 / (i + 1) as i64;
            }
            if lhs != rhs {
                failures.push(format!("binomial expansion fails, trial {trial}, l={l}"));
            }
        }
    }
    verdict(5, &failures, &format!("osp(1|2) k≤4, sl2 in {sl2_cases} (C,p) configurations, f_δ², binomial l≤6"));
}

fn report_ratio(a: &UeaElement<Q>, b: &UeaElement<Q>) -> Option<Q> {
    singular::proportionality(a, b)
}

/// Sum of up to `terms` words of length ≤ `len` with small rational
/// coefficients; negative generators only if `negative`.
fn random_element(
    algebra: &PbwAlgebra<Q>,
    rng: &mut rand_chacha::ChaCha8Rng,
    terms: usize,
    len: usize,
    negative: bool,
) -> UeaElement<Q> {
    let t = algebra.table();
    let pool: Vec<usize> = if negative { (0..t.num_positive()).map(|i| t.neg(i)).collect() } else { (0..t.dim()).collect() };
    let mut out = UeaElement::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let l = rng.gen_range(0..=len);
        let w: Vec<usize> = (0..l).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        let c = Q::from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        out.add_scaled(&algebra.word(&w), &c);
    }
    out
}

fn structure_cases() -> Vec<CaseId> {
    let mut cs: Vec<CaseId> = theorem_grid().into_iter().map(|(c, _)| c).collect();
    for s in ["D-I:m=3,n=2", "B-I:m=3,n=1", "B-II:m=1,n=3", "D-II:m=1,n=3"] {
        cs.push(case(s));
    }
    cs
}

#[test]
fn criterion_6_structure_integrity() {
    let cases = structure_cases();
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|&c| {
            let t = table(c);
            let alg = &t.algebra;
            let mut out = Vec::new();
            let rep = superalgebra::check_jacobi(&t);
            if !rep.passed() {
                out.push(format!("{c}: {rep}"));
            }
            for s in &alg.simple_system {
                match s.parity {
                    RootParity::Even => {
                        if alg.coroot_pairing(&alg.rho, &s.weight).unwrap() != Q::one() {
                            out.push(format!("{c}: ⟨ρ, h⟩ ≠ 1 for {}", alg.render_weight(&s.weight)));
                        }
                    }
                    RootParity::OddIsotropic => {
                        if !alg.bilinear_form(&alg.rho, &s.weight).is_zero() {
                            out.push(format!("{c}: (ρ, α) ≠ 0 for {}", alg.render_weight(&s.weight)));
                        }
                    }
                    RootParity::OddNonIsotropic => {}
                }
            }
            if alg.rho_from_roots() != alg.rho_closed_form() {
                out.push(format!("{c}: ρ routes disagree"));
            }
            if c.family == Family::BII && superalgebra::printed_osp_rescaling(&t).unwrap().is_none() {
                out.push(format!("{c}: no diagonal rescaling matches the nine printed relations"));
            }
            out
        })
        .collect();
    let dims: Vec<String> = [CaseId::g3(), CaseId::f31()].iter().map(|&c| format!("{c} dim {}", table(c).dim())).collect();
    verdict(6, &failures, &format!("{} algebras exhaustive, {}", cases.len(), dims.join(", ")));
}

#[test]
fn criterion_7_engine_properties() {
    let cases = [
        case("B-I:m=1,n=1"),
        case("B-II:m=1,n=1"),
        case("D-I:m=1,n=2"),
        case("D-II:m=1,n=2"),
        CaseId::f31(),
        CaseId::g3(),
    ];
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|&c| {
            let t = table(c);
            let order = Arc::new(PbwOrder::standard(t.clone()));
            let algebra = PbwAlgebra::new(order.clone());
            let mut rng = singular::seeded_rng(7);
            let mut out = Vec::new();
            for i in 0..200 {
                let a = random_element(&algebra, &mut rng, 2, 2, false);
                let b = random_element(&algebra, &mut rng, 2, 2, false);
                let cc = random_element(&algebra, &mut rng, 2, 2, false);
                if algebra.normalize(&a) != a {
                    out.push(format!("{c}: normal form not idempotent (triple {i})"));
                }
                let l = algebra.multiply(&algebra.multiply(&a, &b), &cc);
                let r = algebra.multiply(&a, &algebra.multiply(&b, &cc));
                if l != r {
                    out.push(format!("{c}: associativity fails on triple {i}"));
                }
            }
            for i in 0..100 {
                let w1: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..t.dim())).collect();
                let w2: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..t.dim())).collect();
                let (a, b) = (algebra.word(&w1), algebra.word(&w2));
                let ab = algebra.multiply(&a, &b);
                let wa = a.weight(&order).unwrap();
                let wb = b.weight(&order).unwrap();
                let wab = ab.weight(&order).unwrap();
                if let (Some(x), Some(y), Some(z)) = (wa, wb, wab) {
                    if &x + &y != z {
                        out.push(format!("{c}: weight not additive ({i})"));
                    }
                }
            }
            let evens: Vec<usize> = (0..t.num_positive()).map(|i| t.neg(i)).filter(|&x| !t.is_odd(x)).collect();
            for i in 0..100 {
                let g = evens[rng.gen_range(0..evens.len())];
                let ord = Arc::new(PbwOrder::with_rightmost(t.clone(), g).unwrap());
                let alg_g = PbwAlgebra::new(ord);
                let theta = random_element(&alg_g, &mut rng, 5, 3, true);
                let p = rng.gen_range(0..=3);
                let x = alg_g.multiply(&theta, &alg_g.power(g, p));
                match alg_g.right_divide(&x, g, p) {
                    Ok(back) if back == theta => {}
                    Ok(_) => out.push(format!("{c}: right division round trip fails ({i})")),
                    Err(e) => out.push(format!("{c}: right division error {e} ({i})")),
                }
            }
            out
        })
        .collect();
    verdict(7, &failures, "idempotence + 200 associativity triples, weight additivity, 100 right-division round trips per case");
}

#[test]
fn criterion_8_negative_controls() {
    let mut failures = Vec::new();
    let tables = TableCache::default();
    for (c, n_value) in [(case("B-I:m=1,n=1"), 2), (case("B-I:m=2,n=2"), 4), (CaseId::g3(), 2)] {
        let req = VerifyRequest { case: c, n_value, lambda: None, seed: 0, checks: vec![Check::All], timing: false };
        match report::verify_point(&req, &tables) {
            Err(Error::ParityViolation(_)) => {}
            other => failures.push(format!("{c} N={n_value}: expected ParityViolation, got {other:?}")),
        }
    }
    for c in [case("B-I:m=1,n=1"), case("D-II:m=1,n=2"), CaseId::g3()] {
        let t = table(c);
        let alg = &t.algebra;
        let alpha = alg.simple_system.iter().find(|s| s.parity == RootParity::Even).unwrap().weight.clone();
        let mut lambda = singular::default_lambda(alg, 1, 3).unwrap();
        lambda = &lambda + &alpha.scale(&Q::from_frac(1, 3));
        let pairing = alg.coroot_pairing(&lambda, &alpha).unwrap();
        assert!(pairing.to_int().is_none());
        let module = VermaModule::new(Arc::new(PbwOrder::standard(t.clone())), lambda);
        let v = module.vector(module.algebra.generator(t.root_vector(&-&alpha).unwrap())).unwrap();
        let cert = module.is_singular(&v);
        if cert.singular() || cert.residuals.iter().all(|(_, n)| *n == 0) {
            failures.push(format!("{c}: f_α v⁺ reported singular"));
        }
    }
    verdict(8, &failures, "even N rejected for B-I and G3; f_α v⁺ with non-integral ⟨λ,h_α⟩ has a nonzero residual");
}
