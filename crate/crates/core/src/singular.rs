//! Candidate singular vectors, the nonzero witnesses, and propagation of
//! Shapovalov elements along `W′`-orbits.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pbw::{Monomial, PbwAlgebra, PbwOrder, UeaElement};
use crate::root_data::{AlgebraData, CaseId, Family, Weight};
use crate::scalar::Scalar;
use crate::superalgebra::BracketTable;
use crate::verma::{SingularityCertificate, VermaModule, VermaVector};

/// The odd factors (printed left to right) and the power `f_γ^K` of the
/// candidate `u` for a given `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateShape {
    pub factors: Vec<String>,
    pub power_root: String,
    pub power: u32,
}

/// Rejects even `N` where `γ` is odd non-isotropic.
pub fn check_parity(case: CaseId, n_value: u32) -> Result<()> {
    if n_value == 0 {
        return Err(Error::InvalidParams("N must be a positive integer".into()));
    }
    if matches!(case.family, Family::BI | Family::G3) && n_value.is_multiple_of(2) {
        return Err(Error::ParityViolation(format!(
            "{case}: γ is odd non-isotropic, so N = 2M+1 must be odd (got N={n_value})"
        )));
    }
    Ok(())
}

pub fn candidate_shape(case: CaseId, n_value: u32) -> Result<CandidateShape> {
    check_parity(case, n_value)?;
    let (m, n) = (case.m, case.n);
    let pair = |a: String, b: String| vec![a, b];
    let (factors, power_root, extra): (Vec<String>, String, u32) = match case.family {
        Family::BI => (
            (1..=n).flat_map(|i| pair(format!("δ{m}-ε{i}"), format!("δ{m}+ε{i}"))).collect(),
            format!("-δ{m}"),
            2 * n as u32,
        ),
        Family::BII => (
            (1..=m).flat_map(|i| pair(format!("ε{n}-δ{i}"), format!("ε{n}+δ{i}"))).collect(),
            format!("-ε{n}"),
            2 * m as u32,
        ),
        Family::DI => (
            (1..=n).flat_map(|i| pair(format!("δ{m}-ε{i}"), format!("δ{m}+ε{i}"))).collect(),
            format!("-2δ{m}"),
            n as u32,
        ),
        Family::DII => {
            let k = n - 1;
            let mut f: Vec<String> =
                (1..=m).flat_map(|i| pair(format!("ε{n}-δ{i}"), format!("ε{n}+δ{i}"))).collect();
            f.extend((1..=m).flat_map(|i| pair(format!("ε{k}-δ{i}"), format!("ε{k}+δ{i}"))));
            (f, format!("-ε{k}-ε{n}"), 2 * m as u32)
        }
        Family::F31 => (
            ["+---", "+--+", "+-+-", "+-++", "++--", "++-+", "+++-", "++++"].map(String::from).to_vec(),
            "-δ".into(),
            4,
        ),
        Family::G3 => (
            ["δ-ε1", "δ+ε1", "δ-ε2", "δ+ε2", "δ-ε3", "δ+ε3"].map(String::from).to_vec(),
            "-δ".into(),
            6,
        ),
    };
    Ok(CandidateShape { factors, power_root, power: n_value + extra })
}

/// `(case, N, λ)` with `⟨λ, h_γ⟩ = N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseParams<S> {
    pub case: CaseId,
    pub n_value: u32,
    pub lambda: Weight<S>,
}

impl<S: Scalar> CaseParams<S> {
    pub fn new(alg: &AlgebraData<S>, n_value: u32, lambda: Weight<S>) -> Result<Self> {
        check_parity(alg.case, n_value)?;
        if lambda.len() != alg.rank() {
            return Err(Error::InvalidParams(format!("λ needs {} coordinates", alg.rank())));
        }
        let pairing = alg.coroot_pairing(&lambda, &alg.gamma.weight)?;
        if pairing != S::from_int(n_value as i64) {
            return Err(Error::InvalidParams(format!(
                "⟨λ, h_γ⟩ = {} but N = {n_value}",
                pairing.render()
            )));
        }
        Ok(CaseParams { case: alg.case, n_value, lambda })
    }

    /// `M` with `N = 2M + 1`, where the case uses it.
    pub fn m_value(&self) -> Option<u32> {
        matches!(self.case.family, Family::BI | Family::G3).then(|| (self.n_value - 1) / 2)
    }
}

fn random_ints(len: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-3..=3)).collect()
}

/// Seeded weight with `⟨λ, h_γ⟩ = N`: integer coordinates in `[−3, 3]`, then
/// one coordinate adjusted.
pub fn default_lambda<S: Scalar>(alg: &AlgebraData<S>, n_value: u32, seed: u64) -> Result<Weight<S>> {
    check_parity(alg.case, n_value)?;
    let base = Weight::from_ints(&random_ints(alg.rank(), seed));
    constrain(alg, base, &[(alg.gamma.weight.clone(), S::from_int(n_value as i64))])
}

/// Moves `base` within the span of the constraint roots so that
/// `⟨λ, h_{β_i}⟩ = b_i` for every constraint.
fn constrain<S: Scalar>(alg: &AlgebraData<S>, base: Weight<S>, constraints: &[(Weight<S>, S)]) -> Result<Weight<S>> {
    let gram: Vec<Vec<S>> = constraints
        .iter()
        .map(|(bi, _)| constraints.iter().map(|(bj, _)| alg.coroot_pairing(bj, bi)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let rhs: Vec<S> = constraints
        .iter()
        .map(|(bi, v)| Ok(v.clone() - alg.coroot_pairing(&base, bi)?))
        .collect::<Result<_>>()?;
    let x = linalg::solve(&gram, &rhs)
        .ok_or_else(|| Error::InvalidParams("weight constraints are dependent".into()))?;
    let mut out = base;
    for ((bj, _), xj) in constraints.iter().zip(x) {
        out = &out + &bj.scale(&xj);
    }
    Ok(out)
}

fn root_vectors<S: Scalar>(table: &BracketTable<S>, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|s| table.root_vector_by_name(s)).collect()
}

/// Applies `factors` (left to right) to `start · v⁺`.
pub fn apply_factors<S: Scalar>(module: &VermaModule<S>, factors: &[usize], start: UeaElement<S>) -> VermaVector<S> {
    let mut v = module.vector(start).expect("start lies in U(n⁻)");
    for &x in factors.iter().rev() {
        v = module.act_basis(x, &v);
    }
    v
}

/// The candidate `u` for `params` in `module` (whose λ must match).
pub fn candidate_u<S: Scalar>(module: &VermaModule<S>, params: &CaseParams<S>) -> Result<VermaVector<S>> {
    let n_odd = candidate_shape(params.case, params.n_value)?.factors.len();
    permuted_u(module, params, &(0..n_odd).collect::<Vec<_>>())
}

/// `u` with the odd factors reordered: factor `i` of the result is printed
/// factor `perm[i]`.
pub fn permuted_u<S: Scalar>(module: &VermaModule<S>, params: &CaseParams<S>, perm: &[usize]) -> Result<VermaVector<S>> {
    if module.lambda != params.lambda {
        return Err(Error::InvalidParams("module highest weight differs from λ".into()));
    }
    let shape = candidate_shape(params.case, params.n_value)?;
    let table = &module.order().table;
    let factors = root_vectors(table, &shape.factors)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..factors.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidParams(format!("not a permutation of {} factors", factors.len())));
    }
    let permuted: Vec<usize> = perm.iter().map(|&i| factors[i]).collect();
    let f = table.root_vector_by_name(&shape.power_root)?;
    let start = module.algebra.power(f, shape.power);
    Ok(apply_factors(module, &permuted, start))
}

/// `k` with `a = k·b`, if any.
pub fn proportionality<S: Scalar>(a: &UeaElement<S>, b: &UeaElement<S>) -> Option<S> {
    let (m, c) = b.terms.iter().next()?;
    let k = a.coeff(m) / c.clone();
    (b.scale(&k) == *a).then_some(k)
}

/// Seeded random permutation of `0..len`.
pub fn random_permutation(len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ----- nonzero witnesses -----

fn printed_sequence(case: CaseId) -> Option<Vec<&'static str>> {
    match case.family {
        Family::F31 => Some(vec![
            "-ε3", "-ε2", "-ε1", "-ε2-ε3", "-ε2+ε3", "-ε1-ε3", "-ε1+ε3", "-ε1-ε2", "-ε1+ε2", "-+++", "-++-",
            "-+-+", "-+--", "--++", "--+-", "---+", "----", "-δ",
        ]),
        Family::G3 => Some(vec![
            "ε3", "-ε2", "-ε1", "ε3-ε2", "ε3-ε1", "ε1-ε2", "-δ+ε3", "-δ-ε3", "-δ+ε2", "-δ-ε2", "-δ+ε1", "-δ-ε1",
            "-δ", "-2δ",
        ]),
        _ => None,
    }
}

/// The PBW order whose negative block is the printed basis of the case.
pub fn printed_order<S: Scalar>(table: Arc<BracketTable<S>>) -> Result<PbwOrder<S>> {
    let seq = printed_sequence(table.algebra.case).ok_or_else(|| {
        Error::InvalidParams(format!("no printed basis order for {}", table.algebra.case))
    })?;
    let gens = seq.iter().map(|s| table.root_vector_by_name(s)).collect::<Result<Vec<_>>>()?;
    PbwOrder::from_negative_sequence(table, &gens)
}

/// The ordered monomial `∏ x_i^{k_i}` (zero exponents skipped). Fails with
/// `WrongOrder` unless the generators are listed in increasing order.
pub fn witness_monomial<S: Scalar>(order: &PbwOrder<S>, parts: &[(String, u32)]) -> Result<Monomial> {
    let mut m = Monomial::one();
    for (name, e) in parts {
        if *e == 0 {
            continue;
        }
        let x = order.table.root_vector_by_name(name)?;
        let r = order.rank(x);
        if order.is_odd_rank(r) && *e > 1 {
            return Err(Error::InvalidParams(format!("odd generator {name} with exponent {e}")));
        }
        if m.last().is_some_and(|(q, _)| q >= r) {
            return Err(Error::WrongOrder(format!("{name} is out of order in the witness")));
        }
        m.0.push((r, *e));
    }
    Ok(m)
}

/// Coefficient of `witness` in `u`.
pub fn coefficient_witness<S: Scalar>(u: &VermaVector<S>, witness: &Monomial) -> S {
    u.body.coeff(witness)
}

/// One nonzero-witness check: a partial product `u_k` and the monomial `v_k`
/// whose coefficient must not vanish.
#[derive(Debug, Clone)]
pub struct WitnessCheck<S> {
    pub label: String,
    pub monomial: String,
    pub coefficient: S,
}

fn mono(items: &[(&str, u32)]) -> Vec<(String, u32)> {
    items.iter().map(|(s, e)| (s.to_string(), *e)).collect()
}

/// The `v_0` witness and the `v_k` chain for F(3|1) and G(3). `module` must
/// use [`printed_order`].
pub fn witness_checks<S: Scalar>(module: &VermaModule<S>, params: &CaseParams<S>) -> Result<Vec<WitnessCheck<S>>> {
    let order = module.order();
    let table = order.table.clone();
    let expected = printed_order(table.clone())?;
    if expected.negative_names() != order.negative_names() {
        return Err(Error::WrongOrder("witnesses need the printed basis order".into()));
    }
    let n = params.n_value;
    let gen = |s: &str| table.root_vector_by_name(s);
    let mut out = Vec::new();
    let mut record = |label: String, u: &VermaVector<S>, w: Vec<(String, u32)>| -> Result<()> {
        let m = witness_monomial(order, &w)?;
        let rendered = m.render(order);
        out.push(WitnessCheck { label, monomial: rendered, coefficient: coefficient_witness(u, &m) });
        Ok(())
    };
    let u = candidate_u(module, params)?;
    match params.case.family {
        Family::F31 => {
            let shape = candidate_shape(params.case, n)?;
            let factors = root_vectors(&table, &shape.factors)?;
            let start = module.algebra.power(gen("-δ")?, n + 4);
            let chain = [
                mono(&[("-ε3", 1), ("ε3-ε2", 1), ("ε2-ε1", 1), ("-+++", 1), ("-+--", 1), ("-δ", n - 1)]),
                mono(&[("ε3-ε2", 1), ("ε2-ε1", 1), ("-+++", 1), ("-++-", 1), ("-+--", 1), ("-δ", n - 1)]),
                mono(&[("ε2-ε1", 1), ("-+++", 1), ("-++-", 1), ("-+-+", 1), ("-+--", 1), ("-δ", n - 1)]),
                mono(&[("-+++", 1), ("-++-", 1), ("-+-+", 1), ("-+--", 1), ("--++", 1), ("-δ", n - 1)]),
                mono(&[("-+++", 1), ("-++-", 1), ("-+-+", 1), ("-+--", 1), ("-δ", n)]),
                mono(&[("-+++", 1), ("-++-", 1), ("-+-+", 1), ("-δ", n + 1)]),
                mono(&[("-+++", 1), ("-++-", 1), ("-δ", n + 2)]),
                mono(&[("-+++", 1), ("-δ", n + 3)]),
                mono(&[("-δ", n + 4)]),
            ];
            for (k, w) in chain.into_iter().enumerate() {
                let uk = if k == 0 { u.clone() } else { apply_factors(module, &factors[k..], start.clone()) };
                record(format!("v{k} in u{k}"), &uk, w)?;
            }
        }
        Family::G3 => {
            let mm = params.m_value().expect("G3 has M");
            let u0_factors = root_vectors(
                &table,
                &["δ+ε1", "δ+ε2", "δ-ε1", "δ-ε2", "δ+ε3", "δ-ε3"].map(String::from),
            )?;
            let f1 = gen("-δ")?;
            let f2 = gen("-2δ")?;
            let mut word = vec![f1];
            word.extend(std::iter::repeat_n(f2, mm as usize + 3));
            let start = module.algebra.word(&word);
            let v0 = mono(&[("-ε1", 2), ("ε1-ε2", 1), ("-δ-ε3", 1), ("-2δ", mm)]);
            record("v0 in u".into(), &u, v0.clone())?;
            let chain = [
                v0,
                mono(&[("-ε1", 2), ("-δ-ε3", 1), ("-δ-ε2", 1), ("-2δ", mm)]),
                mono(&[("-ε1", 1), ("-δ+ε3", 1), ("-δ-ε3", 1), ("-δ-ε2", 1), ("-2δ", mm)]),
                mono(&[("-δ+ε3", 1), ("-δ-ε3", 1), ("-δ-ε2", 1), ("-δ", 1), ("-2δ", mm)]),
                mono(&[("-δ+ε3", 1), ("-δ-ε3", 1), ("-δ", 1), ("-2δ", mm + 1)]),
                mono(&[("-δ-ε3", 1), ("-δ", 1), ("-2δ", mm + 2)]),
                mono(&[("-δ", 1), ("-2δ", mm + 3)]),
            ];
            for (k, w) in chain.into_iter().enumerate() {
                let uk = apply_factors(module, &u0_factors[k..], start.clone());
                record(format!("v{k} in u{k}"), &uk, w)?;
            }
        }
        _ => return Err(Error::InvalidParams(format!("no printed witnesses for {}", params.case))),
    }
    Ok(out)
}

// ----- orbit propagation -----

/// `θ ∈ U(n⁻)` of weight `−Cβ` with `θ v⁺` singular in `M(μ)` when
/// `⟨μ, h_β⟩ = C`.
#[derive(Debug, Clone)]
pub struct ShapovalovElement<S> {
    pub beta: Weight<S>,
    pub c: u32,
    pub theta: UeaElement<S>,
    pub order: Arc<PbwOrder<S>>,
    pub mu: Weight<S>,
}

/// Outcome of one propagation step `β → s_κ β`.
#[derive(Debug, Clone)]
pub struct OrbitStep<S> {
    pub from_root: String,
    pub to_root: String,
    pub kappa: String,
    pub p: u32,
    /// Exponent of `f_κ` multiplied on the left before dividing.
    pub q: u32,
    pub mu: Weight<S>,
    pub nu: Weight<S>,
    pub theta_terms: usize,
    pub round_trip: bool,
    pub weight_ok: bool,
    /// `θ′ f_κ^p v⁺ ∈ M(μ)`.
    pub singular_in_mu: SingularityCertificate,
    /// `θ′ v⁺ ∈ M(ν)`.
    pub singular_in_nu: SingularityCertificate,
}

impl<S: Scalar> OrbitStep<S> {
    pub fn passed(&self) -> bool {
        self.round_trip && self.weight_ok && self.singular_in_mu.singular() && self.singular_in_nu.singular()
    }
}

/// One step: `X = f_κ^q θ` with `q = p − C⟨β, h_κ⟩`, then `θ′ = X / f_κ^p`.
pub fn orbit_propagate<S: Scalar>(
    shap: &ShapovalovElement<S>,
    kappa: &Weight<S>,
    p: u32,
) -> Result<(ShapovalovElement<S>, OrbitStep<S>)> {
    let table = shap.order.table.clone();
    let alg = table.algebra.clone();
    let c = S::from_int(shap.c as i64);
    if alg.coroot_pairing(&shap.mu, kappa)? != S::from_int(p as i64) {
        return Err(Error::InvalidParams(format!("⟨μ, h_κ⟩ ≠ {p}")));
    }
    if alg.coroot_pairing(&shap.mu, &shap.beta)? != c {
        return Err(Error::InvalidParams(format!("⟨μ, h_β⟩ ≠ {}", shap.c)));
    }
    let f_kappa = table
        .root_vector(&-kappa)
        .ok_or_else(|| Error::InvalidParams(format!("{} is not a root", alg.render_weight(kappa))))?;
    if table.is_odd(f_kappa) {
        return Err(Error::ParityViolation(format!("κ = {} is odd", alg.render_weight(kappa))));
    }
    let shift = c.clone() * alg.coroot_pairing(&shap.beta, kappa)?;
    let q = (S::from_int(p as i64) - shift)
        .to_int()
        .filter(|q| *q >= p as i64)
        .ok_or_else(|| Error::InvalidParams("f_κ exponent is not an integer ≥ p".into()))? as u32;

    let order = Arc::new(PbwOrder::with_rightmost(table.clone(), f_kappa)?);
    let algebra = PbwAlgebra::new(order.clone());
    let theta = algebra.reorder(&shap.theta, &shap.order);
    let x = algebra.multiply(&algebra.power(f_kappa, q), &theta);
    let theta2 = algebra.right_divide(&x, f_kappa, p)?;
    let round_trip = algebra.multiply(&theta2, &algebra.power(f_kappa, p)) == x;

    let beta2 = alg.reflect(&shap.beta, kappa)?;
    let nu = alg.reflect(&shap.mu, kappa)?;
    let expected = beta2.scale(&-c.clone());
    let theta_weight = theta2.weight(&order)?;
    let mut weight_ok = theta_weight.as_ref().map_or(shap.c == 0, |w| *w == expected);

    let m_mu = VermaModule::new(order.clone(), shap.mu.clone());
    let in_mu = m_mu.vector(x)?;
    let singular_in_mu = m_mu.is_singular(&in_mu);
    let m_nu = VermaModule::new(order.clone(), nu.clone());
    let in_nu = m_nu.vector(theta2.clone())?;
    let singular_in_nu = m_nu.is_singular(&in_nu);
    // θ′ v⁺ has weight s_{β′} ν − ρ
    if !in_nu.is_zero() {
        let target = &alg.reflect(&nu, &beta2)? - &alg.rho;
        weight_ok &= m_nu.weight_of(&in_nu)? == target;
    }

    let step = OrbitStep {
        from_root: alg.render_weight(&shap.beta),
        to_root: alg.render_weight(&beta2),
        kappa: alg.render_weight(kappa),
        p,
        q,
        mu: shap.mu.clone(),
        nu: nu.clone(),
        theta_terms: theta2.len(),
        round_trip,
        weight_ok,
        singular_in_mu,
        singular_in_nu,
    };
    let next = ShapovalovElement { beta: beta2, c: shap.c, theta: theta2, order, mu: nu };
    Ok((next, step))
}

/// The starting root and the `(root, κ)` sequence from it to `target`.
/// `target` is one index (B-I, B-II, D-I) or an index pair `i < j` (D-II).
#[allow(clippy::type_complexity)]
pub fn orbit_path<S: Scalar>(alg: &AlgebraData<S>, target: &[usize]) -> Result<(Weight<S>, Vec<(Weight<S>, Weight<S>)>)> {
    let case = alg.case;
    let w = |s: String| alg.parse_weight(&s);
    let bad = |msg: String| Err(Error::InvalidParams(msg));
    let start = alg.gamma.weight.clone();
    let mut steps = Vec::new();
    match case.family {
        Family::BI | Family::DI | Family::BII => {
            let (sym, top) = if case.family == Family::BII { ("ε", case.n) } else { ("δ", case.m) };
            let [t] = target else { return bad("target must be a single index".into()) };
            if *t == 0 || *t > top {
                return bad(format!("target index must be in 1..={top}"));
            }
            let two = if case.family == Family::DI { "2" } else { "" };
            for i in ((*t + 1)..=top).rev() {
                let kappa = w(format!("{sym}{}-{sym}{i}", i - 1))?;
                steps.push((w(format!("{two}{sym}{}", i - 1))?, kappa));
            }
        }
        Family::DII => {
            let n = case.n;
            let [ti, tj] = target else { return bad("target must be a pair i,j".into()) };
            if !(1 <= *ti && ti < tj && *tj <= n) {
                return bad(format!("target must satisfy 1 ≤ i < j ≤ {n}"));
            }
            let (mut i, mut j) = (n - 1, n);
            if *ti > i {
                return bad("target is not below the starting root".into());
            }
            while (i, j) != (*ti, *tj) {
                if j > *tj && j - 1 > i {
                    steps.push((w(format!("ε{i}+ε{}", j - 1))?, w(format!("ε{}-ε{j}", j - 1))?));
                    j -= 1;
                } else if i > *ti {
                    steps.push((w(format!("ε{}+ε{j}", i - 1))?, w(format!("ε{}-ε{i}", i - 1))?));
                    i -= 1;
                } else {
                    return bad("target is not reachable from the starting root".into());
                }
            }
        }
        Family::F31 | Family::G3 => {
            return bad(format!("{case}: no orbit propagation (the only orbit is that of γ)"));
        }
    }
    Ok((start, steps))
}

/// Starting weight `μ₁` with `⟨μ₁, h_{β₀}⟩ = C` and `⟨μ_k, h_{κ_k}⟩ = p` at every
/// step, where `μ_{k+1} = s_{κ_k} μ_k`.
pub fn orbit_start_weight<S: Scalar>(
    alg: &AlgebraData<S>,
    beta0: &Weight<S>,
    kappas: &[Weight<S>],
    c: u32,
    p: u32,
    seed: u64,
) -> Result<Weight<S>> {
    let mut constraints = vec![(beta0.clone(), S::from_int(c as i64))];
    for (k, kappa) in kappas.iter().enumerate() {
        // ⟨w μ₁, h_κ⟩ = ⟨μ₁, h_{w⁻¹κ}⟩ with w = s_{κ_{k−1}}⋯s_{κ_1}
        let mut r = kappa.clone();
        for prev in kappas[..k].iter().rev() {
            r = alg.reflect(&r, prev)?;
        }
        constraints.push((r, S::from_int(p as i64)));
    }
    let base = Weight::from_ints(&random_ints(alg.rank(), seed));
    constrain(alg, base, &constraints)
}

/// A full propagation chain.
#[derive(Debug, Clone)]
pub struct OrbitChain<S> {
    pub start_root: String,
    pub mu_start: Weight<S>,
    pub start: SingularityCertificate,
    pub steps: Vec<OrbitStep<S>>,
}

impl<S: Scalar> OrbitChain<S> {
    pub fn passed(&self) -> bool {
        self.start.singular() && self.steps.iter().all(|s| s.passed())
    }
}

/// Runs the chain from the case's `γ` to `target` with constant `C` and
/// `⟨μ_k, h_{κ_k}⟩ = p`. The initial `θ` is the candidate `u` at `N = C`
/// (the identity for `C = 0`).
pub fn orbit_chain<S: Scalar>(table: Arc<BracketTable<S>>, c: u32, p: u32, target: &[usize], seed: u64) -> Result<OrbitChain<S>> {
    let alg = table.algebra.clone();
    if p == 0 {
        return Err(Error::InvalidParams("p must be a positive integer".into()));
    }
    if c > 0 {
        check_parity(alg.case, c)?;
    }
    let (beta0, path) = orbit_path(&alg, target)?;
    let kappas: Vec<Weight<S>> = path.iter().map(|(_, k)| k.clone()).collect();
    let mu = orbit_start_weight(&alg, &beta0, &kappas, c, p, seed)?;
    let order = Arc::new(PbwOrder::standard(table.clone()));
    let module = VermaModule::new(order.clone(), mu.clone());
    let theta = if c == 0 {
        UeaElement::one()
    } else {
        let params = CaseParams::new(&alg, c, mu.clone())?;
        candidate_u(&module, &params)?.body
    };
    let start = module.is_singular(&module.vector(theta.clone())?);
    let mut shap = ShapovalovElement { beta: beta0.clone(), c, theta, order, mu: mu.clone() };
    let mut steps = Vec::new();
    for (expected_root, kappa) in &path {
        let (next, step) = orbit_propagate(&shap, kappa, p)?;
        if next.beta != *expected_root {
            return Err(Error::InvalidParams("orbit path bookkeeping".into()));
        }
        steps.push(step);
        shap = next;
    }
    Ok(OrbitChain { start_root: alg.render_weight(&beta0), mu_start: mu, start, steps })
}
