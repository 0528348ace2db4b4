//! Verification campaigns: one report per grid point, shared by the CLI and
//! the acceptance tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pbw::{PbwAlgebra, PbwOrder, UeaElement};
use crate::root_data::{AlgebraData, CaseId, Family, Weight};
use crate::scalar::Scalar;
use crate::singular::{self, CaseParams, OrbitChain};
use crate::superalgebra::{self, BracketTable};
use crate::verma::{SingularityCertificate, VermaModule};
use crate::Q;

/// Terms shown when an element is rendered into a report.
const RENDER_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Nonzero,
    Singular,
    Reorder,
    Witness,
    All,
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nonzero" => Check::Nonzero,
            "singular" => Check::Singular,
            "lemma31" => Check::Reorder,
            "witness" => Check::Witness,
            "all" => Check::All,
            _ => return Err(Error::Parse(format!("unknown check `{s}`"))),
        })
    }
}

/// Expands `1..3`, `1,3,5`, `2` or mixtures like `1..2,5`.
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad grid value `{t}`")));
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(Error::Parse(format!("empty range `{part}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("empty grid `{s}`")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Shares one bracket table per case across workers.
#[derive(Default)]
pub struct TableCache {
    tables: std::sync::Mutex<BTreeMap<CaseId, Arc<BracketTable<Q>>>>,
}

impl TableCache {
    pub fn get(&self, case: CaseId) -> Result<Arc<BracketTable<Q>>> {
        if let Some(t) = self.tables.lock().unwrap().get(&case) {
            return Ok(t.clone());
        }
        let alg = Arc::new(AlgebraData::build(case)?);
        let t = Arc::new(BracketTable::build(alg)?);
        self.tables.lock().unwrap().insert(case, t.clone());
        Ok(t)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Flags {
    pub nonzero: bool,
    pub weight_ok: bool,
    pub singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma31_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Residual {
    pub root: String,
    pub terms: usize,
}

fn residuals(c: &SingularityCertificate) -> Vec<Residual> {
    c.residuals.iter().map(|(root, terms)| Residual { root: root.clone(), terms: *terms }).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    pub case: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_value: u32,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m_value: Option<u32>,
    pub seed: u64,
    pub lambda: String,
    pub gamma: String,
    pub weight_drop: String,
    pub flags: Flags,
    pub residuals: Vec<Residual>,
    pub u_terms: usize,
    pub pbw_order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WitnessLine {
    pub label: String,
    pub monomial: String,
    pub coefficient: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        let f = &self.flags;
        f.nonzero && f.weight_ok && f.singular && f.lemma31_ok != Some(false) && f.witness_ok != Some(false)
    }

    pub fn to_text(&self) -> String {
        let f = &self.flags;
        let mut s = format!(
            "{} m={} n={} N={} seed={} λ=({}) γ={} drop={} nonzero={} weight_ok={} singular={}",
            self.case, self.m, self.n, self.n_value, self.seed, self.lambda, self.gamma, self.weight_drop, f.nonzero,
            f.weight_ok, f.singular
        );
        if let Some(b) = f.lemma31_ok {
            s.push_str(&format!(" lemma31_ok={b}"));
        }
        if let Some(b) = f.witness_ok {
            s.push_str(&format!(" witness_ok={b}"));
        }
        let res: Vec<String> = self.residuals.iter().map(|r| format!("{}:{}", r.root, r.terms)).collect();
        s.push_str(&format!(" u_terms={} residuals=[{}]", self.u_terms, res.join(",")));
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!(" elapsed_ms={ms}"));
        }
        s.push_str(if self.passed() { " PASS" } else { " FAIL" });
        if let Some(c) = &self.counterexample {
            s.push_str(&format!("\n  counterexample: {c}"));
        }
        s
    }
}

/// Renders at most [`RENDER_TERMS`] terms.
pub fn render_truncated<S: Scalar>(x: &UeaElement<S>, order: &PbwOrder<S>) -> String {
    if x.len() <= RENDER_TERMS {
        return x.render(order);
    }
    let head = UeaElement { terms: x.terms.iter().take(RENDER_TERMS).map(|(m, c)| (m.clone(), c.clone())).collect() };
    format!("{} + … ({} terms)", head.render(order), x.len())
}

#[derive(Debug, Clone)]
pub struct VerifyRequest {
    pub case: CaseId,
    pub n_value: u32,
    /// Explicit λ; otherwise seeded.
    pub lambda: Option<Weight<Q>>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub timing: bool,
}

impl VerifyRequest {
    fn wants(&self, c: Check) -> bool {
        self.checks.contains(&c) || self.checks.contains(&Check::All)
    }
}

/// Permutations sampled for the sign check.
pub const REORDER_SAMPLES: usize = 20;

/// Runs one grid point. `Err` means a usage problem (bad parameters, parity).
pub fn verify_point(req: &VerifyRequest, tables: &TableCache) -> Result<VerificationReport> {
    let start = Instant::now();
    let table = tables.get(req.case)?;
    let alg = table.algebra.clone();
    let lambda = match &req.lambda {
        Some(l) => l.clone(),
        None => singular::default_lambda(&alg, req.n_value, req.seed)?,
    };
    let params = CaseParams::new(&alg, req.n_value, lambda.clone())?;
    let order = Arc::new(PbwOrder::standard(table.clone()));
    let module = VermaModule::new(order.clone(), lambda.clone());
    let u = singular::candidate_u(&module, &params)?;
    let drop = alg.gamma.weight.scale_int(req.n_value as i64);
    let nonzero = !u.is_zero();
    let expected_weight = &(&lambda - &alg.rho) - &drop;
    let weight_ok = module.weight_of(&u).map(|w| w == expected_weight).unwrap_or(false);
    let cert = module.is_singular(&u);
    let singular_ok = cert.singular();
    let mut counterexample = None;
    if !nonzero {
        counterexample = Some("u = 0".to_string());
    } else if !weight_ok {
        counterexample = Some(format!("u = {}", render_truncated(&u.body, &order)));
    } else if !singular_ok {
        let (root, _) = cert.residuals.iter().find(|(_, n)| *n > 0).expect("a residual");
        let e = table.root_vector_by_name(root)?;
        let r = module.act_basis(e, &u);
        counterexample = Some(format!("e_{{{root}}}·u = ({}) v⁺", render_truncated(&r.body, &order)));
    }

    let reorder_ok = if req.wants(Check::Reorder) {
        let k = singular::candidate_shape(req.case, req.n_value)?.factors.len();
        let mut rng = singular::seeded_rng(req.seed ^ 0x5eed_3131);
        let mut ok = true;
        for _ in 0..REORDER_SAMPLES {
            let perm = singular::random_permutation(k, &mut rng);
            let pu = singular::permuted_u(&module, &params, &perm)?;
            let sign = singular::proportionality(&pu.body, &u.body);
            if !matches!(sign, Some(s) if s == Q::from_int(1) || s == Q::from_int(-1)) {
                ok = false;
                if counterexample.is_none() {
                    counterexample = Some(format!("permutation {perm:?} gives {}", render_truncated(&pu.body, &order)));
                }
                break;
            }
        }
        Some(ok)
    } else {
        None
    };

    let mut witnesses = Vec::new();
    let witness_ok = if req.wants(Check::Witness) && matches!(req.case.family, Family::F31 | Family::G3) {
        let porder = Arc::new(singular::printed_order(table.clone())?);
        let pmodule = VermaModule::new(porder, lambda.clone());
        let checks = singular::witness_checks(&pmodule, &params)?;
        let ok = checks.iter().all(|c| !c.coefficient.is_zero());
        witnesses = checks
            .into_iter()
            .map(|c| WitnessLine { label: c.label, monomial: c.monomial, coefficient: c.coefficient.render() })
            .collect();
        Some(ok)
    } else {
        None
    };

    Ok(VerificationReport {
        case: req.case.family.to_string(),
        m: req.case.m,
        n: req.case.n,
        n_value: req.n_value,
        m_value: params.m_value(),
        seed: req.seed,
        lambda: lambda.to_text(),
        gamma: alg.render_weight(&alg.gamma.weight),
        weight_drop: alg.render_weight(&drop),
        flags: Flags { nonzero, weight_ok, singular: singular_ok, lemma31_ok: reorder_ok, witness_ok },
        residuals: residuals(&cert),
        u_terms: u.body.len(),
        pbw_order: order.negative_names(),
        elapsed_ms: req.timing.then(|| start.elapsed().as_millis() as u64),
        witnesses,
        counterexample,
    })
}

/// Runs many grid points on the rayon pool; output order follows the input.
pub fn verify_grid(reqs: &[VerifyRequest]) -> Vec<Result<VerificationReport>> {
    let tables = TableCache::default();
    reqs.par_iter().map(|r| verify_point(r, &tables)).collect()
}

// ----- orbit -----

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OrbitStepLine {
    pub from: String,
    pub to: String,
    pub kappa: String,
    pub p: u32,
    pub q: u32,
    pub mu: String,
    pub nu: String,
    pub theta_terms: usize,
    pub round_trip: bool,
    pub weight_ok: bool,
    pub singular_in_mu: bool,
    pub singular_in_nu: bool,
    pub residuals_mu: Vec<Residual>,
    pub residuals_nu: Vec<Residual>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OrbitReport {
    pub case: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "C")]
    pub c: u32,
    pub p: u32,
    pub target: Vec<usize>,
    pub seed: u64,
    pub start_root: String,
    pub start_singular: bool,
    pub mu: String,
    pub steps: Vec<OrbitStepLine>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl OrbitReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} m={} n={} C={} p={} seed={} μ=({}) start {} singular={}",
            self.case, self.m, self.n, self.c, self.p, self.seed, self.mu, self.start_root, self.start_singular
        );
        for st in &self.steps {
            s.push_str(&format!(
                "\n  {} -> {} via κ={} q={} θ′_terms={} round_trip={} weight_ok={} singular(M(μ))={} singular(M(ν))={}",
                st.from, st.to, st.kappa, st.q, st.theta_terms, st.round_trip, st.weight_ok, st.singular_in_mu,
                st.singular_in_nu
            ));
        }
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("\n  elapsed_ms={ms}"));
        }
        s.push_str(if self.passed { "\n  PASS" } else { "\n  FAIL" });
        s
    }
}

fn orbit_report(case: CaseId, c: u32, p: u32, target: &[usize], seed: u64, chain: &OrbitChain<Q>) -> OrbitReport {
    OrbitReport {
        case: case.family.to_string(),
        m: case.m,
        n: case.n,
        c,
        p,
        target: target.to_vec(),
        seed,
        start_root: chain.start_root.clone(),
        start_singular: chain.start.singular(),
        mu: chain.mu_start.to_text(),
        steps: chain
            .steps
            .iter()
            .map(|s| OrbitStepLine {
                from: s.from_root.clone(),
                to: s.to_root.clone(),
                kappa: s.kappa.clone(),
                p: s.p,
                q: s.q,
                mu: s.mu.to_text(),
                nu: s.nu.to_text(),
                theta_terms: s.theta_terms,
                round_trip: s.round_trip,
                weight_ok: s.weight_ok,
                singular_in_mu: s.singular_in_mu.singular(),
                singular_in_nu: s.singular_in_nu.singular(),
                residuals_mu: residuals(&s.singular_in_mu),
                residuals_nu: residuals(&s.singular_in_nu),
            })
            .collect(),
        passed: chain.passed(),
        elapsed_ms: None,
    }
}

pub fn run_orbit(case: CaseId, c: u32, p: u32, target: &[usize], seed: u64, timing: bool) -> Result<OrbitReport> {
    let start = Instant::now();
    let alg = Arc::new(AlgebraData::build(case)?);
    let table = Arc::new(BracketTable::build(alg)?);
    let chain = singular::orbit_chain(table, c, p, target, seed)?;
    let mut r = orbit_report(case, c, p, target, seed, &chain);
    r.elapsed_ms = timing.then(|| start.elapsed().as_millis() as u64);
    Ok(r)
}

// ----- selftest -----

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SelftestLine {
    pub case: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SelftestLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {} ({})", self.case, self.check, if self.passed { "pass" } else { "FAIL" }, self.detail)
    }
}

/// Smallest admissible case of a family.
pub fn smallest_case(family: Family) -> CaseId {
    CaseId::new(family, family.min_m(), family.min_n()).expect("minimum parameters are valid")
}

/// The invariant suite at the smallest parameters of `case`. With
/// `inject_fault`, one bracket's sign is flipped before the structure check.
pub fn selftest_case(case: CaseId, seed: u64, inject_fault: bool) -> Result<Vec<SelftestLine>> {
    let label = case.to_string();
    let line = |check: &str, passed: bool, detail: String| SelftestLine {
        case: label.clone(),
        check: check.into(),
        passed,
        detail,
    };
    let alg = Arc::new(AlgebraData::<Q>::build(case)?);
    let mut table = BracketTable::build(alg.clone())?;
    if inject_fault {
        let (x, y) = table.first_nonzero_noncartan_pair().expect("nonzero bracket");
        table = table.with_flipped_entry(x, y);
    }
    let mut out = Vec::new();

    let jac = superalgebra::check_jacobi(&table);
    out.push(line("jacobi", jac.passed(), jac.to_string()));
    let table = Arc::new(table);

    let rho_ok = alg.rho_from_roots() == alg.rho_closed_form();
    let even_ok = alg
        .simple_system
        .iter()
        .filter(|s| !s.parity.is_odd())
        .all(|s| alg.coroot_pairing(&alg.rho, &s.weight).ok() == Some(Q::from_int(1)));
    let iso_ok = alg.bilinear_form(&alg.rho, &alg.simple_system[alg.isotropic_simple].weight).is_zero();
    out.push(line(
        "rho",
        rho_ok && even_ok && iso_ok,
        format!("two routes agree={rho_ok}, even simple ⟨ρ,h⟩=1: {even_ok}, isotropic (ρ,α)=0: {iso_ok}"),
    ));

    let order = Arc::new(PbwOrder::standard(table.clone()));
    let algebra = PbwAlgebra::new(order.clone());
    let mut rng = singular::seeded_rng(seed);
    let mut assoc_fail = None;
    const TRIPLES: usize = 30;
    for _ in 0..TRIPLES {
        let mut pick = || {
            let len = rng.gen_range(1..=2);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..table.dim())).collect();
            algebra.word(&w)
        };
        let (a, b, c) = (pick(), pick(), pick());
        let l = algebra.multiply(&algebra.multiply(&a, &b), &c);
        let r = algebra.multiply(&a, &algebra.multiply(&b, &c));
        if l != r && assoc_fail.is_none() {
            assoc_fail = Some(format!(
                "({})({})({}) differs by {}",
                a.render(&order),
                b.render(&order),
                c.render(&order),
                render_truncated(&l.sub(&r), &order)
            ));
        }
    }
    out.push(line(
        "associativity",
        assoc_fail.is_none(),
        assoc_fail.unwrap_or_else(|| format!("{TRIPLES} random triples")),
    ));

    // sl2: f^k v⁺ is singular when ⟨λ, h_α⟩ = k for an even simple α
    let base = singular::default_lambda(&alg, 1, seed)?;
    let k = 3;
    let mut lambda = base.clone();
    if let Some(even) = alg.simple_system.iter().find(|s| !s.parity.is_odd()) {
        let cur = alg.coroot_pairing(&base, &even.weight)?;
        lambda = &base + &even.weight.scale(&((Q::from_int(k) - cur) / Q::from_int(2)));
        let module = VermaModule::new(order.clone(), lambda.clone());
        let f = table.root_vector(&-&even.weight).expect("root vector");
        let v = module.vector(algebra.power(f, k as u32))?;
        let cert = module.is_singular(&v);
        out.push(line(
            "sl2",
            cert.singular() && alg.coroot_pairing(&lambda, &even.weight)? == Q::from_int(k),
            format!("f_{{{}}}^{k} v⁺", alg.render_weight(&even.weight)),
        ));
    }
    let module = VermaModule::new(order.clone(), lambda.clone());

    // osp(1|2): e f^{2k+1} v⁺ = 2a(½⟨λ−ρ,h⟩ − k) f^{2k} v⁺ for an odd non-isotropic simple root
    if let Some(odd) = alg.simple_system.iter().find(|s| s.parity == crate::root_data::RootParity::OddNonIsotropic) {
        let e = table.root_vector(&odd.weight).expect("root vector");
        let f = table.root_vector(&-&odd.weight).expect("root vector");
        let h = table.coroot(&odd.weight)?;
        let a = table.bracket(e, f).ratio_to(&h).expect("[e,f] ∝ h");
        let lam_shift = alg.coroot_pairing(&(&lambda - &alg.rho), &odd.weight)?;
        let mut ok = true;
        for kk in 0..=2u32 {
            let v = module.vector(algebra.power(f, 2 * kk + 1))?;
            let lhs = module.act_basis(e, &v).body;
            let coeff = Q::from_int(2) * a.clone() * (lam_shift.clone() / Q::from_int(2) - Q::from_int(kk as i64));
            ok &= lhs == algebra.power(f, 2 * kk).scale(&coeff);
        }
        out.push(line("osp12", ok, format!("simple root {}, k ≤ 2", alg.render_weight(&odd.weight))));
    }

    let n_value = 1;
    let lam = singular::default_lambda(&alg, n_value, seed)?;
    let params = CaseParams::new(&alg, n_value, lam.clone())?;
    let module = VermaModule::new(order.clone(), lam);
    let u = singular::candidate_u(&module, &params)?;
    let cert = module.is_singular(&u);
    out.push(line("candidate", cert.singular(), format!("N=1, {} terms", u.body.len())));
    Ok(out)
}
