//! Root-vector basis and supercommutator table.
//!
//! The algebra is built from its Chevalley generators `e_i, f_i, h_i`, one
//! height at a time. An element of `n⁻` of height `d ≥ 2` is identified by its
//! images `[e_j, ·]` (which live at height `d − 1`, already constructed); an
//! element killed by every `e_j` lies in the maximal ideal and is zero. The
//! same runs on `n⁺` with the roles of `e` and `f` exchanged. For a non-simple
//! positive root `α` the root vectors are fixed by the construction tree
//! `e_α := [e_{α_i}, e_β]`, `f_α := [f_{α_i}, f_β]`, where `α_i` is the first
//! simple root (in simple-system order) with `β = α − α_i` a positive root.
//!
//! Cartan basis: `h_i = [e_i, f_i]`, which is the coroot `h_{α_i}` for
//! non-isotropic `α_i` and acts by `⟨μ, h_i⟩ = (μ, α_i)` for the isotropic one.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::root_data::{AlgebraData, RootParity, Weight};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    NegativeRoot,
    Cartan,
    PositiveRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub kind: BasisKind,
    /// Positive-root index for root kinds; simple-root index for Cartan.
    pub index: usize,
    pub odd: bool,
}

/// A finite linear combination of basis elements, sorted by basis index with
/// no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieElement<S> {
    pub terms: Vec<(usize, S)>,
}

impl<S> Default for LieElement<S> {
    fn default() -> Self {
        LieElement { terms: Vec::new() }
    }
}

impl<S: Scalar> LieElement<S> {
    pub fn zero() -> Self {
        LieElement { terms: Vec::new() }
    }

    pub fn basis(i: usize) -> Self {
        LieElement { terms: vec![(i, S::one())] }
    }

    pub fn single(i: usize, c: S) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LieElement { terms: vec![(i, c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> S {
        self.terms
            .binary_search_by_key(&i, |(j, _)| *j)
            .map(|p| self.terms[p].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LieElement { terms: self.terms.iter().map(|(i, c)| (*i, c.clone() * k.clone())).collect() }
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &Self, k: &S) -> Self {
        if k.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, ca)), Some((ib, cb))) => {
                    if ia < ib {
                        out.push((*ia, ca.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, cb.clone() * k.clone()));
                        b.next();
                    } else {
                        let c = ca.clone() + cb.clone() * k.clone();
                        if !c.is_zero() {
                            out.push((*ia, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, ca)), None) => {
                    out.push((*ia, ca.clone()));
                    a.next();
                }
                (None, Some((ib, cb))) => {
                    out.push((*ib, cb.clone() * k.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        LieElement { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &S::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-S::one())
    }

    /// `k` with `self = k·other`, if the two are proportional and `other ≠ 0`.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        let (i, c) = other.terms.first()?;
        let k = self.coeff(*i) / c.clone();
        (other.scale(&k) == *self).then_some(k)
    }
}

/// A linear map on `g`, stored by columns.
type AdMatrix<S> = Vec<LieElement<S>>;

fn apply<S: Scalar>(m: &AdMatrix<S>, x: &LieElement<S>) -> LieElement<S> {
    let mut acc = LieElement::zero();
    for (i, c) in &x.terms {
        acc = acc.add_scaled(&m[*i], c);
    }
    acc
}

/// Supercommutator `[A, B] = AB − (−1)^{ab} BA` of two homogeneous operators.
fn super_commutator<S: Scalar>(a: &AdMatrix<S>, b: &AdMatrix<S>, sign_flip: bool) -> AdMatrix<S> {
    let k = if sign_flip { S::one() } else { -S::one() };
    (0..a.len())
        .map(|col| {
            let ab = apply(a, &b[col]);
            let ba = apply(b, &a[col]);
            ab.add_scaled(&ba, &k)
        })
        .collect()
}

/// The complete supercommutator table of `g` on its root-vector basis.
#[derive(Debug, Clone)]
pub struct BracketTable<S> {
    pub algebra: Arc<AlgebraData<S>>,
    pub basis: Vec<BasisElement>,
    /// `brackets[x][y] = [x, y]`.
    brackets: Vec<Vec<LieElement<S>>>,
    /// `t_k ∈ h*` with `⟨μ, h_k⟩ = (μ, t_k)`.
    pub cartan_duals: Vec<Weight<S>>,
    /// `pairing[x][k] = ⟨weight(x), h_k⟩`.
    pub pairing: Vec<Vec<S>>,
    /// `(i, β)` with `e_α = [e_{α_i}, e_β]` for every non-simple positive root.
    pub construction: Vec<Option<(usize, usize)>>,
}

struct Builder<'a, S> {
    alg: &'a AlgebraData<S>,
    p: usize,
    r: usize,
    simple_root: Vec<usize>,
    simple_odd: Vec<bool>,
    /// `⟨α, h_k⟩` for positive root α.
    root_pair: Vec<Vec<S>>,
    by_coeffs: HashMap<Vec<i64>, usize>,
}

impl<'a, S: Scalar> Builder<'a, S> {
    fn neg(&self, root: usize) -> usize {
        root
    }

    fn cartan(&self, k: usize) -> usize {
        self.p + k
    }

    fn pos(&self, root: usize) -> usize {
        self.p + self.r + root
    }

    fn parity_odd(&self, root: usize) -> bool {
        self.alg.positive_roots[root].parity.is_odd()
    }

    /// Builds one triangular half. `lowering = true` constructs `n⁻` with
    /// signatures `[e_j, ·]`; otherwise `n⁺` with signatures `[f_j, ·]`.
    /// Returns (signatures per root, brackets `[g_k, x_β]` keyed by (k, β),
    /// construction tree).
    #[allow(clippy::type_complexity)]
    fn build_half(
        &self,
        lowering: bool,
    ) -> Result<(
        Vec<Vec<LieElement<S>>>,
        HashMap<(usize, usize), LieElement<S>>,
        Vec<Option<(usize, usize)>>,
    )> {
        let (p, r) = (self.p, self.r);
        let elem = |root: usize| if lowering { self.neg(root) } else { self.pos(root) };
        let mut sig: Vec<Option<Vec<LieElement<S>>>> = vec![None; p];
        let mut gen_bracket: HashMap<(usize, usize), LieElement<S>> = HashMap::new();
        let mut tree: Vec<Option<(usize, usize)>> = vec![None; p];

        // height 1: [e_j, f_k] = δ_jk h_k ; [f_j, e_k] = −(−1)^{|k|} δ_jk h_k
        for k in 0..r {
            let c = if lowering || self.simple_odd[k] { S::one() } else { -S::one() };
            let s = (0..r)
                .map(|j| if j == k { LieElement::single(self.cartan(k), c.clone()) } else { LieElement::zero() })
                .collect();
            sig[self.simple_root[k]] = Some(s);
        }

        let max_height = (0..p).map(|i| self.alg.height(i)).max().unwrap_or(0);
        for d in 2..=max_height + 1 {
            let lower: Vec<usize> = (0..p).filter(|&i| self.alg.height(i) == d - 1).collect();
            // candidates grouped by weight (simple-coefficient vector)
            let mut groups: Vec<(Vec<i64>, Vec<(usize, usize, Vec<LieElement<S>>)>)> = Vec::new();
            let mut group_of: HashMap<Vec<i64>, usize> = HashMap::new();
            for k in 0..r {
                for &g in &lower {
                    let mut coeffs = self.alg.simple_coefficients[g].clone();
                    coeffs[k] += 1;
                    let s = self.candidate_signature(lowering, k, g, &sig, &gen_bracket);
                    let gi = *group_of.entry(coeffs.clone()).or_insert_with(|| {
                        groups.push((coeffs.clone(), Vec::new()));
                        groups.len() - 1
                    });
                    groups[gi].1.push((k, g, s));
                }
            }
            for (coeffs, cands) in groups {
                match self.by_coeffs.get(&coeffs) {
                    None => {
                        for (k, g, s) in cands {
                            if s.iter().any(|x| !x.is_zero()) {
                                return Err(Error::ClosureFailure(format!(
                                    "bracket of simple {k} with root {} lands on a non-root",
                                    self.alg.render_weight(&self.alg.positive_roots[g].weight)
                                )));
                            }
                            gen_bracket.insert((k, g), LieElement::zero());
                        }
                    }
                    Some(&alpha) => {
                        let (k0, g0, s0) = cands
                            .iter()
                            .min_by_key(|(k, _, _)| *k)
                            .cloned()
                            .expect("non-empty group");
                        if s0.iter().all(|x| x.is_zero()) {
                            return Err(Error::ClosureFailure(format!(
                                "construction bracket for root {} vanishes",
                                self.alg.render_weight(&self.alg.positive_roots[alpha].weight)
                            )));
                        }
                        tree[alpha] = Some((k0, g0));
                        for (k, g, s) in &cands {
                            let ratio = ratio_of(s, &s0).ok_or_else(|| {
                                Error::ClosureFailure(format!(
                                    "root space {} is not one-dimensional",
                                    self.alg.render_weight(&self.alg.positive_roots[alpha].weight)
                                ))
                            })?;
                            gen_bracket.insert((*k, *g), LieElement::single(elem(alpha), ratio));
                        }
                        sig[alpha] = Some(s0);
                    }
                }
            }
        }
        let sig = sig
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::ClosureFailure(format!(
                        "root {} never generated",
                        self.alg.render_weight(&self.alg.positive_roots[i].weight)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((sig, gen_bracket, tree))
    }

    /// Signature of `[g_k, x_γ]` (g = f for lowering, e otherwise).
    fn candidate_signature(
        &self,
        lowering: bool,
        k: usize,
        gamma: usize,
        sig: &[Option<Vec<LieElement<S>>>],
        gen_bracket: &HashMap<(usize, usize), LieElement<S>>,
    ) -> Vec<LieElement<S>> {
        let gamma_sig = sig[gamma].as_ref().expect("lower level built");
        let elem_gamma = if lowering { self.neg(gamma) } else { self.pos(gamma) };
        let elem_k = if lowering { self.neg(self.simple_root[k]) } else { self.pos(self.simple_root[k]) };
        (0..self.r)
            .map(|j| {
                // [y_j, [g_k, x]] = [[y_j, g_k], x] + (−1)^{|j||k|} [g_k, [y_j, x]]
                let mut acc = LieElement::zero();
                if j == k {
                    // lowering: [e_k, f_k] = h_k, [h_k, f_γ] = −⟨γ,h_k⟩ f_γ
                    // raising:  [f_k, e_k] = −(−1)^{|k|} h_k, [h_k, e_γ] = ⟨γ,h_k⟩ e_γ
                    let pr = self.root_pair[gamma][k].clone();
                    let c = if lowering {
                        -pr
                    } else if self.simple_odd[k] {
                        pr
                    } else {
                        -pr
                    };
                    acc = acc.add(&LieElement::single(elem_gamma, c));
                }
                let sign = if self.simple_odd[j] && self.simple_odd[k] { -S::one() } else { S::one() };
                let mut inner = LieElement::zero();
                for (x, c) in &gamma_sig[j].terms {
                    let br = if *x >= self.p && *x < self.p + self.r {
                        // [f_k, h_l] = ⟨α_k, h_l⟩ f_k ; [e_k, h_l] = −⟨α_k, h_l⟩ e_k
                        let l = *x - self.p;
                        let a = self.root_pair[self.simple_root[k]][l].clone();
                        LieElement::single(elem_k, if lowering { a } else { -a })
                    } else {
                        let beta = if lowering { *x } else { *x - self.p - self.r };
                        gen_bracket.get(&(k, beta)).cloned().unwrap_or_default()
                    };
                    inner = inner.add_scaled(&br, c);
                }
                acc.add_scaled(&inner, &sign)
            })
            .collect()
    }
}

fn ratio_of<S: Scalar>(a: &[LieElement<S>], b: &[LieElement<S>]) -> Option<S> {
    let j = b.iter().position(|x| !x.is_zero())?;
    let k = a[j].ratio_to(&b[j]).or_else(|| a[j].is_zero().then(S::zero))?;
    a.iter().zip(b).all(|(x, y)| y.scale(&k) == *x).then_some(k)
}

impl<S: Scalar> BracketTable<S> {
    pub fn build(alg: Arc<AlgebraData<S>>) -> Result<Self> {
        let p = alg.positive_roots.len();
        let r = alg.simple_system.len();
        let simple_root: Vec<usize> = alg
            .simple_system
            .iter()
            .map(|s| alg.root_index(&s.weight).expect("simple root indexed"))
            .collect();
        let simple_odd: Vec<bool> = alg.simple_system.iter().map(|s| s.parity.is_odd()).collect();
        let cartan_duals: Vec<Weight<S>> = alg
            .simple_system
            .iter()
            .map(|s| {
                if s.parity == RootParity::OddIsotropic {
                    s.weight.clone()
                } else {
                    let n = alg.bilinear_form(&s.weight, &s.weight);
                    s.weight.scale(&(S::from_int(2) / n))
                }
            })
            .collect();
        let root_pair: Vec<Vec<S>> = alg
            .positive_roots
            .iter()
            .map(|a| cartan_duals.iter().map(|t| alg.bilinear_form(&a.weight, t)).collect())
            .collect();
        let by_coeffs = alg
            .simple_coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let b = Builder {
            alg: &alg,
            p,
            r,
            simple_root: simple_root.clone(),
            simple_odd: simple_odd.clone(),
            root_pair: root_pair.clone(),
            by_coeffs,
        };
        let (sig_f, br_f, tree_f) = b.build_half(true)?;
        let (sig_e, br_e, tree_e) = b.build_half(false)?;
        if tree_f != tree_e {
            return Err(Error::ClosureFailure("positive and negative construction trees differ".into()));
        }

        let dim = 2 * p + r;
        let mut basis = Vec::with_capacity(dim);
        for i in 0..p {
            basis.push(BasisElement { kind: BasisKind::NegativeRoot, index: i, odd: b.parity_odd(i) });
        }
        for k in 0..r {
            basis.push(BasisElement { kind: BasisKind::Cartan, index: k, odd: false });
        }
        for i in 0..p {
            basis.push(BasisElement { kind: BasisKind::PositiveRoot, index: i, odd: b.parity_odd(i) });
        }

        // generator ad-matrices
        let mut ad_e: Vec<AdMatrix<S>> = Vec::with_capacity(r);
        let mut ad_f: Vec<AdMatrix<S>> = Vec::with_capacity(r);
        for k in 0..r {
            let ak = simple_root[k];
            let mut ce = Vec::with_capacity(dim);
            let mut cf = Vec::with_capacity(dim);
            for x in 0..dim {
                match basis[x].kind {
                    BasisKind::NegativeRoot => {
                        ce.push(sig_f[x][k].clone());
                        cf.push(br_f.get(&(k, x)).cloned().unwrap_or_default());
                    }
                    BasisKind::Cartan => {
                        let l = basis[x].index;
                        let a = root_pair[ak][l].clone();
                        ce.push(LieElement::single(b.pos(ak), -a.clone()));
                        cf.push(LieElement::single(b.neg(ak), a));
                    }
                    BasisKind::PositiveRoot => {
                        let beta = basis[x].index;
                        ce.push(br_e.get(&(k, beta)).cloned().unwrap_or_default());
                        cf.push(sig_e[beta][k].clone());
                    }
                }
            }
            ad_e.push(ce);
            ad_f.push(cf);
        }

        let mut weights: Vec<Weight<S>> = Vec::with_capacity(dim);
        for x in &basis {
            weights.push(match x.kind {
                BasisKind::NegativeRoot => -&alg.positive_roots[x.index].weight,
                BasisKind::Cartan => Weight::zero(alg.rank()),
                BasisKind::PositiveRoot => alg.positive_roots[x.index].weight.clone(),
            });
        }
        let pairing: Vec<Vec<S>> = weights
            .iter()
            .map(|w| cartan_duals.iter().map(|t| alg.bilinear_form(w, t)).collect())
            .collect();

        let mut ad: Vec<Option<AdMatrix<S>>> = vec![None; dim];
        for k in 0..r {
            let h: AdMatrix<S> =
                (0..dim).map(|x| LieElement::single(x, pairing[x][k].clone())).collect();
            ad[b.cartan(k)] = Some(h);
            ad[b.neg(simple_root[k])] = Some(ad_f[k].clone());
            ad[b.pos(simple_root[k])] = Some(ad_e[k].clone());
        }
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by_key(|&i| alg.height(i));
        for &alpha in &order {
            if let Some((k, beta)) = tree_f[alpha] {
                let flip = simple_odd[k] && b.parity_odd(beta);
                for (gen, target) in [(b.neg(simple_root[k]), b.neg(beta)), (b.pos(simple_root[k]), b.pos(beta))] {
                    let ag = ad[gen].as_ref().expect("generator ad");
                    let at = ad[target].as_ref().expect("lower root ad");
                    let m = super_commutator(ag, at, flip);
                    let slot = if gen < p { b.neg(alpha) } else { b.pos(alpha) };
                    ad[slot] = Some(m);
                }
            }
        }
        let brackets: Vec<Vec<LieElement<S>>> =
            ad.into_iter().map(|m| m.expect("all ad-matrices built")).collect();

        Ok(BracketTable {
            algebra: alg,
            basis,
            brackets,
            cartan_duals,
            pairing,
            construction: tree_f,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_positive(&self) -> usize {
        self.algebra.positive_roots.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan_duals.len()
    }

    pub fn neg(&self, root: usize) -> usize {
        root
    }

    pub fn cartan(&self, k: usize) -> usize {
        self.num_positive() + k
    }

    pub fn pos(&self, root: usize) -> usize {
        self.num_positive() + self.rank() + root
    }

    pub fn is_odd(&self, x: usize) -> bool {
        self.basis[x].odd
    }

    /// `[x, y]` for basis elements.
    pub fn bracket(&self, x: usize, y: usize) -> &LieElement<S> {
        &self.brackets[x][y]
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_elements(&self, a: &LieElement<S>, b: &LieElement<S>) -> LieElement<S> {
        let mut acc = LieElement::zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                acc = acc.add_scaled(&self.brackets[*x][*y], &(cx.clone() * cy.clone()));
            }
        }
        acc
    }

    pub fn weight(&self, x: usize) -> Weight<S> {
        let alg = &self.algebra;
        let e = self.basis[x];
        match e.kind {
            BasisKind::NegativeRoot => -&alg.positive_roots[e.index].weight,
            BasisKind::Cartan => Weight::zero(alg.rank()),
            BasisKind::PositiveRoot => alg.positive_roots[e.index].weight.clone(),
        }
    }

    /// Basis element `e_α` (α positive) or `f_{−α}` (α negative) for a root
    /// weight.
    pub fn root_vector(&self, alpha: &Weight<S>) -> Option<usize> {
        let (i, positive) = self.algebra.signed_root_index(alpha)?;
        Some(if positive { self.pos(i) } else { self.neg(i) })
    }

    /// Parses a root expression in the text notation and returns its root
    /// vector.
    pub fn root_vector_by_name(&self, text: &str) -> Result<usize> {
        let w = self.algebra.parse_weight(text)?;
        self.root_vector(&w)
            .ok_or_else(|| Error::Parse(format!("`{text}` is not a root of {}", self.algebra.case)))
    }

    /// The Cartan element `h` with `⟨μ, h⟩ = (μ, t)`, in the `h_k` basis.
    pub fn cartan_from_dual(&self, t: &Weight<S>) -> LieElement<S> {
        let cols: Vec<Vec<S>> = self.cartan_duals.iter().map(|w| w.coords.clone()).collect();
        let c = linalg::coordinates(&cols, &t.coords).expect("cartan duals form a basis");
        let mut acc = LieElement::zero();
        for (k, ck) in c.into_iter().enumerate() {
            acc = acc.add(&LieElement::single(self.cartan(k), ck));
        }
        acc
    }

    /// Inverse of [`Self::cartan_from_dual`] on the Cartan part of `h`.
    pub fn dual_of_cartan(&self, h: &LieElement<S>) -> Weight<S> {
        let mut acc = Weight::zero(self.algebra.rank());
        for (x, c) in &h.terms {
            if self.basis[*x].kind == BasisKind::Cartan {
                acc = &acc + &self.cartan_duals[self.basis[*x].index].scale(c);
            }
        }
        acc
    }

    /// Coroot `h_β` of a non-isotropic root.
    pub fn coroot(&self, beta: &Weight<S>) -> Result<LieElement<S>> {
        let n = self.algebra.bilinear_form(beta, beta);
        if n.is_zero() {
            return Err(Error::IsotropicCoroot(self.algebra.render_weight(beta)));
        }
        Ok(self.cartan_from_dual(&beta.scale(&(S::from_int(2) / n))))
    }

    pub fn name(&self, x: usize) -> String {
        let e = self.basis[x];
        let alg = &self.algebra;
        match e.kind {
            BasisKind::NegativeRoot => format!("f_{{{}}}", alg.render_weight(&alg.positive_roots[e.index].weight)),
            BasisKind::Cartan => format!("h_{}", e.index + 1),
            BasisKind::PositiveRoot => format!("e_{{{}}}", alg.render_weight(&alg.positive_roots[e.index].weight)),
        }
    }

    pub fn render_element(&self, x: &LieElement<S>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms
            .iter()
            .map(|(i, c)| format!("{}·{}", c.render(), self.name(*i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Text dump: one line `[x, y] = Σ c·z` per nonzero bracket, in basis
    /// order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let b = &self.brackets[x][y];
                if !b.is_zero() {
                    out.push_str(&format!("[{}, {}] = {}\n", self.name(x), self.name(y), self.render_element(b)));
                }
            }
        }
        out
    }

    /// Copy of the table with the sign of `[x, y]` (and, consistently,
    /// `[y, x]`) flipped. Fault injection for the checkers.
    pub fn with_flipped_entry(&self, x: usize, y: usize) -> Self {
        let mut t = self.clone();
        t.brackets[x][y] = t.brackets[x][y].scale(&-S::one());
        if x != y {
            t.brackets[y][x] = t.brackets[y][x].scale(&-S::one());
        }
        t
    }

    /// The first basis pair with nonzero bracket whose sign flip breaks
    /// Jacobi (used by fault-injection tests).
    pub fn first_nonzero_noncartan_pair(&self) -> Option<(usize, usize)> {
        let p = self.num_positive();
        (0..self.dim())
            .flat_map(|x| (0..self.dim()).map(move |y| (x, y)))
            .find(|&(x, y)| {
                self.basis[x].kind != BasisKind::Cartan
                    && self.basis[y].kind != BasisKind::Cartan
                    && !self.brackets[x][y].is_zero()
                    && x < p
            })
    }
}

/// Outcome of an exhaustive structure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for JacobiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_violation {
            None => write!(f, "pass: {} pairs, {} triples", self.pairs_checked, self.triples_checked),
            Some(v) => write!(f, "fail: {} violations, first {}", self.violations, v),
        }
    }
}

/// Exhaustive super-antisymmetry, weight-grading and super-Jacobi check.
pub fn check_jacobi<S: Scalar>(t: &BracketTable<S>) -> JacobiReport {
    let dim = t.dim();
    let mut violations = 0;
    let mut first = None;
    let note = |msg: String, first: &mut Option<String>| {
        if first.is_none() {
            *first = Some(msg);
        }
    };
    for x in 0..dim {
        for y in 0..dim {
            let xy = t.bracket(x, y);
            let sign = if t.is_odd(x) && t.is_odd(y) { S::one() } else { -S::one() };
            // [x,y] = −(−1)^{|x||y|}[y,x]  ⇔  [x,y] + (−1)^{|x||y|}[y,x] = 0
            let yx = t.bracket(y, x);
            if !xy.add_scaled(yx, &-sign).is_zero() {
                violations += 1;
                note(format!("antisymmetry ({}, {})", t.name(x), t.name(y)), &mut first);
            }
            let w = &t.weight(x) + &t.weight(y);
            if xy.terms.iter().any(|(z, _)| t.weight(*z) != w) {
                violations += 1;
                note(format!("grading ({}, {})", t.name(x), t.name(y)), &mut first);
            }
        }
    }
    let mut triples = 0;
    for x in 0..dim {
        for y in 0..dim {
            let xy = t.bracket(x, y);
            let sxy = if t.is_odd(x) && t.is_odd(y) { -S::one() } else { S::one() };
            for z in 0..dim {
                triples += 1;
                // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                let lhs = t.bracket_elements(&LieElement::basis(x), t.bracket(y, z));
                let r1 = t.bracket_elements(xy, &LieElement::basis(z));
                let r2 = t.bracket_elements(&LieElement::basis(y), t.bracket(x, z));
                if !lhs.sub(&r1).add_scaled(&r2, &-sxy.clone()).is_zero() {
                    violations += 1;
                    note(
                        format!("jacobi ({}, {}, {})", t.name(x), t.name(y), t.name(z)),
                        &mut first,
                    );
                }
            }
        }
    }
    JacobiReport {
        pairs_checked: dim * dim,
        triples_checked: triples,
        violations,
        first_violation: first,
    }
}

/// Rescaling of root vectors that carries this table onto the nine printed
/// `osp(2n+1|2m)` relations around `ε_n` and `δ_m` (opposite simple system):
///
/// ```text
/// [e_{ε_n+δ_m}, f_{ε_n}] = −e_{δ_m}          [e_{ε_n−δ_m}, f_{ε_n}] = −e_{−δ_m}
/// [e_{δ_m}, f_{ε_n}] = e_{δ_m−ε_n}           [e_{−δ_m}, f_{ε_n}] = e_{−δ_m−ε_n}
/// [e_{ε_n−δ_m}, e_{−ε_n+δ_m}] = ½(h_{δ_m}+h_{ε_n})
/// [e_{ε_n−δ_m}, e_{δ_m}] = −e_{ε_n}          [e_{δ_m}, e_{−δ_m}] = ½h_{δ_m}
/// [e_{δ_m}, e_{−ε_n−δ_m}] = −f_{ε_n}         [e_{−ε_n+δ_m}, e_{−δ_m}] = f_{ε_n}
/// ```
///
/// Returns the scale `x_v` of each involved root vector (printed vector =
/// `x_v` · ours), or `None` if no diagonal rescaling works.
pub fn printed_osp_rescaling<S: Scalar>(t: &BracketTable<S>) -> Result<Option<Vec<(String, S)>>> {
    let alg = &t.algebra;
    if alg.case.family != crate::root_data::Family::BII {
        return Err(Error::InvalidParams("the printed relations are for B-II".into()));
    }
    let (m, n) = (alg.case.m, alg.case.n);
    let names = [
        format!("δ{m}"),
        format!("-δ{m}"),
        format!("ε{n}+δ{m}"),
        format!("-ε{n}-δ{m}"),
        format!("ε{n}-δ{m}"),
        format!("-ε{n}+δ{m}"),
        format!("ε{n}"),
        format!("-ε{n}"),
    ];
    let vecs: Vec<usize> = names.iter().map(|s| t.root_vector_by_name(s)).collect::<Result<_>>()?;
    let var = |s: &str| names.iter().position(|x| x == s).unwrap();
    let (dm, mdm) = (var(&names[0]), var(&names[1]));
    let (epd, mepd, emd, memd, en, men) = (2, 3, 4, 5, 6, 7);
    let half = S::from_frac(1, 2);
    let d_w = alg.parse_weight(&format!("δ{m}"))?;
    let e_w = alg.parse_weight(&format!("ε{n}"))?;
    let h_d = t.coroot(&d_w)?;
    let h_e = t.coroot(&e_w)?;

    enum Rhs<S> {
        Root(usize, S),
        Cartan(LieElement<S>),
    }
    // (a, b, rhs): [v_a, v_b] = rhs
    let rels: Vec<(usize, usize, Rhs<S>)> = vec![
        (epd, men, Rhs::Root(dm, -S::one())),
        (emd, men, Rhs::Root(mdm, -S::one())),
        (dm, men, Rhs::Root(memd, S::one())),
        (mdm, men, Rhs::Root(mepd, S::one())),
        (emd, memd, Rhs::Cartan(h_d.add(&h_e).scale(&half))),
        (emd, dm, Rhs::Root(en, -S::one())),
        (dm, mdm, Rhs::Cartan(h_d.scale(&half))),
        (dm, mepd, Rhs::Root(men, -S::one())),
        (memd, mdm, Rhs::Root(men, S::one())),
    ];

    // Each relation reads x_a x_b k = c x_c (root rhs) or x_a x_b k = c (Cartan).
    struct Eqn<S> {
        vars: Vec<usize>,
        rhs_var: Option<usize>,
        k: S,
        c: S,
    }
    let mut eqns = Vec::new();
    for (a, b, rhs) in rels {
        let ours = t.bracket(vecs[a], vecs[b]);
        match rhs {
            Rhs::Root(c_var, c) => {
                let k = ours.coeff(vecs[c_var]);
                if k.is_zero() || ours.terms.len() != 1 {
                    return Ok(None);
                }
                eqns.push(Eqn { vars: vec![a, b], rhs_var: Some(c_var), k, c });
            }
            Rhs::Cartan(h) => {
                let Some(k) = ours.ratio_to(&h) else { return Ok(None) };
                eqns.push(Eqn { vars: vec![a, b], rhs_var: None, k, c: S::one() });
            }
        }
    }

    // Propagate from free choices; retry with different free variables.
    let nv = names.len();
    let holds = |x: &[S]| {
        eqns.iter().all(|e| {
            let lhs = e.vars.iter().fold(e.k.clone(), |acc, &v| acc * x[v].clone());
            let rhs = e.rhs_var.map(|v| x[v].clone()).unwrap_or_else(S::one) * e.c.clone();
            lhs == rhs
        })
    };
    for seed_a in 0..nv {
        for seed_b in 0..nv {
            let mut x: Vec<Option<S>> = vec![None; nv];
            let mut seeds = vec![seed_a, seed_b].into_iter();
            loop {
                let mut progress = false;
                for e in &eqns {
                    let mut unknown: Vec<usize> = e.vars.iter().copied().filter(|&v| x[v].is_none()).collect();
                    if let Some(v) = e.rhs_var {
                        if x[v].is_none() {
                            unknown.push(v);
                        }
                    }
                    unknown.dedup();
                    if unknown.len() != 1 || e.vars.iter().filter(|&&v| v == unknown[0]).count() > 1 {
                        continue;
                    }
                    let u = unknown[0];
                    let known_lhs = e
                        .vars
                        .iter()
                        .filter(|&&v| v != u)
                        .fold(e.k.clone(), |acc, &v| acc * x[v].clone().unwrap());
                    let val = if e.vars.contains(&u) {
                        let rhs = e.rhs_var.map(|v| x[v].clone().unwrap()).unwrap_or_else(S::one) * e.c.clone();
                        rhs / known_lhs
                    } else {
                        known_lhs / e.c.clone()
                    };
                    if val.is_zero() {
                        break;
                    }
                    x[u] = Some(val);
                    progress = true;
                }
                if x.iter().all(|v| v.is_some()) {
                    break;
                }
                if !progress {
                    match seeds.next() {
                        Some(s) if x[s].is_none() => x[s] = Some(S::one()),
                        Some(_) => {}
                        None => {
                            let free = x.iter().position(|v| v.is_none()).unwrap();
                            x[free] = Some(S::one());
                        }
                    }
                }
            }
            let sol: Vec<S> = x.into_iter().map(|v| v.unwrap()).collect();
            if holds(&sol) {
                return Ok(Some(names.iter().cloned().zip(sol).collect()));
            }
        }
    }
    Ok(None)
}
