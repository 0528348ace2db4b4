//! Verma modules `M(λ) = U(g) ⊗_{U(b⁺)} C_{λ−ρ}` on the PBW basis of `U(n⁻)`.
//!
//! Vectors are `U(n⁻)`-elements applied to `v⁺`. The action of a generator
//! `g` on `y·m′ v⁺` (y the leftmost factor) is computed recursively:
//! negatives multiply on the left, `h` acts by the weight, and a positive `g`
//! is moved right past `y` via `g y = ±y g + [g, y]` until it hits `v⁺`.

use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::pbw::{Monomial, PbwAlgebra, PbwOrder, UeaElement};
use crate::root_data::Weight;
use crate::scalar::Scalar;
use crate::superalgebra::BasisKind;

/// A vector `body · v⁺` of `M(λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaVector<S> {
    pub body: UeaElement<S>,
    pub highest_weight: Weight<S>,
}

impl<S: Scalar> VermaVector<S> {
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn render(&self, order: &PbwOrder<S>) -> String {
        if self.body.is_zero() {
            "0".into()
        } else {
            format!("({}) v⁺", self.body.render(order))
        }
    }
}

/// Per-simple-root outcome of a singularity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityCertificate {
    pub nonzero: bool,
    /// `(root name, number of terms of e_α · v)`.
    pub residuals: Vec<(String, usize)>,
}

impl SingularityCertificate {
    pub fn singular(&self) -> bool {
        self.nonzero && self.residuals.iter().all(|(_, n)| *n == 0)
    }
}

type ActCache<S> = RefCell<FxHashMap<(u16, Monomial), Rc<UeaElement<S>>>>;

/// `M(λ)` against a fixed PBW order.
pub struct VermaModule<S> {
    pub algebra: PbwAlgebra<S>,
    pub lambda: Weight<S>,
    /// `⟨λ − ρ, h_k⟩`.
    shifted_pairing: Vec<S>,
    cache: ActCache<S>,
}

impl<S: Scalar> VermaModule<S> {
    pub fn new(order: Arc<PbwOrder<S>>, lambda: Weight<S>) -> Self {
        let t = order.table.clone();
        let shifted = &lambda - &t.algebra.rho;
        let shifted_pairing = t.cartan_duals.iter().map(|d| t.algebra.bilinear_form(&shifted, d)).collect();
        VermaModule { algebra: PbwAlgebra::new(order), lambda, shifted_pairing, cache: RefCell::new(FxHashMap::default()) }
    }

    pub fn order(&self) -> &PbwOrder<S> {
        &self.algebra.order
    }

    pub fn highest_weight_vector(&self) -> VermaVector<S> {
        self.vector(UeaElement::one()).expect("1 is in U(n⁻)")
    }

    pub fn vector(&self, body: UeaElement<S>) -> Result<VermaVector<S>> {
        if !body.is_negative_supported(self.order()) {
            return Err(Error::InvalidParams("Verma vector body must lie in U(n⁻)".into()));
        }
        Ok(VermaVector { body, highest_weight: self.lambda.clone() })
    }

    fn wrap(&self, body: UeaElement<S>) -> VermaVector<S> {
        VermaVector { body, highest_weight: self.lambda.clone() }
    }

    /// `⟨λ − ρ + wt(m), h_k⟩`.
    fn cartan_value(&self, k: usize, m: &Monomial) -> S {
        let mut v = self.shifted_pairing[k].clone();
        for &(r, e) in &m.0 {
            v = v + self.order().pairing(r)[k].clone() * S::from_int(e as i64);
        }
        v
    }

    fn act_gen(&self, g: u16, m: &Monomial) -> Rc<UeaElement<S>> {
        let order = self.order();
        if order.is_negative_rank(g) {
            return self.algebra.lmul_mono(g, m);
        }
        let key = (g, m.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let out = if !order.is_positive_rank(g) {
            let k = order.table.basis[order.basis(g)].index;
            UeaElement::monomial(m.clone(), self.cartan_value(k, m))
        } else if let Some((y, _)) = m.first() {
            // g y m′ = ±y (g m′) + [g, y] m′
            let rest = {
                let mut r = m.clone();
                if r.0[0].1 == 1 {
                    r.0.remove(0);
                } else {
                    r.0[0].1 -= 1;
                }
                r
            };
            let sign = if order.is_odd_rank(g) && order.is_odd_rank(y) { -S::one() } else { S::one() };
            let mut out = UeaElement::zero();
            let inner = self.act_gen(g, &rest);
            for (mm, c) in &inner.terms {
                out.add_scaled(&self.algebra.lmul_mono(y, mm), &(c.clone() * sign.clone()));
            }
            for (z, c) in self.algebra.bracket_ranks(g, y) {
                out.add_scaled(&self.act_gen(*z, &rest), c);
            }
            out
        } else {
            UeaElement::zero()
        };
        let out = Rc::new(out);
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    fn act_rank_body(&self, g: u16, body: &UeaElement<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (m, c) in &body.terms {
            out.add_scaled(&self.act_gen(g, m), c);
        }
        out
    }

    /// `x · v` for a basis element `x` of `g`.
    pub fn act_basis(&self, x: usize, v: &VermaVector<S>) -> VermaVector<S> {
        self.wrap(self.act_rank_body(self.order().rank(x), &v.body))
    }

    /// `x · v` for `x ∈ U(g)` (normalized against this module's order).
    pub fn act(&self, x: &UeaElement<S>, v: &VermaVector<S>) -> VermaVector<S> {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            let mut acc = v.body.clone();
            for r in m.word().into_iter().rev() {
                acc = self.act_rank_body(r, &acc);
            }
            out.add_scaled(&acc, c);
        }
        self.wrap(out)
    }

    /// `x · v` by full straightening of `x · body` in `U(g)`: terms with a
    /// positive generator vanish and Cartan factors, which then sit directly
    /// on `v⁺`, become `⟨λ − ρ, h⟩`.
    pub fn act_by_straightening(&self, x: &UeaElement<S>, v: &VermaVector<S>) -> VermaVector<S> {
        let order = self.order();
        let prod = self.algebra.multiply(x, &v.body);
        let mut out = UeaElement::zero();
        for (m, c) in &prod.terms {
            if m.0.iter().any(|(r, _)| order.is_positive_rank(*r)) {
                continue;
            }
            let mut coeff = c.clone();
            let mut neg = Monomial::one();
            for &(r, e) in &m.0 {
                if order.is_negative_rank(r) {
                    neg.0.push((r, e));
                } else {
                    let k = order.table.basis[order.basis(r)].index;
                    coeff = coeff * self.shifted_pairing[k].powu(e);
                }
            }
            out.add_term(neg, coeff);
        }
        self.wrap(out)
    }

    /// `λ − ρ + wt(body)`.
    pub fn weight_of(&self, v: &VermaVector<S>) -> Result<Weight<S>> {
        let w = v
            .body
            .weight(self.order())?
            .ok_or_else(|| Error::Inhomogeneous("the zero vector has no weight".into()))?;
        Ok(&(&v.highest_weight - &self.order().table.algebra.rho) + &w)
    }

    fn certificate(&self, v: &VermaVector<S>, roots: impl Iterator<Item = usize>) -> SingularityCertificate {
        let t = &self.order().table;
        let residuals = roots
            .map(|i| {
                let r = self.act_basis(t.pos(i), v);
                (t.algebra.render_weight(&t.algebra.positive_roots[i].weight), r.body.len())
            })
            .collect();
        SingularityCertificate { nonzero: !v.body.is_zero(), residuals }
    }

    /// Nonzero and killed by every simple root vector.
    pub fn is_singular(&self, v: &VermaVector<S>) -> SingularityCertificate {
        let alg = self.order().table.algebra.clone();
        let simple: Vec<usize> =
            alg.simple_system.iter().map(|s| alg.root_index(&s.weight).expect("simple root")).collect();
        self.certificate(v, simple.into_iter())
    }

    /// Same test against every positive root vector.
    pub fn is_singular_all_positive(&self, v: &VermaVector<S>) -> SingularityCertificate {
        self.certificate(v, 0..self.order().table.num_positive())
    }

    pub fn cache_len(&self) -> usize {
        self.cache.borrow().len() + self.algebra.cache_len()
    }

    /// True if `x` is a basis element of `n⁺`.
    pub fn is_raising(&self, x: usize) -> bool {
        self.order().table.basis[x].kind == BasisKind::PositiveRoot
    }
}
