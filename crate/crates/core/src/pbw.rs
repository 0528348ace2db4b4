//! Normal-form arithmetic in `U(g)`.
//!
//! A [`PbwOrder`] ranks the basis of `g` (negative block, then Cartan, then
//! positive block). Monomials store `(rank, exponent)` pairs in increasing
//! rank; odd generators have exponent at most one. Products are computed by
//! left-multiplying a normal monomial by one generator at a time:
//!
//! ```text
//! g · y^a m'  =  g y^a m'                               (g < y)
//!             =  y^{a+1} m'                              (g = y even)
//!             =  ½[g,g] · m'                             (g = y odd, a = 1)
//!             =  ±y · (g · y^{a-1} m') + [g,y] · y^{a-1} m'   (g > y)
//! ```
//!
//! with memoization on `(generator, monomial)`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::root_data::Weight;
use crate::scalar::Scalar;
use crate::superalgebra::{BasisKind, BracketTable, LieElement};

/// Total order on the basis of `g`.
#[derive(Debug, Clone)]
pub struct PbwOrder<S> {
    pub table: Arc<BracketTable<S>>,
    rank_of: Vec<u16>,
    basis_at: Vec<usize>,
    num_negative: usize,
    odd: Vec<bool>,
    /// `pairing[rank][k] = ⟨weight(generator), h_k⟩`.
    pairing: Vec<Vec<S>>,
}

impl<S: Scalar> PbwOrder<S> {
    fn from_ranking(table: Arc<BracketTable<S>>, negatives: Vec<usize>) -> Self {
        let p = table.num_positive();
        let mut positives: Vec<usize> = (0..p).collect();
        positives.sort_by_key(|&i| (table.algebra.height(i), i));
        let mut basis_at = negatives;
        basis_at.extend((0..table.rank()).map(|k| table.cartan(k)));
        basis_at.extend(positives.into_iter().map(|i| table.pos(i)));
        let mut rank_of = vec![0u16; basis_at.len()];
        for (r, &b) in basis_at.iter().enumerate() {
            rank_of[b] = r as u16;
        }
        let odd = basis_at.iter().map(|&b| table.is_odd(b)).collect();
        let pairing = basis_at.iter().map(|&b| table.pairing[b].clone()).collect();
        PbwOrder { table, rank_of, basis_at, num_negative: p, odd, pairing }
    }

    fn default_negatives(table: &BracketTable<S>) -> Vec<usize> {
        let mut neg: Vec<usize> = (0..table.num_positive()).collect();
        neg.sort_by_key(|&i| (table.algebra.height(i), i));
        neg.into_iter().map(|i| table.neg(i)).collect()
    }

    /// Negatives by (height, enumeration index).
    pub fn standard(table: Arc<BracketTable<S>>) -> Self {
        let neg = Self::default_negatives(&table);
        Self::from_ranking(table, neg)
    }

    /// Standard order with `g` moved to the right end of the negative block.
    pub fn with_rightmost(table: Arc<BracketTable<S>>, g: usize) -> Result<Self> {
        if table.basis[g].kind != BasisKind::NegativeRoot {
            return Err(Error::WrongOrder(format!("{} is not a negative generator", table.name(g))));
        }
        let mut neg = Self::default_negatives(&table);
        neg.retain(|&x| x != g);
        neg.push(g);
        Ok(Self::from_ranking(table, neg))
    }

    /// Negative block ending with `sequence` (left to right); unlisted
    /// negatives come first in standard order.
    pub fn from_negative_sequence(table: Arc<BracketTable<S>>, sequence: &[usize]) -> Result<Self> {
        for (i, &g) in sequence.iter().enumerate() {
            if table.basis[g].kind != BasisKind::NegativeRoot {
                return Err(Error::WrongOrder(format!("{} is not a negative generator", table.name(g))));
            }
            if sequence[..i].contains(&g) {
                return Err(Error::WrongOrder(format!("{} listed twice", table.name(g))));
            }
        }
        let mut neg = Self::default_negatives(&table);
        neg.retain(|x| !sequence.contains(x));
        neg.extend_from_slice(sequence);
        Ok(Self::from_ranking(table, neg))
    }

    pub fn len(&self) -> usize {
        self.basis_at.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis_at.is_empty()
    }

    pub fn rank(&self, basis: usize) -> u16 {
        self.rank_of[basis]
    }

    pub fn basis(&self, rank: u16) -> usize {
        self.basis_at[rank as usize]
    }

    pub fn is_odd_rank(&self, rank: u16) -> bool {
        self.odd[rank as usize]
    }

    pub fn is_negative_rank(&self, rank: u16) -> bool {
        (rank as usize) < self.num_negative
    }

    pub fn is_positive_rank(&self, rank: u16) -> bool {
        (rank as usize) >= self.num_negative + self.table.rank()
    }

    /// The generator at the right end of the negative block.
    pub fn rightmost_negative(&self) -> usize {
        self.basis_at[self.num_negative - 1]
    }

    /// Negative generators left to right.
    pub fn negative_names(&self) -> Vec<String> {
        self.basis_at[..self.num_negative].iter().map(|&b| self.table.name(b)).collect()
    }

    pub fn pairing(&self, rank: u16) -> &[S] {
        &self.pairing[rank as usize]
    }
}

/// An ordered monomial: `(rank, exponent)` pairs with strictly increasing
/// rank and positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub SmallVec<[(u16, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<(u16, u32)> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<(u16, u32)> {
        self.0.last().copied()
    }

    pub fn exponent(&self, rank: u16) -> u32 {
        self.0.iter().find(|(r, _)| *r == rank).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn prepend(&self, rank: u16) -> Self {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push((rank, 1));
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    fn bump_first(&self) -> Self {
        let mut m = self.clone();
        m.0[0].1 += 1;
        m
    }

    fn drop_one_first(&self) -> Self {
        let mut m = self.clone();
        if m.0[0].1 == 1 {
            m.0.remove(0);
        } else {
            m.0[0].1 -= 1;
        }
        m
    }

    /// Generators as a word (left to right, exponents expanded).
    pub fn word(&self) -> Vec<u16> {
        self.0.iter().flat_map(|&(r, e)| std::iter::repeat_n(r, e as usize)).collect()
    }

    pub fn is_odd<S: Scalar>(&self, order: &PbwOrder<S>) -> bool {
        self.0.iter().filter(|(r, e)| order.is_odd_rank(*r) && e % 2 == 1).count() % 2 == 1
    }

    /// `⟨weight, h_k⟩` for every k.
    pub fn pairing<S: Scalar>(&self, order: &PbwOrder<S>) -> Vec<S> {
        let mut acc = vec![S::zero(); order.table.rank()];
        for &(r, e) in &self.0 {
            let ee = S::from_int(e as i64);
            for (a, p) in acc.iter_mut().zip(order.pairing(r)) {
                *a = a.clone() + p.clone() * ee.clone();
            }
        }
        acc
    }

    /// `f_{α}^{k} f_{β} …`, or `1` for the empty monomial.
    pub fn render<S: Scalar>(&self, order: &PbwOrder<S>) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(r, e)| {
                let n = order.table.name(order.basis(r));
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn weight<S: Scalar>(&self, order: &PbwOrder<S>) -> Weight<S> {
        let t = &order.table;
        let mut acc = Weight::zero(t.algebra.rank());
        for &(r, e) in &self.0 {
            acc = &acc + &t.weight(order.basis(r)).scale_int(e as i64);
        }
        acc
    }
}

/// An element of `U(g)` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UeaElement<S> {
    pub terms: BTreeMap<Monomial, S>,
}

impl<S> Default for UeaElement<S> {
    fn default() -> Self {
        UeaElement { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> UeaElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), S::one())
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UeaElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, k: &S) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone() * k.clone());
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    /// Weight if every monomial has the same weight.
    pub fn weight(&self, order: &PbwOrder<S>) -> Result<Option<Weight<S>>> {
        let mut w: Option<Weight<S>> = None;
        for m in self.terms.keys() {
            let mw = m.weight(order);
            match &w {
                None => w = Some(mw),
                Some(x) if *x == mw => {}
                Some(_) => return Err(Error::Inhomogeneous(format!("{} terms of differing weight", self.len()))),
            }
        }
        Ok(w)
    }

    /// Parity if every monomial has the same parity.
    pub fn parity(&self, order: &PbwOrder<S>) -> Option<bool> {
        let mut par = None;
        for m in self.terms.keys() {
            let p = m.is_odd(order);
            if par.is_some_and(|q| q != p) {
                return None;
            }
            par = Some(p);
        }
        par
    }

    pub fn is_negative_supported(&self, order: &PbwOrder<S>) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|(r, _)| order.is_negative_rank(*r)))
    }

    pub fn render(&self, order: &PbwOrder<S>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    return c.render();
                }
                format!("{} · {}", c.render(), m.render(order))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

type Cache<S> = RefCell<FxHashMap<(u16, Monomial), Rc<UeaElement<S>>>>;

/// Multiplication in `U(g)` against a fixed order, with a product cache.
/// Not shareable between threads; build one per worker.
pub struct PbwAlgebra<S> {
    pub order: Arc<PbwOrder<S>>,
    /// `bracket_rank[a][b]` = `[g_a, g_b]` as (rank, coefficient) pairs.
    bracket_rank: Vec<Vec<Vec<(u16, S)>>>,
    cache: Cache<S>,
}

impl<S: Scalar> PbwAlgebra<S> {
    pub fn new(order: Arc<PbwOrder<S>>) -> Self {
        let n = order.len();
        let bracket_rank = (0..n as u16)
            .map(|a| {
                (0..n as u16)
                    .map(|b| {
                        let br = order.table.bracket(order.basis(a), order.basis(b));
                        br.terms.iter().map(|(z, c)| (order.rank(*z), c.clone())).collect()
                    })
                    .collect()
            })
            .collect();
        PbwAlgebra { order, bracket_rank, cache: RefCell::new(FxHashMap::default()) }
    }

    pub fn table(&self) -> &BracketTable<S> {
        &self.order.table
    }

    pub fn cache_len(&self) -> usize {
        self.cache.borrow().len()
    }

    pub(crate) fn bracket_ranks(&self, a: u16, b: u16) -> &[(u16, S)] {
        &self.bracket_rank[a as usize][b as usize]
    }

    /// The generator for basis element `x`.
    pub fn generator(&self, x: usize) -> UeaElement<S> {
        let m = Monomial::one().prepend(self.order.rank(x));
        UeaElement::monomial(m, S::one())
    }

    /// Embeds a Lie element.
    pub fn lie(&self, x: &LieElement<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (b, c) in &x.terms {
            out.add_term(Monomial::one().prepend(self.order.rank(*b)), c.clone());
        }
        out
    }

    /// Normal form of the product of basis elements in the given sequence.
    pub fn word(&self, basis_seq: &[usize]) -> UeaElement<S> {
        let mut acc = UeaElement::one();
        for &b in basis_seq.iter().rev() {
            acc = self.lmul_rank(self.order.rank(b), &acc);
        }
        acc
    }

    /// `g^k` for basis element `g`.
    pub fn power(&self, g: usize, k: u32) -> UeaElement<S> {
        self.word(&vec![g; k as usize])
    }

    /// Normal form of `g · m`.
    pub fn lmul_mono(&self, g: u16, m: &Monomial) -> Rc<UeaElement<S>> {
        let key = (g, m.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let result = Rc::new(self.lmul_mono_uncached(g, m));
        self.cache.borrow_mut().insert(key, result.clone());
        result
    }

    fn lmul_mono_uncached(&self, g: u16, m: &Monomial) -> UeaElement<S> {
        let Some((y, _)) = m.first() else {
            return UeaElement::monomial(m.prepend(g), S::one());
        };
        if g < y {
            return UeaElement::monomial(m.prepend(g), S::one());
        }
        let rest = m.drop_one_first();
        if g == y {
            if !self.order.is_odd_rank(g) {
                return UeaElement::monomial(m.bump_first(), S::one());
            }
            // g² = ½[g, g]
            let half = S::from_frac(1, 2);
            let mut out = UeaElement::zero();
            for (z, c) in self.bracket_ranks(g, g) {
                out.add_scaled(&self.lmul_mono(*z, &rest), &(c.clone() * half.clone()));
            }
            return out;
        }
        // g y m' = s y (g m') + [g, y] m'
        let sign = if self.order.is_odd_rank(g) && self.order.is_odd_rank(y) { -S::one() } else { S::one() };
        let mut out = UeaElement::zero();
        let gm = self.lmul_mono(g, &rest);
        for (mm, c) in &gm.terms {
            out.add_scaled(&self.lmul_mono(y, mm), &(c.clone() * sign.clone()));
        }
        for (z, c) in self.bracket_ranks(g, y) {
            out.add_scaled(&self.lmul_mono(*z, &rest), c);
        }
        out
    }

    pub fn lmul_rank(&self, g: u16, x: &UeaElement<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            out.add_scaled(&self.lmul_mono(g, m), c);
        }
        out
    }

    /// `g · x` for a basis element `g`.
    pub fn lmul(&self, g: usize, x: &UeaElement<S>) -> UeaElement<S> {
        self.lmul_rank(self.order.rank(g), x)
    }

    /// Normal form of `a · b`.
    pub fn multiply(&self, a: &UeaElement<S>, b: &UeaElement<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (ma, ca) in &a.terms {
            let mut acc = b.clone();
            for r in ma.word().into_iter().rev() {
                acc = self.lmul_rank(r, &acc);
            }
            out.add_scaled(&acc, ca);
        }
        out
    }

    /// Supercommutator `[a, b]` for parity-homogeneous `a`, `b`.
    pub fn supercommutator(&self, a: &UeaElement<S>, b: &UeaElement<S>) -> UeaElement<S> {
        let pa = a.parity(&self.order).unwrap_or(false);
        let pb = b.parity(&self.order).unwrap_or(false);
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        let mut out = ab;
        out.add_scaled(&ba, &if pa && pb { S::one() } else { -S::one() });
        out
    }

    /// `ad_g(x) = [g, x]` for a basis element `g`.
    pub fn ad(&self, g: usize, x: &UeaElement<S>) -> UeaElement<S> {
        self.supercommutator(&self.generator(g), x)
    }

    /// Re-normalizes every monomial (a no-op on normal forms).
    pub fn normalize(&self, x: &UeaElement<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            let mut acc = UeaElement::one();
            for r in m.word().into_iter().rev() {
                acc = self.lmul_rank(r, &acc);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// Rewrites an element normalized against `from` into this order.
    pub fn reorder(&self, x: &UeaElement<S>, from: &PbwOrder<S>) -> UeaElement<S> {
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            let mut acc = UeaElement::one();
            for r in m.word().into_iter().rev() {
                acc = self.lmul(from.basis(r), &acc);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// `θ` with `θ · g^p = x`, where `g` is the rightmost negative
    /// generator of the order.
    pub fn right_divide(&self, x: &UeaElement<S>, g: usize, p: u32) -> Result<UeaElement<S>> {
        let t = self.table();
        if g != self.order.rightmost_negative() {
            return Err(Error::WrongOrder(format!(
                "{} is not the rightmost negative generator ({} is)",
                t.name(g),
                t.name(self.order.rightmost_negative())
            )));
        }
        if t.is_odd(g) {
            return Err(Error::WrongOrder(format!("{} is odd", t.name(g))));
        }
        if !x.is_negative_supported(&self.order) {
            return Err(Error::NotDivisible("element is not in U(n⁻)".into()));
        }
        let rg = self.order.rank(g);
        let mut out = UeaElement::zero();
        for (m, c) in &x.terms {
            let e = m.exponent(rg);
            if e < p {
                return Err(Error::NotDivisible(format!(
                    "monomial with {}-exponent {e} < {p}",
                    t.name(g)
                )));
            }
            let mut q = m.clone();
            if p > 0 {
                let last = q.0.len() - 1;
                if e == p {
                    q.0.remove(last);
                } else {
                    q.0[last].1 -= p;
                }
            }
            out.add_term(q, c.clone());
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Debug for PbwAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PbwAlgebra").field("cache", &self.cache_len()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::{AlgebraData, CaseId};
    use crate::Q;
    use num_traits::Zero;

    fn algebra(s: &str) -> PbwAlgebra<Q> {
        let alg = Arc::new(AlgebraData::build(s.parse::<CaseId>().unwrap()).unwrap());
        let t = Arc::new(BracketTable::build(alg).unwrap());
        PbwAlgebra::new(Arc::new(PbwOrder::standard(t)))
    }

    #[test]
    fn isotropic_square_vanishes() {
        let a = algebra("B-II:m=1,n=1");
        let x = a.table().root_vector_by_name("-ε1+δ1").unwrap();
        let g = a.generator(x);
        assert!(a.multiply(&g, &g).is_zero());
    }

    #[test]
    fn odd_nonisotropic_square_is_root_vector() {
        for (s, d, dd) in [("B-I:m=1,n=1", "-δ1", "-2δ1"), ("G3", "-δ", "-2δ")] {
            let a = algebra(s);
            let t = a.table();
            let f = t.root_vector_by_name(d).unwrap();
            let f2 = t.root_vector_by_name(dd).unwrap();
            let sq = a.multiply(&a.generator(f), &a.generator(f));
            let c = sq.coeff(&Monomial::one().prepend(a.order.rank(f2)));
            assert!(!c.is_zero());
            assert_eq!(sq, a.generator(f2).scale(&c));
        }
    }

    #[test]
    fn even_simple_straightening_step() {
        let a = algebra("B-I:m=2,n=1");
        let t = a.table();
        let e = t.root_vector_by_name("δ1-δ2").unwrap();
        let f = t.root_vector_by_name("-δ1+δ2").unwrap();
        let ef = a.multiply(&a.generator(e), &a.generator(f));
        let mut expected = a.word(&[f, e]);
        expected.add_scaled(&a.lie(t.bracket(e, f)), &Q::from_int(1));
        assert_eq!(ef, expected);
    }

    #[test]
    fn right_divide_edges() {
        let a = algebra("B-I:m=2,n=1");
        let g = a.order.rightmost_negative();
        let x = a.power(g, 3);
        assert_eq!(a.right_divide(&x, g, 3).unwrap(), UeaElement::one());
        assert_eq!(a.right_divide(&x, g, 0).unwrap(), x);
        assert!(matches!(a.right_divide(&x, g, 4), Err(Error::NotDivisible(_))));
        let other = a.table().neg(0);
        let other = if other == g { a.table().neg(1) } else { other };
        assert!(matches!(a.right_divide(&x, other, 1), Err(Error::WrongOrder(_))));
    }

    #[test]
    fn rendering() {
        let a = algebra("B-I:m=1,n=1");
        let f = a.table().root_vector_by_name("-2δ1").unwrap();
        let x = a.power(f, 2).scale(&Q::from_frac(-1, 2));
        assert_eq!(x.render(&a.order), "-1/2 · f_{2δ1}^2");
        assert_eq!(UeaElement::<Q>::zero().render(&a.order), "0");
    }
}
