//! Root data for the six distinguished simple systems handled by the crate:
//! `osp(2n+1|2m)` with the standard (B-I) and opposite (B-II) systems,
//! `osp(2n|2m)` likewise (D-I, D-II), `F(3|1)` and `G(3)`.
//!
//! Weights are coordinate vectors in the basis `δ_1..δ_m, ε_1..ε_n` (osp),
//! `δ, ε_1, ε_2, ε_3` (F(3|1)) or `δ, ε_1, ε_2` (G(3), with `ε_3 = -ε_1 - ε_2`
//! eliminated). The invariant form is normalised so that `(δ_i, δ_i) = 1` for
//! osp, `(ε_i, ε_i) = 1` for F(3|1) and `(ε_i, ε_j) = 3δ_ij - 1` for G(3);
//! every other entry is forced by the isotropic simple root being orthogonal
//! to ρ.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "B-I")]
    BI,
    #[serde(rename = "B-II")]
    BII,
    #[serde(rename = "D-I")]
    DI,
    #[serde(rename = "D-II")]
    DII,
    F31,
    G3,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::BI,
        Family::BII,
        Family::DI,
        Family::DII,
        Family::F31,
        Family::G3,
    ];

    /// Whether the family is parametrised by `(m, n)`.
    pub fn has_rank_params(self) -> bool {
        !matches!(self, Family::F31 | Family::G3)
    }

    pub fn min_m(self) -> usize {
        if self.has_rank_params() {
            1
        } else {
            0
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::BI | Family::BII => 1,
            Family::DI | Family::DII => 2,
            Family::F31 | Family::G3 => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::BI => "B-I",
            Family::BII => "B-II",
            Family::DI => "D-I",
            Family::DII => "D-II",
            Family::F31 => "F31",
            Family::G3 => "G3",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B-I" | "BI" => Ok(Family::BI),
            "B-II" | "BII" => Ok(Family::BII),
            "D-I" | "DI" => Ok(Family::DI),
            "D-II" | "DII" => Ok(Family::DII),
            "F31" | "F(3|1)" => Ok(Family::F31),
            "G3" | "G(3)" => Ok(Family::G3),
            other => Err(Error::Parse(format!("unknown case family `{other}`"))),
        }
    }
}

/// A family together with its rank parameters. `m` counts the `δ`s and `n` the
/// `ε`s; both are zero for F(3|1) and G(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseId {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl CaseId {
    pub fn new(family: Family, m: usize, n: usize) -> Result<Self> {
        let (m, n) = if family.has_rank_params() { (m, n) } else { (0, 0) };
        let id = CaseId { family, m, n };
        id.validate()?;
        Ok(id)
    }

    pub fn f31() -> Self {
        CaseId { family: Family::F31, m: 0, n: 0 }
    }

    pub fn g3() -> Self {
        CaseId { family: Family::G3, m: 0, n: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < self.family.min_m() || self.n < self.family.min_n() {
            return Err(Error::InvalidParams(format!(
                "{} requires m >= {} and n >= {} (got m={}, n={})",
                self.family,
                self.family.min_m(),
                self.family.min_n(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    /// Dimension of `h*`.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::F31 => 4,
            Family::G3 => 3,
            _ => self.m + self.n,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.has_rank_params() {
            write!(f, "{}:m={},n={}", self.family, self.m, self.n)
        } else {
            write!(f, "{}", self.family)
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, rest) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let family: Family = fam.parse()?;
        let (mut m, mut n) = (None, None);
        if let Some(rest) = rest {
            for part in rest.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value in `{part}`")))?;
                let v: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer `{v}`")))?;
                match k.trim() {
                    "m" => m = Some(v),
                    "n" => n = Some(v),
                    other => return Err(Error::Parse(format!("unknown key `{other}`"))),
                }
            }
        }
        if family.has_rank_params() {
            match (m, n) {
                (Some(m), Some(n)) => CaseId::new(family, m, n),
                _ => Err(Error::Parse(format!("{family} needs m and n, e.g. `{family}:m=2,n=1`"))),
            }
        } else {
            CaseId::new(family, 0, 0)
        }
    }
}

/// Parity class of a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootParity {
    Even,
    OddIsotropic,
    OddNonIsotropic,
}

impl RootParity {
    pub fn is_odd(self) -> bool {
        !matches!(self, RootParity::Even)
    }
}

/// An element of `h*` in the case's coordinate basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight<S> {
    pub coords: Vec<S>,
}

impl<S: Scalar> Weight<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Weight { coords }
    }

    pub fn zero(len: usize) -> Self {
        Weight { coords: vec![S::zero(); len] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut w = Self::zero(len);
        w.coords[i] = S::one();
        w
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight { coords: v.iter().map(|&x| S::from_int(x)).collect() }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &S) -> Self {
        Weight { coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&S::from_int(k))
    }

    /// Serialises as comma-separated `p/q` rationals.
    pub fn to_text(&self) -> String {
        self.coords.iter().map(|c| c.render()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_text(s: &str, len: usize) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| S::parse_rational(t).ok_or_else(|| Error::Parse(format!("bad rational `{t}`"))))
            .collect::<Result<Vec<S>>>()?;
        if coords.len() != len {
            return Err(Error::Parse(format!(
                "weight has {} coordinates, expected {len}",
                coords.len()
            )));
        }
        Ok(Weight { coords })
    }
}

impl<S: Scalar> Add for &Weight<S> {
    type Output = Weight<S>;
    fn add(self, rhs: &Weight<S>) -> Weight<S> {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Weight<S> {
    type Output = Weight<S>;
    fn sub(self, rhs: &Weight<S>) -> Weight<S> {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Weight<S> {
    type Output = Weight<S>;
    fn neg(self) -> Weight<S> {
        Weight { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }
}

impl<S: Scalar> Add for Weight<S> {
    type Output = Weight<S>;
    fn add(self, rhs: Weight<S>) -> Weight<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Weight<S> {
    type Output = Weight<S>;
    fn sub(self, rhs: Weight<S>) -> Weight<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Weight<S> {
    type Output = Weight<S>;
    fn neg(self) -> Weight<S> {
        -&self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootDatum<S> {
    pub weight: Weight<S>,
    pub parity: RootParity,
    pub positive: bool,
}

impl<S: Scalar> RootDatum<S> {
    pub fn negated(&self) -> Self {
        RootDatum { weight: -&self.weight, parity: self.parity, positive: !self.positive }
    }
}

/// Root system, form and Weyl vector of one case. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct AlgebraData<S> {
    pub case: CaseId,
    /// Names of the coordinate basis vectors (`δ1`, `ε2`, ...).
    pub basis_labels: Vec<String>,
    /// Gram matrix of the coordinate basis.
    pub form_matrix: Vec<Vec<S>>,
    /// Simple roots in simple-system order.
    pub simple_system: Vec<RootDatum<S>>,
    /// All positive roots: even roots first, then odd; each block sorted
    /// lexicographically (descending) on coordinates.
    pub positive_roots: Vec<RootDatum<S>>,
    /// Expansion of each positive root in the simple roots.
    pub simple_coefficients: Vec<Vec<i64>>,
    pub rho: Weight<S>,
    pub gamma: RootDatum<S>,
    /// Index of the isotropic simple root.
    pub isotropic_simple: usize,
    index: HashMap<Weight<S>, usize>,
}

struct RawCase<S> {
    labels: Vec<String>,
    form: Vec<Vec<S>>,
    simple: Vec<Weight<S>>,
    even: Vec<Weight<S>>,
    odd: Vec<Weight<S>>,
    gamma: Weight<S>,
}

fn osp_labels(m: usize, n: usize) -> Vec<String> {
    (1..=m).map(|i| format!("δ{i}")).chain((1..=n).map(|j| format!("ε{j}"))).collect()
}

fn diag<S: Scalar>(entries: &[i64]) -> Vec<Vec<S>> {
    let k = entries.len();
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { S::from_int(entries[i]) } else { S::zero() }).collect())
        .collect()
}

fn raw_osp<S: Scalar>(case: CaseId) -> RawCase<S> {
    let (m, n) = (case.m, case.n);
    let len = m + n;
    let d = |i: usize| Weight::<S>::unit(len, i - 1);
    let e = |j: usize| Weight::<S>::unit(len, m + j - 1);
    let mut form_diag = vec![1; m];
    form_diag.extend(vec![-1; n]);

    let mut even = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            even.push(&d(i) - &d(j));
            even.push(&d(i) + &d(j));
        }
    }
    for p in 1..=m {
        even.push(d(p).scale_int(2));
    }
    for k in 1..=n {
        for l in k + 1..=n {
            even.push(&e(k) - &e(l));
            even.push(&e(k) + &e(l));
        }
    }
    let odd_b = matches!(case.family, Family::BI | Family::BII);
    if odd_b {
        for q in 1..=n {
            even.push(e(q));
        }
    }

    let opposite = matches!(case.family, Family::BII | Family::DII);
    let mut odd = Vec::new();
    for p in 1..=m {
        if odd_b {
            odd.push(d(p));
        }
        for q in 1..=n {
            if opposite {
                odd.push(&e(q) + &d(p));
                odd.push(&e(q) - &d(p));
            } else {
                odd.push(&d(p) + &e(q));
                odd.push(&d(p) - &e(q));
            }
        }
    }

    let mut simple = Vec::new();
    if !opposite {
        for i in 1..m {
            simple.push(&d(i) - &d(i + 1));
        }
        simple.push(&d(m) - &e(1));
        for j in 1..n {
            simple.push(&e(j) - &e(j + 1));
        }
        match case.family {
            Family::BI => simple.push(e(n)),
            _ => simple.push(&e(n - 1) + &e(n)),
        }
    } else {
        for j in 1..n {
            simple.push(&e(j) - &e(j + 1));
        }
        simple.push(&e(n) - &d(1));
        for i in 1..m {
            simple.push(&d(i) - &d(i + 1));
        }
        match case.family {
            Family::BII => simple.push(d(m)),
            _ => simple.push(d(m).scale_int(2)),
        }
    }
    let gamma = match case.family {
        Family::BI => d(m),
        Family::BII => e(n),
        Family::DI => d(m).scale_int(2),
        Family::DII => &e(n - 1) + &e(n),
        _ => unreachable!(),
    };

    RawCase { labels: osp_labels(m, n), form: diag(&form_diag), simple, even, odd, gamma }
}

fn raw_f31<S: Scalar>() -> RawCase<S> {
    let w = |v: [i64; 4]| Weight::<S>::from_ints(&v);
    let half = S::from_frac(1, 2);
    let mut even = vec![w([1, 0, 0, 0]), w([0, 1, 0, 0]), w([0, 0, 1, 0]), w([0, 0, 0, 1])];
    for i in 1..4 {
        for j in i + 1..4 {
            let mut a = [0; 4];
            a[i] = 1;
            a[j] = -1;
            even.push(w(a));
            a[j] = 1;
            even.push(w(a));
        }
    }
    let mut odd = Vec::new();
    for signs in 0..8u32 {
        let s = |bit: u32| if signs & (1 << bit) == 0 { 1 } else { -1 };
        odd.push(w([1, s(2), s(1), s(0)]).scale(&half));
    }
    let simple = vec![
        w([0, 1, -1, 0]),
        w([0, 0, 1, -1]),
        w([0, 0, 0, 1]),
        w([1, -1, -1, -1]).scale(&half),
    ];
    RawCase {
        labels: vec!["δ".into(), "ε1".into(), "ε2".into(), "ε3".into()],
        form: diag(&[-3, 1, 1, 1]),
        simple,
        even,
        odd,
        gamma: w([1, 0, 0, 0]),
    }
}

fn raw_g3<S: Scalar>() -> RawCase<S> {
    // coordinates (δ, ε1, ε2); ε3 = (0, -1, -1)
    let w = |v: [i64; 3]| Weight::<S>::from_ints(&v);
    let eps = [w([0, 1, 0]), w([0, 0, 1]), w([0, -1, -1])];
    let delta = w([1, 0, 0]);
    let even = vec![
        delta.scale_int(2),
        eps[0].clone(),
        eps[1].clone(),
        -&eps[2],
        &eps[1] - &eps[0],
        &eps[0] - &eps[2],
        &eps[1] - &eps[2],
    ];
    let mut odd = vec![delta.clone()];
    for e in &eps {
        odd.push(&delta + e);
        odd.push(&delta - e);
    }
    let simple = vec![&eps[1] - &eps[0], eps[0].clone(), &delta + &eps[2]];
    let form = vec![
        vec![S::from_int(-2), S::zero(), S::zero()],
        vec![S::zero(), S::from_int(2), S::from_int(-1)],
        vec![S::zero(), S::from_int(-1), S::from_int(2)],
    ];
    RawCase {
        labels: vec!["δ".into(), "ε1".into(), "ε2".into()],
        form,
        simple,
        even,
        odd,
        gamma: delta,
    }
}

/// The Weyl vector as printed for each case (independent of the root lists).
pub fn rho_closed_form<S: Scalar>(case: CaseId) -> Weight<S> {
    let (m, n) = (case.m as i64, case.n as i64);
    let half = |num: i64| S::from_frac(num, 2);
    match case.family {
        Family::BI => Weight::new(
            (1..=m)
                .map(|i| half(2 * (m - n - i) + 1))
                .chain((1..=n).map(|j| half(2 * (n - j) + 1)))
                .collect(),
        ),
        Family::BII => Weight::new(
            (1..=m)
                .map(|i| half(2 * (m - i) + 1))
                .chain((1..=n).map(|j| half(2 * (n - m - j) + 1)))
                .collect(),
        ),
        Family::DI => Weight::new(
            (1..=m)
                .map(|i| S::from_int(m - n - i + 1))
                .chain((1..=n).map(|j| S::from_int(n - j)))
                .collect(),
        ),
        Family::DII => Weight::new(
            (1..=m)
                .map(|i| S::from_int(m - i + 1))
                .chain((1..=n).map(|j| S::from_int(n - m - j)))
                .collect(),
        ),
        Family::F31 => Weight::new(vec![half(-3), half(5), half(3), half(1)]),
        Family::G3 => Weight::new(vec![half(-5), S::from_int(2), S::from_int(3)]),
    }
}

impl<S: Scalar> AlgebraData<S> {
    pub fn build(case: CaseId) -> Result<Self> {
        case.validate()?;
        let raw = match case.family {
            Family::F31 => raw_f31(),
            Family::G3 => raw_g3(),
            _ => raw_osp(case),
        };
        let form = raw.form;
        let bil = |a: &Weight<S>, b: &Weight<S>| bilinear(&form, a, b);

        let classify_odd = |w: &Weight<S>| {
            if bil(w, w).is_zero() {
                RootParity::OddIsotropic
            } else {
                RootParity::OddNonIsotropic
            }
        };

        let mut even = raw.even;
        let mut odd = raw.odd;
        even.sort_by(|a, b| b.cmp(a));
        odd.sort_by(|a, b| b.cmp(a));
        let mut positive_roots = Vec::new();
        for w in even {
            positive_roots.push(RootDatum { weight: w, parity: RootParity::Even, positive: true });
        }
        for w in odd {
            let parity = classify_odd(&w);
            positive_roots.push(RootDatum { weight: w, parity, positive: true });
        }

        let mut index = HashMap::new();
        for (i, r) in positive_roots.iter().enumerate() {
            if index.insert(r.weight.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate root in {case}")));
            }
        }

        let simple_system: Vec<RootDatum<S>> = raw
            .simple
            .iter()
            .map(|w| {
                index
                    .get(w)
                    .map(|&i| positive_roots[i].clone())
                    .ok_or_else(|| Error::InvalidParams(format!("simple root not positive in {case}")))
            })
            .collect::<Result<_>>()?;

        let cols: Vec<Vec<S>> = simple_system.iter().map(|r| r.weight.coords.clone()).collect();
        let mut simple_coefficients = Vec::with_capacity(positive_roots.len());
        for r in &positive_roots {
            let c = linalg::coordinates(&cols, &r.weight.coords).ok_or_else(|| {
                Error::InvalidParams(format!("simple roots of {case} are not a basis"))
            })?;
            let ints: Vec<i64> = c
                .iter()
                .map(|x| x.to_int().filter(|&v| v >= 0))
                .collect::<Option<_>>()
                .ok_or_else(|| {
                    Error::InvalidParams(format!(
                        "root {} of {case} is not a non-negative integer combination of simple roots",
                        r.weight.to_text()
                    ))
                })?;
            simple_coefficients.push(ints);
        }

        let iso: Vec<usize> = simple_system
            .iter()
            .enumerate()
            .filter(|(_, r)| r.parity == RootParity::OddIsotropic)
            .map(|(i, _)| i)
            .collect();
        if iso.len() != 1 {
            return Err(Error::InvalidParams(format!(
                "{case}: expected exactly one isotropic simple root, found {}",
                iso.len()
            )));
        }

        let gamma_idx = *index
            .get(&raw.gamma)
            .ok_or_else(|| Error::InvalidParams("γ is not a positive root".into()))?;

        let mut data = AlgebraData {
            case,
            basis_labels: raw.labels,
            form_matrix: form,
            simple_system,
            gamma: positive_roots[gamma_idx].clone(),
            positive_roots,
            simple_coefficients,
            rho: Weight::zero(case.rank()),
            isotropic_simple: iso[0],
            index,
        };
        data.rho = data.rho_from_roots();
        Ok(data)
    }

    pub fn rank(&self) -> usize {
        self.form_matrix.len()
    }

    pub fn bilinear_form(&self, a: &Weight<S>, b: &Weight<S>) -> S {
        bilinear(&self.form_matrix, a, b)
    }

    pub fn pos_even(&self) -> impl Iterator<Item = &RootDatum<S>> {
        self.positive_roots.iter().filter(|r| r.parity == RootParity::Even)
    }

    pub fn pos_odd(&self) -> impl Iterator<Item = &RootDatum<S>> {
        self.positive_roots.iter().filter(|r| r.parity.is_odd())
    }

    /// `½Σ_{Φ₀⁺} α − ½Σ_{Φ₁⁺} β`.
    pub fn rho_from_roots(&self) -> Weight<S> {
        let mut acc = Weight::zero(self.rank());
        for r in &self.positive_roots {
            acc = if r.parity.is_odd() { &acc - &r.weight } else { &acc + &r.weight };
        }
        acc.scale(&S::from_frac(1, 2))
    }

    pub fn rho_closed_form(&self) -> Weight<S> {
        rho_closed_form(self.case)
    }

    /// `⟨λ, h_β⟩ = 2(λ,β)/(β,β)`.
    pub fn coroot_pairing(&self, lambda: &Weight<S>, beta: &Weight<S>) -> Result<S> {
        let bb = self.bilinear_form(beta, beta);
        if bb.is_zero() {
            return Err(Error::IsotropicCoroot(self.render_weight(beta)));
        }
        Ok(S::from_int(2) * self.bilinear_form(lambda, beta) / bb)
    }

    /// `s_β λ = λ − ⟨λ, h_β⟩ β`.
    pub fn reflect(&self, lambda: &Weight<S>, beta: &Weight<S>) -> Result<Weight<S>> {
        let c = self.coroot_pairing(lambda, beta)?;
        Ok(lambda - &beta.scale(&c))
    }

    pub fn root_index(&self, w: &Weight<S>) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Index of `±w` among the positive roots, with `true` when `w` itself is
    /// positive.
    pub fn signed_root_index(&self, w: &Weight<S>) -> Option<(usize, bool)> {
        if let Some(i) = self.root_index(w) {
            return Some((i, true));
        }
        self.root_index(&-w).map(|i| (i, false))
    }

    pub fn simple_index(&self, w: &Weight<S>) -> Option<usize> {
        self.simple_system.iter().position(|r| &r.weight == w)
    }

    pub fn height(&self, root: usize) -> i64 {
        self.simple_coefficients[root].iter().sum()
    }

    /// Positive representatives of the closure of `{β}` under reflections in
    /// the non-isotropic simple roots, in root order.
    pub fn wprime_orbit(&self, beta: &Weight<S>) -> Vec<usize> {
        let gens: Vec<&Weight<S>> = self
            .simple_system
            .iter()
            .filter(|r| r.parity != RootParity::OddIsotropic)
            .map(|r| &r.weight)
            .collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(beta.clone());
        queue.push_back(beta.clone());
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let r = self.reflect(&w, g).expect("non-isotropic generator");
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let mut out: Vec<usize> = seen
            .iter()
            .filter_map(|w| self.signed_root_index(w).map(|(i, _)| i))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Human-readable rendering: `δ1-ε2`, `2δ`, or a sign tuple `+--+` for the
    /// odd roots of F(3|1).
    pub fn render_weight(&self, w: &Weight<S>) -> String {
        if self.case.family == Family::F31 {
            let half = S::from_frac(1, 2);
            if w.coords.iter().all(|c| c.abs() == half) {
                return w
                    .coords
                    .iter()
                    .map(|c| if c.is_positive() { '+' } else { '-' })
                    .collect();
            }
        }
        let (coords, labels) = if self.case.family == Family::G3 {
            g3_symmetric(w)
        } else {
            (w.coords.clone(), self.basis_labels.clone())
        };
        let mut out = String::new();
        for (c, label) in coords.iter().zip(&labels) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !mag.is_one() {
                out.push_str(&mag.render());
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the notations used in the text: `δ1-ε2`, `d1+e2`, `2δ`,
    /// `1/2δ`, `ε3` (G(3), eliminated), and F(3|1) sign tuples like `+--+`.
    pub fn parse_weight(&self, text: &str) -> Result<Weight<S>> {
        let t: String = text
            .trim()
            .replace('−', "-")
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_' && *c != '{' && *c != '}')
            .collect();
        let len = self.rank();
        if self.case.family == Family::F31 && t.len() == 4 && t.chars().all(|c| c == '+' || c == '-')
        {
            let half = S::from_frac(1, 2);
            return Ok(Weight::new(
                t.chars().map(|c| if c == '+' { half.clone() } else { -half.clone() }).collect(),
            ));
        }
        let mut acc = Weight::zero(len);
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        if chars.is_empty() {
            return Err(Error::Parse("empty weight".into()));
        }
        while i < chars.len() {
            let mut sign = S::one();
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let coef: String = chars[start..i].iter().collect();
            let coef = if coef.is_empty() {
                S::one()
            } else {
                S::parse_rational(&coef).ok_or_else(|| Error::Parse(format!("bad coefficient `{coef}`")))?
            };
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let sym_start = i;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
            let sym: String = chars[sym_start..i].iter().collect();
            let idx_start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let idx: String = chars[idx_start..i].iter().collect();
            let idx: Option<usize> = if idx.is_empty() { None } else { idx.parse().ok() };
            let basis = self.symbol_weight(&sym, idx)?;
            acc = &acc + &basis.scale(&(sign * coef));
        }
        Ok(acc)
    }

    fn symbol_weight(&self, sym: &str, idx: Option<usize>) -> Result<Weight<S>> {
        let len = self.rank();
        let is_delta = matches!(sym, "δ" | "d" | "delta");
        let is_eps = matches!(sym, "ε" | "e" | "eps" | "epsilon");
        let bad = || Error::Parse(format!("unknown basis symbol `{sym}{}`", idx.map(|i| i.to_string()).unwrap_or_default()));
        match self.case.family {
            Family::F31 | Family::G3 => {
                if is_delta && idx.is_none() {
                    Ok(Weight::unit(len, 0))
                } else if is_eps {
                    match (self.case.family, idx) {
                        (_, Some(i)) if (1..=2).contains(&i) => Ok(Weight::unit(len, i)),
                        (Family::F31, Some(3)) => Ok(Weight::unit(len, 3)),
                        (Family::G3, Some(3)) => {
                            Ok(-&(&Weight::unit(len, 1) + &Weight::unit(len, 2)))
                        }
                        _ => Err(bad()),
                    }
                } else {
                    Err(bad())
                }
            }
            _ => {
                let (m, n) = (self.case.m, self.case.n);
                match idx {
                    Some(i) if is_delta && (1..=m).contains(&i) => Ok(Weight::unit(len, i - 1)),
                    Some(j) if is_eps && (1..=n).contains(&j) => Ok(Weight::unit(len, m + j - 1)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// G(3) weights over `δ, ε1, ε2, ε3` (with `ε1+ε2+ε3 = 0`) using as few `ε`s
/// as possible, so `-ε1-ε2` reads `ε3`.
fn g3_symmetric<S: Scalar>(w: &Weight<S>) -> (Vec<S>, Vec<String>) {
    let (a, b) = (w.coords[1].clone(), w.coords[2].clone());
    let mut best: Option<Vec<S>> = None;
    for t in [S::zero(), -a.clone(), -b.clone()] {
        let cand = vec![w.coords[0].clone(), a.clone() + t.clone(), b.clone() + t.clone(), t];
        // fewest ε terms, then smallest coefficients
        let cost = |v: &Vec<S>| {
            let nz = v[1..].iter().filter(|x| !x.is_zero()).count();
            let size = v[1..].iter().fold(S::zero(), |acc, x| acc + x.abs());
            (nz, size)
        };
        if best.as_ref().is_none_or(|bv| cost(&cand) < cost(bv)) {
            best = Some(cand);
        }
    }
    let labels = ["δ", "ε1", "ε2", "ε3"].map(String::from).to_vec();
    (best.expect("three candidates"), labels)
}

fn bilinear<S: Scalar>(form: &[Vec<S>], a: &Weight<S>, b: &Weight<S>) -> S {
    let mut acc = S::zero();
    for (i, ai) in a.coords.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coords.iter().enumerate() {
            let f = &form[i][j];
            if !f.is_zero() && !bj.is_zero() {
                acc = acc + ai.clone() * f.clone() * bj.clone();
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::Zero;

    fn case(s: &str) -> AlgebraData<Q> {
        AlgebraData::build(s.parse().unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> Q {
        Q::from_frac(a, b)
    }

    #[test]
    fn case_id_text_forms() {
        let c: CaseId = "B-I:m=2,n=1".parse().unwrap();
        assert_eq!(c, CaseId { family: Family::BI, m: 2, n: 1 });
        assert_eq!(c.to_string(), "B-I:m=2,n=1");
        assert_eq!("F31".parse::<CaseId>().unwrap(), CaseId::f31());
        assert_eq!("G3".parse::<CaseId>().unwrap().to_string(), "G3");
        assert!("D-I:m=1,n=1".parse::<CaseId>().is_err());
        assert!("B-II:m=0,n=1".parse::<CaseId>().is_err());
        assert!("B-I".parse::<CaseId>().is_err());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let err = AlgebraData::<Q>::build(CaseId { family: Family::DII, m: 1, n: 1 }).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn bi_m2_n1_roots_and_rho() {
        let a = case("B-I:m=2,n=1");
        let even: BTreeSet<String> = a.pos_even().map(|r| a.render_weight(&r.weight)).collect();
        let odd: BTreeSet<String> = a.pos_odd().map(|r| a.render_weight(&r.weight)).collect();
        let expect_even: BTreeSet<String> =
            ["δ1-δ2", "δ1+δ2", "2δ1", "2δ2", "ε1"].iter().map(|s| s.to_string()).collect();
        let expect_odd: BTreeSet<String> = ["δ1", "δ2", "δ1+ε1", "δ1-ε1", "δ2+ε1", "δ2-ε1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(even, expect_even);
        assert_eq!(odd, expect_odd);
        assert_eq!(a.rho, Weight::new(vec![q(1, 2), q(-1, 2), q(1, 2)]));
        assert_eq!(a.rho, a.rho_closed_form());
    }

    #[test]
    fn printed_rho_for_exceptional_cases() {
        let f = case("F31");
        assert_eq!(f.rho, Weight::new(vec![q(-3, 2), q(5, 2), q(3, 2), q(1, 2)]));
        let g = case("G3");
        assert_eq!(g.rho, Weight::new(vec![q(-5, 2), q(2, 1), q(3, 1)]));
        assert_eq!(f.positive_roots.len(), 18);
        assert_eq!(g.positive_roots.len(), 14);
    }

    #[test]
    fn rho_two_routes_agree_everywhere() {
        for fam in Family::ALL {
            let grid: Vec<(usize, usize)> = if fam.has_rank_params() {
                (1..=4).flat_map(|m| (fam.min_n()..=4).map(move |n| (m, n))).collect()
            } else {
                vec![(0, 0)]
            };
            for (m, n) in grid {
                let a = AlgebraData::<Q>::build(CaseId::new(fam, m, n).unwrap()).unwrap();
                assert_eq!(a.rho, a.rho_closed_form(), "{}", a.case);
                for r in &a.simple_system {
                    match r.parity {
                        RootParity::Even => {
                            assert_eq!(a.coroot_pairing(&a.rho, &r.weight).unwrap(), Q::from_int(1))
                        }
                        RootParity::OddIsotropic => {
                            assert!(a.bilinear_form(&a.rho, &r.weight).is_zero())
                        }
                        RootParity::OddNonIsotropic => {}
                    }
                }
            }
        }
    }

    #[test]
    fn form_values() {
        let a = case("B-I:m=2,n=2");
        let d1 = a.parse_weight("δ1").unwrap();
        let e1 = a.parse_weight("ε1").unwrap();
        assert_eq!(a.bilinear_form(&d1, &d1), Q::from_int(1));
        assert_eq!(a.bilinear_form(&e1, &e1), Q::from_int(-1));
        assert!(a.bilinear_form(&d1, &e1).is_zero());
        let g = case("G3");
        let d = g.parse_weight("δ").unwrap();
        assert_eq!(g.bilinear_form(&d, &d), Q::from_int(-2));
        let e3 = g.parse_weight("ε3").unwrap();
        assert_eq!(g.bilinear_form(&e3, &e3), Q::from_int(2));
        assert_eq!(g.bilinear_form(&e3, &g.parse_weight("ε1").unwrap()), Q::from_int(-1));
        let f = case("F31");
        let d = f.parse_weight("δ").unwrap();
        assert_eq!(f.bilinear_form(&d, &d), Q::from_int(-3));
    }

    #[test]
    fn coroot_examples() {
        for s in ["B-I:m=2,n=1", "B-II:m=2,n=2", "D-I:m=2,n=3", "D-II:m=1,n=2", "F31", "G3"] {
            let a = case(s);
            let g = &a.gamma.weight;
            assert_eq!(a.coroot_pairing(g, g).unwrap(), Q::from_int(2), "{s}");
        }
        let a = case("B-I:m=3,n=1");
        let r = a.parse_weight("δ1-δ2").unwrap();
        assert_eq!(a.coroot_pairing(&a.rho, &r).unwrap(), Q::from_int(1));
        for n in 2..5 {
            let a = AlgebraData::<Q>::build(CaseId::new(Family::DI, 2, n).unwrap()).unwrap();
            let g = a.parse_weight("2δ2").unwrap();
            assert_eq!(a.coroot_pairing(&a.rho, &g).unwrap(), Q::from_int(1 - n as i64));
        }
        let iso = a.simple_system[a.isotropic_simple].weight.clone();
        assert!(matches!(a.coroot_pairing(&a.rho, &iso), Err(Error::IsotropicCoroot(_))));
    }

    #[test]
    fn reflections() {
        let a = case("D-II:m=1,n=3");
        let e1 = a.parse_weight("ε1").unwrap();
        let b = a.parse_weight("ε1+ε2").unwrap();
        assert_eq!(a.reflect(&e1, &b).unwrap(), a.parse_weight("-ε2").unwrap());
        let g = a.gamma.weight.clone();
        assert_eq!(a.reflect(&g, &g).unwrap(), -&g);
        let fixed = a.parse_weight("ε1").unwrap();
        assert_eq!(a.reflect(&fixed, &g).unwrap(), fixed);
    }

    #[test]
    fn orbits() {
        let a = case("D-I:m=3,n=2");
        let orbit: BTreeSet<String> =
            a.wprime_orbit(&a.gamma.weight).iter().map(|&i| a.render_weight(&a.positive_roots[i].weight)).collect();
        assert_eq!(orbit, ["2δ1", "2δ2", "2δ3"].iter().map(|s| s.to_string()).collect());
        let sum = a.parse_weight("δ1+δ2").unwrap();
        let orbit: BTreeSet<String> =
            a.wprime_orbit(&sum).iter().map(|&i| a.render_weight(&a.positive_roots[i].weight)).collect();
        assert_eq!(orbit, ["δ1+δ2", "δ1+δ3", "δ2+δ3"].iter().map(|s| s.to_string()).collect());

        let b = case("B-II:m=2,n=3");
        let orbit: BTreeSet<String> =
            b.wprime_orbit(&b.gamma.weight).iter().map(|&i| b.render_weight(&b.positive_roots[i].weight)).collect();
        assert_eq!(orbit, ["ε1", "ε2", "ε3"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn parity_matches_isotropy() {
        for s in ["B-I:m=2,n=2", "B-II:m=2,n=1", "D-I:m=1,n=3", "D-II:m=2,n=2", "F31", "G3"] {
            let a = case(s);
            for r in &a.positive_roots {
                let iso = a.bilinear_form(&r.weight, &r.weight).is_zero();
                assert_eq!(iso, r.parity == RootParity::OddIsotropic, "{s} {}", a.render_weight(&r.weight));
            }
        }
        // δ_p and 2δ_p in type B; δ and 2δ in G(3)
        let a = case("B-II:m=2,n=1");
        for p in 1..=2 {
            let d = a.root_index(&a.parse_weight(&format!("δ{p}")).unwrap()).unwrap();
            let dd = a.root_index(&a.parse_weight(&format!("2δ{p}")).unwrap()).unwrap();
            assert_eq!(a.positive_roots[d].parity, RootParity::OddNonIsotropic);
            assert_eq!(a.positive_roots[dd].parity, RootParity::Even);
        }
        let g = case("G3");
        let d = g.root_index(&g.parse_weight("δ").unwrap()).unwrap();
        let dd = g.root_index(&g.parse_weight("2δ").unwrap()).unwrap();
        assert_eq!(g.positive_roots[d].parity, RootParity::OddNonIsotropic);
        assert_eq!(g.positive_roots[dd].parity, RootParity::Even);
    }

    #[test]
    fn sign_tuples_round_trip() {
        let f = case("F31");
        for r in f.pos_odd() {
            let s = f.render_weight(&r.weight);
            assert_eq!(s.len(), 4);
            assert_eq!(f.parse_weight(&s).unwrap(), r.weight);
        }
        let w = f.parse_weight("+--+").unwrap();
        assert_eq!(w, Weight::new(vec![q(1, 2), q(-1, 2), q(-1, 2), q(1, 2)]));
        assert_eq!(f.parse_weight("−+++").unwrap(), -&f.parse_weight("+---").unwrap());
    }

    #[test]
    fn g3_names_use_eps3() {
        let g = case("G3");
        let names: BTreeSet<String> = g.positive_roots.iter().map(|r| g.render_weight(&r.weight)).collect();
        for s in ["ε3", "δ+ε3", "δ-ε3", "ε1-ε3", "2δ", "δ"] {
            assert!(names.contains(s) || names.contains(&format!("-{s}")), "{s} in {names:?}");
        }
        for r in &g.positive_roots {
            assert_eq!(g.parse_weight(&g.render_weight(&r.weight)).unwrap(), r.weight);
        }
    }

    #[test]
    fn weight_text_round_trip() {
        let w = Weight::new(vec![q(1, 2), q(-3, 1), q(0, 1)]);
        assert_eq!(w.to_text(), "1/2,-3,0");
        assert_eq!(Weight::<Q>::parse_text("1/2,-3,0", 3).unwrap(), w);
        assert!(Weight::<Q>::parse_text("1/2,-3", 3).is_err());
    }
}
