//! Energy-graded bosonic Fock spaces over a label set: the single-label space
//! used for Hurwitz numbers and the two-label space with labels `𝟙`, `𝓅`.
//!
//! Operators act on raw monomials `Π α_{-μ_i}[𝟙] Π α_{-ν_j}[𝓅] |0⟩`; the basis
//! vector `|μ,ν⟩` is that monomial divided by `z(μ) z(ν)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Exponents, LaurentPoly, MultiSeries, Rational, Var, Window};
use crate::partitions::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// Unit class; its parts are stored in `μ`.
    One,
    /// Point class; its parts are stored in `ν`.
    Point,
}

impl Label {
    fn slot(self) -> usize {
        match self {
            Label::One => 0,
            Label::Point => 1,
        }
    }
}

/// Labels with the symmetric pairing `g` in `[α_k[a], α_l[b]] = k δ_{k+l,0} g_{ab}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelSet {
    labels: Vec<Label>,
    pairing: [[i32; 2]; 2],
}

impl LabelSet {
    /// One label with `g = (1)`.
    pub fn hurwitz() -> Self {
        LabelSet { labels: vec![Label::One], pairing: [[1, 0], [0, 0]] }
    }

    /// Labels `𝟙, 𝓅` paired off-diagonally.
    pub fn severi() -> Self {
        LabelSet { labels: vec![Label::One, Label::Point], pairing: [[0, 1], [1, 0]] }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn is_single(&self) -> bool {
        self.labels.len() == 1
    }

    pub fn pairing(&self, a: Label, b: Label) -> i32 {
        self.pairing[a.slot()][b.slot()]
    }

    /// Basis of the energy-`s` subspace in canonical order.
    pub fn basis(&self, s: u32) -> Vec<BasisState> {
        if self.is_single() {
            crate::partitions::enumerate_partitions(s)
                .into_iter()
                .map(|mu| BasisState::new(mu, Partition::empty()))
                .collect()
        } else {
            crate::partitions::enumerate_pairs(s)
                .into_iter()
                .map(|(mu, nu)| BasisState::new(mu, nu))
                .collect()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisState {
    pub mu: Partition,
    pub nu: Partition,
}

impl BasisState {
    pub fn new(mu: Partition, nu: Partition) -> Self {
        BasisState { mu, nu }
    }

    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn energy(&self) -> u32 {
        self.mu.size() + self.nu.size()
    }

    pub fn length(&self) -> usize {
        self.mu.length() + self.nu.length()
    }

    /// `z(μ) z(ν)`, the factor between raw monomials and normalized basis vectors.
    pub fn z(&self) -> Rational {
        Rational::from_integer(self.mu.z() * self.nu.z())
    }

    pub fn part(&self, label: Label) -> &Partition {
        match label {
            Label::One => &self.mu,
            Label::Point => &self.nu,
        }
    }

    fn with_part_replaced(&self, label: Label, p: Partition) -> BasisState {
        match label {
            Label::One => BasisState::new(p, self.nu.clone()),
            Label::Point => BasisState::new(self.mu.clone(), p),
        }
    }

    pub fn swapped(&self) -> BasisState {
        BasisState::new(self.nu.clone(), self.mu.clone())
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.mu, self.nu)
    }
}

impl FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("basis state must be parenthesized: {s:?}")))?;
        let (mu, nu) = inner
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("basis state needs '|': {s:?}")))?;
        Ok(BasisState::new(mu.parse()?, nu.parse()?))
    }
}

fn check_mode(k: i64) -> Result<u32> {
    if k <= 0 {
        return Err(Error::Domain(format!("mode index must be positive, got {k}")));
    }
    u32::try_from(k).map_err(|_| Error::Domain(format!("mode index {k} too large")))
}

/// `α_{-k}[label] · raw(μ,ν)`.
pub fn create_raw(k: i64, label: Label, state: &BasisState) -> Result<BasisState> {
    let k = check_mode(k)?;
    Ok(state.with_part_replaced(label, state.part(label).with_part(k)))
}

/// `α_k[label] · raw(μ,ν)` as a list of raw monomials with coefficients. Each
/// label `b` with `g(label, b) ≠ 0` contributes `k · g · m_k` times the monomial
/// with one part `k` of label `b` removed. Empty on the vacuum.
pub fn annihilate_raw(
    labels: &LabelSet,
    k: i64,
    label: Label,
    state: &BasisState,
) -> Result<Vec<(BasisState, Rational)>> {
    let k = check_mode(k)?;
    let mut out = Vec::new();
    for &b in labels.labels() {
        let g = labels.pairing(label, b);
        if g == 0 {
            continue;
        }
        let part = state.part(b);
        let m = part.multiplicity(k);
        if let Some(rest) = part.without_part(k) {
            let c = Rational::from_integer((k as i64 * g as i64 * m as i64).into());
            out.push((state.with_part_replaced(b, rest), c));
        }
    }
    Ok(out)
}

/// `α_{-k}[label] |μ,ν⟩` on the normalized basis.
pub fn create(k: i64, label: Label, state: &BasisState) -> Result<(BasisState, Rational)> {
    let target = create_raw(k, label, state)?;
    let c = target.z() / state.z();
    Ok((target, c))
}

/// `α_k[label] |μ,ν⟩` on the normalized basis; empty when the result is zero.
pub fn annihilate(
    labels: &LabelSet,
    k: i64,
    label: Label,
    state: &BasisState,
) -> Result<Vec<(BasisState, Rational)>> {
    Ok(annihilate_raw(labels, k, label, state)?
        .into_iter()
        .map(|(s, c)| {
            let c = c * s.z() / state.z();
            (s, c)
        })
        .collect())
}

/// Coefficient of the pairing `⟨a|b⟩` as `(rational, u-exponent)`, or `None` if zero.
pub fn pairing_coefficient(labels: &LabelSet, a: &BasisState, b: &BasisState) -> Option<(Rational, i32)> {
    let matches = if labels.is_single() { a == b } else { a.mu == b.nu && a.nu == b.mu };
    matches.then(|| (Rational::one() / a.z(), -(a.length() as i32)))
}

/// Sparse combination of basis states with coefficients in a common window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    window: Window,
    components: BTreeMap<BasisState, MultiSeries>,
}

impl FockVector {
    pub fn zero(window: Window) -> Self {
        FockVector { window, components: BTreeMap::new() }
    }

    pub fn basis(window: Window, state: BasisState) -> Self {
        let mut v = Self::zero(window);
        v.add_component(state, &MultiSeries::one(window)).expect("same window");
        v
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn components(&self) -> impl Iterator<Item = (&BasisState, &MultiSeries)> {
        self.components.iter()
    }

    pub fn component(&self, state: &BasisState) -> MultiSeries {
        self.components.get(state).cloned().unwrap_or_else(|| MultiSeries::zero(self.window))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add_component(&mut self, state: BasisState, c: &MultiSeries) -> Result<()> {
        if c.window() != &self.window {
            return Err(Error::Configuration(format!(
                "coefficient window {} differs from vector window {}",
                c.window(),
                self.window
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.components.get_mut(&state) {
            Some(existing) => {
                existing.add_assign(c)?;
                if existing.is_zero() {
                    self.components.remove(&state);
                }
            }
            None => {
                self.components.insert(state, c.clone());
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        let mut out = self.clone();
        for (s, c) in &other.components {
            out.add_component(s.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> FockVector {
        self.map_coefficients(|c| c.scale(k))
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&MultiSeries) -> MultiSeries) -> FockVector {
        FockVector {
            window: self.window,
            components: self
                .components
                .iter()
                .map(|(s, c)| (s.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Components of energy `s`.
    pub fn energy_part(&self, s: u32) -> FockVector {
        FockVector {
            window: self.window,
            components: self
                .components
                .iter()
                .filter(|(st, _)| st.energy() == s)
                .map(|(st, c)| (st.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn energies(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.components.keys().map(BasisState::energy).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Coefficients on the raw monomials: `c / (z(μ) z(ν))`.
    pub fn raw_coefficients(&self) -> BTreeMap<BasisState, MultiSeries> {
        self.components
            .iter()
            .map(|(s, c)| (s.clone(), c.scale(&(Rational::one() / s.z()))))
            .collect()
    }

    pub fn from_raw_coefficients(window: Window, raw: &BTreeMap<BasisState, MultiSeries>) -> Result<FockVector> {
        let mut v = FockVector::zero(window);
        for (s, c) in raw {
            v.add_component(s.clone(), &c.scale(&s.z()))?;
        }
        Ok(v)
    }
}

/// Bilinear pairing `⟨bra|ket⟩`.
pub fn inner_product(labels: &LabelSet, bra: &FockVector, ket: &FockVector) -> Result<MultiSeries> {
    if bra.window() != ket.window() {
        return Err(Error::Configuration(format!(
            "inner product of vectors with windows {} and {}",
            bra.window(),
            ket.window()
        )));
    }
    let mut out = MultiSeries::zero(*bra.window());
    for (a, ca) in bra.components() {
        let partner = if labels.is_single() { a.clone() } else { a.swapped() };
        let Some(cb) = ket.components.get(&partner) else {
            continue;
        };
        let (w, ue) = pairing_coefficient(labels, a, &partner).expect("partner pairs nontrivially");
        out.add_assign(&ca.mul(cb)?.mul_monomial(&w, &Exponents::of(&[(Var::U, ue)])))?;
    }
    Ok(out)
}

pub fn energy(state: &BasisState) -> u32 {
    state.energy()
}

/// `var^{|·|}`: multiplies each component by `var` to the power of its energy.
pub fn apply_energy_scaling(var: Var, vector: &FockVector) -> FockVector {
    FockVector {
        window: vector.window,
        components: vector
            .components
            .iter()
            .map(|(s, c)| {
                let e = Exponents::ZERO.with(var, s.energy() as i32);
                (s.clone(), c.mul_monomial(&Rational::one(), &e))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect(),
    }
}

/// Sparse combination of basis states with exact polynomial coefficients;
/// the image of a basis vector under an operator.
pub type PolyVector = BTreeMap<BasisState, LaurentPoly>;

pub fn poly_vector_add_term(v: &mut PolyVector, state: BasisState, c: &LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let entry = v.entry(state.clone()).or_default();
    entry.add_assign(c);
    if entry.is_zero() {
        v.remove(&state);
    }
}

/// Exact pairing of two polynomial vectors.
pub fn poly_inner_product(labels: &LabelSet, bra: &PolyVector, ket: &PolyVector) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (a, ca) in bra {
        for (b, cb) in ket {
            if let Some((w, ue)) = pairing_coefficient(labels, a, b) {
                let m = LaurentPoly::monomial(w, Exponents::of(&[(Var::U, ue)]));
                out.add_assign(&ca.mul(cb).mul(&m));
            }
        }
    }
    out
}

/// Basis vector with coefficient one as a [`PolyVector`].
pub fn poly_basis(state: BasisState) -> PolyVector {
    let mut v = PolyVector::new();
    v.insert(state, LaurentPoly::one());
    v
}

pub fn poly_vector_is_zero(v: &PolyVector) -> bool {
    v.values().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn st(s: &str) -> BasisState {
        s.parse().unwrap()
    }

    #[test]
    fn raw_actions() {
        let sev = LabelSet::severi();
        assert_eq!(create_raw(2, Label::One, &st("((1)|())")).unwrap(), st("((2,1)|())"));
        assert_eq!(create_raw(1, Label::Point, &st("(()|())")).unwrap(), st("(()|(1))"));
        assert_eq!(
            annihilate_raw(&sev, 1, Label::Point, &st("((1,1)|())")).unwrap(),
            vec![(st("((1)|())"), int(2))]
        );
        assert_eq!(
            annihilate_raw(&sev, 2, Label::One, &st("(()|(2))")).unwrap(),
            vec![(st("(()|())"), int(2))]
        );
        assert!(annihilate_raw(&sev, 3, Label::One, &st("((3)|())")).unwrap().is_empty());
        assert!(create_raw(0, Label::One, &st("(()|())")).is_err());
        assert!(annihilate_raw(&sev, -1, Label::One, &st("(()|())")).is_err());
    }

    #[test]
    fn normalized_actions() {
        assert_eq!(create(1, Label::One, &st("((1)|())")).unwrap(), (st("((1,1)|())"), int(2)));
        let hur = LabelSet::hurwitz();
        assert_eq!(
            annihilate(&hur, 1, Label::One, &st("((1,1)|())")).unwrap(),
            vec![(st("((1)|())"), int(1))]
        );
    }

    #[test]
    fn pairing_examples() {
        let sev = LabelSet::severi();
        let w = Window::point().with(Var::U, -3, 0);
        let ip = |a: &str, b: &str| {
            inner_product(&sev, &FockVector::basis(w, st(a)), &FockVector::basis(w, st(b))).unwrap()
        };
        let u = |k: i32| Exponents::of(&[(Var::U, k)]);
        assert_eq!(ip("((1)|())", "(()|(1))").coefficient(&u(-1)).unwrap(), int(1));
        assert!(ip("((1)|())", "((1)|())").is_zero());
        assert_eq!(ip("((2,1)|())", "(()|(2,1))").coefficient(&u(-2)).unwrap(), rat(1, 2));
        let other = Window::point().with(Var::U, -2, 0);
        assert!(inner_product(&sev, &FockVector::basis(w, st("(()|())")), &FockVector::basis(other, st("(()|())"))).is_err());
    }

    #[test]
    fn energy_scaling() {
        assert_eq!(st("((2,1)|(3))").energy(), 6);
        let w = Window::point().with(Var::Q1, 0, 3);
        let v = apply_energy_scaling(Var::Q1, &FockVector::basis(w, st("((1)|())")));
        assert_eq!(
            v.component(&st("((1)|())")).coefficient(&Exponents::of(&[(Var::Q1, 1)])).unwrap(),
            int(1)
        );
        let vac = apply_energy_scaling(Var::Q1, &FockVector::basis(w, BasisState::vacuum()));
        assert_eq!(vac.component(&BasisState::vacuum()).constant_term(), int(1));
    }

    #[test]
    fn text_form_round_trip() {
        let s = st("((2,1)|(3))");
        assert_eq!(s.to_string(), "((2,1)|(3))");
        assert_eq!(BasisState::vacuum().to_string(), "(()|())");
        assert!("((1)(2))".parse::<BasisState>().is_err());
    }
}
