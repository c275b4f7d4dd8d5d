//! Sparse Laurent polynomials and window-truncated multivariate series in the
//! six formal variables `t, Q1, Q2, E, Ê, u`.
//!
//! A [`MultiSeries`] carries an inclusive exponent box (its [`Window`]). Terms
//! created outside the box are dropped at construction time, so a product is
//! exact inside the box only when no out-of-box partial product can flow back
//! into it. Callers that build partition functions size their windows so this
//! holds; see `genfun`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Formal variables, declared in canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    T,
    Q1,
    Q2,
    E,
    EHat,
    U,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::T, Var::Q1, Var::Q2, Var::E, Var::EHat, Var::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Q1 => "Q1",
            Var::Q2 => "Q2",
            Var::E => "E",
            Var::EHat => "Ehat",
            Var::U => "u",
        }
    }
}

/// Exponent vector `(e_t, e_Q1, e_Q2, e_E, e_Ê, e_u)`; the derived order is the
/// canonical lexicographic term order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponents(pub [i32; 6]);

impl Exponents {
    pub const ZERO: Exponents = Exponents([0; 6]);

    pub fn of(pairs: &[(Var, i32)]) -> Self {
        let mut e = Self::ZERO;
        for &(v, k) in pairs {
            e.0[v.index()] += k;
        }
        e
    }

    pub fn get(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn with(mut self, v: Var, k: i32) -> Self {
        self.0[v.index()] = k;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 6]
    }
}

impl std::ops::Add for Exponents {
    type Output = Exponents;
    fn add(self, rhs: Exponents) -> Exponents {
        let mut out = self;
        for i in 0..6 {
            out.0[i] += rhs.0[i];
        }
        out
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let k = self.get(v);
            if k == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{}", v.symbol())?;
            } else {
                write!(f, "{}^{}", v.symbol(), k)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Inclusive per-variable exponent bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: [i32; 6],
    pub hi: [i32; 6],
}

impl Window {
    /// The window containing only the constant monomial.
    pub fn point() -> Self {
        Window { lo: [0; 6], hi: [0; 6] }
    }

    pub fn with(mut self, v: Var, lo: i32, hi: i32) -> Self {
        self.lo[v.index()] = lo;
        self.hi[v.index()] = hi;
        self
    }

    pub fn bounds(&self, v: Var) -> (i32, i32) {
        (self.lo[v.index()], self.hi[v.index()])
    }

    pub fn contains(&self, e: &Exponents) -> bool {
        (0..6).all(|i| self.lo[i] <= e.0[i] && e.0[i] <= self.hi[i])
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        (0..6).all(|i| other.lo[i] <= self.lo[i] && self.hi[i] <= other.hi[i])
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Window {
        let mut w = *self;
        for i in 0..6 {
            w.lo[i] = w.lo[i].min(other.lo[i]);
            w.hi[i] = w.hi[i].max(other.hi[i]);
        }
        w
    }

    /// Bounding box of the image of this window under a monomial substitution.
    pub fn image_under(&self, rules: &Substitution) -> Window {
        let mut lo = [0i64; 6];
        let mut hi = [0i64; 6];
        for v in Var::ALL {
            let (a, b) = self.bounds(v);
            let image = rules.image(v);
            for i in 0..6 {
                let c = image.0[i] as i64;
                let (x, y) = (c * a as i64, c * b as i64);
                lo[i] += x.min(y);
                hi[i] += x.max(y);
            }
        }
        Window {
            lo: lo.map(|x| x as i32),
            hi: hi.map(|x| x as i32),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Var::ALL
            .iter()
            .map(|v| {
                let (lo, hi) = self.bounds(*v);
                format!("{}:[{},{}]", v.symbol(), lo, hi)
            })
            .collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Integer weights on the variables, used to certify that an exponential or
/// logarithm series terminates inside a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading(pub [i32; 6]);

impl Grading {
    pub fn new(weights: &[(Var, i32)]) -> Self {
        let mut w = [0; 6];
        for &(v, k) in weights {
            w[v.index()] = k;
        }
        Grading(w)
    }

    pub fn weight(&self, e: &Exponents) -> i64 {
        (0..6).map(|i| self.0[i] as i64 * e.0[i] as i64).sum()
    }

    /// Largest weight attained by any exponent in the window.
    pub fn max_over(&self, w: &Window) -> i64 {
        (0..6)
            .map(|i| {
                let c = self.0[i] as i64;
                (c * w.lo[i] as i64).max(c * w.hi[i] as i64)
            })
            .sum()
    }
}

/// Simultaneous substitution of variables by Laurent monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    rules: BTreeMap<Var, Exponents>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rule(mut self, v: Var, image: Exponents) -> Self {
        self.rules.insert(v, image);
        self
    }

    pub fn image(&self, v: Var) -> Exponents {
        self.rules
            .get(&v)
            .copied()
            .unwrap_or_else(|| Exponents::ZERO.with(v, 1))
    }

    pub fn apply(&self, e: &Exponents) -> Exponents {
        let mut out = Exponents::ZERO;
        for v in Var::ALL {
            let k = e.get(v);
            if k == 0 {
                continue;
            }
            let image = self.image(v);
            for i in 0..6 {
                out.0[i] += k * image.0[i];
            }
        }
        out
    }
}

/// Exact finite Laurent polynomial in the six variables; no truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Exponents::ZERO)
    }

    pub fn monomial(c: Rational, e: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        add_into(&mut self.terms, e, c);
    }

    pub fn add_assign(&mut self, other: &LaurentPoly) {
        for (e, c) in &other.terms {
            add_into(&mut self.terms, *e, c.clone());
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_into(&mut out.terms, *e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                add_into(&mut terms, *e1 + *e2, c1 * c2);
            }
        }
        LaurentPoly { terms }
    }

    /// Sets `v = 0`. Fails if any term carries a negative power of `v`.
    pub fn specialize_zero(&self, v: Var) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            match e.get(v) {
                0 => out.add_term(*e, c.clone()),
                k if k < 0 => {
                    return Err(Error::Domain(format!(
                        "cannot set {} = 0 in a term with exponent {}",
                        v.symbol(),
                        k
                    )))
                }
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn min_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e.get(v)).min()
    }

    pub fn max_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e.get(v)).max()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<Exponents, Rational>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (e, c)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        if e.is_zero() {
            write!(f, "{}", format_rational(c))?;
        } else if c.is_one() {
            write!(f, "{e}")?;
        } else {
            write!(f, "({})*{}", format_rational(c), e)?;
        }
    }
    Ok(())
}

fn add_into(terms: &mut BTreeMap<Exponents, Rational>, e: Exponents, c: Rational) {
    use std::collections::btree_map::Entry;
    match terms.entry(e) {
        Entry::Vacant(slot) => {
            if !c.is_zero() {
                slot.insert(c);
            }
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

/// Truncated sparse Laurent series with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    window: Window,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiSeries {
    pub fn zero(window: Window) -> Self {
        MultiSeries { window, terms: BTreeMap::new() }
    }

    pub fn one(window: Window) -> Self {
        Self::monomial(window, Rational::one(), Exponents::ZERO)
    }

    pub fn monomial(window: Window, c: Rational, e: Exponents) -> Self {
        let mut s = Self::zero(window);
        if window.contains(&e) && !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    /// Truncates an exact polynomial into the window.
    pub fn from_poly(window: Window, p: &LaurentPoly) -> Self {
        MultiSeries {
            window,
            terms: p
                .terms()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
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

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Exponents::ZERO).cloned().unwrap_or_else(Rational::zero)
    }

    /// Stored coefficient, or zero. Exponents outside the window are an error,
    /// never a silent zero.
    pub fn coefficient(&self, e: &Exponents) -> Result<Rational> {
        if !self.window.contains(e) {
            return Err(out_of_window(e, &self.window));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    fn check_window(&self, other: &MultiSeries) -> Result<()> {
        if self.window != other.window {
            return Err(Error::Configuration(format!(
                "window mismatch: {} vs {}",
                self.window, other.window
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_window(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_into(&mut out.terms, *e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_window(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_into(&mut out.terms, *e, -c.clone());
        }
        Ok(out)
    }

    /// In-place sum; windows must agree.
    pub fn add_assign(&mut self, other: &MultiSeries) -> Result<()> {
        self.check_window(other)?;
        for (e, c) in &other.terms {
            add_into(&mut self.terms, *e, c.clone());
        }
        Ok(())
    }

    pub fn neg(&self) -> MultiSeries {
        MultiSeries {
            window: self.window,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> MultiSeries {
        if k.is_zero() {
            return MultiSeries::zero(self.window);
        }
        MultiSeries {
            window: self.window,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_window(other)?;
        Ok(self.mul_terms(other.terms.iter()))
    }

    /// Product with an exact polynomial, truncated to this series' window.
    pub fn mul_poly(&self, p: &LaurentPoly) -> MultiSeries {
        self.mul_terms(p.terms())
    }

    fn mul_terms<'a>(&self, other: impl Iterator<Item = (&'a Exponents, &'a Rational)>) -> MultiSeries {
        let mut terms = BTreeMap::new();
        for (e2, c2) in other {
            for (e1, c1) in &self.terms {
                let e = *e1 + *e2;
                if self.window.contains(&e) {
                    add_into(&mut terms, e, c1 * c2);
                }
            }
        }
        MultiSeries { window: self.window, terms }
    }

    /// Multiplies by `c * x^e`.
    pub fn mul_monomial(&self, c: &Rational, e: &Exponents) -> MultiSeries {
        if c.is_zero() {
            return MultiSeries::zero(self.window);
        }
        MultiSeries {
            window: self.window,
            terms: self
                .terms
                .iter()
                .filter_map(|(e1, c1)| {
                    let s = *e1 + *e;
                    self.window.contains(&s).then(|| (s, c1 * c))
                })
                .collect(),
        }
    }

    fn termination_bound(&self, grading: &Grading) -> Result<u64> {
        let mut min_weight = i64::MAX;
        for e in self.terms.keys() {
            let w = grading.weight(e);
            if w <= 0 {
                return Err(Error::Domain(format!(
                    "monomial {e} has non-positive grading weight {w}; series does not terminate"
                )));
            }
            min_weight = min_weight.min(w);
        }
        if min_weight == i64::MAX {
            return Ok(0);
        }
        let max_weight = grading.max_over(&self.window);
        Ok((max_weight.max(0) / min_weight) as u64 + 1)
    }

    /// `Σ a^k / k!` truncated to the window. The grading must give every
    /// monomial of `a` a strictly positive weight.
    pub fn exp(&self, grading: &Grading) -> Result<MultiSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp of a series with nonzero constant term".into()));
        }
        if !self.window.contains(&Exponents::ZERO) {
            return Err(Error::Configuration(format!(
                "window {} does not contain the constant monomial",
                self.window
            )));
        }
        let bound = self.termination_bound(grading)?;
        let mut result = MultiSeries::one(self.window);
        let mut power = MultiSeries::one(self.window);
        for k in 1..=bound {
            power = power.mul(self)?.scale(&Rational::new(1.into(), k.into()));
            if power.is_zero() {
                break;
            }
            result.add_assign(&power)?;
        }
        Ok(result)
    }

    /// `Σ (-1)^{k+1} (a-1)^k / k` truncated to the window; requires constant term 1.
    pub fn log(&self, grading: &Grading) -> Result<MultiSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::Domain(format!(
                "log requires constant term 1, found {}",
                format_rational(&self.constant_term())
            )));
        }
        let x = self.sub(&MultiSeries::one(self.window))?;
        let bound = x.termination_bound(grading)?;
        let mut result = MultiSeries::zero(self.window);
        let mut power = MultiSeries::one(self.window);
        for k in 1..=bound {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
            result.add_assign(&power.scale(&Rational::new(sign.into(), k.into())))?;
        }
        Ok(result)
    }

    /// Rewrites every exponent vector through the substitution. Any image term
    /// outside `target` is an error.
    pub fn monomial_substitute(&self, rules: &Substitution, target: &Window) -> Result<MultiSeries> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let image = rules.apply(e);
            if !target.contains(&image) {
                return Err(out_of_window(&image, target));
            }
            add_into(&mut terms, image, c.clone());
        }
        Ok(MultiSeries { window: *target, terms })
    }

    /// Shrinks to a sub-window. Exactness inside the smaller window is inherited.
    pub fn restrict(&self, window: &Window) -> Result<MultiSeries> {
        if !window.is_subset_of(&self.window) {
            return Err(Error::Configuration(format!(
                "cannot restrict series on {} to larger window {}",
                self.window, window
            )));
        }
        Ok(self.truncate_to(window))
    }

    /// Reinterprets the series on an arbitrary window, dropping outside terms.
    /// The caller vouches that in-window coefficients remain exact.
    pub fn truncate_to(&self, window: &Window) -> MultiSeries {
        MultiSeries {
            window: *window,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| window.contains(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Exponents) -> bool) -> MultiSeries {
        MultiSeries {
            window: self.window,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            window: self.window,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.0, format_rational(c)))
                .collect(),
        }
    }

    pub fn from_record(rec: &SeriesRecord) -> Result<MultiSeries> {
        let mut s = MultiSeries::zero(rec.window);
        for (e, c) in &rec.terms {
            let e = Exponents(*e);
            if !rec.window.contains(&e) {
                return Err(out_of_window(&e, &rec.window));
            }
            add_into(&mut s.terms, e, parse_rational(c)?);
        }
        Ok(s)
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)
    }
}

/// Serialized form: window plus `(exponent-vector, "p/q")` pairs in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub window: Window,
    pub terms: Vec<([i32; 6], String)>,
}

fn out_of_window(e: &Exponents, w: &Window) -> Error {
    Error::OutOfWindow {
        exponents: format!("{:?}", e.0),
        window: w.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn win() -> Window {
        Window::point()
            .with(Var::U, -3, 3)
            .with(Var::Q2, 0, 3)
            .with(Var::T, 0, 3)
    }

    fn m(c: Rational, pairs: &[(Var, i32)]) -> MultiSeries {
        MultiSeries::monomial(win(), c, Exponents::of(pairs))
    }

    #[test]
    fn add_cancels_and_prunes() {
        let a = m(int(1), &[]).add(&m(int(1), &[(Var::Q2, 1)])).unwrap();
        let b = m(int(-1), &[(Var::Q2, 1)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s, m(int(1), &[]));
        assert_eq!(s.len(), 1);
        let x = m(rat(2, 3), &[(Var::U, -1)]);
        assert_eq!(x.add(&MultiSeries::zero(win())).unwrap(), x);
        let y = m(int(1), &[(Var::U, -1)]);
        assert_eq!(y.add(&y).unwrap(), m(int(2), &[(Var::U, -1)]));
    }

    #[test]
    fn mul_examples() {
        let one = m(int(1), &[]);
        let q = m(int(1), &[(Var::Q2, 1)]);
        let p = one.add(&q).unwrap().mul(&one.sub(&q).unwrap()).unwrap();
        assert_eq!(p, one.sub(&m(int(1), &[(Var::Q2, 2)])).unwrap());

        let uq = m(int(1), &[(Var::U, -1), (Var::Q2, 1)]);
        assert_eq!(uq.mul(&uq).unwrap(), m(int(1), &[(Var::U, -2), (Var::Q2, 2)]));

        let small = Window::point().with(Var::Q2, 0, 1);
        let a = MultiSeries::one(small)
            .add(&MultiSeries::monomial(small, int(1), Exponents::of(&[(Var::Q2, 1)])))
            .unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coefficient(&Exponents::ZERO).unwrap(), int(1));
        assert_eq!(sq.coefficient(&Exponents::of(&[(Var::Q2, 1)])).unwrap(), int(2));
        assert_eq!(sq.len(), 2);
    }

    #[test]
    fn window_mismatch_is_configuration_error() {
        let a = MultiSeries::one(win());
        let b = MultiSeries::one(Window::point());
        assert!(matches!(a.add(&b), Err(Error::Configuration(_))));
        assert!(matches!(a.mul(&b), Err(Error::Configuration(_))));
    }

    #[test]
    fn exp_and_log() {
        let w = Window::point()
            .with(Var::U, -2, 0)
            .with(Var::Q2, 0, 2)
            .with(Var::T, 0, 2);
        let tg = Grading::new(&[(Var::T, 1)]);
        assert_eq!(MultiSeries::zero(w).exp(&tg).unwrap(), MultiSeries::one(w));

        let arg = MultiSeries::monomial(w, int(1), Exponents::of(&[(Var::T, 1), (Var::Q2, 1), (Var::U, -1)]));
        let e = arg.exp(&tg).unwrap();
        let expected = MultiSeries::one(w)
            .add(&arg)
            .unwrap()
            .add(&MultiSeries::monomial(
                w,
                rat(1, 2),
                Exponents::of(&[(Var::T, 2), (Var::Q2, 2), (Var::U, -2)]),
            ))
            .unwrap();
        assert_eq!(e, expected);
        assert_eq!(e.log(&tg).unwrap(), arg);

        let we = Window::point().with(Var::E, -2, 2).with(Var::U, -2, 0);
        let eg = Grading::new(&[(Var::E, 1)]);
        let ex = MultiSeries::monomial(we, int(1), Exponents::of(&[(Var::E, 1), (Var::U, -1)]))
            .exp(&eg)
            .unwrap();
        assert_eq!(ex.len(), 3);
        assert_eq!(
            ex.coefficient(&Exponents::of(&[(Var::E, 2), (Var::U, -2)])).unwrap(),
            rat(1, 2)
        );

        let wt = Window::point().with(Var::T, 0, 3);
        let onet = MultiSeries::one(wt).add(&MultiSeries::monomial(wt, int(1), Exponents::of(&[(Var::T, 1)]))).unwrap();
        let l = onet.log(&tg).unwrap();
        let coeffs: Vec<_> = (1..=3)
            .map(|k| l.coefficient(&Exponents::of(&[(Var::T, k)])).unwrap())
            .collect();
        assert_eq!(coeffs, vec![int(1), rat(-1, 2), rat(1, 3)]);
        assert!(MultiSeries::one(wt).log(&tg).unwrap().is_zero());
    }

    #[test]
    fn exp_domain_errors() {
        let w = win();
        let tg = Grading::new(&[(Var::T, 1)]);
        assert!(matches!(MultiSeries::one(w).exp(&tg), Err(Error::Domain(_))));
        let no_t = m(int(1), &[(Var::U, -1)]);
        assert!(matches!(no_t.exp(&tg), Err(Error::Domain(_))));
        assert!(matches!(m(int(2), &[]).log(&tg), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficient_contract() {
        let w = Window::point().with(Var::U, -3, 0).with(Var::Q2, 0, 1);
        let s = MultiSeries::one(w)
            .add(&MultiSeries::monomial(w, int(2), Exponents::of(&[(Var::Q2, 1)])))
            .unwrap();
        assert_eq!(s.coefficient(&Exponents::of(&[(Var::Q2, 1)])).unwrap(), int(2));
        assert_eq!(s.coefficient(&Exponents::of(&[(Var::U, -1)])).unwrap(), int(0));
        assert!(matches!(
            s.coefficient(&Exponents::of(&[(Var::Q2, 2)])),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn substitution_examples() {
        // Bl2(P^2) gradings use the Q1, E, Ehat slots for Q, F1, F2.
        let rules = Substitution::new()
            .rule(Var::Q1, Exponents::of(&[(Var::Q1, 1), (Var::Q2, 1), (Var::E, -1)]))
            .rule(Var::E, Exponents::of(&[(Var::Q1, 1), (Var::E, -1)]))
            .rule(Var::EHat, Exponents::of(&[(Var::Q2, 1), (Var::E, -1)]));
        let src = Window::point().with(Var::Q1, 0, 2).with(Var::E, 0, 1);
        let target = src.image_under(&rules);
        let q2 = MultiSeries::monomial(src, int(1), Exponents::of(&[(Var::Q1, 2)]));
        let img = q2.monomial_substitute(&rules, &target).unwrap();
        assert_eq!(
            img.coefficient(&Exponents::of(&[(Var::Q1, 2), (Var::Q2, 2), (Var::E, -2)])).unwrap(),
            int(1)
        );
        let f1q = MultiSeries::monomial(src, int(1), Exponents::of(&[(Var::Q1, 1), (Var::E, 1)]));
        let img = f1q.monomial_substitute(&rules, &target).unwrap();
        assert_eq!(
            img.coefficient(&Exponents::of(&[(Var::Q1, 2), (Var::Q2, 1), (Var::E, -2)])).unwrap(),
            int(1)
        );
        let id = Substitution::new();
        assert_eq!(q2.monomial_substitute(&id, &src).unwrap(), q2);
        let tiny = Window::point();
        assert!(matches!(
            q2.monomial_substitute(&rules, &tiny),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn record_round_trip() {
        let s = m(rat(-3, 7), &[(Var::U, -2), (Var::T, 1)])
            .add(&m(int(5), &[(Var::Q2, 3)]))
            .unwrap();
        let rec = s.to_record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: SeriesRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(MultiSeries::from_record(&back).unwrap(), s);
    }
}
