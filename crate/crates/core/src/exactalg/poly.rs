//! Dense univariate polynomials over the rationals, bivariate polynomials in
//! `(u, Q2)` stored as polynomials in `Q2` over `Q[u]`, and the rational
//! function field built on them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, Rational};
use super::series::{Exponents, MultiSeries, Var, Window};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^d`
    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, k: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lc;
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * b;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Integrity("inexact univariate polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&(Rational::one() / self.leading()))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match d {
                0 => format_rational(c),
                1 => format!("{}*{var}", format_rational(c)),
                _ => format!("{}*{var}^{d}", format_rational(c)),
            });
        }
        parts.join(" + ")
    }
}

/// Polynomial in `Q2` whose coefficients are polynomials in `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![UniPoly::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![UniPoly::constant(c)])
    }

    /// `c * u^i * Q2^j`
    pub fn monomial(c: Rational, u_deg: usize, q_deg: usize) -> Self {
        let mut coeffs = vec![UniPoly::zero(); q_deg + 1];
        coeffs[q_deg] = UniPoly::monomial(c, u_deg);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn coeff(&self, q_deg: usize) -> UniPoly {
        self.coeffs.get(q_deg).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn u_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    fn leading(&self) -> UniPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Terms `(u_deg, q_deg, coefficient)` sorted by `(q_deg, u_deg)`.
    pub fn terms(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    out.push((i, j, a.clone()));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { coeffs: self.coeffs.iter().map(UniPoly::neg).collect() }
    }

    pub fn scale(&self, k: &Rational) -> BiPoly {
        BiPoly::from_coeffs(self.coeffs.iter().map(|c| c.scale(k)).collect())
    }

    pub fn mul_uni(&self, k: &UniPoly) -> BiPoly {
        BiPoly::from_coeffs(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    fn shift_q(&self, k: usize) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut coeffs = vec![UniPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BiPoly { coeffs }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![UniPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly::from_coeffs(out)
    }

    /// Exact quotient; fails if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &BiPoly) -> Result<BiPoly> {
        let dd = divisor
            .q_degree()
            .ok_or_else(|| Error::Domain("bivariate division by zero".into()))?;
        let lc = divisor.leading();
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some(rd) = rem.q_degree() {
            if rd < dd {
                break;
            }
            let (c, r) = rem.leading().div_rem(&lc)?;
            if !r.is_zero() {
                return Err(Error::Integrity("inexact bivariate polynomial division".into()));
            }
            let term = BiPoly::from_coeffs(vec![c]).shift_q(rd - dd);
            rem = rem.sub(&term.mul(divisor));
            quot = quot.add(&term);
        }
        if !rem.is_zero() {
            return Err(Error::Integrity("inexact bivariate polynomial division".into()));
        }
        Ok(quot)
    }

    /// Monic gcd of the `Q[u]` coefficients.
    pub fn content(&self) -> UniPoly {
        self.coeffs.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let c = self.content();
        BiPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|x| x.exact_div(&c).expect("content divides coefficients"))
                .collect(),
        )
    }

    fn pseudo_rem(&self, b: &BiPoly) -> BiPoly {
        let d = b.q_degree().expect("nonzero divisor");
        let lcb = b.leading();
        let mut r = self.clone();
        while let Some(rd) = r.q_degree() {
            if rd < d {
                break;
            }
            let lcr = r.leading();
            r = r.mul_uni(&lcb).sub(&b.mul_uni(&lcr).shift_q(rd - d));
        }
        r
    }

    /// Greatest common divisor via primitive remainder sequences.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.primitive_part().mul_uni(&other.content()).normalized();
        }
        if other.is_zero() {
            return self.primitive_part().mul_uni(&self.content()).normalized();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.q_degree() < b.q_degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.mul_uni(&c).normalized()
    }

    /// Leading coefficient under the order "highest Q2 degree, then highest u degree".
    pub fn leading_rational(&self) -> Rational {
        self.leading().leading()
    }

    /// Scaled so that the leading rational coefficient is one.
    pub fn normalized(&self) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        self.scale(&(Rational::one() / self.leading_rational()))
    }

    pub fn to_record(&self) -> Vec<(usize, usize, String)> {
        self.terms()
            .into_iter()
            .map(|(i, j, c)| (i, j, format_rational(&c)))
            .collect()
    }

    pub fn from_record(terms: &[(usize, usize, String)]) -> Result<BiPoly> {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p = p.add(&BiPoly::monomial(parse_rational(c)?, *i, *j));
        }
        Ok(p)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = terms
            .iter()
            .rev()
            .map(|(i, j, c)| {
                let mut s = format_rational(c);
                if *i > 0 {
                    s.push_str(&format!("*u^{i}"));
                }
                if *j > 0 {
                    s.push_str(&format!("*Q2^{j}"));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Element of `Q(u, Q2)`. Arithmetic does not reduce; [`RationalFunction::canonical`]
/// does, and equality is decided by cross multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: BiPoly,
    den: BiPoly,
}

impl RationalFunction {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: BiPoly) -> Self {
        RationalFunction { num: p, den: BiPoly::one() }
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::Domain("division by the zero rational function".into()));
        }
        Ok(RationalFunction { num: self.num.mul(&other.den), den: self.den.mul(&other.num) })
    }

    /// Lowest terms, denominator with leading coefficient one.
    pub fn canonical(&self) -> RationalFunction {
        if self.num.is_zero() {
            return RationalFunction { num: BiPoly::zero(), den: BiPoly::one() };
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g).expect("gcd divides numerator");
        let den = self.den.exact_div(&g).expect("gcd divides denominator");
        let k = Rational::one() / den.leading_rational();
        RationalFunction { num: num.scale(&k), den: den.scale(&k) }
    }

    /// Expansion as a power series in `Q2` (through `q2_max`) with Laurent
    /// coefficients in `u`. The `Q2^0` part of the denominator must be a single
    /// power of `u`; the returned window covers every `u` power that can occur,
    /// so all coefficients in it are exact.
    pub fn to_series(&self, q2_max: i32) -> Result<MultiSeries> {
        let d0 = self.den.coeff(0);
        let nonzero: Vec<usize> = (0..d0.coeffs().len()).filter(|&i| !d0.coeff(i).is_zero()).collect();
        if nonzero.len() != 1 {
            return Err(Error::Domain(format!(
                "denominator at Q2 = 0 is not a monomial in u: {}",
                d0.fmt_in("u")
            )));
        }
        let k = nonzero[0] as i32;
        let c = d0.coeff(nonzero[0]);
        let du = self.den.u_degree().unwrap_or(0) as i32;
        let nu = self.num.u_degree().unwrap_or(0) as i32;
        let lo = -(q2_max + 1) * k;
        let hi = q2_max * (du - k).max(0) + nu;
        let window = Window::point().with(Var::U, lo, hi).with(Var::Q2, 0, q2_max);

        let to_series = |p: &BiPoly, shift: i32, scale: &Rational| {
            let mut s = MultiSeries::zero(window);
            for (i, j, a) in p.terms() {
                let e = Exponents::of(&[(Var::U, i as i32 + shift), (Var::Q2, j as i32)]);
                if window.contains(&e) {
                    s.add_assign(&MultiSeries::monomial(window, a * scale, e)).expect("same window");
                }
            }
            s
        };
        // 1/den = (c u^k)^{-1} * Σ_j (-x)^j with x = (den - c u^k) / (c u^k)
        let inv_lead = Rational::one() / &c;
        let shift = Exponents::of(&[(Var::U, -k)]);
        let x = to_series(&self.den.sub(&BiPoly::monomial(c.clone(), k as usize, 0)), -k, &inv_lead);
        let mut inv = MultiSeries::one(window);
        let mut power = MultiSeries::one(window);
        for _ in 0..q2_max {
            power = power.mul(&x)?.neg();
            if power.is_zero() {
                break;
            }
            inv.add_assign(&power)?;
        }
        let inv = inv.mul_monomial(&inv_lead, &shift);
        to_series(&self.num, 0, &Rational::one()).mul(&inv)
    }

    pub fn to_record(&self) -> RationalFunctionRecord {
        RationalFunctionRecord { num: self.num.to_record(), den: self.den.to_record() }
    }

    pub fn from_record(rec: &RationalFunctionRecord) -> Result<RationalFunction> {
        RationalFunction::new(BiPoly::from_record(&rec.num)?, BiPoly::from_record(&rec.den)?)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `{"num": [[u_deg, q2_deg, "p/q"], ...], "den": [...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionRecord {
    pub num: Vec<(usize, usize, String)>,
    pub den: Vec<(usize, usize, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn u() -> BiPoly {
        BiPoly::monomial(int(1), 1, 0)
    }
    fn q() -> BiPoly {
        BiPoly::monomial(int(1), 0, 1)
    }

    #[test]
    fn unipoly_division_and_gcd() {
        let x = UniPoly::monomial(int(1), 1);
        let a = x.sub(&UniPoly::one()).mul(&x.add(&UniPoly::constant(int(2))));
        let b = x.sub(&UniPoly::one()).mul(&x.add(&UniPoly::constant(int(3))));
        assert_eq!(a.gcd(&b), x.sub(&UniPoly::one()));
        let (qq, r) = a.div_rem(&b).unwrap();
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(UniPoly::one().div_rem(&UniPoly::zero()).is_err());
    }

    #[test]
    fn bipoly_gcd_and_exact_division() {
        let f = u().sub(&q());
        let g = u().mul(&u()).add(&q().scale(&int(3))).add(&BiPoly::one());
        let h = u().add(&q().mul(&q()));
        let a = f.mul(&g);
        let b = f.mul(&h).scale(&rat(2, 3));
        let gcd = a.gcd(&b);
        assert_eq!(gcd, f.normalized());
        assert_eq!(a.exact_div(&f).unwrap(), g);
        assert!(g.exact_div(&h).is_err());
    }

    #[test]
    fn canonical_form_reduces() {
        let f = u().sub(&q());
        let r = RationalFunction::new(u().mul(&f), f.mul(&f).scale(&int(4))).unwrap();
        let c = r.canonical();
        assert_eq!(c.denominator(), &f.normalized());
        assert_eq!(c, r);
        assert!(RationalFunction::new(BiPoly::one(), BiPoly::zero()).is_err());
    }

    #[test]
    fn geometric_series_expansion() {
        // u / (u - Q2) = Σ_k Q2^k u^{-k}
        let r = RationalFunction::new(u(), u().sub(&q())).unwrap();
        let s = r.to_series(4).unwrap();
        for k in 0..=4 {
            let e = Exponents::of(&[(Var::Q2, k), (Var::U, -k)]);
            assert_eq!(s.coefficient(&e).unwrap(), int(1));
        }
        assert_eq!(s.len(), 5);
    }
}
