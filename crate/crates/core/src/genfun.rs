//! Partition functions assembled from matrix elements and traces, extraction of
//! enumerative invariants, and the reduction from the blown-up quadric to `P²`.
//!
//! Stored series use the `t^n/n!` normalization; `n!` is applied at extraction.
//!
//! Windows are chosen so that no truncation ever happens in `u`: every `u` power
//! that can occur is inside the window. Truncation in `Q1`, `Q2`, `t` is exact
//! because those exponents never decrease. The exceptional variables only enter
//! through the cap vectors `w`, `ŵ`, which are expanded in a wider window first.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::as_string;
use crate::exactalg::{factorial, Exponents, Grading, LaurentPoly, MultiSeries, Rational, Substitution, Var, Window};
use crate::fock::{apply_energy_scaling, inner_product, BasisState, FockVector, LabelSet};
use crate::operators::{exp_apply, GradedOperator, MH, MS, NS};
use crate::partitions::{enumerate_partitions, Partition};

pub const SERIES_CONVENTION: &str = "t^n/n!";

/// Grading under which every non-constant term of the partition functions here
/// has positive weight, so `exp` and `log` terminate.
pub fn class_grading() -> Grading {
    Grading::new(&[(Var::T, 1), (Var::Q1, 2), (Var::Q2, 2), (Var::E, 1), (Var::EHat, 1)])
}

/// Boundary conditions at the two ends of the tube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cap {
    /// `v = Σ_d |(1^d), ∅⟩`
    V,
    /// `w`, in the exceptional variable `E`.
    W,
    /// `ŵ`, in the exceptional variable `Ê`.
    WHat,
}

impl Cap {
    fn var(self) -> Option<Var> {
        match self {
            Cap::V => None,
            Cap::W => Some(Var::E),
            Cap::WHat => Some(Var::EHat),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    #[serde(rename = "p1xp1")]
    P1xP1,
    HurwitzP1,
    HurwitzElliptic,
    #[serde(rename = "exp1")]
    ExP1,
    #[serde(rename = "bl1_p1xp1")]
    Bl1P1xP1,
    Bl2P2,
    P2,
}

impl Surface {
    pub fn tag(self) -> &'static str {
        match self {
            Surface::P1xP1 => "P1xP1",
            Surface::HurwitzP1 => "hurwitz-P1",
            Surface::HurwitzElliptic => "hurwitz-E",
            Surface::ExP1 => "ExP1",
            Surface::Bl1P1xP1 => "Bl1(P1xP1)",
            Surface::Bl2P2 => "Bl2(P2)",
            Surface::P2 => "P2",
        }
    }

    /// Variables holding the curve class.
    pub fn class_vars(self) -> &'static [Var] {
        match self {
            Surface::P1xP1 | Surface::ExP1 => &[Var::Q1, Var::Q2],
            Surface::HurwitzP1 | Surface::HurwitzElliptic | Surface::P2 => &[Var::Q1],
            Surface::Bl1P1xP1 => &[Var::Q1, Var::Q2, Var::E],
            Surface::Bl2P2 => &[Var::Q1, Var::E, Var::EHat],
        }
    }

    /// Twice the power of `u` carried by `t^n` times the class monomial.
    fn doubled_u_exponent(self, class: &[i32], n: i32) -> i32 {
        match self {
            Surface::P1xP1 => 2 * (n - 2 * class[0] - 2 * class[1]),
            Surface::HurwitzP1 => n - 2 * class[0],
            Surface::HurwitzElliptic => n,
            Surface::ExP1 => 2 * (n - 2 * class[1]),
            Surface::Bl1P1xP1 => 2 * (n - 2 * class[0] - 2 * class[1] - class[2]),
            Surface::Bl2P2 => 2 * (n - 3 * class[0] - class[1] - class[2]),
            Surface::P2 => 2 * (n - 3 * class[0]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub g: i32,
    /// Exponents of the class variables of the surface.
    pub class: Vec<i32>,
    /// Number of point (or branch point) insertions.
    pub n: u32,
    #[serde(with = "as_string")]
    pub value: Rational,
    pub connected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTable {
    pub surface: Surface,
    pub rows: Vec<InvariantRow>,
}

impl InvariantTable {
    pub fn get(&self, g: i32, class: &[i32]) -> Option<&Rational> {
        self.rows.iter().find(|r| r.g == g && r.class == class).map(|r| &r.value)
    }

    /// Like [`InvariantTable::get`], with absent rows read as zero.
    pub fn value(&self, g: i32, class: &[i32]) -> Rational {
        self.get(g, class).cloned().unwrap_or_else(Rational::zero)
    }
}

fn u_range_p1xp1(d1: i32, d2: i32, t: i32) -> (i32, i32) {
    (-(2 * d1 + 2 * d2 + t), t * (d1 - 1).max(1))
}

/// Working window for the `P¹×P¹` partition function through `Q1^{d1} Q2^{d2} t^t`.
pub fn p1xp1_window(d1: u32, d2: u32, t: u32) -> Window {
    let (d1, d2, t) = (d1 as i32, d2 as i32, t as i32);
    let (lo, hi) = u_range_p1xp1(d1, d2, t);
    Window::point()
        .with(Var::T, 0, t)
        .with(Var::Q1, 0, d1)
        .with(Var::Q2, 0, d2)
        .with(Var::U, lo, hi)
}

/// Working window for blow-up partition functions. Exceptional exponents lie in
/// `[-(d1+d2), e_max]`.
pub fn blowup_window(d1: u32, d2: u32, t: u32, e_max: i32, bra: Cap, ket: Cap) -> Window {
    let (d1i, d2i, ti) = (d1 as i32, d2 as i32, t as i32);
    let mut w = p1xp1_window(d1, d2, t);
    let caps = [bra, ket].iter().filter(|c| c.var().is_some()).count() as i32;
    for var in [bra.var(), ket.var()].into_iter().flatten() {
        w = w.with(var, -(d1i + d2i), e_max);
    }
    let (lo, hi) = w.bounds(Var::U);
    let cap_lo = -(caps * (e_max.max(0) + 2 * d2i + d1i) + d1i + ti);
    let log_lo = -(caps * e_max.max(0) + 2 * d1i + 2 * d2i);
    w.with(Var::U, lo.min(cap_lo).min(log_lo), hi)
}

fn labels_for(op: &dyn GradedOperator) -> LabelSet {
    op.labels()
}

/// `v = Σ_{d ≤ d_max} |(1^d), ∅⟩` (or `Σ |(1^d)⟩` on the single-label space).
pub fn boundary_v(window: Window, d_max: u32) -> FockVector {
    let mut v = FockVector::zero(window);
    for d in 0..=d_max {
        let state = BasisState::new(Partition::repeated(1, d as usize), Partition::empty());
        v.add_component(state, &MultiSeries::one(window)).expect("same window");
    }
    v
}

/// `exp(Q2/(uX) + X/u)` for the exceptional variable `X`.
fn cap_prefactor(window: Window, x: Var) -> Result<MultiSeries> {
    let arg = MultiSeries::monomial(window, Rational::one(), Exponents::of(&[(Var::Q2, 1), (Var::U, -1), (x, -1)]))
        .add(&MultiSeries::monomial(window, Rational::one(), Exponents::of(&[(x, 1), (Var::U, -1)])))?;
    arg.exp(&Grading::new(&[(Var::Q2, 2), (x, 1)]))
}

/// Cap vector `w` (or `ŵ`) through energy `d1_max`:
/// `exp(Q2/(uX) + X/u) Σ_{m,ν} X^{-|ν|} Π_j (-1)^{ν_j-1}/ν_j |(1^m), ν⟩`.
///
/// The exponential is expanded in a window wide enough that every term with
/// `X`-exponent inside `window` is exact, then truncated to `window`.
pub fn build_w(window: Window, which: Cap, d1_max: u32) -> Result<FockVector> {
    let x = which
        .var()
        .ok_or_else(|| Error::Domain("build_w needs the W or WHat cap".into()))?;
    let (x_lo, x_hi) = window.bounds(x);
    let (_, d2) = window.bounds(Var::Q2);
    let d1 = d1_max as i32;
    if x_lo > -(d1 + d2) {
        return Err(Error::Configuration(format!(
            "window {window} must admit {}^{} for caps through energy {d1_max}",
            x.symbol(),
            -(d1 + d2)
        )));
    }
    let wide_hi = x_hi.max(0) + d2 + 2 * d1;
    let (u_lo, u_hi) = window.bounds(Var::U);
    let wide = window
        .with(x, x_lo, wide_hi)
        .with(Var::U, u_lo.min(-(wide_hi + d2)), u_hi.max(0));
    let prefactor = cap_prefactor(wide, x)?;

    let mut out = FockVector::zero(window);
    for s in 0..=d1_max {
        for nu_size in 0..=s {
            let m = (s - nu_size) as usize;
            for nu in enumerate_partitions(nu_size) {
                let mut c = Rational::one();
                for &p in nu.parts() {
                    let sign = if p % 2 == 1 { 1 } else { -1 };
                    c *= Rational::new(BigInt::from(sign), BigInt::from(p));
                }
                let e = Exponents::ZERO.with(x, -(nu_size as i32));
                let coeff = prefactor.mul_monomial(&c, &e).truncate_to(&window);
                out.add_component(BasisState::new(Partition::repeated(1, m), nu), &coeff)?;
            }
        }
    }
    Ok(out)
}

fn cap_vector(window: Window, cap: Cap, d1_max: u32) -> Result<FockVector> {
    match cap {
        Cap::V => Ok(boundary_v(window, d1_max)),
        _ => build_w(window, cap, d1_max),
    }
}

/// `exp(t Q2 / u)`
pub fn prefactor_series(window: Window) -> Result<MultiSeries> {
    MultiSeries::monomial(window, Rational::one(), Exponents::of(&[(Var::T, 1), (Var::Q2, 1), (Var::U, -1)]))
        .exp(&Grading::new(&[(Var::T, 1)]))
}

/// `⟨bra | Q1^{|·|} exp(t op) | ket⟩`
pub fn matrix_element(op: &dyn GradedOperator, bra: &FockVector, ket: &FockVector, t: u32) -> Result<MultiSeries> {
    let x = exp_apply(op, ket, t)?;
    let x = apply_energy_scaling(Var::Q1, &x);
    inner_product(&labels_for(op), bra, &x)
}

/// `tr(Q1^{|·|} exp(t op))` over energies `0..=s_max`.
pub fn trace_exp(op: &dyn GradedOperator, window: Window, s_max: u32, t: u32) -> Result<MultiSeries> {
    let labels = op.labels();
    let states: Vec<BasisState> = (0..=s_max).flat_map(|s| labels.basis(s)).collect();
    let diagonal = states
        .par_iter()
        .map(|b| {
            let x = exp_apply(op, &FockVector::basis(window, b.clone()), t)?;
            let e = Exponents::of(&[(Var::Q1, b.energy() as i32)]);
            Ok(x.component(b).mul_monomial(&Rational::one(), &e))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = MultiSeries::zero(window);
    for d in &diagonal {
        out.add_assign(d)?;
    }
    Ok(out)
}

/// `Z^{P¹×P¹} = e^{tQ2/u} ⟨v | Q1^{|·|} exp(t M_S) | v⟩` through `Q1^{d1} Q2^{d2} t^t`.
pub fn z_p1xp1(d1: u32, d2: u32, t: u32) -> Result<MultiSeries> {
    z_blowup(d1, d2, t, 0, Cap::V, Cap::V)
}

/// `⟨v | Q1^{|·|} exp(t N_S) | v⟩`, equal to [`z_p1xp1`].
pub fn z_p1xp1_ns(d1: u32, d2: u32, t: u32) -> Result<MultiSeries> {
    let w = p1xp1_window(d1, d2, t);
    let v = boundary_v(w, d1);
    matrix_element(&NS, &v, &v, t)
}

fn hurwitz_window(d: u32, t: u32, u_lo: i32) -> Window {
    Window::point()
        .with(Var::T, 0, t as i32)
        .with(Var::Q1, 0, d as i32)
        .with(Var::U, u_lo, t as i32)
}

/// `Z^{P¹} = ⟨v | Q^{|·|} exp(t M_H) | v⟩`, with `Q` stored in the `Q1` slot.
pub fn z_hurwitz_p1(d: u32, t: u32) -> Result<MultiSeries> {
    let w = hurwitz_window(d, t, -(d as i32));
    let v = boundary_v(w, d);
    matrix_element(&MH, &v, &v, t)
}

/// `Z^E = tr(Q^{|·|} exp(t M_H))`, with `Q` stored in the `Q1` slot.
pub fn z_hurwitz_elliptic(d: u32, t: u32) -> Result<MultiSeries> {
    trace_exp(&MH, hurwitz_window(d, t, 0), d, t)
}

/// `tr(Q1^{|·|} exp(t M_S))`, the partition function of `E×P¹` without its prefactor.
pub fn trace_exp1(d1: u32, d2: u32, t: u32) -> Result<MultiSeries> {
    trace_exp(&MS, p1xp1_window(d1, d2, t), d1, t)
}

/// `Z^{E×P¹} = e^{tQ2/u} tr(Q1^{|·|} exp(t M_S))`
pub fn z_exp1(d1: u32, d2: u32, t: u32) -> Result<MultiSeries> {
    let tr = trace_exp1(d1, d2, t)?;
    tr.mul(&prefactor_series(*tr.window())?)
}

/// `e^{tQ2/u} ⟨bra | Q1^{|·|} exp(t M_S) | ket⟩` with caps from `{v, w}` on the left and
/// `{v, ŵ}` on the right. Exceptional exponents are exact through `e_max`.
pub fn z_blowup(d1: u32, d2: u32, t: u32, e_max: i32, bra: Cap, ket: Cap) -> Result<MultiSeries> {
    if bra == Cap::WHat || ket == Cap::W {
        return Err(Error::Domain("caps are (v|w) on the left and (v|ŵ) on the right".into()));
    }
    let window = blowup_window(d1, d2, t, e_max, bra, ket);
    let bra_v = cap_vector(window, bra, d1)?;
    let ket_v = cap_vector(window, ket, d1)?;
    let me = matrix_element(&MS, &bra_v, &ket_v, t)?;
    me.mul(&prefactor_series(window)?)
}

/// `Z^{Bl₁(P¹×P¹)} = e^{tQ2/u} ⟨v | Q1^{|·|} exp(t M_S) | ŵ⟩` with the exceptional
/// variable renamed to `E`.
pub fn z_bl1_p1xp1(d1: u32, d2: u32, t: u32, e_max: i32) -> Result<MultiSeries> {
    let z = z_blowup(d1, d2, t, e_max, Cap::V, Cap::WHat)?;
    let rename = Substitution::new().rule(Var::EHat, Exponents::of(&[(Var::E, 1)]));
    let (lo, hi) = z.window().bounds(Var::EHat);
    let target = z.window().with(Var::EHat, 0, 0).with(Var::E, lo, hi);
    z.monomial_substitute(&rename, &target)
}

/// `Y = log Z`
pub fn connected_series(z: &MultiSeries) -> Result<MultiSeries> {
    z.log(&class_grading())
}

/// From `Bl₂(P²)` slots `(Q1, E, Ê) = (Q, F1, F2)` to `Bl₁(P¹×P¹)` variables:
/// `Q ↦ Q1 Q2 / E`, `F1 ↦ Q1 / E`, `F2 ↦ Q2 / E`.
pub fn bl2p2_to_bl1_rules() -> Substitution {
    Substitution::new()
        .rule(Var::Q1, Exponents::of(&[(Var::Q1, 1), (Var::Q2, 1), (Var::E, -1)]))
        .rule(Var::E, Exponents::of(&[(Var::Q1, 1), (Var::E, -1)]))
        .rule(Var::EHat, Exponents::of(&[(Var::Q2, 1), (Var::E, -1)]))
}

/// Inverse of [`bl2p2_to_bl1_rules`]: `Q1 ↦ Q/F2`, `Q2 ↦ Q/F1`, `E ↦ Q/(F1 F2)`.
pub fn bl1_to_bl2p2_rules() -> Substitution {
    Substitution::new()
        .rule(Var::Q1, Exponents::of(&[(Var::Q1, 1), (Var::EHat, -1)]))
        .rule(Var::Q2, Exponents::of(&[(Var::Q1, 1), (Var::E, -1)]))
        .rule(Var::E, Exponents::of(&[(Var::Q1, 1), (Var::E, -1), (Var::EHat, -1)]))
}

/// Rewrites a `Bl₁(P¹×P¹)` series in the `Bl₂(P²)` slots.
pub fn to_bl2p2(z_bl1: &MultiSeries) -> Result<MultiSeries> {
    let rules = bl1_to_bl2p2_rules();
    let target = z_bl1.window().image_under(&rules);
    z_bl1.monomial_substitute(&rules, &target)
}

/// The summand of `Y^{Bl₁(P¹×P¹)}` with class `d(F1 + F2 − E)`, rewritten as a
/// series in `Q1^d` (the class of `d` lines in `P²`).
pub fn p2_slice(y_bl1: &MultiSeries) -> Result<MultiSeries> {
    let w = y_bl1.window();
    let d_max = w.bounds(Var::Q1).1.min(w.bounds(Var::Q2).1).min(-w.bounds(Var::E).0);
    let target = Window::point()
        .with(Var::Q1, 0, d_max)
        .with(Var::T, w.bounds(Var::T).0, w.bounds(Var::T).1)
        .with(Var::U, w.bounds(Var::U).0, w.bounds(Var::U).1);
    let mut out = MultiSeries::zero(target);
    for (e, c) in y_bl1.terms() {
        let d = e.get(Var::Q1);
        if d > 0 && e.get(Var::Q2) == d && e.get(Var::E) == -d && e.get(Var::EHat) == 0 {
            let image = Exponents::of(&[(Var::Q1, d), (Var::T, e.get(Var::T)), (Var::U, e.get(Var::U))]);
            out.add_assign(&MultiSeries::monomial(target, c.clone(), image))?;
        }
    }
    Ok(out)
}

/// Connected `P²` invariants read off the `P²` summand of `Y^{Bl₁(P¹×P¹)}`.
pub fn p2_reduce(y_bl1: &MultiSeries) -> Result<InvariantTable> {
    extract_invariants(&p2_slice(y_bl1)?, Surface::P2, true)
}

/// Intermediate series of the `P²` computation.
#[derive(Clone, Debug)]
pub struct P2Pipeline {
    pub z_bl1: MultiSeries,
    pub y_bl1: MultiSeries,
    pub z_bl2: MultiSeries,
    pub slice: MultiSeries,
    pub z_p2: MultiSeries,
    pub connected: InvariantTable,
}

/// Runs `Z^{Bl₁(P¹×P¹)} → log → P² summand` through degree `d_max` and genus `g_max`.
pub fn p2_pipeline(d_max: u32, g_max: i32) -> Result<P2Pipeline> {
    if d_max == 0 {
        return Err(Error::Domain("P² pipeline needs d_max ≥ 1".into()));
    }
    let t = (3 * d_max as i32 + g_max - 1).max(0) as u32;
    let z_bl1 = z_bl1_p1xp1(d_max, d_max, t, d_max as i32)?;
    let y_bl1 = connected_series(&z_bl1)?;
    let z_bl2 = to_bl2p2(&z_bl1)?;
    let slice = p2_slice(&y_bl1)?;
    let z_p2 = slice.exp(&Grading::new(&[(Var::Q1, 1)]))?;
    let connected = extract_invariants(&slice, Surface::P2, true)?;
    Ok(P2Pipeline { z_bl1, y_bl1, z_bl2, slice, z_p2, connected })
}

/// Splits a partition function into rows: for each class and `n`, the `t^n`
/// coefficient times `n!` must be the single power of `u` fixed by the genus
/// formula of the surface (purity); otherwise an integrity error is returned.
pub fn extract_invariants(z: &MultiSeries, surface: Surface, connected: bool) -> Result<InvariantTable> {
    let class_vars = surface.class_vars();
    let mut grouped: BTreeMap<(Vec<i32>, i32), LaurentPoly> = BTreeMap::new();
    for (e, c) in z.terms() {
        for v in Var::ALL {
            if v != Var::T && v != Var::U && !class_vars.contains(&v) && e.get(v) != 0 {
                return Err(Error::Integrity(format!(
                    "term {e} of a {} series carries a non-class variable",
                    surface.tag()
                )));
            }
        }
        let class: Vec<i32> = class_vars.iter().map(|&v| e.get(v)).collect();
        if class.iter().all(|&k| k == 0) {
            continue;
        }
        let n = e.get(Var::T);
        grouped
            .entry((class, n))
            .or_default()
            .add_term(Exponents::of(&[(Var::U, e.get(Var::U))]), c.clone());
    }
    let mut rows = Vec::new();
    for ((class, n), poly) in grouped {
        if poly.is_zero() {
            continue;
        }
        let doubled = surface.doubled_u_exponent(&class, n);
        let pure = doubled % 2 == 0 && poly.len() == 1 && poly.min_exponent(Var::U) == Some(doubled / 2);
        if !pure {
            return Err(Error::Integrity(format!(
                "purity violation for {} class {class:?}, t^{n}: coefficient {poly}",
                surface.tag()
            )));
        }
        let u_exp = doubled / 2;
        let value = poly.coefficient(&Exponents::of(&[(Var::U, u_exp)])) * Rational::from_integer(factorial(n as u32));
        rows.push(InvariantRow { g: u_exp + 1, class, n: n as u32, value, connected });
    }
    rows.sort_by(|a, b| (&a.class, a.g).cmp(&(&b.class, b.g)));
    Ok(InvariantTable { surface, rows })
}

/// `Σ_{s ≤ d} p(s) Q^s`, the genus-one part of the elliptic Hurwitz partition function.
pub fn elliptic_genus_one_closed_form(d: u32) -> Vec<BigInt> {
    (0..=d).map(|s| BigInt::from(enumerate_partitions(s).len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn ex(pairs: &[(Var, i32)]) -> Exponents {
        Exponents::of(pairs)
    }

    #[test]
    fn p1xp1_small_coefficients() {
        let z = z_p1xp1(1, 1, 3).unwrap();
        assert_eq!(z.constant_term(), int(1));
        assert_eq!(z.coefficient(&ex(&[(Var::Q1, 1), (Var::T, 1), (Var::U, -1)])).unwrap(), int(1));
        let table = extract_invariants(&z, Surface::P1xP1, false).unwrap();
        assert_eq!(table.value(0, &[1, 0]), int(1));
        assert_eq!(table.value(-1, &[1, 1]), int(2));
        assert_eq!(table.value(0, &[1, 1]), int(1));
        assert!(extract_invariants(&MultiSeries::zero(*z.window()), Surface::P1xP1, false)
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn connected_p1xp1() {
        let z = z_p1xp1(1, 1, 3).unwrap();
        let y = extract_invariants(&connected_series(&z).unwrap(), Surface::P1xP1, true).unwrap();
        assert_eq!(y.value(0, &[1, 1]), int(1));
        assert_eq!(y.value(-1, &[1, 1]), int(0));
        let one = MultiSeries::one(*z.window());
        assert!(connected_series(&one).unwrap().is_zero());
    }

    #[test]
    fn hurwitz_small_coefficients() {
        let z = z_hurwitz_p1(2, 2).unwrap();
        assert_eq!(z.coefficient(&ex(&[(Var::Q1, 1), (Var::U, -1)])).unwrap(), int(1));
        assert_eq!(z.coefficient(&ex(&[(Var::Q1, 2), (Var::T, 2), (Var::U, -1)])).unwrap(), rat(1, 4));
        let table = extract_invariants(&z, Surface::HurwitzP1, false).unwrap();
        assert_eq!(table.value(0, &[1]), int(1));
        assert_eq!(table.value(0, &[2]), rat(1, 2));
    }

    #[test]
    fn elliptic_genus_one_part() {
        let z = z_hurwitz_elliptic(4, 2).unwrap();
        for (s, p) in elliptic_genus_one_closed_form(4).into_iter().enumerate() {
            let c = z.coefficient(&ex(&[(Var::Q1, s as i32)])).unwrap();
            assert_eq!(c, Rational::from_integer(p));
        }
    }

    #[test]
    fn exp1_examples() {
        let z = z_exp1(2, 2, 2).unwrap();
        assert_eq!(z.coefficient(&ex(&[(Var::T, 1), (Var::Q2, 1), (Var::U, -1)])).unwrap(), int(1));
        assert_eq!(z.coefficient(&ex(&[(Var::Q1, 2)])).unwrap(), int(5));
        let tr = trace_exp1(2, 2, 2).unwrap();
        assert_eq!(tr.coefficient(&ex(&[(Var::Q1, 2), (Var::Q2, 1), (Var::T, 2)])).unwrap(), int(8));
    }

    #[test]
    fn cap_coefficients() {
        let w = blowup_window(2, 1, 0, 2, Cap::V, Cap::WHat);
        let what = build_w(w, Cap::WHat, 2).unwrap();
        let c = what.component(&"(()|(2))".parse().unwrap());
        assert_eq!(c.coefficient(&ex(&[(Var::EHat, -2)])).unwrap(), rat(-1, 2));
        let c = what.component(&"(()|(1,1))".parse().unwrap());
        assert_eq!(c.coefficient(&ex(&[(Var::EHat, -2)])).unwrap(), int(1));
        assert!(build_w(w, Cap::V, 2).is_err());
    }

    #[test]
    fn vv_caps_match_p1xp1() {
        let a = z_blowup(2, 1, 3, 1, Cap::V, Cap::V).unwrap();
        let b = z_p1xp1(2, 1, 3).unwrap();
        let terms_a: Vec<_> = a.terms().collect();
        let terms_b: Vec<_> = b.terms().collect();
        assert_eq!(terms_a, terms_b);
    }
}
