//! Slow reference implementations kept independent of the main engine: operator
//! words reduced by commutators, and the Caporaso–Harris recursion for plane curves.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{factorial_rat, Exponents, Grading, LaurentPoly, MultiSeries, Rational, Var, Window};
use crate::fock::{BasisState, Label, LabelSet};
use crate::operators::EnergyBlockMatrix;
use crate::partitions::{enumerate_partitions, Partition};

/// `α_k[label]`; negative `k` creates, positive `k` annihilates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub k: i32,
    pub label: Label,
}

impl Ladder {
    pub fn new(k: i32, label: Label) -> Self {
        assert!(k != 0, "α_0 is not a ladder operator");
        Ladder { k, label }
    }
}

/// Product of ladder operators applied to the vacuum; the last symbol acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(pub Vec<Ladder>);

/// Expansion in raw monomials `Π α_{-μ_i}[𝟙] Π α_{-ν_j}[𝓅] |0⟩`.
pub type RawExpansion = BTreeMap<BasisState, Rational>;

fn creators_to_state(word: &[Ladder]) -> BasisState {
    let mut mu = Vec::new();
    let mut nu = Vec::new();
    for l in word {
        match l.label {
            Label::One => mu.push((-l.k) as u32),
            Label::Point => nu.push((-l.k) as u32),
        }
    }
    BasisState::new(Partition::new(mu).expect("positive parts"), Partition::new(nu).expect("positive parts"))
}

/// Reduces `word |0⟩` to raw monomials using only the commutators and `α_k |0⟩ = 0`:
/// the rightmost annihilator is moved one step right at a time.
pub fn normal_order(labels: &LabelSet, word: &FreeWord) -> RawExpansion {
    let mut out = RawExpansion::new();
    let mut stack: Vec<(Rational, Vec<Ladder>)> = vec![(Rational::one(), word.0.clone())];
    while let Some((c, w)) = stack.pop() {
        let Some(i) = w.iter().rposition(|l| l.k > 0) else {
            let e = out.entry(creators_to_state(&w)).or_insert_with(Rational::zero);
            *e += c;
            continue;
        };
        if i + 1 == w.len() {
            continue;
        }
        let (a, b) = (w[i], w[i + 1]);
        if a.k + b.k == 0 {
            let g = labels.pairing(a.label, b.label);
            if g != 0 {
                let mut shorter = w.clone();
                shorter.drain(i..i + 2);
                stack.push((&c * Rational::from_integer(BigInt::from(a.k * g)), shorter));
            }
        }
        let mut swapped = w;
        swapped.swap(i, i + 1);
        stack.push((c, swapped));
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Raw monomial of a state as a word of creators.
pub fn state_word(state: &BasisState) -> Vec<Ladder> {
    let mut w: Vec<Ladder> = state.mu.parts().iter().map(|&p| Ladder::new(-(p as i32), Label::One)).collect();
    w.extend(state.nu.parts().iter().map(|&p| Ladder::new(-(p as i32), Label::Point)));
    w
}

/// A finite linear combination of words with coefficients in `u`, `Q2`.
#[derive(Clone, Debug, Default)]
pub struct WordOperator {
    pub terms: Vec<(LaurentPoly, Vec<Ladder>)>,
}

impl WordOperator {
    fn push(&mut self, c: LaurentPoly, w: Vec<Ladder>) {
        if !c.is_zero() {
            self.terms.push((c, w));
        }
    }

    /// Image of the normalized vector `|state⟩`, in normalized vectors.
    pub fn apply(&self, labels: &LabelSet, state: &BasisState) -> BTreeMap<BasisState, LaurentPoly> {
        let base = state_word(state);
        let inv_z = Rational::one() / state.z();
        let mut out: BTreeMap<BasisState, LaurentPoly> = BTreeMap::new();
        for (c, w) in &self.terms {
            let mut full = w.clone();
            full.extend_from_slice(&base);
            for (s, r) in normal_order(labels, &FreeWord(full)) {
                let k = r * &inv_z * s.z();
                out.entry(s).or_default().add_assign(&c.scale(&k));
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Block on the energy-`s` subspace keyed by `(row, column)` states.
    pub fn block(&self, labels: &LabelSet, s: u32) -> BTreeMap<(BasisState, BasisState), LaurentPoly> {
        let mut out = BTreeMap::new();
        for col in labels.basis(s) {
            for (row, c) in self.apply(labels, &col) {
                out.insert((row, col.clone()), c);
            }
        }
        out
    }
}

fn mono(c: Rational, u: i32, q: i32) -> LaurentPoly {
    LaurentPoly::monomial(c, Exponents::of(&[(Var::U, u), (Var::Q2, q)]))
}

/// `α_{∓λ}` as a word, sign `-1` for creators.
fn multi(sign: i32, p: &Partition, label: Label) -> Vec<Ladder> {
    p.parts().iter().map(|&k| Ladder::new(sign * k as i32, label)).collect()
}

fn aut_inv(p: &Partition) -> Rational {
    Rational::one() / Rational::from_integer(p.aut())
}

fn cat(parts: &[&[Ladder]]) -> Vec<Ladder> {
    parts.concat()
}

/// `M_S` restricted to terms that can act on energy `≤ s`.
pub fn ms_words(s: u32) -> WordOperator {
    let mut op = WordOperator::default();
    for k in 1..=s as i32 {
        op.push(LaurentPoly::one(), vec![Ladder::new(-k, Label::Point), Ladder::new(k, Label::Point)]);
    }
    for m in 1..=s {
        for lambda in enumerate_partitions(m) {
            for kappa in enumerate_partitions(m) {
                let c = aut_inv(&lambda) * aut_inv(&kappa);
                let w = cat(&[&multi(-1, &lambda, Label::One), &multi(1, &kappa, Label::One)]);
                op.push(mono(c, lambda.length() as i32 - 1, 1), w);
            }
        }
    }
    op
}

/// `M_S + Q2/u`.
pub fn ns_words(s: u32) -> WordOperator {
    let mut op = ms_words(s);
    op.push(mono(Rational::one(), -1, 1), Vec::new());
    op
}

/// `½ Σ_{k,l>0} [u α_{k+l} α_{-k} α_{-l} + α_{-k-l} α_k α_l]` on the single-label space,
/// written in the given (not normal) order.
pub fn mh_words(s: u32) -> WordOperator {
    let mut op = WordOperator::default();
    let half = Rational::new(1.into(), 2.into());
    let one = Label::One;
    for k in 1..s as i32 {
        for l in 1..=s as i32 - k {
            op.push(
                mono(half.clone(), 1, 0),
                vec![Ladder::new(k + l, one), Ladder::new(-k, one), Ladder::new(-l, one)],
            );
            op.push(
                mono(half.clone(), 0, 0),
                vec![Ladder::new(-k - l, one), Ladder::new(k, one), Ladder::new(l, one)],
            );
        }
    }
    op
}

/// Fiber-tangency operator; `genus_one_sign` multiplies `(k²−1)/12` in the last sum.
pub fn mf_words(s: u32, genus_one_sign: i32) -> WordOperator {
    let mut op = WordOperator::default();
    let (one, pt) = (Label::One, Label::Point);
    for k in 2..=s {
        for mu in enumerate_partitions(k).into_iter().filter(|p| p.length() == 2) {
            let a = aut_inv(&mu);
            op.push(mono(a.clone(), 0, 0), cat(&[&[Ladder::new(-(k as i32), pt)], &multi(1, &mu, pt)]));
            op.push(mono(a, 1, 0), cat(&[&multi(-1, &mu, pt), &[Ladder::new(k as i32, pt)]]));
        }
    }
    let parts_upto = |n: u32| (0..=n).flat_map(enumerate_partitions).collect::<Vec<_>>();
    // Q u^{ℓ(μ)-1} α_{-μ}[𝟙] α_ν[𝟙] α_k[𝓅], |μ| = |ν| + k
    for k in 1..=s {
        for nu in parts_upto(s - k) {
            for mu in enumerate_partitions(nu.size() + k) {
                if mu.length() + nu.length() < 2 {
                    continue;
                }
                let c = aut_inv(&mu) * aut_inv(&nu);
                let w = cat(&[&multi(-1, &mu, one), &multi(1, &nu, one), &[Ladder::new(k as i32, pt)]]);
                op.push(mono(c, mu.length() as i32 - 1, 1), w);
            }
        }
    }
    // Q u^{ℓ(μ)} α_{-μ}[𝟙] α_{-k}[𝓅] α_ν[𝟙], |μ| + k = |ν|
    for nu in parts_upto(s).into_iter().filter(|p| !p.is_empty()) {
        for k in 1..=nu.size() {
            for mu in enumerate_partitions(nu.size() - k) {
                if mu.length() + nu.length() < 2 {
                    continue;
                }
                let c = aut_inv(&mu) * aut_inv(&nu);
                let w = cat(&[&multi(-1, &mu, one), &[Ladder::new(-(k as i32), pt)], &multi(1, &nu, one)]);
                op.push(mono(c, mu.length() as i32, 1), w);
            }
        }
    }
    for k in 2..=s as i64 {
        let c = Rational::new(BigInt::from(genus_one_sign as i64 * (k * k - 1)), BigInt::from(12));
        op.push(mono(c, 1, 0), vec![Ladder::new(-(k as i32), pt), Ladder::new(k as i32, pt)]);
    }
    op
}

/// Entries of an engine block keyed by `(row, column)` states, for comparison with
/// [`WordOperator::block`].
pub fn engine_block(block: &EnergyBlockMatrix) -> BTreeMap<(BasisState, BasisState), LaurentPoly> {
    let basis = block.basis();
    let mut out = BTreeMap::new();
    for (j, col) in basis.iter().enumerate() {
        for (i, c) in block.column(j) {
            if !c.is_zero() {
                out.insert((basis[*i].clone(), col.clone()), c.clone());
            }
        }
    }
    out
}

/// Severi degrees of `P²` relative to a line, by the Caporaso–Harris recursion.
/// `α`, `β` are tangency profiles indexed from 1 (`alpha[0]` counts order-1 contacts).
#[derive(Default)]
pub struct CaporasoHarris {
    memo: HashMap<(u32, i64, Vec<u32>, Vec<u32>), BigInt>,
}

fn weighted(v: &[u32]) -> u32 {
    v.iter().enumerate().map(|(i, &a)| (i as u32 + 1) * a).sum()
}

fn count(v: &[u32]) -> u32 {
    v.iter().sum()
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// All vectors `w` with `lo ≤ w ≤ hi` componentwise.
fn boxes(lo: &[u32], hi: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (*a..=*b).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

impl CaporasoHarris {
    pub fn new() -> Self {
        Self::default()
    }

    /// `N^{d,δ}(α, β)`: degree-`d` curves with `δ` nodes (reducible allowed), with
    /// contact `α` at fixed points of the line and `β` at unassigned points,
    /// through the right number of general points.
    pub fn severi(&mut self, d: u32, delta: i64, alpha: &[u32], beta: &[u32]) -> Result<BigInt> {
        if weighted(alpha) + weighted(beta) != d {
            return Err(Error::Domain(format!("profile of weight {} in degree {d}", weighted(alpha) + weighted(beta))));
        }
        Ok(self.eval(d, delta, trim(alpha), trim(beta)))
    }

    fn eval(&mut self, d: u32, delta: i64, alpha: Vec<u32>, beta: Vec<u32>) -> BigInt {
        if delta < 0 {
            return BigInt::zero();
        }
        if d == 0 {
            return if delta == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let key = (d, delta, alpha.clone(), beta.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let len = d as usize;
        let pad = |v: &[u32]| {
            let mut p = v.to_vec();
            p.resize(len, 0);
            p
        };
        let (a, b) = (pad(&alpha), pad(&beta));
        let mut total = BigInt::zero();
        for k in 0..len {
            if b[k] > 0 {
                let (mut a2, mut b2) = (a.clone(), b.clone());
                a2[k] += 1;
                b2[k] -= 1;
                total += BigInt::from(k + 1) * self.eval(d, delta, trim(&a2), trim(&b2));
            }
        }
        let zero = vec![0; len];
        let beta_hi: Vec<u32> = (0..len).map(|i| b[i] + (d - 1) / (i as u32 + 1)).collect();
        for a2 in boxes(&zero, &a) {
            let wa = weighted(&a2);
            if wa > d - 1 {
                continue;
            }
            for b2 in boxes(&b, &beta_hi) {
                if wa + weighted(&b2) != d - 1 {
                    continue;
                }
                let gained = (count(&b2) - count(&b)) as i64;
                let delta2 = delta - (d as i64 - 1) + gained;
                if delta2 < 0 {
                    continue;
                }
                let mut coeff = BigInt::one();
                for i in 0..len {
                    coeff *= BigInt::from(i + 1).pow(b2[i] - b[i]) * binom(a[i], a2[i]) * binom(b2[i], b[i]);
                }
                total += coeff * self.eval(d - 1, delta2, trim(&a2), trim(&b2));
            }
        }
        self.memo.insert(key, total.clone());
        total
    }

    /// Absolute Severi degree `N^{d,δ}`.
    pub fn absolute(&mut self, d: u32, delta: i64) -> BigInt {
        let mut beta = vec![0; d.max(1) as usize];
        beta[0] = d;
        self.eval(d, delta, Vec::new(), trim(&beta))
    }
}

fn trim(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn arithmetic_genus(d: u32) -> i64 {
    (d as i64 - 1) * (d as i64 - 2) / 2
}

/// Disconnected invariants `N•_{g,d}` of `P²` from the recursion, for `d ≤ d_max`
/// and `3d + g − 1 ≤ n_max`, as `(g, d, value)`.
pub fn ch_disconnected(d_max: u32, n_max: u32) -> Vec<(i32, u32, BigInt)> {
    let mut ch = CaporasoHarris::new();
    let mut out = Vec::new();
    for d in 1..=d_max {
        let max_delta = (d * (d - 1) / 2) as i64;
        for delta in 0..=max_delta {
            let g = arithmetic_genus(d) - delta;
            let n = 3 * d as i64 + g - 1;
            if n < 0 || n > n_max as i64 {
                continue;
            }
            let v = ch.absolute(d, delta);
            if !v.is_zero() {
                out.push((g as i32, d, v));
            }
        }
    }
    out
}

/// Connected invariants `N_{g,d}` of `P²` for `d ≤ d_max`, `3d + g − 1 ≤ n_max`,
/// as the logarithm of the disconnected generating function.
pub fn ch_connected(d_max: u32, n_max: u32) -> Result<Vec<(i32, u32, Rational)>> {
    let window = Window::point()
        .with(Var::Q1, 0, d_max as i32)
        .with(Var::T, 0, n_max as i32)
        .with(Var::U, -3 * d_max as i32, n_max as i32);
    let mut z = MultiSeries::one(window);
    for (g, d, v) in ch_disconnected(d_max, n_max) {
        let n = 3 * d as i32 + g - 1;
        let e = Exponents::of(&[(Var::U, g - 1), (Var::Q1, d as i32), (Var::T, n)]);
        z.add_assign(&MultiSeries::monomial(window, Rational::from_integer(v) / factorial_rat(n as u32), e))?;
    }
    let log = z.log(&Grading::new(&[(Var::Q1, 1), (Var::T, 1)]))?;
    let mut out = Vec::new();
    for (e, c) in log.terms() {
        let (d, n) = (e.get(Var::Q1), e.get(Var::T));
        let g = e.get(Var::U) + 1;
        if d == 0 || n != 3 * d + g - 1 {
            return Err(Error::Integrity(format!("impure term {e} in log of the P² series")));
        }
        out.push((g, d as u32, c * factorial_rat(n as u32)));
    }
    out.sort_by_key(|(g, d, _)| (*d, *g));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriEntry {
    pub d: u32,
    pub delta: i64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub g: i32,
    pub d: u32,
    pub value: String,
}

/// Pinned recursion outputs consumed by the test suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleFixture {
    pub severi_degrees: Vec<SeveriEntry>,
    pub connected_p2: Vec<InvariantEntry>,
}

impl OracleFixture {
    pub fn generate(d_max: u32, connected_n_max: u32) -> Result<Self> {
        let mut ch = CaporasoHarris::new();
        let mut severi_degrees = Vec::new();
        for d in 1..=d_max {
            for delta in 0..=(d * (d - 1) / 2) as i64 {
                severi_degrees.push(SeveriEntry { d, delta, value: ch.absolute(d, delta).to_string() });
            }
        }
        let connected_p2 = ch_connected(d_max, connected_n_max)?
            .into_iter()
            .map(|(g, d, v)| InvariantEntry { g, d, value: crate::exactalg::format_rational(&v) })
            .collect();
        Ok(OracleFixture { severi_degrees, connected_p2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::operators::{block_matrix, MS};

    fn l(k: i32, label: Label) -> Ladder {
        Ladder::new(k, label)
    }

    #[test]
    fn normal_order_examples() {
        let sev = LabelSet::severi();
        let w = FreeWord(vec![l(1, Label::Point), l(-1, Label::One)]);
        let r = normal_order(&sev, &w);
        assert_eq!(r.len(), 1);
        assert_eq!(r[&BasisState::vacuum()], int(1));
        let w = FreeWord(vec![l(-1, Label::One), l(1, Label::One)]);
        assert!(normal_order(&sev, &w).is_empty());
        let w = FreeWord(vec![l(1, Label::Point), l(-1, Label::One), l(-1, Label::One)]);
        let r = normal_order(&sev, &w);
        assert_eq!(r[&"((1)|())".parse::<BasisState>().unwrap()], int(2));
    }

    #[test]
    fn ms_block_s1_from_words() {
        let sev = LabelSet::severi();
        let words = ms_words(1).block(&sev, 1);
        let engine = engine_block(&block_matrix(&MS, 1).unwrap());
        assert_eq!(words, engine);
        assert_eq!(words.len(), 2);
    }

    #[test]
    fn small_severi_degrees() {
        let mut ch = CaporasoHarris::new();
        assert_eq!(ch.absolute(1, 0), BigInt::from(1));
        assert_eq!(ch.absolute(2, 0), BigInt::from(1));
        assert_eq!(ch.absolute(2, 1), BigInt::from(3));
        assert_eq!(ch.absolute(3, 1), BigInt::from(12));
        assert_eq!(ch.absolute(3, 2), BigInt::from(21));
        assert_eq!(ch.absolute(3, 3), BigInt::from(15));
        let quartics: Vec<BigInt> = (1..=6).map(|d| ch.absolute(4, d)).collect();
        assert_eq!(quartics, [27, 225, 675, 666, 378, 105].map(BigInt::from));
        assert!(ch.severi(2, 0, &[1], &[0]).is_err());
    }

    #[test]
    fn rational_quartics() {
        let conn = ch_connected(4, 11).unwrap();
        let find = |g: i32, d: u32| conn.iter().find(|r| r.0 == g && r.1 == d).map(|r| r.2.clone());
        assert_eq!(find(0, 1), Some(int(1)));
        assert_eq!(find(0, 3), Some(int(12)));
        assert_eq!(find(0, 4), Some(int(620)));
        assert_eq!(find(-1, 2), None);
    }
}
