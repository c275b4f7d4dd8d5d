//! Spectral identities phrased as exact characteristic polynomials in `x` and `Q`,
//! so that `√Q` never has to exist.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{factorial_rat, Exponents, LaurentPoly, MultiSeries, Rational, UniPoly, Var, Window};
use crate::operators::{block_matrix, EnergyBlockMatrix, MH, MS};
use crate::partitions::enumerate_partitions;

/// Dense square matrix over `Q[Q]`.
pub type PolyMatrix = Vec<Vec<UniPoly>>;

/// Polynomial in `x` with coefficients in `Q[Q]`, lowest power of `x` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPoly {
    coeffs: Vec<UniPoly>,
}

impl XPoly {
    pub fn from_coeffs(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    pub fn one() -> Self {
        XPoly::from_coeffs(vec![UniPoly::one()])
    }

    /// `x`
    pub fn x() -> Self {
        XPoly::from_coeffs(vec![UniPoly::zero(), UniPoly::one()])
    }

    /// `x² − c² Q`
    pub fn symmetric_pair(c: i64) -> Self {
        let q = UniPoly::monomial(Rational::from_integer(BigInt::from(-c * c)), 1);
        XPoly::from_coeffs(vec![q, UniPoly::zero(), UniPoly::one()])
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return XPoly::from_coeffs(Vec::new());
        }
        let mut out = vec![UniPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        XPoly::from_coeffs(out)
    }

    pub fn pow(&self, k: usize) -> XPoly {
        (0..k).fold(XPoly::one(), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xk = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let c = c.fmt_in("Q");
            parts.push(match (c.as_str(), xk.is_empty()) {
                (_, true) => format!("({c})"),
                ("1", false) => xk,
                _ => format!("({c})*{xk}"),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// The tridiagonal matrix with super-diagonal `(n, n−1, …, 1)` and
/// sub-diagonal `(Q, 2Q, …, nQ)`.
pub fn build_an(n: u32) -> Result<PolyMatrix> {
    if n < 1 {
        return Err(Error::Domain("A_n needs n ≥ 1".into()));
    }
    let dim = n as usize + 1;
    let mut m = vec![vec![UniPoly::zero(); dim]; dim];
    for i in 0..n as usize {
        m[i][i + 1] = UniPoly::constant(Rational::from_integer(BigInt::from(n as usize - i)));
        m[i + 1][i] = UniPoly::monomial(Rational::from_integer(BigInt::from(i + 1)), 1);
    }
    Ok(m)
}

/// Division-free characteristic polynomial `det(x I − A)` by Berkowitz's algorithm.
fn berkowitz(a: &PolyMatrix) -> XPoly {
    let n = a.len();
    if n == 0 {
        return XPoly::one();
    }
    // vector of coefficients from the leading power of x downwards
    let mut vect = vec![UniPoly::one(), a[n - 1][n - 1].neg()];
    for r in (0..n - 1).rev() {
        // principal submatrix on indices r..n; split off row/column r
        let sub: Vec<usize> = (r + 1..n).collect();
        let m = sub.len();
        let row: Vec<UniPoly> = sub.iter().map(|&j| a[r][j].clone()).collect();
        let mut col: Vec<UniPoly> = sub.iter().map(|&i| a[i][r].clone()).collect();
        let mut diags = vec![UniPoly::one(), a[r][r].neg()];
        for k in 0..m {
            let dot = row.iter().zip(&col).fold(UniPoly::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            diags.push(dot.neg());
            if k + 1 < m {
                col = sub
                    .iter()
                    .map(|&i| sub.iter().zip(&col).fold(UniPoly::zero(), |acc, (&j, c)| acc.add(&a[i][j].mul(c))))
                    .collect();
            }
        }
        let mut next = vec![UniPoly::zero(); m + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if j <= i && i - j < diags.len() {
                    *slot = slot.add(&diags[i - j].mul(v));
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    XPoly::from_coeffs(vect)
}

/// Strongly connected components of the support graph (edge `j → i` wherever
/// `A_ij ≠ 0`).
fn components(a: &PolyMatrix) -> Vec<Vec<usize>> {
    let mut g: DiGraphMap<usize, ()> = DiGraphMap::new();
    for i in 0..a.len() {
        g.add_node(i);
    }
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if i != j && !c.is_zero() {
                g.add_edge(j, i, ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect()
}

/// `det(x I − A)`, computed as the product over strongly connected components of
/// the support graph: a simultaneous row/column permutation makes `A` block
/// triangular with these components as diagonal blocks.
pub fn charpoly(a: &PolyMatrix) -> XPoly {
    components(a)
        .par_iter()
        .map(|idx| {
            let sub: PolyMatrix = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect()).collect();
            berkowitz(&sub)
        })
        .collect::<Vec<_>>()
        .iter()
        .fold(XPoly::one(), |acc, p| acc.mul(p))
}

/// Dense matrix over `Q[Q]` from a block whose entries involve only `Q2`.
pub fn block_to_poly_matrix(block: &EnergyBlockMatrix) -> Result<PolyMatrix> {
    let n = block.dim();
    let mut m = vec![vec![UniPoly::zero(); n]; n];
    for j in 0..n {
        for (i, c) in block.column(j) {
            m[*i][j] = laurent_to_unipoly(c, Var::Q2)?;
        }
    }
    Ok(m)
}

fn laurent_to_unipoly(p: &LaurentPoly, var: Var) -> Result<UniPoly> {
    let mut coeffs: Vec<Rational> = Vec::new();
    for (e, c) in p.terms() {
        let k = e.get(var);
        if k < 0 || *e != Exponents::ZERO.with(var, k) {
            return Err(Error::Domain(format!("entry {p} is not a polynomial in {} alone", var.symbol())));
        }
        let k = k as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c;
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCertificate {
    pub kind: String,
    pub index: u32,
    pub claimed: String,
    pub computed: String,
    pub pass: bool,
}

impl SpectrumCertificate {
    fn new(kind: &str, index: u32, claimed: &XPoly, computed: &XPoly) -> Self {
        SpectrumCertificate {
            kind: kind.into(),
            index,
            claimed: claimed.to_string(),
            computed: computed.to_string(),
            pass: claimed == computed,
        }
    }
}

/// `x^ε Π_{j < (n+1)/2} (x² − (n−2j)² Q)`, ε = 1 iff `n` is even.
pub fn prop2_target(n: u32) -> XPoly {
    let mut p = if n.is_multiple_of(2) { XPoly::x() } else { XPoly::one() };
    for j in 0..n.div_ceil(2) {
        p = p.mul(&XPoly::symmetric_pair(n as i64 - 2 * j as i64));
    }
    p
}

pub fn verify_prop2(n: u32) -> Result<SpectrumCertificate> {
    let computed = charpoly(&build_an(n)?);
    Ok(SpectrumCertificate::new("prop2", n, &prop2_target(n), &computed))
}

/// Number of pairs `(μ, ν)` with `|μ| + |ν| = s`, grouped by `|μ| − |ν|`.
fn pair_counts_by_difference(s: u32) -> BTreeMap<i64, u64> {
    let mut counts = BTreeMap::new();
    for a in 0..=s {
        let n = (enumerate_partitions(a).len() * enumerate_partitions(s - a).len()) as u64;
        *counts.entry(a as i64 - (s - a) as i64).or_insert(0) += n;
    }
    counts
}

/// `Π_{|μ|+|ν|=s} (x − (|μ|−|ν|)√Q)`, written without radicals.
pub fn prop1_target(s: u32) -> XPoly {
    let counts = pair_counts_by_difference(s);
    let mut p = XPoly::x().pow(counts.get(&0).copied().unwrap_or(0) as usize);
    for (&d, &c) in counts.range(1..) {
        debug_assert_eq!(counts.get(&-d), Some(&c));
        p = p.mul(&XPoly::symmetric_pair(d).pow(c as usize));
    }
    p
}

/// The energy-`s` block of `M_S` at `u = 0` as a matrix over `Q[Q]`.
pub fn ms_genus_one_block(s: u32) -> Result<PolyMatrix> {
    block_to_poly_matrix(&block_matrix(&MS, s)?.specialize_zero(Var::U)?)
}

pub fn verify_prop1(s: u32) -> Result<SpectrumCertificate> {
    let computed = charpoly(&ms_genus_one_block(s)?);
    Ok(SpectrumCertificate::new("prop1", s, &prop1_target(s), &computed))
}

/// Checks that `M_H(0)^s` vanishes on the energy-`s` block.
pub fn mh_nilpotency(s: u32) -> Result<SpectrumCertificate> {
    let b = block_matrix(&MH, s)?.specialize_zero(Var::U)?;
    let power = b.pow(s.max(1))?;
    let pass = power.is_zero();
    Ok(SpectrumCertificate {
        kind: "nilpotency".into(),
        index: s,
        claimed: format!("M_H(0)^{} = 0", s.max(1)),
        computed: if pass { "0".into() } else { "nonzero".into() },
        pass,
    })
}

/// Runs `f` over `indices` in parallel, returning certificates in index order.
pub fn certificates<F>(indices: impl IntoIterator<Item = u32>, f: F) -> Result<Vec<SpectrumCertificate>>
where
    F: Fn(u32) -> Result<SpectrumCertificate> + Sync + Send,
{
    let idx: Vec<u32> = indices.into_iter().collect();
    idx.into_par_iter().map(f).collect()
}

/// `Σ_{μ,ν} Q1^{|μ|+|ν|} e^{(|μ|−|ν|) t √Q2}` through `Q1^{s_max}` and `t^{t_order}`.
/// Odd powers of `√Q2` cancel between `(μ,ν)` and `(ν,μ)`; a survivor is an integrity error.
pub fn pure_genus1_closed_form(s_max: u32, t_order: u32) -> Result<MultiSeries> {
    let window = Window::point()
        .with(Var::Q1, 0, s_max as i32)
        .with(Var::Q2, 0, (t_order / 2) as i32)
        .with(Var::T, 0, t_order as i32);
    let mut out = MultiSeries::zero(window);
    for s in 0..=s_max {
        let counts = pair_counts_by_difference(s);
        for n in 0..=t_order {
            let sum: BigInt = counts
                .iter()
                .map(|(&d, &c)| BigInt::from(c) * BigInt::from(d).pow(n))
                .sum();
            if sum.is_zero() {
                continue;
            }
            if n % 2 == 1 {
                return Err(Error::Integrity(format!("odd power of √Q2 survives at Q1^{s} t^{n}")));
            }
            let c = Rational::from_integer(sum) / factorial_rat(n);
            let e = Exponents::of(&[(Var::Q1, s as i32), (Var::Q2, (n / 2) as i32), (Var::T, n as i32)]);
            out.add_assign(&MultiSeries::monomial(window, c, e))?;
        }
    }
    Ok(out)
}

/// Terms of `z` with `u`-exponent zero, with `u` dropped from the window.
pub fn u_zero_part(z: &MultiSeries) -> MultiSeries {
    let w = z.window().with(Var::U, 0, 0);
    z.filter(|e| e.get(Var::U) == 0).truncate_to(&w)
}
