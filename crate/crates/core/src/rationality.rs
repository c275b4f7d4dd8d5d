//! Closed rational forms of the fixed-`Q1`-degree generating functions of `P1×P1`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{factorial, BiPoly, Exponents, LaurentPoly, Rational, RationalFunction, UniPoly, Var};
use crate::fock::BasisState;
use crate::genfun::{extract_invariants, z_p1xp1, Surface};
use crate::operators::{block_matrix, NS};
use crate::partitions::Partition;

fn laurent_to_bipoly(p: &LaurentPoly) -> Result<BiPoly> {
    let mut out = BiPoly::zero();
    for (e, c) in p.terms() {
        let (i, j) = (e.get(Var::U), e.get(Var::Q2));
        if i < 0 || j < 0 || *e != Exponents::of(&[(Var::U, i), (Var::Q2, j)]) {
            return Err(Error::Domain(format!("entry {p} is not a polynomial in u and Q2")));
        }
        out = out.add(&BiPoly::monomial(c.clone(), i as usize, j as usize));
    }
    Ok(out)
}

/// Fraction-free determinant (Bareiss) with row pivoting.
pub fn bareiss_det(mut m: Vec<Vec<BiPoly>>) -> Result<BiPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(BiPoly::one());
    }
    let mut negate = false;
    let mut prev = BiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BiPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev)?;
            }
            m[i][k] = BiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// `u (I − N_S)` on the energy-`a` block, in its canonical basis order.
fn system_matrix(a: u32) -> Result<(Vec<BasisState>, Vec<Vec<BiPoly>>)> {
    let block = block_matrix(&NS, a)?;
    let n = block.dim();
    let u = LaurentPoly::monomial(Rational::one(), Exponents::of(&[(Var::U, 1)]));
    let mut m = vec![vec![BiPoly::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut e = block.entry(i, j).neg();
            if i == j {
                e = e.add(&LaurentPoly::one());
            }
            *slot = laurent_to_bipoly(&u.mul(&e))?;
        }
    }
    Ok((block.basis().to_vec(), m))
}

/// `Q1^{−a} R_a(u, Q2)` where `R_a` is the `Q1^a` part of `Σ_n t^n/n! ⟨v|N_S^n|v⟩`
/// with the `t`-dependence dropped, obtained as `⟨(1^a),∅| (I − N_S)^{−1} |(1^a),∅⟩`.
pub fn solve_ra(a: u32) -> Result<RationalFunction> {
    let n = block_matrix(&NS, a)?.dim();
    solve_ra_reordered(a, &(0..n).collect::<Vec<_>>())
}

/// [`solve_ra`] with the basis taken in the order `perm` before elimination.
pub fn solve_ra_reordered(a: u32, perm: &[usize]) -> Result<RationalFunction> {
    let (basis, m) = system_matrix(a)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..basis.len()).collect::<Vec<_>>() {
        return Err(Error::Configuration(format!("not a permutation of 0..{}", basis.len())));
    }
    let basis: Vec<BasisState> = perm.iter().map(|&i| basis[i].clone()).collect();
    let m: Vec<Vec<BiPoly>> = perm.iter().map(|&i| perm.iter().map(|&j| m[i][j].clone()).collect()).collect();
    let ones = Partition::repeated(1, a as usize);
    let source = BasisState { mu: ones.clone(), nu: Partition::empty() };
    let target = source.swapped();
    let j = basis.iter().position(|b| *b == source).expect("basis contains (1^a, ∅)");
    let k = basis.iter().position(|b| *b == target).expect("basis contains (∅, 1^a)");
    let det = bareiss_det(m.clone())?;
    if det.is_zero() {
        return Err(Error::Domain(format!("u(I − N_S) is singular at energy {a}")));
    }
    // Cramer's rule for the k-th component of x in u(I − N_S) x = u e_j
    let mut replaced = m;
    for (i, row) in replaced.iter_mut().enumerate() {
        row[k] = if i == j { BiPoly::monomial(Rational::one(), 1, 0) } else { BiPoly::zero() };
    }
    let num = bareiss_det(replaced)?;
    // pairing ⟨(1^a),∅ | ∅,(1^a)⟩ = u^{−a} / a!
    let scale = BiPoly::monomial(Rational::from_integer(factorial(a)), a as usize, 0);
    Ok(RationalFunction::new(num, det.mul(&scale))?.canonical())
}

/// The closed forms for `a = 0` and `a = 1`.
pub fn r0_closed_form() -> RationalFunction {
    let u = BiPoly::monomial(Rational::one(), 1, 0);
    let q = BiPoly::monomial(Rational::one(), 0, 1);
    RationalFunction::new(u.clone(), u.sub(&q)).expect("nonzero").canonical()
}

pub fn r1_closed_form() -> RationalFunction {
    let u = BiPoly::monomial(Rational::one(), 1, 0);
    let q = BiPoly::monomial(Rational::one(), 0, 1);
    let uq = u.sub(&q);
    let den = uq.mul(&uq).sub(&q.mul_uni(&UniPoly::monomial(Rational::one(), 2)));
    RationalFunction::new(u, den).expect("nonzero").canonical()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub a: u32,
    pub d2_max: u32,
    pub t_order: u32,
    pub checked: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Compares the `Q2`-expansion of [`solve_ra`] with the invariants `N•_{g,(a,d2)}`
/// read off the `P1×P1` partition function, for `d2 ≤ d2_max`.
pub fn series_consistency(a: u32, d2_max: u32) -> Result<ConsistencyVerdict> {
    let ra = solve_ra(a)?;
    let series = ra.to_series(d2_max as i32)?;
    let u_max = series.terms().map(|(e, _)| e.get(Var::U)).max().unwrap_or(0);
    let genus_bound = (a as i32 - 1) * (d2_max as i32 - 1) - 1;
    let t_order = (2 * a as i32 + 2 * d2_max as i32 + u_max.max(genus_bound)).max(0) as u32;
    let table = extract_invariants(&z_p1xp1(a, d2_max, t_order)?, Surface::P1xP1, false)?;

    let mut mismatches = Vec::new();
    let mut checked = 0;
    let mut keys: Vec<(i32, i32)> = series.terms().map(|(e, _)| (e.get(Var::U) + 1, e.get(Var::Q2))).collect();
    keys.extend(
        table
            .rows
            .iter()
            .filter(|r| r.class[0] == a as i32 && r.class[1] <= d2_max as i32)
            .map(|r| (r.g, r.class[1])),
    );
    keys.sort();
    keys.dedup();
    for (g, d2) in keys {
        if a == 0 && d2 == 0 {
            continue;
        }
        let e = Exponents::of(&[(Var::U, g - 1), (Var::Q2, d2)]);
        let expected = series.coefficient(&e)?;
        let found = table.value(g, &[a as i32, d2]);
        checked += 1;
        if expected != found {
            mismatches.push(format!("g={g} d2={d2}: rational form {expected}, partition function {found}"));
        }
    }
    Ok(ConsistencyVerdict { a, d2_max, t_order, checked, pass: mismatches.is_empty(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn bp(c: i64, u: usize, q: usize) -> BiPoly {
        BiPoly::monomial(int(c), u, q)
    }

    #[test]
    fn bareiss_small() {
        let m = vec![vec![bp(1, 1, 0), bp(1, 0, 1)], vec![bp(1, 0, 1), bp(1, 1, 0)]];
        assert_eq!(bareiss_det(m).unwrap(), bp(1, 2, 0).sub(&bp(1, 0, 2)));
        let m = vec![vec![BiPoly::zero(), bp(1, 0, 0)], vec![bp(1, 0, 0), BiPoly::zero()]];
        assert_eq!(bareiss_det(m).unwrap(), bp(-1, 0, 0));
        let m = vec![
            vec![bp(2, 0, 0), bp(0, 0, 0), bp(1, 0, 0)],
            vec![bp(1, 0, 0), bp(3, 0, 0), bp(0, 0, 0)],
            vec![bp(0, 0, 0), bp(1, 0, 0), bp(1, 0, 0)],
        ];
        assert_eq!(bareiss_det(m).unwrap(), bp(7, 0, 0));
    }

    #[test]
    fn low_degree_closed_forms() {
        assert_eq!(solve_ra(0).unwrap(), r0_closed_form());
        assert_eq!(solve_ra(1).unwrap(), r1_closed_form());
    }

    #[test]
    fn consistency_small() {
        let v = series_consistency(1, 2).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(v.checked > 0);
    }
}
