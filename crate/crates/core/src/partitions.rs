//! Integer partitions and cohomology-weighted partitions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{factorial, Rational};

/// A partition stored as its weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Canonicalizes by sorting; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain(format!("partition with a zero part: {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    /// `(k^m)`, the partition with `m` parts equal to `k`.
    pub fn repeated(k: u32, m: usize) -> Self {
        assert!(k > 0 || m == 0, "zero part");
        Partition(vec![k; m])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// Frequency form `[(k, e_k)]` for the distinct parts, largest first.
    pub fn frequencies(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((k, e)) if *k == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `|Aut(μ)| = Π e_k!`
    pub fn aut(&self) -> BigInt {
        self.frequencies().iter().map(|&(_, e)| factorial(e as u32)).product()
    }

    pub fn parts_product(&self) -> BigInt {
        self.0.iter().map(|&p| BigInt::from(p)).product()
    }

    pub fn z(&self) -> BigInt {
        self.aut() * self.parts_product()
    }

    pub fn with_part(&self, k: u32) -> Partition {
        assert!(k > 0, "zero part");
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&p| p < k).unwrap_or(parts.len());
        parts.insert(pos, k);
        Partition(parts)
    }

    pub fn without_part(&self, k: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    /// Multiset union.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] >= other.0[j]) {
                parts.push(self.0[i]);
                i += 1;
            } else {
                parts.push(other.0[j]);
                j += 1;
            }
        }
        Partition(parts)
    }

    /// Multiset difference, `None` unless `sub` is contained in `self`.
    pub fn difference(&self, sub: &Partition) -> Option<Partition> {
        let mut parts = self.0.clone();
        for &k in &sub.0 {
            let pos = parts.iter().position(|&p| p == k)?;
            parts.remove(pos);
        }
        Some(Partition(parts))
    }

    /// Distinct sub-multisets, including `∅` and `self`, in lexicographically decreasing order.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        fn go(freq: &[(u32, usize)], prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            let Some((&(k, e), rest)) = freq.split_first() else {
                out.push(Partition(prefix.clone()));
                return;
            };
            for take in (0..=e).rev() {
                let len = prefix.len();
                prefix.extend(std::iter::repeat_n(k, take));
                go(rest, prefix, out);
                prefix.truncate(len);
            }
        }
        let mut out = Vec::new();
        go(&self.frequencies(), &mut Vec::new(), &mut out);
        out
    }

    /// Scalar by which the product `Π_i α_{κ_i}` of annihilators picks the parts `κ`
    /// out of a monomial whose matching-label parts are `self`:
    /// `Π_k k^{m_k(κ)} · m_k(self)! / (m_k(self) − m_k(κ))!`, zero if `κ ⊄ self`.
    pub fn removal_weight(&self, kappa: &Partition) -> BigInt {
        let mut w = BigInt::one();
        for (k, e) in kappa.frequencies() {
            let m = self.multiplicity(k);
            if m < e {
                return BigInt::from(0);
            }
            for i in 0..e {
                w *= BigInt::from(k) * BigInt::from(m - i);
            }
        }
        w
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("partition must be parenthesized: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

pub fn z_factor(mu: &Partition) -> Rational {
    Rational::from_integer(mu.z())
}

/// A partition of `d` whose parts carry either the unit class (`ρ`) or the point class (`λ`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedPartition {
    pub unit_parts: Partition,
    pub point_parts: Partition,
}

impl WeightedPartition {
    pub fn new(unit_parts: Partition, point_parts: Partition) -> Self {
        WeightedPartition { unit_parts, point_parts }
    }

    pub fn degree(&self) -> u32 {
        self.unit_parts.size() + self.point_parts.size()
    }
}

impl fmt::Display for WeightedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[1]+{}[p]", self.unit_parts, self.point_parts)
    }
}

pub fn dual(eta: &WeightedPartition) -> WeightedPartition {
    WeightedPartition::new(eta.point_parts.clone(), eta.unit_parts.clone())
}

pub fn weight_m(eta: &WeightedPartition) -> Rational {
    Rational::from_integer(eta.unit_parts.parts_product() * eta.point_parts.parts_product())
}

pub fn aut_count(eta: &WeightedPartition) -> Rational {
    Rational::from_integer(eta.unit_parts.aut() * eta.point_parts.aut())
}

/// Partitions of `n`, parts lists in lexicographically decreasing order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Pairs `(μ, ν)` with `|μ| + |ν| = s`, ordered by `|μ|` decreasing, then `μ`, then `ν`,
/// each in lexicographically decreasing order.
pub fn enumerate_pairs(s: u32) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for a in (0..=s).rev() {
        let nus = enumerate_partitions(s - a);
        for mu in enumerate_partitions(a) {
            for nu in &nus {
                out.push((mu.clone(), nu.clone()));
            }
        }
    }
    out
}

pub fn concat(mu: &Partition, nu: &Partition) -> Partition {
    mu.concat(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn z_factor_examples() {
        assert_eq!(z_factor(&p(&[1, 1, 1])), int(6));
        assert_eq!(z_factor(&p(&[2, 1])), int(2));
        assert_eq!(z_factor(&Partition::empty()), int(1));
    }

    #[test]
    fn dual_and_weights() {
        let eta = WeightedPartition::new(p(&[2]), p(&[1, 1]));
        let d = dual(&eta);
        assert_eq!(d, WeightedPartition::new(p(&[1, 1]), p(&[2])));
        assert_eq!(dual(&d), eta);
        assert_eq!(weight_m(&eta), int(2));
        assert_eq!(aut_count(&eta), int(2));
        let eta = WeightedPartition::new(p(&[2, 2]), p(&[3]));
        assert_eq!(weight_m(&eta), int(12));
        assert_eq!(aut_count(&eta), int(2));
        let empty = WeightedPartition::default();
        assert_eq!(dual(&empty), empty);
        assert_eq!(weight_m(&empty), int(1));
        assert_eq!(aut_count(&empty), int(1));
        assert_eq!(dual(&WeightedPartition::new(p(&[3, 1]), Partition::empty())).point_parts, p(&[3, 1]));
    }

    #[test]
    fn enumeration_order() {
        let four: Vec<String> = enumerate_partitions(4).iter().map(|x| x.to_string()).collect();
        assert_eq!(four, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        let pairs: Vec<String> = enumerate_pairs(2)
            .iter()
            .map(|(a, b)| format!("{a}{b}"))
            .collect();
        assert_eq!(pairs, ["(2)()", "(1,1)()", "(1)(1)", "()(2)", "()(1,1)"]);
        assert_eq!(enumerate_pairs(0), vec![(Partition::empty(), Partition::empty())]);
    }

    #[test]
    fn concat_and_difference() {
        assert_eq!(concat(&p(&[2, 1]), &p(&[2])), p(&[2, 2, 1]));
        assert_eq!(concat(&p(&[3, 1]), &Partition::empty()), p(&[3, 1]));
        assert_eq!(concat(&p(&[1]), &p(&[1])), p(&[1, 1]));
        assert_eq!(p(&[3, 2, 2, 1]).difference(&p(&[2, 1])), Some(p(&[3, 2])));
        assert_eq!(p(&[3]).difference(&p(&[1])), None);
        assert_eq!(p(&[2, 1]).with_part(2), p(&[2, 2, 1]));
        assert_eq!(p(&[2, 1]).without_part(1), Some(p(&[2])));
    }

    #[test]
    fn sub_multisets_and_removal() {
        let subs: Vec<String> = p(&[2, 1, 1]).sub_multisets().iter().map(|x| x.to_string()).collect();
        assert_eq!(subs, ["(2,1,1)", "(2,1)", "(2)", "(1,1)", "(1)", "()"]);
        assert_eq!(p(&[2, 1, 1]).removal_weight(&p(&[1, 1])), BigInt::from(2));
        assert_eq!(p(&[2, 2]).removal_weight(&p(&[2])), BigInt::from(4));
        assert_eq!(p(&[2]).removal_weight(&p(&[1])), BigInt::from(0));
    }

    #[test]
    fn text_form() {
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("(1, 3)".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert!("(0)".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
        assert_eq!(serde_json::to_string(&p(&[2, 1])).unwrap(), "[2,1]");
    }
}
