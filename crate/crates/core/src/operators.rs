//! The energy-preserving operators `M_H`, `M_S`, `N_S`, `M_F`, `Q^{|·|}`, and their
//! exact matrices on each energy subspace.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, Exponents, LaurentPoly, MultiSeries, Rational, Var};
use crate::fock::{self, poly_vector_add_term, BasisState, FockVector, LabelSet, PolyVector};
use crate::partitions::{enumerate_partitions, Partition};

/// Bumped whenever an operator definition or the basis normalization changes.
pub const CONVENTION_VERSION: u32 = 1;

pub const DEFAULT_ENERGY_CUTOFF: u32 = 24;

/// An energy-preserving linear map, defined by its action on raw monomials.
pub trait GradedOperator: Send + Sync {
    /// Stable identifier used in cache keys.
    fn name(&self) -> String;

    fn labels(&self) -> LabelSet;

    /// Image of the raw monomial of `state`, expanded in raw monomials.
    fn apply_raw(&self, state: &BasisState) -> PolyVector;

    /// Image of the normalized basis vector `|state⟩`, expanded in normalized vectors.
    fn apply(&self, state: &BasisState) -> PolyVector {
        let z0 = state.z();
        self.apply_raw(state)
            .into_iter()
            .map(|(s, c)| {
                let k = s.z() / &z0;
                (s, c.scale(&k))
            })
            .collect()
    }
}

fn mono(c: Rational, u: i32, q2: i32) -> LaurentPoly {
    LaurentPoly::monomial(c, Exponents::of(&[(Var::U, u), (Var::Q2, q2)]))
}

fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `Π α_{κ_i}` applied to parts `p`, divided by `|Aut κ|`.
fn normalized_removal(p: &Partition, kappa: &Partition) -> Rational {
    Rational::new(p.removal_weight(kappa), kappa.aut())
}

fn nonempty_sub_multisets(p: &Partition) -> impl Iterator<Item = Partition> {
    p.sub_multisets().into_iter().filter(|k| !k.is_empty())
}

/// `M_S = Σ_k α_{-k}[𝓅]α_k[𝓅] + Q2 Σ_{|λ|=|κ|>0} u^{ℓ(λ)-1} α_{-λ}[𝟙]α_κ[𝟙]`
#[derive(Clone, Copy, Debug, Default)]
pub struct MS;

impl MS {
    fn apply_sums(state: &BasisState, out: &mut PolyVector) {
        let BasisState { mu, nu } = state;
        for (k, m) in mu.frequencies() {
            let target = BasisState::new(mu.without_part(k).unwrap(), nu.with_part(k));
            poly_vector_add_term(out, target, &mono(big(k as u64 * m as u64), 0, 0));
        }
        for kappa in nonempty_sub_multisets(nu) {
            let w = normalized_removal(nu, &kappa);
            let rest = nu.difference(&kappa).unwrap();
            for lambda in enumerate_partitions(kappa.size()) {
                let c = &w / big(lambda.aut());
                let target = BasisState::new(mu.concat(&lambda), rest.clone());
                poly_vector_add_term(out, target, &mono(c, lambda.length() as i32 - 1, 1));
            }
        }
    }
}

impl GradedOperator for MS {
    fn name(&self) -> String {
        "MS".into()
    }

    fn labels(&self) -> LabelSet {
        LabelSet::severi()
    }

    fn apply_raw(&self, state: &BasisState) -> PolyVector {
        let mut out = PolyVector::new();
        MS::apply_sums(state, &mut out);
        out
    }
}

/// `N_S = M_S + Q2/u`
#[derive(Clone, Copy, Debug, Default)]
pub struct NS;

impl GradedOperator for NS {
    fn name(&self) -> String {
        "NS".into()
    }

    fn labels(&self) -> LabelSet {
        LabelSet::severi()
    }

    fn apply_raw(&self, state: &BasisState) -> PolyVector {
        let mut out = PolyVector::new();
        MS::apply_sums(state, &mut out);
        poly_vector_add_term(&mut out, state.clone(), &mono(Rational::one(), -1, 1));
        out
    }
}

/// Cut-and-join operator `½ Σ_{k,l>0} [u α_{-k}α_{-l}α_{k+l} + α_{-k-l}α_kα_l]`
/// on the single-label space.
#[derive(Clone, Copy, Debug, Default)]
pub struct MH;

impl GradedOperator for MH {
    fn name(&self) -> String {
        "MH".into()
    }

    fn labels(&self) -> LabelSet {
        LabelSet::hurwitz()
    }

    fn apply_raw(&self, state: &BasisState) -> PolyVector {
        let mu = &state.mu;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut out = PolyVector::new();
        for (j, m) in mu.frequencies() {
            let rest = mu.without_part(j).unwrap();
            for k in 1..j {
                let target = BasisState::new(rest.with_part(k).with_part(j - k), Partition::empty());
                poly_vector_add_term(&mut out, target, &mono(&half * big(j as u64 * m as u64), 1, 0));
            }
        }
        for (l, ml) in mu.frequencies() {
            let rest = mu.without_part(l).unwrap();
            for (k, mk) in rest.frequencies() {
                let joined = rest.without_part(k).unwrap().with_part(k + l);
                let c = &half * big(k as u64 * l as u64 * ml as u64 * mk as u64);
                poly_vector_add_term(&mut out, BasisState::new(joined, Partition::empty()), &mono(c, 0, 0));
            }
        }
        out
    }
}

/// Operator of a single tangency condition to a fiber at a fixed point:
///
/// `Σ_{k=|μ|,ℓ(μ)=2} [α_{-k}[𝓅]α_μ[𝓅] + u α_{-μ}[𝓅]α_k[𝓅]]`
/// `+ Σ Q2 u^{ℓ(λ)-1} α_{-λ}[𝟙]α_κ[𝟙]α_k[𝓅]` over `|λ| = |κ|+k`, `ℓ(λ)+ℓ(κ) ≥ 2`
/// `+ Σ Q2 u^{ℓ(λ)} α_{-λ}[𝟙]α_{-k}[𝓅]α_κ[𝟙]` over `|λ|+k = |κ|`, `ℓ(λ)+ℓ(κ) ≥ 2`
/// `+ Σ_{k>1} c_k u α_{-k}[𝓅]α_k[𝓅]`.
///
/// The default coefficient is `c_k = -(k²-1)/12`, the unique choice that commutes
/// with `M_S`; [`MF::positive_genus_one_term`] builds the `+(k²-1)/12` variant.
#[derive(Clone, Copy, Debug)]
pub struct MF {
    genus_one_sign: i64,
}

impl Default for MF {
    fn default() -> Self {
        MF { genus_one_sign: -1 }
    }
}

impl MF {
    pub fn positive_genus_one_term() -> Self {
        MF { genus_one_sign: 1 }
    }

    fn genus_one_coefficient(&self, k: u32) -> Rational {
        let k = k as i64;
        Rational::new(BigInt::from(self.genus_one_sign * (k * k - 1)), BigInt::from(12))
    }
}

impl GradedOperator for MF {
    fn name(&self) -> String {
        if self.genus_one_sign < 0 {
            "MF".into()
        } else {
            "MF+".into()
        }
    }

    fn labels(&self) -> LabelSet {
        LabelSet::severi()
    }

    fn apply_raw(&self, state: &BasisState) -> PolyVector {
        let BasisState { mu, nu } = state;
        let mut out = PolyVector::new();
        for pair in mu.sub_multisets().into_iter().filter(|p| p.length() == 2) {
            let w = normalized_removal(mu, &pair);
            let target = BasisState::new(mu.difference(&pair).unwrap(), nu.with_part(pair.size()));
            poly_vector_add_term(&mut out, target, &mono(w, 0, 0));
        }
        for (k, m) in mu.frequencies() {
            let w1 = big(k as u64 * m as u64);
            let rest = mu.without_part(k).unwrap();
            for pair in enumerate_partitions(k).into_iter().filter(|p| p.length() == 2) {
                let target = BasisState::new(rest.clone(), nu.concat(&pair));
                poly_vector_add_term(&mut out, target, &mono(&w1 / big(pair.aut()), 1, 0));
            }
            if k > 1 {
                let target = BasisState::new(rest.clone(), nu.with_part(k));
                poly_vector_add_term(&mut out, target, &mono(&w1 * self.genus_one_coefficient(k), 1, 0));
            }
            for kappa in nu.sub_multisets() {
                let w2 = &w1 * normalized_removal(nu, &kappa);
                let nu_rest = nu.difference(&kappa).unwrap();
                for lambda in enumerate_partitions(kappa.size() + k) {
                    if lambda.length() + kappa.length() < 2 {
                        continue;
                    }
                    let target = BasisState::new(rest.concat(&lambda), nu_rest.clone());
                    let c = &w2 / big(lambda.aut());
                    poly_vector_add_term(&mut out, target, &mono(c, lambda.length() as i32 - 1, 1));
                }
            }
        }
        for kappa in nonempty_sub_multisets(nu) {
            let w = normalized_removal(nu, &kappa);
            let nu_rest = nu.difference(&kappa).unwrap();
            for k in 1..=kappa.size() {
                for lambda in enumerate_partitions(kappa.size() - k) {
                    if lambda.length() + kappa.length() < 2 {
                        continue;
                    }
                    let target = BasisState::new(mu.concat(&lambda), nu_rest.with_part(k));
                    let c = &w / big(lambda.aut());
                    poly_vector_add_term(&mut out, target, &mono(c, lambda.length() as i32, 1));
                }
            }
        }
        out
    }
}

/// `x^{|·|}` for a grading variable `x`.
#[derive(Clone, Debug)]
pub struct EnergyScaling {
    pub var: Var,
    pub labels: LabelSet,
}

impl GradedOperator for EnergyScaling {
    fn name(&self) -> String {
        format!("{}^energy", self.var.symbol())
    }

    fn labels(&self) -> LabelSet {
        self.labels.clone()
    }

    fn apply_raw(&self, state: &BasisState) -> PolyVector {
        let e = Exponents::ZERO.with(self.var, state.energy() as i32);
        fock::poly_basis(state.clone())
            .into_iter()
            .map(|(s, c)| (s, c.mul(&LaurentPoly::monomial(Rational::one(), e))))
            .collect()
    }
}

/// Exact matrix of an operator on the energy-`s` subspace, stored by sparse columns:
/// entry `(i, j)` is the coefficient of basis state `i` in the image of basis state `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyBlockMatrix {
    operator: String,
    energy: u32,
    basis: Vec<BasisState>,
    columns: Vec<BTreeMap<usize, LaurentPoly>>,
}

impl EnergyBlockMatrix {
    pub fn compute(op: &dyn GradedOperator, s: u32) -> Result<EnergyBlockMatrix> {
        let basis = op.labels().basis(s);
        let index: HashMap<&BasisState, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let columns = basis
            .par_iter()
            .map(|b| {
                op.apply(b)
                    .into_iter()
                    .map(|(t, c)| {
                        index.get(&t).map(|&i| (i, c)).ok_or_else(|| {
                            Error::Integrity(format!(
                                "operator {} maps {b} outside energy {s} (to {t})",
                                op.name()
                            ))
                        })
                    })
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EnergyBlockMatrix { operator: op.name(), energy: s, basis, columns })
    }

    pub fn operator(&self) -> &str {
        &self.operator
    }

    pub fn energy(&self) -> u32 {
        self.energy
    }

    pub fn basis(&self) -> &[BasisState] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        self.columns[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, LaurentPoly> {
        &self.columns[j]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    fn check_compatible(&self, other: &EnergyBlockMatrix) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Configuration(format!(
                "block matrices on different bases ({} at energy {}, {} at energy {})",
                self.operator, self.energy, other.operator, other.energy
            )));
        }
        Ok(())
    }

    fn with_columns(&self, operator: String, columns: Vec<BTreeMap<usize, LaurentPoly>>) -> EnergyBlockMatrix {
        EnergyBlockMatrix { operator, energy: self.energy, basis: self.basis.clone(), columns }
    }

    pub fn mul(&self, other: &EnergyBlockMatrix) -> Result<EnergyBlockMatrix> {
        self.check_compatible(other)?;
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut out: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        out.entry(*i).or_default().add_assign(&a.mul(b));
                    }
                }
                out.retain(|_, c| !c.is_zero());
                out
            })
            .collect();
        Ok(self.with_columns(format!("{}*{}", self.operator, other.operator), columns))
    }

    pub fn sub(&self, other: &EnergyBlockMatrix) -> Result<EnergyBlockMatrix> {
        self.check_compatible(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut out = a.clone();
                for (i, c) in b {
                    out.entry(*i).or_default().add_assign(&c.neg());
                }
                out.retain(|_, c| !c.is_zero());
                out
            })
            .collect();
        Ok(self.with_columns(format!("{}-{}", self.operator, other.operator), columns))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &EnergyBlockMatrix) -> Result<EnergyBlockMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<EnergyBlockMatrix> {
        let mut out = self.identity_like();
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn identity_like(&self) -> EnergyBlockMatrix {
        let columns = (0..self.dim()).map(|j| BTreeMap::from([(j, LaurentPoly::one())])).collect();
        self.with_columns("Id".into(), columns)
    }

    /// Entries evaluated at `var = 0`; fails if an entry has a negative power of `var`.
    pub fn specialize_zero(&self, var: Var) -> Result<EnergyBlockMatrix> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut out = BTreeMap::new();
                for (i, c) in col {
                    let s = c.specialize_zero(var)?;
                    if !s.is_zero() {
                        out.insert(*i, s);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_columns(format!("{}|{}=0", self.operator, var.symbol()), columns))
    }

    /// Matrix-vector product on coefficient vectors indexed like the basis.
    pub fn apply_series(&self, x: &[MultiSeries]) -> Result<Vec<MultiSeries>> {
        let window = *x
            .first()
            .ok_or_else(|| Error::Configuration("empty coefficient vector".into()))?
            .window();
        let mut y = vec![MultiSeries::zero(window); self.dim()];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (i, a) in &self.columns[j] {
                y[i.to_owned()].add_assign(&xj.mul_poly(a))?;
            }
        }
        Ok(y)
    }

    pub fn to_record(&self) -> BlockRecord {
        let mut entries = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                let terms = c.terms().map(|(e, r)| (e.0, format_rational(r))).collect();
                entries.push((*i, j, terms));
            }
        }
        BlockRecord {
            operator: self.operator.clone(),
            energy: self.energy,
            convention_version: CONVENTION_VERSION,
            basis: self.basis.iter().map(|b| b.to_string()).collect(),
            entries,
        }
    }

    pub fn from_record(rec: &BlockRecord) -> Result<EnergyBlockMatrix> {
        if rec.convention_version != CONVENTION_VERSION {
            return Err(Error::Integrity(format!(
                "block record has convention version {}, expected {CONVENTION_VERSION}",
                rec.convention_version
            )));
        }
        let basis = rec.basis.iter().map(|s| s.parse()).collect::<Result<Vec<BasisState>>>()?;
        let mut columns = vec![BTreeMap::new(); basis.len()];
        for (i, j, terms) in &rec.entries {
            if *i >= basis.len() || *j >= basis.len() {
                return Err(Error::Parse(format!("block entry ({i},{j}) outside basis")));
            }
            let mut p = LaurentPoly::zero();
            for (e, c) in terms {
                p.add_term(Exponents(*e), parse_rational(c)?);
            }
            columns[*j].insert(*i, p);
        }
        Ok(EnergyBlockMatrix { operator: rec.operator.clone(), energy: rec.energy, basis, columns })
    }
}

/// Serialized block: basis in text form and `(row, column, terms)` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub operator: String,
    pub energy: u32,
    pub convention_version: u32,
    pub basis: Vec<String>,
    pub entries: Vec<(usize, usize, Vec<([i32; 6], String)>)>,
}

/// Write-once in-memory map from `(operator, energy)` to block matrices.
pub struct BlockCache {
    cutoff: u32,
    blocks: Mutex<HashMap<(String, u32), Arc<EnergyBlockMatrix>>>,
}

impl BlockCache {
    pub fn new(cutoff: u32) -> Self {
        BlockCache { cutoff, blocks: Mutex::new(HashMap::new()) }
    }

    pub fn global() -> &'static BlockCache {
        static CACHE: OnceLock<BlockCache> = OnceLock::new();
        CACHE.get_or_init(|| BlockCache::new(DEFAULT_ENERGY_CUTOFF))
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn get(&self, op: &dyn GradedOperator, s: u32) -> Result<Arc<EnergyBlockMatrix>> {
        if s > self.cutoff {
            return Err(Error::Configuration(format!(
                "energy {s} exceeds the block cutoff {}",
                self.cutoff
            )));
        }
        let key = (format!("{}@v{CONVENTION_VERSION}", op.name()), s);
        if let Some(b) = self.blocks.lock().unwrap().get(&key) {
            return Ok(Arc::clone(b));
        }
        let block = Arc::new(EnergyBlockMatrix::compute(op, s)?);
        let mut map = self.blocks.lock().unwrap();
        Ok(Arc::clone(map.entry(key).or_insert(block)))
    }

    /// Seeds the cache with a precomputed block; an existing entry wins.
    pub fn insert(&self, block: EnergyBlockMatrix) -> Arc<EnergyBlockMatrix> {
        let key = (format!("{}@v{CONVENTION_VERSION}", block.operator()), block.energy());
        let mut map = self.blocks.lock().unwrap();
        Arc::clone(map.entry(key).or_insert_with(|| Arc::new(block)))
    }

    pub fn len(&self) -> usize {
        self.blocks.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn block_matrix(op: &dyn GradedOperator, s: u32) -> Result<Arc<EnergyBlockMatrix>> {
    BlockCache::global().get(op, s)
}

fn energy_coefficients(block: &EnergyBlockMatrix, v: &FockVector) -> Vec<MultiSeries> {
    block.basis().iter().map(|b| v.component(b)).collect()
}

fn assemble(v: &FockVector, parts: Vec<(Arc<EnergyBlockMatrix>, Vec<MultiSeries>)>) -> Result<FockVector> {
    let mut out = FockVector::zero(*v.window());
    for (block, coeffs) in parts {
        for (b, c) in block.basis().iter().zip(coeffs) {
            out.add_component(b.clone(), &c)?;
        }
    }
    Ok(out)
}

/// `op(v)`, blockwise.
pub fn apply_to_vector(op: &dyn GradedOperator, v: &FockVector) -> Result<FockVector> {
    let parts = v
        .energies()
        .into_par_iter()
        .map(|s| {
            let block = block_matrix(op, s)?;
            let y = block.apply_series(&energy_coefficients(&block, &v.energy_part(s)))?;
            Ok((block, y))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(v, parts)
}

/// `Σ_{n ≤ t_order} t^n op^n(v) / n!`, each energy block propagated independently.
pub fn exp_apply(op: &dyn GradedOperator, v: &FockVector, t_order: u32) -> Result<FockVector> {
    let (_, t_hi) = v.window().bounds(Var::T);
    if (t_order as i64) > t_hi as i64 {
        return Err(Error::Configuration(format!(
            "t-order {t_order} exceeds the t-window of the vector ({})",
            v.window()
        )));
    }
    let t = Exponents::of(&[(Var::T, 1)]);
    let parts = v
        .energies()
        .into_par_iter()
        .map(|s| {
            let block = block_matrix(op, s)?;
            let mut term = energy_coefficients(&block, &v.energy_part(s));
            let mut sum = term.clone();
            for n in 1..=t_order {
                let k = Rational::new(BigInt::one(), BigInt::from(n));
                term = block.apply_series(&term)?.iter().map(|c| c.mul_monomial(&k, &t)).collect();
                if term.iter().all(MultiSeries::is_zero) {
                    break;
                }
                for (acc, x) in sum.iter_mut().zip(&term) {
                    acc.add_assign(x)?;
                }
            }
            Ok((block, sum))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(v, parts)
}

/// Pairs `(i, j)` of basis indices where `⟨b_i | op b_j⟩ ≠ ⟨op b_i | b_j⟩`.
pub fn self_adjointness_defects(op: &dyn GradedOperator, s: u32) -> Result<Vec<(usize, usize)>> {
    let block = block_matrix(op, s)?;
    let labels = op.labels();
    let images: Vec<PolyVector> = block.basis().iter().map(|b| op.apply(b)).collect();
    let mut defects = Vec::new();
    for (i, bi) in block.basis().iter().enumerate() {
        for (j, bj) in block.basis().iter().enumerate() {
            let left = fock::poly_inner_product(&labels, &fock::poly_basis(bi.clone()), &images[j]);
            let right = fock::poly_inner_product(&labels, &images[i], &fock::poly_basis(bj.clone()));
            if left != right {
                defects.push((i, j));
            }
        }
    }
    Ok(defects)
}
