use std::collections::BTreeMap;

use proptest::prelude::*;
use severi_core::exactalg::{Exponents, LaurentPoly, Rational, Var};
use severi_core::fock::{
    annihilate, annihilate_raw, create, create_raw, poly_basis, poly_inner_product, BasisState, Label, LabelSet,
    PolyVector,
};
use severi_core::operators::{block_matrix, GradedOperator, MF, MH, MS, NS};
use severi_core::oracle::{engine_block, mf_words, mh_words, ms_words, normal_order, ns_words, FreeWord, Ladder};

const LABELS: [Label; 2] = [Label::One, Label::Point];

fn states_upto(labels: &LabelSet, s: u32) -> Vec<BasisState> {
    (0..=s).flat_map(|e| labels.basis(e)).collect()
}

fn add(v: &mut BTreeMap<BasisState, Rational>, s: BasisState, c: Rational) {
    *v.entry(s).or_default() += c;
}

fn prune(mut v: BTreeMap<BasisState, Rational>) -> BTreeMap<BasisState, Rational> {
    v.retain(|_, c| *c != Rational::from_integer(0.into()));
    v
}

fn apply_ladder(labels: &LabelSet, l: Ladder, v: &BTreeMap<BasisState, Rational>) -> BTreeMap<BasisState, Rational> {
    let mut out = BTreeMap::new();
    for (s, c) in v {
        if l.k < 0 {
            add(&mut out, create_raw(-l.k as i64, l.label, s).unwrap(), c.clone());
        } else {
            for (t, w) in annihilate_raw(labels, l.k as i64, l.label, s).unwrap() {
                add(&mut out, t, c * w);
            }
        }
    }
    prune(out)
}

/// Direct action of a word on the vacuum, rightmost symbol first.
fn direct(labels: &LabelSet, word: &[Ladder]) -> BTreeMap<BasisState, Rational> {
    let mut v = BTreeMap::new();
    v.insert(BasisState::vacuum(), Rational::from_integer(1.into()));
    for &l in word.iter().rev() {
        v = apply_ladder(labels, l, &v);
    }
    v
}

fn symbols() -> Vec<Ladder> {
    let mut out = Vec::new();
    for k in 1..=4 {
        for label in LABELS {
            out.push(Ladder::new(k, label));
            out.push(Ladder::new(-k, label));
        }
    }
    out
}

#[test]
fn commutation_relations_on_low_energy() {
    let labels = LabelSet::severi();
    let states = states_upto(&labels, 8);
    for k in 1..=6i64 {
        for l in 1..=6i64 {
            for a in LABELS {
                for b in LABELS {
                    let expected = if k == l { k * labels.pairing(a, b) as i64 } else { 0 };
                    for s in &states {
                        // α_k[a] α_{-l}[b] − α_{-l}[b] α_k[a] on the normalized |s⟩
                        let mut lhs: BTreeMap<BasisState, Rational> = BTreeMap::new();
                        let (t, c) = create(l, b, s).unwrap();
                        for (t2, c2) in annihilate(&labels, k, a, &t).unwrap() {
                            add(&mut lhs, t2, &c * c2);
                        }
                        for (t, c) in annihilate(&labels, k, a, s).unwrap() {
                            let (t2, c2) = create(l, b, &t).unwrap();
                            add(&mut lhs, t2, -(c * c2));
                        }
                        let mut rhs = BTreeMap::new();
                        add(&mut rhs, s.clone(), Rational::from_integer(expected.into()));
                        assert_eq!(prune(lhs), prune(rhs), "k={k} l={l} a={a:?} b={b:?} s={s}");
                    }
                }
            }
        }
    }
}

fn normalized_vector(state: &BasisState, c: Rational) -> PolyVector {
    let mut v = PolyVector::new();
    v.insert(state.clone(), LaurentPoly::constant(c));
    v
}

#[test]
fn creation_adjoint_to_crossed_annihilation() {
    // u ⟨α_{-k}[𝟙] x | y⟩ = ⟨x | α_k[𝟙] y⟩
    let labels = LabelSet::severi();
    let u = LaurentPoly::monomial(Rational::from_integer(1.into()), Exponents::of(&[(Var::U, 1)]));
    let states = states_upto(&labels, 5);
    for k in 1..=3i64 {
        for x in &states {
            let (cx, c) = create(k, Label::One, x).unwrap();
            let ax = normalized_vector(&cx, c);
            for y in &states {
                let mut ay = PolyVector::new();
                for (t, c) in annihilate(&labels, k, Label::One, y).unwrap() {
                    ay.insert(t, LaurentPoly::constant(c));
                }
                let left = u.mul(&poly_inner_product(&labels, &ax, &poly_basis(y.clone())));
                let right = poly_inner_product(&labels, &poly_basis(x.clone()), &ay);
                assert_eq!(left, right, "k={k} x={x} y={y}");
            }
        }
    }
}

#[test]
fn inner_product_symmetric_on_basis() {
    for labels in [LabelSet::severi(), LabelSet::hurwitz()] {
        let states = states_upto(&labels, 5);
        for x in &states {
            for y in &states {
                let (bx, by) = (poly_basis(x.clone()), poly_basis(y.clone()));
                assert_eq!(poly_inner_product(&labels, &bx, &by), poly_inner_product(&labels, &by, &bx));
            }
        }
    }
}

fn all_operators() -> Vec<Box<dyn GradedOperator>> {
    vec![Box::new(MS), Box::new(NS), Box::new(MH), Box::new(MF::default()), Box::new(MF::positive_genus_one_term())]
}

#[test]
fn operators_conserve_energy() {
    for op in all_operators() {
        for s in 0..=8 {
            for b in op.labels().basis(s) {
                for t in op.apply(&b).keys() {
                    assert_eq!(t.energy(), s, "{} maps {b} to {t}", op.name());
                }
            }
        }
    }
}

fn self_adjoint_on(op: &dyn GradedOperator, s: u32) {
    let labels = op.labels();
    let basis = labels.basis(s);
    let images: Vec<PolyVector> = basis.iter().map(|b| op.apply(b)).collect();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let left = poly_inner_product(&labels, &images[i], &poly_basis(bj.clone()));
            let right = poly_inner_product(&labels, &poly_basis(bi.clone()), &images[j]);
            assert_eq!(left, right, "{} not self-adjoint at {bi}, {bj}", op.name());
        }
    }
}

#[test]
fn ms_and_mh_self_adjoint() {
    for s in 0..=6 {
        self_adjoint_on(&MS, s);
        self_adjoint_on(&MH, s);
    }
}

#[test]
fn ms_commutes_with_mf() {
    for s in 0..=6 {
        let ms = block_matrix(&MS, s).unwrap();
        let mf = block_matrix(&MF::default(), s).unwrap();
        assert!(ms.commutator(&mf).unwrap().is_zero(), "[M_S, M_F] ≠ 0 at s = {s}");
    }
    let bad = (0..=6).any(|s| {
        let ms = block_matrix(&MS, s).unwrap();
        let mf = block_matrix(&MF::positive_genus_one_term(), s).unwrap();
        !ms.commutator(&mf).unwrap().is_zero()
    });
    assert!(bad, "the +(k²−1)/12 variant should not commute with M_S");
}

#[test]
fn mh_at_zero_is_nilpotent() {
    for s in 1..=10 {
        let b = block_matrix(&MH, s).unwrap().specialize_zero(Var::U).unwrap();
        assert!(b.pow(s).unwrap().is_zero(), "s = {s}");
    }
}

#[test]
fn blocks_match_normal_ordering_oracle() {
    let sev = LabelSet::severi();
    let hur = LabelSet::hurwitz();
    for s in 0..=5 {
        assert_eq!(ms_words(s).block(&sev, s), engine_block(&block_matrix(&MS, s).unwrap()), "MS s={s}");
        assert_eq!(ns_words(s).block(&sev, s), engine_block(&block_matrix(&NS, s).unwrap()), "NS s={s}");
        assert_eq!(mh_words(s).block(&hur, s), engine_block(&block_matrix(&MH, s).unwrap()), "MH s={s}");
        assert_eq!(mf_words(s, -1).block(&sev, s), engine_block(&block_matrix(&MF::default(), s).unwrap()), "MF s={s}");
        assert_eq!(
            mf_words(s, 1).block(&sev, s),
            engine_block(&block_matrix(&MF::positive_genus_one_term(), s).unwrap()),
            "MF+ s={s}"
        );
    }
}

#[test]
fn normal_order_matches_direct_action_exhaustively() {
    let sym = symbols();
    let labels = LabelSet::severi();
    let mut words: Vec<Vec<Ladder>> = vec![Vec::new()];
    for _ in 0..4 {
        words = words
            .iter()
            .flat_map(|w| sym.iter().map(move |&l| [w.as_slice(), &[l]].concat()))
            .collect();
        for w in &words {
            assert_eq!(normal_order(&labels, &FreeWord(w.clone())), direct(&labels, w), "{w:?}");
        }
    }
}

fn ladder() -> impl Strategy<Value = Ladder> {
    (1i32..=4, any::<bool>(), any::<bool>())
        .prop_map(|(k, create, one)| Ladder::new(if create { -k } else { k }, if one { Label::One } else { Label::Point }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn normal_order_matches_direct_action_long_words(w in prop::collection::vec(ladder(), 5..=6)) {
        let labels = LabelSet::severi();
        prop_assert_eq!(normal_order(&labels, &FreeWord(w.clone())), direct(&labels, &w));
    }

    #[test]
    fn raw_normalized_round_trip(mu in prop::collection::vec(1u32..5, 0..4), nu in prop::collection::vec(1u32..5, 0..4)) {
        use severi_core::exactalg::{MultiSeries, Window};
        use severi_core::fock::FockVector;
        use severi_core::partitions::Partition;
        let s = BasisState::new(Partition::new(mu).unwrap(), Partition::new(nu).unwrap());
        let w = Window::point();
        let c = MultiSeries::monomial(w, Rational::new(3.into(), 7.into()), Exponents::ZERO);
        let mut v = FockVector::zero(w);
        v.add_component(s, &c).unwrap();
        prop_assert_eq!(FockVector::from_raw_coefficients(w, &v.raw_coefficients()).unwrap(), v);
    }
}
