use std::collections::BTreeMap;

use severi_core::exactalg::{parse_rational, Rational, Var, Window};
use severi_core::genfun::{
    extract_invariants, p2_pipeline, trace_exp1, z_blowup, z_p1xp1, z_p1xp1_ns, Cap, Surface,
};
use severi_core::oracle::OracleFixture;
use severi_core::spectra::{pure_genus1_closed_form, u_zero_part};

fn fixture() -> OracleFixture {
    let text = include_str!("fixtures/oracle.json");
    serde_json::from_str(text).unwrap()
}

#[test]
fn p1xp1_is_pure() {
    let z = z_p1xp1(3, 3, 6).unwrap();
    let mut seen = 0;
    for (e, _) in z.terms() {
        let (d1, d2, n) = (e.get(Var::Q1), e.get(Var::Q2), e.get(Var::T));
        if d1 + d2 > 3 || (d1, d2) == (0, 0) {
            continue;
        }
        assert_eq!(e.get(Var::U), n - 2 * d1 - 2 * d2, "impure term {e}");
        seen += 1;
    }
    assert!(seen >= 14, "{seen}");
    extract_invariants(&z, Surface::P1xP1, false).unwrap();
}

#[test]
fn prefactor_identity() {
    for t in 0..=5 {
        assert_eq!(z_p1xp1(2, 2, t).unwrap(), z_p1xp1_ns(2, 2, t).unwrap(), "t = {t}");
    }
}

#[test]
fn plain_caps_reproduce_p1xp1() {
    assert_eq!(z_blowup(2, 2, 4, 0, Cap::V, Cap::V).unwrap(), z_p1xp1(2, 2, 4).unwrap());
}

#[test]
fn rulings_are_symmetric() {
    let table = extract_invariants(&z_p1xp1(3, 3, 8).unwrap(), Surface::P1xP1, false).unwrap();
    let mut checked = 0;
    for row in &table.rows {
        let (d1, d2) = (row.class[0], row.class[1]);
        let n = row.n as i32;
        // the mirrored row is inside the computed range exactly when its n is
        if n <= 8 {
            assert_eq!(table.value(row.g, &[d2, d1]), row.value, "g={} ({d1},{d2})", row.g);
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn genus_one_trace_matches_closed_form() {
    let (s_max, t) = (6, 4);
    let trace = u_zero_part(&trace_exp1(s_max, t / 2, t).unwrap());
    let closed = pure_genus1_closed_form(s_max, t).unwrap();
    let common = Window::point()
        .with(Var::Q1, 0, s_max as i32)
        .with(Var::Q2, 0, (t / 2) as i32)
        .with(Var::T, 0, t as i32);
    assert_eq!(trace.truncate_to(&common), closed.truncate_to(&common));
}

#[test]
fn p2_pipeline_agrees_with_recursion() {
    let fx = fixture();
    let p = p2_pipeline(3, 1).unwrap();

    let expected: BTreeMap<(i32, u32), Rational> = fx
        .connected_p2
        .iter()
        .filter(|e| e.d <= 3 && e.g <= 1)
        .map(|e| ((e.g, e.d), parse_rational(&e.value).unwrap()))
        .collect();
    let mut got = BTreeMap::new();
    for row in &p.connected.rows {
        if row.value != Rational::from_integer(0.into()) {
            got.insert((row.g, row.class[0] as u32), row.value.clone());
        }
    }
    assert_eq!(got, expected);

    let disconnected = extract_invariants(&p.z_p2, Surface::P2, false).unwrap();
    for e in fx.severi_degrees.iter().filter(|e| e.d <= 3) {
        let g = ((e.d as i64 - 1) * (e.d as i64 - 2) / 2 - e.delta) as i32;
        if g <= 1 {
            let v = disconnected.value(g, &[e.d as i32]);
            assert_eq!(v, parse_rational(&e.value).unwrap(), "d={} δ={}", e.d, e.delta);
        }
    }
}

#[test]
fn fixture_is_reproducible() {
    assert_eq!(OracleFixture::generate(4, 14).unwrap(), fixture());
}
