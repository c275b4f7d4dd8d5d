use severi_core::exactalg::{int, rat, Exponents, Var};
use severi_core::genfun::{p2_pipeline, P2Pipeline};

fn ex(pairs: &[(Var, i32)]) -> Exponents {
    Exponents::of(pairs)
}

fn pipeline() -> P2Pipeline {
    p2_pipeline(3, 0).unwrap()
}

#[test]
fn p2_anchors_and_genus_zero_counts() {
    let p = pipeline();
    let bl2 = p.z_bl2.coefficient(&ex(&[(Var::U, -2), (Var::Q1, 2), (Var::T, 4)])).unwrap();
    assert_eq!(bl2, rat(5, 24));
    let p2 = p.z_p2.coefficient(&ex(&[(Var::U, -2), (Var::Q1, 2), (Var::T, 4)])).unwrap();
    assert_eq!(p2, rat(3, 24));
    assert_eq!(p.connected.value(0, &[1]), int(1));
    assert_eq!(p.connected.value(0, &[2]), int(1));
    assert_eq!(p.connected.value(0, &[3]), int(12));
}
