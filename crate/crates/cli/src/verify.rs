//! Verification suites run by `severi verify`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use severi_core::genfun::{
    extract_invariants, p2_pipeline, z_bl1_p1xp1, z_exp1, z_hurwitz_elliptic, z_hurwitz_p1, z_p1xp1, Surface,
};
use severi_core::operators::{block_matrix, self_adjointness_defects, MF, MH, MS};
use severi_core::oracle::{engine_block, mf_words, mh_words, ms_words, ns_words};
use severi_core::fock::LabelSet;
use severi_core::operators::NS;
use severi_core::rationality::{r0_closed_form, r1_closed_form, series_consistency, solve_ra};
use severi_core::spectra::{certificates, mh_nilpotency, verify_prop1, verify_prop2, SpectrumCertificate};
use severi_core::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub case: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckRow {
    fn new(suite: &str, case: impl ToString, pass: bool, detail: impl ToString) -> Self {
        CheckRow { suite: suite.into(), case: case.to_string(), pass, detail: detail.to_string() }
    }

    fn from_certificate(c: SpectrumCertificate) -> Self {
        let detail = if c.pass { c.computed } else { format!("claimed {}, computed {}", c.claimed, c.computed) };
        CheckRow::new(&c.kind, c.index, c.pass, detail)
    }
}

pub fn prop1(s_max: u32) -> Result<Vec<CheckRow>> {
    Ok(certificates(0..=s_max, verify_prop1)?.into_iter().map(CheckRow::from_certificate).collect())
}

pub fn prop2(n_max: u32) -> Result<Vec<CheckRow>> {
    Ok(certificates(1..=n_max, verify_prop2)?.into_iter().map(CheckRow::from_certificate).collect())
}

pub fn nilpotency(s_max: u32) -> Result<Vec<CheckRow>> {
    Ok(certificates(0..=s_max, mh_nilpotency)?.into_iter().map(CheckRow::from_certificate).collect())
}

pub fn commutator(s_max: u32) -> Result<Vec<CheckRow>> {
    (0..=s_max)
        .into_par_iter()
        .map(|s| {
            let c = block_matrix(&MS, s)?.commutator(&*block_matrix(&MF::default(), s)?)?;
            let pass = c.is_zero();
            Ok(CheckRow::new("commutator", s, pass, if pass { "[M_S, M_F] = 0" } else { "[M_S, M_F] != 0" }))
        })
        .collect()
}

pub fn self_adjoint(s_max: u32) -> Result<Vec<CheckRow>> {
    let cases: Vec<(&str, u32)> = (0..=s_max).flat_map(|s| [("MS", s), ("MH", s)]).collect();
    cases
        .into_par_iter()
        .map(|(name, s)| {
            let defects = match name {
                "MS" => self_adjointness_defects(&MS, s)?,
                _ => self_adjointness_defects(&MH, s)?,
            };
            Ok(CheckRow::new("self_adjoint", format!("{name} s={s}"), defects.is_empty(), format!("{} defects", defects.len())))
        })
        .collect()
}

pub fn oracle(s_max: u32) -> Result<Vec<CheckRow>> {
    let sev = LabelSet::severi();
    let hur = LabelSet::hurwitz();
    let names = ["MS", "NS", "MH", "MF"];
    let cases: Vec<(&str, u32)> = (0..=s_max).flat_map(|s| names.map(|n| (n, s))).collect();
    cases
        .into_par_iter()
        .map(|(name, s)| {
            let equal = match name {
                "MS" => ms_words(s).block(&sev, s) == engine_block(&*block_matrix(&MS, s)?),
                "NS" => ns_words(s).block(&sev, s) == engine_block(&*block_matrix(&NS, s)?),
                "MH" => mh_words(s).block(&hur, s) == engine_block(&*block_matrix(&MH, s)?),
                _ => mf_words(s, -1).block(&sev, s) == engine_block(&*block_matrix(&MF::default(), s)?),
            };
            Ok(CheckRow::new("oracle", format!("{name} s={s}"), equal, if equal { "blocks agree" } else { "blocks differ" }))
        })
        .collect()
}

/// Extracts invariants from one partition function per surface; an impure
/// coefficient makes the extraction fail.
pub fn purity() -> Result<Vec<CheckRow>> {
    let cases: [(&str, Surface); 6] = [
        ("P1xP1 (3,3) t<=6", Surface::P1xP1),
        ("hurwitz-P1 d<=4 t<=8", Surface::HurwitzP1),
        ("hurwitz-E d<=4 t<=4", Surface::HurwitzElliptic),
        ("ExP1 (3,2) t<=5", Surface::ExP1),
        ("Bl1(P1xP1) (2,2,2) t<=6", Surface::Bl1P1xP1),
        ("P2 d<=3 g<=1", Surface::P2),
    ];
    cases
        .into_par_iter()
        .map(|(case, surface)| {
            let z = match surface {
                Surface::P1xP1 => z_p1xp1(3, 3, 6),
                Surface::HurwitzP1 => z_hurwitz_p1(4, 8),
                Surface::HurwitzElliptic => z_hurwitz_elliptic(4, 4),
                Surface::ExP1 => z_exp1(3, 2, 5),
                Surface::Bl1P1xP1 => z_bl1_p1xp1(2, 2, 6, 2),
                _ => p2_pipeline(3, 1).map(|p| p.z_p2),
            }?;
            Ok(match extract_invariants(&z, surface, false) {
                Ok(t) => CheckRow::new("purity", case, true, format!("{} rows", t.rows.len())),
                Err(e) => CheckRow::new("purity", case, false, e),
            })
        })
        .collect()
}

pub fn rationality(a_max: u32, d2_max: u32) -> Result<Vec<CheckRow>> {
    let mut rows = vec![
        CheckRow::new("rationality", "R_0 closed form", solve_ra(0)? == r0_closed_form(), ""),
        CheckRow::new("rationality", "R_1 closed form", solve_ra(1)? == r1_closed_form(), ""),
    ];
    let verdicts: Vec<_> = (0..=a_max)
        .into_par_iter()
        .map(|a| series_consistency(a, d2_max))
        .collect::<Result<_>>()?;
    for v in verdicts {
        let detail = if v.pass { format!("{} coefficients", v.checked) } else { v.mismatches.join("; ") };
        rows.push(CheckRow::new("rationality", format!("a={} d2<={}", v.a, v.d2_max), v.pass && v.checked > 0, detail));
    }
    Ok(rows)
}
