//! Built-in fixtures, addressable by name.

use crate::arrangements::{ArrangementJson, HyperplaneArrangement};
use crate::cdga::{exterior_algebra, FiniteCdga};
use crate::elliptic::{elliptic_model, EllipticArrangement, EllipticJson};
use crate::error::{CoreError, Result};
use crate::fox::GroupPresentation;
use crate::tcone::{TorusLocus, TorusLocusJson};

const CDGAS: &[(&str, &str)] = &[
    ("lambda_ab_dba", include_str!("../fixtures/cdga/lambda_ab_dba.json")),
    ("heisenberg", include_str!("../fixtures/cdga/heisenberg.json")),
];

const GROUPS: &[(&str, &str)] = &[
    ("toy", include_str!("../fixtures/groups/toy.txt")),
    ("mobius", include_str!("../fixtures/groups/mobius.txt")),
    ("trefoil", include_str!("../fixtures/groups/trefoil.txt")),
    ("four_generator", include_str!("../fixtures/groups/four_generator.txt")),
    ("torus", include_str!("../fixtures/groups/torus.txt")),
    ("free", include_str!("../fixtures/groups/free.txt")),
];

const ARRANGEMENTS: &[(&str, &str)] = &[
    ("braid", include_str!("../fixtures/arrangements/braid.json")),
    ("ceva3", include_str!("../fixtures/arrangements/ceva3.json")),
    ("pencil3", include_str!("../fixtures/arrangements/pencil3.json")),
    ("generic3", include_str!("../fixtures/arrangements/generic3.json")),
    ("generic4", include_str!("../fixtures/arrangements/generic4.json")),
];

const ELLIPTIC: &[(&str, &str)] = &[
    ("conf_e_star_2", include_str!("../fixtures/elliptic/conf_e_star_2.json")),
    ("e_star", include_str!("../fixtures/elliptic/e_star.json")),
    ("boolean2", include_str!("../fixtures/elliptic/boolean2.json")),
];

const TORI: &[(&str, &str)] = &[("conf_e_star_2_v1", include_str!("../fixtures/tori/conf_e_star_2_v1.json"))];

const EXTERIOR: &[&str] = &["exterior_1", "exterior_2", "exterior_3", "exterior_4"];

fn lookup<'a>(table: &'a [(&str, &str)], kind: &str, name: &str) -> Result<&'a str> {
    table.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).ok_or_else(|| {
        let known: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
        CoreError::Input(format!("unknown {kind} fixture '{name}' (known: {})", known.join(", ")))
    })
}

/// Raw text of a fixture file, if it has one.
pub fn source(name: &str) -> Option<&'static str> {
    [CDGAS, GROUPS, ARRANGEMENTS, ELLIPTIC, TORI].iter().flat_map(|t| t.iter()).find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Names usable with [`cdga`]: the JSON fixtures, small exterior algebras and
/// the models of the elliptic fixtures.
pub fn cdga_names() -> Vec<&'static str> {
    CDGAS.iter().map(|(n, _)| *n).chain(EXTERIOR.iter().copied()).chain(ELLIPTIC.iter().map(|(n, _)| *n)).collect()
}

pub fn cdga(name: &str) -> Result<FiniteCdga> {
    if let Some(k) = name.strip_prefix("exterior_").and_then(|k| k.parse::<usize>().ok()) {
        if (1..=6).contains(&k) {
            return Ok(exterior_algebra(k));
        }
    }
    if ELLIPTIC.iter().any(|(n, _)| *n == name) {
        return elliptic_model(&elliptic(name)?);
    }
    FiniteCdga::from_json(lookup(CDGAS, "CDGA", name)?)
}

pub fn group_names() -> Vec<&'static str> {
    GROUPS.iter().map(|(n, _)| *n).collect()
}

pub fn group(name: &str) -> Result<GroupPresentation> {
    Ok(GroupPresentation::parse(lookup(GROUPS, "group", name)?.trim())?)
}

pub fn arrangement_names() -> Vec<&'static str> {
    ARRANGEMENTS.iter().map(|(n, _)| *n).collect()
}

pub fn arrangement(name: &str) -> Result<HyperplaneArrangement> {
    let j: ArrangementJson = serde_json::from_str(lookup(ARRANGEMENTS, "arrangement", name)?)?;
    HyperplaneArrangement::from_json(&j)
}

pub fn elliptic_names() -> Vec<&'static str> {
    ELLIPTIC.iter().map(|(n, _)| *n).collect()
}

pub fn elliptic(name: &str) -> Result<EllipticArrangement> {
    let j: EllipticJson = serde_json::from_str(lookup(ELLIPTIC, "elliptic arrangement", name)?)?;
    EllipticArrangement::from_json(&j)
}

pub fn tori_names() -> Vec<&'static str> {
    TORI.iter().map(|(n, _)| *n).collect()
}

pub fn tori(name: &str) -> Result<TorusLocus> {
    let j: TorusLocusJson = serde_json::from_str(lookup(TORI, "torus locus", name)?)?;
    TorusLocus::from_json(&j)
}
