use std::collections::BTreeMap;

use super::{Code, Violation};
use crate::buildings::{Building, ComponentKind, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::index::{self, threshold};
use crate::orbits::{gcd, Catalog, OrbitRef};
use crate::spectral::Side;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceVerdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Claims taken on trust (distinct image classes are not verified).
    pub assumptions: Vec<String>,
}

/// Checks the combinatorial conditions for a nicely embedded building.
///
/// Nontrivial components must carry controlling windings on every puncture;
/// otherwise the input is reported incomplete.
pub fn validate_nice(cat: &Catalog, b: &Building) -> Result<NiceVerdict> {
    let missing: Vec<String> = b
        .components()
        .iter()
        .filter(|c| c.is_nontrivial())
        .flat_map(|c| {
            c.punctures
                .iter()
                .enumerate()
                .filter(|(_, p)| p.controlling_winding.is_none())
                .map(move |(i, _)| format!("{}:{i}.controlling_winding", c.id))
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteInput(missing));
    }

    let mut v = Vec::new();
    for (i, (a, c)) in b.nodal_pairs().iter().enumerate() {
        v.push(Violation::new(Code::HasNode, format!("node {i}"), format!("nodal pair ({a}, {c})")));
    }

    for comp in b.components() {
        match &comp.kind {
            ComponentKind::Constant => {
                v.push(Violation::new(Code::BadComponentKind, &comp.id, "constant component"));
            }
            ComponentKind::Trivial(_) if !comp.is_trivial_cylinder() => {
                v.push(Violation::new(
                    Code::BadComponentKind,
                    &comp.id,
                    "trivial component is not a trivial cylinder",
                ));
            }
            ComponentKind::Trivial(_) => {}
            ComponentKind::Nontrivial => {
                let r = index::component_report(cat, b, &comp.id)?;
                let d = r.defect.as_ref().map_or(0, |d| d.total);
                if d > 0 {
                    v.push(Violation::new(
                        Code::DefectPositive,
                        &comp.id,
                        format!("asymptotic defect {d}"),
                    ));
                }
                match (r.wind_pi, r.wind_pi_consistent) {
                    (Some(w), Some(false)) => v.push(Violation::new(
                        Code::BadComponentKind,
                        &comp.id,
                        format!("wind_π = {w} but c_N - defect = {}", r.c_n - d),
                    )),
                    (Some(w), _) if w != 0 => v.push(Violation::new(
                        Code::BadComponentKind,
                        &comp.id,
                        format!("wind_π = {w}, not embedded in projection"),
                    )),
                    _ => {}
                }
            }
        }
    }

    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, comp) in b.components().iter().enumerate() {
        if let Some(label) = &comp.image_class {
            classes.entry(label.as_str()).or_default().push(i);
        }
    }
    let signature = |i: usize| {
        let mut s: Vec<(Sign, OrbitRef)> =
            b.components()[i].punctures.iter().map(|p| (p.sign, p.orbit.clone())).collect();
        s.sort();
        s
    };
    for (label, members) in &classes {
        let first = signature(members[0]);
        for &m in &members[1..] {
            if signature(m) != first {
                v.push(Violation::new(
                    Code::ImageClash,
                    &b.components()[m].id,
                    format!(
                        "image class {label} shared with {} but asymptotic orbits differ",
                        b.components()[members[0]].id
                    ),
                ));
            }
        }
    }
    let assumptions = if classes.len() > 1 {
        vec![format!(
            "components in distinct image classes ({}) are assumed to have disjoint projections",
            classes.keys().copied().collect::<Vec<_>>().join(", ")
        )]
    } else {
        Vec::new()
    };

    for (i, pair) in b.breaking_pairs().iter().enumerate() {
        if b.is_trivial_breaking(i)? {
            continue;
        }
        let orbit = &b.puncture(&pair.pos)?.orbit;
        let loc = format!("pair {i} ({}, {})", pair.pos, pair.neg);
        if cat.parity(orbit)? == 1 {
            v.push(Violation::new(Code::BreakingOrbitOdd, loc, format!("breaking orbit {orbit} is odd")));
        } else if orbit.k == 2 {
            if !cat.is_bad(orbit)? {
                v.push(Violation::new(
                    Code::NotBadDouble,
                    loc,
                    format!("breaking orbit {orbit} is a double cover but not bad"),
                ));
            }
        } else if orbit.k > 2 {
            v.push(Violation::new(
                Code::BreakingOrbitMultiplicity,
                loc,
                format!("breaking orbit {orbit} has multiplicity {}", orbit.k),
            ));
        }
    }

    let externals = b.external_punctures();
    for z in &externals {
        let comp = b.component(&z.component)?;
        if !comp.is_nontrivial() {
            continue;
        }
        let p = &comp.punctures[z.index];
        let side = if p.sign == Sign::Pos { Side::Minus } else { Side::Plus };
        let alpha = cat.alpha(&p.orbit, threshold(p.sign, p.constraint), side)?;
        if gcd(p.orbit.k as u64, alpha.unsigned_abs()) != 1 {
            v.push(Violation::new(
                Code::NonSimpleExtremal,
                z.to_string(),
                format!("extremal winding {alpha} at {} is not simply covered", p.orbit),
            ));
        }
    }

    // ends of nontrivial components: (component, k, controlling winding)
    type End = (usize, u32, i64);
    let mut ends: BTreeMap<(Sign, &str), Vec<End>> = BTreeMap::new();
    for (ci, comp) in b.components().iter().enumerate() {
        if !comp.is_nontrivial() {
            continue;
        }
        for p in &comp.punctures {
            let w = p.controlling_winding.expect("checked above");
            ends.entry((p.sign, p.orbit.simple.as_str())).or_default().push((ci, p.orbit.k, w));
        }
    }
    for ((sign, simple), list) in &ends {
        let clash = list.iter().enumerate().any(|(i, a)| {
            list[i + 1..].iter().any(|bb| {
                let same_image = a.0 != bb.0
                    && b.components()[a.0].image_class.is_some()
                    && b.components()[a.0].image_class == b.components()[bb.0].image_class;
                !same_image && (a.1 != bb.1 || a.2 != bb.2)
            })
        });
        if clash {
            v.push(Violation::new(
                Code::MixedMultiplicity,
                format!("{}{simple}", sign.symbol()),
                "ends of nontrivial components at one orbit differ in multiplicity or winding",
            ));
        }
    }
    let mut ext: BTreeMap<(Sign, &str), Vec<(u32, &PunctureId)>> = BTreeMap::new();
    for z in &externals {
        let p = b.puncture(z)?;
        ext.entry((p.sign, p.orbit.simple.as_str())).or_default().push((p.orbit.k, z));
    }
    for ((sign, simple), list) in &ext {
        if list.iter().any(|(k, _)| *k != list[0].0) {
            v.push(Violation::new(
                Code::MixedMultiplicity,
                format!("external {}{simple}", sign.symbol()),
                "external punctures at one orbit have different multiplicities",
            ));
        }
    }

    v.sort();
    Ok(NiceVerdict { ok: v.is_empty(), violations: v, assumptions })
}
