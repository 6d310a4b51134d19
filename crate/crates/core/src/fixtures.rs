//! Reference catalogs, buildings and asymptotics used by the shipped JSON
//! fixtures, the tests and the benches.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::buildings::{BreakingPair, Building, Component, Puncture, PunctureId, Sign};
use crate::orbits::{Catalog, OrbitModel, OrbitRef, SimpleOrbit};
use crate::spectral::{FlowLoop, SpectralEntry, SpectralTable, Sym2};

/// Grid used by the flow orbits of the reference catalogs.
pub const FIXTURE_GRID: usize = 41;

pub fn flow_orbit(id: &str, samples: Vec<Sym2>, grid: usize) -> SimpleOrbit {
    SimpleOrbit {
        id: id.into(),
        period: 1.0,
        model: OrbitModel::Flow { lp: FlowLoop::new(samples, 1.0).expect("valid fixture loop"), grid },
        hyperbolic: None,
    }
}

/// A stored table whose window is its largest `|λ|`.
pub fn table(rows: &[(f64, i64, u32)]) -> SpectralTable {
    let window = rows.iter().map(|r| r.0.abs()).fold(0.0, f64::max);
    let entries = rows
        .iter()
        .map(|&(eigenvalue, winding, multiplicity)| SpectralEntry { eigenvalue, winding, multiplicity })
        .collect();
    SpectralTable::new(entries, window, 0).expect("valid fixture table")
}

pub fn table_orbit(id: &str, covers: Vec<(u32, SpectralTable)>, hyperbolic: Option<bool>) -> SimpleOrbit {
    SimpleOrbit { id: id.into(), period: 1.0, model: OrbitModel::Table(covers.into_iter().collect::<BTreeMap<_, _>>()), hyperbolic }
}

/// `S ≡ θ·Id`, an elliptic orbit rotating by `θ`.
pub fn rotation(theta: f64) -> Vec<Sym2> {
    vec![Sym2::new(theta, 0.0, theta); 3]
}

/// `S ≡ diag(1, -1)`, positive hyperbolic with `μ = 0` on every cover.
pub fn saddle() -> Vec<Sym2> {
    vec![Sym2::new(1.0, 0.0, -1.0); 3]
}

/// `S(t) = π·Id + R(πt) diag(1, -1) R(πt)ᵀ`, negative hyperbolic with
/// `μ = 1` and an even, bad double cover.
pub fn twisted_saddle() -> Vec<Sym2> {
    (0..3)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / 3.0;
            Sym2::new(PI + a.cos(), a.sin(), PI - a.cos())
        })
        .collect()
}

/// Three orbits: `h` (elliptic, μ = 1), `d` (positive hyperbolic, μ = 0)
/// and the table orbit `e` (even, μ = 4).
pub fn demo_catalog() -> Catalog {
    Catalog::new(vec![
        flow_orbit("h", rotation(PI / 2.0), FIXTURE_GRID),
        flow_orbit("d", saddle(), FIXTURE_GRID),
        table_orbit(
            "e",
            vec![(1, table(&[(-7.0, 1, 2), (-1.0, 2, 1), (1.0, 2, 1), (7.0, 3, 2)]))],
            Some(true),
        ),
    ])
    .expect("valid demo catalog")
}

fn o(s: &str) -> OrbitRef {
    OrbitRef::new(s, 1)
}

fn pos(orbit: OrbitRef, w: i64) -> Puncture {
    Puncture::new(Sign::Pos, orbit).with_winding(w)
}

fn neg(orbit: OrbitRef, w: i64) -> Puncture {
    Puncture::new(Sign::Neg, orbit).with_winding(w)
}

fn labeled(mut c: Component, label: &str) -> Component {
    c.image_class = Some(label.into());
    c
}

fn pair(p: (&str, usize), n: (&str, usize)) -> BreakingPair {
    BreakingPair { pos: PunctureId::new(p.0, p.1), neg: PunctureId::new(n.0, n.1) }
}

/// Two index 1 curves `v1` over `v2` broken along the even orbit `d`, with
/// trivial cylinders over `h` above each of them.
pub fn fig3() -> Building {
    let v1 = labeled(Component::nontrivial("v1", 0, 0, vec![pos(o("h"), 0), neg(o("d"), 0)]), "A");
    let v2 = labeled(Component::nontrivial("v2", 0, 0, vec![pos(o("d"), 0), pos(o("h"), 0)]), "B");
    Building::new(
        vec![Component::trivial_cylinder("T1", o("h")), v1, v2, Component::trivial_cylinder("T2", o("h"))],
        vec![pair(("v1", 0), ("T1", 1)), pair(("v2", 0), ("v1", 1)), pair(("v2", 1), ("T2", 1))],
        vec![],
    )
    .expect("valid fixture")
}

/// The breaking orbit of [`fig3`] replaced by the odd orbit `h`.
pub fn mutant_odd_breaking() -> Building {
    let v1 = labeled(Component::nontrivial("v1", 0, 1, vec![pos(o("h"), 0), neg(o("h"), 1)]), "A");
    let v2 = labeled(Component::nontrivial("v2", 0, 0, vec![pos(o("h"), 0), pos(o("h"), 0)]), "B");
    Building::new(
        vec![Component::trivial_cylinder("T1", o("h")), v1, v2, Component::trivial_cylinder("T2", o("h"))],
        vec![pair(("v1", 0), ("T1", 1)), pair(("v2", 0), ("v1", 1)), pair(("v2", 1), ("T2", 1))],
        vec![],
    )
    .expect("valid fixture")
}

/// The breaking orbit of [`fig3`] replaced by the double cover of `d`,
/// which is even but not bad.
pub fn mutant_double_breaking() -> Building {
    let d2 = OrbitRef::new("d", 2);
    let v1 = labeled(Component::nontrivial("v1", 0, 0, vec![pos(o("h"), 0), neg(d2.clone(), 0)]), "A");
    let v2 = labeled(Component::nontrivial("v2", 0, 0, vec![pos(d2, 0), pos(o("h"), 0)]), "B");
    Building::new(
        vec![Component::trivial_cylinder("T1", o("h")), v1, v2, Component::trivial_cylinder("T2", o("h"))],
        vec![pair(("v1", 0), ("T1", 1)), pair(("v2", 0), ("v1", 1)), pair(("v2", 1), ("T2", 1))],
        vec![],
    )
    .expect("valid fixture")
}

/// [`fig3`] with a second even puncture (at `e`) on `v1`.
pub fn mutant_two_even() -> Building {
    let v1 = labeled(
        Component::nontrivial("v1", 0, -2, vec![pos(o("h"), 0), neg(o("d"), 0), pos(o("e"), 2)]),
        "A",
    );
    let v2 = labeled(Component::nontrivial("v2", 0, 0, vec![pos(o("d"), 0), pos(o("h"), 0)]), "B");
    Building::new(
        vec![Component::trivial_cylinder("T1", o("h")), v1, v2, Component::trivial_cylinder("T2", o("h"))],
        vec![pair(("v1", 0), ("T1", 1)), pair(("v2", 0), ("v1", 1)), pair(("v2", 1), ("T2", 1))],
        vec![],
    )
    .expect("valid fixture")
}

/// [`fig3`] with an index 0 cylinder `w` over `d` inserted between the two
/// curves.
pub fn fig4() -> Building {
    let v1 = labeled(Component::nontrivial("v1", 0, 0, vec![pos(o("h"), 0), neg(o("d"), 0)]), "A");
    let w = labeled(Component::nontrivial("w", 0, 0, vec![pos(o("d"), 0), neg(o("d"), 0)]), "C");
    let v2 = labeled(Component::nontrivial("v2", 0, 0, vec![pos(o("d"), 0), pos(o("h"), 0)]), "B");
    Building::new(
        vec![Component::trivial_cylinder("T1", o("h")), v1, w, v2, Component::trivial_cylinder("T2", o("h"))],
        vec![
            pair(("v1", 0), ("T1", 1)),
            pair(("w", 0), ("v1", 1)),
            pair(("v2", 0), ("w", 1)),
            pair(("v2", 1), ("T2", 1)),
        ],
        vec![],
    )
    .expect("valid fixture")
}

/// The trivial cylinder over the even orbit `d`.
pub fn trivial_cylinder() -> Building {
    Building::new(vec![Component::trivial_cylinder("T", o("d"))], vec![], vec![]).expect("valid fixture")
}

/// Two positive punctures at the odd orbit `h`, unconstrained.
pub fn two_odd_asymptotics() -> Vec<Puncture> {
    vec![Puncture::new(Sign::Pos, o("h")), Puncture::new(Sign::Pos, o("h"))]
}

/// A fixture in one of the three file formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Shipped {
    Catalog(Catalog),
    Building(Building),
    Asymptotics(Vec<Puncture>),
}

impl Shipped {
    pub fn to_json(&self) -> String {
        match self {
            Shipped::Catalog(c) => crate::io::catalog_to_json(c),
            Shipped::Building(b) => crate::io::building_to_json(b),
            Shipped::Asymptotics(a) => crate::io::asymptotics_to_json(a),
        }
    }

    pub fn parse(&self, text: &str) -> crate::Result<Shipped> {
        Ok(match self {
            Shipped::Catalog(_) => Shipped::Catalog(crate::io::parse_catalog(text)?),
            Shipped::Building(_) => Shipped::Building(crate::io::parse_building(text)?),
            Shipped::Asymptotics(_) => Shipped::Asymptotics(crate::io::parse_asymptotics(text)?),
        })
    }
}

/// Every JSON file under `fixtures/`, by file name.
pub fn shipped() -> Vec<(&'static str, Shipped)> {
    vec![
        ("demo_catalog.json", Shipped::Catalog(demo_catalog())),
        ("corpus_catalog.json", Shipped::Catalog(crate::corpus::corpus_catalog())),
        ("fig3.json", Shipped::Building(fig3())),
        ("fig4.json", Shipped::Building(fig4())),
        ("mutant_odd_breaking.json", Shipped::Building(mutant_odd_breaking())),
        ("mutant_double_breaking.json", Shipped::Building(mutant_double_breaking())),
        ("mutant_two_even.json", Shipped::Building(mutant_two_even())),
        ("trivial_cylinder.json", Shipped::Building(trivial_cylinder())),
        ("two_odd.json", Shipped::Asymptotics(two_odd_asymptotics())),
    ]
}
