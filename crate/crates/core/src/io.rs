//! JSON file formats for catalogs, buildings and asymptotics.
//!
//! Every file carries `"format": 1`. Schema errors cite the JSON path of the
//! offending value. Emission goes through `serde_json::Value`, whose maps are
//! sorted, so output is byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::buildings::{BreakingPair, Building, Component, ComponentKind, Puncture, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::orbits::{Catalog, OrbitModel, OrbitRef, SimpleOrbit};
use crate::spectral::{FlowLoop, SpectralEntry, SpectralTable, Sym2, DEFAULT_GRID};

pub const FORMAT: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    format: u32,
    orbits: Vec<OrbitRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitRecord {
    id: String,
    period: f64,
    model: ModelRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hyperbolic: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ModelRecord {
    Flow {
        samples: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<usize>,
    },
    Table {
        covers: BTreeMap<String, Vec<(f64, i64, u32)>>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildingFile {
    format: u32,
    components: Vec<ComponentRecord>,
    #[serde(default)]
    breaking_pairs: Vec<PairRecord>,
    #[serde(default)]
    nodal_pairs: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentRecord {
    id: String,
    genus: u32,
    rel_c1: i64,
    kind: KindRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wind_pi: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    image_class: Option<String>,
    #[serde(default)]
    punctures: Vec<PunctureRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindRecord {
    Nontrivial,
    Constant,
    Trivial(OrbitRecordRef),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitRecordRef {
    simple: String,
    k: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
enum SignRecord {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PunctureRecord {
    sign: SignRecord,
    orbit: OrbitRecordRef,
    #[serde(default)]
    constraint: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    controlling_winding: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRecord {
    pos: EndRecord,
    neg: EndRecord,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndRecord {
    component: String,
    puncture: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AsymptoticsFile {
    format: u32,
    punctures: Vec<PunctureRecord>,
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })
}

fn check_format(format: u32) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Schema { path: "format".into(), message: format!("unsupported format {format}, expected {FORMAT}") });
    }
    Ok(())
}

fn emit<T: Serialize>(record: &T) -> String {
    let value = serde_json::to_value(record).expect("records serialize");
    to_stable_string(&value)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_stable_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Table windows are the largest stored `|λ|`.
fn table_from_rows(id: &str, k: u32, rows: &[(f64, i64, u32)]) -> Result<SpectralTable> {
    let window = rows.iter().map(|r| r.0.abs()).fold(0.0, f64::max);
    if rows.is_empty() || window.is_nan() || window <= 0.0 {
        return Err(Error::Catalog(format!("orbit {id}^{k}: table needs a nonzero eigenvalue")));
    }
    let entries = rows
        .iter()
        .map(|&(eigenvalue, winding, multiplicity)| SpectralEntry { eigenvalue, winding, multiplicity })
        .collect();
    SpectralTable::new(entries, window, 0).map_err(|e| Error::Catalog(format!("orbit {id}^{k}: {e}")))
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let file: CatalogFile = parse(text)?;
    check_format(file.format)?;
    let mut orbits = Vec::with_capacity(file.orbits.len());
    for (i, o) in file.orbits.into_iter().enumerate() {
        let model = match o.model {
            ModelRecord::Flow { samples, grid } => {
                let samples = samples.iter().map(|s| Sym2::new(s[0], s[1], s[2])).collect();
                let lp = FlowLoop::new(samples, o.period)
                    .map_err(|e| Error::Catalog(format!("orbit {}: {e}", o.id)))?;
                OrbitModel::Flow { lp, grid: grid.unwrap_or(DEFAULT_GRID) }
            }
            ModelRecord::Table { covers } => {
                let mut tables = BTreeMap::new();
                for (key, rows) in covers {
                    let k: u32 = key.parse().map_err(|_| Error::Schema {
                        path: format!("orbits[{i}].model.covers.{key}"),
                        message: "cover keys must be positive integers".into(),
                    })?;
                    tables.insert(k, table_from_rows(&o.id, k, &rows)?);
                }
                OrbitModel::Table(tables)
            }
        };
        orbits.push(SimpleOrbit { id: o.id, period: o.period, model, hyperbolic: o.hyperbolic });
    }
    Catalog::new(orbits)
}

pub fn catalog_to_json(cat: &Catalog) -> String {
    let orbits = cat
        .orbits()
        .map(|o| OrbitRecord {
            id: o.id.clone(),
            period: o.period,
            model: match &o.model {
                OrbitModel::Flow { lp, grid } => ModelRecord::Flow {
                    samples: lp.samples().iter().map(|s| [s.s11, s.s12, s.s22]).collect(),
                    grid: Some(*grid),
                },
                OrbitModel::Table(tables) => ModelRecord::Table {
                    covers: tables
                        .iter()
                        .map(|(&k, t)| {
                            (k.to_string(), t.entries().iter().map(|e| (e.eigenvalue, e.winding, e.multiplicity)).collect())
                        })
                        .collect(),
                },
            },
            hyperbolic: o.hyperbolic,
        })
        .collect();
    emit(&CatalogFile { format: FORMAT, orbits })
}

fn puncture_from(r: PunctureRecord) -> Puncture {
    Puncture {
        sign: match r.sign {
            SignRecord::Pos => Sign::Pos,
            SignRecord::Neg => Sign::Neg,
        },
        orbit: OrbitRef::new(r.orbit.simple, r.orbit.k),
        constraint: r.constraint,
        controlling_winding: r.controlling_winding,
    }
}

fn puncture_record(p: &Puncture) -> PunctureRecord {
    PunctureRecord {
        sign: match p.sign {
            Sign::Pos => SignRecord::Pos,
            Sign::Neg => SignRecord::Neg,
        },
        orbit: OrbitRecordRef { simple: p.orbit.simple.clone(), k: p.orbit.k },
        constraint: p.constraint,
        controlling_winding: p.controlling_winding,
    }
}

pub fn parse_building(text: &str) -> Result<Building> {
    let file: BuildingFile = parse(text)?;
    check_format(file.format)?;
    let components = file
        .components
        .into_iter()
        .map(|c| Component {
            id: c.id,
            genus: c.genus,
            punctures: c.punctures.into_iter().map(puncture_from).collect(),
            rel_c1: c.rel_c1,
            kind: match c.kind {
                KindRecord::Nontrivial => ComponentKind::Nontrivial,
                KindRecord::Constant => ComponentKind::Constant,
                KindRecord::Trivial(o) => ComponentKind::Trivial(OrbitRef::new(o.simple, o.k)),
            },
            wind_pi: c.wind_pi,
            image_class: c.image_class,
        })
        .collect();
    let pairs = file
        .breaking_pairs
        .into_iter()
        .map(|p| BreakingPair {
            pos: PunctureId::new(p.pos.component, p.pos.puncture),
            neg: PunctureId::new(p.neg.component, p.neg.puncture),
        })
        .collect();
    Building::new(components, pairs, file.nodal_pairs)
}

fn building_record(b: &Building) -> BuildingFile {
    BuildingFile {
        format: FORMAT,
        components: b
            .components()
            .iter()
            .map(|c| ComponentRecord {
                id: c.id.clone(),
                genus: c.genus,
                rel_c1: c.rel_c1,
                kind: match &c.kind {
                    ComponentKind::Nontrivial => KindRecord::Nontrivial,
                    ComponentKind::Constant => KindRecord::Constant,
                    ComponentKind::Trivial(o) => KindRecord::Trivial(OrbitRecordRef { simple: o.simple.clone(), k: o.k }),
                },
                wind_pi: c.wind_pi,
                image_class: c.image_class.clone(),
                punctures: c.punctures.iter().map(puncture_record).collect(),
            })
            .collect(),
        breaking_pairs: b
            .breaking_pairs()
            .iter()
            .map(|p| PairRecord {
                pos: EndRecord { component: p.pos.component.clone(), puncture: p.pos.index },
                neg: EndRecord { component: p.neg.component.clone(), puncture: p.neg.index },
            })
            .collect(),
        nodal_pairs: b.nodal_pairs().to_vec(),
    }
}

pub fn building_value(b: &Building) -> Value {
    serde_json::to_value(building_record(b)).expect("records serialize")
}

pub fn building_to_json(b: &Building) -> String {
    emit(&building_record(b))
}

pub fn parse_asymptotics(text: &str) -> Result<Vec<Puncture>> {
    let file: AsymptoticsFile = parse(text)?;
    check_format(file.format)?;
    let ps: Vec<Puncture> = file.punctures.into_iter().map(puncture_from).collect();
    for (i, p) in ps.iter().enumerate() {
        if p.orbit.k == 0 || !(p.constraint.is_finite() && p.constraint >= 0.0) {
            return Err(Error::Schema {
                path: format!("punctures[{i}]"),
                message: "cover multiplicity must be positive and constraint nonnegative".into(),
            });
        }
    }
    Ok(ps)
}

pub fn asymptotics_to_json(ps: &[Puncture]) -> String {
    emit(&AsymptoticsFile { format: FORMAT, punctures: ps.iter().map(puncture_record).collect() })
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    parse_catalog(&read_file(path)?)
}

pub fn load_building(path: &Path) -> Result<Building> {
    parse_building(&read_file(path)?)
}

pub fn load_asymptotics(path: &Path) -> Result<Vec<Puncture>> {
    parse_asymptotics(&read_file(path)?)
}
