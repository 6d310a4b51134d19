//! Generalized holomorphic buildings: components, punctures, breaking and
//! nodal pairs, the component graph and its topological invariants.
//!
//! Decorations (boundary identifications of glued circles) are not stored;
//! no invariant computed here depends on them. There is no level structure.

mod surgery;

pub use surgery::{augment, core, disjoint_union, glue_punctures, subbuilding, add_node, Site};

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::orbits::OrbitRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Puncture {
    pub sign: Sign,
    pub orbit: OrbitRef,
    pub constraint: f64,
    /// Winding of the controlling eigenfunction of this end.
    pub controlling_winding: Option<i64>,
}

impl Puncture {
    pub fn new(sign: Sign, orbit: OrbitRef) -> Self {
        Puncture { sign, orbit, constraint: 0.0, controlling_winding: None }
    }

    pub fn with_constraint(mut self, c: f64) -> Self {
        self.constraint = c;
        self
    }

    pub fn with_winding(mut self, w: i64) -> Self {
        self.controlling_winding = Some(w);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentKind {
    Nontrivial,
    /// A trivial curve (vanishing ω-energy) over covers of one simple orbit.
    Trivial(OrbitRef),
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: String,
    pub genus: u32,
    pub punctures: Vec<Puncture>,
    /// Relative first Chern number of the component, supplied by the user.
    pub rel_c1: i64,
    pub kind: ComponentKind,
    pub wind_pi: Option<u32>,
    /// Components with equal labels assert identical projections.
    pub image_class: Option<String>,
}

impl Component {
    pub fn nontrivial(id: impl Into<String>, genus: u32, rel_c1: i64, punctures: Vec<Puncture>) -> Self {
        Component {
            id: id.into(),
            genus,
            punctures,
            rel_c1,
            kind: ComponentKind::Nontrivial,
            wind_pi: None,
            image_class: None,
        }
    }

    /// The trivial cylinder over `orbit`, punctures ordered `[+, -]`.
    pub fn trivial_cylinder(id: impl Into<String>, orbit: OrbitRef) -> Self {
        Component {
            id: id.into(),
            genus: 0,
            punctures: vec![Puncture::new(Sign::Pos, orbit.clone()), Puncture::new(Sign::Neg, orbit.clone())],
            rel_c1: 0,
            kind: ComponentKind::Trivial(orbit),
            wind_pi: None,
            image_class: None,
        }
    }

    pub fn constant(id: impl Into<String>, genus: u32) -> Self {
        Component {
            id: id.into(),
            genus,
            punctures: Vec::new(),
            rel_c1: 0,
            kind: ComponentKind::Constant,
            wind_pi: None,
            image_class: None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, ComponentKind::Trivial(_))
    }

    pub fn is_trivial_cylinder(&self) -> bool {
        self.is_trivial() && self.genus == 0 && self.punctures.len() == 2
    }

    pub fn is_nontrivial(&self) -> bool {
        self.kind == ComponentKind::Nontrivial
    }
}

/// A puncture addressed by component id and position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PunctureId {
    pub component: String,
    pub index: usize,
}

impl PunctureId {
    pub fn new(component: impl Into<String>, index: usize) -> Self {
        PunctureId { component: component.into(), index }
    }
}

impl fmt::Display for PunctureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.index)
    }
}

/// A positive puncture glued to a negative puncture over the same orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BreakingPair {
    pub pos: PunctureId,
    pub neg: PunctureId,
}

/// Asymptotic constraints on external punctures.
pub type ConstraintSet = BTreeMap<PunctureId, f64>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Building {
    components: Vec<Component>,
    breaking_pairs: Vec<BreakingPair>,
    nodal_pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Breaking(usize),
    Nodal(usize),
}

impl Building {
    /// Validates the building invariants.
    pub fn new(
        components: Vec<Component>,
        breaking_pairs: Vec<BreakingPair>,
        nodal_pairs: Vec<(String, String)>,
    ) -> Result<Self> {
        let b = Building { components, breaking_pairs, nodal_pairs };
        b.validate()?;
        Ok(b)
    }

    pub fn empty() -> Self {
        Building::default()
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Building(m));
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if c.id.is_empty() {
                return bad("empty component id".into());
            }
            if !ids.insert(c.id.as_str()) {
                return bad(format!("duplicate component id {}", c.id));
            }
            for (i, p) in c.punctures.iter().enumerate() {
                if !(p.constraint.is_finite() && p.constraint >= 0.0) {
                    return bad(format!("{}:{i}: constraint must be nonnegative", c.id));
                }
                if p.orbit.k == 0 {
                    return bad(format!("{}:{i}: cover multiplicity must be positive", c.id));
                }
            }
            match &c.kind {
                ComponentKind::Constant if !c.punctures.is_empty() => {
                    return bad(format!("constant component {} has punctures", c.id));
                }
                ComponentKind::Trivial(o) => {
                    if c.rel_c1 != 0 {
                        return bad(format!("trivial component {} has rel_c1 {}", c.id, c.rel_c1));
                    }
                    if let Some(p) = c.punctures.iter().find(|p| p.orbit.simple != o.simple) {
                        return bad(format!(
                            "trivial component {} over {} has a puncture at {}",
                            c.id, o.simple, p.orbit
                        ));
                    }
                    let total = |s: Sign| -> u32 {
                        c.punctures.iter().filter(|p| p.sign == s).map(|p| p.orbit.k).sum()
                    };
                    if total(Sign::Pos) == 0 || total(Sign::Neg) == 0 {
                        return bad(format!(
                            "trivial component {} needs positive and negative punctures",
                            c.id
                        ));
                    }
                    if total(Sign::Pos) != total(Sign::Neg) {
                        return bad(format!(
                            "trivial component {}: covering multiplicities do not balance",
                            c.id
                        ));
                    }
                }
                _ => {}
            }
        }
        let mut used = BTreeSet::new();
        for pair in &self.breaking_pairs {
            let p = self.puncture(&pair.pos)?;
            let n = self.puncture(&pair.neg)?;
            if p.sign != Sign::Pos || n.sign != Sign::Neg {
                return bad(format!("breaking pair ({}, {}) has wrong signs", pair.pos, pair.neg));
            }
            if p.orbit != n.orbit {
                return bad(format!(
                    "breaking pair ({}, {}) joins {} to {}",
                    pair.pos, pair.neg, p.orbit, n.orbit
                ));
            }
            if p.constraint != 0.0 || n.constraint != 0.0 {
                return bad(format!(
                    "breaking pair ({}, {}) carries a nonzero constraint",
                    pair.pos, pair.neg
                ));
            }
            for z in [&pair.pos, &pair.neg] {
                if !used.insert(z.clone()) {
                    return bad(format!("puncture {z} is in two breaking pairs"));
                }
            }
        }
        for (a, b) in &self.nodal_pairs {
            for id in [a, b] {
                if !ids.contains(id.as_str()) {
                    return bad(format!("nodal pair references unknown component {id}"));
                }
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn breaking_pairs(&self) -> &[BreakingPair] {
        &self.breaking_pairs
    }

    pub fn nodal_pairs(&self) -> &[(String, String)] {
        &self.nodal_pairs
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn component(&self, id: &str) -> Result<&Component> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::Building(format!("unknown component {id}")))
    }

    pub fn puncture(&self, z: &PunctureId) -> Result<&Puncture> {
        self.component(&z.component)?
            .punctures
            .get(z.index)
            .ok_or_else(|| Error::Building(format!("unknown puncture {z}")))
    }

    /// The breaking pair containing `z`, if any.
    pub fn pair_of(&self, z: &PunctureId) -> Option<usize> {
        self.breaking_pairs.iter().position(|p| &p.pos == z || &p.neg == z)
    }

    pub fn is_external(&self, z: &PunctureId) -> bool {
        self.pair_of(z).is_none()
    }

    /// External punctures in component order.
    pub fn external_punctures(&self) -> Vec<PunctureId> {
        let glued: BTreeSet<&PunctureId> =
            self.breaking_pairs.iter().flat_map(|p| [&p.pos, &p.neg]).collect();
        self.components
            .iter()
            .flat_map(|c| (0..c.punctures.len()).map(move |i| PunctureId::new(c.id.clone(), i)))
            .filter(|z| !glued.contains(z))
            .collect()
    }

    /// The constraints stored on the external punctures.
    pub fn constraints(&self) -> ConstraintSet {
        self.external_punctures()
            .into_iter()
            .map(|z| {
                let c = self.puncture(&z).expect("external puncture exists").constraint;
                (z, c)
            })
            .collect()
    }

    /// The building with `c` written onto its external punctures.
    pub fn with_constraints(&self, c: &ConstraintSet) -> Result<Building> {
        let mut out = self.clone();
        for (z, &v) in c {
            self.puncture(z)?;
            if !self.is_external(z) {
                return Err(Error::Building(format!("constraint given for non-external puncture {z}")));
            }
            let k = self.component_index(&z.component).expect("checked external");
            out.components[k].punctures[z.index].constraint = v;
        }
        out.validate()?;
        Ok(out)
    }

    /// Number of nodal endpoints on a component (a self-node counts twice).
    pub fn node_endpoints(&self, id: &str) -> usize {
        self.nodal_pairs
            .iter()
            .map(|(a, b)| (a == id) as usize + (b == id) as usize)
            .sum()
    }

    /// Euler characteristic of the circle-compactified glued surface.
    pub fn euler_char(&self) -> i64 {
        self.components
            .iter()
            .map(|c| {
                2 - 2 * c.genus as i64 - (c.punctures.len() + self.node_endpoints(&c.id)) as i64
            })
            .sum()
    }

    /// Edges of the component graph as `(vertex, vertex, kind)`.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeKind)> {
        let index: HashMap<&str, usize> =
            self.components.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
        let mut out = Vec::new();
        for (i, p) in self.breaking_pairs.iter().enumerate() {
            out.push((index[p.pos.component.as_str()], index[p.neg.component.as_str()], EdgeKind::Breaking(i)));
        }
        for (i, (a, b)) in self.nodal_pairs.iter().enumerate() {
            out.push((index[a.as_str()], index[b.as_str()], EdgeKind::Nodal(i)));
        }
        out
    }

    /// Connected components of the graph (as sorted vertex lists), skipping
    /// the edge `without` if given.
    fn parts(&self, without: Option<EdgeKind>) -> Vec<Vec<usize>> {
        let n = self.components.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b, e) in self.edges() {
            if Some(e) != without {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut part = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        part.push(w);
                        queue.push_back(w);
                    }
                }
            }
            part.sort_unstable();
            out.push(part);
        }
        out
    }

    /// Vertex sets of the connected components of the graph.
    pub fn connected_parts(&self) -> Vec<Vec<usize>> {
        self.parts(None)
    }

    pub fn is_connected(&self) -> bool {
        self.parts(None).len() == 1
    }

    /// Genus of the glued compactified surface of a connected building.
    pub fn arithmetic_genus(&self) -> Result<i64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let twice = 2 - self.external_punctures().len() as i64 - self.euler_char();
        if twice % 2 != 0 {
            return Err(Error::Internal(format!("odd value {twice} for twice the arithmetic genus")));
        }
        Ok(twice / 2)
    }

    /// Whether deleting breaking pair `pair` splits off a piece made only of
    /// trivial cylinders.
    pub fn is_trivial_breaking(&self, pair: usize) -> Result<bool> {
        let p = self
            .breaking_pairs
            .get(pair)
            .ok_or_else(|| Error::Building(format!("unknown breaking pair {pair}")))?;
        let a = self.component_index(&p.pos.component).expect("validated");
        let b = self.component_index(&p.neg.component).expect("validated");
        let parts = self.parts(Some(EdgeKind::Breaking(pair)));
        let side = |v: usize| parts.iter().find(|s| s.contains(&v)).expect("vertex in a part");
        let (sa, sb) = (side(a), side(b));
        if sa == sb {
            return Ok(false);
        }
        let all_cyl = |s: &Vec<usize>| s.iter().all(|&v| self.components[v].is_trivial_cylinder());
        Ok(all_cyl(sa) || all_cyl(sb))
    }

    /// The building with breaking pairs sorted and nodal pairs normalized,
    /// for structural comparison.
    pub fn canonical(&self) -> Building {
        let mut b = self.clone();
        b.breaking_pairs.sort();
        for (x, y) in &mut b.nodal_pairs {
            if x > y {
                std::mem::swap(x, y);
            }
        }
        b.nodal_pairs.sort();
        b
    }

    /// Every constant component is stable: `2 - 2g - #node endpoints < 0`.
    pub fn check_stable(&self) -> Result<()> {
        for c in &self.components {
            if c.kind == ComponentKind::Constant {
                let chi = 2 - 2 * c.genus as i64 - self.node_endpoints(&c.id) as i64;
                if chi >= 0 {
                    return Err(Error::Building(format!(
                        "constant component {} is unstable (χ = {chi})",
                        c.id
                    )));
                }
            }
        }
        Ok(())
    }
}
