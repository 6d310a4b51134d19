//! Checks of the degeneration taxonomy: nicely embedded buildings, trivial
//! and constant subbuildings, limits of stable index 1 and 2 curves.
//!
//! Intersection-theoretic facts that cannot be decided from combinatorics
//! are enforced as necessary conditions only, and projection claims are
//! taken from `image_class` labels.

mod enumerate;
mod nice;
mod stable;
mod subbuildings;

pub use enumerate::{breaking_candidates, enumerate_limits, LimitType};
pub use nice::{validate_nice, NiceVerdict};
pub use stable::{classify_stable_limit, StableVerdict, Taxonomy};
pub use subbuildings::{
    constant_subbuilding_bound, maximal_trivial_subbuildings, trivial_subbuilding_check,
    ConstantVerdict, TrivialBoundaryData, TrivialBranch, TrivialVerdict,
};

use std::fmt;

/// Violation codes; their spelling is part of the output contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    HasNode,
    BadComponentKind,
    ImageClash,
    BreakingOrbitOdd,
    BreakingOrbitMultiplicity,
    NotBadDouble,
    DefectPositive,
    NonSimpleExtremal,
    MixedMultiplicity,
    IndexOutOfRange,
    CnNonzero,
    NonGeneric,
    TooManyComponents,
    SideIndex,
    EvenPuncture,
    BreakingPairCount,
    SameImageClass,
    InvalidData,
    HomologyMultiplicity,
    HomologyWinding,
    ExtremalWinding,
    OppositeSigns,
    Determinant,
    NonSimpleWinding,
    CnIdentity,
    Unstable,
    ConstantBound,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::HasNode => "HAS_NODE",
            Code::BadComponentKind => "BAD_COMPONENT_KIND",
            Code::ImageClash => "IMAGE_CLASH",
            Code::BreakingOrbitOdd => "BREAKING_ORBIT_ODD",
            Code::BreakingOrbitMultiplicity => "BREAKING_ORBIT_MULTIPLICITY",
            Code::NotBadDouble => "NOT_BAD_DOUBLE",
            Code::DefectPositive => "DEFECT_POSITIVE",
            Code::NonSimpleExtremal => "NON_SIMPLE_EXTREMAL",
            Code::MixedMultiplicity => "MIXED_MULTIPLICITY",
            Code::IndexOutOfRange => "INDEX_OUT_OF_RANGE",
            Code::CnNonzero => "CN_NONZERO",
            Code::NonGeneric => "NON_GENERIC",
            Code::TooManyComponents => "TOO_MANY_COMPONENTS",
            Code::SideIndex => "SIDE_INDEX",
            Code::EvenPuncture => "EVEN_PUNCTURE",
            Code::BreakingPairCount => "BREAKING_PAIR_COUNT",
            Code::SameImageClass => "SAME_IMAGE_CLASS",
            Code::InvalidData => "INVALID_DATA",
            Code::HomologyMultiplicity => "HOMOLOGY_MULTIPLICITY",
            Code::HomologyWinding => "HOMOLOGY_WINDING",
            Code::ExtremalWinding => "EXTREMAL_WINDING",
            Code::OppositeSigns => "OPPOSITE_SIGNS",
            Code::Determinant => "DETERMINANT",
            Code::NonSimpleWinding => "NON_SIMPLE_WINDING",
            Code::CnIdentity => "CN_IDENTITY",
            Code::Unstable => "UNSTABLE",
            Code::ConstantBound => "CONSTANT_BOUND",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub code: Code,
    pub location: String,
    pub message: String,
}

impl Violation {
    pub fn new(code: Code, location: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { code, location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buildings::{Puncture, Sign};
    use crate::fixtures;
    use crate::orbits::OrbitRef;
    use crate::par::Execution;

    fn codes(v: &[Violation]) -> Vec<Code> {
        v.iter().map(|x| x.code).collect()
    }

    #[test]
    fn fig3_is_a_broken_pair() {
        let cat = fixtures::demo_catalog();
        let b = fixtures::fig3();
        let nice = validate_nice(&cat, &b).unwrap();
        assert!(nice.ok, "{:?}", nice.violations);
        let v = classify_stable_limit(&cat, &b, &b.constraints()).unwrap();
        assert!(v.ok, "{:?}", v.violations);
        assert_eq!((v.index, v.c_n, v.genus), (Some(2), Some(0), Some(0)));
        assert_eq!(
            v.taxonomy,
            Some(Taxonomy::BrokenPair { top: "v1".into(), bottom: "v2".into(), breaking_orbit: OrbitRef::new("d", 1) })
        );
    }

    #[test]
    fn mutants_fail_with_one_code() {
        let cat = fixtures::demo_catalog();
        let cases = [
            (fixtures::mutant_odd_breaking(), Code::BreakingOrbitOdd),
            (fixtures::mutant_double_breaking(), Code::NotBadDouble),
            (fixtures::mutant_two_even(), Code::BadComponentKind),
            (fixtures::fig4(), Code::NonGeneric),
        ];
        for (b, code) in cases {
            let v = classify_stable_limit(&cat, &b, &b.constraints()).unwrap();
            assert!(!v.ok);
            assert_eq!(codes(&v.violations), vec![code]);
        }
    }

    /// `h` and an even table orbit `f` with `μ = 2`.
    fn plane_catalog() -> crate::orbits::Catalog {
        use crate::fixtures::{flow_orbit, rotation, table, table_orbit, FIXTURE_GRID};
        crate::orbits::Catalog::new(vec![
            flow_orbit("h", rotation(std::f64::consts::FRAC_PI_2), FIXTURE_GRID),
            table_orbit("f", vec![(1, table(&[(-7.0, 0, 2), (-1.0, 1, 1), (1.0, 1, 1), (7.0, 2, 2)]))], Some(true)),
        ])
        .unwrap()
    }

    #[test]
    fn smooth_plane() {
        let cat = plane_catalog();
        let mut u = crate::buildings::Component::nontrivial(
            "u",
            0,
            0,
            vec![Puncture::new(Sign::Pos, OrbitRef::new("f", 1)).with_winding(1)],
        );
        u.image_class = Some("A".into());
        let b = crate::buildings::Building::new(vec![u], vec![], vec![]).unwrap();
        let v = classify_stable_limit(&cat, &b, &b.constraints()).unwrap();
        assert_eq!(v.taxonomy, Some(Taxonomy::Smooth { component: "u".into() }));
        assert_eq!(v.index, Some(1));
    }

    #[test]
    fn missing_windings_are_reported() {
        let cat = fixtures::demo_catalog();
        let u = crate::buildings::Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, OrbitRef::new("h", 1))]);
        let b = crate::buildings::Building::new(vec![u], vec![], vec![]).unwrap();
        match validate_nice(&cat, &b) {
            Err(crate::Error::IncompleteInput(f)) => assert_eq!(f, vec!["u:0.controlling_winding".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nodes_and_constants_are_not_nice() {
        let cat = fixtures::demo_catalog();
        let b = fixtures::fig3();
        let b = crate::buildings::disjoint_union(
            &b,
            &crate::buildings::Building::new(vec![crate::buildings::Component::constant("k", 0)], vec![], vec![]).unwrap(),
        );
        let b = crate::buildings::add_node(&b, "k", "v1").unwrap();
        let v = validate_nice(&cat, &b).unwrap();
        assert_eq!(codes(&v.violations), vec![Code::HasNode, Code::BadComponentKind]);
    }

    #[test]
    fn two_odd_punctures_have_two_limits() {
        let cat = fixtures::demo_catalog();
        let asym = fixtures::two_odd_asymptotics();
        let seq = enumerate_limits(&cat, &asym, Execution::Sequential).unwrap();
        let par = enumerate_limits(&cat, &asym, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.len(), 2);
        assert_eq!((seq[0].top.clone(), seq[0].bottom.clone()), (vec![0], vec![1]));
        assert_eq!((seq[1].top.clone(), seq[1].bottom.clone()), (vec![1], vec![0]));
        for l in &seq {
            assert_eq!(l.breaking_orbit, OrbitRef::new("d", 1));
            let b = l.materialize(&cat, &asym).unwrap();
            assert!(validate_nice(&cat, &b).unwrap().ok);
            let v = classify_stable_limit(&cat, &b, &b.constraints()).unwrap();
            assert_eq!(v.taxonomy.unwrap().as_str(), "BROKEN_PAIR");
        }
    }

    #[test]
    fn plane_bubbling_at_an_index_two_orbit() {
        use crate::fixtures::{flow_orbit, rotation, FIXTURE_GRID};
        let cat = plane_catalog();
        let asym = fixtures::two_odd_asymptotics();
        let out = enumerate_limits(&cat, &asym, Execution::Sequential).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!((out[0].top.clone(), out[0].bottom.clone()), (vec![0, 1], vec![]));
        let only_h = crate::orbits::Catalog::new(vec![flow_orbit("h", rotation(1.0), FIXTURE_GRID)]).unwrap();
        assert!(enumerate_limits(&only_h, &asym, Execution::Sequential).unwrap().is_empty());
    }

    #[test]
    fn enumeration_precheck_rejects_even_punctures() {
        let cat = fixtures::demo_catalog();
        let asym = vec![Puncture::new(Sign::Pos, OrbitRef::new("d", 1))];
        assert!(matches!(enumerate_limits(&cat, &asym, Execution::Sequential), Err(crate::Error::Inconsistent(_))));
    }

    #[test]
    fn fig3_trivial_subbuildings_are_cylindrical() {
        let cat = fixtures::demo_catalog();
        let subs = maximal_trivial_subbuildings(&cat, &fixtures::fig3()).unwrap();
        assert_eq!(subs.len(), 2);
        for (_, d) in subs {
            let v = trivial_subbuilding_check(&d);
            assert!(v.ok, "{:?} {:?}", d, v.violations);
            assert_eq!(v.cylindrical, Some(true));
        }
    }
}
