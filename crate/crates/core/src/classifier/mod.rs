//! Nielsen and minimum coincidence numbers for pairs of maps out of spheres.

pub(crate) mod projective;
mod spaceform;
mod sphere;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::db::{Database, Field, HomKey, Loc, ResolveError};
use crate::fgab::{FgAbGroup, FgabError, Homomorphism};

pub use projective::{classify_projective, table_conditions, ProjectiveClass, ROWS};
pub use spaceform::{classify_space_form, DomainCase, SpaceFormAnswer, SpaceFormQuery};
pub use sphere::{classify_sphere_target, AntipodalInput};

/// A cardinality that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }
}

impl From<u64> for Count {
    fn from(n: u64) -> Self {
        Count::Finite(n)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as a number, or the string `"inf"`.
impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n),
            Count::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Count::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Count::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!(
                "expected a count or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// Which branch of a classification produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// Row `1..=7` of the projective-space table.
    Row(u8),
    /// Sphere target, `f_1 ~ A∘f_2`.
    SphereAntipodal,
    /// Sphere target, `f_1 !~ A∘f_2`.
    SphereGeneric,
    /// Maps `S^1 -> S^1`.
    Circle,
    SpaceFormHomotopic,
    SpaceFormDistinct,
    /// Even-dimensional space form, maps not homotopic.
    SpaceFormForced,
    /// Even-dimensional space form, homotopic maps.
    SpaceFormOpen,
}

impl CaseId {
    pub fn as_str(self) -> String {
        match self {
            CaseId::Row(r) => r.to_string(),
            CaseId::SphereAntipodal => "sphere-antipodal".into(),
            CaseId::SphereGeneric => "sphere-generic".into(),
            CaseId::Circle => "circle".into(),
            CaseId::SpaceFormHomotopic => "spaceform-homotopic".into(),
            CaseId::SpaceFormDistinct => "spaceform-distinct".into(),
            CaseId::SpaceFormForced => "spaceform-forced".into(),
            CaseId::SpaceFormOpen => "spaceform-open".into(),
        }
    }

    pub fn parse(s: &str) -> Option<CaseId> {
        Some(match s {
            "sphere-antipodal" => CaseId::SphereAntipodal,
            "sphere-generic" => CaseId::SphereGeneric,
            "circle" => CaseId::Circle,
            "spaceform-homotopic" => CaseId::SpaceFormHomotopic,
            "spaceform-distinct" => CaseId::SpaceFormDistinct,
            "spaceform-forced" => CaseId::SpaceFormForced,
            "spaceform-open" => CaseId::SpaceFormOpen,
            other => match other.parse::<u8>() {
                Ok(r @ 1..=7) => CaseId::Row(r),
                _ => return None,
            },
        })
    }
}

/// Table rows serialize as their number, other cases as a string.
impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CaseId::Row(r) => s.serialize_u8(*r),
            other => s.serialize_str(&other.as_str()),
        }
    }
}

impl<'de> Deserialize<'de> for CaseId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::N(n) => n.to_string(),
            Raw::S(s) => s,
        };
        CaseId::parse(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown case id {text:?}")))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

/// Looseness information about the pair, where it can be decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub omega_sharp_zero: Option<bool>,
    pub loose: Option<bool>,
    pub loose_small: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceAnswer {
    pub case: CaseId,
    pub nielsen: u64,
    pub mcc: u64,
    /// `None` when the available data does not decide it.
    pub mc: Option<Count>,
    pub flags: Flags,
    /// `#π_0(E(f_1, f_2))`.
    pub reidemeister: Count,
    /// Residue components were supplied; they never change the numbers.
    pub residue_present: bool,
    pub notes: Vec<String>,
}

impl CoincidenceAnswer {
    pub fn triple(&self) -> (u64, u64, Option<Count>) {
        (self.nielsen, self.mcc, self.mc)
    }
}

/// A database entry a computation needed but could not find.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Missing {
    Group(Loc),
    Hom(HomKey),
}

impl fmt::Display for Missing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Missing::Group(loc) => write!(f, "group {loc}"),
            Missing::Hom(key) => write!(f, "homomorphism {key}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("insufficient data: the database has no entry for {0}")]
    InsufficientData(Missing),
    #[error("{0}")]
    Constraint(String),
    #[error("the two maps have different targets ({first} and {second})")]
    TargetMismatch { first: String, second: String },
    #[error("table conditions are inconsistent for this input: rows {fired:?} fired")]
    Inconsistent { fired: Vec<u8> },
    #[error("{what}: {source}")]
    Coordinates {
        what: String,
        #[source]
        source: FgabError,
    },
    #[error("database entry {key} is unusable: {detail}")]
    BadEntry { key: String, detail: String },
}

pub(crate) fn need_group(db: &Database, loc: Loc) -> Result<FgAbGroup, ClassifyError> {
    db.get_group(loc.space, loc.degree)
        .cloned()
        .ok_or(ClassifyError::InsufficientData(Missing::Group(loc)))
}

pub(crate) fn need_hom(db: &Database, key: HomKey) -> Result<Homomorphism, ClassifyError> {
    db.resolve(&key).map_err(|e| match e {
        ResolveError::MissingHom => ClassifyError::InsufficientData(Missing::Hom(key)),
        ResolveError::MissingGroup(loc) => ClassifyError::InsufficientData(Missing::Group(loc)),
        other => ClassifyError::BadEntry {
            key: key.to_string(),
            detail: format!("{other:?}"),
        },
    })
}

pub(crate) fn internal(e: FgabError) -> ClassifyError {
    ClassifyError::Coordinates {
        what: "internal arithmetic".into(),
        source: e,
    }
}

/// `N# = #{g | ω#(g∘f̃_1, f̃_2) ≠ 0}`: counts the deck transformations whose
/// lifted pair carries a nonvanishing invariant. `vanishing[g]` is true when
/// the invariant for `g` vanishes.
pub fn nielsen_via_liftings(vanishing: &[bool]) -> Result<u64, ClassifyError> {
    if vanishing.is_empty() {
        return Err(ClassifyError::Constraint(
            "the deck group has at least the identity".into(),
        ));
    }
    Ok(vanishing.iter().filter(|v| !**v).count() as u64)
}

/// `#π_0(E(f_1, f_2))` for maps `S^m -> KP(n')`, which is `#π_1(KP(n'))`.
pub fn reidemeister_count(field: Field, m: u32) -> Result<u64, ClassifyError> {
    if m < 2 {
        return Err(ClassifyError::Constraint(format!(
            "domain dimension m = {m} must be at least 2"
        )));
    }
    Ok(match field {
        Field::R => 2,
        Field::C | Field::H => 1,
    })
}

/// For a simply connected domain and a covering whose deck group acts
/// transitively, the path components correspond to deck transformations.
pub fn reidemeister_count_deck(deck_order: u64) -> Result<u64, ClassifyError> {
    if deck_order == 0 {
        return Err(ClassifyError::Constraint(
            "deck group order must be positive".into(),
        ));
    }
    Ok(deck_order)
}

pub(crate) fn element(
    group: &FgAbGroup,
    coords: &[BigInt],
    what: impl Into<String>,
) -> Result<crate::fgab::GroupElement, ClassifyError> {
    group
        .element(coords.to_vec())
        .map_err(|source| ClassifyError::Coordinates {
            what: what.into(),
            source,
        })
}
