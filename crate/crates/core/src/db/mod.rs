//! Curated store of homotopy groups and the named homomorphisms between them.
//!
//! Every group fixes its generators; all elements anywhere in the crate are
//! coordinate vectors relative to them. A lookup that misses returns `None`
//! and is never filled in with a guess.

mod parse;
mod space;
mod validate;

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fgab::{FgAbGroup, FgabError, Homomorphism, IntMatrix};

pub use space::{Field, HomKey, HomName, Loc, SpaceId};
pub use validate::{validate, Violation};

/// The database shipped with the crate.
pub const DEFAULT_DATABASE: &str = include_str!("../../data/default.ndb");

#[derive(Debug, Error)]
pub enum DbError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: group entry {loc}: {source}")]
    InvalidGroup {
        line: usize,
        loc: Loc,
        #[source]
        source: FgabError,
    },
    #[error("line {line}: duplicate entry {key}")]
    Duplicate { line: usize, key: String },
    #[error("database failed validation:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  - {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEntry {
    pub loc: Loc,
    pub group: FgAbGroup,
    /// Documentation only.
    pub generator_labels: Vec<String>,
    pub provenance: String,
}

/// A stored homomorphism. The matrix is kept as written (rows are target
/// coordinates) until validation has checked it against the groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomEntry {
    pub key: HomKey,
    pub rows: Vec<Vec<BigInt>>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    /// `im first = ker second`.
    Exact(HomKey, HomKey),
    Zero(HomKey),
    Surjective(HomKey),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Database {
    version: String,
    groups: Vec<GroupEntry>,
    homs: Vec<HomEntry>,
    assertions: Vec<Assertion>,
    group_index: HashMap<Loc, usize>,
    hom_index: HashMap<HomKey, usize>,
}

impl Database {
    /// Parses and validates; any violation rejects the whole file.
    pub fn load(path: impl AsRef<Path>) -> Result<Database, DbError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Database, DbError> {
        let db = Self::parse_unvalidated(text)?;
        let violations = validate(&db);
        if violations.is_empty() {
            Ok(db)
        } else {
            Err(DbError::Validation(violations))
        }
    }

    pub fn shipped() -> Database {
        Self::from_text(DEFAULT_DATABASE).expect("shipped database is valid")
    }

    /// Syntax and per-entry group invariants only; see [`validate`] for the rest.
    pub fn parse_unvalidated(text: &str) -> Result<Database, DbError> {
        parse::parse(text)
    }

    pub fn to_text(&self) -> String {
        parse::serialize(self)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn groups(&self) -> &[GroupEntry] {
        &self.groups
    }

    pub fn homs(&self) -> &[HomEntry] {
        &self.homs
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn group_entry(&self, loc: Loc) -> Option<&GroupEntry> {
        self.group_index.get(&loc).map(|&i| &self.groups[i])
    }

    pub fn get_group(&self, space: SpaceId, degree: u32) -> Option<&FgAbGroup> {
        self.group_entry(Loc::new(space, degree)).map(|e| &e.group)
    }

    pub fn hom_entry(&self, key: &HomKey) -> Option<&HomEntry> {
        self.hom_index.get(key).map(|&i| &self.homs[i])
    }

    /// The stored homomorphism, or `None` if it is absent or (in an
    /// unvalidated database) does not resolve to a well-defined map.
    pub fn get_hom(&self, name: HomName, source: Loc, target: Loc) -> Option<Homomorphism> {
        self.resolve(&HomKey::new(name, source, target)).ok()
    }

    pub(crate) fn resolve(&self, key: &HomKey) -> Result<Homomorphism, ResolveError> {
        let entry = self.hom_entry(key).ok_or(ResolveError::MissingHom)?;
        let source = self
            .get_group(key.source.space, key.source.degree)
            .ok_or(ResolveError::MissingGroup(key.source))?;
        let target = self
            .get_group(key.target.space, key.target.degree)
            .ok_or(ResolveError::MissingGroup(key.target))?;
        let cols = source.generator_count();
        let matrix = IntMatrix::from_rows(entry.rows.clone(), cols).ok_or(ResolveError::Shape {
            expected: (target.generator_count(), cols),
            got: (entry.rows.len(), entry.rows.first().map_or(cols, Vec::len)),
        })?;
        Homomorphism::new(source.clone(), target.clone(), matrix).map_err(ResolveError::Fgab)
    }

    /// Generator labels of the group at `loc`, if stored.
    pub fn labels(&self, loc: Loc) -> Option<&[String]> {
        self.group_entry(loc).map(|e| e.generator_labels.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ResolveError {
    MissingHom,
    MissingGroup(Loc),
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    Fgab(FgabError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_database_loads() {
        let db = Database::shipped();
        assert_eq!(db.version(), "v1");
        assert!(validate(&db).is_empty());
    }

    #[test]
    fn example_groups() {
        let db = Database::shipped();
        assert_eq!(
            db.get_group(SpaceId::Sphere(6), 11),
            Some(&FgAbGroup::integers())
        );
        assert_eq!(
            db.get_group(SpaceId::Sphere(5), 10),
            Some(&FgAbGroup::cyclic(2))
        );
        assert_eq!(
            db.get_group(SpaceId::Stiefel(Field::R, 6), 10),
            Some(&FgAbGroup::trivial())
        );
        assert_eq!(db.get_group(SpaceId::Sphere(6), 12), None);
        assert_eq!(db.get_group(SpaceId::Stiefel(Field::R, 6), 11), None);
    }

    #[test]
    fn example_homs() {
        let db = Database::shipped();
        let z = FgAbGroup::integers();
        let z2 = FgAbGroup::cyclic(2);
        let d = db
            .get_hom(HomName::BoundaryK, Loc::sphere(6, 11), Loc::sphere(5, 10))
            .unwrap();
        assert_eq!(
            d,
            Homomorphism::from_i64_rows(z.clone(), z2.clone(), &[&[1]]).unwrap()
        );
        assert!(d.is_surjective());
        let e = db
            .get_hom(HomName::SuspensionE, Loc::sphere(5, 10), Loc::sphere(6, 11))
            .unwrap();
        assert_eq!(e, Homomorphism::zero(z2, z.clone()));
        let a = db
            .get_hom(HomName::AntipodalA, Loc::sphere(6, 11), Loc::sphere(6, 11))
            .unwrap();
        assert_eq!(a, Homomorphism::identity(z));
        assert!(db
            .get_hom(HomName::SuspensionE, Loc::sphere(6, 11), Loc::sphere(7, 12))
            .is_none());
    }

    #[test]
    fn hopf_invariant_coordinatizes_generator() {
        // H(w) = 2, so ½H sends the generator to 1
        let db = Database::shipped();
        let h = db
            .get_hom(HomName::HopfH, Loc::sphere(6, 11), Loc::sphere(11, 11))
            .unwrap();
        let g = FgAbGroup::integers().generator(0);
        assert_eq!(h.eval(&g).unwrap().coords(), &[BigInt::from(2)]);
    }
}
