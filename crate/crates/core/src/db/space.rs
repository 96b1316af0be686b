use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Real, complex or quaternionic scalars.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    /// Real dimension `d`.
    pub fn dim(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn from_dim(d: u32) -> Option<Field> {
        match d {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            _ => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(Field::R),
            "C" => Ok(Field::C),
            "H" => Ok(Field::H),
            other => Err(format!(
                "unknown scalar field `{other}` (expected R, C or H)"
            )),
        }
    }
}

/// The spaces whose homotopy groups the database stores.
///
/// `Stiefel(K, n')` is the manifold of orthonormal 2-frames in `K^{n'+1}` and
/// `Projective(K, n')` the space of `K`-lines in `K^{n'+1}`; their real
/// dimensions are derived from `K` and `n'`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SpaceId {
    Sphere(u32),
    Stiefel(Field, u32),
    Projective(Field, u32),
}

impl SpaceId {
    /// Real dimension of the sphere or projective space; `None` for Stiefel
    /// manifolds, whose dimension is never needed here.
    pub fn real_dim(&self) -> Option<u32> {
        match *self {
            SpaceId::Sphere(n) => Some(n),
            SpaceId::Projective(k, n) => Some(k.dim() * n),
            SpaceId::Stiefel(..) => None,
        }
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceId::Sphere(n) => write!(f, "S({n})"),
            SpaceId::Stiefel(k, n) => write!(f, "V({k},{n})"),
            SpaceId::Projective(k, n) => write!(f, "P({k},{n})"),
        }
    }
}

impl FromStr for SpaceId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed space `{s}` (expected S(n), V(K,n') or P(K,n'))");
        let (kind, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let positive = |t: &str| -> Result<u32, String> {
            match t.trim().parse::<u32>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!(
                    "dimension `{t}` in `{s}` must be a positive integer"
                )),
            }
        };
        match kind {
            "S" => Ok(SpaceId::Sphere(positive(inner)?)),
            "V" | "P" => {
                let (k, n) = inner.split_once(',').ok_or_else(bad)?;
                let k: Field = k.trim().parse()?;
                let n = positive(n)?;
                Ok(if kind == "V" {
                    SpaceId::Stiefel(k, n)
                } else {
                    SpaceId::Projective(k, n)
                })
            }
            _ => Err(bad()),
        }
    }
}

/// `π_degree(space)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Loc {
    pub space: SpaceId,
    pub degree: u32,
}

impl Loc {
    pub fn new(space: SpaceId, degree: u32) -> Self {
        Loc { space, degree }
    }

    pub fn sphere(n: u32, degree: u32) -> Self {
        Loc::new(SpaceId::Sphere(n), degree)
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.space, self.degree)
    }
}

impl FromStr for Loc {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (space, m) = s
            .rsplit_once(',')
            .filter(|(sp, _)| sp.ends_with(')'))
            .ok_or_else(|| format!("malformed group reference `{s}` (expected e.g. S(6),11)"))?;
        let degree = m
            .parse::<u32>()
            .map_err(|_| format!("degree `{m}` in `{s}` is not a nonnegative integer"))?;
        Ok(Loc::new(space.parse()?, degree))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum HomName {
    SuspensionE,
    BoundaryK,
    ProjPK,
    HopfH,
    AntipodalA,
    FiberIncl,
    JStar,
}

impl HomName {
    pub const ALL: [HomName; 7] = [
        HomName::SuspensionE,
        HomName::BoundaryK,
        HomName::ProjPK,
        HomName::HopfH,
        HomName::AntipodalA,
        HomName::FiberIncl,
        HomName::JStar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HomName::SuspensionE => "suspension_E",
            HomName::BoundaryK => "boundary_K",
            HomName::ProjPK => "proj_pK",
            HomName::HopfH => "hopf_H",
            HomName::AntipodalA => "antipodal_A",
            HomName::FiberIncl => "fiber_incl",
            HomName::JStar => "j_star",
        }
    }
}

impl fmt::Display for HomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HomName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown homomorphism name `{s}`"))
    }
}

/// Unique key of a stored homomorphism; written `name[src->dst]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HomKey {
    pub name: HomName,
    pub source: Loc,
    pub target: Loc,
}

impl HomKey {
    pub fn new(name: HomName, source: Loc, target: Loc) -> Self {
        HomKey {
            name,
            source,
            target,
        }
    }
}

impl fmt::Display for HomKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}->{}]", self.name, self.source, self.target)
    }
}

impl FromStr for HomKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed homomorphism reference `{s}` (expected name[src->dst])");
        let (name, rest) = s.split_once('[').ok_or_else(bad)?;
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let (src, dst) = inner.split_once("->").ok_or_else(bad)?;
        Ok(HomKey::new(name.parse()?, src.parse()?, dst.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_syntax() {
        assert_eq!("S(6)".parse::<SpaceId>().unwrap(), SpaceId::Sphere(6));
        assert_eq!(
            "V(R,6)".parse::<SpaceId>().unwrap(),
            SpaceId::Stiefel(Field::R, 6)
        );
        assert_eq!(
            "P(H,2)".parse::<SpaceId>().unwrap(),
            SpaceId::Projective(Field::H, 2)
        );
        assert!("S(0)".parse::<SpaceId>().is_err());
        assert!("Q(3)".parse::<SpaceId>().is_err());
        assert!("V(X,2)".parse::<SpaceId>().is_err());
        assert_eq!(SpaceId::Projective(Field::C, 3).real_dim(), Some(6));
    }

    #[test]
    fn keys_round_trip() {
        let k: HomKey = "boundary_K[S(6),11->S(5),10]".parse().unwrap();
        assert_eq!(k.name, HomName::BoundaryK);
        assert_eq!(k.source, Loc::sphere(6, 11));
        assert_eq!(k.target, Loc::sphere(5, 10));
        assert_eq!(k.to_string().parse::<HomKey>().unwrap(), k);
        let k: HomKey = "fiber_incl[S(5),10->V(R,6),10]".parse().unwrap();
        assert_eq!(k.target.space, SpaceId::Stiefel(Field::R, 6));
        assert!("boundary_K[S(6),11]".parse::<HomKey>().is_err());
        assert!("bogus[S(6),11->S(5),10]".parse::<HomKey>().is_err());
    }
}
