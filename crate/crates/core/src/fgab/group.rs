use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::FgabError;

#[derive(Debug, PartialEq, Eq, Hash)]
struct GroupData {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

/// A finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k` in
/// invariant-factor form: every `d_i >= 2` and `d_i | d_{i+1}`.
///
/// Generators are ordered free part first, then torsion. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FgAbGroup(Arc<GroupData>);

impl FgAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, FgabError> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(FgabError::InvalidInvariantFactor(d.clone()));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(FgabError::BrokenDivisibility {
                    lower: w[0].clone(),
                    upper: w[1].clone(),
                });
            }
        }
        Ok(FgAbGroup(Arc::new(GroupData { free_rank, torsion })))
    }

    pub fn from_u64(free_rank: usize, torsion: &[u64]) -> Result<Self, FgabError> {
        Self::new(
            free_rank,
            torsion.iter().map(|&d| BigInt::from(d)).collect(),
        )
    }

    pub fn trivial() -> Self {
        FgAbGroup(Arc::new(GroupData {
            free_rank: 0,
            torsion: Vec::new(),
        }))
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup(Arc::new(GroupData {
            free_rank: rank,
            torsion: Vec::new(),
        }))
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_presentation(1, &IntMatrix::from_i64_rows(&[&[n as i64]], 1).unwrap())
    }

    /// Normalizes the presentation with `generators` generators and the given
    /// relation columns (a `generators x k` matrix) into invariant-factor form.
    pub fn from_presentation(generators: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix row count");
        let snf = smith_normal_form(relations);
        let inv = snf.invariants();
        let mut free_rank = generators - inv.len();
        let mut torsion = Vec::new();
        for d in inv {
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.push(d);
            }
        }
        FgAbGroup(Arc::new(GroupData { free_rank, torsion }))
    }

    /// Like [`from_presentation`](Self::from_presentation), but also keeps the
    /// change of coordinates so elements written in the original generators
    /// can be converted.
    pub fn normalize(generators: usize, relations: &IntMatrix) -> Normalized {
        assert_eq!(relations.rows(), generators, "relation matrix row count");
        let snf = smith_normal_form(relations);
        let inv = snf.invariants();
        let mut free_rows = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..generators {
            match inv.get(i) {
                Some(d) if d.is_one() => {}
                Some(d) if !d.is_zero() => {
                    torsion_rows.push(i);
                    torsion.push(d.clone());
                }
                _ => free_rows.push(i),
            }
        }
        let group = FgAbGroup(Arc::new(GroupData {
            free_rank: free_rows.len(),
            torsion,
        }));
        let picked: Vec<Vec<BigInt>> = free_rows
            .iter()
            .chain(&torsion_rows)
            .map(|&i| snf.left.row(i).to_vec())
            .collect();
        let to_canonical =
            IntMatrix::from_rows(picked, generators).expect("rows have equal length");
        Normalized {
            group,
            to_canonical,
        }
    }

    /// Direct sum of cyclic groups of the given orders (0 meaning `Z`).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut rel = IntMatrix::zeros(orders.len(), orders.len());
        for (i, &d) in orders.iter().enumerate() {
            rel.set(i, i, BigInt::from(d));
        }
        Self::from_presentation(orders.len(), &rel)
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.0.torsion
    }

    /// Number of canonical generators.
    pub fn generator_count(&self) -> usize {
        self.0.free_rank + self.0.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.0.free_rank == 0
    }

    /// Order, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.0.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Order of generator `i` (`None` for a free generator).
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(self.0.free_rank).map(|t| &self.0.torsion[t])
    }

    /// Relation matrix of the canonical presentation: one column `d_j e_j`
    /// per torsion generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut m = IntMatrix::zeros(n, self.0.torsion.len());
        for (j, d) in self.0.torsion.iter().enumerate() {
            m.set(self.0.free_rank + j, j, d.clone());
        }
        m
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (x, d) in coords[self.0.free_rank..].iter_mut().zip(&self.0.torsion) {
            *x = x.mod_floor(d);
        }
    }

    pub fn element(&self, mut coords: Vec<BigInt>) -> Result<GroupElement, FgabError> {
        if coords.len() != self.generator_count() {
            return Err(FgabError::CoordinateLength {
                expected: self.generator_count(),
                got: coords.len(),
            });
        }
        self.reduce(&mut coords);
        Ok(GroupElement {
            parent: self.clone(),
            coords,
        })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, FgabError> {
        self.element(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            parent: self.clone(),
            coords: vec![BigInt::zero(); self.generator_count()],
        }
    }

    /// The `i`-th canonical generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.generator_count()];
        coords[i] = BigInt::one();
        self.element(coords).expect("generator index in range")
    }

    /// All elements of a finite group, in mixed-radix order.
    pub fn elements(&self) -> Result<Elements, FgabError> {
        if !self.is_finite() {
            return Err(FgabError::InfiniteGroup(self.clone()));
        }
        Ok(Elements {
            group: self.clone(),
            next: Some(vec![BigInt::zero(); self.generator_count()]),
        })
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.0.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.0.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// A normalized presentation together with its coordinate change.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub group: FgAbGroup,
    to_canonical: IntMatrix,
}

impl Normalized {
    /// Converts coordinates in the original generators to a canonical element.
    pub fn element(&self, coords: &[BigInt]) -> Result<GroupElement, FgabError> {
        if coords.len() != self.to_canonical.cols() {
            return Err(FgabError::CoordinateLength {
                expected: self.to_canonical.cols(),
                got: coords.len(),
            });
        }
        self.group.element(self.to_canonical.mul_vec(coords))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, FgabError> {
        let v: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&v)
    }
}

pub struct Elements {
    group: FgAbGroup,
    next: Option<Vec<BigInt>>,
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (x, d) in succ.iter_mut().zip(self.group.torsion()) {
            *x += 1;
            if *x < *d {
                carried = false;
                break;
            }
            *x = BigInt::zero();
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(GroupElement {
            parent: self.group.clone(),
            coords: current,
        })
    }
}

/// An element in canonical coordinates relative to its parent's generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    parent: FgAbGroup,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn parent(&self) -> &FgAbGroup {
        &self.parent
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_parent(&self, other: &GroupElement) -> Result<(), FgabError> {
        if self.parent != other.parent {
            return Err(FgabError::ParentMismatch {
                expected: self.parent.clone(),
                got: other.parent.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GroupElement) -> Result<GroupElement, FgabError> {
        self.same_parent(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.parent.element(coords)
    }

    pub fn try_sub(&self, other: &GroupElement) -> Result<GroupElement, FgabError> {
        self.same_parent(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        self.parent.element(coords)
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let coords = self.coords.iter().map(|a| a * k).collect();
        self.parent.element(coords).expect("same length")
    }

    /// Additive order; `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let free = self.parent.free_rank();
        if self.coords[..free].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(self.coords[free..].iter().zip(self.parent.torsion()).fold(
            BigInt::one(),
            |acc, (x, d)| {
                let o = d / x.gcd(d);
                acc.lcm(&o)
            },
        ))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
