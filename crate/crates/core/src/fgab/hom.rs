use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::group::{FgAbGroup, GroupElement};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::FgabError;

/// A homomorphism between canonical presentations. Column `j` of the matrix
/// holds the target coordinates of the image of source generator `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Homomorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    /// Checks shape and well-definedness, then reduces torsion rows into
    /// canonical range.
    pub fn new(
        source: FgAbGroup,
        target: FgAbGroup,
        mut matrix: IntMatrix,
    ) -> Result<Self, FgabError> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(FgabError::ShapeMismatch {
                expected: (target.generator_count(), source.generator_count()),
                got: (matrix.rows(), matrix.cols()),
            });
        }
        for j in 0..matrix.cols() {
            let Some(order) = source.generator_order(j) else {
                continue;
            };
            let column: Vec<BigInt> = matrix.column(j).iter().map(|x| x * order).collect();
            if !target.element(column)?.is_zero() {
                return Err(FgabError::IllDefined { generator: j });
            }
        }
        for j in 0..matrix.cols() {
            let mut col = matrix.column(j);
            target.reduce(&mut col);
            for (i, x) in col.into_iter().enumerate() {
                matrix.set(i, j, x);
            }
        }
        Ok(Homomorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn from_i64_rows(
        source: FgAbGroup,
        target: FgAbGroup,
        rows: &[&[i64]],
    ) -> Result<Self, FgabError> {
        let cols = source.generator_count();
        let matrix = IntMatrix::from_i64_rows(rows, cols).ok_or(FgabError::ShapeMismatch {
            expected: (target.generator_count(), cols),
            got: (rows.len(), rows.first().map_or(0, |r| r.len())),
        })?;
        Self::new(source, target, matrix)
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.generator_count(), source.generator_count());
        Homomorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(group: FgAbGroup) -> Self {
        let matrix = IntMatrix::identity(group.generator_count());
        Homomorphism {
            source: group.clone(),
            target: group,
            matrix,
        }
    }

    /// The map `Z^k -> ambient` sending the `i`-th basis vector to `elements[i]`.
    pub fn assembly(ambient: &FgAbGroup, elements: &[GroupElement]) -> Result<Self, FgabError> {
        for e in elements {
            if e.parent() != ambient {
                return Err(FgabError::ParentMismatch {
                    expected: ambient.clone(),
                    got: e.parent().clone(),
                });
            }
        }
        let cols: Vec<Vec<BigInt>> = elements.iter().map(|e| e.coords().to_vec()).collect();
        Ok(Homomorphism {
            source: FgAbGroup::free(elements.len()),
            target: ambient.clone(),
            matrix: IntMatrix::from_columns(&cols, ambient.generator_count()),
        })
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn eval(&self, x: &GroupElement) -> Result<GroupElement, FgabError> {
        if x.parent() != &self.source {
            return Err(FgabError::ParentMismatch {
                expected: self.source.clone(),
                got: x.parent().clone(),
            });
        }
        self.target.element(self.matrix.mul_vec(x.coords()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism, FgabError> {
        if inner.target != self.source {
            return Err(FgabError::ParentMismatch {
                expected: self.source.clone(),
                got: inner.target.clone(),
            });
        }
        Homomorphism::new(
            inner.source.clone(),
            self.target.clone(),
            self.matrix.mul(&inner.matrix),
        )
    }

    /// Pointwise difference `self - other`.
    pub fn try_sub(&self, other: &Homomorphism) -> Result<Homomorphism, FgabError> {
        if self.source != other.source || self.target != other.target {
            return Err(FgabError::ShapeMismatch {
                expected: (self.matrix.rows(), self.matrix.cols()),
                got: (other.matrix.rows(), other.matrix.cols()),
            });
        }
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                *m.get_mut(i, j) -= other.matrix.get(i, j);
            }
        }
        Homomorphism::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn kernel(&self) -> Subgroup {
        joint_kernel(&self.source, &[self])
    }

    pub fn image(&self) -> Subgroup {
        let generators = (0..self.source.generator_count())
            .map(|j| {
                self.target
                    .element(self.matrix.column(j))
                    .expect("column length")
            })
            .collect();
        Subgroup::new(self.target.clone(), generators).expect("parents agree")
    }

    /// `Some(x)` with `eval(x) == y` if `y` is in the image.
    pub fn in_image(&self, y: &GroupElement) -> Result<Option<GroupElement>, FgabError> {
        if y.parent() != &self.target {
            return Err(FgabError::ParentMismatch {
                expected: self.target.clone(),
                got: y.parent().clone(),
            });
        }
        let system = self.matrix.hconcat(&self.target.relation_matrix());
        Ok(solve(&system, y.coords()).map(|z| {
            self.source
                .element(z[..self.source.generator_count()].to_vec())
                .expect("solution length")
        }))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `target / image`.
    pub fn cokernel(&self) -> FgAbGroup {
        let rel = self.matrix.hconcat(&self.target.relation_matrix());
        FgAbGroup::from_presentation(self.target.generator_count(), &rel)
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {}", self.source, self.target, self.matrix)
    }
}

/// Injectivity of `x -> (first(x), second(x))`, i.e. `ker first ∩ ker second = 0`.
pub fn paired_injective(first: &Homomorphism, second: &Homomorphism) -> Result<bool, FgabError> {
    if first.source != second.source {
        return Err(FgabError::ParentMismatch {
            expected: first.source.clone(),
            got: second.source.clone(),
        });
    }
    Ok(joint_kernel(&first.source, &[first, second]).is_trivial())
}

/// Whether `im left = ker right`.
pub fn exact_at(left: &Homomorphism, right: &Homomorphism) -> Result<bool, FgabError> {
    if left.target != right.source {
        return Err(FgabError::ParentMismatch {
            expected: right.source.clone(),
            got: left.target.clone(),
        });
    }
    let image = left.image();
    for g in image.generators() {
        if !right.eval(g)?.is_zero() {
            return Ok(false);
        }
    }
    for k in right.kernel().generators() {
        if left.in_image(k)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common kernel of maps out of `source`: integer vectors `x` such that every
/// `M_i x` lies in the relation lattice of the `i`-th target.
fn joint_kernel(source: &FgAbGroup, maps: &[&Homomorphism]) -> Subgroup {
    let n = source.generator_count();
    let total_rows: usize = maps.iter().map(|h| h.target.generator_count()).sum();
    let total_rel: usize = maps.iter().map(|h| h.target.torsion().len()).sum();
    let mut system = IntMatrix::zeros(total_rows, n + total_rel);
    let (mut row, mut col) = (0, n);
    for h in maps {
        let rel = h.target.relation_matrix();
        for i in 0..h.target.generator_count() {
            for j in 0..n {
                system.set(row + i, j, h.matrix.get(i, j).clone());
            }
            for j in 0..rel.cols() {
                system.set(row + i, col + j, rel.get(i, j).clone());
            }
        }
        row += h.target.generator_count();
        col += rel.cols();
    }
    let generators = lattice_kernel(&system)
        .into_iter()
        .map(|z| source.element(z[..n].to_vec()).expect("length"))
        .filter(|e| !e.is_zero())
        .collect();
    Subgroup::new(source.clone(), generators).expect("parents agree")
}

/// Basis of `{z : a z = 0}` over the integers.
fn lattice_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.right.column(j)).collect()
}

/// Some integer solution of `a z = b`, if one exists.
fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let c = snf.left.mul_vec(b);
    let inv = snf.invariants();
    let mut w = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        match inv.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = ci.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            }
            _ => {
                if !ci.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.right.mul_vec(&w))
}

/// A subgroup given by generators; the isomorphism type is computed on demand.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, generators: Vec<GroupElement>) -> Result<Self, FgabError> {
        for g in &generators {
            if g.parent() != &ambient {
                return Err(FgabError::ParentMismatch {
                    expected: ambient.clone(),
                    got: g.parent().clone(),
                });
            }
        }
        Ok(Subgroup {
            ambient,
            generators,
        })
    }

    pub fn whole(ambient: &FgAbGroup) -> Self {
        let generators = (0..ambient.generator_count())
            .map(|i| ambient.generator(i))
            .collect();
        Subgroup {
            ambient: ambient.clone(),
            generators,
        }
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(GroupElement::is_zero)
    }

    fn assembly(&self) -> Homomorphism {
        Homomorphism::assembly(&self.ambient, &self.generators).expect("checked on construction")
    }

    pub fn contains(&self, y: &GroupElement) -> Result<bool, FgabError> {
        Ok(self.assembly().in_image(y)?.is_some())
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> Result<bool, FgabError> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Subgroup) -> Result<bool, FgabError> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Isomorphism type as `Z^k / (relations among the generators)`.
    pub fn isomorphism_type(&self) -> FgAbGroup {
        let k = self.generators.len();
        let relations = self.assembly().kernel();
        let cols: Vec<Vec<BigInt>> = relations
            .generators
            .iter()
            .map(|e| e.coords().to_vec())
            .collect();
        FgAbGroup::from_presentation(k, &IntMatrix::from_columns(&cols, k))
    }

    /// Index in the ambient group, `None` if infinite.
    pub fn index(&self) -> Option<BigInt> {
        self.assembly().cokernel().order()
    }
}
