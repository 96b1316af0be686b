//! Looseness of self-coincidence pairs `(f, f)` for maps `S^m -> KP(n')`.
//!
//! The invariant `ω#(f, f)` is represented only through whether
//! `E∘∂_K[f̃]` vanishes; no sign is ever assigned to it.

use crate::classifier::projective::{lift_loc, Slice};
use crate::classifier::{
    classify_projective, classify_sphere_target, need_group, need_hom, AntipodalInput,
    ClassifyError, Count, ProjectiveClass,
};
use crate::db::{Database, Field, HomKey, HomName, Loc, SpaceId};
use crate::fgab::{paired_injective, FgabError, Homomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoosenessVerdict {
    /// `(f, f)` is loose by a small deformation.
    pub small_deformation: bool,
    /// `(f, f)` is loose by some deformation.
    pub loose: bool,
    /// Every map coincides somewhere with `f`.
    pub coincidence_producing: bool,
    pub omega_sharp_zero: bool,
    /// `(f̃, f̃)` is loose; `None` where only one direction is known.
    pub lifted_pair_loose: Option<bool>,
    /// `ω#(f, f) = 0` although `(f, f)` is not loose.
    pub gap_witness: bool,
}

/// Looseness of `(f, f)`, decided by `∂_K[f̃]` and `E∘∂_K[f̃]`.
pub fn self_verdict(db: &Database, f: &ProjectiveClass) -> Result<LoosenessVerdict, ClassifyError> {
    let slice = Slice::load(db, f.field(), f.m(), f.nprime())?;
    let small = slice.in_ker_boundary(f.lift())?;
    let omega_zero = slice.in_ker_suspended_boundary(f.lift())?;
    let lifted_pair_loose = match f.field() {
        Field::R => Some(omega_zero),
        // vanishing invariant still implies the lifted pair is loose
        Field::C | Field::H => omega_zero.then_some(true),
    };
    Ok(LoosenessVerdict {
        small_deformation: small,
        loose: small,
        coincidence_producing: !small,
        omega_sharp_zero: omega_zero,
        lifted_pair_loose,
        gap_witness: omega_zero && !small,
    })
}

/// For a real class, six characterizations of `(f, f)` being "loose in the
/// lifted sense only", each computed along a separate path:
///
/// 1. `ω#(f, f) = 0` but `(f, f)` is not loose (projective classifier flags);
/// 2. `∂_R[f̃] ≠ 0` but `E∂_R[f̃] = 0`;
/// 3. `(f̃, f̃)` is loose (sphere classifier) but `(f, f)` is not;
/// 4. `MC(f̃, f̃) < MC(f, f)`;
/// 5. `MCC(f̃, f̃) < MCC(f, f)`;
/// 6. `(f̃, f̃)` is loose but `∂_R[f̃] ≠ 0`, i.e. not by a small deformation.
pub fn real_gap_conditions(db: &Database, f: &ProjectiveClass) -> Result<[bool; 6], ClassifyError> {
    if f.field() != Field::R {
        return Err(ClassifyError::Constraint(
            "the six-way comparison is for real projective targets".into(),
        ));
    }
    let slice = Slice::load(db, f.field(), f.m(), f.nprime())?;
    let d_zero = slice.in_ker_boundary(f.lift())?;
    let ed_zero = slice.in_ker_suspended_boundary(f.lift())?;

    let projective = classify_projective(db, f, f)?;
    let coords = f.lift().coords();
    let sphere = classify_sphere_target(
        db,
        f.m(),
        f.nprime(),
        coords,
        coords,
        AntipodalInput::FromDatabase,
    )?;
    let pair_loose = projective.mcc == 0;
    let lifted_loose = sphere.mcc == 0;
    let mc = |a: Option<Count>| {
        a.ok_or(ClassifyError::Constraint(
            "minimum number undetermined".into(),
        ))
    };

    Ok([
        projective.flags.omega_sharp_zero == Some(true) && projective.flags.loose == Some(false),
        !d_zero && ed_zero,
        lifted_loose && !pair_loose,
        mc(sphere.mc)? < mc(projective.mc)?,
        sphere.mcc < projective.mcc,
        lifted_loose && !d_zero,
    ])
}

/// The maps out of `π_{m-1}(S^{n-1})` in the comparison of the tangent sphere
/// bundle with the deleted target: `j_*` into `π_{m-1}(N - x_0)`, the fibre
/// inclusion into the sphere bundle, and the suspension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralCriterion {
    j_star: Homomorphism,
    incl_star: Homomorphism,
    suspension: Homomorphism,
}

impl StructuralCriterion {
    pub fn new(
        j_star: Homomorphism,
        incl_star: Homomorphism,
        suspension: Homomorphism,
    ) -> Result<Self, FgabError> {
        for h in [&incl_star, &suspension] {
            if h.source() != j_star.source() {
                return Err(FgabError::ParentMismatch {
                    expected: j_star.source().clone(),
                    got: h.source().clone(),
                });
            }
        }
        Ok(StructuralCriterion {
            j_star,
            incl_star,
            suspension,
        })
    }

    /// The criterion for `RP(n')` in degree `m`, from stored data.
    ///
    /// The fibre inclusion is taken into the Stiefel manifold, which double
    /// covers the unit tangent bundle of `RP(n')`; this changes nothing on
    /// `π_{m-1}` once `m >= 3`.
    pub fn real_from_database(db: &Database, m: u32, nprime: u32) -> Result<Self, ClassifyError> {
        if m < 3 || nprime < 2 {
            return Err(ClassifyError::Constraint(format!(
                "structural criteria need m >= 3 and n' >= 2 (got m = {m}, n' = {nprime})"
            )));
        }
        let source = Loc::sphere(nprime - 1, m - 1);
        need_group(db, source)?;
        let j = need_hom(
            db,
            HomKey::new(
                HomName::JStar,
                source,
                Loc::new(SpaceId::Projective(Field::R, nprime - 1), m - 1),
            ),
        )?;
        let incl = need_hom(
            db,
            HomKey::new(
                HomName::FiberIncl,
                source,
                Loc::new(SpaceId::Stiefel(Field::R, nprime), m - 1),
            ),
        )?;
        let e = need_hom(
            db,
            HomKey::new(HomName::SuspensionE, source, lift_loc(Field::R, m, nprime)),
        )?;
        StructuralCriterion::new(j, incl, e).map_err(crate::classifier::internal)
    }

    pub fn j_star(&self) -> &Homomorphism {
        &self.j_star
    }

    pub fn incl_star(&self) -> &Homomorphism {
        &self.incl_star
    }

    pub fn suspension(&self) -> &Homomorphism {
        &self.suspension
    }
}

/// Whether "loose by a small deformation" and "not coincidence producing"
/// agree for every class in this degree: `(j_*, incl_*)` is injective.
pub fn criteria_equivalence_iii(c: &StructuralCriterion) -> bool {
    paired_injective(&c.j_star, &c.incl_star).expect("sources checked at construction")
}

/// Whether "loose by a small deformation" and `ω#(f, f) = 0` agree for every
/// class in this degree: `(E, incl_*)` is injective. When false, some `f` has
/// vanishing `ω#(f, f)` without `(f, f)` being loose.
pub fn criteria_equivalence_iii_prime(
    suspension: &Homomorphism,
    incl_star: &Homomorphism,
) -> Result<bool, FgabError> {
    paired_injective(suspension, incl_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;

    fn verdict(db: &Database, k: i64) -> LoosenessVerdict {
        let f = ProjectiveClass::from_i64(db, Field::R, 11, 6, &[k]).unwrap();
        self_verdict(db, &f).unwrap()
    }

    #[test]
    fn whitehead_square_is_a_gap_witness() {
        let db = Database::shipped();
        let v = verdict(&db, 1);
        assert!(!v.small_deformation && !v.loose && v.coincidence_producing);
        assert!(v.omega_sharp_zero && v.gap_witness);
        assert_eq!(v.lifted_pair_loose, Some(true));
        let v = verdict(&db, 2);
        assert!(v.small_deformation && v.loose && !v.gap_witness);
        let v = verdict(&db, 0);
        assert!(v.loose && v.omega_sharp_zero && !v.gap_witness);
    }

    #[test]
    fn six_conditions_agree() {
        let db = Database::shipped();
        for k in -6..=6 {
            let f = ProjectiveClass::from_i64(&db, Field::R, 11, 6, &[k]).unwrap();
            let c = real_gap_conditions(&db, &f).unwrap();
            let gap = self_verdict(&db, &f).unwrap().gap_witness;
            assert!(c.iter().all(|&x| x == gap), "k = {k}: {c:?}");
            let f = ProjectiveClass::from_i64(&db, Field::R, 4, 4, &[k]).unwrap();
            assert_eq!(real_gap_conditions(&db, &f).unwrap(), [false; 6]);
        }
    }

    #[test]
    fn complex_lifted_pair_only_one_way() {
        let db = Database::shipped();
        let f = ProjectiveClass::from_i64(&db, Field::C, 5, 2, &[1]).unwrap();
        let v = self_verdict(&db, &f).unwrap();
        assert!(!v.omega_sharp_zero && v.lifted_pair_loose.is_none());
    }

    #[test]
    fn structural_criteria_on_fixtures() {
        let db = Database::shipped();
        let c = StructuralCriterion::real_from_database(&db, 11, 6).unwrap();
        assert!(criteria_equivalence_iii(&c));
        assert!(!criteria_equivalence_iii_prime(c.suspension(), c.incl_star()).unwrap());
        let c = StructuralCriterion::real_from_database(&db, 4, 4).unwrap();
        assert!(criteria_equivalence_iii(&c));
        assert!(criteria_equivalence_iii_prime(c.suspension(), c.incl_star()).unwrap());
    }

    #[test]
    fn structural_criteria_trivial_cases() {
        let z2 = FgAbGroup::cyclic(2);
        let id = Homomorphism::identity(z2.clone());
        let zero = Homomorphism::zero(z2.clone(), FgAbGroup::integers());
        let c = StructuralCriterion::new(id.clone(), zero.clone(), zero.clone()).unwrap();
        assert!(criteria_equivalence_iii(&c));
        let dead = Homomorphism::zero(z2.clone(), z2.clone());
        let c = StructuralCriterion::new(dead.clone(), zero.clone(), zero.clone()).unwrap();
        assert!(!criteria_equivalence_iii(&c));
        let t = FgAbGroup::trivial();
        let e = Homomorphism::zero(t.clone(), z2.clone());
        assert!(criteria_equivalence_iii_prime(&e, &e).unwrap());
        assert!(
            StructuralCriterion::new(id, Homomorphism::identity(FgAbGroup::integers()), zero)
                .is_err()
        );
    }
}
