use num_bigint::BigInt;

use super::{
    element, internal, need_group, need_hom, CaseId, ClassifyError, CoincidenceAnswer, Count, Flags,
};
use crate::db::{Database, Field, HomKey, HomName, Loc};
use crate::fgab::{FgAbGroup, GroupElement, Homomorphism};

/// One row of the classification table for maps `S^m -> KP(n')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub condition: &'static str,
    pub nielsen: u64,
    pub mcc: u64,
    pub mc: Count,
}

/// `f̃_i` is the sphere component of `f_i`, `f'_i = p∘f̃_i`, `A` the antipodal map.
pub const ROWS: [Row; 7] = [
    Row {
        condition: "f'1 ~ f'2, [f~2] in ker ∂_K",
        nielsen: 0,
        mcc: 0,
        mc: Count::Finite(0),
    },
    Row {
        condition: "f'1 ~ f'2, [f~2] in ker E∘∂_K - ker ∂_K",
        nielsen: 0,
        mcc: 1,
        mc: Count::Finite(1),
    },
    Row {
        condition: "K = R, f'1 ~ f'2, f~2 !~ A∘f~2",
        nielsen: 1,
        mcc: 1,
        mc: Count::Finite(1),
    },
    Row {
        condition: "K = R, f'1 !~ f'2, [f~1] - [f~2] in E(π_{m-1}(S^{n-1}))",
        nielsen: 2,
        mcc: 2,
        mc: Count::Finite(2),
    },
    Row {
        condition: "K = R, [f~1] - [f~2] not in E(π_{m-1}(S^{n-1}))",
        nielsen: 2,
        mcc: 2,
        mc: Count::Infinite,
    },
    Row {
        condition: "K = C or H, [f~1] = [f~2] not in ker E∘∂_K",
        nielsen: 1,
        mcc: 1,
        mc: Count::Finite(1),
    },
    Row {
        condition: "K = C or H, [f~1] != [f~2]",
        nielsen: 1,
        mcc: 1,
        mc: Count::Infinite,
    },
];

/// A class in `π_m(KP(n'))`, split as `p_*[f̃] + (residue)` where `[f̃]` lies
/// in `π_m(S^{n+d-1})` and the residue comes from `π_m(KP(n'-1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveClass {
    field: Field,
    m: u32,
    nprime: u32,
    lift: GroupElement,
    residue: Option<GroupElement>,
}

impl ProjectiveClass {
    /// Resolves coordinates against the database groups. The residue lives
    /// in `π_{m-1}(S^{d-1})`: trivial for `R`, `Z` for `C` with `m = 2`,
    /// trivial for `C` otherwise, and the stored `π_{m-1}(S^3)` for `H`.
    pub fn new(
        db: &Database,
        field: Field,
        m: u32,
        nprime: u32,
        lift: &[BigInt],
        residue: Option<&[BigInt]>,
    ) -> Result<Self, ClassifyError> {
        check_dims(m, nprime)?;
        let group = need_group(db, lift_loc(field, m, nprime))?;
        let lift = element(
            &group,
            lift,
            format!("lift in π_{m}({})", lift_loc(field, m, nprime).space),
        )?;
        let residue = match residue {
            None => None,
            Some(coords) => {
                let g = residue_group(db, field, m)?;
                Some(element(
                    &g,
                    coords,
                    format!("residue in π_{}(S^{})", m - 1, field.dim() - 1),
                )?)
            }
        };
        Ok(ProjectiveClass {
            field,
            m,
            nprime,
            lift,
            residue,
        })
    }

    pub fn from_i64(
        db: &Database,
        field: Field,
        m: u32,
        nprime: u32,
        lift: &[i64],
    ) -> Result<Self, ClassifyError> {
        let lift: Vec<BigInt> = lift.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(db, field, m, nprime, &lift, None)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn nprime(&self) -> u32 {
        self.nprime
    }

    pub fn lift(&self) -> &GroupElement {
        &self.lift
    }

    pub fn residue(&self) -> Option<&GroupElement> {
        self.residue.as_ref()
    }

    pub fn residue_present(&self) -> bool {
        self.residue.as_ref().is_some_and(|r| !r.is_zero())
    }

    /// Same class with another residue; the numbers never depend on it.
    pub fn with_residue(&self, db: &Database, residue: &[BigInt]) -> Result<Self, ClassifyError> {
        let g = residue_group(db, self.field, self.m)?;
        Ok(ProjectiveClass {
            residue: Some(element(&g, residue, "residue")?),
            ..self.clone()
        })
    }
}

fn check_dims(m: u32, nprime: u32) -> Result<(), ClassifyError> {
    if m < 2 || nprime < 2 {
        return Err(ClassifyError::Constraint(format!(
            "the projective table needs m, n' >= 2 (got m = {m}, n' = {nprime})"
        )));
    }
    Ok(())
}

/// `π_m(S^{n+d-1})`, where the sphere components live.
pub(crate) fn lift_loc(field: Field, m: u32, nprime: u32) -> Loc {
    Loc::sphere(field.dim() * (nprime + 1) - 1, m)
}

fn residue_group(db: &Database, field: Field, m: u32) -> Result<FgAbGroup, ClassifyError> {
    match field {
        Field::R => Ok(FgAbGroup::trivial()),
        // π_1(S^1) = Z; higher homotopy of the circle vanishes
        Field::C if m == 2 => Ok(FgAbGroup::integers()),
        Field::C => Ok(FgAbGroup::trivial()),
        Field::H => need_group(db, Loc::sphere(3, m - 1)),
    }
}

/// The database homomorphisms around `π_m(S^{n+d-1})` for one `(K, m, n')`.
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    pub field: Field,
    /// `∂_K: π_m(S^{n+d-1}) -> π_{m-1}(S^{n-1})`.
    pub boundary: Homomorphism,
    /// `E: π_{m-1}(S^{n-1}) -> π_m(S^n)`.
    pub suspension: Homomorphism,
    /// Antipodal action on `π_m(S^n)`; real case only.
    pub antipodal: Option<Homomorphism>,
}

impl Slice {
    pub fn load(db: &Database, field: Field, m: u32, nprime: u32) -> Result<Slice, ClassifyError> {
        check_dims(m, nprime)?;
        let d = field.dim();
        let top = lift_loc(field, m, nprime);
        let fibre = Loc::sphere(d * nprime - 1, m - 1);
        let base = Loc::sphere(d * nprime, m);
        let boundary = need_hom(db, HomKey::new(HomName::BoundaryK, top, fibre))?;
        let suspension = need_hom(db, HomKey::new(HomName::SuspensionE, fibre, base))?;
        let antipodal = match field {
            Field::R => Some(need_hom(db, HomKey::new(HomName::AntipodalA, top, top))?),
            _ => None,
        };
        Ok(Slice {
            field,
            boundary,
            suspension,
            antipodal,
        })
    }

    pub fn in_ker_boundary(&self, x: &GroupElement) -> Result<bool, ClassifyError> {
        Ok(self.boundary.eval(x).map_err(internal)?.is_zero())
    }

    pub fn in_ker_suspended_boundary(&self, x: &GroupElement) -> Result<bool, ClassifyError> {
        let y = self.boundary.eval(x).map_err(internal)?;
        Ok(self.suspension.eval(&y).map_err(internal)?.is_zero())
    }

    pub fn antipodal_image(&self, x: &GroupElement) -> Result<Option<GroupElement>, ClassifyError> {
        self.antipodal
            .as_ref()
            .map(|a| a.eval(x).map_err(internal))
            .transpose()
    }
}

struct Evaluation {
    rows: [bool; 7],
    free: bool,
    in_ker_d: bool,
    in_ker_ed: bool,
}

fn evaluate(
    slice: &Slice,
    f1: &ProjectiveClass,
    f2: &ProjectiveClass,
) -> Result<Evaluation, ClassifyError> {
    let (l1, l2) = (&f1.lift, &f2.lift);
    let real = slice.field == Field::R;
    let equal = l1 == l2;
    let a_l2 = slice.antipodal_image(l2)?;
    // free homotopy of p∘f̃_i: equal lifts, or lifts differing by the deck map
    let free = equal || a_l2.as_ref().is_some_and(|a| a == l1);
    let in_ker_d = slice.in_ker_boundary(l2)?;
    let in_ker_ed = slice.in_ker_suspended_boundary(l2)?;
    let (fixed, diff_in_im_e) = if real {
        let diff = l1.try_sub(l2).map_err(internal)?;
        (
            a_l2.as_ref() == Some(l2),
            slice
                .suspension
                .in_image(&diff)
                .map_err(internal)?
                .is_some(),
        )
    } else {
        (false, false)
    };
    let rows = [
        free && in_ker_d,
        free && in_ker_ed && !in_ker_d,
        real && free && !fixed,
        real && !free && diff_in_im_e,
        real && !diff_in_im_e,
        !real && equal && !in_ker_ed,
        !real && !equal,
    ];
    Ok(Evaluation {
        rows,
        free,
        in_ker_d,
        in_ker_ed,
    })
}

fn check_same_target(f1: &ProjectiveClass, f2: &ProjectiveClass) -> Result<(), ClassifyError> {
    let key = |f: &ProjectiveClass| (f.field, f.m, f.nprime);
    if key(f1) != key(f2) {
        let show = |f: &ProjectiveClass| format!("S^{} -> {}P({})", f.m, f.field, f.nprime);
        return Err(ClassifyError::TargetMismatch {
            first: show(f1),
            second: show(f2),
        });
    }
    Ok(())
}

/// All seven table conditions, each evaluated independently.
pub fn table_conditions(
    db: &Database,
    f1: &ProjectiveClass,
    f2: &ProjectiveClass,
) -> Result<[bool; 7], ClassifyError> {
    check_same_target(f1, f2)?;
    let slice = Slice::load(db, f1.field, f1.m, f1.nprime)?;
    Ok(evaluate(&slice, f1, f2)?.rows)
}

/// Nielsen and minimum numbers of `(f_1, f_2): S^m -> KP(n')`, read off the
/// unique table row whose condition holds.
pub fn classify_projective(
    db: &Database,
    f1: &ProjectiveClass,
    f2: &ProjectiveClass,
) -> Result<CoincidenceAnswer, ClassifyError> {
    check_same_target(f1, f2)?;
    let slice = Slice::load(db, f1.field, f1.m, f1.nprime)?;
    let ev = evaluate(&slice, f1, f2)?;
    let fired: Vec<u8> = (1..=7u8).filter(|&r| ev.rows[r as usize - 1]).collect();
    let [row] = fired[..] else {
        return Err(ClassifyError::Inconsistent { fired });
    };
    let entry = ROWS[row as usize - 1];
    let residue_present = f1.residue_present() || f2.residue_present();
    let mut notes = Vec::new();
    if residue_present {
        notes.push("residue present, numbers unaffected".to_string());
    }
    Ok(CoincidenceAnswer {
        case: CaseId::Row(row),
        nielsen: entry.nielsen,
        mcc: entry.mcc,
        mc: Some(entry.mc),
        flags: Flags {
            omega_sharp_zero: Some(ev.free && ev.in_ker_ed),
            loose: Some(ev.free && ev.in_ker_d),
            loose_small: ev.free.then_some(ev.in_ker_d),
        },
        reidemeister: Count::Finite(super::reidemeister_count(f1.field, f1.m)?),
        residue_present,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(db: &Database, k: Field, m: u32, np: u32, lift: i64) -> ProjectiveClass {
        ProjectiveClass::from_i64(db, k, m, np, &[lift]).unwrap()
    }

    fn triple(r: usize) -> (u64, u64, Option<Count>) {
        (ROWS[r - 1].nielsen, ROWS[r - 1].mcc, Some(ROWS[r - 1].mc))
    }

    #[test]
    fn real_eleven_six() {
        let db = Database::shipped();
        let g = |k| class(&db, Field::R, 11, 6, k);
        let a = classify_projective(&db, &g(1), &g(1)).unwrap();
        assert_eq!(a.case, CaseId::Row(2));
        assert_eq!(a.triple(), (0, 1, Some(Count::Finite(1))));
        assert_eq!(a.flags.omega_sharp_zero, Some(true));
        assert_eq!(a.flags.loose, Some(false));
        let a = classify_projective(&db, &g(2), &g(2)).unwrap();
        assert_eq!((a.case, a.triple()), (CaseId::Row(1), triple(1)));
        let a = classify_projective(&db, &g(1), &g(0)).unwrap();
        assert_eq!(
            (a.case, a.triple()),
            (CaseId::Row(5), (2, 2, Some(Count::Infinite)))
        );
    }

    #[test]
    fn real_four_four_reaches_rows_three_and_four() {
        let db = Database::shipped();
        let g = |k| class(&db, Field::R, 4, 4, k);
        assert_eq!(
            classify_projective(&db, &g(1), &g(1)).unwrap().case,
            CaseId::Row(3)
        );
        assert_eq!(
            classify_projective(&db, &g(-1), &g(1)).unwrap().case,
            CaseId::Row(3)
        );
        assert_eq!(
            classify_projective(&db, &g(1), &g(0)).unwrap().case,
            CaseId::Row(4)
        );
        assert_eq!(
            classify_projective(&db, &g(0), &g(0)).unwrap().case,
            CaseId::Row(1)
        );
    }

    #[test]
    fn complex_and_quaternionic() {
        let db = Database::shipped();
        let c = |k| class(&db, Field::C, 5, 2, k);
        let a = classify_projective(&db, &c(1), &c(0)).unwrap();
        assert_eq!(
            (a.case, a.triple()),
            (CaseId::Row(7), (1, 1, Some(Count::Infinite)))
        );
        assert_eq!(
            classify_projective(&db, &c(1), &c(1)).unwrap().case,
            CaseId::Row(6)
        );
        assert_eq!(
            classify_projective(&db, &c(2), &c(2)).unwrap().case,
            CaseId::Row(1)
        );
        let h = |k| class(&db, Field::H, 11, 2, k);
        assert_eq!(
            classify_projective(&db, &h(1), &h(1)).unwrap().case,
            CaseId::Row(6)
        );
        assert_eq!(
            classify_projective(&db, &h(8), &h(8)).unwrap().case,
            CaseId::Row(1)
        );
        assert_eq!(
            classify_projective(&db, &h(3), &h(5)).unwrap().case,
            CaseId::Row(7)
        );
    }

    #[test]
    fn residues_are_ignored() {
        let db = Database::shipped();
        let f = ProjectiveClass::from_i64(&db, Field::C, 2, 2, &[]).unwrap();
        let with = f.with_residue(&db, &[BigInt::from(5)]).unwrap();
        let a = classify_projective(&db, &f, &f).unwrap();
        let b = classify_projective(&db, &with, &f).unwrap();
        assert_eq!(a.triple(), b.triple());
        assert!(b.residue_present && !a.residue_present);
    }

    #[test]
    fn missing_slice_is_insufficient_data() {
        let db = Database::shipped();
        match ProjectiveClass::from_i64(&db, Field::R, 12, 6, &[1]) {
            Err(ClassifyError::InsufficientData(m)) => assert!(m.to_string().contains("S(6),12")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_targets_rejected() {
        let db = Database::shipped();
        let a = class(&db, Field::R, 11, 6, 1);
        let b = class(&db, Field::R, 4, 4, 1);
        assert!(matches!(
            classify_projective(&db, &a, &b),
            Err(ClassifyError::TargetMismatch { .. })
        ));
        assert!(matches!(
            ProjectiveClass::from_i64(&db, Field::R, 1, 6, &[1]),
            Err(ClassifyError::Constraint(_))
        ));
    }
}
