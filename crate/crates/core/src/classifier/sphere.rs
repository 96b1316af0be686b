use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{
    element, internal, need_group, need_hom, CaseId, ClassifyError, CoincidenceAnswer, Count, Flags,
};
use crate::db::{Database, HomKey, HomName, Loc};
use crate::fgab::FgAbGroup;

/// How to decide whether `f_1 ~ A∘f_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntipodalInput {
    /// The caller already knows.
    Given(bool),
    /// Compare `class1` with `A_*(class2)` using the stored antipodal action.
    FromDatabase,
}

/// Nielsen and minimum numbers of `(f_1, f_2): S^m -> S^n` from the classes
/// `[f_i] ∈ π_m(S^n)` given in database coordinates.
///
/// `N# = MCC` is `0` when `f_1 ~ A∘f_2` and `#π_0(E) = 1` otherwise (for
/// `n >= 2`). `MC` is finite exactly when `[f_1] - [f_2]` is a suspension, in
/// which case it equals `MCC`. For `m = n = 1` the classes are degrees and
/// all three numbers are `|d_1 - d_2|`.
pub fn classify_sphere_target(
    db: &Database,
    m: u32,
    n: u32,
    class1: &[BigInt],
    class2: &[BigInt],
    antipodal: AntipodalInput,
) -> Result<CoincidenceAnswer, ClassifyError> {
    if m < 1 || n < 1 {
        return Err(ClassifyError::Constraint(format!(
            "sphere dimensions must be positive (got m = {m}, n = {n})"
        )));
    }
    if m == 1 && n == 1 {
        return circle(class1, class2);
    }

    let loc = Loc::sphere(n, m);
    // below the dimension, and for the circle as target, every map is null
    let trivial = m < n || n == 1;
    let group = if trivial {
        FgAbGroup::trivial()
    } else {
        need_group(db, loc)?
    };
    let c1 = element(&group, class1, format!("first class in π_{m}(S^{n})"))?;
    let c2 = element(&group, class2, format!("second class in π_{m}(S^{n})"))?;

    let related = match antipodal {
        AntipodalInput::Given(b) => b,
        AntipodalInput::FromDatabase if trivial => true,
        AntipodalInput::FromDatabase => {
            let a = need_hom(db, HomKey::new(HomName::AntipodalA, loc, loc))?;
            a.eval(&c2).map_err(internal)? == c1
        }
    };

    let mut notes = Vec::new();
    let (case, count) = if related {
        (CaseId::SphereAntipodal, 0)
    } else {
        (CaseId::SphereGeneric, 1)
    };
    let mc = if count == 0 {
        Some(Count::Finite(0))
    } else {
        let diff = c1.try_sub(&c2).map_err(internal)?;
        if diff.is_zero() {
            // homotopic maps out of a sphere: MC = MCC
            Some(Count::Finite(count))
        } else if n < 2 {
            None
        } else {
            let key = HomKey::new(HomName::SuspensionE, Loc::sphere(n - 1, m - 1), loc);
            match need_hom(db, key) {
                Ok(e) => Some(if e.in_image(&diff).map_err(internal)?.is_some() {
                    Count::Finite(count)
                } else {
                    Count::Infinite
                }),
                Err(ClassifyError::InsufficientData(missing)) => {
                    notes.push(format!("MC undetermined: no database entry for {missing}"));
                    None
                }
                Err(e) => return Err(e),
            }
        }
    };

    Ok(CoincidenceAnswer {
        case,
        nielsen: count,
        mcc: count,
        mc,
        flags: Flags {
            omega_sharp_zero: Some(count == 0),
            loose: Some(count == 0),
            loose_small: None,
        },
        reidemeister: Count::Finite(1),
        residue_present: false,
        notes,
    })
}

fn circle(class1: &[BigInt], class2: &[BigInt]) -> Result<CoincidenceAnswer, ClassifyError> {
    let degree = |c: &[BigInt], which: &str| -> Result<BigInt, ClassifyError> {
        match c {
            [d] => Ok(d.clone()),
            _ => Err(ClassifyError::Coordinates {
                what: format!("{which} degree of a circle map"),
                source: crate::fgab::FgabError::CoordinateLength {
                    expected: 1,
                    got: c.len(),
                },
            }),
        }
    };
    let diff = (degree(class1, "first")? - degree(class2, "second")?).abs();
    let count = diff.to_u64().ok_or_else(|| {
        ClassifyError::Constraint(format!("degree difference {diff} is out of range"))
    })?;
    Ok(CoincidenceAnswer {
        case: CaseId::Circle,
        nielsen: count,
        mcc: count,
        mc: Some(Count::Finite(count)),
        flags: Flags {
            omega_sharp_zero: Some(count == 0),
            loose: Some(count == 0),
            loose_small: None,
        },
        // equal degrees give infinitely many path components
        reidemeister: if diff.is_zero() {
            Count::Infinite
        } else {
            Count::Finite(count)
        },
        residue_present: false,
        notes: Vec::new(),
    })
}
