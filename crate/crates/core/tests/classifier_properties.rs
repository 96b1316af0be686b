use num_bigint::BigInt;
use proptest::prelude::*;

use nielsen_core::classifier::{
    classify_projective, classify_space_form, classify_sphere_target, nielsen_via_liftings,
    AntipodalInput, CaseId, ClassifyError, Count, DomainCase, Missing, ProjectiveClass,
    SpaceFormAnswer, SpaceFormQuery,
};
use nielsen_core::db::{Database, Field, HomKey, HomName, Loc};
use nielsen_core::fgab::GroupElement;

fn db() -> Database {
    Database::shipped()
}

fn slice() -> impl Strategy<Value = (Field, u32, u32)> {
    prop_oneof![
        Just((Field::R, 11, 6)),
        Just((Field::R, 4, 4)),
        Just((Field::C, 5, 2)),
        Just((Field::H, 11, 2)),
    ]
}

fn pc(db: &Database, (k, m, n): (Field, u32, u32), x: i64) -> ProjectiveClass {
    ProjectiveClass::from_i64(db, k, m, n, &[x]).unwrap()
}

/// `A_*` applied to a real lift, read straight from the stored matrix.
fn antipodal(db: &Database, f: &ProjectiveClass) -> GroupElement {
    let loc = Loc::sphere(f.nprime(), f.m());
    db.get_hom(HomName::AntipodalA, loc, loc)
        .unwrap()
        .eval(f.lift())
        .unwrap()
}

proptest! {
    #[test]
    fn symmetric_in_the_two_maps(s in slice(), a in -30i64..=30, b in -30i64..=30) {
        let db = db();
        let (f1, f2) = (pc(&db, s, a), pc(&db, s, b));
        let x = classify_projective(&db, &f1, &f2).unwrap();
        let y = classify_projective(&db, &f2, &f1).unwrap();
        prop_assert_eq!(x.triple(), y.triple());
    }

    #[test]
    fn residues_never_change_the_numbers(a in -30i64..=30, b in -30i64..=30, r1 in -9i64..=9, r2 in -9i64..=9) {
        let db = db();
        let s = (Field::H, 11, 2);
        let (f1, f2) = (pc(&db, s, a), pc(&db, s, b));
        let plain = classify_projective(&db, &f1, &f2).unwrap();
        let g1 = f1.with_residue(&db, &[r1.into()]).unwrap();
        let g2 = f2.with_residue(&db, &[r2.into()]).unwrap();
        let with = classify_projective(&db, &g1, &g2).unwrap();
        prop_assert_eq!(plain.triple(), with.triple());
        prop_assert_eq!(plain.case, with.case);
        let present = r1.rem_euclid(15) != 0 || r2.rem_euclid(15) != 0;
        prop_assert_eq!(with.residue_present, present);
    }

    /// Real targets have deck group `{1, A}`, and the invariant of the lifted
    /// sphere pair `(g∘f̃_1, f̃_2)` vanishes exactly when `g∘f̃_1 ~ A∘f̃_2`.
    #[test]
    fn real_nielsen_counts_liftings(a in -30i64..=30, b in -30i64..=30, which in 0usize..2) {
        let db = db();
        let s = [(Field::R, 11, 6), (Field::R, 4, 4)][which];
        let (f1, f2) = (pc(&db, s, a), pc(&db, s, b));
        let ans = classify_projective(&db, &f1, &f2).unwrap();
        let vanishing = [f1.lift() == &antipodal(&db, &f2), f1.lift() == f2.lift()];
        prop_assert_eq!(ans.nielsen, nielsen_via_liftings(&vanishing).unwrap());
    }

    #[test]
    fn circle_numbers_are_degree_differences(d1 in -1000i64..=1000, d2 in -1000i64..=1000) {
        let a = classify_sphere_target(&db(), 1, 1, &[d1.into()], &[d2.into()], AntipodalInput::FromDatabase).unwrap();
        let d = d1.abs_diff(d2);
        prop_assert_eq!(a.triple(), (d, d, Some(Count::Finite(d))));
    }
}

#[test]
fn documented_examples() {
    let db = db();
    let r = (Field::R, 11, 6);
    let a = classify_projective(&db, &pc(&db, r, 1), &pc(&db, r, 1)).unwrap();
    assert_eq!(a.case, CaseId::Row(2));
    assert_eq!(a.flags.omega_sharp_zero, Some(true));
    assert_eq!(a.flags.loose, Some(false));
    let a = classify_projective(&db, &pc(&db, r, 2), &pc(&db, r, 2)).unwrap();
    assert_eq!(
        (a.case, a.triple()),
        (CaseId::Row(1), (0, 0, Some(Count::Finite(0))))
    );
    let a = classify_projective(&db, &pc(&db, r, 1), &pc(&db, r, 0)).unwrap();
    assert_eq!(
        (a.case, a.triple()),
        (CaseId::Row(5), (2, 2, Some(Count::Infinite)))
    );
    assert_eq!(a.reidemeister, Count::Finite(2));
    let c = (Field::C, 5, 2);
    let a = classify_projective(&db, &pc(&db, c, 1), &pc(&db, c, 0)).unwrap();
    assert_eq!(
        (a.case, a.triple()),
        (CaseId::Row(7), (1, 1, Some(Count::Infinite)))
    );
}

#[test]
fn lift_and_antipode_give_zero_on_spheres() {
    let db = db();
    let b = |x: i64| vec![BigInt::from(x)];
    let a = classify_sphere_target(&db, 4, 4, &b(-3), &b(3), AntipodalInput::FromDatabase).unwrap();
    assert_eq!(a.triple(), (0, 0, Some(Count::Finite(0))));
    let a = classify_sphere_target(&db, 4, 4, &b(3), &b(3), AntipodalInput::FromDatabase).unwrap();
    assert_eq!(a.triple(), (1, 1, Some(Count::Finite(1))));
}

#[test]
fn missing_data_is_named() {
    let db = db();
    match ProjectiveClass::from_i64(&db, Field::R, 12, 6, &[1]) {
        Err(ClassifyError::InsufficientData(Missing::Group(loc))) => {
            assert_eq!(loc, Loc::sphere(6, 12))
        }
        other => panic!("{other:?}"),
    }
    let text = nielsen_core::db::DEFAULT_DATABASE
        .lines()
        .filter(|l| !l.starts_with("hom antipodal_A S(6),11"))
        .collect::<Vec<_>>()
        .join("\n");
    let thin = Database::from_text(&text).unwrap();
    let r = (Field::R, 11, 6);
    match classify_projective(&thin, &pc(&thin, r, 1), &pc(&thin, r, 1)) {
        Err(ClassifyError::InsufficientData(Missing::Hom(key))) => {
            let loc = Loc::sphere(6, 11);
            assert_eq!(key, HomKey::new(HomName::AntipodalA, loc, loc));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn mismatched_targets_rejected() {
    let db = db();
    let a = pc(&db, (Field::R, 11, 6), 1);
    let b = pc(&db, (Field::R, 4, 4), 1);
    assert!(matches!(
        classify_projective(&db, &a, &b),
        Err(ClassifyError::TargetMismatch { .. })
    ));
}

#[test]
fn space_forms() {
    let q = |order, n, homotopic| SpaceFormQuery {
        group_order: order,
        n,
        homotopic,
        domain: DomainCase::Sphere { m: Some(7) },
    };
    for order in 2..=9 {
        let a = classify_space_form(&q(order, 5, false)).unwrap();
        let a = a.determined().unwrap();
        assert_eq!((a.nielsen, a.mcc), (order, order));
        assert_eq!(a.reidemeister, Count::Finite(order));
        let a = classify_space_form(&q(order, 5, true)).unwrap();
        assert_eq!(
            a.determined().unwrap().triple(),
            (0, 0, Some(Count::Finite(0)))
        );
    }
    match classify_space_form(&q(2, 6, true)).unwrap() {
        SpaceFormAnswer::Partial {
            nielsen,
            mc_equals_mcc,
            ..
        } => {
            assert_eq!(nielsen, vec![0, 1]);
            assert!(mc_equals_mcc);
        }
        other => panic!("{other:?}"),
    }
    assert!(classify_space_form(&q(4, 6, false)).is_err());
}
