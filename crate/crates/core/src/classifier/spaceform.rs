use super::{nielsen_via_liftings, CaseId, ClassifyError, CoincidenceAnswer, Count, Flags};

/// The domain of `f_1, f_2: M -> S^n/G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainCase {
    /// `M = S^m` with `m >= 2`; `m` may be left unspecified.
    Sphere { m: Option<u32> },
    /// `M` simply connected of dimension `m < 2n - 2`.
    SimplyConnected { m: u32 },
}

/// A pair of maps into the quotient of `S^n` by a free action of a finite
/// group of order `group_order`, known only up to whether they are homotopic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceFormQuery {
    pub group_order: u64,
    pub n: u32,
    pub homotopic: bool,
    pub domain: DomainCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceFormAnswer {
    /// `N#` and `MCC` are determined. `certificate` records how, when the
    /// value comes from ruling out alternatives.
    Determined {
        answer: CoincidenceAnswer,
        certificate: Option<String>,
    },
    /// Only the listed values remain possible.
    Partial {
        case: CaseId,
        nielsen: Vec<u64>,
        mcc: Vec<u64>,
        /// `MC = MCC` is known (sphere domains).
        mc_equals_mcc: bool,
        reidemeister: u64,
        note: String,
    },
}

impl SpaceFormAnswer {
    pub fn determined(&self) -> Option<&CoincidenceAnswer> {
        match self {
            SpaceFormAnswer::Determined { answer, .. } => Some(answer),
            SpaceFormAnswer::Partial { .. } => None,
        }
    }
}

fn check(q: &SpaceFormQuery) -> Result<(), ClassifyError> {
    let fail = |s: String| Err(ClassifyError::Constraint(s));
    if q.group_order < 2 {
        return fail(format!(
            "the group must be nontrivial (order {} given)",
            q.group_order
        ));
    }
    if q.n < 1 {
        return fail("the sphere dimension n must be at least 1".into());
    }
    if q.n.is_multiple_of(2) && q.group_order != 2 {
        return fail(format!(
            "only Z/2 acts freely on an even-dimensional sphere; order {} is impossible for n = {}",
            q.group_order, q.n
        ));
    }
    match q.domain {
        DomainCase::Sphere { m: Some(m) } if m < 2 => {
            return fail(format!("a sphere domain needs m >= 2 (got m = {m})"));
        }
        DomainCase::SimplyConnected { m } if m + 2 >= 2 * q.n => {
            return fail(format!(
                "a simply connected domain needs m < 2n - 2 (got m = {m}, n = {})",
                q.n
            ));
        }
        _ => {}
    }
    if q.n == 1 && !q.homotopic {
        return fail("maps from a simply connected domain into a circle are null-homotopic, so they are homotopic".into());
    }
    Ok(())
}

/// Nielsen numbers for maps into spherical space forms `S^n/G`.
///
/// Maps are homotopic unless `N# = #G`. For odd `n` this determines
/// `N# = MCC` completely. For even `n` (where `G = Z/2`) a non-homotopic pair
/// is forced to `N# = 2`; a homotopic pair is only known to have
/// `N#, MCC ∈ {0, 1}`.
pub fn classify_space_form(q: &SpaceFormQuery) -> Result<SpaceFormAnswer, ClassifyError> {
    check(q)?;
    let order = q.group_order;
    let sphere_domain = matches!(q.domain, DomainCase::Sphere { .. });

    if q.n % 2 == 1 {
        let (case, count, mc) = if q.homotopic {
            (CaseId::SpaceFormHomotopic, 0, Some(Count::Finite(0)))
        } else {
            (CaseId::SpaceFormDistinct, order, None)
        };
        let answer = answer(case, count, mc, order);
        return Ok(SpaceFormAnswer::Determined {
            answer,
            certificate: None,
        });
    }

    if !q.homotopic {
        // every value other than #G would force f_1 ~ f_2
        let survivors: Vec<u64> = (0..=order).filter(|&v| v == order).collect();
        let certificate = format!(
            "N# ∈ {{{}}}; if N# ≠ {order} then homotopic — contradiction ⇒ N# = {order}",
            (0..=order)
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let count = survivors[0];
        // every lifted pair has a nonvanishing invariant
        debug_assert_eq!(
            nielsen_via_liftings(&vec![false; order as usize]).ok(),
            Some(count)
        );
        return Ok(SpaceFormAnswer::Determined {
            answer: answer(CaseId::SpaceFormForced, count, None, order),
            certificate: Some(certificate),
        });
    }

    Ok(SpaceFormAnswer::Partial {
        case: CaseId::SpaceFormOpen,
        nielsen: vec![0, 1],
        mcc: vec![0, 1],
        mc_equals_mcc: sphere_domain,
        reidemeister: order,
        note: "homotopic maps: MCC <= 1, and N# = 0 exactly when the invariant vanishes".into(),
    })
}

fn answer(case: CaseId, count: u64, mc: Option<Count>, order: u64) -> CoincidenceAnswer {
    CoincidenceAnswer {
        case,
        nielsen: count,
        mcc: count,
        mc,
        flags: Flags {
            omega_sharp_zero: Some(count == 0),
            loose: Some(count == 0),
            loose_small: None,
        },
        reidemeister: Count::Finite(order),
        residue_present: false,
        notes: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(order: u64, n: u32, homotopic: bool) -> SpaceFormQuery {
        SpaceFormQuery {
            group_order: order,
            n,
            homotopic,
            domain: DomainCase::Sphere { m: None },
        }
    }

    #[test]
    fn odd_dimension() {
        let a = classify_space_form(&q(5, 3, false)).unwrap();
        let a = a.determined().unwrap();
        assert_eq!((a.nielsen, a.mcc), (5, 5));
        let a = classify_space_form(&q(5, 3, true)).unwrap();
        let a = a.determined().unwrap();
        assert_eq!((a.nielsen, a.mcc), (0, 0));
    }

    #[test]
    fn even_dimension_forced() {
        match classify_space_form(&q(2, 2, false)).unwrap() {
            SpaceFormAnswer::Determined {
                answer,
                certificate,
            } => {
                assert_eq!((answer.nielsen, answer.mcc), (2, 2));
                assert_eq!(
                    certificate.unwrap(),
                    "N# ∈ {0,1,2}; if N# ≠ 2 then homotopic — contradiction ⇒ N# = 2"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn even_dimension_homotopic_is_partial() {
        match classify_space_form(&q(2, 4, true)).unwrap() {
            SpaceFormAnswer::Partial { nielsen, mcc, .. } => {
                assert_eq!(nielsen, vec![0, 1]);
                assert_eq!(mcc, vec![0, 1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constraints() {
        assert!(classify_space_form(&q(1, 3, false)).is_err());
        assert!(classify_space_form(&q(3, 2, false)).is_err());
        assert!(classify_space_form(&q(3, 1, false)).is_err());
        assert!(classify_space_form(&q(3, 1, true)).is_ok());
        let mut bad = q(5, 3, true);
        bad.domain = DomainCase::SimplyConnected { m: 4 };
        assert!(classify_space_form(&bad).is_err());
        bad.domain = DomainCase::SimplyConnected { m: 3 };
        assert!(classify_space_form(&bad).is_ok());
        bad.domain = DomainCase::Sphere { m: Some(1) };
        assert!(classify_space_form(&bad).is_err());
    }
}
