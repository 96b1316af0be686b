use std::fmt;

use super::{Assertion, Database, HomKey, HomName, Loc, ResolveError, SpaceId};
use crate::fgab::{exact_at, FgabError, Homomorphism};

/// One reason a database is rejected. Every variant names the entry at fault.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingReference {
        hom: HomKey,
        missing: Loc,
    },
    EndpointMismatch {
        hom: HomKey,
        reason: String,
    },
    MatrixShape {
        hom: HomKey,
        expected: (usize, usize),
        got: (usize, usize),
    },
    IllDefined {
        hom: HomKey,
        detail: String,
    },
    NotAutomorphism {
        hom: HomKey,
    },
    /// `A∘A ≠ 1`; the antipodal map is an involution.
    NotInvolution {
        hom: HomKey,
    },
    UnknownHomInAssertion {
        assertion: String,
        hom: HomKey,
    },
    NotComposable {
        first: HomKey,
        second: HomKey,
    },
    NotExact {
        first: HomKey,
        second: HomKey,
    },
    NotZero {
        hom: HomKey,
    },
    NotSurjective {
        hom: HomKey,
    },
    /// `ker(E∘∂) ≠ ker(A − 1)` or `im(A − 1) ⊄ im E` on a real slice.
    AntipodalIncoherent {
        hom: HomKey,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingReference { hom, missing } => {
                write!(
                    f,
                    "dangling reference: {hom} refers to group {missing}, which has no entry"
                )
            }
            Violation::EndpointMismatch { hom, reason } => {
                write!(f, "bad endpoints for {hom}: {reason}")
            }
            Violation::MatrixShape { hom, expected, got } => write!(
                f,
                "matrix of {hom} is {}x{}, expected {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            Violation::IllDefined { hom, detail } => {
                write!(f, "{hom} is not a homomorphism: {detail}")
            }
            Violation::NotAutomorphism { hom } => write!(f, "{hom} is not an automorphism"),
            Violation::NotInvolution { hom } => write!(f, "{hom} does not square to the identity"),
            Violation::UnknownHomInAssertion { assertion, hom } => {
                write!(f, "{assertion} refers to {hom}, which has no entry")
            }
            Violation::NotComposable { first, second } => {
                write!(f, "assert_exact {first} {second}: target of the first is not the source of the second")
            }
            Violation::NotExact { first, second } => {
                write!(
                    f,
                    "assert_exact {first} {second} fails: image and kernel differ"
                )
            }
            Violation::NotZero { hom } => write!(f, "assert_zero {hom} fails: the map is nonzero"),
            Violation::NotSurjective { hom } => {
                write!(f, "assert_surjective {hom} fails: the map is not onto")
            }
            Violation::AntipodalIncoherent { hom, reason } => {
                write!(f, "{hom} is incoherent: {reason}")
            }
        }
    }
}

/// Every violation in `db`; empty means the database is usable.
///
/// Assertions and coherence checks that mention an entry already reported as
/// broken are skipped, so one bad entry yields one violation.
pub fn validate(db: &Database) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut broken = Vec::new();

    for entry in db.homs() {
        let key = entry.key;
        if let Some(reason) = endpoint_problem(&key) {
            out.push(Violation::EndpointMismatch { hom: key, reason });
            broken.push(key);
            continue;
        }
        match db.resolve(&key) {
            Ok(h) => {
                if key.name == HomName::AntipodalA {
                    if !h.is_isomorphism() {
                        out.push(Violation::NotAutomorphism { hom: key });
                        broken.push(key);
                    } else if !is_involution(&h) {
                        out.push(Violation::NotInvolution { hom: key });
                        broken.push(key);
                    }
                }
            }
            Err(e) => {
                out.push(resolve_violation(key, e));
                broken.push(key);
            }
        }
    }

    let fetch =
        |key: &HomKey, assertion: String, out: &mut Vec<Violation>| -> Option<Homomorphism> {
            if broken.contains(key) {
                return None;
            }
            match db.resolve(key) {
                Ok(h) => Some(h),
                Err(_) => {
                    out.push(Violation::UnknownHomInAssertion {
                        assertion,
                        hom: *key,
                    });
                    None
                }
            }
        };

    for a in db.assertions() {
        match a {
            Assertion::Exact(x, y) => {
                let label = format!("assert_exact {x} {y}");
                let hx = fetch(x, label.clone(), &mut out);
                let hy = fetch(y, label, &mut out);
                if let (Some(hx), Some(hy)) = (hx, hy) {
                    match exact_at(&hx, &hy) {
                        Ok(true) => {}
                        Ok(false) => out.push(Violation::NotExact {
                            first: *x,
                            second: *y,
                        }),
                        Err(_) => out.push(Violation::NotComposable {
                            first: *x,
                            second: *y,
                        }),
                    }
                }
            }
            Assertion::Zero(x) => {
                if let Some(h) = fetch(x, format!("assert_zero {x}"), &mut out) {
                    if !h.is_zero() {
                        out.push(Violation::NotZero { hom: *x });
                    }
                }
            }
            Assertion::Surjective(x) => {
                if let Some(h) = fetch(x, format!("assert_surjective {x}"), &mut out) {
                    if !h.is_surjective() {
                        out.push(Violation::NotSurjective { hom: *x });
                    }
                }
            }
        }
    }

    for entry in db.homs() {
        let key = entry.key;
        if key.name != HomName::AntipodalA || broken.contains(&key) {
            continue;
        }
        if let Some(v) = antipodal_coherence(db, key, &broken) {
            out.push(v);
        }
    }

    out
}

fn is_involution(h: &Homomorphism) -> bool {
    h.compose(h)
        .and_then(|sq| sq.try_sub(&Homomorphism::identity(h.source().clone())))
        .is_ok_and(|d| d.is_zero())
}

fn resolve_violation(hom: HomKey, e: ResolveError) -> Violation {
    match e {
        ResolveError::MissingGroup(missing) => Violation::DanglingReference { hom, missing },
        ResolveError::Shape { expected, got } => Violation::MatrixShape { hom, expected, got },
        ResolveError::Fgab(FgabError::ShapeMismatch { expected, got }) => {
            Violation::MatrixShape { hom, expected, got }
        }
        ResolveError::Fgab(e) => Violation::IllDefined {
            hom,
            detail: e.to_string(),
        },
        ResolveError::MissingHom => Violation::IllDefined {
            hom,
            detail: "entry vanished during validation".into(),
        },
    }
}

/// Whether the endpoints fit the fibration the name refers to.
fn endpoint_problem(key: &HomKey) -> Option<String> {
    use SpaceId::*;
    let (s, t) = (key.source, key.target);
    let same_degree = || (s.degree != t.degree).then(|| "degrees must agree".to_string());
    match key.name {
        HomName::SuspensionE => match (s.space, t.space) {
            (Sphere(a), Sphere(b)) if b == a + 1 && t.degree == s.degree + 1 => None,
            _ => Some("expected S(n),k -> S(n+1),k+1".into()),
        },
        HomName::BoundaryK => match (s.space, t.space) {
            (Sphere(a), Sphere(b)) if a > b && t.degree + 1 == s.degree => {
                let d = a - b;
                if matches!(d, 1 | 2 | 4) && (b + 1) % d == 0 {
                    None
                } else {
                    Some(format!(
                        "S({a}) -> S({b}) is not the base and fibre of a Stiefel fibration"
                    ))
                }
            }
            _ => Some("expected S(n),k -> S(n-d),k-1".into()),
        },
        HomName::ProjPK => match (s.space, t.space) {
            (Stiefel(k, n), Sphere(a)) if a == k.dim() * (n + 1) - 1 => same_degree(),
            _ => Some("expected V(K,n'),k -> S(dn'+d-1),k".into()),
        },
        HomName::HopfH => match (s.space, t.space) {
            (Sphere(n), Sphere(b)) if b + 1 == 2 * n => same_degree(),
            _ => Some("expected S(n),k -> S(2n-1),k".into()),
        },
        HomName::AntipodalA => match (s.space, t.space) {
            (Sphere(a), Sphere(b)) if a == b => same_degree(),
            _ => Some("expected S(n),k -> S(n),k".into()),
        },
        HomName::FiberIncl => match (s.space, t.space) {
            (Sphere(a), Stiefel(k, n)) if a + 1 == k.dim() * n => same_degree(),
            _ => Some("expected S(dn'-1),k -> V(K,n'),k".into()),
        },
        HomName::JStar => match (s.space, t.space) {
            (Sphere(b), Projective(k, n)) if b + 1 == k.dim() * (n + 1) => same_degree(),
            _ => Some("expected S(d(n'+1)-1),k -> P(K,n'),k".into()),
        },
    }
}

/// On `π_m(S^n)` with `∂: π_m(S^n) → π_{m-1}(S^{n-1})` and
/// `E: π_{m-1}(S^{n-1}) → π_m(S^n)` present, the real antipodal action must
/// satisfy `ker(E∂) = ker(A − 1)` and `im(A − 1) ⊆ im E`.
fn antipodal_coherence(db: &Database, key: HomKey, broken: &[HomKey]) -> Option<Violation> {
    let SpaceId::Sphere(n) = key.source.space else {
        return None;
    };
    if n < 2 || key.source.degree == 0 {
        return None;
    }
    let below = Loc::sphere(n - 1, key.source.degree - 1);
    let dk = HomKey::new(HomName::BoundaryK, key.source, below);
    let ek = HomKey::new(HomName::SuspensionE, below, key.source);
    if broken.contains(&dk) || broken.contains(&ek) {
        return None;
    }
    let a = db.resolve(&key).ok()?;
    let d = db.resolve(&dk).ok()?;
    let e = db.resolve(&ek).ok()?;
    let a_minus_1 = a
        .try_sub(&Homomorphism::identity(a.source().clone()))
        .ok()?;
    let ed = e.compose(&d).ok()?;
    let kernels_agree = ed.kernel().same_as(&a_minus_1.kernel()).ok()?;
    if !kernels_agree {
        return Some(Violation::AntipodalIncoherent {
            hom: key,
            reason: format!("ker(A - 1) differs from the kernel of {ek} after {dk}"),
        });
    }
    if !a_minus_1.image().is_subset_of(&e.image()).ok()? {
        return Some(Violation::AntipodalIncoherent {
            hom: key,
            reason: format!("im(A - 1) is not contained in the image of {ek}"),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"nielsendb v1
group S(6) 11 = 1 [] gens w src "a"
group S(5) 10 = 0 [2] gens e src "b"
group V(R,6) 10 = 0 [] gens src "c"
hom boundary_K S(6),11 -> S(5),10 matrix [[1]] src "d"
hom fiber_incl S(5),10 -> V(R,6),10 matrix [] src "e"
hom suspension_E S(5),10 -> S(6),11 matrix [[0]] src "f"
hom antipodal_A S(6),11 -> S(6),11 matrix [[1]] src "g"
assert_exact boundary_K[S(6),11->S(5),10] fiber_incl[S(5),10->V(R,6),10]
assert_zero suspension_E[S(5),10->S(6),11]
assert_surjective boundary_K[S(6),11->S(5),10]
"#;

    fn violations(text: &str) -> Vec<Violation> {
        validate(&Database::parse_unvalidated(text).unwrap())
    }

    #[test]
    fn base_is_clean() {
        assert_eq!(violations(BASE), vec![]);
    }

    #[test]
    fn nonzero_suspension_is_one_violation() {
        // E(e) = 1 is not even a homomorphism Z/2 -> Z
        let v = violations(&BASE.replace("matrix [[0]] src \"f\"", "matrix [[1]] src \"f\""));
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(
            matches!(v[0], Violation::IllDefined { hom, .. } if hom.name == HomName::SuspensionE)
        );
    }

    #[test]
    fn zero_boundary_breaks_surjectivity_and_exactness() {
        let v = violations(&BASE.replace("matrix [[1]] src \"d\"", "matrix [[0]] src \"d\""));
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::NotSurjective { .. })),
            "{v:?}"
        );
        assert!(
            v.iter().any(|x| matches!(x, Violation::NotExact { .. })),
            "{v:?}"
        );
    }

    #[test]
    fn dangling_reference() {
        let v = violations(&BASE.replace("group V(R,6) 10 = 0 [] gens src \"c\"\n", ""));
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::DanglingReference { missing, .. } if missing.space == SpaceId::Stiefel(crate::db::Field::R, 6)
        )));
        assert!(v[0].to_string().contains("V(R,6),10"));
    }

    #[test]
    fn antipodal_must_be_automorphism() {
        let v = violations(&BASE.replace("matrix [[1]] src \"g\"", "matrix [[2]] src \"g\""));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::NotAutomorphism { .. })));
    }

    #[test]
    fn antipodal_must_be_involution() {
        let text = "nielsendb v1\ngroup S(3) 9 = 0 [5] gens a src \"x\"\nhom antipodal_A S(3),9 -> S(3),9 matrix [[2]] src \"y\"\n";
        let v = violations(text);
        assert_eq!(
            v,
            vec![Violation::NotInvolution {
                hom: "antipodal_A[S(3),9->S(3),9]".parse().unwrap()
            }]
        );
    }

    #[test]
    fn antipodal_coherence_checked() {
        // A = -1 has ker(A - 1) = 0 but E∂ = 0 has kernel Z
        let v = violations(&BASE.replace("matrix [[1]] src \"g\"", "matrix [[-1]] src \"g\""));
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::AntipodalIncoherent { .. }));
    }

    #[test]
    fn endpoints_checked() {
        let text = format!("{BASE}hom hopf_H S(6),11 -> S(12),11 matrix [[2]] src \"h\"\n");
        let v = Database::parse_unvalidated(&text);
        // target group missing too, but the endpoint rule fires first
        let v = validate(&v.unwrap());
        assert!(matches!(v[0], Violation::EndpointMismatch { .. }));
    }

    #[test]
    fn wrong_shape() {
        let v = violations(&BASE.replace("matrix [[1]] src \"d\"", "matrix [[1,0]] src \"d\""));
        assert!(matches!(v[0], Violation::MatrixShape { .. }), "{v:?}");
    }
}
