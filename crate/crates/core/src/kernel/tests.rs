use super::*;
use crate::syntax::{Context, Declaration, JTerm, Name, Term};

fn u(i: u32) -> Term {
    Term::universe(i)
}

fn ctx_a_a() -> Context {
    Context::new().push("A", u(0)).push("a", Term::var(0))
}

#[test]
fn universe_hierarchy() {
    let s = GlobalScope::new();
    assert_eq!(infer(&s, &Context::new(), &u(0)).unwrap(), u(1));
    assert_eq!(
        infer(&s, &Context::new(), &u(crate::syntax::MAX_LEVEL)),
        Err(KernelError::UniverseOverflow)
    );
    assert!(matches!(
        check(&s, &Context::new(), &u(0), &u(0)),
        Err(KernelError::TypeMismatch { .. })
    ));
    // cumulativity
    check(&s, &Context::new(), &u(0), &u(2)).unwrap();
}

#[test]
fn refl_formation() {
    let s = GlobalScope::new();
    let ty = infer(&s, &ctx_a_a(), &Term::refl(Term::var(0))).unwrap();
    assert_eq!(ty, Term::id(Term::var(1), Term::var(0), Term::var(0)));
}

#[test]
fn lambda_needs_annotation() {
    let s = GlobalScope::new();
    assert!(matches!(
        infer(&s, &Context::new(), &Term::lam("x", Term::var(0))),
        Err(KernelError::NoInferableType(_))
    ));
}

#[test]
fn identity_checks() {
    let s = GlobalScope::new();
    let ctx = Context::new().push("A", u(0));
    let ty = Term::pi("x", Term::var(0), Term::var(1));
    check(&s, &ctx, &Term::lam("x", Term::var(0)), &ty).unwrap();
}

#[test]
fn pair_against_sigma_with_unit() {
    let s = GlobalScope::new();
    let ty = Term::sigma("_", Term::var(1), Term::Unit);
    check(&s, &ctx_a_a(), &Term::pair(Term::var(0), Term::Star), &ty).unwrap();
}

#[test]
fn j_computes_on_refl() {
    let s = GlobalScope::new();
    // J (\x y p -> A) (\x -> x) a a (refl a)  ~>  a
    let j = Term::J(Box::new(JTerm {
        names: [Name::new("x"), Name::new("y"), Name::new("p")],
        motive: Term::var(4),
        base_name: Name::new("x"),
        base: Term::var(0),
        lhs: Term::var(0),
        rhs: Term::var(0),
        proof: Term::refl(Term::var(0)),
    }));
    assert_eq!(normalize(&s, &ctx_a_a(), &j).unwrap(), Term::var(0));
}

#[test]
fn projection_rule() {
    let s = GlobalScope::new();
    let p = Term::annot(
        Term::pair(Term::var(0), Term::Star),
        Term::sigma("_", Term::var(1), Term::Unit),
    );
    assert_eq!(normalize(&s, &ctx_a_a(), &Term::fst(p)).unwrap(), Term::var(0));
}

#[test]
fn eta_laws() {
    let s = GlobalScope::new();
    let fty = Term::pi("x", Term::var(0), Term::var(1));
    let ctx = Context::new().push("A", u(0)).push("f", fty.clone());
    let fty_here = fty.shift(1, 0);
    let expanded = Term::lam("x", Term::app(Term::var(1), Term::var(0)));
    assert!(convertible(&s, &ctx, &expanded, &Term::var(0), &fty_here).unwrap());

    let ctx = Context::new().push("p", Term::Unit);
    assert!(convertible(&s, &ctx, &Term::var(0), &Term::Star, &Term::Unit).unwrap());

    assert!(!convertible(&s, &Context::new(), &u(0), &u(1), &u(2)).unwrap());
}

#[test]
fn normalize_is_idempotent_and_eta_long() {
    let s = GlobalScope::new();
    let fty = Term::pi("x", Term::var(0), Term::var(1));
    let ctx = Context::new().push("A", u(0)).push("f", fty);
    let n1 = normalize(&s, &ctx, &Term::var(0)).unwrap();
    assert_eq!(n1, Term::lam("x", Term::app(Term::var(1), Term::var(0))));
    let n2 = normalize_at(&s, &ctx, &n1, &Term::pi("x", Term::var(1), Term::var(2))).unwrap();
    assert_eq!(n1, n2);
}

#[test]
fn check_program_examples() {
    assert!(check_program(&[]).unwrap().is_empty());
    let bad = Declaration {
        name: "bad".into(),
        ty: u(0),
        body: Some(u(0)),
        opaque: false,
    };
    let err = check_program(&[bad]).unwrap_err();
    assert_eq!(err.name, "bad");
    assert!(matches!(err.error, KernelError::TypeMismatch { .. }));
}

#[test]
fn postulates_are_neutral_and_definitions_unfold() {
    let decls = vec![
        Declaration {
            name: "A".into(),
            ty: u(0),
            body: None,
            opaque: false,
        },
        Declaration {
            name: "idA".into(),
            ty: Term::arrow(Term::constant("A"), Term::constant("A")),
            body: Some(Term::lam("x", Term::var(0))),
            opaque: false,
        },
        Declaration {
            name: "idA_opaque".into(),
            ty: Term::arrow(Term::constant("A"), Term::constant("A")),
            body: Some(Term::lam("x", Term::var(0))),
            opaque: true,
        },
    ];
    let s = check_program(&decls).unwrap();
    let ctx = Context::new().push("a", Term::constant("A"));
    let t = Term::app(Term::constant("idA"), Term::var(0));
    assert_eq!(normalize(&s, &ctx, &t).unwrap(), Term::var(0));
    let t = Term::app(Term::constant("idA_opaque"), Term::var(0));
    assert_eq!(normalize(&s, &ctx, &t).unwrap(), t);
}

#[test]
fn duplicate_names_are_rejected() {
    let d = Declaration {
        name: "A".into(),
        ty: u(0),
        body: None,
        opaque: false,
    };
    let err = check_program(&[d.clone(), d]).unwrap_err();
    assert_eq!(err.error, KernelError::DuplicateName("A".into()));
}

#[test]
fn ill_scoped_input_is_malformed() {
    let s = GlobalScope::new();
    assert!(matches!(
        normalize(&s, &Context::new(), &Term::var(0)),
        Err(KernelError::MalformedTerm(_))
    ));
}

#[test]
fn placeholders_solve_from_expected_type() {
    let decls = vec![Declaration {
        name: "r".into(),
        ty: Term::pi("A", u(0), Term::pi("a", Term::var(0), Term::id(Term::var(1), Term::var(0), Term::var(0)))),
        body: Some(Term::lam("A", Term::lam("a", Term::Hole(0)))),
        opaque: false,
    }];
    let mut s = GlobalScope::new();
    let out = check_declaration(&mut s, &decls[0]).unwrap();
    assert_eq!(out.body.unwrap(), Term::lam("A", Term::lam("a", Term::refl(Term::var(0)))));
}
