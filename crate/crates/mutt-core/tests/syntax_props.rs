//! Properties of shifting and substitution, checked against a naive
//! textbook substituter written independently of the library code.

mod common;

use common::{an, u0, v};
use mutt_core::syntax::{
    alpha_eq, ctx_lookup, shift, subst_apply, subst_compose, subst_id, subst_one, Annot,
    ConstantId, CtxEntry, Level, Sort, Term,
};
use proptest::prelude::*;

/// Generates terms whose free variables stay below `free`.
fn arb_term(free: usize, depth: u32) -> BoxedStrategy<Term> {
    let leaf = if free > 0 {
        prop_oneof![
            (0..free).prop_map(Term::Var),
            Just(Term::univ(Sort::typ(), 0)),
            Just(Term::Inert(ConstantId::inert("k"), vec![])),
        ]
        .boxed()
    } else {
        prop_oneof![
            Just(Term::univ(Sort::typ(), 0)),
            Just(Term::Inert(ConstantId::inert("k"), vec![])),
        ]
        .boxed()
    };
    if depth == 0 {
        return leaf;
    }
    let d = depth - 1;
    prop_oneof![
        leaf,
        (arb_term(free, d), arb_term(free, d)).prop_map(|(f, a)| Term::app(f, a)),
        (arb_term(free, d), arb_term(free + 1, d))
            .prop_map(|(ty, b)| Term::lam(Annot::new(ty, Sort::typ(), Level(0)), b)),
        (arb_term(free, d), arb_term(free + 1, d))
            .prop_map(|(ty, b)| Term::pi(Annot::new(ty, Sort::typ(), Level(0)), b)),
        proptest::collection::vec(arb_term(free, d), 0..3)
            .prop_map(|args| Term::Inert(ConstantId::inert("c"), args)),
        (
            proptest::collection::vec(arb_term(free, d), 0..2),
            arb_term(free, d)
        )
            .prop_map(|(ps, s)| Term::active(ConstantId::active("d"), ps, s)),
    ]
    .boxed()
}

/// Textbook single-variable substitution: replaces index `j`, renumbering
/// the indices above it. Written from first principles as an oracle.
fn naive_subst(t: &Term, j: usize, u: &Term) -> Term {
    match t {
        Term::Var(i) => {
            if *i == j {
                shift(u, j as i64, 0)
            } else if *i > j {
                Term::Var(*i - 1)
            } else {
                Term::Var(*i)
            }
        }
        Term::Lambda(a, b) => Term::lam(
            Annot::new(naive_subst(&a.ty, j, u), a.sort.clone(), a.level),
            naive_subst(b, j + 1, u),
        ),
        Term::Pi(a, b) => Term::pi(
            Annot::new(naive_subst(&a.ty, j, u), a.sort.clone(), a.level),
            naive_subst(b, j + 1, u),
        ),
        Term::App(f, a) => Term::app(naive_subst(f, j, u), naive_subst(a, j, u)),
        Term::Univ(..) => t.clone(),
        Term::Inert(c, args) => Term::Inert(
            c.clone(),
            args.iter().map(|x| naive_subst(x, j, u)).collect(),
        ),
        Term::Active(d, ps, s) => Term::active(
            d.clone(),
            ps.iter().map(|x| naive_subst(x, j, u)).collect(),
            naive_subst(s, j, u),
        ),
    }
}

proptest! {
    #[test]
    fn shift_roundtrip(t in arb_term(2, 3), k in 0i64..4) {
        let up = shift(&t, k, 0);
        prop_assert_eq!(shift(&up, -k, 0), t);
    }

    #[test]
    fn shift_composes(t in arb_term(2, 3), a in 0i64..3, b in 0i64..3) {
        prop_assert_eq!(shift(&shift(&t, a, 0), b, 0), shift(&t, a + b, 0));
    }

    #[test]
    fn weakening_then_substituting_is_identity(
        t in arb_term(1, 3),
        u in arb_term(1, 2),
    ) {
        prop_assert_eq!(subst_one(&shift(&t, 1, 0), &u), t);
    }

    #[test]
    fn subst_one_matches_naive_oracle(t in arb_term(1, 3), u in arb_term(0, 2)) {
        prop_assert_eq!(subst_one(&t, &u), naive_subst(&t, 0, &u));
    }

    #[test]
    fn composition_law(
        t in arb_term(2, 3),
        s0 in arb_term(1, 2),
        s1 in arb_term(1, 2),
        r0 in arb_term(0, 2),
    ) {
        // t over a telescope of 2, sigma into a telescope of 1, rho closed.
        let sigma = vec![s0, s1];
        let rho = vec![r0];
        let lhs = subst_apply(&subst_apply(&t, &sigma), &rho);
        let rhs = subst_apply(&t, &subst_compose(&sigma, &rho));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_substitution_is_identity(t in arb_term(3, 3)) {
        // The identity substitution maps each telescope variable to itself;
        // applying it must leave any term over that telescope unchanged.
        prop_assert_eq!(subst_apply(&t, &subst_id(3)), t);
    }

    #[test]
    fn alpha_eq_is_structural(t in arb_term(2, 3)) {
        prop_assert!(alpha_eq(&t, &t.clone()));
    }
}

#[test]
fn ctx_lookup_shifts_into_scope() {
    // ctx = (A : Univ, x : A); looking up x must shift A past x itself.
    let ctx = vec![
        CtxEntry::new(u0(), Sort::typ(), Level(1)),
        CtxEntry::new(v(0), Sort::typ(), Level(0)),
    ];
    let x = ctx_lookup(&ctx, 0).unwrap();
    assert_eq!(x.ty, v(1));
    let a = ctx_lookup(&ctx, 1).unwrap();
    assert_eq!(a.ty, u0());
    assert!(ctx_lookup(&ctx, 2).is_none());
}

#[test]
fn subst_one_beta_example() {
    // (fun x => x x)[y] = y y with y a constant.
    let body = Term::app(v(0), v(0));
    let k = Term::Inert(ConstantId::inert("k"), vec![]);
    assert_eq!(subst_one(&body, &k), Term::app(k.clone(), k));
}

#[test]
fn subst_under_binder_avoids_capture() {
    // (fun (y : A) => x)[u] with x the outer variable: u must be shifted
    // past the binder, not captured by it.
    let t = Term::lam(an(u0()), v(1));
    let u = v(0);
    assert_eq!(subst_one(&t, &u), Term::lam(an(u0()), v(1)));
}

#[test]
#[should_panic]
fn shift_underflow_panics() {
    shift(&v(0), -1, 0);
}
