//! Bidirectional typing: inference of representative terms, sort
//! discipline, and tagged rejections.

mod common;

use common::{active, an, an_at, entry, inert, mult, num, plus, u0, v};
use mutt_core::prelude;
use mutt_core::syntax::{Level, Sort, Term};
use mutt_core::typing::{check, infer, infer_ty, Env};

#[test]
fn numerals_are_naturals() {
    let p = prelude::base();
    let env = Env::new(&p);
    let r = infer(&env, &vec![], &num(3)).unwrap();
    assert_eq!(r.ty, common::nat());
    assert_eq!(r.sort, Sort::typ());
    assert_eq!(r.level, Level(0));
}

#[test]
fn arithmetic_terms_are_naturals() {
    let p = prelude::base();
    let env = Env::new(&p);
    for t in [plus(num(2), num(3)), mult(num(4), num(5))] {
        let ty = infer_ty(&env, &vec![], &t).unwrap();
        assert_eq!(env.normalize(&ty).unwrap(), common::nat());
    }
}

#[test]
fn polymorphic_identity_checks() {
    let p = prelude::base();
    let env = Env::new(&p);
    // fun (A : Univ Type 0) (x : A) => x  :  Pi (A : Univ Type 0) -> A -> A
    let id = Term::lam(an_at(u0(), Sort::typ(), 1), Term::lam(an(v(0)), v(0)));
    let ty = Term::pi(an_at(u0(), Sort::typ(), 1), Term::pi(an(v(0)), v(1)));
    check(&env, &vec![], &id, &ty, &Sort::typ()).unwrap();
    // Applying it at Nat gives the identity on Nat.
    let applied = Term::apps(id, [common::nat(), num(6)]);
    let r = infer_ty(&env, &vec![], &applied).unwrap();
    assert_eq!(env.normalize(&r).unwrap(), common::nat());
}

#[test]
fn universes_type_as_the_next_universe() {
    let p = prelude::base();
    let env = Env::new(&p);
    let r = infer(&env, &vec![], &Term::univ(Sort::typ(), 2)).unwrap();
    assert_eq!(r.ty, Term::univ(Sort::typ(), 3));
}

#[test]
fn undeclared_sort_is_rejected() {
    let p = prelude::base();
    let env = Env::new(&p);
    let err = infer_ty(&env, &vec![], &Term::univ(Sort::named("nowhere"), 0)).unwrap_err();
    assert_eq!(err.tag, "TY-UNIV");
}

#[test]
fn unbound_variable_is_rejected() {
    let p = prelude::base();
    let env = Env::new(&p);
    let err = infer_ty(&env, &vec![], &v(0)).unwrap_err();
    assert_eq!(err.tag, "TY-VAR");
}

#[test]
fn applying_a_non_function_is_rejected() {
    let p = prelude::base();
    let env = Env::new(&p);
    let err = infer_ty(&env, &vec![], &Term::app(num(1), num(2))).unwrap_err();
    assert_eq!(err.tag, "TY-FUN");
}

#[test]
fn wrong_type_is_rejected() {
    let p = prelude::base();
    let env = Env::new(&p);
    let err = check(&env, &vec![], &num(0), &inert("Bool", vec![]), &Sort::typ()).unwrap_err();
    assert_eq!(err.tag, "TY-MISMATCH");
}

#[test]
fn constant_arity_is_enforced() {
    let p = prelude::base();
    let env = Env::new(&p);
    let err = infer_ty(&env, &vec![], &inert("S", vec![])).unwrap_err();
    assert_eq!(err.tag, "TY-ARITY");
}

#[test]
fn constant_kind_is_enforced() {
    let p = prelude::base();
    let env = Env::new(&p);
    // nat_elim is active; using it as an inert constant is a kind error.
    let err = infer_ty(&env, &vec![], &inert("nat_elim", vec![])).unwrap_err();
    assert_eq!(err.tag, "TY-CONST");
}

#[test]
fn sorts_do_not_mix() {
    let p = prelude::prop_extension();
    let env = Env::new(&p);
    // trueP inhabits a proposition; demanding a primordial-sort type fails
    // on the sort, not merely on the type.
    let err = check(
        &env,
        &vec![],
        &inert("trueP", vec![]),
        &inert("Bool", vec![]),
        &Sort::typ(),
    )
    .unwrap_err();
    assert_eq!(err.tag, "TY-SORT");
}

#[test]
fn raising_a_primordial_type_is_rejected() {
    let p = prelude::exc_extension();
    let env = Env::new(&p);
    // raise expects a type in the exceptional universe; the primordial
    // empty type lives in the wrong sort.
    let err = infer_ty(&env, &vec![], &active("raise", vec![], inert("Empty", vec![]))).unwrap_err();
    assert_eq!(err.tag, "TY-SORT");
}

#[test]
fn postulated_axiom_stays_in_its_sort() {
    // An axiom postulated in an isolated sort types there, and cannot be
    // transported into the primordial sort.
    let p = prelude::axiom_extension(
        &prelude::base(),
        "ax",
        "flip",
        inert("Bool_ax", vec![]),
        0,
    )
    .unwrap();
    mutt_core::sig::check_signature(&p).unwrap();
    let env = Env::new(&p);
    let witness = active("flip", vec![], inert("tt_ax", vec![]));
    let r = infer(&env, &vec![], &witness).unwrap();
    assert_eq!(r.ty, inert("Bool_ax", vec![]));
    assert_eq!(r.sort, Sort::named("ax"));
    let err = check(&env, &vec![], &witness, &inert("Bool", vec![]), &Sort::typ()).unwrap_err();
    assert_eq!(err.tag, "TY-SORT");
}

#[test]
fn checking_is_stable_under_reduction_in_types() {
    let p = prelude::base();
    let env = Env::new(&p);
    // 4 checks at the type (fun _ => Nat) 0, which reduces to Nat.
    let red_ty = Term::app(Term::lam(an(common::nat()), common::nat()), num(0));
    check(&env, &vec![], &num(4), &red_ty, &Sort::typ()).unwrap();
}

#[test]
fn lambda_checks_against_reducible_pi() {
    let p = prelude::base();
    let env = Env::new(&p);
    // fun (x : Nat) => x checks against a Pi hidden under a beta redex.
    let id_nat = Term::lam(an(common::nat()), v(0));
    let pi = Term::pi(an(common::nat()), common::nat());
    let red_pi = Term::app(Term::lam(an_at(u0(), Sort::typ(), 1), v(0)), pi);
    check(&env, &vec![], &id_nat, &red_pi, &Sort::typ()).unwrap();
}

#[test]
fn dependent_pair_checks() {
    let p = prelude::base();
    let env = Env::new(&p);
    let nat = common::nat();
    let fam = Term::lam(an(nat.clone()), nat.clone());
    let pr = inert("pair", vec![nat.clone(), fam.clone(), num(1), num(2)]);
    let ty = infer_ty(&env, &vec![], &pr).unwrap();
    assert_eq!(ty, inert("Sigma", vec![nat.clone(), fam.clone()]));
    let f = active("fst", vec![nat.clone(), fam.clone()], pr.clone());
    assert_eq!(env.normalize(&infer_ty(&env, &vec![], &f).unwrap()).unwrap(), nat);
}

#[test]
fn open_terms_type_in_context() {
    let p = prelude::base();
    let env = Env::new(&p);
    let ctx = vec![
        entry(u0(), Sort::typ(), 1),
        entry(v(0), Sort::typ(), 0),
    ];
    let r = infer(&env, &ctx, &v(0)).unwrap();
    assert_eq!(r.ty, v(1));
    assert_eq!(r.sort, Sort::typ());
}
