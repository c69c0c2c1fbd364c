//! Conversion: eta at function types, optional record eta, definitional
//! irrelevance, and tracing.

mod common;

use common::{active, an, entry, inert, num, plus, u0, v};
use mutt_core::convert::{conv_term, conv_type, ConversionOptions};
use mutt_core::prelude;
use mutt_core::sig::{ConstantDecl, Dom, Parametrization, RewriteRule, Pattern, SignatureEntry};
use mutt_core::syntax::{ConstantId, Level, Sort, Term};
use mutt_core::typing::Env;

fn opts(f: impl FnOnce(&mut ConversionOptions)) -> ConversionOptions {
    let mut o = ConversionOptions::default();
    f(&mut o);
    o
}

#[test]
fn conversion_is_stable_under_reduction() {
    let p = prelude::base();
    let env = Env::new(&p);
    assert!(conv_term(
        &env,
        &vec![],
        &plus(num(2), num(2)),
        &num(4),
        &common::nat(),
        &Sort::typ(),
    )
    .unwrap());
    assert!(!conv_term(&env, &vec![], &num(3), &num(4), &common::nat(), &Sort::typ()).unwrap());
}

#[test]
fn eta_at_function_types() {
    let p = prelude::base();
    let env = Env::new(&p);
    // f : Nat -> Nat in the context; fun x => f x is convertible to f.
    let fun_ty = Term::pi(an(common::nat()), common::nat());
    let ctx = vec![entry(fun_ty.clone(), Sort::typ(), 0)];
    let expanded = Term::lam(an(common::nat()), Term::app(v(1), v(0)));
    assert!(conv_term(&env, &ctx, &expanded, &v(0), &fun_ty, &Sort::typ()).unwrap());
}

#[test]
fn conv_type_compares_whole_types() {
    let p = prelude::base();
    let env = Env::new(&p);
    let a = Term::pi(an(common::nat()), Term::app(Term::lam(an(common::nat()), common::nat()), v(0)));
    let b = Term::pi(an(common::nat()), common::nat());
    assert!(conv_type(&env, &vec![], &a, &b).unwrap());
    assert!(!conv_type(&env, &vec![], &common::nat(), &inert("Bool", vec![])).unwrap());
}

#[test]
fn record_eta_is_opt_in() {
    let p = prelude::base();
    let nat = common::nat();
    let fam = Term::lam(an(nat.clone()), nat.clone());
    let sigma = inert("Sigma", vec![nat.clone(), fam.clone()]);
    let ctx = vec![entry(sigma.clone(), Sort::typ(), 0)];
    let params = vec![nat.clone(), fam.clone()];
    let repack = inert(
        "pair",
        vec![
            nat,
            fam,
            active("fst", params.clone(), v(0)),
            active("snd", params, v(0)),
        ],
    );
    // Without the option a neutral pair is not convertible to its
    // repacking; with it, the comparison goes observation-wise.
    let env = Env::new(&p);
    assert!(!conv_term(&env, &ctx, &v(0), &repack, &sigma, &Sort::typ()).unwrap());
    let env = Env::with_opts(&p, opts(|o| o.eta_records = true), 1_000_000);
    assert!(conv_term(&env, &ctx, &v(0), &repack, &sigma, &Sort::typ()).unwrap());
}

/// A record whose builder computes something other than a stored field,
/// making record eta unsound for it.
fn skewed_record() -> Parametrization {
    let mut p = prelude::base();
    let ty = ConstantDecl {
        id: ConstantId::inert("Wrap"),
        params: vec![],
        dom: Dom::Tele(vec![]),
        cod: Term::univ(Sort::typ(), 0),
        codsort: Sort::typ(),
        codlevel: Level(1),
    };
    let get = ConstantDecl {
        id: ConstantId::active("get"),
        params: vec![],
        dom: Dom::Head(ConstantId::inert("Wrap"), vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Negative { ty, obs: vec![get] });
    let mk = ConstantDecl {
        id: ConstantId::inert("mk"),
        params: vec![entry(common::nat(), Sort::typ(), 0)],
        dom: Dom::Tele(vec![]),
        cod: inert("Wrap", vec![]),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    // get (mk n) computes to S n, not to the stored field.
    let rule = RewriteRule::linear(
        ConstantId::active("get"),
        vec![entry(common::nat(), Sort::typ(), 0)],
        vec![],
        Pattern::Head(ConstantId::inert("mk"), vec![mutt_core::sig::MetaVar::Plain {
            name: "n".into(),
            idx: 0,
        }]),
        inert("S", vec![v(0)]),
    );
    p.sig.entries.push(SignatureEntry::Builder { decl: mk, rules: vec![rule] });
    p
}

#[test]
fn record_eta_conflicts_are_reported() {
    let p = skewed_record();
    mutt_core::sig::check_signature(&p).unwrap();
    let wrap = inert("Wrap", vec![]);
    let ctx = vec![entry(wrap.clone(), Sort::typ(), 0), entry(wrap.clone(), Sort::typ(), 0)];
    let env = Env::with_opts(&p, opts(|o| o.eta_records = true), 1_000_000);
    let err = conv_term(&env, &ctx, &v(0), &v(1), &wrap, &Sort::typ()).unwrap_err();
    assert_eq!(err.tag, "CONV-ETA-CONFLICT");
    // Without the option the same comparison is a plain (failing) one.
    let env = Env::new(&p);
    assert!(!conv_term(&env, &ctx, &v(0), &v(1), &wrap, &Sort::typ()).unwrap());
}

#[test]
fn irrelevant_sorts_identify_everything() {
    let p = prelude::sprop_extension();
    let sprop = Sort::named("sProp");
    // P : Univ sProp 0, x y : P. Distinct variables, equal only under
    // irrelevance.
    let ctx = vec![
        entry(Term::univ(sprop.clone(), 0), Sort::typ(), 1),
        entry(v(0), sprop.clone(), 0),
        entry(v(1), sprop.clone(), 0),
    ];
    let env = Env::new(&p);
    assert!(!conv_term(&env, &ctx, &v(0), &v(1), &v(2), &sprop).unwrap());
    let env = Env::with_opts(
        &p,
        opts(|o| {
            o.irrelevant_sorts.insert("sProp".into());
        }),
        1_000_000,
    );
    assert!(conv_term(&env, &ctx, &v(0), &v(1), &v(2), &sprop).unwrap());
    // Irrelevance at one sort does not leak into the others.
    assert!(!conv_term(&env, &vec![], &num(0), &num(1), &common::nat(), &Sort::typ()).unwrap());
}

#[test]
fn the_primordial_sort_cannot_be_irrelevant() {
    let o = opts(|o| {
        o.irrelevant_sorts.insert("Type".into());
    });
    assert!(o.validate().is_err());
    assert!(ConversionOptions::default().validate().is_ok());
}

#[test]
fn tracing_records_conversion_steps() {
    let p = prelude::base();
    let env = Env::with_opts(&p, opts(|o| o.trace = true), 1_000_000);
    let fun_ty = Term::pi(an(common::nat()), common::nat());
    let ctx = vec![entry(fun_ty.clone(), Sort::typ(), 0)];
    let expanded = Term::lam(an(common::nat()), Term::app(v(1), v(0)));
    conv_term(&env, &ctx, &expanded, &v(0), &fun_ty, &Sort::typ()).unwrap();
    let log = env.take_trace();
    assert!(!log.is_empty());
    assert!(env.take_trace().is_empty());
}

#[test]
fn universes_convert_by_sort_and_level() {
    let p = prelude::prop_extension();
    let env = Env::new(&p);
    assert!(conv_type(&env, &vec![], &u0(), &u0()).unwrap());
    assert!(!conv_type(&env, &vec![], &u0(), &Term::univ(Sort::typ(), 1)).unwrap());
    assert!(!conv_type(&env, &vec![], &u0(), &Term::univ(Sort::named("Prop"), 0)).unwrap());
}
