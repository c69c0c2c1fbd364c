//! Signature well-formedness: the ready-made signatures are accepted, and
//! targeted mutations are rejected with the right diagnostic.

mod common;

use common::{entry, inert, v};
use mutt_core::prelude;
use mutt_core::sig::{
    check_signature, ConstantDecl, Dom, Parametrization, Pattern, RewriteRule,
    SignatureEntry, SortDecl,
};
use mutt_core::syntax::{ConstantId, Level, Sort, Term};

fn tag_of(p: &Parametrization) -> String {
    check_signature(p).unwrap_err().tag.to_owned()
}

/// Applies a mutation to the unique entry declaring `name`.
fn mutate(p: &mut Parametrization, name: &str, f: impl FnOnce(&mut SignatureEntry)) {
    let idx = p
        .sig
        .entries
        .iter()
        .position(|e| e.decls().iter().any(|d| d.id.name == name))
        .expect("entry not found");
    f(&mut p.sig.entries[idx]);
}

fn rules_mut(e: &mut SignatureEntry) -> &mut Vec<RewriteRule> {
    match e {
        SignatureEntry::Eliminator { rules, .. } | SignatureEntry::Builder { rules, .. } => rules,
        _ => panic!("entry has no rules"),
    }
}

#[test]
fn ready_made_signatures_are_accepted() {
    check_signature(&prelude::base()).unwrap();
    check_signature(&prelude::prop_extension()).unwrap();
    check_signature(&prelude::exc_extension()).unwrap();
    check_signature(&prelude::sprop_extension()).unwrap();
    let ax = prelude::axiom_extension(
        &prelude::base(),
        "ax",
        "choice",
        inert("Unit_ax", vec![]),
        0,
    )
    .unwrap();
    check_signature(&ax).unwrap();
}

#[test]
fn duplicate_constant_names_are_rejected() {
    let mut p = prelude::base();
    let unit = p
        .sig
        .entries
        .iter()
        .find(|e| e.decls()[0].id.name == "Unit")
        .unwrap()
        .clone();
    p.sig.entries.push(unit);
    assert_eq!(tag_of(&p), "WF-SIG-DUP");
}

#[test]
fn sort_table_is_validated() {
    // Two primordial sorts.
    let mut p = prelude::base();
    p.sorts.push(SortDecl { sort: Sort { name: "Type2".into(), is_type: true }, isolated: false });
    assert_eq!(tag_of(&p), "WF-SIG-SORT");

    // An isolated primordial sort.
    let mut p = prelude::base();
    p.sorts[0].isolated = true;
    assert_eq!(tag_of(&p), "WF-SIG-SORT");

    // A duplicate sort name.
    let mut p = prelude::prop_extension();
    p.sorts.push(SortDecl { sort: Sort::named("Prop"), isolated: false });
    assert_eq!(tag_of(&p), "WF-SIG-SORT");

    // No primordial sort at all.
    let p = Parametrization {
        sorts: vec![SortDecl { sort: Sort::named("other"), isolated: false }],
        sig: Default::default(),
    };
    assert_eq!(tag_of(&p), "WF-SIG-SORT");
}

#[test]
fn new_canonical_types_cannot_follow_a_universe_eliminator() {
    // raise eliminates the exceptional universe; declaring another type
    // constant in that universe afterwards would break its progress.
    let mut p = prelude::exc_extension();
    p.sig.entries.push(SignatureEntry::Positive {
        ty: ConstantDecl {
            id: ConstantId::inert("Late"),
            params: vec![],
            dom: Dom::Tele(vec![]),
            cod: Term::univ(Sort::named("exc"), 0),
            codsort: Sort::typ(),
            codlevel: Level(1),
        },
        ctors: vec![],
    });
    assert_eq!(tag_of(&p), "WF-POS-1");
}

#[test]
fn negative_types_cannot_follow_a_universe_eliminator_either() {
    let mut p = prelude::exc_extension();
    p.sig.entries.push(SignatureEntry::Negative {
        ty: ConstantDecl {
            id: ConstantId::inert("LateRec"),
            params: vec![],
            dom: Dom::Tele(vec![]),
            cod: Term::univ(Sort::named("exc"), 0),
            codsort: Sort::typ(),
            codlevel: Level(1),
        },
        obs: vec![],
    });
    assert_eq!(tag_of(&p), "WF-NEG-1");
}

#[test]
fn missing_rule_breaks_progress() {
    let mut p = prelude::base();
    mutate(&mut p, "nat_elim", |e| {
        rules_mut(e).retain(|r| r.pat.key() != mutt_core::sig::PatKey::Const("S".into()));
    });
    assert_eq!(tag_of(&p), "WF-ELIM-1");
}

#[test]
fn overlapping_rules_break_determinism() {
    let mut p = prelude::base();
    mutate(&mut p, "nat_elim", |e| {
        let rules = rules_mut(e);
        let dup = rules[0].clone();
        rules.push(dup);
    });
    assert_eq!(tag_of(&p), "WF-DET");
}

/// A two-branch conditional on the booleans with both branches at Nat,
/// so that repeating a variable in the parameter renaming stays well-typed
/// and only linearity can reject it.
fn nat_conditional(dup: bool) -> Parametrization {
    let mut p = prelude::base();
    let params = vec![entry(common::nat(), Sort::typ(), 0), entry(common::nat(), Sort::typ(), 0)];
    let decl = ConstantDecl {
        id: ConstantId::active("pick"),
        params: params.clone(),
        dom: Dom::Head(ConstantId::inert("Bool"), vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    let true_vars = if dup { vec![1, 1] } else { vec![1, 0] };
    let rules = vec![
        RewriteRule::linear(
            decl.id.clone(),
            params.clone(),
            true_vars,
            Pattern::Head(ConstantId::inert("true"), vec![]),
            v(1),
        ),
        RewriteRule::linear(
            decl.id.clone(),
            params,
            vec![1, 0],
            Pattern::Head(ConstantId::inert("false"), vec![]),
            v(0),
        ),
    ];
    p.sig.entries.push(SignatureEntry::Eliminator { decl, rules });
    p
}

#[test]
fn repeated_pattern_variables_are_rejected() {
    check_signature(&nat_conditional(false)).unwrap();
    assert_eq!(tag_of(&nat_conditional(true)), "LIN-A");
}

#[test]
fn universe_rules_must_be_linear() {
    // Pad the non-linear context of raise's Pi rule so the rule is no
    // longer linear; rules on a universe domain must be.
    let mut p = prelude::exc_extension();
    mutate(&mut p, "raise", |e| {
        let rule = rules_mut(e)
            .iter_mut()
            .find(|r| r.pat.key() == mutt_core::sig::PatKey::Pi)
            .unwrap();
        rule.delta.insert(0, entry(common::nat(), Sort::typ(), 0));
        for i in &mut rule.renaming {
            *i += 0;
        }
    });
    assert_eq!(tag_of(&p), "LIN-B");
}

#[test]
fn renamings_must_be_invertible() {
    // Give boxelim's rule a non-linear context variable the renaming never
    // reaches; no inverse can exist.
    let mut p = prelude::base();
    mutate(&mut p, "boxelim", |e| {
        let rule = &mut rules_mut(e)[0];
        rule.delta.insert(0, entry(common::nat(), Sort::typ(), 0));
        for i in &mut rule.renaming {
            *i += 0;
        }
        // rhs indices are unaffected: the new entry is outermost.
    });
    assert_eq!(tag_of(&p), "LIN-INV");
}

#[test]
fn isolated_sorts_cannot_be_eliminated_into_open_sorts() {
    let mut p = prelude::axiom_extension(
        &prelude::base(),
        "ax",
        "choice",
        inert("Unit_ax", vec![]),
        0,
    )
    .unwrap();
    // An eliminator from the isolated booleans into the naturals would leak
    // information out of the isolated sort.
    let leak = ConstantDecl {
        id: ConstantId::active("leak"),
        params: vec![entry(common::nat(), Sort::typ(), 0), entry(common::nat(), Sort::typ(), 0)],
        dom: Dom::Head(ConstantId::inert("Bool_ax"), vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Eliminator { decl: leak, rules: vec![] });
    assert_eq!(tag_of(&p), "WF-ELIM-1");
}

#[test]
fn isolated_records_cannot_observe_into_open_sorts() {
    let mut p = prelude::base();
    p.sorts.push(SortDecl { sort: Sort::named("quarantine"), isolated: true });
    let q = Sort::named("quarantine");
    let ty = ConstantDecl {
        id: ConstantId::inert("Cell"),
        params: vec![],
        dom: Dom::Tele(vec![]),
        cod: Term::univ(q.clone(), 0),
        codsort: Sort::typ(),
        codlevel: Level(1),
    };
    let peek = ConstantDecl {
        id: ConstantId::active("peek"),
        params: vec![],
        dom: Dom::Head(ConstantId::inert("Cell"), vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Negative { ty, obs: vec![peek] });
    assert_eq!(tag_of(&p), "WF-NEG-4");
}

#[test]
fn rule_heads_must_match_their_eliminator() {
    // An extra rule headed by a different constant leaves progress intact
    // but is ill-headed.
    let mut p = prelude::base();
    mutate(&mut p, "nat_elim", |e| {
        let rules = rules_mut(e);
        let mut stray = rules[0].clone();
        stray.head = ConstantId::active("bool_elim");
        rules.push(stray);
    });
    assert_eq!(tag_of(&p), "WF-ELIM-3");
}

#[test]
fn builder_rules_must_match_the_builder() {
    // An extra rule matching a foreign head leaves progress intact but is
    // not a rule about this builder.
    let mut p = prelude::base();
    mutate(&mut p, "pair", |e| {
        let rules = rules_mut(e);
        let mut stray = rules[0].clone();
        stray.pat = Pattern::Head(ConstantId::inert("tt"), vec![]);
        rules.push(stray);
    });
    assert_eq!(tag_of(&p), "WF-BUILD-2");
}

#[test]
fn ill_typed_right_hand_sides_are_rejected() {
    // Swap the right-hand side of the identity eliminator's rule for the
    // motive itself: well-scoped, but at the wrong type.
    let mut p = prelude::base();
    mutate(&mut p, "J", |e| {
        rules_mut(e)[0].rhs = v(1);
    });
    assert_eq!(tag_of(&p), "REW-4");
}

#[test]
fn eliminator_domains_must_be_types_or_universes() {
    let mut p = prelude::base();
    let bad = ConstantDecl {
        id: ConstantId::active("bad"),
        params: vec![],
        dom: Dom::Head(ConstantId::inert("S"), vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Eliminator { decl: bad, rules: vec![] });
    assert_eq!(tag_of(&p), "WF-ELIM-DOM");
}

#[test]
fn builder_codomains_must_be_negative_types() {
    let mut p = prelude::base();
    let bad = ConstantDecl {
        id: ConstantId::inert("mk"),
        params: vec![],
        dom: Dom::Tele(vec![]),
        cod: common::nat(),
        codsort: Sort::typ(),
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Builder { decl: bad, rules: vec![] });
    assert_eq!(tag_of(&p), "WF-BUILD-DOM");
}

#[test]
fn recursive_arguments_must_be_the_inductive_itself() {
    let mut p = prelude::base();
    mutate(&mut p, "Nat", |e| {
        if let SignatureEntry::Positive { ctors, .. } = e {
            if let Dom::Tele(t) = &mut ctors[1].dom {
                t[0].ty = inert("Bool", vec![]);
            }
        }
    });
    assert_eq!(tag_of(&p), "WF-POS-3");
}

#[test]
fn type_constants_cannot_take_recursive_arguments() {
    let mut p = prelude::base();
    mutate(&mut p, "Unit", |e| {
        if let SignatureEntry::Positive { ty, .. } = e {
            ty.dom = Dom::Tele(vec![entry(common::nat(), Sort::typ(), 0)]);
        }
    });
    assert_eq!(tag_of(&p), "WF-POS-2");
}

#[test]
fn singleton_criterion_accepts_and_rejects() {
    let p = prelude::prop_extension();
    // Two constructors: no primordial-sort eliminator.
    let err = prelude::singleton_rec(&p, "Bool_P", "boolP_rec").unwrap_err();
    assert_eq!(err.tag, "WF-SINGLETON");
    // One constructor with proposition-sorted arguments: granted, and the
    // extended signature still checks.
    let rec = prelude::singleton_rec(&p, "And_P", "andP_rec").unwrap();
    let mut q = p.clone();
    q.sig.entries.push(rec);
    check_signature(&q).unwrap();
    // Zero constructors: granted trivially.
    prelude::singleton_rec(&p, "Empty_P", "emptyP_rec2").unwrap();
}

#[test]
fn singleton_criterion_rejects_informative_arguments() {
    // A proposition wrapping a natural number smuggles information and is
    // no singleton.
    let mut p = prelude::prop_extension();
    let prop = Sort::named("Prop");
    p.sig.entries.push(SignatureEntry::Positive {
        ty: ConstantDecl {
            id: ConstantId::inert("Hide"),
            params: vec![],
            dom: Dom::Tele(vec![]),
            cod: Term::univ(prop.clone(), 0),
            codsort: Sort::typ(),
            codlevel: Level(1),
        },
        ctors: vec![ConstantDecl {
            id: ConstantId::inert("hide"),
            params: vec![entry(common::nat(), Sort::typ(), 0)],
            dom: Dom::Tele(vec![]),
            cod: inert("Hide", vec![]),
            codsort: prop,
            codlevel: Level(0),
        }],
    });
    check_signature(&p).unwrap();
    let err = prelude::singleton_rec(&p, "Hide", "hide_rec").unwrap_err();
    assert_eq!(err.tag, "WF-SINGLETON");
}

#[test]
fn ruleless_eliminators_need_isolation() {
    // The same ruleless axiom constant that is fine in an isolated sort is
    // rejected in an open one: it would break progress.
    let mut p = prelude::base();
    p.sorts.push(SortDecl { sort: Sort::named("open"), isolated: false });
    let o = Sort::named("open");
    p.sig.entries.push(SignatureEntry::Positive {
        ty: ConstantDecl {
            id: ConstantId::inert("Unit_o"),
            params: vec![],
            dom: Dom::Tele(vec![]),
            cod: Term::univ(o.clone(), 0),
            codsort: Sort::typ(),
            codlevel: Level(1),
        },
        ctors: vec![ConstantDecl {
            id: ConstantId::inert("tt_o"),
            params: vec![],
            dom: Dom::Tele(vec![]),
            cod: inert("Unit_o", vec![]),
            codsort: o.clone(),
            codlevel: Level(0),
        }],
    });
    let axiom = ConstantDecl {
        id: ConstantId::active("wish"),
        params: vec![],
        dom: Dom::Head(ConstantId::inert("Unit_o"), vec![]),
        cod: inert("Unit_o", vec![]),
        codsort: o,
        codlevel: Level(0),
    };
    p.sig.entries.push(SignatureEntry::Eliminator { decl: axiom, rules: vec![] });
    assert_eq!(tag_of(&p), "WF-ELIM-1");
}
