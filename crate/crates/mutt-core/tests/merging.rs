//! Combining extensions: proper-extension checking and merging of
//! independent extensions over the shared base.

mod common;

use common::{inert, mult, num, plus, read_num};
use mutt_core::merge::{is_proper_extension, merge};
use mutt_core::prelude;
use mutt_core::reduce::normalize_default;
use mutt_core::sig::{check_signature, ConstantDecl, Dom, SignatureEntry};
use mutt_core::syntax::{ConstantId, Level, Sort, Term};

#[test]
fn the_ready_made_extensions_extend_the_base() {
    let base = prelude::base();
    for ext in [
        prelude::prop_extension(),
        prelude::exc_extension(),
        prelude::sprop_extension(),
    ] {
        is_proper_extension(&base, &ext).unwrap();
    }
}

#[test]
fn merging_independent_extensions_works() {
    let base = prelude::base();
    let merged = merge(&base, &prelude::prop_extension(), &prelude::exc_extension()).unwrap();
    check_signature(&merged).unwrap();
    // Both vocabularies are present.
    assert!(merged.sig.lookup("Bool_P").is_some());
    assert!(merged.sig.lookup("raise").is_some());
    assert!(merged.has_sort(&Sort::named("Prop")));
    assert!(merged.has_sort(&Sort::named("exc")));
    // Computation in the shared base is unaffected.
    let n = normalize_default(&merged.sig, &plus(num(3), mult(num(2), num(4)))).unwrap();
    assert_eq!(read_num(&n), Some(11));
}

#[test]
fn merging_with_an_axiom_extension_works() {
    let base = prelude::base();
    let ax = prelude::axiom_extension(&base, "ax", "oracle", inert("Bool_ax", vec![]), 0).unwrap();
    let merged = merge(&base, &ax, &prelude::exc_extension()).unwrap();
    check_signature(&merged).unwrap();
    assert!(merged.sig.lookup("oracle").is_some());
    assert!(merged.is_isolated(&Sort::named("ax")).unwrap());
}

#[test]
fn shared_non_base_sorts_are_rejected() {
    let base = prelude::base();
    let err = merge(&base, &prelude::prop_extension(), &prelude::prop_extension()).unwrap_err();
    assert_eq!(err.tag, "MERGE-SORT");
}

#[test]
fn the_base_must_be_a_literal_prefix() {
    let err = merge(
        &prelude::prop_extension(),
        &prelude::base(),
        &prelude::exc_extension(),
    )
    .unwrap_err();
    assert_eq!(err.tag, "MERGE-PREFIX");
}

#[test]
fn altered_base_entries_break_extension() {
    let base = prelude::base();
    let mut ext = prelude::base();
    // Rename a base constant in the extension.
    if let SignatureEntry::Positive { ty, .. } = &mut ext.sig.entries[2] {
        ty.id = ConstantId::inert("Unit2");
    }
    let err = is_proper_extension(&base, &ext).unwrap_err();
    assert_eq!(err.tag, "EXT-ENTRY");
}

#[test]
fn missing_sorts_break_extension() {
    let base = prelude::prop_extension();
    let ext = prelude::base();
    let err = is_proper_extension(&base, &ext).unwrap_err();
    assert_eq!(err.tag, "EXT-SORTS");
}

#[test]
fn isolation_flips_break_extension() {
    let base = prelude::prop_extension();
    let mut ext = prelude::prop_extension();
    for d in &mut ext.sorts {
        if d.sort == Sort::named("Prop") {
            d.isolated = true;
        }
    }
    let err = is_proper_extension(&base, &ext).unwrap_err();
    assert_eq!(err.tag, "EXT-ISOLATION");
}

#[test]
fn extensions_cannot_eliminate_base_universes() {
    let base = prelude::base();
    let mut ext = prelude::base();
    ext.sig.entries.push(SignatureEntry::Eliminator {
        decl: ConstantDecl {
            id: ConstantId::active("spy"),
            params: vec![],
            dom: Dom::Univ(Sort::typ(), Level(0)),
            cod: common::nat(),
            codsort: Sort::typ(),
            codlevel: Level(0),
        },
        rules: vec![],
    });
    let err = is_proper_extension(&base, &ext).unwrap_err();
    assert_eq!(err.tag, "EXT-UNIV-ELIM");
}

#[test]
fn merge_output_extends_both_inputs() {
    let base = prelude::base();
    let p1 = prelude::prop_extension();
    let p2 = prelude::sprop_extension();
    let merged = merge(&base, &p1, &p2).unwrap();
    is_proper_extension(&p1, &merged).unwrap();
    is_proper_extension(&p2, &merged).unwrap();
    // Exceptional computation still runs in a three-way combination.
    let merged2 = merge(&base, &merged, &prelude::exc_extension());
    // The previous merge introduced Prop and sProp, absent from the
    // exceptional extension, so this nests fine.
    let merged2 = merged2.unwrap();
    check_signature(&merged2).unwrap();
    let t = Term::active(
        ConstantId::active("raise"),
        vec![],
        inert("Bool_E", vec![]),
    );
    assert_eq!(
        normalize_default(&merged2.sig, &t).unwrap(),
        inert("bool_err", vec![])
    );
}
