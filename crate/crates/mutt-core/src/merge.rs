//! Combining independent extensions of a common base.
//!
//! Two parametrizations that properly extend a shared base, and whose sorts
//! overlap exactly on the base's sorts, can be merged: the result keeps the
//! second signature whole and appends the first extension's new entries.
//! The combined signature is re-checked from scratch, and the result is
//! verified to properly extend both inputs.

use std::collections::BTreeSet;

use crate::diag::{Diag, TcResult};
use crate::sig::{check_signature, Dom, Parametrization, Signature, SignatureEntry};

/// Checks that `ext` properly extends `base`: base sorts are present with
/// their isolation flags intact, base entries occur with identical content,
/// and any extension constant eliminating a universe is either a base
/// constant or lives on a sort the base does not know.
pub fn is_proper_extension(base: &Parametrization, ext: &Parametrization) -> TcResult<()> {
    for sd in &base.sorts {
        match ext.sort_decl(&sd.sort) {
            None => {
                return Err(Diag::new(
                    "EXT-SORTS",
                    format!("sort {} of the base is missing from the extension", sd.sort),
                ));
            }
            Some(ed) => {
                if ed.isolated != sd.isolated {
                    return Err(Diag::new(
                        "EXT-ISOLATION",
                        format!("isolation of sort {} changed in the extension", sd.sort),
                    ));
                }
            }
        }
    }
    for entry in &base.sig.entries {
        if !ext.sig.entries.iter().any(|e| e == entry) {
            let name = entry.decls()[0].id.name.clone();
            return Err(Diag::new(
                "EXT-ENTRY",
                format!("base entry {} is missing or altered in the extension", name),
            ));
        }
    }
    for entry in &ext.sig.entries {
        if let SignatureEntry::Eliminator { decl, .. } = entry {
            if let Dom::Univ(s, _) = &decl.dom {
                let in_base = base.sig.entries.iter().any(|e| e == entry);
                if !in_base && base.has_sort(s) {
                    return Err(Diag::new(
                        "EXT-UNIV-ELIM",
                        format!(
                            "{} eliminates the universe of base sort {} but is not a base \
                             constant",
                            decl.id.name, s
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn is_prefix(base: &Signature, ext: &Signature) -> bool {
    base.entries.len() <= ext.entries.len()
        && base.entries.iter().zip(ext.entries.iter()).all(|(a, b)| a == b)
}

/// Merges two extensions of `base`. Both signatures must literally start
/// with the base signature, and their sorts must overlap exactly on the
/// base's sorts. The result carries all sorts and the concatenated
/// signature, re-checked from scratch.
pub fn merge(
    base: &Parametrization,
    p1: &Parametrization,
    p2: &Parametrization,
) -> TcResult<Parametrization> {
    if !is_prefix(&base.sig, &p1.sig) || !is_prefix(&base.sig, &p2.sig) {
        return Err(Diag::new(
            "MERGE-PREFIX",
            "the base signature is not a literal prefix of both extensions",
        ));
    }
    let base_sorts: BTreeSet<&str> = base.sorts.iter().map(|d| d.sort.name.as_str()).collect();
    let s1: BTreeSet<&str> = p1.sorts.iter().map(|d| d.sort.name.as_str()).collect();
    let s2: BTreeSet<&str> = p2.sorts.iter().map(|d| d.sort.name.as_str()).collect();
    if !base_sorts.is_subset(&s1) || !base_sorts.is_subset(&s2) {
        return Err(Diag::new(
            "MERGE-SORT",
            "both extensions must contain every sort of the base",
        ));
    }
    let shared: BTreeSet<&str> = s1.intersection(&s2).copied().collect();
    if shared != base_sorts {
        let extra: Vec<&str> = shared.difference(&base_sorts).copied().collect();
        return Err(Diag::new(
            "MERGE-SORT",
            format!("extensions share sorts beyond the base: {}", extra.join(", ")),
        ));
    }

    let mut sorts = p2.sorts.clone();
    for d in &p1.sorts {
        if !sorts.iter().any(|e| e.sort == d.sort) {
            sorts.push(d.clone());
        }
    }
    let mut entries = p2.sig.entries.clone();
    entries.extend(p1.sig.entries[base.sig.entries.len()..].iter().cloned());
    let merged = Parametrization { sorts, sig: Signature::new(entries) };

    check_signature(&merged)
        .map_err(|e| Diag::new("MERGE-CHECK", format!("combined signature rejected: {}", e)))?;
    is_proper_extension(p1, &merged)
        .map_err(|e| Diag::new("MERGE-CHECK", format!("result does not extend the first input: {}", e)))?;
    is_proper_extension(p2, &merged)
        .map_err(|e| Diag::new("MERGE-CHECK", format!("result does not extend the second input: {}", e)))?;
    Ok(merged)
}
