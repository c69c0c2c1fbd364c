//! Diagnostics with stable clause tags.
//!
//! Every rejection the kernel produces carries a tag naming the violated
//! clause of the system's definitions; `explain` turns a tag back into the
//! statement of that clause. The frontend's `explain` subcommand is a thin
//! wrapper over this table.

use std::fmt;

/// A single kernel diagnostic: a stable clause tag plus a human-readable
/// message describing the concrete violation.
#[derive(Clone, PartialEq, Eq)]
pub struct Diag {
    pub tag: &'static str,
    pub message: String,
}

impl Diag {
    pub fn new(tag: &'static str, message: impl Into<String>) -> Diag {
        Diag { tag, message: message.into() }
    }
}

impl fmt::Display for Diag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.tag, self.message)
    }
}

impl fmt::Debug for Diag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::error::Error for Diag {}

/// Result type used throughout the kernel.
pub type TcResult<T> = Result<T, Diag>;

/// All clause tags with their explanations, in display order.
pub const EXPLANATIONS: &[(&str, &str)] = &[
    ("FUEL", "Reduction exhausted its head-step budget. Well-typed terms terminate, so this \
      usually signals an ill-typed input or a budget set too low (see --fuel)."),
    ("SYNTAX", "The input could not be parsed; the message carries line and column."),
    ("NAME", "A surface-level name does not resolve to a binder, definition, sort or constant."),
    ("ARITY", "A constant must be applied to exactly its declared number of arguments \
      (parameters, then recursive arguments, then for active constants the scrutinee)."),
    ("TY-VAR", "Variable rule: a de Bruijn index must be bound by the ambient context."),
    ("TY-FUN", "Application rule: the head of an application must have a Pi type."),
    ("TY-SORT", "Judgments are sort-indexed: a term whose type lives in sort s cannot be used \
      where a type of a different sort is expected; universes are equal only at equal sorts."),
    ("TY-MISMATCH", "Conversion rule: the inferred type is not convertible to the expected type."),
    ("TY-ARITY", "A substitution must have exactly one term per telescope entry."),
    ("TY-NOT-TYPE", "A term used as a type must have a universe as its type."),
    ("TY-CONST", "Constant rules: a constant must be declared in the signature, with the kind \
      (inert or active) matching its use."),
    ("TY-UNIV", "Universe rule: the sort of a universe must be declared in the parametrization."),
    ("PAT-TYPE", "Pattern typing: metavariables must match their declared types in the linear \
      context, a recursive metavariable's parameter substitution must target the head \
      constant's parameters, and pattern arguments must fit the constructor's telescope."),
    ("PAT-HEAD", "A pattern head must be an inert constant (a constructor or builder) or Pi."),
    ("REW-1", "Valid rule, premise (i): the renaming must be a well-typed substitution from the \
      non-linear context to the linear context, made of variables only."),
    ("REW-2", "Valid rule, premise (ii): the parameter renaming must be a well-typed \
      substitution from the linear context to the head constant's parameters."),
    ("REW-3", "Valid rule, premise (iii): the pattern must be well-typed in the linear context, \
      and its type, transported along the renaming, must be convertible to the head \
      constant's domain instantiated at the parameter renaming."),
    ("REW-4", "Valid rule, premise (iv): the right-hand side must check, in the non-linear \
      context extended with the recursive-occurrence telescope, against the head constant's \
      codomain instantiated at the parameter renaming and the erased pattern."),
    ("LIN-A", "Linearizability (a): every variable of the linear context must occur exactly \
      once in the parameter renaming together with the erased pattern."),
    ("LIN-B", "Linearizability (b): a rule whose head constant is defined on a universe must be \
      linear (the two contexts coincide and the renaming is the identity)."),
    ("LIN-INV", "Linearizability (b'): unifying the pattern's codomain indices with the domain \
      indices must make the renaming invertible; the inverse composed with the renaming must \
      be the identity on the non-linear context syntactically, and the identity on the linear \
      context modulo the unifier."),
    ("WF-POS-1", "Well-formed positive type, clause 1: no active constant defined on the \
      universe of the new type's sort may already be in the signature."),
    ("WF-POS-2", "Well-formed positive type, clause 2: the type constant's parameters must form \
      a well-formed context and its recursive-argument telescope must be empty."),
    ("WF-POS-3", "Well-formed positive type, clause 3: each constructor must have well-formed \
      parameters, recursive arguments strictly of the shape K(args) with args targeting K's \
      parameters, and a codomain K(indices) with indices targeting K's parameters."),
    ("WF-NEG-1", "Well-formed negative type, clause 1: no active constant defined on the \
      universe of the new type's sort may already be in the signature."),
    ("WF-NEG-2", "Well-formed negative type, clause 2: the type constant's parameters must form \
      a well-formed context and its recursive-argument telescope must be empty."),
    ("WF-NEG-3", "Well-formed negative type, clause 3: observations are active constants \
      sharing the type's parameters, with the type itself (at identity parameters) as domain, \
      and a codomain well-formed in the parameters extended by the earlier observations' \
      results."),
    ("WF-NEG-4", "Well-formed negative type, clause 4: if the type's sort is isolated, every \
      observation must land in an isolated sort."),
    ("WF-ELIM-DOM", "An eliminator's domain must be a universe or a positive type already in \
      the signature."),
    ("WF-ELIM-1", "Well-formed eliminator, clause 1: if the domain's sort is isolated the \
      eliminator must land in an isolated sort; otherwise it must satisfy progress, reacting \
      to Pi and every type constant of the sort (universe domain) or to every constructor \
      (positive-type domain)."),
    ("WF-ELIM-2", "Well-formed eliminator, clause 2: parameters, domain and codomain must be \
      well-formed."),
    ("WF-ELIM-3", "Well-formed eliminator, clause 3: the rules must be deterministic, have the \
      eliminator as head symbol, and each must be a valid rule."),
    ("WF-BUILD-DOM", "A builder's codomain must be a negative type already in the signature."),
    ("WF-BUILD-1", "Well-formed builder, clause 1: the builder must satisfy progress (every \
      observation of its type reacts to it) or belong to an isolated sort, and its parameters, \
      recursive arguments and codomain must be well-formed."),
    ("WF-BUILD-2", "Well-formed builder, clause 2: the rules must be deterministic, have the \
      builder as the head constant of their patterns, an observation of the type as head \
      symbol, and each must be a valid rule."),
    ("WF-DET", "Determinism: at most one rule per head symbol and pattern head constant."),
    ("WF-SIG-ISO", "Isolation invariant: an active constant whose domain involves an isolated \
      sort must land in an isolated sort; information never flows from an isolated sort into \
      the primordial one."),
    ("WF-SIG-DUP", "Constant names are unique within a signature."),
    ("WF-SIG-ORDER", "Signature entries may reference earlier entries only."),
    ("WF-SIG-SORT", "The sort table must contain exactly one primordial sort, never isolated, \
      and sort names must be unique; every sort mentioned must be declared."),
    ("WF-SINGLETON", "Singleton elimination: an inductive in the proposition sort may be \
      eliminated into primordial-sort motives only if it has at most one constructor whose \
      non-parameter arguments all live in the proposition sort."),
    ("CONV-ETA-CONFLICT", "Record eta is only available for negative types whose builders \
      carry exactly the canonical projection rules; other rules conflict with the \
      observation-wise comparison."),
    ("EXT-SORTS", "Proper extension: the extended parametrization must contain every sort of \
      the base."),
    ("EXT-ENTRY", "Proper extension: every signature entry of the base must occur, with \
      identical content, in the extension."),
    ("EXT-ISOLATION", "Proper extension: isolation flags of base sorts must be preserved."),
    ("EXT-UNIV-ELIM", "Proper extension: an active constant of the extension defined on a \
      universe must either be in the base or live on a sort the base does not know."),
    ("MERGE-SORT", "Combining parametrizations requires the two extensions to share exactly \
      the base's sorts."),
    ("MERGE-PREFIX", "Combining parametrizations requires the base signature to be literally a \
      prefix of each extension's signature."),
    ("MERGE-CHECK", "The combined signature is re-checked from scratch; this diagnostic \
      reports that the check failed."),
];

/// Looks up the explanation for a clause tag.
pub fn explain(tag: &str) -> Option<&'static str> {
    EXPLANATIONS
        .iter()
        .find(|(t, _)| *t == tag)
        .map(|(_, text)| *text)
}
