//! Weak-head and deep normalization.
//!
//! Reduction is head-directed: beta steps, and active constants firing the
//! unique rule matching their scrutinee's head. Parameters of active terms
//! are never reduced by head reduction; the scrutinee is reduced to
//! weak-head normal form first. All reduction is fuel-bounded and reports
//! exhaustion as a `FUEL` diagnostic, distinct from a term merely being
//! neutral.

use crate::diag::{Diag, TcResult};
use crate::sig::{ConstantDecl, MetaVar, PatKey, Pattern, RewriteRule, Signature};
use crate::syntax::{
    ctx_lookup, shift, subst_apply, subst_one, Annot, ConstantId, Context, Level, Substitution,
    Term,
};

/// Default head-step budget.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// A mutable step budget shared across one reduction or conversion task.
#[derive(Clone, Debug)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Fuel {
        Fuel { remaining: budget }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn spend(&mut self) -> TcResult<()> {
        if self.remaining == 0 {
            return Err(Diag::new("FUEL", "reduction step budget exhausted"));
        }
        self.remaining -= 1;
        Ok(())
    }
}

/// Canonical head shapes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HeadKind {
    Lambda,
    Pi,
    Univ,
    InertConst,
}

/// Shape of a term with respect to head reduction: canonical (a value
/// head), neutral (stuck, no rule can ever fire at the head), or a redex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Classification {
    Canonical(HeadKind),
    Neutral,
    Redex,
}

/// The pattern key a canonical scrutinee offers, if any.
fn scrut_key(t: &Term) -> Option<PatKey> {
    match t {
        Term::Inert(c, _) => Some(PatKey::Const(c.name.clone())),
        Term::Pi(..) => Some(PatKey::Pi),
        _ => None,
    }
}

/// Classifies a term without reducing it.
pub fn classify(sig: &Signature, t: &Term) -> Classification {
    match t {
        Term::Var(_) => Classification::Neutral,
        Term::Lambda(..) => Classification::Canonical(HeadKind::Lambda),
        Term::Pi(..) => Classification::Canonical(HeadKind::Pi),
        Term::Univ(..) => Classification::Canonical(HeadKind::Univ),
        Term::Inert(..) => Classification::Canonical(HeadKind::InertConst),
        Term::App(f, _) => match classify(sig, f) {
            Classification::Redex => Classification::Redex,
            Classification::Canonical(HeadKind::Lambda) => Classification::Redex,
            _ => Classification::Neutral,
        },
        Term::Active(d, _, scrut) => match classify(sig, scrut) {
            Classification::Redex => Classification::Redex,
            Classification::Neutral => Classification::Neutral,
            Classification::Canonical(_) => match scrut_key(scrut) {
                Some(key) if sig.reacts(&d.name, &key) => Classification::Redex,
                _ => Classification::Neutral,
            },
        },
    }
}

/// The level of a pattern metavariable whose declared type in the linear
/// context is a universe; used to annotate binders synthesized by erasure.
fn univ_level_of(dlin: &Context, idx: usize) -> Level {
    match ctx_lookup(dlin, idx).map(|e| e.ty) {
        Some(Term::Univ(_, l)) => l,
        _ => Level(0),
    }
}

/// Erases a pattern to a term over the rule's linear context: metavariables
/// become their variables (recursive substitutions are dropped), and a Pi
/// pattern becomes a Pi whose codomain applies the codomain metavariable to
/// the bound variable.
pub fn erase_pattern(pat: &Pattern, dlin: &Context) -> Term {
    match pat {
        Pattern::Head(c, args) => Term::Inert(
            c.clone(),
            args.iter().map(|m| Term::Var(m.idx())).collect(),
        ),
        Pattern::Pi(s, q1, q2) => Term::pi(
            Annot::new(Term::Var(q1.idx()), s.clone(), univ_level_of(dlin, q1.idx())),
            Term::app(Term::Var(q2.idx() + 1), Term::Var(0)),
        ),
    }
}

fn shift_sub(sub: &Substitution, amount: i64) -> Substitution {
    sub.iter().map(|t| shift(t, amount, 0)).collect()
}

/// The recursive-occurrence telescope of a pattern: one entry per recursive
/// metavariable, typed at the head constant's codomain instantiated at the
/// occurrence. Entries are scoped over the linear context and do not
/// reference one another.
pub fn occ_rec(
    sig: &Signature,
    decl: &ConstantDecl,
    pat: &Pattern,
    dlin: &Context,
) -> TcResult<Context> {
    let mut out = Context::new();
    let plain = |out: &mut Context, m: &MetaVar| -> TcResult<()> {
        if let MetaVar::Rec { idx, sub, .. } = m {
            let ty = sig.active_result_type(&decl.id, sub, &Term::Var(*idx))?;
            out.push(crate::syntax::CtxEntry::new(ty, decl.codsort.clone(), decl.codlevel));
        }
        Ok(())
    };
    match pat {
        Pattern::Head(_, args) => {
            for m in args {
                plain(&mut out, m)?;
            }
        }
        Pattern::Pi(s, q1, q2) => {
            plain(&mut out, q1)?;
            if let MetaVar::Rec { idx, sub, .. } = q2 {
                let dom_level = univ_level_of(dlin, q1.idx());
                let annot = Annot::new(Term::Var(q1.idx()), s.clone(), dom_level);
                let scrut = Term::app(Term::Var(idx + 1), Term::Var(0));
                let cod = sig.active_result_type(&decl.id, &shift_sub(sub, 1), &scrut)?;
                out.push(crate::syntax::CtxEntry::new(
                    Term::pi(annot, cod),
                    decl.codsort.clone(),
                    dom_level.max(decl.codlevel),
                ));
            }
        }
    }
    Ok(out)
}

/// The substitution feeding the recursive-occurrence telescope: each
/// recursive metavariable becomes the head constant applied at the
/// occurrence. Terms are scoped over the linear context. When `pi_annot`
/// is given (the actual annotation of a matched Pi scrutinee), the
/// synthesized binder uses it instead of the pattern's declared sort.
pub fn occ_rec_sub(
    head: &ConstantId,
    pat: &Pattern,
    dlin: &Context,
    pi_annot: Option<&Annot>,
) -> Substitution {
    let mut out = Substitution::new();
    let plain = |out: &mut Substitution, m: &MetaVar| {
        if let MetaVar::Rec { idx, sub, .. } = m {
            out.push(Term::active(head.clone(), sub.clone(), Term::Var(*idx)));
        }
    };
    match pat {
        Pattern::Head(_, args) => {
            for m in args {
                plain(&mut out, m);
            }
        }
        Pattern::Pi(s, q1, q2) => {
            plain(&mut out, q1);
            if let MetaVar::Rec { idx, sub, .. } = q2 {
                let (sort, level) = match pi_annot {
                    Some(a) => (a.sort.clone(), a.level),
                    None => (s.clone(), univ_level_of(dlin, q1.idx())),
                };
                let annot = Annot::new(Term::Var(q1.idx()), sort, level);
                let scrut = Term::app(Term::Var(idx + 1), Term::Var(0));
                out.push(Term::lam(
                    annot,
                    Term::active(head.clone(), shift_sub(sub, 1), scrut),
                ));
            }
        }
    }
    out
}

/// Matches a rule against parameters and a weak-head-normal scrutinee,
/// returning the substitution binding every linear-context variable
/// (telescope order). Linearizability guarantees totality of the bindings.
pub fn match_pattern(
    rule: &RewriteRule,
    params: &[Term],
    scrut: &Term,
) -> Option<Substitution> {
    let n_lin = rule.delta_lin.len();
    let mut bindings: Vec<Option<Term>> = vec![None; n_lin];
    let bind = |bindings: &mut Vec<Option<Term>>, idx: usize, t: Term| -> bool {
        if idx >= n_lin {
            return false;
        }
        bindings[n_lin - 1 - idx] = Some(t);
        true
    };
    if rule.param_vars.len() != params.len() {
        return None;
    }
    for (&x, p) in rule.param_vars.iter().zip(params.iter()) {
        if !bind(&mut bindings, x, p.clone()) {
            return None;
        }
    }
    match (&rule.pat, scrut) {
        (Pattern::Head(c, args), Term::Inert(c2, scrut_args)) => {
            if c.name != c2.name || args.len() != scrut_args.len() {
                return None;
            }
            for (m, a) in args.iter().zip(scrut_args.iter()) {
                if !bind(&mut bindings, m.idx(), a.clone()) {
                    return None;
                }
            }
        }
        (Pattern::Pi(_, q1, q2), Term::Pi(annot, cod)) => {
            // Matching is sort-schematic: any Pi matches, and the
            // scrutinee's own annotation is used for the bindings.
            if !bind(&mut bindings, q1.idx(), annot.ty.clone()) {
                return None;
            }
            let eta = Term::lam((**annot).clone(), (**cod).clone());
            if !bind(&mut bindings, q2.idx(), eta) {
                return None;
            }
        }
        _ => return None,
    }
    bindings.into_iter().collect()
}

/// The inverse of the rule's renaming, telescope order: a linear-context
/// index for each non-linear-context entry. Uses the supplied witness, or
/// the canonical preimage.
fn rule_tau(rule: &RewriteRule) -> Option<Vec<usize>> {
    if let Some(t) = &rule.tau {
        return Some(t.clone());
    }
    let n = rule.delta.len();
    let n_lin = rule.delta_lin.len();
    let mut tau = Vec::with_capacity(n);
    for k in 0..n {
        let v = n - 1 - k;
        let j = rule.renaming.iter().position(|&img| img == v)?;
        tau.push(n_lin - 1 - j);
    }
    Some(tau)
}

/// Attempts a single rule firing of `head` on a weak-head-normal scrutinee.
pub fn fire(
    sig: &Signature,
    head: &ConstantId,
    params: &[Term],
    scrut: &Term,
) -> TcResult<Option<Term>> {
    let key = match scrut_key(scrut) {
        Some(k) => k,
        None => return Ok(None),
    };
    let rule = match sig.rule_for(&head.name, &key) {
        Some(r) => r,
        None => return Ok(None),
    };
    let sigma = match match_pattern(rule, params, scrut) {
        Some(s) => s,
        None => return Ok(None),
    };
    let tau = match rule_tau(rule) {
        Some(t) => t,
        None => return Ok(None),
    };
    let n_lin = rule.delta_lin.len();
    // The right-hand side lives over the non-linear context extended by the
    // recursive occurrences: instantiate the former through the inverse
    // renaming, the latter through the occurrence substitution.
    let mut full: Substitution = tau
        .iter()
        .map(|&w| sigma[n_lin - 1 - w].clone())
        .collect();
    let pi_annot = match scrut {
        Term::Pi(a, _) => Some(&**a),
        _ => None,
    };
    for t in occ_rec_sub(&rule.head, &rule.pat, &rule.delta_lin, pi_annot) {
        full.push(subst_apply(&t, &sigma));
    }
    Ok(Some(subst_apply(&rule.rhs, &full)))
}

/// Weak-head normalization.
pub fn whnf(sig: &Signature, t: &Term, fuel: &mut Fuel) -> TcResult<Term> {
    let mut t = t.clone();
    loop {
        match t {
            Term::App(f, a) => {
                let fw = whnf(sig, &f, fuel)?;
                match fw {
                    Term::Lambda(_, body) => {
                        fuel.spend()?;
                        t = subst_one(&body, &a);
                    }
                    _ => return Ok(Term::App(Box::new(fw), a)),
                }
            }
            Term::Active(d, params, scrut) => {
                let sw = whnf(sig, &scrut, fuel)?;
                match fire(sig, &d, &params, &sw)? {
                    Some(next) => {
                        fuel.spend()?;
                        t = next;
                    }
                    None => return Ok(Term::active(d, params, sw)),
                }
            }
            other => return Ok(other),
        }
    }
}

/// Full normalization: weak-head reduce, then recurse into every subterm,
/// binder annotations included.
pub fn deep_normalize(sig: &Signature, t: &Term, fuel: &mut Fuel) -> TcResult<Term> {
    let t = whnf(sig, t, fuel)?;
    let norm_annot = |a: &Annot, sig: &Signature, fuel: &mut Fuel| -> TcResult<Annot> {
        Ok(Annot::new(deep_normalize(sig, &a.ty, fuel)?, a.sort.clone(), a.level))
    };
    match t {
        Term::Var(_) | Term::Univ(..) => Ok(t),
        Term::Lambda(a, b) => Ok(Term::lam(
            norm_annot(&a, sig, fuel)?,
            deep_normalize(sig, &b, fuel)?,
        )),
        Term::Pi(a, b) => Ok(Term::pi(
            norm_annot(&a, sig, fuel)?,
            deep_normalize(sig, &b, fuel)?,
        )),
        Term::App(f, a) => Ok(Term::app(
            deep_normalize(sig, &f, fuel)?,
            deep_normalize(sig, &a, fuel)?,
        )),
        Term::Inert(c, args) => Ok(Term::Inert(
            c,
            args.iter()
                .map(|x| deep_normalize(sig, x, fuel))
                .collect::<TcResult<Vec<_>>>()?,
        )),
        Term::Active(d, params, scrut) => Ok(Term::active(
            d,
            params
                .iter()
                .map(|x| deep_normalize(sig, x, fuel))
                .collect::<TcResult<Vec<_>>>()?,
            deep_normalize(sig, &scrut, fuel)?,
        )),
    }
}

/// Convenience: whnf with a fresh default budget.
pub fn whnf_default(sig: &Signature, t: &Term) -> TcResult<Term> {
    whnf(sig, t, &mut Fuel::new(DEFAULT_FUEL))
}

/// Convenience: deep normalization with a fresh default budget.
pub fn normalize_default(sig: &Signature, t: &Term) -> TcResult<Term> {
    deep_normalize(sig, t, &mut Fuel::new(DEFAULT_FUEL))
}
