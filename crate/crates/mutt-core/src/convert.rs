//! Algorithmic conversion.
//!
//! Conversion is type-directed at the top: terms at an irrelevant sort are
//! equal outright, terms at a Pi type are compared by eta-expansion, terms
//! at a negative record type can be compared observation-wise when record
//! eta is enabled. Otherwise both sides are weak-head normalized and
//! compared structurally, with neutral spines compared pointwise while
//! reconstructing their common type.

use std::collections::BTreeSet;

use crate::diag::{Diag, TcResult};
use crate::sig::{Role, SignatureEntry};
use crate::syntax::{
    ctx_lookup, shift, subst_apply, subst_one, Annot, Context, CtxEntry, Sort, Term,
};
use crate::typing::Env;

/// Knobs for the conversion checker.
#[derive(Clone, Debug, Default)]
pub struct ConversionOptions {
    /// Observation-wise comparison at negative record types.
    pub eta_records: bool,
    /// Sorts whose terms are all convertible (definitional proof
    /// irrelevance). The primordial sort can never be irrelevant.
    pub irrelevant_sorts: BTreeSet<String>,
    /// Record a trace justifying every positive answer.
    pub trace: bool,
}

impl ConversionOptions {
    pub fn validate(&self) -> TcResult<()> {
        if self.irrelevant_sorts.contains("Type") {
            return Err(Diag::new(
                "WF-SIG-SORT",
                "the primordial sort cannot be irrelevant",
            ));
        }
        Ok(())
    }
}

/// Whether observation-wise eta is admissible for the negative type `k`:
/// every builder of the type must carry exactly the canonical projection
/// rules (one per observation, each right-hand side a plain variable).
fn eta_admissible(env: &Env, k: &str, n_obs: usize) -> bool {
    for entry in &env.sig().entries {
        if let SignatureEntry::Builder { decl, rules } = entry {
            let builds_k = matches!(&decl.cod, Term::Inert(kid, _) if kid.name == k);
            if !builds_k {
                continue;
            }
            if rules.len() != n_obs || !rules.iter().all(|r| matches!(r.rhs, Term::Var(_))) {
                return false;
            }
        }
    }
    true
}

/// Type-directed conversion of `t` and `u` at type `ty`, whose classifying
/// sort is `sort`.
pub fn conv_term(
    env: &Env,
    ctx: &Context,
    t: &Term,
    u: &Term,
    ty: &Term,
    sort: &Sort,
) -> TcResult<bool> {
    if env.opts.irrelevant_sorts.contains(&sort.name) {
        env.trace(|| format!("irrelevance at sort {}: both sides equal", sort));
        return Ok(true);
    }
    // Fast path; also keeps record eta from looping through the scrutinee
    // comparison of syntactically identical neutrals.
    if crate::syntax::alpha_eq(t, u) {
        return Ok(true);
    }
    let tyw = env.whnf(ty)?;
    match &tyw {
        Term::Pi(annot, cod) => {
            env.trace(|| "eta at Pi type: comparing applications to a fresh variable".to_owned());
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(annot.ty.clone(), annot.sort.clone(), annot.level));
            let t2 = Term::app(shift(t, 1, 0), Term::Var(0));
            let u2 = Term::app(shift(u, 1, 0), Term::Var(0));
            conv_term(env, &ctx2, &t2, &u2, cod, sort)
        }
        Term::Inert(kid, args) => {
            let is_neg_record = matches!(
                env.sig().lookup(&kid.name),
                Some(r) if matches!(r.role, Role::NegType { .. })
            );
            if env.opts.eta_records && is_neg_record {
                let obs: Vec<_> = match env.sig().lookup(&kid.name) {
                    Some(crate::sig::ConstRef { role: Role::NegType { obs }, .. }) => {
                        obs.to_vec()
                    }
                    _ => unreachable!(),
                };
                if !eta_admissible(env, &kid.name, obs.len()) {
                    return Err(Diag::new(
                        "CONV-ETA-CONFLICT",
                        format!(
                            "record eta requested at {} whose builders have non-projection rules",
                            kid.name
                        ),
                    ));
                }
                env.trace(|| format!("record eta at {}: comparing observation-wise", kid.name));
                for d in &obs {
                    let lhs = Term::active(d.id.clone(), args.clone(), t.clone());
                    let rhs = Term::active(d.id.clone(), args.clone(), u.clone());
                    let ty_i = env.sig().active_result_type(&d.id, args, t)?;
                    if !conv_term(env, ctx, &lhs, &rhs, &ty_i, &d.codsort)? {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
            let tw = env.whnf(t)?;
            let uw = env.whnf(u)?;
            conv_structural(env, ctx, &tw, &uw)
        }
        _ => {
            let tw = env.whnf(t)?;
            let uw = env.whnf(u)?;
            conv_structural(env, ctx, &tw, &uw)
        }
    }
}

/// Conversion of two types (Russell-style: types are terms, but the
/// comparison is structural after weak-head normalization).
pub fn conv_type(env: &Env, ctx: &Context, a: &Term, b: &Term) -> TcResult<bool> {
    let aw = env.whnf(a)?;
    let bw = env.whnf(b)?;
    conv_structural(env, ctx, &aw, &bw)
}

fn is_neutral_head(t: &Term) -> bool {
    matches!(t, Term::Var(_) | Term::App(..) | Term::Active(..))
}

/// Structural comparison of two weak-head normal terms.
fn conv_structural(env: &Env, ctx: &Context, t: &Term, u: &Term) -> TcResult<bool> {
    match (t, u) {
        (Term::Univ(s1, l1), Term::Univ(s2, l2)) => Ok(s1 == s2 && l1 == l2),
        (Term::Pi(a1, c1), Term::Pi(a2, c2)) => {
            if a1.sort != a2.sort || a1.level != a2.level {
                return Ok(false);
            }
            if !conv_type(env, ctx, &a1.ty, &a2.ty)? {
                return Ok(false);
            }
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(a1.ty.clone(), a1.sort.clone(), a1.level));
            conv_type(env, &ctx2, c1, c2)
        }
        (Term::Lambda(a1, b1), Term::Lambda(_, b2)) => {
            // Binder annotations do not participate; only the bodies do.
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(a1.ty.clone(), a1.sort.clone(), a1.level));
            let b1w = env.whnf(b1)?;
            let b2w = env.whnf(b2)?;
            conv_structural(env, &ctx2, &b1w, &b2w)
        }
        (Term::Lambda(a1, b1), n) if is_neutral_head(n) => {
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(a1.ty.clone(), a1.sort.clone(), a1.level));
            let b1w = env.whnf(b1)?;
            let n2 = env.whnf(&Term::app(shift(n, 1, 0), Term::Var(0)))?;
            conv_structural(env, &ctx2, &b1w, &n2)
        }
        (n, Term::Lambda(a2, b2)) if is_neutral_head(n) => {
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(a2.ty.clone(), a2.sort.clone(), a2.level));
            let n1 = env.whnf(&Term::app(shift(n, 1, 0), Term::Var(0)))?;
            let b2w = env.whnf(b2)?;
            conv_structural(env, &ctx2, &n1, &b2w)
        }
        (Term::Inert(c1, args1), Term::Inert(c2, args2)) => {
            if c1 != c2 || args1.len() != args2.len() {
                return Ok(false);
            }
            let decl = env.sig().lookup_id(c1)?.decl.clone();
            let tele = match &decl.dom {
                crate::sig::Dom::Tele(_) => decl.full_tele(),
                _ => decl.params.clone(),
            };
            if tele.len() != args1.len() {
                return Ok(false);
            }
            for k in 0..args1.len() {
                let ty_k = subst_apply(&tele[k].ty, &args1[..k].to_vec());
                if !conv_term(env, ctx, &args1[k], &args2[k], &ty_k, &tele[k].sort)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ if is_neutral_head(t) && is_neutral_head(u) => {
            Ok(conv_neutral(env, ctx, t, u)?.is_some())
        }
        _ => Ok(false),
    }
}

/// Compares two neutral spines, reconstructing and returning their common
/// type on success.
pub fn conv_neutral(env: &Env, ctx: &Context, t: &Term, u: &Term) -> TcResult<Option<Term>> {
    match (t, u) {
        (Term::Var(i), Term::Var(j)) => {
            if i != j {
                return Ok(None);
            }
            match ctx_lookup(ctx, *i) {
                Some(e) => Ok(Some(e.ty)),
                None => Err(Diag::new("TY-VAR", format!("unbound variable {}", i))),
            }
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            let fw1 = env.whnf(f1)?;
            let fw2 = env.whnf(f2)?;
            let head_ty = match conv_neutral(env, ctx, &fw1, &fw2)? {
                Some(ty) => ty,
                None => return Ok(None),
            };
            match env.whnf(&head_ty)? {
                Term::Pi(annot, cod) => {
                    if conv_term(env, ctx, a1, a2, &annot.ty, &annot.sort)? {
                        Ok(Some(subst_one(&cod, a1)))
                    } else {
                        Ok(None)
                    }
                }
                _ => Ok(None),
            }
        }
        (Term::Active(d1, p1, s1), Term::Active(d2, p2, s2)) => {
            if d1 != d2 || p1.len() != p2.len() {
                return Ok(None);
            }
            let decl = env.sig().lookup_id(d1)?.decl.clone();
            if decl.params.len() != p1.len() {
                return Ok(None);
            }
            for k in 0..p1.len() {
                let ty_k = subst_apply(&decl.params[k].ty, &p1[..k].to_vec());
                if !conv_term(env, ctx, &p1[k], &p2[k], &ty_k, &decl.params[k].sort)? {
                    return Ok(None);
                }
            }
            let scrut_ty = subst_apply(&decl.dom_type(), p1);
            let (ssort, _) = env.sig().scrut_sort_level(&decl)?;
            if !conv_term(env, ctx, s1, s2, &scrut_ty, &ssort)? {
                return Ok(None);
            }
            Ok(Some(env.sig().active_result_type(d1, p1, s1)?))
        }
        _ => Ok(None),
    }
}

/// Converts a context entry into an annotation; shared by callers that
/// synthesize binders.
pub fn entry_annot(e: &CtxEntry) -> Annot {
    Annot::new(e.ty.clone(), e.sort.clone(), e.level)
}
