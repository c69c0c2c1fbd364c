//! Bidirectional type checking.
//!
//! `infer` synthesizes types; `check` pushes an expected type, switching to
//! checking mode for lambdas against Pi types. Judgments are sort-indexed:
//! `check` receives the classifying sort of the expected type and rejects a
//! term whose type lives in a different sort. The module also validates
//! substitutions, contexts, patterns and rewrite rules against the
//! definitions the signature checker relies on.

use std::cell::RefCell;

use crate::convert::{conv_type, ConversionOptions};
use crate::diag::{Diag, TcResult};
use crate::reduce::{self, Fuel};
use crate::sig::{
    check_linearizable, ConstantDecl, Dom, MetaVar, Parametrization, Pattern, RewriteRule, Role,
    Signature,
};
use crate::syntax::{
    ctx_lookup, shift, subst_apply, subst_compose, Annot, ConstKind, Context, CtxEntry, Level,
    Sort, Substitution, Term,
};

/// A checking environment: the parametrization under scrutiny, conversion
/// options, a shared fuel budget and an optional conversion trace.
pub struct Env<'a> {
    pub prm: &'a Parametrization,
    pub opts: ConversionOptions,
    fuel: RefCell<Fuel>,
    trace_log: RefCell<Vec<String>>,
}

impl<'a> Env<'a> {
    pub fn new(prm: &'a Parametrization) -> Env<'a> {
        Env::with_opts(prm, ConversionOptions::default(), reduce::DEFAULT_FUEL)
    }

    pub fn with_opts(prm: &'a Parametrization, opts: ConversionOptions, fuel: u64) -> Env<'a> {
        Env {
            prm,
            opts,
            fuel: RefCell::new(Fuel::new(fuel)),
            trace_log: RefCell::new(Vec::new()),
        }
    }

    pub fn sig(&self) -> &Signature {
        &self.prm.sig
    }

    pub fn whnf(&self, t: &Term) -> TcResult<Term> {
        reduce::whnf(self.sig(), t, &mut self.fuel.borrow_mut())
    }

    pub fn normalize(&self, t: &Term) -> TcResult<Term> {
        reduce::deep_normalize(self.sig(), t, &mut self.fuel.borrow_mut())
    }

    pub fn fuel_remaining(&self) -> u64 {
        self.fuel.borrow().remaining()
    }

    /// Records a trace line when tracing is enabled.
    pub fn trace(&self, line: impl FnOnce() -> String) {
        if self.opts.trace {
            self.trace_log.borrow_mut().push(line());
        }
    }

    /// Drains the recorded trace.
    pub fn take_trace(&self) -> Vec<String> {
        std::mem::take(&mut self.trace_log.borrow_mut())
    }
}

/// The outcome of inference: the type, its classifying sort, and a level.
/// The level is the universe's own index when the type weak-head reduces to
/// a universe, and the classifying level otherwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypingResult {
    pub ty: Term,
    pub sort: Sort,
    pub level: Level,
}

/// The classifying sort and level of a type: `(Type, j)` when it weak-head
/// reduces to `Univ s j`, otherwise the `(s, l)` with the type in
/// `Univ s l`.
pub fn sort_level_of_type(env: &Env, ctx: &Context, ty: &Term) -> TcResult<(Sort, Level)> {
    match env.whnf(ty)? {
        Term::Univ(_, j) => Ok((Sort::typ(), j)),
        _ => {
            let ty_of_ty = infer_ty(env, ctx, ty)?;
            match env.whnf(&ty_of_ty)? {
                Term::Univ(s, l) => Ok((s, l)),
                _ => Err(Diag::new(
                    "TY-NOT-TYPE",
                    format!("{:?} is not a type", ty),
                )),
            }
        }
    }
}

/// Infers the type of `t` together with sort and level bookkeeping.
pub fn infer(env: &Env, ctx: &Context, t: &Term) -> TcResult<TypingResult> {
    let ty = infer_ty(env, ctx, t)?;
    let (sort, level) = sort_level_of_type(env, ctx, &ty)?;
    Ok(TypingResult { ty, sort, level })
}

/// Checks a binder annotation: its type must inhabit the declared universe.
fn check_annot(env: &Env, ctx: &Context, annot: &Annot) -> TcResult<()> {
    check(
        env,
        ctx,
        &annot.ty,
        &Term::Univ(annot.sort.clone(), annot.level),
        &Sort::typ(),
    )
}

/// Infers the type of `t`.
pub fn infer_ty(env: &Env, ctx: &Context, t: &Term) -> TcResult<Term> {
    match t {
        Term::Var(i) => match ctx_lookup(ctx, *i) {
            Some(e) => Ok(e.ty),
            None => Err(Diag::new("TY-VAR", format!("unbound variable {}", i))),
        },
        Term::Univ(s, l) => {
            if !env.prm.has_sort(s) {
                return Err(Diag::new("TY-UNIV", format!("undeclared sort {}", s)));
            }
            Ok(Term::Univ(Sort::typ(), l.succ()))
        }
        Term::Pi(annot, cod) => {
            check_annot(env, ctx, annot)?;
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(annot.ty.clone(), annot.sort.clone(), annot.level));
            let cod_ty = infer_ty(env, &ctx2, cod)?;
            match env.whnf(&cod_ty)? {
                Term::Univ(s2, j) => Ok(Term::Univ(s2, annot.level.max(j))),
                _ => Err(Diag::new(
                    "TY-NOT-TYPE",
                    "Pi codomain is not a type".to_owned(),
                )),
            }
        }
        Term::Lambda(annot, body) => {
            check_annot(env, ctx, annot)?;
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(annot.ty.clone(), annot.sort.clone(), annot.level));
            let body_ty = infer_ty(env, &ctx2, body)?;
            Ok(Term::pi((**annot).clone(), body_ty))
        }
        Term::App(f, a) => {
            let f_ty = infer_ty(env, ctx, f)?;
            match env.whnf(&f_ty)? {
                Term::Pi(annot, cod) => {
                    check(env, ctx, a, &annot.ty, &annot.sort)?;
                    Ok(crate::syntax::subst_one(&cod, a))
                }
                other => Err(Diag::new(
                    "TY-FUN",
                    format!("application head has non-Pi type {:?}", other),
                )),
            }
        }
        Term::Inert(c, args) => {
            if c.kind != ConstKind::Inert {
                return Err(Diag::new(
                    "TY-CONST",
                    format!("{} is not an inert constant", c.name),
                ));
            }
            let r = env.sig().lookup_id(c)?;
            let decl = r.decl.clone();
            match r.role {
                Role::PosType { .. } | Role::NegType { .. } => {
                    check_substitution(env, ctx, args, &decl.params)?;
                    Ok(subst_apply(&decl.cod, args))
                }
                Role::Ctor { .. } | Role::Builder { .. } => {
                    let tele = decl.full_tele();
                    check_substitution(env, ctx, args, &tele)?;
                    let params_part: Substitution = args[..decl.params.len()].to_vec();
                    Ok(subst_apply(&decl.cod, &params_part))
                }
                _ => Err(Diag::new(
                    "TY-CONST",
                    format!("{} cannot be used as an inert constant", c.name),
                )),
            }
        }
        Term::Active(d, params, scrut) => {
            if d.kind != ConstKind::Active {
                return Err(Diag::new(
                    "TY-CONST",
                    format!("{} is not an active constant", d.name),
                ));
            }
            let decl = env.sig().lookup_id(d)?.decl.clone();
            check_substitution(env, ctx, params, &decl.params)?;
            let scrut_ty = subst_apply(&decl.dom_type(), params);
            let (ssort, _) = env.sig().scrut_sort_level(&decl)?;
            check(env, ctx, scrut, &scrut_ty, &ssort)?;
            env.sig().active_result_type(d, params, scrut)
        }
    }
}

/// Checks `t` against `expected`, whose classifying sort is `sort`.
pub fn check(env: &Env, ctx: &Context, t: &Term, expected: &Term, sort: &Sort) -> TcResult<()> {
    if let Term::Lambda(annot, body) = t {
        if let Term::Pi(e_annot, e_cod) = env.whnf(expected)? {
            check_annot(env, ctx, annot)?;
            if annot.sort != e_annot.sort {
                return Err(Diag::new(
                    "TY-SORT",
                    format!(
                        "lambda binds at sort {} where the Pi type binds at {}",
                        annot.sort, e_annot.sort
                    ),
                ));
            }
            if annot.level != e_annot.level || !conv_type(env, ctx, &annot.ty, &e_annot.ty)? {
                return Err(Diag::new(
                    "TY-MISMATCH",
                    "lambda annotation does not match the expected domain".to_owned(),
                ));
            }
            let mut ctx2 = ctx.clone();
            ctx2.push(CtxEntry::new(annot.ty.clone(), annot.sort.clone(), annot.level));
            return check(env, &ctx2, body, &e_cod, sort);
        }
    }
    let ty = infer_ty(env, ctx, t)?;
    let (s, _) = sort_level_of_type(env, ctx, &ty)?;
    if s != *sort {
        return Err(Diag::new(
            "TY-SORT",
            format!("term lives at sort {} but sort {} is required", s, sort),
        ));
    }
    if conv_type(env, ctx, &ty, expected)? {
        return Ok(());
    }
    let tw = env.whnf(&ty)?;
    let ew = env.whnf(expected)?;
    if let (Term::Univ(s1, _), Term::Univ(s2, _)) = (&tw, &ew) {
        if s1 != s2 {
            return Err(Diag::new(
                "TY-SORT",
                format!("universe of sort {} where sort {} is expected", s1, s2),
            ));
        }
    }
    Err(Diag::new(
        "TY-MISMATCH",
        format!("inferred type {:?} is not convertible to expected {:?}", tw, ew),
    ))
}

/// Checks that a context is well-formed: each entry's type inhabits the
/// declared universe over the preceding entries.
pub fn check_context(env: &Env, ctx: &Context) -> TcResult<()> {
    for k in 0..ctx.len() {
        let prefix: Context = ctx[..k].to_vec();
        check(
            env,
            &prefix,
            &ctx[k].ty,
            &Term::Univ(ctx[k].sort.clone(), ctx[k].level),
            &Sort::typ(),
        )?;
    }
    Ok(())
}

/// Checks a substitution against a target telescope: pointwise, each term
/// against the entry's type instantiated at the earlier terms.
pub fn check_substitution(
    env: &Env,
    ctx: &Context,
    sub: &Substitution,
    target: &Context,
) -> TcResult<()> {
    if sub.len() != target.len() {
        return Err(Diag::new(
            "TY-ARITY",
            format!("substitution has {} entries, telescope expects {}", sub.len(), target.len()),
        ));
    }
    for k in 0..sub.len() {
        let expected = subst_apply(&target[k].ty, &sub[..k].to_vec());
        check(env, ctx, &sub[k], &expected, &target[k].sort)?;
    }
    Ok(())
}

/// Checks a rule's pattern and returns its type over the linear context.
///
/// Positional typing is structural; every equational side condition
/// (metavariable types against telescope types, recursive-occurrence
/// substitutions against the head's parameters) is checked after transport
/// along the rule's renaming, in the non-linear context, where conversion
/// is available. On linear rules the renaming is the identity and this
/// degenerates to the plain check.
pub fn check_pattern(env: &Env, decl: &ConstantDecl, rule: &RewriteRule) -> TcResult<Term> {
    let dlin = &rule.delta_lin;
    let ren = rule.renaming_sub();
    let to_delta = |t: &Term| subst_apply(t, &ren);

    let check_meta = |m: &MetaVar, expected: &Term, sort: &Sort| -> TcResult<()> {
        let entry = ctx_lookup(dlin, m.idx()).ok_or_else(|| {
            Diag::new("PAT-TYPE", format!("pattern metavariable {} is unbound", m.name()))
        })?;
        if entry.sort != *sort {
            return Err(Diag::new(
                "PAT-TYPE",
                format!("metavariable {} declared at sort {}, expected {}", m.name(), entry.sort, sort),
            ));
        }
        if !conv_type(env, &rule.delta, &to_delta(&entry.ty), &to_delta(expected))? {
            return Err(Diag::new(
                "PAT-TYPE",
                format!("metavariable {} has the wrong type for its position", m.name()),
            ));
        }
        if let MetaVar::Rec { sub, .. } = m {
            let sub_delta = subst_compose(sub, &ren);
            check_substitution(env, &rule.delta, &sub_delta, &decl.params).map_err(|e| {
                Diag::new(
                    "PAT-TYPE",
                    format!("recursive occurrence of {}: {}", m.name(), e),
                )
            })?;
            let occ_ty = subst_apply(&decl.dom_type(), sub);
            if !conv_type(env, &rule.delta, &to_delta(&entry.ty), &to_delta(&occ_ty))? {
                return Err(Diag::new(
                    "PAT-TYPE",
                    format!(
                        "recursive metavariable {} is not at the head constant's domain",
                        m.name()
                    ),
                ));
            }
        }
        Ok(())
    };

    match &rule.pat {
        Pattern::Head(c, args) => {
            let cref = env.sig().lookup_id(c)?;
            // Eliminators on positive types match constructors, builders
            // feed observations, and universe eliminators match the type
            // constants of their universe.
            if matches!(cref.role, Role::Elim { .. } | Role::Obs { .. }) {
                return Err(Diag::new(
                    "PAT-HEAD",
                    format!("pattern head {} is not an inert constant", c.name),
                ));
            }
            let cdecl = cref.decl.clone();
            let tele = cdecl.full_tele();
            if args.len() != tele.len() {
                return Err(Diag::new(
                    "PAT-TYPE",
                    format!(
                        "pattern for {} has {} arguments, expected {}",
                        c.name,
                        args.len(),
                        tele.len()
                    ),
                ));
            }
            let erased: Substitution = args.iter().map(|m| Term::Var(m.idx())).collect();
            for (k, m) in args.iter().enumerate() {
                let expected = subst_apply(&tele[k].ty, &erased[..k].to_vec());
                check_meta(m, &expected, &tele[k].sort)?;
            }
            let params_part: Substitution = erased[..cdecl.params.len()].to_vec();
            Ok(subst_apply(&cdecl.cod, &params_part))
        }
        Pattern::Pi(s1, q1, q2) => {
            let e1 = ctx_lookup(dlin, q1.idx()).ok_or_else(|| {
                Diag::new("PAT-TYPE", format!("pattern metavariable {} is unbound", q1.name()))
            })?;
            let i = match env.whnf(&e1.ty)? {
                Term::Univ(s, i) if s == *s1 => i,
                other => {
                    return Err(Diag::new(
                        "PAT-TYPE",
                        format!(
                            "Pi pattern domain metavariable must be declared at Univ {}, found {:?}",
                            s1, other
                        ),
                    ));
                }
            };
            let e2 = ctx_lookup(dlin, q2.idx()).ok_or_else(|| {
                Diag::new("PAT-TYPE", format!("pattern metavariable {} is unbound", q2.name()))
            })?;
            let (s2, j) = match env.whnf(&to_delta(&e2.ty))? {
                Term::Pi(annot2, cod2) => {
                    if annot2.sort != *s1
                        || !conv_type(
                            env,
                            &rule.delta,
                            &annot2.ty,
                            &to_delta(&Term::Var(q1.idx())),
                        )?
                    {
                        return Err(Diag::new(
                            "PAT-TYPE",
                            "Pi pattern codomain metavariable must range over the domain"
                                .to_owned(),
                        ));
                    }
                    let mut ctx2 = rule.delta.clone();
                    ctx2.push(CtxEntry::new(
                        annot2.ty.clone(),
                        annot2.sort.clone(),
                        annot2.level,
                    ));
                    match env.whnf(&cod2)? {
                        Term::Univ(s2, j) => (s2, j),
                        _ => {
                            return Err(Diag::new(
                                "PAT-TYPE",
                                "Pi pattern codomain metavariable must land in a universe"
                                    .to_owned(),
                            ));
                        }
                    }
                }
                other => {
                    return Err(Diag::new(
                        "PAT-TYPE",
                        format!(
                            "Pi pattern codomain metavariable must have a Pi type, found {:?}",
                            other
                        ),
                    ));
                }
            };
            // Recursive markers still need their occurrence substitutions
            // validated; positional types already constrained above.
            for m in [q1, q2] {
                if let MetaVar::Rec { sub, .. } = m {
                    let sub_delta = subst_compose(sub, &ren);
                    check_substitution(env, &rule.delta, &sub_delta, &decl.params).map_err(
                        |e| {
                            Diag::new(
                                "PAT-TYPE",
                                format!("recursive occurrence of {}: {}", m.name(), e),
                            )
                        },
                    )?;
                }
            }
            Ok(Term::Univ(s2, i.max(j)))
        }
    }
}

/// Validates a rewrite rule: well-typed contexts and renamings, a well-typed
/// pattern matching the head's domain, a right-hand side at the head's
/// codomain over the recursive occurrences, and linearizability.
pub fn check_rewrite_rule(env: &Env, rule: &RewriteRule) -> TcResult<()> {
    let decl = env.sig().lookup_id(&rule.head)?.decl.clone();
    if !matches!(decl.dom, Dom::Univ(..) | Dom::Head(..)) {
        return Err(Diag::new(
            "TY-CONST",
            format!("rule head {} is not an active constant", rule.head.name),
        ));
    }

    // Premise (i): the renaming is a variable-only substitution from the
    // non-linear to the linear context.
    check_context(env, &rule.delta)
        .map_err(|e| Diag::new("REW-1", format!("non-linear context: {}", e)))?;
    check_context(env, &rule.delta_lin)
        .map_err(|e| Diag::new("REW-1", format!("linear context: {}", e)))?;
    if rule.renaming.len() != rule.delta_lin.len()
        || rule.renaming.iter().any(|&i| i >= rule.delta.len())
    {
        return Err(Diag::new("REW-1", "renaming has the wrong shape".to_owned()));
    }
    check_substitution(env, &rule.delta, &rule.renaming_sub(), &rule.delta_lin)
        .map_err(|e| Diag::new("REW-1", e.message))?;

    // Premise (ii): the parameter renaming targets the head's parameters.
    if rule.param_vars.len() != decl.params.len()
        || rule.param_vars.iter().any(|&i| i >= rule.delta_lin.len())
    {
        return Err(Diag::new("REW-2", "parameter renaming has the wrong shape".to_owned()));
    }
    check_substitution(env, &rule.delta_lin, &rule.param_sub(), &decl.params)
        .map_err(|e| Diag::new("REW-2", e.message))?;

    // Premise (iii): the pattern is well-typed and its type, along the
    // renaming, is the head's domain at the parameter renaming.
    let pat_ty = check_pattern(env, &decl, rule)?;
    let ren = rule.renaming_sub();
    let dom_at = subst_apply(&decl.dom_type(), &rule.param_sub());
    if !conv_type(
        env,
        &rule.delta,
        &subst_apply(&pat_ty, &ren),
        &subst_apply(&dom_at, &ren),
    )? {
        return Err(Diag::new(
            "REW-3",
            format!(
                "pattern type does not match the domain of {} at the rule's parameters",
                decl.id.name
            ),
        ));
    }

    // Premise (iv): the right-hand side checks against the instantiated
    // codomain over the recursive occurrences.
    let occ = crate::reduce::occ_rec(env.sig(), &decl, &rule.pat, &rule.delta_lin)?;
    let mut rhs_ctx = rule.delta.clone();
    for (k, e) in occ.iter().enumerate() {
        rhs_ctx.push(CtxEntry::new(
            shift(&subst_apply(&e.ty, &ren), k as i64, 0),
            e.sort.clone(),
            e.level,
        ));
    }
    let erased = crate::reduce::erase_pattern(&rule.pat, &rule.delta_lin);
    let expected = env
        .sig()
        .active_result_type(&rule.head, &rule.param_sub(), &erased)?;
    let expected = shift(&subst_apply(&expected, &ren), occ.len() as i64, 0);
    check(env, &rhs_ctx, &rule.rhs, &expected, &decl.codsort).map_err(|e| {
        Diag::new(
            "REW-4",
            format!("right-hand side of a {} rule: {}", rule.head.name, e),
        )
    })?;

    // Premise (v): linearizability.
    check_linearizable(env.sig(), &decl, rule)
}
