//! Elaboration of surface files into kernel parametrizations.
//!
//! Names are resolved against a lexical scope (binders, then definitions,
//! then signature constants); omitted sort and level annotations are
//! inferred by typing the annotation's type against the signature prefix
//! built so far. Definitions are transparent: occurrences are replaced by
//! their (closed) bodies.

use crate::ast::*;
use mutt_core::convert::ConversionOptions;
use mutt_core::diag::{Diag, TcResult};
use mutt_core::reduce::occ_rec;
use mutt_core::sig::{
    ConstantDecl, Dom, MetaVar, Parametrization, Pattern, RewriteRule, SignatureEntry, SortDecl,
};
use mutt_core::syntax::{
    shift, subst_apply, subst_id, Annot, ConstKind, ConstantId, Context, CtxEntry, Level, Sort,
    Substitution, Term,
};
use mutt_core::typing::{infer, Env};

/// The sort a surface name denotes; `Type` is the primordial sort.
fn mk_sort(name: impl Into<String>) -> Sort {
    let name = name.into();
    if name == "Type" {
        Sort::typ()
    } else {
        Sort::named(name)
    }
}

/// A diagnostic with the source position it arose at.
#[derive(Clone, Debug)]
pub struct Located {
    pub diag: Diag,
    pub line: usize,
    pub col: usize,
}

impl Located {
    fn new(diag: Diag, sp: Span) -> Located {
        Located { diag, line: sp.line, col: sp.col }
    }
}

pub type ElabResult<T> = Result<T, Located>;

/// A pending directive, in file order; directives are run by the driver
/// after the signature itself has been checked.
#[derive(Clone, Debug)]
pub enum Directive {
    Def { name: String, ty: Term, ann: Option<(Sort, u64)>, body: Term, span: Span },
    Check { term: Term, ty: Term, ann: Option<(Sort, u64)>, span: Span },
    Normalize { term: Term, expect: Option<Term>, span: Span },
}

impl Directive {
    pub fn span(&self) -> Span {
        match self {
            Directive::Def { span, .. }
            | Directive::Check { span, .. }
            | Directive::Normalize { span, .. } => *span,
        }
    }
}

/// The result of elaborating a source file.
pub struct Loaded {
    pub prm: Parametrization,
    pub directives: Vec<Directive>,
}

impl Loaded {
    /// Looks up the elaborated body and type of a `def`.
    pub fn def(&self, name: &str) -> Option<(&Term, &Term)> {
        self.directives.iter().find_map(|d| match d {
            Directive::Def { name: n, ty, body, .. } if n == name => Some((body, ty)),
            _ => None,
        })
    }
}

/// A lexical scope: binder names innermost-last, with their typing context
/// for annotation inference.
#[derive(Default, Clone)]
struct Scope {
    locals: Vec<String>,
    ctx: Context,
}

impl Scope {
    fn lookup(&self, name: &str) -> Option<usize> {
        self.locals.iter().rev().position(|n| n == name)
    }

    fn push(&mut self, name: &str, entry: CtxEntry) {
        self.locals.push(name.to_owned());
        self.ctx.push(entry);
    }

    fn pop(&mut self) {
        self.locals.pop();
        self.ctx.pop();
    }
}

struct Elab {
    prm: Parametrization,
    defs: Vec<(String, Term)>,
    opts: ConversionOptions,
    fuel: u64,
    directives: Vec<Directive>,
}

/// Elaborates a parsed file into a parametrization plus directives. The
/// signature is not checked here; callers run the signature checker next.
pub fn elaborate(file: &SourceFile, opts: &ConversionOptions, fuel: u64) -> ElabResult<Loaded> {
    let mut e = Elab {
        prm: Parametrization::default(),
        defs: Vec::new(),
        opts: opts.clone(),
        fuel,
        directives: Vec::new(),
    };
    for d in &file.decls {
        e.decl(d)?;
    }
    Ok(Loaded { prm: e.prm, directives: e.directives })
}

impl Elab {
    fn fail<T>(&self, sp: Span, tag: &'static str, msg: impl Into<String>) -> ElabResult<T> {
        Err(Located::new(Diag::new(tag, msg), sp))
    }

    fn at<T>(&self, sp: Span, r: TcResult<T>) -> ElabResult<T> {
        r.map_err(|d| Located::new(d, sp))
    }

    /// Elaborates a term in the given scope.
    fn term(&self, sc: &mut Scope, t: &STerm) -> ElabResult<Term> {
        match t {
            STerm::Name(n, sp) => {
                if let Some(i) = sc.lookup(n) {
                    return Ok(Term::Var(i));
                }
                if let Some((_, body)) = self.defs.iter().find(|(dn, _)| dn == n) {
                    return Ok(body.clone());
                }
                self.fail(*sp, "NAME", format!("unknown name `{}`", n))
            }
            STerm::Univ(s, i, _) => Ok(Term::univ(mk_sort(s.clone()), *i)),
            STerm::Lam(bs, body) => {
                let mut annots = Vec::new();
                for b in bs {
                    let a = self.binder_annot(sc, b)?;
                    sc.push(&b.name, CtxEntry::new(a.ty.clone(), a.sort.clone(), a.level));
                    annots.push(a);
                }
                let mut r = self.term(sc, body)?;
                for a in annots.into_iter().rev() {
                    sc.pop();
                    r = Term::lam(a, r);
                }
                Ok(r)
            }
            STerm::Pi(bs, cod) => {
                let mut annots = Vec::new();
                for b in bs {
                    let a = self.binder_annot(sc, b)?;
                    sc.push(&b.name, CtxEntry::new(a.ty.clone(), a.sort.clone(), a.level));
                    annots.push(a);
                }
                let mut r = self.term(sc, cod)?;
                for a in annots.into_iter().rev() {
                    sc.pop();
                    r = Term::pi(a, r);
                }
                Ok(r)
            }
            STerm::App(f, a) => {
                let fe = self.term(sc, f)?;
                let ae = self.term(sc, a)?;
                Ok(Term::app(fe, ae))
            }
            STerm::Const(n, args, scrut, sp) => {
                let eargs: Vec<Term> =
                    args.iter().map(|a| self.term(sc, a)).collect::<Result<_, _>>()?;
                if let Some(s) = scrut {
                    let es = self.term(sc, s)?;
                    let cref = self.prm.sig.lookup(n).ok_or_else(|| {
                        Located::new(Diag::new("NAME", format!("unknown constant `{}`", n)), *sp)
                    })?;
                    if cref.decl.id.kind != ConstKind::Active {
                        return self.fail(
                            *sp,
                            "TY-CONST",
                            format!("`{}` is inert and takes no scrutinee", n),
                        );
                    }
                    return Ok(Term::active(cref.decl.id.clone(), eargs, es));
                }
                // A bound variable or definition applied to a parenthesized
                // argument list is plain application.
                if let Some(i) = sc.lookup(n) {
                    return Ok(Term::apps(Term::Var(i), eargs));
                }
                if let Some((_, body)) = self.defs.iter().find(|(dn, _)| dn == n) {
                    return Ok(Term::apps(body.clone(), eargs));
                }
                let cref = self.prm.sig.lookup(n).ok_or_else(|| {
                    Located::new(Diag::new("NAME", format!("unknown constant `{}`", n)), *sp)
                })?;
                match cref.decl.id.kind {
                    ConstKind::Inert => Ok(Term::inert(cref.decl.id.clone(), eargs)),
                    ConstKind::Active => self.fail(
                        *sp,
                        "ARITY",
                        format!("active constant `{}` needs a scrutinee: `{}(args; t)`", n, n),
                    ),
                }
            }
        }
    }

    /// Elaborates a binder into an annotation, inferring the sort and
    /// level from the signature prefix when not written explicitly.
    fn binder_annot(&self, sc: &mut Scope, b: &SBinder) -> ElabResult<Annot> {
        let ty = self.term(sc, &b.ty)?;
        let (sort, level) = match &b.ann {
            Some((s, i)) => (mk_sort(s.clone()), *i),
            None => self.infer_sort_level(&ty, &sc.ctx, b.span)?,
        };
        Ok(Annot::new(ty, sort, Level(level)))
    }

    fn infer_sort_level(&self, ty: &Term, ctx: &Context, sp: Span) -> ElabResult<(Sort, u64)> {
        let env = Env::with_opts(&self.prm, self.opts.clone(), self.fuel);
        let r = self.at(sp, infer(&env, ctx, ty))?;
        match self.at(sp, env.whnf(&r.ty))? {
            Term::Univ(s, l) => Ok((s, l.0)),
            _ => self.fail(sp, "TY-NOT-TYPE", "binder annotation is not a type"),
        }
    }

    /// Elaborates a telescope of binders, extending the scope.
    fn telescope(&self, sc: &mut Scope, bs: &[SBinder]) -> ElabResult<()> {
        for b in bs {
            let a = self.binder_annot(sc, b)?;
            sc.push(&b.name, CtxEntry::new(a.ty, a.sort, a.level));
        }
        Ok(())
    }

    /// The universe a type constant inhabits, read off its codomain.
    fn type_univ(&self, k: &str, sp: Span) -> ElabResult<(Sort, Level)> {
        let kref = self
            .prm
            .sig
            .lookup(k)
            .ok_or_else(|| Located::new(Diag::new("NAME", format!("unknown type `{}`", k)), sp))?;
        match &kref.decl.cod {
            Term::Univ(s, l) => Ok((s.clone(), *l)),
            _ => self.fail(sp, "TY-CONST", format!("`{}` is not a type constant", k)),
        }
    }

    fn decl(&mut self, d: &SDecl) -> ElabResult<()> {
        match d {
            SDecl::Sort { name, isolated, .. } => {
                self.prm
                    .sorts
                    .push(SortDecl { sort: mk_sort(name.clone()), isolated: *isolated });
                Ok(())
            }
            SDecl::Positive { name, params, univ, ctors, .. } => {
                let mut sc = Scope::default();
                self.telescope(&mut sc, params)?;
                let ty = ConstantDecl {
                    id: ConstantId::inert(name.clone()),
                    params: sc.ctx,
                    dom: Dom::Tele(Vec::new()),
                    cod: Term::univ(mk_sort(univ.0.clone()), univ.1),
                    codsort: Sort::typ(),
                    codlevel: Level(univ.1 + 1),
                };
                // Constructors mention the type, so its entry goes in first
                // and is completed afterwards.
                let at = self.prm.sig.entries.len();
                self.prm
                    .sig
                    .entries
                    .push(SignatureEntry::Positive { ty: ty.clone(), ctors: Vec::new() });
                let mut cdecls = Vec::new();
                for c in ctors {
                    cdecls.push(self.constructor(name, c)?);
                }
                self.prm.sig.entries[at] = SignatureEntry::Positive { ty, ctors: cdecls };
                Ok(())
            }
            SDecl::Negative { name, params, univ, obs, .. } => {
                let mut sc = Scope::default();
                self.telescope(&mut sc, params)?;
                let pctx = sc.ctx.clone();
                let ty = ConstantDecl {
                    id: ConstantId::inert(name.clone()),
                    params: pctx.clone(),
                    dom: Dom::Tele(Vec::new()),
                    cod: Term::univ(mk_sort(univ.0.clone()), univ.1),
                    codsort: Sort::typ(),
                    codlevel: Level(univ.1 + 1),
                };
                let at = self.prm.sig.entries.len();
                self.prm
                    .sig
                    .entries
                    .push(SignatureEntry::Negative { ty: ty.clone(), obs: Vec::new() });
                let mut odecls: Vec<ConstantDecl> = Vec::new();
                for o in obs {
                    // The codomain may mention earlier observations, which
                    // sit in the scope after the parameters.
                    let cod = self.term(&mut sc, &o.cod)?;
                    let (codsort, codlevel) = match &o.ann {
                        Some((s, i)) => (mk_sort(s.clone()), *i),
                        None => self.infer_sort_level(&cod, &sc.ctx, o.span)?,
                    };
                    sc.push(&o.name, CtxEntry::new(cod.clone(), codsort.clone(), Level(codlevel)));
                    odecls.push(ConstantDecl {
                        id: ConstantId::active(o.name.clone()),
                        params: pctx.clone(),
                        dom: Dom::Head(ConstantId::inert(name.clone()), subst_id(pctx.len())),
                        cod,
                        codsort,
                        codlevel: Level(codlevel),
                    });
                }
                self.prm.sig.entries[at] = SignatureEntry::Negative { ty, obs: odecls };
                Ok(())
            }
            SDecl::Eliminator { name, params, scrut_name, dom, cod, ann, rules, span } => {
                let mut sc = Scope::default();
                self.telescope(&mut sc, params)?;
                let pctx = sc.ctx.clone();
                let (edom, scrut_entry) = match dom {
                    SDom::Univ(s, i) => {
                        let s = mk_sort(s.clone());
                        (
                            Dom::Univ(s.clone(), Level(*i)),
                            CtxEntry::new(Term::univ(s, *i), Sort::typ(), Level(*i + 1)),
                        )
                    }
                    SDom::Head(k, args) => {
                        let eargs: Vec<Term> = args
                            .iter()
                            .map(|a| self.term(&mut sc, a))
                            .collect::<Result<_, _>>()?;
                        let (ks, kl) = self.type_univ(k, *span)?;
                        let kid = ConstantId::inert(k.clone());
                        (
                            Dom::Head(kid.clone(), eargs.clone()),
                            CtxEntry::new(Term::inert(kid, eargs), ks, kl),
                        )
                    }
                };
                sc.push(scrut_name, scrut_entry);
                let ecod = self.term(&mut sc, cod)?;
                let (codsort, codlevel) = match ann {
                    Some((s, i)) => (mk_sort(s.clone()), *i),
                    None => self.infer_sort_level(&ecod, &sc.ctx, *span)?,
                };
                let decl = ConstantDecl {
                    id: ConstantId::active(name.clone()),
                    params: pctx,
                    dom: edom,
                    cod: ecod,
                    codsort,
                    codlevel: Level(codlevel),
                };
                // The entry goes in before its rules so they can refer to
                // the eliminator (for recursive occurrences).
                let at = self.prm.sig.entries.len();
                self.prm
                    .sig
                    .entries
                    .push(SignatureEntry::Eliminator { decl: decl.clone(), rules: Vec::new() });
                let erules =
                    rules.iter().map(|r| self.rule(r)).collect::<Result<Vec<_>, _>>()?;
                self.prm.sig.entries[at] = SignatureEntry::Eliminator { decl, rules: erules };
                Ok(())
            }
            SDecl::Builder { name, binders, cod_head, cod_args, rules, span } => {
                let mut sc = Scope::default();
                self.telescope(&mut sc, binders)?;
                let tele = sc.ctx.clone();
                // Binders whose type is headed by the negative type are the
                // builder's recursive arguments.
                let split = tele
                    .iter()
                    .position(
                        |e| matches!(&e.ty, Term::Inert(k, _) if k.name == cod_head.as_str()),
                    )
                    .unwrap_or(tele.len());
                // Codomain indices are scoped over the parameters only.
                let mut cod_sc =
                    Scope { locals: sc.locals[..split].to_vec(), ctx: tele[..split].to_vec() };
                let eargs: Vec<Term> = cod_args
                    .iter()
                    .map(|a| self.term(&mut cod_sc, a))
                    .collect::<Result<_, _>>()?;
                let (cs, cl) = self.type_univ(cod_head, *span)?;
                let decl = ConstantDecl {
                    id: ConstantId::inert(name.clone()),
                    params: tele[..split].to_vec(),
                    dom: Dom::Tele(tele[split..].to_vec()),
                    cod: Term::inert(ConstantId::inert(cod_head.clone()), eargs),
                    codsort: cs,
                    codlevel: cl,
                };
                let at = self.prm.sig.entries.len();
                self.prm
                    .sig
                    .entries
                    .push(SignatureEntry::Builder { decl: decl.clone(), rules: Vec::new() });
                let erules =
                    rules.iter().map(|r| self.rule(r)).collect::<Result<Vec<_>, _>>()?;
                self.prm.sig.entries[at] = SignatureEntry::Builder { decl, rules: erules };
                Ok(())
            }
            SDecl::Def { name, ty, ann, body, span } => {
                let mut sc = Scope::default();
                let ety = self.term(&mut sc, ty)?;
                let ebody = self.term(&mut sc, body)?;
                let eann = ann.as_ref().map(|(s, i)| (mk_sort(s.clone()), *i));
                self.defs.push((name.clone(), ebody.clone()));
                self.directives.push(Directive::Def {
                    name: name.clone(),
                    ty: ety,
                    ann: eann,
                    body: ebody,
                    span: *span,
                });
                Ok(())
            }
            SDecl::Check { term, ty, ann, span } => {
                let mut sc = Scope::default();
                let et = self.term(&mut sc, term)?;
                let ety = self.term(&mut sc, ty)?;
                let eann = ann.as_ref().map(|(s, i)| (mk_sort(s.clone()), *i));
                self.directives.push(Directive::Check {
                    term: et,
                    ty: ety,
                    ann: eann,
                    span: *span,
                });
                Ok(())
            }
            SDecl::Normalize { term, expect, span } => {
                let mut sc = Scope::default();
                let et = self.term(&mut sc, term)?;
                let ee = match expect {
                    Some(e) => Some(self.term(&mut sc, e)?),
                    None => None,
                };
                self.directives.push(Directive::Normalize { term: et, expect: ee, span: *span });
                Ok(())
            }
        }
    }

    /// Elaborates a constructor of the positive type `k`. Binders headed
    /// by `k` itself, which the well-formedness checker requires to come
    /// last, form the recursive-argument telescope.
    fn constructor(&self, k: &str, c: &SCtor) -> ElabResult<ConstantDecl> {
        let mut sc = Scope::default();
        self.telescope(&mut sc, &c.binders)?;
        let tele = sc.ctx.clone();
        let split = tele
            .iter()
            .position(|e| matches!(&e.ty, Term::Inert(kid, _) if kid.name == k))
            .unwrap_or(tele.len());
        // Codomain indices are scoped over the parameters only.
        let mut cod_sc =
            Scope { locals: sc.locals[..split].to_vec(), ctx: tele[..split].to_vec() };
        let cod_args: Vec<Term> = c
            .cod_args
            .iter()
            .map(|a| self.term(&mut cod_sc, a))
            .collect::<Result<_, _>>()?;
        let (cs, cl) = self.type_univ(k, c.span)?;
        Ok(ConstantDecl {
            id: ConstantId::inert(c.name.clone()),
            params: tele[..split].to_vec(),
            dom: Dom::Tele(tele[split..].to_vec()),
            cod: Term::inert(ConstantId::inert(k.to_owned()), cod_args),
            codsort: cs,
            codlevel: cl,
        })
    }

    fn resolve_vars(
        &self,
        names: &[String],
        locals: &[String],
        what: &str,
        sp: Span,
    ) -> ElabResult<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                locals.iter().rev().position(|l| l == n).ok_or_else(|| {
                    Located::new(
                        Diag::new("NAME", format!("`{}` is not a {} variable", n, what)),
                        sp,
                    )
                })
            })
            .collect()
    }

    /// Elaborates a rewrite rule. The owning eliminator or builder entry
    /// is already in the signature (with an empty rule list).
    fn rule(&self, r: &SRule) -> ElabResult<RewriteRule> {
        let mut lin = Scope::default();
        self.telescope(&mut lin, &r.delta_lin)?;
        let (delta, delta_locals, renaming) = match &r.nonlinear {
            None => {
                let n = lin.ctx.len();
                (lin.ctx.clone(), lin.locals.clone(), (0..n).map(|i| n - 1 - i).collect())
            }
            Some((dbs, sigma)) => {
                let mut dsc = Scope::default();
                self.telescope(&mut dsc, dbs)?;
                if sigma.len() != lin.ctx.len() {
                    return self.fail(
                        r.span,
                        "REW-1",
                        "the renaming must list one variable per linear-context entry",
                    );
                }
                let ren = self.resolve_vars(sigma, &dsc.locals, "non-linear context", r.span)?;
                (dsc.ctx, dsc.locals, ren)
            }
        };
        let param_vars =
            self.resolve_vars(&r.param_vars, &lin.locals, "linear context", r.span)?;
        let head = match self.prm.sig.lookup(&r.head) {
            Some(cref) if cref.decl.id.kind == ConstKind::Active => cref.decl.id.clone(),
            Some(_) => {
                return self.fail(
                    r.span,
                    "TY-CONST",
                    format!("`{}` is not an active constant", r.head),
                )
            }
            None => return self.fail(r.span, "NAME", format!("unknown constant `{}`", r.head)),
        };
        let head_decl = self.prm.sig.lookup(&r.head).unwrap().decl.clone();
        let (pat, rec_names) = self.pattern(&r.pat, &lin.locals)?;
        // The right-hand side lives in the non-linear context extended
        // with the recursive occurrences, transported along the renaming.
        let ren_sub: Substitution = renaming.iter().map(|&i| Term::Var(i)).collect();
        let occ = self.at(r.span, occ_rec(&self.prm.sig, &head_decl, &pat, &lin.ctx))?;
        let mut rhs_sc = Scope { locals: delta_locals, ctx: delta.clone() };
        for (i, (e, n)) in occ.iter().zip(rec_names.iter()).enumerate() {
            let ty = shift(&subst_apply(&e.ty, &ren_sub), i as i64, 0);
            rhs_sc.push(n, CtxEntry::new(ty, e.sort.clone(), e.level));
        }
        let rhs = self.term(&mut rhs_sc, &r.rhs)?;
        let tau = match &r.tau {
            None => None,
            Some(names) => {
                if names.len() != delta.len() {
                    return self.fail(
                        r.span,
                        "LIN-INV",
                        "the inverse must list one variable per non-linear-context entry",
                    );
                }
                Some(self.resolve_vars(names, &lin.locals, "linear context", r.span)?)
            }
        };
        Ok(RewriteRule {
            head,
            delta,
            delta_lin: lin.ctx,
            renaming,
            param_vars,
            pat,
            rhs,
            tau,
        })
    }

    /// Elaborates a pattern. Metavariable names must be variables of the
    /// linear context; the returned names bind the recursive occurrences
    /// in the right-hand side, in pattern order.
    fn pattern(&self, p: &SPat, lin_locals: &[String]) -> ElabResult<(Pattern, Vec<String>)> {
        let mut rec_names = Vec::new();
        let mut meta = |m: &SMeta| -> ElabResult<MetaVar> {
            let (n, sp) = match m {
                SMeta::Plain(n, sp) | SMeta::Rec(n, _, sp) => (n, sp),
            };
            let idx = lin_locals.iter().rev().position(|l| l == n).ok_or_else(|| {
                Located::new(
                    Diag::new(
                        "NAME",
                        format!("metavariable `{}` is not a linear-context variable", n),
                    ),
                    *sp,
                )
            })?;
            match m {
                SMeta::Plain(..) => Ok(MetaVar::Plain { name: n.clone(), idx }),
                SMeta::Rec(_, sub, _) => {
                    let esub: Vec<Term> = sub
                        .iter()
                        .map(|t| {
                            let mut sc =
                                Scope { locals: lin_locals.to_vec(), ctx: Vec::new() };
                            self.term(&mut sc, t)
                        })
                        .collect::<Result<_, _>>()?;
                    rec_names.push(format!("{}_rec", n));
                    Ok(MetaVar::Rec { name: n.clone(), idx, sub: esub })
                }
            }
        };
        let pat = match p {
            SPat::Head(name, metas, sp) => {
                let id = match self.prm.sig.lookup(name) {
                    Some(cref) => cref.decl.id.clone(),
                    None => {
                        return self.fail(*sp, "NAME", format!("unknown constant `{}`", name))
                    }
                };
                let ms: Vec<MetaVar> = metas.iter().map(&mut meta).collect::<Result<_, _>>()?;
                Pattern::Head(id, ms)
            }
            SPat::Pi(s, q1, q2, _) => {
                let m1 = meta(q1)?;
                let m2 = meta(q2)?;
                Pattern::Pi(mk_sort(s.clone()), m1, m2)
            }
        };
        Ok((pat, rec_names))
    }
}
