//! Signatures: constant declarations, rewrite rules and well-formedness.
//!
//! A signature is an ordered list of entries: positive types with their
//! constructors, negative types with their observations, eliminators and
//! builders with their rewrite rules. `check_signature` validates every
//! entry against the preceding prefix: typing of all components, strict
//! positivity shapes, determinism and progress of the rules, the
//! linearizability condition on non-linear rules, and the isolation
//! invariant that keeps information from flowing out of isolated sorts.

use std::collections::{HashMap, HashSet};

use crate::diag::{Diag, TcResult};
use crate::syntax::{
    subst_apply, subst_compose, subst_id, Annot, ConstKind, ConstantId, Context, CtxEntry, Level,
    Sort, Substitution, Term,
};

/// Domain of a constant: the telescope of recursive arguments for inert
/// constants, or the scrutinee type for active ones (a universe, or a type
/// constant applied to indices scoped over the constant's parameters).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Dom {
    Tele(Context),
    Univ(Sort, Level),
    Head(ConstantId, Substitution),
}

/// A constant declaration. `params` is the parameter telescope; `dom`
/// describes recursive arguments or the scrutinee; `cod` is the codomain,
/// a type with `cod : Univ codsort codlevel` in its ambient context.
///
/// The ambient context of `cod` depends on the role: for type constants it
/// is `params` (and `cod` is a closed universe); for constructors and
/// builders it is `params` alone; for eliminators it is `params` extended by
/// the scrutinee; for observations it is the type's parameters extended by
/// one variable per earlier observation's result.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstantDecl {
    pub id: ConstantId,
    pub params: Context,
    pub dom: Dom,
    pub cod: Term,
    pub codsort: Sort,
    pub codlevel: Level,
}

impl ConstantDecl {
    /// The scrutinee type of an active constant, scoped over `params`.
    pub fn dom_type(&self) -> Term {
        match &self.dom {
            Dom::Univ(s, l) => Term::Univ(s.clone(), *l),
            Dom::Head(k, args) => Term::Inert(k.clone(), args.clone()),
            Dom::Tele(_) => panic!("dom_type on an inert constant"),
        }
    }

    /// The recursive-argument telescope of an inert constant.
    pub fn tele(&self) -> &Context {
        match &self.dom {
            Dom::Tele(t) => t,
            _ => panic!("tele on an active constant"),
        }
    }

    /// Parameters and recursive arguments as one telescope.
    pub fn full_tele(&self) -> Context {
        let mut t = self.params.clone();
        t.extend(self.tele().iter().cloned());
        t
    }
}

/// Pattern metavariables, identified by a de Bruijn index into the rule's
/// linear context. Recursive metavariables additionally carry the parameter
/// substitution of the recursive occurrence, scoped over the linear context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MetaVar {
    Plain { name: String, idx: usize },
    Rec { name: String, idx: usize, sub: Substitution },
}

impl MetaVar {
    pub fn idx(&self) -> usize {
        match self {
            MetaVar::Plain { idx, .. } | MetaVar::Rec { idx, .. } => *idx,
        }
    }
    pub fn name(&self) -> &str {
        match self {
            MetaVar::Plain { name, .. } | MetaVar::Rec { name, .. } => name,
        }
    }
}

/// Rewrite patterns: a fully applied inert constant, or a Pi type. The Pi
/// pattern records the domain sort used when typing the rule; at matching
/// time any Pi matches and the scrutinee's own annotation is used.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pattern {
    Head(ConstantId, Vec<MetaVar>),
    Pi(Sort, MetaVar, MetaVar),
}

/// Discriminates rules by the shape of terms they can fire on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PatKey {
    Const(String),
    Pi,
}

impl std::fmt::Display for PatKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatKey::Const(n) => write!(f, "{}", n),
            PatKey::Pi => write!(f, "Pi"),
        }
    }
}

impl Pattern {
    pub fn key(&self) -> PatKey {
        match self {
            Pattern::Head(c, _) => PatKey::Const(c.name.clone()),
            Pattern::Pi(..) => PatKey::Pi,
        }
    }
}

/// A rewrite rule for the active constant `head`.
///
/// `delta` is the context the right-hand side lives over; `delta_lin` is the
/// linear context the pattern lives over; `renaming` maps each `delta_lin`
/// entry (telescope order) to a `delta` variable (de Bruijn index), forming
/// a substitution `delta |- renaming : delta_lin`. `param_vars` maps each
/// parameter of `head` to a `delta_lin` variable. The right-hand side is
/// scoped over `delta` extended by the recursive-occurrence telescope of the
/// pattern, transported along the renaming. `tau` optionally witnesses
/// invertibility of the renaming for linearizability.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteRule {
    pub head: ConstantId,
    pub delta: Context,
    pub delta_lin: Context,
    pub renaming: Vec<usize>,
    pub param_vars: Vec<usize>,
    pub pat: Pattern,
    pub rhs: Term,
    pub tau: Option<Vec<usize>>,
}

impl RewriteRule {
    /// A linear rule: the two contexts coincide and the renaming is the
    /// identity.
    pub fn linear(
        head: ConstantId,
        delta: Context,
        param_vars: Vec<usize>,
        pat: Pattern,
        rhs: Term,
    ) -> RewriteRule {
        let n = delta.len();
        RewriteRule {
            head,
            delta_lin: delta.clone(),
            delta,
            renaming: (0..n).map(|k| n - 1 - k).collect(),
            param_vars,
            pat,
            rhs,
            tau: None,
        }
    }

    /// The renaming as a substitution (telescope order, variable terms).
    pub fn renaming_sub(&self) -> Substitution {
        self.renaming.iter().map(|&i| Term::Var(i)).collect()
    }

    /// The parameter renaming as a substitution over the linear context.
    pub fn param_sub(&self) -> Substitution {
        self.param_vars.iter().map(|&i| Term::Var(i)).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.delta == self.delta_lin
            && self
                .renaming
                .iter()
                .enumerate()
                .all(|(k, &i)| i == self.delta.len() - 1 - k)
    }
}

/// One signature entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SignatureEntry {
    Positive { ty: ConstantDecl, ctors: Vec<ConstantDecl> },
    Negative { ty: ConstantDecl, obs: Vec<ConstantDecl> },
    Eliminator { decl: ConstantDecl, rules: Vec<RewriteRule> },
    Builder { decl: ConstantDecl, rules: Vec<RewriteRule> },
}

impl SignatureEntry {
    /// All constant declarations introduced by this entry.
    pub fn decls(&self) -> Vec<&ConstantDecl> {
        match self {
            SignatureEntry::Positive { ty, ctors } => {
                std::iter::once(ty).chain(ctors.iter()).collect()
            }
            SignatureEntry::Negative { ty, obs } => {
                std::iter::once(ty).chain(obs.iter()).collect()
            }
            SignatureEntry::Eliminator { decl, .. } | SignatureEntry::Builder { decl, .. } => {
                vec![decl]
            }
        }
    }
}

/// The role a constant plays in its signature entry.
#[derive(Clone, Copy, Debug)]
pub enum Role<'a> {
    PosType { ctors: &'a [ConstantDecl] },
    Ctor { parent: &'a ConstantDecl },
    NegType { obs: &'a [ConstantDecl] },
    Obs { parent: &'a ConstantDecl, all_obs: &'a [ConstantDecl], index: usize },
    Elim { rules: &'a [RewriteRule] },
    Builder { rules: &'a [RewriteRule] },
}

/// Lookup result: a declaration with its role.
#[derive(Clone, Copy, Debug)]
pub struct ConstRef<'a> {
    pub decl: &'a ConstantDecl,
    pub role: Role<'a>,
}

/// An ordered signature.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Signature {
    pub entries: Vec<SignatureEntry>,
}

impl Signature {
    pub fn new(entries: Vec<SignatureEntry>) -> Signature {
        Signature { entries }
    }

    /// Finds a constant by name anywhere in the signature.
    pub fn lookup(&self, name: &str) -> Option<ConstRef<'_>> {
        for entry in &self.entries {
            match entry {
                SignatureEntry::Positive { ty, ctors } => {
                    if ty.id.name == name {
                        return Some(ConstRef { decl: ty, role: Role::PosType { ctors } });
                    }
                    for c in ctors {
                        if c.id.name == name {
                            return Some(ConstRef { decl: c, role: Role::Ctor { parent: ty } });
                        }
                    }
                }
                SignatureEntry::Negative { ty, obs } => {
                    if ty.id.name == name {
                        return Some(ConstRef { decl: ty, role: Role::NegType { obs } });
                    }
                    for (i, d) in obs.iter().enumerate() {
                        if d.id.name == name {
                            return Some(ConstRef {
                                decl: d,
                                role: Role::Obs { parent: ty, all_obs: obs, index: i },
                            });
                        }
                    }
                }
                SignatureEntry::Eliminator { decl, rules } => {
                    if decl.id.name == name {
                        return Some(ConstRef { decl, role: Role::Elim { rules } });
                    }
                }
                SignatureEntry::Builder { decl, rules } => {
                    if decl.id.name == name {
                        return Some(ConstRef { decl, role: Role::Builder { rules } });
                    }
                }
            }
        }
        None
    }

    /// Finds a constant by identity, requiring the declared kind to match.
    pub fn lookup_id(&self, id: &ConstantId) -> TcResult<ConstRef<'_>> {
        match self.lookup(&id.name) {
            Some(r) if r.decl.id.kind == id.kind => Ok(r),
            Some(_) => Err(Diag::new(
                "TY-CONST",
                format!("constant {} used with the wrong kind", id.name),
            )),
            None => Err(Diag::new("TY-CONST", format!("unknown constant {}", id.name))),
        }
    }

    /// All rules whose head symbol is `head`, in signature order.
    pub fn rules_for(&self, head: &str) -> Vec<&RewriteRule> {
        let mut out = Vec::new();
        for entry in &self.entries {
            match entry {
                SignatureEntry::Eliminator { rules, .. }
                | SignatureEntry::Builder { rules, .. } => {
                    out.extend(rules.iter().filter(|r| r.head.name == head));
                }
                _ => {}
            }
        }
        out
    }

    /// The unique rule for a head symbol and pattern key, if any.
    pub fn rule_for(&self, head: &str, key: &PatKey) -> Option<&RewriteRule> {
        self.rules_for(head).into_iter().find(|r| r.pat.key() == *key)
    }

    /// Whether the active constant `head` has a rule firing on `key`.
    pub fn reacts(&self, head: &str, key: &PatKey) -> bool {
        self.rule_for(head, key).is_some()
    }

    /// Number of arguments an inert constant takes (parameters plus
    /// recursive arguments), or parameters for an active constant.
    pub fn arity(&self, name: &str) -> Option<usize> {
        self.lookup(name).map(|r| match &r.decl.dom {
            Dom::Tele(t) => r.decl.params.len() + t.len(),
            _ => r.decl.params.len(),
        })
    }

    /// The result type of a fully applied active constant: the codomain
    /// instantiated at the given parameters and scrutinee. For observations
    /// the earlier-observation variables are instantiated with the sibling
    /// observations applied to the same scrutinee.
    pub fn active_result_type(
        &self,
        d: &ConstantId,
        params: &Substitution,
        scrut: &Term,
    ) -> TcResult<Term> {
        let r = self.lookup_id(d)?;
        match r.role {
            Role::Elim { .. } => {
                let mut sub = params.clone();
                sub.push(scrut.clone());
                Ok(subst_apply(&r.decl.cod, &sub))
            }
            Role::Obs { all_obs, index, .. } => {
                let mut sub = params.clone();
                for prev in &all_obs[..index] {
                    sub.push(Term::active(prev.id.clone(), params.clone(), scrut.clone()));
                }
                Ok(subst_apply(&r.decl.cod, &sub))
            }
            _ => Err(Diag::new(
                "TY-CONST",
                format!("{} is not an active constant", d.name),
            )),
        }
    }

    /// The sort and level at which an active constant's scrutinee is typed:
    /// `Type` at level `l+1` for a universe domain `Univ s l`, the type
    /// constant's own sort and level otherwise.
    pub fn scrut_sort_level(&self, decl: &ConstantDecl) -> TcResult<(Sort, Level)> {
        match &decl.dom {
            Dom::Univ(_, l) => Ok((Sort::typ(), l.succ())),
            Dom::Head(k, _) => {
                let kref = self.lookup_id(k)?;
                match &kref.decl.cod {
                    Term::Univ(s, l) => Ok((s.clone(), *l)),
                    _ => Err(Diag::new(
                        "TY-CONST",
                        format!("{} is not a type constant", k.name),
                    )),
                }
            }
            Dom::Tele(_) => Err(Diag::new(
                "TY-CONST",
                format!("{} is not an active constant", decl.id.name),
            )),
        }
    }

    /// The context entry binding the scrutinee, scoped over the constant's
    /// parameters.
    pub fn scrut_entry(&self, decl: &ConstantDecl) -> TcResult<CtxEntry> {
        let (sort, level) = self.scrut_sort_level(decl)?;
        Ok(CtxEntry::new(decl.dom_type(), sort, level))
    }

    /// The sort a constant's domain contributes to the isolation invariant:
    /// the universe's own sort for a universe domain, the sort of the type
    /// constant otherwise.
    pub fn dom_iso_sort(&self, decl: &ConstantDecl) -> TcResult<Sort> {
        match &decl.dom {
            Dom::Univ(s, _) => Ok(s.clone()),
            Dom::Head(..) => Ok(self.scrut_sort_level(decl)?.0),
            Dom::Tele(_) => Err(Diag::new(
                "TY-CONST",
                format!("{} is not an active constant", decl.id.name),
            )),
        }
    }

    /// The sort a constant's codomain contributes to the isolation
    /// invariant: the universe's sort if the codomain is syntactically a
    /// universe, the codomain's classifying sort otherwise.
    pub fn cod_iso_sort(&self, decl: &ConstantDecl) -> Sort {
        match &decl.cod {
            Term::Univ(s, _) => s.clone(),
            _ => decl.codsort.clone(),
        }
    }
}

/// One sort of a parametrization with its isolation flag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SortDecl {
    pub sort: Sort,
    pub isolated: bool,
}

/// A theory instance: the sort table together with a signature.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Parametrization {
    pub sorts: Vec<SortDecl>,
    pub sig: Signature,
}

impl Parametrization {
    /// The minimal parametrization: the primordial sort and no constants.
    pub fn base() -> Parametrization {
        Parametrization {
            sorts: vec![SortDecl { sort: Sort::typ(), isolated: false }],
            sig: Signature::default(),
        }
    }

    pub fn sort_decl(&self, s: &Sort) -> Option<&SortDecl> {
        self.sorts.iter().find(|d| d.sort == *s)
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sort_decl(s).is_some()
    }

    pub fn is_isolated(&self, s: &Sort) -> TcResult<bool> {
        self.sort_decl(s)
            .map(|d| d.isolated)
            .ok_or_else(|| Diag::new("WF-SIG-SORT", format!("sort {} is not declared", s)))
    }
}

/// Checks that no two rules share a head symbol and pattern key.
pub fn check_determinism(rules: &[RewriteRule]) -> TcResult<()> {
    let mut seen: HashSet<(String, PatKey)> = HashSet::new();
    for r in rules {
        let k = (r.head.name.clone(), r.pat.key());
        if !seen.insert(k.clone()) {
            return Err(Diag::new(
                "WF-DET",
                format!("two rules for head {} on pattern head {}", k.0, k.1),
            ));
        }
    }
    Ok(())
}

/// Checks progress: every listed active constant reacts to every listed
/// pattern key within `rules`.
pub fn check_progress(
    inerts: &[PatKey],
    actives: &[&ConstantId],
    rules: &[&RewriteRule],
) -> TcResult<()> {
    for key in inerts {
        for d in actives {
            let hit = rules
                .iter()
                .any(|r| r.head.name == d.name && r.pat.key() == *key);
            if !hit {
                return Err(Diag::new(
                    "WF-ELIM-1",
                    format!("no rule lets {} react to {}", d.name, key),
                ));
            }
        }
    }
    Ok(())
}

/// First-order unification over terms scoped in one context, where every
/// free variable of that context is unifiable. Bindings are stored at depth
/// zero; bound variables never unify.
#[derive(Default)]
pub struct Unifier {
    map: HashMap<usize, Term>,
}

impl Unifier {
    fn lookup(&self, idx: usize) -> Option<&Term> {
        self.map.get(&idx)
    }

    /// Replaces every solved variable by its binding, repeatedly.
    pub fn resolve(&self, t: &Term) -> Term {
        self.resolve_at(t, 0)
    }

    fn resolve_at(&self, t: &Term, depth: usize) -> Term {
        match t {
            Term::Var(i) if *i >= depth => match self.lookup(*i - depth) {
                Some(b) => {
                    let b = crate::syntax::shift(b, depth as i64, 0);
                    self.resolve_at(&b, depth)
                }
                None => t.clone(),
            },
            Term::Var(_) => t.clone(),
            Term::Lambda(a, b) => Term::lam(
                Annot { ty: self.resolve_at(&a.ty, depth), ..(**a).clone() },
                self.resolve_at(b, depth + 1),
            ),
            Term::Pi(a, b) => Term::pi(
                Annot { ty: self.resolve_at(&a.ty, depth), ..(**a).clone() },
                self.resolve_at(b, depth + 1),
            ),
            Term::App(f, a) => Term::app(self.resolve_at(f, depth), self.resolve_at(a, depth)),
            Term::Univ(..) => t.clone(),
            Term::Inert(c, args) => Term::Inert(
                c.clone(),
                args.iter().map(|x| self.resolve_at(x, depth)).collect(),
            ),
            Term::Active(d, ps, s) => Term::active(
                d.clone(),
                ps.iter().map(|x| self.resolve_at(x, depth)).collect(),
                self.resolve_at(s, depth),
            ),
        }
    }

    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        self.unify_at(a, b, 0)
    }

    fn unify_at(&mut self, a: &Term, b: &Term, depth: usize) -> bool {
        let a = self.resolve_at(a, depth);
        let b = self.resolve_at(b, depth);
        if a == b {
            return true;
        }
        match (&a, &b) {
            (Term::Var(i), _) if *i >= depth => self.bind(*i - depth, &b, depth),
            (_, Term::Var(j)) if *j >= depth => self.bind(*j - depth, &a, depth),
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                self.unify_at(f1, f2, depth) && self.unify_at(a1, a2, depth)
            }
            (Term::Lambda(x1, b1), Term::Lambda(x2, b2))
            | (Term::Pi(x1, b1), Term::Pi(x2, b2)) => {
                x1.sort == x2.sort
                    && x1.level == x2.level
                    && self.unify_at(&x1.ty, &x2.ty, depth)
                    && self.unify_at(b1, b2, depth + 1)
            }
            (Term::Inert(c1, a1), Term::Inert(c2, a2)) => {
                c1 == c2
                    && a1.len() == a2.len()
                    && a1
                        .iter()
                        .zip(a2.iter())
                        .all(|(x, y)| self.unify_at(x, y, depth))
            }
            (Term::Active(d1, p1, s1), Term::Active(d2, p2, s2)) => {
                d1 == d2
                    && p1.len() == p2.len()
                    && p1
                        .iter()
                        .zip(p2.iter())
                        .all(|(x, y)| self.unify_at(x, y, depth))
                    && self.unify_at(s1, s2, depth)
            }
            _ => false,
        }
    }

    fn bind(&mut self, idx: usize, t: &Term, depth: usize) -> bool {
        // The binding must make sense at depth zero: reject terms that
        // mention variables bound inside the unified terms, and occurrences
        // of the variable being solved.
        let lowered = match try_shift_down(t, depth) {
            Some(l) => l,
            None => return false,
        };
        if occurs(&lowered, idx, 0) {
            return false;
        }
        self.map.insert(idx, lowered);
        true
    }
}

fn try_shift_down(t: &Term, amount: usize) -> Option<Term> {
    fn go(t: &Term, amount: usize, cutoff: usize) -> Option<Term> {
        match t {
            Term::Var(i) => {
                if *i < cutoff {
                    Some(Term::Var(*i))
                } else if *i >= cutoff + amount {
                    Some(Term::Var(*i - amount))
                } else {
                    None
                }
            }
            Term::Lambda(a, b) => Some(Term::lam(
                Annot { ty: go(&a.ty, amount, cutoff)?, ..(**a).clone() },
                go(b, amount, cutoff + 1)?,
            )),
            Term::Pi(a, b) => Some(Term::pi(
                Annot { ty: go(&a.ty, amount, cutoff)?, ..(**a).clone() },
                go(b, amount, cutoff + 1)?,
            )),
            Term::App(f, a) => Some(Term::app(go(f, amount, cutoff)?, go(a, amount, cutoff)?)),
            Term::Univ(..) => Some(t.clone()),
            Term::Inert(c, args) => Some(Term::Inert(
                c.clone(),
                args.iter()
                    .map(|x| go(x, amount, cutoff))
                    .collect::<Option<Vec<_>>>()?,
            )),
            Term::Active(d, ps, s) => Some(Term::active(
                d.clone(),
                ps.iter()
                    .map(|x| go(x, amount, cutoff))
                    .collect::<Option<Vec<_>>>()?,
                go(s, amount, cutoff)?,
            )),
        }
    }
    go(t, amount, 0)
}

fn occurs(t: &Term, idx: usize, depth: usize) -> bool {
    match t {
        Term::Var(i) => *i >= depth && *i - depth == idx,
        Term::Lambda(a, b) | Term::Pi(a, b) => {
            occurs(&a.ty, idx, depth) || occurs(b, idx, depth + 1)
        }
        Term::App(f, a) => occurs(f, idx, depth) || occurs(a, idx, depth),
        Term::Univ(..) => false,
        Term::Inert(_, args) => args.iter().any(|x| occurs(x, idx, depth)),
        Term::Active(_, ps, s) => {
            ps.iter().any(|x| occurs(x, idx, depth)) || occurs(s, idx, depth)
        }
    }
}

/// Counts free-variable occurrences of a term over a context of length `n`.
pub fn count_free_vars(t: &Term, n: usize) -> Vec<usize> {
    let mut counts = vec![0; n];
    fn go(t: &Term, depth: usize, counts: &mut Vec<usize>) {
        match t {
            Term::Var(i) => {
                if *i >= depth {
                    let k = *i - depth;
                    let n = counts.len();
                    if k < n {
                        counts[n - 1 - k] += 1;
                    }
                }
            }
            Term::Lambda(a, b) | Term::Pi(a, b) => {
                go(&a.ty, depth, counts);
                go(b, depth + 1, counts);
            }
            Term::App(f, a) => {
                go(f, depth, counts);
                go(a, depth, counts);
            }
            Term::Univ(..) => {}
            Term::Inert(_, args) => args.iter().for_each(|x| go(x, depth, counts)),
            Term::Active(_, ps, s) => {
                ps.iter().for_each(|x| go(x, depth, counts));
                go(s, depth, counts);
            }
        }
    }
    go(t, 0, &mut counts);
    counts
}

/// Checks the linearizability condition on a rule for head constant `decl`.
///
/// (a) Every linear-context variable occurs exactly once in the parameter
/// renaming together with the erased pattern. (b) A rule on a universe
/// domain must be linear. (b') On a positive-type domain, the pattern's
/// codomain indices are unified against the domain indices, the renaming
/// must admit an inverse (the optional witness or the canonical preimage),
/// the inverse composed with the renaming must be the identity on the
/// non-linear context syntactically, and the renaming composed with the
/// inverse the identity on the linear context modulo the unifier.
pub fn check_linearizable(
    sig: &Signature,
    decl: &ConstantDecl,
    rule: &RewriteRule,
) -> TcResult<()> {
    let n_lin = rule.delta_lin.len();

    // (a): occurrence counting over the parameter renaming and the erased
    // pattern. The substitutions attached to recursive metavariables are
    // erased away and do not count.
    let erased = crate::reduce::erase_pattern(&rule.pat, &rule.delta_lin);
    let mut counts = count_free_vars(&erased, n_lin);
    for &x in &rule.param_vars {
        if x < n_lin {
            counts[n_lin - 1 - x] += 1;
        }
    }
    if let Some(pos) = counts.iter().position(|&c| c != 1) {
        return Err(Diag::new(
            "LIN-A",
            format!(
                "linear-context variable {} occurs {} times in the parameter renaming and \
                 erased pattern (each must occur exactly once)",
                pos, counts[pos]
            ),
        ));
    }

    match &decl.dom {
        Dom::Univ(..) => {
            if !rule.is_linear() {
                return Err(Diag::new(
                    "LIN-B",
                    format!(
                        "rule for {} is defined on a universe and must be linear",
                        decl.id.name
                    ),
                ));
            }
            Ok(())
        }
        Dom::Head(_, dom_indices) => {
            let (c, args) = match &rule.pat {
                Pattern::Head(c, args) => (c, args),
                Pattern::Pi(..) => {
                    return Err(Diag::new(
                        "PAT-HEAD",
                        format!(
                            "rule for {} matches Pi but its domain is a type constant",
                            decl.id.name
                        ),
                    ));
                }
            };
            let cref = sig.lookup_id(c)?;
            let cod_indices = match &cref.decl.cod {
                Term::Inert(_, u) => u.clone(),
                _ => {
                    return Err(Diag::new(
                        "PAT-HEAD",
                        format!("pattern head {} does not construct a declared type", c.name),
                    ));
                }
            };
            // Pattern-side indices: the constructor's codomain indices at
            // the erased parameter arguments of the pattern.
            let n_cparams = cref.decl.params.len();
            let erased_params: Substitution = args
                .iter()
                .take(n_cparams)
                .map(|m| Term::Var(m.idx()))
                .collect();
            let lhs: Vec<Term> = cod_indices
                .iter()
                .map(|u| subst_apply(u, &erased_params))
                .collect();
            // Domain-side indices: the head constant's domain indices at the
            // parameter renaming.
            let rhs: Vec<Term> = dom_indices
                .iter()
                .map(|u| subst_apply(u, &rule.param_sub()))
                .collect();
            if lhs.len() != rhs.len() {
                return Err(Diag::new(
                    "LIN-INV",
                    format!("index arity mismatch between {} and {}", c.name, decl.id.name),
                ));
            }
            let mut uni = Unifier::default();
            for (a, b) in lhs.iter().zip(rhs.iter()) {
                if !uni.unify(a, b) {
                    return Err(Diag::new(
                        "LIN-INV",
                        format!(
                            "pattern indices of {} do not unify with the domain indices of {}",
                            c.name, decl.id.name
                        ),
                    ));
                }
            }

            // The inverse renaming: supplied witness or canonical preimage
            // (the first linear-context variable the renaming maps to each
            // non-linear variable).
            let n = rule.delta.len();
            let tau: Vec<usize> = match &rule.tau {
                Some(t) => {
                    if t.len() != n || t.iter().any(|&w| w >= n_lin) {
                        return Err(Diag::new(
                            "LIN-INV",
                            "supplied inverse witness has the wrong shape".to_owned(),
                        ));
                    }
                    t.clone()
                }
                None => {
                    let mut tau = Vec::with_capacity(n);
                    for k in 0..n {
                        let v = n - 1 - k;
                        match rule.renaming.iter().position(|&img| img == v) {
                            Some(j) => tau.push(n_lin - 1 - j),
                            None => {
                                return Err(Diag::new(
                                    "LIN-INV",
                                    format!(
                                        "non-linear context variable {} has no preimage under \
                                         the renaming",
                                        v
                                    ),
                                ));
                            }
                        }
                    }
                    tau
                }
            };

            // tau composed with the renaming must be the identity on the
            // non-linear context, syntactically.
            for (k, &w) in tau.iter().enumerate() {
                let v = n - 1 - k;
                let img = rule.renaming[n_lin - 1 - w];
                if img != v {
                    return Err(Diag::new(
                        "LIN-INV",
                        format!(
                            "the inverse witness composed with the renaming is not the \
                             identity at non-linear variable {}",
                            v
                        ),
                    ));
                }
            }
            // The renaming composed with tau must be the identity on the
            // linear context modulo the unifier.
            for j in 0..n_lin {
                let w = n_lin - 1 - j;
                let v = rule.renaming[j];
                let back = tau[n - 1 - v];
                let a = uni.resolve(&Term::Var(w));
                let b = uni.resolve(&Term::Var(back));
                if a != b {
                    return Err(Diag::new(
                        "LIN-INV",
                        format!(
                            "the renaming is not invertible at linear variable {} modulo the \
                             pattern-index unifier",
                            w
                        ),
                    ));
                }
            }
            Ok(())
        }
        Dom::Tele(_) => Err(Diag::new(
            "TY-CONST",
            format!("{} is not an active constant", decl.id.name),
        )),
    }
}

/// A parametrization restricted to a prefix of its signature, used to check
/// each entry against what precedes it.
fn prefix_prm(prm: &Parametrization, upto: usize, extra: Option<SignatureEntry>) -> Parametrization {
    let mut entries: Vec<SignatureEntry> = prm.sig.entries[..upto].to_vec();
    if let Some(e) = extra {
        entries.push(e);
    }
    Parametrization { sorts: prm.sorts.clone(), sig: Signature::new(entries) }
}

/// Checks a whole parametrization: the sort table, then every signature
/// entry against the prefix before it.
pub fn check_signature(prm: &Parametrization) -> TcResult<()> {
    check_signature_with(prm, &crate::convert::ConversionOptions::default(), crate::reduce::DEFAULT_FUEL)
}

pub fn check_signature_with(
    prm: &Parametrization,
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    check_sort_table(prm)?;
    check_unique_names(prm)?;
    for (k, entry) in prm.sig.entries.iter().enumerate() {
        check_entry(prm, k, entry, opts, fuel)?;
    }
    Ok(())
}

fn check_sort_table(prm: &Parametrization) -> TcResult<()> {
    let mut names = HashSet::new();
    let mut primordial = 0usize;
    for d in &prm.sorts {
        if !names.insert(d.sort.name.clone()) {
            return Err(Diag::new(
                "WF-SIG-SORT",
                format!("sort {} declared twice", d.sort),
            ));
        }
        if d.sort.is_type {
            primordial += 1;
            if d.sort.name != "Type" {
                return Err(Diag::new(
                    "WF-SIG-SORT",
                    format!("primordial sort must be named Type, found {}", d.sort),
                ));
            }
            if d.isolated {
                return Err(Diag::new(
                    "WF-SIG-SORT",
                    "the primordial sort cannot be isolated".to_owned(),
                ));
            }
        } else if d.sort.name == "Type" {
            return Err(Diag::new(
                "WF-SIG-SORT",
                "a non-primordial sort cannot be named Type".to_owned(),
            ));
        }
    }
    if primordial != 1 {
        return Err(Diag::new(
            "WF-SIG-SORT",
            format!("expected exactly one primordial sort, found {}", primordial),
        ));
    }
    Ok(())
}

fn check_unique_names(prm: &Parametrization) -> TcResult<()> {
    let mut names = HashSet::new();
    for entry in &prm.sig.entries {
        for decl in entry.decls() {
            if !names.insert(decl.id.name.clone()) {
                return Err(Diag::new(
                    "WF-SIG-DUP",
                    format!("constant {} declared twice", decl.id.name),
                ));
            }
        }
    }
    Ok(())
}

fn check_entry(
    prm: &Parametrization,
    k: usize,
    entry: &SignatureEntry,
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    match entry {
        SignatureEntry::Positive { ty, ctors } => check_positive(prm, k, ty, ctors, opts, fuel),
        SignatureEntry::Negative { ty, obs } => check_negative(prm, k, ty, obs, opts, fuel),
        SignatureEntry::Eliminator { decl, rules } => {
            check_eliminator(prm, k, decl, rules, opts, fuel)
        }
        SignatureEntry::Builder { decl, rules } => check_builder(prm, k, decl, rules, opts, fuel),
    }
}

/// The universe `cod` of a type constant, or a clause-tagged failure.
fn type_constant_univ(ty: &ConstantDecl, tag: &'static str) -> TcResult<(Sort, Level)> {
    match &ty.cod {
        Term::Univ(s, l) => Ok((s.clone(), *l)),
        _ => Err(Diag::new(
            tag,
            format!("{} must have a universe as codomain", ty.id.name),
        )),
    }
}

/// Clauses shared by positive and negative types: no prior eliminator on
/// this universe, well-formed parameters, empty recursive telescope.
fn check_type_constant_common(
    prm: &Parametrization,
    k: usize,
    ty: &ConstantDecl,
    tag1: &'static str,
    tag2: &'static str,
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<(Sort, Level)> {
    if ty.id.kind != ConstKind::Inert {
        return Err(Diag::new(
            "TY-CONST",
            format!("type constant {} must be inert", ty.id.name),
        ));
    }
    let (s, l) = type_constant_univ(ty, tag2)?;
    if !prm.has_sort(&s) {
        return Err(Diag::new(
            "WF-SIG-SORT",
            format!("{} lands in undeclared sort {}", ty.id.name, s),
        ));
    }
    // Clause 1: the universe of the new type must not already be eliminated.
    for prev in &prm.sig.entries[..k] {
        if let SignatureEntry::Eliminator { decl, .. } = prev {
            if let Dom::Univ(s2, l2) = &decl.dom {
                if *s2 == s && *l2 == l {
                    return Err(Diag::new(
                        tag1,
                        format!(
                            "{} would add a canonical type to Univ {} {}, which {} already \
                             eliminates",
                            ty.id.name, s, l.0, decl.id.name
                        ),
                    ));
                }
            }
        }
    }
    // Clause 2: parameters well-formed, no recursive arguments, and the
    // declaration's classifying data consistent with the codomain.
    match &ty.dom {
        Dom::Tele(t) if t.is_empty() => {}
        _ => {
            return Err(Diag::new(
                tag2,
                format!("type constant {} cannot take recursive arguments", ty.id.name),
            ));
        }
    }
    if ty.codsort != Sort::typ() || ty.codlevel != l.succ() {
        return Err(Diag::new(
            tag2,
            format!("declaration of {} misclassifies its codomain universe", ty.id.name),
        ));
    }
    let pfx = prefix_prm(prm, k, None);
    let env = crate::typing::Env::with_opts(&pfx, opts.clone(), fuel);
    crate::typing::check_context(&env, &ty.params)?;
    Ok((s, l))
}

fn check_positive(
    prm: &Parametrization,
    k: usize,
    ty: &ConstantDecl,
    ctors: &[ConstantDecl],
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    let (s, l) = check_type_constant_common(prm, k, ty, "WF-POS-1", "WF-POS-2", opts, fuel)?;
    // Clause 3: constructors. They are checked with the type constant in
    // scope.
    let with_self = prefix_prm(
        prm,
        k,
        Some(SignatureEntry::Positive { ty: ty.clone(), ctors: ctors.to_vec() }),
    );
    let env = crate::typing::Env::with_opts(&with_self, opts.clone(), fuel);
    for c in ctors {
        check_constructor_shape(&env, ty, c, s.clone(), l, "WF-POS-3")?;
    }
    Ok(())
}

/// Shape and typing of a constructor or builder: well-formed parameters,
/// recursive arguments strictly of the shape `K(indices)`, and a codomain
/// `K(indices)` with indices targeting K's parameters.
fn check_constructor_shape(
    env: &crate::typing::Env,
    ty: &ConstantDecl,
    c: &ConstantDecl,
    s: Sort,
    l: Level,
    tag: &'static str,
) -> TcResult<()> {
    if c.id.kind != ConstKind::Inert {
        return Err(Diag::new(
            "TY-CONST",
            format!("constructor {} must be inert", c.id.name),
        ));
    }
    let tele = match &c.dom {
        Dom::Tele(t) => t,
        _ => {
            return Err(Diag::new(
                tag,
                format!("constructor {} must take a telescope of recursive arguments", c.id.name),
            ));
        }
    };
    for e in tele {
        match &e.ty {
            Term::Inert(head, _) if *head == ty.id => {}
            _ => {
                return Err(Diag::new(
                    tag,
                    format!(
                        "recursive argument of {} must be of the shape {}(..)",
                        c.id.name, ty.id.name
                    ),
                ));
            }
        }
        if e.sort != s || e.level != l {
            return Err(Diag::new(
                tag,
                format!("recursive argument of {} misclassifies its type", c.id.name),
            ));
        }
    }
    crate::typing::check_context(env, &c.full_tele())?;
    match &c.cod {
        Term::Inert(head, u) if *head == ty.id => {
            crate::typing::check_substitution(env, &c.params, u, &ty.params)?;
        }
        _ => {
            return Err(Diag::new(
                tag,
                format!("codomain of {} must be {}(..)", c.id.name, ty.id.name),
            ));
        }
    }
    if c.codsort != s || c.codlevel != l {
        return Err(Diag::new(
            tag,
            format!("declaration of {} misclassifies its codomain", c.id.name),
        ));
    }
    Ok(())
}

fn check_negative(
    prm: &Parametrization,
    k: usize,
    ty: &ConstantDecl,
    obs: &[ConstantDecl],
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    let (s, l) = check_type_constant_common(prm, k, ty, "WF-NEG-1", "WF-NEG-2", opts, fuel)?;
    let iso = prm.is_isolated(&s)?;
    for (i, d) in obs.iter().enumerate() {
        // Clause 3: observations share the type's parameters, observe the
        // type at identity parameters, and have codomains well-formed in the
        // parameters extended by the earlier observations' results.
        if d.id.kind != ConstKind::Active {
            return Err(Diag::new(
                "TY-CONST",
                format!("observation {} must be active", d.id.name),
            ));
        }
        if d.params != ty.params {
            return Err(Diag::new(
                "WF-NEG-3",
                format!("observation {} must share the parameters of {}", d.id.name, ty.id.name),
            ));
        }
        match &d.dom {
            Dom::Head(head, args)
                if *head == ty.id && *args == subst_id(ty.params.len()) => {}
            _ => {
                return Err(Diag::new(
                    "WF-NEG-3",
                    format!(
                        "observation {} must observe {} at identity parameters",
                        d.id.name, ty.id.name
                    ),
                ));
            }
        }
        let partial = prefix_prm(
            prm,
            k,
            Some(SignatureEntry::Negative { ty: ty.clone(), obs: obs[..i].to_vec() }),
        );
        let env = crate::typing::Env::with_opts(&partial, opts.clone(), fuel);
        let mut ctx = ty.params.clone();
        for prev in &obs[..i] {
            ctx.push(CtxEntry::new(prev.cod.clone(), prev.codsort.clone(), prev.codlevel));
        }
        crate::typing::check(
            &env,
            &ctx,
            &d.cod,
            &Term::Univ(d.codsort.clone(), d.codlevel),
            &Sort::typ(),
        )
        .map_err(|e| Diag::new("WF-NEG-3", format!("codomain of {}: {}", d.id.name, e)))?;
        // Clause 4 and the isolation invariant: an isolated record's
        // observations land in isolated sorts.
        if iso && !prm.is_isolated(&prm.sig_or_self_cod_iso(d))? {
            return Err(Diag::new(
                "WF-NEG-4",
                format!(
                    "{} lives in isolated sort {} but observation {} leaves it",
                    ty.id.name, s, d.id.name
                ),
            ));
        }
        let _ = l;
    }
    Ok(())
}

impl Parametrization {
    fn sig_or_self_cod_iso(&self, decl: &ConstantDecl) -> Sort {
        self.sig.cod_iso_sort(decl)
    }
}

fn check_eliminator(
    prm: &Parametrization,
    k: usize,
    decl: &ConstantDecl,
    rules: &[RewriteRule],
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    if decl.id.kind != ConstKind::Active {
        return Err(Diag::new(
            "TY-CONST",
            format!("eliminator {} must be active", decl.id.name),
        ));
    }
    let pfx = prefix_prm(prm, k, None);
    // Resolve the domain and collect the canonical heads progress must cover.
    let (dom_sort, inert_keys): (Sort, Vec<PatKey>) = match &decl.dom {
        Dom::Univ(s, l) => {
            if !prm.has_sort(s) {
                return Err(Diag::new(
                    "WF-SIG-SORT",
                    format!("{} eliminates an undeclared sort {}", decl.id.name, s),
                ));
            }
            let mut keys = vec![PatKey::Pi];
            for prev in &pfx.sig.entries {
                let ty = match prev {
                    SignatureEntry::Positive { ty, .. } | SignatureEntry::Negative { ty, .. } => ty,
                    _ => continue,
                };
                if ty.cod == Term::Univ(s.clone(), *l) {
                    keys.push(PatKey::Const(ty.id.name.clone()));
                }
            }
            (s.clone(), keys)
        }
        Dom::Head(kid, _) => match pfx.sig.lookup(&kid.name) {
            Some(ConstRef { decl: tydecl, role: Role::PosType { ctors } }) => {
                let (s, _) = type_constant_univ(tydecl, "WF-ELIM-DOM")?;
                (s, ctors.iter().map(|c| PatKey::Const(c.id.name.clone())).collect())
            }
            _ => {
                return Err(Diag::new(
                    "WF-ELIM-DOM",
                    format!(
                        "{} must eliminate a universe or a positive type already declared",
                        decl.id.name
                    ),
                ));
            }
        },
        Dom::Tele(_) => {
            return Err(Diag::new(
                "WF-ELIM-DOM",
                format!("{} must eliminate a universe or a positive type", decl.id.name),
            ));
        }
    };

    // Clause 1: isolated domains must stay isolated; otherwise progress.
    if prm.is_isolated(&dom_sort)? {
        let cod_sort = prm.sig.cod_iso_sort(decl);
        if !prm.is_isolated(&cod_sort)? {
            return Err(Diag::new(
                "WF-ELIM-1",
                format!(
                    "{} eliminates isolated sort {} into non-isolated sort {}",
                    decl.id.name, dom_sort, cod_sort
                ),
            ));
        }
    } else {
        let rule_refs: Vec<&RewriteRule> = rules.iter().collect();
        check_progress(&inert_keys, &[&decl.id], &rule_refs)?;
    }

    // Clause 2: typing of parameters, domain and codomain. The constant is
    // brought into scope so the codomain and rules can mention it.
    let with_self = prefix_prm(
        prm,
        k,
        Some(SignatureEntry::Eliminator { decl: decl.clone(), rules: rules.to_vec() }),
    );
    let env = crate::typing::Env::with_opts(&with_self, opts.clone(), fuel);
    crate::typing::check_context(&env, &decl.params)?;
    if let Dom::Head(kid, args) = &decl.dom {
        let kref = with_self.sig.lookup_id(kid)?;
        crate::typing::check_substitution(&env, &decl.params, args, &kref.decl.params)?;
    }
    let mut cod_ctx = decl.params.clone();
    cod_ctx.push(with_self.sig.scrut_entry(decl)?);
    crate::typing::check(
        &env,
        &cod_ctx,
        &decl.cod,
        &Term::Univ(decl.codsort.clone(), decl.codlevel),
        &Sort::typ(),
    )
    .map_err(|e| Diag::new("WF-ELIM-2", format!("codomain of {}: {}", decl.id.name, e)))?;

    // Clause 3: deterministic, well-headed, valid rules.
    check_determinism(rules)?;
    for r in rules {
        if r.head != decl.id {
            return Err(Diag::new(
                "WF-ELIM-3",
                format!("a rule of {} has head symbol {}", decl.id.name, r.head.name),
            ));
        }
        crate::typing::check_rewrite_rule(&env, r)?;
    }
    Ok(())
}

fn check_builder(
    prm: &Parametrization,
    k: usize,
    decl: &ConstantDecl,
    rules: &[RewriteRule],
    opts: &crate::convert::ConversionOptions,
    fuel: u64,
) -> TcResult<()> {
    let pfx = prefix_prm(prm, k, None);
    let (tydecl, obs) = match &decl.cod {
        Term::Inert(kid, _) => match pfx.sig.lookup(&kid.name) {
            Some(ConstRef { decl: tydecl, role: Role::NegType { obs } }) => (tydecl.clone(), obs.to_vec()),
            _ => {
                return Err(Diag::new(
                    "WF-BUILD-DOM",
                    format!(
                        "{} must build a negative type already declared",
                        decl.id.name
                    ),
                ));
            }
        },
        _ => {
            return Err(Diag::new(
                "WF-BUILD-DOM",
                format!("codomain of builder {} must be a negative type", decl.id.name),
            ));
        }
    };
    let (s, l) = type_constant_univ(&tydecl, "WF-BUILD-DOM")?;

    // Clause 1: progress (every observation reacts to this builder) or an
    // isolated sort; components well-formed.
    if !prm.is_isolated(&s)? {
        let obs_ids: Vec<&ConstantId> = obs.iter().map(|d| &d.id).collect();
        let rule_refs: Vec<&RewriteRule> = rules.iter().collect();
        check_progress(&[PatKey::Const(decl.id.name.clone())], &obs_ids, &rule_refs)
            .map_err(|e| Diag::new("WF-BUILD-1", e.message))?;
    }
    let with_self = prefix_prm(
        prm,
        k,
        Some(SignatureEntry::Builder { decl: decl.clone(), rules: rules.to_vec() }),
    );
    let env = crate::typing::Env::with_opts(&with_self, opts.clone(), fuel);
    check_constructor_shape(&env, &tydecl, decl, s, l, "WF-BUILD-1")?;

    // Clause 2: deterministic, well-headed, valid rules.
    check_determinism(rules)?;
    for r in rules {
        if !obs.iter().any(|d| d.id == r.head) {
            return Err(Diag::new(
                "WF-BUILD-2",
                format!(
                    "a rule of {} has head symbol {}, not an observation of {}",
                    decl.id.name, r.head.name, tydecl.id.name
                ),
            ));
        }
        if r.pat.key() != PatKey::Const(decl.id.name.clone()) {
            return Err(Diag::new(
                "WF-BUILD-2",
                format!("a rule of {} matches {} instead of it", decl.id.name, r.pat.key()),
            ));
        }
        crate::typing::check_rewrite_rule(&env, r)?;
    }
    Ok(())
}

/// Composes a substitution with another, convenience re-export for rule
/// handling.
pub fn compose(sigma: &Substitution, rho: &Substitution) -> Substitution {
    subst_compose(sigma, rho)
}
