//! Term language, contexts and substitutions.
//!
//! Terms use de Bruijn indices: `Var(0)` is the innermost binder. Binders
//! (lambda and Pi) carry a full annotation `(type, sort, level)` so that
//! eta-expansion and conversion can synthesize binder types without an
//! ambient context. Universes are Russell-style: a type of sort `s` and a
//! term of type `Univ s i` share one representation.

use std::fmt;

/// A universe hierarchy name. The primordial hierarchy (the one hosting all
/// universes) is flagged with `is_type`; every parametrization has exactly
/// one such sort.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    pub name: String,
    pub is_type: bool,
}

impl Sort {
    /// The primordial sort.
    pub fn typ() -> Sort {
        Sort { name: "Type".to_owned(), is_type: true }
    }

    /// A user-declared, non-primordial sort.
    pub fn named(name: impl Into<String>) -> Sort {
        Sort { name: name.into(), is_type: false }
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Explicit universe level. There is no cumulativity and no level
/// polymorphism; distinct levels give distinct universes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(pub u64);

impl Level {
    pub fn max(self, other: Level) -> Level {
        Level(self.0.max(other.0))
    }
    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether a constant is inert (types, constructors, builders: never reduces)
/// or active (eliminators, observations: carries rewrite rules).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ConstKind {
    Inert,
    Active,
}

/// Name and kind of a constant; unique per signature.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConstantId {
    pub name: String,
    pub kind: ConstKind,
}

impl ConstantId {
    pub fn inert(name: impl Into<String>) -> ConstantId {
        ConstantId { name: name.into(), kind: ConstKind::Inert }
    }
    pub fn active(name: impl Into<String>) -> ConstantId {
        ConstantId { name: name.into(), kind: ConstKind::Active }
    }
}

impl fmt::Debug for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Binder annotation: the domain type together with its sort and level
/// (the level `i` such that the type inhabits `Univ s i`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Annot {
    pub ty: Term,
    pub sort: Sort,
    pub level: Level,
}

impl Annot {
    pub fn new(ty: Term, sort: Sort, level: Level) -> Annot {
        Annot { ty, sort, level }
    }
}

/// The unified syntax of terms and types.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    /// de Bruijn index; 0 is the innermost binder.
    Var(usize),
    /// `fun (x : A @ s # i) => body`
    Lambda(Box<Annot>, Box<Term>),
    /// Application by juxtaposition.
    App(Box<Term>, Box<Term>),
    /// `Pi (x : A @ s # i) -> B`; the sort of the Pi is the sort of `B`.
    Pi(Box<Annot>, Box<Term>),
    /// `Univ s i`, itself of type `Univ Type (i+1)`.
    Univ(Sort, Level),
    /// Fully applied inert constant `c(args)`; args cover params then
    /// recursive arguments.
    Inert(ConstantId, Vec<Term>),
    /// Fully applied active constant `d(params; scrutinee)`.
    Active(ConstantId, Vec<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }
    pub fn lam(annot: Annot, body: Term) -> Term {
        Term::Lambda(Box::new(annot), Box::new(body))
    }
    pub fn pi(annot: Annot, cod: Term) -> Term {
        Term::Pi(Box::new(annot), Box::new(cod))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }
    pub fn univ(sort: Sort, level: u64) -> Term {
        Term::Univ(sort, Level(level))
    }
    pub fn inert(id: ConstantId, args: Vec<Term>) -> Term {
        Term::Inert(id, args)
    }
    pub fn active(id: ConstantId, params: Vec<Term>, scrut: Term) -> Term {
        Term::Active(id, params, Box::new(scrut))
    }

    /// Non-dependent function type `A -> B` (domain annotation given, `B`
    /// does not mention the bound variable so it is shifted under the binder).
    pub fn arrow(annot: Annot, cod: Term) -> Term {
        Term::pi(annot, shift(&cod, 1, 0))
    }
}

/// One context entry: a type together with its sort and level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CtxEntry {
    pub ty: Term,
    pub sort: Sort,
    pub level: Level,
}

impl CtxEntry {
    pub fn new(ty: Term, sort: Sort, level: Level) -> CtxEntry {
        CtxEntry { ty, sort, level }
    }
}

/// Ordered telescope; entry 0 is outermost. Entry k's type is scoped over
/// entries 0..k.
pub type Context = Vec<CtxEntry>;

/// Parallel substitution for a telescope, in telescope order: entry k
/// instantiates the telescope's k-th (outermost-first) variable.
pub type Substitution = Vec<Term>;

/// Looks up `Var(i)` in `ctx`, returning the entry with its type shifted so
/// it is well-scoped in the whole context.
pub fn ctx_lookup(ctx: &Context, i: usize) -> Option<CtxEntry> {
    if i >= ctx.len() {
        return None;
    }
    let entry = &ctx[ctx.len() - 1 - i];
    Some(CtxEntry {
        ty: shift(&entry.ty, (i + 1) as i64, 0),
        sort: entry.sort.clone(),
        level: entry.level,
    })
}

/// Moves every free index >= `cutoff` by `amount`. Underflow of an index
/// signals an ill-scoped caller bug and panics.
pub fn shift(t: &Term, amount: i64, cutoff: usize) -> Term {
    match t {
        Term::Var(i) => {
            if *i >= cutoff {
                let moved = *i as i64 + amount;
                assert!(moved >= 0, "shift underflow on index {} by {}", i, amount);
                Term::Var(moved as usize)
            } else {
                Term::Var(*i)
            }
        }
        Term::Lambda(annot, body) => Term::lam(
            shift_annot(annot, amount, cutoff),
            shift(body, amount, cutoff + 1),
        ),
        Term::App(f, a) => Term::app(shift(f, amount, cutoff), shift(a, amount, cutoff)),
        Term::Pi(annot, cod) => Term::pi(
            shift_annot(annot, amount, cutoff),
            shift(cod, amount, cutoff + 1),
        ),
        Term::Univ(s, l) => Term::Univ(s.clone(), *l),
        Term::Inert(c, args) => Term::Inert(
            c.clone(),
            args.iter().map(|a| shift(a, amount, cutoff)).collect(),
        ),
        Term::Active(d, params, scrut) => Term::active(
            d.clone(),
            params.iter().map(|a| shift(a, amount, cutoff)).collect(),
            shift(scrut, amount, cutoff),
        ),
    }
}

fn shift_annot(annot: &Annot, amount: i64, cutoff: usize) -> Annot {
    Annot {
        ty: shift(&annot.ty, amount, cutoff),
        sort: annot.sort.clone(),
        level: annot.level,
    }
}

/// Simultaneous capture-avoiding substitution. `t` is scoped over an ambient
/// context extended with a telescope of length `sub.len()`; the result is
/// scoped over the ambient context alone, with indices above the telescope
/// shifted down by its length. Substitution entries are in telescope order
/// (entry 0 replaces the outermost telescope variable).
pub fn subst_apply(t: &Term, sub: &Substitution) -> Term {
    subst_at(t, sub, 0)
}

fn subst_at(t: &Term, sub: &Substitution, cutoff: usize) -> Term {
    let n = sub.len();
    match t {
        Term::Var(i) => {
            if *i < cutoff {
                Term::Var(*i)
            } else {
                let k = *i - cutoff;
                if k < n {
                    shift(&sub[n - 1 - k], cutoff as i64, 0)
                } else {
                    Term::Var(*i - n)
                }
            }
        }
        Term::Lambda(annot, body) => Term::lam(
            subst_annot(annot, sub, cutoff),
            subst_at(body, sub, cutoff + 1),
        ),
        Term::App(f, a) => Term::app(subst_at(f, sub, cutoff), subst_at(a, sub, cutoff)),
        Term::Pi(annot, cod) => Term::pi(
            subst_annot(annot, sub, cutoff),
            subst_at(cod, sub, cutoff + 1),
        ),
        Term::Univ(s, l) => Term::Univ(s.clone(), *l),
        Term::Inert(c, args) => Term::Inert(
            c.clone(),
            args.iter().map(|a| subst_at(a, sub, cutoff)).collect(),
        ),
        Term::Active(d, params, scrut) => Term::active(
            d.clone(),
            params.iter().map(|a| subst_at(a, sub, cutoff)).collect(),
            subst_at(scrut, sub, cutoff),
        ),
    }
}

fn subst_annot(annot: &Annot, sub: &Substitution, cutoff: usize) -> Annot {
    Annot {
        ty: subst_at(&annot.ty, sub, cutoff),
        sort: annot.sort.clone(),
        level: annot.level,
    }
}

/// Substitutes the single innermost variable of `t`, as in beta reduction:
/// `t` is scoped under one extra binder, `u` under the ambient context.
pub fn subst_one(t: &Term, u: &Term) -> Term {
    subst_apply(t, &vec![u.clone()])
}

/// Composition `sigma[rho]`: applies `rho` to every entry of `sigma`, so
/// that `t[sigma][rho] == t[sigma[rho]]` whenever scoping lines up.
pub fn subst_compose(sigma: &Substitution, rho: &Substitution) -> Substitution {
    sigma.iter().map(|t| subst_apply(t, rho)).collect()
}

/// The identity substitution for a telescope of length `n`, scoped in a
/// context ending with that telescope.
pub fn subst_id(n: usize) -> Substitution {
    (0..n).map(|k| Term::Var(n - 1 - k)).collect()
}

/// Applies a substitution pointwise under a telescope: entry k of `ctx` is
/// scoped over `sub`'s target telescope extended by entries 0..k, so the
/// substitution is weakened accordingly as we walk the telescope.
pub fn subst_context(ctx: &Context, sub: &Substitution) -> Context {
    ctx.iter()
        .enumerate()
        .map(|(k, e)| CtxEntry {
            ty: subst_at(&e.ty, sub, k),
            sort: e.sort.clone(),
            level: e.level,
        })
        .collect()
}

/// Alpha equivalence. De Bruijn representation makes this structural
/// equality, annotations included.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}
