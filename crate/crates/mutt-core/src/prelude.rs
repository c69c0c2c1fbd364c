//! Ready-made parametrizations.
//!
//! `base` is the primordial theory: empty, unit, booleans, naturals, lists,
//! dependent pairs, propositional equality and a boxing type, each with its
//! eliminator. On top of it, `prop_extension` adds a proposition sort with
//! singleton elimination, `exc_extension` adds an exception sort with a
//! universe eliminator, `sprop_extension` adds a sort intended to be run
//! with definitional irrelevance, and `axiom_extension` carves out a fresh
//! isolated sort in which an arbitrary axiom can be postulated without
//! endangering the rest of the theory.

use crate::diag::{Diag, TcResult};
use crate::sig::{
    ConstantDecl, Dom, MetaVar, Parametrization, Pattern, RewriteRule, Role, Signature,
    SignatureEntry, SortDecl,
};
use crate::syntax::{
    shift, subst_id, Annot, ConstantId, Context, CtxEntry, Level, Sort, Term,
};

fn ty() -> Sort {
    Sort::typ()
}

fn v(i: usize) -> Term {
    Term::Var(i)
}

fn an(t: Term, s: Sort, l: u64) -> Annot {
    Annot::new(t, s, Level(l))
}

fn e(t: Term, s: Sort, l: u64) -> CtxEntry {
    CtxEntry::new(t, s, Level(l))
}

fn inert(name: &str, args: Vec<Term>) -> Term {
    Term::Inert(ConstantId::inert(name), args)
}

fn u0() -> Term {
    Term::univ(ty(), 0)
}

/// A type constant `name : params -> Univ sort level`.
fn tycon(name: &str, params: Context, sort: Sort, level: u64) -> ConstantDecl {
    ConstantDecl {
        id: ConstantId::inert(name),
        params,
        dom: Dom::Tele(Vec::new()),
        cod: Term::univ(sort, level),
        codsort: ty(),
        codlevel: Level(level + 1),
    }
}

/// A constructor `name : params -> tele -> k(indices)`.
fn ctor(
    name: &str,
    params: Context,
    tele: Context,
    k: &str,
    indices: Vec<Term>,
    sort: Sort,
    level: u64,
) -> ConstantDecl {
    ConstantDecl {
        id: ConstantId::inert(name),
        params,
        dom: Dom::Tele(tele),
        cod: inert(k, indices),
        codsort: sort,
        codlevel: Level(level),
    }
}

fn plain(name: &str, idx: usize) -> MetaVar {
    MetaVar::Plain { name: name.to_owned(), idx }
}

fn rec(name: &str, idx: usize, sub: Vec<Term>) -> MetaVar {
    MetaVar::Rec { name: name.to_owned(), idx, sub }
}

/// Builds the standard eliminator for a non-recursive positive type: one
/// motive into `Univ motive_sort motive_level`, one branch per constructor,
/// and one rule per constructor. Constructors must extend the type's
/// parameters and take no recursive arguments.
pub fn simple_elim(
    prm: &Parametrization,
    k_name: &str,
    elim_name: &str,
    motive_sort: Sort,
    motive_level: u64,
) -> TcResult<SignatureEntry> {
    let kref = prm
        .sig
        .lookup(k_name)
        .ok_or_else(|| Diag::new("TY-CONST", format!("unknown type constant {}", k_name)))?;
    let (kdecl, ctors) = match kref.role {
        Role::PosType { ctors } => (kref.decl.clone(), ctors.to_vec()),
        _ => {
            return Err(Diag::new(
                "TY-CONST",
                format!("{} is not a positive type", k_name),
            ));
        }
    };
    let (k_sort, k_level) = match &kdecl.cod {
        Term::Univ(s, l) => (s.clone(), l.0),
        _ => unreachable!(),
    };
    let n = kdecl.params.len();
    let c_count = ctors.len();

    // Per constructor: the extra parameters beyond the type's own.
    let mut extras: Vec<Context> = Vec::new();
    for c in &ctors {
        if c.params.len() < n || c.params[..n] != kdecl.params[..] {
            return Err(Diag::new(
                "TY-CONST",
                format!("constructor {} does not extend the parameters of {}", c.id.name, k_name),
            ));
        }
        if !c.tele().is_empty() {
            return Err(Diag::new(
                "TY-CONST",
                format!("constructor {} is recursive; build its eliminator by hand", c.id.name),
            ));
        }
        extras.push(c.params[n..].to_vec());
    }

    // Parameters: the type's parameters, the motive, one branch per
    // constructor.
    let mut params = kdecl.params.clone();
    let motive_ty = Term::pi(
        an(
            inert(k_name, (0..n).map(|i| v(n - 1 - i)).collect()),
            k_sort.clone(),
            k_level,
        ),
        Term::univ(motive_sort.clone(), motive_level),
    );
    params.push(e(motive_ty, ty(), motive_level + 1));
    for (c, ext) in ctors.iter().zip(extras.iter()) {
        let m = ext.len();
        // Branch type over (type params, motive): extras then the motive
        // applied to the constructor.
        let mut branch = Term::app(
            v(m),
            inert(
                &c.id.name,
                (0..n)
                    .map(|i| v(m + 1 + n - 1 - i))
                    .chain((0..m).map(|j| v(m - 1 - j)))
                    .collect(),
            ),
        );
        let mut level = motive_level;
        for j in (0..m).rev() {
            let dom = shift(&ext[j].ty, 1, j);
            level = level.max(ext[j].level.0);
            branch = Term::pi(
                Annot::new(dom, ext[j].sort.clone(), ext[j].level),
                branch,
            );
        }
        let c_index = params.len() - n - 1;
        params.push(e(shift(&branch, c_index as i64, 0), motive_sort.clone(), level));
    }
    let total = params.len();

    let decl = ConstantDecl {
        id: ConstantId::active(elim_name),
        params,
        dom: Dom::Head(
            kdecl.id.clone(),
            (0..n).map(|i| v(total - 1 - i)).collect(),
        ),
        cod: Term::app(v(1 + c_count), v(0)),
        codsort: motive_sort.clone(),
        codlevel: Level(motive_level),
    };

    let mut rules = Vec::new();
    for (c_idx, (c, ext)) in ctors.iter().zip(extras.iter()).enumerate() {
        let m = ext.len();
        // Non-linear context: the eliminator's parameters plus the
        // constructor's extra arguments.
        let mut delta = decl.params.clone();
        for (j, x) in ext.iter().enumerate() {
            delta.push(CtxEntry::new(
                shift(&x.ty, (1 + c_count) as i64, j),
                x.sort.clone(),
                x.level,
            ));
        }
        let d_len = delta.len();
        // Linear context: the eliminator's parameters plus fresh copies of
        // the type parameters and the extras; the copies' types are verbatim
        // because their relative layout matches the originals.
        let mut delta_lin = decl.params.clone();
        delta_lin.extend(kdecl.params.iter().cloned());
        delta_lin.extend(ext.iter().cloned());
        let l_len = delta_lin.len();

        let mut renaming: Vec<usize> = (0..total).map(|p| d_len - 1 - p).collect();
        renaming.extend((0..n).map(|i| d_len - 1 - i));
        renaming.extend((0..m).map(|j| m - 1 - j));

        let param_vars: Vec<usize> = (0..total).map(|p| l_len - 1 - p).collect();
        let pat_args: Vec<MetaVar> = (0..n)
            .map(|i| plain(&format!("p{}", i), n + m - 1 - i))
            .chain((0..m).map(|j| plain(&format!("x{}", j), m - 1 - j)))
            .collect();
        let rhs = Term::apps(
            v(c_count + m - 1 - c_idx),
            (0..m).map(|j| v(m - 1 - j)),
        );
        rules.push(RewriteRule {
            head: decl.id.clone(),
            delta,
            delta_lin,
            renaming,
            param_vars,
            pat: Pattern::Head(c.id.clone(), pat_args),
            rhs,
            tau: None,
        });
    }
    Ok(SignatureEntry::Eliminator { decl, rules })
}

/// Grants an eliminator into primordial-sort motives for a proposition-like
/// inductive, but only under the singleton criterion: at most one
/// constructor, whose non-parameter arguments all live in the type's own
/// sort, and no recursive arguments.
pub fn singleton_rec(
    prm: &Parametrization,
    k_name: &str,
    elim_name: &str,
) -> TcResult<SignatureEntry> {
    let kref = prm
        .sig
        .lookup(k_name)
        .ok_or_else(|| Diag::new("TY-CONST", format!("unknown type constant {}", k_name)))?;
    let (kdecl, ctors) = match kref.role {
        Role::PosType { ctors } => (kref.decl.clone(), ctors.to_vec()),
        _ => {
            return Err(Diag::new(
                "TY-CONST",
                format!("{} is not a positive type", k_name),
            ));
        }
    };
    let k_sort = match &kdecl.cod {
        Term::Univ(s, _) => s.clone(),
        _ => unreachable!(),
    };
    if ctors.len() > 1 {
        return Err(Diag::new(
            "WF-SINGLETON",
            format!("{} has {} constructors; at most one is allowed", k_name, ctors.len()),
        ));
    }
    let n = kdecl.params.len();
    for c in &ctors {
        if !c.tele().is_empty() {
            return Err(Diag::new(
                "WF-SINGLETON",
                format!("constructor {} has recursive arguments", c.id.name),
            ));
        }
        for x in c.params.iter().skip(n) {
            if x.sort != k_sort {
                return Err(Diag::new(
                    "WF-SINGLETON",
                    format!(
                        "constructor {} carries an argument at sort {}, outside {}",
                        c.id.name, x.sort, k_sort
                    ),
                ));
            }
        }
    }
    simple_elim(prm, k_name, elim_name, ty(), 0)
}

fn push(prm: &mut Parametrization, entry: SignatureEntry) {
    prm.sig.entries.push(entry);
}

fn push_elim(prm: &mut Parametrization, k: &str, name: &str, s: Sort, l: u64) {
    let entry = simple_elim(prm, k, name, s, l).expect("prelude eliminator");
    push(prm, entry);
}

/// The base theory over the primordial sort alone.
pub fn base() -> Parametrization {
    let mut p = Parametrization::base();

    // Empty and its vacuous eliminator.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Empty", vec![], ty(), 0),
        ctors: vec![],
    });
    push_elim(&mut p, "Empty", "empty_elim", ty(), 0);

    // Unit.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Unit", vec![], ty(), 0),
        ctors: vec![ctor("tt", vec![], vec![], "Unit", vec![], ty(), 0)],
    });

    // Booleans.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Bool", vec![], ty(), 0),
        ctors: vec![
            ctor("true", vec![], vec![], "Bool", vec![], ty(), 0),
            ctor("false", vec![], vec![], "Bool", vec![], ty(), 0),
        ],
    });
    push_elim(&mut p, "Bool", "bool_elim", ty(), 0);

    // Naturals, with a hand-built recursor.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Nat", vec![], ty(), 0),
        ctors: vec![
            ctor("0", vec![], vec![], "Nat", vec![], ty(), 0),
            ctor("S", vec![], vec![e(inert("Nat", vec![]), ty(), 0)], "Nat", vec![], ty(), 0),
        ],
    });
    let nat = |args| inert("Nat", args);
    let nat_elim = ConstantDecl {
        id: ConstantId::active("nat_elim"),
        params: vec![
            e(Term::pi(an(nat(vec![]), ty(), 0), u0()), ty(), 1),
            e(Term::app(v(0), inert("0", vec![])), ty(), 0),
            e(
                Term::pi(
                    an(nat(vec![]), ty(), 0),
                    Term::pi(
                        an(Term::app(v(2), v(0)), ty(), 0),
                        Term::app(v(3), inert("S", vec![v(1)])),
                    ),
                ),
                ty(),
                0,
            ),
        ],
        dom: Dom::Head(ConstantId::inert("Nat"), vec![]),
        cod: Term::app(v(3), v(0)),
        codsort: ty(),
        codlevel: Level(0),
    };
    let nat_rules = vec![
        RewriteRule::linear(
            nat_elim.id.clone(),
            nat_elim.params.clone(),
            vec![2, 1, 0],
            Pattern::Head(ConstantId::inert("0"), vec![]),
            v(1),
        ),
        RewriteRule::linear(
            nat_elim.id.clone(),
            {
                let mut d = nat_elim.params.clone();
                d.push(e(nat(vec![]), ty(), 0));
                d
            },
            vec![3, 2, 1],
            Pattern::Head(ConstantId::inert("S"), vec![rec("n", 0, vec![v(3), v(2), v(1)])]),
            Term::apps(v(2), [v(1), v(0)]),
        ),
    ];
    push(&mut p, SignatureEntry::Eliminator { decl: nat_elim, rules: nat_rules });

    // Lists, with a hand-built recursor.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("List", vec![e(u0(), ty(), 1)], ty(), 0),
        ctors: vec![
            ctor("nil", vec![e(u0(), ty(), 1)], vec![], "List", vec![v(0)], ty(), 0),
            ctor(
                "cons",
                vec![e(u0(), ty(), 1), e(v(0), ty(), 0)],
                vec![e(inert("List", vec![v(1)]), ty(), 0)],
                "List",
                vec![v(1)],
                ty(),
                0,
            ),
        ],
    });
    let listrec_params = vec![
        e(u0(), ty(), 1),
        e(Term::pi(an(inert("List", vec![v(0)]), ty(), 0), u0()), ty(), 1),
        e(Term::app(v(0), inert("nil", vec![v(1)])), ty(), 0),
        e(
            Term::pi(
                an(v(2), ty(), 0),
                Term::pi(
                    an(inert("List", vec![v(3)]), ty(), 0),
                    Term::pi(
                        an(Term::app(v(3), v(0)), ty(), 0),
                        Term::app(v(4), inert("cons", vec![v(5), v(2), v(1)])),
                    ),
                ),
            ),
            ty(),
            0,
        ),
    ];
    let listrec = ConstantDecl {
        id: ConstantId::active("listrec"),
        params: listrec_params.clone(),
        dom: Dom::Head(ConstantId::inert("List"), vec![v(3)]),
        cod: Term::app(v(3), v(0)),
        codsort: ty(),
        codlevel: Level(0),
    };
    let list_rules = vec![
        RewriteRule {
            head: listrec.id.clone(),
            delta: listrec_params.clone(),
            delta_lin: {
                let mut d = listrec_params.clone();
                d.push(e(u0(), ty(), 1));
                d
            },
            renaming: vec![3, 2, 1, 0, 3],
            param_vars: vec![4, 3, 2, 1],
            pat: Pattern::Head(ConstantId::inert("nil"), vec![plain("B", 0)]),
            rhs: v(1),
            tau: None,
        },
        RewriteRule {
            head: listrec.id.clone(),
            delta: {
                let mut d = listrec_params.clone();
                d.push(e(v(3), ty(), 0));
                d.push(e(inert("List", vec![v(4)]), ty(), 0));
                d
            },
            delta_lin: {
                let mut d = listrec_params.clone();
                d.push(e(u0(), ty(), 1));
                d.push(e(v(0), ty(), 0));
                d.push(e(inert("List", vec![v(1)]), ty(), 0));
                d
            },
            renaming: vec![5, 4, 3, 2, 5, 1, 0],
            param_vars: vec![6, 5, 4, 3],
            pat: Pattern::Head(
                ConstantId::inert("cons"),
                vec![plain("B", 2), plain("b", 1), rec("m", 0, vec![v(6), v(5), v(4), v(3)])],
            ),
            rhs: Term::apps(v(3), [v(2), v(1), v(0)]),
            tau: None,
        },
    ];
    push(&mut p, SignatureEntry::Eliminator { decl: listrec, rules: list_rules });

    // Dependent pairs: a negative record with a builder.
    let sigma_params = vec![e(u0(), ty(), 1), e(Term::pi(an(v(0), ty(), 0), u0()), ty(), 1)];
    let fst = ConstantDecl {
        id: ConstantId::active("fst"),
        params: sigma_params.clone(),
        dom: Dom::Head(ConstantId::inert("Sigma"), subst_id(2)),
        cod: v(1),
        codsort: ty(),
        codlevel: Level(0),
    };
    let snd = ConstantDecl {
        id: ConstantId::active("snd"),
        params: sigma_params.clone(),
        dom: Dom::Head(ConstantId::inert("Sigma"), subst_id(2)),
        cod: Term::app(v(1), v(0)),
        codsort: ty(),
        codlevel: Level(0),
    };
    push(&mut p, SignatureEntry::Negative {
        ty: tycon("Sigma", sigma_params.clone(), ty(), 0),
        obs: vec![fst, snd],
    });
    let pair_params = vec![
        e(u0(), ty(), 1),
        e(Term::pi(an(v(0), ty(), 0), u0()), ty(), 1),
        e(v(1), ty(), 0),
        e(Term::app(v(1), v(0)), ty(), 0),
    ];
    let pair = ConstantDecl {
        id: ConstantId::inert("pair"),
        params: pair_params.clone(),
        dom: Dom::Tele(vec![]),
        cod: inert("Sigma", vec![v(3), v(2)]),
        codsort: ty(),
        codlevel: Level(0),
    };
    let pair_lin = {
        let mut d = sigma_params.clone();
        d.push(e(u0(), ty(), 1));
        d.push(e(Term::pi(an(v(0), ty(), 0), u0()), ty(), 1));
        d.push(e(v(1), ty(), 0));
        d.push(e(Term::app(v(1), v(0)), ty(), 0));
        d
    };
    let pair_rule = |head: &str, rhs: Term| RewriteRule {
        head: ConstantId::active(head),
        delta: pair_params.clone(),
        delta_lin: pair_lin.clone(),
        renaming: vec![3, 2, 3, 2, 1, 0],
        param_vars: vec![5, 4],
        pat: Pattern::Head(
            ConstantId::inert("pair"),
            vec![plain("C", 3), plain("D", 2), plain("c", 1), plain("d", 0)],
        ),
        rhs,
        tau: None,
    };
    push(&mut p, SignatureEntry::Builder {
        decl: pair,
        rules: vec![pair_rule("fst", v(1)), pair_rule("snd", v(0))],
    });

    // Propositional equality with its eliminator.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Id", vec![e(u0(), ty(), 1), e(v(0), ty(), 0), e(v(1), ty(), 0)], ty(), 0),
        ctors: vec![ctor(
            "refl",
            vec![e(u0(), ty(), 1), e(v(0), ty(), 0)],
            vec![],
            "Id",
            vec![v(1), v(0), v(0)],
            ty(),
            0,
        )],
    });
    let j_params = vec![
        e(u0(), ty(), 1),
        e(v(0), ty(), 0),
        e(v(1), ty(), 0),
        e(
            Term::pi(
                an(v(2), ty(), 0),
                Term::pi(an(inert("Id", vec![v(3), v(2), v(0)]), ty(), 0), u0()),
            ),
            ty(),
            1,
        ),
        e(Term::apps(v(0), [v(2), inert("refl", vec![v(3), v(2)])]), ty(), 0),
    ];
    let j = ConstantDecl {
        id: ConstantId::active("J"),
        params: j_params.clone(),
        dom: Dom::Head(ConstantId::inert("Id"), vec![v(4), v(3), v(2)]),
        cod: Term::apps(v(2), [v(3), v(0)]),
        codsort: ty(),
        codlevel: Level(0),
    };
    let j_rule = RewriteRule {
        head: j.id.clone(),
        delta: vec![
            e(u0(), ty(), 1),
            e(v(0), ty(), 0),
            e(
                Term::pi(
                    an(v(1), ty(), 0),
                    Term::pi(an(inert("Id", vec![v(2), v(1), v(0)]), ty(), 0), u0()),
                ),
                ty(),
                1,
            ),
            e(Term::apps(v(0), [v(1), inert("refl", vec![v(2), v(1)])]), ty(), 0),
        ],
        delta_lin: {
            let mut d = j_params.clone();
            d.push(e(u0(), ty(), 1));
            d.push(e(v(0), ty(), 0));
            d
        },
        renaming: vec![3, 2, 2, 1, 0, 3, 2],
        param_vars: vec![6, 5, 4, 3, 2],
        pat: Pattern::Head(ConstantId::inert("refl"), vec![plain("B", 1), plain("b", 0)]),
        rhs: v(0),
        tau: None,
    };
    push(&mut p, SignatureEntry::Eliminator { decl: j, rules: vec![j_rule] });

    // Boxing of the primordial sort.
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("BoxT", vec![e(u0(), ty(), 1)], ty(), 0),
        ctors: vec![ctor(
            "boxT",
            vec![e(u0(), ty(), 1), e(v(0), ty(), 0)],
            vec![],
            "BoxT",
            vec![v(1)],
            ty(),
            0,
        )],
    });
    push_elim(&mut p, "BoxT", "boxelim", ty(), 0);

    p
}

/// A proposition sort with singleton elimination.
pub fn prop_extension() -> Parametrization {
    let prop = Sort::named("Prop");
    let mut p = base();
    p.sorts.push(SortDecl { sort: prop.clone(), isolated: false });

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Bool_P", vec![], prop.clone(), 0),
        ctors: vec![
            ctor("trueP", vec![], vec![], "Bool_P", vec![], prop.clone(), 0),
            ctor("falseP", vec![], vec![], "Bool_P", vec![], prop.clone(), 0),
        ],
    });
    push_elim(&mut p, "Bool_P", "boolP_elim", prop.clone(), 0);

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Unit_P", vec![], prop.clone(), 0),
        ctors: vec![ctor("ttP", vec![], vec![], "Unit_P", vec![], prop.clone(), 0)],
    });

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Empty_P", vec![], prop.clone(), 0),
        ctors: vec![],
    });
    let empty_p_rec = singleton_rec(&p, "Empty_P", "emptyP_rec").expect("Empty_P is a singleton");
    push(&mut p, empty_p_rec);

    let andp_params = vec![
        e(Term::univ(prop.clone(), 0), ty(), 1),
        e(Term::univ(prop.clone(), 0), ty(), 1),
    ];
    push(&mut p, SignatureEntry::Positive {
        ty: tycon("And_P", andp_params.clone(), prop.clone(), 0),
        ctors: vec![ctor(
            "conj",
            vec![
                e(Term::univ(prop.clone(), 0), ty(), 1),
                e(Term::univ(prop.clone(), 0), ty(), 1),
                e(v(1), prop.clone(), 0),
                e(v(1), prop.clone(), 0),
            ],
            vec![],
            "And_P",
            vec![v(3), v(2)],
            prop.clone(),
            0,
        )],
    });
    push_elim(&mut p, "And_P", "andP_elim", prop, 0);

    p
}

/// An exception sort: an error boolean with a catch eliminator, a boxed
/// universe, and `raise` turning any exceptional type into its designated
/// exceptional inhabitant.
pub fn exc_extension() -> Parametrization {
    let exc = Sort::named("exc");
    let mut p = base();
    p.sorts.push(SortDecl { sort: exc.clone(), isolated: false });

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Bool_E", vec![], exc.clone(), 0),
        ctors: vec![
            ctor("true_e", vec![], vec![], "Bool_E", vec![], exc.clone(), 0),
            ctor("false_e", vec![], vec![], "Bool_E", vec![], exc.clone(), 0),
            ctor("bool_err", vec![], vec![], "Bool_E", vec![], exc.clone(), 0),
        ],
    });
    push_elim(&mut p, "Bool_E", "catchB", exc.clone(), 0);

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("BoxU", vec![], exc.clone(), 0),
        ctors: vec![
            ctor(
                "box_u",
                vec![e(Term::univ(exc.clone(), 0), ty(), 1)],
                vec![],
                "BoxU",
                vec![],
                exc.clone(),
                0,
            ),
            ctor("deamon", vec![], vec![], "BoxU", vec![], exc.clone(), 0),
        ],
    });

    // raise: the universe eliminator of the exception sort. It must come
    // after every exceptional type constant.
    let raise = ConstantDecl {
        id: ConstantId::active("raise"),
        params: vec![],
        dom: Dom::Univ(exc.clone(), Level(0)),
        cod: v(0),
        codsort: exc.clone(),
        codlevel: Level(0),
    };
    let raise_rules = vec![
        RewriteRule::linear(
            raise.id.clone(),
            vec![],
            vec![],
            Pattern::Head(ConstantId::inert("Bool_E"), vec![]),
            inert("bool_err", vec![]),
        ),
        RewriteRule::linear(
            raise.id.clone(),
            vec![],
            vec![],
            Pattern::Head(ConstantId::inert("BoxU"), vec![]),
            inert("deamon", vec![]),
        ),
        RewriteRule::linear(
            raise.id.clone(),
            vec![
                e(Term::univ(exc.clone(), 0), ty(), 1),
                e(
                    Term::pi(an(v(0), exc.clone(), 0), Term::univ(exc.clone(), 0)),
                    ty(),
                    1,
                ),
            ],
            vec![],
            Pattern::Pi(exc.clone(), plain("A", 1), rec("B", 0, vec![])),
            v(0),
        ),
    ];
    push(&mut p, SignatureEntry::Eliminator { decl: raise, rules: raise_rules });

    // unbox: projects the boxed universe back out; the error box unboxes to
    // the default exceptional type.
    let unbox = ConstantDecl {
        id: ConstantId::active("unbox"),
        params: vec![],
        dom: Dom::Head(ConstantId::inert("BoxU"), vec![]),
        cod: Term::univ(exc.clone(), 0),
        codsort: ty(),
        codlevel: Level(1),
    };
    let unbox_rules = vec![
        RewriteRule::linear(
            unbox.id.clone(),
            vec![e(Term::univ(exc.clone(), 0), ty(), 1)],
            vec![],
            Pattern::Head(ConstantId::inert("box_u"), vec![plain("A", 0)]),
            v(0),
        ),
        RewriteRule::linear(
            unbox.id.clone(),
            vec![],
            vec![],
            Pattern::Head(ConstantId::inert("deamon"), vec![]),
            inert("Bool_E", vec![]),
        ),
    ];
    push(&mut p, SignatureEntry::Eliminator { decl: unbox, rules: unbox_rules });

    p
}

/// A sort intended to be run with definitional irrelevance (the conversion
/// option `irrelevant_sorts` is the caller's choice, not the signature's).
pub fn sprop_extension() -> Parametrization {
    let sprop = Sort::named("sProp");
    let mut p = base();
    p.sorts.push(SortDecl { sort: sprop.clone(), isolated: false });

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Empty_s", vec![], sprop.clone(), 0),
        ctors: vec![],
    });
    push_elim(&mut p, "Empty_s", "emptyS_rec", ty(), 0);

    push(&mut p, SignatureEntry::Positive {
        ty: tycon("Unit_s", vec![], sprop, 0),
        ctors: vec![ctor("ttS", vec![], vec![], "Unit_s", vec![], Sort::named("sProp"), 0)],
    });

    p
}

/// Extends `start` with a fresh isolated sort carrying a small kit (unit,
/// booleans, empty, a boxing of the primordial sort) and one postulated
/// axiom: an active constant on the unit type with the axiom's type as
/// codomain and no rules. Isolation is what makes the ruleless constant
/// admissible.
pub fn axiom_extension(
    start: &Parametrization,
    sort_name: &str,
    axiom_name: &str,
    axiom_type: Term,
    axiom_level: u64,
) -> TcResult<Parametrization> {
    let s = Sort::named(sort_name);
    let mut p = start.clone();
    p.sorts.push(SortDecl { sort: s.clone(), isolated: true });
    let nm = |stem: &str| format!("{}_{}", stem, sort_name);

    push(&mut p, SignatureEntry::Positive {
        ty: tycon(&nm("Unit"), vec![], s.clone(), 0),
        ctors: vec![ctor(&nm("tt"), vec![], vec![], &nm("Unit"), vec![], s.clone(), 0)],
    });
    push(&mut p, SignatureEntry::Positive {
        ty: tycon(&nm("Bool"), vec![], s.clone(), 0),
        ctors: vec![
            ctor(&nm("true"), vec![], vec![], &nm("Bool"), vec![], s.clone(), 0),
            ctor(&nm("false"), vec![], vec![], &nm("Bool"), vec![], s.clone(), 0),
        ],
    });
    let entry = simple_elim(&p, &nm("Bool"), &nm("boolrec"), s.clone(), 0)?;
    push(&mut p, entry);
    push(&mut p, SignatureEntry::Positive {
        ty: tycon(&nm("Empty"), vec![], s.clone(), 0),
        ctors: vec![],
    });
    let entry = simple_elim(&p, &nm("Empty"), &nm("emptyrec"), s.clone(), 0)?;
    push(&mut p, entry);
    push(&mut p, SignatureEntry::Positive {
        ty: tycon(&nm("BoxTA"), vec![e(u0(), ty(), 1)], s.clone(), 0),
        ctors: vec![ctor(
            &nm("boxa"),
            vec![e(u0(), ty(), 1), e(v(0), ty(), 0)],
            vec![],
            &nm("BoxTA"),
            vec![v(1)],
            s.clone(),
            0,
        )],
    });
    let entry = simple_elim(&p, &nm("BoxTA"), &nm("boxrec"), s.clone(), 0)?;
    push(&mut p, entry);

    let axiom = ConstantDecl {
        id: ConstantId::active(axiom_name),
        params: vec![],
        dom: Dom::Head(ConstantId::inert(nm("Unit")), vec![]),
        cod: shift(&axiom_type, 1, 0),
        codsort: s,
        codlevel: Level(axiom_level),
    };
    push(&mut p, SignatureEntry::Eliminator { decl: axiom, rules: vec![] });

    Ok(p)
}

/// Convenience: the signature of a parametrization built here.
pub fn signature_of(p: &Parametrization) -> &Signature {
    &p.sig
}
