//! Pretty-printer for kernel objects, emitting the surface syntax.
//!
//! Printing a parametrization and parsing the output reconstructs the
//! same parametrization; the `merge` subcommand relies on this to write
//! its result as an ordinary source file.

use mutt_core::sig::{
    ConstantDecl, Dom, MetaVar, Parametrization, Pattern, RewriteRule, SignatureEntry,
};
use mutt_core::syntax::{Annot, Context, CtxEntry, Term};

fn ann_str(names: &mut Vec<String>, a: &Annot) -> String {
    format!("{} @ {} # {}", term(names, &a.ty, false), a.sort, a.level.0)
}

fn fresh(names: &[String]) -> String {
    let mut k = names.len();
    loop {
        let cand = format!("x{}", k);
        if !names.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Prints a term. With `atomic` set, non-atomic forms are parenthesized.
fn term(names: &mut Vec<String>, t: &Term, atomic: bool) -> String {
    let wrap = |s: String, non_atomic: bool| {
        if atomic && non_atomic {
            format!("({})", s)
        } else {
            s
        }
    };
    match t {
        Term::Var(i) => match names.len().checked_sub(i + 1).and_then(|p| names.get(p)) {
            Some(n) => n.clone(),
            None => format!("_v{}", i),
        },
        Term::Univ(s, l) => wrap(format!("Univ {} {}", s, l.0), true),
        Term::Lambda(a, body) => {
            let x = fresh(names);
            let astr = ann_str(names, a);
            names.push(x.clone());
            let b = term(names, body, false);
            names.pop();
            wrap(format!("fun ({} : {}) => {}", x, astr, b), true)
        }
        Term::Pi(a, cod) => {
            let x = fresh(names);
            let astr = ann_str(names, a);
            names.push(x.clone());
            let c = term(names, cod, false);
            names.pop();
            wrap(format!("Pi ({} : {}) -> {}", x, astr, c), true)
        }
        Term::App(..) => {
            let mut spine = Vec::new();
            let mut head = t;
            while let Term::App(f, a) = head {
                spine.push(a.as_ref());
                head = f;
            }
            let mut s = term(names, head, true);
            for a in spine.iter().rev() {
                s.push(' ');
                s.push_str(&term(names, a, true));
            }
            wrap(s, true)
        }
        Term::Inert(id, args) => {
            let args: Vec<String> = args.iter().map(|a| term(names, a, false)).collect();
            format!("{}({})", id.name, args.join(", "))
        }
        Term::Active(id, params, scrut) => {
            let params: Vec<String> = params.iter().map(|a| term(names, a, false)).collect();
            let s = term(names, scrut, false);
            format!("{}({}; {})", id.name, params.join(", "), s)
        }
    }
}

/// Prints a term with no free variables.
pub fn term_closed(t: &Term) -> String {
    term(&mut Vec::new(), t, false)
}

fn binders(names: &mut Vec<String>, ctx: &Context, given: &[String]) -> String {
    let mut out = String::new();
    for (i, e) in ctx.iter().enumerate() {
        let n = given.get(i).cloned().unwrap_or_else(|| fresh(names));
        let a = Annot::new(e.ty.clone(), e.sort.clone(), e.level);
        out.push_str(&format!(" ({} : {})", n, ann_str(names, &a)));
        names.push(n);
    }
    out
}

fn univ_of(decl: &ConstantDecl) -> (String, u64) {
    match &decl.cod {
        Term::Univ(s, l) => (s.name.clone(), l.0),
        _ => (decl.codsort.name.clone(), decl.codlevel.0),
    }
}

/// Chooses surface names for a rule's linear context: pattern
/// metavariables keep their names, other entries get positional ones.
fn lin_names(rule: &RewriteRule) -> Vec<String> {
    let n = rule.delta_lin.len();
    let mut names: Vec<Option<String>> = vec![None; n];
    let mut put = |m: &MetaVar| {
        if let Some(p) = n.checked_sub(m.idx() + 1) {
            names[p] = Some(m.name().to_owned());
        }
    };
    match &rule.pat {
        Pattern::Head(_, metas) => metas.iter().for_each(&mut put),
        Pattern::Pi(_, q1, q2) => {
            put(q1);
            put(q2);
        }
    }
    // The remaining entries get positional names that avoid the
    // metavariable names, so the parser resolves each unambiguously.
    let taken: Vec<String> = names.iter().flatten().cloned().collect();
    let mut k = 0usize;
    names
        .into_iter()
        .map(|slot| {
            slot.unwrap_or_else(|| loop {
                let cand = format!("x{}", k);
                k += 1;
                if !taken.contains(&cand) {
                    break cand;
                }
            })
        })
        .collect()
}

fn meta_str(m: &MetaVar, lin_names: &[String]) -> String {
    match m {
        MetaVar::Plain { name, .. } => format!("?{}", name),
        MetaVar::Rec { name, sub, .. } => {
            let mut ns = lin_names.to_vec();
            let subs: Vec<String> = sub.iter().map(|t| term(&mut ns, t, false)).collect();
            format!("?{}{{{}}}", name, subs.join(", "))
        }
    }
}

fn rule_str(rule: &RewriteRule, indent: &str) -> String {
    let lnames = lin_names(rule);
    let linear = rule.is_linear();
    let dnames: Vec<String> = if linear {
        lnames.clone()
    } else {
        (0..rule.delta.len()).map(|i| format!("y{}", i)).collect()
    };
    let nth = |names: &[String], idx: usize| -> String {
        names
            .len()
            .checked_sub(idx + 1)
            .and_then(|p| names.get(p).cloned())
            .unwrap_or_else(|| format!("_v{}", idx))
    };
    let pv: Vec<String> = rule.param_vars.iter().map(|&i| nth(&lnames, i)).collect();
    let (pat, rec_names): (String, Vec<String>) = match &rule.pat {
        Pattern::Head(c, metas) => {
            let ms: Vec<String> = metas.iter().map(|m| meta_str(m, &lnames)).collect();
            let recs = metas
                .iter()
                .filter(|m| matches!(**m, MetaVar::Rec { .. }))
                .map(|m| format!("{}_rec", m.name()))
                .collect();
            (format!("{}({})", c.name, ms.join(", ")), recs)
        }
        Pattern::Pi(s, q1, q2) => {
            let recs = [q1, q2]
                .iter()
                .filter(|m| matches!(***m, MetaVar::Rec { .. }))
                .map(|m| format!("{}_rec", m.name()))
                .collect();
            (
                format!("Pi {} {} {}", s, meta_str(q1, &lnames), meta_str(q2, &lnames)),
                recs,
            )
        }
    };
    let rhs = {
        let mut ns = dnames.clone();
        ns.extend(rec_names);
        term(&mut ns, &rule.rhs, false)
    };
    let lin_binders = {
        let mut ns = Vec::new();
        binders(&mut ns, &rule.delta_lin, &lnames)
    };
    let mut out = format!(
        "{}rewrite {} [{}] {} ~> {}\n{}  in{}",
        indent,
        rule.head.name,
        pv.join(", "),
        pat,
        rhs,
        indent,
        lin_binders
    );
    if !linear {
        let d_binders = {
            let mut ns = Vec::new();
            binders(&mut ns, &rule.delta, &dnames)
        };
        let via: Vec<String> = rule.renaming.iter().map(|&i| nth(&dnames, i)).collect();
        out.push_str(&format!(
            "\n{}  with{} via [{}]",
            indent,
            d_binders,
            via.join(", ")
        ));
    }
    if let Some(tau) = &rule.tau {
        let ts: Vec<String> = tau.iter().map(|&i| nth(&lnames, i)).collect();
        out.push_str(&format!("\n{}  tau [{}]", indent, ts.join(", ")));
    }
    out
}

fn decl_header(kw: &str, decl: &ConstantDecl, names: &mut Vec<String>) -> String {
    let (s, l) = univ_of(decl);
    let bs = binders(names, &decl.params, &[]);
    format!("{} {}{} : Univ {} {}", kw, decl.id.name, bs, s, l)
}

fn entry_str(entry: &SignatureEntry) -> String {
    match entry {
        SignatureEntry::Positive { ty, ctors } => {
            let mut ns = Vec::new();
            let mut out = decl_header("positive", ty, &mut ns);
            out.push_str(" {\n");
            for c in ctors {
                let mut cns = Vec::new();
                let bs = binders(&mut cns, &c.full_tele(), &[]);
                // Codomain indices are scoped over the parameters only.
                cns.truncate(c.params.len());
                let args: Vec<String> = match &c.cod {
                    Term::Inert(_, args) => {
                        args.iter().map(|a| term(&mut cns, a, false)).collect()
                    }
                    _ => Vec::new(),
                };
                out.push_str(&format!(
                    "  constructor {}{} : {}({})\n",
                    c.id.name,
                    bs,
                    ty.id.name,
                    args.join(", ")
                ));
            }
            out.push('}');
            out
        }
        SignatureEntry::Negative { ty, obs } => {
            let mut ns = Vec::new();
            let mut out = decl_header("negative", ty, &mut ns);
            out.push_str(" {\n");
            for o in obs {
                let cod = term(&mut ns, &o.cod, false);
                out.push_str(&format!(
                    "  observation {} : {} @ {} # {}\n",
                    o.id.name, cod, o.codsort, o.codlevel.0
                ));
                ns.push(o.id.name.clone());
            }
            out.push('}');
            out
        }
        SignatureEntry::Eliminator { decl, rules } => {
            let mut ns = Vec::new();
            let bs = binders(&mut ns, &decl.params, &[]);
            let dom = match &decl.dom {
                Dom::Univ(s, l) => format!("Univ {} {}", s, l.0),
                Dom::Head(k, args) => {
                    let args: Vec<String> =
                        args.iter().map(|a| term(&mut ns, a, false)).collect();
                    format!("{}({})", k.name, args.join(", "))
                }
                Dom::Tele(_) => String::new(),
            };
            let z = fresh(&ns);
            ns.push(z.clone());
            let cod = term(&mut ns, &decl.cod, false);
            let mut out = format!(
                "eliminator {}{} on ({} : {}) : {} @ {} # {} {{\n",
                decl.id.name, bs, z, dom, cod, decl.codsort, decl.codlevel.0
            );
            for r in rules {
                out.push_str(&rule_str(r, "  "));
                out.push('\n');
            }
            out.push('}');
            out
        }
        SignatureEntry::Builder { decl, rules } => {
            let mut ns = Vec::new();
            let bs = binders(&mut ns, &decl.full_tele(), &[]);
            // Codomain indices are scoped over the parameters only.
            ns.truncate(decl.params.len());
            let (k, args) = match &decl.cod {
                Term::Inert(k, args) => (
                    k.name.clone(),
                    args.iter()
                        .map(|a| term(&mut ns, a, false))
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
                _ => (String::new(), String::new()),
            };
            let mut out = format!("builder {}{} : {}({}) {{\n", decl.id.name, bs, k, args);
            for r in rules {
                out.push_str(&rule_str(r, "  "));
                out.push('\n');
            }
            out.push('}');
            out
        }
    }
}

/// Prints a whole parametrization as a source file.
pub fn parametrization(prm: &Parametrization) -> String {
    let mut out = String::new();
    for sd in &prm.sorts {
        out.push_str("sort ");
        out.push_str(&sd.sort.name);
        if sd.isolated {
            out.push_str(" isolated");
        }
        out.push('\n');
    }
    for entry in &prm.sig.entries {
        out.push('\n');
        out.push_str(&entry_str(entry));
        out.push('\n');
    }
    out
}

/// Prints a context entry the way diagnostics want it.
pub fn entry_closed(e: &CtxEntry) -> String {
    format!("{} @ {} # {}", term_closed(&e.ty), e.sort, e.level.0)
}
