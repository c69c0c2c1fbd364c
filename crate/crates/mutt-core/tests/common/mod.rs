//! Shared helpers for the integration tests.

#![allow(dead_code)]

use mutt_core::syntax::{shift, Annot, ConstantId, CtxEntry, Level, Sort, Term};

pub fn t() -> Sort {
    Sort::typ()
}

pub fn v(i: usize) -> Term {
    Term::Var(i)
}

pub fn an(ty: Term) -> Annot {
    Annot::new(ty, t(), Level(0))
}

pub fn an_at(ty: Term, sort: Sort, level: u64) -> Annot {
    Annot::new(ty, sort, Level(level))
}

pub fn entry(ty: Term, sort: Sort, level: u64) -> CtxEntry {
    CtxEntry::new(ty, sort, Level(level))
}

pub fn inert(name: &str, args: Vec<Term>) -> Term {
    Term::Inert(ConstantId::inert(name), args)
}

pub fn active(name: &str, params: Vec<Term>, scrut: Term) -> Term {
    Term::active(ConstantId::active(name), params, scrut)
}

pub fn u0() -> Term {
    Term::univ(t(), 0)
}

pub fn nat() -> Term {
    inert("Nat", vec![])
}

/// The numeral `n` as an iterated successor.
pub fn num(n: u64) -> Term {
    let mut out = inert("0", vec![]);
    for _ in 0..n {
        out = inert("S", vec![out]);
    }
    out
}

/// Reads a numeral back, if the term is one.
pub fn read_num(t: &Term) -> Option<u64> {
    let mut t = t;
    let mut n = 0;
    loop {
        match t {
            Term::Inert(c, args) if c.name == "0" && args.is_empty() => return Some(n),
            Term::Inert(c, args) if c.name == "S" && args.len() == 1 => {
                n += 1;
                t = &args[0];
            }
            _ => return None,
        }
    }
}

/// The constant motive `fun (_ : Nat) => Nat`.
pub fn nat_motive() -> Term {
    Term::lam(an(nat()), nat())
}

/// Addition by recursion on the first argument.
pub fn plus(a: Term, b: Term) -> Term {
    let succ_branch = Term::lam(an(nat()), Term::lam(an(nat()), inert("S", vec![v(0)])));
    active("nat_elim", vec![nat_motive(), b, succ_branch], a)
}

/// Multiplication by recursion on the first argument.
pub fn mult(a: Term, b: Term) -> Term {
    let step = Term::lam(
        an(nat()),
        Term::lam(an(nat()), plus(shift(&b, 2, 0), v(0))),
    );
    active("nat_elim", vec![nat_motive(), num(0), step], a)
}
