//! Recursive-descent parser for the surface language.
//!
//! Grammar sketch (line comments `--`):
//!
//! ```text
//! file  := decl*
//! decl  := "sort" NAME ["isolated"]
//!        | "positive" NAME binders ":" "Univ" SORT NUM "{" ctor* "}"
//!        | "negative" NAME binders ":" "Univ" SORT NUM "{" obs* "}"
//!        | "eliminator" NAME binders "on" "(" NAME ":" dom ")" ":" term [ann] "{" rule* "}"
//!        | "builder" NAME binders ":" NAME "(" terms ")" "{" rule* "}"
//!        | "def" NAME ":" term [ann] "=" term
//!        | "check" term ":" term [ann]
//!        | "normalize" term ["~>" term]
//! ctor  := "constructor" NAME binders ":" NAME "(" terms ")"
//! obs   := "observation" NAME ":" term [ann]
//! dom   := "Univ" SORT NUM | NAME "(" terms ")"
//! rule  := "rewrite" NAME "[" names "]" pat "~>" term "in" binders
//!          ["with" binders "via" "[" names "]"] ["tau" "[" names "]"]
//! pat   := "Pi" SORT meta meta | NAME "(" metas ")"
//! meta  := "?" NAME ["{" terms "}"]
//! term  := "fun" binders "=>" term | "Pi" binders "->" term | atom+
//! atom  := "(" term ")" | "Univ" SORT NUM
//!        | NAME ["(" terms [";" term] ")"]
//! binders := ("(" NAME ":" term [ann] ")")*
//! ann   := "@" SORT "#" NUM
//! ```
//!
//! Constants are written with parenthesized, comma-separated arguments
//! (active constants take their scrutinee after `;`); plain application is
//! juxtaposition. A parenthesized argument list after a bound variable is
//! read back as iterated application by the elaborator.

use crate::ast::*;
use crate::lexer::{lex, Tok, Token};
use mutt_core::diag::{Diag, TcResult};

const RESERVED: &[&str] = &[
    "sort", "positive", "negative", "eliminator", "builder", "constructor", "observation",
    "rewrite", "def", "check", "normalize", "on", "isolated", "in", "with", "via", "tau",
    "fun", "Pi", "Univ",
];

pub fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn span(&self) -> Span {
        match self.peek() {
            Some(t) => Span { line: t.line, col: t.col },
            None => self
                .toks
                .last()
                .map(|t| Span { line: t.line, col: t.col })
                .unwrap_or_default(),
        }
    }

    fn err(&self, what: &str) -> Diag {
        let sp = self.span();
        let found = match self.peek() {
            Some(t) => t.tok.describe(),
            None => "end of input".into(),
        };
        Diag::new(
            "SYNTAX",
            format!("{}:{}: expected {}, found {}", sp.line, sp.col, what, found),
        )
    }

    fn next(&mut self, what: &str) -> TcResult<Token> {
        let t = self.peek().cloned().ok_or_else(|| self.err(what))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> TcResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.err(&tok.describe()))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> TcResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.err(&format!("`{}`", kw)))
        }
    }

    fn name(&mut self, what: &str) -> TcResult<(String, Span)> {
        let sp = self.span();
        match self.next(what)? {
            Token { tok: Tok::Ident(s), .. } if !is_reserved(&s) => Ok((s, sp)),
            _ => {
                self.pos -= 1;
                Err(self.err(what))
            }
        }
    }

    /// A sort name; unlike ordinary names, `Type` and the other reserved
    /// words are not special here, but we only accept identifiers.
    fn sort_name(&mut self) -> TcResult<String> {
        match self.next("a sort name")? {
            Token { tok: Tok::Ident(s), .. } => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err("a sort name"))
            }
        }
    }

    fn number(&mut self) -> TcResult<u64> {
        match self.next("a numeral")? {
            Token { tok: Tok::Ident(s), .. } if s.chars().all(|c| c.is_ascii_digit()) => s
                .parse()
                .map_err(|_| Diag::new("SYNTAX", format!("numeral `{}` out of range", s))),
            _ => {
                self.pos -= 1;
                Err(self.err("a numeral"))
            }
        }
    }

    /// `@ s # i`, optional.
    fn ann(&mut self) -> TcResult<SAnn> {
        if !self.eat(&Tok::At) {
            return Ok(None);
        }
        let s = self.sort_name()?;
        self.expect(Tok::Hash)?;
        let i = self.number()?;
        Ok(Some((s, i)))
    }

    fn binders(&mut self) -> TcResult<Vec<SBinder>> {
        let mut out = Vec::new();
        loop {
            // A binder starts with `(` NAME `:`; anything else ends the list.
            let start = self.pos;
            if !self.eat(&Tok::LParen) {
                break;
            }
            let name = match self.name("a binder name") {
                Ok((n, _)) => n,
                Err(_) => {
                    self.pos = start;
                    break;
                }
            };
            if !self.eat(&Tok::Colon) {
                self.pos = start;
                break;
            }
            let span = Span { line: self.toks[start].line, col: self.toks[start].col };
            let ty = self.term()?;
            let ann = self.ann()?;
            self.expect(Tok::RParen)?;
            out.push(SBinder { name, ty, ann, span });
        }
        Ok(out)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Token { tok: Tok::LParen, .. }) => true,
            Some(Token { tok: Tok::Ident(s), .. }) => !is_reserved(s) || s == "Univ",
            _ => false,
        }
    }

    fn atom(&mut self) -> TcResult<STerm> {
        let sp = self.span();
        if self.eat(&Tok::LParen) {
            let t = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        if self.eat_keyword("Univ") {
            let s = self.sort_name()?;
            let i = self.number()?;
            return Ok(STerm::Univ(s, i, sp));
        }
        let (name, _) = self.name("a term")?;
        if self.eat(&Tok::LParen) {
            let mut args = Vec::new();
            let mut scrut = None;
            if !self.eat(&Tok::RParen) {
                if !self.eat(&Tok::Semi) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        break;
                    }
                    if self.eat(&Tok::Semi) {
                        scrut = Some(Box::new(self.term()?));
                    }
                } else {
                    scrut = Some(Box::new(self.term()?));
                }
                self.expect(Tok::RParen)?;
            }
            return Ok(STerm::Const(name, args, scrut, sp));
        }
        Ok(STerm::Name(name, sp))
    }

    fn term(&mut self) -> TcResult<STerm> {
        if self.eat_keyword("fun") {
            let bs = self.binders()?;
            if bs.is_empty() {
                return Err(self.err("at least one binder after `fun`"));
            }
            self.expect(Tok::FatArrow)?;
            let body = self.term()?;
            return Ok(STerm::Lam(bs, Box::new(body)));
        }
        if self.at_keyword("Pi") {
            // Distinguish the binder form from a pattern context by
            // requiring a binder right away.
            self.pos += 1;
            let bs = self.binders()?;
            if bs.is_empty() {
                return Err(self.err("at least one binder after `Pi`"));
            }
            self.expect(Tok::ThinArrow)?;
            let cod = self.term()?;
            return Ok(STerm::Pi(bs, Box::new(cod)));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = STerm::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn terms_until_rparen(&mut self) -> TcResult<Vec<STerm>> {
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            break;
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn name_list(&mut self) -> TcResult<Vec<String>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        loop {
            out.push(self.name("a variable name")?.0);
            if self.eat(&Tok::Comma) {
                continue;
            }
            break;
        }
        self.expect(Tok::RBracket)?;
        Ok(out)
    }

    fn meta(&mut self) -> TcResult<SMeta> {
        let sp = self.span();
        self.expect(Tok::Question)?;
        let (name, _) = self.name("a metavariable name")?;
        if self.eat(&Tok::LBrace) {
            let mut sub = Vec::new();
            if !self.eat(&Tok::RBrace) {
                loop {
                    sub.push(self.term()?);
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    break;
                }
                self.expect(Tok::RBrace)?;
            }
            return Ok(SMeta::Rec(name, sub, sp));
        }
        Ok(SMeta::Plain(name, sp))
    }

    fn pattern(&mut self) -> TcResult<SPat> {
        let sp = self.span();
        if self.eat_keyword("Pi") {
            let s = self.sort_name()?;
            let q1 = self.meta()?;
            let q2 = self.meta()?;
            return Ok(SPat::Pi(s, q1, q2, sp));
        }
        let (name, _) = self.name("a pattern head constant")?;
        self.expect(Tok::LParen)?;
        let mut metas = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                metas.push(self.meta()?);
                if self.eat(&Tok::Comma) {
                    continue;
                }
                break;
            }
            self.expect(Tok::RParen)?;
        }
        Ok(SPat::Head(name, metas, sp))
    }

    fn rule(&mut self) -> TcResult<SRule> {
        let span = self.span();
        self.expect_keyword("rewrite")?;
        let (head, _) = self.name("an active constant name")?;
        let param_vars = self.name_list()?;
        let pat = self.pattern()?;
        self.expect(Tok::RewArrow)?;
        let rhs = self.term()?;
        self.expect_keyword("in")?;
        let delta_lin = self.binders()?;
        let nonlinear = if self.eat_keyword("with") {
            let delta = self.binders()?;
            self.expect_keyword("via")?;
            let sigma = self.name_list()?;
            Some((delta, sigma))
        } else {
            None
        };
        let tau = if self.eat_keyword("tau") { Some(self.name_list()?) } else { None };
        Ok(SRule { head, param_vars, pat, rhs, delta_lin, nonlinear, tau, span })
    }

    fn rules_block(&mut self) -> TcResult<Vec<SRule>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(&Tok::RBrace) {
            out.push(self.rule()?);
        }
        Ok(out)
    }

    fn univ_ann(&mut self) -> TcResult<(String, u64)> {
        self.expect_keyword("Univ")?;
        let s = self.sort_name()?;
        let i = self.number()?;
        Ok((s, i))
    }

    fn decl(&mut self) -> TcResult<SDecl> {
        let span = self.span();
        if self.eat_keyword("sort") {
            let name = self.sort_name()?;
            let isolated = self.eat_keyword("isolated");
            return Ok(SDecl::Sort { name, isolated, span });
        }
        if self.eat_keyword("positive") {
            let (name, _) = self.name("a type constant name")?;
            let params = self.binders()?;
            self.expect(Tok::Colon)?;
            let univ = self.univ_ann()?;
            self.expect(Tok::LBrace)?;
            let mut ctors = Vec::new();
            while !self.eat(&Tok::RBrace) {
                let csp = self.span();
                self.expect_keyword("constructor")?;
                let (cname, _) = self.name("a constructor name")?;
                let binders = self.binders()?;
                self.expect(Tok::Colon)?;
                let (head, _) = self.name("the inductive's name")?;
                if head != name {
                    return Err(Diag::new(
                        "SYNTAX",
                        format!(
                            "{}:{}: constructor `{}` must target `{}`",
                            csp.line, csp.col, cname, name
                        ),
                    ));
                }
                self.expect(Tok::LParen)?;
                let cod_args = self.terms_until_rparen()?;
                ctors.push(SCtor { name: cname, binders, cod_args, span: csp });
            }
            return Ok(SDecl::Positive { name, params, univ, ctors, span });
        }
        if self.eat_keyword("negative") {
            let (name, _) = self.name("a type constant name")?;
            let params = self.binders()?;
            self.expect(Tok::Colon)?;
            let univ = self.univ_ann()?;
            self.expect(Tok::LBrace)?;
            let mut obs = Vec::new();
            while !self.eat(&Tok::RBrace) {
                let osp = self.span();
                self.expect_keyword("observation")?;
                let (oname, _) = self.name("an observation name")?;
                self.expect(Tok::Colon)?;
                let cod = self.term()?;
                let ann = self.ann()?;
                obs.push(SObs { name: oname, cod, ann, span: osp });
            }
            return Ok(SDecl::Negative { name, params, univ, obs, span });
        }
        if self.eat_keyword("eliminator") {
            let (name, _) = self.name("an eliminator name")?;
            let params = self.binders()?;
            self.expect_keyword("on")?;
            self.expect(Tok::LParen)?;
            let (scrut_name, _) = self.name("a scrutinee name")?;
            self.expect(Tok::Colon)?;
            let dom = if self.eat_keyword("Univ") {
                let s = self.sort_name()?;
                let i = self.number()?;
                SDom::Univ(s, i)
            } else {
                let (k, _) = self.name("a type constant or `Univ`")?;
                self.expect(Tok::LParen)?;
                SDom::Head(k, self.terms_until_rparen()?)
            };
            self.expect(Tok::RParen)?;
            self.expect(Tok::Colon)?;
            let cod = self.term()?;
            let ann = self.ann()?;
            let rules = self.rules_block()?;
            return Ok(SDecl::Eliminator { name, params, scrut_name, dom, cod, ann, rules, span });
        }
        if self.eat_keyword("builder") {
            let (name, _) = self.name("a builder name")?;
            let binders = self.binders()?;
            self.expect(Tok::Colon)?;
            let (cod_head, _) = self.name("a negative type name")?;
            self.expect(Tok::LParen)?;
            let cod_args = self.terms_until_rparen()?;
            let rules = self.rules_block()?;
            return Ok(SDecl::Builder { name, binders, cod_head, cod_args, rules, span });
        }
        if self.eat_keyword("def") {
            let (name, _) = self.name("a definition name")?;
            self.expect(Tok::Colon)?;
            let ty = self.term()?;
            let ann = self.ann()?;
            self.expect(Tok::Assign)?;
            let body = self.term()?;
            return Ok(SDecl::Def { name, ty, ann, body, span });
        }
        if self.eat_keyword("check") {
            let term = self.term()?;
            self.expect(Tok::Colon)?;
            let ty = self.term()?;
            let ann = self.ann()?;
            return Ok(SDecl::Check { term, ty, ann, span });
        }
        if self.eat_keyword("normalize") {
            let term = self.term()?;
            let expect = if self.eat(&Tok::RewArrow) { Some(self.term()?) } else { None };
            return Ok(SDecl::Normalize { term, expect, span });
        }
        Err(self.err("a declaration"))
    }
}

/// Parses a whole source file.
pub fn parse(src: &str) -> TcResult<SourceFile> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut decls = Vec::new();
    while p.peek().is_some() {
        decls.push(p.decl()?);
    }
    Ok(SourceFile { decls })
}
