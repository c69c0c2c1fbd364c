//! Tokenizer for the surface language.
//!
//! Tokens carry their line and column (both 1-based) so every later stage
//! can point at the offending source position.

use mutt_core::diag::{Diag, TcResult};

/// A lexical token.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    /// Identifiers and keywords; also bare numerals like `0`.
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    At,
    Hash,
    Assign,
    Question,
    /// `=>`
    FatArrow,
    /// `->`
    ThinArrow,
    /// `~>`
    RewArrow,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::At => "`@`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Assign => "`=`".into(),
            Tok::Question => "`?`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::ThinArrow => "`->`".into(),
            Tok::RewArrow => "`~>`".into(),
        }
    }
}

/// A token together with its source position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes a source text. Line comments start with `--`.
pub fn lex(src: &str) -> TcResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '-' {
            bump(&mut chars);
            match chars.peek() {
                Some('-') => {
                    while let Some(&c2) = chars.peek() {
                        bump(&mut chars);
                        if c2 == '\n' {
                            break;
                        }
                    }
                    continue;
                }
                Some('>') => {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::ThinArrow, line: tl, col: tc });
                    continue;
                }
                _ => {
                    return Err(Diag::new(
                        "SYNTAX",
                        format!("{}:{}: stray `-`; expected `--` or `->`", tl, tc),
                    ))
                }
            }
        }
        if c == '=' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                out.push(Token { tok: Tok::FatArrow, line: tl, col: tc });
            } else {
                out.push(Token { tok: Tok::Assign, line: tl, col: tc });
            }
            continue;
        }
        if c == '~' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                out.push(Token { tok: Tok::RewArrow, line: tl, col: tc });
                continue;
            }
            return Err(Diag::new(
                "SYNTAX",
                format!("{}:{}: stray `~`; expected `~>`", tl, tc),
            ));
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if !is_ident_char(c2) {
                    break;
                }
                s.push(bump(&mut chars));
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '@' => Tok::At,
            '#' => Tok::Hash,
            '?' => Tok::Question,
            _ => {
                return Err(Diag::new(
                    "SYNTAX",
                    format!("{}:{}: unexpected character `{}`", tl, tc, c),
                ))
            }
        };
        bump(&mut chars);
        out.push(Token { tok, line: tl, col: tc });
    }
    Ok(out)
}
