//! The command-line driver: loading files, running checks and directives,
//! and rendering diagnostics.

use std::fs;
use std::path::{Path, PathBuf};

use mutt_core::convert::ConversionOptions;
use mutt_core::diag::{explain, Diag};
use mutt_core::merge::merge;
use mutt_core::sig::{check_signature_with, Parametrization};
use mutt_core::syntax::{alpha_eq, Sort, Term};
use mutt_core::typing::{check, infer, Env};

use crate::elab::{elaborate, Directive, Loaded, Located};
use crate::parser::parse;
use crate::printer;

/// Global options shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Options {
    pub fuel: u64,
    pub conv: ConversionOptions,
    pub json: bool,
}

/// A rendered diagnostic.
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub tag: &'static str,
    pub message: String,
    pub file: String,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    fn emit(&self, json: bool) {
        if json {
            let obj = serde_json::json!({
                "severity": "error",
                "tag": self.tag,
                "message": self.message,
                "file": self.file,
                "line": self.line,
                "col": self.col,
            });
            println!("{}", obj);
        } else {
            println!(
                "{}:{}:{}: error[{}]: {}",
                self.file, self.line, self.col, self.tag, self.message
            );
        }
    }
}

fn from_diag(d: Diag, file: &Path) -> Diagnostic {
    // Parser diagnostics embed their position as a `line:col:` prefix.
    let (line, col, message) = split_position(&d.message);
    Diagnostic { tag: d.tag, message, file: file.display().to_string(), line, col }
}

fn split_position(msg: &str) -> (usize, usize, String) {
    let mut parts = msg.splitn(3, ':');
    if let (Some(l), Some(c), Some(rest)) = (parts.next(), parts.next(), parts.next()) {
        if let (Ok(l), Ok(c)) = (l.parse(), c.parse()) {
            return (l, c, rest.trim_start().to_owned());
        }
    }
    (0, 0, msg.to_owned())
}

fn from_located(l: Located, file: &Path) -> Diagnostic {
    Diagnostic {
        tag: l.diag.tag,
        message: l.diag.message,
        file: file.display().to_string(),
        line: l.line,
        col: l.col,
    }
}

/// Parses, elaborates, and signature-checks one file.
pub fn load_file(path: &Path, opts: &Options) -> Result<Loaded, Diagnostic> {
    let src = fs::read_to_string(path).map_err(|e| Diagnostic {
        tag: "SYNTAX",
        message: format!("cannot read {}: {}", path.display(), e),
        file: path.display().to_string(),
        line: 0,
        col: 0,
    })?;
    let file = parse(&src).map_err(|d| from_diag(d, path))?;
    let loaded =
        elaborate(&file, &opts.conv, opts.fuel).map_err(|l| from_located(l, path))?;
    check_signature_with(&loaded.prm, &opts.conv, opts.fuel)
        .map_err(|d| from_diag(d, path))?;
    Ok(loaded)
}

/// Runs the file's directives in order, reporting the first failure.
fn run_directives(loaded: &Loaded, path: &Path, opts: &Options) -> Result<(), Diagnostic> {
    for d in &loaded.directives {
        let env = Env::with_opts(&loaded.prm, opts.conv.clone(), opts.fuel);
        let r = run_directive(&env, d);
        dump_trace(&env);
        r.map_err(|diag| Diagnostic {
            tag: diag.tag,
            message: diag.message,
            file: path.display().to_string(),
            line: d.span().line,
            col: d.span().col,
        })?;
    }
    Ok(())
}

fn run_directive(env: &Env, d: &Directive) -> Result<(), Diag> {
    match d {
        Directive::Def { ty, ann, body, .. } | Directive::Check { ty, ann, term: body, .. } => {
            let sort = directive_sort(env, ty, ann)?;
            check(env, &Vec::new(), body, ty, &sort)
        }
        Directive::Normalize { term, expect, .. } => {
            infer(env, &Vec::new(), term)?;
            let nf = env.normalize(term)?;
            if let Some(e) = expect {
                let enf = env.normalize(e)?;
                if !alpha_eq(&nf, &enf) {
                    return Err(Diag::new(
                        "TY-MISMATCH",
                        format!(
                            "normal form {} differs from expected {}",
                            printer::term_closed(&nf),
                            printer::term_closed(&enf)
                        ),
                    ));
                }
            }
            Ok(())
        }
    }
}

fn directive_sort(env: &Env, ty: &Term, ann: &Option<(Sort, u64)>) -> Result<Sort, Diag> {
    if let Some((s, _)) = ann {
        return Ok(s.clone());
    }
    let r = infer(env, &Vec::new(), ty)?;
    match env.whnf(&r.ty)? {
        Term::Univ(s, _) => Ok(s),
        _ => Err(Diag::new("TY-NOT-TYPE", "the ascribed type is not a type")),
    }
}

fn dump_trace(env: &Env) {
    for line in env.take_trace() {
        eprintln!("trace: {}", line);
    }
}

/// `check FILE...`: exit 0 iff every file loads, checks, and passes its
/// directives.
pub fn cmd_check(files: &[PathBuf], opts: &Options) -> i32 {
    let mut failed = false;
    for f in files {
        let outcome = load_file(f, opts).and_then(|l| {
            run_directives(&l, f, opts)?;
            Ok(l)
        });
        match outcome {
            Ok(_) => {
                if !opts.json {
                    println!("{}: ok", f.display());
                }
            }
            Err(d) => {
                d.emit(opts.json);
                failed = true;
            }
        }
    }
    if failed {
        1
    } else {
        0
    }
}

/// `normalize FILE --term NAME [--deep]`: prints the (weak-head or deep)
/// normal form of a definition.
pub fn cmd_normalize(file: &Path, name: &str, deep: bool, opts: &Options) -> i32 {
    let loaded = match load_file(file, opts) {
        Ok(l) => l,
        Err(d) => {
            d.emit(opts.json);
            return 1;
        }
    };
    let Some((body, _)) = loaded.def(name) else {
        Diagnostic {
            tag: "NAME",
            message: format!("no definition named `{}`", name),
            file: file.display().to_string(),
            line: 0,
            col: 0,
        }
        .emit(opts.json);
        return 1;
    };
    let env = Env::with_opts(&loaded.prm, opts.conv.clone(), opts.fuel);
    let r = if deep { env.normalize(body) } else { env.whnf(body) };
    dump_trace(&env);
    match r {
        Ok(nf) => {
            println!("{}", printer::term_closed(&nf));
            0
        }
        Err(d) => {
            from_diag(d, file).emit(opts.json);
            1
        }
    }
}

/// `merge BASE EXT1 EXT2 -o OUT`: combines two extensions of a common
/// base and writes the result as a source file.
pub fn cmd_merge(base: &Path, ext1: &Path, ext2: &Path, out: &Path, opts: &Options) -> i32 {
    let load = |p: &Path| -> Result<Parametrization, Diagnostic> {
        load_file(p, opts).map(|l| l.prm)
    };
    let (b, e1, e2) = match (load(base), load(ext1), load(ext2)) {
        (Ok(b), Ok(e1), Ok(e2)) => (b, e1, e2),
        (r1, r2, r3) => {
            for r in [r1.err(), r2.err(), r3.err()].into_iter().flatten() {
                r.emit(opts.json);
            }
            return 1;
        }
    };
    match merge(&b, &e1, &e2) {
        Ok(m) => {
            let text = printer::parametrization(&m);
            if let Err(e) = fs::write(out, text) {
                Diagnostic {
                    tag: "SYNTAX",
                    message: format!("cannot write {}: {}", out.display(), e),
                    file: out.display().to_string(),
                    line: 0,
                    col: 0,
                }
                .emit(opts.json);
                return 1;
            }
            if !opts.json {
                println!("merged {} entries into {}", m.sig.entries.len(), out.display());
            }
            0
        }
        Err(d) => {
            from_diag(d, base).emit(opts.json);
            1
        }
    }
}

/// `explain TAG`: prints the clause behind a diagnostic tag.
pub fn cmd_explain(tag: &str, json: bool) -> i32 {
    match explain(tag) {
        Some(text) => {
            if json {
                println!("{}", serde_json::json!({ "tag": tag, "explanation": text }));
            } else {
                println!("{}: {}", tag, text);
            }
            0
        }
        None => {
            eprintln!("unknown diagnostic tag `{}`", tag);
            1
        }
    }
}
