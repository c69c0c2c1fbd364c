//! Surface abstract syntax.
//!
//! Names are still strings here; the elaborator resolves them to de Bruijn
//! indices and constant references against the signature built so far.

/// A source position (1-based line and column).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

/// An optional sort-and-level annotation, `@ s # i`.
pub type SAnn = Option<(String, u64)>;

/// A surface term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum STerm {
    /// A bare name: a bound variable or a definition.
    Name(String, Span),
    /// `Univ s i`.
    Univ(String, u64, Span),
    /// `fun (x : A @ s # i) => t`.
    Lam(Vec<SBinder>, Box<STerm>),
    /// `Pi (x : A @ s # i) -> B`.
    Pi(Vec<SBinder>, Box<STerm>),
    /// Juxtaposition `f a`.
    App(Box<STerm>, Box<STerm>),
    /// `c(t1, ..., tn)` or `d(t1, ..., tn; u)`. When the name turns out to
    /// be a bound variable the arguments elaborate to plain applications.
    Const(String, Vec<STerm>, Option<Box<STerm>>, Span),
}

impl STerm {
    pub fn span(&self) -> Span {
        match self {
            STerm::Name(_, sp) | STerm::Univ(_, _, sp) | STerm::Const(_, _, _, sp) => *sp,
            STerm::Lam(bs, t) | STerm::Pi(bs, t) => {
                bs.first().map(|b| b.span).unwrap_or_else(|| t.span())
            }
            STerm::App(f, _) => f.span(),
        }
    }
}

/// A binder `(x : A @ s # i)`; the annotation may be omitted and inferred.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SBinder {
    pub name: String,
    pub ty: STerm,
    pub ann: SAnn,
    pub span: Span,
}

/// A pattern metavariable: `?x` or `?x{t1, ..., tk}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SMeta {
    Plain(String, Span),
    Rec(String, Vec<STerm>, Span),
}

/// A rewrite pattern: a constant applied to metavariables, or `Pi s ?q1 ?q2{...}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SPat {
    Head(String, Vec<SMeta>, Span),
    Pi(String, SMeta, SMeta, Span),
}

/// A rewrite rule,
/// `rewrite d [x̄] pat ~> rhs in Δ_lin [with Δ via [σ]] [tau [τ]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SRule {
    pub head: String,
    pub param_vars: Vec<String>,
    pub pat: SPat,
    pub rhs: STerm,
    pub delta_lin: Vec<SBinder>,
    /// Non-linear part: the context Δ and the renaming σ : Δ → Δ_lin,
    /// one Δ variable per Δ_lin entry. Omitted for linear rules.
    pub nonlinear: Option<(Vec<SBinder>, Vec<String>)>,
    pub tau: Option<Vec<String>>,
    pub span: Span,
}

/// A constructor inside a `positive` block. Binders whose type is headed
/// by the inductive itself are its recursive arguments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SCtor {
    pub name: String,
    pub binders: Vec<SBinder>,
    pub cod_args: Vec<STerm>,
    pub span: Span,
}

/// An observation inside a `negative` block. Its codomain may mention the
/// type's parameters and the preceding observations by name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SObs {
    pub name: String,
    pub cod: STerm,
    pub ann: SAnn,
    pub span: Span,
}

/// The scrutinee domain of an eliminator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SDom {
    Univ(String, u64),
    Head(String, Vec<STerm>),
}

/// A top-level declaration or directive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SDecl {
    Sort {
        name: String,
        isolated: bool,
        span: Span,
    },
    Positive {
        name: String,
        params: Vec<SBinder>,
        univ: (String, u64),
        ctors: Vec<SCtor>,
        span: Span,
    },
    Negative {
        name: String,
        params: Vec<SBinder>,
        univ: (String, u64),
        obs: Vec<SObs>,
        span: Span,
    },
    Eliminator {
        name: String,
        params: Vec<SBinder>,
        scrut_name: String,
        dom: SDom,
        cod: STerm,
        ann: SAnn,
        rules: Vec<SRule>,
        span: Span,
    },
    Builder {
        name: String,
        binders: Vec<SBinder>,
        cod_head: String,
        cod_args: Vec<STerm>,
        rules: Vec<SRule>,
        span: Span,
    },
    Def {
        name: String,
        ty: STerm,
        ann: SAnn,
        body: STerm,
        span: Span,
    },
    Check {
        term: STerm,
        ty: STerm,
        ann: SAnn,
        span: Span,
    },
    Normalize {
        term: STerm,
        expect: Option<STerm>,
        span: Span,
    },
}

/// A parsed source file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceFile {
    pub decls: Vec<SDecl>,
}
