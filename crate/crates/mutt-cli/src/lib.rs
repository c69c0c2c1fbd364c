//! Surface syntax and driver for the mutt kernel: a lexer and parser for
//! the declaration language, an elaborator producing kernel
//! parametrizations, a pretty-printer that round-trips through the parser,
//! and the command-line front end.

pub mod ast;
pub mod driver;
pub mod elab;
pub mod lexer;
pub mod parser;
pub mod printer;
