//! Concrete syntax: lexing, parsing, implicit-argument elaboration and
//! printing back.

pub mod lexer;
pub mod parser;
pub mod print;
pub mod elab;
