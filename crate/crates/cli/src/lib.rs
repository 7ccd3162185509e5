//! Front end for the summation library: a small term language, congruence
//! targets, LaTeX output, a JSON identity catalog and the `hypersum` command.

pub mod app;
pub mod catalog;
pub mod dsl;
pub mod expr;
pub mod latex;
mod lex;
pub mod target;

pub use app::run;
pub use lex::ParseError;
