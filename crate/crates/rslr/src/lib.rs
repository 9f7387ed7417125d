//! A toolkit for a lambda calculus with safe linear recursion and a fair
//! coin: parsing, affine modal type checking, exact distribution
//! semantics (small-step and big-step), a library of arithmetic and
//! string encodings, and a compiler from probabilistic Turing machine
//! descriptions to terms.

pub mod ast;
pub mod bigstep;
pub mod dist;
pub mod parser;
pub mod printer;
pub mod smallstep;
pub mod stdlib;
pub mod tm;
pub mod types;

pub use ast::{Aspect, Term, Type};
pub use dist::{Dist, Prob};
pub use parser::{parse_term, parse_type, ParseError};
pub use types::{check_first_order, infer, infer_closed, Context, TypeError, TypeErrorKind};
