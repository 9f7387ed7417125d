//! Pretty printer. Output re-parses to an alpha-equivalent term; binder
//! hints are freshened against free variables and enclosing binders.

use crate::ast::{Term, Type};
use std::collections::BTreeSet;
use std::fmt;

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, f, 0)
    }
}

// levels: 0 arrow, 1 product, 2 atom
fn fmt_type(t: &Type, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
    match t {
        Type::Nat => write!(f, "N"),
        Type::Arrow(a, dom, cod) => {
            if level > 0 {
                write!(f, "(")?;
            }
            fmt_type(dom, f, 1)?;
            write!(f, " {}-> ", a)?;
            fmt_type(cod, f, 0)?;
            if level > 0 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Type::Prod(l, r) => {
            if level > 1 {
                write!(f, "(")?;
            }
            fmt_type(l, f, 2)?;
            write!(f, " * ")?;
            fmt_type(r, f, 1)?;
            if level > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Term {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let avoid: BTreeSet<String> = self.free_vars();
        let mut env: Vec<String> = Vec::new();
        write_term(self, &mut out, &avoid, &mut env, 0);
        out
    }
}

// levels: 0 full term, 1 application head/argument chain, 2 atom
fn write_term(t: &Term, out: &mut String, avoid: &BTreeSet<String>, env: &mut Vec<String>, level: u8) {
    match t {
        Term::Var(i, hint) => {
            if *i < env.len() {
                out.push_str(&env[env.len() - 1 - i]);
            } else {
                // dangling index, only reachable when printing open fragments
                out.push_str(&format!("_b{}'{}", i, hint.0));
            }
        }
        Term::Free(n) => out.push_str(n),
        Term::Num(n) => out.push_str(&n.to_string()),
        Term::S0 => out.push_str("S0"),
        Term::S1 => out.push_str("S1"),
        Term::P => out.push_str("P"),
        Term::Rand => out.push_str("rand"),
        Term::Abs {
            hint,
            aspect,
            ty,
            body,
        } => {
            let paren = level > 0;
            if paren {
                out.push('(');
            }
            let name = fresh_name(&hint.0, avoid, env);
            out.push('\\');
            out.push_str(&name);
            out.push(':');
            out.push_str(&aspect.to_string());
            out.push_str(&ty.to_string());
            out.push_str(". ");
            env.push(name);
            write_term(body, out, avoid, env, 0);
            env.pop();
            if paren {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let paren = level > 1;
            if paren {
                out.push('(');
            }
            write_term(f, out, avoid, env, 1);
            out.push(' ');
            write_term(a, out, avoid, env, 2);
            if paren {
                out.push(')');
            }
        }
        Term::Case {
            ty,
            scrut,
            zero,
            even,
            odd,
        } => {
            out.push_str("case[");
            out.push_str(&ty.to_string());
            out.push_str("] ");
            write_term(scrut, out, avoid, env, 1);
            out.push_str(" { zero -> ");
            write_term(zero, out, avoid, env, 0);
            out.push_str(" | even -> ");
            write_term(even, out, avoid, env, 0);
            out.push_str(" | odd -> ");
            write_term(odd, out, avoid, env, 0);
            out.push_str(" }");
        }
        Term::Rec {
            ty,
            arg,
            base,
            step,
        } => {
            out.push_str("rec[");
            out.push_str(&ty.to_string());
            out.push_str("](");
            write_term(arg, out, avoid, env, 0);
            out.push_str("; ");
            write_term(base, out, avoid, env, 0);
            out.push_str("; ");
            write_term(step, out, avoid, env, 0);
            out.push(')');
        }
        Term::Pair(l, r) => {
            out.push('<');
            write_term(l, out, avoid, env, 0);
            out.push_str(", ");
            write_term(r, out, avoid, env, 0);
            out.push('>');
        }
        Term::Proj1(s) => {
            out.push_str("p1 ");
            write_term(s, out, avoid, env, 2);
        }
        Term::Proj2(s) => {
            out.push_str("p2 ");
            write_term(s, out, avoid, env, 2);
        }
    }
}

const RESERVED: &[&str] = &[
    "case", "rec", "zero", "even", "odd", "rand", "p1", "p2", "S0", "S1", "P", "N",
];

fn fresh_name(hint: &str, avoid: &BTreeSet<String>, env: &[String]) -> String {
    let base = if hint.is_empty() { "x" } else { hint };
    let mut name = base.to_string();
    let taken = |n: &str| {
        avoid.contains(n) || env.iter().any(|e| e == n) || RESERVED.contains(&n)
    };
    let mut k = 0;
    while taken(&name) {
        k += 1;
        name = format!("{}'{}", base, k);
    }
    name
}
