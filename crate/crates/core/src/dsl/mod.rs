//! A small language for building groups.
//!
//! ```text
//! expr := term (('*' | 'wr') term)*        '*' binds tighter, both left-assoc
//! term := atom | '(' expr ')'
//!       | 'quotient(' expr ';' words ')' | 'subgroup(' expr ';' words ')'
//!       | 'union(' ident ',' expr ')'
//! atom := C(n) | S(n) | A(n) | D(n) | Q8 | E(p, k) | Perm(degree; cycles; …)
//! ```
//!
//! Integer arguments are arithmetic over literals and parameters
//! (`+ - * ^`). Words are products of `g0`…`g9` and `e` with integer powers,
//! where `gi` is the `i`-th generator of the evaluated group. `#` starts a
//! comment.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval, eval_with, resolve_word};
pub use parse::parse;

use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntExpr {
    Lit(u64),
    Param(String),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Pow(Box<IntExpr>, Box<IntExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic(IntExpr),
    Symmetric(IntExpr),
    Alternating(IntExpr),
    Dihedral(IntExpr),
    Quaternion,
    Elementary(IntExpr, IntExpr),
    /// Generators on `degree` points, each a list of cycles.
    Perm {
        degree: usize,
        generators: Vec<Vec<Vec<usize>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Identity,
    Gen(usize),
    Product(Vec<Word>),
    Power(Box<Word>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Atom(Atom),
    Product(Box<GroupExpr>, Box<GroupExpr>),
    /// Base group, then the top group acting on its own points.
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
    Quotient(Box<GroupExpr>, Vec<Word>),
    SubgroupOf(Box<GroupExpr>, Vec<Word>),
    /// The increasing union over all values of the parameter.
    Union {
        param: String,
        body: Box<GroupExpr>,
    },
}

impl IntExpr {
    fn precedence(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => 0,
            IntExpr::Mul(..) => 1,
            IntExpr::Pow(..) => 2,
            IntExpr::Lit(_) | IntExpr::Param(_) => 3,
        }
    }

    fn substitute(&self, name: &str, value: u64) -> IntExpr {
        let sub = |e: &IntExpr| Box::new(e.substitute(name, value));
        match self {
            IntExpr::Param(p) if p == name => IntExpr::Lit(value),
            IntExpr::Lit(_) | IntExpr::Param(_) => self.clone(),
            IntExpr::Add(a, b) => IntExpr::Add(sub(a), sub(b)),
            IntExpr::Sub(a, b) => IntExpr::Sub(sub(a), sub(b)),
            IntExpr::Mul(a, b) => IntExpr::Mul(sub(a), sub(b)),
            IntExpr::Pow(a, b) => IntExpr::Pow(sub(a), sub(b)),
        }
    }

    fn params(&self, out: &mut BTreeSet<String>) {
        match self {
            IntExpr::Lit(_) => {}
            IntExpr::Param(p) => {
                out.insert(p.clone());
            }
            IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) | IntExpr::Pow(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Left-associative operators parenthesize an equal-precedence right
        // operand; `^` is right-associative and does the opposite.
        let side = |f: &mut fmt::Formatter<'_>, e: &IntExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        let (a, op, b, p) = match self {
            IntExpr::Lit(n) => return write!(f, "{n}"),
            IntExpr::Param(p) => return write!(f, "{p}"),
            IntExpr::Add(a, b) => (a, "+", b, 0),
            IntExpr::Sub(a, b) => (a, "-", b, 0),
            IntExpr::Mul(a, b) => (a, "*", b, 1),
            IntExpr::Pow(a, b) => (a, "^", b, 2),
        };
        let (left_min, right_min) = if p == 2 { (3, 2) } else { (p, p + 1) };
        side(f, a, left_min)?;
        f.write_str(op)?;
        side(f, b, right_min)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Identity => f.write_str("e"),
            Word::Gen(i) => write!(f, "g{i}"),
            Word::Product(parts) => {
                for (i, w) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match w {
                        Word::Product(_) => write!(f, "({w})")?,
                        _ => write!(f, "{w}")?,
                    }
                }
                Ok(())
            }
            Word::Power(base, k) => match **base {
                Word::Identity | Word::Gen(_) => write!(f, "{base}^{k}"),
                _ => write!(f, "({base})^{k}"),
            },
        }
    }
}

fn write_words(f: &mut fmt::Formatter<'_>, words: &[Word]) -> fmt::Result {
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(n) => write!(f, "C({n})"),
            Atom::Symmetric(n) => write!(f, "S({n})"),
            Atom::Alternating(n) => write!(f, "A({n})"),
            Atom::Dihedral(n) => write!(f, "D({n})"),
            Atom::Quaternion => f.write_str("Q8"),
            Atom::Elementary(p, k) => write!(f, "E({p}, {k})"),
            Atom::Perm { degree, generators } => {
                write!(f, "Perm({degree}")?;
                for g in generators {
                    f.write_str("; ")?;
                    if g.is_empty() {
                        f.write_str("()")?;
                    }
                    for c in g {
                        let pts: Vec<String> = c.iter().map(usize::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                f.write_str(")")
            }
        }
    }
}

impl GroupExpr {
    /// 0 for `wr`, 1 for `*`, 2 for everything self-delimiting.
    fn precedence(&self) -> u8 {
        match self {
            GroupExpr::Wreath(..) => 0,
            GroupExpr::Product(..) => 1,
            _ => 2,
        }
    }

    /// Replaces a parameter by a value. A `union` over that parameter
    /// becomes its member at that value.
    pub fn instantiate(&self, name: &str, value: u64) -> GroupExpr {
        let sub = |e: &GroupExpr| Box::new(e.instantiate(name, value));
        match self {
            GroupExpr::Atom(a) => GroupExpr::Atom(match a {
                Atom::Cyclic(n) => Atom::Cyclic(n.substitute(name, value)),
                Atom::Symmetric(n) => Atom::Symmetric(n.substitute(name, value)),
                Atom::Alternating(n) => Atom::Alternating(n.substitute(name, value)),
                Atom::Dihedral(n) => Atom::Dihedral(n.substitute(name, value)),
                Atom::Elementary(p, k) => {
                    Atom::Elementary(p.substitute(name, value), k.substitute(name, value))
                }
                Atom::Quaternion | Atom::Perm { .. } => a.clone(),
            }),
            GroupExpr::Product(a, b) => GroupExpr::Product(sub(a), sub(b)),
            GroupExpr::Wreath(a, b) => GroupExpr::Wreath(sub(a), sub(b)),
            GroupExpr::Quotient(e, w) => GroupExpr::Quotient(sub(e), w.clone()),
            GroupExpr::SubgroupOf(e, w) => GroupExpr::SubgroupOf(sub(e), w.clone()),
            GroupExpr::Union { param, body } if param == name => body.instantiate(name, value),
            GroupExpr::Union { param, body } => GroupExpr::Union {
                param: param.clone(),
                body: sub(body),
            },
        }
    }

    /// Parameters not bound by an enclosing `union`.
    pub fn free_params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            GroupExpr::Atom(a) => match a {
                Atom::Cyclic(n) | Atom::Symmetric(n) | Atom::Alternating(n) | Atom::Dihedral(n) => {
                    n.params(out)
                }
                Atom::Elementary(p, k) => {
                    p.params(out);
                    k.params(out);
                }
                Atom::Quaternion | Atom::Perm { .. } => {}
            },
            GroupExpr::Product(a, b) | GroupExpr::Wreath(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            GroupExpr::Quotient(e, _) | GroupExpr::SubgroupOf(e, _) => e.collect_params(out),
            GroupExpr::Union { param, body } => {
                let mut inner = body.free_params();
                inner.remove(param);
                out.extend(inner);
            }
        }
    }

    /// Whether the expression denotes a single finite group, i.e. contains
    /// no `union`.
    pub fn is_finite(&self) -> bool {
        match self {
            GroupExpr::Atom(_) => true,
            GroupExpr::Product(a, b) | GroupExpr::Wreath(a, b) => a.is_finite() && b.is_finite(),
            GroupExpr::Quotient(e, _) | GroupExpr::SubgroupOf(e, _) => e.is_finite(),
            GroupExpr::Union { .. } => false,
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, e: &GroupExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Product(a, b) => {
                side(f, a, 1)?;
                f.write_str(" * ")?;
                side(f, b, 2)
            }
            GroupExpr::Wreath(a, b) => {
                side(f, a, 0)?;
                f.write_str(" wr ")?;
                side(f, b, 1)
            }
            GroupExpr::Quotient(e, w) => {
                write!(f, "quotient({e}; ")?;
                write_words(f, w)?;
                f.write_str(")")
            }
            GroupExpr::SubgroupOf(e, w) => {
                write!(f, "subgroup({e}; ")?;
                write_words(f, w)?;
                f.write_str(")")
            }
            GroupExpr::Union { param, body } => write!(f, "union({param}, {body})"),
        }
    }
}

/// A structural upper bound on construction rank, with the exact value
/// when the expression is a single finite group (finite groups have
/// construction rank 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkBound {
    pub bound: Ordinal,
    pub exact: Option<Ordinal>,
}

fn structural_rk(e: &GroupExpr) -> Ordinal {
    match e {
        GroupExpr::Atom(_) => Ordinal::zero(),
        // An extension of one factor by the other.
        GroupExpr::Product(a, b) => structural_rk(a).max(structural_rk(b)).succ(),
        // The base is a union of finite powers, then one extension.
        GroupExpr::Wreath(a, b) => structural_rk(a).max(structural_rk(b)).succ().succ(),
        // Each class in the ladder is closed under subgroups and quotients.
        GroupExpr::Quotient(e, _) | GroupExpr::SubgroupOf(e, _) => structural_rk(e),
        // Every member has the body's bound; the union adds one step.
        GroupExpr::Union { body, .. } => structural_rk(body).succ(),
    }
}

pub fn rk_bound(e: &GroupExpr) -> RkBound {
    RkBound {
        bound: structural_rk(e),
        exact: e.is_finite().then(Ordinal::zero),
    }
}

/// `ω·(rk + 1)`, an upper bound on `ρ(T^1)`.
pub fn xi_bound(e: &GroupExpr) -> Ordinal {
    Ordinal::omega().mul(&rk_bound(e).bound.succ())
}
