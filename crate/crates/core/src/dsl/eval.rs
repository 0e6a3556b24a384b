use std::collections::HashMap;
use std::sync::Arc;

use super::{Atom, GroupExpr, IntExpr, Word};
use crate::error::{Error, Result};
use crate::group::construct;
use crate::group::{FinGroup, Permutation};

fn eval_int(e: &IntExpr, env: &HashMap<String, u64>) -> Result<u64> {
    let overflow = || Error::InvalidArgument(format!("integer expression {e} overflows"));
    Ok(match e {
        IntExpr::Lit(n) => *n,
        IntExpr::Param(p) => *env
            .get(p)
            .ok_or_else(|| Error::UnboundParameter(p.clone()))?,
        IntExpr::Add(a, b) => eval_int(a, env)?
            .checked_add(eval_int(b, env)?)
            .ok_or_else(overflow)?,
        IntExpr::Sub(a, b) => eval_int(a, env)?
            .checked_sub(eval_int(b, env)?)
            .ok_or_else(|| Error::InvalidArgument(format!("integer expression {e} is negative")))?,
        IntExpr::Mul(a, b) => eval_int(a, env)?
            .checked_mul(eval_int(b, env)?)
            .ok_or_else(overflow)?,
        IntExpr::Pow(a, b) => {
            let exp = u32::try_from(eval_int(b, env)?).map_err(|_| overflow())?;
            eval_int(a, env)?.checked_pow(exp).ok_or_else(overflow)?
        }
    })
}

fn size(e: &IntExpr, env: &HashMap<String, u64>) -> Result<usize> {
    usize::try_from(eval_int(e, env)?)
        .map_err(|_| Error::InvalidArgument(format!("{e} is too large")))
}

/// The element a word denotes, with `gi` the `i`-th generator of `g`.
pub fn resolve_word(g: &FinGroup, w: &Word) -> Result<usize> {
    match w {
        Word::Identity => Ok(g.identity()),
        Word::Gen(i) => g.generator_indices().get(*i).copied().ok_or_else(|| {
            Error::WordResolution(format!(
                "g{i} does not exist; the group has {} generators",
                g.generators().len()
            ))
        }),
        Word::Product(parts) => {
            let mut x = g.identity();
            for p in parts {
                x = g.mul(x, resolve_word(g, p)?);
            }
            Ok(x)
        }
        Word::Power(base, k) => {
            let b = resolve_word(g, base)?;
            let b = if *k < 0 { g.inv(b) } else { b };
            // Reduce the exponent modulo the element order first.
            let n = k.unsigned_abs() % g.element_order(b) as u64;
            Ok((0..n).fold(g.identity(), |x, _| g.mul(x, b)))
        }
    }
}

fn eval_in(e: &GroupExpr, env: &HashMap<String, u64>, limit: usize) -> Result<Arc<FinGroup>> {
    let g = match e {
        GroupExpr::Atom(a) => match a {
            Atom::Cyclic(n) => construct::cyclic(size(n, env)?, limit)?,
            Atom::Symmetric(n) => construct::symmetric(size(n, env)?, limit)?,
            Atom::Alternating(n) => construct::alternating(size(n, env)?, limit)?,
            Atom::Dihedral(n) => construct::dihedral(size(n, env)?, limit)?,
            Atom::Quaternion => construct::quaternion(limit)?,
            Atom::Elementary(p, k) => {
                construct::elementary_abelian(size(p, env)?, size(k, env)?, limit)?
            }
            Atom::Perm { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|cycles| Permutation::from_cycles(*degree, cycles))
                    .collect::<Result<Vec<_>>>()?;
                FinGroup::generate(*degree, gens, limit)?
            }
        },
        GroupExpr::Product(a, b) => {
            let (a, b) = (eval_in(a, env, limit)?, eval_in(b, env, limit)?);
            construct::direct_product(&a, &b, limit)?
        }
        GroupExpr::Wreath(a, b) => {
            let (a, b) = (eval_in(a, env, limit)?, eval_in(b, env, limit)?);
            construct::wreath_product(&a, &b, limit)?
        }
        GroupExpr::Quotient(inner, words) => {
            let g = eval_in(inner, env, limit)?;
            let xs = words
                .iter()
                .map(|w| resolve_word(&g, w))
                .collect::<Result<Vec<_>>>()?;
            let n = g.normal_closure(&xs);
            return Ok(g.quotient(&n)?.group().clone());
        }
        GroupExpr::SubgroupOf(inner, words) => {
            let g = eval_in(inner, env, limit)?;
            let xs = words
                .iter()
                .map(|w| resolve_word(&g, w))
                .collect::<Result<Vec<_>>>()?;
            let gens = xs
                .iter()
                .filter(|&&x| x != g.identity())
                .map(|&x| g.element(x).clone())
                .collect();
            FinGroup::generate(g.degree(), gens, limit)?
        }
        GroupExpr::Union { param, body } => match env.get(param) {
            Some(_) => return eval_in(body, env, limit),
            None => return Err(Error::UnboundParameter(param.clone())),
        },
    };
    Ok(Arc::new(g))
}

/// Evaluates an expression without free parameters or unions.
pub fn eval(e: &GroupExpr, limit: usize) -> Result<Arc<FinGroup>> {
    eval_in(e, &HashMap::new(), limit)
}

/// Evaluates with parameter values; a `union` over a bound parameter stands
/// for its member at that value.
pub fn eval_with(
    e: &GroupExpr,
    bindings: &HashMap<String, u64>,
    limit: usize,
) -> Result<Arc<FinGroup>> {
    eval_in(e, bindings, limit)
}
