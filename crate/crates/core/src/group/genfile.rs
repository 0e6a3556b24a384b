//! Generator files.
//!
//! ```text
//! # the dihedral group of the square
//! degree 4
//! (0 1 2 3)
//! (0 3)(1 2)
//! ```

use super::{FinGroup, Permutation};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Syntax {
            line: lineno + 1,
            column: 1,
            message,
        };
        match degree {
            None => {
                let n = line
                    .strip_prefix("degree")
                    .map(str::trim)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(format!("expected `degree N`, found {line:?}")))?;
                if n == 0 {
                    return Err(err("degree must be positive".into()));
                }
                degree = Some(n);
            }
            Some(n) => {
                gens.push(Permutation::parse_cycles(n, line).map_err(|e| err(e.to_string()))?)
            }
        }
    }
    let degree = degree.ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `degree N` line".into(),
    })?;
    Ok((degree, gens))
}

pub fn load(text: &str, limit: usize) -> Result<FinGroup> {
    let (degree, gens) = parse(text)?;
    FinGroup::generate(degree, gens, limit)
}

pub fn render(group: &FinGroup) -> String {
    let mut out = format!("degree {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_d4() {
        let g = load("# square\ndegree 4\n\n(0 1 2 3)\n(0 3)(1 2)  # flip\n", 100).unwrap();
        assert_eq!(g.order(), 8);
        let again = load(&render(&g), 100).unwrap();
        assert_eq!(again.elements(), g.elements());
    }

    #[test]
    fn errors_carry_lines() {
        match parse("degree 3\n(0 5)\n") {
            Err(Error::Syntax { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("(0 1)\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse("# only comments\n"),
            Err(Error::Syntax { .. })
        ));
    }
}
