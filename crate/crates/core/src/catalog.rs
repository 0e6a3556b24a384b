//! The built-in group catalog used by the verification suites.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub expression: String,
    pub expected_order: usize,
}

fn entry(expression: &str, expected_order: usize) -> CatalogEntry {
    CatalogEntry {
        name: expression.to_string(),
        expression: expression.to_string(),
        expected_order,
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Every catalog entry, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    out.extend((1..=32).map(|n| entry(&format!("C({n})"), n)));
    out.extend((1..=16).map(|n| entry(&format!("D({n})"), 2 * n)));
    out.extend((1..=5).map(|n| entry(&format!("S({n})"), factorial(n))));
    out.extend((3..=5).map(|n| entry(&format!("A({n})"), factorial(n) / 2)));
    out.push(entry("Q8", 8));
    for (p, k) in [(2usize, 2u32), (2, 3), (2, 4), (3, 2), (5, 2)] {
        out.push(entry(&format!("E({p}, {k})"), p.pow(k)));
    }
    for (expr, order) in [
        ("S(3) * C(2)", 12),
        ("S(3) * C(3)", 18),
        ("Q8 * C(2)", 16),
        ("D(4) * C(2)", 16),
        ("A(4) * C(2)", 24),
        ("S(3) * S(3)", 36),
        ("C(2) wr C(2)", 8),
        ("C(2) wr C(3)", 24),
        ("C(3) wr C(2)", 18),
    ] {
        out.push(entry(expr, order));
    }
    out
}

/// Catalog entries of order at most `max_order`.
pub fn up_to(max_order: usize) -> Vec<CatalogEntry> {
    catalog()
        .into_iter()
        .filter(|e| e.expected_order <= max_order)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl;

    #[test]
    fn every_entry_evaluates_to_its_order() {
        let all = catalog();
        for e in &all {
            let g = dsl::eval(&dsl::parse(&e.expression).unwrap(), 5040).unwrap();
            assert_eq!(g.order(), e.expected_order, "{}", e.name);
        }
        let mut names: Vec<&str> = all.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all.len());
    }
}
