//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly
//! decreasing exponents (themselves ordinals) and positive coefficients.
//! The representation is canonical, so derived equality and hashing agree
//! with ordinal equality.
//!
//! Text format: `0`, `7`, `w`, `w+1`, `w*2+3`, `w^2*4+w`, `w^(w+1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ordinal {input:?} at byte {pos}: {msg}")]
pub struct ParseOrdinalError {
    pub input: String,
    pub pos: usize,
    pub msg: &'static str,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    /// `ω`.
    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: vec![(e, 1)],
        }
    }

    /// Builds from `(exponent, coefficient)` pairs, rejecting anything that
    /// is not already in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Option<Self> {
        let ok = terms.iter().all(|(_, c)| *c > 0) && terms.windows(2).all(|w| w[0].0 > w[1].0);
        ok.then_some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn succ(&self) -> Self {
        self.add(&Self::one())
    }

    /// Ordinal sum. Terms of `self` below the leading exponent of `rhs` are
    /// absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.leading_exponent() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut carry = 0u64;
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => carry = *c,
                Ordering::Less => break,
            }
        }
        let mut rest = rhs.terms.iter();
        let (e0, c0) = rest.next().expect("nonzero rhs");
        terms.push((
            e0.clone(),
            carry
                .checked_add(*c0)
                .expect("ordinal coefficient overflow"),
        ));
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Ordinal product.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = self.leading_exponent() else {
            return Self::zero();
        };
        let mut acc = Self::zero();
        for (f, c) in &rhs.terms {
            let piece = if f.is_zero() {
                // (ω^e₁·c₁ + rest)·c = ω^e₁·(c₁·c) + rest
                let mut terms = self.terms.clone();
                terms[0].1 = terms[0]
                    .1
                    .checked_mul(*c)
                    .expect("ordinal coefficient overflow");
                Ordinal { terms }
            } else {
                Ordinal {
                    terms: vec![(lead.add(f), *c)],
                }
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// Supremum of a finite family; the empty family has supremum 0.
    pub fn sup<'a, I: IntoIterator<Item = &'a Ordinal>>(xs: I) -> Ordinal {
        xs.into_iter().max().cloned().unwrap_or_default()
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs)
    }
}

impl std::ops::Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::mul(self, rhs)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            match e.as_nat() {
                Some(1) => {}
                Some(k) => write!(f, "^{k}")?,
                None => write!(f, "^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &'static str) -> ParseOrdinalError {
        ParseOrdinalError {
            input: self.src.to_string(),
            pos: self.pos,
            msg,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    // term := nat | 'w' ('^' exp)? ('*' nat)?
    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coef = if self.eat(b'*') { self.nat()? } else { 1 };
                if coef == 0 {
                    return Err(self.err("zero coefficient"));
                }
                Ok(Ordinal::omega_pow(exp).mul(&Ordinal::nat(coef)))
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            _ => Err(self.err("expected 'w' or a number")),
        }
    }

    // exp := nat | 'w' | '(' ordinal ')'
    fn exponent(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.ordinal()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            _ => Ok(Ordinal::nat(self.nat()?)),
        }
    }
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let value = cur.ordinal()?;
        if cur.peek().is_some() {
            return Err(cur.err("trailing input"));
        }
        Ok(value)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparison() {
        assert_eq!(o("w").cmp(&o("3")), Ordering::Greater);
        assert_eq!(o("w+1").cmp(&o("w+1")), Ordering::Equal);
        assert_eq!(o("w*2").cmp(&o("w+5")), Ordering::Greater);
        assert!(o("w^2") > o("w*100+100"));
        assert!(o("w^w") > o("w^5*3"));
    }

    #[test]
    fn addition() {
        assert_eq!(&o("1") + &o("w"), o("w"));
        assert_eq!(&o("w") + &o("1"), o("w+1"));
        assert_eq!(&o("w*2+3") + &o("w+1"), o("w*3+1"));
        assert_eq!(&o("w^2+w") + &o("0"), o("w^2+w"));
        assert_eq!(&o("w^2+w*4+2") + &o("w^2"), o("w^2*2"));
    }

    #[test]
    fn multiplication() {
        assert_eq!(&o("w") * &o("0"), o("0"));
        assert_eq!(&o("2") * &o("w"), o("w"));
        assert_eq!(&o("w") * &(&o("2") + &o("1")), o("w*3"));
        assert_eq!(&o("w+1") * &o("2"), o("w*2+1"));
        assert_eq!(&o("w+1") * &o("w"), o("w^2"));
        assert_eq!(&o("w*2") * &o("w+3"), o("w^2+w*6"));
    }

    #[test]
    fn supremum() {
        assert_eq!(Ordinal::sup([]), o("0"));
        assert_eq!(Ordinal::sup(&[o("3"), o("w"), o("5")]), o("w"));
        assert_eq!(Ordinal::sup(&[o("w+1"), o("w*2")]), o("w*2"));
    }

    #[test]
    fn rendering() {
        for s in [
            "0",
            "3",
            "w",
            "w+1",
            "w*2+3",
            "w^2*4+w",
            "w^(w+1)*2+7",
            "w^(w^2)",
        ] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("w^w").to_string(), "w^(w)");
        assert_eq!(o("w^1*1+0").to_string(), "w");
    }

    #[test]
    fn malformed_text() {
        for s in ["", "w*0", "w^", "x", "3 3", "w^(w"] {
            assert!(s.parse::<Ordinal>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn from_terms_rejects_non_normal() {
        assert!(Ordinal::from_terms(vec![(Ordinal::zero(), 2), (Ordinal::one(), 1)]).is_none());
        assert!(Ordinal::from_terms(vec![(Ordinal::one(), 0)]).is_none());
        assert_eq!(
            Ordinal::from_terms(vec![(Ordinal::one(), 2), (Ordinal::zero(), 3)]).unwrap(),
            o("w*2+3")
        );
    }

    pub(crate) fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        let leaf = (0u64..5).prop_map(Ordinal::nat);
        leaf.prop_recursive(3, 16, 4, |inner| {
            prop::collection::vec((inner, 1u64..4), 0..4).prop_map(|mut ts| {
                ts.sort_by(|a, b| b.0.cmp(&a.0));
                ts.dedup_by(|a, b| a.0 == b.0);
                Ordinal::from_terms(ts).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(a in arb_ordinal()) {
            prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
        }

        #[test]
        fn json_round_trip(a in arb_ordinal()) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<Ordinal>(&s).unwrap(), a);
        }
    }
}
