use super::{Atom, GroupExpr, IntExpr, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Punct(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(char::is_ascii_digit) {
                s.push(bump(&mut chars));
            }
            let n = s.parse().map_err(|_| Error::Syntax {
                line: l,
                column: col,
                message: format!("integer {s} is too large"),
            })?;
            out.push(Token {
                tok: Tok::Int(n),
                line: l,
                column: col,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
            {
                s.push(bump(&mut chars));
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: l,
                column: col,
            });
        } else if "();,*^+-".contains(c) {
            bump(&mut chars);
            out.push(Token {
                tok: Tok::Punct(c),
                line: l,
                column: col,
            });
        } else {
            return Err(Error::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.tokens[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let mut left = self.product()?;
        while self.is_keyword("wr") {
            self.advance();
            let right = self.product()?;
            left = GroupExpr::Wreath(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn product(&mut self) -> Result<GroupExpr> {
        let mut left = self.term()?;
        while self.eat('*') {
            let right = self.term()?;
            left = GroupExpr::Product(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<GroupExpr> {
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error(format!("expected a group, found {}", self.describe())),
        };
        if name == "Q8" {
            self.advance();
            return Ok(GroupExpr::Atom(Atom::Quaternion));
        }
        let known = [
            "C", "S", "A", "D", "E", "Perm", "quotient", "subgroup", "union",
        ];
        if !known.contains(&name.as_str()) {
            return self.error(format!("unknown group constructor `{name}`"));
        }
        self.advance();
        self.expect('(')?;
        let e = match name.as_str() {
            "C" => GroupExpr::Atom(Atom::Cyclic(self.int()?)),
            "S" => GroupExpr::Atom(Atom::Symmetric(self.int()?)),
            "A" => GroupExpr::Atom(Atom::Alternating(self.int()?)),
            "D" => GroupExpr::Atom(Atom::Dihedral(self.int()?)),
            "E" => {
                let p = self.int()?;
                self.expect(',')?;
                GroupExpr::Atom(Atom::Elementary(p, self.int()?))
            }
            "Perm" => self.perm()?,
            "quotient" | "subgroup" => {
                let inner = Box::new(self.expr()?);
                self.expect(';')?;
                let words = self.words()?;
                if name == "quotient" {
                    GroupExpr::Quotient(inner, words)
                } else {
                    GroupExpr::SubgroupOf(inner, words)
                }
            }
            _ => {
                let param = match self.advance() {
                    Tok::Ident(p) if p != "wr" => p,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected a parameter name");
                    }
                };
                self.expect(',')?;
                GroupExpr::Union {
                    param,
                    body: Box::new(self.expr()?),
                }
            }
        };
        self.expect(')')?;
        Ok(e)
    }

    fn perm(&mut self) -> Result<GroupExpr> {
        let degree = match self.advance() {
            Tok::Int(n) if n >= 1 => n as usize,
            _ => {
                self.pos -= 1;
                return self.error("expected a positive degree");
            }
        };
        let mut generators = Vec::new();
        while self.eat(';') {
            let mut cycles = Vec::new();
            while *self.peek() == Tok::Punct('(') {
                let at = self.pos;
                self.advance();
                let mut cycle = Vec::new();
                loop {
                    match self.advance() {
                        Tok::Int(p) if (p as usize) < degree => cycle.push(p as usize),
                        Tok::Int(p) => {
                            self.pos -= 1;
                            return self.error(format!("point {p} is outside 0..{degree}"));
                        }
                        Tok::Punct(',') => {}
                        Tok::Punct(')') => break,
                        _ => {
                            self.pos -= 1;
                            return self.error("expected a point or `)`");
                        }
                    }
                }
                let mut sorted = cycle.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != cycle.len() {
                    self.pos = at;
                    return self.error("a cycle repeats a point");
                }
                if cycle.len() > 1 {
                    cycles.push(cycle);
                }
            }
            generators.push(cycles);
        }
        Ok(GroupExpr::Atom(Atom::Perm { degree, generators }))
    }

    fn words(&mut self) -> Result<Vec<Word>> {
        let mut words = vec![self.word()?];
        while self.eat(',') {
            words.push(self.word()?);
        }
        Ok(words)
    }

    fn word(&mut self) -> Result<Word> {
        let mut parts = vec![self.word_factor()?];
        while self.eat('*') {
            parts.push(self.word_factor()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Word::Product(parts)
        })
    }

    fn word_factor(&mut self) -> Result<Word> {
        let base = if self.eat('(') {
            let w = self.word()?;
            self.expect(')')?;
            w
        } else {
            match self.peek().clone() {
                Tok::Ident(s) if s == "e" => {
                    self.advance();
                    Word::Identity
                }
                Tok::Ident(s)
                    if s.len() == 2 && s.starts_with('g') && s.as_bytes()[1].is_ascii_digit() =>
                {
                    self.advance();
                    Word::Gen((s.as_bytes()[1] - b'0') as usize)
                }
                _ => {
                    return self.error(format!(
                        "expected a generator g0..g9 or `e`, found {}",
                        self.describe()
                    ))
                }
            }
        };
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.advance() {
            Tok::Int(k) if k <= i64::MAX as u64 => {
                let k = k as i64;
                Ok(Word::Power(Box::new(base), if negative { -k } else { k }))
            }
            _ => {
                self.pos -= 1;
                self.error("expected an integer exponent")
            }
        }
    }

    fn int(&mut self) -> Result<IntExpr> {
        let mut left = self.int_product()?;
        loop {
            if self.eat('+') {
                left = IntExpr::Add(Box::new(left), Box::new(self.int_product()?));
            } else if self.eat('-') {
                left = IntExpr::Sub(Box::new(left), Box::new(self.int_product()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn int_product(&mut self) -> Result<IntExpr> {
        let mut left = self.int_power()?;
        while self.eat('*') {
            left = IntExpr::Mul(Box::new(left), Box::new(self.int_power()?));
        }
        Ok(left)
    }

    fn int_power(&mut self) -> Result<IntExpr> {
        let base = self.int_primary()?;
        if self.eat('^') {
            return Ok(IntExpr::Pow(Box::new(base), Box::new(self.int_power()?)));
        }
        Ok(base)
    }

    fn int_primary(&mut self) -> Result<IntExpr> {
        if self.eat('(') {
            let e = self.int()?;
            self.expect(')')?;
            return Ok(e);
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(IntExpr::Lit(n))
            }
            Tok::Ident(p) if *self.peek_at(1) != Tok::Punct('(') => {
                self.advance();
                Ok(IntExpr::Param(p))
            }
            _ => self.error(format!("expected an integer, found {}", self.describe())),
        }
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(text: &str) -> Result<GroupExpr> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {} after expression", p.describe()));
    }
    Ok(e)
}
