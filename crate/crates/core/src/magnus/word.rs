use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// A word in the free group on `x₁, …, x_r`, stored as letters
/// `(index, exponent)` with nonzero exponents and distinct adjacent indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    r: usize,
    letters: Vec<(usize, i64)>,
}

impl FreeWord {
    pub fn identity(r: usize) -> Self {
        FreeWord { r, letters: Vec::new() }
    }

    pub fn generator(r: usize, i: usize) -> Result<Self> {
        Self::new(r, [(i, 1)])
    }

    /// Builds and normalizes a word; indices must lie in `1..=r`.
    pub fn new(r: usize, letters: impl IntoIterator<Item = (usize, i64)>) -> Result<Self> {
        let mut w = FreeWord::identity(r);
        for (i, e) in letters {
            if i == 0 || i > r {
                return Err(Error::IndexOutOfRange { index: i, max: r });
            }
            w.push(i, e);
        }
        Ok(w)
    }

    fn push(&mut self, i: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((j, f)) if *j == i => {
                *f += e;
                if *f == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((i, e)),
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters over `max(r, self.rank())` generators.
    pub fn with_rank(&self, r: usize) -> Self {
        FreeWord { r: r.max(self.r), letters: self.letters.clone() }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = FreeWord { r: self.r.max(other.r), letters: self.letters.clone() };
        for &(i, e) in &other.letters {
            w.push(i, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { r: self.r, letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut w = FreeWord::identity(self.r);
        while k > 0 {
            if k & 1 == 1 {
                w = w.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        w
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Parses `x1 x2^-1 [x1,x2] x3^5`, inferring the rank from the largest
    /// generator index.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(w)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FreeWord::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of word {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.error("expected an integer"))
    }

    fn word(&mut self) -> Result<FreeWord> {
        let mut w = FreeWord::identity(1);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('x' | '[' | '(' | '1') => {
                    let f = self.factor()?;
                    w = w.mul(&f);
                }
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self) -> Result<FreeWord> {
        let atom = match self.peek() {
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let i: usize = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.error("expected a generator index"))?;
                if i == 0 {
                    return Err(self.error("generator indices start at 1"));
                }
                FreeWord::new(i, [(i, 1)])?
            }
            Some('1') => {
                self.pos += 1;
                FreeWord::identity(1)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                if !self.eat(',') {
                    return Err(self.error("expected ','"));
                }
                let b = self.word()?;
                if !self.eat(']') {
                    return Err(self.error("expected ']'"));
                }
                FreeWord::commutator(&a, &b)
            }
            Some('(') => {
                self.pos += 1;
                let a = self.word()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                a
            }
            _ => return Err(self.error("expected a factor")),
        };
        if self.eat('^') {
            let n = self.integer()?;
            Ok(atom.pow(n))
        } else {
            Ok(atom)
        }
    }
}

/// Formats a word list for error messages.
pub(crate) fn describe(words: &[FreeWord]) -> String {
    words.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
