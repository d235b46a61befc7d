//! ASCII Viro notation for three-nest schemes.
//!
//! Grammar (whitespace allowed between tokens):
//!
//! ```text
//! scheme := "<" "J" items ">"
//! items  := ("+" item)*
//! item   := count | "1" "<" inner ">"
//! inner  := count | itemlist
//! count  := positive integer
//! ```
//!
//! Canonical form is `<J + 1<a1> + 1<a2> + 1<a3> + beta>`: single spaces around
//! `+`, nests in stored order, the outer count last and omitted when zero.

use crate::scheme::{RealScheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Count(u32),
    Oval(Vec<Item>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SchemeError> {
        Err(SchemeError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), SchemeError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn number(&mut self) -> Result<u32, SchemeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(0) => Err(SchemeError::Syntax { pos: start, msg: "counts must be positive".into() }),
            Ok(n) => Ok(n),
            Err(_) => Err(SchemeError::Syntax { pos: start, msg: "count out of range".into() }),
        }
    }

    fn item(&mut self) -> Result<Item, SchemeError> {
        let start = self.pos;
        let n = self.number()?;
        if self.peek() == Some(b'<') {
            if n != 1 {
                self.pos = start;
                self.skip_ws();
                return self.err("only a single oval '1' can enclose other ovals");
            }
            self.pos += 1;
            let inner = self.item_list()?;
            self.expect(b'>')?;
            Ok(Item::Oval(inner))
        } else {
            Ok(Item::Count(n))
        }
    }

    fn item_list(&mut self) -> Result<Vec<Item>, SchemeError> {
        let mut items = vec![self.item()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            items.push(self.item()?);
        }
        Ok(items)
    }

    fn scheme(&mut self) -> Result<Vec<Item>, SchemeError> {
        self.expect(b'<')?;
        if self.peek() != Some(b'J') {
            return self.err("expected the pseudo-line 'J'");
        }
        self.pos += 1;
        let mut items = Vec::new();
        while self.peek() == Some(b'+') {
            self.pos += 1;
            if self.peek() == Some(b'J') {
                return Err(SchemeError::Arity("exactly one pseudo-line J is allowed".into()));
            }
            items.push(self.item()?);
        }
        self.expect(b'>')?;
        if self.peek().is_some() {
            return self.err("trailing input after scheme");
        }
        Ok(items)
    }
}

/// Parses with the oval-count check (`alpha1 + alpha2 + alpha3 + beta = 25`).
pub fn parse_real_scheme(text: &str) -> Result<RealScheme, SchemeError> {
    parse_real_scheme_with(text, true)
}

/// Parses a scheme; `strict` enables the oval-count check.
pub fn parse_real_scheme_with(text: &str, strict: bool) -> Result<RealScheme, SchemeError> {
    let items = Parser::new(text).scheme()?;
    let mut alpha = Vec::new();
    let mut beta = 0u32;
    for item in items {
        match item {
            Item::Count(n) => beta += n,
            Item::Oval(inner) => {
                let mut size = 0u32;
                for it in inner {
                    match it {
                        Item::Count(n) => size += n,
                        Item::Oval(_) => {
                            return Err(SchemeError::Arity("nests deeper than 2 are not supported".into()))
                        }
                    }
                }
                alpha.push(size);
            }
        }
    }
    let alpha: [u32; 3] = alpha.try_into().map_err(|v: Vec<u32>| {
        SchemeError::Arity(format!("expected exactly three non-empty ovals, found {}", v.len()))
    })?;
    if strict {
        RealScheme::new(alpha, beta)
    } else {
        RealScheme::unchecked(alpha, beta)
    }
}

pub fn format_real_scheme(scheme: &RealScheme) -> String {
    let mut out = String::from("<J");
    for a in scheme.alpha {
        out.push_str(&format!(" + 1<{a}>"));
    }
    if scheme.beta > 0 {
        out.push_str(&format!(" + {}", scheme.beta));
    }
    out.push('>');
    out
}
