use std::fmt;

use super::{EndExpr, EndLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => self.err(format!("expected `{c}`, found `{got}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected a keyword");
        }
        Ok(&self.src[start..self.pos])
    }

    fn label(&mut self) -> Result<EndLabel, ParseError> {
        let start = self.pos;
        let word = self.ident()?;
        word.parse().map_err(|m| ParseError { offset: start, message: m })
    }

    fn expr(&mut self) -> Result<EndExpr, ParseError> {
        let start = self.pos;
        let head = self.ident()?;
        match head {
            "pt" | "cantor" => {
                self.expect('(')?;
                let l = self.label()?;
                self.expect(')')?;
                Ok(if head == "pt" { EndExpr::Pt(l) } else { EndExpr::Cantor(l) })
            }
            "seq" => {
                self.expect('(')?;
                let body = self.expr()?;
                self.expect(';')?;
                let kw_at = self.pos;
                if self.ident()? != "limit" {
                    return Err(ParseError { offset: kw_at, message: "expected `limit=`".into() });
                }
                self.expect('=')?;
                let limit = self.label()?;
                self.expect(')')?;
                Ok(EndExpr::seq(body, limit))
            }
            "union" => {
                self.expect('(')?;
                let mut parts = vec![self.expr()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(EndExpr::Union(parts))
            }
            other => Err(ParseError { offset: start, message: format!("unknown constructor `{other}`") }),
        }
    }
}

pub(super) fn parse_end_expr(src: &str) -> Result<EndExpr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return p.err(format!("trailing input starting with `{c}`"));
    }
    Ok(e)
}
