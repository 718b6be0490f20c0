//! Parser for the polynomial input grammar (whitespace ignored):
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)*
//! term   := coeff ['*' factor]* | factor ['*' factor]*
//! factor := var ['^' nat]
//! coeff  := nat
//! ```
//!
//! `*` between factors may be omitted where tokenization of the declared
//! variable names keeps the input unambiguous (longest declared name wins).

use super::{Mono, MultiPoly, PolyError};
use crate::gf::Field;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Nat(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
    vars: Vec<&'a str>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, vars: &[&'a str]) -> Lexer<'a> {
        // longest names first so that e.g. "x1" is not read as "x" + junk
        let mut sorted: Vec<&str> = vars.to_vec();
        sorted.sort_by_key(|n| std::cmp::Reverse(n.len()));
        Lexer {
            text: text.as_bytes(),
            pos: 0,
            vars: sorted,
        }
    }

    fn var_index(&self, name: &str, declared: &[&str]) -> usize {
        declared.iter().position(|&v| v == name).unwrap()
    }

    fn next(&mut self, declared: &[&str]) -> Result<Option<(Token, usize)>, PolyError> {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.text.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.text[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'0'..=b'9' => {
                let mut val: u64 = 0;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                    val = val
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((self.text[self.pos] - b'0') as u64))
                        .ok_or(PolyError::Parse {
                            pos: start,
                            msg: "integer literal too large".into(),
                        })?;
                    self.pos += 1;
                }
                Token::Nat(val)
            }
            _ => {
                let rest = &self.text[self.pos..];
                let hit = self
                    .vars
                    .iter()
                    .find(|name| rest.starts_with(name.as_bytes()));
                match hit {
                    Some(&name) => {
                        self.pos += name.len();
                        Token::Var(self.var_index(name, declared))
                    }
                    None => {
                        return Err(PolyError::Parse {
                            pos: start,
                            msg: format!("unknown symbol starting at '{}'", c as char),
                        })
                    }
                }
            }
        };
        Ok(Some((tok, start)))
    }
}

/// Parse `text` over the declared variables into a polynomial with
/// coefficients reduced mod p.
pub fn parse_poly(text: &str, vars: &[&str], field: &Field) -> Result<MultiPoly, PolyError> {
    let mut lexer = Lexer::new(text, vars);
    let mut tokens: Vec<(Token, usize)> = Vec::new();
    while let Some(t) = lexer.next(vars)? {
        tokens.push(t);
    }
    if tokens.is_empty() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let end = text.len();
    let mut out = MultiPoly::zero(field, vars.len());
    let mut i = 0;
    let mut negate = false;
    if tokens[0].0 == Token::Minus {
        negate = true;
        i = 1;
    }
    loop {
        // one term: optional leading coefficient, then factors
        let mut coeff: u64 = 1;
        let mut exps = vec![0u32; vars.len()];
        let mut saw_anything = false;
        if let Some((Token::Nat(n), _)) = tokens.get(i) {
            coeff = *n;
            saw_anything = true;
            i += 1;
        }
        loop {
            let mut j = i;
            if let Some((Token::Star, _)) = tokens.get(j) {
                j += 1;
            }
            match tokens.get(j) {
                Some((Token::Var(v), _)) => {
                    let v = *v;
                    i = j + 1;
                    saw_anything = true;
                    let mut e: u32 = 1;
                    if let Some((Token::Caret, cpos)) = tokens.get(i) {
                        let cpos = *cpos;
                        i += 1;
                        match tokens.get(i) {
                            Some((Token::Nat(n), npos)) => {
                                e = u32::try_from(*n).map_err(|_| PolyError::Parse {
                                    pos: *npos,
                                    msg: "exponent too large".into(),
                                })?;
                                i += 1;
                            }
                            other => {
                                return Err(PolyError::Parse {
                                    pos: other.map(|(_, p)| *p).unwrap_or(cpos + 1),
                                    msg: "expected exponent after '^'".into(),
                                })
                            }
                        }
                    }
                    exps[v] = exps[v].checked_add(e).ok_or(PolyError::Parse {
                        pos: end,
                        msg: "exponent overflow".into(),
                    })?;
                }
                _ => break,
            }
        }
        if !saw_anything {
            let pos = tokens.get(i).map(|(_, p)| *p).unwrap_or(end);
            return Err(PolyError::Parse {
                pos,
                msg: "expected a term".into(),
            });
        }
        let mut c = field.from_u64(coeff);
        if negate {
            c = field.neg(&c);
        }
        out.add_term(Mono(exps), c);
        match tokens.get(i) {
            None => break,
            Some((Token::Plus, _)) => {
                negate = false;
                i += 1;
            }
            Some((Token::Minus, _)) => {
                negate = true;
                i += 1;
            }
            Some((_, pos)) => {
                return Err(PolyError::Parse {
                    pos: *pos,
                    msg: "expected '+' or '-' between terms".into(),
                })
            }
        }
    }
    Ok(out)
}
