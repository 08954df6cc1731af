use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Star,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(s) => format!("'{s}'"),
            TokenKind::Number(s) => format!("number '{s}'"),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::LBrace => "'{'".into(),
            TokenKind::RBrace => "'}'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                line,
                column,
            });
            return Ok(tokens);
        };
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
                continue;
            }
            '(' | ')' | '{' | '}' | '*' => {
                cur.bump();
                match c {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    _ => TokenKind::Star,
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                cur.take_while(&mut s, |c| c.is_ascii_alphanumeric() || c == '_');
                TokenKind::Ident(s)
            }
            c if c.is_ascii_digit() || matches!(c, '.' | '+' | '-') => {
                TokenKind::Number(lex_number(&mut cur, line, column)?)
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        tokens.push(Token { kind, line, column });
    }
}

// sign? digits? ('.' digits?)? (('e'|'E') sign? digits)?
fn lex_number(cur: &mut Cursor<'_>, line: usize, column: usize) -> Result<String> {
    let bad = |message: String| Error::Number {
        line,
        column,
        message,
    };
    let mut s = String::new();
    if let Some(sign @ ('+' | '-')) = cur.peek() {
        s.push(sign);
        cur.bump();
    }
    let mut mantissa_digits = 0;
    let before = s.len();
    cur.take_while(&mut s, |c| c.is_ascii_digit());
    mantissa_digits += s.len() - before;
    if cur.peek() == Some('.') {
        s.push('.');
        cur.bump();
        let before = s.len();
        cur.take_while(&mut s, |c| c.is_ascii_digit());
        mantissa_digits += s.len() - before;
    }
    if mantissa_digits == 0 {
        return Err(bad(format!("'{s}' has no digits")));
    }
    if let Some(e @ ('e' | 'E')) = cur.peek() {
        s.push(e);
        cur.bump();
        if let Some(sign @ ('+' | '-')) = cur.peek() {
            s.push(sign);
            cur.bump();
        }
        let before = s.len();
        cur.take_while(&mut s, |c| c.is_ascii_digit());
        if s.len() == before {
            return Err(bad(format!("'{s}' has an empty exponent")));
        }
    }
    // "1.2.3", "3x": a number glued to more number-ish characters.
    if let Some(c) = cur.peek() {
        if c == '.' || c.is_ascii_digit() || (c.is_ascii_alphabetic() && c != 'p') || c == '_' {
            let mut rest = s.clone();
            cur.take_while(&mut rest, |c| c.is_ascii_alphanumeric() || c == '.' || c == '_');
            return Err(bad(format!("malformed number '{rest}'")));
        }
    }
    Ok(s)
}
