use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::lexer::{tokenize, Token, TokenKind};
use super::{Arm, Circuit, PhaseExpr, Stmt};
use crate::error::{Error, Result};

/// Parses circuit text.
///
/// ```text
/// circuit = { stmt } ;
/// stmt    = "bs" | "ps" arm "(" phase ")" | "loss" "(" float ")"
///         | "d" | "dprime" | "ccd" | "repeat" int "{" { stmt } "}" ;
/// arm     = "upper" | "lower" ;
/// phase   = [ float "*" ] "phi" | float [ "pi" ] ;
/// ```
pub fn parse(text: &str) -> Result<Circuit> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let statements = p.block(false)?;
    Ok(Circuit { statements })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, tok: &Token, expected: &str) -> Error {
        Error::Syntax {
            line: tok.line,
            column: tok.column,
            message: format!("expected {expected}, found {}", tok.describe()),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token> {
        let tok = self.next();
        if tok.kind == kind {
            Ok(tok)
        } else {
            Err(self.syntax(&tok, what))
        }
    }

    fn block(&mut self, nested: bool) -> Result<Vec<Stmt>> {
        let mut stmts = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::Eof if !nested => return Ok(stmts),
                TokenKind::RBrace if nested => {
                    self.next();
                    return Ok(stmts);
                }
                _ => stmts.push(self.stmt()?),
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let tok = self.next();
        let TokenKind::Ident(word) = &tok.kind else {
            return Err(self.syntax(&tok, "a statement"));
        };
        match word.as_str() {
            "bs" => Ok(Stmt::Bs),
            "d" => Ok(Stmt::D),
            "dprime" => Ok(Stmt::DPrime),
            "ccd" => Ok(Stmt::Ccd),
            "ps" => {
                let arm_tok = self.next();
                let arm = match &arm_tok.kind {
                    TokenKind::Ident(a) if a == "upper" => Arm::Upper,
                    TokenKind::Ident(a) if a == "lower" => Arm::Lower,
                    _ => return Err(self.syntax(&arm_tok, "arm 'upper' or 'lower'")),
                };
                self.expect(TokenKind::LParen, "'('")?;
                let phase = self.phase()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(Stmt::Ps { arm, phase })
            }
            "loss" => {
                self.expect(TokenKind::LParen, "'('")?;
                let num = self.next();
                let t = self.float(&num)?;
                if !(t > 0.0 && t <= 1.0) {
                    return Err(Error::Number {
                        line: num.line,
                        column: num.column,
                        message: format!("loss transmission {t} outside (0, 1]"),
                    });
                }
                self.expect(TokenKind::RParen, "')'")?;
                Ok(Stmt::Loss(t))
            }
            "repeat" => {
                let num = self.next();
                let count = self.count(&num)?;
                self.expect(TokenKind::LBrace, "'{'")?;
                let body = self.block(true)?;
                Ok(Stmt::Repeat { count, body })
            }
            _ => Err(self.syntax(&tok, "a statement")),
        }
    }

    fn phase(&mut self) -> Result<PhaseExpr> {
        let tok = self.next();
        match &tok.kind {
            TokenKind::Ident(w) if w == "phi" => Ok(PhaseExpr::SweepVar(1.0)),
            TokenKind::Number(_) => {
                let value = self.float(&tok)?;
                match &self.peek().kind {
                    TokenKind::Star => {
                        self.next();
                        let phi = self.next();
                        match &phi.kind {
                            TokenKind::Ident(w) if w == "phi" => Ok(PhaseExpr::SweepVar(value)),
                            _ => Err(self.syntax(&phi, "'phi'")),
                        }
                    }
                    TokenKind::Ident(w) if w == "pi" => {
                        self.next();
                        Ok(PhaseExpr::LiteralPi(value))
                    }
                    _ => Ok(PhaseExpr::Literal(value)),
                }
            }
            _ => Err(self.syntax(&tok, "a phase")),
        }
    }

    fn float(&self, tok: &Token) -> Result<f64> {
        let TokenKind::Number(text) = &tok.kind else {
            return Err(self.syntax(tok, "a number"));
        };
        let value: f64 = text.parse().map_err(|_| number_error(tok, text, "is not a number"))?;
        if !value.is_finite() {
            return Err(number_error(tok, text, "overflows"));
        }
        Ok(value)
    }

    fn count(&self, tok: &Token) -> Result<u32> {
        let TokenKind::Number(text) = &tok.kind else {
            return Err(self.syntax(tok, "a repeat count"));
        };
        let digits = text.strip_prefix('+').unwrap_or(text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(number_error(tok, text, "is not a positive integer"));
        }
        let count: u32 = digits.parse().map_err(|_| number_error(tok, text, "overflows"))?;
        if count == 0 {
            return Err(number_error(tok, text, "repeat count must be at least 1"));
        }
        Ok(count)
    }
}

fn number_error(tok: &Token, text: &str, what: &str) -> Error {
    Error::Number {
        line: tok.line,
        column: tok.column,
        message: String::from(text) + " " + what,
    }
}
