//! A small netlist language for two-port interferometer chains.
//!
//! ```text
//! # one cross-coupled double block, written out by hand
//! bs
//! ps lower(phi)
//! bs
//! bs
//! ps upper(phi)
//! bs
//!
//! repeat 3 { loss(0.9) ccd }
//! ```
//!
//! Statements are listed in the order light meets them. `d`, `dprime` and
//! `ccd` are macros for `bs ps lower(phi) bs`, `bs ps upper(phi) bs` and
//! `d dprime`. Phases are `phi`, `s * phi`, a plain number of radians, or a
//! number followed by `pi`.

mod lexer;
mod parser;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::{self, Write as _};

use crate::elements::{beam_splitter, phase_lower, phase_upper};
use crate::linalg::{mat_mul, TransferMatrix};

pub use parser::parse;

/// Interferometer arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Upper arm (first vector component).
    Upper,
    /// Lower arm (second vector component).
    Lower,
}

/// Phase of a shifter, possibly depending on the sweep variable `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseExpr {
    /// `scale * phi`.
    SweepVar(f64),
    /// Fixed phase in radians.
    Literal(f64),
    /// Fixed phase `multiplier * pi`.
    LiteralPi(f64),
}

impl PhaseExpr {
    /// Phase in radians at sweep value `phi`.
    pub fn eval(&self, phi: f64) -> f64 {
        match *self {
            PhaseExpr::SweepVar(scale) => scale * phi,
            PhaseExpr::Literal(r) => r,
            PhaseExpr::LiteralPi(m) => m * PI,
        }
    }
}

/// One statement of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    /// 50:50 beam splitter.
    Bs,
    /// Phase shifter on one arm.
    Ps {
        /// Arm carrying the shifter.
        arm: Arm,
        /// Its phase.
        phase: PhaseExpr,
    },
    /// Amplitude transmission on both arms, in (0, 1].
    Loss(f64),
    /// `bs ps lower(phi) bs`.
    D,
    /// `bs ps upper(phi) bs`.
    DPrime,
    /// `d dprime`.
    Ccd,
    /// `count` copies of `body`.
    Repeat {
        /// At least 1.
        count: u32,
        /// Repeated statements.
        body: Vec<Stmt>,
    },
}

/// Primitive element after macro and repeat expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// 50:50 beam splitter.
    BeamSplitter,
    /// Phase shifter.
    Phase(Arm, PhaseExpr),
    /// Equal attenuation on both arms.
    Loss(f64),
}

impl Element {
    /// Transfer matrix of this element at sweep value `phi`.
    pub fn matrix(&self, phi: f64) -> TransferMatrix {
        match *self {
            Element::BeamSplitter => beam_splitter(),
            Element::Phase(Arm::Lower, p) => phase_lower(p.eval(phi)),
            Element::Phase(Arm::Upper, p) => phase_upper(p.eval(phi)),
            Element::Loss(t) => {
                let t = num_complex::Complex64::new(t, 0.0);
                TransferMatrix::diagonal(t, t)
            }
        }
    }
}

/// Parsed circuit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    /// Top-level statements in path order.
    pub statements: Vec<Stmt>,
}

impl Circuit {
    /// Flattens macros and repeats into primitive elements, in path order.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        expand(&self.statements, &mut out);
        out
    }

    /// Transfer matrix at sweep value `phi`: the last element is the left-most factor.
    pub fn compile(&self, phi: f64) -> TransferMatrix {
        self.elements()
            .iter()
            .fold(TransferMatrix::IDENTITY, |acc, e| mat_mul(&e.matrix(phi), &acc))
    }

    /// Canonical text: one statement per line, two-space indent per repeat level.
    pub fn pretty_print(&self) -> String {
        let mut out = String::new();
        write_block(&mut out, &self.statements, 0).expect("writing to a String cannot fail");
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty_print())
    }
}

/// Transfer matrix of `circuit` at sweep value `phi`.
pub fn compile(circuit: &Circuit, phi: f64) -> TransferMatrix {
    circuit.compile(phi)
}

/// Canonical text of `circuit`.
pub fn pretty_print(circuit: &Circuit) -> String {
    circuit.pretty_print()
}

fn expand(stmts: &[Stmt], out: &mut Vec<Element>) {
    let sweep = PhaseExpr::SweepVar(1.0);
    let d = [
        Element::BeamSplitter,
        Element::Phase(Arm::Lower, sweep),
        Element::BeamSplitter,
    ];
    let dp = [
        Element::BeamSplitter,
        Element::Phase(Arm::Upper, sweep),
        Element::BeamSplitter,
    ];
    for stmt in stmts {
        match stmt {
            Stmt::Bs => out.push(Element::BeamSplitter),
            Stmt::Ps { arm, phase } => out.push(Element::Phase(*arm, *phase)),
            Stmt::Loss(t) => out.push(Element::Loss(*t)),
            Stmt::D => out.extend_from_slice(&d),
            Stmt::DPrime => out.extend_from_slice(&dp),
            Stmt::Ccd => {
                out.extend_from_slice(&d);
                out.extend_from_slice(&dp);
            }
            Stmt::Repeat { count, body } => {
                let mut once = vec![];
                expand(body, &mut once);
                for _ in 0..*count {
                    out.extend_from_slice(&once);
                }
            }
        }
    }
}

fn write_phase(out: &mut String, phase: &PhaseExpr) -> fmt::Result {
    match *phase {
        PhaseExpr::SweepVar(1.0) => out.write_str("phi"),
        PhaseExpr::SweepVar(s) => write!(out, "{s} * phi"),
        PhaseExpr::Literal(r) => write!(out, "{r}"),
        PhaseExpr::LiteralPi(m) => write!(out, "{m} pi"),
    }
}

fn write_block(out: &mut String, stmts: &[Stmt], depth: usize) -> fmt::Result {
    for (i, stmt) in stmts.iter().enumerate() {
        if i > 0 || depth > 0 {
            out.push('\n');
        }
        for _ in 0..depth {
            out.push_str("  ");
        }
        match stmt {
            Stmt::Bs => out.write_str("bs")?,
            Stmt::D => out.write_str("d")?,
            Stmt::DPrime => out.write_str("dprime")?,
            Stmt::Ccd => out.write_str("ccd")?,
            Stmt::Loss(t) => write!(out, "loss({t})")?,
            Stmt::Ps { arm, phase } => {
                let arm = match arm {
                    Arm::Upper => "upper",
                    Arm::Lower => "lower",
                };
                write!(out, "ps {arm}(")?;
                write_phase(out, phase)?;
                out.push(')');
            }
            Stmt::Repeat { count, body } => {
                write!(out, "repeat {count} {{")?;
                write_block(out, body, depth + 1)?;
                out.push('\n');
                for _ in 0..depth {
                    out.push_str("  ");
                }
                out.push('}');
            }
        }
    }
    Ok(())
}
