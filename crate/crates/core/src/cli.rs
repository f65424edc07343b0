//! The `chowring` command line: expression parsing and command dispatch.
//!
//! ```text
//! chowring <verb> <FAMILY> <N> [--max-degree D] [--target torus|mu] [--json] ["EXPR"]
//! ```
//!
//! Torus variables print as `x1, x2, ...` (the Chern roots `xi_i`); mod 2
//! variables print as `e1, e2, ...` (the classes `eta_i`, or `y_i` for
//! `mu_2^n`).

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::error::{Error, Result};
use crate::polyring::Polynomial;
use crate::presentations::{build_presentation, hilbert_data, normal_form, Family, FamilyTag, Presentation};
use crate::restrictions::{
    faithfulness_check, split_eg_class, split_isotropic_chern, verify_presentation, MuTarget, SplitBundle, TorusTarget,
};

/// Expression syntax tree. Generators are stored by index into the
/// presentation they were parsed against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(usize),
    Int(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_polynomial(&self, pres: &Presentation) -> Polynomial {
        let ring = pres.formal_ring();
        match self {
            Expr::Gen(i) => ring.var(*i).expect("parsed generator index"),
            Expr::Int(k) => ring.constant(k.clone()),
            Expr::Neg(a) => -a.to_polynomial(pres),
            Expr::Add(a, b) => a.to_polynomial(pres) + b.to_polynomial(pres),
            Expr::Sub(a, b) => a.to_polynomial(pres) - b.to_polynomial(pres),
            Expr::Mul(a, b) => a.to_polynomial(pres) * b.to_polynomial(pres),
            Expr::Pow(a, e) => a.to_polynomial(pres).pow(*e),
        }
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    pres: &'a Presentation,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.peek() == Some('-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    // factor := atom ('^' uint)?
    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return self.error("expected a nonnegative integer exponent");
            }
            let Ok(e) = digits.parse::<u32>() else {
                return self.error("exponent too large");
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    // atom := 'c' uint | 'y' | int | '(' expr ')'
    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some('c') => {
                let at = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    self.pos = at;
                    return self.error("expected a Chern class index after `c`");
                }
                let name = format!("c{digits}");
                self.generator(&name)
            }
            Some('y') => {
                self.pos += 1;
                self.generator("y")
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                Ok(Expr::Int(digits.parse().expect("decimal digits")))
            }
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }

    fn generator(&self, name: &str) -> Result<Expr> {
        self.pres.formal_ring().var_index(name).map(Expr::Gen).ok_or_else(|| Error::Generator(name.to_string()))
    }
}

/// Parse an expression over the generators of `pres`. Precedence is
/// `^` over `*` over `+`/`-`; whitespace is ignored.
pub fn parse_expression(src: &str, pres: &Presentation) -> Result<Expr> {
    let mut p = ExprParser { src, pos: 0, pres };
    if p.peek().is_none() {
        return p.error("empty expression");
    }
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return p.error(format!("unexpected `{c}`"));
    }
    Ok(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Print the presentation
    Present,
    /// Print free rank and 2-torsion count per degree
    Hilbert,
    /// Print the normal form of an expression
    Nf,
    /// Print the torus or mod 2 image of an expression
    Restrict,
    /// Check that every relation restricts to zero
    Verify,
    /// Check injectivity of the restriction maps degree by degree
    Faithful,
    /// Print the split-model class y_m and the admissibility table
    Eg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Target {
    /// Maximal torus, variables x1, x2, ...
    #[default]
    Torus,
    /// mu_2^n (O) or Gamma_n (SO) mod 2, variables e1, e2, ...
    Mu,
}

/// Chow rings of classifying spaces of GL, SL, Sp, O and SO.
///
/// Torus images use variables x1, x2, ... for the Chern roots; mod 2 images
/// use e1, e2, ... . The SO class y is written without its index.
#[derive(Clone, Debug, Parser)]
#[command(name = "chowring", version)]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    /// GL, SL, Sp, O or SO
    pub family: String,
    pub n: u32,
    /// Expression over the generators c<i> and y, e.g. "y^2 - 4*c4"
    #[arg(allow_hyphen_values = true)]
    pub expr: Option<String>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    #[arg(long, value_enum)]
    pub target: Option<Target>,
    #[arg(long)]
    pub json: bool,
    /// Replace the relation list checked by `verify` (repeatable)
    #[arg(long = "relation", hide = true)]
    pub relations: Vec<String>,
}

/// Result of running a command: exit status and the text for stdout (or
/// stderr when the status is 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { status: 0, output }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        Outcome { status: 2, output: format!("error: {err}") }
    }
}

pub fn run_command(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok(o) => o,
        Err(e) => Outcome::usage(e),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    let family = Family::new(cmd.family.parse::<FamilyTag>()?, cmd.n)?;
    let pres = Arc::new(build_presentation(family));
    let expr = || -> Result<Polynomial> {
        let src =
            cmd.expr.as_deref().ok_or_else(|| Error::Syntax { offset: 0, message: "missing expression".into() })?;
        Ok(parse_expression(src, &pres)?.to_polynomial(&pres))
    };

    Ok(match cmd.verb {
        Verb::Present => {
            let s = pres.to_string();
            Outcome::ok(if cmd.json { json!({ "presentation": s }).to_string() } else { s })
        }
        Verb::Hilbert => {
            let max = cmd.max_degree.unwrap_or(10);
            let rows = (0..=max).map(|d| hilbert_data(&pres, d)).collect::<Vec<_>>();
            if cmd.json {
                Outcome::ok(serde_json::to_string_pretty(&rows).expect("serializable"))
            } else {
                let mut out = String::from("degree  free  torsion2");
                for r in &rows {
                    write!(out, "\n{:>6}  {:>4}  {:>8}", r.degree, r.free_rank, r.torsion2_count).unwrap();
                    for (k, c) in &r.other_torsion {
                        write!(out, "  Z/{k}^{c}").unwrap();
                    }
                }
                Outcome::ok(out)
            }
        }
        Verb::Nf => {
            let x = normal_form(&expr()?, &pres)?;
            let s = x.to_string();
            Outcome::ok(if cmd.json { json!({ "normal_form": s }).to_string() } else { s })
        }
        Verb::Restrict => {
            let x = normal_form(&expr()?, &pres)?;
            let target = cmd.target.unwrap_or_default();
            let image = match target {
                Target::Torus => TorusTarget::new(&pres)?.image(x.as_polynomial())?,
                Target::Mu => MuTarget::new(&pres)?.image(x.as_polynomial())?,
            };
            let s = image.to_string();
            Outcome::ok(if cmd.json {
                json!({ "target": format!("{target:?}").to_lowercase(), "image": s }).to_string()
            } else {
                s
            })
        }
        Verb::Verify => {
            let checked = if cmd.relations.is_empty() {
                (*pres).clone()
            } else {
                let rels = cmd
                    .relations
                    .iter()
                    .map(|r| Ok(parse_expression(r, &pres)?.to_polynomial(&pres)))
                    .collect::<Result<Vec<_>>>()?;
                pres.with_relations(rels)?
            };
            let report = verify_presentation(&checked)?;
            let status = if report.passed() { 0 } else { 1 };
            let output = if cmd.json { report.to_json() } else { report.to_string() };
            Outcome { status, output }
        }
        Verb::Faithful => {
            let report = faithfulness_check(family, cmd.max_degree.unwrap_or(8));
            let status = if report.passed() { 0 } else { 1 };
            let output = if cmd.json { report.to_json() } else { report.to_string() };
            Outcome { status, output }
        }
        Verb::Eg => {
            if !family.has_y() {
                return Err(Error::Family(format!("eg needs SO with even n, got {family}")));
            }
            let m = family.m();
            let class = split_eg_class(m)?;
            let table = SplitBundle::all(m as usize)
                .into_iter()
                .map(|b| {
                    let (admissible, top) = split_isotropic_chern(&b);
                    let signs = b.signs().iter().map(|&s| if s > 0 { '+' } else { '-' }).collect::<String>();
                    (signs, admissible, top.to_string())
                })
                .collect::<Vec<_>>();
            if cmd.json {
                let rows = table
                    .iter()
                    .map(|(s, a, t)| json!({ "signs": s, "admissible": a, "top_chern": t }))
                    .collect::<Vec<_>>();
                Outcome::ok(
                    serde_json::to_string_pretty(&json!({ "m": m, "y": class.to_string(), "subbundles": rows }))
                        .expect("serializable"),
                )
            } else {
                let mut out = format!("y restricts to {class}\nsigns  admissible  top chern");
                for (s, a, t) in &table {
                    write!(out, "\n{:<5}  {:<10}  {}", s, if *a { "yes" } else { "no" }, t).unwrap();
                }
                Outcome::ok(out)
            }
        }
    })
}
