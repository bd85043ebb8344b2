//! Parsing and printing of field elements, series and skew polynomials.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := power ('*' power)*
//! power    := atom ['^' exponent]
//! atom     := INT | 'a' | 'u' | 'T' | 'S' | '(' expr ')' | 'O' '(' expr ')'
//! exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')'
//! ```
//!
//! Rational and negative exponents are accepted on `u` only. `O(u^x)` adds
//! an absolute precision marker. Printing produces the same syntax without
//! spaces: elements of `k` descending in `a`, series ascending in `u`, skew
//! polynomials descending in `T` (resp. `S`).

use num_traits::{ToPrimitive, Zero};

use crate::base_skew::BaseSkewPoly;
use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::series::{LaurentSeries, Rational};
use crate::skew::SkewPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(char),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            let n = text
                .parse()
                .map_err(|_| Error::Parse(format!("integer too large: {text}")))?;
            out.push(Tok::Int(n));
        } else if "auTSO".contains(c) {
            out.push(Tok::Ident(c));
            i += 1;
        } else if "+-*^()/".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(i64),
    Gen,
    U,
    Var(char),
    BigO(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{c}' at token {}",
                self.pos
            )))
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(Error::Parse(format!(
                "expected an integer at token {}",
                self.pos
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat_op('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat_op('+');
            self.term()?
        };
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while self.eat_op('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let exp = if self.eat_op('(') {
            let sign = if self.eat_op('-') { -1 } else { 1 };
            let num = sign * self.int()?;
            let den = if self.eat_op('/') { self.int()? } else { 1 };
            self.expect_op(')')?;
            if den == 0 {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
            Rational::new(num, den)
        } else {
            let sign = if self.eat_op('-') { -1 } else { 1 };
            Rational::from_integer(sign * self.int()?)
        };
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident('a') => Ok(Expr::Gen),
            Tok::Ident('u') => Ok(Expr::U),
            Tok::Ident('O') => {
                self.expect_op('(')?;
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(Expr::BigO(Box::new(inner)))
            }
            Tok::Ident(c) => Ok(Expr::Var(c)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

/// The exponent `x` of an expression of the form `u` or `u^x`.
fn u_exponent(e: &Expr) -> Option<Rational> {
    match e {
        Expr::U => Some(Rational::from_integer(1)),
        Expr::Pow(b, x) if matches!(**b, Expr::U) => Some(*x),
        Expr::Int(1) => Some(Rational::zero()),
        _ => None,
    }
}

/// Evaluation environment: the field plus the twist exponent used when the
/// target is `k[S; σ^ℓ]`.
struct Env<'a> {
    ctx: &'a FieldCtx,
    ell: u32,
}

impl std::ops::Deref for Env<'_> {
    type Target = FieldCtx;
    fn deref(&self) -> &FieldCtx {
        self.ctx
    }
}

/// A ring the expression language can be evaluated into.
trait Target: Clone {
    fn int(ctx: &Env, n: i64) -> Self;
    fn gen(ctx: &Env) -> Self;
    fn upow(ctx: &Env, x: Rational) -> Result<Self>;
    fn var(ctx: &Env, name: char) -> Result<Self>;
    fn big_o(ctx: &Env, x: Rational) -> Result<Self>;
    fn add(&self, ctx: &Env, o: &Self) -> Result<Self>;
    fn neg(&self, ctx: &Env) -> Self;
    fn mul(&self, ctx: &Env, o: &Self) -> Result<Self>;
    fn one(ctx: &Env) -> Self {
        Self::int(ctx, 1)
    }
}

fn eval<R: Target>(ctx: &Env, e: &Expr) -> Result<R> {
    Ok(match e {
        Expr::Int(n) => R::int(ctx, *n),
        Expr::Gen => R::gen(ctx),
        Expr::U => R::upow(ctx, Rational::from_integer(1))?,
        Expr::Var(c) => R::var(ctx, *c)?,
        Expr::BigO(inner) => {
            let x = u_exponent(inner)
                .ok_or_else(|| Error::Parse("O(...) takes a power of u".into()))?;
            R::big_o(ctx, x)?
        }
        Expr::Neg(x) => eval::<R>(ctx, x)?.neg(ctx),
        Expr::Add(x, y) => eval::<R>(ctx, x)?.add(ctx, &eval(ctx, y)?)?,
        Expr::Sub(x, y) => eval::<R>(ctx, x)?.add(ctx, &eval::<R>(ctx, y)?.neg(ctx))?,
        Expr::Mul(x, y) => eval::<R>(ctx, x)?.mul(ctx, &eval(ctx, y)?)?,
        Expr::Pow(base, x) => {
            if matches!(**base, Expr::U) {
                R::upow(ctx, *x)?
            } else {
                if !x.is_integer() || *x.numer() < 0 {
                    return Err(Error::Parse(
                        "only u takes negative or fractional exponents".into(),
                    ));
                }
                let n = x
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                let b = eval::<R>(ctx, base)?;
                let mut acc = R::one(ctx);
                for _ in 0..n {
                    acc = acc.mul(ctx, &b)?;
                }
                acc
            }
        }
    })
}

/// Untrimmed coefficient vector, so that a lone `O(u^x)` coefficient
/// survives until the final conversion.
#[derive(Clone)]
struct SkewTarget(Vec<LaurentSeries>);

impl Target for SkewTarget {
    fn int(ctx: &Env, n: i64) -> Self {
        SkewTarget(vec![LaurentSeries::constant(ctx.from_int(n))])
    }
    fn gen(ctx: &Env) -> Self {
        SkewTarget(vec![LaurentSeries::constant(ctx.generator())])
    }
    fn upow(_: &Env, x: Rational) -> Result<Self> {
        Ok(SkewTarget(vec![LaurentSeries::upow(x)]))
    }
    fn var(_: &Env, name: char) -> Result<Self> {
        match name {
            'T' => Ok(SkewTarget(vec![
                LaurentSeries::zero(),
                LaurentSeries::one(),
            ])),
            c => Err(Error::Parse(format!(
                "unexpected variable '{c}' (expected T)"
            ))),
        }
    }
    fn big_o(_: &Env, x: Rational) -> Result<Self> {
        Ok(SkewTarget(vec![LaurentSeries::big_o(x)]))
    }
    fn add(&self, ctx: &Env, o: &Self) -> Result<Self> {
        let n = self.0.len().max(o.0.len());
        let zero = LaurentSeries::zero();
        Ok(SkewTarget(
            (0..n)
                .map(|i| {
                    self.0
                        .get(i)
                        .unwrap_or(&zero)
                        .add(ctx, o.0.get(i).unwrap_or(&zero))
                })
                .collect(),
        ))
    }
    fn neg(&self, ctx: &Env) -> Self {
        SkewTarget(self.0.iter().map(|c| c.neg(ctx)).collect())
    }
    fn mul(&self, ctx: &Env, o: &Self) -> Result<Self> {
        let mut out = vec![LaurentSeries::zero(); self.0.len() + o.0.len() - 1];
        for (i, p) in self.0.iter().enumerate() {
            for (j, q) in o.0.iter().enumerate() {
                let t = p.mul(ctx, &q.phi_pow(ctx, i as u32));
                out[i + j] = out[i + j].add(ctx, &t);
            }
        }
        Ok(SkewTarget(out))
    }
}

impl Target for LaurentSeriesTarget {
    fn int(ctx: &Env, n: i64) -> Self {
        LaurentSeriesTarget(LaurentSeries::constant(ctx.from_int(n)))
    }
    fn gen(ctx: &Env) -> Self {
        LaurentSeriesTarget(LaurentSeries::constant(ctx.generator()))
    }
    fn upow(_: &Env, x: Rational) -> Result<Self> {
        Ok(LaurentSeriesTarget(LaurentSeries::upow(x)))
    }
    fn var(_: &Env, name: char) -> Result<Self> {
        Err(Error::Parse(format!(
            "unexpected variable '{name}' in a series"
        )))
    }
    fn big_o(_: &Env, x: Rational) -> Result<Self> {
        Ok(LaurentSeriesTarget(LaurentSeries::big_o(x)))
    }
    fn add(&self, ctx: &Env, o: &Self) -> Result<Self> {
        Ok(LaurentSeriesTarget(self.0.add(ctx, &o.0)))
    }
    fn neg(&self, ctx: &Env) -> Self {
        LaurentSeriesTarget(self.0.neg(ctx))
    }
    fn mul(&self, ctx: &Env, o: &Self) -> Result<Self> {
        Ok(LaurentSeriesTarget(self.0.mul(ctx, &o.0)))
    }
}

#[derive(Clone)]
struct LaurentSeriesTarget(LaurentSeries);

#[derive(Clone)]
struct BaseTarget(BaseSkewPoly);

impl Target for BaseTarget {
    fn int(ctx: &Env, n: i64) -> Self {
        BaseTarget(BaseSkewPoly::new(ctx.ell, vec![ctx.from_int(n)]))
    }
    fn gen(ctx: &Env) -> Self {
        BaseTarget(BaseSkewPoly::new(ctx.ell, vec![ctx.generator()]))
    }
    fn upow(ctx: &Env, x: Rational) -> Result<Self> {
        if x.is_zero() {
            Ok(BaseTarget(BaseSkewPoly::one(ctx.ell)))
        } else {
            Err(Error::Parse("u is not allowed here".into()))
        }
    }
    fn var(ctx: &Env, name: char) -> Result<Self> {
        match name {
            'S' => Ok(BaseTarget(BaseSkewPoly::monomial(ctx.ell, FFElem::ONE, 1))),
            c => Err(Error::Parse(format!(
                "unexpected variable '{c}' (expected S)"
            ))),
        }
    }
    fn big_o(_: &Env, _: Rational) -> Result<Self> {
        Err(Error::Parse("O(...) is not allowed here".into()))
    }
    fn add(&self, ctx: &Env, o: &Self) -> Result<Self> {
        Ok(BaseTarget(self.0.add(ctx, &o.0)?))
    }
    fn neg(&self, ctx: &Env) -> Self {
        BaseTarget(self.0.neg(ctx))
    }
    fn mul(&self, ctx: &Env, o: &Self) -> Result<Self> {
        Ok(BaseTarget(self.0.mul(ctx, &o.0)?))
    }
}

/// Parses an element of `k`, e.g. `a+1` or `2*a^2`.
pub fn parse_ff(ctx: &FieldCtx, s: &str) -> Result<FFElem> {
    let p = parse_base(ctx, s, 1)?;
    match p.degree() {
        None => Ok(FFElem::ZERO),
        Some(0) => Ok(p.coeff(0)),
        _ => Err(Error::Parse(format!("'{s}' is not a field element"))),
    }
}

/// Parses a series such as `u^-1 + (a+1)*u^(2/3) + O(u^(5/3))`.
pub fn parse_series(ctx: &FieldCtx, s: &str) -> Result<LaurentSeries> {
    let env = Env { ctx, ell: 1 };
    Ok(eval::<LaurentSeriesTarget>(&env, &parse_expr(s)?)?.0)
}

/// Parses an element of `K[T, φ]` such as `T^2 + (1+u^2)*T + u`.
pub fn parse_skew(ctx: &FieldCtx, s: &str) -> Result<SkewPoly> {
    let env = Env { ctx, ell: 1 };
    Ok(SkewPoly::new(eval::<SkewTarget>(&env, &parse_expr(s)?)?.0))
}

/// Parses an element of `k[S; σ^ℓ]` such as `S^2 + (a+1)*S + 1`.
pub fn parse_base(ctx: &FieldCtx, s: &str, ell: u32) -> Result<BaseSkewPoly> {
    if ell == 0 {
        return Err(Error::Parse("twist exponent must be at least 1".into()));
    }
    let env = Env { ctx, ell };
    Ok(eval::<BaseTarget>(&env, &parse_expr(s)?)?.0)
}

/// `a^2+a+1`, `2*a`, `0`.
pub fn format_ff(ctx: &FieldCtx, x: FFElem) -> String {
    let coords = ctx.coords(x);
    let mut parts = Vec::new();
    for (i, &c) in coords.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn format_upow(x: Rational) -> String {
    if x == Rational::from_integer(1) {
        "u".into()
    } else if x.is_integer() {
        format!("u^{}", x.numer())
    } else {
        format!("u^({}/{})", x.numer(), x.denom())
    }
}

/// Writes `coef·mono`, omitting a unit coefficient and bracketing sums.
fn join_coef(coef: &str, mono: &str) -> String {
    if mono.is_empty() {
        coef.to_string()
    } else if coef == "1" {
        mono.to_string()
    } else if coef.contains('+') || coef.starts_with('O') {
        format!("({coef})*{mono}")
    } else {
        format!("{coef}*{mono}")
    }
}

/// Ascending in `u`, e.g. `u^-1+(a+1)*u^(2/3)+O(u^(5/3))`.
pub fn format_series(ctx: &FieldCtx, s: &LaurentSeries) -> String {
    let mut parts: Vec<String> = s
        .terms()
        .map(|(x, c)| {
            let mono = if x.is_zero() {
                String::new()
            } else {
                format_upow(x)
            };
            join_coef(&format_ff(ctx, c), &mono)
        })
        .collect();
    if let Some(p) = s.prec() {
        parts.push(format!("O({})", format_upow_any(p)));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn format_upow_any(x: Rational) -> String {
    if x.is_zero() {
        "u^0".into()
    } else {
        format_upow(x)
    }
}

fn format_in_var(coeffs: &[String], var: char) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(join_coef(c, &mono));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Descending in `T`, e.g. `T^2+(1+u^2)*T+u`.
pub fn format_skew(ctx: &FieldCtx, p: &SkewPoly) -> String {
    let cs: Vec<String> = p.coeffs().iter().map(|c| format_series(ctx, c)).collect();
    format_in_var(&cs, 'T')
}

/// Descending in `S`, e.g. `S^2+(a+1)*S+1`.
pub fn format_base(ctx: &FieldCtx, p: &BaseSkewPoly) -> String {
    format_kpoly(ctx, p.coeffs(), 'S')
}

/// A commutative polynomial over `k` (coefficients from the constant term).
pub fn format_kpoly(ctx: &FieldCtx, coeffs: &[FFElem], var: char) -> String {
    let cs: Vec<String> = coeffs.iter().map(|&c| format_ff(ctx, c)).collect();
    format_in_var(&cs, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, rat_int};

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2, 1, 2).unwrap()
    }

    #[test]
    fn field_elements() {
        let k = FieldCtx::new(3, 2, 1, 2).unwrap();
        let a = k.generator();
        assert_eq!(
            parse_ff(&k, "2*a^2").unwrap(),
            k.mul(k.from_int(2), k.mul(a, a))
        );
        for x in k.elements() {
            assert_eq!(parse_ff(&k, &format_ff(&k, x)).unwrap(), x);
        }
        assert_eq!(format_ff(&k, FFElem::ZERO), "0");
        let k4 = f4();
        assert_eq!(format_ff(&k4, k4.one()), "1");
        assert_eq!(format_ff(&k4, k4.add(k4.generator(), FFElem::ONE)), "a+1");
        assert_eq!(format_ff(&k, k.mul(k.from_int(2), a)), "2*a");
    }

    #[test]
    fn series_round_trip() {
        let k = f4();
        let s = parse_series(&k, "u^-1 + (a+1)*u^(2/3) + O(u^(5/3))").unwrap();
        assert_eq!(s.prec(), Some(rat(5, 3)));
        assert_eq!(s.num_terms(), 2);
        let text = format_series(&k, &s);
        assert_eq!(text, "u^-1+(a+1)*u^(2/3)+O(u^(5/3))");
        assert_eq!(parse_series(&k, &text).unwrap(), s);
        assert_eq!(
            format_series(&k, &LaurentSeries::big_o(rat_int(3))),
            "O(u^3)"
        );
        assert_eq!(
            format_series(&k, &LaurentSeries::upow(rat(-2, 3))),
            "u^(-2/3)"
        );
        assert_eq!(format_series(&k, &LaurentSeries::zero()), "0");
    }

    #[test]
    fn skew_round_trip() {
        let k = FieldCtx::new(2, 1, 0, 2).unwrap();
        for s in [
            "T^2+(1+u^2)*T+u",
            "u^2*T",
            "u^-1*T^2+1",
            "T^3+u*T^2",
            "0",
            "T",
        ] {
            let p = parse_skew(&k, s).unwrap();
            assert_eq!(format_skew(&k, &p), s);
        }
        let p = parse_skew(&k, "T^2 + u*T + 1").unwrap();
        assert_eq!(format_skew(&k, &p), "T^2+u*T+1");
        let p = parse_skew(&k, "(1+u+O(u^4))*T + O(u^2)").unwrap();
        assert_eq!(format_skew(&k, &p), "(1+u+O(u^4))*T+O(u^2)");
        assert_eq!(parse_skew(&k, &format_skew(&k, &p)).unwrap(), p);
    }

    #[test]
    fn base_round_trip() {
        let k = f4();
        let p = parse_base(&k, "S^2 + (a+1)*S + 1", 2).unwrap();
        assert_eq!(p.ell(), 2);
        assert_eq!(format_base(&k, &p), "S^2+(a+1)*S+1");
    }

    #[test]
    fn rejects_bad_input() {
        let k = f4();
        for s in ["T^", "T+", "(T", "T^(1/2)", "x", "a^-1", "", "T)"] {
            assert!(parse_skew(&k, s).is_err(), "{s}");
        }
        assert!(parse_base(&k, "S+u", 1).is_err());
        assert!(parse_base(&k, "T", 1).is_err());
        assert!(parse_series(&k, "T").is_err());
        assert!(parse_ff(&k, "S").is_err());
    }
}
