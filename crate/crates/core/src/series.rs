//! Laurent series in `u^{1/e}` over `k` with an absolute precision marker.
//!
//! A series is a finite list of terms `c·u^{n/e}` plus an optional bound
//! `prec`: the value is only known modulo `u^{≥ prec}`. `prec = None` means
//! the series is an exact Laurent polynomial. A series with no terms and a
//! finite `prec` is "zero so far" and has no determined valuation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};

pub type Rational = num_rational::Ratio<i64>;

/// Shorthand constructor for a reduced rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// A valuation in `Q ∪ {+∞}`; `Finite` sorts below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Translate a finite value; `+∞` absorbs.
    pub fn shift(self, by: Rational) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn at_least(self, bound: Rational) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", fmt_rational(*v)),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `n` when the denominator is one, else `n/d`.
pub fn fmt_rational(r: Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn min_prec(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Element of `k((u^{1/e}))` known modulo `u^{prec}`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    e: i64,
    // sorted by exponent numerator, coefficients nonzero, every n/e < prec
    terms: Vec<(i64, FFElem)>,
    prec: Option<Rational>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries {
            e: 1,
            terms: Vec::new(),
            prec: None,
        }
    }

    /// `O(u^{prec})`: zero so far.
    pub fn big_o(prec: Rational) -> Self {
        LaurentSeries {
            e: prec.denom().abs().max(1),
            terms: Vec::new(),
            prec: Some(prec),
        }
    }

    pub fn one() -> Self {
        Self::constant(FFElem::ONE)
    }

    pub fn constant(c: FFElem) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `c·u^{x}`, exact, with `e` the denominator of `x`.
    pub fn monomial(c: FFElem, x: Rational) -> Self {
        let e = *x.denom();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(*x.numer(), c)]
        };
        LaurentSeries {
            e,
            terms,
            prec: None,
        }
    }

    /// The exact monomial `u^{μ}`.
    pub fn upow(mu: Rational) -> Self {
        Self::monomial(FFElem::ONE, mu)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and terms at or above `prec` dropped.
    pub fn from_terms(
        ctx: &FieldCtx,
        terms: impl IntoIterator<Item = (Rational, FFElem)>,
        prec: Option<Rational>,
    ) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut e = prec.map_or(1, |p| *p.denom());
        for (x, _) in &terms {
            e = e.lcm(x.denom());
        }
        let mut acc: BTreeMap<i64, FFElem> = BTreeMap::new();
        for (x, c) in terms {
            let n = x.numer() * (e / x.denom());
            let slot = acc.entry(n).or_insert(FFElem::ZERO);
            *slot = ctx.add(*slot, c);
        }
        let mut s = LaurentSeries {
            e,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            prec,
        };
        s.drop_beyond_prec();
        s
    }

    pub fn ramification(&self) -> i64 {
        self.e
    }

    /// Terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, FFElem)> + '_ {
        let e = self.e;
        self.terms
            .iter()
            .map(move |&(n, c)| (Rational::new(n, e), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn prec(&self) -> Option<Rational> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn has_terms(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// No terms but a finite precision.
    pub fn is_zero_so_far(&self) -> bool {
        self.terms.is_empty() && self.prec.is_some()
    }

    /// True when every exponent (and the precision) is an integer.
    pub fn is_unramified(&self) -> bool {
        self.terms.iter().all(|(n, _)| n % self.e == 0) && self.prec.is_none_or(|p| p.is_integer())
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match (self.terms.first(), self.prec) {
            (Some(&(n, _)), _) => Ok(Valuation::Finite(Rational::new(n, self.e))),
            (None, None) => Ok(Valuation::Infinite),
            (None, Some(_)) => Err(Error::UndeterminedValuation),
        }
    }

    /// Valuation when determined, otherwise the precision: a lower bound
    /// that is always available.
    pub fn valuation_lower_bound(&self) -> Valuation {
        match (self.terms.first(), self.prec) {
            (Some(&(n, _)), _) => Valuation::Finite(Rational::new(n, self.e)),
            (None, None) => Valuation::Infinite,
            (None, Some(p)) => Valuation::Finite(p),
        }
    }

    /// Coefficient of the lowest-order term.
    pub fn lowest_coeff(&self) -> Option<FFElem> {
        self.terms.first().map(|&(_, c)| c)
    }

    pub fn coeff_at(&self, x: Rational) -> FFElem {
        let scaled = x * self.e;
        if !scaled.is_integer() {
            return FFElem::ZERO;
        }
        let n = scaled.to_integer();
        self.terms
            .binary_search_by(|(m, _)| m.cmp(&n))
            .map(|i| self.terms[i].1)
            .unwrap_or(FFElem::ZERO)
    }

    pub fn max_exponent(&self) -> Option<Rational> {
        self.terms.last().map(|&(n, _)| Rational::new(n, self.e))
    }

    /// Forgets the precision marker, treating the known terms as exact.
    pub fn exact(&self) -> Self {
        let mut s = self.clone();
        s.prec = None;
        s
    }

    /// Drops terms at or above `bound` and lowers the precision to it.
    pub fn truncate(&self, bound: Rational) -> Self {
        let mut s = self.clone();
        s.prec = min_prec(s.prec, Some(bound));
        s.drop_beyond_prec();
        s
    }

    fn drop_beyond_prec(&mut self) {
        if let Some(p) = self.prec {
            let e = self.e;
            self.terms.retain(|&(n, _)| Rational::new(n, e) < p);
        }
    }

    fn rescaled(&self, e: i64) -> Vec<(i64, FFElem)> {
        debug_assert!(e % self.e == 0);
        let f = e / self.e;
        self.terms.iter().map(|&(n, c)| (n * f, c)).collect()
    }

    /// Smallest ramification index representing the same series.
    pub fn canonical(&self) -> Self {
        let mut g = self.e;
        for &(n, _) in &self.terms {
            g = g.gcd(&n);
        }
        let g = g.max(1);
        LaurentSeries {
            e: self.e / g,
            terms: self.terms.iter().map(|&(n, c)| (n / g, c)).collect(),
            prec: self.prec,
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        LaurentSeries {
            e: self.e,
            terms: self.terms.iter().map(|&(n, c)| (n, ctx.neg(c))).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let e = self.e.lcm(&other.e);
        let a = self.rescaled(e);
        let b = other.rescaled(e);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    terms.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ctx.add(a[i].1, b[j].1);
                    if !c.is_zero() {
                        terms.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        let mut s = LaurentSeries {
            e,
            terms,
            prec: min_prec(self.prec, other.prec),
        };
        s.drop_beyond_prec();
        s
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    /// Left multiplication by a constant of `k`.
    pub fn scale(&self, ctx: &FieldCtx, c: FFElem) -> Self {
        if c.is_zero() {
            return match self.prec {
                // 0·O(u^p) is still only known modulo u^p
                Some(p) if self.terms.is_empty() => Self::big_o(p),
                _ => Self::zero(),
            };
        }
        LaurentSeries {
            e: self.e,
            terms: self
                .terms
                .iter()
                .map(|&(n, d)| (n, ctx.mul(c, d)))
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by `u^{x}`: shifts every exponent and the precision.
    pub fn shift(&self, x: Rational) -> Self {
        let e = self.e.lcm(x.denom());
        let dx = x.numer() * (e / x.denom());
        LaurentSeries {
            e,
            terms: self
                .rescaled(e)
                .into_iter()
                .map(|(n, c)| (n + dx, c))
                .collect(),
            prec: self.prec.map(|p| p + x),
        }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.mul_bounded(ctx, other, None)
    }

    /// Product with every term at or above `bound` discarded. The result is
    /// exact when nothing had to be discarded; otherwise its precision is
    /// lowered to `bound`.
    pub fn mul_trunc(&self, ctx: &FieldCtx, other: &Self, bound: Rational) -> Self {
        self.mul_bounded(ctx, other, Some(bound))
    }

    fn mul_bounded(&self, ctx: &FieldCtx, other: &Self, bound: Option<Rational>) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let vx = self.valuation_lower_bound().finite().unwrap();
        let vy = other.valuation_lower_bound().finite().unwrap();
        let mut prec = min_prec(self.prec.map(|p| p + vy), other.prec.map(|p| p + vx));
        let mut e = self.e.lcm(&other.e);
        if let Some(p) = prec {
            e = e.lcm(p.denom());
        }
        if let Some(bd) = bound {
            e = e.lcm(bd.denom());
        }
        let limit = min_prec(prec, bound).map(|p| (p * e).to_integer());
        let a = self.rescaled(e);
        let b = other.rescaled(e);
        let mut acc: BTreeMap<i64, FFElem> = BTreeMap::new();
        let mut dropped = false;
        for &(na, ca) in &a {
            for &(nb, cb) in &b {
                let n = na + nb;
                if let Some(l) = limit {
                    if n >= l {
                        dropped = true;
                        // b is sorted ascending
                        break;
                    }
                }
                let slot = acc.entry(n).or_insert(FFElem::ZERO);
                *slot = ctx.add(*slot, ctx.mul(ca, cb));
            }
        }
        if dropped {
            if let Some(bd) = bound {
                prec = min_prec(prec, Some(bd));
            }
        }
        let mut s = LaurentSeries {
            e,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            prec,
        };
        s.drop_beyond_prec();
        s
    }

    /// `φ(Σ cₙuⁿ) = Σ σ(cₙ)u^{bn}`.
    pub fn phi(&self, ctx: &FieldCtx) -> Self {
        self.phi_pow(ctx, 1)
    }

    /// `φ^i`: exponents scale by `b^i`, coefficients by `σ^i`.
    pub fn phi_pow(&self, ctx: &FieldCtx, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        let f = (ctx.b() as i64).pow(i);
        LaurentSeries {
            e: self.e,
            terms: self
                .terms
                .iter()
                .map(|&(n, c)| (n * f, ctx.sigma_pow(c, i as i64)))
                .collect(),
            prec: self.prec.map(|p| p * f),
        }
    }

    /// Inverse `y` with `v(x·y − 1) ≥ target`. Monomials invert exactly; any
    /// other input needs a target or a finite own precision.
    pub fn inv(&self, ctx: &FieldCtx, target: Option<Rational>) -> Result<Self> {
        let (n0, c0) = *self.terms.first().ok_or(if self.prec.is_some() {
            Error::UndeterminedValuation
        } else {
            Error::DivisionByZero
        })?;
        let v = Rational::new(n0, self.e);
        let c0_inv = ctx.inv(c0)?;
        if self.terms.len() == 1 && self.prec.is_none() {
            return Ok(Self::monomial(c0_inv, -v));
        }
        // relative precision of the unit part
        let rel = match (target, self.prec) {
            (Some(t), Some(p)) => t.min(p - v),
            (Some(t), None) => t,
            (None, Some(p)) => p - v,
            (None, None) => {
                return Err(Error::PrecisionExhausted(
                    "inverse of a non-monomial series needs a target precision".into(),
                ))
            }
        };
        if rel <= Rational::zero() {
            return Ok(Self::big_o(-v + rel - v));
        }
        let e = self.e.lcm(rel.denom());
        let f = e / self.e;
        // unit part w = x / (c0 u^v) = 1 + (higher terms), indexed in 1/e steps
        let steps = (rel * e).ceil().to_integer() as usize;
        let mut w = vec![FFElem::ZERO; steps];
        for &(n, c) in &self.terms {
            let k = ((n - n0) * f) as usize;
            if k < steps {
                w[k] = ctx.mul(c, c0_inv);
            }
        }
        let nz: Vec<usize> = (1..steps).filter(|&k| !w[k].is_zero()).collect();
        let mut z = vec![FFElem::ZERO; steps];
        z[0] = FFElem::ONE;
        for n in 1..steps {
            let mut acc = FFElem::ZERO;
            for &k in &nz {
                if k > n {
                    break;
                }
                acc = ctx.add(acc, ctx.mul(w[k], z[n - k]));
            }
            z[n] = ctx.neg(acc);
        }
        let shift = -n0 * f;
        let terms: Vec<_> = z
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64 + shift, ctx.mul(c, c0_inv)))
            .collect();
        let mut s = LaurentSeries {
            e,
            terms,
            prec: Some(rel - v),
        };
        s.drop_beyond_prec();
        Ok(s)
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.prec != other.prec {
            return false;
        }
        let e = self.e.lcm(&other.e);
        self.rescaled(e) == other.rescaled(e)
    }
}

impl Eq for LaurentSeries {}

/// `b^i` as an exact rational.
pub fn bpow(b: u32, i: usize) -> Rational {
    Rational::from_integer((b as i64).pow(i as u32))
}
