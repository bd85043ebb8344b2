//! The skew polynomial ring `K[T, φ]` with `T·a = φ(a)·T`, over `K` or one of
//! its ramified extensions `k((u^{1/e}))`, plus the small amount of matrix
//! algebra needed for base changes `P⁻¹·M·φ(P)`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::series::{bpow, LaurentSeries, Rational, Valuation};

/// `Σ aᵢTⁱ`, coefficient of `Tⁱ` at index `i`. Trailing exact zeros are
/// dropped; a trailing zero-so-far coefficient is kept so that its precision
/// is not lost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPoly {
    coeffs: Vec<LaurentSeries>,
}

/// Result of a right Euclidean division `A = Q·B + R`.
#[derive(Clone, Debug)]
pub struct DivRem {
    pub quotient: SkewPoly,
    pub remainder: SkewPoly,
    /// Both outputs are exact (no precision marker anywhere).
    pub exact: bool,
}

impl SkewPoly {
    pub fn new(coeffs: Vec<LaurentSeries>) -> Self {
        let mut p = SkewPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(LaurentSeries::one())
    }

    pub fn constant(c: LaurentSeries) -> Self {
        Self::new(vec![c])
    }

    /// `c·T^j`.
    pub fn monomial(c: LaurentSeries, j: usize) -> Self {
        let mut coeffs = vec![LaurentSeries::zero(); j];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn t() -> Self {
        Self::t_pow(1)
    }

    pub fn t_pow(j: usize) -> Self {
        Self::monomial(LaurentSeries::one(), j)
    }

    /// Polynomial with constant coefficients from `k`, `Σ cᵢTⁱ`.
    pub fn from_constants(cs: &[FFElem]) -> Self {
        Self::new(cs.iter().map(|&c| LaurentSeries::constant(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    /// Coefficient of `Tⁱ` (exact zero past the degree).
    pub fn coeff(&self, i: usize) -> LaurentSeries {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(LaurentSeries::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&LaurentSeries> {
        self.coeffs.last()
    }

    /// Leading coefficient exactly `1`.
    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| *c == LaurentSeries::one())
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn is_unramified(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_unramified())
    }

    /// Smallest absolute precision over the coefficients (`None` if exact).
    pub fn prec(&self) -> Option<Rational> {
        self.coeffs.iter().filter_map(|c| c.prec()).min()
    }

    /// Every coefficient with its smallest ramification index.
    pub fn canonical(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.canonical()).collect())
    }

    /// Drops every precision marker.
    pub fn exact(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.exact()).collect())
    }

    pub fn truncate(&self, bound: Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.truncate(bound)).collect())
    }

    /// Minimum of the coefficient valuations, or of their precisions when a
    /// coefficient is zero so far.
    pub fn valuation_lower_bound(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.valuation_lower_bound())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// `v(A) = min v(aᵢ)`; fails if a zero-so-far coefficient could hide a
    /// smaller value.
    pub fn valuation(&self) -> Result<Valuation> {
        let mut best = Valuation::Infinite;
        let mut unknown = Valuation::Infinite;
        for c in &self.coeffs {
            match c.valuation() {
                Ok(v) => best = best.min(v),
                Err(_) => unknown = unknown.min(c.valuation_lower_bound()),
            }
        }
        if !unknown.is_infinite() && unknown <= best {
            Err(Error::UndeterminedValuation)
        } else {
            Ok(best)
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        SkewPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg(ctx)).collect(),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                    (Some(x), Some(y)) => x.add(ctx, y),
                    (Some(x), None) => x.clone(),
                    (None, Some(y)) => y.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    /// `Σ_{i+j=n} pᵢ·φⁱ(q_j)`.
    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.mul_bounded(ctx, other, None)
    }

    /// Product with every coefficient term at or above `bound` discarded.
    pub fn mul_trunc(&self, ctx: &FieldCtx, other: &Self, bound: Rational) -> Self {
        self.mul_bounded(ctx, other, Some(bound))
    }

    fn mul_bounded(&self, ctx: &FieldCtx, other: &Self, bound: Option<Rational>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![LaurentSeries::zero(); n];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_exact_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                if q.is_exact_zero() {
                    continue;
                }
                let phq = q.phi_pow(ctx, i as u32);
                let term = match bound {
                    Some(bd) => p.mul_trunc(ctx, &phq, bd),
                    None => p.mul(ctx, &phq),
                };
                out[i + j] = out[i + j].add(ctx, &term);
            }
        }
        Self::new(out)
    }

    /// `c·A`.
    pub fn scale_left(&self, ctx: &FieldCtx, c: &LaurentSeries) -> Self {
        Self::new(self.coeffs.iter().map(|a| c.mul(ctx, a)).collect())
    }

    /// `A·c = Σ aᵢφⁱ(c)Tⁱ`.
    pub fn scale_right(&self, ctx: &FieldCtx, c: &LaurentSeries) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a.mul(ctx, &c.phi_pow(ctx, i as u32)))
                .collect(),
        )
    }

    /// `u^ν·A·u^μ`: coefficient `aᵢ` becomes `u^{ν + μ bⁱ}·aᵢ`.
    pub fn conjugate_by_upow(&self, ctx: &FieldCtx, mu: Rational, nu: Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if a.is_exact_zero() {
                        a.clone()
                    } else {
                        a.shift(nu + mu * bpow(ctx.b(), i))
                    }
                })
                .collect(),
        )
    }

    /// Nonzero constant coefficient.
    pub fn is_etale(&self) -> Result<bool> {
        let a0 = self.coeff(0);
        if a0.has_terms() {
            Ok(true)
        } else if a0.is_exact_zero() {
            Ok(false)
        } else {
            Err(Error::UndeterminedValuation)
        }
    }

    /// Splits `A = A'·T^j` with `a'₀ ≠ 0`.
    pub fn strip_t(&self) -> (usize, SkewPoly) {
        let j = self.coeffs.iter().position(|c| c.has_terms()).unwrap_or(0);
        (j, Self::new(self.coeffs[j..].to_vec()))
    }

    /// Left-multiplies by the inverse of the leading coefficient. The inverse
    /// is exact for monomial leads and accurate to `prec` otherwise.
    pub fn normalize(&self, ctx: &FieldCtx, prec: Rational) -> Result<Self> {
        let lead = self.lead().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv(ctx, Some(prec))?;
        let mut out = self.scale_left(ctx, &inv);
        // the leading coefficient is 1 by construction
        *out.coeffs.last_mut().unwrap() = LaurentSeries::one();
        Ok(out)
    }

    /// Right Euclidean division `A = Q·B + R`, `deg R < deg B`. Exact when
    /// the inputs are exact and `lead(B)` is a monomial; otherwise inverses are
    /// taken with a relative accuracy derived from `prec` and the result
    /// carries its own precision markers.
    pub fn divrem_right(&self, ctx: &FieldCtx, b: &Self, prec: Rational) -> Result<DivRem> {
        let m = b.degree().ok_or(Error::DivisionByZero)?;
        let lb = b.lead().unwrap().clone();
        if !lb.has_terms() {
            return Err(Error::PrecisionExhausted(
                "leading coefficient of the divisor is not known".into(),
            ));
        }
        let mut r = self.clone();
        let mut q = vec![LaurentSeries::zero(); self.coeffs.len().saturating_sub(m)];
        let spread = |v: Valuation| v.finite().map_or(Rational::zero(), |x| x.abs());
        let bv = spread(lb.valuation_lower_bound()) + spread(b.valuation_lower_bound());
        let av = spread(self.valuation_lower_bound());
        while let Some(n) = r.degree() {
            if n < m {
                break;
            }
            let k = n - m;
            let x = lb.phi_pow(ctx, k as u32);
            let target = prec + av + bv * bpow(ctx.b(), k) + Rational::from_integer(1);
            let xi = x.inv(ctx, Some(target))?;
            let qc = r.coeffs[n].mul(ctx, &xi);
            q[k] = q[k].add(ctx, &qc);
            let sub = SkewPoly::monomial(qc, k).mul(ctx, b);
            r = r.sub(ctx, &sub);
            // the leading term cancels up to precision
            r.coeffs.truncate(n);
            r.trim();
        }
        let quotient = SkewPoly::new(q);
        let exact = quotient.is_exact() && r.is_exact();
        Ok(DivRem {
            quotient,
            remainder: r,
            exact,
        })
    }

    /// Companion matrix of a monic `A` of degree `d ≥ 1`: ones on the
    /// subdiagonal and `−aᵢ` in the last column. It is the matrix of `φ_D`
    /// on `K[T,φ]/K[T,φ]A` in the basis `1, T, …, T^{d−1}`.
    pub fn companion(&self, ctx: &FieldCtx) -> Result<SkewMatrix> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Precondition("companion needs degree ≥ 1".into())),
        };
        if !self.is_monic() {
            return Err(Error::Precondition(
                "companion needs a monic polynomial".into(),
            ));
        }
        let mut m = SkewMatrix::zero(d);
        for i in 1..d {
            m.rows[i][i - 1] = LaurentSeries::one();
        }
        for i in 0..d {
            m.rows[i][d - 1] = self.coeffs[i].neg(ctx);
        }
        Ok(m)
    }
}

/// Square matrix with entries in `K` (or a ramified extension).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    rows: Vec<Vec<LaurentSeries>>,
}

impl SkewMatrix {
    pub fn zero(d: usize) -> Self {
        SkewMatrix {
            rows: vec![vec![LaurentSeries::zero(); d]; d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zero(d);
        for i in 0..d {
            m.rows[i][i] = LaurentSeries::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<LaurentSeries>) -> Self {
        let mut m = Self::zero(entries.len());
        for (i, x) in entries.into_iter().enumerate() {
            m.rows[i][i] = x;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Precondition(
                "matrix must be square of size ≥ 1".into(),
            ));
        }
        Ok(SkewMatrix { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<LaurentSeries>] {
        &self.rows
    }

    fn map(&self, f: impl Fn(&LaurentSeries) -> LaurentSeries) -> Self {
        SkewMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let d = self.dim();
        SkewMatrix {
            rows: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| self.rows[i][j].add(ctx, &other.rows[i][j]))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.add(ctx, &other.map(|x| x.neg(ctx)))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.mul_bounded(ctx, other, None)
    }

    pub fn mul_trunc(&self, ctx: &FieldCtx, other: &Self, bound: Rational) -> Self {
        self.mul_bounded(ctx, other, Some(bound))
    }

    fn mul_bounded(&self, ctx: &FieldCtx, other: &Self, bound: Option<Rational>) -> Self {
        let d = self.dim();
        let mut rows = vec![vec![LaurentSeries::zero(); d]; d];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for k in 0..d {
                    let (x, y) = (&self.rows[i][k], &other.rows[k][j]);
                    if x.is_exact_zero() || y.is_exact_zero() {
                        continue;
                    }
                    let t = match bound {
                        Some(bd) => x.mul_trunc(ctx, y, bd),
                        None => x.mul(ctx, y),
                    };
                    *slot = slot.add(ctx, &t);
                }
            }
        }
        SkewMatrix { rows }
    }

    /// Entrywise `φ`.
    pub fn phi(&self, ctx: &FieldCtx) -> Self {
        self.map(|x| x.phi(ctx))
    }

    pub fn truncate(&self, bound: Rational) -> Self {
        self.map(|x| x.truncate(bound))
    }

    pub fn exact(&self) -> Self {
        self.map(|x| x.exact())
    }

    pub fn valuation_lower_bound(&self) -> Valuation {
        self.rows
            .iter()
            .flatten()
            .map(|x| x.valuation_lower_bound())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self, ctx: &FieldCtx) -> LaurentSeries {
        fn rec(ctx: &FieldCtx, rows: &[Vec<LaurentSeries>], cols: &[usize]) -> LaurentSeries {
            if cols.len() == 1 {
                return rows[0][cols[0]].clone();
            }
            let mut acc = LaurentSeries::zero();
            for (pos, &c) in cols.iter().enumerate() {
                let x = &rows[0][c];
                if x.is_exact_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&k| k != c).collect();
                let term = x.mul(ctx, &rec(ctx, &rows[1..], &rest));
                acc = if pos % 2 == 0 {
                    acc.add(ctx, &term)
                } else {
                    acc.sub(ctx, &term)
                };
            }
            acc
        }
        let cols: Vec<usize> = (0..self.dim()).collect();
        rec(ctx, &self.rows, &cols)
    }

    /// Gauss-Jordan inverse choosing the pivot of least valuation in each
    /// column. Inverses of non-monomial pivots are accurate to relative
    /// precision `target`.
    pub fn inverse(&self, ctx: &FieldCtx, target: Rational) -> Result<Self> {
        let d = self.dim();
        let mut a = self.rows.clone();
        let mut inv = Self::identity(d).rows;
        for col in 0..d {
            let pivot = (col..d)
                .filter(|&r| a[r][col].has_terms())
                .min_by_key(|&r| a[r][col].valuation_lower_bound())
                .ok_or_else(|| {
                    Error::Precondition("matrix is singular at working precision".into())
                })?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let pinv = a[col][col].inv(ctx, Some(target))?;
            for j in 0..d {
                a[col][j] = pinv.mul(ctx, &a[col][j]);
                inv[col][j] = pinv.mul(ctx, &inv[col][j]);
            }
            for r in 0..d {
                if r == col || a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..d {
                    let t = f.mul(ctx, &a[col][j]);
                    a[r][j] = a[r][j].sub(ctx, &t);
                    let t = f.mul(ctx, &inv[col][j]);
                    inv[r][j] = inv[r][j].sub(ctx, &t);
                }
            }
        }
        Ok(SkewMatrix { rows: inv })
    }

    /// `P⁻¹·M·φ(P)`: the matrix of the same semilinear map in the basis given
    /// by the columns of `P`.
    pub fn change_basis(&self, ctx: &FieldCtx, p: &Self, target: Rational) -> Result<Self> {
        let pinv = p.inverse(ctx, target)?;
        Ok(pinv.mul(ctx, &self.mul(ctx, &p.phi(ctx))))
    }
}
