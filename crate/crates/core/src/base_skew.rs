//! The finite skew ring `k[S; σ^ℓ]` with `S·c = σ^ℓ(c)·S`: arithmetic,
//! factorization by divisor enumeration, the reduced norm and a constructive
//! similarity test.

use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::linalg::{char_poly, fp_nullspace, kmat_mul, kmat_twist, rank, KMatrix};

/// Default bound on the number of candidates a brute-force search may visit.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// `Σ c_j S^j` in `k[S; σ^ℓ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseSkewPoly {
    ell: u32,
    coeffs: Vec<FFElem>,
}

impl BaseSkewPoly {
    /// Panics if `ell == 0`.
    pub fn new(ell: u32, coeffs: Vec<FFElem>) -> Self {
        assert!(ell >= 1, "twist exponent must be at least 1");
        let mut p = BaseSkewPoly { ell, coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn zero(ell: u32) -> Self {
        Self::new(ell, Vec::new())
    }

    pub fn one(ell: u32) -> Self {
        Self::new(ell, vec![FFElem::ONE])
    }

    /// `c·S^j`.
    pub fn monomial(ell: u32, c: FFElem, j: usize) -> Self {
        let mut coeffs = vec![FFElem::ZERO; j];
        coeffs.push(c);
        Self::new(ell, coeffs)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> FFElem {
        self.coeffs.get(j).copied().unwrap_or(FFElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<FFElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(FFElem::ONE)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell {
            Err(Error::MismatchedTwist(self.ell, other.ell))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.ell,
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        ))
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        Self::new(self.ell, self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Result<Self> {
        self.add(ctx, &other.neg(ctx))
    }

    /// `c_n = Σ_{i+j=n} pᵢ·σ^{ℓi}(q_j)`.
    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ell));
        }
        let mut out = vec![FFElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let tw = self.ell as i64 * i as i64;
            for (j, &q) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(p, ctx.sigma_pow(q, tw)));
            }
        }
        Ok(Self::new(self.ell, out))
    }

    /// `c·P`.
    pub fn scale_left(&self, ctx: &FieldCtx, c: FFElem) -> Self {
        Self::new(
            self.ell,
            self.coeffs.iter().map(|&x| ctx.mul(c, x)).collect(),
        )
    }

    /// Applies `σ^i` to every coefficient.
    pub fn twist_coeffs(&self, ctx: &FieldCtx, i: i64) -> Self {
        Self::new(
            self.ell,
            self.coeffs.iter().map(|&x| ctx.sigma_pow(x, i)).collect(),
        )
    }

    /// Left-multiplies by the inverse of the leading coefficient.
    pub fn monic(&self, ctx: &FieldCtx) -> Result<Self> {
        let lead = self.lead().ok_or(Error::DivisionByZero)?;
        Ok(self.scale_left(ctx, ctx.inv(lead)?))
    }

    /// `A = Q·B + R` with `deg R < deg B`.
    pub fn divrem_right(&self, ctx: &FieldCtx, b: &Self) -> Result<(Self, Self)> {
        self.same_ring(b)?;
        let m = b.degree().ok_or(Error::DivisionByZero)?;
        let lb = b.lead().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![FFElem::ZERO; r.len().saturating_sub(m)];
        while r.len() > m {
            let n = r.len() - 1;
            let k = n - m;
            let c = r[n];
            if !c.is_zero() {
                // (c'·S^k)·B has leading coefficient c'·σ^{ℓk}(lb)
                let qc = ctx.div(c, ctx.sigma_pow(lb, self.ell as i64 * k as i64))?;
                q[k] = qc;
                let tw = self.ell as i64 * k as i64;
                for (j, &bj) in b.coeffs.iter().enumerate() {
                    r[j + k] = ctx.sub(r[j + k], ctx.mul(qc, ctx.sigma_pow(bj, tw)));
                }
            }
            r.pop();
        }
        Ok((Self::new(self.ell, q), Self::new(self.ell, r)))
    }

    /// `A = B·Q + R` with `deg R < deg B`.
    pub fn divrem_left(&self, ctx: &FieldCtx, b: &Self) -> Result<(Self, Self)> {
        self.same_ring(b)?;
        let m = b.degree().ok_or(Error::DivisionByZero)?;
        let lb_inv = ctx.inv(b.lead().unwrap())?;
        let mut rem = self.clone();
        let mut q = vec![FFElem::ZERO; self.coeffs.len().saturating_sub(m)];
        while let Some(n) = rem.degree() {
            if n < m {
                break;
            }
            let k = n - m;
            // B·(c S^k) has leading coefficient lb·σ^{ℓm}(c)
            let c = ctx.sigma_pow(
                ctx.mul(lb_inv, rem.coeffs[n]),
                -(self.ell as i64) * m as i64,
            );
            q[k] = c;
            let prod = b.mul(ctx, &Self::monomial(self.ell, c, k))?;
            let mut next = rem.sub(ctx, &prod)?;
            next.coeffs.truncate(n);
            next = Self::new(self.ell, next.coeffs);
            rem = next;
        }
        Ok((Self::new(self.ell, q), rem))
    }

    /// Coefficient tuple ordering used for deterministic choices: constant
    /// term first, elements compared by index.
    fn lex_key(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.index()).collect()
    }
}

/// All monic polynomials of degree `deg` in increasing coefficient-tuple
/// order (constant term most significant).
pub fn monic_polys(
    ctx: &FieldCtx,
    ell: u32,
    deg: usize,
) -> impl Iterator<Item = BaseSkewPoly> + '_ {
    let q = ctx.q() as u64;
    let total = q.pow(deg as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![FFElem::ZERO; deg + 1];
        for j in (0..deg).rev() {
            coeffs[j] = ctx.from_index((idx % q) as u32).unwrap();
            idx /= q;
        }
        coeffs[deg] = FFElem::ONE;
        BaseSkewPoly::new(ell, coeffs)
    })
}

fn check_cap(ctx: &FieldCtx, deg: usize, cap: u64) -> Result<()> {
    let needed = (ctx.q() as u128).saturating_pow(deg as u32);
    if needed > cap as u128 {
        Err(Error::CapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

fn first_right_divisor(
    ctx: &FieldCtx,
    p: &BaseSkewPoly,
    deg: usize,
) -> Result<Option<BaseSkewPoly>> {
    for g in monic_polys(ctx, p.ell, deg) {
        if p.divrem_right(ctx, &g)?.1.is_zero() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

fn first_left_divisor(
    ctx: &FieldCtx,
    p: &BaseSkewPoly,
    deg: usize,
) -> Result<Option<BaseSkewPoly>> {
    for f in monic_polys(ctx, p.ell, deg) {
        if p.divrem_left(ctx, &f)?.1.is_zero() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn degree_at_least_one(p: &BaseSkewPoly) -> Result<usize> {
    match p.degree() {
        Some(d) if d >= 1 => Ok(d),
        _ => Err(Error::Precondition("degree must be at least 1".into())),
    }
}

/// True iff `P` has no monic right divisor of degree in `[1, deg P − 1]`.
/// A proper factorization `P = F·G` has `deg G ≤ d/2` or `deg F < d/2`, so
/// right and left divisors up to `d/2` are searched.
pub fn bs_is_irreducible(ctx: &FieldCtx, p: &BaseSkewPoly, cap: u64) -> Result<bool> {
    let d = degree_at_least_one(p)?;
    check_cap(ctx, d.div_ceil(2), cap)?;
    for j in 1..=d / 2 {
        if first_right_divisor(ctx, p, j)?.is_some() || first_left_divisor(ctx, p, j)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ordered factorization `P = P₁···P_r` into irreducibles. A non-monic input
/// keeps its leading unit on the first factor.
pub fn bs_factor(ctx: &FieldCtx, p: &BaseSkewPoly, cap: u64) -> Result<Vec<BaseSkewPoly>> {
    let d = degree_at_least_one(p)?;
    check_cap(ctx, d.div_ceil(2), cap)?;
    let lead = p.lead().unwrap();
    let mut factors = factor_monic(ctx, &p.monic(ctx)?)?;
    factors[0] = factors[0].scale_left(ctx, lead);
    Ok(factors)
}

fn factor_monic(ctx: &FieldCtx, p: &BaseSkewPoly) -> Result<Vec<BaseSkewPoly>> {
    let d = p.degree().unwrap();
    for j in 1..=d / 2 {
        // a right divisor of least degree is irreducible
        if let Some(g) = first_right_divisor(ctx, p, j)? {
            let (f, _) = p.divrem_right(ctx, &g)?;
            let mut out = factor_monic(ctx, &f)?;
            out.push(g);
            return Ok(out);
        }
    }
    for j in 1..=d / 2 {
        if let Some(f) = first_left_divisor(ctx, p, j)? {
            let (g, _) = p.divrem_left(ctx, &f)?;
            let mut out = vec![f];
            out.extend(factor_monic(ctx, &g)?);
            return Ok(out);
        }
    }
    Ok(vec![p.clone()])
}

/// The monic irreducible right divisor of least degree, ties broken by the
/// smallest coefficient tuple.
pub fn bs_smallest_right_factor(
    ctx: &FieldCtx,
    p: &BaseSkewPoly,
    cap: u64,
) -> Result<BaseSkewPoly> {
    let d = degree_at_least_one(p)?;
    let p = p.monic(ctx)?;
    if bs_is_irreducible(ctx, &p, cap)? {
        return Ok(p);
    }
    for j in 1..d {
        check_cap(ctx, j, cap)?;
        if let Some(g) = first_right_divisor(ctx, &p, j)? {
            return Ok(g);
        }
    }
    unreachable!("a reducible polynomial has a proper right divisor")
}

/// Every monic irreducible right divisor of `P` of least degree, in
/// increasing coefficient-tuple order.
pub fn bs_minimal_right_factors(
    ctx: &FieldCtx,
    p: &BaseSkewPoly,
    cap: u64,
) -> Result<Vec<BaseSkewPoly>> {
    let first = bs_smallest_right_factor(ctx, p, cap)?;
    let deg = first.degree().unwrap();
    check_cap(ctx, deg, cap)?;
    let mut out = Vec::new();
    for g in monic_polys(ctx, p.ell, deg) {
        if p.divrem_right(ctx, &g)?.1.is_zero() {
            out.push(g);
        }
    }
    out.sort_by_key(|g| g.lex_key());
    Ok(out)
}

/// Matrix of left multiplication by `S` on `k[S;σ^ℓ]/k[S;σ^ℓ]P` in the basis
/// `1, S, …, S^{d−1}`, so that `S·x = C·σ^ℓ(x)`.
fn companion(ctx: &FieldCtx, p: &BaseSkewPoly) -> KMatrix {
    let d = p.degree().unwrap();
    let mut c = vec![vec![FFElem::ZERO; d]; d];
    for i in 1..d {
        c[i][i - 1] = FFElem::ONE;
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[d - 1] = ctx.neg(p.coeffs[i]);
    }
    c
}

/// Characteristic polynomial (coefficients from the constant term, monic) of
/// the `k`-linear map `Λ = S^r` on the quotient by `P`, with `r` the order of
/// `σ^ℓ`. Computed as the char. poly of `C·τ(C)···τ^{r−1}(C)`, `τ = σ^ℓ`.
pub fn bs_reduced_norm(ctx: &FieldCtx, p: &BaseSkewPoly) -> Result<Vec<FFElem>> {
    degree_at_least_one(p)?;
    let p = p.monic(ctx)?;
    let c = companion(ctx, &p);
    let r = ctx.twist_order(p.ell as i64);
    let mut n = c.clone();
    for i in 1..r {
        let twisted = kmat_twist(ctx, &c, p.ell as i64 * i as i64);
        n = kmat_mul(ctx, &n, &twisted);
    }
    Ok(char_poly(ctx, &n))
}

/// Quotient module `k[S;σ^ℓ]/k[S;σ^ℓ]P` with `P` monic of degree `d`.
struct QuotientModule<'a> {
    ctx: &'a FieldCtx,
    p: BaseSkewPoly,
    d: usize,
}

impl<'a> QuotientModule<'a> {
    /// `S·y`.
    fn shift(&self, y: &[FFElem]) -> Vec<FFElem> {
        let ctx = self.ctx;
        let tw: Vec<FFElem> = y
            .iter()
            .map(|&c| ctx.sigma_pow(c, self.p.ell as i64))
            .collect();
        let top = tw[self.d - 1];
        let mut out = vec![FFElem::ZERO; self.d];
        out[1..self.d].copy_from_slice(&tw[..self.d - 1]);
        for (i, o) in out.iter_mut().enumerate() {
            *o = ctx.sub(*o, ctx.mul(top, self.p.coeffs[i]));
        }
        out
    }

    /// `A·y` for `A` in the ring.
    fn act(&self, a: &BaseSkewPoly, y: &[FFElem]) -> Vec<FFElem> {
        let ctx = self.ctx;
        let mut acc = vec![FFElem::ZERO; self.d];
        let mut power = y.to_vec();
        for (j, &c) in a.coeffs.iter().enumerate() {
            if j > 0 {
                power = self.shift(&power);
            }
            for (slot, &x) in acc.iter_mut().zip(&power) {
                *slot = ctx.add(*slot, ctx.mul(c, x));
            }
        }
        acc
    }

    fn is_cyclic(&self, y: &[FFElem]) -> bool {
        let mut vs = vec![y.to_vec()];
        for _ in 1..self.d {
            let next = self.shift(vs.last().unwrap());
            vs.push(next);
        }
        rank(self.ctx, &vs) == self.d
    }

    fn flatten(&self, y: &[FFElem]) -> Vec<u32> {
        y.iter().flat_map(|&c| self.ctx.coords(c)).collect()
    }

    fn unflatten(&self, v: &[u32]) -> Vec<FFElem> {
        let m = self.ctx.m() as usize;
        v.chunks(m).map(|c| self.ctx.from_coords(c)).collect()
    }
}

/// Searches for `y` in the quotient by `P₂` with `P₁·y = 0` generating the
/// whole module; such a `y` is the image of `1` under an isomorphism from the
/// quotient by `P₁`. Returns its coordinates in the basis `1, …, S^{d−1}`.
pub fn bs_similarity_witness(
    ctx: &FieldCtx,
    p1: &BaseSkewPoly,
    p2: &BaseSkewPoly,
    cap: u64,
) -> Result<Option<Vec<FFElem>>> {
    p1.same_ring(p2)?;
    let (d1, d2) = (p1.degree(), p2.degree());
    if d1 != d2 {
        return Ok(None);
    }
    let d = d1.ok_or(Error::DivisionByZero)?;
    if d == 0 {
        return Ok(Some(Vec::new()));
    }
    let (p1, p2) = (p1.monic(ctx)?, p2.monic(ctx)?);
    let module = QuotientModule { ctx, p: p2, d };
    let m = ctx.m() as usize;
    let n = m * d;
    // columns: images of the F_p-basis vectors a^t·S^i
    let mut cols = Vec::with_capacity(n);
    for i in 0..d {
        for t in 0..m {
            let mut y = vec![FFElem::ZERO; d];
            let mut e = vec![0u32; m];
            e[t] = 1;
            y[i] = ctx.from_coords(&e);
            cols.push(module.flatten(&module.act(&p1, &y)));
        }
    }
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let basis = fp_nullspace(ctx.p(), &rows, n);
    let p = ctx.p() as u128;
    let count = p.saturating_pow(basis.len() as u32);
    if count > cap as u128 {
        return Err(Error::CapExceeded { needed: count, cap });
    }
    for idx in 1..count {
        let mut v = vec![0u32; n];
        let mut t = idx;
        for b in &basis {
            let c = (t % p) as u32;
            t /= p;
            if c == 0 {
                continue;
            }
            for (slot, &x) in v.iter_mut().zip(b) {
                *slot = (*slot + c * x) % ctx.p();
            }
        }
        let y = module.unflatten(&v);
        if module.is_cyclic(&y) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// Whether the quotient modules by `P₁` and `P₂` are isomorphic.
pub fn bs_similar(ctx: &FieldCtx, p1: &BaseSkewPoly, p2: &BaseSkewPoly, cap: u64) -> Result<bool> {
    Ok(bs_similarity_witness(ctx, p1, p2, cap)?.is_some())
}
