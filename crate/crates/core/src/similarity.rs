//! Similarity of irreducible skew polynomials: equivalence of slopes, the
//! normal forms `u^{−μ}·P·u^{μ}`, a proximity criterion with an explicit
//! matrix witness, and the decision procedure.

use num_integer::Integer;
use num_traits::Zero;

use crate::base_skew::{bs_reduced_norm, bs_similar, BaseSkewPoly};
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{FFElem, FieldCtx};
use crate::newton::{b_length, ell_hat, in_localization, mu_reduction, np_compute};
use crate::series::{bpow, LaurentSeries, Rational, Valuation};
use crate::skew::{SkewMatrix, SkewPoly};

/// Multiplies `μ` by the power of `b` that removes every prime of `b` from
/// its denominator.
fn clear_b(mu: Rational, b: u32) -> Rational {
    let b = b as i64;
    let mut den = *mu.denom();
    let mut scale = 1i64;
    loop {
        let g = den.gcd(&b);
        if g == 1 {
            break;
        }
        den /= g;
        scale *= b;
        if scale > 1 << 40 {
            break;
        }
    }
    mu * Rational::from_integer(scale)
}

fn displaced(mu1: Rational, mu2: Rational, b: u32, i: u32) -> bool {
    (mu1 - bpow(b, i as usize) * mu2).is_integer()
}

/// `μ₁ ~ μ₂`: equal `b`-length `ℓ` and `μ₁ − bⁱμ₂ ∈ Z` (or the same with the
/// roles swapped) for some `0 ≤ i ≤ ℓ`, after clearing powers of `b` from
/// both denominators.
pub fn slopes_equivalent(b: u32, mu1: Rational, mu2: Rational) -> bool {
    let (x, y) = (clear_b(mu1, b), clear_b(mu2, b));
    let ell = b_length(x, b);
    if ell != b_length(y, b) {
        return false;
    }
    (0..=ell).any(|i| displaced(x, y, b, i) || displaced(y, x, b, i))
}

/// Canonical label of a slope class: `ℓ`, the rotation-minimal `ℓ`-digit
/// base-`b` word of `(b^ℓ − 1)·frac(μ)`, and the fraction that word spells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlopeClass {
    pub ell: u32,
    pub canonical_digits: Vec<u32>,
    pub representative: Rational,
}

impl SlopeClass {
    pub fn of(b: u32, mu: Rational) -> SlopeClass {
        let mu = clear_b(mu, b);
        let ell = b_length(mu, b);
        if ell == 0 {
            return SlopeClass {
                ell,
                canonical_digits: Vec::new(),
                representative: Rational::zero(),
            };
        }
        let modulus = (b as i64).pow(ell) - 1;
        let frac = mu - mu.floor();
        let n = (frac * Rational::from_integer(modulus)).to_integer();
        let digits = |mut x: i64| -> Vec<u32> {
            let mut d = vec![0u32; ell as usize];
            for slot in d.iter_mut().rev() {
                *slot = (x % b as i64) as u32;
                x /= b as i64;
            }
            d
        };
        // multiplying by b rotates the word one place to the left
        let best = (0..ell)
            .scan(n, |x, _| {
                let cur = *x;
                *x = *x * b as i64 % modulus;
                Some(cur)
            })
            .min_by_key(|&x| digits(x))
            .unwrap();
        SlopeClass {
            ell,
            canonical_digits: digits(best),
            representative: Rational::new(best, modulus),
        }
    }
}

/// `u^{−μ}·P·u^{μ}` with `S = T^ℓ̂`: `c_j S^j ↦ c_j u^{μ(b^{jℓ̂}−1)} T^{jℓ̂}`.
/// Monoclinic of slope `μ` with reduction `P`.
pub fn lift_base(ctx: &FieldCtx, p: &BaseSkewPoly, mu: Rational) -> Result<SkewPoly> {
    let b = ctx.b();
    if !in_localization(mu, b) {
        return Err(Error::Precondition(format!(
            "slope {mu} has a power of b in its denominator"
        )));
    }
    let ell = ell_hat(mu, b);
    if p.ell() != ell {
        return Err(Error::MismatchedTwist(p.ell(), ell));
    }
    let step = ell as usize;
    let mut coeffs = vec![LaurentSeries::zero(); p.degree().map_or(0, |d| d * step + 1)];
    for (j, &c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let x = mu * (bpow(b, j * step) - Rational::from_integer(1));
            coeffs[j * step] = LaurentSeries::monomial(c, x);
        }
    }
    Ok(SkewPoly::new(coeffs))
}

/// `T·A·T^{−1}`: `φ` applied to every coefficient. Slope `bμ`, reduction
/// twisted by `σ`.
pub fn conjugate_by_t(ctx: &FieldCtx, a: &SkewPoly) -> SkewPoly {
    SkewPoly::new(a.coeffs().iter().map(|c| c.phi(ctx)).collect())
}

/// `A·u^m`. Slope `μ + m`, same reduction.
pub fn scale_by_upow(ctx: &FieldCtx, a: &SkewPoly, m: i64) -> SkewPoly {
    a.scale_right(ctx, &LaurentSeries::upow(Rational::from_integer(m)))
}

/// Outcome of the proximity test.
#[derive(Clone, Debug)]
pub enum Proximity {
    /// `M·C_P ≡ C_Q·φ(M)` modulo `u^precision`.
    Similar {
        witness: SkewMatrix,
        precision: Rational,
        iterations: usize,
    },
    /// The hypotheses do not hold; nothing is claimed.
    Inapplicable(String),
}

/// Proves `P ~ Q` for `Q` close to `P` by iterating
/// `M ← C_Q·φ(M)·C_P^{−1}` from the identity. Applies to `P` monic, étale,
/// with integral unramified coefficients and `Q` monic of the same degree
/// with `v(P − Q) > b·v(p₀)/(b − 1)`.
pub fn similar_by_proximity(
    ctx: &FieldCtx,
    p: &SkewPoly,
    q: &SkewPoly,
    target: Rational,
    max_iter: usize,
) -> Result<Proximity> {
    let inapplicable = |why: &str| Ok(Proximity::Inapplicable(why.into()));
    if !p.is_monic() || !q.is_monic() {
        return inapplicable("both polynomials must be monic");
    }
    if p.degree() != q.degree() || p.degree() == Some(0) {
        return inapplicable("degrees differ or are zero");
    }
    if !p.is_exact() || !q.is_exact() || !p.is_unramified() || !q.is_unramified() {
        return inapplicable("coefficients must be exact and unramified");
    }
    if !p.is_etale()? {
        return inapplicable("the first polynomial is not étale");
    }
    if !p.valuation()?.at_least(Rational::zero()) {
        return inapplicable("the first polynomial has non-integral coefficients");
    }
    let b = Rational::from_integer(ctx.b() as i64);
    let v0 = p.coeff(0).valuation()?.finite().unwrap();
    let threshold = b * v0 / (b - Rational::from_integer(1));
    let gap = p.sub(ctx, q).valuation()?;
    if gap.finite().is_some_and(|g| g <= threshold) {
        return inapplicable("v(P − Q) does not exceed b·v(p₀)/(b − 1)");
    }
    let d = p.degree().unwrap();
    if gap.is_infinite() {
        return Ok(Proximity::Similar {
            witness: SkewMatrix::identity(d),
            precision: target,
            iterations: 0,
        });
    }
    let cp = p.companion(ctx)?;
    let cq = q.companion(ctx)?;
    let mut margin = v0 + Rational::from_integer(1);
    for _ in 0..4 {
        let work = target + margin;
        let cp_inv = cp.inverse(ctx, work + v0)?;
        let mut m = SkewMatrix::identity(d);
        let mut done = None;
        for n in 1..=max_iter {
            let next = cq
                .mul_trunc(ctx, &m.phi(ctx), work + v0)
                .mul_trunc(ctx, &cp_inv, work)
                .exact();
            let step = next.sub(ctx, &m).valuation_lower_bound();
            m = next;
            if step.at_least(target) {
                done = Some(n);
                break;
            }
        }
        let Some(iterations) = done else {
            return Err(Error::IterationCap(max_iter));
        };
        let check = m
            .mul(ctx, &cp)
            .sub(ctx, &cq.mul(ctx, &m.phi(ctx)))
            .valuation_lower_bound();
        if check.at_least(target) {
            return Ok(Proximity::Similar {
                witness: m,
                precision: target,
                iterations,
            });
        }
        margin *= Rational::from_integer(2);
    }
    Err(Error::PrecisionExhausted(
        "proximity witness did not verify at the requested precision".into(),
    ))
}

/// Classifying data of an irreducible étale polynomial: it is similar to
/// `lift_base(witness, slope)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalIrreducible {
    pub slope: Rational,
    pub slope_class: SlopeClass,
    /// Reduced norm of the reduction, monic, constant term first.
    pub base_invariant: Vec<FFElem>,
    /// The reduction along the unique slope.
    pub witness: BaseSkewPoly,
}

fn slope_and_reduction(ctx: &FieldCtx, a: &SkewPoly) -> Result<(Rational, BaseSkewPoly)> {
    let np = np_compute(ctx, a)?;
    let mu = np.slopes()[0].mu;
    Ok((mu, mu_reduction(ctx, a, mu)?.reduction))
}

pub fn canonical_pair(ctx: &FieldCtx, a: &SkewPoly, cap: u64) -> Result<CanonicalIrreducible> {
    if !is_irreducible(ctx, a, cap)? {
        return Err(Error::NotIrreducible);
    }
    if !a.is_etale()? {
        return Err(Error::Precondition(
            "canonical pair needs an étale polynomial".into(),
        ));
    }
    let (slope, witness) = slope_and_reduction(ctx, a)?;
    Ok(CanonicalIrreducible {
        slope,
        slope_class: SlopeClass::of(ctx.b(), slope),
        base_invariant: bs_reduced_norm(ctx, &witness)?,
        witness,
    })
}

/// How a similarity was found: `σ^i` applied to the reduction of the first
/// or of the second argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    First(u32),
    Second(u32),
}

/// Decides similarity of two irreducibles. `Some` carries the displacement
/// that worked; `None` means not similar.
pub fn similarity_twist(
    ctx: &FieldCtx,
    a: &SkewPoly,
    b: &SkewPoly,
    cap: u64,
) -> Result<Option<Twist>> {
    for x in [a, b] {
        if !is_irreducible(ctx, x, cap)? {
            return Err(Error::NotIrreducible);
        }
    }
    match (a.is_etale()?, b.is_etale()?) {
        // unit·T
        (false, false) => return Ok(Some(Twist::First(0))),
        (true, true) => {}
        _ => return Ok(None),
    }
    if a.degree() != b.degree() {
        return Ok(None);
    }
    let base = ctx.b();
    let (mu_a, p_a) = slope_and_reduction(ctx, a)?;
    let (mu_b, p_b) = slope_and_reduction(ctx, b)?;
    if !slopes_equivalent(base, mu_a, mu_b) {
        return Ok(None);
    }
    let ell = b_length(mu_a, base);
    for i in 0..=ell {
        if displaced(mu_b, mu_a, base, i)
            && bs_similar(ctx, &p_a.twist_coeffs(ctx, i as i64), &p_b, cap)?
        {
            return Ok(Some(Twist::First(i)));
        }
        if displaced(mu_a, mu_b, base, i)
            && bs_similar(ctx, &p_a, &p_b.twist_coeffs(ctx, i as i64), cap)?
        {
            return Ok(Some(Twist::Second(i)));
        }
    }
    Ok(None)
}

pub fn similar(ctx: &FieldCtx, a: &SkewPoly, b: &SkewPoly, cap: u64) -> Result<bool> {
    Ok(similarity_twist(ctx, a, b, cap)?.is_some())
}

/// `v(M·C_P − C_Q·φ(M))`, the defect of a proposed witness.
pub fn witness_defect(
    ctx: &FieldCtx,
    m: &SkewMatrix,
    p: &SkewPoly,
    q: &SkewPoly,
) -> Result<Valuation> {
    let cp = p.companion(ctx)?;
    let cq = q.companion(ctx)?;
    Ok(m.mul(ctx, &cp)
        .sub(ctx, &cq.mul(ctx, &m.phi(ctx)))
        .valuation_lower_bound())
}
