//! Newton polygons with abscissae `bⁱ`, their slopes, the `b`-length of a
//! slope, slope reductions into `k[S; σ^ℓ]` and the slope law for products.

use num_integer::Integer;

use crate::base_skew::BaseSkewPoly;
use crate::error::{Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::series::{bpow, LaurentSeries, Rational, Valuation};
use crate::skew::SkewPoly;

/// One edge of a polygon: slope, index span and `b`-length of the slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlopeDatum {
    pub mu: Rational,
    pub multiplicity: usize,
    pub ell: u32,
}

/// Lower convex hull of `{(bⁱ, v(aᵢ))}`; vertices are strict extreme points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(usize, Rational)>,
    slopes: Vec<SlopeDatum>,
}

impl NewtonPolygon {
    /// `(index, valuation)` pairs in increasing index order.
    pub fn vertices(&self) -> &[(usize, Rational)] {
        &self.vertices
    }

    pub fn slopes(&self) -> &[SlopeDatum] {
        &self.slopes
    }

    pub fn is_monoclinic(&self) -> bool {
        self.slopes.len() == 1
    }

    pub fn smallest_slope(&self) -> Option<SlopeDatum> {
        self.slopes.first().copied()
    }

    /// Line-oriented records `vertex i v` and `slope mu mult m ell l`.
    pub fn records(&self) -> Vec<String> {
        use crate::series::fmt_rational;
        let mut out: Vec<String> = self
            .vertices
            .iter()
            .map(|(i, v)| format!("vertex {i} {}", fmt_rational(*v)))
            .collect();
        out.extend(self.slopes.iter().map(|s| {
            format!(
                "slope {} mult {} ell {}",
                fmt_rational(s.mu),
                s.multiplicity,
                s.ell
            )
        }));
        out
    }
}

/// Order of `b` modulo the `b`-free part `t` of the denominator of `μ`
/// (0 when `t = 1`, including `μ = 0`). For `μ ∈ Z_(b)` this is the least
/// `ℓ` with `μ(b^ℓ − 1) ∈ Z`.
pub fn b_length(mu: Rational, b: u32) -> u32 {
    let b = b as i64;
    let mut t = *mu.denom();
    loop {
        let g = t.gcd(&b);
        if g == 1 {
            break;
        }
        t /= g;
    }
    if t == 1 {
        return 0;
    }
    let mut x = b % t;
    let mut ell = 1;
    while x != 1 {
        x = x * b % t;
        ell += 1;
    }
    ell
}

/// Twist exponent of the reduction ring: `max(ℓ_b(μ), 1)`.
pub fn ell_hat(mu: Rational, b: u32) -> u32 {
    b_length(mu, b).max(1)
}

/// Whether the denominator of `μ` is prime to `b`.
pub fn in_localization(mu: Rational, b: u32) -> bool {
    mu.denom().gcd(&(b as i64)) == 1
}

fn point_x(b: u32, i: usize) -> Rational {
    bpow(b, i)
}

/// Lower hull of the points; collinear interior points are dropped.
fn lower_hull(b: u32, pts: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let slope = |p: &(usize, Rational), q: &(usize, Rational)| {
        (q.1 - p.1) / (point_x(b, q.0) - point_x(b, p.0))
    };
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let n = hull.len();
            if slope(&hull[n - 2], &hull[n - 1]) >= slope(&hull[n - 1], &p) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Value at abscissa `bⁱ` of the hull through `vertices`.
fn hull_value_at(b: u32, vertices: &[(usize, Rational)], i: usize) -> Option<Rational> {
    let x = point_x(b, i);
    vertices.windows(2).find_map(|w| {
        let (x0, x1) = (point_x(b, w[0].0), point_x(b, w[1].0));
        if x0 <= x && x <= x1 {
            Some(w[0].1 + (w[1].1 - w[0].1) * (x - x0) / (x1 - x0))
        } else {
            None
        }
    })
}

/// The Newton polygon of `A`. Coefficients known to be zero are skipped; a
/// zero-so-far coefficient is an error unless its precision lies strictly
/// above the hull.
pub fn np_compute(ctx: &FieldCtx, a: &SkewPoly) -> Result<NewtonPolygon> {
    if a.is_zero() {
        return Err(Error::Precondition(
            "the zero polynomial has no Newton polygon".into(),
        ));
    }
    let b = ctx.b();
    let mut pts = Vec::new();
    let mut unknown = Vec::new();
    for (i, c) in a.coeffs().iter().enumerate() {
        match c.valuation() {
            Ok(Valuation::Finite(v)) => pts.push((i, v)),
            Ok(Valuation::Infinite) => {}
            Err(_) => unknown.push((i, c.prec().unwrap())),
        }
    }
    let vertices = lower_hull(b, &pts);
    for (i, p) in unknown {
        let below = match hull_value_at(b, &vertices, i) {
            Some(h) => p <= h,
            // outside the hull's range: it could become an endpoint
            None => true,
        };
        if below {
            return Err(Error::UndeterminedValuation);
        }
    }
    let slopes = vertices
        .windows(2)
        .map(|w| {
            let mu = (w[1].1 - w[0].1) / (point_x(b, w[1].0) - point_x(b, w[0].0));
            SlopeDatum {
                mu,
                multiplicity: w[1].0 - w[0].0,
                ell: b_length(mu, b),
            }
        })
        .collect();
    Ok(NewtonPolygon { vertices, slopes })
}

/// The `μ`-reduction of `A`: `ν` with `v(u^ν A u^{−μ}) = 0`, the leftmost
/// index `i₀` on the supporting line of slope `μ`, and the residue of
/// `u^ν A u^{−μ}` as `Σ c_j S^j` with `c_j` the leading coefficient at
/// `T^{i₀ + jℓ̂}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuReduction {
    pub nu: Rational,
    pub offset: usize,
    pub reduction: BaseSkewPoly,
}

impl MuReduction {
    /// Places `c_j` back at `T^{i₀+jℓ̂}` and undoes the normalization,
    /// giving exactly the terms of `A` lying on the supporting line.
    pub fn embed(&self, ctx: &FieldCtx, mu: Rational) -> SkewPoly {
        let ell = self.reduction.ell() as usize;
        let b = ctx.b();
        let mut coeffs = vec![LaurentSeries::zero(); self.offset + 1];
        for (j, &c) in self.reduction.coeffs().iter().enumerate() {
            let i = self.offset + j * ell;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, LaurentSeries::zero());
            }
            // u^{−ν}·c·u^{μ bⁱ}
            coeffs[i] = LaurentSeries::monomial(c, mu * bpow(b, i) - self.nu);
        }
        SkewPoly::new(coeffs)
    }
}

pub fn mu_reduction(ctx: &FieldCtx, a: &SkewPoly, mu: Rational) -> Result<MuReduction> {
    if a.is_zero() {
        return Err(Error::Precondition(
            "the zero polynomial has no reduction".into(),
        ));
    }
    if !a.is_unramified() {
        return Err(Error::Ramified);
    }
    let b = ctx.b();
    let mut weights: Vec<Option<(Rational, FFElem)>> = Vec::with_capacity(a.coeffs().len());
    let mut unknown = Vec::new();
    for (i, c) in a.coeffs().iter().enumerate() {
        match c.valuation() {
            Ok(Valuation::Finite(v)) => {
                weights.push(Some((v - mu * point_x(b, i), c.lowest_coeff().unwrap())))
            }
            Ok(Valuation::Infinite) => weights.push(None),
            Err(_) => {
                weights.push(None);
                unknown.push(c.prec().unwrap() - mu * point_x(b, i));
            }
        }
    }
    let wmin = weights
        .iter()
        .flatten()
        .map(|(w, _)| *w)
        .min()
        .ok_or(Error::UndeterminedValuation)?;
    if unknown.iter().any(|&w| w <= wmin) {
        return Err(Error::UndeterminedValuation);
    }
    let i0 = weights
        .iter()
        .position(|w| w.is_some_and(|(x, _)| x == wmin))
        .unwrap();
    let ell = ell_hat(mu, b);
    let last = weights
        .iter()
        .rposition(|w| w.is_some_and(|(x, _)| x == wmin))
        .unwrap();
    for (i, w) in weights.iter().enumerate() {
        if w.is_some_and(|(x, _)| x == wmin) && (i - i0) % ell as usize != 0 {
            return Err(Error::Precondition(format!(
                "index {i} lies on the supporting line but is not ≡ {i0} mod {ell}"
            )));
        }
    }
    let coeffs: Vec<FFElem> = (i0..=last)
        .step_by(ell as usize)
        .map(|i| match weights[i] {
            Some((x, c)) if x == wmin => c,
            _ => FFElem::ZERO,
        })
        .collect();
    let (v0, _) = weights[i0].unwrap();
    let nu = -(v0);
    Ok(MuReduction {
        nu,
        offset: i0,
        reduction: BaseSkewPoly::new(ell, coeffs),
    })
}

/// Predicted slopes of `P·Q` for `Q` monic monoclinic of slope `μ`, degree `d`
/// and `μ(b^d − 1) = −s`. Slopes of `P` below `b^d μ` are translated by `s`,
/// slopes above are divided by `b^d`, and the edge of slope `μ` gains
/// multiplicity `d` (absorbing a slope of `P` equal to `b^d μ`).
pub fn predicted_product_slopes(
    b: u32,
    slopes_p: &[SlopeDatum],
    mu: Rational,
    d: usize,
    s: i64,
) -> Result<Vec<SlopeDatum>> {
    let bd = bpow(b, d);
    if d == 0 || mu * (bd - Rational::from_integer(1)) != Rational::from_integer(-s) {
        return Err(Error::Precondition(format!(
            "inconsistent data: μ(b^d − 1) must equal −s with d ≥ 1 (μ = {mu}, d = {d}, s = {s})"
        )));
    }
    let threshold = bd * mu;
    let datum = |mu: Rational, m: usize| SlopeDatum {
        mu,
        multiplicity: m,
        ell: b_length(mu, b),
    };
    let mut out = Vec::new();
    let mut merged = d;
    for sd in slopes_p {
        if sd.mu < threshold {
            out.push(datum(sd.mu + Rational::from_integer(s), sd.multiplicity));
        } else if sd.mu == threshold {
            merged += sd.multiplicity;
        }
    }
    out.push(datum(mu, merged));
    for sd in slopes_p {
        if sd.mu > threshold {
            out.push(datum(sd.mu / bd, sd.multiplicity));
        }
    }
    Ok(out)
}

/// Slope data `(μ, d, s)` of a monic monoclinic `Q`.
pub fn monoclinic_data(ctx: &FieldCtx, q: &SkewPoly) -> Result<(Rational, usize, i64)> {
    let np = np_compute(ctx, q)?;
    if !np.is_monoclinic() || !q.is_monic() || np.vertices()[0].0 != 0 {
        return Err(Error::Precondition(
            "expected a monic monoclinic étale polynomial".into(),
        ));
    }
    let sd = np.slopes()[0];
    let d = sd.multiplicity;
    let s = -(sd.mu * (bpow(ctx.b(), d) - Rational::from_integer(1)));
    if !s.is_integer() {
        return Err(Error::Ramified);
    }
    Ok((sd.mu, d, s.to_integer()))
}

/// Slope list as `(μ, multiplicity)` pairs, for comparisons.
pub fn slope_pairs(np: &NewtonPolygon) -> Vec<(Rational, usize)> {
    np.slopes().iter().map(|s| (s.mu, s.multiplicity)).collect()
}
