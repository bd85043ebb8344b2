//! Seeded generators and a term-by-term product used as an oracle by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewpoly::base_skew::{bs_is_irreducible, BaseSkewPoly, DEFAULT_CAP};
use skewpoly::newton::ell_hat;
use skewpoly::series::{bpow, rat, rat_int};
use skewpoly::similarity::lift_base;
use skewpoly::{FFElem, FieldCtx, LaurentSeries, Rational, SkewPoly};

pub const DEFAULT_SEED: u64 = 0x5eed_2026;

/// Seed from `SKEWPOLY_SEED` or the default.
pub fn seed_from_env() -> u64 {
    std::env::var("SKEWPOLY_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem(rng: &mut impl Rng, ctx: &FieldCtx) -> FFElem {
    ctx.from_index(rng.gen_range(0..ctx.q())).unwrap()
}

pub fn nonzero(rng: &mut impl Rng, ctx: &FieldCtx) -> FFElem {
    ctx.from_index(rng.gen_range(1..ctx.q())).unwrap()
}

/// Exact Laurent polynomial with up to `terms` terms at integer exponents in
/// `[lo, hi]`; may be zero.
pub fn series(rng: &mut impl Rng, ctx: &FieldCtx, lo: i64, hi: i64, terms: usize) -> LaurentSeries {
    let n = rng.gen_range(0..=terms);
    LaurentSeries::from_terms(
        ctx,
        (0..n).map(|_| (rat_int(rng.gen_range(lo..=hi)), nonzero(rng, ctx))),
        None,
    )
}

/// Exact series of valuation exactly `v` with extra terms up to `v + spread`.
pub fn series_with_valuation(
    rng: &mut impl Rng,
    ctx: &FieldCtx,
    v: i64,
    spread: i64,
) -> LaurentSeries {
    let lead = LaurentSeries::monomial(nonzero(rng, ctx), rat_int(v));
    if spread <= 0 {
        return lead;
    }
    lead.add(ctx, &series(rng, ctx, v + 1, v + spread, 2))
}

/// Random polynomial of exact degree `deg`; étale when asked.
pub fn skew(
    rng: &mut impl Rng,
    ctx: &FieldCtx,
    deg: usize,
    lo: i64,
    hi: i64,
    etale: bool,
) -> SkewPoly {
    let mut coeffs: Vec<LaurentSeries> = (0..=deg).map(|_| series(rng, ctx, lo, hi, 2)).collect();
    let v = rng.gen_range(lo..=hi);
    coeffs[deg] = series_with_valuation(rng, ctx, v, 1);
    if etale && deg > 0 {
        let v = rng.gen_range(lo..=hi);
        coeffs[0] = series_with_valuation(rng, ctx, v, 2);
    }
    SkewPoly::new(coeffs)
}

/// `c_d u^{μ(b^{dℓ̂}-1)}` inverted and applied on the left: `A` becomes monic.
pub fn make_monic(ctx: &FieldCtx, a: &SkewPoly) -> SkewPoly {
    let lead = a.lead().unwrap();
    let inv = lead.inv(ctx, None).expect("monomial leading coefficient");
    a.scale_left(ctx, &inv)
}

/// A slope in `Z_(b)` with `b`-length at most `max_ell` and numerator
/// bounded by `span` times the denominator.
pub fn slope(rng: &mut impl Rng, b: u32, max_ell: u32, span: i64) -> Rational {
    let ell = rng.gen_range(0..=max_ell);
    let den = (b as i64).pow(ell) - 1;
    // b = 2 has no slope of length 1
    if den <= 1 {
        return rat_int(rng.gen_range(-span..=span));
    }
    loop {
        let mu = rat(rng.gen_range(-span * den..=span * den), den);
        if skewpoly::newton::b_length(mu, b) == ell {
            return mu;
        }
    }
}

pub fn base_poly(
    rng: &mut impl Rng,
    ctx: &FieldCtx,
    ell: u32,
    deg: usize,
    monic: bool,
) -> BaseSkewPoly {
    let mut c: Vec<FFElem> = (0..=deg).map(|_| elem(rng, ctx)).collect();
    c[0] = nonzero(rng, ctx);
    c[deg] = if monic {
        FFElem::ONE
    } else {
        nonzero(rng, ctx)
    };
    BaseSkewPoly::new(ell, c)
}

pub fn irreducible_base(rng: &mut impl Rng, ctx: &FieldCtx, ell: u32, deg: usize) -> BaseSkewPoly {
    loop {
        let p = base_poly(rng, ctx, ell, deg, true);
        if bs_is_irreducible(ctx, &p, DEFAULT_CAP).unwrap() {
            return p;
        }
    }
}

/// Monic monoclinic étale polynomial of slope `μ` and reduction `P` (up to
/// a unit), with random terms strictly above the supporting line.
pub fn monoclinic(rng: &mut impl Rng, ctx: &FieldCtx, p: &BaseSkewPoly, mu: Rational) -> SkewPoly {
    let a = lift_base(ctx, p, mu).unwrap();
    let d = a.degree().unwrap();
    let b = ctx.b();
    let mut coeffs = a.coeffs().to_vec();
    for (i, c) in coeffs.iter_mut().enumerate().take(d) {
        let line = mu * (bpow(b, i) - rat_int(1));
        let first = line.floor().to_integer() + 1;
        if rng.gen_bool(0.6) {
            *c = c.add(ctx, &series(rng, ctx, first, first + 3, 2));
        }
    }
    make_monic(ctx, &SkewPoly::new(coeffs))
}

/// Random monic monoclinic étale polynomial with `b`-length at most
/// `max_ell` and reduction of degree `k`; returns it with its slope.
pub fn random_monoclinic(
    rng: &mut impl Rng,
    ctx: &FieldCtx,
    max_ell: u32,
    k: usize,
) -> (SkewPoly, Rational) {
    let mu = slope(rng, ctx.b(), max_ell, 2);
    let ell = ell_hat(mu, ctx.b());
    let p = base_poly(rng, ctx, ell, k, true);
    (monoclinic(rng, ctx, &p, mu), mu)
}

/// `Σ_{i,j} pᵢ·φⁱ(q_j)·T^{i+j}` expanded term by term.
pub fn oracle_mul(ctx: &FieldCtx, p: &SkewPoly, q: &SkewPoly) -> SkewPoly {
    let b = ctx.b() as i64;
    let mut acc: BTreeMap<usize, Vec<(Rational, FFElem)>> = BTreeMap::new();
    for (i, pi) in p.coeffs().iter().enumerate() {
        let scale = rat_int(b.pow(i as u32));
        for (j, qj) in q.coeffs().iter().enumerate() {
            let slot = acc.entry(i + j).or_default();
            for (x, a) in pi.terms() {
                for (y, c) in qj.terms() {
                    slot.push((x + y * scale, ctx.mul(a, ctx.sigma_pow(c, i as i64))));
                }
            }
        }
    }
    let n = acc.keys().max().map_or(0, |m| m + 1);
    SkewPoly::new(
        (0..n)
            .map(|k| LaurentSeries::from_terms(ctx, acc.remove(&k).unwrap_or_default(), None))
            .collect(),
    )
}

pub fn oracle_product(ctx: &FieldCtx, factors: &[SkewPoly]) -> SkewPoly {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| oracle_mul(ctx, &acc, f))
}
