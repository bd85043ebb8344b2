//! Lifting right factors from a slope reduction, the irreducibility test and
//! factorization into irreducibles.

use num_traits::Zero;

use crate::base_skew::{bs_is_irreducible, bs_smallest_right_factor, BaseSkewPoly};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::newton::{ell_hat, mu_reduction, np_compute};
use crate::series::{bpow, LaurentSeries, Rational, Valuation};
use crate::skew::SkewPoly;

/// `A ≈ F·G` with `G` monic of the requested slope.
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub f: SkewPoly,
    pub g: SkewPoly,
    /// Lower bound for `v(A − F·G)`.
    pub achieved_prec: Valuation,
    /// `A = F·G` holds exactly.
    pub exact: bool,
    /// Valuation of the normalized residual before each correction step.
    pub residual_history: Vec<Rational>,
}

/// `Σ c_j T^{j·step}` with constant coefficients.
fn spread(p: &BaseSkewPoly, step: usize) -> SkewPoly {
    let mut coeffs = vec![LaurentSeries::zero(); p.degree().map_or(0, |d| d * step + 1)];
    for (j, &c) in p.coeffs().iter().enumerate() {
        coeffs[j * step] = LaurentSeries::constant(c);
    }
    SkewPoly::new(coeffs)
}

/// Same, but as an element of `k[T, σ]`.
fn spread_base(p: &BaseSkewPoly, step: usize) -> BaseSkewPoly {
    let mut coeffs = vec![crate::field::FFElem::ZERO; p.degree().map_or(0, |d| d * step + 1)];
    for (j, &c) in p.coeffs().iter().enumerate() {
        coeffs[j * step] = c;
    }
    BaseSkewPoly::new(1, coeffs)
}

/// `u^x·Σ c_i Tⁱ`.
fn lift_level(p: &BaseSkewPoly, x: Rational) -> SkewPoly {
    SkewPoly::new(
        p.coeffs()
            .iter()
            .map(|&c| {
                if c.is_zero() {
                    LaurentSeries::zero()
                } else {
                    LaurentSeries::monomial(c, x)
                }
            })
            .collect(),
    )
}

/// Lifts a right divisor `P` of the `μ`-reduction of `A` to a right factor
/// `G` of `A` with slope `μ` and reduction `P`, so that `v(A − F·G) ≥ prec`.
/// `μ` must be the smallest slope of the étale, unramified `A`.
pub fn hensel_lift_right_factor(
    ctx: &FieldCtx,
    a: &SkewPoly,
    p: &BaseSkewPoly,
    mu: Rational,
    prec: Rational,
) -> Result<LiftResult> {
    let deg_a = match a.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Precondition("lifting needs degree ≥ 1".into())),
    };
    if !a.is_unramified() {
        return Err(Error::Ramified);
    }
    if !a.is_etale()? {
        return Err(Error::Precondition(
            "lifting needs an étale polynomial".into(),
        ));
    }
    let np = np_compute(ctx, a)?;
    let smallest = np.smallest_slope().unwrap();
    if smallest.mu != mu {
        return Err(Error::Precondition(format!(
            "{mu} is not the smallest slope {} of the polynomial",
            smallest.mu
        )));
    }
    let red = mu_reduction(ctx, a, mu)?;
    let ell = ell_hat(mu, ctx.b());
    if p.ell() != ell {
        return Err(Error::MismatchedTwist(p.ell(), ell));
    }
    if p.degree().is_none_or(|d| d == 0) {
        return Err(Error::Precondition(
            "the factor to lift must have degree ≥ 1".into(),
        ));
    }
    let p = p.monic(ctx)?;
    let (f0, rem) = red.reduction.divrem_right(ctx, &p)?;
    if !rem.is_zero() {
        return Err(Error::Precondition(
            "the factor does not right-divide the slope reduction".into(),
        ));
    }
    let step = ell as usize;
    let nu = red.nu;
    let b = ctx.b();

    // u^ν·A·u^{−μ} has integral coefficients and reduction F₀·G₀
    let a_norm = a.conjugate_by_upow(ctx, -mu, nu);
    let g0 = spread_base(&p, step);
    let a0_inv = ctx.inv(f0.coeff(0))?;
    let mut f = spread(&f0, step);
    let mut g = spread(&p, step);

    let offsets: Vec<Rational> = (0..=deg_a).map(|i| mu * bpow(b, i) - nu).collect();
    let min_offset = *offsets.iter().min().unwrap();
    let work = prec - min_offset;
    let achieved = |r: &SkewPoly| {
        r.coeffs()
            .iter()
            .zip(&offsets)
            .map(|(c, &o)| c.valuation_lower_bound().shift(o))
            .min()
            .unwrap_or(Valuation::Infinite)
    };

    let mut r = a_norm.sub(ctx, &f.mul_trunc(ctx, &g, work));
    let e = *mu.denom();
    let cap = (e * work.ceil().to_integer().max(0)) as usize + deg_a + 1;
    let mut history: Vec<Rational> = Vec::new();
    loop {
        if achieved(&r).at_least(prec) {
            break;
        }
        if history.len() >= cap {
            return Err(Error::IterationCap(cap));
        }
        let level = r
            .coeffs()
            .iter()
            .filter_map(|c| c.valuation_lower_bound().finite().filter(|_| c.has_terms()))
            .min()
            .expect("a residual below the target has terms");
        if level <= Rational::zero() || history.last().is_some_and(|&h| level <= h) {
            return Err(Error::Precondition(
                "residual valuation did not increase while lifting".into(),
            ));
        }
        history.push(level);
        let rbar = BaseSkewPoly::new(1, r.coeffs().iter().map(|c| c.coeff_at(level)).collect());
        let (m, n) = rbar.divrem_right(ctx, &g0)?;
        let n = n.scale_left(ctx, a0_inv);
        let df = lift_level(&m, level);
        let dg = lift_level(&n, level);
        let g_new = g.add(ctx, &dg);
        r = r
            .sub(ctx, &df.mul_trunc(ctx, &g_new, work))
            .sub(ctx, &f.mul_trunc(ctx, &dg, work));
        f = f.add(ctx, &df);
        g = g_new;
    }
    let exact = r.is_zero();
    let achieved_prec = achieved(&r);

    let nu2 = mu * bpow(b, g.degree().unwrap());
    let g = g.conjugate_by_upow(ctx, mu, -nu2).canonical();
    let f = f.conjugate_by_upow(ctx, nu2, -nu).canonical();
    if !g.is_unramified() || !f.is_unramified() {
        return Err(Error::Ramified);
    }
    Ok(LiftResult {
        f,
        g,
        achieved_prec,
        exact,
        residual_history: history,
    })
}

/// Irreducibility in `K[T, φ]`. An étale `A` is irreducible iff its polygon
/// has a single slope and the reduction along it is irreducible; otherwise
/// `A = A'·T^j` and only `unit·T` is irreducible.
pub fn is_irreducible(ctx: &FieldCtx, a: &SkewPoly, cap: u64) -> Result<bool> {
    let d = match a.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::Precondition(
                "irreducibility needs degree ≥ 1".into(),
            ))
        }
    };
    if !a.is_unramified() {
        return Err(Error::Ramified);
    }
    if !a.is_etale()? {
        return Ok(d == 1);
    }
    let np = np_compute(ctx, a)?;
    if !np.is_monoclinic() {
        return Ok(false);
    }
    let red = mu_reduction(ctx, a, np.slopes()[0].mu)?;
    bs_is_irreducible(ctx, &red.reduction, cap)
}

/// `A ≈ P₁···P_r` with every `Pᵢ` irreducible.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<SkewPoly>,
    /// `v(A − P₁···P_r)`, computed exactly from the returned factors.
    pub residual: Valuation,
    pub exact: bool,
}

const EXTRA_PRECISION: [i64; 6] = [0, 8, 16, 32, 64, 128];

/// Factors `A` into irreducibles with `v(A − P₁···P_r) ≥ prec`. Powers of `T`
/// are split off on the right first; the étale part is peeled from the right
/// by lifting the smallest right factor of the reduction along the smallest
/// slope.
pub fn factor(ctx: &FieldCtx, a: &SkewPoly, prec: Rational, cap: u64) -> Result<Factorization> {
    match a.degree() {
        Some(d) if d >= 1 => {}
        _ => return Err(Error::Precondition("factorization needs degree ≥ 1".into())),
    }
    if !a.is_unramified() {
        return Err(Error::Ramified);
    }
    if !a.is_exact() {
        return Err(Error::Precondition(
            "factorization needs exact coefficients".into(),
        ));
    }
    let (j, rest) = a.strip_t();
    let mut shortfall = Valuation::Infinite;
    for extra in EXTRA_PRECISION {
        let mut factors = if rest.degree() == Some(0) {
            // a unit times T^j: keep the unit on the first T
            vec![SkewPoly::monomial(rest.coeff(0), 1)]
        } else {
            factor_etale(ctx, &rest, prec + Rational::from_integer(extra), cap)?
        };
        let have_t = if rest.degree() == Some(0) { 1 } else { 0 };
        factors.extend((have_t..j).map(|_| SkewPoly::t()));
        let product = factors
            .iter()
            .skip(1)
            .fold(factors[0].clone(), |acc, f| acc.mul(ctx, f));
        let residual = a.sub(ctx, &product).valuation()?;
        if residual.at_least(prec) {
            return Ok(Factorization {
                factors,
                exact: residual.is_infinite(),
                residual,
            });
        }
        shortfall = residual;
    }
    Err(Error::PrecisionExhausted(format!(
        "factor product still differs at valuation {shortfall}"
    )))
}

fn factor_etale(ctx: &FieldCtx, a: &SkewPoly, prec: Rational, cap: u64) -> Result<Vec<SkewPoly>> {
    let mut right: Vec<SkewPoly> = Vec::new();
    let mut rest = a.clone();
    loop {
        if is_irreducible(ctx, &rest, cap)? {
            right.push(rest);
            break;
        }
        let mu = np_compute(ctx, &rest)?.smallest_slope().unwrap().mu;
        let red = mu_reduction(ctx, &rest, mu)?;
        let p = bs_smallest_right_factor(ctx, &red.reduction, cap)?;
        let lift = hensel_lift_right_factor(ctx, &rest, &p, mu, prec)?;
        right.push(lift.g);
        rest = lift.f;
    }
    right.reverse();
    Ok(right)
}

/// `Ā(T^δ)·u^{sv}` with `v = (p^{mδ} − 1)/(p^δ − 1)` and `m = deg Ā`, where
/// `Ā ∈ k[S; σ^δ]`, `S = T^δ`. Needs `b = p` and `σ` the Frobenius.
pub fn classical_form(ctx: &FieldCtx, abar: &BaseSkewPoly, s: i64, delta: u32) -> Result<SkewPoly> {
    if ctx.b() != ctx.p() {
        return Err(Error::Precondition(format!(
            "classical form needs b = p (b = {}, p = {})",
            ctx.b(),
            ctx.p()
        )));
    }
    if ctx.s() % ctx.m() != 1 % ctx.m() {
        return Err(Error::Precondition(
            "classical form needs σ to be the Frobenius".into(),
        ));
    }
    if delta == 0 || abar.ell() != delta {
        return Err(Error::MismatchedTwist(abar.ell(), delta));
    }
    let m = match abar.degree() {
        Some(m) if m >= 1 && abar.is_monic() => m as u32,
        _ => {
            return Err(Error::Precondition(
                "expected a monic polynomial of degree ≥ 1".into(),
            ))
        }
    };
    let p = ctx.p() as i64;
    let v = (p.pow(m * delta) - 1) / (p.pow(delta) - 1);
    let base = spread(abar, delta as usize);
    Ok(base.scale_right(ctx, &LaurentSeries::upow(Rational::from_integer(s * v))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_skew::DEFAULT_CAP;
    use crate::newton::slope_pairs;
    use crate::series::{rat, rat_int};
    use crate::text::{format_skew, parse_base, parse_skew};

    fn f2() -> FieldCtx {
        FieldCtx::new(2, 1, 0, 2).unwrap()
    }

    #[test]
    fn lift_splits_known_product_exactly() {
        let k = f2();
        let a = parse_skew(&k, "T^2+(1+u^2)*T+u").unwrap();
        let p = parse_base(&k, "S+1", 1).unwrap();
        let r = hensel_lift_right_factor(&k, &a, &p, rat_int(-1), rat_int(8)).unwrap();
        assert_eq!(r.g, parse_skew(&k, "T+u").unwrap());
        assert_eq!(r.f, parse_skew(&k, "T+1").unwrap());
        assert!(r.exact);
        assert_eq!(r.achieved_prec, Valuation::Infinite);
    }

    #[test]
    fn lift_of_full_reduction_returns_monic_self() {
        let k = f2();
        let a = parse_skew(&k, "T^2+u*T+u").unwrap();
        let p = parse_base(&k, "S+1", 2).unwrap();
        let r = hensel_lift_right_factor(&k, &a, &p, rat(-1, 3), rat_int(10)).unwrap();
        assert_eq!(r.g, a);
        assert_eq!(r.f, SkewPoly::one());
    }

    #[test]
    fn lift_recovers_factor_of_constructed_product() {
        let k = f2();
        let f = parse_skew(&k, "T+1+u").unwrap();
        let g = parse_skew(&k, "T+u").unwrap();
        let a = f.mul(&k, &g);
        let p = parse_base(&k, "S+1", 1).unwrap();
        let r = hensel_lift_right_factor(&k, &a, &p, rat_int(-1), rat_int(12)).unwrap();
        assert!(r
            .g
            .sub(&k, &g)
            .valuation_lower_bound()
            .at_least(rat_int(12)));
        let resid = a.sub(&k, &r.f.mul(&k, &r.g)).valuation().unwrap();
        assert!(resid.at_least(rat_int(12)));
        assert!(r.residual_history.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lift_refuses_middle_slope_and_non_divisor() {
        let k = f2();
        let a = parse_skew(&k, "T^2+(1+u^2)*T+u").unwrap();
        let p = parse_base(&k, "S+1", 1).unwrap();
        assert!(matches!(
            hensel_lift_right_factor(&k, &a, &p, rat_int(-2), rat_int(8)),
            Err(Error::Precondition(_))
        ));
        let b = parse_skew(&k, "T^2+T+1").unwrap();
        assert!(matches!(
            hensel_lift_right_factor(&k, &b, &p, rat_int(0), rat_int(8)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn irreducibility_examples() {
        let k = f2();
        let yes = |s: &str| is_irreducible(&k, &parse_skew(&k, s).unwrap(), DEFAULT_CAP).unwrap();
        assert!(yes("T^2+u*T+u"));
        assert!(!yes("T^2+(1+u^2)*T+u"));
        assert!(yes("T+u"));
        assert!(yes("T"));
        assert!(yes("u*T"));
        assert!(!yes("T^2+u*T"));
        assert!(yes("T^2+T+1"));
        assert!(!yes("T^2+1"));
    }

    #[test]
    fn factor_examples() {
        let k = f2();
        let show = |f: &Factorization| -> Vec<String> {
            f.factors.iter().map(|p| format_skew(&k, p)).collect()
        };
        let a = parse_skew(&k, "T^2+(1+u^2)*T+u").unwrap();
        let f = factor(&k, &a, rat_int(20), DEFAULT_CAP).unwrap();
        assert_eq!(show(&f), ["T+1", "T+u"]);
        assert!(f.exact);

        let a = parse_skew(&k, "T^3+u*T^2").unwrap();
        let f = factor(&k, &a, rat_int(20), DEFAULT_CAP).unwrap();
        assert_eq!(show(&f), ["T+u", "T", "T"]);

        let a = parse_skew(&k, "T^2+u*T+u").unwrap();
        let f = factor(&k, &a, rat_int(20), DEFAULT_CAP).unwrap();
        assert_eq!(f.factors, vec![a]);

        let a = parse_skew(&k, "u*T^2").unwrap();
        let f = factor(&k, &a, rat_int(20), DEFAULT_CAP).unwrap();
        assert_eq!(show(&f), ["u*T", "T"]);
    }

    #[test]
    fn factor_of_inexact_lift_meets_precision() {
        let k = f2();
        let f = parse_skew(&k, "T+1+u").unwrap();
        let g = parse_skew(&k, "T+u").unwrap();
        let a = f.mul(&k, &g);
        let fac = factor(&k, &a, rat_int(30), DEFAULT_CAP).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.residual.at_least(rat_int(30)));
        for p in &fac.factors {
            assert!(is_irreducible(&k, p, DEFAULT_CAP).unwrap());
        }
    }

    #[test]
    fn classical_form_examples() {
        let k = f2();
        let abar = parse_base(&k, "S^2+S+1", 1).unwrap();
        let a = classical_form(&k, &abar, 1, 1).unwrap();
        assert_eq!(a, parse_skew(&k, "u^12*T^2+u^6*T+u^3").unwrap());
        let np = np_compute(&k, &a).unwrap();
        assert_eq!(slope_pairs(&np), vec![(rat_int(3), 2)]);
        assert!(is_irreducible(&k, &a, DEFAULT_CAP).unwrap());
        assert_eq!(
            classical_form(&k, &abar, 0, 1).unwrap(),
            parse_skew(&k, "T^2+T+1").unwrap()
        );

        let k4 = FieldCtx::new(2, 2, 1, 2).unwrap();
        let abar = parse_base(&k4, "S+a", 2).unwrap();
        let a = classical_form(&k4, &abar, 1, 2).unwrap();
        assert_eq!(a, parse_skew(&k4, "u^4*T^2+a*u").unwrap());
        assert!(is_irreducible(&k4, &a, DEFAULT_CAP).unwrap());

        let k3 = FieldCtx::new(2, 1, 0, 3).unwrap();
        assert!(classical_form(&k3, &parse_base(&k3, "S+1", 1).unwrap(), 1, 1).is_err());
    }
}
