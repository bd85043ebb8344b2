//! Arithmetic in the residue field `k = F_{p^m}` together with the twist
//! `σ : x ↦ x^{p^s}` and the integer `b` that drives `φ(u) = u^b`.
//!
//! Elements are stored as the integer `Σ cᵢ pⁱ` of their power-basis
//! coordinates, so they are `Copy` and hash cheaply. Multiplication goes
//! through discrete log tables built once per [`FieldCtx`].

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest field order for which log tables are built.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of `F_{p^m}`, encoded as `Σ cᵢ pⁱ` over its power-basis
/// coordinates `c₀, …, c_{m-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem(u32);

impl FFElem {
    pub const ZERO: FFElem = FFElem(0);
    pub const ONE: FFElem = FFElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The integer encoding of the coordinate vector.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Ambient data: the prime `p`, the residue field `k = F_p[a]/(modulus)`,
/// the Frobenius power `s` defining `σ`, and `b ≥ 2`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
    s: u32,
    b: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    // p^k mod (q-1) for k in 0..m
    frob: Vec<u64>,
    generator: FFElem,
}

/// Conway polynomials (coefficients from the constant term up, monic).
fn builtin_modulus(p: u32, m: u32) -> Option<Vec<u32>> {
    let table: &[(u32, u32, &[u32])] = &[
        (2, 1, &[1, 1]),
        (2, 2, &[1, 1, 1]),
        (2, 3, &[1, 1, 0, 1]),
        (2, 4, &[1, 1, 0, 0, 1]),
        (3, 1, &[1, 1]),
        (3, 2, &[2, 2, 1]),
        (3, 3, &[1, 2, 0, 1]),
        (3, 4, &[2, 0, 0, 2, 1]),
        (5, 1, &[3, 1]),
        (5, 2, &[2, 4, 1]),
        (5, 3, &[3, 3, 0, 1]),
        (5, 4, &[2, 4, 4, 0, 1]),
    ];
    table
        .iter()
        .find(|(tp, tm, _)| *tp == p && *tm == m)
        .map(|(_, _, c)| c.to_vec())
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic `m` over `F_p` (dense, low degree first).
fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.iter().map(|c| c % p).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d <= 1 {
        return true;
    }
    // every monic candidate divisor of degree 1..=d/2
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut t = idx;
            for _ in 0..deg {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if fp_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds the context from the built-in Conway table (`p ∈ {2,3,5}`, `m ≤ 4`).
    pub fn new(p: u32, m: u32, s: u32, b: u32) -> Result<Self> {
        let modulus = builtin_modulus(p, m).ok_or_else(|| {
            Error::InvalidField(format!(
                "no built-in modulus for p={p}, m={m}; supply one explicitly"
            ))
        })?;
        Self::with_modulus(p, &modulus, s, b)
    }

    /// Builds the context from a user-supplied monic modulus given by its
    /// coefficients from the constant term up.
    pub fn with_modulus(p: u32, modulus: &[u32], s: u32, b: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree ≥ 1".into()));
        }
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus must be monic with coefficients in [0, p)".into(),
            ));
        }
        let m = (modulus.len() - 1) as u32;
        if b < 2 {
            return Err(Error::InvalidField(format!("b must be ≥ 2, got {b}")));
        }
        if s >= m {
            return Err(Error::InvalidField(format!(
                "sigma power must lie in [0, {m}), got {s}"
            )));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64)
            .ok_or_else(|| Error::InvalidField(format!("field order {p}^{m} too large")))?
            as u32;
        if !fp_is_irreducible(modulus, p) {
            return Err(Error::InvalidField("modulus is reducible over F_p".into()));
        }

        let mut ctx = FieldCtx {
            p,
            m,
            modulus: modulus.to_vec(),
            s,
            b,
            q,
            exp: Vec::new(),
            log: Vec::new(),
            frob: Vec::new(),
            generator: FFElem::ZERO,
        };
        ctx.generator = ctx.encode(&fp_poly_rem(&[0, 1], modulus, p));
        ctx.build_tables();
        Ok(ctx)
    }

    fn encode(&self, coords: &[u32]) -> FFElem {
        let mut v = 0u32;
        for &c in coords.iter().rev() {
            v = v * self.p + c % self.p;
        }
        FFElem(v)
    }

    fn mul_slow(&self, x: FFElem, y: FFElem) -> FFElem {
        let a = self.coords(x);
        let b = self.coords(y);
        let mut prod = vec![0u32; a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + ai as u64 * bj as u64) % self.p as u64) as u32;
            }
        }
        self.encode(&fp_poly_rem(&prod, &self.modulus, self.p))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        'search: for cand in 1..q {
            let g = FFElem(cand);
            let mut x = FFElem::ONE;
            for i in 0..order {
                if i > 0 && x == FFElem::ONE {
                    continue 'search;
                }
                exp[i as usize] = x.0;
                x = self.mul_slow(x, g);
            }
            break;
        }
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;
        let mut frob = Vec::with_capacity(self.m as usize);
        let mut pk = 1u64;
        for _ in 0..self.m {
            frob.push(pk % order as u64);
            pk = pk * self.p as u64 % order as u64;
        }
        self.frob = frob;
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn b(&self) -> u32 {
        self.b
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Same field and modulus with a different `σ` or `b`.
    pub fn with_twist(&self, s: u32, b: u32) -> Result<Self> {
        Self::with_modulus(self.p, &self.modulus, s, b)
    }

    #[inline]
    pub fn zero(&self) -> FFElem {
        FFElem::ZERO
    }
    #[inline]
    pub fn one(&self) -> FFElem {
        FFElem::ONE
    }
    /// The class of the indeterminate `a` of the power basis.
    #[inline]
    pub fn generator(&self) -> FFElem {
        self.generator
    }

    pub fn from_int(&self, n: i64) -> FFElem {
        FFElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given power-basis coordinates; longer inputs are
    /// reduced modulo the field modulus.
    pub fn from_coords(&self, coords: &[u32]) -> FFElem {
        self.encode(&fp_poly_rem(coords, &self.modulus, self.p))
    }

    pub fn from_index(&self, idx: u32) -> Result<FFElem> {
        if idx < self.q {
            Ok(FFElem(idx))
        } else {
            Err(Error::InvalidField(format!(
                "element index {idx} out of range"
            )))
        }
    }

    pub fn coords(&self, x: FFElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> {
        (0..self.q).map(FFElem)
    }

    #[inline]
    pub fn add(&self, x: FFElem, y: FFElem) -> FFElem {
        if self.p == 2 {
            return FFElem(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        FFElem(out)
    }

    #[inline]
    pub fn neg(&self, x: FFElem) -> FFElem {
        if self.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        FFElem(out)
    }

    #[inline]
    pub fn sub(&self, x: FFElem, y: FFElem) -> FFElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FFElem, y: FFElem) -> FFElem {
        if x.is_zero() || y.is_zero() {
            return FFElem::ZERO;
        }
        let order = self.q - 1;
        let l = self.log[x.0 as usize] + self.log[y.0 as usize];
        FFElem(self.exp[(l % order) as usize])
    }

    pub fn inv(&self, x: FFElem) -> Result<FFElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[x.0 as usize];
        Ok(FFElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, x: FFElem, y: FFElem) -> Result<FFElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FFElem, n: i64) -> Result<FFElem> {
        if x.is_zero() {
            return match n {
                0 => Ok(FFElem::ONE),
                n if n > 0 => Ok(FFElem::ZERO),
                _ => Err(Error::DivisionByZero),
            };
        }
        let order = (self.q - 1) as i64;
        let l = (self.log[x.0 as usize] as i64 * n.rem_euclid(order)).rem_euclid(order);
        Ok(FFElem(self.exp[l as usize]))
    }

    pub fn ff_arith(&self, x: FFElem, y: FFElem, kind: ArithKind) -> Result<FFElem> {
        match kind {
            ArithKind::Add => Ok(self.add(x, y)),
            ArithKind::Sub => Ok(self.sub(x, y)),
            ArithKind::Mul => Ok(self.mul(x, y)),
            ArithKind::Div => self.div(x, y),
        }
    }

    /// `x ↦ x^{p^k}` for `k` taken modulo `m`.
    #[inline]
    pub fn frobenius_pow(&self, x: FFElem, k: i64) -> FFElem {
        if x.is_zero() {
            return x;
        }
        let k = k.rem_euclid(self.m as i64) as usize;
        if k == 0 {
            return x;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[x.0 as usize] as u64 * self.frob[k] % order;
        FFElem(self.exp[l as usize])
    }

    /// `σ^j(x) = x^{p^{sj}}`; negative `j` is allowed since `σ` is an automorphism.
    #[inline]
    pub fn sigma_pow(&self, x: FFElem, j: i64) -> FFElem {
        self.frobenius_pow(x, self.s as i64 * j)
    }

    #[inline]
    pub fn sigma(&self, x: FFElem) -> FFElem {
        self.sigma_pow(x, 1)
    }

    /// Multiplicative order of `σ^j` as an automorphism of `k`.
    pub fn twist_order(&self, j: i64) -> u32 {
        let k = (self.s as i64 * j).rem_euclid(self.m as i64) as u32;
        self.m / self.m.gcd(&k)
    }

    /// Order `r = m / gcd(m, s)` of `σ`.
    pub fn sigma_order(&self) -> u32 {
        self.twist_order(1)
    }
}
