//! The threshold `K(m)`: the least `k` for which the minimum-weight term
//! alone makes the band-centre code `S_{n(k,m),k}` ugly.
//!
//! With `c = 2^(m+2) - 3` and `x = (2^(m+1) - 2) / c` we have `1 - 2x = 1/c`,
//! `U_m = c (1 - h(x))` and `2^(m+3) U_m ln 2 = 1 + u_m`. The criterion at
//! `n(k,m)` is `G(k) < 0` for `G(k) = k - m - 2^(k-2m-5) (1 + u_m) / ln 2`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::entropy::MAX_PREC;
use crate::certified::{ln2, CertifiedReal, Dyadic};
use crate::error::{param, Error, Result};

/// Width of the isolating interval computed for `kappa(m)`, as a power of two.
pub const KAPPA_BITS: u32 = 40;

fn c_of(m: u32) -> BigInt {
    (BigInt::one() << (m + 2)) - 3
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// `u_m = 2^(m+3) U_m ln 2 - 1`, computed from the series of `1 - h` without
/// any logarithm: `u_m = 3/c + 2^(m+3) sum_{i>=2} c^(1-2i) / (2i (2i-1))`.
pub fn u_m(m: u32, prec: u32) -> Result<CertifiedReal> {
    if m < 1 {
        return param("u_m needs m >= 1");
    }
    let c = c_of(m);
    let c2 = &c * &c;
    let scale = BigInt::one() << (m + 3);
    let n_terms = (prec + 2 * m + 16) / (2 * (m + 1)) + 1;
    let mut sum = rat(BigInt::from(3), c.clone());
    let mut cpow = &c * &c2;
    for i in 2..=n_terms as u64 {
        sum += rat(scale.clone(), BigInt::from(2 * i * (2 * i - 1)) * &cpow);
        cpow *= &c2;
    }
    // Consecutive terms shrink by at least c^2 >= 25, so the tail is below
    // twice its first term.
    let next = n_terms as u64 + 1;
    let tail = rat(scale << 1, BigInt::from(2 * next * (2 * next - 1)) * cpow);
    let lo = CertifiedReal::from_rational(&sum, prec);
    let hi = CertifiedReal::from_rational(&(sum + tail), prec);
    CertifiedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), prec)
}

/// The two sides of the sandwich `3/c < u_m < 3/c + (2 ln 2 - 1) 2^(m+2) / c^3`.
pub fn u_m_sandwich(m: u32, prec: u32) -> (CertifiedReal, CertifiedReal) {
    let c = c_of(m);
    let lower = CertifiedReal::from_rational(&rat(BigInt::from(3), c.clone()), prec);
    let l = ln2(prec);
    let coef = l.shl(1).sub(&CertifiedReal::from_int(1, prec));
    let frac = CertifiedReal::from_rational(&rat(BigInt::one() << (m + 2), &c * &c * &c), prec);
    let upper = lower.add(&coef.mul(&frac));
    (lower, upper)
}

/// `U_m = (1 + u_m) / (2^(m+3) ln 2)`.
pub fn big_u(m: u32, prec: u32) -> Result<CertifiedReal> {
    let one = CertifiedReal::from_int(1, prec);
    one.add(&u_m(m, prec)?).shl(-(m as i64 + 3)).div(&ln2(prec))
}

/// `2^e` for an interval exponent, exact when `e` is an integer point.
fn pow2_of(e: &CertifiedReal) -> Result<CertifiedReal> {
    if e.lo() == e.hi() {
        let d = e.lo();
        if d.exp() >= 0 {
            let v: i64 = d.floor().try_into().map_err(|_| Error::Parameter("exponent too large".into()))?;
            return Ok(CertifiedReal::exact(Dyadic::pow2(v), e.prec()));
        }
    }
    e.exp2()
}

/// `G(k) = k - m - 2^(k-2m-5) (1 + u_m) / ln 2` for a real `k` given as an
/// interval.
pub fn g_value(m: u32, k: &CertifiedReal, prec: u32) -> Result<CertifiedReal> {
    let k = k.with_prec(prec);
    let u = u_m(m, prec)?;
    let e = k.sub(&CertifiedReal::from_int(2 * m as i64 + 5, prec));
    let growth = pow2_of(&e)?.mul(&CertifiedReal::from_int(1, prec).add(&u)).div(&ln2(prec))?;
    Ok(k.sub(&CertifiedReal::from_int(m, prec)).sub(&growth))
}

/// `G'(k) = 1 - 2^(k-2m-5) (1 + u_m)`.
pub fn g_slope(m: u32, k: &CertifiedReal, prec: u32) -> Result<CertifiedReal> {
    let k = k.with_prec(prec);
    let u = u_m(m, prec)?;
    let e = k.sub(&CertifiedReal::from_int(2 * m as i64 + 5, prec));
    let one = CertifiedReal::from_int(1, prec);
    Ok(one.sub(&pow2_of(&e)?.mul(&one.add(&u))))
}

/// Evaluates `f` at growing precision until its sign is nonzero and decided.
fn settle<F>(prec: u32, what: &str, f: F) -> Result<Ordering>
where
    F: Fn(u32) -> Result<CertifiedReal>,
{
    let mut p = prec;
    loop {
        match f(p)?.sign() {
            Some(s) if s != Ordering::Equal => return Ok(s),
            _ if p >= MAX_PREC => return Err(Error::Budget(format!("{what}: sign undecided at {p} bits"))),
            _ => p = (p * 2).min(MAX_PREC),
        }
    }
}

fn g_sign_int(m: u32, k: i64, prec: u32) -> Result<Ordering> {
    settle(prec, "G at an integer", |p| g_value(m, &CertifiedReal::from_int(k, p), p))
}

/// Certified ceiling of a real given by a refinable enclosure.
pub fn certified_ceil<F>(prec: u32, f: F) -> Result<BigInt>
where
    F: Fn(u32) -> Result<CertifiedReal>,
{
    let mut p = prec;
    loop {
        let v = f(p)?;
        if v.lo() == v.hi() {
            return Ok(v.lo().ceil());
        }
        let (a, b) = (v.lo().ceil(), v.hi().ceil());
        if a == b && Dyadic::from_int(a.clone()) != *v.lo() {
            return Ok(a);
        }
        if p >= MAX_PREC {
            return Err(Error::Budget("ceiling undecided".into()));
        }
        p = (p * 2).min(MAX_PREC);
    }
}

/// `lambda = log2(ln 2)`.
pub fn lambda(prec: u32) -> Result<CertifiedReal> {
    let l = ln2(prec + 16);
    l.ln()?.div(&l).map(|v| v.with_prec(prec))
}

/// Lower and upper `omega` bounds on `kappa(m)`:
/// `omega_up = 2m + 5 + log2 mu + lambda + log2 mu / (mu ln 2)` and
/// `omega_low = omega_up - (log2 mu)^2 / (2 mu^2 ln 2)` with `mu = m + 5 + lambda`.
pub fn omega_bounds(m: u32, prec: u32) -> Result<(CertifiedReal, CertifiedReal)> {
    let lam = lambda(prec)?;
    let l2 = ln2(prec);
    let mu = CertifiedReal::from_int(m as i64 + 5, prec).add(&lam);
    let lg = mu.log2()?;
    let upper = CertifiedReal::from_int(2 * m as i64 + 5, prec)
        .add(&lg)
        .add(&lam)
        .add(&lg.div(&mu.mul(&l2))?);
    let lower = upper.sub(&lg.square().div(&mu.square().mul(&l2).shl(1))?);
    Ok((lower, upper))
}

/// Everything computed for one `m`.
#[derive(Clone, Debug)]
pub struct KmRecord {
    pub m: u32,
    pub u_m: CertifiedReal,
    /// `U_m`.
    pub big_u: CertifiedReal,
    /// Sides of the `u_m` sandwich, both strictly certified.
    pub u_lower: CertifiedReal,
    pub u_upper: CertifiedReal,
    /// `kappa(m)` lies strictly inside `[kappa_lo, kappa_hi]`.
    pub kappa_lo: Dyadic,
    pub kappa_hi: Dyadic,
    /// `K(m) = ceil(kappa(m))`.
    pub k_of_m: u32,
    /// `G(K-1) > 0 > G(K)`, kept as evidence that `kappa` is not an integer.
    pub g_before: CertifiedReal,
    pub g_at: CertifiedReal,
    /// The `omega` bounds and where `kappa` lies relative to them; `m >= 2` only.
    pub omega: Option<OmegaCheck>,
}

/// Certified position of `kappa(m)` relative to `omega_low(m)` and `omega_up(m)`.
///
/// The comparisons are decided through the sign of `G`, which is positive
/// before `kappa` and negative after it.
#[derive(Clone, Debug)]
pub struct OmegaCheck {
    pub lower: CertifiedReal,
    pub upper: CertifiedReal,
    pub lower_below_kappa: bool,
    pub upper_above_kappa: bool,
}

/// Computes `K(m)` and the surrounding quantities.
///
/// `G` is concave in `k` and positive at `m + 1`, so it has a single root
/// `kappa(m)` on `[m+1, inf)`; `K(m)` is found by bisection on the integers
/// and `kappa` is then narrowed inside `(K - 1, K)`.
pub fn km(m: u32, prec: u32) -> Result<KmRecord> {
    if m < 1 {
        return param("K(m) needs m >= 1");
    }
    // The sandwich is about 2^-m wide relative to u_m.
    let sp = prec + 2 * m + 64;
    let u = u_m(m, sp)?;
    let (u_lower, u_upper) = u_m_sandwich(m, sp);
    if u.gt(&u_lower) != Some(true) || u.lt(&u_upper) != Some(true) {
        return Err(Error::Invariant(format!("u_m sandwich fails or is undecided at m = {m}")));
    }
    let start = m as i64 + 1;
    if g_sign_int(m, start, prec)? != Ordering::Greater {
        return Err(Error::Invariant(format!("G(m+1) is not positive at m = {m}")));
    }
    let mut lo = start;
    let mut hi = 2 * m as i64 + 16;
    while g_sign_int(m, hi, prec)? == Ordering::Greater {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if g_sign_int(m, mid, prec)? == Ordering::Greater {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k_of_m = hi as u32;
    let g_before = g_value(m, &CertifiedReal::from_int(lo, prec), prec)?;
    let g_at = g_value(m, &CertifiedReal::from_int(hi, prec), prec)?;

    let mut a = Dyadic::from_int(lo);
    let mut b = Dyadic::from_int(hi);
    for _ in 0..KAPPA_BITS {
        let mid = a.add(&b).shl(-1);
        let s = settle(prec, "G inside (K-1, K)", |p| g_value(m, &CertifiedReal::exact(mid.clone(), p), p));
        match s {
            Ok(Ordering::Greater) => a = mid,
            Ok(_) => b = mid,
            Err(Error::Budget(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let slope = g_slope(m, &CertifiedReal::exact(a.clone(), prec), prec)?;
    if slope.sign() != Some(Ordering::Less) {
        return Err(Error::Invariant(format!("G is not decreasing past kappa at m = {m}")));
    }

    let omega = if m >= 2 {
        let (lower, upper) = omega_bounds(m, prec)?;
        let g_low = settle(prec, "G at omega_low", |p| {
            let (l, _) = omega_bounds(m, p)?;
            g_value(m, &l, p)
        })?;
        let g_up = settle(prec, "G at omega_up", |p| {
            let (_, h) = omega_bounds(m, p)?;
            g_value(m, &h, p)
        })?;
        Some(OmegaCheck {
            lower,
            upper,
            lower_below_kappa: g_low == Ordering::Greater,
            upper_above_kappa: g_up == Ordering::Less,
        })
    } else {
        None
    };

    Ok(KmRecord {
        m,
        big_u: big_u(m, prec)?,
        u_m: u,
        u_lower,
        u_upper,
        kappa_lo: a,
        kappa_hi: b,
        k_of_m,
        g_before,
        g_at,
        omega,
    })
}

/// `ceil(omega_low(m))`, for comparison with `K(m)`.
pub fn ceil_omega_lower(m: u32, prec: u32) -> Result<u32> {
    let c = certified_ceil(prec, |p| omega_bounds(m, p).map(|o| o.0))?;
    u32::try_from(c).map_err(|_| Error::Parameter("omega out of range".into()))
}

/// An integer `m_u` inside the window where `omega_low(m) < 2m + 5 + u < omega_up(m)`
/// is possible.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GapHit {
    pub u: u32,
    pub m: u64,
    /// `K(m_u)` and `ceil(omega_low(m_u))`, when `m_u >= 2`.
    pub k_of_m: Option<u32>,
    pub ceil_omega_lower: Option<u32>,
}

/// All integers `m` with `|m - (2^u / ln 2 - u - 5)| < u^2 / 2^u`, for
/// `1 <= u <= u_max`, each checked against `K(m) = ceil(omega_low(m))`.
pub fn integer_gap_scan(u_max: u32, prec: u32) -> Result<Vec<GapHit>> {
    let mut hits = Vec::new();
    for u in 1..=u_max {
        let window = |p: u32| -> Result<(CertifiedReal, CertifiedReal)> {
            let centre = CertifiedReal::exact(Dyadic::pow2(u as i64), p)
                .div(&ln2(p))?
                .sub(&CertifiedReal::from_int(u as i64 + 5, p));
            let w = CertifiedReal::from_rational(&rat(BigInt::from(u) * u, BigInt::one() << u), p);
            Ok((centre.sub(&w), centre.add(&w)))
        };
        let p0 = prec.max(u + 96);
        // The ends are transcendental, so their floors are eventually decided.
        let first = certified_ceil(p0, |p| window(p).map(|w| w.0))?;
        let last = certified_ceil(p0, |p| window(p).map(|w| w.1))? - 1;
        let mut m = first.max(BigInt::one());
        while m <= last {
            let mv: u64 = m.clone().try_into().map_err(|_| Error::Parameter("m_u too large".into()))?;
            let (k_of_m, ceil_low) = if mv >= 2 {
                let mm = u32::try_from(mv).map_err(|_| Error::Parameter("m_u too large".into()))?;
                (Some(km(mm, prec)?.k_of_m), Some(ceil_omega_lower(mm, prec)?))
            } else {
                (None, None)
            };
            hits.push(GapHit { u, m: mv, k_of_m, ceil_omega_lower: ceil_low });
            m += 1;
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(km(1, 256).unwrap().k_of_m, 9);
        assert_eq!(km(2, 256).unwrap().k_of_m, 12);
        assert_eq!(km(5, 256).unwrap().k_of_m, 19);
    }
}
