//! Exact dyadic rationals and outward-rounded intervals over them.
//!
//! [`CertifiedReal`] is the single rigorous real type used by the library.
//! Every operation widens its result so the true value stays inside
//! `[lo, hi]`. Transcendental functions are evaluated in fixed point with an
//! explicit error count and then widened by that count.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{param, Error, Result};

/// `mant * 2^exp`, normalised so that `mant` is odd or zero.
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    m.div_floor(&(BigInt::one() << s))
}

fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    m.div_ceil(&(BigInt::one() << s))
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Number of bits in the mantissa magnitude.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position just above the leading bit: `2^(top-1) <= |x| < 2^top`.
    pub fn top(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiplication by `2^s`.
    pub fn shl(&self, s: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + s }
    }

    /// Exact sum. Only for operands of comparable magnitude; see [`Dyadic::add_round`].
    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    /// Rounds to at most `prec` mantissa bits, towards +inf when `up`.
    pub fn round(&self, prec: u32, up: bool) -> Dyadic {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        let m = if up { ceil_shr(&self.mant, s) } else { floor_shr(&self.mant, s) };
        Dyadic::new(m, self.exp + s as i64)
    }

    /// Directed-rounded sum that never materialises huge exponent gaps.
    pub fn add_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        if self.is_zero() {
            return o.round(prec, up);
        }
        if o.is_zero() {
            return self.round(prec, up);
        }
        let (big, small) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        let gap_limit = prec as i64 + 4;
        let big_r = big.round(prec + 2, up);
        if big_r.top() - small.top() > gap_limit {
            // `small` is below the last kept bit: replace it by a same-signed
            // value of larger magnitude when that moves in the rounding direction.
            let pushes_up = small.sign() == Ordering::Greater;
            if pushes_up == up {
                let tiny = Dyadic::pow2(big_r.top() - gap_limit);
                let tiny = if pushes_up { tiny } else { tiny.neg() };
                return big_r.add(&tiny).round(prec, up);
            }
            return big_r.round(prec, up);
        }
        self.add(o).round(prec, up)
    }

    pub fn mul_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        self.mul(o).round(prec, up)
    }

    /// Directed-rounded quotient. `o` must be nonzero.
    pub fn div_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!o.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + 2 + o.bits() as i64 - self.bits() as i64;
        let s = s.max(0) as u64;
        let num = &self.mant << s;
        let q = if up { num.div_ceil(&o.mant) } else { num.div_floor(&o.mant) };
        Dyadic::new(q, self.exp - o.exp - s as i64).round(prec, up)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed rounding of an exact rational to `prec` bits.
    pub fn from_rational(r: &BigRational, prec: u32, up: bool) -> Dyadic {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = (r.numer(), r.denom());
        let s = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if s >= 0 {
            (n << s as u64, d.clone())
        } else {
            (n.clone(), d << (-s) as u64)
        };
        let q = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
        Dyadic::new(q, -s).round(prec, up)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            floor_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            ceil_shr(&self.mant, (-self.exp) as u64)
        }
    }

    /// Nearest `f64`, saturating to 0 or infinity out of range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits();
        let keep = b.min(60);
        let m = (&self.mant >> (b - keep)).to_f64().unwrap_or(0.0);
        let e = self.exp + (b - keep) as i64;
        let e = e.clamp(-3000, 3000) as i32;
        m * 2f64.powi(e.clamp(-1022, 1023)) * 2f64.powi(e - e.clamp(-1022, 1023))
    }

    /// `log2 |x|` as an `f64` approximation, valid far outside `f64` range.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = self.bits();
        let keep = b.min(60);
        let m = (self.mant.abs() >> (b - keep)).to_f64().unwrap_or(1.0);
        m.log2() + (self.exp + (b - keep) as i64) as f64
    }

    /// Floor of `self * 2^w` as an integer.
    fn to_fixed_floor(&self, w: u32) -> BigInt {
        self.shl(w as i64).floor()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), o.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Ordering::Equal {
            return Ordering::Equal;
        }
        let mag = if self.top() != o.top() {
            self.top().cmp(&o.top())
        } else {
            let e = self.exp.min(o.exp);
            let a = self.mant.abs() << (self.exp - e) as u64;
            let b = o.mant.abs() << (o.exp - e) as u64;
            a.cmp(&b)
        };
        if sa == Ordering::Greater {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}", self.to_f64())
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints that is guaranteed to
/// contain the real it stands for. `prec` is the mantissa width used when
/// rounding results of further operations.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

/// Guard bits added to fixed-point evaluations of transcendental functions.
const GUARD: u32 = 40;

impl CertifiedReal {
    pub fn exact(d: Dyadic, prec: u32) -> Self {
        CertifiedReal { lo: d.round(prec, false), hi: d.round(prec, true), prec }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        CertifiedReal {
            lo: Dyadic::from_rational(r, prec, false),
            hi: Dyadic::from_rational(r, prec, true),
            prec,
        }
    }

    /// Builds an interval from explicit bounds. Fails if `lo > hi`.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invariant(format!("empty interval [{lo:?}, {hi:?}]")));
        }
        Ok(CertifiedReal { lo: lo.round(prec, false), hi: hi.round(prec, true), prec })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CertifiedReal { lo: self.lo.round(prec, false), hi: self.hi.round(prec, true), prec }
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Ordering::Greater && self.hi.sign() != Ordering::Less
    }

    /// Sign if decided by the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.sign() == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.hi.sign() == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self < o`, `Some(false)` if certainly `self >= o`.
    pub fn lt(&self, o: &CertifiedReal) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self > o`, `Some(false)` if certainly `self <= o`.
    pub fn gt(&self, o: &CertifiedReal) -> Option<bool> {
        if self.lo > o.hi {
            Some(true)
        } else if self.hi <= o.lo {
            Some(false)
        } else {
            None
        }
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    fn p(&self, o: &CertifiedReal) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn neg(&self) -> Self {
        CertifiedReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn add(&self, o: &CertifiedReal) -> Self {
        let p = self.p(o);
        CertifiedReal {
            lo: self.lo.add_round(&o.lo, p, false),
            hi: self.hi.add_round(&o.hi, p, true),
            prec: p,
        }
    }

    pub fn sub(&self, o: &CertifiedReal) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CertifiedReal) -> Self {
        let p = self.p(o);
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = cands.iter().min().expect("four candidates").round(p, false);
        let hi = cands.iter().max().expect("four candidates").round(p, true);
        CertifiedReal { lo, hi, prec: p }
    }

    pub fn mul_int(&self, v: impl Into<BigInt>) -> Self {
        self.mul(&CertifiedReal::from_int(v, self.prec))
    }

    /// Multiplication by `2^s`, exact.
    pub fn shl(&self, s: i64) -> Self {
        CertifiedReal { lo: self.lo.shl(s), hi: self.hi.shl(s), prec: self.prec }
    }

    pub fn div(&self, o: &CertifiedReal) -> Result<Self> {
        if o.contains_zero() {
            return param("division by an interval containing zero");
        }
        let p = self.p(o);
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div_round(b, p, false)).min().expect("four");
        let hi = pairs.iter().map(|(a, b)| a.div_round(b, p, true)).max().expect("four");
        Ok(CertifiedReal { lo, hi, prec: p })
    }

    pub fn min(&self, o: &CertifiedReal) -> Self {
        CertifiedReal {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            prec: self.p(o),
        }
    }

    pub fn max(&self, o: &CertifiedReal) -> Self {
        CertifiedReal {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.p(o),
        }
    }

    pub fn square(&self) -> Self {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            return CertifiedReal { lo: Dyadic::zero(), hi: m.mul(&m).round(self.prec, true), prec: self.prec };
        }
        self.mul(self)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CertifiedReal::from_int(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.sign() == Ordering::Less {
            return param("square root of an interval reaching below zero");
        }
        Ok(CertifiedReal {
            lo: sqrt_dyadic(&self.lo, self.prec, false),
            hi: sqrt_dyadic(&self.hi, self.prec, true),
            prec: self.prec,
        })
    }

    /// Natural logarithm. Requires a strictly positive interval.
    pub fn ln(&self) -> Result<Self> {
        if self.lo.sign() != Ordering::Greater {
            return param("logarithm of an interval reaching zero or below");
        }
        let lo = ln_dyadic(&self.lo, self.prec)?.lo;
        let hi = ln_dyadic(&self.hi, self.prec)?.hi;
        Ok(CertifiedReal { lo, hi, prec: self.prec })
    }

    pub fn log2(&self) -> Result<Self> {
        self.ln()?.div(&ln2(self.prec))
    }

    pub fn exp(&self) -> Result<Self> {
        let lo = exp_dyadic(&self.lo, self.prec)?.lo;
        let hi = exp_dyadic(&self.hi, self.prec)?.hi;
        Ok(CertifiedReal { lo, hi, prec: self.prec })
    }

    pub fn exp2(&self) -> Result<Self> {
        self.mul(&ln2(self.prec + 8)).exp()
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.prec)
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mid_f64())
    }
}

fn sqrt_dyadic(d: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    // Make the exponent even and the mantissa at least 2*prec+4 bits wide.
    let want = 2 * prec as i64 + 4;
    let mut s = (want - d.bits() as i64).max(0);
    if (d.exp() - s).rem_euclid(2) != 0 {
        s += 1;
    }
    let m = d.mant() << s as u64;
    let r = m.sqrt();
    let r = if up && &r * &r != m { r + 1 } else { r };
    Dyadic::new(r, (d.exp() - s) / 2).round(prec, up)
}

/// `atanh(num/den)` in fixed point with `w` fractional bits, for `0 <= num/den <= 1/3`.
/// Returns the value and an error bound in units of `2^-w`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, u64) {
    let mut pw = (num << w).div_floor(den);
    let num2 = num * num;
    let den2 = den * den;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !pw.is_zero() {
        sum += &pw / BigInt::from(2 * i + 1);
        pw = (&pw * &num2).div_floor(&den2);
        i += 1;
    }
    (sum, 3 * i + 8)
}

/// `ln 2` in fixed point with `w` fractional bits plus its error bound.
fn ln2_fixed(w: u32) -> (BigInt, u64) {
    let (v, e) = atanh_fixed(&BigInt::from(1), &BigInt::from(3), w);
    (v << 1, 2 * e)
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> CertifiedReal {
    let w = prec + GUARD;
    let (v, e) = ln2_fixed(w);
    fixed_to_interval(&v, e, w, prec)
}

fn fixed_to_interval(v: &BigInt, err: u64, w: u32, prec: u32) -> CertifiedReal {
    let lo = Dyadic::new(v - BigInt::from(err), -(w as i64)).round(prec, false);
    let hi = Dyadic::new(v + BigInt::from(err), -(w as i64)).round(prec, true);
    CertifiedReal { lo, hi, prec }
}

fn ln_dyadic(d: &Dyadic, prec: u32) -> Result<CertifiedReal> {
    if d.sign() != Ordering::Greater {
        return param("logarithm of a non-positive value");
    }
    let w = prec + GUARD + 8;
    // Work on a w-bit mantissa; the two roundings bracket the true logarithm.
    let lo_in = d.round(w, false);
    let hi_in = d.round(w, true);
    let a = ln_dyadic_exactish(&lo_in, w);
    let b = ln_dyadic_exactish(&hi_in, w);
    Ok(CertifiedReal {
        lo: Dyadic::new(a.0 - BigInt::from(a.1), -(w as i64)).round(prec, false),
        hi: Dyadic::new(b.0 + BigInt::from(b.1), -(w as i64)).round(prec, true),
        prec,
    })
}

/// Fixed-point `ln d` for a dyadic `d > 0` with a modest mantissa.
fn ln_dyadic_exactish(d: &Dyadic, w: u32) -> (BigInt, u64) {
    let b = d.bits();
    let e2 = d.exp() + b as i64 - 1;
    let half = BigInt::one() << (b - 1);
    let num = d.mant() - &half;
    let den = d.mant() + &half;
    let (at, ae) = atanh_fixed(&num, &den, w);
    let (l2, l2e) = ln2_fixed(w);
    let v = BigInt::from(e2) * l2 + (at << 1);
    (v, e2.unsigned_abs() * l2e + 2 * ae + 1)
}

fn exp_dyadic(d: &Dyadic, prec: u32) -> Result<CertifiedReal> {
    let approx = d.to_f64();
    if !approx.is_finite() || approx.abs() > 1e15 {
        return param("exponential argument out of supported range");
    }
    let q = (approx / std::f64::consts::LN_2).round() as i64;
    let qbits = 64 - q.unsigned_abs().leading_zeros();
    let w = prec + GUARD + qbits;
    let (l2, l2e) = ln2_fixed(w);
    let x = d.to_fixed_floor(w);
    let r = &x - BigInt::from(q) * &l2;
    // |r - true r| <= 1 + |q| * l2e ulps.
    let delta = 1 + q.unsigned_abs() * l2e;
    let one = BigInt::one() << w;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut i: u64 = 1;
    loop {
        term = (&term * &r) / (&one * BigInt::from(i));
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    // Truncation errors, series tail, and sensitivity to the error in r
    // (exp(r) < 2 on the reduced range).
    let err = 2 * i + 4 + 2 * delta + 2;
    let lo = Dyadic::new(&sum - BigInt::from(err), q - w as i64).round(prec, false);
    let hi = Dyadic::new(&sum + BigInt::from(err), q - w as i64).round(prec, true);
    let lo = if lo.sign() == Ordering::Less { Dyadic::zero() } else { lo };
    Ok(CertifiedReal { lo, hi, prec })
}

/// Evaluates `f` at increasing precision until its sign is decided.
/// Returns `None` if `max_prec` is reached without a decision.
pub fn decide_sign<F>(start_prec: u32, max_prec: u32, f: F) -> Result<Option<Ordering>>
where
    F: Fn(u32) -> Result<CertifiedReal>,
{
    let mut p = start_prec;
    loop {
        let v = f(p)?;
        if let Some(s) = v.sign() {
            if s != Ordering::Equal {
                return Ok(Some(s));
            }
        }
        if p >= max_prec {
            return Ok(None);
        }
        p = (p * 2).min(max_prec);
    }
}

/// `log2` of a positive integer.
pub fn log2_int(v: &BigInt, prec: u32) -> Result<CertifiedReal> {
    if v.sign() != Sign::Plus {
        return param("log2 of a non-positive integer");
    }
    if (v & (v - BigInt::one())).is_zero() {
        return Ok(CertifiedReal::from_int(v.bits() as i64 - 1, prec));
    }
    CertifiedReal::from_int(v.clone(), prec + 8).log2().map(|x| x.with_prec(prec))
}

/// Ceiling of `log2 v` for a positive integer.
pub fn ceil_log2(v: u64) -> u32 {
    assert!(v > 0);
    64 - (v - 1).leading_zeros()
}

/// Floor of the square root of an integer.
pub fn isqrt(v: &BigInt) -> BigInt {
    assert!(v.sign() != Sign::Minus, "isqrt of a negative integer");
    v.sqrt()
}

pub fn isqrt_u128(v: u128) -> u128 {
    Roots::sqrt(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let x = Dyadic::from_rational(&r(1, 3), 20, false);
        let y = Dyadic::from_rational(&r(1, 3), 20, true);
        assert!(x.to_rational() < r(1, 3) && r(1, 3) < y.to_rational());
        assert!(x.bits() <= 20 && y.bits() <= 20);
        let neg = Dyadic::from_rational(&r(-5, 7), 10, false);
        assert!(neg.to_rational() <= r(-5, 7));
    }

    #[test]
    fn add_round_with_huge_gap() {
        let one = Dyadic::one();
        let tiny = Dyadic::pow2(-1_000_000_000);
        let up = one.add_round(&tiny, 64, true);
        let dn = one.add_round(&tiny, 64, false);
        assert!(up > one);
        assert_eq!(dn, one);
        let dn2 = one.add_round(&tiny.neg(), 64, false);
        assert!(dn2 < one);
    }

    #[test]
    fn ordering_mixed_exponents() {
        let a = Dyadic::new(BigInt::from(3), -2);
        let b = Dyadic::new(BigInt::from(1), 0);
        assert!(a < b);
        assert!(a.neg() > b.neg());
        assert_eq!(Dyadic::new(BigInt::from(4), 0), Dyadic::new(BigInt::from(1), 2));
    }

    #[test]
    fn ln2_digits() {
        let l = ln2(200);
        assert!(l.width().top() < -190);
        let reference = 0.693_147_180_559_945_3_f64;
        assert!((l.mid_f64() - reference).abs() < 1e-15);
    }

    #[test]
    fn ln_exp_roundtrip() {
        for v in [r(1, 7), r(3, 2), r(1000, 1), r(12345, 1024)] {
            let x = CertifiedReal::from_rational(&v, 160);
            let y = x.ln().unwrap().exp().unwrap();
            let exact = CertifiedReal::from_rational(&v, 160);
            assert!(y.lo() <= exact.hi() && exact.lo() <= y.hi());
            assert!(y.width().top() - y.lo().top() < -140);
        }
    }

    #[test]
    fn exp_of_negative_and_large() {
        let x = CertifiedReal::from_int(-50, 128).exp().unwrap();
        assert!((x.mid_f64() - (-50f64).exp()).abs() / (-50f64).exp() < 1e-14);
        let y = CertifiedReal::from_int(700, 128).exp().unwrap();
        assert!((y.mid_f64() / 700f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_brackets() {
        let two = CertifiedReal::from_int(2, 100);
        let s = two.sqrt().unwrap();
        assert!(s.square().contains(&Dyadic::from_int(2)));
        assert!(s.width().top() < -95);
    }

    #[test]
    fn log2_of_integers() {
        let l = log2_int(&BigInt::from(1024), 64).unwrap();
        assert_eq!(l.sign(), Some(Ordering::Greater));
        assert!(l.contains(&Dyadic::from_int(10)));
        let l3 = log2_int(&BigInt::from(3), 128).unwrap();
        assert!((l3.mid_f64() - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn decide_sign_escalates() {
        // ln(2^60 + 1) - 60 ln 2 ~ 2^-60 needs more than 64 bits to see.
        let f = |p: u32| -> Result<CertifiedReal> {
            let v = CertifiedReal::from_int((BigInt::one() << 60u32) + 1, p);
            Ok(v.ln()?.sub(&ln2(p).mul_int(60)))
        };
        assert_eq!(decide_sign(32, 512, f).unwrap(), Some(Ordering::Greater));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt_u128(0), 0);
        assert_eq!(isqrt_u128(15), 3);
        assert_eq!(isqrt_u128(16), 4);
        assert_eq!(isqrt_u128(u64::MAX as u128 * u64::MAX as u128), u64::MAX as u128);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
    }
}
