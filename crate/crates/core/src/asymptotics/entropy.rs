//! Binary entropy with certified enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::{ln2, CertifiedReal, Dyadic};
use crate::error::{param, Error, Result};

/// Highest working precision tried before giving up on a strict comparison.
pub const MAX_PREC: u32 = 8192;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn log2_rational(r: &BigRational, prec: u32) -> Result<CertifiedReal> {
    CertifiedReal::from_rational(r, prec + 16).log2().map(|v| v.with_prec(prec))
}

fn direct(x: &BigRational, prec: u32) -> Result<CertifiedReal> {
    let one = BigRational::one();
    let y = &one - x;
    let a = CertifiedReal::from_rational(x, prec).mul(&log2_rational(x, prec)?);
    let b = CertifiedReal::from_rational(&y, prec).mul(&log2_rational(&y, prec)?);
    Ok(a.add(&b).neg())
}

/// The quadratic upper bound `1 - y^2 / (2 ln 2)` and the quartic lower bound
/// `1 - y^2 / (2 ln 2) - ((ln 2 - 1/2) / ln 2) y^4` on `h`, with `y = 1 - 2x`.
pub fn entropy_bounds(x: &BigRational, prec: u32) -> Result<(CertifiedReal, CertifiedReal)> {
    let y = BigRational::one() - x * BigRational::from_integer(BigInt::from(2));
    let y2 = CertifiedReal::from_rational(&(&y * &y), prec);
    let l = ln2(prec);
    let one = CertifiedReal::from_int(1, prec);
    let upper = one.sub(&y2.div(&l.shl(1))?);
    let c = l.sub(&CertifiedReal::exact(Dyadic::pow2(-1), prec)).div(&l)?;
    let lower = upper.sub(&c.mul(&y2.square()));
    Ok((lower, upper))
}

/// Certified `h(x) = -x log2 x - (1-x) log2(1-x)` for rational `0 < x < 1`.
///
/// Every evaluation off `x = 1/2` also checks that `h(x)` lies strictly
/// between the quartic and quadratic bounds of [`entropy_bounds`], raising the
/// precision until the comparison is decided.
pub fn entropy(x: &BigRational, prec: u32) -> Result<CertifiedReal> {
    if !x.is_positive() || x >= &BigRational::one() {
        return param("entropy needs 0 < x < 1");
    }
    if x == &half() {
        return Ok(CertifiedReal::from_int(1, prec));
    }
    let mut p = prec;
    loop {
        let h = direct(x, p)?;
        let (lower, upper) = entropy_bounds(x, p)?;
        match (h.lt(&upper), h.gt(&lower)) {
            (Some(true), Some(true)) => return Ok(h.with_prec(prec.max(h.prec()))),
            (Some(false), _) | (_, Some(false)) => {
                return Err(Error::Invariant(format!("entropy bounds violated at x = {x}")));
            }
            _ if p >= MAX_PREC => {
                return Err(Error::Budget(format!("entropy bounds undecided at x = {x}")));
            }
            _ => p *= 2,
        }
    }
}

/// `sum_{i>=1} y2^i / (2i (2i - 1))` for rational `0 <= y2 <= 1/4`.
///
/// With `y2 = (1 - 2x)^2` this is `ln 2 * (1 - h(x))`, a form without
/// cancellation near `x = 1/2`.
pub fn log_series(y2: &BigRational, prec: u32) -> Result<CertifiedReal> {
    if y2.is_negative() || y2 > &BigRational::new(BigInt::one(), BigInt::from(4)) {
        return param("log series needs 0 <= y^2 <= 1/4");
    }
    if y2.is_zero() {
        return Ok(CertifiedReal::from_int(0, prec));
    }
    let w = prec + 40;
    let (num, den) = (y2.numer(), y2.denom());
    let mut pw = (num << w) / den;
    let mut sum = BigInt::zero();
    let mut i: u64 = 1;
    while !pw.is_zero() {
        sum += &pw / BigInt::from(2 * i * (2 * i - 1));
        pw = (&pw * num) / den;
        i += 1;
    }
    // Each truncated power is at most i ulps low and each quotient one more;
    // the omitted tail is below 2i ulps since the ratio is at most 1/4.
    let err = BigInt::from((i + 2) * (i + 2));
    let hi = Dyadic::new(&sum + err, -(w as i64));
    let lo = Dyadic::new(sum, -(w as i64));
    CertifiedReal::from_bounds(lo, hi, prec)
}

/// `1 - h(x)` through [`log_series`], for `1/4 <= x <= 3/4`.
pub fn one_minus_entropy(x: &BigRational, prec: u32) -> Result<CertifiedReal> {
    let y = BigRational::one() - x * BigRational::from_integer(BigInt::from(2));
    log_series(&(&y * &y), prec + 8)?.div(&ln2(prec + 8)).map(|v| v.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn half_is_one() {
        let h = entropy(&r(1, 2), 64).unwrap();
        assert_eq!(h.sign(), Some(Ordering::Greater));
        assert!(h.contains(&Dyadic::one()));
    }

    #[test]
    fn series_matches_direct() {
        for (n, d) in [(2, 5), (1, 3), (3, 8), (7, 10)] {
            let x = r(n, d);
            let a = entropy(&x, 200).unwrap();
            let b = CertifiedReal::from_int(1, 200).sub(&one_minus_entropy(&x, 200).unwrap());
            let diff = a.sub(&b);
            assert!(diff.lo().to_f64().abs() < 1e-50 && diff.hi().to_f64().abs() < 1e-50);
        }
    }
}
