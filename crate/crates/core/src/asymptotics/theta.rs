//! `theta(k)`, the least `T` such that `S_{n,k}` is proper for every
//! `n >= 2^(k-1) T`, together with its lower bounds and the analytic
//! estimate `vartheta(k)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::entropy::MAX_PREC;
use super::kofm::certified_ceil;
use super::phi::{proper_scan, ScanOptions};
use crate::certified::{ln2, CertifiedReal, Dyadic};
use crate::classifier::{check_proper, ugly_by_per, Budget, Route};
use crate::error::{param, Error, Result};

/// Bisection steps used to narrow `vartheta(k)`.
pub const VARTHETA_BITS: u32 = 40;

fn check_k(k: u32) -> Result<()> {
    if !(6..=40).contains(&k) {
        return param(format!("theta needs 6 <= k <= 40, got {k}"));
    }
    Ok(())
}

/// `theta_2(k) = ceil(2^(k-6) / ((k-1) ln 2) - 1/4)`.
pub fn theta2(k: u32, prec: u32) -> Result<u64> {
    check_k(k)?;
    let v = certified_ceil(prec, |p| {
        let num = CertifiedReal::exact(Dyadic::pow2(k as i64 - 6), p);
        let den = CertifiedReal::from_int(k - 1, p).mul(&ln2(p));
        Ok(num.div(&den)?.sub(&CertifiedReal::exact(Dyadic::pow2(-2), p)))
    })?;
    v.try_into().map_err(|_| Error::Parameter("theta_2 out of range".into()))
}

/// Properness of `S_{n,k}` at `n = 2^(k-3) (4t + 1)`, the lowest-distance
/// point of band 1 in block `t`.
pub fn proper_at_block_centre(k: u32, t: u64, budget: &Budget) -> Result<bool> {
    let n = (1u64 << (k - 3)) * (4 * t + 1);
    if ugly_by_per(k, n)? {
        return Ok(false);
    }
    let d = check_proper(k, n, false, Route::Auto, budget)?;
    d.value
        .known()
        .ok_or_else(|| Error::Budget(format!("properness undecided at (k, n) = ({k}, {n})")))
}

/// `theta_1(k)`: the least `t` for which `S_{2^(k-3)(4t+1),k}` is proper.
pub fn theta1(k: u32, budget: &Budget) -> Result<u64> {
    check_k(k)?;
    let cap = 1u64 << (k - 5);
    for t in 1..=cap {
        if proper_at_block_centre(k, t, budget)? {
            return Ok(t);
        }
    }
    Err(Error::Invariant(format!("no proper block centre up to t = 2^(k-5) at k = {k}")))
}

/// The left-hand side of the defining inequality of `ceil(vartheta)` at a
/// rational `t`, or `None` when `8Rt > (R-1)^2` makes it complex:
/// `2(4R-2)(4t+1)(R+D) / (4tR + R - 1 - (4t+1)D) * pi^R` with
/// `D = sqrt((R-1)^2 - 8Rt)` and
/// `pi = (8Rt + R - 1 - D) / (8Rt + 3R - 1 + D)`.
pub fn vartheta_lhs(k: u32, t: &BigRational, prec: u32) -> Result<Option<CertifiedReal>> {
    let r = BigInt::one() << (k - 4);
    let rr = BigRational::from_integer(r.clone());
    let one = BigRational::one();
    let disc = (&rr - &one) * (&rr - &one) - BigRational::from_integer(BigInt::from(8)) * &rr * t;
    if disc.is_negative() {
        return Ok(None);
    }
    let c = |q: &BigRational| CertifiedReal::from_rational(q, prec);
    let d = c(&disc).sqrt()?;
    let four_t1 = t * BigRational::from_integer(BigInt::from(4)) + &one;
    let num = c(&(BigRational::from_integer(BigInt::from(2)) * (&rr * BigRational::from_integer(4.into()) - BigRational::from_integer(2.into())) * &four_t1))
        .mul(&c(&rr).add(&d));
    let den = c(&(BigRational::from_integer(4.into()) * t * &rr + &rr - &one)).sub(&c(&four_t1).mul(&d));
    let eight_rt = BigRational::from_integer(8.into()) * &rr * t;
    let pi_num = c(&(&eight_rt + &rr - &one)).sub(&d);
    let pi_den = c(&(&eight_rt + BigRational::from_integer(3.into()) * &rr - &one)).add(&d);
    let pi = pi_num.div(&pi_den)?;
    let r64: u64 = r.try_into().map_err(|_| Error::Parameter("R too large".into()))?;
    Ok(Some(num.div(&den)?.mul(&pi.powi(r64))))
}

/// `Some(true)` if the left-hand side is at least one, `None` outside the real domain.
fn lhs_at_least_one(k: u32, t: &BigRational, prec: u32) -> Result<Option<bool>> {
    let mut p = prec;
    loop {
        let Some(v) = vartheta_lhs(k, t, p)? else { return Ok(None) };
        match v.sub(&CertifiedReal::from_int(1, p)).sign() {
            Some(Ordering::Less) => return Ok(Some(false)),
            Some(_) => return Ok(Some(true)),
            _ if p >= MAX_PREC => return Err(Error::Budget(format!("vartheta inequality undecided at t = {t}"))),
            _ => p = (p * 2).min(MAX_PREC),
        }
    }
}

/// How `ceil(vartheta)` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarthetaSearch {
    /// Least integer `t` meeting the inequality, with `t - 1` failing it.
    LinearSearch,
    /// Already `8R > (R-1)^2`, so every real solution lies in `(0, 1)`.
    RealDomain,
}

/// `ceil(vartheta(k))` by a linear search from `t = 1`.
pub fn vartheta_ceil(k: u32, prec: u32) -> Result<(u64, VarthetaSearch)> {
    check_k(k)?;
    let cap = 1u64 << (k - 5);
    for t in 1..=cap {
        match lhs_at_least_one(k, &BigRational::from_integer(t.into()), prec)? {
            Some(true) => return Ok((t, VarthetaSearch::LinearSearch)),
            Some(false) => {}
            None if t == 1 => return Ok((1, VarthetaSearch::RealDomain)),
            None => {
                return Err(Error::Invariant(format!("vartheta search left the real domain at k = {k}, t = {t}")));
            }
        }
    }
    Err(Error::Invariant(format!("vartheta search found no t <= 2^(k-5) at k = {k}")))
}

fn dyadic_rat(d: &Dyadic) -> BigRational {
    d.to_rational()
}

/// An enclosure of `vartheta(k)` from bisection inside `(ceil - 1, ceil]`,
/// or inside `(0, (R-1)^2 / (8R)]` when the real domain ends below one.
pub fn vartheta(k: u32, prec: u32) -> Result<CertifiedReal> {
    let (ceil, how) = vartheta_ceil(k, prec)?;
    let r = 1i64 << (k - 4);
    let mut hi = match how {
        VarthetaSearch::LinearSearch => Dyadic::from_int(ceil),
        VarthetaSearch::RealDomain => {
            // Largest dyadic below (R-1)^2 / (8R) at 64 fractional bits.
            let edge = BigRational::new(BigInt::from((r - 1) * (r - 1)), BigInt::from(8 * r));
            Dyadic::from_rational(&edge, 64, false)
        }
    };
    if lhs_at_least_one(k, &dyadic_rat(&hi), prec)? != Some(true) {
        return Err(Error::Invariant(format!("vartheta bracket fails at its upper end for k = {k}")));
    }
    let mut lo = if ceil >= 2 {
        Dyadic::from_int(ceil - 1)
    } else {
        let mut j = 1;
        loop {
            let cand = Dyadic::pow2(-j);
            if lhs_at_least_one(k, &dyadic_rat(&cand), prec)? == Some(false) {
                break cand;
            }
            j += 1;
            if j > 64 {
                return Err(Error::Invariant(format!("no lower bracket for vartheta at k = {k}")));
            }
        }
    };
    if lhs_at_least_one(k, &dyadic_rat(&lo), prec)? != Some(false) {
        return Err(Error::Invariant(format!("vartheta bracket fails at its lower end for k = {k}")));
    }
    for _ in 0..VARTHETA_BITS {
        let mid = lo.add(&hi).shl(-1);
        match lhs_at_least_one(k, &dyadic_rat(&mid), prec) {
            Ok(Some(true)) => hi = mid,
            Ok(Some(false)) => lo = mid,
            Ok(None) => return Err(Error::Invariant("vartheta bisection left the real domain".into())),
            Err(Error::Budget(_)) => break,
            Err(e) => return Err(e),
        }
    }
    CertifiedReal::from_bounds(lo, hi, prec)
}

/// `2^(k-5) / ((k-2) ln 2 + ln(k-3) - 1/(2^(k-3) - 1)) + 1/2`.
pub fn vartheta_upper_bound(k: u32, prec: u32) -> Result<CertifiedReal> {
    let l2 = ln2(prec);
    let den = CertifiedReal::from_int(k - 2, prec)
        .mul(&l2)
        .add(&CertifiedReal::from_int(k - 3, prec).ln()?)
        .sub(&CertifiedReal::from_rational(&BigRational::new(BigInt::one(), (BigInt::one() << (k - 3)) - 1), prec));
    Ok(CertifiedReal::exact(Dyadic::pow2(k as i64 - 5), prec)
        .div(&den)?
        .add(&CertifiedReal::exact(Dyadic::pow2(-1), prec)))
}

/// `vartheta - (k-2)/(k-3) (4 vartheta + 1) 4^-k`, a strict lower bound on `theta_1`.
pub fn theta1_lower_bound(k: u32, vt: &CertifiedReal) -> Result<CertifiedReal> {
    let prec = vt.prec();
    let f = CertifiedReal::from_rational(&BigRational::new(BigInt::from(k - 2), BigInt::from(k - 3)), prec);
    let g = vt.shl(2).add(&CertifiedReal::from_int(1, prec));
    Ok(vt.sub(&f.mul(&g).shl(-2 * k as i64)))
}

/// Options for [`theta_family`].
#[derive(Clone, Copy, Debug)]
pub struct ThetaOptions {
    /// Run the full lifting scan for `theta` itself.
    pub full: bool,
    /// Last block scanned by the full scan; `None` scans to `2^(k-5) - 1`.
    pub max_block: Option<u64>,
    pub budget: Budget,
    pub prec: u32,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions { full: false, max_block: None, budget: Budget::default(), prec: 256 }
    }
}

/// All `theta` quantities for one `k`.
#[derive(Clone, Debug)]
pub struct ThetaRecord {
    pub k: u32,
    pub r: u64,
    pub theta2: u64,
    pub theta1: u64,
    /// `theta(k)`, when the full scan ran to completion.
    pub theta: Option<u64>,
    /// Known range of `theta(k)`: `[theta1, 2^(k-5)]` without a full scan.
    pub theta_range: (u64, u64),
    pub vartheta_ceil: u64,
    pub vartheta_search: VarthetaSearch,
    pub vartheta: CertifiedReal,
    pub vartheta_upper: CertifiedReal,
    pub theta1_lower: CertifiedReal,
}

/// Computes and cross-checks `theta_2 <= theta_1 <= theta <= 2^(k-5)`,
/// `theta_1 <= ceil(vartheta)`, the explicit upper bound on `vartheta` and the
/// strict lower bound on `theta_1` derived from `vartheta`.
pub fn theta_family(k: u32, opts: &ThetaOptions) -> Result<ThetaRecord> {
    check_k(k)?;
    let prec = opts.prec;
    let t2 = theta2(k, prec)?;
    let t1 = theta1(k, &opts.budget)?;
    let (vc, how) = vartheta_ceil(k, prec)?;
    let vt = vartheta(k, prec)?;
    let vb = vartheta_upper_bound(k, prec)?;
    let lower = theta1_lower_bound(k, &vt)?;
    let cap = 1u64 << (k - 5);
    let fail = |what: &str| Err(Error::Invariant(format!("{what} fails at k = {k}")));
    if t2 > t1 {
        return fail("theta_2 <= theta_1");
    }
    if t1 > vc {
        return fail("theta_1 <= ceil(vartheta)");
    }
    if vt.lt(&vb) != Some(true) {
        return fail("vartheta upper bound");
    }
    if lower.lt(&CertifiedReal::from_int(t1, prec)) != Some(true) {
        return fail("theta_1 lower bound from vartheta");
    }
    let theta = if opts.full {
        let scan = proper_scan(k, super::phi::phi_last(k), &ScanOptions { budget: opts.budget, max_block: opts.max_block })?;
        scan.theta()
    } else {
        None
    };
    if let Some(th) = theta {
        if th < t1 || th > cap {
            return fail("theta_1 <= theta <= 2^(k-5)");
        }
    }
    Ok(ThetaRecord {
        k,
        r: 1u64 << (k - 4),
        theta2: t2,
        theta1: t1,
        theta,
        theta_range: theta.map_or((t1, cap), |t| (t, t)),
        vartheta_ceil: vc,
        vartheta_search: how,
        vartheta: vt,
        vartheta_upper: vb,
        theta1_lower: lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_lower_bound() {
        assert_eq!(theta2(10, 128).unwrap(), 3);
        assert_eq!(theta2(13, 128).unwrap(), 16);
        assert_eq!(theta2(20, 128).unwrap(), 1244);
    }

    #[test]
    fn vartheta_small_k() {
        assert_eq!(vartheta_ceil(6, 128).unwrap(), (1, VarthetaSearch::RealDomain));
        assert_eq!(vartheta_ceil(10, 128).unwrap().0, 4);
        let v = vartheta(6, 128).unwrap();
        assert!(v.lo().to_f64() > 0.05 && v.hi().to_f64() < 0.2);
    }
}
