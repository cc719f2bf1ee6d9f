//! Where the minimum-weight criterion fires inside `[2^(k-1), 2^k - 1]`.

use num_bigint::BigInt;

use super::kofm::certified_ceil;
use crate::certified::{ln2, CertifiedReal};
use crate::classifier::ugly_by_per;
use crate::construction::{band_centre, band_of};
use crate::error::{param, Error, Result};

/// Collapses a sorted list of integers into maximal runs.
pub fn maximal_intervals(ns: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &n in ns {
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == n => *hi = n,
            _ => out.push((n, n)),
        }
    }
    out
}

/// Maximal runs of `n` in one band that satisfy the criterion.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BandRanges {
    pub m: u32,
    pub intervals: Vec<(u64, u64)>,
}

/// Every `n` in `[from, to]` for which the minimum-weight term alone
/// exceeds `2^(k-n)`.
pub fn per_scan(k: u32, from: u64, to: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in from..=to {
        if ugly_by_per(k, n)? {
            out.push(n);
        }
    }
    Ok(out)
}

/// The criterion's ranges over `[2^(k-1) + 1, 2^k - 1]`, grouped by band.
pub fn per_ranges(k: u32) -> Result<Vec<BandRanges>> {
    if !(2..=40).contains(&k) {
        return param("per ranges need 2 <= k <= 40");
    }
    let hits = per_scan(k, (1u64 << (k - 1)) + 1, (1u64 << k) - 1)?;
    let mut out: Vec<BandRanges> = Vec::new();
    for (lo, hi) in maximal_intervals(&hits) {
        // Runs never straddle bands: the power-gap ends are proper.
        let m = band_of(k, lo).expect("inside a band");
        if band_of(k, hi) != Some(m) {
            return Err(Error::Invariant(format!("criterion run [{lo}, {hi}] crosses a band end")));
        }
        match out.last_mut() {
            Some(b) if b.m == m => b.intervals.push((lo, hi)),
            _ => out.push(BandRanges { m, intervals: vec![(lo, hi)] }),
        }
    }
    Ok(out)
}

/// The run of the criterion around the band centre `n(k,m)` and the
/// closed-form bounds on its ends.
#[derive(Clone, Debug)]
pub struct IntervalReport {
    pub k: u32,
    pub m: u32,
    pub centre: u64,
    pub b1: u64,
    pub b2: u64,
    /// `b_i - (2^k - 2^(k-m))`.
    pub beta1: u64,
    pub beta2: u64,
    pub gamma1: CertifiedReal,
    pub gamma2: CertifiedReal,
    pub ceil_gamma1: u64,
    pub ceil_gamma2: u64,
}

/// `(k-m) ln 2 * sign + sqrt((k-m)^2 ln^2 2 + 2 (k-m) len ln 2)`.
fn gamma(k: u32, m: u32, len: u64, sign: i64, prec: u32) -> Result<CertifiedReal> {
    let a = CertifiedReal::from_int(k as i64 - m as i64, prec).mul(&ln2(prec));
    let inner = a.square().add(&a.mul(&CertifiedReal::from_int(BigInt::from(len) * 2, prec)));
    let s = inner.sqrt()?;
    Ok(if sign > 0 { s.add(&a) } else { s.sub(&a) })
}

/// `gamma_1(k,m)` and `gamma_2(k,m)`.
pub fn gammas(k: u32, m: u32, prec: u32) -> Result<(CertifiedReal, CertifiedReal)> {
    let full = 1u64 << k;
    Ok((
        gamma(k, m, full - (1u64 << (k - m)), 1, prec)?,
        gamma(k, m, full - (1u64 << (k - m - 1)), -1, prec)?,
    ))
}

/// The criterion's run through `n(k,m)`, or `None` when it fails at
/// `n(k,m)` itself (that is, when `k < K(m)`).
///
/// The closed-form bounds `beta1 <= ceil(gamma1)` and
/// `beta2 >= 2^(k-m-1) - ceil(gamma2)` are checked on the result.
pub fn per_interval(k: u32, m: u32, prec: u32) -> Result<Option<IntervalReport>> {
    let centre = band_centre(k, m)?;
    if !ugly_by_per(k, centre)? {
        return Ok(None);
    }
    let lowest = (1u64 << (k - 1)) + 1;
    let highest = (1u64 << k) - 1;
    let mut b1 = centre;
    while b1 > lowest && ugly_by_per(k, b1 - 1)? {
        b1 -= 1;
    }
    let mut b2 = centre;
    while b2 < highest && ugly_by_per(k, b2 + 1)? {
        b2 += 1;
    }
    let left = (1u64 << k) - (1u64 << (k - m));
    let (gamma1, gamma2) = gammas(k, m, prec)?;
    let c1 = certified_ceil(prec, |p| gammas(k, m, p).map(|g| g.0))?;
    let c2 = certified_ceil(prec, |p| gammas(k, m, p).map(|g| g.1))?;
    let ceil_gamma1: u64 = c1.try_into().map_err(|_| Error::Parameter("gamma out of range".into()))?;
    let ceil_gamma2: u64 = c2.try_into().map_err(|_| Error::Parameter("gamma out of range".into()))?;
    let beta1 = b1 - left;
    let beta2 = b2 - left;
    if beta1 > ceil_gamma1 || beta2 + ceil_gamma2 < (1u64 << (k - m - 1)) {
        return Err(Error::Invariant(format!("criterion run at (k, m) = ({k}, {m}) breaks its gamma bounds")));
    }
    Ok(Some(IntervalReport { k, m, centre, b1, b2, beta1, beta2, gamma1, gamma2, ceil_gamma1, ceil_gamma2 }))
}

/// `k + 2^((k+5)/2) / 3 * sqrt(k^3 ln 2)`, an upper bound on the number of
/// satisfactory lengths in `[2^(k-1), 2^k - 1]`.
pub fn nk_bound(k: u32, prec: u32) -> Result<CertifiedReal> {
    let kk = CertifiedReal::from_int(k, prec);
    let root = kk.powi(3).mul(&ln2(prec)).sqrt()?;
    let pow = CertifiedReal::exact(crate::certified::Dyadic::pow2(k as i64 + 5), prec).sqrt()?;
    Ok(kk.add(&pow.mul(&root).div(&CertifiedReal::from_int(3, prec))?))
}

/// Number of `n` in `[2^(k-1), 2^k - 1]` where the criterion does not fire,
/// an upper bound on the number of satisfactory lengths there.
pub fn nk_count(k: u32) -> Result<u64> {
    let lo = 1u64 << (k - 1);
    let hi = (1u64 << k) - 1;
    Ok(hi - lo + 1 - per_scan(k, lo, hi)?.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs() {
        assert_eq!(maximal_intervals(&[1, 2, 3, 5, 7, 8]), vec![(1, 3), (5, 5), (7, 8)]);
    }

    #[test]
    fn k9_centre_run() {
        let r = per_interval(9, 1, 128).unwrap().unwrap();
        assert_eq!((r.b1, r.b2, r.beta1, r.ceil_gamma1), (315, 324, 59, 60));
    }
}
