//! Exhaustive properness scans closed off by lifting, and the count
//! `Phi_k` of proper lengths in `[2^(k-1) + 1, 2^(2k-6) - 1]`.
//!
//! If `P_ue(S_{n,k})` minus its first-row term is increasing ("skip-proper"),
//! then `S_{n + 2^(k-1) u, k}` is proper and skip-proper for all `u >= 0`.
//! The scan walks blocks of `2^(k-1)` lengths and stops testing a residue
//! as soon as one of its lengths is skip-proper.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::intervals::maximal_intervals;
use crate::classifier::{check_proper, proper_shortcut, ugly_by_per, Budget, Route, Tri};
use crate::construction::CodeParams;
use crate::error::{param, Error, Result};

/// Options for [`proper_scan`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions {
    pub budget: Budget,
    /// Last block `t` to examine; lengths past it are left unscanned.
    pub max_block: Option<u64>,
}

/// Outcome of a lifting scan over `[2^(k-1) + 1, last]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperScan {
    pub k: u32,
    pub last: u64,
    /// Largest `n` whose properness is known; equals `last` when complete.
    pub covered: u64,
    /// Block after which every residue was skip-proper, if that happened.
    pub closed_at_block: Option<u64>,
    /// Every non-proper `n` in `[2^(k-1) + 1, covered]`, ascending.
    pub non_proper: Vec<u64>,
    /// Residues modulo `2^(k-1)` that never became skip-proper.
    pub open_residues: usize,
}

impl ProperScan {
    pub fn complete(&self) -> bool {
        self.covered == self.last || self.closed_at_block.is_some()
    }

    /// `theta(k)`, once every longer length is known to be proper: either the
    /// scan closed, or it covered everything below `2^(2k-6) - 3 * 2^(k-3) + 2`.
    pub fn theta(&self) -> Option<u64> {
        let k = self.k;
        let settled = self.closed_at_block.is_some()
            || (k >= 3 && self.complete() && self.covered + 3 * (1u64 << (k - 3)) > 1u64 << (2 * k - 6));
        if !settled {
            return None;
        }
        let half = 1u64 << (k - 1);
        Some(self.non_proper.last().map_or(1, |&n| n / half + 1))
    }
}

fn undecided(k: u32, n: u64) -> Error {
    Error::Budget(format!("properness undecided at (k, n) = ({k}, {n})"))
}

/// `(proper, skip_proper)` for one length.
fn status(k: u32, n: u64, budget: &Budget) -> Result<(bool, bool)> {
    if ugly_by_per(k, n)? {
        return Ok((false, false));
    }
    let skip = check_proper(k, n, true, Route::Auto, budget)?.value;
    if skip == Tri::Yes {
        return Ok((true, true));
    }
    if proper_shortcut(k, n)?.is_some() {
        return Ok((true, false));
    }
    match check_proper(k, n, false, Route::Auto, budget)?.value {
        Tri::Yes => Ok((true, false)),
        Tri::No => Ok((false, false)),
        Tri::Unknown => Err(undecided(k, n)),
    }
}

/// Properness of every `n` in `[2^(k-1) + 1, last]`.
pub fn proper_scan(k: u32, last: u64, opts: &ScanOptions) -> Result<ProperScan> {
    if !(2..=30).contains(&k) {
        return param(format!("scans need 2 <= k <= 30, got {k}"));
    }
    let half = 1u64 << (k - 1);
    if last <= half {
        return param("scan range is empty");
    }
    let mut lifted = vec![false; half as usize];
    let mut open = half as usize;
    let mut non_proper = Vec::new();
    let mut covered = half;
    let mut closed_at_block = None;
    let mut t = 1u64;
    while covered < last {
        if opts.max_block.is_some_and(|b| t > b) {
            break;
        }
        let end = (half * (t + 1)).min(last);
        for n in covered + 1..=end {
            let r = ((n - 1) % half) as usize;
            if lifted[r] {
                continue;
            }
            let (proper, skip) = status(k, n, &opts.budget)?;
            if !proper {
                non_proper.push(n);
            }
            if skip {
                lifted[r] = true;
                open -= 1;
            }
        }
        covered = end;
        if open == 0 {
            closed_at_block = Some(t);
            break;
        }
        t += 1;
    }
    if closed_at_block.is_some() {
        covered = last;
    }
    Ok(ProperScan { k, last, covered, closed_at_block, non_proper, open_residues: open })
}

/// Last length counted by `Phi_k`.
pub fn phi_last(k: u32) -> u64 {
    (1u64 << (2 * k - 6)) - 1
}

/// Non-proper lengths of one band of one block, as maximal runs.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct XSet {
    pub t: u64,
    pub m: u32,
    pub intervals: Vec<(u64, u64)>,
}

/// Whether a nonempty band-1 set contains its block's centre
/// `2^(k-1)(t-1) + n(k,1)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CentreObservation {
    pub t: u64,
    pub centre: u64,
    pub contains_centre: bool,
}

/// `Phi_k` with its lower bound and the non-proper sets behind it.
#[derive(Clone, Debug)]
pub struct PhiReport {
    pub k: u32,
    pub phi: u64,
    pub bound: u64,
    pub x_sets: Vec<XSet>,
    pub theta: Option<u64>,
    pub closed_at_block: Option<u64>,
    /// Empirical answer to whether each nonempty band-1 set holds its centre.
    pub centre_observations: Vec<CentreObservation>,
}

/// `ceil(17/21 * 2^(2k-6) - 55/3 * 2^(k-5))`.
pub fn phi_bound(k: u32) -> u64 {
    let v = BigRational::new(BigInt::from(17) << (2 * k - 6), BigInt::from(21))
        - BigRational::new(BigInt::from(55) << (k - 5), BigInt::from(3));
    v.ceil().to_integer().to_u64().expect("bound fits u64")
}

/// Groups non-proper lengths by block and band.
pub fn x_sets(k: u32, non_proper: &[u64]) -> Result<Vec<XSet>> {
    let mut groups: BTreeMap<(u64, u32), Vec<u64>> = BTreeMap::new();
    for &n in non_proper {
        let p = CodeParams::new(k, n)?;
        let m = p.m.ok_or_else(|| Error::Invariant(format!("Reed-Muller length {n} reported non-proper")))?;
        groups.entry((p.t, m)).or_default().push(n);
    }
    Ok(groups
        .into_iter()
        .map(|((t, m), ns)| XSet { t, m, intervals: maximal_intervals(&ns) })
        .collect())
}

/// `floor((k - 3) / 2)`, the band index separating the two counting regimes.
fn split_band(k: u32) -> u32 {
    (k - 3) / 2
}

/// Per-band counts `Phi_{t,k,m}` against their guaranteed values: above
/// `2^((k+1)/2) sqrt(t) - 1` for small `m` and `t`, and the whole band otherwise.
pub fn check_band_counts(k: u32, non_proper: &[u64]) -> Result<()> {
    let mut bad: BTreeMap<(u64, u32), u64> = BTreeMap::new();
    for &n in non_proper {
        let p = CodeParams::new(k, n)?;
        if let Some(m) = p.m {
            *bad.entry((p.t, m)).or_default() += 1;
        }
    }
    let split = split_band(k);
    for t in 1..(1u64 << (k - 5)) {
        for m in 1..k {
            let size = 1u64 << (k - m - 1);
            let phi = size - bad.get(&(t, m)).copied().unwrap_or(0);
            let small = m <= split && t + 1 <= 1u64 << (k - 2 * m - 3).min(63);
            let ok = if small {
                // (phi + 1)^2 > 2^(k+1) t
                BigInt::from(phi + 1).pow(2) > (BigInt::from(t) << (k + 1))
            } else {
                phi == size
            };
            if !ok {
                return Err(Error::Invariant(format!("band count Phi_(t={t},k={k},m={m}) = {phi} below its guarantee")));
            }
        }
    }
    Ok(())
}

/// The two closed sums over whole bands, compared with direct summation.
pub fn check_whole_band_sums(k: u32) -> Result<()> {
    let s = split_band(k) as i64;
    let kk = k as i64;
    let p2 = |e: i64| BigRational::from_integer(BigInt::one() << e as u64);
    let blocks = (1u64 << (k - 5)) - 1;
    let mut upper_direct = BigRational::from_integer(0.into());
    for m in (s + 1)..kk {
        upper_direct += p2(kk - m - 1) * BigRational::from_integer(blocks.into());
    }
    let upper_closed = p2(2 * kk - 6 - s) - p2(kk - 5) - p2(kk - 1 - s) + BigRational::one();
    let mut lower_direct = BigRational::from_integer(0.into());
    for m in 1..=s {
        let first = 1u64 << (kk - 2 * m - 3);
        let count = (1u64 << (k - 5)) - first;
        lower_direct += p2(kk - m - 1) * BigRational::from_integer(count.into());
    }
    let lower_closed = BigRational::new(3.into(), 7.into()) * p2(2 * kk - 6) - p2(2 * kk - 6 - s)
        + p2(2 * kk - 4 - 3 * s) / BigRational::from_integer(7.into());
    if upper_direct != upper_closed || lower_direct != lower_closed {
        return Err(Error::Invariant(format!("whole-band closed sums disagree at k = {k}")));
    }
    Ok(())
}

/// Computes `Phi_k` exactly and checks it against its lower bound.
pub fn phi(k: u32, opts: &ScanOptions) -> Result<PhiReport> {
    if !(6..=30).contains(&k) {
        return param(format!("Phi_k needs 6 <= k <= 30, got {k}"));
    }
    let last = phi_last(k);
    let scan = proper_scan(k, last, opts)?;
    if !scan.complete() {
        return Err(Error::Budget(format!("scan for Phi_{k} stopped at n = {}", scan.covered)));
    }
    let first = (1u64 << (k - 1)) + 1;
    let phi = last - first + 1 - scan.non_proper.len() as u64;
    let bound = phi_bound(k);
    if phi < bound {
        return Err(Error::Invariant(format!("Phi_{k} = {phi} is below its bound {bound}")));
    }
    check_band_counts(k, &scan.non_proper)?;
    check_whole_band_sums(k)?;
    let sets = x_sets(k, &scan.non_proper)?;
    let half = 1u64 << (k - 1);
    let centre = 5 * (1u64 << (k - 3));
    let centre_observations = sets
        .iter()
        .filter(|x| x.m == 1)
        .map(|x| {
            let c = half * (x.t - 1) + centre;
            CentreObservation {
                t: x.t,
                centre: c,
                contains_centre: x.intervals.iter().any(|&(a, b)| (a..=b).contains(&c)),
            }
        })
        .collect();
    Ok(PhiReport {
        k,
        phi,
        bound,
        x_sets: sets,
        theta: scan.theta(),
        closed_at_block: scan.closed_at_block,
        centre_observations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(phi_bound(9), 3023);
        assert_eq!(phi_bound(12), 209866);
        for k in 6..=12 {
            check_whole_band_sums(k).unwrap();
        }
    }

    #[test]
    fn k6_all_proper() {
        let r = phi(6, &ScanOptions::default()).unwrap();
        assert_eq!(r.phi, 31);
        assert!(r.x_sets.is_empty());
        assert_eq!(r.theta, Some(1));
    }
}
