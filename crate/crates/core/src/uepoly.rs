//! Undetected-error probability on the binary symmetric channel.
//!
//! For a code with weight distribution `A_w`,
//! `P_ue(p) = sum_w A_w p^w (1-p)^(n-w)`, and for its dual (the shortened
//! Hamming code with parity-check matrix `H_k(n)`),
//! `P_ue(p) = 2^-k (1 + sum_w A_w (1-2p)^w) - (1-p)^n`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::weights::{weight_distribution, WeightDistribution};

/// `sum count * p^weight * (1-p)^(n-weight)`, weights strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UePolynomial {
    pub n: u64,
    pub k: u32,
    terms: Vec<(BigUint, u64)>,
}

impl UePolynomial {
    pub fn from_distribution(d: &WeightDistribution) -> Self {
        UePolynomial {
            n: d.n,
            k: d.k,
            terms: d.iter().map(|(w, c)| (c.clone(), w)).collect(),
        }
    }

    pub fn from_terms(k: u32, n: u64, mut terms: Vec<(BigUint, u64)>) -> Result<Self> {
        terms.sort_by_key(|t| t.1);
        if terms.windows(2).any(|w| w[0].1 == w[1].1) {
            return param("repeated weight in term list");
        }
        if terms.iter().any(|(c, w)| c.is_zero() || *w > n) {
            return param("terms need positive counts and weights at most n");
        }
        Ok(UePolynomial { n, k, terms })
    }

    /// `(count, weight)` pairs in increasing weight order.
    pub fn terms(&self) -> &[(BigUint, u64)] {
        &self.terms
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.terms.first().map(|t| t.1)
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.terms.last().map(|t| t.1)
    }

    /// Exact value at a rational `p`.
    pub fn evaluate(&self, p: &BigRational) -> Result<BigRational> {
        check_unit(p)?;
        let q = BigRational::one() - p;
        Ok(self
            .terms
            .iter()
            .map(|(c, w)| term_value(c, *w, self.n, p, &q))
            .fold(BigRational::zero(), |a, b| a + b))
    }

    /// Exact value of the single term with index `i`.
    pub fn evaluate_term(&self, i: usize, p: &BigRational) -> Result<BigRational> {
        check_unit(p)?;
        let Some((c, w)) = self.terms.get(i) else {
            return param(format!("term index {i} out of range"));
        };
        Ok(term_value(c, *w, self.n, p, &(BigRational::one() - p)))
    }
}

fn check_unit(p: &BigRational) -> Result<()> {
    if p.is_negative() || p > &BigRational::one() {
        return param("p must lie in [0, 1]");
    }
    Ok(())
}

fn term_value(c: &BigUint, w: u64, n: u64, p: &BigRational, q: &BigRational) -> BigRational {
    let c = BigRational::from_integer(BigInt::from(c.clone()));
    c * pow_rat(p, w) * pow_rat(q, n - w)
}

/// Exact power with a `u64` exponent.
pub fn pow_rat(x: &BigRational, e: u64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let e32 = u32::try_from(e).expect("exponent fits u32 at supported lengths");
    BigRational::new(
        num_traits::pow(x.numer().clone(), e32 as usize),
        num_traits::pow(x.denom().clone(), e32 as usize),
    )
}

/// Symbolic polynomial of `S_{n,k}`.
pub fn pue_of(k: u32, n: u64) -> Result<UePolynomial> {
    Ok(UePolynomial::from_distribution(&weight_distribution(k, n)?))
}

/// The dual's undetected-error polynomial written through the primal terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualUePolynomial {
    pub primal: UePolynomial,
}

impl DualUePolynomial {
    pub fn new(primal: UePolynomial) -> Self {
        DualUePolynomial { primal }
    }

    /// Exact value for `0 <= p <= 1/2`.
    pub fn evaluate(&self, p: &BigRational) -> Result<BigRational> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if p.is_negative() || p > &half {
            return param("p must lie in [0, 1/2] for the dual form");
        }
        let one = BigRational::one();
        let s = &one - p * BigRational::from_integer(BigInt::from(2));
        let sum = self
            .primal
            .terms
            .iter()
            .map(|(c, w)| BigRational::from_integer(BigInt::from(c.clone())) * pow_rat(&s, *w))
            .fold(one.clone(), |a, b| a + b);
        let scale = BigRational::new(BigInt::one(), BigInt::one() << self.primal.k);
        Ok(sum * scale - pow_rat(&(&one - p), self.primal.n))
    }
}

/// Exact dual value `P_ue(C_{n,n-k}, p)`.
pub fn evaluate_dual(k: u32, n: u64, p: &BigRational) -> Result<BigRational> {
    DualUePolynomial::new(pue_of(k, n)?).evaluate(p)
}

/// Exact `P_ue` of a code given its full distribution including `A_0` at index 0.
pub fn pue_from_full_distribution(a: &[BigUint], p: &BigRational) -> Result<BigRational> {
    check_unit(p)?;
    let n = (a.len() - 1) as u64;
    let q = BigRational::one() - p;
    Ok(a.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| term_value(c, w as u64, n, p, &q))
        .fold(BigRational::zero(), |x, y| x + y))
}

/// `log2` of a positive rational to double precision.
pub fn log2_rational(r: &BigRational) -> f64 {
    if !r.is_positive() {
        return f64::NEG_INFINITY;
    }
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

fn log2_bigint(v: &BigInt) -> f64 {
    let b = v.bits();
    let keep = b.min(62);
    let top = (v.abs() >> (b - keep)).to_f64().unwrap_or(1.0);
    top.log2() + (b - keep) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn terms_320() {
        let p = pue_of(9, 320).unwrap();
        let t: Vec<(u64, u64)> = p.terms().iter().map(|(c, w)| (c.to_u64().unwrap(), *w)).collect();
        assert_eq!(t, vec![(2, 128), (504, 160), (4, 192), (1, 256)]);
    }

    #[test]
    fn endpoint_values() {
        let p = pue_of(5, 27).unwrap();
        assert!(p.evaluate(&r(0, 1)).unwrap().is_zero());
        assert_eq!(p.evaluate(&r(1, 2)).unwrap(), r(31, 1) / pow_rat(&r(2, 1), 27));
        assert!(p.evaluate(&r(3, 2)).is_err());
    }

    #[test]
    fn dual_vanishes_at_zero() {
        assert!(evaluate_dual(5, 27, &r(0, 1)).unwrap().is_zero());
        assert!(evaluate_dual(5, 27, &r(3, 4)).is_err());
    }

    #[test]
    fn log2_conversion() {
        assert!((log2_rational(&r(1, 1024)) + 10.0).abs() < 1e-12);
        assert!((log2_rational(&r(3, 1)) - 3f64.log2()).abs() < 1e-12);
    }
}
