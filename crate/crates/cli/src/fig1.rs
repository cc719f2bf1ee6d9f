//! Plot data for `P_ue` of one code against the level `2^(k-n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use simplexdet_core::uepoly::{log2_rational, pow_rat, pue_of, UePolynomial};
use simplexdet_core::{Error, Result};

/// Bracket width for the crossings, in `p`.
pub const BRACKET: f64 = 1e-4;
/// Grid used to locate sign changes before bisection.
const GRID: i64 = 2000;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn level(poly: &UePolynomial) -> BigRational {
    pow_rat(&half(), poly.n - poly.k as u64)
}

fn to_f64(r: &BigRational) -> f64 {
    // p lies in [0, 1], so a 53-bit quotient of the scaled numerator is exact enough.
    let scaled = (r * BigRational::from_integer(BigInt::one() << 60u32)).floor().to_integer();
    num_traits::ToPrimitive::to_f64(&scaled).unwrap_or(0.0) / (1u64 << 60) as f64
}

/// CSV of `p`, `log2 P_ue`, `log2` of every term and of the level, at
/// `p = i / (2 samples)` for `i = 1..=samples`.
pub fn fig1_csv(k: u32, n: u64, samples: u64) -> Result<String> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let poly = pue_of(k, n)?;
    let lvl = log2_rational(&level(&poly));
    let mut out = String::from("p,log2_total");
    for (c, w) in poly.terms() {
        out.push_str(&format!(",log2_term_{c}x{w}"));
    }
    out.push_str(",log2_level\n");
    for i in 1..=samples {
        let p = BigRational::new(BigInt::from(i), BigInt::from(2 * samples));
        out.push_str(&format!("{:.8},{:.6}", to_f64(&p), log2_rational(&poly.evaluate(&p)?)));
        for j in 0..poly.terms().len() {
            out.push_str(&format!(",{:.6}", log2_rational(&poly.evaluate_term(j, &p)?)));
        }
        out.push_str(&format!(",{lvl:.6}\n"));
    }
    Ok(out)
}

/// Where the curve meets the level, bracketed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    /// True where the total rises through the level.
    pub upward: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig1Summary {
    pub k: u32,
    pub n: u64,
    /// `log2 P_ue(1/2)` and its exact value `log2(2^k - 1) - n`.
    pub log2_at_half: f64,
    pub log2_at_half_exact: f64,
    /// Where the two lowest-weight terms are equal.
    pub term_switch: Option<Crossing>,
    /// Where the other terms together reach 1% of the lowest-weight term.
    pub visible_remainder: Option<Crossing>,
    pub crossings: Vec<Crossing>,
}

/// Sign changes of `f` on the grid `(0, 1/2]`, each bisected to `BRACKET`.
fn roots<F>(mut f: F) -> Result<Vec<Crossing>>
where
    F: FnMut(&BigRational) -> Result<BigRational>,
{
    let mut out = Vec::new();
    let at = |i: i64| BigRational::new(BigInt::from(i), BigInt::from(2 * GRID));
    let mut prev = f(&at(1))?;
    for i in 2..=GRID {
        let cur = f(&at(i))?;
        if prev.is_positive() != cur.is_positive() && !cur.is_zero() {
            let (mut lo, mut hi) = (at(i - 1), at(i));
            let upward = cur.is_positive();
            while to_f64(&(&hi - &lo)) > BRACKET / 4.0 {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                if f(&mid)?.is_positive() == upward {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(Crossing { lo: to_f64(&lo), hi: to_f64(&hi), upward });
        }
        prev = cur;
    }
    Ok(out)
}

pub fn fig1_summary(k: u32, n: u64) -> Result<Fig1Summary> {
    let poly = pue_of(k, n)?;
    let lvl = level(&poly);
    let crossings = roots(|p| Ok(poly.evaluate(p)? - &lvl))?;
    let two_terms = poly.terms().len() >= 2;
    let term_switch = if two_terms {
        roots(|p| Ok(poly.evaluate_term(1, p)? - poly.evaluate_term(0, p)?))?.into_iter().next()
    } else {
        None
    };
    let visible_remainder = if two_terms {
        let hundred = BigRational::from_integer(100.into());
        roots(|p| {
            let first = poly.evaluate_term(0, p)?;
            Ok((poly.evaluate(p)? - &first) * &hundred - first)
        })?
        .into_iter()
        .next()
    } else {
        None
    };
    Ok(Fig1Summary {
        k,
        n,
        log2_at_half: log2_rational(&poly.evaluate(&half())?),
        log2_at_half_exact: (((1u64 << k) - 1) as f64).log2() - n as f64,
        term_switch,
        visible_remainder,
        crossings,
    })
}
