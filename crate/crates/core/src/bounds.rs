//! Closed-form diameter and dimension bounds, evaluated exactly where the
//! formula is rational and to `f64` precision otherwise.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::transport::Rational;

/// A bound value: exact when the formula is rational at these inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Exact(Rational),
    Real(f64),
}

impl BoundValue {
    pub fn to_f64(self) -> f64 {
        match self {
            BoundValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            BoundValue::Real(x) => x,
        }
    }
}

/// `n / (K + 1)`.
pub fn bound_pair_diameter(n: usize, k: usize) -> Rational {
    Rational::new(n as i64, k as i64 + 1)
}

/// `sum_{i <= r} C(n, i)`.
pub fn hamming_ball_size(n: usize, r: usize) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 1..=r.min(n) {
        term = term * BigUint::from(n - i + 1) / BigUint::from(i);
        total += &term;
    }
    total
}

/// `log2` of a positive big integer from its top 64 bits.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in 64 bits") as f64;
    top.log2() + shift as f64
}

/// The Hamming-ball dimension bound for a diameter bound `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionBound {
    pub n: usize,
    pub radius: usize,
    pub ball_size: BigUint,
    pub log2_ball: f64,
    /// `(n log2(K+1) + n / ln 2) / (K+1)`, when `K` was supplied.
    pub closed_form: Option<f64>,
}

impl DimensionBound {
    /// Exact test `2^dim <= |ball|`.
    pub fn admits(&self, dim: usize) -> bool {
        (BigUint::one() << dim) <= self.ball_size
    }
}

pub fn bound_dimension(n: usize, radius: usize, k: Option<usize>) -> Result<DimensionBound> {
    if radius > n {
        return Err(Error::out_of_range(
            "diameter bound",
            radius,
            format!("0..={n}"),
        ));
    }
    let ball_size = hamming_ball_size(n, radius);
    let log2_ball = if radius == n {
        n as f64
    } else {
        log2_biguint(&ball_size)
    };
    Ok(DimensionBound {
        n,
        radius,
        ball_size,
        log2_ball,
        closed_form: k.map(|k| dimension_closed_form(n, k)),
    })
}

/// `(n log2(K+1) + n / ln 2) / (K+1)`.
pub fn dimension_closed_form(n: usize, k: usize) -> f64 {
    let nf = n as f64;
    let k1 = k as f64 + 1.0;
    (nf * k1.log2() + nf / std::f64::consts::LN_2) / k1
}

/// `H(x) = x log2(1/x) + (1-x) log2(1/(1-x))`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&x),
        "entropy argument {x} outside [0, 1]"
    );
    let part = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    part(x) + part(1.0 - x)
}

/// `n H(1 / (K+1))` for `K >= 1`.
pub fn entropy_dimension_bound(n: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Hypothesis("entropy bound needs K >= 1".into()));
    }
    Ok(n as f64 * binary_entropy(1.0 / (k as f64 + 1.0)))
}

/// `2n / sqrt(sigma)`: exact when `sigma` is a perfect square.
pub fn bound_regular_ltc(n: usize, sigma: usize) -> Result<BoundValue> {
    if sigma == 0 {
        return Err(Error::out_of_range("sigma", 0, ">= 1"));
    }
    let root = sigma.sqrt();
    Ok(if root * root == sigma {
        BoundValue::Exact(Rational::new(2 * n as i64, root as i64))
    } else {
        BoundValue::Real(2.0 * n as f64 / (sigma as f64).sqrt())
    })
}

/// Exact test `dim <= 2n / sqrt(sigma)`, i.e. `dim^2 sigma <= 4 n^2`.
pub fn regular_ltc_admits(n: usize, sigma: usize, dim: usize) -> bool {
    let (n, sigma, dim) = (n as u128, sigma as u128, dim as u128);
    dim * dim * sigma <= 4 * n * n
}

/// Asymptotic formula values with unit hidden constant; never certifying.
#[derive(Debug, Clone, PartialEq)]
pub struct Asymptotics {
    /// `n^((q-2)/(q-1))`, covering radius order for a `q`-LCC.
    pub lcc_covering_radius: f64,
    /// `n^((q-2)/(q-1)) (log2 n)^(1/(q-1))`.
    pub lcc_dimension: f64,
    /// `sqrt(n)`, perfect 3-LCC dimension order.
    pub perfect_lcc_dimension: f64,
    /// `log2(ceil(sigma/p)) / ceil(sigma/p) * n`, when `sigma > p`.
    pub bounded_repetition_dimension: Option<f64>,
    /// `log2(sigma) / sqrt(sigma) * n`, the earlier regular LTC bound.
    pub regular_ltc_prior: Option<f64>,
}

pub fn bound_asymptotics(n: usize, q: usize, sigma: usize, p: usize) -> Result<Asymptotics> {
    if q < 2 {
        return Err(Error::out_of_range("q", q, ">= 2"));
    }
    let nf = n as f64;
    let qf = q as f64;
    let ratio = (sigma > p && p > 0).then(|| sigma.div_ceil(p) as f64);
    Ok(Asymptotics {
        lcc_covering_radius: nf.powf((qf - 2.0) / (qf - 1.0)),
        lcc_dimension: nf.powf((qf - 2.0) / (qf - 1.0)) * nf.log2().powf(1.0 / (qf - 1.0)),
        perfect_lcc_dimension: nf.sqrt(),
        bounded_repetition_dimension: ratio.map(|r| r.log2() / r * nf),
        regular_ltc_prior: (sigma >= 1).then(|| (sigma as f64).log2() / (sigma as f64).sqrt() * nf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_diameter_examples() {
        assert_eq!(bound_pair_diameter(3, 1), Rational::new(3, 2));
        assert_eq!(bound_pair_diameter(6, 1), Rational::from_integer(3));
        assert_eq!(bound_pair_diameter(9, 0), Rational::from_integer(9));
    }

    #[test]
    fn ball_examples() {
        let b = bound_dimension(6, 3, None).unwrap();
        assert_eq!(b.ball_size, BigUint::from(42u32));
        assert!((b.log2_ball - 42f64.log2()).abs() < 1e-12);
        assert!(b.admits(5) && !b.admits(6));
        assert_eq!(bound_dimension(10, 10, None).unwrap().log2_ball, 10.0);
        assert_eq!(bound_dimension(10, 0, None).unwrap().log2_ball, 0.0);
        assert!(bound_dimension(3, 4, None).is_err());
    }

    #[test]
    fn big_ball_log() {
        let b = bound_dimension(200, 200, None).unwrap();
        assert_eq!(b.ball_size, BigUint::one() << 200);
        let half = bound_dimension(200, 100, None).unwrap();
        assert!(half.log2_ball > 198.0 && half.log2_ball < 200.0);
        assert!((log2_biguint(&(BigUint::one() << 100)) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn chain_is_monotone() {
        for n in [7usize, 15, 40, 100] {
            for k in 1..n / 2 {
                let ball = bound_dimension(n, n / (k + 1), Some(k)).unwrap();
                let entropy = entropy_dimension_bound(n, k).unwrap();
                assert!(ball.log2_ball <= entropy + 1e-9, "n={n} k={k}");
                assert!(entropy <= ball.closed_form.unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!(entropy_dimension_bound(5, 0).is_err());
    }

    #[test]
    fn regular_ltc_examples() {
        assert_eq!(
            bound_regular_ltc(5, 25).unwrap(),
            BoundValue::Exact(Rational::from_integer(2))
        );
        let BoundValue::Real(x) = bound_regular_ltc(7, 3).unwrap() else {
            panic!("expected a real value");
        };
        assert!((x - 14.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(regular_ltc_admits(7, 3, 3));
        assert!(regular_ltc_admits(40, 19, 5));
        assert!(regular_ltc_admits(5, 25, 2) && !regular_ltc_admits(5, 25, 3));
        assert!(bound_regular_ltc(5, 0).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let a = bound_asymptotics(40, 3, 20, 5).unwrap();
        assert!((a.bounded_repetition_dimension.unwrap() - 20.0).abs() < 1e-12);
        let b = bound_asymptotics(100, 3, 0, 1).unwrap();
        assert!((b.lcc_dimension - 10.0 * 100f64.log2().sqrt()).abs() < 1e-9);
        assert_eq!(b.bounded_repetition_dimension, None);
    }
}
