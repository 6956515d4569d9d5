//! Exact binomial coefficients and a few big-integer helpers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `C(a, b)` with the convention `C(a, b) = 0` when `a < b` or `b < 0`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < b {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `log2(x)` for a positive big integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits in f64").log2()
    } else {
        let shift = bits - 900;
        (x >> shift).to_f64().expect("fits in f64").log2() + shift as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(4, 0), BigUint::one());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert!(binomial(2, 3).is_zero());
        assert!(binomial(3, -1).is_zero());
        assert!(binomial(-1, 0).is_zero());
        assert_eq!(binomial(60, 30), BigUint::from(118_264_581_564_861_424u64));
    }

    #[test]
    fn pascal_rule() {
        for a in 1..40 {
            for b in 1..a {
                assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
            }
        }
    }

    #[test]
    fn log2_of_large_powers() {
        let x = BigUint::one() << 1500u32;
        assert!((log2_big(&x) - 1500.0).abs() < 1e-9);
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
    }
}
