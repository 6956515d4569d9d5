//! Constant-weight codes in the Manhattan metric over the integer simplex
//! `Δ^m_r = { x ∈ N^{m+1} : Σ x_i = r }`.
//!
//! Distances are half the L1 norm, which is integral on equal-weight points
//! and coincides with the duplication distance inside a descendant cone.

mod clique;
mod code;
mod sidon;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use clique::max_clique;
pub use code::{
    exact_max_code, exact_max_code_with_cap, greedy_code, greedy_code_with_cap, SimplexCode,
    DEFAULT_CLIQUE_POINT_CAP,
};
pub use sidon::{
    congruence_class_sizes, is_sidon, sidon_code, sidon_code_size, sidon_set, SidonSet,
};

use crate::capacity::{binary_entropy, stretched_entropy};
use crate::combinatorics::{binomial, log2_big};
use crate::error::{Error, Result};

/// Default bound on the number of simplex points materialized at once.
pub const DEFAULT_POINT_CAP: usize = 10_000_000;

/// A nonnegative integer vector in `N^{m+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(Vec<usize>);

impl SimplexPoint {
    pub fn new(coords: Vec<usize>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// Coordinate sum.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// `m`, one less than the number of coordinates.
    pub fn dimension(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Product order `self ≼ other`.
    pub fn is_below(&self, other: &SimplexPoint) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// `|Δ^m_r| = C(r + m, m)`.
pub fn simplex_size(m: usize, r: usize) -> BigUint {
    binomial((r + m) as i64, m as i64)
}

fn checked_size(m: usize, r: usize, cap: usize) -> Result<usize> {
    let size = simplex_size(m, r);
    match usize::try_from(&size) {
        Ok(s) if s <= cap => Ok(s),
        _ => Err(Error::ResourceCap { what: "simplex enumeration", cap }),
    }
}

/// All points of `Δ^m_r` in lexicographic order.
pub fn enumerate_simplex(m: usize, r: usize) -> Result<Vec<SimplexPoint>> {
    enumerate_simplex_with_cap(m, r, DEFAULT_POINT_CAP)
}

pub fn enumerate_simplex_with_cap(m: usize, r: usize, cap: usize) -> Result<Vec<SimplexPoint>> {
    let size = checked_size(m, r, cap)?;
    let mut out = Vec::with_capacity(size);
    let mut buf = vec![0usize; m + 1];
    fill(&mut buf, 0, r, &mut out);
    Ok(out)
}

fn fill(buf: &mut [usize], pos: usize, remaining: usize, out: &mut Vec<SimplexPoint>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(SimplexPoint(buf.to_vec()));
        return;
    }
    for v in 0..=remaining {
        buf[pos] = v;
        fill(buf, pos + 1, remaining - v, out);
    }
}

/// Half the Manhattan distance between two points of equal weight.
pub fn half_manhattan(u: &SimplexPoint, v: &SimplexPoint) -> Result<usize> {
    if u.0.len() != v.0.len() {
        return Err(Error::Dimension { expected: u.0.len(), got: v.0.len() });
    }
    let (wu, wv) = (u.weight(), v.weight());
    if wu != wv {
        return Err(Error::WeightMismatch { left: wu, right: wv });
    }
    Ok(half_manhattan_unchecked(u, v))
}

pub(crate) fn half_manhattan_unchecked(u: &SimplexPoint, v: &SimplexPoint) -> usize {
    u.0.iter().zip(&v.0).map(|(&a, &b)| a.abs_diff(b)).sum::<usize>() / 2
}

/// `d_{N,t}(m) = min { δ : C(t - δ + m, m) <= N }`.
pub fn required_distance(uncertainty: u64, t: usize, m: usize) -> usize {
    required_distance_big(&BigUint::from(uncertainty), t, m)
}

pub fn required_distance_big(uncertainty: &BigUint, t: usize, m: usize) -> usize {
    // Walk s = t - δ downward using C(s-1+m, m) = C(s+m, m) * s / (s+m).
    let mut s = t;
    let mut value = binomial((t + m) as i64, m as i64);
    let mut delta = 0;
    loop {
        if value <= *uncertainty {
            return delta;
        }
        if s == 0 {
            // C(m - 1, m) = 0 <= N.
            return delta + 1;
        }
        value = value * s / (s + m);
        s -= 1;
        delta += 1;
    }
}

fn check_bound_domain(uncertainty: &BigUint, m: usize) -> Result<()> {
    if m == 0 || *uncertainty <= BigUint::from(m) {
        return Err(Error::Domain(format!("bound requires N > m > 0 (m = {m})")));
    }
    Ok(())
}

/// `max{1, t - floor((log2 N)^2 / 4m)}`, an upper bound on `d_{N,t}(m)` for
/// `N > m > 0`.
pub fn required_distance_upper_log(uncertainty: u64, t: usize, m: usize) -> Result<usize> {
    required_distance_upper_log_big(&BigUint::from(uncertainty), t, m)
}

pub fn required_distance_upper_log_big(uncertainty: &BigUint, t: usize, m: usize) -> Result<usize> {
    check_bound_domain(uncertainty, m)?;
    let l = log2_big(uncertainty);
    let reduction = (l * l / (4.0 * m as f64)).floor();
    let reduction = if reduction >= t as f64 { t } else { reduction as usize };
    Ok((t - reduction).max(1))
}

/// `min { δ <= t : 𝓗(1 + (t-δ)/m) <= log2(N)/m }`, an upper bound on
/// `d_{N,t}(m)` for `N > m > 0`.
pub fn required_distance_upper_entropy(uncertainty: u64, t: usize, m: usize) -> Result<usize> {
    required_distance_upper_entropy_big(&BigUint::from(uncertainty), t, m)
}

pub fn required_distance_upper_entropy_big(
    uncertainty: &BigUint,
    t: usize,
    m: usize,
) -> Result<usize> {
    check_bound_domain(uncertainty, m)?;
    let budget = log2_big(uncertainty) / m as f64;
    let mf = m as f64;
    Ok((0..=t)
        .find(|&delta| {
            let x = 1.0 + (t - delta) as f64 / mf;
            stretched_entropy(x).expect("x >= 1") <= budget
        })
        .unwrap_or(t))
}

/// Size of the half-Manhattan ball of radius `d` around a point whose
/// coordinates are all at least `d`:
/// `Σ_j C(m, j) C(d, j) C(d + m - j, d)`.
pub fn ball_size(m: usize, d: usize) -> BigUint {
    (0..=m.min(d))
        .map(|j| {
            binomial(m as i64, j as i64)
                * binomial(d as i64, j as i64)
                * binomial((d + m - j) as i64, d as i64)
        })
        .sum()
}

/// Counts `{ y ∈ Δ^m_r : half_manhattan(y, center) <= d }` by enumeration.
pub fn ball_size_bruteforce(m: usize, r: usize, center: &SimplexPoint, d: usize) -> Result<usize> {
    if center.0.len() != m + 1 {
        return Err(Error::Dimension { expected: m + 1, got: center.0.len() });
    }
    if center.weight() != r {
        return Err(Error::WeightMismatch { left: r, right: center.weight() });
    }
    Ok(enumerate_simplex(m, r)?
        .iter()
        .filter(|y| half_manhattan_unchecked(y, center) <= d)
        .count())
}

/// `(μ + ρ) H(1 / (1 + ρ/μ))` in bits: the growth rate of the best fixed-distance
/// codes in `Δ^{μn}_{ρn}`.
pub fn asymptotic_simplex_rate(mu: f64, rho: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) || !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("need mu in (0,1) and rho > 0, got ({mu}, {rho})")));
    }
    Ok((mu + rho) * binary_entropy(1.0 / (1.0 + rho / mu))?)
}
