//! Entropy helpers, the `(0, k-1)`-RLL constraint graph and its Perron data,
//! and the rate function `R(γ)` of codes built from typical roots plus simplex
//! codes inside their cones.
//!
//! Rate-side functions need `kθ > 1`; since `θ < π₁ < 1` this excludes `k = 1`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dupcore::{DupParams, Word};
use crate::error::{Error, Result};
use crate::simplex::{required_distance_big, required_distance_upper_log_big};

/// Iteration limit of the fixed-point solver.
pub const MAX_FIXED_POINT_ITERATIONS: usize = 500;

/// Default stopping tolerance of the fixed-point solver.
pub const DEFAULT_TOLERANCE: f64 = 1e-14;

/// Gap between `π₁` and the default weight fraction `θ`.
pub const DEFAULT_THETA_MARGIN: f64 = 0.01;

fn xlog2x(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary entropy needs p in [0, 1], got {p}")));
    }
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// `H_q(ξ) = ξ log_q (q-1) - ξ log_q ξ - (1-ξ) log_q (1-ξ)`.
pub fn q_ary_entropy(xi: f64, q: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&xi) || q < 2 {
        return Err(Error::Domain(format!("q-ary entropy needs xi in [0, 1] and q >= 2, got xi={xi} q={q}")));
    }
    let lq = f64::from(q).log2();
    Ok((xi * f64::from(q - 1).log2() - xlog2x(xi) - xlog2x(1.0 - xi)) / lq)
}

/// `𝓗(x) = x H(1/x)` for `x >= 1`, the exponent of `C(a, b)` in terms of `a/b`.
pub fn stretched_entropy(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("stretched entropy needs finite x >= 1, got {x}")));
    }
    Ok(x * binary_entropy(1.0 / x)?)
}

/// `x^(k+1) - q x^k + (q-1)`, whose root in `(q-1, q)` is the Perron eigenvalue.
fn perron_polynomial(x: f64, q: f64, k: usize) -> f64 {
    x.powi(k as i32) * (x - q) + (q - 1.0)
}

/// Largest eigenvalue of the `(0, k-1)`-RLL adjacency matrix `T_q(k-1)`.
///
/// For `k = 1` the matrix is `[q-1]` and the eigenvalue is returned exactly;
/// otherwise the polynomial root is bisected on `(q-1, q)` to width below `1e-12`.
pub fn perron_lambda(params: DupParams) -> f64 {
    let q = f64::from(params.q());
    let k = params.k();
    if k == 1 {
        return q - 1.0;
    }
    let (mut lo, mut hi) = (q - 1.0, q);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if perron_polynomial(mid, q, k) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `log_q λ`, the capacity of the irreducible words.
pub fn irreducible_capacity(params: DupParams) -> f64 {
    perron_lambda(params).log2() / f64::from(params.q()).log2()
}

/// Stationary probability of the "last symbol nonzero" state,
/// `(λ - 1) / (λ - k(q - λ))`.
pub fn pi1(params: DupParams) -> Result<f64> {
    if params.k() < 2 {
        return Err(Error::Degenerate(format!(
            "the weight-fraction formula needs k >= 2 ({params})"
        )));
    }
    let lambda = perron_lambda(params);
    let (q, k) = (f64::from(params.q()), params.k() as f64);
    Ok((lambda - 1.0) / (lambda - k * (q - lambda)))
}

/// The constraint graph of `(0, k-1)`-RLL words with its maxentropic chain.
///
/// State `j` (0-based here) means the word currently ends in exactly `j` zeros;
/// every nonzero symbol leads back to state 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintGraph {
    pub params: DupParams,
    pub lambda: f64,
    pub adjacency: Vec<Vec<u32>>,
    pub right_eig: Vec<f64>,
    pub left_eig: Vec<f64>,
    pub transition: Vec<Vec<f64>>,
    pub stationary: Vec<f64>,
}

impl ConstraintGraph {
    pub fn build(params: DupParams) -> Self {
        let (q, k) = (params.q(), params.k());
        let lambda = perron_lambda(params);
        let qm1 = f64::from(q - 1);

        let adjacency: Vec<Vec<u32>> = (0..k)
            .map(|i| (0..k).map(|j| if j == 0 { q - 1 } else { u32::from(j == i + 1) }).collect())
            .collect();

        // v_j = λ^j - (q-1) Σ_{i<j} λ^i and w_j = λ^(k-1-j).
        let right_eig: Vec<f64> = (0..k)
            .map(|j| {
                let geometric: f64 = (0..j).map(|i| lambda.powi(i as i32)).sum();
                lambda.powi(j as i32) - qm1 * geometric
            })
            .collect();
        let left_eig: Vec<f64> = (0..k).map(|j| lambda.powi((k - 1 - j) as i32)).collect();

        let transition: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| f64::from(adjacency[i][j]) * right_eig[j] / (lambda * right_eig[i]))
                    .collect()
            })
            .collect();

        let weights: Vec<f64> = left_eig.iter().zip(&right_eig).map(|(w, v)| w * v).collect();
        let total: f64 = weights.iter().sum();
        let stationary = weights.iter().map(|w| w / total).collect();

        Self { params, lambda, adjacency, right_eig, left_eig, transition, stationary }
    }

    /// Stationary weight of state 0, i.e. the long-run fraction of nonzero symbols.
    pub fn pi1(&self) -> f64 {
        self.stationary[0]
    }

    /// Largest `|Σ_j Q_ij - 1|` over rows.
    pub fn row_sum_error(&self) -> f64 {
        self.transition
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest coordinate of `|πᵀQ - πᵀ|`.
    pub fn stationarity_error(&self) -> f64 {
        let k = self.stationary.len();
        (0..k)
            .map(|j| {
                let flow: f64 = (0..k).map(|i| self.stationary[i] * self.transition[i][j]).sum();
                (flow - self.stationary[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// A `(0, k-1)`-RLL word of the given length drawn by walking the maxentropic
/// chain from its stationary distribution.
pub fn sample_rll(params: DupParams, length: usize, seed: u64) -> Word {
    let graph = ConstraintGraph::build(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |probs: &[f64], rng: &mut ChaCha8Rng| {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    };
    let q = params.q();
    let mut state = pick(&graph.stationary, &mut rng);
    let mut symbols = Vec::with_capacity(length);
    for _ in 0..length {
        let next = pick(&graph.transition[state], &mut rng);
        if next == 0 {
            symbols.push(rng.gen_range(1..q));
        } else {
            symbols.push(0);
        }
        state = next;
    }
    Word::new(params, symbols).expect("symbols are below q")
}

fn check_rate_domain(theta: f64, params: DupParams) -> Result<()> {
    if params.k() < 2 {
        return Err(Error::Degenerate(format!(
            "rate analysis needs k >= 2 so that k*theta > 1 is possible ({params})"
        )));
    }
    if !(theta > 0.0 && theta < 1.0) || params.k() as f64 * theta <= 1.0 {
        return Err(Error::Domain(format!(
            "need 0 < theta < 1 and k*theta > 1, got theta={theta} with {params}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("gamma must lie in (0, 1), got {gamma}")))
    }
}

/// `R(γ) = γ cap + (θγ / log2 q) 𝓗(1 + (1-γ)/(kθγ))`.
pub fn rate_r(gamma: f64, theta: f64, params: DupParams) -> Result<f64> {
    check_rate_domain(theta, params)?;
    check_gamma(gamma)?;
    let k = params.k() as f64;
    let cap = irreducible_capacity(params);
    let arg = 1.0 + (1.0 - gamma) / (k * theta * gamma);
    Ok(gamma * cap + theta * gamma / f64::from(params.q()).log2() * stretched_entropy(arg)?)
}

/// The same rate written as `γ cap + θγ[(1+u) log_q(1+u) - u log_q u]` with
/// `u = (1-γ)/(kθγ)`.
pub fn rate_r_alt(gamma: f64, theta: f64, params: DupParams) -> Result<f64> {
    check_rate_domain(theta, params)?;
    check_gamma(gamma)?;
    let k = params.k() as f64;
    let lq = f64::from(params.q()).ln();
    let cap = irreducible_capacity(params);
    let u = (1.0 - gamma) / (k * theta * gamma);
    Ok(gamma * cap + theta * gamma * ((1.0 + u) * u.ln_1p() - u * u.ln()) / lq)
}

/// `R'(γ) = cap + (1/k)[(kθ - 1) log_q(1 + x/(kθ)) + log_q(x/(kθ))]`, `x = (1-γ)/γ`.
pub fn rate_r_prime(gamma: f64, theta: f64, params: DupParams) -> Result<f64> {
    check_rate_domain(theta, params)?;
    check_gamma(gamma)?;
    let k = params.k() as f64;
    let lq = f64::from(params.q()).ln();
    let z = (1.0 - gamma) / gamma / (k * theta);
    Ok(irreducible_capacity(params) + ((k * theta - 1.0) * z.ln_1p() + z.ln()) / (k * lq))
}

/// `R` on the uniform grid `γ_i = i / (points + 1)`, `i = 1..=points`.
pub fn rate_curve(theta: f64, params: DupParams, points: usize) -> Result<Vec<(f64, f64)>> {
    let step = 1.0 / (points as f64 + 1.0);
    (1..=points)
        .map(|i| {
            let gamma = i as f64 * step;
            Ok((gamma, rate_r(gamma, theta, params)?))
        })
        .collect()
}

/// `A = λ^(-k)`, the left-hand side of the stationarity equation
/// `A = (1 + z)^(kθ-1) z` with `z = x/(kθ)`.
fn stationarity_constant(params: DupParams) -> f64 {
    perron_lambda(params).powi(-(params.k() as i32))
}

/// The map whose fixed point is `z₀ = x₀/(kθ)`.
pub fn fixed_point_map(z: f64, theta: f64, params: DupParams) -> f64 {
    let a = stationarity_constant(params);
    let e = params.k() as f64 * theta - 1.0;
    a / (1.0 + a / (1.0 + z).powf(e)).powf(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub x0: f64,
    pub gamma0: f64,
    pub iterations: usize,
}

/// Solves `R'(γ) = 0` by iterating [`fixed_point_map`] from `z = 1/2` until
/// successive iterates differ by less than `tol`.
pub fn x0_solve(theta: f64, params: DupParams, tol: f64) -> Result<FixedPoint> {
    check_rate_domain(theta, params)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let kt = params.k() as f64 * theta;
    let mut z = 0.5;
    for iterations in 1..=MAX_FIXED_POINT_ITERATIONS {
        let next = fixed_point_map(z, theta, params);
        let done = (next - z).abs() < tol;
        z = next;
        if done {
            let x0 = kt * z;
            return Ok(FixedPoint { x0, gamma0: 1.0 / (1.0 + x0), iterations });
        }
    }
    Err(Error::NoConvergence { iterations: MAX_FIXED_POINT_ITERATIONS })
}

/// `(1 + z)^(kθ-1) z - λ^(-k)`, zero exactly at `z₀`.
pub fn stationarity_residual(z: f64, theta: f64, params: DupParams) -> f64 {
    let e = params.k() as f64 * theta - 1.0;
    (1.0 + z).powf(e) * z - stationarity_constant(params)
}

/// `x₀` by bisection of the increasing function [`stationarity_residual`] on `[0, 1]`.
pub fn x0_bisect(theta: f64, params: DupParams) -> Result<f64> {
    check_rate_domain(theta, params)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity_residual(mid, theta, params) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(params.k() as f64 * theta * 0.5 * (lo + hi))
}

/// A priori bounds `(lower, upper)` on `x₀`.
pub fn x0_bounds(theta: f64, params: DupParams) -> Result<(f64, f64)> {
    check_rate_domain(theta, params)?;
    let lambda = perron_lambda(params);
    let k = params.k() as i32;
    let kt = params.k() as f64 * theta;
    let q = f64::from(params.q());
    let a = lambda.powi(-k);
    let lower = kt / ((2f64.powf(theta) * lambda).powi(k) - 1.0);
    let quadratic = 0.5 * (((1.0 - a).powi(2) + kt * q * q * a).sqrt() - (1.0 - a));
    let simple = kt * q * q / (4.0 * (lambda.powi(k) - 1.0));
    Ok((lower, quadratic.min(simple)))
}

/// Applies [`fixed_point_map`] `steps` times to both ends of a bracket
/// `z_lower <= z₀ <= z_upper`.
pub fn refine_bounds(
    z_lower: f64,
    z_upper: f64,
    theta: f64,
    params: DupParams,
    steps: usize,
) -> Result<(f64, f64)> {
    check_rate_domain(theta, params)?;
    if z_lower > z_upper {
        return Err(Error::InvertedInterval { lower: z_lower, upper: z_upper });
    }
    let (mut lo, mut hi) = (z_lower, z_upper);
    for _ in 0..steps {
        lo = fixed_point_map(lo, theta, params);
        hi = fixed_point_map(hi, theta, params);
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityProfile {
    pub params: DupParams,
    pub lambda: f64,
    pub cap_irr: f64,
    pub pi1: f64,
    pub theta: f64,
    pub x0: f64,
    pub gamma0: f64,
    pub rate_at_gamma0: f64,
}

impl CapacityProfile {
    /// `theta` defaults to `π₁ - 0.01`.
    pub fn compute(params: DupParams, theta: Option<f64>, tol: f64) -> Result<Self> {
        let pi1 = pi1(params)?;
        let theta = theta.unwrap_or(pi1 - DEFAULT_THETA_MARGIN);
        let fp = x0_solve(theta, params, tol)?;
        Ok(Self {
            params,
            lambda: perron_lambda(params),
            cap_irr: irreducible_capacity(params),
            pi1,
            theta,
            x0: fp.x0,
            gamma0: fp.gamma0,
            rate_at_gamma0: rate_r(fp.gamma0, theta, params)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

/// `q^((n-k)(H_q(ξ) - 1))`, an upper bound on the fraction of length `n - k`
/// words with Hamming weight at most `ξ(n - k)`.
pub fn hamming_fraction_bound(n: usize, xi: f64, params: DupParams) -> Result<f64> {
    let q = params.q();
    if !(xi > 0.0 && xi < 1.0 - 1.0 / f64::from(q)) || n <= params.k() {
        return Err(Error::Domain(format!(
            "need 0 < xi < 1 - 1/q and n > k, got xi={xi} n={n} with {params}"
        )));
    }
    let exponent = (n - params.k()) as f64 * (q_ary_entropy(xi, q)? - 1.0);
    Ok(f64::from(q).powf(exponent))
}

/// The exact fraction `|{b ∈ Z_q^len : wt(b) <= ξ len}| / q^len`.
pub fn hamming_fraction_exact(len: usize, xi: f64, q: u32) -> f64 {
    let limit = (xi * len as f64).floor() as usize;
    let mut count = BigUint::ZERO;
    for w in 0..=limit.min(len) {
        count += crate::combinatorics::binomial(len as i64, w as i64) * BigUint::from(q - 1).pow(w as u32);
    }
    let total = BigUint::from(q).pow(len as u32);
    2f64.powf(crate::combinatorics::log2_big(&count) - crate::combinatorics::log2_big(&total))
}

/// The two growth regimes of uncertainty and delay with the codeword length `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// Uncertainty `N_n` (sublinear in `n`) and a fixed number of duplications `t`.
    Bounded { uncertainty: u64, t: usize },
    /// `N_n = 2^⌊αn⌋` and `t_n = ⌊βn⌋`.
    Linear { alpha: f64, beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeDistance {
    /// `m_n = ⌈θγn⌉`.
    pub m: usize,
    /// `r_n = (1-γ)n/k - 1`.
    pub r: f64,
    pub uncertainty: BigUint,
    pub t: usize,
    /// `d_{N_n, t_n}(m_n)`.
    pub distance: usize,
    /// Whether the regime's collapse condition holds at this `n`: `N_n < m_n`
    /// for bounded growth, the logarithmic bound equal to 1 for linear growth.
    pub collapsed: bool,
}

/// `d_{N_n, t_n}(m_n)` at a finite length `n`.
pub fn regime_distance(
    params: DupParams,
    theta: f64,
    gamma: f64,
    n: usize,
    regime: Regime,
) -> Result<RegimeDistance> {
    check_gamma(gamma)?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must lie in (0, 1), got {theta}")));
    }
    let m = (theta * gamma * n as f64).ceil() as usize;
    let r = (1.0 - gamma) * n as f64 / params.k() as f64 - 1.0;
    match regime {
        Regime::Bounded { uncertainty, t } => {
            let big = BigUint::from(uncertainty);
            let distance = required_distance_big(&big, t, m);
            Ok(RegimeDistance { m, r, uncertainty: big, t, distance, collapsed: (uncertainty as usize) < m })
        }
        Regime::Linear { alpha, beta } => {
            if !(alpha > 0.0 && beta > 0.0) {
                return Err(Error::Domain(format!("alpha and beta must be positive, got {alpha}, {beta}")));
            }
            let t = (beta * n as f64).floor() as usize;
            let big = BigUint::from(2u32).pow((alpha * n as f64).floor() as u32);
            let distance = required_distance_big(&big, t, m);
            let collapsed = big > BigUint::from(m)
                && m > 0
                && required_distance_upper_log_big(&big, t, m)? == 1;
            Ok(RegimeDistance { m, r, uncertainty: big, t, distance, collapsed })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u32, k: usize) -> DupParams {
        DupParams::new(q, k).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(stretched_entropy(1.0).unwrap(), 0.0);
        assert_eq!(stretched_entropy(2.0).unwrap(), 2.0);
        assert!((q_ary_entropy(0.75, 4).unwrap() - 1.0).abs() < 1e-15);
        assert!(binary_entropy(1.5).is_err());
        assert!(stretched_entropy(0.5).is_err());
        assert!(q_ary_entropy(-0.1, 2).is_err());
    }

    #[test]
    fn perron_examples() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((perron_lambda(p(2, 2)) - golden).abs() < 1e-12);
        assert!((perron_lambda(p(4, 2)) - (3.0 + 21f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((irreducible_capacity(p(2, 2)) - 0.6942).abs() < 5e-5);
        assert!((irreducible_capacity(p(4, 2)) - 0.9613).abs() < 5e-5);
        assert_eq!(perron_lambda(p(2, 1)), 1.0);
        assert_eq!(perron_lambda(p(5, 1)), 4.0);
    }

    #[test]
    fn lambda_bracket() {
        // 0 < pi1 < 1 forces 0 < k(q - λ) < 1, i.e. q - 1/k < λ < q; the lower
        // end q - q/(k+1) is implied.
        for q in 2..=5 {
            for k in 2..=8 {
                let (qf, kf) = (f64::from(q), k as f64);
                let l = perron_lambda(p(q, k));
                assert!(qf - 1.0 / kf < l && l < qf, "q={q} k={k}");
                assert!(qf - qf / (kf + 1.0) < l);
                let slack = kf * (qf - l);
                assert!(0.0 < slack && slack < 1.0);
            }
        }
    }

    #[test]
    fn pi1_examples() {
        assert!((pi1(p(2, 2)).unwrap() - 0.5 * (1.0 + 1.0 / 5f64.sqrt())).abs() < 1e-12);
        assert!((pi1(p(4, 2)).unwrap() - 0.5 * (1.0 + (3.0f64 / 7.0).sqrt())).abs() < 1e-12);
        assert!(matches!(pi1(p(2, 1)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn chain_contracts() {
        let g = ConstraintGraph::build(p(2, 2));
        assert_eq!(g.adjacency, vec![vec![1, 1], vec![1, 0]]);
        assert!(g.row_sum_error() < 1e-12);
        assert!(g.stationarity_error() < 1e-10);
        assert!((g.right_eig[1] - 1.0 / g.lambda).abs() < 1e-12);
        assert!((g.pi1() - pi1(p(2, 2)).unwrap()).abs() < 1e-10);
        let g = ConstraintGraph::build(p(3, 4));
        assert!((g.right_eig[3] - 2.0 / g.lambda).abs() < 1e-12);
        assert!(g.right_eig.iter().chain(&g.left_eig).all(|&x| x > 0.0));
    }

    #[test]
    fn sampler_is_rll_and_deterministic() {
        let params = p(3, 3);
        let a = sample_rll(params, 2000, 7);
        assert_eq!(a, sample_rll(params, 2000, 7));
        let mut run = 0;
        for &s in a.symbols() {
            run = if s == 0 { run + 1 } else { 0 };
            assert!(run < 3);
        }
    }

    #[test]
    fn rate_forms_agree_and_limits() {
        for (params, theta) in [(p(2, 2), 0.7236), (p(4, 2), 0.8273)] {
            let cap = irreducible_capacity(params);
            for i in 1..1000 {
                let g = i as f64 / 1000.0;
                let a = rate_r(g, theta, params).unwrap();
                let b = rate_r_alt(g, theta, params).unwrap();
                assert!((a - b).abs() < 1e-12, "gamma={g}");
            }
            assert!((rate_r(1.0 - 1e-8, theta, params).unwrap() - cap).abs() < 1e-6);
        }
        assert!(rate_r(0.5, 0.7, p(2, 1)).is_err());
        assert!(rate_r(0.0, 0.7, p(2, 2)).is_err());
        assert!(rate_r(0.5, 0.4, p(2, 2)).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let (params, theta) = (p(2, 2), 0.7236);
        for i in 1..100 {
            let g = i as f64 / 100.0;
            let h = 1e-6;
            let fd = (rate_r(g + h, theta, params).unwrap() - rate_r(g - h, theta, params).unwrap()) / (2.0 * h);
            assert!((fd - rate_r_prime(g, theta, params).unwrap()).abs() < 1e-6, "gamma={g}");
        }
    }

    #[test]
    fn fixed_point_and_bounds() {
        for (params, theta) in [(p(2, 2), 0.7236), (p(4, 2), 0.8273), (p(3, 3), 0.6)] {
            let fp = x0_solve(theta, params, DEFAULT_TOLERANCE).unwrap();
            let kt = params.k() as f64 * theta;
            assert!(stationarity_residual(fp.x0 / kt, theta, params).abs() < 1e-9);
            assert!((fp.x0 - x0_bisect(theta, params).unwrap()).abs() < 1e-9);
            let (lo, hi) = x0_bounds(theta, params).unwrap();
            assert!(0.0 < lo && lo <= fp.x0 && fp.x0 <= hi);
            assert!(fp.x0 < kt);
            assert!(rate_r_prime(fp.gamma0, theta, params).unwrap().abs() < 1e-8);

            let (zl, zu) = (lo / kt, hi / kt);
            let (a, b) = refine_bounds(zl, zu, theta, params, 1).unwrap();
            assert!(b - a < zu - zl);
            let z0 = fp.x0 / kt;
            assert!((fixed_point_map(z0, theta, params) - z0).abs() < 1e-9);
            for s in 0..10 {
                let (a, b) = refine_bounds(zl, zu, theta, params, s).unwrap();
                assert!(a <= z0 + 1e-15 && z0 <= b + 1e-15);
                assert!(b - a <= (9.0f64 / 16.0).powi(s as i32) * (zu - zl) + 1e-15);
            }
        }
        assert!(matches!(
            refine_bounds(0.6, 0.4, 0.7236, p(2, 2), 1),
            Err(Error::InvertedInterval { .. })
        ));
    }

    #[test]
    fn profile_values() {
        let prof = CapacityProfile::compute(p(2, 2), Some(0.7236), DEFAULT_TOLERANCE).unwrap();
        assert!(prof.rate_at_gamma0 > prof.cap_irr);
        assert!((prof.gamma0 - 1.0 / (1.0 + prof.x0)).abs() < 1e-15);
        let prof = CapacityProfile::compute(p(4, 2), None, DEFAULT_TOLERANCE).unwrap();
        assert!((prof.theta - (prof.pi1 - 0.01)).abs() < 1e-15);
        assert!(CapacityProfile::compute(p(2, 1), None, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn hamming_bound() {
        let params = p(2, 2);
        let exact = hamming_fraction_exact(12, 0.25, 2);
        let bound = hamming_fraction_bound(14, 0.25, params).unwrap();
        assert!(exact <= bound);
        assert!(hamming_fraction_bound(30, 0.25, params).unwrap() < bound);
        assert!((hamming_fraction_bound(14, 0.5 - 1e-9, params).unwrap() - 1.0).abs() < 1e-6);
        assert!(hamming_fraction_bound(14, 0.6, params).is_err());
    }

    #[test]
    fn regime_examples() {
        let params = p(2, 2);
        let n = 400;
        let d = regime_distance(params, 0.7, 0.5, n, Regime::Bounded { uncertainty: 20, t: 3 }).unwrap();
        assert!(d.collapsed);
        assert_eq!(d.distance, 3);
        let small = regime_distance(params, 0.7, 0.5, 2, Regime::Bounded { uncertainty: 100, t: 1 }).unwrap();
        assert_eq!(small.distance, 0);
        let lin = regime_distance(params, 0.7, 0.5, 2000, Regime::Linear { alpha: 0.5, beta: 0.1 }).unwrap();
        assert!(lin.collapsed);
        assert!(lin.distance <= 1);
    }
}
