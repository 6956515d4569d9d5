//! Brute-force equivalence suites: each closed form is compared with a literal
//! enumeration over all small instances, stopping at the first counterexample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::stretched_entropy;
use crate::combinatorics::{binomial, log2_big};
use crate::dupcore::{all_words, descendant_layers, root, DupParams, Word, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::metric::{
    cone_intersection_size, descendant_count, duplication_distance, duplication_distance_bfs,
    Distance,
};
use crate::simplex::{
    ball_size, ball_size_bruteforce, enumerate_simplex, required_distance,
    required_distance_upper_entropy, required_distance_upper_log,
};
use crate::utr::{irreducible_words, is_utr_code_direct, is_utr_code_reduced, UtrCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    /// `|D^t(x)| = C(t + m, m)` for irreducible `x`.
    ConeCount,
    /// Cone intersection sizes against explicit set intersections.
    Intersection,
    /// `d_k` against breadth-first search.
    Distance,
    /// Direct and reduced UTR checkers on random codes.
    Checkers,
    /// Ball-size formula against enumeration.
    BallSize,
    /// Distance bounds, entropy inequalities and the binomial sandwich.
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::ConeCount,
        Suite::Intersection,
        Suite::Distance,
        Suite::Checkers,
        Suite::BallSize,
        Suite::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ConeCount => "cone-count",
            Suite::Intersection => "intersection",
            Suite::Distance => "distance",
            Suite::Checkers => "checkers",
            Suite::BallSize => "ball-size",
            Suite::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

/// Size limits shared by the suites.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub alphabets: Vec<u32>,
    pub dup_lengths: Vec<usize>,
    /// Longest root enumerated.
    pub max_root_len: usize,
    /// Largest number of duplications compared.
    pub max_t: usize,
    /// Depth below the root from which intersection pairs are drawn.
    pub max_level: usize,
    /// Depth below the root for the distance comparison (roots one symbol shorter).
    pub distance_level: usize,
    /// Longest code length for the checker suite.
    pub max_code_len: usize,
    pub max_uncertainty: u64,
    /// Random codes per parameter cell.
    pub samples: usize,
    /// Random triples for the distance-bound comparisons.
    pub bound_samples: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            alphabets: vec![2, 3],
            dup_lengths: vec![1, 2],
            max_root_len: 6,
            max_t: 3,
            max_level: 3,
            distance_level: 2,
            max_code_len: 6,
            max_uncertainty: 3,
            samples: 100,
            bound_samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Tally {
    suite: Suite,
    cases: u64,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Self { suite, cases: 0 }
    }

    fn pass(&mut self) {
        self.cases += 1;
    }

    fn fail(self, counterexample: String) -> SuiteOutcome {
        SuiteOutcome { suite: self.suite, cases: self.cases + 1, counterexample: Some(counterexample) }
    }

    fn done(self) -> SuiteOutcome {
        SuiteOutcome { suite: self.suite, cases: self.cases, counterexample: None }
    }
}

pub fn run_suite(suite: Suite, config: &OracleConfig) -> Result<SuiteOutcome> {
    match suite {
        Suite::ConeCount => cone_count(config),
        Suite::Intersection => intersection(config),
        Suite::Distance => distance(config),
        Suite::Checkers => checkers(config),
        Suite::BallSize => ball_sizes(config),
        Suite::Bounds => bounds(config),
    }
}

fn parameter_grid(config: &OracleConfig) -> Result<Vec<DupParams>> {
    let mut grid = Vec::new();
    for &q in &config.alphabets {
        for &k in &config.dup_lengths {
            grid.push(DupParams::new(q, k)?);
        }
    }
    Ok(grid)
}

/// Every irreducible word with `k <= |x| <= max_len`.
fn roots_up_to(params: DupParams, max_len: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for len in params.k()..=max_len {
        out.extend(irreducible_words(params, len, 0, DEFAULT_NODE_CAP)?);
    }
    Ok(out)
}

fn cone_count(config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::ConeCount);
    for params in parameter_grid(config)? {
        for x in roots_up_to(params, config.max_root_len)? {
            let layers = descendant_layers(&x, config.max_t, DEFAULT_NODE_CAP)?;
            for (t, layer) in layers.iter().enumerate() {
                let formula = descendant_count(&x, t)?;
                if formula != BigUint::from(layer.len()) {
                    return Ok(tally.fail(format!(
                        "{params}: |D^{t}({x})| = {} but the formula gives {formula}",
                        layer.len()
                    )));
                }
                tally.pass();
            }
        }
    }
    Ok(tally.done())
}

fn intersection(config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::Intersection);
    for params in parameter_grid(config)? {
        for x in roots_up_to(params, config.max_root_len)? {
            let levels = descendant_layers(&x, config.max_level, DEFAULT_NODE_CAP)?;
            for level in &levels {
                let mut words: Vec<&Word> = level.iter().collect();
                words.sort();
                let cones = words
                    .iter()
                    .map(|w| descendant_layers(w, config.max_t, DEFAULT_NODE_CAP))
                    .collect::<Result<Vec<_>>>()?;
                for (i, &a) in words.iter().enumerate() {
                    for (j, &b) in words.iter().enumerate().skip(i) {
                        let (da, db) = (&cones[i], &cones[j]);
                        for t in 0..=config.max_t {
                            let brute = da[t].intersection(&db[t]).count();
                            let formula = cone_intersection_size(a, b, t)?;
                            if formula != BigUint::from(brute) {
                                return Ok(tally.fail(format!(
                                    "{params}: |D^{t}({a}) ∩ D^{t}({b})| = {brute} but the formula gives {formula}"
                                )));
                            }
                            tally.pass();
                        }
                    }
                }
            }
        }
    }
    Ok(tally.done())
}

fn distance(config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::Distance);
    let root_len = config.max_root_len.saturating_sub(1);
    for params in parameter_grid(config)? {
        let roots = roots_up_to(params, root_len)?;
        for x in &roots {
            let levels = descendant_layers(x, config.distance_level, DEFAULT_NODE_CAP)?;
            for level in &levels {
                let mut words: Vec<&Word> = level.iter().collect();
                words.sort();
                for (i, &a) in words.iter().enumerate() {
                    for &b in &words[i..] {
                        let closed = duplication_distance(a, b)?;
                        let searched = duplication_distance_bfs(a, b, config.distance_level)?;
                        if closed.finite() != searched {
                            return Ok(tally.fail(format!(
                                "{params}: d({a}, {b}) = {closed} but search finds {searched:?}"
                            )));
                        }
                        tally.pass();
                    }
                }
            }
        }
        // Distinct roots of equal length lie in disjoint cones.
        for (i, a) in roots.iter().enumerate() {
            for b in roots[i + 1..].iter().filter(|b| b.len() == a.len()) {
                let closed = duplication_distance(a, b)?;
                let searched = duplication_distance_bfs(a, b, config.distance_level)?;
                if closed != Distance::Infinite || searched.is_some() {
                    return Ok(tally.fail(format!(
                        "{params}: distinct roots {a}, {b} give d = {closed}, search {searched:?}"
                    )));
                }
                tally.pass();
            }
        }
    }
    Ok(tally.done())
}

/// All words of length `n` and the same words grouped by root.
struct WordSpace {
    words: Vec<Word>,
    cones: Vec<Vec<Word>>,
}

impl WordSpace {
    fn new(params: DupParams, n: usize) -> Result<Self> {
        let words: Vec<Word> = all_words(params, n).collect();
        let mut by_root: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for w in &words {
            by_root.entry(root(w)?).or_default().push(w.clone());
        }
        let cones = by_root.into_values().filter(|c| c.len() >= 2).collect();
        Ok(Self { words, cones })
    }

    /// A random code; half the time drawn from a single cone so that the
    /// distance condition is actually exercised.
    fn random_code(&self, rng: &mut ChaCha8Rng) -> Vec<Word> {
        let size = rng.gen_range(2..=6usize).min(self.words.len());
        if !self.cones.is_empty() && rng.gen_bool(0.5) {
            let cone = &self.cones[rng.gen_range(0..self.cones.len())];
            return cone.choose_multiple(rng, size.min(cone.len())).cloned().collect();
        }
        self.words.choose_multiple(rng, size).cloned().collect()
    }
}

fn checkers(config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::Checkers);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for params in parameter_grid(config)? {
        for n in params.k()..=config.max_code_len {
            let space = WordSpace::new(params, n)?;
            for t in 0..=config.max_t.min(2) {
                for uncertainty in 0..=config.max_uncertainty {
                    for _ in 0..config.samples {
                        let code = UtrCode::new(params, n, uncertainty, t, space.random_code(&mut rng))?;
                        let direct = is_utr_code_direct(&code)?.is_valid();
                        let reduced = is_utr_code_reduced(&code)?.is_valid();
                        if direct != reduced {
                            let words: Vec<String> = code.codewords().iter().map(Word::to_string).collect();
                            return Ok(tally.fail(format!(
                                "{params} n={n} N={uncertainty} t={t}: direct={direct} reduced={reduced} on {words:?}"
                            )));
                        }
                        tally.pass();
                    }
                }
            }
        }
    }
    Ok(tally.done())
}

fn ball_sizes(_config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::BallSize);
    for m in 1..=4 {
        for d in 0..=3 {
            let r = (m + 1) * d + 2;
            let formula = ball_size(m, d);
            for center in enumerate_simplex(m, r)? {
                if center.coords().iter().any(|&c| c < d) {
                    continue;
                }
                let brute = ball_size_bruteforce(m, r, &center, d)?;
                if formula != BigUint::from(brute) {
                    return Ok(tally.fail(format!(
                        "m={m} d={d} center {:?}: enumeration {brute}, formula {formula}",
                        center.coords()
                    )));
                }
                tally.pass();
            }
        }
    }
    Ok(tally.done())
}

/// Random `(N, t, m)` with `m < N <= 2^20`, `t <= 50`.
pub fn random_bound_triple(rng: &mut ChaCha8Rng) -> (u64, usize, usize) {
    let m = rng.gen_range(1..=40usize);
    let bits = rng.gen_range(1..=20u32);
    let uncertainty = rng.gen_range((m as u64 + 1)..=(m as u64 + 1).max(1 << bits));
    (uncertainty, rng.gen_range(0..=50usize), m)
}

/// Checks `d <= entropy bound <= log bound` at one triple with `N > m`.
pub fn check_bound_ordering(uncertainty: u64, t: usize, m: usize) -> Result<Option<String>> {
    let d = required_distance(uncertainty, t, m);
    let entropy = required_distance_upper_entropy(uncertainty, t, m)?;
    let log = required_distance_upper_log(uncertainty, t, m)?;
    Ok((!(d <= entropy && entropy <= log)).then(|| {
        format!("N={uncertainty} t={t} m={m}: exact {d}, entropy bound {entropy}, log bound {log}")
    }))
}

/// Checks `nH(k/n) - log2(2n)/2 <= log2 C(n, k) < nH(k/n)`.
pub fn check_binomial_sandwich(n: usize, k: usize) -> Result<Option<String>> {
    let exact = log2_big(&binomial(n as i64, k as i64));
    let nh = n as f64 * crate::capacity::binary_entropy(k as f64 / n as f64)?;
    let lower = nh - 0.5 * (2.0 * n as f64).log2();
    Ok((!(lower <= exact + 1e-9 && exact < nh)).then(|| {
        format!("n={n} k={k}: log2 C = {exact}, sandwich [{lower}, {nh})")
    }))
}

fn bounds(config: &OracleConfig) -> Result<SuiteOutcome> {
    let mut tally = Tally::new(Suite::Bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.bound_samples {
        let (uncertainty, t, m) = random_bound_triple(&mut rng);
        if let Some(cx) = check_bound_ordering(uncertainty, t, m)? {
            return Ok(tally.fail(cx));
        }
        tally.pass();
    }
    for _ in 0..config.bound_samples / 10 {
        let m = rng.gen_range(1..=60usize);
        let uncertainty = rng.gen_range(1..=m as u64);
        let t = rng.gen_range(0..=50usize);
        let d = required_distance(uncertainty, t, m);
        if d != t {
            return Ok(tally.fail(format!("N={uncertainty} <= m={m}, t={t}: exact distance {d} != t")));
        }
        tally.pass();
    }
    for i in 0..=10_000 {
        let x = 1.0 + 99.0 * i as f64 / 10_000.0;
        let h = stretched_entropy(x)?;
        if h > 2.0 * (x - 1.0).sqrt() + 1e-12 {
            return Ok(tally.fail(format!("𝓗({x}) = {h} exceeds 2 sqrt(x - 1)")));
        }
        tally.pass();
    }
    for n in 2..=60 {
        for k in 1..n {
            if let Some(cx) = check_binomial_sandwich(n, k)? {
                return Ok(tally.fail(cx));
            }
            tally.pass();
        }
    }
    Ok(tally.done())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> OracleConfig {
        OracleConfig {
            alphabets: vec![2],
            dup_lengths: vec![1, 2],
            max_root_len: 4,
            max_t: 2,
            max_level: 1,
            distance_level: 1,
            max_code_len: 4,
            max_uncertainty: 1,
            samples: 5,
            bound_samples: 200,
            seed: 1,
        }
    }

    #[test]
    fn suites_pass_on_small_caps() {
        for suite in Suite::ALL {
            let outcome = run_suite(suite, &small()).unwrap();
            assert!(outcome.passed(), "{suite}: {:?}", outcome.counterexample);
            assert!(outcome.cases > 0, "{suite}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
