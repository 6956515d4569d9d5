//! Uniform tandem-duplication reconstruction (UTR) codes: codes whose distinct
//! codewords share at most `N` of their `t`-descendants, so that any `N + 1`
//! distinct reads identify the codeword.
//!
//! Within one descendant cone the condition reduces to a minimum half-Manhattan
//! distance between the `psi` images; different cones never intersect.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{CapacityProfile, DEFAULT_TOLERANCE};
use crate::combinatorics::{binomial, log2_big};
use crate::dupcore::{
    channel_sample_with, descendants, descendants_with_cap, is_irreducible, phi_inv, psi_inv,
    DupParams, PhiImage, RootDecomposition, Word, DEFAULT_NODE_CAP,
};
use crate::error::{Error, Result};
use crate::simplex::{
    exact_max_code, half_manhattan_unchecked, required_distance, sidon_code, SimplexCode,
    SimplexPoint,
};

/// Roots are enumerated by [`construction_a`] only up to this length.
pub const MAX_ENUMERATED_ROOT_LEN: usize = 20;

/// Attempts allowed per trial when collecting distinct reads in [`simulate_reconstruction`].
const READ_ATTEMPTS: usize = 1_000_000;

/// An `(N, t, k)_q`-UTR code of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtrCode {
    params: DupParams,
    n: usize,
    uncertainty: u64,
    t: usize,
    codewords: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct UtrCodeJson {
    q: u32,
    k: usize,
    n: usize,
    #[serde(rename = "N")]
    uncertainty: u64,
    t: usize,
    codewords: Vec<String>,
}

impl UtrCode {
    /// Checks lengths and parameters; codewords are sorted and deduplicated.
    /// Validity as a reconstruction code is checked separately.
    pub fn new(
        params: DupParams,
        n: usize,
        uncertainty: u64,
        t: usize,
        mut codewords: Vec<Word>,
    ) -> Result<Self> {
        if n < params.k() {
            return Err(Error::TooShort { len: n, k: params.k() });
        }
        for c in &codewords {
            if c.params() != params {
                return Err(Error::ParamMismatch { left: params.to_string(), right: c.params().to_string() });
            }
            if c.len() != n {
                return Err(Error::LengthMismatch { left: n, right: c.len() });
            }
        }
        codewords.sort();
        codewords.dedup();
        Ok(Self { params, n, uncertainty, t, codewords })
    }

    pub fn params(&self) -> DupParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N`, the tolerated number of shared descendants.
    pub fn uncertainty(&self) -> u64 {
        self.uncertainty
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// The same codewords judged against different `N` and `t`.
    pub fn with_requirements(&self, uncertainty: u64, t: usize) -> Self {
        Self { uncertainty, t, ..self.clone() }
    }

    /// `log_q |C| / n`.
    pub fn rate(&self) -> f64 {
        if self.codewords.is_empty() {
            return 0.0;
        }
        (self.codewords.len() as f64).log2() / f64::from(self.params.q()).log2() / self.n as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&UtrCodeJson {
            q: self.params.q(),
            k: self.params.k(),
            n: self.n,
            uncertainty: self.uncertainty,
            t: self.t,
            codewords: self.codewords.iter().map(Word::to_string).collect(),
        })
        .expect("plain struct serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: UtrCodeJson = serde_json::from_str(json)
            .map_err(|e| Error::Parse { input: json.chars().take(80).collect(), reason: e.to_string() })?;
        let params = DupParams::new(raw.q, raw.k)?;
        let codewords = raw
            .codewords
            .iter()
            .map(|s| Word::parse(params, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, raw.n, raw.uncertainty, raw.t, codewords)
    }
}

/// A pair of codewords sharing more than `N` descendants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub first: Word,
    pub second: Word,
    pub shared: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&Violation> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(v) => Some(v),
        }
    }
}

/// Checks the definition literally by intersecting descendant sets.
pub fn is_utr_code_direct(code: &UtrCode) -> Result<Verdict> {
    is_utr_code_direct_with_cap(code, DEFAULT_NODE_CAP)
}

pub fn is_utr_code_direct_with_cap(code: &UtrCode, cap: usize) -> Result<Verdict> {
    let sets = code
        .codewords
        .iter()
        .map(|c| descendants_with_cap(c, code.t, cap))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let shared = sets[i].intersection(&sets[j]).count() as u64;
            if shared > code.uncertainty {
                return Ok(Verdict::Invalid(Violation {
                    first: code.codewords[i].clone(),
                    second: code.codewords[j].clone(),
                    shared: BigUint::from(shared),
                }));
            }
        }
    }
    Ok(Verdict::Valid)
}

/// Codewords grouped by root, with their `psi` images.
fn partition_by_root(code: &UtrCode) -> Result<BTreeMap<Word, Vec<(Word, SimplexPoint)>>> {
    let k = code.params.k();
    let mut classes: BTreeMap<Word, Vec<(Word, SimplexPoint)>> = BTreeMap::new();
    for c in &code.codewords {
        let dec = RootDecomposition::of(c)?;
        let root = dec.root()?;
        debug_assert!((code.n - root.len()).is_multiple_of(k) && (code.n - root.len()) / k < code.n / k);
        classes.entry(root).or_default().push((c.clone(), SimplexPoint::new(dec.sigma)));
    }
    Ok(classes)
}

/// Checks the per-cone distance condition: within each root class, `psi` images
/// are at half-distance at least `d_{N,t}(m)`.
pub fn is_utr_code_reduced(code: &UtrCode) -> Result<Verdict> {
    for members in partition_by_root(code)?.values() {
        let m = members[0].1.dimension();
        let d = required_distance(code.uncertainty, code.t, m);
        for (i, (a, pa)) in members.iter().enumerate() {
            for (b, pb) in &members[i + 1..] {
                let delta = half_manhattan_unchecked(pa, pb);
                if delta < d {
                    let shared = binomial((code.t - delta + m) as i64, m as i64);
                    return Ok(Verdict::Invalid(Violation { first: a.clone(), second: b.clone(), shared }));
                }
            }
        }
    }
    Ok(Verdict::Valid)
}

/// Number of `(0, k-1)_q`-RLL words of length `l` (no run of `k` zeros) with
/// Hamming weight `m`.
pub fn count_rll_weight(l: usize, m: usize, params: DupParams) -> BigUint {
    let k = params.k();
    let nonzero = BigUint::from(params.q() - 1);
    // table[run][w]: words ending in `run` zeros with weight w.
    let mut table = vec![vec![BigUint::ZERO; m + 1]; k];
    table[0][0] = BigUint::from(1u32);
    for _ in 0..l {
        let mut next = vec![vec![BigUint::ZERO; m + 1]; k];
        for run in 0..k {
            for w in 0..=m {
                if table[run][w].is_zero() {
                    continue;
                }
                if run + 1 < k {
                    next[run + 1][w] += &table[run][w];
                }
                if w < m {
                    next[0][w + 1] += &table[run][w] * &nonzero;
                }
            }
        }
        table = next;
    }
    table.iter().map(|row| row[m].clone()).sum()
}

/// Number of irreducible words of length `n`: `q^k` prefixes times the RLL
/// difference strings of length `n - k`.
pub fn irreducible_count(params: DupParams, n: usize) -> BigUint {
    if n < params.k() {
        return BigUint::ZERO;
    }
    let l = n - params.k();
    let rll: BigUint = (0..=l).map(|m| count_rll_weight(l, m, params)).sum();
    BigUint::from(params.q()).pow(params.k() as u32) * rll
}

/// `Σ_r Σ_m f(m, r, d_{N,t}(m)) · q^k · #RLL(n - (r+1)k, m)`, the size of the
/// code that uses a size-`f` simplex code in every cone meeting `Z_q^n`.
pub fn utr_size_formula(
    n: usize,
    uncertainty: u64,
    t: usize,
    params: DupParams,
    mut code_size: impl FnMut(usize, usize, usize) -> Result<BigUint>,
) -> Result<BigUint> {
    let k = params.k();
    let prefixes = BigUint::from(params.q()).pow(k as u32);
    let mut total = BigUint::ZERO;
    for r in 0..n / k {
        let l = n - (r + 1) * k;
        for m in 0..=l {
            let roots = count_rll_weight(l, m, params);
            if roots.is_zero() {
                continue;
            }
            let d = required_distance(uncertainty, t, m);
            total += code_size(m, r, d)? * &prefixes * roots;
        }
    }
    Ok(total)
}

/// Irreducible words of length `len` whose difference string has weight at
/// least `min_weight`, in lexicographic order of (prefix, difference string).
pub fn irreducible_words(params: DupParams, len: usize, min_weight: usize, cap: usize) -> Result<Vec<Word>> {
    let k = params.k();
    if len < k {
        return Ok(Vec::new());
    }
    let l = len - k;
    let mut diffs: Vec<Vec<u8>> = Vec::new();
    let mut current = Vec::with_capacity(l);
    rll_strings(params, l, min_weight, 0, 0, &mut current, &mut diffs, cap)?;
    let q = params.q();
    let prefix_count = (q as usize).pow(k as u32);
    if diffs.len().saturating_mul(prefix_count) > cap {
        return Err(Error::ResourceCap { what: "irreducible words", cap });
    }
    let mut words = Vec::with_capacity(diffs.len() * prefix_count);
    for idx in 0..prefix_count {
        let mut rest = idx;
        let mut prefix = vec![0u32; k];
        for slot in prefix.iter_mut().rev() {
            *slot = (rest % q as usize) as u32;
            rest /= q as usize;
        }
        let prefix = Word::new(params, prefix)?;
        for diff in &diffs {
            let diff = Word::new(params, diff.iter().map(|&s| u32::from(s)))?;
            words.push(phi_inv(&PhiImage { prefix: prefix.clone(), diff })?);
        }
    }
    Ok(words)
}

#[allow(clippy::too_many_arguments)]
fn rll_strings(
    params: DupParams,
    l: usize,
    min_weight: usize,
    run: usize,
    weight: usize,
    current: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
    cap: usize,
) -> Result<()> {
    if weight + (l - current.len()) < min_weight {
        return Ok(());
    }
    if current.len() == l {
        if out.len() >= cap {
            return Err(Error::ResourceCap { what: "irreducible words", cap });
        }
        out.push(current.clone());
        return Ok(());
    }
    for s in 0..params.q() as u8 {
        if s == 0 && run + 1 >= params.k() {
            continue;
        }
        current.push(s);
        let (next_run, next_weight) = if s == 0 { (run + 1, weight) } else { (0, weight + 1) };
        rll_strings(params, l, min_weight, next_run, next_weight, current, out, cap)?;
        current.pop();
    }
    Ok(())
}

/// Largest `(N, t, k)_q`-UTR code of length `n`, by maximum independent set on
/// the graph of pairs sharing more than `N` descendants. Exponential; meant for
/// tiny `q^n`.
pub fn max_utr_code_exhaustive(params: DupParams, n: usize, uncertainty: u64, t: usize) -> Result<UtrCode> {
    let words: Vec<Word> = crate::dupcore::all_words(params, n).collect();
    let sets = words.iter().map(|w| descendants(w, t)).collect::<Result<Vec<HashSet<Word>>>>()?;
    let clique = crate::simplex::max_clique(words.len(), |i, j| {
        sets[i].intersection(&sets[j]).count() as u64 <= uncertainty
    });
    UtrCode::new(params, n, uncertainty, t, clique.into_iter().map(|i| words[i].clone()).collect())
}

/// The UTR code obtained by placing a maximum simplex code in every cone that
/// meets `Z_q^n`; its size is [`utr_size_formula`] with exact `M(m, r, d)`.
pub fn optimal_cone_code(params: DupParams, n: usize, uncertainty: u64, t: usize) -> Result<UtrCode> {
    cone_union(params, n, uncertainty, t, exact_max_code)
}

fn cone_union(
    params: DupParams,
    n: usize,
    uncertainty: u64,
    t: usize,
    mut build: impl FnMut(usize, usize, usize) -> Result<SimplexCode>,
) -> Result<UtrCode> {
    let k = params.k();
    let mut cache: HashMap<(usize, usize, usize), SimplexCode> = HashMap::new();
    let mut codewords = Vec::new();
    for r in 0..n / k {
        for x in irreducible_words(params, n - r * k, 0, DEFAULT_NODE_CAP)? {
            let m = RootDecomposition::of(&x)?.mu.hamming_weight();
            let d = required_distance(uncertainty, t, m);
            let key = (m, r, d);
            let code = match cache.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(build(m, r, d)?),
            };
            for p in code.points() {
                codewords.push(psi_inv(&x, p)?);
            }
        }
    }
    UtrCode::new(params, n, uncertainty, t, codewords)
}

/// Output of [`construction_a`].
#[derive(Clone, Debug)]
pub struct Construction {
    pub code: UtrCode,
    pub profile: CapacityProfile,
    /// Number of duplications separating roots from codewords.
    pub r: usize,
    /// Minimum difference-string weight required of a root.
    pub min_weight: usize,
    pub roots: usize,
}

/// Builds a UTR code from heavy roots and congruence codes in their cones.
///
/// The rate-maximizing root fraction `γ₀` fixes `r = round((1-γ₀)n/k - 1)` and the
/// root length `n - rk`; roots must have difference-string weight at least
/// `⌈θ(n - rk - k)⌉`. Roots are enumerated when they have at most
/// [`MAX_ENUMERATED_ROOT_LEN`] symbols and must be supplied otherwise.
pub fn construction_a(
    params: DupParams,
    n: usize,
    t: usize,
    uncertainty: u64,
    theta: Option<f64>,
    roots: Option<&[Word]>,
) -> Result<Construction> {
    let profile = CapacityProfile::compute(params, theta, DEFAULT_TOLERANCE)?;
    let k = params.k();
    let r_real = (1.0 - profile.gamma0) * n as f64 / k as f64 - 1.0;
    let r = r_real.round();
    if r < 0.0 {
        return Err(Error::Infeasible(format!("n={n} gives a negative duplication count {r_real:.3}")));
    }
    let r = r as usize;
    if r * k + k > n {
        return Err(Error::Infeasible(format!("n={n} leaves no room for a root with r={r}")));
    }
    let root_len = n - r * k;
    let min_weight = (profile.theta * (root_len - k) as f64).ceil() as usize;

    let roots: Vec<Word> = match roots {
        Some(list) => {
            for x in list {
                if x.params() != params || x.len() != root_len || !is_irreducible(x)? {
                    return Err(Error::InvalidParams(format!(
                        "supplied root {x} is not an irreducible word of length {root_len}"
                    )));
                }
                if RootDecomposition::of(x)?.mu.hamming_weight() < min_weight {
                    return Err(Error::InvalidParams(format!(
                        "supplied root {x} has weight below {min_weight}"
                    )));
                }
            }
            list.to_vec()
        }
        None if root_len <= MAX_ENUMERATED_ROOT_LEN => {
            irreducible_words(params, root_len, min_weight, DEFAULT_NODE_CAP)?
        }
        None => {
            return Err(Error::Infeasible(format!(
                "roots of length {root_len} exceed {MAX_ENUMERATED_ROOT_LEN} and must be supplied"
            )))
        }
    };
    if roots.is_empty() {
        return Err(Error::Infeasible(format!(
            "no irreducible roots of length {root_len} with weight >= {min_weight}"
        )));
    }

    let mut cache: HashMap<(usize, usize), SimplexCode> = HashMap::new();
    let mut codewords = Vec::new();
    for x in &roots {
        let m = RootDecomposition::of(x)?.mu.hamming_weight();
        let d = required_distance(uncertainty, t, m);
        let code = match cache.entry((m, d)) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(sidon_code(m, r, d)?),
        };
        for p in code.points() {
            codewords.push(psi_inv(x, p)?);
        }
    }
    let code = UtrCode::new(params, n, uncertainty, t, codewords)?;
    if let Verdict::Invalid(v) = is_utr_code_reduced(&code)? {
        return Err(Error::InvalidCode(format!("{} and {} share {} descendants", v.first, v.second, v.shared)));
    }
    let roots = roots.len();
    Ok(Construction { code, profile, r, min_weight, roots })
}

fn shared_cone(reads: &[Word]) -> Result<(Word, Vec<SimplexPoint>)> {
    let first = reads.first().ok_or(Error::NoCandidate)?;
    let mut root = None;
    let mut points = Vec::with_capacity(reads.len());
    for y in reads {
        first.ensure_same_params(y)?;
        if y.len() != first.len() {
            return Err(Error::LengthMismatch { left: first.len(), right: y.len() });
        }
        let dec = RootDecomposition::of(y)?;
        let x = dec.root()?;
        match &root {
            None => root = Some(x),
            Some(r) if *r != x => return Err(Error::RootMismatch),
            Some(_) => {}
        }
        points.push(SimplexPoint::new(dec.sigma));
    }
    Ok((root.expect("at least one read"), points))
}

fn unique(candidates: Vec<Word>) -> Result<Word> {
    match candidates.len() {
        0 => Err(Error::NoCandidate),
        1 => Ok(candidates.into_iter().next().expect("one candidate")),
        n => Err(Error::Ambiguous { candidates: n }),
    }
}

/// Decodes reads by taking the meet of their `psi` images and returning the
/// codeword below it.
pub fn reconstruct(code: &UtrCode, reads: &[Word]) -> Result<Word> {
    let (root, points) = shared_cone(reads)?;
    let mut meet = points[0].coords().to_vec();
    for p in &points[1..] {
        for (a, &b) in meet.iter_mut().zip(p.coords()) {
            *a = (*a).min(b);
        }
    }
    let meet = SimplexPoint::new(meet);
    let mut candidates = Vec::new();
    for c in &code.codewords {
        if c.params() != root.params() {
            continue;
        }
        let dec = RootDecomposition::of(c)?;
        if dec.root()? == root && SimplexPoint::new(dec.sigma).is_below(&meet) {
            candidates.push(c.clone());
        }
    }
    unique(candidates)
}

/// Decodes by testing every codeword's descendant set for containment of all reads.
pub fn reconstruct_scan(code: &UtrCode, reads: &[Word]) -> Result<Word> {
    shared_cone(reads)?;
    let mut candidates = Vec::new();
    for c in &code.codewords {
        let set = descendants(c, code.t)?;
        if reads.iter().all(|y| set.contains(y)) {
            candidates.push(c.clone());
        }
    }
    unique(candidates)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: usize,
    pub successes: usize,
    pub ambiguous: usize,
    pub no_candidate: usize,
    pub wrong: usize,
    /// Trials whose codeword has fewer than `N + 1` distinct `t`-descendants;
    /// these are decoded from all of them.
    pub short_cones: usize,
}

impl SimulationReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.successes as f64 / self.trials as f64
    }
}

/// Sends random codewords through the channel, collects `N + 1` distinct reads
/// by rejection sampling, and decodes them.
pub fn simulate_reconstruction(code: &UtrCode, trials: usize, seed: u64) -> Result<SimulationReport> {
    let mut report = SimulationReport { trials, ..Default::default() };
    if code.is_empty() {
        return Err(Error::InvalidCode("cannot simulate an empty code".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wanted = code.uncertainty.saturating_add(1);
    for _ in 0..trials {
        let c = &code.codewords[rng.gen_range(0..code.codewords.len())];
        let m = RootDecomposition::of(c)?.mu.hamming_weight();
        let cone = binomial((code.t + m) as i64, m as i64);
        let target = match cone.to_u64() {
            Some(size) if size < wanted => {
                report.short_cones += 1;
                size
            }
            _ => wanted,
        } as usize;
        let mut reads: HashSet<Word> = HashSet::new();
        let mut attempts = 0;
        while reads.len() < target {
            attempts += 1;
            if attempts > READ_ATTEMPTS {
                return Err(Error::SearchBudget(format!("collecting {target} distinct reads of {c}")));
            }
            reads.insert(channel_sample_with(c, code.t, &mut rng)?);
        }
        let mut reads: Vec<Word> = reads.into_iter().collect();
        reads.sort();
        match reconstruct(code, &reads) {
            Ok(w) if w == *c => report.successes += 1,
            Ok(_) => report.wrong += 1,
            Err(Error::Ambiguous { .. }) => report.ambiguous += 1,
            Err(Error::NoCandidate) => report.no_candidate += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// `log2` of a code size given as a big integer, for rate comparisons.
pub fn log2_size(size: &BigUint) -> f64 {
    log2_big(size)
}
