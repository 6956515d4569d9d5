//! Words over `Z_q`, uniform tandem duplication, and the difference-string
//! coordinates that turn duplications into zero-block insertions.
//!
//! A word `x` with `|x| >= k` is mapped by [`phi`] to its length-`k` prefix and
//! its difference string `b[j] = x[j+k] - x[j] (mod q)`. Duplicating a length-`k`
//! block of `x` inserts `0^k` into `b`, so the root of `x` is obtained by
//! reducing every zero run of `b` modulo `k` ([`mu_sigma`]), and the quotient
//! vector `sigma` locates `x` inside the cone of its root ([`psi`]).

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::SimplexPoint;

/// Default bound on the number of distinct words held in one expansion layer.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

/// Largest supported alphabet; symbols are stored as bytes.
pub const MAX_ALPHABET: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DupParams {
    q: u32,
    k: usize,
}

impl DupParams {
    pub fn new(q: u32, k: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::InvalidParams(format!(
                "alphabet size q={q} must lie in 2..={MAX_ALPHABET}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParams("duplication length k must be positive".into()));
        }
        Ok(Self { q, k })
    }

    /// Alphabet size.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Duplication length.
    pub fn k(&self) -> usize {
        self.k
    }

    fn describe(&self) -> String {
        format!("(q={}, k={})", self.q, self.k)
    }
}

impl fmt::Display for DupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} k={}", self.q, self.k)
    }
}

/// An immutable word over `Z_q` tagged with the duplication parameters it is
/// meant to be used with.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    params: DupParams,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(params: DupParams, symbols: impl IntoIterator<Item = u32>) -> Result<Self> {
        let symbols = symbols
            .into_iter()
            .enumerate()
            .map(|(position, s)| {
                if s < params.q {
                    Ok(s as u8)
                } else {
                    Err(Error::SymbolOutOfRange { symbol: s, position, q: params.q })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, symbols })
    }

    pub(crate) fn from_raw(params: DupParams, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| u32::from(s) < params.q));
        Self { params, symbols }
    }

    pub fn empty(params: DupParams) -> Self {
        Self { params, symbols: Vec::new() }
    }

    /// Parses the text encoding: a digit string when `q <= 10`, otherwise
    /// comma-separated integers. The empty string is the empty word.
    pub fn parse(params: DupParams, text: &str) -> Result<Self> {
        let text = text.trim();
        let err = |reason: String| Error::Parse { input: text.to_string(), reason };
        if text.is_empty() {
            return Ok(Self::empty(params));
        }
        let values: Vec<u32> = if params.q <= 10 {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| err(format!("unexpected character {c:?}"))))
                .collect::<Result<_>>()?
        } else {
            text.split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| err(e.to_string())))
                .collect::<Result<_>>()?
        };
        Self::new(params, values)
    }

    pub fn params(&self) -> DupParams {
        self.params
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn hamming_weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    pub(crate) fn ensure_same_params(&self, other: &Word) -> Result<()> {
        if self.params == other.params {
            Ok(())
        } else {
            Err(Error::ParamMismatch {
                left: self.params.describe(),
                right: other.params.describe(),
            })
        }
    }

    fn ensure_long_enough(&self) -> Result<()> {
        if self.len() < self.params.k {
            Err(Error::TooShort { len: self.len(), k: self.params.k })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.q <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?}, {})", self.to_string(), self.params)
    }
}

/// `T_{k,i}`: duplicates the length-`k` block starting at `i`, or returns `x`
/// unchanged when the block does not fit.
pub fn tandem_duplicate(x: &Word, i: usize) -> Word {
    let k = x.params.k;
    if x.len() < i + k {
        return x.clone();
    }
    let mut symbols = Vec::with_capacity(x.len() + k);
    symbols.extend_from_slice(&x.symbols[..i + k]);
    symbols.extend_from_slice(&x.symbols[i..]);
    Word::from_raw(x.params, symbols)
}

/// Exact set of `t`-descendants `D_k^t(x)`.
pub fn descendants(x: &Word, t: usize) -> Result<HashSet<Word>> {
    descendants_with_cap(x, t, DEFAULT_NODE_CAP)
}

pub fn descendants_with_cap(x: &Word, t: usize, cap: usize) -> Result<HashSet<Word>> {
    Ok(descendant_layers(x, t, cap)?.pop().unwrap_or_default())
}

/// Layers `D_k^0(x), ..., D_k^t(x)`, expanded breadth-first.
pub fn descendant_layers(x: &Word, t: usize, cap: usize) -> Result<Vec<HashSet<Word>>> {
    let mut layers = Vec::with_capacity(t + 1);
    layers.push(HashSet::from([x.clone()]));
    for _ in 0..t {
        let next = expand_layer(layers.last().expect("nonempty"), cap)?;
        layers.push(next);
    }
    Ok(layers)
}

pub(crate) fn expand_layer(layer: &HashSet<Word>, cap: usize) -> Result<HashSet<Word>> {
    let mut next = HashSet::new();
    for y in layer {
        let k = y.params.k;
        if y.len() < k {
            continue;
        }
        for i in 0..=y.len() - k {
            next.insert(tandem_duplicate(y, i));
            if next.len() > cap {
                return Err(Error::ResourceCap { what: "descendant layer", cap });
            }
        }
    }
    Ok(next)
}

/// The image of `x` under `phi_k`: its length-`k` prefix and difference string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiImage {
    pub prefix: Word,
    pub diff: Word,
}

pub fn phi(x: &Word) -> Result<PhiImage> {
    x.ensure_long_enough()?;
    let DupParams { q, k } = x.params;
    let s = &x.symbols;
    let diff = (0..s.len() - k)
        .map(|j| ((u32::from(s[j + k]) + q - u32::from(s[j])) % q) as u8)
        .collect();
    Ok(PhiImage {
        prefix: Word::from_raw(x.params, s[..k].to_vec()),
        diff: Word::from_raw(x.params, diff),
    })
}

pub fn phi_inv(img: &PhiImage) -> Result<Word> {
    img.prefix.ensure_same_params(&img.diff)?;
    let DupParams { q, k } = img.prefix.params;
    if img.prefix.len() != k {
        return Err(Error::Dimension { expected: k, got: img.prefix.len() });
    }
    let mut s = Vec::with_capacity(k + img.diff.len());
    s.extend_from_slice(&img.prefix.symbols);
    for (j, &d) in img.diff.symbols.iter().enumerate() {
        s.push(((u32::from(s[j]) + u32::from(d)) % q) as u8);
    }
    Ok(Word::from_raw(img.prefix.params, s))
}

/// Splits `b = 0^{s_1} w_1 ... w_m 0^{s_{m+1}}` into `mu(b)` (zero runs reduced
/// modulo `k`) and `sigma(b) = (floor(s_i / k))_i`.
pub fn mu_sigma(b: &Word) -> (Word, Vec<usize>) {
    let k = b.params.k;
    let mut mu = Vec::with_capacity(b.len());
    let mut sigma = Vec::with_capacity(b.hamming_weight() + 1);
    let mut run = 0usize;
    for &s in &b.symbols {
        if s == 0 {
            run += 1;
        } else {
            mu.extend(std::iter::repeat_n(0u8, run % k));
            mu.push(s);
            sigma.push(run / k);
            run = 0;
        }
    }
    mu.extend(std::iter::repeat_n(0u8, run % k));
    sigma.push(run / k);
    (Word::from_raw(b.params, mu), sigma)
}

/// Inverse of [`mu_sigma`]: re-inserts `sigma[i] * k` zeros into the `i`-th zero
/// run of `mu`.
pub fn rebuild_from_mu_sigma(mu: &Word, sigma: &[usize]) -> Result<Word> {
    let m = mu.hamming_weight();
    if sigma.len() != m + 1 {
        return Err(Error::Dimension { expected: m + 1, got: sigma.len() });
    }
    let k = mu.params.k;
    let extra: usize = sigma.iter().sum::<usize>() * k;
    let mut b = Vec::with_capacity(mu.len() + extra);
    let mut run = 0usize;
    let mut gap = 0usize;
    for &s in &mu.symbols {
        if s == 0 {
            run += 1;
            if run >= k {
                return Err(Error::Domain("mu contains a zero run of length >= k".into()));
            }
            b.push(0);
        } else {
            b.extend(std::iter::repeat_n(0u8, sigma[gap] * k));
            b.push(s);
            gap += 1;
            run = 0;
        }
    }
    b.extend(std::iter::repeat_n(0u8, sigma[gap] * k));
    Ok(Word::from_raw(mu.params, b))
}

/// `(prefix, mu(b), sigma(b))` for `phi(x) = (prefix, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDecomposition {
    pub prefix: Word,
    pub mu: Word,
    pub sigma: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RootDecompositionJson {
    prefix: String,
    mu: String,
    sigma: Vec<usize>,
}

impl RootDecomposition {
    pub fn of(x: &Word) -> Result<Self> {
        let PhiImage { prefix, diff } = phi(x)?;
        let (mu, sigma) = mu_sigma(&diff);
        Ok(Self { prefix, mu, sigma })
    }

    /// The word this decomposition describes.
    pub fn word(&self) -> Result<Word> {
        let diff = rebuild_from_mu_sigma(&self.mu, &self.sigma)?;
        phi_inv(&PhiImage { prefix: self.prefix.clone(), diff })
    }

    pub fn root(&self) -> Result<Word> {
        phi_inv(&PhiImage { prefix: self.prefix.clone(), diff: self.mu.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RootDecompositionJson {
            prefix: self.prefix.to_string(),
            mu: self.mu.to_string(),
            sigma: self.sigma.clone(),
        })
        .expect("plain struct serializes")
    }

    pub fn from_json(params: DupParams, json: &str) -> Result<Self> {
        let raw: RootDecompositionJson = serde_json::from_str(json)
            .map_err(|e| Error::Parse { input: json.to_string(), reason: e.to_string() })?;
        let prefix = Word::parse(params, &raw.prefix)?;
        if prefix.len() != params.k {
            return Err(Error::Dimension { expected: params.k, got: prefix.len() });
        }
        let mu = Word::parse(params, &raw.mu)?;
        if mu.hamming_weight() + 1 != raw.sigma.len() {
            return Err(Error::Dimension { expected: mu.hamming_weight() + 1, got: raw.sigma.len() });
        }
        Ok(Self { prefix, mu, sigma: raw.sigma })
    }
}

/// The unique irreducible ancestor `R_k(x)`.
pub fn root(x: &Word) -> Result<Word> {
    RootDecomposition::of(x)?.root()
}

pub fn is_irreducible(x: &Word) -> Result<bool> {
    let diff = phi(x)?.diff;
    let k = x.params.k;
    let mut run = 0;
    for &s in diff.symbols() {
        if s == 0 {
            run += 1;
            if run >= k {
                return Ok(false);
            }
        } else {
            run = 0;
        }
    }
    Ok(true)
}

/// `m(x)`: Hamming weight of the difference string, shared by every word in the
/// cone of `R_k(x)`.
pub fn cone_dimension(x: &Word) -> Result<usize> {
    Ok(phi(x)?.diff.hamming_weight())
}

fn ensure_root(x_root: &Word) -> Result<()> {
    if is_irreducible(x_root)? {
        Ok(())
    } else {
        Err(Error::NotIrreducible)
    }
}

/// `psi_x(y)`: the position of `y` in the cone of the irreducible word `x_root`.
pub fn psi(x_root: &Word, y: &Word) -> Result<SimplexPoint> {
    x_root.ensure_same_params(y)?;
    ensure_root(x_root)?;
    let dec = RootDecomposition::of(y)?;
    if dec.root()? != *x_root {
        return Err(Error::OutsideCone);
    }
    Ok(SimplexPoint::new(dec.sigma))
}

pub fn psi_inv(x_root: &Word, v: &SimplexPoint) -> Result<Word> {
    ensure_root(x_root)?;
    let PhiImage { prefix, diff } = phi(x_root)?;
    let b = rebuild_from_mu_sigma(&diff, v.coords())?;
    phi_inv(&PhiImage { prefix, diff: b })
}

/// One path of `t` duplications at uniformly drawn positions.
pub fn channel_sample(x: &Word, t: usize, seed: u64) -> Result<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    channel_sample_with(x, t, &mut rng)
}

pub fn channel_sample_with<R: Rng + ?Sized>(x: &Word, t: usize, rng: &mut R) -> Result<Word> {
    x.ensure_long_enough()?;
    let k = x.params.k;
    let mut y = x.clone();
    for _ in 0..t {
        let i = rng.gen_range(0..=y.len() - k);
        y = tandem_duplicate(&y, i);
    }
    Ok(y)
}

/// All words of length `n` over `Z_q`, in lexicographic order.
pub fn all_words(params: DupParams, n: usize) -> impl Iterator<Item = Word> {
    let q = params.q;
    let total = u128::from(q)
        .checked_pow(n as u32)
        .expect("word space size fits in u128");
    (0..total).map(move |mut idx| {
        let mut s = vec![0u8; n];
        for slot in s.iter_mut().rev() {
            *slot = (idx % u128::from(q)) as u8;
            idx /= u128::from(q);
        }
        Word::from_raw(params, s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u32, k: usize, s: &str) -> Word {
        Word::parse(DupParams::new(q, k).unwrap(), s).unwrap()
    }

    #[test]
    fn duplicate_examples() {
        assert_eq!(tandem_duplicate(&w(3, 2, "0121"), 1), w(3, 2, "012121"));
        assert_eq!(tandem_duplicate(&w(2, 2, "01"), 1), w(2, 2, "01"));
        assert_eq!(tandem_duplicate(&w(2, 1, "010"), 0), w(2, 1, "0010"));
    }

    #[test]
    fn descendant_examples() {
        let d = descendants(&w(2, 1, "010"), 1).unwrap();
        let expected: HashSet<_> = ["0010", "0110", "0100"].iter().map(|s| w(2, 1, s)).collect();
        assert_eq!(d, expected);
        assert_eq!(descendants(&w(2, 2, "01"), 2).unwrap(), HashSet::from([w(2, 2, "010101")]));
        assert_eq!(descendants(&w(2, 1, "010"), 2).unwrap().len(), 6);
    }

    #[test]
    fn short_words_have_no_proper_descendants() {
        let x = w(2, 3, "01");
        assert_eq!(descendants(&x, 0).unwrap(), HashSet::from([x.clone()]));
        assert!(descendants(&x, 1).unwrap().is_empty());
        assert!(matches!(phi(&x), Err(Error::TooShort { len: 2, k: 3 })));
        assert!(root(&x).is_err());
        assert!(is_irreducible(&x).is_err());
    }

    #[test]
    fn descendant_cap_is_enforced() {
        let x = w(2, 1, "0101");
        assert!(matches!(
            descendants_with_cap(&x, 3, 5),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        let img = phi(&w(3, 2, "01221")).unwrap();
        assert_eq!(img.prefix, w(3, 2, "01"));
        assert_eq!(img.diff.symbols(), &[2, 1, 2]);
        assert_eq!(phi(&w(2, 2, "0101")).unwrap().diff.symbols(), &[0, 0]);
        assert_eq!(phi(&w(2, 2, "0110")).unwrap().diff.symbols(), &[1, 1]);
    }

    #[test]
    fn phi_inv_examples() {
        let inv = |q, k, a: &str, b: &str| {
            phi_inv(&PhiImage { prefix: w(q, k, a), diff: w(q, k, b) }).unwrap()
        };
        assert_eq!(inv(3, 2, "01", "212"), w(3, 2, "01221"));
        assert_eq!(inv(2, 2, "01", ""), w(2, 2, "01"));
        assert_eq!(inv(2, 1, "0", "11"), w(2, 1, "010"));
    }

    #[test]
    fn mu_sigma_examples() {
        let (mu, sigma) = mu_sigma(&w(2, 2, "00"));
        assert!(mu.is_empty());
        assert_eq!(sigma, vec![1]);
        let (mu, sigma) = mu_sigma(&w(2, 2, "11"));
        assert_eq!(mu, w(2, 2, "11"));
        assert_eq!(sigma, vec![0, 0, 0]);
        let (mu, sigma) = mu_sigma(&w(2, 2, "01001"));
        assert_eq!(mu, w(2, 2, "011"));
        assert_eq!(sigma, vec![0, 1, 0]);
    }

    #[test]
    fn rebuild_rejects_wrong_sigma_length() {
        assert!(matches!(
            rebuild_from_mu_sigma(&w(2, 2, "011"), &[0, 1]),
            Err(Error::Dimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn root_examples() {
        assert_eq!(root(&w(2, 2, "0101")).unwrap(), w(2, 2, "01"));
        assert_eq!(root(&w(2, 2, "0110")).unwrap(), w(2, 2, "0110"));
        assert_eq!(root(&w(2, 1, "00110")).unwrap(), w(2, 1, "010"));
        assert!(descendants(&w(2, 2, "01"), 1).unwrap().contains(&w(2, 2, "0101")));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&w(2, 2, "0110")).unwrap());
        assert!(!is_irreducible(&w(2, 2, "0101")).unwrap());
        assert!(is_irreducible(&w(2, 1, "010")).unwrap());
    }

    #[test]
    fn psi_examples() {
        let x = w(2, 1, "010");
        assert_eq!(psi(&x, &w(2, 1, "0010")).unwrap().coords(), &[1, 0, 0]);
        assert_eq!(psi(&x, &x).unwrap().coords(), &[0, 0, 0]);
        assert_eq!(psi(&w(2, 2, "01"), &w(2, 2, "010101")).unwrap().coords(), &[2]);
        assert!(matches!(psi(&x, &w(2, 1, "0011")), Err(Error::OutsideCone)));
        assert!(matches!(psi(&w(2, 1, "0010"), &w(2, 1, "0010")), Err(Error::NotIrreducible)));
    }

    #[test]
    fn psi_inv_examples() {
        let x = w(2, 1, "010");
        assert_eq!(psi_inv(&x, &SimplexPoint::new(vec![1, 0, 0])).unwrap(), w(2, 1, "0010"));
        assert_eq!(psi_inv(&x, &SimplexPoint::new(vec![0, 0, 0])).unwrap(), x);
        assert_eq!(
            psi_inv(&w(2, 2, "01"), &SimplexPoint::new(vec![3])).unwrap(),
            w(2, 2, "01010101")
        );
        assert!(matches!(
            psi_inv(&x, &SimplexPoint::new(vec![1, 0])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn channel_sample_examples() {
        let x = w(2, 2, "01");
        for seed in 0..5 {
            assert_eq!(channel_sample(&x, 2, seed).unwrap(), w(2, 2, "010101"));
        }
        let x = w(2, 1, "010");
        let d1 = descendants(&x, 1).unwrap();
        let y = channel_sample(&x, 1, 17).unwrap();
        assert!(d1.contains(&y));
        assert_eq!(y, channel_sample(&x, 1, 17).unwrap());
    }

    #[test]
    fn mixed_parameters_are_rejected() {
        let a = w(2, 1, "010");
        let b = w(3, 1, "010");
        assert!(matches!(psi(&a, &b), Err(Error::ParamMismatch { .. })));
    }

    #[test]
    fn text_encoding() {
        let p = DupParams::new(12, 2).unwrap();
        let x = Word::parse(p, "11,0,3").unwrap();
        assert_eq!(x.symbols(), &[11, 0, 3]);
        assert_eq!(x.to_string(), "11,0,3");
        assert!(Word::parse(DupParams::new(2, 1).unwrap(), "012").is_err());
        assert!(Word::parse(DupParams::new(3, 1).unwrap(), "0a").is_err());
    }

    #[test]
    fn root_decomposition_json() {
        let x = w(2, 2, "0101101");
        let dec = RootDecomposition::of(&x).unwrap();
        let json = dec.to_json();
        let back = RootDecomposition::from_json(x.params(), &json).unwrap();
        assert_eq!(back, dec);
        assert_eq!(back.word().unwrap(), x);
    }
}
