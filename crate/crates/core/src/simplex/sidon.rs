//! Sidon (`B_h`) sets modulo `L` and the congruence codes they induce.
//!
//! If every `h`-element multiset of the weights `w_0..w_m` has a distinct sum
//! modulo `L`, then two points of `Δ^m_r` in the same class of
//! `x ↦ Σ w_i x_i (mod L)` are at half-distance at least `h + 1`: a collision at
//! half-distance `δ <= h` would give two distinct `δ`-multisets with equal sums,
//! and padding both with `h - δ` copies of `w_0` contradicts the `B_h` property.

use std::collections::HashSet;

use super::{enumerate_simplex, SimplexCode};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};

/// Node budget for the exhaustive smallest-modulus search.
const SEARCH_BUDGET: u64 = 200_000;

/// Largest element the integer greedy fallback may reach.
const GREEDY_LIMIT: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidonSet {
    pub elements: Vec<u64>,
    pub modulus: u64,
    /// Whether every smaller modulus (down to the starting bound) was ruled out
    /// exhaustively.
    pub minimal: bool,
}

/// Exhaustive check that all `h`-multisets of `elements` have distinct sums mod `modulus`.
pub fn is_sidon(elements: &[u64], h: usize, modulus: u64) -> bool {
    fn walk(
        elements: &[u64],
        start: usize,
        left: usize,
        sum: u64,
        modulus: u64,
        seen: &mut HashSet<u64>,
    ) -> bool {
        if left == 0 {
            return seen.insert(sum % modulus);
        }
        (start..elements.len()).all(|i| {
            walk(elements, i, left - 1, (sum + elements[i]) % modulus, modulus, seen)
        })
    }
    modulus > 0 && walk(elements, 0, h, 0, modulus, &mut HashSet::new())
}

/// Finds `size` residues forming a `B_h` set modulo `L`, trying `L` upward from
/// `max(modulus_hint, C(size + h - 1, h))`.
///
/// Each modulus is searched exhaustively by backtracking (with the first element
/// fixed to 0) until a shared node budget runs out; after that the integer
/// Mian–Chowla greedy set is returned with a modulus large enough that no sum
/// wraps around.
pub fn sidon_set(h: usize, size: usize, modulus_hint: u64) -> Result<SidonSet> {
    if h == 0 || size == 0 {
        return Err(Error::Domain(format!("sidon_set needs h >= 1 and size >= 1 (h={h}, size={size})")));
    }
    let multisets = binomial((size + h - 1) as i64, h as i64);
    let lower = u64::try_from(&multisets)
        .map_err(|_| Error::SearchBudget(format!("{size} elements of order {h}")))?
        .max(modulus_hint)
        .max(1);

    let greedy = mian_chowla(h, size)?;
    let greedy_modulus = (h as u64 * greedy.last().copied().unwrap_or(0) + 1).max(lower);

    let mut budget = SEARCH_BUDGET;
    let mut exhaustive = true;
    for modulus in lower..greedy_modulus {
        match search_modulus(h, size, modulus, &mut budget) {
            Some(elements) => {
                return Ok(SidonSet { elements, modulus, minimal: exhaustive });
            }
            None if budget == 0 => {
                exhaustive = false;
                break;
            }
            None => {}
        }
    }
    Ok(SidonSet { elements: greedy, modulus: greedy_modulus, minimal: exhaustive })
}

fn search_modulus(h: usize, size: usize, modulus: u64, budget: &mut u64) -> Option<Vec<u64>> {
    let l = modulus as usize;
    // levels[i] lists the sums of all i-multisets of the chosen elements.
    let levels: Vec<Vec<u64>> = vec![vec![0]; h + 1];
    let mut top = vec![false; l];
    top[0] = true;
    let mut chosen = vec![0u64];
    if dfs(h, size, modulus, &mut chosen, levels, &mut top, budget) {
        Some(chosen)
    } else {
        None
    }
}

fn dfs(
    h: usize,
    size: usize,
    modulus: u64,
    chosen: &mut Vec<u64>,
    levels: Vec<Vec<u64>>,
    top: &mut [bool],
    budget: &mut u64,
) -> bool {
    if chosen.len() == size {
        return true;
    }
    let last = *chosen.last().expect("starts with 0");
    let remaining = (size - chosen.len()) as u64;
    let mut fresh = Vec::new();
    for e in last + 1..modulus {
        if modulus - e < remaining {
            break;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;

        // New h-sums use e at least once: j copies of e plus an (h-j)-multiset.
        fresh.clear();
        let mut ok = true;
        'outer: for j in 1..=h {
            let shift = (j as u64 * e) % modulus;
            for &s in &levels[h - j] {
                let v = ((s + shift) % modulus) as usize;
                if top[v] {
                    ok = false;
                    break 'outer;
                }
                top[v] = true;
                fresh.push(v);
            }
        }
        if ok {
            let mut next = levels.clone();
            for i in 1..=h {
                for j in 1..=i {
                    let shift = (j as u64 * e) % modulus;
                    let add: Vec<u64> = levels[i - j].iter().map(|&s| (s + shift) % modulus).collect();
                    next[i].extend(add);
                }
            }
            chosen.push(e);
            if dfs(h, size, modulus, chosen, next, top, budget) {
                return true;
            }
            chosen.pop();
        }
        for &v in &fresh {
            top[v] = false;
        }
        if *budget == 0 {
            return false;
        }
    }
    false
}

/// Integer greedy `B_h` sequence starting at 0.
fn mian_chowla(h: usize, size: usize) -> Result<Vec<u64>> {
    let mut levels: Vec<Vec<u64>> = vec![vec![0]; h + 1];
    let mut top: HashSet<u64> = HashSet::from([0]);
    let mut chosen = vec![0u64];
    let mut candidate = 1u64;
    while chosen.len() < size {
        if candidate > GREEDY_LIMIT {
            return Err(Error::SearchBudget(format!("greedy B_{h} set of size {size}")));
        }
        let mut fresh = HashSet::new();
        let ok = (1..=h).all(|j| {
            levels[h - j].iter().all(|&s| {
                let v = s + j as u64 * candidate;
                !top.contains(&v) && fresh.insert(v)
            })
        });
        if ok {
            let mut next = levels.clone();
            for i in 1..=h {
                for j in 1..=i {
                    next[i].extend(levels[i - j].iter().map(|&s| s + j as u64 * candidate));
                }
            }
            levels = next;
            top.extend(fresh);
            chosen.push(candidate);
        }
        candidate += 1;
    }
    Ok(chosen)
}

/// Number of points of `Δ^m_r` (with `m + 1 = weights.len()`) in each residue
/// class of `x ↦ Σ w_i x_i (mod modulus)`.
pub fn congruence_class_sizes(weights: &[u64], modulus: u64, r: usize) -> Result<Vec<u128>> {
    if modulus == 0 || weights.is_empty() {
        return Err(Error::Domain("need a positive modulus and at least one weight".into()));
    }
    let l = modulus as usize;
    let overflow = || Error::Domain("class size overflows u128".into());
    // table[s * l + c]: points of weight s over the processed coordinates with residue c.
    let mut table = vec![0u128; (r + 1) * l];
    table[0] = 1;
    for &w in weights {
        let mut next = vec![0u128; (r + 1) * l];
        for s in 0..=r {
            for c in 0..l {
                let count = table[s * l + c];
                if count == 0 {
                    continue;
                }
                let mut residue = c as u64;
                for x in 0..=r - s {
                    let slot = &mut next[(s + x) * l + residue as usize];
                    *slot = slot.checked_add(count).ok_or_else(overflow)?;
                    residue = (residue + w) % modulus;
                }
            }
        }
        table = next;
    }
    Ok(table[r * l..].to_vec())
}

fn sidon_weights(m: usize, d: usize) -> Result<SidonSet> {
    sidon_set(d - 1, m + 1, 0)
}

/// Largest congruence class of a `B_{d-1}` weighting of `Δ^m_r`; every pair of
/// points is at half-distance `>= d`.
pub fn sidon_code(m: usize, r: usize, d: usize) -> Result<SimplexCode> {
    let points = enumerate_simplex(m, r)?;
    if d <= 1 {
        return SimplexCode::new(m, r, d, points);
    }
    let set = sidon_weights(m, d)?;
    let residue_of = |p: &super::SimplexPoint| {
        p.coords()
            .iter()
            .zip(&set.elements)
            .fold(0u64, |acc, (&x, &w)| (acc + (x as u64 % set.modulus) * w) % set.modulus)
    };
    let mut counts = vec![0usize; set.modulus as usize];
    for p in &points {
        counts[residue_of(p) as usize] += 1;
    }
    let best = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(c, _)| c as u64)
        .unwrap_or(0);
    let chosen = points.into_iter().filter(|p| residue_of(p) == best).collect();
    SimplexCode::new(m, r, d, chosen)
}

/// Size of [`sidon_code`] computed by counting residue classes, without
/// enumerating the simplex.
pub fn sidon_code_size(m: usize, r: usize, d: usize) -> Result<u128> {
    if d <= 1 {
        let size = binomial((r + m) as i64, m as i64);
        return u128::try_from(&size).map_err(|_| Error::Domain("simplex size overflows u128".into()));
    }
    let set = sidon_weights(m, d)?;
    let sizes = congruence_class_sizes(&set.elements, set.modulus, r)?;
    Ok(sizes.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::simplex_size;
    use num_bigint::BigUint;

    #[test]
    fn order_one_is_an_interval() {
        for s in 1..8 {
            let set = sidon_set(1, s, 0).unwrap();
            assert_eq!(set.elements, (0..s as u64).collect::<Vec<_>>());
            assert_eq!(set.modulus, s as u64);
            assert!(set.minimal);
        }
    }

    #[test]
    fn order_two_small() {
        let set = sidon_set(2, 3, 0).unwrap();
        assert!(is_sidon(&set.elements, 2, set.modulus));
        assert!(set.modulus <= 7);
        assert!(is_sidon(&[0, 1, 3], 2, 7));
        assert!(!is_sidon(&[0, 1, 2], 2, 7));
    }

    #[test]
    fn outputs_are_sidon() {
        for h in 1..=3 {
            for size in 1..=7 {
                let set = sidon_set(h, size, 0).unwrap();
                assert_eq!(set.elements.len(), size);
                assert!(is_sidon(&set.elements, h, set.modulus), "h={h} size={size} {set:?}");
            }
        }
    }

    #[test]
    fn modulus_hint_is_a_lower_bound() {
        let set = sidon_set(1, 3, 10).unwrap();
        assert_eq!(set.modulus, 10);
    }

    #[test]
    fn greedy_fallback_is_sidon() {
        let g = mian_chowla(2, 12).unwrap();
        assert_eq!(&g[..6], &[0, 1, 3, 7, 12, 20]);
        assert!(is_sidon(&g, 2, 2 * g[11] + 1));
    }

    #[test]
    fn rejects_degenerate_requests() {
        assert!(sidon_set(0, 3, 0).is_err());
        assert!(sidon_set(2, 0, 0).is_err());
    }

    #[test]
    fn code_examples() {
        assert_eq!(sidon_code(2, 3, 1).unwrap().len(), 10);
        let code = sidon_code(2, 4, 2).unwrap();
        let l = sidon_set(1, 3, 0).unwrap().modulus;
        assert!(code.len() as u64 * l >= 15);
        assert!(code.recompute_min_half_distance().unwrap() >= 2);
    }

    #[test]
    fn class_counts_match_enumeration() {
        for m in 1..=4 {
            for r in 0..=6 {
                for d in 1..=3 {
                    let code = sidon_code(m, r, d).unwrap();
                    assert_eq!(sidon_code_size(m, r, d).unwrap(), code.len() as u128);
                    if d >= 2 {
                        let set = sidon_set(d - 1, m + 1, 0).unwrap();
                        let sizes = congruence_class_sizes(&set.elements, set.modulus, r).unwrap();
                        let total: u128 = sizes.iter().sum();
                        assert_eq!(BigUint::from(total), simplex_size(m, r));
                    }
                }
            }
        }
    }
}
