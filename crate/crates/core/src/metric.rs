//! The duplication distance `d_k` and cone-size formulas, together with the
//! literal breadth-first versions they are checked against.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;

use crate::combinatorics::binomial;
use crate::dupcore::{
    expand_layer, is_irreducible, psi, psi_inv, root, RootDecomposition, Word,
    DEFAULT_NODE_CAP,
};
use crate::error::{Error, Result};
use crate::simplex::SimplexPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

fn ensure_equal_lengths(x: &Word, y: &Word) -> Result<()> {
    x.ensure_same_params(y)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < x.params().k() {
        return Err(Error::TooShort { len: x.len(), k: x.params().k() });
    }
    Ok(())
}

fn half_l1(a: &[usize], b: &[usize]) -> usize {
    let l1: usize = a.iter().zip(b).map(|(&u, &v)| u.abs_diff(v)).sum();
    l1 / 2
}

/// `d_k(x, y)` for words of equal length: infinite across root classes, half the
/// L1 distance between the `sigma` vectors within one.
pub fn duplication_distance(x: &Word, y: &Word) -> Result<Distance> {
    ensure_equal_lengths(x, y)?;
    let dx = RootDecomposition::of(x)?;
    let dy = RootDecomposition::of(y)?;
    if dx.prefix != dy.prefix || dx.mu != dy.mu {
        return Ok(Distance::Infinite);
    }
    Ok(Distance::Finite(half_l1(&dx.sigma, &dy.sigma)))
}

/// Smallest `t <= t_max` with `D_k^t(x) ∩ D_k^t(y) != ∅`, by expanding both cones
/// layer by layer.
pub fn duplication_distance_bfs(x: &Word, y: &Word, t_max: usize) -> Result<Option<usize>> {
    duplication_distance_bfs_with_cap(x, y, t_max, DEFAULT_NODE_CAP)
}

pub fn duplication_distance_bfs_with_cap(
    x: &Word,
    y: &Word,
    t_max: usize,
    cap: usize,
) -> Result<Option<usize>> {
    ensure_equal_lengths(x, y)?;
    let mut lx = HashSet::from([x.clone()]);
    let mut ly = HashSet::from([y.clone()]);
    for t in 0..=t_max {
        if !lx.is_disjoint(&ly) {
            return Ok(Some(t));
        }
        if t < t_max {
            lx = expand_layer(&lx, cap)?;
            ly = expand_layer(&ly, cap)?;
        }
    }
    Ok(None)
}

/// `|D_k^t(x)| = C(t + m(x), m(x))` for irreducible `x`.
pub fn descendant_count(x: &Word, t: usize) -> Result<BigUint> {
    if !is_irreducible(x)? {
        return Err(Error::NotIrreducible);
    }
    let m = RootDecomposition::of(x)?.mu.hamming_weight() as i64;
    let count = binomial(t as i64 + m, m);
    // Deliberately wrong count, used to check that the oracle catches it.
    if cfg!(feature = "inject-fault") && t == 2 && m > 0 {
        return Ok(count + 1u32);
    }
    Ok(count)
}

/// `|D_k^t(y) ∩ D_k^t(y')|` for equal-length words sharing a root.
pub fn cone_intersection_size(y: &Word, y2: &Word, t: usize) -> Result<BigUint> {
    let d = match duplication_distance(y, y2)? {
        Distance::Finite(d) => d,
        Distance::Infinite => return Err(Error::RootMismatch),
    };
    if t < d {
        return Ok(BigUint::ZERO);
    }
    let m = RootDecomposition::of(y)?.mu.hamming_weight() as i64;
    Ok(binomial((t - d) as i64 + m, m))
}

/// Join and meet of two words in a common cone, computed coordinate-wise on
/// their `psi` images.
pub fn join_meet(y: &Word, y2: &Word) -> Result<(Word, Word)> {
    y.ensure_same_params(y2)?;
    let x = root(y)?;
    if root(y2)? != x {
        return Err(Error::RootMismatch);
    }
    let a = psi(&x, y)?;
    let b = psi(&x, y2)?;
    let join = SimplexPoint::new(a.coords().iter().zip(b.coords()).map(|(&u, &v)| u.max(v)).collect());
    let meet = SimplexPoint::new(a.coords().iter().zip(b.coords()).map(|(&u, &v)| u.min(v)).collect());
    Ok((psi_inv(&x, &join)?, psi_inv(&x, &meet)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dupcore::{descendants, DupParams};

    fn w(q: u32, k: usize, s: &str) -> Word {
        Word::parse(DupParams::new(q, k).unwrap(), s).unwrap()
    }

    #[test]
    fn distance_examples() {
        let x = w(2, 2, "0101");
        assert_eq!(duplication_distance(&x, &x).unwrap(), Distance::Finite(0));
        assert_eq!(
            duplication_distance(&w(2, 1, "0010"), &w(2, 1, "0100")).unwrap(),
            Distance::Finite(1)
        );
        assert_eq!(
            duplication_distance(&w(2, 2, "0110"), &w(2, 2, "0101")).unwrap(),
            Distance::Infinite
        );
        assert!(matches!(
            duplication_distance(&w(2, 2, "0110"), &w(2, 2, "011")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn bfs_examples() {
        let (a, b) = (w(2, 1, "0010"), w(2, 1, "0100"));
        assert_eq!(duplication_distance_bfs(&a, &b, 3).unwrap(), Some(1));
        assert_eq!(duplication_distance_bfs(&a, &a, 3).unwrap(), Some(0));
        assert_eq!(
            duplication_distance_bfs(&w(2, 2, "0110"), &w(2, 2, "0101"), 3).unwrap(),
            None
        );
    }

    #[test]
    fn count_examples() {
        let x = w(2, 1, "010");
        assert_eq!(descendant_count(&x, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(descendants(&x, 2).unwrap().len(), 6);
        assert_eq!(descendant_count(&x, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(descendant_count(&w(2, 2, "01"), 5).unwrap(), BigUint::from(1u32));
        assert!(matches!(descendant_count(&w(2, 2, "0101"), 1), Err(Error::NotIrreducible)));
    }

    #[test]
    fn intersection_examples() {
        let (a, b) = (w(2, 1, "0010"), w(2, 1, "0100"));
        assert_eq!(cone_intersection_size(&a, &b, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(cone_intersection_size(&a, &a, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(cone_intersection_size(&a, &b, 0).unwrap(), BigUint::ZERO);
        let da = descendants(&a, 1).unwrap();
        let db = descendants(&b, 1).unwrap();
        assert_eq!(da.intersection(&db).count(), 1);
        assert!(matches!(
            cone_intersection_size(&w(2, 2, "0110"), &w(2, 2, "0101"), 2),
            Err(Error::RootMismatch)
        ));
    }

    #[test]
    fn join_meet_examples() {
        let (a, b) = (w(2, 1, "0010"), w(2, 1, "0100"));
        let (join, meet) = join_meet(&a, &b).unwrap();
        let x = w(2, 1, "010");
        assert_eq!(psi(&x, &join).unwrap().coords(), &[1, 0, 1]);
        assert_eq!(meet, x);
        assert_eq!(join_meet(&a, &a).unwrap(), (a.clone(), a.clone()));
        assert_eq!(join_meet(&x, &a).unwrap(), (a.clone(), x.clone()));
        assert!(matches!(
            join_meet(&w(2, 2, "0110"), &w(2, 2, "0101")),
            Err(Error::RootMismatch)
        ));
    }
}
