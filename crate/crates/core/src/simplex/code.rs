use serde::{Deserialize, Serialize};

use super::{
    enumerate_simplex_with_cap, half_manhattan_unchecked, max_clique,
    SimplexPoint, DEFAULT_POINT_CAP,
};
use crate::error::{Error, Result};

/// Exact maximum codes are only attempted on simplices with at most this many points.
pub const DEFAULT_CLIQUE_POINT_CAP: usize = 2000;

/// A code in `Δ^m_r` designed for minimum half-Manhattan distance `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCode {
    m: usize,
    r: usize,
    d: usize,
    points: Vec<SimplexPoint>,
    min_half_distance: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SimplexCodeJson {
    m: usize,
    r: usize,
    d: usize,
    points: Vec<SimplexPoint>,
}

impl SimplexCode {
    /// Validates membership in `Δ^m_r` and the designed distance.
    pub fn new(m: usize, r: usize, d: usize, mut points: Vec<SimplexPoint>) -> Result<Self> {
        for p in &points {
            if p.coords().len() != m + 1 {
                return Err(Error::Dimension { expected: m + 1, got: p.coords().len() });
            }
            if p.weight() != r {
                return Err(Error::WeightMismatch { left: r, right: p.weight() });
            }
        }
        points.sort();
        points.dedup();
        let min_half_distance = min_pairwise(&points);
        if min_half_distance.is_some_and(|md| md < d) {
            return Err(Error::InvalidCode(format!(
                "minimum half-distance {} is below the designed distance {d}",
                min_half_distance.unwrap_or_default()
            )));
        }
        Ok(Self { m, r, d, points, min_half_distance })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Designed distance.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[SimplexPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimum half-distance over distinct pairs; `None` for fewer than two points.
    pub fn min_half_distance(&self) -> Option<usize> {
        self.min_half_distance
    }

    /// Recomputes the minimum distance from scratch.
    pub fn recompute_min_half_distance(&self) -> Option<usize> {
        min_pairwise(&self.points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SimplexCodeJson {
            m: self.m,
            r: self.r,
            d: self.d,
            points: self.points.clone(),
        })
        .expect("plain struct serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: SimplexCodeJson = serde_json::from_str(json)
            .map_err(|e| Error::Parse { input: json.chars().take(80).collect(), reason: e.to_string() })?;
        Self::new(raw.m, raw.r, raw.d, raw.points)
    }
}

fn min_pairwise(points: &[SimplexPoint]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = half_manhattan_unchecked(a, b);
            best = Some(best.map_or(d, |cur| cur.min(d)));
        }
    }
    best
}

/// A maximum code, i.e. one of size `M(m, r, d)`, found as a maximum clique of
/// the graph joining points at half-distance `>= d`.
pub fn exact_max_code(m: usize, r: usize, d: usize) -> Result<SimplexCode> {
    exact_max_code_with_cap(m, r, d, DEFAULT_CLIQUE_POINT_CAP)
}

pub fn exact_max_code_with_cap(m: usize, r: usize, d: usize, cap: usize) -> Result<SimplexCode> {
    let points = enumerate_simplex_with_cap(m, r, cap)?;
    if d <= 1 {
        return SimplexCode::new(m, r, d, points);
    }
    let clique = max_clique(points.len(), |i, j| {
        half_manhattan_unchecked(&points[i], &points[j]) >= d
    });
    let chosen = clique.into_iter().map(|i| points[i].clone()).collect();
    SimplexCode::new(m, r, d, chosen)
}

/// Lexicographic greedy code: keeps each point that is at distance `>= d` from
/// all previously kept points.
pub fn greedy_code(m: usize, r: usize, d: usize) -> Result<SimplexCode> {
    greedy_code_with_cap(m, r, d, DEFAULT_POINT_CAP)
}

pub fn greedy_code_with_cap(m: usize, r: usize, d: usize, cap: usize) -> Result<SimplexCode> {
    let points = enumerate_simplex_with_cap(m, r, cap)?;
    let mut chosen: Vec<SimplexPoint> = Vec::new();
    for p in points {
        if chosen.iter().all(|c| half_manhattan_unchecked(c, &p) >= d) {
            chosen.push(p);
        }
    }
    SimplexCode::new(m, r, d, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{ball_size, simplex_size};
    use num_bigint::BigUint;

    #[test]
    fn exact_examples() {
        assert_eq!(exact_max_code(1, 4, 2).unwrap().len(), 3);
        assert_eq!(exact_max_code(2, 3, 1).unwrap().len(), 10);
        assert_eq!(exact_max_code(2, 2, 3).unwrap().len(), 1);
        assert!(matches!(
            exact_max_code_with_cap(4, 10, 2, 500),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_code(2, 3, 1).unwrap().len(), 10);
        assert_eq!(greedy_code(1, 4, 2).unwrap().len(), 3);
        let code = greedy_code(3, 5, 2).unwrap();
        assert!(code.recompute_min_half_distance().unwrap() >= 2);
    }

    #[test]
    fn greedy_meets_gilbert_varshamov() {
        for m in 1..=4 {
            for r in 0..=6 {
                for d in 1..=3 {
                    let code = greedy_code(m, r, d).unwrap();
                    let lhs = BigUint::from(code.len()) * ball_size(m, d - 1);
                    assert!(lhs >= simplex_size(m, r), "m={m} r={r} d={d}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let code = exact_max_code(2, 4, 2).unwrap();
        let back = SimplexCode::from_json(&code.to_json()).unwrap();
        assert_eq!(back, code);
        let bad = r#"{"m":1,"r":2,"d":2,"points":[[0,2],[1,1]]}"#;
        assert!(matches!(SimplexCode::from_json(bad), Err(Error::InvalidCode(_))));
        let off = r#"{"m":1,"r":2,"d":1,"points":[[0,3]]}"#;
        assert!(matches!(SimplexCode::from_json(off), Err(Error::WeightMismatch { .. })));
    }
}
