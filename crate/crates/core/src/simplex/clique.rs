//! Exact maximum clique by branch and bound with greedy-colouring bounds.

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn empty(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64)] }
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    fn subtract_in_place(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Search {
    adj: Vec<Bitset>,
    best: Vec<usize>,
}

impl Search {
    /// Greedy sequential colouring of `cand`; returns vertices in colour order
    /// with the running colour count as an upper bound.
    fn colour_sort(&self, cand: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut uncoloured = cand.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.subtract_in_place(&self.adj[v]);
                uncoloured.remove(v);
                order.push(v);
                bounds.push(colour);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, mut cand: Bitset, current: &mut Vec<usize>) {
        let (order, bounds) = self.colour_sort(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + bounds[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            current.push(v);
            let next = cand.intersect(&self.adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(next, current);
            }
            current.pop();
            cand.remove(v);
        }
    }
}

/// Returns the vertices of a maximum clique, sorted ascending. `adjacent(i, j)`
/// must be symmetric.
pub fn max_clique(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // Relabel so that high-degree vertices come first; ties keep input order.
    let mut degree = vec![0usize; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(i, j) {
                degree[i] += 1;
                degree[j] += 1;
                pairs.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut label = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        label[old] = new;
    }
    let mut adj = vec![Bitset::empty(n); n];
    for (i, j) in pairs {
        adj[label[i]].insert(label[j]);
        adj[label[j]].insert(label[i]);
    }

    // Greedy incumbent: scan in relabelled order.
    let mut greedy: Vec<usize> = Vec::new();
    for v in 0..n {
        if greedy.iter().all(|&u| adj[v].words[u / 64] >> (u % 64) & 1 == 1) {
            greedy.push(v);
        }
    }

    let mut search = Search { adj, best: greedy };
    search.expand(Bitset::full(n), &mut Vec::new());
    let mut clique: Vec<usize> = search.best.iter().map(|&v| order[v]).collect();
    clique.sort_unstable();
    clique
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> usize {
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|i| {
                    (i + 1..n).all(|j| mask >> i & 1 == 0 || mask >> j & 1 == 0 || adjacent(i, j))
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn matches_brute_force_on_pseudo_random_graphs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        for n in 1..=12 {
            for density in [30u64, 50, 80] {
                let mut edges = vec![vec![false; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        let e = state % 100 < density;
                        edges[i][j] = e;
                        edges[j][i] = e;
                    }
                }
                let adjacent = |i: usize, j: usize| edges[i][j];
                let clique = max_clique(n, adjacent);
                assert_eq!(clique.len(), brute(n, &adjacent));
                for (a, &u) in clique.iter().enumerate() {
                    for &v in &clique[a + 1..] {
                        assert!(edges[u][v]);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_and_complete() {
        assert!(max_clique(0, |_, _| true).is_empty());
        assert_eq!(max_clique(5, |_, _| false).len(), 1);
        assert_eq!(max_clique(70, |_, _| true).len(), 70);
    }
}
