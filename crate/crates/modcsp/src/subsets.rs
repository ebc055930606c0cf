//! Deterministic subset enumeration used by the round-bounded solvers.
//!
//! Seeds are tried in weight order, and within a weight in colexicographic
//! order (S < T iff the largest element of the symmetric difference lies
//! in T). Solvers that promise "first hit wins" inherit their determinism
//! from this ordering.

/// All k-subsets of 0..n as sorted index vectors, in colex order.
pub struct ColexSubsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let cur = if k <= n { Some((0..k).collect()) } else { None };
        ColexSubsets { n, cur }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        let k = cur.len();
        // Odometer step: bump the smallest element that has room before
        // its successor, resetting everything below it.
        let mut next = cur.clone();
        let mut advanced = false;
        for i in 0..k {
            let bound = if i + 1 < k { next[i + 1] } else { self.n };
            if next[i] + 1 < bound {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.cur = Some(next);
        }
        Some(cur)
    }
}

/// Subsets of 0..n of size up to max_k, weight first, colex within a
/// weight. The empty set comes first.
pub fn subsets_by_weight(n: usize, max_k: usize) -> impl Iterator<Item = Vec<usize>> {
    let max_k = max_k.min(n);
    (0..=max_k).flat_map(move |k| ColexSubsets::new(n, k))
}

/// Saturating sum of binomials C(n, 0) + ... + C(n, d).
pub fn binom_sum_saturating(n: usize, d: usize) -> u64 {
    let d = d.min(n);
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 0..=d {
        total = total.saturating_add(c);
        if total > u64::MAX as u128 {
            return u64::MAX;
        }
        // next binomial; stop early once it saturates
        c = c.saturating_mul((n - k) as u128) / (k as u128 + 1);
        if c > u64::MAX as u128 {
            c = u64::MAX as u128;
        }
    }
    total.min(u64::MAX as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_is_correct() {
        let got: Vec<Vec<usize>> = ColexSubsets::new(4, 2).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn edge_sizes() {
        assert_eq!(ColexSubsets::new(3, 0).collect::<Vec<_>>(), vec![vec![]]);
        assert_eq!(
            ColexSubsets::new(3, 3).collect::<Vec<_>>(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(ColexSubsets::new(2, 3).count(), 0);
    }

    #[test]
    fn weight_ordering_counts() {
        let all: Vec<Vec<usize>> = subsets_by_weight(5, 5).collect();
        assert_eq!(all.len(), 32);
        assert_eq!(all[0], Vec::<usize>::new());
        // weights never decrease along the stream
        for w in all.windows(2) {
            assert!(w[0].len() <= w[1].len());
        }
        let capped: Vec<Vec<usize>> = subsets_by_weight(5, 2).collect();
        assert_eq!(capped.len(), 1 + 5 + 10);
    }

    #[test]
    fn binom_sums() {
        assert_eq!(binom_sum_saturating(5, 2), 16);
        assert_eq!(binom_sum_saturating(5, 5), 32);
        assert_eq!(binom_sum_saturating(5, 9), 32);
        assert_eq!(binom_sum_saturating(0, 0), 1);
        assert_eq!(binom_sum_saturating(200, 100), u64::MAX);
    }
}
