//! Coloring families for color coding: either every function from the items
//! to `k` colors, or a seeded random family sized so that some coloring
//! assigns distinct colors to any fixed `k`-subset with probability at least
//! `1 - failure_bound`.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Item;

/// One coloring: color in `1..=k` per item, in item order.
pub type Coloring = Vec<u32>;

/// How the family is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringMode {
    /// All `k^n` colorings; covers every subset with certainty.
    Exhaustive,
    /// `ceil(e^k * ln(1/failure_bound))` independent uniform colorings.
    Randomized { seed: u64 },
}

/// A concrete family of colorings of `n` items with `k` colors.
#[derive(Debug, Clone)]
pub struct ColoringFamily {
    pub n: usize,
    pub k: usize,
    pub colorings: Vec<Coloring>,
    pub mode: ColoringMode,
    /// Per-subset miss probability bound; zero for the exhaustive family.
    pub failure_bound: f64,
}

/// Number of colorings the randomized family uses for the given parameters.
pub fn randomized_family_size(k: usize, failure_bound: f64) -> Result<usize> {
    if !(failure_bound > 0.0 && failure_bound < 1.0) {
        return Err(Error::Coloring(format!(
            "failure bound {failure_bound} outside (0,1)"
        )));
    }
    let t = (std::f64::consts::E.powi(k as i32) * (1.0 / failure_bound).ln()).ceil();
    if !t.is_finite() || t > 1e9 {
        return Err(Error::Budget(format!("coloring family size {t} too large")));
    }
    Ok(t as usize)
}

impl ColoringFamily {
    /// All `k^n` colorings, in lexicographic order. Errors if the family
    /// would exceed `budget` colorings.
    pub fn exhaustive(n: usize, k: usize, budget: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Coloring("k must be at least 1".into()));
        }
        let mut size: usize = 1;
        for _ in 0..n {
            size = size
                .checked_mul(k)
                .filter(|&s| s <= budget)
                .ok_or_else(|| {
                    Error::Budget(format!("exhaustive family k^n = {k}^{n} exceeds {budget}"))
                })?;
        }
        let mut colorings = Vec::with_capacity(size);
        let mut current = vec![1u32; n];
        loop {
            colorings.push(current.clone());
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(ColoringFamily {
                        n,
                        k,
                        colorings,
                        mode: ColoringMode::Exhaustive,
                        failure_bound: 0.0,
                    });
                }
                pos -= 1;
                if current[pos] < k as u32 {
                    current[pos] += 1;
                    for c in &mut current[pos + 1..] {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    /// Seeded random family of `ceil(e^k * ln(1/failure_bound))` colorings.
    pub fn randomized(n: usize, k: usize, seed: u64, failure_bound: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Coloring("k must be at least 1".into()));
        }
        let t = randomized_family_size(k, failure_bound)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colorings = (0..t)
            .map(|_| (0..n).map(|_| rng.gen_range(1..=k as u32)).collect())
            .collect();
        Ok(ColoringFamily {
            n,
            k,
            colorings,
            mode: ColoringMode::Randomized { seed },
            failure_bound,
        })
    }

    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    /// Applies coloring `idx` to the items (positionally).
    pub fn apply(&self, idx: usize, items: &[Item]) -> Vec<Item> {
        let coloring = &self.colorings[idx];
        assert_eq!(items.len(), self.n, "item count differs from family arity");
        items
            .iter()
            .zip(coloring)
            .map(|(it, &c)| Item { color: Some(c), ..*it })
            .collect()
    }
}

/// True when the coloring assigns pairwise distinct colors to the subset
/// (given by positions into the item list).
pub fn is_good_for(coloring: &Coloring, subset: &[usize]) -> bool {
    let mut seen = HashSet::new();
    subset.iter().all(|&i| seen.insert(coloring[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools_free::combinations;

    /// Tiny local combinations helper so the test has no extra dependency.
    mod itertools_free {
        pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
    }

    #[test]
    fn randomized_size_example() {
        assert_eq!(randomized_family_size(3, 0.01).unwrap(), 93);
        assert!(randomized_family_size(3, 0.0).is_err());
        assert!(randomized_family_size(3, 1.0).is_err());
    }

    #[test]
    fn exhaustive_counts_and_budget() {
        let fam = ColoringFamily::exhaustive(4, 3, 1_000).unwrap();
        assert_eq!(fam.len(), 81);
        assert_eq!(fam.colorings[0], vec![1, 1, 1, 1]);
        assert_eq!(fam.colorings[80], vec![3, 3, 3, 3]);
        assert!(ColoringFamily::exhaustive(20, 3, 1_000).is_err());
    }

    #[test]
    fn exhaustive_covers_all_subsets() {
        for k in 1..=3usize {
            let fam = ColoringFamily::exhaustive(4, k, 100_000).unwrap();
            for subset in combinations(4, k) {
                assert!(
                    fam.colorings.iter().any(|c| is_good_for(c, &subset)),
                    "subset {subset:?} missed for k={k}"
                );
            }
        }
    }

    #[test]
    fn randomized_deterministic_per_seed() {
        let a = ColoringFamily::randomized(5, 3, 42, 0.01).unwrap();
        let b = ColoringFamily::randomized(5, 3, 42, 0.01).unwrap();
        assert_eq!(a.colorings, b.colorings);
        assert_eq!(a.len(), 93);
        let c = ColoringFamily::randomized(5, 3, 43, 0.01).unwrap();
        assert_ne!(a.colorings, c.colorings);
        for coloring in &a.colorings {
            assert!(coloring.iter().all(|&x| (1..=3).contains(&x)));
        }
    }

    #[test]
    fn is_good_for_examples() {
        assert!(is_good_for(&vec![1, 2, 3, 1], &[0, 1, 2]));
        assert!(!is_good_for(&vec![1, 2, 3, 1], &[0, 1, 3]));
        assert!(is_good_for(&vec![1, 2], &[]));
    }

    #[test]
    fn apply_sets_colors() {
        let fam = ColoringFamily::exhaustive(2, 2, 100).unwrap();
        let items = vec![Item::new(10, 2, 1), Item::new(11, 3, 2)];
        let colored = fam.apply(1, &items);
        assert_eq!(colored[0].color, Some(1));
        assert_eq!(colored[1].color, Some(2));
        assert_eq!(colored[0].id, 10);
    }
}
