//! Seeded, replacement-free samplers.
//!
//! Every sampled analysis draws its entire sample list up front from a
//! `ChaCha8Rng` seeded by the caller, before any parallel dispatch. Results
//! are then reductions (max/min) over that fixed list, so they do not depend
//! on thread count or scheduling.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `k` indices from `0..n`, without replacement, in draw order.
pub fn sample_indices(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if k >= n {
        return (0..n).collect();
    }
    // Partial Fisher-Yates on an index table.
    let mut idx: Vec<usize> = (0..n).collect();
    let (head, _) = idx.partial_shuffle(rng, k);
    head.to_vec()
}

/// Up to `k` distinct unordered pairs `(i, j)`, `i < j`, from `0..n`.
pub fn sample_pairs(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let total = n.saturating_mul(n.saturating_sub(1)) / 2;
    if total <= k {
        let mut all = Vec::with_capacity(total);
        for i in 0..n {
            for j in (i + 1)..n {
                all.push((i, j));
            }
        }
        return all;
    }
    let mut seen = HashSet::with_capacity(k * 2);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let p = (i.min(j), i.max(j));
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}

/// Up to `k` distinct sorted triples from `0..n`.
pub fn sample_triples(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    let total = choose3(n);
    if total <= k as u128 {
        let mut all = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    all.push([i, j, l]);
                }
            }
        }
        return all;
    }
    let mut seen = HashSet::with_capacity(k * 2);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let mut t = [
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        ];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            continue;
        }
        if seen.insert(t) {
            out.push(t);
        }
    }
    out
}

/// Up to `k` distinct sorted quadruples from `0..n`.
pub fn sample_quadruples(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 4]> {
    let total = choose4(n);
    if total <= k as u128 {
        let mut all = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for m in (l + 1)..n {
                        all.push([i, j, l, m]);
                    }
                }
            }
        }
        return all;
    }
    let mut seen = HashSet::with_capacity(k * 2);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let mut q = [
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        ];
        q.sort_unstable();
        if q[0] == q[1] || q[1] == q[2] || q[2] == q[3] {
            continue;
        }
        if seen.insert(q) {
            out.push(q);
        }
    }
    out
}

pub fn choose3(n: usize) -> u128 {
    if n < 3 {
        return 0;
    }
    let n = n as u128;
    n * (n - 1) * (n - 2) / 6
}

pub fn choose4(n: usize) -> u128 {
    if n < 4 {
        return 0;
    }
    let n = n as u128;
    n * (n - 1) * (n - 2) * (n - 3) / 24
}
