//! Brute-force reference implementations used only by tests.
//!
//! Everything here works on plain data (columns packed as `u64`, bit `r` is
//! row `r`) and shares no code with the main crate, so agreement between the
//! two is evidence rather than tautology. All routines are exponential and
//! meant for tiny inputs.

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;

pub type Q = Ratio<i64>;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Optimal transport cost by enumerating every integer coupling of the
/// masses scaled to a common denominator. Integer vertices of the
/// transportation polytope include an optimum, so this is exact.
pub fn w1_by_coupling_enumeration(supply: &[Q], demand: &[Q], cost: &[Vec<i64>]) -> Q {
    let total_s: Q = supply.iter().sum();
    let total_d: Q = demand.iter().sum();
    assert_eq!(total_s, total_d, "unbalanced measures");
    let scale = supply
        .iter()
        .chain(demand)
        .fold(1i64, |l, q| l / gcd(l, *q.denom()) * q.denom());
    let to_int = |q: &Q| (q * scale).to_integer();
    let rows: Vec<i64> = supply.iter().map(to_int).collect();
    let mut cols: Vec<i64> = demand.iter().map(to_int).collect();

    fn fill(
        i: usize,
        j: usize,
        rows: &mut [i64],
        cols: &mut [i64],
        cost: &[Vec<i64>],
        acc: i64,
        best: &mut i64,
    ) {
        if acc >= *best {
            return;
        }
        if i == rows.len() {
            if cols.iter().all(|&c| c == 0) {
                *best = acc;
            }
            return;
        }
        if j + 1 == cols.len() {
            // The last cell of a row takes whatever is left.
            let x = rows[i];
            if x > cols[j] {
                return;
            }
            let saved = rows[i];
            cols[j] -= x;
            rows[i] = 0;
            fill(i + 1, 0, rows, cols, cost, acc + x * cost[i][j], best);
            rows[i] = saved;
            cols[j] += x;
            return;
        }
        for x in 0..=rows[i].min(cols[j]) {
            rows[i] -= x;
            cols[j] -= x;
            fill(i, j + 1, rows, cols, cost, acc + x * cost[i][j], best);
            rows[i] += x;
            cols[j] += x;
        }
    }

    let mut rows = rows;
    let mut best = i64::MAX;
    fill(0, 0, &mut rows, &mut cols, cost, 0, &mut best);
    assert!(best != i64::MAX, "no coupling found");
    Q::new(best, scale)
}

/// Syndrome of a word given as a bit mask over coordinates.
fn syndrome(columns: &[u64], word: u64) -> u64 {
    columns
        .iter()
        .enumerate()
        .filter(|(j, _)| word >> j & 1 == 1)
        .fold(0, |s, (_, c)| s ^ c)
}

/// Breadth-first distances in the Cayley graph on syndromes generated by the
/// columns, from syndrome 0.
pub fn cayley_distances(columns: &[u64]) -> HashMap<u64, u32> {
    let mut dist = HashMap::from([(0u64, 0u32)]);
    let mut queue = VecDeque::from([0u64]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for &c in columns {
            dist.entry(x ^ c).or_insert_with(|| {
                queue.push_back(x ^ c);
                d + 1
            });
        }
    }
    dist
}

pub fn cayley_diameter(columns: &[u64]) -> u32 {
    cayley_distances(columns)
        .values()
        .copied()
        .max()
        .unwrap_or(0)
}

/// Covering radius of the dual code: the largest, over reachable syndromes,
/// of the least weight of a word with that syndrome. Walks all `2^n` words.
pub fn covering_radius(columns: &[u64]) -> u32 {
    let n = columns.len();
    assert!(n <= 24, "exhaustive walk over 2^{n} words");
    let mut least: HashMap<u64, u32> = HashMap::new();
    for word in 0u64..1 << n {
        let w = word.count_ones();
        least
            .entry(syndrome(columns, word))
            .and_modify(|m| *m = (*m).min(w))
            .or_insert(w);
    }
    least.values().copied().max().unwrap_or(0)
}

/// Number of distinct syndromes reachable, i.e. `2^rank`.
pub fn vertex_count(columns: &[u64]) -> usize {
    cayley_distances(columns).len()
}

/// Local measure at `x`: neighbor `x + v_j` gets one unit per generator `j`,
/// `x` itself one extra unit; all over `n + 1`.
pub fn local_measure(columns: &[u64], x: u64) -> Vec<(u64, Q)> {
    let mut units: HashMap<u64, i64> = HashMap::from([(x, 1)]);
    for &c in columns {
        *units.entry(x ^ c).or_default() += 1;
    }
    let total = columns.len() as i64 + 1;
    let mut out: Vec<(u64, Q)> = units
        .into_iter()
        .map(|(y, u)| (y, Q::new(u, total)))
        .collect();
    out.sort();
    out
}

/// Curvature `1 - W1(m_x, m_{x + v_i})` with distances from the full Cayley
/// graph and transport by coupling enumeration.
pub fn curvature_along(columns: &[u64], x: u64, i: usize) -> Q {
    let dist = cayley_distances(columns);
    let d = |a: u64, b: u64| dist[&(a ^ b)] as i64;
    let mu = local_measure(columns, x);
    let nu = local_measure(columns, x ^ columns[i]);
    let cost: Vec<Vec<i64>> = mu
        .iter()
        .map(|(a, _)| nu.iter().map(|(b, _)| d(*a, *b)).collect())
        .collect();
    let supply: Vec<Q> = mu.iter().map(|p| p.1).collect();
    let demand: Vec<Q> = nu.iter().map(|p| p.1).collect();
    Q::from_integer(1) - w1_by_coupling_enumeration(&supply, &demand, &cost)
}

/// Graph curvature: minimum over nonzero directions at the origin.
pub fn graph_curvature(columns: &[u64]) -> Option<Q> {
    (0..columns.len())
        .filter(|&i| columns[i] != 0)
        .map(|i| curvature_along(columns, 0, i))
        .min()
}

/// Maximum number of disjoint pairs `{j, l}`, `i` excluded, with
/// `v_j + v_l = v_i`, by exhaustive branching on the smallest free index.
pub fn max_disjoint_pairs(columns: &[u64], i: usize) -> usize {
    let n = columns.len();
    let target = columns[i];
    fn go(columns: &[u64], target: u64, free: u64) -> usize {
        if free == 0 {
            return 0;
        }
        let j = free.trailing_zeros() as usize;
        let rest = free & !(1 << j);
        let mut best = go(columns, target, rest);
        let mut others = rest;
        while others != 0 {
            let l = others.trailing_zeros() as usize;
            others &= others - 1;
            if columns[j] ^ columns[l] == target {
                best = best.max(1 + go(columns, target, rest & !(1 << l)));
            }
        }
        best
    }
    go(columns, target, ((1u64 << n) - 1) & !(1 << i))
}

/// Number of 3-subsets `{i, j, k}` with `v_i + v_j + v_k = 0`.
pub fn sigma_at(columns: &[u64], i: usize) -> usize {
    let n = columns.len();
    let mut count = 0;
    for j in 0..n {
        for k in j + 1..n {
            if j != i && k != i && columns[i] ^ columns[j] ^ columns[k] == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Maximum number of disjoint triples, `i` excluded, summing to `v_i`.
pub fn max_disjoint_triples(columns: &[u64], i: usize) -> usize {
    let n = columns.len();
    let target = columns[i];
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if ![a, b, c].contains(&i) && columns[a] ^ columns[b] ^ columns[c] == target {
                    triples.push((1u64 << a) | (1 << b) | (1 << c));
                }
            }
        }
    }
    fn go(triples: &[u64], used: u64) -> usize {
        match triples.split_first() {
            None => 0,
            Some((&t, rest)) => {
                let skip = go(rest, used);
                if t & used == 0 {
                    skip.max(1 + go(rest, used | t))
                } else {
                    skip
                }
            }
        }
    }
    go(&triples, 0)
}

/// Rank over `F_2` of a list of packed vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let reduced = basis.iter().fold(v, |x, &b| x.min(x ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_enumeration_small() {
        let q = |p, d| Q::new(p, d);
        let cost = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(
            w1_by_coupling_enumeration(&[q(1, 2), q(1, 2)], &[q(1, 2), q(1, 2)], &cost),
            q(0, 1)
        );
        assert_eq!(
            w1_by_coupling_enumeration(&[q(1, 1), q(0, 1)], &[q(1, 3), q(2, 3)], &cost),
            q(2, 3)
        );
    }

    #[test]
    fn triangle_curvature() {
        // K_4 from the columns 01, 10, 11.
        assert_eq!(graph_curvature(&[1, 2, 3]), Some(Q::from_integer(1)));
        // Square: Q_2.
        assert_eq!(graph_curvature(&[1, 2]), Some(Q::new(2, 3)));
    }

    #[test]
    fn combinatorial_counts() {
        let hadamard3 = [1u64, 2, 3, 4, 5, 6, 7];
        assert_eq!(max_disjoint_pairs(&hadamard3, 0), 3);
        assert_eq!(sigma_at(&hadamard3, 0), 3);
        assert_eq!(max_disjoint_triples(&[1, 2, 4, 7], 3), 1);
        assert_eq!(covering_radius(&[1, 2, 4]), 3);
        assert_eq!(rank(&[3, 5, 6]), 2);
        assert_eq!(vertex_count(&[3, 5, 6]), 4);
    }
}
