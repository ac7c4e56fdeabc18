//! Coding-side combinatorics: disjoint representation families, LCC/LTC
//! parameters, the random restriction set `B`, and contraction to `C_B`.
//!
//! Coordinates are 0-based throughout.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::graph::{build_coset_graph, CosetGraph};
use crate::transport::Rational;
use crate::zoo::LinearCode;

/// Largest block length for exhaustive triple packing and partition search.
pub const MAX_EXACT_PACKING_LENGTH: usize = 16;

/// Column value -> indices carrying it, ascending.
fn classes(code: &LinearCode) -> HashMap<&BitVector, Vec<usize>> {
    let mut map: HashMap<&BitVector, Vec<usize>> = HashMap::new();
    for (i, c) in code.columns().iter().enumerate() {
        map.entry(c).or_default().push(i);
    }
    map
}

/// Maximum number of pairwise disjoint pairs `{j, l}` with `i` not in `{j, l}`
/// and `v_j + v_l = v_i`.
///
/// The pairs form a disjoint union of complete bipartite graphs between the
/// value classes `a` and `a + v_i`, so the maximum matching is the sum of the
/// smaller class sizes, with `i` removed from its own class. When `v_i = 0`
/// the pairs are equal columns and each class contributes `floor(w / 2)`.
pub fn disjoint_pair_count(code: &LinearCode, i: usize) -> usize {
    let vi = code.column(i);
    let size = |a: &BitVector| {
        let w = code
            .column_multiset()
            .binary_search_by(|(c, _)| c.cmp(a))
            .map_or(0, |p| code.column_multiset()[p].1);
        if a == vi {
            w - 1
        } else {
            w
        }
    };
    if vi.is_zero() {
        return code
            .column_multiset()
            .iter()
            .map(|(a, _)| size(a) / 2)
            .sum();
    }
    code.column_multiset()
        .iter()
        .filter_map(|(a, _)| {
            let b = a.xor(vi);
            (*a < b).then(|| size(a).min(size(&b)))
        })
        .sum()
}

/// `min_K`: the smallest [`disjoint_pair_count`] over nonzero columns.
pub fn min_k(code: &LinearCode) -> Result<usize> {
    (0..code.n())
        .filter(|&i| !code.column(i).is_zero())
        .map(|i| disjoint_pair_count(code, i))
        .min()
        .ok_or(Error::DegenerateCode)
}

/// A family of pairwise disjoint `q`-subsets of `[n] \ {i}`, each summing to `v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFamily {
    pub coordinate: usize,
    pub q: usize,
    /// Each tuple sorted ascending; tuples in ascending lexicographic order.
    pub tuples: Vec<Vec<usize>>,
    /// `false` when the family came from greedy packing and its size is only
    /// a lower bound on the maximum.
    pub exact: bool,
}

impl RepFamily {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Re-checks disjointness, exclusion of the coordinate, tuple size, and
    /// the column-sum identity against `code`.
    pub fn validate(&self, code: &LinearCode) -> bool {
        let mut used = vec![false; code.n()];
        used[self.coordinate] = true;
        self.tuples.iter().all(|t| {
            if t.len() != self.q {
                return false;
            }
            let mut sum = BitVector::zeros(code.generator().rows());
            for &j in t {
                if j >= code.n() || used[j] {
                    return false;
                }
                used[j] = true;
                sum.xor_assign(code.column(j));
            }
            sum == *code.column(self.coordinate)
        })
    }
}

/// All 3-subsets of `[n] \ {i}` whose columns sum to `v_i`, lexicographic.
pub fn representing_triples(code: &LinearCode, i: usize) -> Vec<[usize; 3]> {
    let by_value = classes(code);
    let vi = code.column(i);
    let n = code.n();
    let mut out = Vec::new();
    for a in (0..n).filter(|&a| a != i) {
        for b in (a + 1..n).filter(|&b| b != i) {
            let want = vi.xor(code.column(a)).xor(code.column(b));
            if let Some(list) = by_value.get(&want) {
                out.extend(
                    list.iter()
                        .filter(|&&c| c > b && c != i)
                        .map(|&c| [a, b, c]),
                );
            }
        }
    }
    out.sort_unstable();
    out
}

fn pair_family(code: &LinearCode, i: usize) -> Vec<Vec<usize>> {
    let by_value = classes(code);
    let vi = code.column(i);
    let members = |a: &BitVector| -> Vec<usize> {
        by_value
            .get(a)
            .map(|v| v.iter().copied().filter(|&j| j != i).collect())
            .unwrap_or_default()
    };
    let mut tuples = Vec::new();
    for (a, _) in code.column_multiset() {
        if vi.is_zero() {
            let m = members(a);
            tuples.extend(m.chunks_exact(2).map(|c| c.to_vec()));
        } else {
            let b = a.xor(vi);
            if *a < b {
                let (left, right) = (members(a), members(&b));
                tuples.extend(left.iter().zip(&right).map(|(&x, &y)| {
                    let mut t = vec![x, y];
                    t.sort_unstable();
                    t
                }));
            }
        }
    }
    tuples.sort();
    tuples
}

fn tuple_mask(t: &[usize]) -> u32 {
    t.iter().fold(0u32, |m, &j| m | (1 << j))
}

/// Maximum set packing of the candidate triples by exhaustive search over
/// the smallest undecided element: leave it uncovered, or cover it with each
/// compatible triple.
fn max_packing(n: usize, candidates: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let masks: Vec<u32> = candidates.iter().map(|t| tuple_mask(t)).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, t) in candidates.iter().enumerate() {
        containing[t[0]].push(k);
    }

    struct Search<'a> {
        n: usize,
        masks: &'a [u32],
        containing: &'a [Vec<usize>],
        best: Vec<usize>,
        current: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, from: usize, used: u32) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            let free = (from..self.n).filter(|&e| used & (1 << e) == 0).count();
            if self.current.len() + free / 3 <= self.best.len() {
                return;
            }
            let Some(e) = (from..self.n).find(|&e| used & (1 << e) == 0) else {
                return;
            };
            // Triples are indexed by their smallest element, so any triple
            // covering `e` now must start at `e`.
            for &k in &self.containing[e] {
                if self.masks[k] & used == 0 {
                    self.current.push(k);
                    self.run(e + 1, used | self.masks[k]);
                    self.current.pop();
                }
            }
            self.run(e + 1, used | (1 << e));
        }
    }

    let mut search = Search {
        n,
        masks: &masks,
        containing: &containing,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.run(0, 0);
    let mut out: Vec<[usize; 3]> = search.best.iter().map(|&k| candidates[k]).collect();
    out.sort_unstable();
    out
}

fn greedy_packing(candidates: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut used = std::collections::HashSet::new();
    candidates
        .iter()
        .filter(|t| {
            if t.iter().any(|j| used.contains(j)) {
                false
            } else {
                used.extend(t.iter().copied());
                true
            }
        })
        .copied()
        .collect()
}

/// A disjoint family of `q`-tuples representing `v_i`, `q` in `{2, 3}`.
///
/// For `q = 2` the family is a maximum one. For `q = 3` it is a maximum
/// packing when `n <= 16` and a greedy packing (lexicographically smallest
/// triple first) flagged `exact = false` otherwise.
pub fn q_tuple_families(code: &LinearCode, i: usize, q: usize) -> Result<RepFamily> {
    if i >= code.n() {
        return Err(Error::out_of_range(
            "coordinate",
            i,
            format!("0..{}", code.n()),
        ));
    }
    match q {
        2 => Ok(RepFamily {
            coordinate: i,
            q,
            tuples: pair_family(code, i),
            exact: true,
        }),
        3 => {
            let candidates = representing_triples(code, i);
            let exact = code.n() <= MAX_EXACT_PACKING_LENGTH;
            let packing = if exact {
                max_packing(code.n(), &candidates)
            } else {
                greedy_packing(&candidates)
            };
            Ok(RepFamily {
                coordinate: i,
                q,
                tuples: packing.iter().map(|t| t.to_vec()).collect(),
                exact,
            })
        }
        _ => Err(Error::out_of_range("q", q, "2 or 3")),
    }
}

/// Families for every coordinate with a nonzero column; zero columns get an
/// empty family.
pub fn all_families(code: &LinearCode, q: usize) -> Result<Vec<RepFamily>> {
    (0..code.n())
        .into_par_iter()
        .map(|i| {
            if code.column(i).is_zero() {
                Ok(RepFamily {
                    coordinate: i,
                    q,
                    tuples: Vec::new(),
                    exact: true,
                })
            } else {
                q_tuple_families(code, i, q)
            }
        })
        .collect()
}

/// `min_i |M_i| / n` over coordinates with nonzero columns: a certified lower
/// bound on the density parameter when the families are valid.
pub fn measured_delta(code: &LinearCode, families: &[RepFamily]) -> Rational {
    families
        .iter()
        .filter(|f| !code.column(f.coordinate).is_zero())
        .map(|f| Rational::new(f.len() as i64, code.n() as i64))
        .min()
        .unwrap_or_else(|| Rational::from_integer(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerfectVerdict {
    /// One partition of `[n] \ {i}` into representing triples per coordinate.
    Perfect {
        families: Vec<RepFamily>,
    },
    LengthNotOneModThree {
        n: usize,
    },
    /// No partition exists for this coordinate.
    NoPartition {
        coordinate: usize,
    },
}

impl PerfectVerdict {
    pub fn is_perfect(&self) -> bool {
        matches!(self, PerfectVerdict::Perfect { .. })
    }
}

fn exact_triple_partition(
    n: usize,
    skip: usize,
    candidates: &[[usize; 3]],
) -> Option<Vec<[usize; 3]>> {
    let mut by_first: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n];
    for t in candidates {
        by_first[t[0]].push(*t);
    }
    let full: u32 = ((1u64 << n) - 1) as u32 & !(1 << skip);

    fn go(used: u32, full: u32, by_first: &[Vec<[usize; 3]>], acc: &mut Vec<[usize; 3]>) -> bool {
        if used == full {
            return true;
        }
        let e = (!used & full).trailing_zeros() as usize;
        for t in &by_first[e] {
            let m = tuple_mask(t);
            if m & used == 0 {
                acc.push(*t);
                if go(used | m, full, by_first, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }

    let mut acc = Vec::new();
    go(1 << skip, full | (1 << skip), &by_first, &mut acc).then_some(acc)
}

/// Decides whether the code is a perfect 3-LCC by exhaustive partition search.
pub fn is_perfect_3lcc(code: &LinearCode) -> Result<PerfectVerdict> {
    let n = code.n();
    if n > MAX_EXACT_PACKING_LENGTH {
        return Err(Error::Unsupported(format!(
            "exhaustive perfect 3-LCC search needs n <= {MAX_EXACT_PACKING_LENGTH}, got {n}"
        )));
    }
    if n % 3 != 1 {
        return Ok(PerfectVerdict::LengthNotOneModThree { n });
    }
    let mut families = Vec::with_capacity(n);
    for i in 0..n {
        let candidates = representing_triples(code, i);
        match exact_triple_partition(n, i, &candidates) {
            Some(partition) => families.push(RepFamily {
                coordinate: i,
                q: 3,
                tuples: partition.iter().map(|t| t.to_vec()).collect(),
                exact: true,
            }),
            None => return Ok(PerfectVerdict::NoPartition { coordinate: i }),
        }
    }
    Ok(PerfectVerdict::Perfect { families })
}

/// One radius of the sphere-growth inequality `floor(r/2)^2 |S_r| <= n |S_{r-1}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereGrowthRow {
    pub r: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub pass: bool,
    /// Fewest edges (with multiplicity) from a vertex of `S_r` down to `S_{r-1}`;
    /// `None` when `S_r` is empty.
    pub min_down_edges: Option<usize>,
    /// `min_down_edges >= floor(r/2)^2`, vacuously true for empty spheres.
    pub per_vertex_pass: bool,
}

/// The sphere-growth table for radii `2..=diameter + 1` of a built graph,
/// with no assumption on the code. The final row is always the vacuous one.
pub fn sphere_growth_table(graph: &CosetGraph) -> Vec<SphereGrowthRow> {
    let dist = graph.distances_from(0);
    let diameter = dist.iter().copied().max().unwrap_or(0) as usize;
    let mut sizes = vec![0usize; diameter + 2];
    for &d in &dist {
        sizes[d as usize] += 1;
    }
    let mut min_down = vec![usize::MAX; diameter + 2];
    for x in 0..graph.vertex_count() as u32 {
        let d = dist[x as usize];
        if d == 0 {
            continue;
        }
        let down: usize = graph
            .neighbors(x)
            .filter(|&(y, _)| dist[y as usize] + 1 == d)
            .map(|(_, m)| m)
            .sum();
        let slot = &mut min_down[d as usize];
        *slot = (*slot).min(down);
    }
    (2..=diameter + 1)
        .map(|r| {
            let need = (r / 2) * (r / 2);
            let lhs = need * sizes[r];
            let rhs = graph.n() * sizes[r - 1];
            let min_down_edges = (sizes[r] > 0).then_some(min_down[r]);
            SphereGrowthRow {
                r,
                lhs,
                rhs,
                pass: lhs <= rhs,
                min_down_edges,
                per_vertex_pass: min_down_edges.is_none_or(|m| m >= need),
            }
        })
        .collect()
}

/// The sphere-growth check for a perfect 3-LCC; the code must be certified
/// perfect first.
pub fn sphere_growth_check(code: &LinearCode, dim_cap: usize) -> Result<Vec<SphereGrowthRow>> {
    if !is_perfect_3lcc(code)?.is_perfect() {
        return Err(Error::Precondition("code is not a perfect 3-LCC".into()));
    }
    Ok(sphere_growth_table(&build_coset_graph(code, dim_cap)?))
}

/// Parameters of a code viewed as a locally testable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtcProfile {
    /// Minimum over coordinates of the number of length-3 dependencies.
    pub sigma: usize,
    pub sigma_per_coordinate: Vec<usize>,
    /// Maximal column multiplicity.
    pub p: usize,
    /// Number of distinct columns.
    pub t: usize,
    pub regular: bool,
}

/// Number of 3-subsets `{i, j, k}` with `v_i + v_j + v_k = 0`, by scanning all pairs.
pub fn sigma_bruteforce(code: &LinearCode, i: usize) -> usize {
    let n = code.n();
    let vi = code.column(i);
    let mut count = 0;
    for j in (0..n).filter(|&j| j != i) {
        let partial = vi.xor(code.column(j));
        count += (j + 1..n)
            .filter(|&k| k != i && *code.column(k) == partial)
            .count();
    }
    count
}

/// The same count from column multiplicities `w`: for `v_i != 0`,
/// `sum w_a w_{a+v_i}` over unordered class pairs avoiding `{0, v_i}`, plus
/// `(w_{v_i} - 1) w_0` for the dependencies through a zero column. For
/// `v_i = 0` it is `sum C(w_a, 2)` with the zero class reduced by one.
pub fn sigma_formula(code: &LinearCode, i: usize) -> usize {
    let vi = code.column(i);
    let ms = code.column_multiset();
    let w = |a: &BitVector| {
        ms.binary_search_by(|(c, _)| c.cmp(a))
            .map_or(0, |p| ms[p].1)
    };
    if vi.is_zero() {
        return ms
            .iter()
            .map(|(a, wa)| {
                let wa = if a.is_zero() { wa - 1 } else { *wa };
                wa * wa.saturating_sub(1) / 2
            })
            .sum();
    }
    let zero = BitVector::zeros(vi.len());
    let pairs: usize = ms
        .iter()
        .filter(|(a, _)| !a.is_zero() && a != vi)
        .filter_map(|(a, wa)| {
            let b = a.xor(vi);
            (*a < b).then(|| wa * w(&b))
        })
        .sum();
    pairs + (w(vi) - 1) * w(&zero)
}

/// Profile from the multiplicity formula; for `n <= 64` debug builds also
/// recount every coordinate by brute force.
pub fn ltc_profile(code: &LinearCode) -> LtcProfile {
    let sigma_per_coordinate: Vec<usize> = (0..code.n()).map(|i| sigma_formula(code, i)).collect();
    if cfg!(debug_assertions) && code.n() <= 64 {
        for (i, &s) in sigma_per_coordinate.iter().enumerate() {
            assert_eq!(
                s,
                sigma_bruteforce(code, i),
                "sigma mismatch at coordinate {i}"
            );
        }
    }
    LtcProfile {
        sigma: sigma_per_coordinate.iter().copied().min().unwrap_or(0),
        sigma_per_coordinate,
        p: code.max_multiplicity(),
        t: code.distinct_columns(),
        regular: code.is_regular(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPackingCheck {
    pub sigma: usize,
    pub p: usize,
    pub k_measured: usize,
    pub k_required: usize,
    pub pass: bool,
}

/// Checks `min_K >= ceil(sigma / p)`; requires `sigma > p`.
pub fn verify_pair_packing(code: &LinearCode) -> Result<PairPackingCheck> {
    let profile = ltc_profile(code);
    if profile.sigma <= profile.p {
        return Err(Error::Hypothesis(format!(
            "sigma = {} must exceed p = {}",
            profile.sigma, profile.p
        )));
    }
    let k_required = profile.sigma.div_ceil(profile.p);
    let k_measured = min_k(code)?;
    Ok(PairPackingCheck {
        sigma: profile.sigma,
        p: profile.p,
        k_measured,
        k_required,
        pass: k_measured >= k_required,
    })
}

/// One draw of the two-step random set `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSample {
    /// Sorted.
    pub b: Vec<usize>,
    pub b0_size: usize,
    /// `Y_i` for coordinates with nonzero columns, `None` elsewhere.
    pub y: Vec<Option<usize>>,
    pub theta: f64,
    pub delta: f64,
    /// `(delta / 2) a^(q-2) n^(1/(q-1))`.
    pub threshold: f64,
    /// `(a + 4 / (delta a^(q-2))) n^((q-2)/(q-1))`.
    pub bullet1_bound: f64,
    pub bullet1_holds: bool,
    pub bullet2_holds: bool,
}

/// Largest admissible `a`: `(log2 n)^(1/(q-1))`.
pub fn max_a(n: usize, q: usize) -> f64 {
    (n as f64).log2().powf(1.0 / (q as f64 - 1.0))
}

fn check_subset_inputs(code: &LinearCode, families: &[RepFamily], q: usize) -> Result<()> {
    if q < 3 {
        return Err(Error::out_of_range("q", q, ">= 3"));
    }
    if families.len() != code.n() {
        return Err(Error::Precondition(format!(
            "expected one family per coordinate ({}), got {}",
            code.n(),
            families.len()
        )));
    }
    for (i, f) in families.iter().enumerate() {
        if f.coordinate != i || f.q != q {
            return Err(Error::Precondition(format!(
                "family {i} is for coordinate {} with q = {}",
                f.coordinate, f.q
            )));
        }
    }
    Ok(())
}

/// Samples `B` with `theta = a n^(-1/(q-1))` for `1 <= a <= (log2 n)^(1/(q-1))`.
pub fn random_subset_b(
    code: &LinearCode,
    families: &[RepFamily],
    q: usize,
    a: f64,
    seed: u64,
) -> Result<SubsetSample> {
    let upper = max_a(code.n(), q);
    if !(a >= 1.0 && a <= upper + 1e-12) {
        return Err(Error::out_of_range("a", a, format!("[1, {upper:.6}]")));
    }
    let theta = a * (code.n() as f64).powf(-1.0 / (q as f64 - 1.0));
    sample_subset_b(code, families, q, a, theta, seed)
}

/// The sampling step with an explicit `theta` (clamped to `[0, 1]`) and no
/// upper limit on `a`. [`random_subset_b`] derives `theta` from `a`.
pub fn sample_subset_b(
    code: &LinearCode,
    families: &[RepFamily],
    q: usize,
    a: f64,
    theta: f64,
    seed: u64,
) -> Result<SubsetSample> {
    check_subset_inputs(code, families, q)?;
    if a < 1.0 {
        return Err(Error::out_of_range("a", a, ">= 1"));
    }
    let n = code.n();
    let nf = n as f64;
    let theta = theta.clamp(0.0, 1.0);
    let qf = q as f64;
    let nonzero: Vec<bool> = code.columns().iter().map(|c| !c.is_zero()).collect();
    let delta = families
        .iter()
        .filter(|f| nonzero[f.coordinate])
        .map(|f| f.len() as f64 / nf)
        .fold(f64::INFINITY, f64::min);
    let delta = if delta.is_finite() { delta } else { 0.0 };
    let threshold = delta / 2.0 * a.powf(qf - 2.0) * nf.powf(1.0 / (qf - 1.0));
    let bullet1_bound = (a + 4.0 / (delta * a.powf(qf - 2.0))) * nf.powf((qf - 2.0) / (qf - 1.0));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let in_b0: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < theta).collect();
    let b0_size = in_b0.iter().filter(|&&x| x).count();

    let y: Vec<Option<usize>> = families
        .iter()
        .map(|f| {
            nonzero[f.coordinate].then(|| {
                f.tuples
                    .iter()
                    .filter(|t| t.iter().filter(|&&j| in_b0[j]).count() + 2 >= q)
                    .count()
            })
        })
        .collect();
    let mut in_b = in_b0.clone();
    for (i, yi) in y.iter().enumerate() {
        if let Some(yi) = yi {
            if (*yi as f64) < threshold {
                in_b[i] = true;
            }
        }
    }
    let b: Vec<usize> = (0..n).filter(|&j| in_b[j]).collect();

    let bullet2_holds = (0..n).filter(|&i| nonzero[i] && !in_b[i]).all(|i| {
        let good = families[i]
            .tuples
            .iter()
            .filter(|t| t.iter().filter(|&&j| !in_b[j]).count() <= 2)
            .count();
        good as f64 >= threshold
    });

    Ok(SubsetSample {
        bullet1_holds: (b.len() as f64) <= bullet1_bound,
        b,
        b0_size,
        y,
        theta,
        delta,
        threshold,
        bullet1_bound,
        bullet2_holds,
    })
}

/// Aggregate of repeated draws; trial `t` uses seed `seed + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub mean_size: f64,
    pub bullet1_bound: f64,
    /// Fraction of trials with `|B|` at most the bound.
    pub within_bound_fraction: f64,
    pub bullet2_all: bool,
    pub threshold: f64,
    pub delta: f64,
}

pub fn monte_carlo_subset_b(
    code: &LinearCode,
    families: &[RepFamily],
    q: usize,
    a: f64,
    seed: u64,
    trials: usize,
) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::out_of_range("trials", 0, ">= 1"));
    }
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| random_subset_b(code, families, q, a, seed.wrapping_add(t as u64)))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = samples.iter().map(|s| s.b.len()).collect();
    let first = &samples[0];
    Ok(MonteCarloSummary {
        trials,
        mean_size: sizes.iter().sum::<usize>() as f64 / trials as f64,
        within_bound_fraction: samples.iter().filter(|s| s.bullet1_holds).count() as f64
            / trials as f64,
        bullet2_all: samples.iter().all(|s| s.bullet2_holds),
        bullet1_bound: first.bullet1_bound,
        threshold: first.threshold,
        delta: first.delta,
        sizes,
    })
}

/// `C_B`, `U`, and the dimension identity for a coordinate set `B`.
#[derive(Debug, Clone)]
pub struct ContractionResult {
    pub b: Vec<usize>,
    /// Subcode of codewords vanishing on `B`, same block length as `C`.
    pub subcode: LinearCode,
    /// Columns of the generator indexed by `B`.
    pub u: BitMatrix,
    pub dim_c: usize,
    pub dim_cb: usize,
    pub dim_u: usize,
    /// `(diam T, diam T_B)` when both graphs fit under the cap.
    pub diameters: Option<(usize, usize)>,
}

impl ContractionResult {
    pub fn dimension_identity_holds(&self) -> bool {
        self.dim_c == self.dim_cb + self.dim_u
    }

    /// `diam T <= diam T_B + dim U`, when measured.
    pub fn diameter_bound_holds(&self) -> Option<bool> {
        self.diameters.map(|(d, db)| d <= db + self.dim_u)
    }
}

/// The messages `x` with `x G` zero on `B` are the null space of the
/// transposed `B`-columns; multiplying those by `G` generates `C_B`.
pub fn contract_code(code: &LinearCode, b: &[usize], dim_cap: usize) -> Result<ContractionResult> {
    let mut b = b.to_vec();
    b.sort_unstable();
    b.dedup();
    if let Some(&bad) = b.iter().find(|&&j| j >= code.n()) {
        return Err(Error::out_of_range(
            "coordinate in B",
            bad,
            format!("0..{}", code.n()),
        ));
    }
    let u = code.generator().select_columns(&b);
    let messages = u.transpose().dual_basis();
    let subcode = LinearCode::new(messages.mul(code.generator())?)?;
    let dim_u = u.rank();
    let diameters = match (
        build_coset_graph(code, dim_cap),
        build_coset_graph(&subcode, dim_cap),
    ) {
        (Ok(t), Ok(tb)) => Some((t.diameter(), tb.diameter())),
        _ => None,
    };
    Ok(ContractionResult {
        dim_c: code.dim(),
        dim_cb: subcode.dim(),
        dim_u,
        b,
        subcode,
        u,
        diameters,
    })
}

/// Pair counts in `C_B` against the sampling threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedPairCheck {
    pub threshold: f64,
    /// Fewest disjoint pairs over nonzero columns of `C_B`; `None` if all vanish.
    pub min_pairs: Option<usize>,
    pub pass: bool,
}

/// Every nonzero column of the `C_B` generator must have at least
/// `sample.threshold` disjoint pair representations.
pub fn contracted_pair_check(
    code: &LinearCode,
    sample: &SubsetSample,
) -> Result<ContractedPairCheck> {
    let contracted = contract_code(code, &sample.b, 0)?;
    let sub = &contracted.subcode;
    let min_pairs = (0..sub.n())
        .filter(|&i| !sub.column(i).is_zero())
        .map(|i| disjoint_pair_count(sub, i))
        .min();
    Ok(ContractedPairCheck {
        threshold: sample.threshold,
        min_pairs,
        pass: min_pairs.is_none_or(|k| k as f64 >= sample.threshold),
    })
}
