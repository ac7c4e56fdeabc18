//! The coset leader graph `T = F_2^n / C^perp` with generators `e_i + C^perp`.
//!
//! A coset `x + C^perp` is labeled by its syndrome `G_R x`, where `G_R` keeps
//! the first maximal independent subset of generator rows. The map is onto
//! `F_2^dim` with kernel exactly `C^perp`, so labels are canonical and the
//! generator `e_i` translates every label by column `i` of `G_R`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::zoo::LinearCode;

/// Full graph construction enumerates `2^dim` vertices; this is the ceiling.
pub const MAX_GRAPH_DIM: usize = 24;

/// Largest `n` accepted by [`covering_radius_bruteforce`].
pub const MAX_BRUTEFORCE_LENGTH: usize = 20;

const MAX_BALL_POINTS: usize = 1 << 24;

/// Syndrome labels of the generators under the canonical row subset.
#[derive(Debug, Clone)]
pub struct CosetLabeling {
    label_rows: Vec<usize>,
    steps: Vec<BitVector>,
}

impl CosetLabeling {
    pub fn new(code: &LinearCode) -> Self {
        let g = code.generator();
        let label_rows = g.independent_rows();
        let reduced = g.select_rows(&label_rows);
        let steps = reduced.columns();
        debug_assert_eq!(label_rows.len(), code.dim());
        Self { label_rows, steps }
    }

    /// Rows of the generator used for labeling.
    pub fn label_rows(&self) -> &[usize] {
        &self.label_rows
    }

    pub fn dim(&self) -> usize {
        self.label_rows.len()
    }

    /// The translation induced by generator `i`.
    pub fn step(&self, i: usize) -> &BitVector {
        &self.steps[i]
    }

    pub fn steps(&self) -> &[BitVector] {
        &self.steps
    }

    /// Label of the coset of an arbitrary word `x` of length `n`.
    pub fn label_of_word(&self, x: &BitVector) -> BitVector {
        let mut s = BitVector::zeros(self.dim());
        for i in x.ones() {
            s.xor_assign(&self.steps[i]);
        }
        s
    }

    /// Distinct nonzero steps with the number of generators producing each,
    /// in the order of first appearance.
    pub fn distinct_steps(&self) -> Vec<(BitVector, usize)> {
        let mut index: HashMap<&BitVector, usize> = HashMap::new();
        let mut out: Vec<(BitVector, usize)> = Vec::new();
        for s in self.steps.iter().filter(|s| !s.is_zero()) {
            match index.get(s) {
                Some(&pos) => out[pos].1 += 1,
                None => {
                    index.insert(s, out.len());
                    out.push((s.clone(), 1));
                }
            }
        }
        out
    }
}

/// Vertex-transitive multigraph on `2^dim` cosets. Vertices are the integer
/// encodings of syndrome labels, label coordinate `r` being bit `r`.
#[derive(Debug, Clone)]
pub struct CosetGraph {
    n: usize,
    dim: usize,
    generator_targets: Vec<u32>,
    loop_generators: Vec<usize>,
    multiplicity_classes: Vec<Vec<usize>>,
    steps: Vec<(u32, usize)>,
}

/// `sizes[r]` is the number of vertices at distance `r` from the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereProfile {
    pub sizes: Vec<usize>,
}

impl SphereProfile {
    pub fn diameter(&self) -> usize {
        self.sizes.len() - 1
    }

    /// `|S_r|`, zero past the diameter.
    pub fn size(&self, r: usize) -> usize {
        self.sizes.get(r).copied().unwrap_or(0)
    }
}

/// Builds the coset graph; fails if `dim` exceeds `dim_cap` (itself capped at 24).
pub fn build_coset_graph(code: &LinearCode, dim_cap: usize) -> Result<CosetGraph> {
    let cap = dim_cap.min(MAX_GRAPH_DIM);
    if code.dim() > cap {
        return Err(Error::ResourceCap {
            what: "code dimension for full graph",
            value: code.dim(),
            cap,
        });
    }
    let labeling = CosetLabeling::new(code);
    let generator_targets: Vec<u32> = labeling
        .steps()
        .iter()
        .map(|s| s.to_u64().expect("dim <= 24") as u32)
        .collect();
    let loop_generators = (0..code.n())
        .filter(|&i| generator_targets[i] == 0)
        .collect();

    let mut by_value: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, &t) in generator_targets.iter().enumerate() {
        by_value.entry(t).or_default().push(i);
    }
    let mut multiplicity_classes: Vec<Vec<usize>> = by_value.into_values().collect();
    multiplicity_classes.sort_by_key(|class| code.column(class[0]).clone());

    let steps = multiplicity_classes
        .iter()
        .map(|class| (generator_targets[class[0]], class.len()))
        .filter(|&(t, _)| t != 0)
        .collect();

    Ok(CosetGraph {
        n: code.n(),
        dim: code.dim(),
        generator_targets,
        loop_generators,
        multiplicity_classes,
        steps,
    })
}

impl CosetGraph {
    /// Number of generators, which is also the degree counting loops once.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.dim
    }

    pub fn generator_target(&self, i: usize) -> u32 {
        self.generator_targets[i]
    }

    pub fn loop_generators(&self) -> &[usize] {
        &self.loop_generators
    }

    /// Generators grouped by equal column value, ordered by value.
    pub fn multiplicity_classes(&self) -> &[Vec<usize>] {
        &self.multiplicity_classes
    }

    /// Loops at any vertex.
    pub fn loops(&self) -> usize {
        self.loop_generators.len()
    }

    /// Distinct neighbors `y != x` with the number of parallel edges to each.
    pub fn neighbors(&self, x: u32) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.steps.iter().map(move |&(s, mult)| (x ^ s, mult))
    }

    /// Degree counting each loop once and parallel edges separately.
    pub fn degree(&self, x: u32) -> usize {
        self.loops() + self.neighbors(x).map(|(_, m)| m).sum::<usize>()
    }

    /// Breadth-first distances from `source` to every vertex.
    pub fn distances_from(&self, source: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let d = dist[x as usize];
            for &(s, _) in &self.steps {
                let y = x ^ s;
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = d + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn sphere_profile_from(&self, source: u32) -> SphereProfile {
        let dist = self.distances_from(source);
        let ecc = dist.iter().copied().max().unwrap_or(0) as usize;
        let mut sizes = vec![0usize; ecc + 1];
        for d in dist {
            sizes[d as usize] += 1;
        }
        SphereProfile { sizes }
    }

    pub fn sphere_profile(&self) -> SphereProfile {
        self.sphere_profile_from(0)
    }

    /// Eccentricity of the origin, which is the diameter by vertex-transitivity.
    pub fn diameter(&self) -> usize {
        self.sphere_profile().diameter()
    }

    /// Debug dump: one line per vertex, `label: neighbor×mult ... loops=z`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for x in 0..self.vertex_count() as u32 {
            let _ = write!(out, "{}:", self.label_string(x));
            for (y, m) in self.neighbors(x) {
                let _ = write!(out, " {}×{}", self.label_string(y), m);
            }
            let _ = writeln!(out, " loops={}", self.loops());
        }
        out
    }

    pub fn label_string(&self, x: u32) -> String {
        BitVector::from_u64(self.dim, x as u64).to_string()
    }
}

/// Covering radius of `C^perp` by enumerating all `2^n` words: for each coset
/// (keyed by `G x` with the full generator) track the minimum weight seen.
pub fn covering_radius_bruteforce(code: &LinearCode) -> Result<usize> {
    let n = code.n();
    if n > MAX_BRUTEFORCE_LENGTH {
        return Err(Error::ResourceCap {
            what: "block length for exhaustive covering radius",
            value: n,
            cap: MAX_BRUTEFORCE_LENGTH,
        });
    }
    let columns = code.columns();
    let mut best: HashMap<BitVector, u32> = HashMap::new();
    let mut key = BitVector::zeros(code.generator().rows());
    // Gray-code walk: word g(j) = j ^ (j >> 1) differs from g(j-1) in one bit.
    let mut word: u64 = 0;
    best.insert(key.clone(), 0);
    for j in 1u64..(1u64 << n) {
        let bit = j.trailing_zeros() as usize;
        word ^= 1 << bit;
        key.xor_assign(&columns[bit]);
        let w = word.count_ones();
        best.entry(key.clone())
            .and_modify(|b| *b = (*b).min(w))
            .or_insert(w);
    }
    Ok(best.values().copied().max().unwrap_or(0) as usize)
}

/// Exact graph distances from the origin out to a fixed radius, found by
/// breadth-first enumeration of sums of generator steps. Does not need the
/// full vertex set, so it works for any dimension.
#[derive(Debug, Clone)]
pub struct LocalBall {
    radius: u32,
    labeling: CosetLabeling,
    dist: HashMap<BitVector, u32>,
}

/// Result of a bounded distance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallDistance {
    Exact(u32),
    /// Farther than the ball radius.
    Greater,
}

impl LocalBall {
    pub fn new(code: &LinearCode, radius: u32) -> Result<Self> {
        if radius > 4 {
            return Err(Error::out_of_range("radius", radius, "0..=4"));
        }
        let labeling = CosetLabeling::new(code);
        let steps: Vec<BitVector> = labeling
            .distinct_steps()
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        let origin = BitVector::zeros(labeling.dim());
        let mut dist = HashMap::from([(origin.clone(), 0u32)]);
        let mut frontier = vec![origin];
        for d in 1..=radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = x.xor(s);
                    if !dist.contains_key(&y) {
                        dist.insert(y.clone(), d);
                        next.push(y);
                    }
                }
            }
            if dist.len() > MAX_BALL_POINTS {
                return Err(Error::ResourceCap {
                    what: "local ball size",
                    value: dist.len(),
                    cap: MAX_BALL_POINTS,
                });
            }
            frontier = next;
        }
        Ok(Self {
            radius,
            labeling,
            dist,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn labeling(&self) -> &CosetLabeling {
        &self.labeling
    }

    /// Distance between two coset labels.
    pub fn distance(&self, a: &BitVector, b: &BitVector) -> BallDistance {
        match self.dist.get(&a.xor(b)) {
            Some(&d) => BallDistance::Exact(d),
            None => BallDistance::Greater,
        }
    }

    /// Number of labels within the radius of the origin.
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }
}

/// Local ball for the common case of radius `radius` around the origin.
pub fn local_ball(code: &LinearCode, radius: u32) -> Result<LocalBall> {
    LocalBall::new(code, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitMatrix;
    use crate::zoo;

    #[test]
    fn hadamard_two_is_k4() {
        let g = build_coset_graph(&zoo::hadamard(2).unwrap(), 24).unwrap();
        assert_eq!(g.vertex_count(), 4);
        for x in 0..4 {
            let nb: Vec<_> = g.neighbors(x).collect();
            assert_eq!(nb.len(), 3);
            assert!(nb.iter().all(|&(y, m)| y != x && m == 1));
        }
        assert_eq!(g.diameter(), 1);
        assert_eq!(g.sphere_profile().sizes, vec![1, 3]);
    }

    #[test]
    fn identity_code_is_hypercube() {
        let g = build_coset_graph(&zoo::full_space(3).unwrap(), 24).unwrap();
        assert_eq!(g.sphere_profile().sizes, vec![1, 3, 3, 1]);
        assert_eq!(g.diameter(), 3);
    }

    #[test]
    fn zero_column_adds_a_loop() {
        let g = BitMatrix::hstack(&BitMatrix::identity(3), &BitMatrix::zeros(3, 1)).unwrap();
        let code = LinearCode::new(g).unwrap();
        let t = build_coset_graph(&code, 24).unwrap();
        assert_eq!(t.loop_generators(), &[3]);
        assert!((0..8).all(|x| t.degree(x) == 4));
    }

    #[test]
    fn repeated_column_gives_parallel_edges() {
        let g = BitMatrix::hstack(&BitMatrix::identity(2), &BitMatrix::identity(2)).unwrap();
        let t = build_coset_graph(&LinearCode::new(g).unwrap(), 24).unwrap();
        let nb: Vec<_> = t.neighbors(0).collect();
        assert_eq!(nb.len(), 2);
        assert!(nb.iter().all(|&(_, m)| m == 2));
        assert_eq!(t.multiplicity_classes().len(), 2);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let code = zoo::full_space(5).unwrap();
        assert!(matches!(
            build_coset_graph(&code, 4),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn perfect_basic_profile() {
        let t = build_coset_graph(&zoo::perfect_3lcc_basic(), 24).unwrap();
        assert_eq!(t.sphere_profile().sizes, vec![1, 4, 3]);
    }

    #[test]
    fn covering_radius_examples() {
        let rep = LinearCode::new(
            BitMatrix::from_rows(2, vec![BitVector::from_bits([true, true])]).unwrap(),
        )
        .unwrap();
        assert_eq!(covering_radius_bruteforce(&rep).unwrap(), 1);
        assert_eq!(
            covering_radius_bruteforce(&zoo::hadamard(3).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            covering_radius_bruteforce(&zoo::full_space(6).unwrap()).unwrap(),
            6
        );
        assert!(covering_radius_bruteforce(&zoo::full_space(21).unwrap()).is_err());
    }

    #[test]
    fn local_ball_basics() {
        let code = zoo::hadamard_plus_identity(2).unwrap();
        let ball = local_ball(&code, 3).unwrap();
        let lab = ball.labeling();
        let origin = BitVector::zeros(lab.dim());
        assert_eq!(ball.distance(&origin, &origin), BallDistance::Exact(0));
        for i in 0..code.n() {
            assert_eq!(ball.distance(&origin, lab.step(i)), BallDistance::Exact(1));
        }
        // K_4 x Q_2 has diameter 3; radius 2 misses the antipodes.
        let small = local_ball(&code, 2).unwrap();
        let far = lab.step(0).xor(lab.step(3)).xor(lab.step(4));
        assert_eq!(small.distance(&origin, &far), BallDistance::Greater);
        assert_eq!(ball.distance(&origin, &far), BallDistance::Exact(3));
    }

    #[test]
    fn dump_lists_every_vertex() {
        let t = build_coset_graph(&zoo::hadamard(2).unwrap(), 24).unwrap();
        let d = t.dump();
        assert_eq!(d.lines().count(), 4);
        assert!(d.lines().all(|l| l.ends_with("loops=0")));
    }
}
