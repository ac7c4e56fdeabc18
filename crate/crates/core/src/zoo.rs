//! Linear codes and the constructors for every family the crate analyzes.
//!
//! The text format for generator matrices is one row per line using the
//! characters `0` and `1`. All rows have the same length; blank lines and
//! lines starting with `#` are ignored.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// Longest block length accepted anywhere in the crate.
pub const MAX_LENGTH: usize = 4096;

/// A binary linear code given by a generator matrix, with its rank and
/// column multiset cached.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    dim: usize,
    columns: Vec<BitVector>,
    multiset: Vec<(BitVector, usize)>,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Result<Self> {
        if generator.cols() > MAX_LENGTH {
            return Err(Error::ResourceCap {
                what: "block length n",
                value: generator.cols(),
                cap: MAX_LENGTH,
            });
        }
        let dim = generator.rank();
        let columns = generator.columns();
        let multiset = generator.column_multiset();
        Ok(Self {
            generator,
            dim,
            columns,
            multiset,
        })
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    /// Rank of the generator, so `|C| = 2^dim`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, i: usize) -> &BitVector {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    pub fn column_multiset(&self) -> &[(BitVector, usize)] {
        &self.multiset
    }

    /// Multiplicity of the value of column `i` among all columns.
    pub fn multiplicity_of(&self, i: usize) -> usize {
        let v = &self.columns[i];
        self.multiset
            .binary_search_by(|(c, _)| c.cmp(v))
            .map(|pos| self.multiset[pos].1)
            .unwrap_or(0)
    }

    /// Maximal column multiplicity `p`.
    pub fn max_multiplicity(&self) -> usize {
        self.multiset.iter().map(|(_, w)| *w).max().unwrap_or(0)
    }

    /// Number of distinct columns `t`.
    pub fn distinct_columns(&self) -> usize {
        self.multiset.len()
    }

    pub fn zero_columns(&self) -> usize {
        self.columns.iter().filter(|c| c.is_zero()).count()
    }

    /// All distinct columns appear equally often.
    pub fn is_regular(&self) -> bool {
        self.multiset.windows(2).all(|w| w[0].1 == w[1].1)
    }
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LinearCode {{ n: {}, dim: {}, rows: {} }}",
            self.n(),
            self.dim,
            self.generator.rows()
        )
    }
}

/// The `m x (2^m - 1)` matrix whose columns are all nonzero vectors of
/// `F_2^m`, in increasing order with coordinate 0 as the most significant bit.
fn all_nonzero_columns(m: usize) -> BitMatrix {
    let n = (1usize << m) - 1;
    let mut g = BitMatrix::zeros(m, n);
    for value in 1..=n {
        for r in 0..m {
            if (value >> (m - 1 - r)) & 1 == 1 {
                g.set(r, value - 1, true);
            }
        }
    }
    g
}

/// Hadamard code: generator columns are all nonzero vectors of `F_2^m`.
pub fn hadamard(m: usize) -> Result<LinearCode> {
    if !(2..=12).contains(&m) {
        return Err(Error::out_of_range("m", m, "2..=12"));
    }
    LinearCode::new(all_nonzero_columns(m))
}

/// Block-diagonal direct product of two codes.
pub fn direct_product(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    LinearCode::new(BitMatrix::block_diagonal(a.generator(), b.generator()))
}

/// The generator `[[A, 0], [0, I_m]]` with `A` the Hadamard generator: its
/// average number of pair representations is large while the minimum is zero.
pub fn hadamard_plus_identity(m: usize) -> Result<LinearCode> {
    if !(2..=10).contains(&m) {
        return Err(Error::out_of_range("m", m, "2..=10"));
    }
    LinearCode::new(BitMatrix::block_diagonal(
        &all_nonzero_columns(m),
        &BitMatrix::identity(m),
    ))
}

/// The code generated by `[e1 e2 e3 e1+e2+e3]`: for each coordinate the
/// other three columns sum to it, so the triples through `i` partition the
/// remaining coordinates.
pub fn perfect_3lcc_basic() -> LinearCode {
    let g = BitMatrix::from_rows(
        4,
        vec![
            BitVector::from_indices(4, &[0, 3]),
            BitVector::from_indices(4, &[1, 3]),
            BitVector::from_indices(4, &[2, 3]),
        ],
    )
    .expect("fixed shape");
    LinearCode::new(g).expect("n = 4")
}

/// The full code `F_2^n` (generator `I_n`), whose coset graph is the hypercube.
pub fn full_space(n: usize) -> Result<LinearCode> {
    if n == 0 || n > MAX_LENGTH {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_LENGTH}")));
    }
    LinearCode::new(BitMatrix::identity(n))
}

/// Uniform random `m x n` generator.
///
/// The stream is ChaCha8 seeded with `seed_from_u64(seed)`. Rows are filled in
/// order; each row consumes `ceil(n / 64)` successive `next_u64` draws, draw
/// `w` supplying coordinates `64w..64w+63` from its low bit upwards. The same
/// seed therefore always yields the same matrix.
pub fn random_code(m: usize, n: usize, seed: u64) -> Result<LinearCode> {
    if m > 24 {
        return Err(Error::out_of_range("m", m, "0..=24"));
    }
    if n == 0 || n > MAX_LENGTH {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_LENGTH}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut row = BitVector::zeros(n);
        let mut word = 0u64;
        for c in 0..n {
            if c % 64 == 0 {
                word = rng.next_u64();
            }
            if (word >> (c % 64)) & 1 == 1 {
                row.set(c, true);
            }
        }
        rows.push(row);
    }
    LinearCode::new(BitMatrix::from_rows(n, rows)?)
}

/// All `2^d` elements of the row space of `basis`; element `j` is the sum of
/// the basis rows selected by the bits of `j` (bit `t` selects row `t`).
pub fn span_elements(basis: &BitMatrix) -> Vec<BitVector> {
    let mut out = vec![BitVector::zeros(basis.cols())];
    for row in basis.row_vectors() {
        let shifted: Vec<BitVector> = out.iter().map(|u| u.xor(row)).collect();
        out.extend(shifted);
    }
    out
}

/// Minimum weight over nonzero elements of the row space, `None` if the space is `{0}`.
pub fn minimum_distance(basis: &BitMatrix) -> Option<usize> {
    span_elements(basis)
        .iter()
        .filter(|u| !u.is_zero())
        .map(BitVector::weight)
        .min()
}

fn check_repetition_layout_shape(m: usize, k: usize, u_basis: &BitMatrix) -> Result<usize> {
    if m == 0 || !m.is_power_of_two() || m > 1 << 12 {
        return Err(Error::Precondition(format!(
            "m = {m} must be a power of two no larger than 4096"
        )));
    }
    let log_m = m.trailing_zeros() as usize;
    if k < log_m.max(1) {
        return Err(Error::Precondition(format!(
            "k = {k} must be at least max(1, log2 m) = {}",
            log_m.max(1)
        )));
    }
    if 2 * k * m > MAX_LENGTH {
        return Err(Error::ResourceCap {
            what: "block length 2km",
            value: 2 * k * m,
            cap: MAX_LENGTH,
        });
    }
    if u_basis.cols() != k {
        return Err(Error::Precondition(format!(
            "U basis vectors have length {}, expected k = {k}",
            u_basis.cols()
        )));
    }
    if u_basis.rows() != log_m || u_basis.rank() != log_m {
        return Err(Error::Precondition(format!(
            "U basis must consist of log2 m = {log_m} independent vectors (got {} rows of rank {})",
            u_basis.rows(),
            u_basis.rank()
        )));
    }
    Ok(log_m)
}

/// The bounded-repetition LTC construction: `k x 2km` generator whose first
/// `km` columns are the blocks `I + B_i` and whose last `km` columns are the
/// blocks `B_i`, where every column of `B_i` equals the `i`-th element of `U`.
///
/// `u_basis` is a `log2(m) x k` basis of a subspace `U` with minimum distance
/// at least 3.
pub fn repetition_layout(m: usize, k: usize, u_basis: &BitMatrix) -> Result<LinearCode> {
    check_repetition_layout_shape(m, k, u_basis)?;
    if let Some(d) = minimum_distance(u_basis) {
        if d < 3 {
            return Err(Error::Precondition(format!(
                "U has minimum distance {d}, the construction needs at least 3"
            )));
        }
    }
    Ok(build_repetition_layout(k, u_basis))
}

/// Same layout as [`repetition_layout`] without the minimum-distance requirement
/// on `U`. Column multiplicities and `sigma` then differ from the distance-3
/// case; the shape and independence checks still apply.
pub fn repetition_layout_any_distance(
    m: usize,
    k: usize,
    u_basis: &BitMatrix,
) -> Result<LinearCode> {
    check_repetition_layout_shape(m, k, u_basis)?;
    Ok(build_repetition_layout(k, u_basis))
}

fn build_repetition_layout(k: usize, u_basis: &BitMatrix) -> LinearCode {
    let elements = span_elements(u_basis);
    let mut columns = Vec::with_capacity(2 * k * elements.len());
    for u in &elements {
        for c in 0..k {
            let mut col = u.clone();
            col.flip(c);
            columns.push(col);
        }
    }
    for u in &elements {
        columns.extend(std::iter::repeat_n(u.clone(), k));
    }
    let g = BitMatrix::from_columns(k, &columns).expect("columns have length k");
    LinearCode::new(g).expect("length checked against cap")
}

/// A shipped `U` basis for the bounded-repetition construction: the
/// systematic code `[I_d | P]` padded with zeros to length `k`, where
/// `d = log2 m` and the rows of `P` are the first `d` vectors of weight at
/// least two in the smallest space that has enough of them. Distinct rows of
/// weight at least two force minimum distance 3.
///
/// Returns `None` when `k` is too short to host such a subspace.
pub fn repetition_layout_witness(m: usize, k: usize) -> Option<BitMatrix> {
    if m == 0 || !m.is_power_of_two() {
        return None;
    }
    let d = m.trailing_zeros() as usize;
    if d == 0 {
        return Some(BitMatrix::zeros(0, k));
    }
    let mut r = 2;
    while (1usize << r) - r - 1 < d {
        r += 1;
    }
    if d + r > k {
        return None;
    }
    let parity: Vec<usize> = (0usize..1 << r)
        .filter(|x| x.count_ones() >= 2)
        .take(d)
        .collect();
    let rows = (0..d)
        .map(|t| {
            let mut row = BitVector::unit(k, t);
            for b in 0..r {
                if (parity[t] >> (r - 1 - b)) & 1 == 1 {
                    row.set(d + b, true);
                }
            }
            row
        })
        .collect();
    Some(BitMatrix::from_rows(k, rows).expect("rows have length k"))
}

/// Parses the generator matrix text format.
pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut rows = Vec::new();
    let mut width: Option<(usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut bits = Vec::with_capacity(line.len());
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("illegal character {other:?} at column {}", col + 1),
                    })
                }
            }
        }
        match width {
            None => width = Some((bits.len(), line_no)),
            Some((w, first)) if w != bits.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("row has {} entries but line {first} has {w}", bits.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(BitVector::from_bits(bits));
    }
    let Some((cols, _)) = width else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "no matrix rows found".into(),
        });
    };
    LinearCode::new(BitMatrix::from_rows(cols, rows)?)
}

/// Serializes the generator in row order, one line per row, trailing newline.
pub fn serialize_code(code: &LinearCode) -> String {
    code.generator().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> BitVector {
        BitVector::from_bits(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn hadamard_shapes() {
        let h2 = hadamard(2).unwrap();
        assert_eq!((h2.n(), h2.dim()), (3, 2));
        assert_eq!(h2.columns(), &[v("01"), v("10"), v("11")]);
        let h3 = hadamard(3).unwrap();
        assert_eq!((h3.n(), h3.dim()), (7, 3));
        assert!(hadamard(1).is_err());
        assert!(hadamard(13).is_err());
    }

    #[test]
    fn hadamard_pair_sums_are_columns() {
        let h = hadamard(4).unwrap();
        let cols = h.columns();
        for a in 0..cols.len() {
            for b in a + 1..cols.len() {
                assert!(cols.contains(&cols[a].xor(&cols[b])));
            }
        }
    }

    #[test]
    fn direct_product_shapes() {
        let h = hadamard(2).unwrap();
        let p = direct_product(&h, &h).unwrap();
        assert_eq!((p.n(), p.dim()), (6, 4));
        let empty = LinearCode::new(BitMatrix::zeros(0, 0)).unwrap();
        assert_eq!(
            direct_product(&h, &empty).unwrap().generator(),
            h.generator()
        );
    }

    #[test]
    fn hadamard_plus_identity_shape() {
        let c = hadamard_plus_identity(2).unwrap();
        assert_eq!((c.n(), c.dim()), (5, 4));
        assert!(hadamard_plus_identity(11).is_err());
    }

    #[test]
    fn perfect_basic_shape() {
        let c = perfect_3lcc_basic();
        assert_eq!((c.n(), c.dim()), (4, 3));
        assert_eq!(c.n() % 3, 1);
        let cols = c.columns();
        for i in 0..4 {
            let mut sum = BitVector::zeros(3);
            for j in (0..4).filter(|&j| j != i) {
                sum.xor_assign(&cols[j]);
            }
            assert_eq!(sum, cols[i]);
        }
    }

    #[test]
    fn repetition_layout_with_distance_three_subspace() {
        let u = BitMatrix::from_rows(5, vec![v("11100"), v("00111")]).unwrap();
        // span = {00000, 11100, 00111, 11011}, weights 3, 3, 4
        assert_eq!(minimum_distance(&u), Some(3));
        let c = repetition_layout(4, 5, &u).unwrap();
        assert_eq!((c.n(), c.dim()), (40, 5));
        assert_eq!(c.max_multiplicity(), 5);
    }

    #[test]
    fn repetition_layout_rejects_short_distance() {
        let u = BitMatrix::from_rows(2, vec![v("11")]).unwrap();
        let err = repetition_layout(2, 2, &u).unwrap_err();
        assert!(err.to_string().contains("minimum distance 2"), "{err}");
        let c = repetition_layout_any_distance(2, 2, &u).unwrap();
        assert_eq!((c.n(), c.dim(), c.max_multiplicity()), (8, 2, 2));
    }

    #[test]
    fn repetition_layout_rejects_bad_dimension() {
        let u = BitMatrix::from_rows(5, vec![v("11100")]).unwrap();
        assert!(repetition_layout(4, 5, &u).is_err());
        let dep = BitMatrix::from_rows(5, vec![v("11100"), v("11100")]).unwrap();
        assert!(repetition_layout(4, 5, &dep).is_err());
        assert!(repetition_layout(3, 5, &u).is_err());
    }

    #[test]
    fn shipped_witnesses_have_distance_three() {
        for (m, k) in [(2, 3), (4, 5), (8, 6), (16, 7), (32, 9), (4, 12)] {
            let u = repetition_layout_witness(m, k).unwrap();
            assert_eq!(u.rows(), m.trailing_zeros() as usize);
            assert!(minimum_distance(&u).unwrap() >= 3, "m={m} k={k}");
            let c = repetition_layout(m, k, &u).unwrap();
            assert_eq!(c.dim(), k);
        }
        assert!(repetition_layout_witness(2, 2).is_none());
        assert!(repetition_layout_witness(4, 4).is_none());
    }

    #[test]
    fn random_code_is_deterministic() {
        let a = random_code(3, 5, 7).unwrap();
        let b = random_code(3, 5, 7).unwrap();
        assert_eq!(a.generator(), b.generator());
        let tiny = random_code(1, 1, 99).unwrap();
        assert_eq!((tiny.generator().rows(), tiny.n()), (1, 1));
        assert!(random_code(25, 4, 0).is_err());
    }

    #[test]
    fn parse_examples() {
        let c = parse_code("10\n01\n").unwrap();
        assert_eq!(c.generator(), &BitMatrix::identity(2));
        let c = parse_code("# comment\n\n110\n\n011\n").unwrap();
        assert_eq!(c.generator().rows(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_code("1 0\n") {
            Err(Error::Parse { line: 1, message }) => assert!(message.contains("' '")),
            other => panic!("unexpected {other:?}"),
        }
        match parse_code("10\n# x\n101\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_code("\n# only\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_code(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn serialize_round_trip() {
        let h = hadamard(2).unwrap();
        let text = serialize_code(&h);
        assert_eq!(text, "011\n101\n");
        assert_eq!(parse_code(&text).unwrap().generator(), h.generator());
    }
}
