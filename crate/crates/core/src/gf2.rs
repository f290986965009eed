//! Dense linear algebra over GF(2).
//!
//! Rows are bit-packed into `u64` words so that row additions are word-wise XORs.
//! Vectors at the API boundary are plain `Vec<bool>`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::text::{content_lines, parse_bits, parse_err, parse_usize_fields};
use crate::{Error, Result};

const WORD: usize = 64;

/// A dense `rows × cols` matrix over GF(2), row-major and bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from explicit rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (c, &bit) in row.iter().enumerate() {
                if bit {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    /// Convenience constructor from 0/1 integer rows; any nonzero entry is read as 1.
    pub fn from_u8_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let bools: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| x != 0).collect())
            .collect();
        Self::from_rows(&bools)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.words[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.words[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Symmetric with zero diagonal: the GF(2) meaning of alternating.
    pub fn is_alternating(&self) -> bool {
        self.is_symmetric() && (0..self.rows).all(|i| !self.get(i, i))
    }

    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.stride, k * rhs.stride);
                    for w in 0..out.stride {
                        out.words[dst + w] ^= rhs.words[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[bool]) -> Result<Vec<bool>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| v[c] && self.get(r, c)).count() % 2 == 1)
            .collect())
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let x = self.words[s + w];
            self.words[d + w] ^= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// Reduces to reduced row echelon form in place and returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// A basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![false; self.cols];
                v[free] = true;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = m.get(row, free);
                }
                v
            })
            .collect()
    }

    /// Determinant modulo 2 (equal to the permanent modulo 2).
    pub fn det2(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.rows)
    }

    /// Pfaffian modulo 2 of an alternating matrix.
    ///
    /// Over GF(2) the Pfaffian squares to the determinant and `x² = x`, so the
    /// two coincide; the parity of the perfect matchings of the support graph
    /// is computed through elimination.
    pub fn pfaffian2(&self) -> Result<bool> {
        if !self.is_alternating() {
            return Err(Error::NotAlternating);
        }
        if self.rows % 2 == 1 {
            return Err(Error::OddDimension(self.rows));
        }
        self.det2()
    }

    /// A uniformly random matrix from a caller-supplied generator.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen::<bool>() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rejection-samples an element of GL(b, Z₂) from a generator.
    pub fn random_invertible_with<R: Rng + ?Sized>(b: usize, rng: &mut R) -> Self {
        assert!(b >= 1, "dimension must be positive");
        loop {
            let m = Self::random(b, b, rng);
            if m.rank() == b {
                return m;
            }
        }
    }

    /// Deterministic random invertible `b × b` matrix for a given seed.
    pub fn random_invertible(b: usize, seed: u64) -> Self {
        Self::random_invertible_with(b, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Parses the text format: a `rows cols` header followed by `rows` lines of `0`/`1`.
    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = content_lines(input);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let dims = parse_usize_fields(hl, header, 2)?;
        let (rows, cols) = (dims[0], dims[1]);
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl + r + 1, format!("missing row {}", r + 1)))?;
            for (c, bit) in parse_bits(ln, line, cols)?.into_iter().enumerate() {
                m.set(r, c, bit);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after matrix rows"));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.extend((0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// The standard symplectic block form: `g` diagonal copies of `[[0,1],[1,0]]`.
pub fn standard_symplectic(g: usize) -> BitMatrix {
    BitMatrix::from_fn(2 * g, 2 * g, |r, c| r / 2 == c / 2 && r != c)
}

/// GF(2) rank of a family of equal-length vectors.
pub fn rank_of_vectors(vectors: &[Vec<bool>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = BitMatrix::zeros(vectors.len(), len);
    for (r, v) in vectors.iter().enumerate() {
        for (c, &b) in v.iter().enumerate() {
            if b {
                m.set(r, c, true);
            }
        }
    }
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Permutation-sum oracle: Σ_σ Π_k m[k, σ(k)] mod 2.
    fn permutation_sum(m: &BitMatrix) -> bool {
        fn rec(m: &BitMatrix, row: usize, used: &mut Vec<bool>) -> bool {
            if row == m.rows() {
                return true;
            }
            let mut acc = false;
            for c in 0..m.cols() {
                if !used[c] && m.get(row, c) {
                    used[c] = true;
                    acc ^= rec(m, row + 1, used);
                    used[c] = false;
                }
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.cols()])
    }

    /// Matching-enumeration oracle: number of perfect matchings on the support graph, mod 2.
    fn matching_parity(m: &BitMatrix) -> bool {
        fn rec(m: &BitMatrix, used: &mut Vec<bool>) -> usize {
            let Some(i) = used.iter().position(|&u| !u) else {
                return 1;
            };
            used[i] = true;
            let mut total = 0;
            for j in i + 1..m.rows() {
                if !used[j] && m.get(i, j) {
                    used[j] = true;
                    total += rec(m, used);
                    used[j] = false;
                }
            }
            used[i] = false;
            total
        }
        rec(m, &mut vec![false; m.rows()]) % 2 == 1
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 3).rank(), 0);
        assert_eq!(BitMatrix::from_u8_rows(&[[1, 1], [1, 1]]).unwrap().rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(BitMatrix::identity(2).nullspace().is_empty());
        let parity = BitMatrix::from_u8_rows(&[[1, 1]]).unwrap();
        assert_eq!(parity.nullspace(), vec![vec![true, true]]);
        let zero = BitMatrix::zeros(2, 4);
        let ns = zero.nullspace();
        assert_eq!(ns.len(), 4);
        assert_eq!(rank_of_vectors(&ns, 4), 4);
    }

    #[test]
    fn det2_examples() {
        assert!(BitMatrix::identity(4).det2().unwrap());
        let dup = BitMatrix::from_u8_rows(&[[1, 0, 1], [1, 0, 1], [0, 1, 1]]).unwrap();
        assert!(!dup.det2().unwrap());
        assert!(standard_symplectic(3).det2().unwrap());
        assert_eq!(
            BitMatrix::zeros(2, 3).det2(),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn pfaffian2_examples() {
        assert!(standard_symplectic(2).pfaffian2().unwrap());
        assert!(!BitMatrix::zeros(2, 2).pfaffian2().unwrap());
        let k4 = BitMatrix::from_fn(4, 4, |r, c| r != c);
        // K4 has 3 perfect matchings.
        assert!(matching_parity(&k4));
        assert!(k4.pfaffian2().unwrap());
    }

    #[test]
    fn pfaffian2_errors() {
        assert_eq!(BitMatrix::identity(2).pfaffian2(), Err(Error::NotAlternating));
        let asym = BitMatrix::from_u8_rows(&[[0, 1], [0, 0]]).unwrap();
        assert_eq!(asym.pfaffian2(), Err(Error::NotAlternating));
        let odd = BitMatrix::from_fn(3, 3, |r, c| r != c);
        assert_eq!(odd.pfaffian2(), Err(Error::OddDimension(3)));
    }

    #[test]
    fn random_invertible_examples() {
        for seed in 0..20 {
            assert_eq!(BitMatrix::random_invertible(1, seed), BitMatrix::identity(1));
            let m = BitMatrix::random_invertible(2, seed);
            assert!(m.det2().unwrap());
        }
        assert_eq!(
            BitMatrix::random_invertible(5, 42),
            BitMatrix::random_invertible(5, 42)
        );
    }

    #[test]
    fn gl2_has_six_elements() {
        let count = (0u8..16)
            .map(|bits| BitMatrix::from_fn(2, 2, |r, c| bits >> (2 * r + c) & 1 == 1))
            .filter(|m| m.det2().unwrap())
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn det2_matches_permutation_sum_exhaustive_up_to_3() {
        for n in 1..=3usize {
            for bits in 0u32..(1 << (n * n)) {
                let m = BitMatrix::from_fn(n, n, |r, c| bits >> (r * n + c) & 1 == 1);
                assert_eq!(m.det2().unwrap(), permutation_sum(&m), "{m:?}");
            }
        }
    }

    #[test]
    fn pfaffian2_matches_matchings_exhaustive_up_to_6() {
        for n in [2usize, 4, 6] {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            for bits in 0u32..(1 << pairs.len()) {
                let mut m = BitMatrix::zeros(n, n);
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        m.set(i, j, true);
                        m.set(j, i, true);
                    }
                }
                assert_eq!(m.pfaffian2().unwrap(), matching_parity(&m));
            }
        }
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let m = BitMatrix::from_u8_rows(&[[1, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(BitMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(matches!(
            BitMatrix::from_text("2 2\n10\n1x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            BitMatrix::from_text("2 2\n10\n"),
            Err(Error::Parse { .. })
        ));
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn det2_iff_full_rank(bits in proptest::collection::vec(any::<bool>(), 36), n in 1usize..=6) {
            let m = BitMatrix::from_fn(n, n, |r, c| bits[r * 6 + c]);
            prop_assert_eq!(m.det2().unwrap(), m.rank() == n);
        }

        #[test]
        fn det2_matches_permutation_sum_4x4(bits in any::<u16>()) {
            let m = BitMatrix::from_fn(4, 4, |r, c| bits >> (r * 4 + c) & 1 == 1);
            prop_assert_eq!(m.det2().unwrap(), permutation_sum(&m));
        }

        #[test]
        fn rank_invariant_under_invertible_transforms(m in arb_matrix(7), s1 in any::<u64>(), s2 in any::<u64>()) {
            let p = BitMatrix::random_invertible(m.rows(), s1);
            let q = BitMatrix::random_invertible(m.cols(), s2);
            let pmq = p.mul(&m).unwrap().mul(&q).unwrap();
            prop_assert_eq!(pmq.rank(), m.rank());
        }

        #[test]
        fn nullspace_is_kernel_basis(m in arb_matrix(9)) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.len(), m.cols() - m.rank());
            prop_assert_eq!(rank_of_vectors(&ns, m.cols()), ns.len());
            for v in &ns {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&b| !b));
            }
        }

        #[test]
        fn pfaffian2_equals_det2(bits in proptest::collection::vec(any::<bool>(), 28), g in 1usize..=4) {
            let n = 2 * g;
            let mut m = BitMatrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    m.set(i, j, bits[k]);
                    m.set(j, i, bits[k]);
                    k += 1;
                }
            }
            prop_assert_eq!(m.pfaffian2().unwrap(), m.det2().unwrap());
        }
    }
}
