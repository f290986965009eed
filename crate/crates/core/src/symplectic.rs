//! Alternating forms and pairings of a basis into consecutive pairs with
//! nonzero value.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::gf2::{standard_symplectic, BitMatrix};
use crate::text::{content_lines, parse_err, parse_usize_fields};
use crate::{Error, Result};

/// Largest dimension accepted by [`AlternatingForm::matching_count`].
pub const MAX_MATCHING_DIM: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Gf2(bool),
    Rational(BigRational),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Gf2(b) => !b,
            FieldElement::Rational(q) => q.is_zero(),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Gf2(b) => write!(f, "{}", u8::from(*b)),
            FieldElement::Rational(q) => write!(f, "{q}"),
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Gf2(BitMatrix),
    Rational(Vec<Vec<BigRational>>),
}

/// A skew form `ω` on a finite basis, over GF(2) or ℚ.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingForm {
    dim: usize,
    entries: Entries,
}

/// `σ` in one-line notation (1-based) with the values `ω(e_{σ(2k-1)}, e_{σ(2k)})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingPermutation {
    pub sigma: Vec<usize>,
    pub pair_values: Vec<FieldElement>,
}

impl PairingPermutation {
    /// The pairs `(σ(2k-1), σ(2k))`, 1-based.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.sigma.chunks(2).map(|p| (p[0], p[1])).collect()
    }
}

impl AlternatingForm {
    pub fn gf2(m: BitMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_alternating() {
            return Err(Error::NotAlternating);
        }
        Ok(Self {
            dim: m.rows(),
            entries: Entries::Gf2(m),
        })
    }

    pub fn rational(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NonSquare {
                rows: n,
                cols: r.len(),
            });
        }
        for i in 0..n {
            for j in 0..=i {
                if rows[i][j] != -rows[j][i].clone() {
                    return Err(Error::NotAlternating);
                }
            }
        }
        Ok(Self {
            dim: n,
            entries: Entries::Rational(rows),
        })
    }

    /// Rational form from integer entries.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::rational(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// `J = ⊕ [[0, 1], [1, 0]]` over GF(2), dimension `2g`.
    pub fn standard_gf2(g: usize) -> Self {
        Self::gf2(standard_symplectic(g)).expect("standard form is alternating")
    }

    /// `J = ⊕ [[0, 1], [-1, 0]]` over ℚ, dimension `2g`.
    pub fn standard_rational(g: usize) -> Self {
        let n = 2 * g;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = match (i % 2, j) {
                            (0, j) if j == i + 1 => 1,
                            (1, j) if j + 1 == i => -1,
                            _ => 0,
                        };
                        BigRational::from_integer(v.into())
                    })
                    .collect()
            })
            .collect();
        Self::rational(rows).expect("standard form is alternating")
    }

    /// `PᵀJP` for a random invertible `P`, over GF(2).
    pub fn random_congruent_gf2<R: Rng + ?Sized>(g: usize, rng: &mut R) -> Self {
        let p = BitMatrix::random_invertible_with(2 * g, rng);
        let m = p
            .transpose()
            .mul(&standard_symplectic(g))
            .and_then(|jp| jp.mul(&p))
            .expect("square factors");
        Self::gf2(m).expect("congruence preserves alternation")
    }

    /// `PᵀJP` for a random unimodular-ish integer `P` (upper and lower
    /// unitriangular factors with small entries), so the result is nondegenerate.
    pub fn random_congruent_rational<R: Rng + ?Sized>(g: usize, rng: &mut R) -> Self {
        let n = 2 * g;
        let unitriangular = |rng: &mut R, upper: bool| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match (i == j, (j > i) == upper) {
                            (true, _) => 1,
                            (false, true) => rng.gen_range(-2..=2),
                            (false, false) => 0,
                        })
                        .collect()
                })
                .collect()
        };
        let lower = unitriangular(rng, false);
        let upper = unitriangular(rng, true);
        let p = int_mul(&lower, &upper);
        let scale: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let p: Vec<Vec<i64>> = p
            .iter()
            .map(|r| r.iter().zip(&scale).map(|(x, s)| x * s).collect())
            .collect();
        let j: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| match i % 2 {
                        0 if k == i + 1 => 1,
                        1 if k + 1 == i => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let pt: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| p[k][i]).collect()).collect();
        let m = int_mul(&int_mul(&pt, &j), &p);
        Self::from_integers(&m).expect("congruence preserves alternation")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_gf2(&self) -> bool {
        matches!(self.entries, Entries::Gf2(_))
    }

    /// `ω(e_i, e_j)` with 0-based indices.
    pub fn value(&self, i: usize, j: usize) -> FieldElement {
        match &self.entries {
            Entries::Gf2(m) => FieldElement::Gf2(m.get(i, j)),
            Entries::Rational(rows) => FieldElement::Rational(rows[i][j].clone()),
        }
    }

    fn nonzero(&self, i: usize, j: usize) -> bool {
        match &self.entries {
            Entries::Gf2(m) => m.get(i, j),
            Entries::Rational(rows) => !rows[i][j].is_zero(),
        }
    }

    /// Whether the Gram matrix is invertible over its field.
    pub fn is_nondegenerate(&self) -> bool {
        match &self.entries {
            Entries::Gf2(m) => m.rank() == self.dim,
            Entries::Rational(rows) => rational_rank(rows) == self.dim,
        }
    }

    /// Adjacency lists of the support graph, partners ascending.
    fn support(&self) -> Vec<Vec<usize>> {
        (0..self.dim)
            .map(|i| (0..self.dim).filter(|&j| j != i && self.nonzero(i, j)).collect())
            .collect()
    }

    /// A perfect matching of the support graph, found by backtracking: the
    /// smallest unmatched index is paired with its smallest admissible partner.
    pub fn gutt_pairing(&self) -> Result<PairingPermutation> {
        if self.dim % 2 == 1 {
            return Err(Error::OddDimension(self.dim));
        }
        let support = self.support();
        let mut matched = vec![false; self.dim];
        let mut sigma = Vec::with_capacity(self.dim);
        if !extend_matching(&support, &mut matched, &mut sigma) {
            return Err(Error::NoPairing);
        }
        let pair_values = sigma.chunks(2).map(|p| self.value(p[0], p[1])).collect();
        Ok(PairingPermutation {
            sigma: sigma.into_iter().map(|i| i + 1).collect(),
            pair_values,
        })
    }

    /// Checks a pairing directly against the form: `σ` is a permutation of
    /// `1..=dim` and every recorded pair value is the (nonzero) form value.
    pub fn verify_pairing(&self, p: &PairingPermutation) -> bool {
        let mut seen = vec![false; self.dim];
        if p.sigma.len() != self.dim || p.pair_values.len() * 2 != self.dim {
            return false;
        }
        for &s in &p.sigma {
            if s == 0 || s > self.dim || std::mem::replace(&mut seen[s - 1], true) {
                return false;
            }
        }
        p.pairs().iter().zip(&p.pair_values).all(|(&(a, b), v)| {
            let actual = self.value(a - 1, b - 1);
            !actual.is_zero() && &actual == v
        })
    }

    /// Number of perfect matchings of the support graph.
    pub fn matching_count(&self) -> Result<u64> {
        if self.dim > MAX_MATCHING_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.dim,
                limit: MAX_MATCHING_DIM,
            });
        }
        if self.dim % 2 == 1 {
            return Ok(0);
        }
        let support = self.support();
        Ok(count_matchings(&support, &mut vec![false; self.dim]))
    }

    /// GF(2) forms use the bit-matrix format; rational forms write `rows cols`
    /// followed by one row of `p/q` tokens per line.
    pub fn to_text(&self) -> String {
        match &self.entries {
            Entries::Gf2(m) => m.to_text(),
            Entries::Rational(rows) => {
                let mut out = format!("{} {}\n", self.dim, self.dim);
                for r in rows {
                    let line: Vec<String> = r.iter().map(ToString::to_string).collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }

    /// Reads either text format. Inputs whose entries are all `0`/`1` are taken
    /// as GF(2) forms.
    pub fn from_text(input: &str) -> Result<Self> {
        let binary = content_lines(input)
            .skip(1)
            .all(|(_, l)| l.chars().all(|c| c == '0' || c == '1' || c.is_whitespace()));
        if binary {
            Self::gf2(BitMatrix::from_text(input)?)
        } else {
            Self::rational(parse_rational_matrix(input)?)
        }
    }
}

fn extend_matching(support: &[Vec<usize>], matched: &mut [bool], sigma: &mut Vec<usize>) -> bool {
    let Some(i) = matched.iter().position(|m| !m) else {
        return true;
    };
    // An unmatched vertex with no free partner cannot be completed.
    let stuck = (0..matched.len())
        .any(|v| !matched[v] && support[v].iter().all(|&w| matched[w]));
    if stuck {
        return false;
    }
    matched[i] = true;
    for &j in &support[i] {
        if matched[j] {
            continue;
        }
        matched[j] = true;
        sigma.extend([i, j]);
        if extend_matching(support, matched, sigma) {
            return true;
        }
        sigma.truncate(sigma.len() - 2);
        matched[j] = false;
    }
    matched[i] = false;
    false
}

fn count_matchings(support: &[Vec<usize>], matched: &mut [bool]) -> u64 {
    let Some(i) = matched.iter().position(|m| !m) else {
        return 1;
    };
    matched[i] = true;
    let mut total = 0;
    for &j in &support[i] {
        if !matched[j] {
            matched[j] = true;
            total += count_matchings(support, matched);
            matched[j] = false;
        }
    }
    matched[i] = false;
    total
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum())
                .collect()
        })
        .collect()
}

fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        let pivot: Vec<BigRational> = m[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn parse_rational(line_no: usize, tok: &str) -> Result<BigRational> {
    let bad = || parse_err(line_no, format!("invalid rational {tok:?}"));
    let (p, q) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn parse_rational_matrix(input: &str) -> Result<Vec<Vec<BigRational>>> {
    let mut lines = content_lines(input);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let dims = parse_usize_fields(hl, header, 2)?;
    let (rows, cols) = (dims[0], dims[1]);
    let mut out = Vec::with_capacity(rows);
    for (line_no, line) in lines {
        if out.len() == rows {
            return Err(parse_err(line_no, "too many rows"));
        }
        let row: Vec<BigRational> = line
            .split_whitespace()
            .map(|t| parse_rational(line_no, t))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(parse_err(
                line_no,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        out.push(row);
    }
    if out.len() != rows {
        return Err(parse_err(
            input.lines().count().max(1),
            format!("expected {rows} rows, found {}", out.len()),
        ));
    }
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    Ok(out)
}

impl fmt::Display for PairingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma: Vec<String> = self.sigma.iter().map(ToString::to_string).collect();
        write!(f, "σ = ({})", sigma.join(","))?;
        for ((a, b), v) in self.pairs().into_iter().zip(&self.pair_values) {
            write!(f, "  ω(e{a},e{b}) = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2(rows: &[&str]) -> AlternatingForm {
        let bytes: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| r.bytes().map(|b| b - b'0').collect())
            .collect();
        AlternatingForm::gf2(BitMatrix::from_u8_rows(&bytes).unwrap()).unwrap()
    }

    fn all_alternating(n: usize) -> impl Iterator<Item = AlternatingForm> {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        (0u32..1 << slots.len()).map(move |mask| {
            let mut m = BitMatrix::zeros(n, n);
            for (k, &(i, j)) in slots.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    m.set(i, j, true);
                    m.set(j, i, true);
                }
            }
            AlternatingForm::gf2(m).unwrap()
        })
    }

    /// Matchings listed by brute force over all permutations, independent of
    /// the backtracking order.
    fn brute_force_matchings(f: &AlternatingForm) -> u64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for k in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(k, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = f.dim();
        let mut canon: Vec<Vec<(usize, usize)>> = perms(n)
            .into_iter()
            .filter(|p| p.chunks(2).all(|c| f.nonzero(c[0], c[1])))
            .map(|p| {
                let mut pairs: Vec<(usize, usize)> =
                    p.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
                pairs.sort();
                pairs
            })
            .collect();
        canon.sort();
        canon.dedup();
        canon.len() as u64
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(AlternatingForm::standard_gf2(2).is_nondegenerate());
        assert!(AlternatingForm::standard_rational(3).is_nondegenerate());
        assert!(!AlternatingForm::gf2(BitMatrix::zeros(4, 4)).unwrap().is_nondegenerate());
        let mut rows = vec![vec![0i64; 4]; 4];
        rows[0][1] = 1;
        rows[1][0] = -1;
        assert!(!AlternatingForm::from_integers(&rows).unwrap().is_nondegenerate());
    }

    #[test]
    fn rejects_non_alternating() {
        assert_eq!(
            AlternatingForm::gf2(BitMatrix::identity(2)),
            Err(Error::NotAlternating)
        );
        assert_eq!(
            AlternatingForm::from_integers(&[vec![0, 1], vec![1, 0]]),
            Err(Error::NotAlternating)
        );
        assert_eq!(
            AlternatingForm::from_integers(&[vec![0, 1]]),
            Err(Error::NonSquare { rows: 1, cols: 2 })
        );
    }

    #[test]
    fn standard_form_pairs_identically() {
        for g in 1..=4 {
            for f in [
                AlternatingForm::standard_gf2(g),
                AlternatingForm::standard_rational(g),
            ] {
                let p = f.gutt_pairing().unwrap();
                assert_eq!(p.sigma, (1..=2 * g).collect::<Vec<_>>());
                assert!(p.pair_values.iter().all(|v| v.to_string() == "1"));
                assert!(f.verify_pairing(&p));
            }
        }
    }

    #[test]
    fn forced_matching() {
        let f = gf2(&["0010", "0001", "1000", "0100"]);
        let p = f.gutt_pairing().unwrap();
        assert_eq!(p.sigma, vec![1, 3, 2, 4]);
        assert_eq!(p.pairs(), vec![(1, 3), (2, 4)]);
        assert_eq!(f.matching_count().unwrap(), 1);
    }

    #[test]
    fn backtracks_past_greedy_choice() {
        // Pairing 1 with 2 strands vertex 3; only {1,3},{2,4} works.
        let f = gf2(&["0110", "1001", "1000", "0100"]);
        assert_eq!(f.gutt_pairing().unwrap().sigma, vec![1, 3, 2, 4]);
    }

    #[test]
    fn errors() {
        let odd = AlternatingForm::gf2(BitMatrix::zeros(3, 3)).unwrap();
        assert_eq!(odd.gutt_pairing(), Err(Error::OddDimension(3)));
        let zero = AlternatingForm::gf2(BitMatrix::zeros(4, 4)).unwrap();
        assert_eq!(zero.gutt_pairing(), Err(Error::NoPairing));
        assert_eq!(zero.matching_count().unwrap(), 0);
        assert_eq!(
            AlternatingForm::standard_gf2(6).matching_count(),
            Err(Error::DimensionTooLarge { dim: 12, limit: 10 })
        );
    }

    #[test]
    fn matching_count_examples() {
        assert_eq!(AlternatingForm::standard_gf2(2).matching_count().unwrap(), 1);
        let k4 = gf2(&["0111", "1011", "1101", "1110"]);
        assert_eq!(k4.matching_count().unwrap(), 3);
        // K₆ has 5·3·1 perfect matchings.
        let k6 = AlternatingForm::gf2(BitMatrix::from_fn(6, 6, |i, j| i != j)).unwrap();
        assert_eq!(k6.matching_count().unwrap(), 15);
    }

    #[test]
    fn exhaustive_small_dimensions() {
        for n in [2, 4, 6] {
            let mut nondegenerate = 0;
            for f in all_alternating(n) {
                let count = f.matching_count().unwrap();
                match f.gutt_pairing() {
                    Ok(p) => {
                        assert!(f.verify_pairing(&p));
                        assert!(count >= 1);
                    }
                    Err(Error::NoPairing) => {
                        assert!(!f.is_nondegenerate());
                        assert_eq!(count, 0);
                    }
                    Err(e) => panic!("unexpected {e}"),
                }
                if f.is_nondegenerate() {
                    nondegenerate += 1;
                    // over GF(2) the Pfaffian is the matching count mod 2
                    assert_eq!(count % 2, 1);
                }
                if n <= 4 {
                    assert_eq!(count, brute_force_matchings(&f));
                }
            }
            // |alternating nondegenerate forms| = |GL_n(F₂)| / |Sp_n(F₂)|
            let expected = match n {
                2 => 1,
                4 => 28,
                _ => 13888,
            };
            assert_eq!(nondegenerate, expected);
        }
    }

    #[test]
    fn matching_count_agrees_with_permutation_oracle_dim6() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let f = AlternatingForm::random_congruent_gf2(3, &mut rng);
            assert_eq!(f.matching_count().unwrap(), brute_force_matchings(&f));
        }
    }

    #[test]
    fn random_congruences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let f = AlternatingForm::random_congruent_gf2(4, &mut rng);
            assert!(f.is_nondegenerate());
            let p = f.gutt_pairing().unwrap();
            assert!(f.verify_pairing(&p));
            assert!(p.pair_values.iter().all(|v| *v == FieldElement::Gf2(true)));
        }
        for g in 1..=4 {
            let f = AlternatingForm::random_congruent_rational(g, &mut rng);
            assert!(f.is_nondegenerate());
            let p = f.gutt_pairing().unwrap();
            assert!(f.verify_pairing(&p));
        }
    }

    #[test]
    fn verify_rejects_bad_pairings() {
        let f = AlternatingForm::standard_gf2(2);
        let bad = PairingPermutation {
            sigma: vec![1, 3, 2, 4],
            pair_values: vec![FieldElement::Gf2(true); 2],
        };
        assert!(!f.verify_pairing(&bad));
        let repeated = PairingPermutation {
            sigma: vec![1, 2, 1, 2],
            pair_values: vec![FieldElement::Gf2(true); 2],
        };
        assert!(!f.verify_pairing(&repeated));
    }

    #[test]
    fn text_formats() {
        let f = AlternatingForm::from_text("4 4\n0100\n1000\n0001\n0010\n").unwrap();
        assert!(f.is_gf2());
        assert_eq!(f, AlternatingForm::standard_gf2(2));
        let q = AlternatingForm::from_text("2 2\n0 3/2\n-3/2 0\n").unwrap();
        assert!(!q.is_gf2());
        let p = q.gutt_pairing().unwrap();
        assert_eq!(p.pair_values[0].to_string(), "3/2");
        assert_eq!(AlternatingForm::from_text(&q.to_text()).unwrap(), q);
        let r = AlternatingForm::standard_rational(2);
        assert_eq!(AlternatingForm::from_text(&r.to_text()).unwrap(), r);
        assert!(matches!(
            AlternatingForm::from_text("2 2\n0 1/0\n-1 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"sigma":[1,2],"pair_values":["3/2"]}"#
        );
    }
}
