//! Multilinear forms over Z₂ and their mod-2 invariants.
//!
//! Indices are 0-based throughout the Rust API. The invariant text format uses
//! 1-based indices to match the usual `F_{i₁…iₙ}` notation.

use std::collections::BTreeMap;
use std::fmt;

use crate::gf2::BitMatrix;
use crate::text::{content_lines, parse_bits, parse_err, parse_usize_fields};
use crate::{Error, Result};

/// An order-`n`, dimension-`b` multilinear form over Z₂, stored as its `bⁿ`
/// coefficients in row-major order (last index fastest).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Tensor {
    order: usize,
    dim: usize,
    entries: Vec<bool>,
}

/// Which formula [`Gf2Tensor::det2`] used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Det2Route {
    /// Determinant mod 2 of the coefficient matrix.
    Bilinear,
    /// Pfaffian mod 2 (alternating bilinear forms).
    Pfaffian,
    /// Cayley's 2×2×2 hyperdeterminant mod 2.
    Cayley,
}

impl Det2Route {
    pub fn name(self) -> &'static str {
        match self {
            Det2Route::Bilinear => "bilinear-determinant",
            Det2Route::Pfaffian => "pfaffian",
            Det2Route::Cayley => "cayley-2x2x2",
        }
    }
}

impl Gf2Tensor {
    pub fn zeros(order: usize, dim: usize) -> Self {
        assert!(order >= 1 && dim >= 1, "order and dim must be positive");
        Self {
            order,
            dim,
            entries: vec![false; dim.pow(order as u32)],
        }
    }

    pub fn from_entries(order: usize, dim: usize, entries: Vec<bool>) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let expected = dim.pow(order as u32);
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: entries.len(),
            });
        }
        Ok(Self {
            order,
            dim,
            entries,
        })
    }

    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> bool) -> Self {
        let mut t = Self::zeros(order, dim);
        let mut idx = vec![0; order];
        for lin in 0..t.entries.len() {
            t.unravel_into(lin, &mut idx);
            t.entries[lin] = f(&idx);
        }
        t
    }

    /// Tensor with exactly the listed coefficients set to 1.
    pub fn with_ones(order: usize, dim: usize, ones: &[&[usize]]) -> Result<Self> {
        let mut t = Self::zeros(order, dim);
        for idx in ones {
            t.set(idx, true)?;
        }
        Ok(t)
    }

    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(Self::from_fn(2, m.rows(), |i| m.get(i[0], i[1])))
    }

    /// The coefficient matrix of a bilinear form.
    pub fn to_matrix(&self) -> Result<BitMatrix> {
        self.require_order(2)?;
        Ok(BitMatrix::from_fn(self.dim, self.dim, |r, c| {
            self.entries[r * self.dim + c]
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| !e)
    }

    fn require_order(&self, expected: usize) -> Result<()> {
        if self.order != expected {
            return Err(Error::WrongOrder {
                expected,
                got: self.order,
            });
        }
        Ok(())
    }

    fn linear_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: idx.len(),
            });
        }
        idx.iter().try_fold(0, |acc, &i| {
            if i >= self.dim {
                Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.dim,
                })
            } else {
                Ok(acc * self.dim + i)
            }
        })
    }

    fn unravel_into(&self, mut lin: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = lin % self.dim;
            lin /= self.dim;
        }
    }

    /// The coefficient `F(e_{i₁}, …, e_{iₙ})`.
    pub fn entry(&self, idx: &[usize]) -> Result<bool> {
        Ok(self.entries[self.linear_index(idx)?])
    }

    pub fn set(&mut self, idx: &[usize], value: bool) -> Result<()> {
        let lin = self.linear_index(idx)?;
        self.entries[lin] = value;
        Ok(())
    }

    /// Re-expresses the form in the basis whose `i`-th vector is column `i` of `a`:
    /// `F′(e_{i₁}, …, e_{iₙ}) = F(A e_{i₁}, …, A e_{iₙ})`.
    ///
    /// Applied one slot at a time, which is the same multilinear expansion
    /// factored into `n` mode products.
    pub fn change_basis(&self, a: &BitMatrix) -> Result<Gf2Tensor> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: if a.rows() != self.dim { a.rows() } else { a.cols() },
            });
        }
        if !a.det2()? {
            return Err(Error::SingularBasisChange);
        }
        let b = self.dim;
        let mut cur = self.entries.clone();
        for mode in 0..self.order {
            let inner = b.pow((self.order - mode - 1) as u32);
            let outer = b.pow(mode as u32);
            let mut next = vec![false; cur.len()];
            for o in 0..outer {
                for i in 0..b {
                    for s in 0..inner {
                        let mut acc = false;
                        for j in 0..b {
                            if a.get(j, i) {
                                acc ^= cur[(o * b + j) * inner + s];
                            }
                        }
                        next[(o * b + i) * inner + s] = acc;
                    }
                }
            }
            cur = next;
        }
        Ok(Gf2Tensor {
            order: self.order,
            dim: self.dim,
            entries: cur,
        })
    }

    /// True iff the coefficients are invariant under every permutation of the index tuple.
    pub fn is_symmetric(&self) -> bool {
        let mut idx = vec![0; self.order];
        let mut sorted = vec![0; self.order];
        (0..self.entries.len()).all(|lin| {
            self.unravel_into(lin, &mut idx);
            sorted.copy_from_slice(&idx);
            sorted.sort_unstable();
            let canon = sorted.iter().fold(0, |acc, &i| acc * self.dim + i);
            self.entries[lin] == self.entries[canon]
        })
    }

    /// Symmetric with vanishing diagonal.
    pub fn is_alternating_bilinear(&self) -> Result<bool> {
        self.require_order(2)?;
        Ok(self.is_symmetric() && (0..self.dim).all(|i| !self.entries[i * self.dim + i]))
    }

    /// `Σ_σ Π_k F_{k,σ(k)}` mod 2, computed as the GF(2) determinant.
    pub fn det2_bilinear(&self) -> Result<bool> {
        self.to_matrix()?.det2()
    }

    /// Milnor's form of the determinant for symmetric bilinear forms: a sum over
    /// partitions of the index set into singletons `{i}` (weight `F_ii`) and
    /// pairs `{i,j}` (weight `F_ij`).
    pub fn det2_symmetric_partition(&self) -> Result<bool> {
        self.require_order(2)?;
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        fn rec(t: &Gf2Tensor, used: &mut [bool]) -> bool {
            let b = t.dim;
            let Some(i) = used.iter().position(|&u| !u) else {
                return true;
            };
            used[i] = true;
            let mut acc = false;
            if t.entries[i * b + i] {
                acc ^= rec(t, used);
            }
            for j in i + 1..b {
                if !used[j] && t.entries[i * b + j] {
                    used[j] = true;
                    acc ^= rec(t, used);
                    used[j] = false;
                }
            }
            used[i] = false;
            acc
        }
        Ok(rec(self, &mut vec![false; self.dim]))
    }

    /// Cayley's hyperdeterminant of a 2×2×2 form, reduced mod 2:
    /// `F₁₁₁F₂₂₂ + F₁₂₂F₂₁₁ + F₂₁₂F₁₂₁ + F₂₂₁F₁₁₂`.
    pub fn cayley_det2(&self) -> Result<bool> {
        if self.order != 3 || self.dim != 2 {
            return Err(Error::WrongFormat {
                order: self.order,
                dim: self.dim,
            });
        }
        let f = |i: usize, j: usize, k: usize| self.entries[(i * 2 + j) * 2 + k];
        Ok((f(0, 0, 0) & f(1, 1, 1))
            ^ (f(0, 1, 1) & f(1, 0, 0))
            ^ (f(1, 0, 1) & f(0, 1, 0))
            ^ (f(1, 1, 0) & f(0, 0, 1)))
    }

    /// `Det₂` for the supported formats, together with the formula used.
    ///
    /// Bilinear forms (any dimension) and 2×2×2 forms are supported. Everything
    /// else is refused with [`Error::UnsupportedFormat`].
    pub fn det2_with_route(&self) -> Result<(bool, Det2Route)> {
        match (self.order, self.dim) {
            (2, _) => {
                let m = self.to_matrix()?;
                if m.is_alternating() && self.dim % 2 == 0 {
                    Ok((m.pfaffian2()?, Det2Route::Pfaffian))
                } else {
                    Ok((m.det2()?, Det2Route::Bilinear))
                }
            }
            (3, 2) => Ok((self.cayley_det2()?, Det2Route::Cayley)),
            (order, dim) => Err(Error::UnsupportedFormat { order, dim }),
        }
    }

    pub fn det2(&self) -> Result<bool> {
        Ok(self.det2_with_route()?.0)
    }

    /// Parses `order dim` followed by a line of `dim^order` bits.
    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = content_lines(input);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = parse_usize_fields(hl, header, 2)?;
        let (order, dim) = (h[0], h[1]);
        if order == 0 || dim == 0 {
            return Err(parse_err(hl, "order and dim must be positive"));
        }
        let count = dim
            .checked_pow(order as u32)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| parse_err(hl, "tensor too large"))?;
        let (bl, body) = lines
            .next()
            .ok_or_else(|| parse_err(hl + 1, "missing coefficient line"))?;
        let entries = parse_bits(bl, body, count)?;
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after coefficients"));
        }
        Self::from_entries(order, dim, entries)
    }

    pub fn to_text(&self) -> String {
        let bits: String = self
            .entries
            .iter()
            .map(|&e| if e { '1' } else { '0' })
            .collect();
        format!("{} {}\n{}\n", self.order, self.dim, bits)
    }
}

impl fmt::Debug for Gf2Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self
            .entries
            .iter()
            .map(|&e| if e { '1' } else { '0' })
            .collect();
        write!(f, "Gf2Tensor(order={}, dim={}, {})", self.order, self.dim, bits)
    }
}

/// One monomial of a balanced invariant: `q` index tuples of length `n`,
/// kept sorted lexicographically.
pub type Term = Vec<Vec<usize>>;

/// A balanced algebraic invariant `κ(F) = Σ_I Π_{(i₁…iₙ)∈I} F_{i₁…iₙ}` where each
/// index appears exactly `m` times across the `q` tuples of every term and `q·n = m·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedInvariant {
    order: usize,
    dim: usize,
    q: usize,
    m: usize,
    terms: Vec<Term>,
}

impl BalancedInvariant {
    /// Validates the balance conditions, sorts each term's tuples and cancels
    /// repeated terms in pairs (the sum is over Z₂).
    pub fn new(order: usize, dim: usize, q: usize, m: usize, terms: Vec<Term>) -> Result<Self> {
        if order == 0 || dim == 0 || q == 0 || m == 0 {
            return Err(Error::UnbalancedInvariant(
                "order, dim, q and m must be positive".into(),
            ));
        }
        if q * order != m * dim {
            return Err(Error::UnbalancedInvariant(format!(
                "q*n = {} differs from m*b = {}",
                q * order,
                m * dim
            )));
        }
        let mut parity: BTreeMap<Term, bool> = BTreeMap::new();
        for (t, mut term) in terms.into_iter().enumerate() {
            if term.len() != q {
                return Err(Error::UnbalancedInvariant(format!(
                    "term {t} has {} tuples, expected q = {q}",
                    term.len()
                )));
            }
            let mut counts = vec![0usize; dim];
            for tuple in &term {
                if tuple.len() != order {
                    return Err(Error::UnbalancedInvariant(format!(
                        "term {t} has a tuple of length {}, expected {order}",
                        tuple.len()
                    )));
                }
                for &i in tuple {
                    if i >= dim {
                        return Err(Error::IndexOutOfRange { index: i, dim });
                    }
                    counts[i] += 1;
                }
            }
            if let Some(i) = counts.iter().position(|&c| c != m) {
                return Err(Error::UnbalancedInvariant(format!(
                    "index {} appears {} times in term {t}, expected m = {m}",
                    i + 1,
                    counts[i]
                )));
            }
            term.sort();
            *parity.entry(term).or_insert(false) ^= true;
        }
        let terms = parity
            .into_iter()
            .filter_map(|(term, odd)| odd.then_some(term))
            .collect();
        Ok(Self {
            order,
            dim,
            q,
            m,
            terms,
        })
    }

    /// The determinant as a balanced invariant of bilinear forms:
    /// one term `{(k, σ(k))}` per permutation `σ` of `b` letters.
    pub fn permutation_sum(b: usize) -> Self {
        let mut terms = Vec::new();
        let mut perm: Vec<usize> = (0..b).collect();
        permutations(&mut perm, 0, &mut |p| {
            terms.push(p.iter().enumerate().map(|(k, &s)| vec![k, s]).collect());
        });
        Self::new(2, b, b, 2, terms).expect("permutation terms are balanced")
    }

    /// Cayley's four terms for the 2×2×2 hyperdeterminant mod 2.
    pub fn cayley() -> Self {
        let terms = vec![
            vec![vec![0, 0, 0], vec![1, 1, 1]],
            vec![vec![0, 1, 1], vec![1, 0, 0]],
            vec![vec![1, 0, 1], vec![0, 1, 0]],
            vec![vec![1, 1, 0], vec![0, 0, 1]],
        ];
        Self::new(3, 2, 2, 3, terms).expect("Cayley terms are balanced")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn check_format(&self, f: &Gf2Tensor) -> Result<()> {
        if self.order != f.order || self.dim != f.dim {
            return Err(Error::FormatMismatch {
                inv_order: self.order,
                inv_dim: self.dim,
                order: f.order,
                dim: f.dim,
            });
        }
        Ok(())
    }

    fn term_value(term: &Term, f: &Gf2Tensor) -> bool {
        term.iter().all(|tuple| {
            f.entries[tuple.iter().fold(0, |acc, &i| acc * f.dim + i)]
        })
    }

    /// `κ(F)` mod 2.
    pub fn evaluate(&self, f: &Gf2Tensor) -> Result<bool> {
        self.check_format(f)?;
        Ok(self
            .terms
            .iter()
            .filter(|t| Self::term_value(t, f))
            .count()
            % 2
            == 1)
    }

    /// When `κ(F) = 1`, a term whose product is 1: the index family along which
    /// every factor `F(α_{π(…)}, …)` equals 1. Returns `None` when `κ(F) = 0`.
    pub fn witness(&self, f: &Gf2Tensor) -> Result<Option<&Term>> {
        if !self.evaluate(f)? {
            return Ok(None);
        }
        Ok(self.terms.iter().find(|t| Self::term_value(t, f)))
    }

    /// Parses `order dim q m` on the first line, then terms as `q` lines of `n`
    /// 1-based indices, consecutive terms separated by blank lines.
    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hl, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| parse_err(1, "empty input"))?;
        let h = parse_usize_fields(hl, header, 4)?;
        let (order, dim, q, m) = (h[0], h[1], h[2], h[3]);
        let mut terms: Vec<Term> = Vec::new();
        let mut current: Term = Vec::new();
        let mut flush = |current: &mut Term, line: usize| -> Result<()> {
            if current.is_empty() {
                return Ok(());
            }
            if current.len() != q {
                return Err(parse_err(
                    line,
                    format!("term has {} tuples, expected {q}", current.len()),
                ));
            }
            terms.push(std::mem::take(current));
            Ok(())
        };
        let mut last = hl;
        for (ln, line) in lines {
            last = ln;
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                flush(&mut current, ln)?;
                continue;
            }
            let tuple = parse_usize_fields(ln, line, order)?;
            if tuple.iter().any(|&i| i == 0 || i > dim) {
                return Err(parse_err(ln, format!("indices must lie in 1..={dim}")));
            }
            current.push(tuple.into_iter().map(|i| i - 1).collect());
            if current.len() > q {
                return Err(parse_err(ln, format!("term has more than {q} tuples")));
            }
        }
        flush(&mut current, last)?;
        Self::new(order, dim, q, m, terms)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.order, self.dim, self.q, self.m);
        for term in &self.terms {
            s.push('\n');
            for tuple in term {
                let line: Vec<String> = tuple.iter().map(|i| (i + 1).to_string()).collect();
                s.push_str(&line.join(" "));
                s.push('\n');
            }
        }
        s
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}
