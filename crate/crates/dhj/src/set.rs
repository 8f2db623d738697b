//! Dense point sets over `[k]^n` with exact rational densities.
//!
//! A `PointSet` is a bitmap of all `k^n` membership flags plus a cached
//! cardinality. Ambient sizes are desk-scale by the construction cap, so
//! set algebra is eager and bitmap-wide. All densities are exact
//! rationals; no decision in this crate compares floats.

use crate::cube::{Cube, Subspace, Word};
use crate::error::{Error, Result};
use crate::ratio::{fmt_q, Q};
use num::BigInt;
use num::{One, Zero};
use std::fmt;

/// An exact density in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Density(Q);

impl Density {
    pub fn new(value: Q) -> Result<Self> {
        if value < Q::zero() || value > Q::one() {
            return Err(Error::ParameterOutOfRange(format!(
                "density {} outside [0, 1]",
                fmt_q(&value)
            )));
        }
        Ok(Density(value))
    }

    pub fn from_count(count: usize, total: usize) -> Self {
        debug_assert!(count <= total && total > 0);
        Density(Q::new(BigInt::from(count), BigInt::from(total)))
    }

    pub fn ratio(&self) -> &Q {
        &self.0
    }

    pub fn into_ratio(self) -> Q {
        self.0
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.0))
    }
}

/// A subset of `[k]^n` as a dense membership bitmap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    cube: Cube,
    bits: Vec<u64>,
    count: usize,
}

impl PointSet {
    pub fn empty(cube: Cube) -> Self {
        let words = cube.point_count().div_ceil(64);
        PointSet { cube, bits: vec![0; words], count: 0 }
    }

    pub fn full(cube: Cube) -> Self {
        let mut set = Self::empty(cube);
        let n = cube.point_count();
        for w in 0..set.bits.len() {
            set.bits[w] = u64::MAX;
        }
        let spare = set.bits.len() * 64 - n;
        if spare > 0 {
            let last = set.bits.len() - 1;
            set.bits[last] >>= spare;
        }
        set.count = n;
        set
    }

    pub fn from_indices(cube: Cube, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(cube);
        for i in indices {
            set.insert_index(i);
        }
        set
    }

    pub fn from_words<'a>(cube: Cube, words: impl IntoIterator<Item = &'a Word>) -> Result<Self> {
        let mut set = Self::empty(cube);
        for w in words {
            set.cube.same_ambient(&w.cube())?;
            set.insert_index(w.index());
        }
        Ok(set)
    }

    /// Membership predicate over all indices of the ambient cube.
    pub fn from_fn(cube: Cube, mut pred: impl FnMut(&Word) -> bool) -> Self {
        let mut set = Self::empty(cube);
        for i in 0..cube.point_count() {
            if pred(&cube.word_from_index(i)) {
                set.insert_index(i);
            }
        }
        set
    }

    pub fn cube(&self) -> Cube {
        self.cube
    }

    pub fn cardinality(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains_index(&self, index: usize) -> bool {
        debug_assert!(index < self.cube.point_count());
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn contains(&self, word: &Word) -> Result<bool> {
        self.cube.same_ambient(&word.cube())?;
        Ok(self.contains_index(word.index()))
    }

    pub fn insert_index(&mut self, index: usize) {
        debug_assert!(index < self.cube.point_count());
        let mask = 1u64 << (index % 64);
        if self.bits[index / 64] & mask == 0 {
            self.bits[index / 64] |= mask;
            self.count += 1;
        }
    }

    pub fn remove_index(&mut self, index: usize) {
        let mask = 1u64 << (index % 64);
        if self.bits[index / 64] & mask != 0 {
            self.bits[index / 64] &= !mask;
            self.count -= 1;
        }
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn iter_words(&self) -> impl Iterator<Item = Word> + '_ {
        self.iter_indices().map(|i| self.cube.word_from_index(i))
    }

    fn zip_check(&self, other: &PointSet) -> Result<()> {
        self.cube.same_ambient(&other.cube)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_check(other)?;
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(PointSet::from_raw(self.cube, bits))
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_check(other)?;
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(PointSet::from_raw(self.cube, bits))
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_check(other)?;
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect();
        Ok(PointSet::from_raw(self.cube, bits))
    }

    pub fn complement(&self) -> PointSet {
        let full = PointSet::full(self.cube);
        let bits: Vec<u64> = full.bits.iter().zip(&self.bits).map(|(f, a)| f & !a).collect();
        PointSet::from_raw(self.cube, bits)
    }

    pub fn is_subset_of(&self, other: &PointSet) -> Result<bool> {
        self.zip_check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint_from(&self, other: &PointSet) -> Result<bool> {
        self.zip_check(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0))
    }

    fn from_raw(cube: Cube, bits: Vec<u64>) -> PointSet {
        let count = bits.iter().map(|b| b.count_ones() as usize).sum();
        PointSet { cube, bits, count }
    }

    /// `|A| / k^n`, exactly.
    pub fn density(&self) -> Density {
        Density::from_count(self.count, self.cube.point_count())
    }

    /// `|A ∩ V| / k^m`, exactly.
    pub fn density_in(&self, v: &Subspace) -> Result<Density> {
        self.cube.same_ambient(&v.ambient())?;
        let total = v.ambient().alphabet().size() as usize;
        let total = total.pow(v.dimension() as u32);
        let mut count = 0;
        for p in v.points_iter() {
            if self.contains_index(p.index()) {
                count += 1;
            }
        }
        Ok(Density::from_count(count, total))
    }

    /// The slice `A_x = { y : x ⌢ y ∈ A }` over `[k]^(n-l)`.
    ///
    /// Big-endian indexing makes the slice a contiguous index range.
    pub fn slice(&self, prefix: &Word) -> Result<PointSet> {
        if prefix.k() != self.cube.k() {
            return Err(Error::AlphabetMismatch(self.cube.k() as u64, prefix.k() as u64));
        }
        let l = prefix.len();
        if l >= self.cube.n() {
            return Err(Error::SliceTooLong { prefix: l as u64, n: self.cube.n() as u64 });
        }
        let sub = Cube::new(self.cube.k(), self.cube.n() - l)?;
        let len = sub.point_count();
        let start = prefix.index() * len;
        let mut out = PointSet::empty(sub);
        for w in 0..out.bits.len() {
            out.bits[w] = self.extract_u64(start + w * 64, len.saturating_sub(w * 64).min(64));
        }
        out.count = out.bits.iter().map(|b| b.count_ones() as usize).sum();
        Ok(out)
    }

    /// Up to `len <= 64` bits starting at absolute bit `start`.
    fn extract_u64(&self, start: usize, len: usize) -> u64 {
        if len == 0 {
            return 0;
        }
        let word = start / 64;
        let off = start % 64;
        let mut v = self.bits[word] >> off;
        if off > 0 && word + 1 < self.bits.len() {
            v |= self.bits[word + 1] << (64 - off);
        }
        if len < 64 {
            v &= (1u64 << len) - 1;
        }
        v
    }

    /// Pulls this set back through a subspace embedding: the set
    /// `{ w in [k]^m : embed(V, w) ∈ A }` in the model cube.
    pub fn pull_back(&self, v: &Subspace) -> Result<PointSet> {
        self.cube.same_ambient(&v.ambient())?;
        let model = Cube::new(self.cube.k(), v.dimension())?;
        let mut out = PointSet::empty(model);
        for i in 0..model.point_count() {
            let w = model.word_from_index(i);
            if self.contains_index(v.embed(&w)?.index()) {
                out.insert_index(i);
            }
        }
        Ok(out)
    }

    /// Pushes a model-cube set forward through a subspace embedding.
    pub fn push_forward(&self, v: &Subspace) -> Result<PointSet> {
        let model = Cube::new(v.ambient().k(), v.dimension())?;
        self.cube.same_ambient(&model)?;
        let mut out = PointSet::empty(v.ambient());
        for i in self.iter_indices() {
            let w = model.word_from_index(i);
            out.insert_index(v.embed(&w)?.index());
        }
        Ok(out)
    }

    // ---- wordset v1 file format ----

    /// Parses the "wordset v1" text format: an optional leading comment
    /// block (`#`), a header `k=<k> n=<n>`, then one word per line in text
    /// form. Duplicate words are rejected.
    pub fn parse_wordset(input: &str) -> Result<PointSet> {
        let mut set: Option<PointSet> = None;
        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match &mut set {
                None => {
                    let parse_err = |msg: &str| Error::WordsetParse {
                        line: lineno + 1,
                        msg: msg.to_string(),
                    };
                    let mut k = None;
                    let mut n = None;
                    for field in line.split_whitespace() {
                        match field.split_once('=') {
                            Some(("k", v)) => k = v.parse::<u16>().ok(),
                            Some(("n", v)) => n = v.parse::<u16>().ok(),
                            _ => return Err(parse_err(&format!("unexpected header field '{field}'"))),
                        }
                    }
                    let k = k.ok_or_else(|| parse_err("missing k=<k>"))?;
                    let n = n.ok_or_else(|| parse_err("missing n=<n>"))?;
                    set = Some(PointSet::empty(Cube::new(k, n)?));
                }
                Some(set) => {
                    let word = Word::parse(set.cube.k(), line).map_err(|e| Error::WordsetParse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    })?;
                    if word.len() != set.cube.n() {
                        return Err(Error::WordsetParse {
                            line: lineno + 1,
                            msg: format!("word length {} != n {}", word.len(), set.cube.n()),
                        });
                    }
                    if set.contains_index(word.index()) {
                        return Err(Error::DuplicateWord(word.to_string()));
                    }
                    set.insert_index(word.index());
                }
            }
        }
        set.ok_or(Error::WordsetParse { line: 0, msg: "missing header".into() })
    }

    /// Canonical emission: header, then member words in index order.
    /// `parse(emit(A)) == A` bit-for-bit, and `emit(parse(f)) == f` for
    /// canonically formatted files.
    pub fn emit_wordset(&self) -> String {
        let mut out = format!("k={} n={}\n", self.cube.k(), self.cube.n());
        for w in self.iter_words() {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }
}

impl Subspace {
    /// The point set `{ z(a_1, ..., a_m) }`, of cardinality exactly `k^m`.
    pub fn point_set(&self) -> PointSet {
        let mut out = PointSet::empty(self.ambient());
        for p in self.points_iter() {
            out.insert_index(p.index());
        }
        debug_assert_eq!(out.cardinality(), self.ambient().stride(self.dimension()));
        out
    }

    /// `V ↾ k' = { z(a_1, ..., a_m) : a_i ∈ [k'] }`, exactly `k'^m` points.
    pub fn restrict(&self, k_prime: u16) -> Result<PointSet> {
        let k = self.ambient().k();
        if k_prime < 2 || k_prime > k {
            return Err(Error::RestrictionOutOfRange { k_prime: k_prime as u64, k: k as u64 });
        }
        let model = Cube::new(k_prime, self.dimension())?;
        let mut out = PointSet::empty(self.ambient());
        for i in 0..model.point_count() {
            let a = model.word_from_index(i);
            out.insert_index(self.generator().instantiate(a.letters())?.index());
        }
        debug_assert_eq!(out.cardinality(), model.point_count());
        Ok(out)
    }
}
