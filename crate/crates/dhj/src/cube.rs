//! Words, variable words, combinatorial lines and subspaces of `[k]^n`.
//!
//! Letters are `1..=k`. A word is indexed big-endian in the mixed-radix
//! system, `index(x) = sum (x_i - 1) * k^(n-i)`, so concatenation is index
//! arithmetic and prefix slices are contiguous index ranges.
//!
//! Lines and subspaces are identified with canonical variable words: the
//! first occurrences of `v_1, v_2, ...` appear in increasing position
//! order. Two variable words generate the same point set exactly when
//! their canonical forms are equal, so canonical enumeration is
//! duplicate-free. The enumeration order is lexicographic with symbol
//! order `1 < 2 < ... < k < v_1 < v_2 < ...`.

use crate::error::{Error, Result};
use num::BigInt;
use std::fmt;

/// Hard cap on ambient sizes: all sets are dense bitmaps, so constructors
/// reject any `[k]^n` with more than this many points.
pub const DEFAULT_POINT_CAP: usize = 1 << 28;

/// The alphabet `[k] = {1, ..., k}`, `k >= 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Alphabet {
    k: u16,
}

impl Alphabet {
    pub fn new(k: u16) -> Result<Self> {
        if k < 2 {
            return Err(Error::AlphabetTooSmall(k as u64));
        }
        Ok(Alphabet { k })
    }

    pub fn size(&self) -> u16 {
        self.k
    }

    pub fn letters(&self) -> impl Iterator<Item = u16> {
        1..=self.k
    }

    pub fn check_letter(&self, letter: u16) -> Result<()> {
        if letter < 1 || letter > self.k {
            return Err(Error::LetterOutOfRange { letter: letter as u64, k: self.k as u64 });
        }
        Ok(())
    }
}

/// The ambient cube `[k]^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Cube {
    alphabet: Alphabet,
    n: u16,
}

impl Cube {
    pub fn new(k: u16, n: u16) -> Result<Self> {
        Self::with_cap(k, n, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(k: u16, n: u16, cap: usize) -> Result<Self> {
        let alphabet = Alphabet::new(k)?;
        if n < 1 {
            return Err(Error::EmptyWord);
        }
        let mut points: u128 = 1;
        for _ in 0..n {
            points = points.saturating_mul(k as u128);
            if points > cap as u128 {
                return Err(Error::AmbientTooLarge { k: k as u64, n: n as u64, points, cap });
            }
        }
        Ok(Cube { alphabet, n })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn k(&self) -> u16 {
        self.alphabet.k
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn point_count(&self) -> usize {
        (self.alphabet.k as usize).pow(self.n as u32)
    }

    /// `k^e`, used for index arithmetic within this ambient.
    pub fn stride(&self, e: u16) -> usize {
        (self.alphabet.k as usize).pow(e as u32)
    }

    pub fn word_from_index(&self, index: usize) -> Word {
        debug_assert!(index < self.point_count());
        let k = self.alphabet.k as usize;
        let mut letters = vec![1u16; self.n as usize];
        let mut rest = index;
        for i in (0..self.n as usize).rev() {
            letters[i] = (rest % k) as u16 + 1;
            rest /= k;
        }
        Word { k: self.alphabet.k, letters }
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.point_count()).map(move |i| self.word_from_index(i))
    }

    pub fn same_ambient(&self, other: &Cube) -> Result<()> {
        if self != other {
            return Err(Error::AmbientMismatch {
                k_a: self.k() as u64,
                n_a: self.n() as u64,
                k_b: other.k() as u64,
                n_b: other.n() as u64,
            });
        }
        Ok(())
    }
}

/// An element of `[k]^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Word {
    k: u16,
    letters: Vec<u16>,
}

impl Word {
    pub fn new(k: u16, letters: Vec<u16>) -> Result<Self> {
        let cube = Cube::new(k, letters.len() as u16)?;
        for &l in &letters {
            cube.alphabet().check_letter(l)?;
        }
        Ok(Word { k, letters })
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    pub fn len(&self) -> u16 {
        self.letters.len() as u16
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }

    pub fn cube(&self) -> Cube {
        Cube { alphabet: Alphabet { k: self.k }, n: self.len() }
    }

    /// Big-endian mixed-radix index in `[0, k^n)`.
    pub fn index(&self) -> usize {
        let k = self.k as usize;
        let mut idx = 0usize;
        for &l in &self.letters {
            idx = idx * k + (l as usize - 1);
        }
        idx
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.k != other.k {
            return Err(Error::AlphabetMismatch(self.k as u64, other.k as u64));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(self.k, letters)
    }

    /// Replaces every occurrence of `from` by `to`.
    pub fn substitute(&self, from: u16, to: u16) -> Result<Word> {
        let alphabet = Alphabet::new(self.k)?;
        alphabet.check_letter(from)?;
        alphabet.check_letter(to)?;
        let letters = self.letters.iter().map(|&l| if l == from { to } else { l }).collect();
        Ok(Word { k: self.k, letters })
    }

    /// Parses the text form: a digit string for `k <= 9`, dot-separated
    /// letters otherwise.
    pub fn parse(k: u16, s: &str) -> Result<Word> {
        let letters = parse_letter_tokens(k, s)?;
        Word::new(k, letters)
    }
}

fn parse_letter_tokens(k: u16, s: &str) -> Result<Vec<u16>> {
    let bad = |msg: String| Error::ParameterOutOfRange(format!("word '{s}': {msg}"));
    if s.contains('.') {
        s.split('.')
            .map(|tok| tok.parse::<u16>().map_err(|_| bad(format!("bad letter '{tok}'"))))
            .collect()
    } else {
        if k > 9 {
            return Err(bad("alphabets with k > 9 use dot-separated letters".into()));
        }
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as u16).ok_or_else(|| bad(format!("bad letter '{c}'"))))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k <= 9 {
            for &l in &self.letters {
                write!(f, "{l}")?;
            }
        } else {
            for (i, &l) in self.letters.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// A symbol of a variable word: a constant letter or a variable slot.
///
/// The derived order is the enumeration order `1 < ... < k < v_1 < v_2 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Symbol {
    Letter(u16),
    Var(u16),
}

/// An `m`-variable word: a sequence over `[k] ∪ {v_1, ..., v_m}` in which
/// every variable occurs at least once, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct VariableWord {
    k: u16,
    vars: u16,
    symbols: Vec<Symbol>,
}

impl VariableWord {
    /// Validates range, presence and canonical variable order.
    pub fn new(k: u16, vars: u16, symbols: Vec<Symbol>) -> Result<Self> {
        let cube = Cube::new(k, symbols.len() as u16)?;
        if vars < 1 {
            return Err(Error::ParameterOutOfRange("variable count must be >= 1".into()));
        }
        let mut next_new = 1u16;
        for sym in &symbols {
            match *sym {
                Symbol::Letter(l) => cube.alphabet().check_letter(l)?,
                Symbol::Var(j) => {
                    if j < 1 || j > vars {
                        return Err(Error::VariableOutOfRange { var: j as u64, vars: vars as u64 });
                    }
                    if j > next_new {
                        return Err(Error::NotCanonical { earlier: next_new as u64, later: j as u64 });
                    }
                    if j == next_new {
                        next_new += 1;
                    }
                }
            }
        }
        if next_new <= vars {
            return Err(Error::VariableMissing(next_new as u64));
        }
        Ok(VariableWord { k, vars, symbols })
    }

    /// Renumbers variables by first occurrence and returns the canonical word.
    pub fn canonicalize(k: u16, symbols: &[Symbol]) -> Result<Self> {
        let mut map: Vec<Option<u16>> = Vec::new();
        let mut out = Vec::with_capacity(symbols.len());
        for sym in symbols {
            match *sym {
                Symbol::Letter(l) => out.push(Symbol::Letter(l)),
                Symbol::Var(j) => {
                    let j = j as usize;
                    if map.len() < j {
                        map.resize(j, None);
                    }
                    let next = map.iter().filter(|e| e.is_some()).count() as u16 + 1;
                    let renamed = *map[j - 1].get_or_insert(next);
                    out.push(Symbol::Var(renamed));
                }
            }
        }
        let vars = map.iter().filter(|e| e.is_some()).count() as u16;
        VariableWord::new(k, vars, out)
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    pub fn vars(&self) -> u16 {
        self.vars
    }

    pub fn len(&self) -> u16 {
        self.symbols.len() as u16
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn ambient(&self) -> Cube {
        Cube { alphabet: Alphabet { k: self.k }, n: self.len() }
    }

    /// Substitutes `letters[j-1]` for `v_j`.
    pub fn instantiate(&self, letters: &[u16]) -> Result<Word> {
        if letters.len() != self.vars as usize {
            return Err(Error::ArityMismatch { expected: self.vars as usize, got: letters.len() });
        }
        let alphabet = Alphabet { k: self.k };
        for &a in letters {
            alphabet.check_letter(a)?;
        }
        let out = self
            .symbols
            .iter()
            .map(|sym| match *sym {
                Symbol::Letter(l) => l,
                Symbol::Var(j) => letters[j as usize - 1],
            })
            .collect();
        Ok(Word { k: self.k, letters: out })
    }

    /// Substitutes the symbols of `inner` for this word's variables:
    /// `compose(self, inner)(a) = self(inner(a))`. The composition of
    /// canonical words is canonical.
    pub fn compose(&self, inner: &VariableWord) -> Result<VariableWord> {
        if inner.len() != self.vars {
            return Err(Error::ArityMismatch { expected: self.vars as usize, got: inner.len() as usize });
        }
        if inner.k > self.k {
            return Err(Error::AlphabetMismatch(self.k as u64, inner.k as u64));
        }
        let out = self
            .symbols
            .iter()
            .map(|sym| match *sym {
                Symbol::Letter(l) => Symbol::Letter(l),
                Symbol::Var(j) => inner.symbols[j as usize - 1],
            })
            .collect();
        VariableWord::new(self.k, inner.vars, out)
    }

    /// Appends another variable word, renumbering its variables to follow
    /// this word's. The result generates the concatenated subspace.
    pub fn concat_vw(&self, other: &VariableWord) -> Result<VariableWord> {
        if other.k != self.k {
            return Err(Error::AlphabetMismatch(self.k as u64, other.k as u64));
        }
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().map(|s| match *s {
            Symbol::Letter(l) => Symbol::Letter(l),
            Symbol::Var(j) => Symbol::Var(j + self.vars),
        }));
        VariableWord::new(self.k, self.vars + other.vars, symbols)
    }

    /// Appends a constant word.
    pub fn concat_word(&self, suffix: &Word) -> Result<VariableWord> {
        if suffix.k() != self.k {
            return Err(Error::AlphabetMismatch(self.k as u64, suffix.k() as u64));
        }
        let mut symbols = self.symbols.clone();
        symbols.extend(suffix.letters().iter().map(|&l| Symbol::Letter(l)));
        VariableWord::new(self.k, self.vars, symbols)
    }

    /// Prepends a constant word.
    pub fn prepend_word(&self, prefix: &Word) -> Result<VariableWord> {
        if prefix.k() != self.k {
            return Err(Error::AlphabetMismatch(self.k as u64, prefix.k() as u64));
        }
        let mut symbols: Vec<Symbol> = prefix.letters().iter().map(|&l| Symbol::Letter(l)).collect();
        symbols.extend_from_slice(&self.symbols);
        VariableWord::new(self.k, self.vars, symbols)
    }

    /// Parses the text form: for `k <= 9` a compact string with variables
    /// `a, b, c, ...`; otherwise dot-separated tokens with variables
    /// `v1, v2, ...`.
    pub fn parse(k: u16, s: &str) -> Result<VariableWord> {
        let bad = |msg: String| Error::ParameterOutOfRange(format!("variable word '{s}': {msg}"));
        let mut symbols = Vec::new();
        if s.contains('.') {
            for tok in s.split('.') {
                if let Some(rest) = tok.strip_prefix('v') {
                    let j: u16 = rest.parse().map_err(|_| bad(format!("bad variable '{tok}'")))?;
                    symbols.push(Symbol::Var(j));
                } else {
                    let l: u16 = tok.parse().map_err(|_| bad(format!("bad letter '{tok}'")))?;
                    symbols.push(Symbol::Letter(l));
                }
            }
        } else {
            if k > 9 {
                return Err(bad("alphabets with k > 9 use dot-separated symbols".into()));
            }
            for c in s.chars() {
                if let Some(d) = c.to_digit(10) {
                    symbols.push(Symbol::Letter(d as u16));
                } else if c.is_ascii_lowercase() {
                    symbols.push(Symbol::Var(c as u16 - 'a' as u16 + 1));
                } else {
                    return Err(bad(format!("bad symbol '{c}'")));
                }
            }
        }
        let vars = symbols
            .iter()
            .filter_map(|s| match s {
                Symbol::Var(j) => Some(*j),
                _ => None,
            })
            .max()
            .ok_or_else(|| bad("no variable present".into()))?;
        VariableWord::new(k, vars, symbols)
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k <= 9 && self.vars <= 26 {
            for sym in &self.symbols {
                match *sym {
                    Symbol::Letter(l) => write!(f, "{l}")?,
                    Symbol::Var(j) => write!(f, "{}", (b'a' + (j as u8 - 1)) as char)?,
                }
            }
        } else {
            for (i, sym) in self.symbols.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                match *sym {
                    Symbol::Letter(l) => write!(f, "{l}")?,
                    Symbol::Var(j) => write!(f, "v{j}")?,
                }
            }
        }
        Ok(())
    }
}

/// An `m`-dimensional subspace of `[k]^n`: the image of `[k]^m` under a
/// canonical `m`-variable word.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Subspace {
    word: VariableWord,
}

impl Subspace {
    pub fn new(word: VariableWord) -> Self {
        Subspace { word }
    }

    /// The full cube `[k]^m` as a subspace of itself (`v_1 v_2 ... v_m`).
    pub fn identity(k: u16, m: u16) -> Result<Self> {
        let symbols = (1..=m).map(Symbol::Var).collect();
        Ok(Subspace { word: VariableWord::new(k, m, symbols)? })
    }

    pub fn generator(&self) -> &VariableWord {
        &self.word
    }

    pub fn dimension(&self) -> u16 {
        self.word.vars
    }

    pub fn ambient(&self) -> Cube {
        self.word.ambient()
    }

    /// The injective map `[k]^m -> [k]^n`. Letters of `w` must fit this
    /// subspace's alphabet; `w` itself may live over a smaller one.
    pub fn embed(&self, w: &Word) -> Result<Word> {
        if w.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension() as u64,
                got: w.len() as u64,
            });
        }
        self.word.instantiate(w.letters())
    }

    /// Composition of subspaces: the image of `inner` (a subspace of the
    /// model cube `[k]^m`) under this subspace's embedding.
    pub fn compose(&self, inner: &VariableWord) -> Result<Subspace> {
        Ok(Subspace { word: self.word.compose(inner)? })
    }

    pub fn points_iter(&self) -> impl Iterator<Item = Word> + '_ {
        let model = Cube { alphabet: Alphabet { k: self.word.k }, n: self.word.vars };
        (0..model.point_count()).map(move |i| {
            let a = model.word_from_index(i);
            self.word.instantiate(a.letters()).expect("arity fixed by construction")
        })
    }

    pub fn as_line(&self) -> Option<Line> {
        if self.dimension() == 1 {
            Some(Line(self.clone()))
        } else {
            None
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// A combinatorial line: the 1-dimensional case of a subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Line(Subspace);

impl Line {
    pub fn new(word: VariableWord) -> Result<Self> {
        if word.vars != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: word.vars as u64 });
        }
        Ok(Line(Subspace::new(word)))
    }

    pub fn subspace(&self) -> &Subspace {
        &self.0
    }

    pub fn generator(&self) -> &VariableWord {
        self.0.generator()
    }

    pub fn ambient(&self) -> Cube {
        self.0.ambient()
    }

    /// `ℓ(i)`: substitute the letter `i` for the variable.
    pub fn point(&self, i: u16) -> Result<Word> {
        self.0.generator().instantiate(&[i])
    }

    pub fn points_iter(&self) -> impl Iterator<Item = Word> + '_ {
        self.0.points_iter()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Number of combinatorial lines of `[k]^n`: exactly `(k+1)^n - k^n`.
pub fn count_lines(k: u16, n: u16) -> BigInt {
    let kp1 = num::pow::pow(BigInt::from(k + 1), n as usize);
    let kk = num::pow::pow(BigInt::from(k), n as usize);
    kp1 - kk
}

/// All combinatorial lines of `[k]^n` in lexicographic order.
pub fn enumerate_lines(k: u16, n: u16) -> Result<impl Iterator<Item = Line>> {
    Ok(VariableWordIter::new(k, n, 1)?.map(|w| Line::new(w).expect("one variable")))
}

/// All canonical `m`-variable words of `[k]^n` (equivalently, all
/// `m`-dimensional subspaces) in lexicographic order.
pub fn enumerate_subspaces(k: u16, n: u16, m: u16) -> Result<impl Iterator<Item = Subspace>> {
    Ok(VariableWordIter::new(k, n, m)?.map(Subspace::new))
}

/// All combinatorial lines of `[k]^n` contained in `V`, as images of the
/// model lines of `[k]^m` under the embedding of `V`.
pub fn lines_within(v: &Subspace) -> Result<impl Iterator<Item = Line> + '_> {
    let iter = VariableWordIter::new(v.generator().k(), v.dimension(), 1)?;
    Ok(iter.map(move |model_line| {
        Line::new(v.generator().compose(&model_line).expect("arity matches dimension"))
            .expect("composition preserves variable count")
    }))
}

/// Streaming enumerator of canonical `m`-variable words of `[k]^n` in
/// lexicographic order. Restartable: each call to the constructors above
/// yields an independent stream.
pub struct VariableWordIter {
    k: u16,
    n: usize,
    m: u16,
    symbols: Vec<Symbol>,
    done: bool,
}

impl VariableWordIter {
    pub fn new(k: u16, n: u16, m: u16) -> Result<Self> {
        Cube::new(k, n)?;
        if m < 1 {
            return Err(Error::ParameterOutOfRange("variable count must be >= 1".into()));
        }
        let n = n as usize;
        let mut it = VariableWordIter { k, n, m, symbols: vec![Symbol::Letter(1); n], done: false };
        if (m as usize) > n {
            it.done = true;
        } else {
            it.fill_minimal(0, 0);
        }
        Ok(it)
    }

    /// Lex-minimal feasible completion of positions `from..`: letters `1`
    /// while room remains, then the missing variables in order at the tail.
    fn fill_minimal(&mut self, from: usize, vars_used: u16) {
        let slots = self.n - from;
        let need = (self.m - vars_used) as usize;
        debug_assert!(need <= slots);
        let plain = slots - need;
        let mut next_var = vars_used + 1;
        for i in from..self.n {
            if i - from < plain {
                self.symbols[i] = Symbol::Letter(1);
            } else {
                self.symbols[i] = Symbol::Var(next_var);
                next_var += 1;
            }
        }
    }

    fn current_vars_before(&self, pos: usize) -> u16 {
        let mut used = 0u16;
        for sym in &self.symbols[..pos] {
            if let Symbol::Var(j) = sym {
                used = used.max(*j);
            }
        }
        used
    }

    /// Successor of `sym` in the per-position choice order, given `used`
    /// variables introduced before this position.
    fn next_symbol(&self, sym: Symbol, used: u16) -> Option<Symbol> {
        let max_var = (used + 1).min(self.m);
        match sym {
            Symbol::Letter(l) if l < self.k => Some(Symbol::Letter(l + 1)),
            Symbol::Letter(_) => {
                if max_var >= 1 {
                    Some(Symbol::Var(1))
                } else {
                    None
                }
            }
            Symbol::Var(j) if j < max_var => Some(Symbol::Var(j + 1)),
            Symbol::Var(_) => None,
        }
    }

    fn advance(&mut self) {
        let mut pos = self.n;
        while pos > 0 {
            pos -= 1;
            let used = self.current_vars_before(pos);
            let mut candidate = self.symbols[pos];
            loop {
                match self.next_symbol(candidate, used) {
                    None => break,
                    Some(next) => {
                        candidate = next;
                        let used_through = match candidate {
                            Symbol::Var(j) if j == used + 1 => used + 1,
                            _ => used,
                        };
                        // Feasible iff the suffix can still introduce the
                        // missing variables.
                        if (self.m - used_through) as usize <= self.n - pos - 1 {
                            self.symbols[pos] = candidate;
                            self.fill_minimal(pos + 1, used_through);
                            return;
                        }
                    }
                }
            }
        }
        self.done = true;
    }
}

impl Iterator for VariableWordIter {
    type Item = VariableWord;

    fn next(&mut self) -> Option<VariableWord> {
        if self.done {
            return None;
        }
        let word = VariableWord { k: self.k, vars: self.m, symbols: self.symbols.clone() };
        debug_assert!(VariableWord::new(self.k, self.m, word.symbols.clone()).is_ok());
        self.advance();
        Some(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: u16, s: &str) -> Word {
        Word::parse(k, s).unwrap()
    }

    fn vw(k: u16, s: &str) -> VariableWord {
        VariableWord::parse(k, s).unwrap()
    }

    #[test]
    fn alphabet_rejects_k_below_two() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(2).is_ok());
    }

    #[test]
    fn ambient_cap_is_enforced() {
        assert!(Cube::new(2, 28).is_ok());
        assert!(Cube::new(2, 29).is_err());
        assert!(Cube::with_cap(2, 5, 16).is_err());
        assert!(Cube::with_cap(2, 4, 16).is_ok());
    }

    #[test]
    fn concat_matches_definition() {
        assert_eq!(w(2, "11").concat(&w(2, "2")).unwrap(), w(2, "112"));
        assert_eq!(w(3, "3").concat(&w(3, "12")).unwrap(), w(3, "312"));
        assert!(w(2, "11").concat(&w(3, "1")).is_err());
    }

    #[test]
    fn concat_is_index_arithmetic() {
        let cube = Cube::new(2, 2).unwrap();
        for x in cube.words() {
            for y in cube.words() {
                let xy = x.concat(&y).unwrap();
                assert_eq!(xy.index(), x.index() * cube.point_count() + y.index());
            }
        }
    }

    #[test]
    fn index_word_round_trip() {
        for (k, n) in [(2u16, 6u16), (3, 4), (4, 3)] {
            let cube = Cube::new(k, n).unwrap();
            for i in 0..cube.point_count() {
                assert_eq!(cube.word_from_index(i).index(), i);
            }
        }
    }

    #[test]
    fn instantiate_substitutes() {
        assert_eq!(vw(2, "a").instantiate(&[2]).unwrap(), w(2, "2"));
        assert_eq!(vw(3, "aa").instantiate(&[2]).unwrap(), w(3, "22"));
        assert_eq!(vw(2, "aba").instantiate(&[1, 2]).unwrap(), w(2, "121"));
        assert!(vw(2, "aba").instantiate(&[1]).is_err());
        assert!(vw(2, "a").instantiate(&[3]).is_err());
    }

    #[test]
    fn canonical_form_is_validated() {
        use Symbol::{Letter, Var};
        // v2 before v1 is rejected; canonicalize renumbers it.
        let raw = vec![Var(2), Var(1)];
        assert!(VariableWord::new(2, 2, raw.clone()).is_err());
        let canon = VariableWord::canonicalize(2, &raw).unwrap();
        assert_eq!(canon, vw(2, "ab"));
        // Missing variable is rejected.
        assert!(VariableWord::new(2, 2, vec![Var(1), Letter(1)]).is_err());
    }

    #[test]
    fn embed_is_substitution() {
        let v = Subspace::new(vw(2, "1ab"));
        assert_eq!(v.embed(&w(2, "21")).unwrap(), w(2, "121"));
        let id = Subspace::identity(2, 3).unwrap();
        for x in Cube::new(2, 3).unwrap().words() {
            assert_eq!(id.embed(&x).unwrap(), x);
        }
        assert!(v.embed(&w(2, "1")).is_err());
    }

    #[test]
    fn embed_image_is_injective() {
        use std::collections::HashSet;
        for v in enumerate_subspaces(2, 4, 2).unwrap() {
            let image: HashSet<Word> = v.points_iter().collect();
            assert_eq!(image.len(), 4);
        }
    }

    #[test]
    fn compose_commutes_with_instantiate() {
        let v = vw(3, "a1b2a");
        let inner = vw(3, "ab");
        let composed = v.compose(&inner).unwrap();
        let model = Cube::new(3, 2).unwrap();
        for a in model.words() {
            let lhs = v.instantiate(inner.instantiate(a.letters()).unwrap().letters()).unwrap();
            let rhs = composed.instantiate(a.letters()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn line_enumeration_matches_count() {
        let lines: Vec<Line> = enumerate_lines(2, 2).unwrap().collect();
        let shown: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, vec!["1a", "2a", "a1", "a2", "aa"]);
        assert_eq!(count_lines(2, 2), BigInt::from(5));
        assert_eq!(enumerate_lines(3, 2).unwrap().count(), 7);
        assert_eq!(count_lines(2, 1), BigInt::from(1));
        assert_eq!(count_lines(3, 9), BigInt::from(242461));
        for k in 2u16..=4 {
            for n in 1u16..=5 {
                let count = enumerate_lines(k, n).unwrap().count();
                assert_eq!(BigInt::from(count), count_lines(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_duplicate_free() {
        let words: Vec<VariableWord> = VariableWordIter::new(2, 3, 2).unwrap().collect();
        for pair in words.windows(2) {
            assert!(pair[0].symbols() < pair[1].symbols());
        }
        let first = words.first().unwrap();
        assert_eq!(first.to_string(), "1ab");
    }

    #[test]
    fn lines_within_identity_match_global_enumeration() {
        let id = Subspace::identity(3, 2).unwrap();
        let inner: Vec<String> = lines_within(&id).unwrap().map(|l| l.to_string()).collect();
        let global: Vec<String> = enumerate_lines(3, 2).unwrap().map(|l| l.to_string()).collect();
        assert_eq!(inner, global);
    }

    #[test]
    fn lines_within_one_dim_is_self() {
        let v = Subspace::new(vw(2, "1a"));
        let inner: Vec<Line> = lines_within(&v).unwrap().collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].subspace(), &v);
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(w(3, "233").substitute(3, 1).unwrap(), w(3, "211"));
        assert_eq!(w(3, "233").substitute(2, 2).unwrap(), w(3, "233"));
        assert!(w(3, "233").substitute(4, 1).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        assert_eq!(Word::parse(3, "1213").unwrap().to_string(), "1213");
        for s in ["1a2a", "ab1", "aa"] {
            assert_eq!(VariableWord::parse(3, s).unwrap().to_string(), s);
        }
        let big = Word::new(12, vec![1, 12, 3]).unwrap();
        assert_eq!(big.to_string(), "1.12.3");
        assert_eq!(Word::parse(12, "1.12.3").unwrap(), big);
        let bigv = VariableWord::parse(12, "1.v1.3.v2").unwrap();
        assert_eq!(bigv.to_string(), "1.v1.3.v2");
    }
}
