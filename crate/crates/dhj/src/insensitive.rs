//! `(i,j)`-equivalence of words and `(i,j)`-insensitive sets.
//!
//! Two words are `(i,j)`-equivalent when every letter outside `{i, j}`
//! occupies the same positions in both. A set is `(i,j)`-insensitive when
//! it is a union of equivalence classes. Each class has a canonical
//! representative: the member whose `{i,j}`-positions all carry
//! `min(i,j)`, which makes the class tests single scans over the bitmap.

use crate::cube::{Cube, Subspace, Word};
use crate::error::{Error, Result};
use crate::set::PointSet;
use rand::Rng;

/// An unordered-in-meaning, ordered-in-storage pair of distinct letters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LetterPair {
    i: u16,
    j: u16,
}

impl LetterPair {
    pub fn new(k: u16, i: u16, j: u16) -> Result<Self> {
        let alphabet = crate::cube::Alphabet::new(k)?;
        alphabet.check_letter(i)?;
        alphabet.check_letter(j)?;
        if i == j {
            return Err(Error::ParameterOutOfRange(format!("letter pair ({i}, {j}) must be distinct")));
        }
        Ok(LetterPair { i, j })
    }

    pub fn i(&self) -> u16 {
        self.i
    }

    pub fn j(&self) -> u16 {
        self.j
    }

    fn matches(&self, letter: u16) -> bool {
        letter == self.i || letter == self.j
    }

    fn low(&self) -> u16 {
        self.i.min(self.j)
    }
}

/// True iff for every letter `s` outside `{i, j}` the position sets of `s`
/// in `x` and `y` coincide.
pub fn equivalent(x: &Word, y: &Word, pair: LetterPair) -> Result<bool> {
    x.cube().same_ambient(&y.cube())?;
    Ok(x.letters().iter().zip(y.letters()).all(|(&a, &b)| {
        if pair.matches(a) {
            pair.matches(b)
        } else {
            a == b
        }
    }))
}

/// Canonical class representative: every `{i,j}`-position set to `min(i,j)`.
fn class_rep_index(cube: Cube, index: usize, pair: LetterPair) -> usize {
    let word = cube.word_from_index(index);
    let low = pair.low();
    let letters: Vec<u16> =
        word.letters().iter().map(|&l| if pair.matches(l) { low } else { l }).collect();
    Word::new(cube.k(), letters).expect("letters already validated").index()
}

/// True iff `A` is a union of `(i,j)`-equivalence classes.
pub fn is_insensitive(a: &PointSet, pair: LetterPair) -> Result<bool> {
    a.cube().alphabet().check_letter(pair.i)?;
    a.cube().alphabet().check_letter(pair.j)?;
    let cube = a.cube();
    for index in 0..cube.point_count() {
        let rep = class_rep_index(cube, index, pair);
        if a.contains_index(index) != a.contains_index(rep) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The smallest `(i,j)`-insensitive superset: the union of all classes
/// meeting `A`.
pub fn insensitive_closure(a: &PointSet, pair: LetterPair) -> Result<PointSet> {
    a.cube().alphabet().check_letter(pair.i)?;
    a.cube().alphabet().check_letter(pair.j)?;
    let cube = a.cube();
    let mut marked = PointSet::empty(cube);
    for index in a.iter_indices() {
        marked.insert_index(class_rep_index(cube, index, pair));
    }
    let mut out = PointSet::empty(cube);
    for index in 0..cube.point_count() {
        if marked.contains_index(class_rep_index(cube, index, pair)) {
            out.insert_index(index);
        }
    }
    Ok(out)
}

/// Insensitivity of `A ∩ V` relative to `V`: pull back through the
/// embedding and test in the model cube.
pub fn is_insensitive_in(a: &PointSet, v: &Subspace, pair: LetterPair) -> Result<bool> {
    let model = a.pull_back(v)?;
    is_insensitive(&model, pair)
}

/// A random `(i,j)`-insensitive set: each equivalence class joins
/// independently with probability `num/den`. Deterministic for a fixed,
/// caller-provided generator; seeds are recorded in certificates.
pub fn random_insensitive_set(
    cube: Cube,
    pair: LetterPair,
    num: u32,
    den: u32,
    rng: &mut impl Rng,
) -> Result<PointSet> {
    cube.alphabet().check_letter(pair.i)?;
    cube.alphabet().check_letter(pair.j)?;
    let mut chosen = PointSet::empty(cube);
    // Class reps in index order so the sampling sequence is reproducible.
    for index in 0..cube.point_count() {
        if class_rep_index(cube, index, pair) == index && rng.gen_ratio(num, den) {
            chosen.insert_index(index);
        }
    }
    let mut out = PointSet::empty(cube);
    for index in 0..cube.point_count() {
        if chosen.contains_index(class_rep_index(cube, index, pair)) {
            out.insert_index(index);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(k: u16, s: &str) -> Word {
        Word::parse(k, s).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let p = LetterPair::new(3, 1, 3).unwrap();
        assert!(equivalent(&w(3, "123"), &w(3, "321"), p).unwrap());
        assert!(!equivalent(&w(3, "123"), &w(3, "223"), p).unwrap());
        assert!(equivalent(&w(3, "123"), &w(3, "123"), p).unwrap());
        assert!(LetterPair::new(3, 2, 2).is_err());
        assert!(LetterPair::new(3, 0, 1).is_err());
    }

    #[test]
    fn insensitivity_examples() {
        let cube = Cube::new(3, 2).unwrap();
        let p = LetterPair::new(3, 1, 3).unwrap();
        // Membership depending only on the positions of the letter 2.
        let a = PointSet::from_fn(cube, |x| x.letters()[0] == 2);
        assert!(is_insensitive(&a, p).unwrap());
        let b = PointSet::from_words(cube, &[w(3, "13")]).unwrap();
        assert!(!is_insensitive(&b, p).unwrap());
        assert!(is_insensitive(&PointSet::full(cube), p).unwrap());
        assert!(is_insensitive(&PointSet::empty(cube), p).unwrap());
    }

    #[test]
    fn closure_examples() {
        let cube = Cube::new(3, 2).unwrap();
        let p = LetterPair::new(3, 1, 3).unwrap();
        let b = PointSet::from_words(cube, &[w(3, "13")]).unwrap();
        let closed = insensitive_closure(&b, p).unwrap();
        let words: Vec<String> = closed.iter_words().map(|x| x.to_string()).collect();
        assert_eq!(words, vec!["11", "13", "31", "33"]);
        assert!(is_insensitive(&closed, p).unwrap());
        // Fixed point on an already-insensitive set, and on the empty set.
        assert_eq!(insensitive_closure(&closed, p).unwrap(), closed);
        let empty = PointSet::empty(cube);
        assert_eq!(insensitive_closure(&empty, p).unwrap(), empty);
    }

    #[test]
    fn closure_detects_insensitivity() {
        let cube = Cube::new(3, 3).unwrap();
        let p = LetterPair::new(3, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = crate::fixtures::random_set(cube, 1, 2, &mut rng);
            let closed = insensitive_closure(&a, p).unwrap();
            assert_eq!(is_insensitive(&a, p).unwrap(), closed == a);
        }
    }

    #[test]
    fn substitute_is_idempotent_over_cube() {
        let cube = Cube::new(3, 3).unwrap();
        for x in cube.words() {
            let once = x.substitute(3, 1).unwrap();
            assert_eq!(once.substitute(3, 1).unwrap(), once);
        }
    }

    #[test]
    fn random_insensitive_sets_are_insensitive() {
        let cube = Cube::new(3, 4).unwrap();
        let p = LetterPair::new(3, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let d = random_insensitive_set(cube, p, 1, 2, &mut rng).unwrap();
            assert!(is_insensitive(&d, p).unwrap());
        }
    }

    #[test]
    fn insensitive_to_top_letter_ignores_marked_positions() {
        // For the pair (i, k): membership is determined by the positions of
        // the letters outside {i, k}. Cross-check against the definitional
        // scan on all sets generated from position patterns.
        let cube = Cube::new(3, 4).unwrap();
        let p = LetterPair::new(3, 1, 3).unwrap();
        let a = PointSet::from_fn(cube, |x| {
            let pos2: Vec<usize> =
                x.letters().iter().enumerate().filter(|(_, &l)| l == 2).map(|(i, _)| i).collect();
            pos2.len() == 1 && pos2[0] < 2
        });
        assert!(is_insensitive(&a, p).unwrap());
        for x in cube.words() {
            for y in cube.words() {
                if equivalent(&x, &y, p).unwrap() {
                    assert_eq!(a.contains(&x).unwrap(), a.contains(&y).unwrap());
                }
            }
        }
    }
}
