//! Permutations of {1, ..., n} in one-line notation, with the Coxeter
//! bookkeeping (lengths, descents, reduced words) needed for the T-basis.
//!
//! The product convention throughout the crate is `compose(a, b) = a then b`,
//! i.e. `compose(a, b)(i) = b(a(i))`. Under this convention multiplying on
//! the right by the adjacent transposition s_i swaps the *values* i and i+1,
//! and multiplying on the left swaps the *positions* i and i+1.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const FACT: [u32; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
];

/// A permutation of {1, ..., n}; `images[i-1] = w(i)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    images: Vec<u8>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<u8>) -> Result<Self> {
        let v: Vec<usize> = images.iter().map(|&x| x as usize).collect();
        Permutation::from_images(&v)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(w: Permutation) -> Vec<u8> {
        w.images
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u8).collect() }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > 12 {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} exceeds the supported maximum of 12"
            )));
        }
        let mut seen = vec![false; n];
        for &v in images {
            if v < 1 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range 1..={n}"
                )));
            }
            if seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("repeated image {v}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images: images.iter().map(|&v| v as u8).collect() })
    }

    /// The adjacent transposition s_i swapping i and i+1, for 1 <= i < n.
    pub fn adjacent_transposition(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i >= n {
            return Err(Error::IndexOutOfRange(i));
        }
        let mut w = Permutation::identity(n);
        w.images.swap(i - 1, i);
        Ok(w)
    }

    /// The transposition swapping a and b.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a < 1 || a > n {
            return Err(Error::IndexOutOfRange(a));
        }
        if b < 1 || b > n || a == b {
            return Err(Error::IndexOutOfRange(b));
        }
        let mut w = Permutation::identity(n);
        w.images.swap(a - 1, b - 1);
        Ok(w)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// w(i), 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `self` followed by `then`: the result maps i to then(self(i)).
    pub fn compose(&self, then: &Permutation) -> Permutation {
        assert_eq!(self.degree(), then.degree(), "degree mismatch in composition");
        Permutation {
            images: self.images.iter().map(|&v| then.images[v as usize - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = i as u8 + 1;
        }
        Permutation { images }
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Whether l(s_i * w) < l(w); equivalently w(i) > w(i+1).
    pub fn left_descent(&self, i: usize) -> bool {
        self.images[i - 1] > self.images[i]
    }

    /// Whether l(w * s_i) < l(w); equivalently i+1 precedes i in one-line
    /// notation, i.e. w^{-1}(i) > w^{-1}(i+1).
    pub fn right_descent(&self, i: usize) -> bool {
        let mut pos_i = 0;
        let mut pos_i1 = 0;
        for (p, &v) in self.images.iter().enumerate() {
            if v as usize == i {
                pos_i = p;
            } else if v as usize == i + 1 {
                pos_i1 = p;
            }
        }
        pos_i > pos_i1
    }

    /// The lexicographically smallest reduced word, as generator subscripts:
    /// `w = s_{i_1} s_{i_2} ... s_{i_k}` with the product read left to right.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut rem = self.images.clone();
        let mut word = Vec::new();
        loop {
            let mut descent = None;
            for i in 0..rem.len().saturating_sub(1) {
                if rem[i] > rem[i + 1] {
                    descent = Some(i);
                    break;
                }
            }
            match descent {
                Some(i) => {
                    rem.swap(i, i + 1);
                    word.push(i + 1);
                }
                None => break,
            }
        }
        word
    }

    /// Product of adjacent transpositions read left to right.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Permutation> {
        let mut w = Permutation::identity(n);
        for &i in word {
            let s = Permutation::adjacent_transposition(n, i)?;
            w = w.compose(&s);
        }
        Ok(w)
    }

    /// Lehmer-code rank in [0, n!); the identity has rank 0.
    pub fn rank(&self) -> u32 {
        let n = self.images.len();
        let mut r = 0u32;
        for i in 0..n {
            let mut c = 0u32;
            for j in i + 1..n {
                if self.images[j] < self.images[i] {
                    c += 1;
                }
            }
            r += c * FACT[n - 1 - i];
        }
        r
    }

    pub fn unrank(n: usize, mut r: u32) -> Result<Permutation> {
        if n > 12 || r >= FACT[n] {
            return Err(Error::IndexOutOfRange(r as usize));
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let f = FACT[n - 1 - i];
            let idx = (r / f) as usize;
            r %= f;
            images.push(pool.remove(idx));
        }
        Ok(Permutation { images })
    }

    /// All of S_n in rank order (so the identity comes first).
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..FACT[n]).map(move |r| Permutation::unrank(n, r).expect("rank in range"))
    }

    /// The longest element, i -> n+1-i.
    pub fn longest(n: usize) -> Permutation {
        Permutation { images: (1..=n as u8).rev().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let s1 = Permutation::adjacent_transposition(3, 1).unwrap();
        let s2 = Permutation::adjacent_transposition(3, 2).unwrap();
        // s_1 then s_2 sends 1 -> 2 -> 3
        assert_eq!(s1.compose(&s2), perm(&[3, 1, 2]));
        assert_eq!(s2.compose(&s1), perm(&[2, 3, 1]));
        let w = perm(&[3, 1, 2]);
        // right factor swaps values, left factor swaps positions
        assert_eq!(w.compose(&s1), perm(&[3, 2, 1]));
        assert_eq!(s1.compose(&w), perm(&[1, 3, 2]));
    }

    #[test]
    fn descent_predicates_match_length_comparison() {
        for w in Permutation::all(5) {
            let lw = w.length();
            for i in 1..5 {
                let s = Permutation::adjacent_transposition(5, i).unwrap();
                assert_eq!(
                    w.right_descent(i),
                    w.compose(&s).length() < lw,
                    "right, w={w}, i={i}"
                );
                assert_eq!(
                    w.left_descent(i),
                    s.compose(&w).length() < lw,
                    "left, w={w}, i={i}"
                );
            }
        }
    }

    #[test]
    fn reduced_words_are_reduced_and_reconstruct() {
        for w in Permutation::all(5) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length(), "w={w}");
            assert_eq!(Permutation::from_word(5, &word).unwrap(), w);
        }
    }

    fn all_reduced_words(w: &Permutation) -> Vec<Vec<usize>> {
        if w.is_identity() {
            return vec![Vec::new()];
        }
        let n = w.degree();
        let mut out = Vec::new();
        for i in 1..n {
            if w.left_descent(i) {
                let s = Permutation::adjacent_transposition(n, i).unwrap();
                let rest = s.compose(w);
                for mut tail in all_reduced_words(&rest) {
                    tail.insert(0, i);
                    out.push(tail);
                }
            }
        }
        out
    }

    #[test]
    fn reduced_word_is_lexicographically_smallest() {
        for w in Permutation::all(4) {
            let mut words = all_reduced_words(&w);
            words.sort();
            assert_eq!(w.reduced_word(), words[0], "w={w}");
        }
    }

    #[test]
    fn rank_unrank_round_trip() {
        let mut seen = Vec::new();
        for w in Permutation::all(5) {
            assert_eq!(Permutation::unrank(5, w.rank()).unwrap(), w);
            seen.push(w.rank());
        }
        let expected: Vec<u32> = (0..120).collect();
        assert_eq!(seen, expected);
        assert_eq!(Permutation::identity(5).rank(), 0);
    }

    #[test]
    fn longest_element() {
        let w0 = Permutation::longest(4);
        assert_eq!(w0, perm(&[4, 3, 2, 1]));
        assert_eq!(w0.length(), 6);
        for i in 1..4 {
            assert!(w0.left_descent(i));
            assert!(w0.right_descent(i));
        }
    }

    #[test]
    fn conjugating_an_adjacent_transposition_swaps_its_images() {
        // d^{-1} s_i d is the transposition of the values d(i), d(i+1)
        for d in Permutation::all(4) {
            for i in 1..4 {
                let s = Permutation::adjacent_transposition(4, i).unwrap();
                let conj = d.inverse().compose(&s).compose(&d);
                let t =
                    Permutation::transposition(4, d.apply(i), d.apply(i + 1)).unwrap();
                assert_eq!(conj, t, "d={d}, i={i}");
            }
        }
    }

    #[test]
    fn serde_one_line_form() {
        let w = perm(&[3, 4, 1, 2, 5]);
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, "[3,4,1,2,5]");
        let back: Permutation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<Permutation>("[1,1,2]").is_err());
    }

    proptest! {
        #[test]
        fn group_laws(ra in 0u32..5040, rb in 0u32..5040) {
            let a = Permutation::unrank(7, ra).unwrap();
            let b = Permutation::unrank(7, rb).unwrap();
            let ab = a.compose(&b);
            prop_assert_eq!(ab.compose(&ab.inverse()), Permutation::identity(7));
            prop_assert_eq!(a.inverse().inverse(), a.clone());
            prop_assert_eq!(
                ab.inverse(),
                b.inverse().compose(&a.inverse())
            );
            // length is invariant under inversion
            prop_assert_eq!(a.length(), a.inverse().length());
        }
    }
}
