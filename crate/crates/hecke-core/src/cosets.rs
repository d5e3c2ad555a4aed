//! Parabolic subgroups of S_n given by compositions, their minimal coset
//! representatives, and the matrix bookkeeping for two-part double cosets.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use serde::{Deserialize, Serialize};

/// A 1-based inclusive interval [lo, hi]; empty when hi = lo - 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Interval> {
        if lo < 1 || hi + 1 < lo {
            return Err(Error::InvalidInterval(format!("[{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A composition of n: an ordered list of nonnegative parts. Its intervals
/// tile {1, ..., n} left to right and cut out the parabolic subgroup of
/// permutations preserving each interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Composition {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn intervals(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut lo = 1;
        for &p in &self.parts {
            out.push(Interval { lo, hi: lo + p - 1 });
            lo += p;
        }
        out
    }
}

impl std::fmt::Display for Composition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Embeds a permutation of {1, ..., k} into S_n acting on the given interval
/// of length k, fixing everything outside it.
pub fn embed_in_interval(n: usize, interval: Interval, w: &Permutation) -> Permutation {
    debug_assert_eq!(w.degree(), interval.len());
    let mut images: Vec<usize> = (1..=n).collect();
    for (off, i) in interval.points().enumerate() {
        images[i - 1] = interval.lo - 1 + w.apply(off + 1);
    }
    Permutation::from_images(&images).expect("embedding preserves bijectivity")
}

/// All permutations supported on the interval, in a fixed order starting
/// with the identity.
pub fn interval_elements(n: usize, interval: Interval) -> Vec<Permutation> {
    Permutation::all(interval.len())
        .map(|w| embed_in_interval(n, interval, &w))
        .collect()
}

/// All elements of the parabolic subgroup W_lam, ordered interval by
/// interval with the identity first.
pub fn parabolic_elements(n: usize, lam: &Composition) -> Vec<Permutation> {
    assert_eq!(lam.n(), n, "composition does not sum to the degree");
    let mut out = vec![Permutation::identity(n)];
    for interval in lam.intervals() {
        if interval.len() < 2 {
            continue;
        }
        let locals = interval_elements(n, interval);
        let mut next = Vec::with_capacity(out.len() * locals.len());
        for base in &out {
            for e in &locals {
                next.push(base.compose(e));
            }
        }
        out = next;
    }
    out
}

/// Whether w is the minimal-length representative of W_lam * w, i.e. whether
/// its one-line notation increases along each interval of lam.
pub fn is_distinguished(w: &Permutation, lam: &Composition) -> bool {
    debug_assert_eq!(lam.n(), w.degree());
    for interval in lam.intervals() {
        for i in interval.lo..interval.hi {
            if w.apply(i) > w.apply(i + 1) {
                return false;
            }
        }
    }
    true
}

/// Minimal-length representatives of the cosets W_lam * w, in rank order.
pub fn distinguished_reps(lam: &Composition) -> Vec<Permutation> {
    let n = lam.n();
    Permutation::all(n).filter(|w| is_distinguished(w, lam)).collect()
}

/// Minimal-length representatives of the double cosets W_lam * w * W_mu,
/// in rank order.
pub fn double_coset_reps(lam: &Composition, mu: &Composition) -> Vec<Permutation> {
    assert_eq!(lam.n(), mu.n());
    Permutation::all(lam.n())
        .filter(|w| is_distinguished(w, lam) && is_distinguished(&w.inverse(), mu))
        .collect()
}

/// Intersection data of a two-part double coset: for compositions
/// left = (r, s) and right = (u, v) of the same n, the coset of d is
/// determined by overlap = |d([1, r]) /\ [1, u]|, and the entry grid
/// [|d(left_j) /\ right_i|]_{ij} has column sums (r, s) and row sums (u, v).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginMatrix {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub overlap: usize,
}

impl MarginMatrix {
    pub fn new(left: (usize, usize), right: (usize, usize), overlap: usize) -> Result<MarginMatrix> {
        let (r, s) = left;
        let (u, v) = right;
        if r + s != u + v {
            return Err(Error::MarginMismatch(format!(
                "totals differ: {} vs {}",
                r + s,
                u + v
            )));
        }
        let lo = u.saturating_sub(s);
        let hi = r.min(u);
        if overlap < lo || overlap > hi {
            return Err(Error::MarginMismatch(format!(
                "overlap {overlap} outside [{lo}, {hi}] for left=({r},{s}), right=({u},{v})"
            )));
        }
        Ok(MarginMatrix { left, right, overlap })
    }

    /// Every margin matrix for the given margins, by increasing overlap.
    pub fn all(left: (usize, usize), right: (usize, usize)) -> Result<Vec<MarginMatrix>> {
        let (r, s) = left;
        let (u, v) = right;
        if r + s != u + v {
            return Err(Error::MarginMismatch(format!(
                "totals differ: {} vs {}",
                r + s,
                u + v
            )));
        }
        Ok((u.saturating_sub(s)..=r.min(u))
            .map(|overlap| MarginMatrix { left, right, overlap })
            .collect())
    }

    pub fn n(&self) -> usize {
        self.left.0 + self.left.1
    }

    /// Rows indexed by the right composition, columns by the left.
    pub fn entries(&self) -> [[usize; 2]; 2] {
        let (r, s) = self.left;
        let (u, _) = self.right;
        let t = self.overlap;
        [[t, u - t], [r - t, t + s - u]]
    }

    /// The minimal-length element of the double coset: it shifts the part of
    /// [1, r] past the overlap up to sit right after [1, u], order-preserving
    /// on each of the four domain intervals.
    pub fn permutation(&self) -> Permutation {
        let (r, _) = self.left;
        let (u, _) = self.right;
        let t = self.overlap;
        let n = self.n();
        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let img = if i <= t {
                i
            } else if i <= r {
                u + (i - t)
            } else if i <= u + (r - t) {
                t + (i - r)
            } else {
                i
            };
            images.push(img);
        }
        Permutation::from_images(&images).expect("margin data produces a bijection")
    }

    /// Measures the overlap of an arbitrary permutation against the margins.
    pub fn of(d: &Permutation, left: (usize, usize), right: (usize, usize)) -> Result<MarginMatrix> {
        if left.0 + left.1 != d.degree() {
            return Err(Error::DegreeMismatch(left.0 + left.1, d.degree()));
        }
        let overlap = (1..=left.0).filter(|&i| d.apply(i) <= right.0).count();
        MarginMatrix::new(left, right, overlap)
    }

    /// The four-interval refinement carried by the coset representative:
    /// `domain[j]` maps order-preservingly onto `image[j]`.
    pub fn split(&self) -> SplitComposition {
        let (r, _) = self.left;
        let (u, _) = self.right;
        let t = self.overlap;
        let n = self.n();
        let m = u + (r - t);
        SplitComposition {
            domain: [
                Interval { lo: 1, hi: t },
                Interval { lo: t + 1, hi: r },
                Interval { lo: r + 1, hi: m },
                Interval { lo: m + 1, hi: n },
            ],
            image: [
                Interval { lo: 1, hi: t },
                Interval { lo: u + 1, hi: m },
                Interval { lo: t + 1, hi: u },
                Interval { lo: m + 1, hi: n },
            ],
        }
    }
}

/// Checks that d is the minimal representative of its double coset for the
/// given two-part margins and returns the margin data if so.
pub fn margin_of_distinguished(
    d: &Permutation,
    left: (usize, usize),
    right: (usize, usize),
) -> Result<MarginMatrix> {
    let m = MarginMatrix::of(d, left, right)?;
    if &m.permutation() != d {
        return Err(Error::NotDistinguished);
    }
    Ok(m)
}

/// Paired refinements induced by a double-coset representative: the j-th
/// domain interval is carried order-preservingly onto the j-th image
/// interval. The first two domain intervals refine [1, r], the last two
/// refine [r+1, n].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitComposition {
    pub domain: [Interval; 4],
    pub image: [Interval; 4],
}

impl SplitComposition {
    /// The domain intervals as an ordered composition of n.
    pub fn domain_composition(&self) -> Composition {
        Composition::new(self.domain.iter().map(|iv| iv.len()).collect())
    }

    /// The image intervals sorted by position, as a composition of n.
    pub fn image_composition(&self) -> Composition {
        let mut ivs: Vec<Interval> = self.image.to_vec();
        ivs.sort();
        Composition::new(ivs.iter().map(|iv| iv.len()).collect())
    }
}
