//! The Iwahori-Hecke algebra H_q(n) of the symmetric group S_n in its
//! T-basis, with deformation parameter the field's distinguished root of
//! unity. Generators satisfy the quadratic relation
//! T_i^2 = (q-1) T_i + q and the braid relations; the basis element T_w is
//! the product of generators along any reduced word for w.
//!
//! An algebra handle is a cheaply clonable wrapper around precomputed
//! tables: lengths, inverses, reduced words, and the rank of w*s_i for
//! every w and i. Elements are sparse maps from basis ranks to scalars.

use crate::cosets::{interval_elements, is_distinguished, Composition, Interval};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::perm::Permutation;
use std::collections::BTreeMap;
use std::sync::Arc;

const MAX_DEGREE: usize = 8;

struct Tables {
    n: usize,
    field: Field,
    perms: Vec<Permutation>,
    lengths: Vec<u8>,
    inv: Vec<u32>,
    words: Vec<Vec<u8>>,
    /// rmult[i-1][w] = rank of w * s_i
    rmult: Vec<Vec<u32>>,
    /// rank of w with the last letter of its stored word removed
    parent: Vec<u32>,
    last_gen: Vec<u8>,
}

#[derive(Clone)]
pub struct HeckeAlgebra {
    tables: Arc<Tables>,
}

impl PartialEq for HeckeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables)
            || (self.tables.n == other.tables.n && self.tables.field == other.tables.field)
    }
}

impl std::fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HeckeAlgebra(n={}, {:?})", self.tables.n, self.tables.field.spec())
    }
}

impl HeckeAlgebra {
    pub fn new(n: usize, field: Field) -> Result<HeckeAlgebra> {
        if n < 1 || n > MAX_DEGREE {
            return Err(Error::SizeOverflow(format!(
                "degree {n} outside the supported range 1..={MAX_DEGREE}"
            )));
        }
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let dim = perms.len();
        let lengths: Vec<u8> = perms.iter().map(|w| w.length() as u8).collect();
        let inv: Vec<u32> = perms.iter().map(|w| w.inverse().rank()).collect();
        let words: Vec<Vec<u8>> = perms
            .iter()
            .map(|w| w.reduced_word().iter().map(|&i| i as u8).collect())
            .collect();
        let mut rmult: Vec<Vec<u32>> = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            let s = Permutation::adjacent_transposition(n, i)?;
            rmult.push(perms.iter().map(|w| w.compose(&s).rank()).collect());
        }
        let mut parent = vec![0u32; dim];
        let mut last_gen = vec![0u8; dim];
        for (r, word) in words.iter().enumerate() {
            if let Some(&g) = word.last() {
                last_gen[r] = g;
                // removing the last letter multiplies by s_g on the right
                parent[r] = rmult[g as usize - 1][r];
            } else {
                parent[r] = r as u32;
            }
        }
        Ok(HeckeAlgebra {
            tables: Arc::new(Tables {
                n,
                field,
                perms,
                lengths,
                inv,
                words,
                rmult,
                parent,
                last_gen,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.tables.n
    }

    pub fn dim(&self) -> usize {
        self.tables.perms.len()
    }

    pub fn field(&self) -> &Field {
        &self.tables.field
    }

    pub fn permutation(&self, rank: u32) -> &Permutation {
        &self.tables.perms[rank as usize]
    }

    pub fn length(&self, rank: u32) -> usize {
        self.tables.lengths[rank as usize] as usize
    }

    pub fn inverse_rank(&self, rank: u32) -> u32 {
        self.tables.inv[rank as usize]
    }

    pub fn word(&self, rank: u32) -> &[u8] {
        &self.tables.words[rank as usize]
    }

    /// Rank of w with the last letter of its canonical word removed, and
    /// that letter; the identity is its own parent.
    pub fn word_parent(&self, rank: u32) -> (u32, u8) {
        (self.tables.parent[rank as usize], self.tables.last_gen[rank as usize])
    }

    pub fn rank_of(&self, w: &Permutation) -> Result<u32> {
        if w.degree() != self.tables.n {
            return Err(Error::DegreeMismatch(self.tables.n, w.degree()));
        }
        Ok(w.rank())
    }

    pub fn zero(&self) -> HeckeElement {
        HeckeElement { algebra: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> HeckeElement {
        let mut terms = BTreeMap::new();
        terms.insert(0u32, self.tables.field.one());
        HeckeElement { algebra: self.clone(), terms }
    }

    pub fn basis(&self, w: &Permutation) -> Result<HeckeElement> {
        let r = self.rank_of(w)?;
        Ok(self.basis_of_rank(r))
    }

    pub fn basis_of_rank(&self, r: u32) -> HeckeElement {
        let mut terms = BTreeMap::new();
        terms.insert(r, self.tables.field.one());
        HeckeElement { algebra: self.clone(), terms }
    }

    pub fn generator(&self, i: usize) -> Result<HeckeElement> {
        let s = Permutation::adjacent_transposition(self.tables.n, i)?;
        self.basis(&s)
    }

    /// T_i^{-1} = q^{-1} T_i + (q^{-1} - 1).
    pub fn generator_inverse(&self, i: usize) -> Result<HeckeElement> {
        let f = &self.tables.field;
        let qi = f.q_inv();
        let mut el = self.generator(i)?.scale(&qi);
        let c = f.sub(&qi, &f.one());
        el.add_term(0, c);
        Ok(el)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Scalar)>>(&self, iter: I) -> HeckeElement {
        let mut el = self.zero();
        for (r, c) in iter {
            el.add_term(r, c);
        }
        el
    }

    /// Sum of T_w over the symmetric group of an interval.
    pub fn x_interval(&self, iv: Interval) -> Result<HeckeElement> {
        self.interval_sum(iv, false)
    }

    /// Sum of (-q)^{-l(w)} T_w over the symmetric group of an interval.
    pub fn y_interval(&self, iv: Interval) -> Result<HeckeElement> {
        self.interval_sum(iv, true)
    }

    fn interval_sum(&self, iv: Interval, signed: bool) -> Result<HeckeElement> {
        if iv.hi > self.tables.n {
            return Err(Error::InvalidInterval(format!("{iv} exceeds degree {}", self.tables.n)));
        }
        let f = &self.tables.field;
        let mut el = self.zero();
        for w in interval_elements(self.tables.n, iv) {
            let c = if signed { f.minus_q_pow(-(w.length() as i64)) } else { f.one() };
            el.add_term(w.rank(), c);
        }
        Ok(el)
    }

    pub fn x_parabolic(&self, lam: &Composition) -> Result<HeckeElement> {
        self.parabolic_sum(lam, false)
    }

    pub fn y_parabolic(&self, lam: &Composition) -> Result<HeckeElement> {
        self.parabolic_sum(lam, true)
    }

    fn parabolic_sum(&self, lam: &Composition, signed: bool) -> Result<HeckeElement> {
        if lam.n() != self.tables.n {
            return Err(Error::DegreeMismatch(self.tables.n, lam.n()));
        }
        let f = &self.tables.field;
        let mut el = self.zero();
        for w in crate::cosets::parabolic_elements(self.tables.n, lam) {
            let c = if signed { f.minus_q_pow(-(w.length() as i64)) } else { f.one() };
            el.add_term(w.rank(), c);
        }
        Ok(el)
    }

    /// Sum over the minimal coset representatives of the parabolic given by
    /// `parts` inside the symmetric group of `iv`: plain coefficients, or
    /// (-q)^{-l(d)} when signed. These are the factors in the factorization
    /// of an interval sum along a refinement.
    pub fn distinguished_sum(
        &self,
        iv: Interval,
        parts: &[usize],
        signed: bool,
    ) -> Result<HeckeElement> {
        if iv.hi > self.tables.n {
            return Err(Error::InvalidInterval(format!("{iv} exceeds degree {}", self.tables.n)));
        }
        if parts.iter().sum::<usize>() != iv.len() {
            return Err(Error::InvalidComposition(format!(
                "parts {parts:?} do not sum to the length of {iv}"
            )));
        }
        let mut padded = vec![1usize; iv.lo - 1];
        padded.extend_from_slice(parts);
        padded.extend(std::iter::repeat(1).take(self.tables.n - iv.hi));
        let lam = Composition::new(padded);
        let f = &self.tables.field;
        let mut el = self.zero();
        for w in interval_elements(self.tables.n, iv) {
            if !is_distinguished(&w, &lam) {
                continue;
            }
            let c = if signed { f.minus_q_pow(-(w.length() as i64)) } else { f.one() };
            el.add_term(w.rank(), c);
        }
        Ok(el)
    }
}

/// An element of H_q(n): a sparse scalar combination of basis ranks.
#[derive(Clone)]
pub struct HeckeElement {
    algebra: HeckeAlgebra,
    terms: BTreeMap<u32, Scalar>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.terms == other.terms
    }
}

impl std::fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let fld = self.algebra.field();
        let mut first = true;
        for (r, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*T{}", fld.render(c), self.algebra.permutation(*r))?;
        }
        Ok(())
    }
}

impl HeckeElement {
    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<u32, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff_of_rank(&self, r: u32) -> Scalar {
        self.terms.get(&r).cloned().unwrap_or_else(|| self.algebra.field().zero())
    }

    pub fn coeff(&self, w: &Permutation) -> Result<Scalar> {
        Ok(self.coeff_of_rank(self.algebra.rank_of(w)?))
    }

    fn add_term(&mut self, r: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let f = self.algebra.field().clone();
        match self.terms.remove(&r) {
            None => {
                self.terms.insert(r, c);
            }
            Some(old) => {
                let s = f.add(&old, &c);
                if !s.is_zero() {
                    self.terms.insert(r, s);
                }
            }
        }
    }

    fn assert_same_algebra(&self, other: &HeckeElement) {
        assert!(
            self.algebra == other.algebra,
            "elements of different algebras: {:?} vs {:?}",
            self.algebra,
            other.algebra
        );
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        self.assert_same_algebra(other);
        let mut out = self.clone();
        for (r, c) in &other.terms {
            out.add_term(*r, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HeckeElement {
        let f = self.algebra.field();
        HeckeElement {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(r, c)| (*r, f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> HeckeElement {
        if c.is_zero() {
            return self.algebra.zero();
        }
        let f = self.algebra.field();
        HeckeElement {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(r, x)| (*r, f.mul(x, c))).collect(),
        }
    }

    /// Right multiplication by T_i in one table-driven pass.
    pub fn times_gen(&self, i: usize) -> HeckeElement {
        let t = &self.algebra.tables;
        assert!(i >= 1 && i < t.n, "generator index {i} out of range");
        let f = &t.field;
        let q = f.q();
        let qm1 = f.sub(&q, &f.one());
        let col = &t.rmult[i - 1];
        let mut out = self.algebra.zero();
        for (&w, c) in &self.terms {
            let w2 = col[w as usize];
            if t.lengths[w2 as usize] > t.lengths[w as usize] {
                out.add_term(w2, c.clone());
            } else {
                out.add_term(w2, f.mul(&q, c));
                out.add_term(w, f.mul(&qm1, c));
            }
        }
        out
    }

    /// Right multiplication by T_i^{-1} = q^{-1} T_i + (q^{-1} - 1).
    pub fn times_gen_inverse(&self, i: usize) -> HeckeElement {
        let f = self.algebra.field();
        let qi = f.q_inv();
        let a = self.times_gen(i).scale(&qi);
        let b = self.scale(&f.sub(&qi, &f.one()));
        a.add(&b)
    }

    pub fn mul(&self, other: &HeckeElement) -> HeckeElement {
        self.assert_same_algebra(other);
        let t = &self.algebra.tables;
        let mut acc = self.algebra.zero();
        for (&v, b) in &other.terms {
            let mut cur = self.scale(b);
            for &g in &t.words[v as usize] {
                cur = cur.times_gen(g as usize);
            }
            acc = acc.add(&cur);
        }
        acc
    }

    /// Right multiplication by the unsigned interval sum, built up one
    /// point at a time through the coset sums C_k = 1 + C_{k-1} T_{k-1}.
    /// Quadratically many generator steps in the interval size, where the
    /// plain product would walk every group element.
    pub fn times_x_interval(&self, iv: Interval) -> Result<HeckeElement> {
        self.times_interval_sum(iv, false)
    }

    /// Right multiplication by the signed interval sum, same chain with a
    /// weight of (-q)^{-1} per letter.
    pub fn times_y_interval(&self, iv: Interval) -> Result<HeckeElement> {
        self.times_interval_sum(iv, true)
    }

    fn times_interval_sum(&self, iv: Interval, signed: bool) -> Result<HeckeElement> {
        let t = &self.algebra.tables;
        if iv.hi > t.n {
            return Err(Error::InvalidInterval(format!("{iv} exceeds degree {}", t.n)));
        }
        let weight = t.field.minus_q_pow(-1);
        let mut acc = self.clone();
        for k in iv.lo + 1..=iv.hi {
            // coset representatives s_{k-1} s_{k-2} ... s_j, longest first
            let mut total = acc.clone();
            let mut cur = acc;
            for g in (iv.lo..k).rev() {
                cur = cur.times_gen(g);
                if signed {
                    cur = cur.scale(&weight);
                }
                total = total.add(&cur);
            }
            acc = total;
        }
        Ok(acc)
    }

    /// The antiautomorphism T_w -> T_{w^{-1}}.
    pub fn star(&self) -> HeckeElement {
        let t = &self.algebra.tables;
        let mut out = self.algebra.zero();
        for (&w, c) in &self.terms {
            out.add_term(t.inv[w as usize], c.clone());
        }
        out
    }

    /// The automorphism determined by T_i -> (q - 1) - T_i; on the basis it
    /// acts by T_w -> (-q)^{l(w)} (T_{w^{-1}})^{-1}.
    pub fn sharp(&self) -> HeckeElement {
        let t = &self.algebra.tables;
        let f = &t.field;
        let mut acc = self.algebra.zero();
        for (&w, c) in &self.terms {
            let l = t.lengths[w as usize] as i64;
            let mut cur = self.algebra.one().scale(&f.mul(c, &f.minus_q_pow(l)));
            for &g in &t.words[w as usize] {
                cur = cur.times_gen_inverse(g as usize);
            }
            acc = acc.add(&cur);
        }
        acc
    }

    /// The symmetrizing trace: the coefficient of the identity.
    pub fn trace(&self) -> Scalar {
        self.coeff_of_rank(0)
    }

    /// The associated symmetric form: f(a, b) = trace(a b), computed
    /// directly as sum over w of a_w b_{w^{-1}} q^{l(w)}.
    pub fn form(&self, other: &HeckeElement) -> Scalar {
        self.assert_same_algebra(other);
        let t = &self.algebra.tables;
        let f = &t.field;
        let mut acc = f.zero();
        for (&w, a) in &self.terms {
            let wi = t.inv[w as usize];
            if let Some(b) = other.terms.get(&wi) {
                let ql = f.q_pow(t.lengths[w as usize] as i64);
                acc = f.add(&acc, &f.mul(&f.mul(a, b), &ql));
            }
        }
        acc
    }

    /// Sorted JSON rendering: one object per basis term.
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.algebra.field();
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(r, c)| {
                serde_json::json!({
                    "w": self.algebra.permutation(*r).images(),
                    "c": f.render(c),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_chain_multiplication_matches_full_products() {
        for field in [Field::cyclotomic(3).unwrap(), Field::finite(2, 2, 3).unwrap()] {
            let h = HeckeAlgebra::new(4, field).unwrap();
            let sample = h
                .one()
                .add(&h.generator(1).unwrap().mul(&h.generator(3).unwrap()))
                .add(&h.generator(2).unwrap().scale(&h.field().q()));
            for lo in 1..=4 {
                for hi in lo..=4 {
                    let iv = Interval::new(lo, hi).unwrap();
                    let x = h.x_interval(iv).unwrap();
                    let y = h.y_interval(iv).unwrap();
                    assert_eq!(sample.times_x_interval(iv).unwrap(), sample.mul(&x));
                    assert_eq!(sample.times_y_interval(iv).unwrap(), sample.mul(&y));
                    assert_eq!(h.one().times_x_interval(iv).unwrap(), x);
                    assert_eq!(h.one().times_y_interval(iv).unwrap(), y);
                }
            }
        }
    }

    fn test_fields(l: u32) -> Vec<Field> {
        let mut out = vec![Field::cyclotomic(l).unwrap()];
        match l {
            3 => out.push(Field::finite(2, 2, 3).unwrap()),
            4 => out.push(Field::finite(5, 1, 4).unwrap()),
            5 => out.push(Field::finite(2, 4, 5).unwrap()),
            _ => {}
        }
        out
    }

    #[test]
    fn quadratic_relation() {
        for f in test_fields(5) {
            let h = HeckeAlgebra::new(4, f.clone()).unwrap();
            let q = f.q();
            let qm1 = f.sub(&q, &f.one());
            for i in 1..4 {
                let t = h.generator(i).unwrap();
                let lhs = t.mul(&t);
                let rhs = t.scale(&qm1).add(&h.one().scale(&q));
                assert_eq!(lhs, rhs, "i={i}");
            }
        }
    }

    #[test]
    fn braid_relations() {
        for f in test_fields(3) {
            let h = HeckeAlgebra::new(5, f).unwrap();
            for i in 1..4usize {
                let a = h.generator(i).unwrap();
                let b = h.generator(i + 1).unwrap();
                assert_eq!(a.mul(&b).mul(&a), b.mul(&a).mul(&b), "i={i}");
            }
            for i in 1..5usize {
                for j in 1..5usize {
                    if i.abs_diff(j) >= 2 {
                        let a = h.generator(i).unwrap();
                        let b = h.generator(j).unwrap();
                        assert_eq!(a.mul(&b), b.mul(&a));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_elements_are_word_products() {
        let f = Field::cyclotomic(4).unwrap();
        let h = HeckeAlgebra::new(4, f).unwrap();
        for w in Permutation::all(4) {
            let mut prod = h.one();
            for &i in &w.reduced_word() {
                prod = prod.mul(&h.generator(i).unwrap());
            }
            assert_eq!(prod, h.basis(&w).unwrap(), "w={w}");
        }
    }

    #[test]
    fn multiplication_is_associative() {
        let f = Field::finite(2, 2, 3).unwrap();
        let h = HeckeAlgebra::new(4, f).unwrap();
        // dense-enough sample: all triples of a fixed spread of basis elements
        let picks: Vec<HeckeElement> =
            [0u32, 5, 11, 17, 23].iter().map(|&r| h.basis_of_rank(r)).collect();
        for a in &picks {
            for b in &picks {
                let ab = a.mul(b);
                for c in &picks {
                    assert_eq!(ab.mul(c), a.mul(&b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn unit_and_generator_inverses() {
        for f in test_fields(4) {
            let h = HeckeAlgebra::new(4, f).unwrap();
            for w in Permutation::all(4) {
                let t = h.basis(&w).unwrap();
                assert_eq!(t.mul(&h.one()), t);
                assert_eq!(h.one().mul(&t), t);
            }
            for i in 1..4 {
                let t = h.generator(i).unwrap();
                let ti = h.generator_inverse(i).unwrap();
                assert_eq!(t.mul(&ti), h.one());
                assert_eq!(ti.mul(&t), h.one());
            }
        }
    }

    #[test]
    fn interval_sums_square_to_quantum_factorials() {
        use crate::field::quantum_factorial;
        for f in test_fields(5) {
            let h = HeckeAlgebra::new(4, f.clone()).unwrap();
            for (lo, hi) in [(1, 2), (1, 3), (2, 4), (1, 4)] {
                let iv = Interval::new(lo, hi).unwrap();
                let r = iv.len() as u32;
                let x = h.x_interval(iv).unwrap();
                let fact_q = quantum_factorial(&f, r, &f.q());
                assert_eq!(x.mul(&x), x.scale(&fact_q), "x on {iv}");
                let y = h.y_interval(iv).unwrap();
                let fact_qi = quantum_factorial(&f, r, &f.q_inv());
                assert_eq!(y.mul(&y), y.scale(&fact_qi), "y on {iv}");
                assert!(x.mul(&y).is_zero(), "x*y on {iv}");
                assert!(y.mul(&x).is_zero(), "y*x on {iv}");
            }
        }
    }

    #[test]
    fn star_is_an_antiautomorphism() {
        let f = Field::cyclotomic(3).unwrap();
        let h = HeckeAlgebra::new(4, f.clone()).unwrap();
        let a = h.basis_of_rank(7).add(&h.basis_of_rank(13).scale(&f.q()));
        let b = h.basis_of_rank(2).sub(&h.basis_of_rank(19));
        assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
        assert_eq!(a.star().star(), a);
        for w in Permutation::all(4) {
            assert_eq!(
                h.basis(&w).unwrap().star(),
                h.basis(&w.inverse()).unwrap()
            );
        }
    }

    #[test]
    fn sharp_is_a_ring_involution() {
        for f in test_fields(3) {
            let h = HeckeAlgebra::new(4, f.clone()).unwrap();
            let qm1 = f.sub(&f.q(), &f.one());
            for i in 1..4 {
                let t = h.generator(i).unwrap();
                let expect = h.one().scale(&qm1).sub(&t);
                assert_eq!(t.sharp(), expect, "i={i}");
            }
            let a = h.basis_of_rank(10).add(&h.basis_of_rank(3).scale(&f.q()));
            let b = h.basis_of_rank(15).add(&h.one());
            assert_eq!(a.mul(&b).sharp(), a.sharp().mul(&b.sharp()));
            assert_eq!(a.sharp().sharp(), a);
        }
    }

    #[test]
    fn sharp_swaps_interval_sums_up_to_scalars() {
        let f = Field::cyclotomic(3).unwrap();
        let h = HeckeAlgebra::new(3, f.clone()).unwrap();
        let iv = Interval::new(1, 2).unwrap();
        let x = h.x_interval(iv).unwrap();
        let y = h.y_interval(iv).unwrap();
        assert_eq!(x.sharp(), y.scale(&f.q()));
        assert_eq!(y.sharp(), x.scale(&f.q_inv()));
    }

    #[test]
    fn trace_form_matches_structural_pairing() {
        for f in test_fields(4) {
            let h = HeckeAlgebra::new(4, f.clone()).unwrap();
            for u in Permutation::all(4) {
                let tu = h.basis(&u).unwrap();
                for r in [0u32, 3, 9, 16, 23] {
                    let tv = h.basis_of_rank(r);
                    let prod_trace = tu.mul(&tv).trace();
                    assert_eq!(tu.form(&tv), prod_trace, "u={u}, r={r}");
                }
            }
            // (T_u, T_v) = q^{l(u)} exactly when v = u^{-1}
            for u in Permutation::all(4) {
                let tu = h.basis(&u).unwrap();
                let tv = h.basis(&u.inverse()).unwrap();
                assert_eq!(tu.form(&tv), f.q_pow(u.length() as i64));
            }
        }
    }

    #[test]
    fn form_is_symmetric_and_associative() {
        let f = Field::finite(2, 4, 5).unwrap();
        let h = HeckeAlgebra::new(4, f.clone()).unwrap();
        let a = h.basis_of_rank(5).add(&h.basis_of_rank(20).scale(&f.q()));
        let b = h.basis_of_rank(9).sub(&h.one());
        let c = h.basis_of_rank(17).add(&h.basis_of_rank(2));
        assert_eq!(a.form(&b), b.form(&a));
        assert_eq!(a.mul(&b).form(&c), a.form(&b.mul(&c)));
    }

    #[test]
    fn dual_bases_give_a_casimir_invariant() {
        // sum_w T_w (x) q^{-l(w)} T_{w^{-1}} commutes with the diagonal action
        let f = Field::cyclotomic(3).unwrap();
        let h = HeckeAlgebra::new(3, f.clone()).unwrap();
        for i in 1..3usize {
            let mut lhs: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            let mut rhs: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            for w in Permutation::all(3) {
                let scale = f.q_pow(-(w.length() as i64));
                let dual = h.basis(&w.inverse()).unwrap().scale(&scale);
                let left = h.basis(&w).unwrap().times_gen(i);
                for (&a, ca) in left.terms() {
                    for (&b, cb) in dual.terms() {
                        let v = f.mul(ca, cb);
                        let e = lhs.entry((a, b)).or_insert_with(|| f.zero());
                        *e = f.add(e, &v);
                    }
                }
                let right = h.generator(i).unwrap().mul(&dual);
                let base = h.basis(&w).unwrap();
                for (&a, ca) in base.terms() {
                    for (&b, cb) in right.terms() {
                        let v = f.mul(ca, cb);
                        let e = rhs.entry((a, b)).or_insert_with(|| f.zero());
                        *e = f.add(e, &v);
                    }
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            rhs.retain(|_, v| !v.is_zero());
            assert_eq!(lhs, rhs, "i={i}");
        }
    }

    #[test]
    fn interval_sum_factors_along_refinements() {
        let f = Field::cyclotomic(5).unwrap();
        let h = HeckeAlgebra::new(4, f).unwrap();
        let whole = Interval::new(1, 4).unwrap();
        for parts in [vec![2usize, 2], vec![1, 3], vec![3, 1], vec![1, 1, 2]] {
            let lam = Composition::new(parts.clone());
            let x_fine = h.x_parabolic(&pad_to(&lam, 4)).unwrap();
            let shuffle = h.distinguished_sum(whole, &parts, false).unwrap();
            assert_eq!(x_fine.mul(&shuffle), h.x_interval(whole).unwrap(), "parts {parts:?}");
            let y_fine = h.y_parabolic(&pad_to(&lam, 4)).unwrap();
            let signed = h.distinguished_sum(whole, &parts, true).unwrap();
            assert_eq!(y_fine.mul(&signed), h.y_interval(whole).unwrap(), "parts {parts:?}");
        }
    }

    fn pad_to(lam: &Composition, n: usize) -> Composition {
        let mut parts = lam.parts().to_vec();
        let sum: usize = parts.iter().sum();
        assert!(sum <= n);
        parts.extend(std::iter::repeat(1).take(n - sum));
        Composition::new(parts)
    }

    #[test]
    fn json_rendering_is_sorted_and_readable() {
        let f = Field::cyclotomic(3).unwrap();
        let h = HeckeAlgebra::new(3, f.clone()).unwrap();
        let el = h.generator(2).unwrap().scale(&f.q()).add(&h.one());
        let v = el.to_json();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"[{"c":"1","w":[1,2,3]},{"c":"z","w":[1,3,2]}]"#);
    }
}
