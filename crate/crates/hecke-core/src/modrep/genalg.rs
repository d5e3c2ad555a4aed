//! Algebras presented by generators with explicit multiplication tables on
//! a fixed basis, and right modules over them given by one action matrix
//! per generator.
//!
//! Four sources of such presentations are supported: a Hecke algebra acting
//! on itself, a parabolic subalgebra of one, the corner algebra of a block
//! construction, and tensor powers of any of these. Every construction
//! carries its own defining relations and re-checks them on the built
//! tables, so a wrong table is caught at construction time rather than in a
//! downstream computation.

use crate::algebra::{HeckeAlgebra, HeckeElement};
use crate::block::BlockConstruction;
use crate::cosets::{parabolic_elements, Composition};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::linalg::{Matrix, Reduction, SparseMatrix, SparseVec, SpanBuilder};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A linear combination of words in the generators; the empty word is the
/// unit.
pub type GenPoly = Vec<(Scalar, Vec<usize>)>;

pub type AlgebraHandle = Arc<AlgebraByGenerators>;

pub(crate) struct HeckeBacking {
    pub algebra: HeckeAlgebra,
    /// Maps a Coxeter generator index to the position of its generator in
    /// this presentation.
    pub gen_of_tindex: BTreeMap<usize, usize>,
}

pub struct AlgebraByGenerators {
    label: String,
    field: Field,
    dim: usize,
    gen_labels: Vec<String>,
    right_mult: Vec<SparseMatrix>,
    left_mult: Vec<SparseMatrix>,
    unit: SparseVec,
    unit_poly: GenPoly,
    relations: Vec<GenPoly>,
    basis_words: Vec<Vec<usize>>,
    duals: Option<Vec<SparseVec>>,
    trace: Option<SparseVec>,
    pub(crate) hecke: Option<HeckeBacking>,
    tensor_factors: usize,
}

pub(crate) fn field_tag(f: &Field) -> String {
    match f.spec() {
        FieldSpec::Cyclotomic { l } => format!("cyclo{l}"),
        FieldSpec::Finite { l, p, k } => format!("gf{}l{l}", (p as u64).pow(k)),
    }
}

fn sparse_unit(index: usize, f: &Field) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(index, f.one());
    v
}

fn sparse_kron(f: &Field, a: &SparseVec, b: &SparseVec, bdim: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, x) in a {
        for (j, y) in b {
            out.insert(i * bdim + j, f.mul(x, y));
        }
    }
    out
}

fn hecke_relations(f: &Field, tindices: &[usize]) -> Vec<GenPoly> {
    let q = f.q();
    let mut rels: Vec<GenPoly> = Vec::new();
    for (g, _) in tindices.iter().enumerate() {
        rels.push(vec![
            (f.one(), vec![g, g]),
            (f.neg(&f.sub(&q, &f.one())), vec![g]),
            (f.neg(&q), vec![]),
        ]);
    }
    for (g, &i) in tindices.iter().enumerate() {
        for (h, &j) in tindices.iter().enumerate() {
            if g >= h {
                continue;
            }
            if i.abs_diff(j) == 1 {
                rels.push(vec![(f.one(), vec![g, h, g]), (f.neg(&f.one()), vec![h, g, h])]);
            } else {
                rels.push(vec![(f.one(), vec![g, h]), (f.neg(&f.one()), vec![h, g])]);
            }
        }
    }
    rels
}

impl AlgebraByGenerators {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.gen_labels.len()
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.gen_labels
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.gen_labels.iter().position(|l| l == label)
    }

    pub fn right_mult(&self, g: usize) -> &SparseMatrix {
        &self.right_mult[g]
    }

    pub fn left_mult(&self, g: usize) -> &SparseMatrix {
        &self.left_mult[g]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn unit_poly(&self) -> &GenPoly {
        &self.unit_poly
    }

    pub fn relations(&self) -> &[GenPoly] {
        &self.relations
    }

    pub fn basis_word(&self, i: usize) -> &[usize] {
        &self.basis_words[i]
    }

    pub fn basis_words(&self) -> &[Vec<usize>] {
        &self.basis_words
    }

    pub fn duals(&self) -> Option<&[SparseVec]> {
        self.duals.as_deref()
    }

    pub fn trace_vector(&self) -> Option<&SparseVec> {
        self.trace.as_ref()
    }

    pub fn tensor_factors(&self) -> usize {
        self.tensor_factors
    }

    pub fn is_hecke_backed(&self) -> bool {
        self.hecke.is_some()
    }

    fn eval_words(&self, tables: &[SparseMatrix], poly: &GenPoly, reversed: bool) -> SparseMatrix {
        let f = &self.field;
        let mut acc = SparseMatrix::zero(self.dim, self.dim);
        for (c, word) in poly {
            let mut m = SparseMatrix::identity(self.dim, f);
            if reversed {
                for &g in word.iter().rev() {
                    m = m.mul(f, &tables[g]);
                }
            } else {
                for &g in word {
                    m = m.mul(f, &tables[g]);
                }
            }
            acc = acc.add_scaled(f, &m, c);
        }
        acc
    }

    /// Right multiplication by the element the polynomial denotes.
    pub fn poly_right_action(&self, poly: &GenPoly) -> SparseMatrix {
        self.eval_words(&self.right_mult, poly, false)
    }

    /// Left multiplication by the element the polynomial denotes.
    pub fn poly_left_action(&self, poly: &GenPoly) -> SparseMatrix {
        self.eval_words(&self.left_mult, poly, true)
    }

    /// Coordinates of the element the polynomial denotes.
    pub fn poly_vector(&self, poly: &GenPoly) -> SparseVec {
        self.poly_right_action(poly).apply(&self.field, &self.unit)
    }

    fn validate(&self) -> Result<()> {
        let f = &self.field;
        for (k, rel) in self.relations.iter().enumerate() {
            if !self.eval_words(&self.right_mult, rel, false).is_zero() {
                return Err(Error::Construction(format!(
                    "{}: relation {k} fails on the right multiplication tables",
                    self.label
                )));
            }
            if !self.eval_words(&self.left_mult, rel, true).is_zero() {
                return Err(Error::Construction(format!(
                    "{}: relation {k} fails on the left multiplication tables",
                    self.label
                )));
            }
        }
        let unit_right = self.poly_right_action(&self.unit_poly);
        let diff =
            unit_right.add_scaled(f, &SparseMatrix::identity(self.dim, f), &f.neg(&f.one()));
        if !diff.is_zero() {
            return Err(Error::Construction(format!(
                "{}: the unit polynomial does not act as the identity",
                self.label
            )));
        }
        for (i, word) in self.basis_words.iter().enumerate() {
            let mut v = self.unit.clone();
            for &g in word {
                v = self.right_mult[g].apply(f, &v);
            }
            if v != sparse_unit(i, f) {
                return Err(Error::Construction(format!(
                    "{}: basis word {i} does not reproduce its basis vector",
                    self.label
                )));
            }
        }
        if self.dim <= 100 {
            for lg in &self.left_mult {
                for rg in &self.right_mult {
                    let a = lg.mul(f, rg);
                    let b = rg.mul(f, lg);
                    if !a.add_scaled(f, &b, &f.neg(&f.one())).is_zero() {
                        return Err(Error::Construction(format!(
                            "{}: left and right multiplications do not commute",
                            self.label
                        )));
                    }
                }
            }
        }
        if self.dim <= 50 {
            if let (Some(duals), Some(tr)) = (&self.duals, &self.trace) {
                let tables = self.basis_action_tables_sparse();
                for i in 0..self.dim {
                    for (j, dual) in duals.iter().enumerate() {
                        let mut prod = SparseVec::new();
                        for (k, c) in dual {
                            let bik = tables[*k].apply(f, &sparse_unit(i, f));
                            for (t, v) in &bik {
                                let add = f.mul(c, v);
                                let entry = prod.entry(*t).or_insert_with(|| f.zero());
                                *entry = f.add(entry, &add);
                            }
                        }
                        let mut pairing = f.zero();
                        for (t, v) in &prod {
                            if let Some(w) = tr.get(t) {
                                pairing = f.add(&pairing, &f.mul(v, w));
                            }
                        }
                        let expected = if i == j { f.one() } else { f.zero() };
                        if pairing != expected {
                            return Err(Error::Construction(format!(
                                "{}: dual basis pairing fails at ({i}, {j})",
                                self.label
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Right multiplication tables for every basis element, derived from
    /// the basis words.
    fn basis_action_tables_sparse(&self) -> Vec<SparseMatrix> {
        word_tables(&self.field, self.dim, &self.right_mult, &self.basis_words)
    }

    pub fn from_hecke(h: &HeckeAlgebra) -> Result<AlgebraHandle> {
        let f = h.field().clone();
        let n = h.n();
        let dim = h.dim();
        let tindices: Vec<usize> = (1..n).collect();
        let mut right_mult = Vec::new();
        let mut left_mult = Vec::new();
        for &i in &tindices {
            let mut rrows = Vec::with_capacity(dim);
            let mut lrows = Vec::with_capacity(dim);
            for w in 0..dim as u32 {
                let r = h.basis_of_rank(w).times_gen(i);
                rrows.push(r.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect());
                let l = h.basis_of_rank(h.inverse_rank(w)).times_gen(i).star();
                lrows.push(l.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect());
            }
            right_mult.push(SparseMatrix::from_rows(dim, dim, rrows));
            left_mult.push(SparseMatrix::from_rows(dim, dim, lrows));
        }
        let duals = (0..dim as u32)
            .map(|w| {
                let mut v = SparseVec::new();
                v.insert(h.inverse_rank(w) as usize, f.q_pow(-(h.length(w) as i64)));
                v
            })
            .collect();
        let alg = AlgebraByGenerators {
            label: format!("hecke_n{}_{}", n, field_tag(&f)),
            field: f.clone(),
            dim,
            gen_labels: tindices.iter().map(|i| format!("T{i}")).collect(),
            right_mult,
            left_mult,
            unit: sparse_unit(0, &f),
            unit_poly: vec![(f.one(), vec![])],
            relations: hecke_relations(&f, &tindices),
            basis_words: (0..dim as u32)
                .map(|w| h.word(w).iter().map(|&ltr| ltr as usize - 1).collect())
                .collect(),
            duals: Some(duals),
            trace: Some(sparse_unit(0, &f)),
            hecke: Some(HeckeBacking {
                algebra: h.clone(),
                gen_of_tindex: tindices.iter().enumerate().map(|(g, &i)| (i, g)).collect(),
            }),
            tensor_factors: 1,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    pub fn from_hecke_parabolic(h: &HeckeAlgebra, comp: &Composition) -> Result<AlgebraHandle> {
        let f = h.field().clone();
        if comp.n() != h.n() {
            return Err(Error::DegreeMismatch(comp.n(), h.n()));
        }
        let elements = parabolic_elements(h.n(), comp);
        let mut ranks = Vec::with_capacity(elements.len());
        for w in &elements {
            ranks.push(h.rank_of(w)?);
        }
        ranks.sort_unstable();
        let pos: BTreeMap<u32, usize> = ranks.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let dim = ranks.len();
        let mut tindices = Vec::new();
        for iv in comp.intervals() {
            for i in iv.lo..iv.hi {
                tindices.push(i);
            }
        }
        tindices.sort_unstable();
        let project = |el: &HeckeElement| -> Result<Vec<(usize, Scalar)>> {
            let mut row = Vec::new();
            for (k, c) in el.terms() {
                let Some(&p) = pos.get(k) else {
                    return Err(Error::Construction(
                        "parabolic product leaves the subalgebra".into(),
                    ));
                };
                row.push((p, c.clone()));
            }
            Ok(row)
        };
        let mut right_mult = Vec::new();
        let mut left_mult = Vec::new();
        for &i in &tindices {
            let mut rrows = Vec::with_capacity(dim);
            let mut lrows = Vec::with_capacity(dim);
            for &w in &ranks {
                rrows.push(project(&h.basis_of_rank(w).times_gen(i))?);
                lrows.push(project(&h.basis_of_rank(h.inverse_rank(w)).times_gen(i).star())?);
            }
            right_mult.push(SparseMatrix::from_rows(dim, dim, rrows));
            left_mult.push(SparseMatrix::from_rows(dim, dim, lrows));
        }
        let gen_of_tindex: BTreeMap<usize, usize> =
            tindices.iter().enumerate().map(|(g, &i)| (i, g)).collect();
        let mut basis_words = Vec::with_capacity(dim);
        for &w in &ranks {
            let mut word = Vec::new();
            for &ltr in h.word(w) {
                let Some(&g) = gen_of_tindex.get(&(ltr as usize)) else {
                    return Err(Error::Construction(
                        "reduced word of a parabolic element uses an outside generator".into(),
                    ));
                };
                word.push(g);
            }
            basis_words.push(word);
        }
        let duals = ranks
            .iter()
            .map(|&w| {
                let mut v = SparseVec::new();
                v.insert(pos[&h.inverse_rank(w)], f.q_pow(-(h.length(w) as i64)));
                v
            })
            .collect();
        let parts: Vec<String> = comp.parts().iter().map(|p| p.to_string()).collect();
        let alg = AlgebraByGenerators {
            label: format!("hecke_n{}_par{}_{}", h.n(), parts.join("x"), field_tag(&f)),
            field: f.clone(),
            dim,
            gen_labels: tindices.iter().map(|i| format!("T{i}")).collect(),
            right_mult,
            left_mult,
            unit: sparse_unit(0, &f),
            unit_poly: vec![(f.one(), vec![])],
            relations: hecke_relations(&f, &tindices),
            basis_words,
            duals: Some(duals),
            trace: Some(sparse_unit(0, &f)),
            hecke: Some(HeckeBacking { algebra: h.clone(), gen_of_tindex }),
            tensor_factors: 1,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    pub fn from_block(b: &BlockConstruction) -> Result<AlgebraHandle> {
        let h = b.algebra();
        let f = h.field().clone();
        let l = b.l();
        let verts = l - 1;
        let paths = b.basis();
        let dim = paths.len();
        let mut span = SpanBuilder::new(f.clone());
        for p in paths {
            let v: SparseVec =
                p.element.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect();
            match span.insert(v) {
                Reduction::Independent { .. } => {}
                Reduction::Dependent { .. } => {
                    return Err(Error::Construction("path basis is not independent".into()))
                }
            }
        }
        let express = |el: &HeckeElement| -> Result<SparseVec> {
            let v: SparseVec =
                el.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect();
            span.express(&v).ok_or_else(|| {
                Error::Construction("corner product leaves the path basis span".into())
            })
        };
        enum BlockGen {
            Vertex(usize),
            Alpha(usize),
            Beta(usize),
            Loop,
        }
        let mut gen_labels: Vec<String> = Vec::new();
        let mut gen_kinds: Vec<BlockGen> = Vec::new();
        for r in 1..=verts {
            gen_labels.push(format!("e{r}"));
            gen_kinds.push(BlockGen::Vertex(r));
        }
        if l == 2 {
            gen_labels.push("x".into());
            gen_kinds.push(BlockGen::Loop);
        } else {
            for r in 1..verts {
                gen_labels.push(format!("a{r}"));
                gen_kinds.push(BlockGen::Alpha(r));
            }
            for r in 1..verts {
                gen_labels.push(format!("b{r}"));
                gen_kinds.push(BlockGen::Beta(r));
            }
        }
        let loop_el = if l == 2 { Some(b.full_unsigned_sum()?) } else { None };
        let mut right_mult = Vec::new();
        let mut left_mult = Vec::new();
        for kind in &gen_kinds {
            let mut rrows = Vec::with_capacity(dim);
            let mut lrows = Vec::with_capacity(dim);
            for p in paths {
                let (rp, lp) = match kind {
                    BlockGen::Vertex(r) => {
                        (b.absorb_right(&p.element, *r)?, b.absorb_left(&p.element, *r)?)
                    }
                    BlockGen::Alpha(r) => {
                        (b.times_alpha(&p.element, *r)?, b.left_times_alpha(&p.element, *r)?)
                    }
                    BlockGen::Beta(r) => {
                        (b.times_beta(&p.element, *r)?, b.left_times_beta(&p.element, *r)?)
                    }
                    BlockGen::Loop => {
                        let x = loop_el.as_ref().expect("loop generator");
                        (p.element.mul(x), x.mul(&p.element))
                    }
                };
                rrows.push(express(&rp)?.into_iter().collect());
                lrows.push(express(&lp)?.into_iter().collect());
            }
            right_mult.push(SparseMatrix::from_rows(dim, dim, rrows));
            left_mult.push(SparseMatrix::from_rows(dim, dim, lrows));
        }
        let mut unit_el = h.zero();
        for r in 1..=verts {
            unit_el = unit_el.add(b.idempotent(r));
        }
        let unit = express(&unit_el)?;
        let unit_poly: GenPoly = (0..verts).map(|r| (f.one(), vec![r])).collect();
        let resolve = |label: &str| -> usize {
            gen_labels.iter().position(|x| x == label).expect("known generator label")
        };
        let mut basis_words = Vec::with_capacity(dim);
        for p in paths {
            if p.path.is_empty() {
                basis_words.push(vec![resolve(&p.label)]);
            } else {
                basis_words.push(p.path.iter().map(|seg| resolve(seg)).collect());
            }
        }
        let relations = block_relations(&f, l, verts, &gen_labels);
        // dual basis through the symmetrizing trace inherited from the
        // Hecke algebra
        let mut gram = Matrix::zero(dim, dim, &f);
        for i in 0..dim {
            for j in 0..dim {
                gram.set(i, j, paths[i].element.form(&paths[j].element));
            }
        }
        let mut duals = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut e = vec![f.zero(); dim];
            e[j] = f.one();
            let col = gram.solve(&f, &e).ok_or_else(|| {
                Error::Construction("the restricted trace form is degenerate".into())
            })?;
            let mut v = SparseVec::new();
            for (k, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    v.insert(k, c);
                }
            }
            duals.push(v);
        }
        let mut trace = SparseVec::new();
        for (i, p) in paths.iter().enumerate() {
            let t = p.element.trace();
            if !t.is_zero() {
                trace.insert(i, t);
            }
        }
        let alg = AlgebraByGenerators {
            label: format!("block_l{}_{}", l, field_tag(&f)),
            field: f,
            dim,
            gen_labels,
            right_mult,
            left_mult,
            unit,
            unit_poly,
            relations,
            basis_words,
            duals: Some(duals),
            trace: Some(trace),
            hecke: None,
            tensor_factors: 1,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    pub fn tensor_power(a: &AlgebraHandle, m: usize) -> Result<AlgebraHandle> {
        if m == 0 {
            return Err(Error::Construction("tensor power needs at least one factor".into()));
        }
        if m == 1 {
            return Ok(a.clone());
        }
        if a.tensor_factors != 1 {
            return Err(Error::Unsupported("nested tensor powers".into()));
        }
        let f = a.field.clone();
        let d = a.dim;
        let mut dim: usize = 1;
        for _ in 0..m {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x <= 10_000)
                .ok_or_else(|| {
                    Error::SizeOverflow(format!("tensor power dimension {d}^{m} exceeds 10000"))
                })?;
        }
        let gcount = a.gen_labels.len();
        let mut gen_labels = Vec::new();
        let mut right_mult = Vec::new();
        let mut left_mult = Vec::new();
        for fac in 0..m {
            let pre = d.pow(fac as u32);
            let post = d.pow((m - 1 - fac) as u32);
            for (g, label) in a.gen_labels.iter().enumerate() {
                gen_labels.push(format!("{}@{}", label, fac + 1));
                let lift = |t: &SparseMatrix| {
                    SparseMatrix::identity(pre, &f)
                        .kron(&f, t)
                        .kron(&f, &SparseMatrix::identity(post, &f))
                };
                right_mult.push(lift(&a.right_mult[g]));
                left_mult.push(lift(&a.left_mult[g]));
            }
        }
        let shift = |poly: &GenPoly, fac: usize| -> GenPoly {
            poly.iter()
                .map(|(c, w)| (c.clone(), w.iter().map(|&g| g + fac * gcount).collect()))
                .collect()
        };
        let mut acc_unit = a.unit.clone();
        for _ in 1..m {
            acc_unit = sparse_kron(&f, &acc_unit, &a.unit, d);
        }
        let unit = acc_unit;
        let mut unit_poly = shift(&a.unit_poly, 0);
        for fac in 1..m {
            unit_poly = poly_mul(&f, &unit_poly, &shift(&a.unit_poly, fac));
        }
        let mut relations = Vec::new();
        for fac in 0..m {
            for rel in &a.relations {
                relations.push(shift(rel, fac));
            }
        }
        for f1 in 0..m {
            for f2 in f1 + 1..m {
                for g1 in 0..gcount {
                    for g2 in 0..gcount {
                        relations.push(vec![
                            (f.one(), vec![f1 * gcount + g1, f2 * gcount + g2]),
                            (f.neg(&f.one()), vec![f2 * gcount + g2, f1 * gcount + g1]),
                        ]);
                    }
                }
            }
        }
        let mut basis_words = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut parts = Vec::with_capacity(m);
            let mut rest = idx;
            for _ in 0..m {
                parts.push(rest % d);
                rest /= d;
            }
            parts.reverse();
            let mut word = Vec::new();
            for (fac, &p) in parts.iter().enumerate() {
                for &g in &a.basis_words[p] {
                    word.push(g + fac * gcount);
                }
            }
            basis_words.push(word);
        }
        let duals = a.duals.as_ref().map(|ds| {
            let mut out: Vec<SparseVec> = ds.clone();
            for _ in 1..m {
                let mut next = Vec::with_capacity(out.len() * d);
                for u in &out {
                    for v in ds {
                        next.push(sparse_kron(&f, u, v, d));
                    }
                }
                out = next;
            }
            out
        });
        let trace = a.trace.as_ref().map(|t| {
            let mut acc = t.clone();
            for _ in 1..m {
                acc = sparse_kron(&f, &acc, t, d);
            }
            acc
        });
        let alg = AlgebraByGenerators {
            label: format!("{}_pow{}", a.label, m),
            field: f,
            dim,
            gen_labels,
            right_mult,
            left_mult,
            unit,
            unit_poly,
            relations,
            basis_words,
            duals,
            trace,
            hecke: None,
            tensor_factors: m,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }
}

/// Evaluates one product matrix per word, sharing common prefixes through a
/// stack so each extra letter costs one multiplication.
pub(crate) fn word_tables(
    f: &Field,
    dim: usize,
    gens: &[SparseMatrix],
    words: &[Vec<usize>],
) -> Vec<SparseMatrix> {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&a, &b| words[a].cmp(&words[b]));
    let mut out: Vec<SparseMatrix> = vec![SparseMatrix::zero(0, 0); words.len()];
    let mut stack: Vec<SparseMatrix> = vec![SparseMatrix::identity(dim, f)];
    let mut prefix: Vec<usize> = Vec::new();
    for idx in order {
        let word = &words[idx];
        let mut common = 0;
        while common < prefix.len() && common < word.len() && prefix[common] == word[common] {
            common += 1;
        }
        prefix.truncate(common);
        stack.truncate(common + 1);
        for &g in &word[common..] {
            let next = stack.last().expect("stack nonempty").mul(f, &gens[g]);
            stack.push(next);
            prefix.push(g);
        }
        out[idx] = stack.last().expect("stack nonempty").clone();
    }
    out
}

pub fn poly_mul(f: &Field, a: &GenPoly, b: &GenPoly) -> GenPoly {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (c1, w1) in a {
        for (c2, w2) in b {
            let mut w = w1.clone();
            w.extend_from_slice(w2);
            out.push((f.mul(c1, c2), w));
        }
    }
    out
}

fn block_relations(f: &Field, l: usize, verts: usize, labels: &[String]) -> Vec<GenPoly> {
    let idx = |name: String| labels.iter().position(|x| x == &name).expect("generator exists");
    let one = f.one();
    let neg = f.neg(&one);
    let mut rels: Vec<GenPoly> = Vec::new();
    for r in 1..=verts {
        for s in 1..=verts {
            let er = idx(format!("e{r}"));
            let es = idx(format!("e{s}"));
            let mut rel = vec![(one.clone(), vec![er, es])];
            if r == s {
                rel.push((neg.clone(), vec![er]));
            }
            rels.push(rel);
        }
    }
    let mut unit_rel: GenPoly =
        (1..=verts).map(|r| (one.clone(), vec![idx(format!("e{r}"))])).collect();
    unit_rel.push((neg.clone(), vec![]));
    if l == 2 {
        let x = idx("x".into());
        let e1 = idx("e1".into());
        rels.push(unit_rel);
        rels.push(vec![(one.clone(), vec![x, x])]);
        rels.push(vec![(one.clone(), vec![e1, x]), (neg.clone(), vec![x])]);
        rels.push(vec![(one, vec![x, e1]), (neg, vec![x])]);
        return rels;
    }
    rels.push(unit_rel);
    for j in 1..verts {
        let aj = idx(format!("a{j}"));
        let bj = idx(format!("b{j}"));
        for r in 1..=verts {
            let er = idx(format!("e{r}"));
            let mut rel = vec![(one.clone(), vec![er, aj])];
            if r == j {
                rel.push((neg.clone(), vec![aj]));
            }
            rels.push(rel);
            let mut rel = vec![(one.clone(), vec![aj, er])];
            if r == j + 1 {
                rel.push((neg.clone(), vec![aj]));
            }
            rels.push(rel);
            let mut rel = vec![(one.clone(), vec![er, bj])];
            if r == j + 1 {
                rel.push((neg.clone(), vec![bj]));
            }
            rels.push(rel);
            let mut rel = vec![(one.clone(), vec![bj, er])];
            if r == j {
                rel.push((neg.clone(), vec![bj]));
            }
            rels.push(rel);
        }
    }
    for j in 1..verts {
        for k in 1..verts {
            let aj = idx(format!("a{j}"));
            let ak = idx(format!("a{k}"));
            let bj = idx(format!("b{j}"));
            let bk = idx(format!("b{k}"));
            rels.push(vec![(one.clone(), vec![aj, ak])]);
            rels.push(vec![(one.clone(), vec![bj, bk])]);
            if j != k {
                rels.push(vec![(one.clone(), vec![aj, bk])]);
                rels.push(vec![(one.clone(), vec![bj, ak])]);
            }
        }
    }
    for r in 1..verts.saturating_sub(1) {
        let br = idx(format!("b{r}"));
        let ar = idx(format!("a{r}"));
        let an = idx(format!("a{}", r + 1));
        let bn = idx(format!("b{}", r + 1));
        rels.push(vec![(one.clone(), vec![br, ar]), (neg.clone(), vec![an, bn])]);
    }
    let a1 = idx("a1".into());
    let b1 = idx("b1".into());
    rels.push(vec![(one.clone(), vec![a1, b1, a1])]);
    let t = verts - 1;
    let at = idx(format!("a{t}"));
    let bt = idx(format!("b{t}"));
    rels.push(vec![(one, vec![bt, at, bt])]);
    rels
}

/// A right module: one action matrix per generator, rows are module basis
/// vectors.
#[derive(Clone)]
pub struct ModuleRep {
    algebra: AlgebraHandle,
    dim: usize,
    action: Vec<SparseMatrix>,
}

impl ModuleRep {
    pub fn from_action(algebra: AlgebraHandle, action: Vec<SparseMatrix>) -> Result<ModuleRep> {
        if action.len() != algebra.generator_count() {
            return Err(Error::AlgebraMismatch(format!(
                "expected {} action matrices, got {}",
                algebra.generator_count(),
                action.len()
            )));
        }
        let dim = action.first().map(|m| m.rows).unwrap_or(0);
        for m in &action {
            if m.rows != dim || m.cols != dim {
                return Err(Error::AlgebraMismatch("action matrices are not square of equal size".into()));
            }
        }
        let module = ModuleRep { algebra, dim, action };
        module.relation_audit()?;
        Ok(module)
    }

    pub fn regular(algebra: &AlgebraHandle) -> ModuleRep {
        let action = (0..algebra.generator_count())
            .map(|g| algebra.right_mult(g).clone())
            .collect();
        ModuleRep { algebra: algebra.clone(), dim: algebra.dim(), action }
    }

    pub fn one_dimensional(algebra: &AlgebraHandle, values: &[Scalar]) -> Result<ModuleRep> {
        if values.len() != algebra.generator_count() {
            return Err(Error::AlgebraMismatch("one scalar per generator required".into()));
        }
        let action = values
            .iter()
            .map(|v| SparseMatrix::from_rows(1, 1, vec![if v.is_zero() { vec![] } else { vec![(0, v.clone())] }]))
            .collect();
        ModuleRep::from_action(algebra.clone(), action)
    }

    pub fn algebra(&self) -> &AlgebraHandle {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &SparseMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[SparseMatrix] {
        &self.action
    }

    fn eval_poly(&self, poly: &GenPoly) -> SparseMatrix {
        let f = self.algebra.field();
        let mut acc = SparseMatrix::zero(self.dim, self.dim);
        for (c, word) in poly {
            let mut m = SparseMatrix::identity(self.dim, f);
            for &g in word {
                m = m.mul(f, &self.action[g]);
            }
            acc = acc.add_scaled(f, &m, c);
        }
        acc
    }

    /// Action of the element a generator polynomial denotes.
    pub fn poly_action(&self, poly: &GenPoly) -> SparseMatrix {
        self.eval_poly(poly)
    }

    /// Every defining relation of the algebra must evaluate to zero on the
    /// action matrices, and the unit polynomial to the identity.
    pub fn relation_audit(&self) -> Result<()> {
        let f = self.algebra.field();
        for (k, rel) in self.algebra.relations().iter().enumerate() {
            if !self.eval_poly(rel).is_zero() {
                return Err(Error::Construction(format!(
                    "relation {k} of {} fails on the module action",
                    self.algebra.label()
                )));
            }
        }
        let u = self.eval_poly(self.algebra.unit_poly());
        let diff = u.add_scaled(f, &SparseMatrix::identity(self.dim, f), &f.neg(&f.one()));
        if !diff.is_zero() {
            return Err(Error::Construction(format!(
                "the unit of {} does not act as the identity",
                self.algebra.label()
            )));
        }
        Ok(())
    }

    /// The submodule spanned by the given coordinate vectors; errors if the
    /// span is not invariant.
    pub fn submodule(&self, rows: &[SparseVec]) -> Result<ModuleRep> {
        self.subquotient(&[], rows)
    }

    /// The quotient of the invariant span of `big` by the invariant span of
    /// `small`.
    pub fn subquotient(&self, small: &[SparseVec], big: &[SparseVec]) -> Result<ModuleRep> {
        let f = self.algebra.field().clone();
        let mut span = SpanBuilder::new(f.clone());
        let mut inner_inputs = Vec::new();
        let mut lifts: Vec<SparseVec> = Vec::new();
        let mut lift_pos: BTreeMap<usize, usize> = BTreeMap::new();
        for v in small {
            if let Reduction::Independent { index } = span.insert(v.clone()) {
                inner_inputs.push((index, v.clone()));
            }
        }
        for v in big {
            if let Reduction::Independent { index } = span.insert(v.clone()) {
                lift_pos.insert(index, lifts.len());
                lifts.push(v.clone());
            }
        }
        let qdim = lifts.len();
        let mut action = Vec::with_capacity(self.action.len());
        for mat in &self.action {
            for (_, v) in &inner_inputs {
                let w = mat.apply(&f, v);
                let combo = span.express(&w).ok_or(Error::NotInvariant)?;
                if combo.keys().any(|k| lift_pos.contains_key(k)) {
                    return Err(Error::NotInvariant);
                }
            }
            let mut rows = Vec::with_capacity(qdim);
            for v in &lifts {
                let w = mat.apply(&f, v);
                let combo = span.express(&w).ok_or(Error::NotInvariant)?;
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                for (k, c) in combo {
                    if let Some(&p) = lift_pos.get(&k) {
                        row.push((p, c));
                    }
                }
                row.sort_by_key(|(p, _)| *p);
                rows.push(row);
            }
            action.push(SparseMatrix::from_rows(qdim, qdim, rows));
        }
        ModuleRep::from_action(self.algebra.clone(), action)
    }

    /// The right ideal generated by the element a polynomial denotes, as a
    /// submodule of the regular right module.
    pub fn right_ideal(algebra: &AlgebraHandle, e: &GenPoly) -> Result<ModuleRep> {
        let regular = ModuleRep::regular(algebra);
        let lmat = algebra.poly_left_action(e);
        let f = algebra.field();
        let rows: Vec<SparseVec> = (0..algebra.dim())
            .map(|i| lmat.apply(f, &sparse_unit(i, f)))
            .collect();
        regular.submodule(&rows)
    }

    /// Restriction along a parabolic subalgebra: keeps the actions of the
    /// Coxeter generators inside the composition's intervals.
    pub fn restrict(&self, comp: &Composition) -> Result<ModuleRep> {
        let Some(backing) = &self.algebra.hecke else {
            return Err(Error::Unsupported("restriction needs a Hecke-backed algebra".into()));
        };
        let sub = AlgebraByGenerators::from_hecke_parabolic(&backing.algebra, comp)?;
        let mut action = Vec::new();
        for label in sub.generator_labels() {
            let tindex: usize = label
                .strip_prefix('T')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Construction("parabolic generator label".into()))?;
            let Some(&g) = backing.gen_of_tindex.get(&tindex) else {
                return Err(Error::Construction(
                    "module algebra lacks a required Coxeter generator".into(),
                ));
            };
            action.push(self.action[g].clone());
        }
        ModuleRep::from_action(sub, action)
    }

    /// Action matrix of an arbitrary element of the backing Hecke algebra,
    /// assembled by walking reduced words through the generator actions.
    pub fn hecke_element_action(&self, el: &HeckeElement) -> Result<SparseMatrix> {
        let Some(backing) = &self.algebra.hecke else {
            return Err(Error::Unsupported("element action needs a Hecke-backed algebra".into()));
        };
        if el.algebra().field() != self.algebra.field() {
            return Err(Error::ContextMismatch);
        }
        let f = self.algebra.field();
        let mut rows = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let mut acc = SparseVec::new();
            for (w, c) in el.terms() {
                let mut v = sparse_unit(k, f);
                for &ltr in backing.algebra.word(*w) {
                    let Some(&g) = backing.gen_of_tindex.get(&(ltr as usize)) else {
                        return Err(Error::Construction(
                            "element reaches outside the module's generators".into(),
                        ));
                    };
                    v = self.action[g].apply(f, &v);
                }
                for (t, x) in &v {
                    let add = f.mul(c, x);
                    let entry = acc.entry(*t).or_insert_with(|| f.zero());
                    *entry = f.add(entry, &add);
                }
            }
            acc.retain(|_, c| !c.is_zero());
            rows.push(acc.into_iter().collect());
        }
        Ok(SparseMatrix::from_rows(self.dim, self.dim, rows))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.algebra.field();
        let gens: Vec<serde_json::Value> = self
            .algebra
            .generator_labels()
            .iter()
            .zip(&self.action)
            .map(|(label, m)| {
                let dense = m.to_dense(f);
                let rows: Vec<Vec<String>> = (0..self.dim)
                    .map(|i| (0..self.dim).map(|j| f.render(dense.get(i, j))).collect())
                    .collect();
                serde_json::json!({"label": label, "matrix": rows})
            })
            .collect();
        serde_json::json!({
            "algebra": self.algebra.label(),
            "dim": self.dim,
            "generators": gens,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn regular_hecke_presentation_passes_its_audit() {
        for field in [Field::cyclotomic(3).unwrap(), Field::finite(2, 2, 3).unwrap()] {
            let h = HeckeAlgebra::new(3, field).unwrap();
            let alg = AlgebraByGenerators::from_hecke(&h).unwrap();
            assert_eq!(alg.dim(), 6);
            assert_eq!(alg.generator_count(), 2);
            let m = ModuleRep::regular(&alg);
            m.relation_audit().unwrap();
        }
    }

    #[test]
    fn parabolic_subalgebra_of_a_chain() {
        let h = HeckeAlgebra::new(4, Field::cyclotomic(4).unwrap()).unwrap();
        let alg =
            AlgebraByGenerators::from_hecke_parabolic(&h, &Composition::new(vec![2, 2])).unwrap();
        assert_eq!(alg.dim(), 4);
        assert_eq!(alg.generator_labels(), &["T1".to_string(), "T3".to_string()]);
        ModuleRep::regular(&alg).relation_audit().unwrap();
    }

    #[test]
    fn block_presentation_and_corner_ideals() {
        let b = BlockConstruction::build(3, Field::cyclotomic(3).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_block(&b).unwrap();
        assert_eq!(alg.dim(), 6);
        let f = alg.field().clone();
        let e1: GenPoly = vec![(f.one(), vec![alg.generator_index("e1").unwrap()])];
        let p1 = ModuleRep::right_ideal(&alg, &e1).unwrap();
        assert_eq!(p1.dim(), 3);
        let e2: GenPoly = vec![(f.one(), vec![alg.generator_index("e2").unwrap()])];
        let p2 = ModuleRep::right_ideal(&alg, &e2).unwrap();
        assert_eq!(p2.dim(), 3);
    }

    #[test]
    fn block_presentation_dimensions_scale() {
        let b = BlockConstruction::build(4, Field::finite(5, 1, 4).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_block(&b).unwrap();
        assert_eq!(alg.dim(), 10);
        let f = alg.field().clone();
        let e2: GenPoly = vec![(f.one(), vec![alg.generator_index("e2").unwrap()])];
        let p2 = ModuleRep::right_ideal(&alg, &e2).unwrap();
        assert_eq!(p2.dim(), 4);
    }

    #[test]
    fn one_dimensional_modules_of_the_block() {
        let b = BlockConstruction::build(3, Field::cyclotomic(3).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_block(&b).unwrap();
        let f = alg.field().clone();
        for vertex in 1..=2usize {
            let values: Vec<Scalar> = alg
                .generator_labels()
                .iter()
                .map(|l| if *l == format!("e{vertex}") { f.one() } else { f.zero() })
                .collect();
            let s = ModuleRep::one_dimensional(&alg, &values).unwrap();
            assert_eq!(s.dim(), 1);
        }
    }

    #[test]
    fn tensor_square_has_product_dimension() {
        let b = BlockConstruction::build(3, Field::finite(2, 2, 3).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_block(&b).unwrap();
        let sq = AlgebraByGenerators::tensor_power(&alg, 2).unwrap();
        assert_eq!(sq.dim(), 36);
        assert_eq!(sq.generator_count(), 8);
        assert_eq!(sq.tensor_factors(), 2);
        ModuleRep::regular(&sq).relation_audit().unwrap();
        let same = AlgebraByGenerators::tensor_power(&alg, 1).unwrap();
        assert_eq!(same.label(), alg.label());
    }

    #[test]
    fn tensor_power_size_guard() {
        let h = HeckeAlgebra::new(4, Field::cyclotomic(4).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_hecke(&h).unwrap();
        assert!(matches!(
            AlgebraByGenerators::tensor_power(&alg, 3),
            Err(Error::SizeOverflow(_))
        ));
    }

    #[test]
    fn restriction_of_the_regular_module() {
        let h = HeckeAlgebra::new(4, Field::cyclotomic(4).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_hecke(&h).unwrap();
        let m = ModuleRep::regular(&alg);
        let r = m.restrict(&Composition::new(vec![2, 2])).unwrap();
        assert_eq!(r.dim(), 24);
        r.relation_audit().unwrap();
    }

    #[test]
    fn hecke_element_action_matches_the_table() {
        let h = HeckeAlgebra::new(3, Field::cyclotomic(3).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_hecke(&h).unwrap();
        let m = ModuleRep::regular(&alg);
        let t1 = h.generator(1).unwrap();
        let mat = m.hecke_element_action(&t1).unwrap();
        let f = alg.field();
        let diff = mat.add_scaled(f, alg.right_mult(0), &f.neg(&f.one()));
        assert!(diff.is_zero());
        let w0 = h.basis(&crate::perm::Permutation::longest(3)).unwrap();
        let mat0 = m.hecke_element_action(&w0).unwrap();
        let direct = alg.right_mult(0).mul(f, alg.right_mult(1)).mul(f, alg.right_mult(0));
        assert!(mat0.add_scaled(f, &direct, &f.neg(&f.one())).is_zero());
    }

    #[test]
    fn module_json_shape() {
        let h = HeckeAlgebra::new(3, Field::cyclotomic(3).unwrap()).unwrap();
        let alg = AlgebraByGenerators::from_hecke(&h).unwrap();
        let m = ModuleRep::one_dimensional(
            &alg,
            &[alg.field().q(), alg.field().q()],
        )
        .unwrap();
        let v = m.to_json();
        assert_eq!(v["dim"], 1);
        assert_eq!(v["generators"][0]["label"], "T1");
        assert_eq!(v["generators"][0]["matrix"][0][0], "z");
    }
}
