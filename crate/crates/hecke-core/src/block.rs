//! The basic algebra of the principal block of H_q(l), built concretely
//! inside the Hecke algebra itself.
//!
//! For each vertex r = 1, ..., l-1 there is an idempotent given by a
//! normalized product of an unsigned and a signed interval sum whose signed
//! part has size r. Arrows between neighbouring vertices are cut out of
//! single basis elements: alpha_r = e_r T_d e_{r+1} for a distinguished
//! double-coset representative d, and beta_r uses the inverse
//! representative. After a rescaling of the betas the arrows satisfy
//! Brauer-line relations: the two loops at every inner vertex agree, the
//! loop at the first vertex squares to zero, and so does the loop at the
//! last one.

use crate::algebra::{HeckeAlgebra, HeckeElement};
use crate::cosets::{margin_of_distinguished, Composition, Interval, MarginMatrix};
use crate::error::{Error, Result};
use crate::field::{quantum_factorial, Field, FieldSpec, Scalar};
use crate::linalg::{Reduction, SpanBuilder, SparseVec};
use crate::perm::Permutation;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sym {
    Unsigned,
    Signed,
}

impl Sym {
    fn other(self) -> Sym {
        match self {
            Sym::Unsigned => Sym::Signed,
            Sym::Signed => Sym::Unsigned,
        }
    }
}

/// A labeled basis element of the corner algebra, tagged with its source
/// and target vertices and its expression as a path in the quiver.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub path: Vec<String>,
    pub element: HeckeElement,
}

/// One arrow of the quiver presentation.
#[derive(Clone, Debug, Serialize)]
pub struct QuiverArrow {
    pub name: String,
    pub from: usize,
    pub to: usize,
    /// One-line notation of the double-coset representative realizing the
    /// arrow inside the Hecke algebra.
    pub representative: Vec<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationTerm {
    pub coeff: String,
    pub path: Vec<String>,
}

/// A linear combination of paths that vanishes in the algebra.
#[derive(Clone, Debug, Serialize)]
pub struct QuiverRelation {
    pub terms: Vec<RelationTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuiverVertex {
    pub index: usize,
    /// Two-part composition of l whose parabolic carries the idempotent.
    pub parts: Vec<usize>,
    /// Which of the two intervals carries the signed sum (1 or 2).
    pub signed_part: usize,
}

/// A quiver with relations presenting the corner algebra, ready for JSON or
/// DOT serialization.
#[derive(Clone, Debug, Serialize)]
pub struct QuiverPresentation {
    pub field: FieldSpec,
    pub l: usize,
    pub dimension: usize,
    pub vertices: Vec<QuiverVertex>,
    pub arrows: Vec<QuiverArrow>,
    pub relations: Vec<QuiverRelation>,
    pub corner_dimensions: Vec<Vec<usize>>,
    /// Scalars applied to beta_2, ..., beta_{l-2} to normalize the loops.
    pub beta_rescales: Vec<String>,
}

impl QuiverPresentation {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph corner_algebra {\n  rankdir=LR;\n");
        for v in &self.vertices {
            out.push_str(&format!("  e{} [shape=circle];\n", v.index));
        }
        for a in &self.arrows {
            out.push_str(&format!("  e{} -> e{} [label=\"{}\"];\n", a.from, a.to, a.name));
        }
        out.push_str("}\n");
        out
    }
}

/// The assembled block data: idempotents, arrows, loops, a full path basis
/// of the corner algebra, and the verified presentation.
pub struct BlockConstruction {
    algebra: HeckeAlgebra,
    l: usize,
    idempotents: Vec<HeckeElement>,
    vertex_parts: Vec<(usize, usize)>,
    vertex_first_kind: Vec<Sym>,
    kappas: Vec<Scalar>,
    kappa_invs: Vec<Scalar>,
    arrow_reps: Vec<Permutation>,
    alphas: Vec<HeckeElement>,
    betas: Vec<HeckeElement>,
    beta_rescales: Vec<Scalar>,
    corner_dims: Vec<Vec<usize>>,
    basis: Vec<BasisElement>,
}

fn vertex_layout(l: usize, r: usize) -> ((usize, usize), Sym) {
    let s = l - r;
    if r % 2 == 1 {
        ((s, r), Sym::Unsigned)
    } else {
        ((r, s), Sym::Signed)
    }
}

fn arrow_rep_formula(l: usize, j: usize) -> Permutation {
    if j % 2 == 0 {
        let r = j;
        let s = l - r;
        let mut images = vec![0usize; l];
        for i in 1..=r {
            images[i - 1] = s - 1 + i;
        }
        for i in r + 1..l {
            images[i - 1] = i - r;
        }
        images[l - 1] = l;
        Permutation::from_images(&images).expect("shift pattern is a bijection")
    } else {
        let r = j + 1;
        let s = l - r;
        let mut images = vec![0usize; l];
        images[0] = 1;
        for i in 2..=r {
            images[i - 1] = s + i;
        }
        for i in r + 1..=l {
            images[i - 1] = i - r + 1;
        }
        Permutation::from_images(&images).expect("shift pattern is a bijection").inverse()
    }
}

/// The scalar c with a = c * b, if a is an exact multiple of b.
fn proportionality(f: &Field, a: &HeckeElement, b: &HeckeElement) -> Option<Scalar> {
    if b.is_zero() {
        return if a.is_zero() { Some(f.one()) } else { None };
    }
    let (&r, coeff) = b.terms().iter().next().expect("nonzero element");
    let c = f.div(&a.coeff_of_rank(r), coeff).ok()?;
    if *a == b.scale(&c) {
        Some(c)
    } else {
        None
    }
}

fn to_sparse(el: &HeckeElement) -> SparseVec {
    el.terms().iter().map(|(r, c)| (*r as usize, c.clone())).collect()
}

/// x * e_r evaluated through the interval chains of the vertex, so the
/// cost is a handful of generator steps rather than a walk over the whole
/// parabolic subgroup.
fn absorb_vertex(
    x: &HeckeElement,
    l: usize,
    parts: (usize, usize),
    first_kind: Sym,
    kappa_inv: &Scalar,
) -> Result<HeckeElement> {
    let i1 = Interval::new(1, parts.0)?;
    let i2 = Interval::new(parts.0 + 1, l)?;
    let y = match first_kind {
        Sym::Unsigned => x.times_x_interval(i1)?,
        Sym::Signed => x.times_y_interval(i1)?,
    };
    let y = match first_kind.other() {
        Sym::Unsigned => y.times_x_interval(i2)?,
        Sym::Signed => y.times_y_interval(i2)?,
    };
    Ok(y.scale(kappa_inv))
}

impl BlockConstruction {
    pub fn build(l: usize, field: Field) -> Result<BlockConstruction> {
        if l < 2 {
            return Err(Error::Construction(format!(
                "the construction needs l >= 2, got {l}"
            )));
        }
        if field.root_order() as usize != l {
            return Err(Error::Construction(format!(
                "field has a root of order {}, expected {l}",
                field.root_order()
            )));
        }
        let h = HeckeAlgebra::new(l, field.clone())?;
        let verts = l - 1;

        // idempotents
        let mut idempotents = Vec::with_capacity(verts);
        let mut vertex_parts = Vec::with_capacity(verts);
        let mut vertex_first_kind = Vec::with_capacity(verts);
        let mut kappas = Vec::with_capacity(verts);
        let mut kappa_invs = Vec::with_capacity(verts);
        for r in 1..=verts {
            let ((p1, p2), k1) = vertex_layout(l, r);
            let i1 = Interval::new(1, p1)?;
            let i2 = Interval::new(p1 + 1, l)?;
            let z1 = match k1 {
                Sym::Unsigned => h.x_interval(i1)?,
                Sym::Signed => h.y_interval(i1)?,
            };
            let z2 = match k1.other() {
                Sym::Unsigned => h.x_interval(i2)?,
                Sym::Signed => h.y_interval(i2)?,
            };
            let z = z1.mul(&z2);
            let z_sq = absorb_vertex(&z, l, (p1, p2), k1, &field.one())?;
            let kappa = proportionality(&field, &z_sq, &z).ok_or_else(|| {
                Error::Construction(format!("squared symmetrizer product at vertex {r} is not a multiple of itself"))
            })?;
            let s = l - r;
            let expected =
                field.mul(&quantum_factorial(&field, s as u32, &field.q()),
                          &quantum_factorial(&field, r as u32, &field.q_inv()));
            if kappa != expected {
                return Err(Error::Construction(format!(
                    "normalizing scalar at vertex {r} is {}, expected {}",
                    field.render(&kappa),
                    field.render(&expected)
                )));
            }
            let c = field.inv(&kappa).map_err(|_| {
                Error::Construction(format!("normalizing scalar at vertex {r} vanishes"))
            })?;
            let eps = z.scale(&c);
            if absorb_vertex(&eps, l, (p1, p2), k1, &c)? != eps {
                return Err(Error::Construction(format!("vertex {r} element is not idempotent")));
            }
            if eps.star() != eps {
                return Err(Error::Construction(format!(
                    "vertex {r} element is not fixed by the star antiautomorphism"
                )));
            }
            idempotents.push(eps);
            vertex_parts.push((p1, p2));
            vertex_first_kind.push(k1);
            kappas.push(kappa);
            kappa_invs.push(c);
        }
        for i in 0..verts {
            for j in 0..verts {
                if i != j
                    && !absorb_vertex(
                        &idempotents[i],
                        l,
                        vertex_parts[j],
                        vertex_first_kind[j],
                        &kappa_invs[j],
                    )?
                    .is_zero()
                {
                    return Err(Error::Construction(format!(
                        "idempotents {} and {} are not orthogonal",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let through = |x: &HeckeElement, i: usize, d: &Permutation, j: usize| -> Result<HeckeElement> {
            let y = absorb_vertex(x, l, vertex_parts[i - 1], vertex_first_kind[i - 1], &kappa_invs[i - 1])?;
            absorb_vertex(
                &y.mul(&h.basis(d)?),
                l,
                vertex_parts[j - 1],
                vertex_first_kind[j - 1],
                &kappa_invs[j - 1],
            )
        };

        // arrows: for each neighbouring pair exactly one double coset
        // survives the idempotent truncation; its minimal representative
        // matches a closed-form shift pattern
        let mut arrow_reps = Vec::new();
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for j in 1..verts {
            let left = vertex_parts[j - 1];
            let right = vertex_parts[j];
            let mut surviving = Vec::new();
            for m in MarginMatrix::all(left, right)? {
                let d = m.permutation();
                let prod = through(&h.one(), j, &d, j + 1)?;
                if !prod.is_zero() {
                    surviving.push((d, prod));
                }
            }
            if surviving.len() != 1 {
                return Err(Error::Construction(format!(
                    "expected exactly one surviving coset from vertex {j} to {}, found {}",
                    j + 1,
                    surviving.len()
                )));
            }
            let (d, alpha) = surviving.pop().expect("one survivor");
            let formula = arrow_rep_formula(l, j);
            if d != formula {
                return Err(Error::Construction(format!(
                    "surviving representative {d} differs from the shift pattern {formula}"
                )));
            }
            margin_of_distinguished(&d, left, right)?;
            let mut back = Vec::new();
            for m in MarginMatrix::all(right, left)? {
                let e = m.permutation();
                let prod = through(&h.one(), j + 1, &e, j)?;
                if !prod.is_zero() {
                    back.push((e, prod));
                }
            }
            if back.len() != 1 {
                return Err(Error::Construction(format!(
                    "expected exactly one surviving coset from vertex {} to {j}, found {}",
                    j + 1,
                    back.len()
                )));
            }
            let (e, beta) = back.pop().expect("one survivor");
            if e != d.inverse() {
                return Err(Error::Construction(format!(
                    "backward representative {e} is not the inverse of {d}"
                )));
            }
            arrow_reps.push(d);
            alphas.push(alpha);
            betas.push(beta);
        }

        // corner dimensions from surviving double cosets
        let mut corner_dims = vec![vec![0usize; verts]; verts];
        for i in 0..verts {
            for j in 0..verts {
                let mut count = 0;
                for m in MarginMatrix::all(vertex_parts[i], vertex_parts[j])? {
                    let d = m.permutation();
                    let prod = through(&h.one(), i + 1, &d, j + 1)?;
                    if !prod.is_zero() {
                        count += 1;
                    }
                }
                corner_dims[i][j] = count;
                let expected = match i.abs_diff(j) {
                    0 => 2,
                    1 => 1,
                    _ => 0,
                };
                if count != expected {
                    return Err(Error::Construction(format!(
                        "corner ({}, {}) has dimension {count}, expected {expected}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }

        // normalize the betas so neighbouring loops match exactly
        let mut beta_rescales = Vec::new();
        for r in 0..verts.saturating_sub(2) {
            let lhs = through(&betas[r], r + 1, &arrow_reps[r], r + 2)?;
            let rhs = through(&alphas[r + 1], r + 3, &arrow_reps[r + 1].inverse(), r + 2)?;
            let a = proportionality(&field, &lhs, &rhs).ok_or_else(|| {
                Error::Construction(format!(
                    "loops at vertex {} are not proportional",
                    r + 2
                ))
            })?;
            if a.is_zero() {
                return Err(Error::Construction(format!(
                    "loop at vertex {} vanishes",
                    r + 2
                )));
            }
            betas[r + 1] = betas[r + 1].scale(&a);
            beta_rescales.push(a);
        }

        // verify the full relation set
        if verts >= 2 {
            for r in 0..verts - 2 {
                let lhs = through(&betas[r], r + 1, &arrow_reps[r], r + 2)?;
                let rhs = through(&alphas[r + 1], r + 3, &arrow_reps[r + 1].inverse(), r + 2)?
                    .scale(&beta_rescales[r]);
                if lhs != rhs {
                    return Err(Error::Construction(format!(
                        "loops at vertex {} differ after rescaling",
                        r + 2
                    )));
                }
            }
            let head = through(&alphas[0], 2, &arrow_reps[0].inverse(), 1)?;
            if !through(&head, 1, &arrow_reps[0], 2)?.is_zero() {
                return Err(Error::Construction(
                    "the loop at the first vertex does not annihilate the first arrow".into(),
                ));
            }
            let tail = through(&betas[verts - 2], verts - 1, &arrow_reps[verts - 2], verts)?;
            // the rescale of the last beta is nonzero, so it cannot affect vanishing
            if !through(&tail, verts, &arrow_reps[verts - 2].inverse(), verts - 1)?.is_zero() {
                return Err(Error::Construction(
                    "the loop at the last vertex does not annihilate the last arrow".into(),
                ));
            }
            for r in 0..verts.saturating_sub(2) {
                if !through(&alphas[r], r + 2, &arrow_reps[r + 1], r + 3)?.is_zero() {
                    return Err(Error::Construction(format!(
                        "forward arrows {} and {} do not compose to zero",
                        r + 1,
                        r + 2
                    )));
                }
                if !through(&betas[r + 1], r + 2, &arrow_reps[r].inverse(), r + 1)?.is_zero() {
                    return Err(Error::Construction(format!(
                        "backward arrows {} and {} do not compose to zero",
                        r + 2,
                        r + 1
                    )));
                }
            }
        }

        let mut block = BlockConstruction {
            algebra: h,
            l,
            idempotents,
            vertex_parts,
            vertex_first_kind,
            kappas,
            kappa_invs,
            arrow_reps,
            alphas,
            betas,
            beta_rescales,
            corner_dims,
            basis: Vec::new(),
        };
        block.basis = block.assemble_basis()?;
        block.check_socle_generator()?;
        Ok(block)
    }

    fn assemble_basis(&self) -> Result<Vec<BasisElement>> {
        let verts = self.l - 1;
        let mut out = Vec::new();
        for r in 1..=verts {
            out.push(BasisElement {
                label: format!("e{r}"),
                source: r,
                target: r,
                path: Vec::new(),
                element: self.idempotents[r - 1].clone(),
            });
        }
        if self.l == 2 {
            out.push(BasisElement {
                label: "x".into(),
                source: 1,
                target: 1,
                path: vec!["x".into()],
                element: self.full_unsigned_sum()?,
            });
        } else {
            for r in 1..verts {
                out.push(BasisElement {
                    label: format!("a{r}"),
                    source: r,
                    target: r + 1,
                    path: vec![format!("a{r}")],
                    element: self.alphas[r - 1].clone(),
                });
            }
            for r in 1..verts {
                out.push(BasisElement {
                    label: format!("b{r}"),
                    source: r + 1,
                    target: r,
                    path: vec![format!("b{r}")],
                    element: self.betas[r - 1].clone(),
                });
            }
            for r in 1..verts {
                out.push(BasisElement {
                    label: format!("a{r}*b{r}"),
                    source: r,
                    target: r,
                    path: vec![format!("a{r}"), format!("b{r}")],
                    element: self.times_beta(&self.alphas[r - 1], r)?,
                });
            }
            let top = verts - 1;
            out.push(BasisElement {
                label: format!("b{top}*a{top}"),
                source: verts,
                target: verts,
                path: vec![format!("b{top}"), format!("a{top}")],
                element: self.times_alpha(&self.betas[top - 1], top)?,
            });
        }
        let expected = 4 * (self.l - 1) - 2;
        if out.len() != expected {
            return Err(Error::Construction(format!(
                "path basis has {} members, expected {expected}",
                out.len()
            )));
        }
        let mut span = SpanBuilder::new(self.algebra.field().clone());
        for b in &out {
            match span.insert(to_sparse(&b.element)) {
                Reduction::Independent { .. } => {}
                Reduction::Dependent { .. } => {
                    return Err(Error::Construction(format!(
                        "path basis member {} is dependent on earlier members",
                        b.label
                    )));
                }
            }
        }
        let total: usize = self.corner_dims.iter().flatten().sum();
        if span.dim() != total {
            return Err(Error::Construction(format!(
                "path basis spans dimension {}, corners add up to {total}",
                span.dim()
            )));
        }
        Ok(out)
    }

    /// The unsigned sum over the whole symmetric group; it generates the
    /// socle of the first corner.
    pub fn full_unsigned_sum(&self) -> Result<HeckeElement> {
        self.algebra.x_interval(Interval::new(1, self.l)?)
    }

    fn check_socle_generator(&self) -> Result<()> {
        let x = self.full_unsigned_sum()?;
        let e1 = &self.idempotents[0];
        if self.absorb_right(&self.absorb_left(&x, 1)?, 1)? != x {
            return Err(Error::Construction(
                "the full unsigned sum is not fixed by the first corner".into(),
            ));
        }
        if !x.times_x_interval(Interval::new(1, self.l)?)?.is_zero() {
            return Err(Error::Construction("the full unsigned sum is not nilpotent".into()));
        }
        let mut span = SpanBuilder::new(self.algebra.field().clone());
        span.insert(to_sparse(e1));
        span.insert(to_sparse(&x));
        if span.dim() != 2 {
            return Err(Error::Construction(
                "the first corner does not contain two independent members".into(),
            ));
        }
        if self.l >= 3 {
            let loop1 = self.times_beta(&self.alphas[0], 1)?;
            if !span.contains(&to_sparse(&loop1)) {
                return Err(Error::Construction(
                    "the loop at the first vertex leaves the first corner span".into(),
                ));
            }
            if !self.times_alpha(&x, 1)?.is_zero() {
                return Err(Error::Construction(
                    "the full unsigned sum does not annihilate the first arrow".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn vertex_count(&self) -> usize {
        self.l - 1
    }

    pub fn idempotent(&self, r: usize) -> &HeckeElement {
        &self.idempotents[r - 1]
    }

    pub fn idempotents(&self) -> &[HeckeElement] {
        &self.idempotents
    }

    pub fn alpha(&self, r: usize) -> &HeckeElement {
        &self.alphas[r - 1]
    }

    pub fn beta(&self, r: usize) -> &HeckeElement {
        &self.betas[r - 1]
    }

    pub fn alphas(&self) -> &[HeckeElement] {
        &self.alphas
    }

    pub fn betas(&self) -> &[HeckeElement] {
        &self.betas
    }

    pub fn arrow_representative(&self, r: usize) -> &Permutation {
        &self.arrow_reps[r - 1]
    }

    pub fn kappa(&self, r: usize) -> &Scalar {
        &self.kappas[r - 1]
    }

    fn absorb_idx(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        if r == 0 || r > self.idempotents.len() {
            return Err(Error::IndexOutOfRange(r));
        }
        absorb_vertex(
            x,
            self.l,
            self.vertex_parts[r - 1],
            self.vertex_first_kind[r - 1],
            &self.kappa_invs[r - 1],
        )
    }

    fn through_idx(
        &self,
        x: &HeckeElement,
        i: usize,
        d: &Permutation,
        j: usize,
    ) -> Result<HeckeElement> {
        let y = self.absorb_idx(x, i)?;
        self.absorb_idx(&y.mul(&self.algebra.basis(d)?), j)
    }

    /// x e_r without forming the full product: the two interval sums of
    /// the vertex are pushed in one point at a time.
    pub fn absorb_right(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        self.absorb_idx(x, r)
    }

    /// e_r x, star-conjugate of `absorb_right` (the idempotents are star
    /// fixed, which `build` checks).
    pub fn absorb_left(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        Ok(self.absorb_idx(&x.star(), r)?.star())
    }

    /// x alpha_r evaluated through the factorized arrow.
    pub fn times_alpha(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        if r == 0 || r > self.arrow_reps.len() {
            return Err(Error::IndexOutOfRange(r));
        }
        self.through_idx(x, r, &self.arrow_reps[r - 1], r + 1)
    }

    /// x beta_r evaluated through the factorized arrow, rescales included.
    pub fn times_beta(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        if r == 0 || r > self.arrow_reps.len() {
            return Err(Error::IndexOutOfRange(r));
        }
        let s = if r == 1 {
            self.algebra.field().one()
        } else {
            self.beta_rescales[r - 2].clone()
        };
        Ok(self
            .through_idx(x, r + 1, &self.arrow_reps[r - 1].inverse(), r)?
            .scale(&s))
    }

    /// alpha_r x, the arrow acting from the left.
    pub fn left_times_alpha(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        if r == 0 || r > self.arrow_reps.len() {
            return Err(Error::IndexOutOfRange(r));
        }
        let y = self.absorb_left(x, r + 1)?;
        let y = self.algebra.basis(&self.arrow_reps[r - 1])?.mul(&y);
        self.absorb_left(&y, r)
    }

    /// beta_r x, the arrow acting from the left, rescales included.
    pub fn left_times_beta(&self, x: &HeckeElement, r: usize) -> Result<HeckeElement> {
        if r == 0 || r > self.arrow_reps.len() {
            return Err(Error::IndexOutOfRange(r));
        }
        let s = if r == 1 {
            self.algebra.field().one()
        } else {
            self.beta_rescales[r - 2].clone()
        };
        let y = self.absorb_left(x, r)?;
        let y = self.algebra.basis(&self.arrow_reps[r - 1].inverse())?.mul(&y);
        Ok(self.absorb_left(&y, r + 1)?.scale(&s))
    }

    pub fn beta_rescales(&self) -> &[Scalar] {
        &self.beta_rescales
    }

    pub fn corner_dimensions(&self) -> &[Vec<usize>] {
        &self.corner_dims
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Two-part composition attached to a vertex.
    pub fn vertex_composition(&self, r: usize) -> Composition {
        let (a, b) = self.vertex_parts[r - 1];
        Composition::new(vec![a, b])
    }

    /// 1 if the first interval of the vertex carries the signed sum, else 2.
    pub fn signed_part_index(&self, r: usize) -> usize {
        match self.vertex_first_kind[r - 1] {
            Sym::Signed => 1,
            Sym::Unsigned => 2,
        }
    }

    /// The product of interval sums carried to the right of T_d when the
    /// vertex idempotent is pushed through it: for each of the four image
    /// intervals of the double-coset split, an unsigned or signed sum
    /// matching the kind of the originating side.
    pub fn nu_element(&self, left_vertex: usize, right_vertex: usize, d: &Permutation) -> Result<HeckeElement> {
        let (m, kinds) = self.nu_split(left_vertex, right_vertex, d)?;
        let sp = m.split();
        let mut acc = self.algebra.one();
        for (iv, kind) in sp.image.iter().zip(kinds.iter()) {
            if iv.is_empty() {
                continue;
            }
            acc = match kind {
                Sym::Unsigned => acc.times_x_interval(*iv)?,
                Sym::Signed => acc.times_y_interval(*iv)?,
            };
        }
        Ok(acc)
    }

    fn nu_split(&self, left_vertex: usize, right_vertex: usize, d: &Permutation) -> Result<(MarginMatrix, [Sym; 4])> {
        let left = self.vertex_parts[left_vertex - 1];
        let right = self.vertex_parts[right_vertex - 1];
        let m = margin_of_distinguished(d, left, right)?;
        let k1 = self.vertex_first_kind[left_vertex - 1];
        let k2 = k1.other();
        Ok((m, [k1, k1, k2, k2]))
    }

    /// Factors e_{left} T_d as F * T_d * Z with Z the image-side interval
    /// product from `nu_element` and F a combination of distinguished coset
    /// sums on the domain side.
    pub fn coset_factorization(
        &self,
        left_vertex: usize,
        right_vertex: usize,
        d: &Permutation,
    ) -> Result<(HeckeElement, HeckeElement)> {
        let (m, kinds) = self.nu_split(left_vertex, right_vertex, d)?;
        let sp = m.split();
        let (p1, _) = self.vertex_parts[left_vertex - 1];
        let i1 = Interval::new(1, p1)?;
        let i2 = Interval::new(p1 + 1, self.l)?;
        let f1 = self
            .algebra
            .distinguished_sum(i1, &[sp.domain[0].len(), sp.domain[1].len()], kinds[0] == Sym::Signed)?
            .star();
        let f2 = self
            .algebra
            .distinguished_sum(i2, &[sp.domain[2].len(), sp.domain[3].len()], kinds[2] == Sym::Signed)?
            .star();
        let c = self
            .algebra
            .field()
            .inv(&self.kappas[left_vertex - 1])
            .expect("normalizing scalars are invertible");
        let prefactor = f1.mul(&f2).scale(&c);
        let z = self.nu_element(left_vertex, right_vertex, d)?;
        Ok((prefactor, z))
    }

    /// Evaluates a path (a list of arrow names) as a product in the Hecke
    /// algebra. Consecutive segments meeting at a common vertex are pushed
    /// through the factorized arrows; anything else falls back to a plain
    /// product of the stored elements.
    pub fn eval_path(&self, path: &[String]) -> Result<HeckeElement> {
        enum Seg {
            Vertex(usize),
            Alpha(usize),
            Beta(usize),
            Nil,
        }
        let verts = self.l - 1;
        let mut acc: Option<(HeckeElement, usize)> = None;
        for name in path {
            let seg = if name == "x" && self.l == 2 {
                Seg::Nil
            } else if let Some(idx) = name.strip_prefix('a').and_then(|s| s.parse::<usize>().ok()) {
                if idx == 0 || idx >= verts {
                    return Err(Error::Parse(format!("unknown arrow {name}")));
                }
                Seg::Alpha(idx)
            } else if let Some(idx) = name.strip_prefix('b').and_then(|s| s.parse::<usize>().ok()) {
                if idx == 0 || idx >= verts {
                    return Err(Error::Parse(format!("unknown arrow {name}")));
                }
                Seg::Beta(idx)
            } else if let Some(idx) = name.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
                if idx == 0 || idx > verts {
                    return Err(Error::Parse(format!("unknown vertex {name}")));
                }
                Seg::Vertex(idx)
            } else {
                return Err(Error::Parse(format!("unknown path segment {name}")));
            };
            let tgt = match seg {
                Seg::Vertex(r) => r,
                Seg::Alpha(r) => r + 1,
                Seg::Beta(r) => r,
                Seg::Nil => 1,
            };
            acc = Some(match acc {
                None => {
                    let el = match seg {
                        Seg::Vertex(r) => self.idempotents[r - 1].clone(),
                        Seg::Alpha(r) => self.alphas[r - 1].clone(),
                        Seg::Beta(r) => self.betas[r - 1].clone(),
                        Seg::Nil => self.full_unsigned_sum()?,
                    };
                    (el, tgt)
                }
                Some((prev, pt)) => {
                    let v = match seg {
                        // prev ends in e_pt, so a matching idempotent is
                        // absorbed for free
                        Seg::Vertex(r) if r == pt => prev,
                        Seg::Vertex(r) => self.absorb_right(&prev, r)?,
                        Seg::Alpha(r) => self.times_alpha(&prev, r)?,
                        Seg::Beta(r) => self.times_beta(&prev, r)?,
                        Seg::Nil => prev.times_x_interval(Interval::new(1, self.l)?)?,
                    };
                    (v, tgt)
                }
            });
        }
        acc.map(|(v, _)| v).ok_or_else(|| Error::Parse("empty path".into()))
    }

    pub fn presentation(&self) -> QuiverPresentation {
        let verts = self.l - 1;
        let vertices = (1..=verts)
            .map(|r| {
                let (a, b) = self.vertex_parts[r - 1];
                QuiverVertex { index: r, parts: vec![a, b], signed_part: self.signed_part_index(r) }
            })
            .collect();
        let arrows = if self.l == 2 {
            vec![QuiverArrow {
                name: "x".into(),
                from: 1,
                to: 1,
                representative: Permutation::longest(2).images().to_vec(),
            }]
        } else {
            let mut out = Vec::new();
            for r in 1..verts {
                out.push(QuiverArrow {
                    name: format!("a{r}"),
                    from: r,
                    to: r + 1,
                    representative: self.arrow_reps[r - 1].images().to_vec(),
                });
            }
            for r in 1..verts {
                out.push(QuiverArrow {
                    name: format!("b{r}"),
                    from: r + 1,
                    to: r,
                    representative: self.arrow_reps[r - 1].inverse().images().to_vec(),
                });
            }
            out
        };
        let mut relations = Vec::new();
        if self.l == 2 {
            relations.push(QuiverRelation {
                terms: vec![RelationTerm { coeff: "1".into(), path: vec!["x".into(), "x".into()] }],
            });
        } else {
            for i in 1..=verts.saturating_sub(2) {
                relations.push(QuiverRelation {
                    terms: vec![
                        RelationTerm {
                            coeff: "1".into(),
                            path: vec![format!("b{i}"), format!("a{i}")],
                        },
                        RelationTerm {
                            coeff: "-1".into(),
                            path: vec![format!("a{}", i + 1), format!("b{}", i + 1)],
                        },
                    ],
                });
            }
            relations.push(QuiverRelation {
                terms: vec![RelationTerm {
                    coeff: "1".into(),
                    path: vec!["a1".into(), "b1".into(), "a1".into()],
                }],
            });
            let t = verts - 1;
            relations.push(QuiverRelation {
                terms: vec![RelationTerm {
                    coeff: "1".into(),
                    path: vec![format!("b{t}"), format!("a{t}"), format!("b{t}")],
                }],
            });
        }
        QuiverPresentation {
            field: self.algebra.field().spec(),
            l: self.l,
            dimension: self.dimension(),
            vertices,
            arrows,
            relations,
            corner_dimensions: self.corner_dims.clone(),
            beta_rescales: self.beta_rescales.iter().map(|s| self.algebra.field().render(s)).collect(),
        }
    }

    /// Evaluates every exported relation, returning the largest support size
    /// seen; all must vanish.
    pub fn verify_relations(&self) -> Result<()> {
        let f = self.algebra.field();
        for rel in self.presentation().relations {
            let mut acc = self.algebra.zero();
            for term in &rel.terms {
                let c = f.parse(&term.coeff)?;
                acc = acc.add(&self.eval_path(&term.path)?.scale(&c));
            }
            if !acc.is_zero() {
                return Err(Error::Construction(format!(
                    "relation {:?} does not vanish",
                    rel.terms.iter().map(|t| t.path.join("*")).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorized_products_match_plain_products() {
        for field in [Field::cyclotomic(3).unwrap(), Field::finite(5, 1, 4).unwrap()] {
            let l = field.root_order() as usize;
            let b = BlockConstruction::build(l, field).unwrap();
            for p in b.basis() {
                for r in 1..=b.vertex_count() {
                    assert_eq!(
                        b.absorb_right(&p.element, r).unwrap(),
                        p.element.mul(b.idempotent(r))
                    );
                    assert_eq!(
                        b.absorb_left(&p.element, r).unwrap(),
                        b.idempotent(r).mul(&p.element)
                    );
                }
                for r in 1..b.vertex_count() {
                    assert_eq!(b.times_alpha(&p.element, r).unwrap(), p.element.mul(b.alpha(r)));
                    assert_eq!(b.times_beta(&p.element, r).unwrap(), p.element.mul(b.beta(r)));
                    assert_eq!(
                        b.left_times_alpha(&p.element, r).unwrap(),
                        b.alpha(r).mul(&p.element)
                    );
                    assert_eq!(
                        b.left_times_beta(&p.element, r).unwrap(),
                        b.beta(r).mul(&p.element)
                    );
                }
            }
        }
    }

    #[test]
    fn three_vertex_chain_over_both_backends() {
        for field in [Field::cyclotomic(3).unwrap(), Field::finite(2, 2, 3).unwrap()] {
            let b = BlockConstruction::build(3, field).unwrap();
            assert_eq!(b.corner_dimensions(), &[vec![2, 1], vec![1, 2]]);
            assert_eq!(b.dimension(), 6);
            // both idempotents sum to the identity here
            let sum = b.idempotent(1).add(b.idempotent(2));
            assert_eq!(sum, b.algebra().one());
            // the first arrow is carried by the simple reflection swapping 2, 3
            assert_eq!(b.arrow_representative(1), &Permutation::from_images(&[1, 3, 2]).unwrap());
            let t2 = b.algebra().generator(2).unwrap();
            let direct = b.idempotent(1).mul(&t2).mul(b.idempotent(2));
            assert_eq!(&direct, b.alpha(1));
            b.verify_relations().unwrap();
        }
    }

    #[test]
    fn four_vertex_chain_frozen_representatives() {
        let b = BlockConstruction::build(4, Field::cyclotomic(4).unwrap()).unwrap();
        assert_eq!(
            b.corner_dimensions(),
            &[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]
        );
        assert_eq!(b.dimension(), 10);
        assert_eq!(b.arrow_representative(1), &Permutation::from_images(&[1, 3, 4, 2]).unwrap());
        assert_eq!(b.arrow_representative(2), &Permutation::from_images(&[2, 3, 1, 4]).unwrap());
        assert_eq!(b.beta_rescales().len(), 1);
        b.verify_relations().unwrap();
        // straight composites vanish even though they are not exported
        assert!(b.alpha(1).mul(b.alpha(2)).is_zero());
        assert!(b.beta(2).mul(b.beta(1)).is_zero());
        // loops do not vanish
        assert!(!b.alpha(1).mul(b.beta(1)).is_zero());
        assert!(!b.beta(2).mul(b.alpha(2)).is_zero());
    }

    #[test]
    fn five_vertex_chain_dimensions() {
        let b = BlockConstruction::build(5, Field::cyclotomic(5).unwrap()).unwrap();
        assert_eq!(b.dimension(), 14);
        for i in 0..4usize {
            for j in 0..4usize {
                let expected = match i.abs_diff(j) {
                    0 => 2,
                    1 => 1,
                    _ => 0,
                };
                assert_eq!(b.corner_dimensions()[i][j], expected);
            }
        }
        b.verify_relations().unwrap();
    }

    #[test]
    fn degenerate_two_point_case() {
        let b = BlockConstruction::build(2, Field::cyclotomic(2).unwrap()).unwrap();
        assert_eq!(b.dimension(), 2);
        assert_eq!(b.corner_dimensions(), &[vec![2]]);
        let x = b.full_unsigned_sum().unwrap();
        assert!(x.mul(&x).is_zero());
        b.verify_relations().unwrap();
        let p = b.presentation();
        assert_eq!(p.arrows.len(), 1);
        assert_eq!(p.relations.len(), 1);
    }

    #[test]
    fn factorization_through_cosets() {
        let b = BlockConstruction::build(4, Field::cyclotomic(4).unwrap()).unwrap();
        let h = b.algebra().clone();
        for (i, j) in [(1usize, 2usize), (2, 1), (2, 3), (2, 2), (1, 1)] {
            let left = (b.vertex_composition(i).parts()[0], b.vertex_composition(i).parts()[1]);
            let right = (b.vertex_composition(j).parts()[0], b.vertex_composition(j).parts()[1]);
            for m in MarginMatrix::all(left, right).unwrap() {
                let d = m.permutation();
                let (pre, z) = b.coset_factorization(i, j, &d).unwrap();
                let td = h.basis(&d).unwrap();
                let lhs = b.idempotent(i).mul(&td);
                let rhs = pre.mul(&td).mul(&z);
                assert_eq!(lhs, rhs, "i={i}, j={j}, d={d}");
            }
        }
    }

    #[test]
    fn vanishing_matches_the_image_side_product() {
        let b = BlockConstruction::build(4, Field::cyclotomic(4).unwrap()).unwrap();
        let h = b.algebra().clone();
        for i in 1..=3usize {
            for j in 1..=3usize {
                let left = (b.vertex_composition(i).parts()[0], b.vertex_composition(i).parts()[1]);
                let right = (b.vertex_composition(j).parts()[0], b.vertex_composition(j).parts()[1]);
                for m in MarginMatrix::all(left, right).unwrap() {
                    let d = m.permutation();
                    let full = b.idempotent(i).mul(&h.basis(&d).unwrap()).mul(b.idempotent(j));
                    let z = b.nu_element(i, j, &d).unwrap();
                    let reduced = z.mul(b.idempotent(j));
                    assert_eq!(full.is_zero(), reduced.is_zero(), "i={i}, j={j}, d={d}");
                }
            }
        }
    }

    #[test]
    fn presentation_serializes_deterministically() {
        let b = BlockConstruction::build(3, Field::cyclotomic(3).unwrap()).unwrap();
        let p = b.presentation();
        let one = serde_json::to_string(&p).unwrap();
        let two = serde_json::to_string(&b.presentation()).unwrap();
        assert_eq!(one, two);
        assert!(one.contains("\"a1\""));
        assert!(one.contains("\"b1\""));
        let dot = p.to_dot();
        assert!(dot.contains("e1 -> e2"));
        assert!(dot.contains("label=\"b1\""));
    }
}
