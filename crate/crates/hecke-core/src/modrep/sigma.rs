//! The distinguished nilpotent element of the basic block algebra: a
//! weighted sum of all arrows whose square spans the socle and whose cube
//! vanishes, together with the projectivity test it supports and Jordan
//! type computations for its action on modules.

use crate::algebra::{HeckeAlgebra, HeckeElement};
use crate::block::BlockConstruction;
use crate::cosets::{embed_in_interval, Interval};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, SparseMatrix};
use crate::modrep::genalg::{AlgebraHandle, GenPoly, ModuleRep};

pub struct SigmaData {
    scalars: Vec<Scalar>,
    sigma: HeckeElement,
    sigma_squared: HeckeElement,
}

impl SigmaData {
    pub fn scalars(&self) -> &[Scalar] {
        &self.scalars
    }

    pub fn sigma(&self) -> &HeckeElement {
        &self.sigma
    }

    pub fn sigma_squared(&self) -> &HeckeElement {
        &self.sigma_squared
    }
}

/// Weights for the backward arrows: all ones away from characteristic two,
/// and alternating 1, q in characteristic two so that consecutive weights
/// never sum to zero.
pub fn default_sigma_scalars(field: &Field, l: usize) -> Vec<Scalar> {
    (1..l - 1)
        .map(|r| {
            if field.characteristic() == 2 && r % 2 == 0 {
                field.q()
            } else {
                field.one()
            }
        })
        .collect()
}

/// Builds the element and verifies every property the projectivity test
/// relies on: the square has the expected expansion through the loops, is
/// nonzero in every corner, kills all arrows, and the cube vanishes.
pub fn build_sigma(block: &BlockConstruction, scalars: Option<Vec<Scalar>>) -> Result<SigmaData> {
    let l = block.l();
    let h = block.algebra();
    let f = h.field();
    if l < 3 {
        return Err(Error::Unsupported(
            "the nilpotent sum of arrows needs at least two vertices".into(),
        ));
    }
    let scalars = scalars.unwrap_or_else(|| default_sigma_scalars(f, l));
    if scalars.len() != l - 2 {
        return Err(Error::Construction(format!(
            "expected {} arrow weights, got {}",
            l - 2,
            scalars.len()
        )));
    }
    for (i, c) in scalars.iter().enumerate() {
        if c.is_zero() {
            return Err(Error::Construction(format!("arrow weight {} is zero", i + 1)));
        }
        if i + 1 < scalars.len() && f.add(c, &scalars[i + 1]).is_zero() {
            return Err(Error::Construction(format!(
                "arrow weights {} and {} sum to zero",
                i + 1,
                i + 2
            )));
        }
    }
    let times_alpha_sum = |x: &HeckeElement| -> Result<HeckeElement> {
        let mut acc = h.zero();
        for r in 1..l - 1 {
            acc = acc.add(&block.times_alpha(x, r)?);
        }
        Ok(acc)
    };
    let times_beta_sum = |x: &HeckeElement| -> Result<HeckeElement> {
        let mut acc = h.zero();
        for r in 1..l - 1 {
            acc = acc.add(&block.times_beta(x, r)?.scale(&scalars[r - 1]));
        }
        Ok(acc)
    };
    let mut alpha_tilde = h.zero();
    let mut beta_tilde = h.zero();
    for r in 1..l - 1 {
        alpha_tilde = alpha_tilde.add(block.alpha(r));
        beta_tilde = beta_tilde.add(&block.beta(r).scale(&scalars[r - 1]));
    }
    if !times_alpha_sum(&alpha_tilde)?.is_zero() || !times_beta_sum(&beta_tilde)?.is_zero() {
        return Err(Error::Construction(
            "the one-directional arrow sums do not square to zero".into(),
        ));
    }
    let sigma = alpha_tilde.add(&beta_tilde);
    let sigma_squared = times_alpha_sum(&sigma)?.add(&times_beta_sum(&sigma)?);
    let c = |r: usize| &scalars[r - 1];
    let mut expected = block.times_beta(block.alpha(1), 1)?.scale(c(1));
    for k in 2..=l - 2 {
        let w = f.add(c(k - 1), c(k));
        expected = expected.add(&block.times_beta(block.alpha(k), k)?.scale(&w));
    }
    expected =
        expected.add(&block.times_alpha(block.beta(l - 2), l - 2)?.scale(c(l - 2)));
    if !sigma_squared.sub(&expected).is_zero() {
        return Err(Error::Construction(
            "the squared element does not expand through the loops as intended".into(),
        ));
    }
    if sigma_squared.is_zero() {
        return Err(Error::Construction("the squared element vanishes".into()));
    }
    for r in 1..l {
        let corner = block.absorb_right(&block.absorb_left(&sigma_squared, r)?, r)?;
        if corner.is_zero() {
            return Err(Error::Construction(format!(
                "the squared element vanishes in corner {r}"
            )));
        }
    }
    for r in 1..l - 1 {
        let kills_right = block.times_alpha(&sigma_squared, r)?.is_zero()
            && block.times_beta(&sigma_squared, r)?.is_zero();
        let kills_left = block.left_times_alpha(&sigma_squared, r)?.is_zero()
            && block.left_times_beta(&sigma_squared, r)?.is_zero();
        if !kills_right || !kills_left {
            return Err(Error::Construction(
                "the squared element does not annihilate the arrows".into(),
            ));
        }
    }
    if !times_alpha_sum(&sigma_squared)?
        .add(&times_beta_sum(&sigma_squared)?)
        .is_zero()
    {
        return Err(Error::Construction("the cube does not vanish".into()));
    }
    Ok(SigmaData { scalars, sigma, sigma_squared })
}

/// The same element written as a polynomial in the generators of a
/// presented algebra, for the chosen tensor factor.
pub fn sigma_poly(alg: &AlgebraHandle, scalars: &[Scalar], factor: usize) -> Result<GenPoly> {
    if factor < 1 || factor > alg.tensor_factors() {
        return Err(Error::IndexOutOfRange(factor));
    }
    let suffix = if alg.tensor_factors() > 1 { format!("@{factor}") } else { String::new() };
    let f = alg.field();
    let mut poly: GenPoly = Vec::new();
    let mut r = 1;
    loop {
        let Some(a) = alg.generator_index(&format!("a{r}{suffix}")) else { break };
        let b = alg
            .generator_index(&format!("b{r}{suffix}"))
            .ok_or_else(|| Error::Construction(format!("missing backward arrow {r}")))?;
        if r > scalars.len() {
            return Err(Error::Construction("fewer weights than arrows".into()));
        }
        poly.push((f.one(), vec![a]));
        poly.push((scalars[r - 1].clone(), vec![b]));
        r += 1;
    }
    if poly.is_empty() {
        return Err(Error::Construction(format!(
            "algebra {} has no arrow generators",
            alg.label()
        )));
    }
    if r - 1 != scalars.len() {
        return Err(Error::Construction("more weights than arrows".into()));
    }
    Ok(poly)
}

/// Whether the module survives the squared product of the per-factor
/// nilpotent elements. For an indecomposable module this decides
/// projectivity; in general it detects a projective direct summand.
pub fn annihilator_projectivity_test(m: &ModuleRep, scalars: &[Scalar]) -> Result<bool> {
    let alg = m.algebra();
    let f = alg.field();
    let mut total = SparseMatrix::identity(m.dim(), f);
    for factor in 1..=alg.tensor_factors() {
        let poly = sigma_poly(alg, scalars, factor)?;
        total = total.mul(f, &m.poly_action(&poly));
    }
    let squared = total.mul(f, &total);
    Ok(!squared.is_zero())
}

/// Jordan type of the nilpotent action the polynomial induces on the
/// module, as a weakly decreasing partition of the dimension.
pub fn jordan_type_of_action(m: &ModuleRep, poly: &GenPoly) -> Result<Vec<usize>> {
    let f = m.algebra().field();
    let mat = m.poly_action(poly).to_dense(f);
    linalg::jordan_type(f, &mat)
}

/// Jordan type of the nilpotent element acting on a module over the
/// single-factor block algebra.
pub fn sigma_jordan_type(m: &ModuleRep, scalars: &[Scalar]) -> Result<Vec<usize>> {
    if m.algebra().tensor_factors() != 1 {
        return Err(Error::Unsupported(
            "the Jordan type criterion applies to a single factor".into(),
        ));
    }
    let poly = sigma_poly(m.algebra(), scalars, 1)?;
    jordan_type_of_action(m, &poly)
}

/// Transports the element into a larger Hecke algebra by renumbering the
/// strands into the given interval. Reduced words stay inside one parabolic
/// factor, so this is an algebra embedding on the span it touches.
pub fn embedded_sigma(h: &HeckeAlgebra, interval: Interval, sd: &SigmaData) -> Result<HeckeElement> {
    let small = sd.sigma.algebra();
    if interval.len() != small.n() {
        return Err(Error::DegreeMismatch(interval.len(), small.n()));
    }
    if interval.hi > h.n() {
        return Err(Error::IndexOutOfRange(interval.hi));
    }
    if h.field() != small.field() {
        return Err(Error::ContextMismatch);
    }
    let mut terms = Vec::new();
    for (rank, c) in sd.sigma.terms() {
        let w = embed_in_interval(h.n(), interval, small.permutation(*rank));
        terms.push((h.rank_of(&w)?, c.clone()));
    }
    Ok(h.from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::modrep::genalg::AlgebraByGenerators;

    fn block_algebra(l: usize, field: Field) -> (BlockConstruction, AlgebraHandle) {
        let b = BlockConstruction::build(l, field).unwrap();
        let alg = AlgebraByGenerators::from_block(&b).unwrap();
        (b, alg)
    }

    fn corner_poly(alg: &AlgebraHandle, r: usize) -> GenPoly {
        let f = alg.field();
        vec![(f.one(), vec![alg.generator_index(&format!("e{r}")).unwrap()])]
    }

    #[test]
    fn construction_verifies_its_own_identities() {
        for field in [Field::cyclotomic(3).unwrap(), Field::finite(2, 2, 3).unwrap()] {
            let b = BlockConstruction::build(3, field).unwrap();
            let sd = build_sigma(&b, None).unwrap();
            assert_eq!(sd.scalars().len(), 1);
        }
        for (l, field) in [(5usize, Field::finite(11, 1, 5).unwrap()), (5, Field::finite(2, 4, 5).unwrap())]
        {
            let b = BlockConstruction::build(l, field).unwrap();
            let sd = build_sigma(&b, None).unwrap();
            assert_eq!(sd.scalars().len(), 3);
        }
    }

    #[test]
    fn characteristic_two_weights_alternate() {
        let f = Field::finite(2, 4, 5).unwrap();
        let w = default_sigma_scalars(&f, 5);
        assert_eq!(w, vec![f.one(), f.q(), f.one()]);
        let f3 = Field::cyclotomic(4).unwrap();
        assert_eq!(default_sigma_scalars(&f3, 4), vec![f3.one(), f3.one()]);
    }

    #[test]
    fn two_vertex_case_is_rejected() {
        let b = BlockConstruction::build(2, Field::cyclotomic(2).unwrap()).unwrap();
        assert!(matches!(build_sigma(&b, None), Err(Error::Unsupported(_))));
    }

    #[test]
    fn jordan_types_are_frozen() {
        let (b3, alg3) = block_algebra(3, Field::cyclotomic(3).unwrap());
        let sd3 = build_sigma(&b3, None).unwrap();
        let m3 = ModuleRep::regular(&alg3);
        assert_eq!(sigma_jordan_type(&m3, sd3.scalars()).unwrap(), vec![3, 3]);

        let (b4, alg4) = block_algebra(4, Field::cyclotomic(4).unwrap());
        let sd4 = build_sigma(&b4, None).unwrap();
        let m4 = ModuleRep::regular(&alg4);
        assert_eq!(sigma_jordan_type(&m4, sd4.scalars()).unwrap(), vec![3, 3, 3, 1]);
        let p2 = ModuleRep::right_ideal(&alg4, &corner_poly(&alg4, 2)).unwrap();
        assert_eq!(p2.dim(), 4);
        assert_eq!(sigma_jordan_type(&p2, sd4.scalars()).unwrap(), vec![3, 1]);

        let (b5, alg5) = block_algebra(5, Field::finite(2, 4, 5).unwrap());
        let sd5 = build_sigma(&b5, None).unwrap();
        let m5 = ModuleRep::regular(&alg5);
        assert_eq!(sigma_jordan_type(&m5, sd5.scalars()).unwrap(), vec![3, 3, 3, 3, 1, 1]);
        let expected: [(usize, &[usize]); 4] =
            [(1, &[3]), (2, &[3, 1]), (3, &[3, 1]), (4, &[3])];
        for (r, jt) in expected {
            let p = ModuleRep::right_ideal(&alg5, &corner_poly(&alg5, r)).unwrap();
            assert_eq!(sigma_jordan_type(&p, sd5.scalars()).unwrap(), jt);
        }
    }

    #[test]
    fn finite_field_jordan_types_match() {
        let (b, alg) = block_algebra(3, Field::finite(2, 2, 3).unwrap());
        let sd = build_sigma(&b, None).unwrap();
        let m = ModuleRep::regular(&alg);
        assert_eq!(sigma_jordan_type(&m, sd.scalars()).unwrap(), vec![3, 3]);
    }

    #[test]
    fn annihilator_test_separates_free_from_simple() {
        let (b, alg) = block_algebra(4, Field::finite(5, 1, 4).unwrap());
        let sd = build_sigma(&b, None).unwrap();
        let m = ModuleRep::regular(&alg);
        assert!(annihilator_projectivity_test(&m, sd.scalars()).unwrap());
        let f = alg.field().clone();
        for vertex in 1..=3usize {
            let values: Vec<Scalar> = alg
                .generator_labels()
                .iter()
                .map(|l| if *l == format!("e{vertex}") { f.one() } else { f.zero() })
                .collect();
            let s = ModuleRep::one_dimensional(&alg, &values).unwrap();
            assert!(!annihilator_projectivity_test(&s, sd.scalars()).unwrap());
        }
    }

    #[test]
    fn embedded_copies_commute_and_cube_to_zero() {
        let field = Field::finite(2, 2, 3).unwrap();
        let b = BlockConstruction::build(3, field.clone()).unwrap();
        let sd = build_sigma(&b, None).unwrap();
        let h6 = HeckeAlgebra::new(6, field).unwrap();
        let s1 = embedded_sigma(&h6, Interval::new(1, 3).unwrap(), &sd).unwrap();
        let s2 = embedded_sigma(&h6, Interval::new(4, 6).unwrap(), &sd).unwrap();
        assert!(s1.mul(&s2).sub(&s2.mul(&s1)).is_zero());
        let s1sq = s1.mul(&s1);
        assert!(!s1sq.is_zero());
        assert!(s1sq.mul(&s1).is_zero());
        let s2cube = s2.mul(&s2).mul(&s2);
        assert!(s2cube.is_zero());
    }
}
