//! Modules induced from the index-one representation of a parabolic
//! subalgebra, their one-dimensional homomorphism spaces, and the scripted
//! demonstration that restriction to the parabolic can see projectivity
//! that is invisible over the whole algebra.

use crate::algebra::HeckeAlgebra;
use crate::block::BlockConstruction;
use crate::cosets::{distinguished_reps, Composition, Interval};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Reduction, SparseMatrix, SparseVec, SpanBuilder};
use crate::modrep::genalg::{AlgebraByGenerators, ModuleRep};
use crate::modrep::sigma::{build_sigma, embedded_sigma};
use crate::modrep::splitting::splitting_projectivity_oracle;
use crate::report::Check;

const MAX_PERMMOD_GROUP: usize = 5040;

/// The right module spanned by the products of the parabolic sum with the
/// distinguished coset representatives, over the full Hecke algebra in its
/// generator presentation.
pub fn permutation_module(h: &HeckeAlgebra, rho: &Composition) -> Result<ModuleRep> {
    let n = h.n();
    if rho.n() != n {
        return Err(Error::DegreeMismatch(rho.n(), n));
    }
    let mut size: usize = 1;
    for i in 2..=n {
        size = size.saturating_mul(i);
    }
    if size > MAX_PERMMOD_GROUP {
        return Err(Error::SizeOverflow(format!(
            "group of order {size} exceeds the permutation module bound {MAX_PERMMOD_GROUP}"
        )));
    }
    let f = h.field();
    let x = h.x_parabolic(rho)?;
    let reps = distinguished_reps(rho);
    let mut span = SpanBuilder::new(f.clone());
    let mut rows: Vec<crate::algebra::HeckeElement> = Vec::with_capacity(reps.len());
    for d in &reps {
        let row = x.mul(&h.basis(d)?);
        let v: SparseVec = row.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect();
        match span.insert(v) {
            Reduction::Independent { .. } => rows.push(row),
            Reduction::Dependent { .. } => {
                return Err(Error::Construction(
                    "coset representatives gave a dependent spanning set".into(),
                ))
            }
        }
    }
    let dim = rows.len();
    let alg = AlgebraByGenerators::from_hecke(h)?;
    let mut action = Vec::with_capacity(alg.generator_count());
    for i in 1..n {
        let mut data = Vec::with_capacity(dim);
        for row in &rows {
            let prod = row.times_gen(i);
            let v: SparseVec =
                prod.terms().iter().map(|(k, c)| (*k as usize, c.clone())).collect();
            let combo = span.express(&v).ok_or_else(|| {
                Error::Construction("product leaves the span of the coset rows".into())
            })?;
            data.push(combo.into_iter().collect());
        }
        action.push(SparseMatrix::from_rows(dim, dim, data));
    }
    ModuleRep::from_action(alg, action)
}

/// Vectors on which every generator acts by q (copies of the index-one
/// module inside), and functionals transforming the same way under the
/// action (maps onto it). Returned as coordinate vectors.
pub fn trivial_hom_spaces(m: &ModuleRep) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let f = m.algebra().field();
    let q = f.q();
    let dm = m.dim();
    let gcount = m.algebra().generator_count();
    let mut emb_sys = Matrix::zero(gcount * dm, dm, f);
    let mut fun_sys = Matrix::zero(gcount * dm, dm, f);
    for g in 0..gcount {
        let dense = m.action(g).to_dense(f);
        for i in 0..dm {
            for j in 0..dm {
                let mut c = dense.get(i, j).clone();
                if i == j {
                    c = f.sub(&c, &q);
                }
                // v (R_g - q) = 0 reads columns, (R_g - q) w = 0 reads rows
                emb_sys.set(g * dm + j, i, c.clone());
                fun_sys.set(g * dm + i, j, c);
            }
        }
    }
    let pack = |vs: Vec<Vec<crate::field::Scalar>>| {
        vs.into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect::<SparseVec>()
            })
            .collect()
    };
    (pack(emb_sys.nullspace(f)), pack(fun_sys.nullspace(f)))
}

fn pair(f: &Field, a: &SparseVec, b: &SparseVec) -> crate::field::Scalar {
    let mut acc = f.zero();
    for (k, c) in a {
        if let Some(d) = b.get(k) {
            acc = f.add(&acc, &f.mul(c, d));
        }
    }
    acc
}

/// The fixed demonstration: two blocks of three strands in characteristic
/// two. The induced module has a unique copy of the index-one module inside
/// and a unique map onto it, the two do not pair, and the middle layer
/// between them is projective over the two-block parabolic while the slow
/// direct check confirms it is not projective over the whole algebra.
pub fn example_checks(slow: bool) -> Result<Vec<Check>> {
    let field = Field::finite(2, 2, 3)?;
    let h = HeckeAlgebra::new(6, field.clone())?;
    let rho = Composition::new(vec![3, 3]);
    let mut checks = Vec::new();

    let m = permutation_module(&h, &rho)?;
    checks.push(Check::from_bool(
        "induced module has dimension 20",
        m.dim() == 20,
        format!("dim = {}", m.dim()),
    ));
    checks.push(Check::from_bool(
        "module action satisfies the defining relations",
        m.relation_audit().is_ok(),
        "audited against every relation and the unit",
    ));

    let (embeddings, functionals) = trivial_hom_spaces(&m);
    checks.push(Check::from_bool(
        "a unique embedding of the index-one module",
        embeddings.len() == 1,
        format!("embedding space has dimension {}", embeddings.len()),
    ));
    checks.push(Check::from_bool(
        "a unique map onto the index-one module",
        functionals.len() == 1,
        format!("functional space has dimension {}", functionals.len()),
    ));
    if embeddings.len() != 1 || functionals.len() != 1 {
        return Ok(checks);
    }
    let phi = &embeddings[0];
    let psi = &functionals[0];
    checks.push(Check::from_bool(
        "the composite of the two maps vanishes",
        pair(&field, phi, psi).is_zero(),
        format!("pairing = {}", field.render(&pair(&field, phi, psi))),
    ));

    let mut psi_mat = Matrix::zero(1, m.dim(), &field);
    for (k, c) in psi {
        psi_mat.set(0, *k, c.clone());
    }
    let kernel: Vec<SparseVec> = psi_mat
        .nullspace(&field)
        .into_iter()
        .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    let v = m.subquotient(&[phi.clone()], &kernel)?;
    checks.push(Check::from_bool(
        "middle layer has dimension 18",
        v.dim() == 18,
        format!("dim = {}", v.dim()),
    ));

    let m_res = m.restrict(&rho)?;
    let v_res = v.restrict(&rho)?;
    checks.push(Check::from_bool(
        "restrictions pass the relation audit",
        m_res.relation_audit().is_ok() && v_res.relation_audit().is_ok(),
        "both restricted actions audited",
    ));
    checks.push(Check::from_bool(
        "middle layer is projective over the parabolic",
        splitting_projectivity_oracle(&v_res)?,
        "a splitting of a free cover exists",
    ));

    let block = BlockConstruction::build(3, field.clone())?;
    let sd = build_sigma(&block, None)?;
    let s1 = embedded_sigma(&h, Interval::new(1, 3)?, &sd)?;
    let s2 = embedded_sigma(&h, Interval::new(4, 6)?, &sd)?;
    let a1 = v.hecke_element_action(&s1)?;
    let a2 = v.hecke_element_action(&s2)?;
    let prod = a1.mul(&field, &a2);
    let squared = prod.mul(&field, &prod);
    checks.push(Check::from_bool(
        "the squared nilpotent product acts nontrivially on the middle layer",
        !squared.is_zero(),
        "annihilator test agrees with projectivity over the parabolic",
    ));

    let (embeddings_res, functionals_res) = trivial_hom_spaces(&m_res);
    let phi_splits = functionals_res.iter().any(|lam| !pair(&field, phi, lam).is_zero());
    checks.push(Check::from_bool(
        "the embedding splits over the parabolic",
        phi_splits,
        "a parabolic functional pairs with the embedded vector",
    ));
    let psi_splits = embeddings_res.iter().any(|w| !pair(&field, w, psi).is_zero());
    checks.push(Check::from_bool(
        "the map onto the index-one module splits over the parabolic",
        psi_splits,
        "a parabolic embedding pairs with the functional",
    ));

    if slow {
        let projective_over_full = splitting_projectivity_oracle(&v)?;
        checks.push(Check::from_bool(
            "middle layer is not projective over the whole algebra",
            !projective_over_full,
            "no splitting of a free cover exists",
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_singleton_shapes() {
        let field = Field::cyclotomic(3).unwrap();
        let h = HeckeAlgebra::new(3, field).unwrap();
        let whole = permutation_module(&h, &Composition::new(vec![3])).unwrap();
        assert_eq!(whole.dim(), 1);
        let (e, f) = trivial_hom_spaces(&whole);
        assert_eq!((e.len(), f.len()), (1, 1));
        let regular = permutation_module(&h, &Composition::new(vec![1, 1, 1])).unwrap();
        assert_eq!(regular.dim(), 6);
        let (e, f) = trivial_hom_spaces(&regular);
        assert_eq!((e.len(), f.len()), (1, 1));
    }

    #[test]
    fn two_row_module_counts_cosets() {
        let field = Field::finite(2, 2, 3).unwrap();
        let h = HeckeAlgebra::new(4, field).unwrap();
        let m = permutation_module(&h, &Composition::new(vec![2, 2])).unwrap();
        assert_eq!(m.dim(), 6);
        m.relation_audit().unwrap();
    }

    #[test]
    fn oversized_group_is_rejected() {
        let h = HeckeAlgebra::new(8, Field::finite(2, 2, 3).unwrap()).unwrap();
        assert!(matches!(
            permutation_module(&h, &Composition::new(vec![4, 4])),
            Err(Error::SizeOverflow(_))
        ));
    }

    #[test]
    fn scripted_example_fast_checks_pass() {
        let checks = example_checks(false).unwrap();
        assert_eq!(checks.len(), 11);
        for c in &checks {
            assert!(c.passed(), "failed: {} ({})", c.name, c.witness);
        }
    }
}
