//! Separating tuples of natural generators for simplicial order ideals.

use super::separating::constraints;
use super::{zsep_reembed, ReembedError, ReembeddingResult, SeparatingWitness};
use crate::bbscheme::{BBScheme, GeneratorLabel};
use crate::polyring::{lp_realizable, LinearSpan, OrderingMatrix, Polynomial, Term};

/// The interior variables with the across-the-rim generator chosen for each.
#[derive(Clone, Debug)]
pub struct SimplicialChoice {
    pub interior: Vec<usize>,
    pub labels: Vec<GeneratorLabel>,
    pub witness: SeparatingWitness,
}

fn arrow_vector(s: &BBScheme, v: usize) -> Vec<i64> {
    let (i, j) = s.var_pair(v);
    let t = s.order_ideal().term(i);
    let b = s.order_ideal().border_term(j);
    (0..s.n()).map(|k| i64::from(b.exp(k)) - i64::from(t.exp(k))).collect()
}

/// Ordering rows `2δ − 1`, the `α_k` selector on interior variables, the indicator of the
/// interior variables, then degrevlex.
fn ordering_rows(s: &BBScheme, interior: &[usize]) -> Vec<Vec<i64>> {
    let w = s.arrow_grading().w;
    let first: Vec<i64> = w.iter().map(|&d| 2 * d - 1).collect();
    let mut second = vec![0; s.arity()];
    let mut indicator = vec![0; s.arity()];
    for &v in interior {
        let delta = arrow_vector(s, v);
        let k = delta.iter().position(|&d| d > 0).expect("positive component");
        second[v] = i64::from(s.order_ideal().term(s.var_pair(v).0).exp(k));
        indicator[v] = 1;
    }
    vec![first, second, indicator]
}

pub fn simplicial_separating_tuple(s: &BBScheme) -> Result<SimplicialChoice, ReembedError> {
    let o = s.order_ideal();
    if o.simplicial_type().is_none() {
        return Err(ReembedError::NotSimplicial);
    }
    if s.n() < 2 {
        return Err(ReembedError::Check("no across-the-rim pairs in one variable".into()));
    }
    let arity = s.arity();
    let (_, int_terms) = o.rim_interior_split();
    let mut interior: Vec<usize> = int_terms.iter().flat_map(|&i| (0..s.nu()).map(move |j| s.var(i, j))).collect();
    interior.sort_unstable();
    let sigma = OrderingMatrix::weighted(ordering_rows(s, &interior), arity)?;

    let gens = s.natural_generators();
    let mut labels = Vec::with_capacity(interior.len());
    let mut polys = Vec::with_capacity(interior.len());
    for &v in &interior {
        let (i, j) = s.var_pair(v);
        let k = arrow_vector(s, v).iter().position(|&d| d > 0).expect("positive component");
        let l = if k == 0 { 1 } else { 0 };
        let b = o.border_term(j);
        let jp = o
            .border_index(&b.div_var(k).expect("x_k divides b_j").mul_var(l))
            .ok_or_else(|| ReembedError::Check(format!("x_l b_j / x_k not in the border for {}", s.var_name(v))))?;
        let m = o.term_index(&o.term(i).mul_var(l)).expect("interior term times a variable stays in O");
        let label = GeneratorLabel::AcrossRim { j: j.min(jp), jp: j.max(jp), m };
        let g = gens
            .iter()
            .find(|g| g.label == label)
            .ok_or_else(|| ReembedError::Check(format!("generator {label} is zero")))?;
        labels.push(label);
        polys.push(g.poly.clone());
    }
    let cons: Vec<_> = polys
        .iter()
        .zip(&interior)
        .map(|(f, &z)| constraints(f, z, &interior).ok_or_else(|| ReembedError::Check(format!("{} missing from its generator", s.var_name(z)))))
        .collect::<Result<_, _>>()?;
    let w = lp_realizable(arity, &cons).ok_or_else(|| ReembedError::Check("no weight vector realizes the tuple".into()))?;
    let witness = SeparatingWitness { z: interior.clone(), f: polys, w, sigma };
    if !witness.verify() {
        return Err(ReembedError::Check("constructed ordering does not select the interior variables".into()));
    }
    Ok(SimplicialChoice { interior, labels, witness })
}

pub fn simplicial_reembed(s: &BBScheme) -> Result<(SimplicialChoice, ReembeddingResult), ReembedError> {
    let choice = simplicial_separating_tuple(s)?;
    let result = zsep_reembed(s, &choice.witness)?;
    Ok((choice, result))
}

/// Dimension of the span of the degree-two parts of the rewritten generators. For an ideal
/// generated by homogeneous quadrics this is the minimal number of generators.
pub fn quadric_rank(result: &ReembeddingResult) -> usize {
    let mut span: Option<LinearSpan> = None;
    for g in &result.generators {
        let q: Polynomial = g.homogeneous_part(2);
        span.get_or_insert_with(|| LinearSpan::new(g.arity())).insert(&q);
    }
    span.map_or(0, |s| s.dim())
}

/// Every generator is a homogeneous quadric in the standard grading.
pub fn all_quadrics(result: &ReembeddingResult) -> bool {
    result.generators.iter().all(|g| g.terms().all(|(t, _): (&Term, _)| t.degree() == 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderideal::OrderIdeal;

    #[test]
    fn plane_type_two_is_free() {
        let s = BBScheme::new(OrderIdeal::simplicial(2, 2).unwrap());
        let (choice, r) = simplicial_reembed(&s).unwrap();
        assert_eq!(choice.interior.len(), 12);
        assert!(r.is_affine_cell());
        assert_eq!(r.remaining.len(), 12);
    }

    #[test]
    fn space_type_one_has_fifteen_quadrics() {
        let s = BBScheme::new(OrderIdeal::simplicial(3, 1).unwrap());
        let (choice, r) = simplicial_reembed(&s).unwrap();
        assert_eq!(choice.interior.len(), 6);
        assert_eq!(r.remaining.len(), 18);
        assert!(all_quadrics(&r));
        assert_eq!(quadric_rank(&r), 15);
        assert_eq!(r.generators.len(), 15);
        assert_eq!(s.cotangent_dim(), 18);
    }

    #[test]
    fn remaining_equals_cotangent_dim() {
        for (n, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)] {
            let s = BBScheme::new(OrderIdeal::simplicial(n, d).unwrap());
            let choice = simplicial_separating_tuple(&s).unwrap();
            let (rim, _) = s.order_ideal().rim_interior_split();
            assert_eq!(s.arity() - choice.interior.len(), rim.len() * s.nu(), "({n},{d})");
            assert_eq!(s.arity() - choice.interior.len(), s.cotangent_dim(), "({n},{d})");
        }
    }

    #[test]
    fn non_simplicial_is_rejected() {
        let s = BBScheme::new(OrderIdeal::lshape());
        assert!(matches!(simplicial_separating_tuple(&s), Err(ReembedError::NotSimplicial)));
    }
}
