//! Candidate tuples built from cotangent classes and exposed variables, for planar schemes.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::separating::{check_separating_with, SearchOptions, Separation};
use super::{zsep_reembed, ReembedError, ReembeddingResult};
use crate::bbscheme::BBScheme;
use crate::orderideal::OrderIdealError;

#[derive(Clone, Debug)]
pub struct OptimalSearch {
    /// `#C − 2μ`
    pub target: usize,
    pub candidates: Vec<Vec<usize>>,
    /// Separating candidates with their re-embeddings.
    pub found: Vec<(Vec<usize>, ReembeddingResult)>,
    /// Candidates the pool search could neither confirm nor rule out.
    pub undecided: Vec<Vec<usize>>,
}

impl OptimalSearch {
    pub fn is_conclusive(&self) -> bool {
        self.undecided.is_empty()
    }

    pub fn optimal(&self) -> impl Iterator<Item = &(Vec<usize>, ReembeddingResult)> {
        self.found.iter().filter(|(z, r)| z.len() == self.target && r.is_affine_cell())
    }
}

/// `E_0 ∪ (C \ C^exp) ∪ Ẽ_1* ∪ … ∪ Ẽ_q*` for every way of deleting one element from each
/// non-empty `Ẽ_i = E_i ∩ C^exp`; each tuple is sorted.
pub fn optimal_candidates(s: &BBScheme) -> Result<Vec<Vec<usize>>, ReembedError> {
    if s.n() != 2 {
        return Err(OrderIdealError::NotPlanar(s.n()).into());
    }
    let classes = s.cotangent_classes();
    let exposure = s.exposure();
    let mut base: BTreeSet<usize> = classes.e0.iter().copied().collect();
    base.extend(exposure.non_exposed.iter().copied());
    let tilde: Vec<Vec<usize>> = classes
        .proper
        .iter()
        .map(|e| e.iter().copied().filter(|&v| exposure.is_exposed(v)).collect::<Vec<_>>())
        .filter(|e| !e.is_empty())
        .collect();
    let mut out: Vec<BTreeSet<usize>> = vec![base];
    for e in &tilde {
        let mut next = Vec::with_capacity(out.len() * e.len());
        for z in &out {
            for &dropped in e {
                let mut t = z.clone();
                t.extend(e.iter().copied().filter(|&v| v != dropped));
                next.push(t);
            }
        }
        out = next;
    }
    let mut out: Vec<Vec<usize>> = out.into_iter().map(|z| z.into_iter().collect()).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn optimal_planar_search(s: &BBScheme, opts: &SearchOptions) -> Result<OptimalSearch, ReembedError> {
    let candidates = optimal_candidates(s)?;
    let outcomes: Vec<Result<(Vec<usize>, Separation), ReembedError>> = candidates
        .par_iter()
        .map(|z| Ok((z.clone(), check_separating_with(s, z, opts)?)))
        .collect();
    let mut found = Vec::new();
    let mut undecided = Vec::new();
    for o in outcomes {
        let (z, sep) = o?;
        match sep {
            Separation::Found(w) => {
                let r = zsep_reembed(s, &w)?;
                found.push((z, r));
            }
            Separation::Impossible(_) => {}
            Separation::NotFound => undecided.push(z),
        }
    }
    Ok(OptimalSearch { target: s.arity() - 2 * s.mu(), candidates, found, undecided })
}

/// The separating candidate tuples with their re-embeddings.
pub fn optimal_planar_reembed(s: &BBScheme) -> Result<Vec<(Vec<usize>, ReembeddingResult)>, ReembedError> {
    Ok(optimal_planar_search(s, &SearchOptions::default())?.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderideal::OrderIdeal;

    fn names(s: &BBScheme, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| s.var_name(v).to_string()).collect()
    }

    fn ex1232() -> BBScheme {
        let o = OrderIdeal::new(
            2,
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0], vec![0, 3], vec![1, 2]],
        )
        .unwrap();
        BBScheme::new(o)
    }

    #[test]
    fn ex1232_classes() {
        let s = ex1232();
        let c = s.cotangent_classes();
        let e0 = "c11 c12 c13 c14 c15 c21 c22 c23 c24 c25 c31 c32 c33 c34 c35 c42 c44 c45 c55 c65";
        assert_eq!(names(&s, &c.e0).join(" "), e0);
        let mut proper: Vec<String> = c.proper.iter().map(|e| names(&s, e).join(" ")).collect();
        proper.sort();
        assert_eq!(proper, vec!["c41 c52 c75", "c43 c54", "c51 c85"]);
    }

    #[test]
    fn ex1232_has_two_optimal_tuples() {
        let s = ex1232();
        let found = optimal_planar_reembed(&s).unwrap();
        assert_eq!(found.len(), 2);
        let extra: Vec<Vec<String>> = found
            .iter()
            .map(|(z, _)| names(&s, &z.iter().copied().filter(|&v| s.exposure().is_exposed(v)).collect::<Vec<_>>()))
            .collect();
        assert_eq!(extra, vec![vec!["c51", "c65"], vec!["c65", "c85"]]);
        for (z, r) in &found {
            assert_eq!(z.len(), 24);
            assert!(r.is_affine_cell());
            assert_eq!(r.remaining.len(), 16);
        }
    }

    #[test]
    fn lshape_has_none() {
        let s = BBScheme::new(OrderIdeal::lshape());
        let search = optimal_planar_search(&s, &SearchOptions::default()).unwrap();
        assert!(search.is_conclusive());
        assert!(search.found.is_empty());
    }

    #[test]
    fn box22_returns_the_non_exposed_tuple() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 2]).unwrap());
        let found = optimal_planar_reembed(&s).unwrap();
        assert!(found.iter().any(|(z, r)| *z == s.exposure().non_exposed && r.is_affine_cell()));
    }
}
