//! Re-embeddings of border basis schemes: separating tuples, weight assignment for
//! planar schemes, optimal tuple search, the simplicial construction and the L-shape
//! affine-cell pipeline.

mod lshape;
mod optimal;
mod search;
mod separating;
mod simplicial;
mod survey;
mod weights;

pub use lshape::{
    determinant, verify_lshape_pipeline, LshapeReport, PipelineCheck, LSHAPE_F1, LSHAPE_F2, LSHAPE_FINAL_VARS,
    LSHAPE_SUPPORT_LENGTHS, LSHAPE_Z,
};
pub use optimal::{optimal_candidates, optimal_planar_reembed, optimal_planar_search, OptimalSearch};
pub use search::{best_separating_tuples, reembed_maxdeg};
pub use separating::{check_separating, check_separating_with, LinearModule, SearchOptions, Separation};
pub use simplicial::{all_quadrics, quadric_rank, simplicial_reembed, simplicial_separating_tuple, SimplicialChoice};
pub use survey::{conjecture_survey, survey_ideals, survey_row, SurveyReport, SurveyRow, SurveyStatus};
pub use weights::{eliminate_non_exposed, weight_assignment, WeightAssignment, WeightMethod, WeightRule};

use thiserror::Error;

use crate::bbscheme::{ArrowGrading, BBError, BBScheme};
use crate::orderideal::OrderIdealError;
use crate::polyring::{coherentize, groebner_basis_with, in_truncated_ideal, normal_form, GbOptions, substitute, LinearSpan, OrderingMatrix, PolyError, Polynomial, SubstitutionMap, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReembedError {
    #[error(transparent)]
    OrderIdeal(#[from] OrderIdealError),
    #[error(transparent)]
    Scheme(#[from] BBError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("weight assignment failed: {0}")]
    Weights(String),
    #[error("order ideal is not simplicial")]
    NotSimplicial,
    #[error("search budget of {0} nodes exhausted")]
    SearchBudget(u64),
    #[error("{0}")]
    Check(String),
}

/// Polynomials `f_i ∈ I(B_O)` whose leading terms under `σ` are the `z_i`.
#[derive(Clone, Debug)]
pub struct SeparatingWitness {
    pub z: Vec<usize>,
    pub f: Vec<Polynomial>,
    pub w: Vec<Q>,
    pub sigma: OrderingMatrix,
}

impl SeparatingWitness {
    /// `LT_σ(f_i) = z_i` for every `i`.
    pub fn verify(&self) -> bool {
        self.z.len() == self.f.len()
            && self.z.iter().zip(&self.f).all(|(&z, f)| {
                self.sigma
                    .leading_term(f)
                    .map(|(t, _)| t.as_var() == Some(z) && t.degree() == 1)
                    .unwrap_or(false)
            })
    }
}

#[derive(Clone, Debug)]
pub struct ReembeddingResult {
    pub eliminated: Vec<usize>,
    pub remaining: Vec<usize>,
    pub substitution: SubstitutionMap,
    /// Rewritten generators in `K[C \ Z]`, zero ones dropped, linearly interreduced.
    pub generators: Vec<Polynomial>,
}

impl ReembeddingResult {
    pub fn presentation_dim(&self) -> usize {
        self.remaining.len()
    }

    pub fn is_affine_cell(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Linear interreduction of a generator list; the result spans the same K-space.
pub fn interreduce(gens: impl IntoIterator<Item = Polynomial>, arity: usize) -> Vec<Polynomial> {
    let mut span = LinearSpan::new(arity);
    for g in gens {
        span.insert(&g);
    }
    span.reduced_basis()
}

/// Drops generators that lie in the ideal generated by the others.
///
/// With a non-negative total arrow grading the test is exact: generators are visited by
/// increasing degree and reduced against a Gröbner basis of the kept ones, truncated at
/// that degree. Otherwise a generator is dropped only when a degree-bounded membership
/// certificate exists.
pub fn prune_redundant(gens: Vec<Polynomial>, grading: &ArrowGrading) -> Vec<Polynomial> {
    let arity = grading.w.len();
    let deg = |g: &Polynomial| g.weighted_degree(&grading.w).flatten();
    if grading.w.iter().all(|&d| d >= 0) && gens.iter().all(|g| deg(g).is_some()) {
        let order = OrderingMatrix::weighted(vec![grading.w.clone()], arity).expect("non-negative row");
        let mut sorted = gens;
        sorted.sort_by_key(|g| (deg(g), g.len()));
        let mut kept: Vec<Polynomial> = Vec::new();
        for g in sorted {
            let opts = GbOptions { degree_bound: deg(&g), ..GbOptions::default() };
            let redundant = !kept.is_empty()
                && groebner_basis_with(&order, &kept, &opts).is_ok_and(|gb| normal_form(&order, &g, &gb).is_zero());
            if !redundant {
                kept.push(g);
            }
        }
        return kept;
    }
    let size = |g: &Polynomial| (g.total_degree().unwrap_or(0), g.len());
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(size(&gens[i])));
    let mut keep = vec![true; gens.len()];
    for i in order {
        let others: Vec<Polynomial> = (0..gens.len()).filter(|&k| k != i && keep[k]).map(|k| gens[k].clone()).collect();
        if in_truncated_ideal(&gens[i], &others, &grading.a, 2) {
            keep[i] = false;
        }
    }
    gens.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
}

/// Coherentizes the witness and rewrites every natural generator.
pub fn zsep_reembed(s: &BBScheme, witness: &SeparatingWitness) -> Result<ReembeddingResult, ReembedError> {
    let map = coherentize(&witness.f, &witness.z, &witness.w)?;
    if !map.is_coherent() {
        return Err(ReembedError::Check("substitution is not coherent".into()));
    }
    Ok(rewrite(s, &witness.z, map))
}

pub(crate) fn rewrite(s: &BBScheme, z: &[usize], map: SubstitutionMap) -> ReembeddingResult {
    let rewritten = s
        .natural_generators()
        .into_iter()
        .map(|g| substitute(&g.poly, &map))
        .filter(|p| !p.is_zero());
    let generators = prune_redundant(interreduce(rewritten, s.arity()), &s.arrow_grading());
    let mut eliminated = z.to_vec();
    eliminated.sort_unstable();
    let remaining = (0..s.arity()).filter(|v| eliminated.binary_search(v).is_err()).collect();
    ReembeddingResult { eliminated, remaining, substitution: map, generators }
}

/// `I(B_O) ∩ K[C \ Z]` from a Gröbner basis under an elimination ordering for `Z`.
pub fn gb_elimination(s: &BBScheme, z: &[usize], opts: &GbOptions) -> Result<Vec<Polynomial>, ReembedError> {
    let order = OrderingMatrix::elimination(z, s.arity());
    let gens: Vec<Polynomial> = s.natural_generators().into_iter().map(|g| g.poly).collect();
    let gb = groebner_basis_with(&order, &gens, opts)?;
    Ok(gb.into_iter().filter(|g| z.iter().all(|&v| !g.contains_var(v))).collect())
}

/// Both generator sets span the same ideal, decided by reduction against Gröbner bases.
pub fn same_ideal(a: &[Polynomial], b: &[Polynomial], arity: usize, opts: &GbOptions) -> Result<bool, ReembedError> {
    let order = OrderingMatrix::degrevlex(arity);
    let inside = |xs: &[Polynomial], ys: &[Polynomial]| -> Result<bool, ReembedError> {
        if xs.is_empty() {
            return Ok(true);
        }
        if ys.is_empty() {
            return Ok(xs.iter().all(Polynomial::is_zero));
        }
        let gb = groebner_basis_with(&order, ys, opts)?;
        Ok(xs.iter().all(|x| normal_form(&order, x, &gb).is_zero()))
    };
    Ok(inside(a, b)? && inside(b, a)?)
}
