//! Segmentation type against existence of optimal separating re-embeddings, over all
//! planar non-simplicial MaxDeg order ideals up to a given size.

use rayon::prelude::*;

use super::optimal::optimal_planar_search;
use super::search::best_separating_tuples;
use super::separating::SearchOptions;
use super::ReembedError;
use crate::bbscheme::BBScheme;
use crate::orderideal::{planar_order_ideals, OrderIdeal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurveyStatus {
    Decided,
    /// Some candidate tuple was neither confirmed nor ruled out.
    Undecided,
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct SurveyRow {
    pub ideal: OrderIdeal,
    pub mu: usize,
    pub d: u32,
    pub segmentation_type: usize,
    /// `#C − 2μ`
    pub target: usize,
    pub best_size: Option<usize>,
    pub best_count: Option<usize>,
    pub candidates: usize,
    pub optimal: bool,
    /// An optimal tuple when one was found.
    pub witness: Option<Vec<usize>>,
    pub status: SurveyStatus,
}

impl SurveyRow {
    /// The row agrees with "segmentation type one iff an optimal re-embedding exists".
    pub fn consistent(&self) -> bool {
        self.status == SurveyStatus::Decided && (self.segmentation_type == 1) == self.optimal
    }
}

#[derive(Clone, Debug)]
pub struct SurveyReport {
    pub mu_max: u32,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    pub fn inconsistent(&self) -> impl Iterator<Item = &SurveyRow> {
        self.rows.iter().filter(|r| !r.consistent())
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent().next().is_none()
    }
}

pub fn survey_ideals(mu_max: u32) -> Vec<OrderIdeal> {
    (1..=mu_max)
        .flat_map(planar_order_ideals)
        .filter(|o| o.is_maxdeg() && o.simplicial_type().is_none())
        .collect()
}

pub fn survey_row(o: &OrderIdeal, opts: &SearchOptions, best_budget: u64) -> SurveyRow {
    let s = BBScheme::new(o.clone());
    let seg = o.segments().expect("planar non-simplicial MaxDeg");
    let mut row = SurveyRow {
        ideal: o.clone(),
        mu: o.mu(),
        d: seg.d,
        segmentation_type: seg.segmentation_type(),
        target: s.arity() - 2 * s.mu(),
        best_size: None,
        best_count: None,
        candidates: 0,
        optimal: false,
        witness: None,
        status: SurveyStatus::Decided,
    };
    let mut run = || -> Result<(), ReembedError> {
        let search = optimal_planar_search(&s, opts)?;
        row.candidates = search.candidates.len();
        if let Some((z, _)) = search.optimal().next() {
            row.optimal = true;
            row.witness = Some(z.clone());
        }
        let best = best_separating_tuples(&s, best_budget)?;
        row.best_size = best.first().map(Vec::len);
        row.best_count = Some(best.len());
        if !search.is_conclusive() && !row.optimal {
            // a best tuple of the target size settles existence for MaxDeg schemes
            if row.best_size == Some(row.target) {
                row.optimal = true;
                row.witness = best.first().cloned();
            } else {
                row.status = SurveyStatus::Undecided;
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        row.status = SurveyStatus::Failed(e.to_string());
    }
    row
}

pub fn conjecture_survey(mu_max: u32, opts: &SearchOptions, best_budget: u64) -> SurveyReport {
    let rows = survey_ideals(mu_max).par_iter().map(|o| survey_row(o, opts, best_budget)).collect();
    SurveyReport { mu_max, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmentation_type_one_example_is_optimal() {
        let o = OrderIdeal::new(
            2,
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2], vec![0, 3], vec![1, 2]],
        )
        .unwrap();
        let row = survey_row(&o, &SearchOptions::default(), 1_000_000);
        assert_eq!(row.segmentation_type, 1);
        assert!(row.optimal);
        assert!(row.consistent());
    }

    #[test]
    fn lshape_is_not_optimal() {
        let row = survey_row(&OrderIdeal::lshape(), &SearchOptions::default(), 1_000_000);
        assert_eq!(row.segmentation_type, 2);
        assert!(!row.optimal);
        assert_eq!(row.best_size, Some(13));
        assert!(row.consistent());
    }
}
