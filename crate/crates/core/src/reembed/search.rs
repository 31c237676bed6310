//! Searches for best and optimal separating tuples.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::separating::{maxdeg_witness, LinearModule, SearchOptions, Separation};
use super::{zsep_reembed, ReembedError, ReembeddingResult};
use crate::bbscheme::{BBError, BBScheme};

/// All separating subsets of maximal size within one block, by levelwise growth: a set is
/// tested only if all of its one-smaller subsets separate.
fn block_maxima(module: &LinearModule, degree: i64, k: usize, budget: u64, used: &mut u64) -> Result<Vec<Vec<usize>>, ReembedError> {
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    loop {
        let good: BTreeSet<Vec<usize>> = level.iter().cloned().collect();
        let mut cands: BTreeSet<Vec<usize>> = BTreeSet::new();
        for set in &level {
            let start = set.last().map_or(0, |&l| l + 1);
            for p in start..k {
                let mut next = set.clone();
                next.push(p);
                let downward = (0..next.len()).all(|drop| {
                    let mut sub = next.clone();
                    sub.remove(drop);
                    good.contains(&sub)
                });
                if downward {
                    cands.insert(next);
                }
            }
        }
        *used += cands.len() as u64;
        if *used > budget {
            return Err(ReembedError::SearchBudget(budget));
        }
        let cands: Vec<Vec<usize>> = cands.into_iter().collect();
        let next: Vec<Vec<usize>> = cands
            .into_par_iter()
            .filter(|c| module.block_is_separating(degree, c))
            .collect();
        if next.is_empty() {
            return Ok(level);
        }
        level = next;
    }
}

/// All separating tuples of maximal size of a MaxDeg scheme, each sorted by variable index,
/// in lexicographic order.
pub fn best_separating_tuples(s: &BBScheme, budget: u64) -> Result<Vec<Vec<usize>>, ReembedError> {
    if !s.order_ideal().is_maxdeg() {
        return Err(BBError::NotMaxDeg.into());
    }
    let module = LinearModule::new(s);
    let mut used = 0;
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for (d, vars) in module.blocks() {
        let maxima = block_maxima(&module, d, vars.len(), budget, &mut used)?;
        let mut next = Vec::with_capacity(out.len() * maxima.len());
        for base in &out {
            for m in &maxima {
                let mut t = base.clone();
                t.extend(m.iter().map(|&p| vars[p]));
                next.push(t);
            }
        }
        out = next;
    }
    for t in &mut out {
        t.sort_unstable();
    }
    out.sort();
    Ok(out)
}

/// Re-embeds along a separating tuple of a MaxDeg scheme found by the module criterion.
pub fn reembed_maxdeg(s: &BBScheme, z: &[usize]) -> Result<ReembeddingResult, ReembedError> {
    let module = LinearModule::new(s);
    match maxdeg_witness(s, &module, z, &SearchOptions::default())? {
        Separation::Found(w) => zsep_reembed(s, &w),
        Separation::Impossible(r) => Err(ReembedError::Check(r)),
        Separation::NotFound => Err(ReembedError::Check("no witness found".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderideal::OrderIdeal;

    #[test]
    fn box22_best_is_non_exposed() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 2]).unwrap());
        let best = best_separating_tuples(&s, 1_000_000).unwrap();
        assert!(best.iter().all(|t| t.len() == 8));
        assert!(best.contains(&s.exposure().non_exposed));
    }
}
