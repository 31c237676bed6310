#![allow(dead_code)]

use bbs_core::bbscheme::BBScheme;
use bbs_core::orderideal::{planar_order_ideals, OrderIdeal};
use bbs_core::polyring::GbOptions;
use bbs_core::reembed::{best_separating_tuples, check_separating, gb_elimination, same_ideal, weight_assignment, zsep_reembed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct OracleCase {
    pub ideal: OrderIdeal,
    pub z: Vec<usize>,
    pub agrees: bool,
    pub generators: usize,
    pub eliminated: usize,
}

/// A separating tuple to sample from: a best tuple for MaxDeg ideals, otherwise the
/// variables selected by the weight assignment.
fn source_tuple(s: &BBScheme, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if s.order_ideal().is_maxdeg() {
        let best = best_separating_tuples(s, 1_000_000).expect("small search");
        best.choose(rng).cloned().unwrap_or_default()
    } else {
        weight_assignment(s).expect("planar weights").chosen.keys().copied().collect()
    }
}

/// Substitution-based elimination against Gröbner-based elimination on random instances.
pub fn elimination_oracle(seed: u64, count: usize) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ideals: Vec<OrderIdeal> = (2..=4).flat_map(planar_order_ideals).collect();
    let opts = GbOptions::default();
    let mut out = Vec::new();
    while out.len() < count {
        let o = ideals.choose(&mut rng).unwrap().clone();
        let s = BBScheme::new(o.clone());
        let mut pool = source_tuple(&s, &mut rng);
        if pool.is_empty() {
            continue;
        }
        pool.shuffle(&mut rng);
        let k = rng.gen_range(1..=pool.len());
        let mut z: Vec<usize> = pool[..k].to_vec();
        z.sort_unstable();
        let Some(w) = check_separating(&s, &z).expect("valid tuple") else { continue };
        let r = zsep_reembed(&s, &w).expect("re-embedding");
        let elim = gb_elimination(&s, &z, &opts).expect("elimination within budget");
        let agrees = same_ideal(&r.generators, &elim, s.arity(), &opts).expect("comparison within budget");
        out.push(OracleCase { ideal: o, z, agrees, generators: r.generators.len(), eliminated: k });
    }
    out
}
