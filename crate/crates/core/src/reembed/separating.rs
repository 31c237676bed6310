//! Separating tuples: the module criterion for MaxDeg schemes and a pool search with
//! exact weight feasibility for the general case.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{ReembedError, SeparatingWitness};
use crate::bbscheme::{BBScheme, Generator};
use crate::linalg::solve_combination;
use crate::polyring::{
    groebner_basis_with, lp_realizable, normal_form, GbOptions, OrderingMatrix, Polynomial, Term, Q,
};

/// Outcome of a separating-tuple check.
#[derive(Clone, Debug)]
pub enum Separation {
    Found(SeparatingWitness),
    /// No separating tuple of polynomials exists for this `Z`; the string says why.
    Impossible(String),
    /// The pool search ran out of candidates; existence is undecided.
    NotFound,
}

impl Separation {
    pub fn witness(self) -> Option<SeparatingWitness> {
        match self {
            Separation::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Separation::Found(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Nodes of the pool search before giving up with an error.
    pub node_budget: u64,
    /// Largest degree of `K[C_0]` multipliers tried when building explicit MaxDeg witnesses.
    pub max_multiplier_degree: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: 200_000, max_multiplier_degree: 12 }
    }
}

/// One total-arrow-degree block of the `K[C_0]`-module spanned by the linear parts.
#[derive(Clone, Debug)]
struct Block {
    vars: Vec<usize>,
    /// Natural generators of this degree.
    gens: Vec<usize>,
    /// Per generator: block position → coefficient in the local ring `K[C_0]`.
    rows: Vec<BTreeMap<usize, Polynomial>>,
}

/// The linear parts of the natural generators of a MaxDeg scheme, viewed as elements of
/// `⊕_{c ∈ C_+} K[C_0]·c` and split by total arrow degree.
#[derive(Clone, Debug)]
pub struct LinearModule {
    c0: Vec<usize>,
    w: Vec<i64>,
    gens: Vec<Generator>,
    blocks: BTreeMap<i64, Block>,
}

impl LinearModule {
    pub fn new(s: &BBScheme) -> Self {
        Self::from_generators(s, s.natural_generators())
    }

    /// The module spanned by the linear parts of `gens`, which must be arrow-homogeneous.
    pub fn from_generators(s: &BBScheme, gens: Vec<Generator>) -> Self {
        let w = s.arrow_grading().w;
        let c0: Vec<usize> = (0..s.arity()).filter(|&v| w[v] == 0).collect();
        let mut blocks: BTreeMap<i64, Block> = BTreeMap::new();
        for v in (0..s.arity()).filter(|&v| w[v] > 0) {
            blocks.entry(w[v]).or_insert_with(|| Block { vars: Vec::new(), gens: Vec::new(), rows: Vec::new() }).vars.push(v);
        }
        for (gi, g) in gens.iter().enumerate() {
            let Some(Some(d)) = g.poly.weighted_degree(&w) else { continue };
            let Some(block) = blocks.get_mut(&d) else { continue };
            let mut row: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (t, c) in g.poly.terms() {
                let plus: Vec<usize> = t.support().filter(|&u| w[u] > 0).collect();
                if plus.len() != 1 || t.exp(plus[0]) != 1 {
                    continue;
                }
                let pos = block.vars.binary_search(&plus[0]).expect("homogeneous generator");
                let m = t.restrict(&c0);
                row.entry(pos).or_insert_with(|| Polynomial::zero(c0.len())).add_term(m, c.clone());
            }
            row.retain(|_, p| !p.is_zero());
            block.gens.push(gi);
            block.rows.push(row);
        }
        LinearModule { c0, w, gens, blocks }
    }

    pub fn c0(&self) -> &[usize] {
        &self.c0
    }

    /// Positive total arrow degrees and their variables.
    pub fn blocks(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.blocks.iter().map(|(&d, b)| (d, b.vars.as_slice()))
    }

    /// `π_Z(M) = K[C_0]^Z` for every block, decided by a module Gröbner basis.
    pub fn is_separating(&self, z: &[usize]) -> Result<bool, String> {
        let mut by_block: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for &v in z {
            if self.w[v] <= 0 {
                return Err(format!("variable {v} has total arrow degree {}", self.w[v]));
            }
            by_block.entry(self.w[v]).or_default().push(v);
        }
        for (d, vars) in by_block {
            let block = &self.blocks[&d];
            let pos: Vec<usize> = vars.iter().map(|v| block.vars.binary_search(v).expect("block member")).collect();
            if !block_surjective(block, &pos, self.c0.len()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Block-local test used by the tuple search; `positions` index the block's variables.
    pub fn block_is_separating(&self, degree: i64, positions: &[usize]) -> bool {
        block_surjective(&self.blocks[&degree], positions, self.c0.len())
    }

    /// An ideal element `z + (terms linear in C_+ \ Z with K[C_0] coefficients) + (terms of
    /// degree ≥ 2 in C_+)`, built from `K[C_0]`-multiples of natural generators.
    fn element_for(&self, arity: usize, z: usize, zset: &[usize], max_deg: u32) -> Option<Polynomial> {
        let block = &self.blocks[&self.w[z]];
        let pos: BTreeSet<usize> = zset.iter().map(|v| block.vars.binary_search(v).expect("block member")).collect();
        let target_pos = block.vars.binary_search(&z).expect("block member");
        let nc0 = self.c0.len();
        let target = BTreeMap::from([((target_pos, Term::one(nc0)), Q::one())]);
        for d in 0..=max_deg {
            let monos = crate::polyring::terms_up_to(nc0, if nc0 == 0 { 0 } else { d });
            let mut rows = Vec::new();
            let mut origin = Vec::new();
            for (r, row) in block.rows.iter().enumerate() {
                for m in &monos {
                    let mut v: BTreeMap<(usize, Term), Q> = BTreeMap::new();
                    for (p, coeff) in row.iter().filter(|(p, _)| pos.contains(p)) {
                        for (t, c) in coeff.terms() {
                            v.insert((*p, t.mul(m)), c.clone());
                        }
                    }
                    rows.push(v);
                    origin.push((r, m.clone()));
                }
            }
            if let Some(comb) = solve_combination(&rows, &target) {
                let mut f = Polynomial::zero(arity);
                for (k, c) in comb {
                    let (r, m) = &origin[k];
                    let g = &self.gens[block.gens[*r]].poly;
                    let lift = Term::from_exponents((0..arity).map(|u| match self.c0.binary_search(&u) {
                        Ok(i) => u32::from(m.exp(i)),
                        Err(_) => 0,
                    }));
                    f = &f + &g.mul_term(&lift, &c);
                }
                return Some(f);
            }
            if nc0 == 0 {
                break;
            }
        }
        None
    }
}

/// The projection of the block module onto `positions` is onto.
fn block_surjective(block: &Block, positions: &[usize], nc0: usize) -> bool {
    if positions.is_empty() {
        return true;
    }
    let k = positions.len();
    let arity = nc0 + k;
    let lift = |t: &Term, slot: usize| -> Term {
        Term::from_exponents((0..arity).map(|u| if u < nc0 { u32::from(t.exp(u)) } else { u32::from(u == nc0 + slot) }))
    };
    let mut polys = Vec::new();
    for row in &block.rows {
        let mut p = Polynomial::zero(arity);
        for (slot, &pos) in positions.iter().enumerate() {
            if let Some(coeff) = row.get(&pos) {
                for (t, c) in coeff.terms() {
                    p.add_term(lift(t, slot), c.clone());
                }
            }
        }
        if !p.is_zero() {
            polys.push(p);
        }
    }
    let mut tag = vec![0i64; arity];
    tag[nc0..].iter_mut().for_each(|v| *v = 1);
    let order = OrderingMatrix::weighted(vec![tag], arity).expect("indicator row");
    let opts = GbOptions { degree_bound: Some(1), ..GbOptions::default() };
    let Ok(gb) = groebner_basis_with(&order, &polys, &opts) else { return false };
    (0..k).all(|slot| normal_form(&order, &Polynomial::monomial(lift(&Term::one(nc0), slot), Q::one()), &gb).is_zero())
}

/// `Some(witness)` if a separating tuple of polynomials for `z` was found.
pub fn check_separating(s: &BBScheme, z: &[usize]) -> Result<Option<SeparatingWitness>, ReembedError> {
    Ok(check_separating_with(s, z, &SearchOptions::default())?.witness())
}

pub fn check_separating_with(s: &BBScheme, z: &[usize], opts: &SearchOptions) -> Result<Separation, ReembedError> {
    let distinct: BTreeSet<usize> = z.iter().copied().collect();
    if distinct.len() != z.len() || z.iter().any(|&v| v >= s.arity()) {
        return Err(ReembedError::Check("Z must consist of distinct variables".into()));
    }
    if z.is_empty() {
        let arity = s.arity();
        return Ok(Separation::Found(SeparatingWitness {
            z: Vec::new(),
            f: Vec::new(),
            w: vec![Q::zero(); arity],
            sigma: OrderingMatrix::degrevlex(arity),
        }));
    }
    if s.order_ideal().is_maxdeg() {
        let module = LinearModule::new(s);
        return maxdeg_witness(s, &module, z, opts);
    }
    pool_search(s, z, opts)
}

pub(crate) fn maxdeg_witness(
    s: &BBScheme,
    module: &LinearModule,
    z: &[usize],
    opts: &SearchOptions,
) -> Result<Separation, ReembedError> {
    match module.is_separating(z) {
        Err(reason) => return Ok(Separation::Impossible(reason)),
        Ok(false) => return Ok(Separation::Impossible("linear parts do not project onto K[C0]^Z".into())),
        Ok(true) => {}
    }
    let arity = s.arity();
    let wdeg = &module.w;
    let mut f = Vec::with_capacity(z.len());
    for &zi in z {
        let same: Vec<usize> = z.iter().copied().filter(|&v| wdeg[v] == wdeg[zi]).collect();
        let g = module
            .element_for(arity, zi, &same, opts.max_multiplier_degree)
            .ok_or(ReembedError::SearchBudget(u64::from(opts.max_multiplier_degree)))?;
        f.push(g);
    }
    // z_i outweighs any product of lighter Z-variables of the same total degree.
    let base = z.iter().map(|&v| wdeg[v]).max().unwrap_or(0) + 1;
    let mut w = vec![Q::zero(); arity];
    for &v in z {
        let p = u32::try_from(wdeg[v]).expect("positive degree");
        w[v] = Q::from_integer(num_bigint::BigInt::from(base).pow(p));
    }
    let sigma = OrderingMatrix::from_rational_weights(&w)?;
    let witness = SeparatingWitness { z: z.to_vec(), f, w, sigma };
    if !witness.verify() {
        return Err(ReembedError::Check("constructed MaxDeg witness has a wrong leading term".into()));
    }
    Ok(Separation::Found(witness))
}

/// Candidate ideal elements containing `z` linearly: natural generators and, within the
/// arrow-degree block of `z`, a K-combination whose linear part meets `Z` only in `z`.
fn pool(s: &BBScheme, gens: &[Generator], z: usize, zset: &BTreeSet<usize>) -> Vec<Polynomial> {
    let arity = s.arity();
    let zt = Term::var(arity, z);
    let mut out: Vec<Polynomial> = gens.iter().filter(|g| !g.poly.coeff(&zt).is_zero()).map(|g| g.poly.clone()).collect();
    let grading = s.arrow_grading().a;
    let deg = |p: &Polynomial| -> Option<Vec<i64>> { grading.iter().map(|r| p.weighted_degree(r).flatten()).collect() };
    let target_deg = deg(&Polynomial::var(arity, z));
    let block: Vec<&Polynomial> = gens.iter().map(|g| &g.poly).filter(|p| deg(p) == target_deg).collect();
    let rows: Vec<BTreeMap<usize, Q>> = block
        .iter()
        .map(|p| {
            p.terms()
                .filter_map(|(t, c)| t.as_var().filter(|v| zset.contains(v)).map(|v| (v, c.clone())))
                .collect()
        })
        .collect();
    if let Some(comb) = solve_combination(&rows, &BTreeMap::from([(z, Q::one())])) {
        let mut f = Polynomial::zero(arity);
        for (k, c) in comb {
            f = &f + &block[k].scale(&c);
        }
        out.push(f);
    }
    let mut seen = BTreeSet::new();
    out.retain(|f| seen.insert(format!("{:?}", f.normalized())));
    out
}

/// Leading-term constraints of `f` for `z`, with every variable outside `Z` projected away
/// (their weights can be taken to be zero). `None` if `z` can never lead.
pub(crate) fn constraints(f: &Polynomial, z: usize, zvars: &[usize]) -> Option<(Term, Vec<Term>)> {
    let arity = f.arity();
    let zt = Term::var(arity, z);
    let proj = |t: &Term| Term::from_exponents((0..arity).map(|u| if zvars.binary_search(&u).is_ok() { u32::from(t.exp(u)) } else { 0 }));
    let mut losers = BTreeSet::new();
    for (t, _) in f.terms() {
        if *t == zt {
            continue;
        }
        if t.exp(z) > 0 {
            return None;
        }
        losers.insert(proj(t));
    }
    // z must also beat the terms free of Z, which weigh 0
    losers.insert(Term::one(arity));
    Some((zt, losers.into_iter().collect()))
}

fn pool_search(s: &BBScheme, z: &[usize], opts: &SearchOptions) -> Result<Separation, ReembedError> {
    let gens = s.natural_generators();
    let zset: BTreeSet<usize> = z.iter().copied().collect();
    let zvars: Vec<usize> = zset.iter().copied().collect();
    let mut pools: Vec<Vec<(Polynomial, (Term, Vec<Term>))>> = Vec::new();
    for &zi in z {
        let p: Vec<_> = pool(s, &gens, zi, &zset)
            .into_iter()
            .filter_map(|f| constraints(&f, zi, &zvars).map(|c| (f, c)))
            .collect();
        if p.is_empty() {
            return Ok(Separation::NotFound);
        }
        pools.push(p);
    }
    // Most constrained variables first.
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by_key(|&i| pools[i].len());
    let mut nodes = 0u64;
    let mut picks = vec![0usize; z.len()];
    let found = dfs(&pools, &order, 0, &mut picks, &mut Vec::new(), s.arity(), &mut nodes, opts.node_budget)?;
    let Some(w) = found else { return Ok(Separation::NotFound) };
    let f: Vec<Polynomial> = (0..z.len()).map(|i| pools[i][picks[i]].0.clone()).collect();
    let sigma = OrderingMatrix::from_rational_weights(&w)?;
    let witness = SeparatingWitness { z: z.to_vec(), f, w, sigma };
    if !witness.verify() {
        return Err(ReembedError::Check("pool witness has a wrong leading term".into()));
    }
    Ok(Separation::Found(witness))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    pools: &[Vec<(Polynomial, (Term, Vec<Term>))>],
    order: &[usize],
    depth: usize,
    picks: &mut [usize],
    acc: &mut Vec<(Term, Vec<Term>)>,
    arity: usize,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Vec<Q>>, ReembedError> {
    *nodes += 1;
    if *nodes > budget {
        return Err(ReembedError::SearchBudget(budget));
    }
    let Some(w) = lp_realizable(arity, acc) else { return Ok(None) };
    if depth == order.len() {
        return Ok(Some(w));
    }
    let i = order[depth];
    for (k, (_, c)) in pools[i].iter().enumerate() {
        picks[i] = k;
        acc.push(c.clone());
        let r = dfs(pools, order, depth + 1, picks, acc, arity, nodes, budget)?;
        acc.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderideal::OrderIdeal;

    fn names(s: &BBScheme, ns: &[&str]) -> Vec<usize> {
        ns.iter().map(|n| s.var_by_name(n).unwrap()).collect()
    }

    const LSHAPE_Z: [&str; 13] =
        ["c11", "c12", "c13", "c14", "c15", "c23", "c24", "c25", "c31", "c32", "c34", "c44", "c53"];

    #[test]
    fn lshape_printed_tuple_separates() {
        let s = BBScheme::new(OrderIdeal::lshape());
        let z = names(&s, &LSHAPE_Z);
        let w = check_separating(&s, &z).unwrap().expect("witness");
        assert!(w.verify());
    }

    #[test]
    fn lshape_fourteen_is_too_many() {
        let s = BBScheme::new(OrderIdeal::lshape());
        let mut z = names(&s, &LSHAPE_Z);
        z.push(s.var_by_name("c54").unwrap());
        assert!(matches!(check_separating_with(&s, &z, &SearchOptions::default()).unwrap(), Separation::Impossible(_)));
    }

    #[test]
    fn degree_zero_variables_never_separate() {
        let s = BBScheme::new(OrderIdeal::lshape());
        let z = names(&s, &["c41"]);
        assert!(matches!(check_separating_with(&s, &z, &SearchOptions::default()).unwrap(), Separation::Impossible(_)));
    }

    #[test]
    fn empty_tuple_is_trivially_separating() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 1]).unwrap());
        assert!(check_separating(&s, &[]).unwrap().is_some());
    }

    #[test]
    fn pool_search_finds_non_exposed_tuple() {
        // {1, y, x, y^2}: not MaxDeg
        let o = OrderIdeal::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2]]).unwrap();
        let s = BBScheme::new(o);
        let z = s.exposure().non_exposed;
        let w = check_separating(&s, &z).unwrap().expect("witness");
        assert!(w.verify());
    }
}
