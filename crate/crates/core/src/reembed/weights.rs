//! Weight assignment for planar schemes and elimination of the non-exposed indeterminates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{rewrite, ReembedError, ReembeddingResult};
use crate::bbscheme::{BBScheme, ExposureInfo, GeneratorLabel};
use crate::orderideal::{OrderIdealError, PlateauInfo};
use crate::polyring::{coherentize, lp_realizable, OrderingMatrix, Polynomial, Term, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMethod {
    /// Weights follow the plateau/leg rules with minimal leg parameters.
    Rules,
    /// Variables are weighted one by one, each heavier than the other terms of a generator
    /// whose remaining variables are already weighted.
    Greedy,
    /// The rules left a variable uncovered or violated the leading-term property, and the
    /// weights were recomputed by exact linear feasibility on the chosen generators.
    LpFallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightRule {
    Exposed,
    /// `b_j` has an up-neighbor `x_k b_j` and `x_k t_i ∈ O`.
    UpNeighbor,
    /// Step along a plateau, away from its `x`-end (`x`) or `y`-end (`y`).
    PlateauStep,
    /// Plateau end next to a leg; the weight is a free parameter `p`.
    LegHead,
    /// `depth` steps down a leg from the head variable `head`.
    LegChain { head: usize, depth: i64 },
    /// Generator chosen by the fallback.
    Fallback,
}

#[derive(Clone, Debug)]
pub struct WeightAssignment {
    pub wt: Vec<i64>,
    /// Non-exposed variable → generator in which it is the unique heaviest term.
    pub chosen: BTreeMap<usize, GeneratorLabel>,
    pub rules: Vec<WeightRule>,
    /// Leg head variable → resolved parameter `p`.
    pub p_values: BTreeMap<usize, i64>,
    pub method: WeightMethod,
}

#[derive(Clone, Debug)]
enum Formula {
    /// `1 + Σ wt(v)`
    Sum(Vec<usize>),
    /// `p_group − offset`
    P { group: usize, offset: i64 },
}

struct Builder<'a> {
    s: &'a BBScheme,
    exp: ExposureInfo,
    gens: HashMap<GeneratorLabel, Polynomial>,
    plateaus: Vec<PlateauInfo>,
    formula: Vec<Option<Formula>>,
    chosen: Vec<Option<GeneratorLabel>>,
    rules: Vec<WeightRule>,
    /// group → head variable
    groups: Vec<usize>,
}

const X: usize = 0;
const Y: usize = 1;

impl<'a> Builder<'a> {
    fn term(&self, i: usize) -> &Term {
        self.s.order_ideal().term(i)
    }

    fn border(&self, j: usize) -> &Term {
        self.s.order_ideal().border_term(j)
    }

    fn tidx(&self, t: &Term) -> Option<usize> {
        self.s.order_ideal().term_index(t)
    }

    fn bidx(&self, t: &Term) -> Option<usize> {
        self.s.order_ideal().border_index(t)
    }

    fn free(&self, v: usize) -> bool {
        !self.exp.is_exposed(v) && self.formula[v].is_none()
    }

    fn has_gen(&self, l: &GeneratorLabel) -> bool {
        self.gens.contains_key(l)
    }

    /// Border terms `b_p` with `b_p / x_k ∈ O`.
    fn exposed_border(&self, k: usize) -> Vec<usize> {
        (0..self.s.nu())
            .filter(|&p| self.border(p).div_var(k).and_then(|t| self.tidx(&t)).is_some())
            .collect()
    }

    fn ar_label(a: usize, b: usize, m: usize) -> GeneratorLabel {
        GeneratorLabel::AcrossRim { j: a.min(b), jp: a.max(b), m }
    }

    fn up_neighbor_rule(&self, i: usize, j: usize) -> Option<(GeneratorLabel, Vec<usize>)> {
        for k in [X, Y] {
            let Some(jp) = self.bidx(&self.border(j).mul_var(k)) else { continue };
            let Some(ip) = self.tidx(&self.term(i).mul_var(k)) else { continue };
            let label = GeneratorLabel::NextDoor { j, jp, m: ip };
            if !self.has_gen(&label) || self.chosen.contains(&Some(label)) {
                continue;
            }
            let mut sum = vec![self.s.var(ip, jp)];
            sum.extend(self.exposed_border(k).into_iter().map(|p| self.s.var(ip, p)));
            return Some((label, sum));
        }
        None
    }

    fn plateau_of(&self, j: usize) -> Option<(usize, usize)> {
        self.plateaus
            .iter()
            .enumerate()
            .find_map(|(pi, p)| p.plateau.iter().position(|&q| q == j).map(|l| (pi, l)))
    }

    /// Step within a plateau: towards the neighbor `nb` in direction `dir` (x-case steps
    /// to the previous term using `t_m = y t_i`, y-case to the next using `t_m = x t_i`).
    fn plateau_step(&self, i: usize, j: usize, nb: usize, up: usize) -> Option<(GeneratorLabel, Vec<usize>)> {
        let m = self.tidx(&self.term(i).mul_var(up))?;
        let label = Self::ar_label(j, nb, m);
        let g = self.gens.get(&label)?;
        let v = self.s.var(i, j);
        let mut sum: Vec<usize> = g
            .linear_part()
            .terms()
            .filter_map(|(t, _)| t.as_var())
            .filter(|&u| u != v)
            .collect();
        sum.extend((0..self.s.nu()).map(|q| self.s.var(m, q)));
        Some((label, sum))
    }

    /// Assigns the leg head `c_{ij}` and walks down the leg in direction `dir`.
    fn leg(&mut self, i: usize, j: usize, leg: &[usize], dir: usize) -> bool {
        let other = 1 - dir;
        let head_label = GeneratorLabel::NextDoor { j: leg[0], jp: j, m: i };
        if !self.has_gen(&head_label) {
            return false;
        }
        let head = self.s.var(i, j);
        let group = self.groups.len();
        self.groups.push(head);
        self.formula[head] = Some(Formula::P { group, offset: 0 });
        self.chosen[head] = Some(head_label);
        self.rules[head] = WeightRule::LegHead;

        let mut row = self.term(i).div_var(dir).and_then(|t| self.tidx(&t));
        for lambda in 0..leg.len() {
            let Some(ri) = row else { break };
            let v = self.s.var(ri, leg[lambda]);
            if !self.free(v) || lambda + 1 >= leg.len() {
                break;
            }
            let (cur, next) = (leg[lambda], leg[lambda + 1]);
            let (label, next_row) = if self.border(next).mul_var(dir) == *self.border(cur) {
                (
                    GeneratorLabel::NextDoor { j: next, jp: cur, m: ri },
                    self.term(ri).div_var(dir).and_then(|t| self.tidx(&t)),
                )
            } else {
                let Some(m) = self.tidx(&self.term(ri).mul_var(other)) else { break };
                (
                    Self::ar_label(cur, next, m),
                    self.term(m).div_var(dir).and_then(|t| self.tidx(&t)),
                )
            };
            if !self.has_gen(&label) {
                break;
            }
            self.formula[v] = Some(Formula::P { group, offset: lambda as i64 + 1 });
            self.chosen[v] = Some(label);
            self.rules[v] = WeightRule::LegChain { head, depth: lambda as i64 + 1 };
            row = next_row;
        }
        true
    }

    fn plateau_rule(&mut self, i: usize, j: usize) -> bool {
        let Some((pi, l)) = self.plateau_of(j) else { return false };
        let p = self.plateaus[pi].clone();
        let k = p.plateau.len();
        let (b, t) = (self.border(j), self.term(i));
        let ax = b.exp(X) as i64 - t.exp(X) as i64;
        let ay = b.exp(Y) as i64 - t.exp(Y) as i64;
        let v = self.s.var(i, j);
        if ax > 0 {
            if l >= 1 {
                if let Some((label, sum)) = self.plateau_step(i, j, p.plateau[l - 1], Y) {
                    self.assign_sum(v, label, sum, WeightRule::PlateauStep);
                    return true;
                }
            } else if !p.x_leg.is_empty() && self.leg(i, j, &p.x_leg, X) {
                return true;
            }
        }
        if ay > 0 {
            if l + 1 < k {
                if let Some((label, sum)) = self.plateau_step(i, j, p.plateau[l + 1], X) {
                    self.assign_sum(v, label, sum, WeightRule::PlateauStep);
                    return true;
                }
            } else if !p.y_leg.is_empty() && self.leg(i, j, &p.y_leg, Y) {
                return true;
            }
        }
        false
    }

    fn assign_sum(&mut self, v: usize, label: GeneratorLabel, sum: Vec<usize>, rule: WeightRule) {
        self.formula[v] = Some(Formula::Sum(sum));
        self.chosen[v] = Some(label);
        self.rules[v] = rule;
    }
}

fn evaluate(formula: &[Option<Formula>], p: &[i64], exp: &ExposureInfo) -> Option<Vec<i64>> {
    fn go(
        v: usize,
        formula: &[Option<Formula>],
        p: &[i64],
        exp: &ExposureInfo,
        memo: &mut [Option<i64>],
        active: &mut [bool],
    ) -> Option<i64> {
        if exp.is_exposed(v) {
            return Some(0);
        }
        if let Some(w) = memo[v] {
            return Some(w);
        }
        if active[v] {
            return None;
        }
        active[v] = true;
        let w = match formula[v].as_ref()? {
            Formula::P { group, offset } => p[*group] - offset,
            Formula::Sum(vs) => {
                let mut acc = 1;
                for &u in vs {
                    acc += go(u, formula, p, exp, memo, active)?;
                }
                acc
            }
        };
        active[v] = false;
        memo[v] = Some(w);
        Some(w)
    }
    let n = formula.len();
    let mut memo = vec![None; n];
    let mut active = vec![false; n];
    (0..n).map(|v| go(v, formula, p, exp, &mut memo, &mut active)).collect()
}

fn term_weight(t: &Term, wt: &[i64]) -> i64 {
    t.weight(wt)
}

/// `v` is the unique heaviest term of `g` under `wt`.
fn strictly_heaviest(v: usize, g: &Polynomial, wt: &[i64]) -> bool {
    let vt = Term::var(g.arity(), v);
    if g.coeff(&vt).is_zero() {
        return false;
    }
    g.terms().all(|(t, _)| *t == vt || term_weight(t, wt) < wt[v])
}

/// Weights with `wt = 0` exactly on the exposed indeterminates such that every non-exposed
/// indeterminate is the unique heaviest term of a chosen natural generator.
pub fn weight_assignment(s: &BBScheme) -> Result<WeightAssignment, ReembedError> {
    if s.n() != 2 {
        return Err(OrderIdealError::NotPlanar(s.n()).into());
    }
    let o = s.order_ideal();
    let gens: HashMap<GeneratorLabel, Polynomial> =
        s.natural_generators().into_iter().map(|g| (g.label, g.poly)).collect();
    let exp = s.exposure();
    let arity = s.arity();
    let mut b = Builder {
        s,
        exp: exp.clone(),
        gens,
        plateaus: o.plateaus_and_legs()?,
        formula: vec![None; arity],
        chosen: vec![None; arity],
        rules: vec![WeightRule::Exposed; arity],
        groups: Vec::new(),
    };
    let delta = o.max_degree();
    let mut uncovered = Vec::new();
    for d in (0..=delta).rev() {
        for i in (0..s.mu()).filter(|&i| o.term(i).degree() == d) {
            for j in 0..s.nu() {
                let v = s.var(i, j);
                if !b.free(v) {
                    continue;
                }
                if let Some((label, sum)) = b.up_neighbor_rule(i, j) {
                    b.assign_sum(v, label, sum, WeightRule::UpNeighbor);
                } else if !b.plateau_rule(i, j) {
                    uncovered.push(v);
                }
            }
        }
    }

    let non_exposed = exp.non_exposed.clone();
    if uncovered.is_empty() {
        if let Some(res) = resolve(&b, &non_exposed) {
            return Ok(res);
        }
    }
    if let Some(res) = greedy(&b, &non_exposed) {
        return Ok(res);
    }
    lp_fallback(b, &non_exposed)
}

/// Raises each leg parameter to the least value satisfying its leading-term constraints.
fn resolve(b: &Builder<'_>, non_exposed: &[usize]) -> Option<WeightAssignment> {
    let mut p: Vec<i64> = vec![1; b.groups.len()];
    for f in b.formula.iter().flatten() {
        if let Formula::P { group, offset } = f {
            p[*group] = p[*group].max(offset + 1);
        }
    }
    for _ in 0..10_000 {
        let wt = evaluate(&b.formula, &p, &b.exp)?;
        let mut changed = false;
        for &v in non_exposed {
            let Some(Formula::P { group, .. }) = b.formula[v] else { continue };
            let g = &b.gens[b.chosen[v].as_ref()?];
            let vt = Term::var(g.arity(), v);
            let worst = g.terms().filter(|(t, _)| **t != vt).map(|(t, _)| t.weight(&wt)).max();
            if let Some(worst) = worst {
                if worst >= wt[v] {
                    p[group] += worst - wt[v] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            let ok = non_exposed
                .iter()
                .all(|&v| wt[v] > 0 && strictly_heaviest(v, &b.gens[b.chosen[v].as_ref().unwrap()], &wt));
            if !ok {
                return None;
            }
            let chosen = non_exposed.iter().map(|&v| (v, b.chosen[v].unwrap())).collect();
            let p_values = b.groups.iter().enumerate().map(|(g, &h)| (h, p[g])).collect();
            return Some(WeightAssignment {
                wt,
                chosen,
                rules: b.rules.clone(),
                p_values,
                method: WeightMethod::Rules,
            });
        }
    }
    None
}

/// Assigns variables one at a time, always taking the cheapest variable whose generator has
/// every other term already weighted; its weight is one more than the heaviest such term.
fn greedy(b: &Builder<'_>, non_exposed: &[usize]) -> Option<WeightAssignment> {
    let arity = b.s.arity();
    let mut labels: Vec<&GeneratorLabel> = b.gens.keys().collect();
    labels.sort();
    // (variable, label, variables of the other terms)
    let mut cands: Vec<(usize, GeneratorLabel, Vec<usize>)> = Vec::new();
    for l in labels {
        let g = &b.gens[l];
        for (t, _) in g.terms() {
            let Some(v) = t.as_var() else { continue };
            if b.exp.is_exposed(v) {
                continue;
            }
            let others: BTreeSet<usize> = g.terms().filter(|(u, _)| *u != t).flat_map(|(u, _)| u.support().collect::<Vec<_>>()).collect();
            if !others.contains(&v) {
                cands.push((v, *l, others.into_iter().collect()));
            }
        }
    }
    let mut wt = vec![0i64; arity];
    let mut done: Vec<bool> = (0..arity).map(|v| b.exp.is_exposed(v)).collect();
    let mut chosen = BTreeMap::new();
    let mut rules: Vec<WeightRule> = vec![WeightRule::Exposed; arity];
    for _ in 0..non_exposed.len() {
        let best = cands
            .iter()
            .filter(|(v, _, others)| !done[*v] && others.iter().all(|&u| done[u]))
            .map(|(v, l, _)| {
                let g = &b.gens[l];
                let vt = Term::var(arity, *v);
                let top = g.terms().filter(|(t, _)| **t != vt).map(|(t, _)| t.weight(&wt)).max().unwrap_or(0);
                (top + 1, *v, *l)
            })
            .min()?;
        let (w, v, l) = best;
        wt[v] = w;
        done[v] = true;
        chosen.insert(v, l);
        rules[v] = WeightRule::Fallback;
    }
    Some(WeightAssignment { wt, chosen, rules, p_values: BTreeMap::new(), method: WeightMethod::Greedy })
}

fn lp_fallback(mut b: Builder<'_>, non_exposed: &[usize]) -> Result<WeightAssignment, ReembedError> {
    let arity = b.s.arity();
    // Uncovered variables take the shortest generator in which they occur linearly.
    for &v in non_exposed {
        if b.chosen[v].is_none() {
            let vt = Term::var(arity, v);
            let best = b
                .gens
                .iter()
                .filter(|(_, g)| !g.coeff(&vt).is_zero())
                .min_by_key(|(l, g)| (g.len(), **l))
                .map(|(l, _)| *l);
            let Some(l) = best else {
                return Err(ReembedError::Weights(format!("{} occurs linearly in no generator", b.s.var_name(v))));
            };
            b.chosen[v] = Some(l);
            b.rules[v] = WeightRule::Fallback;
        }
    }
    let keep = |t: &Term| -> Term {
        Term::from_exponents((0..arity).map(|u| if b.exp.is_exposed(u) { 0 } else { t.exp(u) as u32 }))
    };
    let constraints: Vec<(Term, Vec<Term>)> = non_exposed
        .iter()
        .map(|&v| {
            let g = &b.gens[b.chosen[v].as_ref().unwrap()];
            let vt = Term::var(arity, v);
            (vt.clone(), g.terms().filter(|(t, _)| **t != vt).map(|(t, _)| keep(t)).collect())
        })
        .collect();
    let w = lp_realizable(arity, &constraints)
        .ok_or_else(|| ReembedError::Weights("chosen generators admit no separating weights".into()))?;
    let mut l = num_bigint::BigInt::one();
    for q in &w {
        l = l.lcm(q.denom());
    }
    let wt: Vec<i64> = w
        .iter()
        .map(|q| i64::try_from((q * Q::from_integer(l.clone())).to_integer()).map_err(|_| ReembedError::Weights("weight overflow".into())))
        .collect::<Result<_, _>>()?;
    let chosen = non_exposed.iter().map(|&v| (v, b.chosen[v].unwrap())).collect();
    Ok(WeightAssignment { wt, chosen, rules: b.rules, p_values: BTreeMap::new(), method: WeightMethod::LpFallback })
}

impl WeightAssignment {
    /// Property (c): every non-exposed variable is the unique heaviest term of its generator.
    pub fn verify(&self, s: &BBScheme) -> bool {
        let gens: HashMap<GeneratorLabel, Polynomial> =
            s.natural_generators().into_iter().map(|g| (g.label, g.poly)).collect();
        let exp = s.exposure();
        (0..s.arity()).all(|v| {
            if exp.is_exposed(v) {
                self.wt[v] == 0
            } else {
                self.wt[v] > 0
                    && self.chosen.get(&v).and_then(|l| gens.get(l)).is_some_and(|g| strictly_heaviest(v, g, &self.wt))
            }
        })
    }

    /// First row of the elimination ordering.
    pub fn ordering(&self) -> OrderingMatrix {
        OrderingMatrix::weighted(vec![self.wt.clone()], self.wt.len()).expect("weights are non-negative")
    }
}

/// Eliminates all non-exposed indeterminates of a planar scheme by substitution.
pub fn eliminate_non_exposed(s: &BBScheme) -> Result<(WeightAssignment, ReembeddingResult), ReembedError> {
    let wa = weight_assignment(s)?;
    let gens: HashMap<GeneratorLabel, Polynomial> =
        s.natural_generators().into_iter().map(|g| (g.label, g.poly)).collect();
    let z: Vec<usize> = wa.chosen.keys().copied().collect();
    let f: Vec<Polynomial> = z.iter().map(|v| gens[&wa.chosen[v]].clone()).collect();
    let w: Vec<Q> = wa.wt.iter().map(|&x| Q::from_integer(x.into())).collect();
    let map = coherentize(&f, &z, &w)?;
    Ok((wa, rewrite(s, &z, map)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orderideal::OrderIdeal;

    #[test]
    fn box23_table() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 3]).unwrap());
        let wa = weight_assignment(&s).unwrap();
        assert_eq!(wa.method, WeightMethod::Rules);
        assert_eq!(
            wa.wt,
            vec![
                13, 15, 13, 20, 19, 3, 5, 3, 4, 3, 2, 0, 3, 0, 9, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2, 0, 0, 0, 0, 0
            ]
        );
        assert!(wa.verify(&s));
    }

    #[test]
    fn boxes_are_affine_cells() {
        for a in 1..=3 {
            for b in 1..=3 {
                let s = BBScheme::new(OrderIdeal::box_ideal(&[a, b]).unwrap());
                let (wa, r) = eliminate_non_exposed(&s).unwrap();
                assert!(wa.verify(&s), "box {a},{b}");
                assert!(r.is_affine_cell(), "box {a},{b}");
                assert_eq!(r.remaining, s.exposure().exposed_vars());
            }
        }
    }

    #[test]
    fn one_plateau_example_eliminates_ten() {
        let o = OrderIdeal::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1]]).unwrap();
        let s = BBScheme::new(o);
        let (_, r) = eliminate_non_exposed(&s).unwrap();
        let names: Vec<&str> = r.eliminated.iter().map(|&v| s.var_name(v)).collect();
        assert_eq!(names, ["c11", "c12", "c13", "c14", "c21", "c22", "c23", "c24", "c31", "c34"]);
        assert!(r.is_affine_cell());
        for g in &r.generators {
            assert!(r.eliminated.iter().all(|&z| !g.contains_var(z)));
        }
    }

    #[test]
    fn flat_elimination_weights_pick_the_wrong_leading_term() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 3]).unwrap());
        let wa = weight_assignment(&s).unwrap();
        let f = s.natural_generator(GeneratorLabel::NextDoor { j: 0, jp: 2, m: 1 }).unwrap();
        let v = |n: &str| s.var_by_name(n).unwrap();
        let expected = &(&(&s.c(1, 2) - &(&s.c(1, 1) * &s.c(3, 0))) - &(&s.c(1, 3) * &s.c(5, 0))) - &s.c(0, 0);
        assert_eq!(f, expected);
        let (lt, _) = wa.ordering().leading_term(&f).unwrap();
        assert_eq!(lt.as_var(), Some(v("c11")));
        let exp = s.exposure();
        let flat: Vec<i64> = (0..s.arity()).map(|u| i64::from(!exp.is_exposed(u))).collect();
        let tau = OrderingMatrix::weighted(vec![flat], s.arity()).unwrap();
        let (lt, _) = tau.leading_term(&f).unwrap();
        assert_eq!(lt, Term::var(s.arity(), v("c22")).mul_var(v("c41")));
    }

    #[test]
    fn every_small_planar_ideal_gets_valid_weights() {
        for mu in 1..=8 {
            for o in crate::orderideal::planar_order_ideals(mu) {
                let s = BBScheme::new(o.clone());
                let wa = weight_assignment(&s).unwrap();
                assert!(wa.verify(&s), "{o}");
            }
        }
    }

    #[test]
    fn box23_is_an_affine_cell() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 3]).unwrap());
        let (_, r) = eliminate_non_exposed(&s).unwrap();
        assert_eq!(r.remaining.len(), 12);
        assert!(r.is_affine_cell());
    }
}
