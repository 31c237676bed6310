//! Buchberger's algorithm with the normal selection strategy and the Gebauer–Möller
//! installation of Buchberger's two criteria.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{OrderingMatrix, PolyError, Polynomial, Q, Term};

type Key = Vec<i64>;

#[derive(Clone, Debug)]
pub struct GbOptions {
    /// Maximum number of single-term reduction steps before giving up.
    pub step_budget: u64,
    /// Only S-pairs whose lcm has first-row weight at most this bound are processed.
    /// The result is then a Gröbner basis up to that degree, which is exact in those
    /// degrees when the input is homogeneous for the first ordering row.
    pub degree_bound: Option<i64>,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions {
            step_budget: 10_000_000,
            degree_bound: None,
        }
    }
}

#[derive(Clone, Debug)]
struct GPoly {
    // sorted by decreasing key, leading coefficient 1
    terms: Vec<(Key, Term, Q)>,
}

impl GPoly {
    fn lt(&self) -> &Term {
        &self.terms[0].1
    }
    fn lkey(&self) -> &Key {
        &self.terms[0].0
    }
}

fn add_keys(a: &Key, b: &Key) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_keys(a: &Key, b: &Key) -> Key {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

struct Engine<'a> {
    order: &'a OrderingMatrix,
    polys: Vec<GPoly>,
    active: Vec<usize>,
    steps: u64,
    budget: u64,
}

impl<'a> Engine<'a> {
    fn new(order: &'a OrderingMatrix, budget: u64) -> Self {
        Engine {
            order,
            polys: Vec::new(),
            active: Vec::new(),
            steps: 0,
            budget,
        }
    }

    fn to_map(&self, f: &Polynomial) -> BTreeMap<Key, (Term, Q)> {
        f.terms()
            .map(|(t, c)| (self.order.key(t), (t.clone(), c.clone())))
            .collect()
    }

    fn find_reducer(&self, t: &Term, among: &[usize]) -> Option<usize> {
        among
            .iter()
            .copied()
            .find(|&i| self.polys[i].lt().divides(t))
    }

    /// Full reduction of `p` by the polynomials `among`, without normalization.
    fn reduce_raw(&mut self, mut p: BTreeMap<Key, (Term, Q)>, among: &[usize]) -> Result<Vec<(Key, Term, Q)>, PolyError> {
        let mut rem: Vec<(Key, Term, Q)> = Vec::new();
        while let Some((key, (t, c))) = p.pop_last() {
            match self.find_reducer(&t, among) {
                None => rem.push((key, t, c)),
                Some(i) => {
                    self.steps += 1;
                    if self.steps > self.budget {
                        return Err(PolyError::BudgetExhausted { steps: self.steps });
                    }
                    let g = &self.polys[i];
                    let m = g.lt().quotient_of(&t).expect("reducer divides");
                    let mkey = sub_keys(&key, g.lkey());
                    for (gk, gt, gc) in &g.terms[1..] {
                        let k = add_keys(&mkey, gk);
                        let d = -(&c * gc);
                        match p.entry(k) {
                            Entry::Vacant(v) => {
                                v.insert((gt.mul(&m), d));
                            }
                            Entry::Occupied(mut o) => {
                                o.get_mut().1 += d;
                                if o.get().1.is_zero() {
                                    o.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(rem)
    }

    /// Full reduction followed by normalization to leading coefficient 1.
    fn reduce(&mut self, p: BTreeMap<Key, (Term, Q)>, among: &[usize]) -> Result<Option<GPoly>, PolyError> {
        let mut rem = self.reduce_raw(p, among)?;
        if rem.is_empty() {
            return Ok(None);
        }
        let inv = rem[0].2.recip();
        for r in rem.iter_mut() {
            r.2 *= &inv;
        }
        Ok(Some(GPoly { terms: rem }))
    }

    fn spoly(&self, i: usize, j: usize) -> BTreeMap<Key, (Term, Q)> {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let l = f.lt().lcm(g.lt());
        let lkey = self.order.key(&l);
        let mut out: BTreeMap<Key, (Term, Q)> = BTreeMap::new();
        for (poly, sign) in [(f, Q::one()), (g, -Q::one())] {
            let m = poly.lt().quotient_of(&l).expect("lcm");
            let mkey = sub_keys(&lkey, poly.lkey());
            for (k, t, c) in &poly.terms[1..] {
                let key = add_keys(&mkey, k);
                let d = c * &sign;
                let e = out.entry(key).or_insert_with(|| (t.mul(&m), Q::zero()));
                e.1 += d;
            }
        }
        out.retain(|_, v| !v.1.is_zero());
        out
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    lcm_key: Key,
    i: usize,
    j: usize,
}

/// Reduced Gröbner basis of `⟨gens⟩` with respect to `Ord(order)`, sorted by increasing
/// leading term, each polynomial monic.
pub fn groebner_basis(order: &OrderingMatrix, gens: &[Polynomial]) -> Result<Vec<Polynomial>, PolyError> {
    groebner_basis_with(order, gens, &GbOptions::default())
}

pub fn groebner_basis_with(
    order: &OrderingMatrix,
    gens: &[Polynomial],
    opts: &GbOptions,
) -> Result<Vec<Polynomial>, PolyError> {
    let arity = order.arity();
    for g in gens {
        if g.arity() != arity {
            return Err(PolyError::ArityMismatch { expected: arity, found: g.arity() });
        }
    }
    let mut eng = Engine::new(order, opts.step_budget);
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();

    // Feed inputs smallest leading term first so that early basis elements are simple.
    let mut inputs: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by(|a, b| {
        let la = order.leading_term(a).expect("nonzero").0;
        let lb = order.leading_term(b).expect("nonzero").0;
        order.compare(&la, &lb).then(a.len().cmp(&b.len()))
    });
    for f in inputs {
        let map = eng.to_map(f);
        let active = eng.active.clone();
        if let Some(h) = eng.reduce(map, &active)? {
            install(&mut eng, &mut pairs, h, opts);
        }
    }

    while let Some(pair) = pairs.pop_first() {
        let s = eng.spoly(pair.i, pair.j);
        let active = eng.active.clone();
        if let Some(h) = eng.reduce(s, &active)? {
            install(&mut eng, &mut pairs, h, opts);
        }
    }

    // Interreduce the minimal basis.
    let basis = eng.active.clone();
    let mut reduced: Vec<GPoly> = Vec::with_capacity(basis.len());
    for &i in &basis {
        let others: Vec<usize> = basis.iter().copied().filter(|&k| k != i).collect();
        let head = eng.polys[i].terms[0].clone();
        let tail: BTreeMap<Key, (Term, Q)> = eng.polys[i].terms[1..]
            .iter()
            .map(|(k, t, c)| (k.clone(), (t.clone(), c.clone())))
            .collect();
        let mut terms = vec![head];
        terms.extend(eng.reduce_raw(tail, &others)?);
        reduced.push(GPoly { terms });
    }
    reduced.sort_by(|a, b| a.lkey().cmp(b.lkey()));
    Ok(reduced
        .into_iter()
        .map(|g| Polynomial::from_terms(arity, g.terms.into_iter().map(|(_, t, c)| (t, c))))
        .collect())
}

fn install(eng: &mut Engine<'_>, pairs: &mut BTreeSet<Pair>, h: GPoly, opts: &GbOptions) {
    let hi = eng.polys.len();
    let hlt = h.lt().clone();
    eng.polys.push(h);
    let order = eng.order;

    let lcm_with_h = |g: usize, eng: &Engine<'_>| eng.polys[g].lt().lcm(&hlt);
    let coprime = |g: usize, eng: &Engine<'_>| eng.polys[g].lt().is_coprime(&hlt);

    // Candidate pairs (h, g): criterion M, keeping coprime pairs around as witnesses.
    let mut c: Vec<usize> = eng.active.clone();
    let mut d: Vec<usize> = Vec::new();
    while let Some(g1) = c.pop() {
        let l1 = lcm_with_h(g1, eng);
        let dominated = c
            .iter()
            .chain(d.iter())
            .any(|&g2| lcm_with_h(g2, eng).divides(&l1));
        if coprime(g1, eng) || !dominated {
            d.push(g1);
        }
    }
    let mut newpairs = Vec::new();
    for g in d {
        if coprime(g, eng) {
            continue;
        }
        let key = order.key(&lcm_with_h(g, eng));
        if let Some(bound) = opts.degree_bound {
            if key[0] > bound {
                continue;
            }
        }
        newpairs.push(Pair { lcm_key: key, i: g.min(hi), j: g.max(hi) });
    }
    // Criterion B on the old pairs.
    let doomed: Vec<Pair> = pairs
        .iter()
        .filter(|p| {
            let l = eng.polys[p.i].lt().lcm(eng.polys[p.j].lt());
            hlt.divides(&l) && lcm_with_h(p.i, eng) != l && lcm_with_h(p.j, eng) != l
        })
        .cloned()
        .collect();
    for p in doomed {
        pairs.remove(&p);
    }
    pairs.extend(newpairs);
    eng.active.retain(|&g| !hlt.divides(eng.polys[g].lt()));
    eng.active.push(hi);
}

/// Full normal form of `f` with respect to `basis` (any finite set; the remainder is
/// canonical only when `basis` is a Gröbner basis).
pub fn normal_form(order: &OrderingMatrix, f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut eng = Engine::new(order, u64::MAX);
    for b in basis.iter().filter(|b| !b.is_zero()) {
        let mut terms: Vec<(Key, Term, Q)> = b
            .terms()
            .map(|(t, c)| (order.key(t), t.clone(), c.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let inv = terms[0].2.recip();
        for t in terms.iter_mut() {
            t.2 *= &inv;
        }
        eng.polys.push(GPoly { terms });
    }
    let all: Vec<usize> = (0..eng.polys.len()).collect();
    let map = eng.to_map(f);
    let r = eng.reduce_raw(map, &all).expect("unbounded budget");
    Polynomial::from_terms(f.arity(), r.into_iter().map(|(_, t, c)| (t, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn linear_system_lex() {
        // {x − 1, y − x} with lex → {y − 1, x − 1}
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let one = Polynomial::one(2);
        let gb = groebner_basis(&OrderingMatrix::lex(2), &[&x - &one, &y - &x]).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&(&x - &one)));
        assert!(gb.contains(&(&y - &one)));
    }

    #[test]
    fn twisted_cubic_degrevlex() {
        // ⟨x^2 − y, x^3 − z⟩ contains y*x − z and y^2 − x z
        let v = |i| Polynomial::var(3, i);
        let f1 = &(&v(0) * &v(0)) - &v(1);
        let f2 = &(&(&v(0) * &v(0)) * &v(0)) - &v(2);
        let order = OrderingMatrix::degrevlex(3);
        let gb = groebner_basis(&order, &[f1.clone(), f2.clone()]).unwrap();
        let g = &(&v(1) * &v(1)) - &(&v(0) * &v(2));
        assert!(normal_form(&order, &g, &gb).is_zero());
        assert!(normal_form(&order, &f1, &gb).is_zero());
        assert!(normal_form(&order, &f2, &gb).is_zero());
        assert!(!normal_form(&order, &v(0), &gb).is_zero());
        let _ = q(0);
    }

    #[test]
    fn budget_is_enforced() {
        let v = |i| Polynomial::var(3, i);
        let f1 = &(&v(0) * &v(0)) - &v(1);
        let f2 = &(&(&v(0) * &v(0)) * &v(0)) - &v(2);
        let opts = GbOptions { step_budget: 1, degree_bound: None };
        let r = groebner_basis_with(&OrderingMatrix::degrevlex(3), &[f1, f2], &opts);
        assert!(matches!(r, Err(PolyError::BudgetExhausted { .. })));
    }
}
