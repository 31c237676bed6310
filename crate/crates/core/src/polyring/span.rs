//! K-linear spans of polynomials and degree-bounded ideal membership certificates.

use std::collections::BTreeMap;

use super::{Polynomial, Term};

/// A finite-dimensional K-subspace of the polynomial ring, stored in echelon form keyed by
/// each element's largest term.
#[derive(Clone, Debug)]
pub struct LinearSpan {
    arity: usize,
    basis: BTreeMap<Term, Polynomial>,
}

impl LinearSpan {
    pub fn new(arity: usize) -> Self {
        LinearSpan { arity, basis: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Remainder of `f` after eliminating every pivot term.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let mut f = f.clone();
        loop {
            let hit = f
                .terms()
                .rev()
                .find(|(t, _)| self.basis.contains_key(*t))
                .map(|(t, c)| (t.clone(), c.clone()));
            let Some((t, c)) = hit else { return f };
            let b = &self.basis[&t];
            f = &f - &b.scale(&c);
        }
    }

    /// Adds `f` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, f: &Polynomial) -> bool {
        let r = self.reduce(f);
        let Some((t, c)) = r.terms().next_back().map(|(t, c)| (t.clone(), c.clone())) else {
            return false;
        };
        self.basis.insert(t, r.scale(&c.recip()));
        true
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Polynomial> {
        self.basis.values()
    }

    /// The reduced echelon basis: each element is monic in its pivot and contains no
    /// other pivot term. Ordered by increasing pivot.
    pub fn reduced_basis(&self) -> Vec<Polynomial> {
        let mut done: BTreeMap<Term, Polynomial> = BTreeMap::new();
        for (pivot, e) in &self.basis {
            let mut r = e.clone();
            loop {
                let hit = r
                    .terms()
                    .rev()
                    .find(|(t, _)| *t != pivot && done.contains_key(*t))
                    .map(|(t, c)| (t.clone(), c.clone()));
                let Some((t, c)) = hit else { break };
                r = &r - &done[&t].scale(&c);
            }
            done.insert(pivot.clone(), r);
        }
        done.into_values().collect()
    }
}

/// All terms of degree at most `d` in `arity` variables.
pub fn terms_up_to(arity: usize, d: u32) -> Vec<Term> {
    let mut out = vec![Term::one(arity)];
    let mut frontier = vec![Term::one(arity)];
    for _ in 0..d {
        let mut next = Vec::new();
        for t in &frontier {
            let last = t.exponents().iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in last..arity {
                next.push(t.mul_var(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Decides whether `f = Σ m_k g_k` with every multiplier term `m_k` of degree at most
/// `max_mult_deg`. All polynomials must be homogeneous for the grading rows; only
/// multipliers of matching degree are generated. `true` certifies `f ∈ ⟨gens⟩`.
pub fn in_truncated_ideal(f: &Polynomial, gens: &[Polynomial], grading: &[Vec<i64>], max_mult_deg: u32) -> bool {
    if f.is_zero() {
        return true;
    }
    let deg = |p: &Polynomial| -> Option<Vec<i64>> {
        grading.iter().map(|r| p.weighted_degree(r).flatten()).collect()
    };
    let Some(target) = deg(f) else {
        return false;
    };
    let monos = terms_up_to(f.arity(), max_mult_deg);
    let mono_deg: Vec<Vec<i64>> = monos.iter().map(|m| grading.iter().map(|r| m.weight(r)).collect()).collect();
    let mut span = LinearSpan::new(f.arity());
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let Some(dg) = deg(g) else { continue };
        for (m, dm) in monos.iter().zip(&mono_deg) {
            if dm.iter().zip(&dg).zip(&target).all(|((a, b), c)| a + b == *c) {
                span.insert(&g.mul_term(m, &num_traits::One::one()));
            }
        }
    }
    span.contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::q_int;

    #[test]
    fn span_membership() {
        let v = |i| Polynomial::var(3, i);
        let mut s = LinearSpan::new(3);
        assert!(s.insert(&(&v(0) + &v(1))));
        assert!(s.insert(&(&v(1) - &v(2))));
        assert!(!s.insert(&(&v(0) + &v(2))));
        assert!(s.contains(&(&v(0).scale(&q_int(2)) + &(&v(1) + &v(2)))));
        assert!(!s.contains(&v(2)));
    }

    #[test]
    fn truncated_membership_needs_enough_degree() {
        // x*y ∈ ⟨x⟩ with a degree-1 multiplier, but not with constants only
        let x = Polynomial::var(2, 0);
        let xy = &x * &Polynomial::var(2, 1);
        let grading = vec![vec![1, 1]];
        assert!(in_truncated_ideal(&xy, &[x.clone()], &grading, 1));
        assert!(!in_truncated_ideal(&xy, &[x], &grading, 0));
    }

    #[test]
    fn terms_up_to_count() {
        assert_eq!(terms_up_to(3, 2).len(), 10);
    }
}
