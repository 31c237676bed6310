use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::term::degrevlex_cmp;
use super::{Q, Term, VarTable};

/// Sparse polynomial with exact rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Term, Q>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Q::one())
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        Self::monomial(Term::one(arity), c)
    }

    pub fn var(arity: usize, index: usize) -> Self {
        Self::monomial(Term::var(arity, index), Q::one())
    }

    pub fn monomial(term: Term, c: Q) -> Self {
        let arity = term.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(term, c);
        }
        Polynomial { arity, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Term, Q)>>(arity: usize, it: I) -> Self {
        let mut p = Polynomial::zero(arity);
        for (t, c) in it {
            p.add_term(t, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Term, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Term, Q)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, t: &Term) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, t: Term, c: Q) {
        debug_assert_eq!(t.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * t * g`
    pub fn add_scaled(&mut self, c: &Q, t: &Term, g: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (u, a) in &g.terms {
            self.add_term(u.mul(t), c * a);
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, t: &Term, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(u, a)| (u.mul(t), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.arity);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Term::degree).max()
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Term::one(self.arity))
    }

    /// Homogeneous component of standard degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() == d)
                .map(|(t, a)| (t.clone(), a.clone()))
                .collect(),
        }
    }

    /// The degree-one homogeneous component.
    pub fn linear_part(&self) -> Polynomial {
        self.homogeneous_part(1)
    }

    /// Set of variables occurring in the support.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut vars = BTreeSet::new();
        for t in self.terms.keys() {
            vars.extend(t.support());
        }
        vars
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|t| t.exp(v) > 0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|t| t.exp(v)).max().unwrap_or(0)
    }

    /// Returns the common weight of all terms, or `None` if `self` is not homogeneous
    /// for the weight vector `w` (the zero polynomial is homogeneous of every degree).
    pub fn weighted_degree(&self, w: &[i64]) -> Option<Option<i64>> {
        let mut deg = None;
        for t in self.terms.keys() {
            let d = t.weight(w);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    /// Homogeneous with respect to each of the grading rows.
    pub fn is_homogeneous(&self, rows: &[Vec<i64>]) -> bool {
        rows.iter().all(|r| self.weighted_degree(r).is_some())
    }

    /// Sum of the terms selected by `keep`.
    pub fn filter_terms<F: Fn(&Term) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(t))
                .map(|(t, a)| (t.clone(), a.clone()))
                .collect(),
        }
    }

    /// Terms listed in decreasing graded-reverse-lexicographic order.
    pub fn sorted_terms_degrevlex(&self) -> Vec<(&Term, &Q)> {
        let mut v: Vec<(&Term, &Q)> = self.terms.iter().collect();
        v.sort_by(|a, b| degrevlex_cmp(b.0, a.0));
        v
    }

    /// Divides by the coefficient of the degrevlex-leading term.
    pub fn normalized(&self) -> Polynomial {
        match self.sorted_terms_degrevlex().first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// `p` and `self` agree up to a nonzero rational factor.
    pub fn is_scalar_multiple_of(&self, p: &Polynomial) -> bool {
        if self.len() != p.len() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let (t0, a0) = self.terms.iter().next().unwrap();
        let b0 = p.coeff(t0);
        if b0.is_zero() {
            return false;
        }
        let ratio = a0 / &b0;
        self.terms.iter().all(|(t, a)| {
            let b = p.coeff(t);
            !b.is_zero() && *a == &b * &ratio
        })
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (t, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in t.exponents().iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        acc
    }

    /// Renders the polynomial in decreasing degrevlex order, e.g. `-3/2*c11^2*c21 + c43 - 1`.
    pub fn to_string_with(&self, vars: &VarTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (t, c)) in self.sorted_terms_degrevlex().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || t.is_one() {
                factors.push(format_rational(&abs));
            }
            for v in t.support() {
                let e = t.exp(v);
                if e == 1 {
                    factors.push(vars.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", vars.name(v), e));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (t, c) in &small.terms {
            big.add_term(t.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        let (outer, inner) = if self.len() <= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (t, a) in &outer.terms {
            out.add_scaled(a, t, inner);
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x + &y) - &x;
        assert_eq!(p, y);
        assert!((&p - &y).is_zero());
    }

    #[test]
    fn binomial_square() {
        let x = Polynomial::var(2, 0);
        let one = Polynomial::one(2);
        let p = (&x + &one).pow(2);
        assert_eq!(p.len(), 3);
        assert_eq!(p.coeff(&Term::var(2, 0)), q(2));
        assert_eq!(p.constant_term(), q(1));
    }

    #[test]
    fn rendering_is_degrevlex_sorted() {
        let vars = VarTable::new(["a", "b"]).unwrap();
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(2, 1);
        let p = &(&(&a * &b) - &b.scale(&Q::new(BigInt::from(3), BigInt::from(2)))) + &Polynomial::one(2);
        assert_eq!(p.to_string_with(&vars), "a*b - 3/2*b + 1");
    }

    #[test]
    fn homogeneity_detection() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(2, 1);
        let p = &(&a * &a) + &b;
        assert_eq!(p.weighted_degree(&[1, 2]), Some(Some(2)));
        assert_eq!(p.weighted_degree(&[1, 1]), None);
    }
}
