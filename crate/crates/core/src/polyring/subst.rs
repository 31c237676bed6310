use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{PolyError, Polynomial, Q, Term};

/// Assignment of polynomials to variables, applied as the ring morphism that fixes
/// every unassigned variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionMap {
    arity: usize,
    assignments: BTreeMap<usize, Polynomial>,
}

impl SubstitutionMap {
    pub fn new(arity: usize) -> Self {
        SubstitutionMap {
            arity,
            assignments: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn insert(&mut self, var: usize, image: Polynomial) {
        assert!(var < self.arity);
        assert_eq!(image.arity(), self.arity);
        self.assignments.insert(var, image);
    }

    pub fn get(&self, var: usize) -> Option<&Polynomial> {
        self.assignments.get(&var)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignments.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.assignments.iter().map(|(&v, p)| (v, p))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// No assigned variable occurs in any assigned image.
    pub fn is_coherent(&self) -> bool {
        self.assignments
            .values()
            .all(|img| self.assignments.keys().all(|&v| !img.contains_var(v)))
    }

    /// The image of variable `v` (itself when unassigned).
    pub fn image(&self, v: usize) -> Polynomial {
        self.assignments
            .get(&v)
            .cloned()
            .unwrap_or_else(|| Polynomial::var(self.arity, v))
    }

    /// `other ∘ self`: first apply `self`, then `other`, recorded on every variable that
    /// either map touches.
    pub fn then(&self, other: &SubstitutionMap) -> SubstitutionMap {
        let mut out = SubstitutionMap::new(self.arity);
        let vars: std::collections::BTreeSet<usize> = self.domain().chain(other.domain()).collect();
        for v in vars {
            out.insert(v, substitute(&self.image(v), other));
        }
        out
    }
}

/// Image of `f` under the substitution, all variables replaced simultaneously.
pub fn substitute(f: &Polynomial, s: &SubstitutionMap) -> Polynomial {
    let arity = f.arity();
    if s.is_empty() {
        return f.clone();
    }
    let mut powers: HashMap<(usize, u16), Polynomial> = HashMap::new();
    let mut out = Polynomial::zero(arity);
    for (t, c) in f.terms() {
        let mut rest = t.exponents().to_vec();
        let mut factor = Polynomial::one(arity);
        for (&v, img) in &s.assignments {
            let e = rest[v];
            if e == 0 {
                continue;
            }
            rest[v] = 0;
            let p = powers
                .entry((v, e))
                .or_insert_with(|| img.pow(e as u32));
            factor = &factor * p;
            if factor.is_zero() {
                break;
            }
        }
        if factor.is_zero() {
            continue;
        }
        let rest = Term::from_exponents(rest.into_iter().map(u32::from));
        out.add_scaled(c, &rest, &factor);
    }
    out
}

/// Turns a separating tuple `(f_1, …, f_s)` for `(z_1, …, z_s)` into a coherent map
/// `z_i ↦ h_i` with no `z_j` in any `h_i` and `z_i − h_i ∈ ⟨F⟩`.
///
/// Each `f_i` must contain `z_i` with nonzero coefficient and every other term of `f_i`
/// must have strictly smaller `w`-weight.
pub fn coherentize(f: &[Polynomial], z: &[usize], w: &[Q]) -> Result<SubstitutionMap, PolyError> {
    if f.len() != z.len() {
        return Err(PolyError::NotSeparating(format!(
            "{} polynomials for {} variables",
            f.len(),
            z.len()
        )));
    }
    let Some(first) = f.first() else {
        return Ok(SubstitutionMap::new(w.len()));
    };
    let arity = first.arity();
    let weight = |t: &Term| -> Q {
        t.exponents()
            .iter()
            .zip(w)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, wi)| wi * Q::from_integer(e.into()))
            .fold(Q::zero(), |a, b| a + b)
    };
    let mut h = Vec::with_capacity(z.len());
    for (fi, &zi) in f.iter().zip(z) {
        let zt = Term::var(arity, zi);
        let c = fi.coeff(&zt);
        if c.is_zero() {
            return Err(PolyError::NotSeparating(format!("variable {zi} missing from its polynomial")));
        }
        let wz = weight(&zt);
        if fi.terms().any(|(t, _)| *t != zt && weight(t) >= wz) {
            return Err(PolyError::NotSeparating(format!(
                "variable {zi} is not the strictly heaviest term of its polynomial"
            )));
        }
        // f = c·z + r  ⇒  z − h with h = −r/c
        let mut hi = fi.scale(&(-c.recip()));
        hi.add_term(zt, Q::one());
        h.push(hi);
    }

    let mut map = SubstitutionMap::new(arity);
    for (&zi, hi) in z.iter().zip(&h) {
        map.insert(zi, hi.clone());
    }
    // Every rewrite replaces a term by strictly lighter ones and weights live in a
    // discrete set, so this stabilizes.
    let limit = 10_000;
    for _ in 0..limit {
        if map.is_coherent() {
            return Ok(map);
        }
        let mut next = SubstitutionMap::new(arity);
        for (v, img) in map.iter() {
            let needs = map.domain().any(|u| img.contains_var(u));
            if needs {
                next.insert(v, substitute(img, &map));
            } else {
                next.insert(v, img.clone());
            }
        }
        map = next;
    }
    Err(PolyError::NotSeparating("coherentization did not stabilize".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn substitution_to_zero() {
        let mut s = SubstitutionMap::new(3);
        s.insert(0, Polynomial::zero(3));
        assert!(substitute(&Polynomial::var(3, 0), &s).is_zero());
    }

    #[test]
    fn substitution_expands_binomial() {
        // c21^2 + c31 with c21 ↦ c41 + 1
        let (c21, c31, c41) = (0, 1, 2);
        let mut s = SubstitutionMap::new(3);
        s.insert(c21, &Polynomial::var(3, c41) + &Polynomial::one(3));
        let f = &Polynomial::var(3, c21).pow(2) + &Polynomial::var(3, c31);
        let g = substitute(&f, &s);
        let expected = &(&(&Polynomial::var(3, c41).pow(2) + &Polynomial::var(3, c41).scale(&q(2)))
            + &Polynomial::var(3, c31))
            + &Polynomial::one(3);
        assert_eq!(g, expected);
    }

    #[test]
    fn chained_tuple_becomes_coherent() {
        // z1 − a, z2 − z1·b
        let (z1, z2, a, b) = (0, 1, 2, 3);
        let v = |i| Polynomial::var(4, i);
        let f1 = &v(z1) - &v(a);
        let f2 = &v(z2) - &(&v(z1) * &v(b));
        let w = vec![q(2), q(4), q(1), q(1)];
        let map = coherentize(&[f1, f2], &[z1, z2], &w).unwrap();
        assert!(map.is_coherent());
        assert_eq!(map.get(z1).unwrap(), &v(a));
        assert_eq!(map.get(z2).unwrap(), &(&v(a) * &v(b)));
    }

    #[test]
    fn coherentize_rejects_wrong_leading_term() {
        let v = |i| Polynomial::var(2, i);
        let f = &v(0) - &(&v(1) * &v(1));
        let w = vec![q(1), q(1)];
        assert!(coherentize(&[f], &[0], &w).is_err());
    }
}
