use std::fmt;

/// A power product `x_1^{e_1} ... x_n^{e_n}` stored as a dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    exps: Box<[u16]>,
}

impl Term {
    pub fn one(arity: usize) -> Self {
        Term {
            exps: vec![0; arity].into_boxed_slice(),
        }
    }

    pub fn var(arity: usize, index: usize) -> Self {
        Self::var_pow(arity, index, 1)
    }

    pub fn var_pow(arity: usize, index: usize, exp: u16) -> Self {
        assert!(index < arity, "variable index {index} out of range {arity}");
        let mut exps = vec![0; arity];
        exps[index] = exp;
        Term {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        let exps: Vec<u16> = exps
            .into_iter()
            .map(|e| u16::try_from(e).expect("exponent exceeds u16 range"))
            .collect();
        Term {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u16 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the variable if the term is a single variable to the first power.
    pub fn as_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Term) -> Term {
        debug_assert_eq!(self.arity(), other.arity());
        let exps: Vec<u16> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Term {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn mul_var(&self, index: usize) -> Term {
        let mut exps = self.exps.clone();
        exps[index] = exps[index].checked_add(1).expect("exponent overflow");
        Term { exps }
    }

    pub fn divides(&self, other: &Term) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Term) -> Option<Term> {
        if !self.divides(other) {
            return None;
        }
        let exps: Vec<u16> = other
            .exps
            .iter()
            .zip(self.exps.iter())
            .map(|(&a, &b)| a - b)
            .collect();
        Some(Term {
            exps: exps.into_boxed_slice(),
        })
    }

    pub fn div_var(&self, index: usize) -> Option<Term> {
        if self.exps[index] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[index] -= 1;
        Some(Term { exps })
    }

    pub fn lcm(&self, other: &Term) -> Term {
        let exps: Vec<u16> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.max(b))
            .collect();
        Term {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn is_coprime(&self, other: &Term) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Weighted degree `w · log(t)`.
    pub fn weight(&self, w: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(w.iter())
            .map(|(&e, &wi)| e as i64 * wi)
            .sum()
    }

    /// Projects onto the variables `vars` (in that order).
    pub fn restrict(&self, vars: &[usize]) -> Term {
        Term {
            exps: vars.iter().map(|&v| self.exps[v]).collect(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// Graded reverse lexicographic comparison of two exponent vectors.
pub fn degrevlex_cmp(a: &Term, b: &Term) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            // the term with the smaller last exponent is the larger one
            other => return other.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn divisibility_and_quotients() {
        let a = Term::from_exponents([1, 2, 0]);
        let b = Term::from_exponents([2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), Some(Term::from_exponents([1, 0, 1])));
        assert_eq!(a.lcm(&b), b);
        assert!(Term::from_exponents([1, 0, 0]).is_coprime(&Term::from_exponents([0, 3, 1])));
    }

    #[test]
    fn degrevlex_basics() {
        let x = Term::var(3, 0);
        let y = Term::var(3, 1);
        let z = Term::var(3, 2);
        assert_eq!(degrevlex_cmp(&x, &y), Ordering::Greater);
        assert_eq!(degrevlex_cmp(&y, &z), Ordering::Greater);
        // x*z < y^2 in degrevlex
        assert_eq!(degrevlex_cmp(&x.mul(&z), &y.mul(&y)), Ordering::Less);
    }

    #[test]
    fn single_variable_detection() {
        assert_eq!(Term::var(4, 2).as_var(), Some(2));
        assert_eq!(Term::var_pow(4, 2, 2).as_var(), None);
        assert_eq!(Term::one(4).as_var(), None);
    }
}
