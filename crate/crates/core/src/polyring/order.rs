use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{PolyError, Polynomial, Q, Term};

/// Integer matrix `M` defining the term ordering `Ord(M)`: terms are compared by
/// lexicographic comparison of `M·log(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingMatrix {
    arity: usize,
    rows: Vec<Vec<i64>>,
    sparse: Vec<Vec<(usize, i64)>>,
}

impl OrderingMatrix {
    /// Validates full column rank and positivity of the first nonzero entry in every column.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, PolyError> {
        let arity = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != arity) {
            return Err(PolyError::ArityMismatch {
                expected: arity,
                found: rows.iter().map(|r| r.len()).find(|&l| l != arity).unwrap_or(0),
            });
        }
        for col in 0..arity {
            match rows.iter().map(|r| r[col]).find(|&v| v != 0) {
                Some(v) if v > 0 => {}
                _ => return Err(PolyError::NotATermOrdering(format!("column {col} has no positive leading entry"))),
            }
        }
        if rank_i64(&rows) < arity {
            return Err(PolyError::NotATermOrdering("matrix does not have full column rank".into()));
        }
        Ok(Self::new_unchecked(arity, rows))
    }

    fn new_unchecked(arity: usize, rows: Vec<Vec<i64>>) -> Self {
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, &v)| (i, v))
                    .collect()
            })
            .collect();
        OrderingMatrix { arity, rows, sparse }
    }

    pub fn lex(arity: usize) -> Self {
        let rows = (0..arity)
            .map(|i| (0..arity).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new_unchecked(arity, rows)
    }

    /// Graded reverse lexicographic ordering with `x_1 > x_2 > ... > x_n`.
    pub fn degrevlex(arity: usize) -> Self {
        Self::new_unchecked(arity, degrevlex_rows(arity))
    }

    /// The given weight rows followed by the degrevlex rows. The weight rows must be
    /// non-negative so that every column's first nonzero entry stays positive.
    pub fn weighted(weight_rows: Vec<Vec<i64>>, arity: usize) -> Result<Self, PolyError> {
        for r in &weight_rows {
            if r.len() != arity {
                return Err(PolyError::ArityMismatch { expected: arity, found: r.len() });
            }
            if r.iter().any(|&v| v < 0) {
                return Err(PolyError::NotATermOrdering("negative weight".into()));
            }
        }
        let mut rows = weight_rows;
        rows.extend(degrevlex_rows(arity));
        Ok(Self::new_unchecked(arity, rows))
    }

    /// A block ordering in which every term involving a variable of `elim` is larger
    /// than every term free of them.
    pub fn elimination(elim: &[usize], arity: usize) -> Self {
        let mut row = vec![0; arity];
        for &v in elim {
            row[v] = 1;
        }
        Self::weighted(vec![row], arity).expect("indicator row is non-negative")
    }

    /// Scales a rational weight vector to integers and completes it with degrevlex rows.
    pub fn from_rational_weights(w: &[Q]) -> Result<Self, PolyError> {
        let mut l = num_bigint::BigInt::one();
        for q in w {
            l = l.lcm(q.denom());
        }
        let mut row = Vec::with_capacity(w.len());
        for q in w {
            let v = (q * Q::from_integer(l.clone())).to_integer();
            let v: i64 = i64::try_from(v).map_err(|_| PolyError::NotATermOrdering("weight too large".into()))?;
            row.push(v);
        }
        Self::weighted(vec![row], w.len())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `M · log(t)`
    pub fn key(&self, t: &Term) -> Vec<i64> {
        let e = t.exponents();
        self.sparse
            .iter()
            .map(|r| r.iter().map(|&(i, v)| v * e[i] as i64).sum())
            .collect()
    }

    pub fn compare(&self, t: &Term, u: &Term) -> Ordering {
        let (a, b) = (t.exponents(), u.exponents());
        for r in &self.sparse {
            let mut s = 0i64;
            for &(i, v) in r {
                s += v * (a[i] as i64 - b[i] as i64);
            }
            match s.cmp(&0) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    }

    pub fn compare_checked(&self, t: &Term, u: &Term) -> Result<Ordering, PolyError> {
        for x in [t, u] {
            if x.arity() != self.arity {
                return Err(PolyError::ArityMismatch { expected: self.arity, found: x.arity() });
            }
        }
        Ok(self.compare(t, u))
    }

    pub fn leading_term(&self, f: &Polynomial) -> Result<(Term, Q), PolyError> {
        if f.arity() != self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, found: f.arity() });
        }
        f.terms()
            .max_by(|a, b| self.compare(a.0, b.0))
            .map(|(t, c)| (t.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }
}

fn degrevlex_rows(arity: usize) -> Vec<Vec<i64>> {
    let mut rows = Vec::with_capacity(arity);
    if arity == 0 {
        return rows;
    }
    rows.push(vec![1; arity]);
    for v in (1..arity).rev() {
        let mut r = vec![0; arity];
        r[v] = -1;
        rows.push(r);
    }
    rows
}

/// Rank over the rationals of an integer matrix.
pub(crate) fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
        .collect();
    rank_q(m)
}

pub(crate) fn rank_q(mut m: Vec<Vec<Q>>) -> usize {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_compares_first_exponent() {
        let m = OrderingMatrix::lex(2);
        let t = Term::from_exponents([2, 0]);
        let u = Term::from_exponents([1, 1]);
        assert_eq!(m.compare(&t, &u), Ordering::Greater);
        assert_eq!(m.compare(&t, &t), Ordering::Equal);
    }

    #[test]
    fn rejects_non_orderings() {
        assert!(OrderingMatrix::new(vec![vec![1, 1]]).is_err());
        assert!(OrderingMatrix::new(vec![vec![-1, 0], vec![0, 1]]).is_err());
        assert!(OrderingMatrix::new(vec![vec![1, 1], vec![0, -1]]).is_ok());
    }

    #[test]
    fn degrevlex_matches_direct_comparison() {
        let m = OrderingMatrix::degrevlex(3);
        let terms: Vec<Term> = (0..3)
            .flat_map(|a| (0..3).flat_map(move |b| (0..3).map(move |c| Term::from_exponents([a, b, c]))))
            .collect();
        for t in &terms {
            for u in &terms {
                assert_eq!(m.compare(t, u), super::super::term::degrevlex_cmp(t, u));
            }
        }
    }
}
