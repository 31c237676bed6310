//! Exact feasibility of `w · (log winner − log loser) > 0`, `w ≥ 0`, decided with a
//! phase-one simplex over the rationals on the normalized system `… ≥ 1`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::{OrderingMatrix, PolyError, Q, Term};

/// Returns a non-negative rational weight vector under which every winner is strictly
/// heavier than each of its losers, or `None` if no such vector exists.
pub fn lp_realizable(arity: usize, constraints: &[(Term, Vec<Term>)]) -> Option<Vec<Q>> {
    let mut rows: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (win, losers) in constraints {
        for l in losers {
            let d: Vec<i64> = win
                .exponents()
                .iter()
                .zip(l.exponents())
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect();
            if d.iter().all(|&v| v <= 0) {
                // w·d ≤ 0 for every w ≥ 0
                return None;
            }
            rows.insert(d);
        }
    }
    if rows.is_empty() {
        return Some(vec![Q::zero(); arity]);
    }
    let rows: Vec<Vec<i64>> = rows.into_iter().collect();
    // Only columns that occur in some row matter; the others stay 0.
    let cols: Vec<usize> = (0..arity)
        .filter(|&c| rows.iter().any(|r| r[c] != 0))
        .collect();
    let a: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| Q::from_integer(r[c].into())).collect())
        .collect();
    let sol = phase_one(&a)?;
    let mut w = vec![Q::zero(); arity];
    for (k, &c) in cols.iter().enumerate() {
        w[c] = sol[k].clone();
    }
    Some(w)
}

/// Completes a weight vector to an ordering matrix (weights first, then degrevlex).
pub fn ordering_from_weights(w: &[Q]) -> Result<OrderingMatrix, PolyError> {
    OrderingMatrix::from_rational_weights(w)
}

/// Finds `x ≥ 0` with `A x ≥ 1` (componentwise), or `None`.
fn phase_one(a: &[Vec<Q>]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = a[0].len();
    // columns: x (n) | surplus s (m) | artificial r (m) | rhs
    let width = n + 2 * m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![Q::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = -Q::one();
        r[n + m + i] = Q::one();
        r[rhs] = Q::one();
        t.push(r);
    }
    // objective: minimize sum of artificials; reduced costs = −(sum of rows) on non-artificials
    let mut obj = vec![Q::zero(); width];
    for row in t.iter().take(m) {
        for c in 0..n + m {
            obj[c] -= &row[c];
        }
        obj[rhs] -= &row[rhs];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    loop {
        // Bland: smallest column with negative reduced cost
        let Some(enter) = (0..n + 2 * m).find(|&c| t[m][c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (p, _) = leave?; // unbounded cannot happen in phase one
        let piv = t[p][enter].clone();
        for c in 0..width {
            if !t[p][c].is_zero() {
                t[p][c] = &t[p][c] / &piv;
            }
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for c in 0..width {
                if !prow[c].is_zero() {
                    row[c] -= &f * &prow[c];
                }
            }
        }
        basis[p] = enter;
    }
    if !t[m][rhs].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][rhs].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn constant_loser_gives_unit_weight() {
        let z = Term::var(3, 1);
        let w = lp_realizable(3, &[(z.clone(), vec![Term::one(3)])]).unwrap();
        assert!(w[1].is_positive());
        assert!(w[0].is_zero() && w[2].is_zero());
    }

    #[test]
    fn square_beats_variable_is_infeasible() {
        let z = Term::var(2, 0);
        let z2 = Term::var_pow(2, 0, 2);
        assert!(lp_realizable(2, &[(z, vec![z2])]).is_none());
    }

    #[test]
    fn cyclic_preferences_are_infeasible() {
        let a = Term::var(3, 0);
        let b = Term::var(3, 1);
        let c = Term::var(3, 2);
        let cons = vec![
            (a.clone(), vec![b.clone()]),
            (b.clone(), vec![c.clone()]),
            (c.clone(), vec![a.clone()]),
        ];
        assert!(lp_realizable(3, &cons).is_none());
    }

    #[test]
    fn returned_weights_induce_the_ordering() {
        // a > b*c, b > c^2, c > 1
        let t = |e: [u32; 3]| Term::from_exponents(e);
        let cons = vec![
            (t([1, 0, 0]), vec![t([0, 1, 1])]),
            (t([0, 1, 0]), vec![t([0, 0, 2])]),
            (t([0, 0, 1]), vec![t([0, 0, 0])]),
        ];
        let w = lp_realizable(3, &cons).unwrap();
        let m = ordering_from_weights(&w).unwrap();
        for (win, losers) in &cons {
            for l in losers {
                assert_eq!(m.compare(win, l), Ordering::Greater);
            }
        }
    }
}
