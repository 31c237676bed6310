//! Dense exact row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::polyring::Q;

/// A matrix in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn new(mut m: Vec<Vec<Q>>, ncols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].recip();
            if !inv.is_one() {
                for v in m[rank][c..].iter_mut() {
                    *v *= &inv;
                }
            }
            let prow = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for k in c..ncols {
                    if !prow[k].is_zero() {
                        row[k] -= &f * &prow[k];
                    }
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        m.truncate(rank);
        Rref { ncols, rows: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the row space; the result has zeros in every pivot column.
    pub fn reduce(&self, v: &mut [Q]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (k, a) in row.iter().enumerate().skip(p) {
                if !a.is_zero() {
                    v[k] -= &f * a;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }
}

/// Two vectors are proportional with a nonzero factor.
pub fn proportional(a: &[Q], b: &[Q]) -> bool {
    let Some(i) = a.iter().position(|v| !v.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    let r = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| *y == x * &r)
}

/// Expresses `target` as a K-combination of sparse `rows`; returns `(row index, coefficient)`
/// pairs, or `None` if `target` is not in their span.
pub fn solve_combination<K: Ord + Clone>(rows: &[BTreeMap<K, Q>], target: &BTreeMap<K, Q>) -> Option<Vec<(usize, Q)>> {
    // echelon rows keyed by pivot (largest key), each with the combination producing it
    let mut echelon: BTreeMap<K, (BTreeMap<K, Q>, BTreeMap<usize, Q>)> = BTreeMap::new();
    let reduce = |echelon: &BTreeMap<K, (BTreeMap<K, Q>, BTreeMap<usize, Q>)>,
                  v: &mut BTreeMap<K, Q>,
                  comb: &mut BTreeMap<usize, Q>| {
        loop {
            let hit = v.iter().rev().find(|(k, _)| echelon.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = hit else { return };
            let (row, rc) = &echelon[&k];
            axpy(v, &-c.clone(), row);
            axpy(comb, &-c, rc);
        }
    };
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        let mut comb = BTreeMap::from([(idx, Q::one())]);
        reduce(&echelon, &mut v, &mut comb);
        let Some((k, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else { continue };
        let inv = c.recip();
        v.values_mut().for_each(|x| *x *= &inv);
        comb.values_mut().for_each(|x| *x *= &inv);
        echelon.insert(k, (v, comb));
    }
    let mut v = target.clone();
    let mut comb = BTreeMap::new();
    reduce(&echelon, &mut v, &mut comb);
    if !v.is_empty() {
        return None;
    }
    // target − Σ comb·rows = 0
    Some(comb.into_iter().map(|(i, c)| (i, -c)).collect())
}

fn axpy<K: Ord + Clone>(v: &mut BTreeMap<K, Q>, a: &Q, x: &BTreeMap<K, Q>) {
    for (k, c) in x {
        let e = v.entry(k.clone()).or_insert_with(Q::zero);
        *e += a * c;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::q_int;

    #[test]
    fn rank_and_membership() {
        let m = vec![
            vec![q_int(1), q_int(2), q_int(3)],
            vec![q_int(2), q_int(4), q_int(6)],
            vec![q_int(0), q_int(1), q_int(1)],
        ];
        let r = Rref::new(m, 3);
        assert_eq!(r.rank(), 2);
        assert!(r.contains(&[q_int(1), q_int(3), q_int(4)]));
        assert!(!r.contains(&[q_int(0), q_int(0), q_int(1)]));
    }

    #[test]
    fn combination_is_recovered() {
        let rows = vec![
            BTreeMap::from([(0, q_int(1)), (1, q_int(1))]),
            BTreeMap::from([(1, q_int(1)), (2, q_int(1))]),
            BTreeMap::from([(0, q_int(2)), (1, q_int(2))]),
        ];
        let target = BTreeMap::from([(0, q_int(1)), (2, q_int(-1))]);
        let comb = solve_combination(&rows, &target).unwrap();
        let mut acc: BTreeMap<i32, Q> = BTreeMap::new();
        for (i, c) in comb {
            axpy(&mut acc, &c, &rows[i]);
        }
        assert_eq!(acc, target);
        assert!(solve_combination(&rows, &BTreeMap::from([(2, q_int(1))])).is_none());
    }
}
