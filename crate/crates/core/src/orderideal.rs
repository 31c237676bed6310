//! Order ideals of terms: borders, rims, neighbor pairs, plateaus and legs, segments,
//! and the standard families (boxes, simplicial ideals, the L-shape).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::polyring::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderIdealError {
    #[error("order ideal must contain at least one term")]
    Empty,
    #[error("term {index} has {found} exponents, expected {expected}")]
    ArityMismatch { index: usize, expected: usize, found: usize },
    #[error("duplicate term {0:?}")]
    Duplicate(Vec<u32>),
    #[error("not divisibility-closed: {divisor:?} divides {term:?} but is missing")]
    NotClosed { term: Vec<u32>, divisor: Vec<u32> },
    #[error("requires two variables, got {0}")]
    NotPlanar(usize),
    #[error("order ideal does not have a MaxDeg border")]
    NotMaxDeg,
    #[error("order ideal is simplicial")]
    Simplicial,
    #[error("parameters must be positive")]
    ZeroParameter,
}

/// Compares terms by degree, then lexicographically on the exponent vector.
pub fn canonical_cmp(a: &Term, b: &Term) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.cmp(b))
}

/// A finite divisibility-closed set of terms `t_1, …, t_μ` together with its border
/// `b_1, …, b_ν`, both in canonical order.
#[derive(Clone, Debug)]
pub struct OrderIdeal {
    n: usize,
    terms: Vec<Term>,
    border: Vec<Term>,
    term_index: HashMap<Term, usize>,
    border_index: HashMap<Term, usize>,
}

impl PartialEq for OrderIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl Eq for OrderIdeal {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborPair {
    /// `b_upper = x_k · b_lower`
    NextDoor { k: usize, lower: usize, upper: usize },
    /// `b_j = x_k · t_m` and `b_jp = x_l · t_m`, with `j < jp`.
    AcrossRim { m: usize, j: usize, k: usize, jp: usize, l: usize },
}

/// A plateau (border indices from the top-left end to the bottom-right end) with its legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlateauInfo {
    pub plateau: Vec<usize>,
    pub x_leg: Vec<usize>,
    pub y_leg: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentInfo {
    pub d: u32,
    /// Each segment as the x-exponent range `(i, j)` of `x^i y^{d-i}, …, x^j y^{d-j}`.
    pub segments: Vec<(u32, u32)>,
    pub lengths: Vec<u32>,
}

impl SegmentInfo {
    pub fn segmentation_type(&self) -> usize {
        self.segments.len()
    }

    /// `μ = d(d+1)/2 + Σ ℓ_i`
    pub fn predicted_mu(&self) -> usize {
        (self.d * (self.d + 1) / 2 + self.lengths.iter().sum::<u32>()) as usize
    }

    /// `ν = d + 1 + s`
    pub fn predicted_nu(&self) -> usize {
        self.d as usize + 1 + self.segments.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplicialCounts {
    pub mu: u64,
    pub nu: u64,
    pub interior: u64,
    pub rim: u64,
    pub c: u64,
    pub c_int: u64,
    pub c_rim: u64,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed formulas for the simplicial order ideal of type `d` in `n` variables.
pub fn simplicial_counts(n: u64, d: u64) -> SimplicialCounts {
    let mu = binomial(d + n, n);
    let nu = binomial(d + n, n - 1);
    let interior = binomial(d + n - 1, n);
    let rim = binomial(d + n - 1, n - 1);
    SimplicialCounts {
        mu,
        nu,
        interior,
        rim,
        c: mu * nu,
        c_int: interior * nu,
        c_rim: rim * nu,
    }
}

impl OrderIdeal {
    /// Validates and canonicalizes a set of exponent vectors.
    pub fn new(n: usize, terms: &[Vec<u32>]) -> Result<Self, OrderIdealError> {
        if terms.is_empty() {
            return Err(OrderIdealError::Empty);
        }
        let mut ts = Vec::with_capacity(terms.len());
        for (index, e) in terms.iter().enumerate() {
            if e.len() != n {
                return Err(OrderIdealError::ArityMismatch { index, expected: n, found: e.len() });
            }
            ts.push(Term::from_exponents(e.iter().copied()));
        }
        Self::from_terms(n, ts)
    }

    pub fn from_terms(n: usize, mut terms: Vec<Term>) -> Result<Self, OrderIdealError> {
        if terms.is_empty() {
            return Err(OrderIdealError::Empty);
        }
        terms.sort_by(canonical_cmp);
        for w in terms.windows(2) {
            if w[0] == w[1] {
                return Err(OrderIdealError::Duplicate(exps(&w[0])));
            }
        }
        let term_index: HashMap<Term, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        if !term_index.contains_key(&Term::one(n)) {
            return Err(OrderIdealError::NotClosed {
                term: exps(&terms[0]),
                divisor: vec![0; n],
            });
        }
        // Closure under division by a single variable suffices.
        for t in &terms {
            for k in 0..n {
                if let Some(d) = t.div_var(k) {
                    if !term_index.contains_key(&d) {
                        return Err(OrderIdealError::NotClosed { term: exps(t), divisor: exps(&d) });
                    }
                }
            }
        }
        let mut border: Vec<Term> = Vec::new();
        for t in &terms {
            for k in 0..n {
                let b = t.mul_var(k);
                if !term_index.contains_key(&b) {
                    border.push(b);
                }
            }
        }
        border.sort_by(canonical_cmp);
        border.dedup();
        let border_index = border.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(OrderIdeal { n, terms, border, term_index, border_index })
    }

    /// `{x^{i_1}⋯x_n^{i_n} : i_k < a_k}`
    pub fn box_ideal(a: &[u32]) -> Result<Self, OrderIdealError> {
        if a.is_empty() || a.contains(&0) {
            return Err(OrderIdealError::ZeroParameter);
        }
        let mut terms = vec![vec![]];
        for &ak in a {
            terms = terms
                .into_iter()
                .flat_map(|t: Vec<u32>| {
                    (0..ak).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        Self::new(a.len(), &terms)
    }

    /// All terms of degree at most `d` in `n` variables.
    pub fn simplicial(n: usize, d: u32) -> Result<Self, OrderIdealError> {
        if n == 0 || d == 0 {
            return Err(OrderIdealError::ZeroParameter);
        }
        Self::new(n, &terms_up_to_degree(n, d))
    }

    /// `{1, y, x, y², x²}`
    pub fn lshape() -> Self {
        Self::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![2, 0]]).expect("valid")
    }

    /// The planar order ideal whose x-exponent `a` column has height `heights[a]`.
    pub fn from_column_heights(heights: &[u32]) -> Result<Self, OrderIdealError> {
        let mut terms = Vec::new();
        for (a, &h) in heights.iter().enumerate() {
            for b in 0..h {
                terms.push(vec![a as u32, b]);
            }
        }
        Self::new(2, &terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> usize {
        self.terms.len()
    }

    pub fn nu(&self) -> usize {
        self.border.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn border(&self) -> &[Term] {
        &self.border
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn border_term(&self, j: usize) -> &Term {
        &self.border[j]
    }

    pub fn term_index(&self, t: &Term) -> Option<usize> {
        self.term_index.get(t).copied()
    }

    pub fn border_index(&self, t: &Term) -> Option<usize> {
        self.border_index.get(t).copied()
    }

    pub fn terms_as_vectors(&self) -> Vec<Vec<u32>> {
        self.terms.iter().map(exps).collect()
    }

    pub fn border_as_vectors(&self) -> Vec<Vec<u32>> {
        self.border.iter().map(exps).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    /// `x_k · t_i` lands in the border.
    pub fn is_rim(&self, i: usize) -> bool {
        (0..self.n).any(|k| self.border_index.contains_key(&self.terms[i].mul_var(k)))
    }

    pub fn rim_interior_split(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.mu()).partition(|&i| self.is_rim(i))
    }

    pub fn neighbor_pairs(&self) -> Vec<NeighborPair> {
        let mut out = Vec::new();
        for (lower, b) in self.border.iter().enumerate() {
            for k in 0..self.n {
                if let Some(upper) = self.border_index(&b.mul_var(k)) {
                    out.push(NeighborPair::NextDoor { k, lower, upper });
                }
            }
        }
        for (m, t) in self.terms.iter().enumerate() {
            for k in 0..self.n {
                let Some(a) = self.border_index(&t.mul_var(k)) else { continue };
                for l in k + 1..self.n {
                    let Some(b) = self.border_index(&t.mul_var(l)) else { continue };
                    out.push(if a < b {
                        NeighborPair::AcrossRim { m, j: a, k, jp: b, l }
                    } else {
                        NeighborPair::AcrossRim { m, j: b, k: l, jp: a, l: k }
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// `#O_i` for `i = 0, …, max degree`.
    pub fn hilbert_function(&self) -> Vec<usize> {
        let mut hf = vec![0; self.max_degree() as usize + 1];
        for t in &self.terms {
            hf[t.degree() as usize] += 1;
        }
        hf
    }

    /// Every border term has degree at least every term of `O`.
    pub fn is_maxdeg(&self) -> bool {
        let min_b = self.border.iter().map(Term::degree).min().unwrap_or(0);
        min_b >= self.max_degree()
    }

    /// `#O_i` is the full count of degree-`i` terms below the top degree.
    pub fn has_generic_hilbert_function(&self) -> bool {
        let hf = self.hilbert_function();
        let d = hf.len() - 1;
        (0..d).all(|i| hf[i] as u64 == binomial(i as u64 + self.n as u64 - 1, self.n as u64 - 1))
    }

    /// `Some(d)` if `O` consists of all terms of degree at most `d ≥ 1`.
    pub fn simplicial_type(&self) -> Option<u32> {
        let d = self.max_degree();
        if d == 0 {
            return None;
        }
        let hf = self.hilbert_function();
        let full = (0..=d as usize).all(|i| hf[i] as u64 == binomial(i as u64 + self.n as u64 - 1, self.n as u64 - 1));
        full.then_some(d)
    }

    /// Border indices `j'` with `b_{j'} = x_k b_j` for some `k`.
    pub fn up_neighbors(&self, j: usize) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|k| self.border_index(&self.border[j].mul_var(k)).map(|u| (k, u)))
            .collect()
    }

    fn require_planar(&self) -> Result<(), OrderIdealError> {
        if self.n != 2 {
            return Err(OrderIdealError::NotPlanar(self.n));
        }
        Ok(())
    }

    /// Maximal chains `b_{j_1}, …, b_{j_k}` of across-the-rim pairs with
    /// `x b_{j_ℓ} = y b_{j_{ℓ+1}}` whose ends have no up-neighbors, together with their legs.
    /// A border term without up-neighbor and without chain partner is a plateau of length one.
    pub fn plateaus_and_legs(&self) -> Result<Vec<PlateauInfo>, OrderIdealError> {
        self.require_planar()?;
        let (x, y) = (0usize, 1usize);
        // next[j] = j' when b_j = y t and b_{j'} = x t for some t in O
        let mut next = vec![None; self.nu()];
        let mut prev = vec![None; self.nu()];
        for t in &self.terms {
            if let (Some(a), Some(b)) = (self.border_index(&t.mul_var(y)), self.border_index(&t.mul_var(x))) {
                next[a] = Some(b);
                prev[b] = Some(a);
            }
        }
        let mut out = Vec::new();
        for start in 0..self.nu() {
            if prev[start].is_some() {
                continue;
            }
            let mut chain = vec![start];
            while let Some(nx) = next[*chain.last().expect("nonempty")] {
                chain.push(nx);
            }
            let first = chain[0];
            let last = *chain.last().expect("nonempty");
            if !self.up_neighbors(first).is_empty() || !self.up_neighbors(last).is_empty() {
                continue;
            }
            let x_leg = self.leg(first, x, y);
            let y_leg = self.leg(last, y, x);
            out.push(PlateauInfo { plateau: chain, x_leg, y_leg });
        }
        Ok(out)
    }

    /// The `dir`-leg hanging off border term `j`: `b_j = dir·b_{j'_1}` and then
    /// `dir·b_{j'_{ℓ+1}} ∈ {b_{j'_ℓ}, other·b_{j'_ℓ}}`.
    fn leg(&self, j: usize, dir: usize, other: usize) -> Vec<usize> {
        let mut leg = Vec::new();
        let Some(first) = self.border[j].div_var(dir).and_then(|t| self.border_index(&t)) else {
            return leg;
        };
        leg.push(first);
        loop {
            let cur = &self.border[*leg.last().expect("nonempty")];
            let step = cur
                .div_var(dir)
                .and_then(|t| self.border_index(&t))
                .or_else(|| cur.mul_var(other).div_var(dir).and_then(|t| self.border_index(&t)));
            match step {
                Some(s) if !leg.contains(&s) => leg.push(s),
                _ => return leg,
            }
        }
    }

    /// Maximal runs of top-degree terms (planar, MaxDeg, non-simplicial).
    pub fn segments(&self) -> Result<SegmentInfo, OrderIdealError> {
        self.require_planar()?;
        if !self.is_maxdeg() {
            return Err(OrderIdealError::NotMaxDeg);
        }
        if self.simplicial_type().is_some() {
            return Err(OrderIdealError::Simplicial);
        }
        let d = self.max_degree();
        let present: Vec<bool> = (0..=d)
            .map(|i| self.term_index.contains_key(&Term::from_exponents([i, d - i])))
            .collect();
        let mut segments = Vec::new();
        let mut i = 0;
        while i <= d {
            if present[i as usize] {
                let start = i;
                while i < d && present[i as usize + 1] {
                    i += 1;
                }
                segments.push((start, i));
            }
            i += 1;
        }
        let lengths = segments.iter().map(|&(a, b)| b - a + 1).collect();
        Ok(SegmentInfo { d, segments, lengths })
    }

    /// Human-readable form of a term in the ambient variables.
    pub fn display_term(&self, t: &Term) -> String {
        format_term(t)
    }
}

impl fmt::Display for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(format_term).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn exps(t: &Term) -> Vec<u32> {
    t.exponents().iter().map(|&e| e as u32).collect()
}

pub fn ambient_name(n: usize, k: usize) -> String {
    match (n, k) {
        (1..=3, 0) => "x".into(),
        (2..=3, 1) => "y".into(),
        (3, 2) => "z".into(),
        _ => format!("x{}", k + 1),
    }
}

pub fn format_term(t: &Term) -> String {
    let n = t.arity();
    let parts: Vec<String> = t
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| {
            if e == 1 {
                ambient_name(n, k)
            } else {
                format!("{}^{e}", ambient_name(n, k))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn terms_up_to_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            rec(n, budget - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `m` as non-increasing part lists.
pub fn partitions(m: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// All planar order ideals with `μ` terms, one per partition of `μ`.
pub fn planar_order_ideals(mu: u32) -> Vec<OrderIdeal> {
    partitions(mu)
        .iter()
        .map(|p| OrderIdeal::from_column_heights(p).expect("partitions give order ideals"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: &[u32]) -> Term {
        Term::from_exponents(e.iter().copied())
    }

    #[test]
    fn box22_border_and_rim() {
        let o = OrderIdeal::box_ideal(&[2, 2]).unwrap();
        assert_eq!(o.border_as_vectors(), vec![vec![0, 2], vec![2, 0], vec![1, 2], vec![2, 1]]);
        let (rim, int) = o.rim_interior_split();
        assert_eq!(rim, vec![1, 2, 3]);
        assert_eq!(int, vec![0]);
    }

    #[test]
    fn lshape_border() {
        let o = OrderIdeal::lshape();
        let b: Vec<String> = o.border().iter().map(format_term).collect();
        assert_eq!(b, ["x*y", "y^3", "x*y^2", "x^2*y", "x^3"]);
        assert!(o.is_maxdeg());
        assert_eq!(o.simplicial_type(), None);
    }

    #[test]
    fn rejects_missing_divisor() {
        let err = OrderIdeal::new(2, &[vec![0, 0], vec![2, 0]]).unwrap_err();
        assert_eq!(err, OrderIdealError::NotClosed { term: vec![2, 0], divisor: vec![1, 0] });
    }

    #[test]
    fn simplicial_three_one() {
        let o = OrderIdeal::simplicial(3, 1).unwrap();
        assert_eq!(o.mu(), 4);
        assert_eq!(o.nu(), 6);
        assert_eq!(format!("{o}"), "{1, z, y, x}");
    }

    #[test]
    fn one_point_plateau() {
        let o = OrderIdeal::new(2, &[vec![0, 0]]).unwrap();
        let p = o.plateaus_and_legs().unwrap();
        assert_eq!(p, vec![PlateauInfo { plateau: vec![0, 1], x_leg: vec![], y_leg: vec![] }]);
    }

    #[test]
    fn lshape_plateaus_share_the_corner_in_their_legs() {
        let o = OrderIdeal::lshape();
        let p = o.plateaus_and_legs().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0], PlateauInfo { plateau: vec![1, 2], x_leg: vec![], y_leg: vec![0] });
        assert_eq!(p[1], PlateauInfo { plateau: vec![3, 4], x_leg: vec![0], y_leg: vec![] });
    }

    #[test]
    fn box23_legs() {
        let o = OrderIdeal::box_ideal(&[2, 3]).unwrap();
        let p = o.plateaus_and_legs().unwrap();
        assert_eq!(p, vec![PlateauInfo { plateau: vec![3, 4], x_leg: vec![1], y_leg: vec![2, 0] }]);
    }

    #[test]
    fn segment_examples() {
        let o = OrderIdeal::new(
            2,
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2], vec![0, 3], vec![1, 2]],
        )
        .unwrap();
        let s = o.segments().unwrap();
        assert_eq!(s.segments, vec![(0, 1)]);
        assert_eq!(s.lengths, vec![2]);
        let o2 = OrderIdeal::new(
            2,
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2], vec![0, 3], vec![2, 1]],
        )
        .unwrap();
        assert_eq!(o2.segments().unwrap().lengths, vec![1, 1]);
        assert!(o.term_index(&t(&[1, 2])).is_some());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|m| partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn simplicial_formulas_match_enumeration() {
        for n in 1..=4usize {
            for d in 1..=4u32 {
                let o = OrderIdeal::simplicial(n, d).unwrap();
                let (rim, int) = o.rim_interior_split();
                let enumerated = SimplicialCounts {
                    mu: o.mu() as u64,
                    nu: o.nu() as u64,
                    interior: int.len() as u64,
                    rim: rim.len() as u64,
                    c: (o.mu() * o.nu()) as u64,
                    c_int: (int.len() * o.nu()) as u64,
                    c_rim: (rim.len() * o.nu()) as u64,
                };
                assert_eq!(simplicial_counts(n as u64, u64::from(d)), enumerated, "n={n} d={d}");
            }
        }
    }
}
