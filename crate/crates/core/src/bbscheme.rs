//! The ideal `I(B_O)` of a border basis scheme: generic multiplication matrices, commutator
//! and neighbor generators, arrow gradings, exposure and cotangent data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{proportional, Rref};
use crate::orderideal::{NeighborPair, OrderIdeal};
use crate::polyring::{substitute, Polynomial, SubstitutionMap, VarTable, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BBError {
    #[error("order ideal does not have a MaxDeg border")]
    NotMaxDeg,
    #[error("expected {expected} values over C0, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {0} out of range")]
    BadVariable(usize),
}

/// Where column `j` of a multiplication matrix comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    /// `x_r t_j = t_m`
    Unit(usize),
    /// `x_r t_j = b_m`
    Border(usize),
}

/// The `r`-th generic multiplication matrix, stored by columns.
#[derive(Clone, Debug)]
pub struct MultMatrix {
    pub r: usize,
    pub columns: Vec<Column>,
    /// Entries of border columns; `None` means the generic `c_{i,m}`.
    overrides: Option<Vec<Vec<Polynomial>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorLabel {
    Commutator { r: usize, s: usize, row: usize, col: usize },
    /// Coordinate `m` of `x_k g_j − g_{jp}` where `b_{jp} = x_k b_j`.
    NextDoor { j: usize, jp: usize, m: usize },
    /// Coordinate `m` of `x_l g_j − x_k g_{jp}` where `b_j = x_k t`, `b_{jp} = x_l t`, `j < jp`.
    AcrossRim { j: usize, jp: usize, m: usize },
    /// A single indeterminate added to the ideal.
    Variable(usize),
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorLabel::Commutator { r, s, row, col } => {
                write!(f, "[A{},A{}]_({},{})", r + 1, s + 1, row + 1, col + 1)
            }
            GeneratorLabel::NextDoor { j, jp, m } => write!(f, "ND({},{})_{}", j + 1, jp + 1, m + 1),
            GeneratorLabel::AcrossRim { j, jp, m } => write!(f, "AR({},{})_{}", j + 1, jp + 1, m + 1),
            GeneratorLabel::Variable(v) => write!(f, "var({v})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: GeneratorLabel,
    pub poly: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowGrading {
    /// `n` rows, one column per variable.
    pub a: Vec<Vec<i64>>,
    pub w: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureWitness {
    pub ell: usize,
    pub pair: NeighborPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureInfo {
    pub exposed: BTreeMap<usize, ExposureWitness>,
    pub non_exposed: Vec<usize>,
    pub rim: Vec<bool>,
}

impl ExposureInfo {
    pub fn is_exposed(&self, v: usize) -> bool {
        self.exposed.contains_key(&v)
    }

    pub fn exposed_vars(&self) -> Vec<usize> {
        self.exposed.keys().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentClasses {
    pub e0: Vec<usize>,
    pub proper: Vec<Vec<usize>>,
    pub singletons: Vec<usize>,
    pub basic: Vec<usize>,
}

/// The border basis scheme of an order ideal, with variables `c_{ij}` at index `i·ν + j`.
#[derive(Clone, Debug)]
pub struct BBScheme {
    o: OrderIdeal,
    vars: VarTable,
}

impl BBScheme {
    pub fn new(o: OrderIdeal) -> Self {
        let (mu, nu) = (o.mu(), o.nu());
        let wide = mu >= 10 || nu >= 10;
        let names = (0..mu).flat_map(|i| {
            (0..nu).map(move |j| {
                if wide {
                    format!("c{}_{}", i + 1, j + 1)
                } else {
                    format!("c{}{}", i + 1, j + 1)
                }
            })
        });
        let vars = VarTable::new(names).expect("generated names are distinct");
        BBScheme { o, vars }
    }

    pub fn order_ideal(&self) -> &OrderIdeal {
        &self.o
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn mu(&self) -> usize {
        self.o.mu()
    }

    pub fn nu(&self) -> usize {
        self.o.nu()
    }

    pub fn n(&self) -> usize {
        self.o.n()
    }

    pub fn arity(&self) -> usize {
        self.mu() * self.nu()
    }

    pub fn var(&self, i: usize, j: usize) -> usize {
        i * self.nu() + j
    }

    pub fn var_pair(&self, v: usize) -> (usize, usize) {
        (v / self.nu(), v % self.nu())
    }

    pub fn var_name(&self, v: usize) -> &str {
        self.vars.name(v)
    }

    /// Looks up a variable by its 1-based indices.
    pub fn var_by_name(&self, name: &str) -> Option<usize> {
        self.vars.index_of(name)
    }

    pub fn c(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(self.arity(), self.var(i, j))
    }

    pub fn render(&self, f: &Polynomial) -> String {
        f.to_string_with(&self.vars)
    }

    /// `(c_{1j}, …, c_{μj})`
    pub fn border_column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.mu()).map(|i| self.c(i, j)).collect()
    }

    pub fn mult_matrix(&self, r: usize) -> MultMatrix {
        let columns = self
            .o
            .terms()
            .iter()
            .map(|t| {
                let p = t.mul_var(r);
                match self.o.term_index(&p) {
                    Some(m) => Column::Unit(m),
                    None => Column::Border(self.o.border_index(&p).expect("x_r t is in O or its border")),
                }
            })
            .collect();
        MultMatrix { r, columns, overrides: None }
    }

    /// Dense entries of a multiplication matrix.
    pub fn matrix_entries(&self, a: &MultMatrix) -> Vec<Vec<Polynomial>> {
        let mu = self.mu();
        let mut out = vec![vec![Polynomial::zero(self.arity()); mu]; mu];
        for (col, c) in a.columns.iter().enumerate() {
            match *c {
                Column::Unit(m) => out[m][col] = Polynomial::one(self.arity()),
                Column::Border(b) => {
                    for (i, row) in out.iter_mut().enumerate() {
                        row[col] = self.border_entry(a, i, b);
                    }
                }
            }
        }
        out
    }

    fn border_entry(&self, a: &MultMatrix, i: usize, b: usize) -> Polynomial {
        match &a.overrides {
            Some(o) => o[i][b].clone(),
            None => self.c(i, b),
        }
    }

    /// `A · v`
    pub fn apply(&self, a: &MultMatrix, v: &[Polynomial]) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.arity()); self.mu()];
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            match a.columns[k] {
                Column::Unit(m) => out[m] = &out[m] + vk,
                Column::Border(b) => {
                    for (i, o) in out.iter_mut().enumerate() {
                        let e = self.border_entry(a, i, b);
                        if !e.is_zero() {
                            *o = &*o + &(vk * &e);
                        }
                    }
                }
            }
        }
        out
    }

    fn column_of(&self, a: &MultMatrix, col: usize) -> Vec<Polynomial> {
        let mut v = vec![Polynomial::zero(self.arity()); self.mu()];
        v[col] = Polynomial::one(self.arity());
        self.apply(a, &v)
    }

    fn commutators_of(&self, mats: &[MultMatrix]) -> Vec<Generator> {
        let mut out = Vec::new();
        for r in 0..mats.len() {
            for s in r + 1..mats.len() {
                for col in 0..self.mu() {
                    let ar_s = self.apply(&mats[r], &self.column_of(&mats[s], col));
                    let as_r = self.apply(&mats[s], &self.column_of(&mats[r], col));
                    for (row, (p, q)) in ar_s.iter().zip(&as_r).enumerate() {
                        let g = p - q;
                        if !g.is_zero() {
                            out.push(Generator { label: GeneratorLabel::Commutator { r, s, row, col }, poly: g });
                        }
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries of all commutators `A_r A_s − A_s A_r`, `r < s`.
    pub fn commutator_generators(&self) -> Vec<Generator> {
        let mats: Vec<MultMatrix> = (0..self.n()).map(|r| self.mult_matrix(r)).collect();
        self.commutators_of(&mats)
    }

    /// Coordinates of the lifted neighbor syzygies.
    pub fn natural_generators(&self) -> Vec<Generator> {
        let mats: Vec<MultMatrix> = (0..self.n()).map(|r| self.mult_matrix(r)).collect();
        let mut out = Vec::new();
        for pair in self.o.neighbor_pairs() {
            let (vec, mk): (Vec<Polynomial>, Box<dyn Fn(usize) -> GeneratorLabel>) = match pair {
                NeighborPair::NextDoor { k, lower, upper } => {
                    let ak = self.apply(&mats[k], &self.border_column(lower));
                    let v = ak.iter().zip(self.border_column(upper)).map(|(a, c)| &c - a).collect();
                    (v, Box::new(move |m| GeneratorLabel::NextDoor { j: lower, jp: upper, m }))
                }
                NeighborPair::AcrossRim { j, k, jp, l, .. } => {
                    let al = self.apply(&mats[l], &self.border_column(j));
                    let ak = self.apply(&mats[k], &self.border_column(jp));
                    let v = ak.iter().zip(&al).map(|(a, b)| a - b).collect();
                    (v, Box::new(move |m| GeneratorLabel::AcrossRim { j, jp, m }))
                }
            };
            for (m, p) in vec.into_iter().enumerate() {
                if !p.is_zero() {
                    out.push(Generator { label: mk(m), poly: p });
                }
            }
        }
        out
    }

    pub fn natural_generator(&self, label: GeneratorLabel) -> Option<Polynomial> {
        self.natural_generators().into_iter().find(|g| g.label == label).map(|g| g.poly)
    }

    pub fn arrow_grading(&self) -> ArrowGrading {
        let n = self.n();
        let mut a = vec![vec![0i64; self.arity()]; n];
        let mut w = vec![0i64; self.arity()];
        for (i, t) in self.o.terms().iter().enumerate() {
            for (j, b) in self.o.border().iter().enumerate() {
                let v = self.var(i, j);
                for k in 0..n {
                    a[k][v] = b.exp(k) as i64 - t.exp(k) as i64;
                    w[v] += a[k][v];
                }
            }
        }
        ArrowGrading { a, w }
    }

    /// Variables of total arrow degree zero.
    pub fn c0(&self) -> Vec<usize> {
        let w = self.arrow_grading().w;
        (0..self.arity()).filter(|&v| w[v] == 0).collect()
    }

    /// Variables of total arrow degree zero of a MaxDeg scheme.
    pub fn c0_census(&self) -> Result<Vec<usize>, BBError> {
        if !self.o.is_maxdeg() {
            return Err(BBError::NotMaxDeg);
        }
        Ok(self.c0())
    }

    /// Multiplication matrices with every positive-degree entry set to zero.
    pub fn homogeneous_matrices(&self) -> Result<Vec<MultMatrix>, BBError> {
        let c0: BTreeSet<usize> = self.c0_census()?.into_iter().collect();
        Ok((0..self.n())
            .map(|r| {
                let mut m = self.mult_matrix(r);
                let ov = (0..self.mu())
                    .map(|i| {
                        (0..self.nu())
                            .map(|j| {
                                if c0.contains(&self.var(i, j)) {
                                    self.c(i, j)
                                } else {
                                    Polynomial::zero(self.arity())
                                }
                            })
                            .collect()
                    })
                    .collect();
                m.overrides = Some(ov);
                m
            })
            .collect())
    }

    /// Nonzero commutator entries of the homogeneous matrices.
    pub fn homogeneous_commutators(&self) -> Result<Vec<Generator>, BBError> {
        Ok(self.commutators_of(&self.homogeneous_matrices()?))
    }

    /// Natural generators together with the variables of negative total arrow degree.
    pub fn degree_filtered_ideal(&self) -> Vec<Generator> {
        let w = self.arrow_grading().w;
        let mut out = self.natural_generators();
        for v in 0..self.arity() {
            if w[v] < 0 {
                out.push(Generator { label: GeneratorLabel::Variable(v), poly: Polynomial::var(self.arity(), v) });
            }
        }
        out
    }

    /// Generators of `I(B^df) ∩ K[C0]`. After killing the negative-degree variables every
    /// remaining variable has nonnegative degree, so the degree-zero part of the ideal is
    /// generated by the degree-zero generators.
    pub fn degree_filtered_c0_part(&self) -> Vec<Polynomial> {
        let w = self.arrow_grading().w;
        let mut kill = SubstitutionMap::new(self.arity());
        for v in (0..self.arity()).filter(|&v| w[v] < 0) {
            kill.insert(v, Polynomial::zero(self.arity()));
        }
        self.natural_generators()
            .into_iter()
            .map(|g| substitute(&g.poly, &kill))
            .filter(|p| !p.is_zero() && p.weighted_degree(&w) == Some(Some(0)))
            .collect()
    }

    /// Natural generators with the `C0` variables specialized to `gamma` (in `C0` order).
    pub fn fiber_ideal(&self, gamma: &[Q]) -> Result<Vec<Generator>, BBError> {
        let c0 = self.c0_census()?;
        if c0.len() != gamma.len() {
            return Err(BBError::DimensionMismatch { expected: c0.len(), found: gamma.len() });
        }
        let mut s = SubstitutionMap::new(self.arity());
        for (&v, g) in c0.iter().zip(gamma) {
            s.insert(v, Polynomial::constant(self.arity(), g.clone()));
        }
        Ok(self
            .natural_generators()
            .into_iter()
            .filter_map(|g| {
                let p = substitute(&g.poly, &s);
                (!p.is_zero()).then_some(Generator { label: g.label, poly: p })
            })
            .collect())
    }

    /// `c_{ij}` is `x_ℓ`-exposed if `x_ℓ t_i ∈ ∂O` and either `x_ℓ b_j ∈ ∂O` or
    /// `b_j = x_k t_m` with `x_ℓ t_m ∈ ∂O` for some `k ≠ ℓ`.
    pub fn exposure(&self) -> ExposureInfo {
        let pairs = self.o.neighbor_pairs();
        // border index j → (ℓ, pair) in which b_j is multiplied by x_ℓ
        let mut sides: Vec<Vec<(usize, NeighborPair)>> = vec![Vec::new(); self.nu()];
        for &p in &pairs {
            match p {
                NeighborPair::NextDoor { k, lower, .. } => sides[lower].push((k, p)),
                NeighborPair::AcrossRim { j, k, jp, l, .. } => {
                    sides[j].push((l, p));
                    sides[jp].push((k, p));
                }
            }
        }
        let mut exposed = BTreeMap::new();
        let mut rim = vec![false; self.arity()];
        for (i, t) in self.o.terms().iter().enumerate() {
            let is_rim = self.o.is_rim(i);
            for j in 0..self.nu() {
                let v = self.var(i, j);
                rim[v] = is_rim;
                let hit = sides[j]
                    .iter()
                    .find(|(ell, _)| self.o.border_index(&t.mul_var(*ell)).is_some());
                if let Some(&(ell, pair)) = hit {
                    exposed.insert(v, ExposureWitness { ell, pair });
                }
            }
        }
        let non_exposed = (0..self.arity()).filter(|v| !exposed.contains_key(v)).collect();
        ExposureInfo { exposed, non_exposed, rim }
    }

    /// Linear parts of the natural generators as dense coefficient rows.
    pub fn linear_part_matrix(&self) -> Vec<Vec<Q>> {
        self.natural_generators()
            .iter()
            .map(|g| dense_linear(&g.poly, self.arity()))
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect()
    }

    pub fn linear_span(&self) -> Rref {
        Rref::new(self.linear_part_matrix(), self.arity())
    }

    /// `#C − dim ⟨lin(g)⟩`
    pub fn cotangent_dim(&self) -> usize {
        self.arity() - self.linear_span().rank()
    }

    pub fn cotangent_classes(&self) -> CotangentClasses {
        cotangent_classes_of(self.linear_part_matrix(), self.arity())
    }
}

/// Cotangent classes from the linear parts of a generating set, as dense rows.
pub fn cotangent_classes_of(rows: Vec<Vec<Q>>, arity: usize) -> CotangentClasses {
    let basic = (0..arity).filter(|&v| rows.iter().all(|r| r[v].is_zero())).collect();
    let span = Rref::new(rows, arity);
    let residues: Vec<Vec<Q>> = (0..arity)
        .map(|v| {
            let mut e = vec![Q::zero(); arity];
            e[v] = Q::one();
            span.reduce(&mut e);
            e
        })
        .collect();
    let mut e0 = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..arity {
        if residues[v].iter().all(Zero::is_zero) {
            e0.push(v);
            continue;
        }
        match classes.iter_mut().find(|c| proportional(&residues[c[0]], &residues[v])) {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    let (proper, single): (Vec<Vec<usize>>, Vec<Vec<usize>>) = classes.into_iter().partition(|c| c.len() > 1);
    CotangentClasses { e0, proper, singletons: single.into_iter().flatten().collect(), basic }
}

pub(crate) fn dense_linear(p: &Polynomial, arity: usize) -> Vec<Q> {
    let mut row = vec![Q::zero(); arity];
    for (t, c) in p.linear_part().terms() {
        if let Some(v) = t.as_var() {
            row[v] = c.clone();
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn names(s: &BBScheme, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| s.var_name(v).to_string()).collect()
    }

    #[test]
    fn one_point_matrix() {
        let s = BBScheme::new(OrderIdeal::new(2, &[vec![0, 0]]).unwrap());
        let a = s.mult_matrix(0);
        assert_eq!(a.columns, vec![Column::Border(1)]);
        assert!(s.commutator_generators().is_empty());
        assert_eq!(s.arrow_grading().w, vec![1, 1]);
    }

    #[test]
    fn lshape_commutator_count_and_grading() {
        let s = BBScheme::new(OrderIdeal::lshape());
        assert_eq!(s.commutator_generators().len(), 20);
        assert_eq!(
            s.arrow_grading().w,
            vec![2, 3, 3, 3, 3, 1, 2, 2, 2, 2, 1, 2, 2, 2, 2, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1]
        );
        assert_eq!(names(&s, &s.c0_census().unwrap()), ["c41", "c51"]);
        assert!(s.homogeneous_commutators().unwrap().is_empty());
    }

    #[test]
    fn box23_contains_printed_generator() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 3]).unwrap());
        let f = parse_polynomial("-c22*c41 - c24*c61 - c11 + c23", s.vars()).unwrap();
        let g = s.natural_generators();
        assert!(g.iter().any(|g| g.poly == f || g.poly == -f.clone()));
    }

    #[test]
    fn exposure_examples() {
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 1]).unwrap());
        assert_eq!(names(&s, &s.exposure().exposed_vars()), ["c13", "c21", "c22", "c23"]);
        let s = BBScheme::new(OrderIdeal::box_ideal(&[2, 3]).unwrap());
        let mut e = names(&s, &s.exposure().exposed_vars());
        e.sort();
        let mut want = vec![
            "c32", "c34", "c52", "c54", "c62", "c64", "c41", "c43", "c45", "c61", "c63", "c65",
        ];
        want.sort();
        assert_eq!(e, want);
    }

    #[test]
    fn motaffine_degree_filtered_adds_c61() {
        let o = OrderIdeal::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![0, 3]]).unwrap();
        let s = BBScheme::new(o);
        let extra: Vec<GeneratorLabel> = s
            .degree_filtered_ideal()
            .into_iter()
            .filter(|g| matches!(g.label, GeneratorLabel::Variable(_)))
            .map(|g| g.label)
            .collect();
        assert_eq!(extra, vec![GeneratorLabel::Variable(s.var_by_name("c61").unwrap())]);
        assert_eq!(names(&s, &s.c0()), ["c41", "c51", "c62", "c63"]);
    }

    fn df_part_matches(o: OrderIdeal, expected: &[&str]) -> bool {
        use crate::polyring::{ideals_equal, GbOptions, OrderingMatrix};
        let s = BBScheme::new(o);
        let got = s.degree_filtered_c0_part();
        let want: Vec<Polynomial> = expected.iter().map(|e| parse_polynomial(e, s.vars()).unwrap()).collect();
        let ord = OrderingMatrix::degrevlex(s.arity());
        ideals_equal(&ord, &got, &want, &GbOptions::default()).unwrap()
    }

    #[test]
    fn degree_filtered_c0_parts() {
        let o = OrderIdeal::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![0, 3]]).unwrap();
        assert!(df_part_matches(o, &["c41 - c63 + c51*c62"]));
        let o = OrderIdeal::new(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![2, 0], vec![0, 3]]).unwrap();
        assert!(df_part_matches(o, &["c41 - c62 + c51*c63", "c63 - c41*c62 - c51*c64"]));
    }

    #[test]
    fn simplicial_31_is_singular_at_the_monomial_point() {
        let s = BBScheme::new(OrderIdeal::simplicial(3, 1).unwrap());
        assert_eq!(s.cotangent_dim(), 18);
    }
}
