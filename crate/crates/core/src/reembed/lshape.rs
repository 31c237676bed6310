//! The L-shape affine-cell pipeline: best separating re-embedding, a unimodular change of
//! coordinates and a final separating re-embedding onto ten free variables.

use std::collections::BTreeMap;

use super::separating::constraints;
use super::{zsep_reembed, ReembedError, SeparatingWitness};
use crate::bbscheme::BBScheme;
use crate::orderideal::OrderIdeal;
use crate::polyring::{coherentize, lp_realizable, parse_polynomial, substitute, OrderingMatrix, Polynomial, SubstitutionMap};

pub const LSHAPE_Z: [&str; 13] =
    ["c11", "c12", "c13", "c14", "c15", "c23", "c24", "c25", "c31", "c32", "c34", "c44", "c53"];

pub const LSHAPE_FINAL_VARS: [&str; 10] = ["c33", "c35", "c41", "c42", "c43", "c45", "c51", "c52", "c54", "c55"];

pub const LSHAPE_SUPPORT_LENGTHS: [usize; 25] =
    [78, 329, 375, 372, 419, 10, 87, 87, 95, 109, 8, 90, 86, 99, 1, 1, 11, 1, 11, 1, 1, 1, 9, 1, 1];

pub const LSHAPE_F1: &str = "c21c41^2c51^2 + c41^2c43c51^2 + c41c45c51^3 + c41^2c42c51 - c41^3c52 - c41^2c51c54 \
    + c21c41c51 + c45c51^2 - c41c51c55 + c41c42 + c41c54 + c21 - c43";

pub const LSHAPE_F2: &str = "-c21^2c41^3c51^5 - 2c21c41^3c43c51^5 - c41^3c43^2c51^5 - 2c21c41^2c45c51^6 \
    - 2c41^2c43c45c51^6 - c41c45^2c51^7 - c21c41^3c42c51^4 - c41^3c42c43c51^4 - c41^2c42c45c51^5 \
    + c21c41^3c51^4c54 + c41^3c43c51^4c54 + c41^2c45c51^5c54 - c41^4c42c51^2c52 + c41^5c51c52^2 \
    + c41^4c51^2c52c54 - c41^2c42c43c51^3 - c21c41^3c51^2c52 + c41^3c43c51^2c52 - c41^2c45c51^3c52 \
    - 2c21c41^2c51^3c54 - c41^2c43c51^3c54 - 2c41c45c51^4c54 - c41^2c42c51^3c55 \
    + 2c41^3c51^2c52c55 + c41^2c51^3c54c55 + 2c21c41c43c51^3 + 3c41c43^2c51^3 + 2c43c45c51^4 \
    - c41^4c52^2 - 2c41^3c51c52c54 + 2c41c43c51^3c55 + c41c51^3c55^2 + c41c42c43c51^2 \
    - c42c45c51^3 + c21c41^2c51c52 + 3c41c45c51^2c52 - 3c41c43c51^2c54 + c45c51^3c54 \
    + c41c42c51^2c55 - 3c41^2c51c52c55 - 3c41c51^2c54c55 + c22c41c51 - 2c33c41c51 \
    + c21^2c51^2 - c35c51^2 - c43^2c51^2 + c41^2c42c52 + c41^2c52c54 + c41c51c54^2 \
    - 2c43c51^2c55 - c51^2c55^2 - c41c43c52 - c45c51c52 + 2c43c51c54 + c41c52c55 \
    + 2c51c54c55 + c33 - c54^2";

/// Degree-one block: acts on `(c21, c42, c43, c45, c52, c54, c55)`. The second row's
/// second entry is printed as `-c41^2c41^2 - c41c51 - 1`; the homogeneous reading
/// `-c41^2c51^2 - c41c51 - 1` is used.
pub const LSHAPE_B1: [[&str; 7]; 7] = [
    ["-1", "c41^2c51 + c41", "-c41^2c51^2 + 1", "-c41c51^3 - c51^2", "c41^3", "c41^2c51 - c41", "c41c51"],
    ["c51", "-c41^2c51^2 - c41c51 - 1", "c41^2c51^3 - c51", "c41c51^4 + c51^3", "-c41^3c51", "-c41^2c51^2 + c41c51", "-c41c51^2"],
    ["0", "0", "1", "0", "0", "0", "0"],
    ["0", "0", "0", "1", "0", "0", "0"],
    ["0", "0", "0", "0", "1", "0", "0"],
    ["0", "0", "0", "0", "0", "1", "0"],
    ["0", "0", "0", "0", "0", "0", "1"],
];
pub const LSHAPE_B1_VARS: [&str; 7] = ["c21", "c42", "c43", "c45", "c52", "c54", "c55"];

/// Degree-two block: acts on `(c22, c33, c35)`.
pub const LSHAPE_B2: [[&str; 3]; 3] = [["2", "2c41c51 - 1", "2c51^2"], ["1", "c41c51", "c51^2"], ["0", "0", "1"]];
pub const LSHAPE_B2_VARS: [&str; 3] = ["c22", "c33", "c35"];

/// The change of coordinates as printed, variable by variable.
pub const LSHAPE_PSI: [(&str, &str); 4] = [
    (
        "c21",
        "-c41^2c43c51^2 - c41c45c51^3 + c41^2c42c51 + c41^3c52 + c41^2c51c54 - c45c51^2 \
         + c41c51c55 + c41c42 - c41c54 - c21 + c43",
    ),
    ("c22", "2c33c41c51 + 2c35c51^2 + 2c22 - c33"),
    ("c33", "c33c41c51 + c35c51^2 + c22"),
    (
        "c42",
        "c41^2c43c51^3 + c41c45c51^4 - c41^2c42c51^2 - c41^3c51c52 - c41^2c51^2c54 + c45c51^3 \
         - c41c51^2c55 - c41c42c51 + c41c51c54 + c21c51 - c43c51 - c42",
    ),
];

#[derive(Clone, Debug)]
pub struct PipelineCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct LshapeReport {
    pub checks: Vec<PipelineCheck>,
    pub f1: Polynomial,
    pub f2: Polynomial,
    /// Image of every `c_ij` in `K[Ĉ]`, in variable order.
    pub images: Vec<Polynomial>,
    pub support_lengths: Vec<usize>,
    pub final_vars: Vec<usize>,
    pub final_generators: Vec<Polynomial>,
}

impl LshapeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Determinant by cofactor expansion along the first row, skipping zero entries.
pub fn determinant(m: &[Vec<Polynomial>], arity: usize) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(arity),
        1 => m[0][0].clone(),
        n => {
            let mut out = Polynomial::zero(arity);
            for (col, a) in m[0].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = a * &determinant(&minor, arity);
                out = if col % 2 == 0 { &out + &term } else { &out - &term };
            }
            debug_assert!(n > 1);
            out
        }
    }
}

fn check(checks: &mut Vec<PipelineCheck>, name: &str, passed: bool, detail: String) {
    checks.push(PipelineCheck { name: name.into(), passed, detail });
}

pub fn verify_lshape_pipeline() -> Result<LshapeReport, ReembedError> {
    let s = BBScheme::new(OrderIdeal::lshape());
    let arity = s.arity();
    let vars = s.vars();
    let v = |n: &str| s.var_by_name(n).expect("L-shape variable");
    let parse = |src: &str| parse_polynomial(src, vars);
    let mut checks = Vec::new();

    // (1) best separating re-embedding along the printed tuple
    let z: Vec<usize> = LSHAPE_Z.iter().map(|n| v(n)).collect();
    let witness = super::check_separating(&s, &z)?.ok_or_else(|| ReembedError::Check("printed tuple does not separate".into()))?;
    let phi = zsep_reembed(&s, &witness)?;
    let f1 = parse(LSHAPE_F1)?;
    let f2 = parse(LSHAPE_F2)?;
    check(
        &mut checks,
        "two generators in twelve variables",
        phi.generators.len() == 2 && phi.remaining.len() == 12,
        format!("{} generators, {} variables", phi.generators.len(), phi.remaining.len()),
    );
    let matches = |f: &Polynomial| phi.generators.iter().any(|g| g == f || *g == f.scale(&crate::polyring::q_int(-1)));
    check(&mut checks, "f1 as printed", matches(&f1), String::new());
    check(&mut checks, "f2 as printed", matches(&f2), String::new());

    // (2) unimodular change of coordinates
    let mat = |rows: &[&[&str]]| -> Result<Vec<Vec<Polynomial>>, ReembedError> {
        rows.iter().map(|r| r.iter().map(|e| parse(e).map_err(Into::into)).collect()).collect()
    };
    let b1 = mat(&LSHAPE_B1.iter().map(|r| &r[..]).collect::<Vec<_>>())?;
    let b2 = mat(&LSHAPE_B2.iter().map(|r| &r[..]).collect::<Vec<_>>())?;
    for (name, b) in [("det B1 is a nonzero constant", &b1), ("det B2 is a nonzero constant", &b2)] {
        let d = determinant(b, arity);
        let ok = !d.is_zero() && d.total_degree() == Some(0);
        check(&mut checks, name, ok, s.render(&d));
    }
    let mut psi = SubstitutionMap::new(arity);
    for (b, names) in [(&b1, &LSHAPE_B1_VARS[..]), (&b2, &LSHAPE_B2_VARS[..])] {
        for (r, target) in names.iter().enumerate() {
            let mut img = Polynomial::zero(arity);
            for (c, n) in names.iter().enumerate() {
                img = &img + &(&b[r][c] * &Polynomial::var(arity, v(n)));
            }
            if img != Polynomial::var(arity, v(target)) {
                psi.insert(v(target), img);
            }
        }
    }
    let printed: BTreeMap<usize, Polynomial> =
        LSHAPE_PSI.iter().map(|(n, src)| Ok((v(n), parse(src)?))).collect::<Result<_, ReembedError>>()?;
    let same = psi.domain().collect::<Vec<_>>() == printed.keys().copied().collect::<Vec<_>>()
        && printed.iter().all(|(k, p)| psi.get(*k) == Some(p));
    check(&mut checks, "matrices reproduce the printed coordinate change", same, String::new());

    let pf1 = substitute(&f1, &psi);
    let pf2 = substitute(&f2, &psi);
    // The printed matrices send the printed f1 to -c21; the sign is immaterial for separation.
    let c21 = Polynomial::var(arity, v("c21"));
    check(&mut checks, "psi(f1) = ±c21", pf1 == c21 || pf1 == -&c21, s.render(&pf1));
    let zz = [v("c21"), v("c22")];
    let mut zs = zz.to_vec();
    zs.sort_unstable();
    let cons: Option<Vec<_>> = [(&pf1, zz[0]), (&pf2, zz[1])].iter().map(|(f, z)| constraints(f, *z, &zs)).collect();
    let w = cons.and_then(|c| lp_realizable(arity, &c));
    check(&mut checks, "(psi(f1), psi(f2)) is (c21, c22)-separating", w.is_some(), String::new());
    let w = w.ok_or_else(|| ReembedError::Check("psi(f2) is not c22-separating".into()))?;

    // (3) drop c21 from psi(f2) and eliminate c21, c22
    let mut kill = SubstitutionMap::new(arity);
    kill.insert(v("c21"), Polynomial::zero(arity));
    let hf2 = substitute(&pf2, &kill);
    let theta = coherentize(&[pf1.clone(), hf2.clone()], &zz, &w)?;
    check(&mut checks, "final substitution is coherent", theta.is_coherent(), String::new());
    let theta_witness = SeparatingWitness {
        z: zz.to_vec(),
        f: vec![pf1.clone(), hf2.clone()],
        w: w.clone(),
        sigma: OrderingMatrix::from_rational_weights(&w)?,
    };
    check(&mut checks, "final tuple has the right leading terms", theta_witness.verify(), String::new());

    let final_generators: Vec<Polynomial> =
        [&pf1, &pf2].iter().map(|f| substitute(f, &theta)).filter(|p| !p.is_zero()).collect();
    let final_vars: Vec<usize> = phi.remaining.iter().copied().filter(|u| !zz.contains(u)).collect();
    let expected_vars: Vec<usize> = LSHAPE_FINAL_VARS.iter().map(|n| v(n)).collect();
    check(
        &mut checks,
        "ten free variables remain",
        final_generators.is_empty() && final_vars == expected_vars,
        format!("{} generators, {} variables", final_generators.len(), final_vars.len()),
    );

    // composite Θ∘Ψ∘Φ
    let compose = |p: &Polynomial| substitute(&substitute(&substitute(p, &phi.substitution), &psi), &theta);
    let images: Vec<Polynomial> = (0..arity).map(|u| compose(&Polynomial::var(arity, u))).collect();
    let killed = s.natural_generators().iter().all(|g| compose(&g.poly).is_zero());
    check(&mut checks, "every natural generator maps to zero", killed, String::new());
    let free = images.iter().all(|p| p.variables().iter().all(|u| expected_vars.contains(u)));
    check(&mut checks, "images lie in the final ring", free, String::new());
    let support_lengths: Vec<usize> = images.iter().map(Polynomial::len).collect();
    check(
        &mut checks,
        "support lengths as printed",
        support_lengths == LSHAPE_SUPPORT_LENGTHS,
        format!("{support_lengths:?}"),
    );
    Ok(LshapeReport { checks, f1, f2, images, support_lengths, final_vars, final_generators })
}
