use bbs_core::bbscheme::{cotangent_classes_of, BBScheme, Generator};
use bbs_core::orderideal::{planar_order_ideals, OrderIdeal};
use bbs_core::polyring::{groebner_basis_with, normal_form, GbOptions, OrderingMatrix, Q};
use bbs_core::reembed::{best_separating_tuples, check_separating, eliminate_non_exposed, weight_assignment, LinearModule};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn planar(lo: u32, hi: u32, maxdeg: Option<bool>) -> Vec<OrderIdeal> {
    (lo..=hi)
        .flat_map(planar_order_ideals)
        .filter(|o| maxdeg.map_or(true, |m| o.is_maxdeg() == m))
        .collect()
}

/// A scheme and a separating tuple of it.
fn separating_instance(maxdeg: bool, hi: u32) -> impl Strategy<Value = (BBScheme, Vec<usize>)> {
    select(planar(2, hi, Some(maxdeg))).prop_flat_map(move |o| {
        let s = BBScheme::new(o);
        let tuples: Vec<Vec<usize>> = if maxdeg {
            best_separating_tuples(&s, 1_000_000).unwrap()
        } else {
            vec![weight_assignment(&s).unwrap().chosen.keys().copied().collect()]
        };
        (Just(s), select(tuples))
    })
}

fn sub_tuple(inst: impl Strategy<Value = (BBScheme, Vec<usize>)>) -> impl Strategy<Value = (BBScheme, Vec<usize>)> {
    inst.prop_flat_map(|(s, z)| {
        let n = z.len();
        (Just(s), subsequence(z, 0..=n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn sub_tuples_of_maxdeg_tuples_separate((s, z) in sub_tuple(separating_instance(true, 8))) {
        prop_assert!(check_separating(&s, &z).unwrap().is_some());
    }

    #[test]
    fn sub_tuples_of_weight_tuples_separate((s, z) in sub_tuple(separating_instance(false, 5))) {
        prop_assert!(check_separating(&s, &z).unwrap().is_some());
    }

    #[test]
    fn witnesses_are_sound((s, z) in sub_tuple(separating_instance(true, 5))) {
        let w = check_separating(&s, &z).unwrap().unwrap();
        prop_assert!(w.verify());
        // W-homogeneous elements with W >= 0: a GB truncated at the element's degree decides membership
        let grading = s.arrow_grading().w;
        let order = OrderingMatrix::weighted(vec![grading.clone()], s.arity()).unwrap();
        let gens: Vec<_> = s.natural_generators().into_iter().map(|g| g.poly).collect();
        for f in &w.f {
            let d = f.weighted_degree(&grading).flatten();
            prop_assert!(d.is_some());
            let gb = groebner_basis_with(&order, &gens, &GbOptions { degree_bound: d, ..GbOptions::default() }).unwrap();
            prop_assert!(normal_form(&order, f, &gb).is_zero());
        }
    }

    #[test]
    fn rescaling_generators_changes_nothing(
        o in select(planar(2, 7, Some(true))),
        scales in proptest::collection::vec((1i64..7, 1i64..5, any::<bool>()), 64),
        pick in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let s = BBScheme::new(o);
        let gens = s.natural_generators();
        let scaled: Vec<Generator> = gens
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let (a, b, neg) = scales[k % scales.len()];
                let q = Q::new(if neg { -a } else { a }.into(), b.into());
                Generator { label: g.label, poly: g.poly.scale(&q) }
            })
            .collect();
        let rows = scaled.iter().map(|g| {
            let mut r = vec![Q::from_integer(0.into()); s.arity()];
            for (t, c) in g.poly.linear_part().terms() {
                r[t.as_var().unwrap()] = c.clone();
            }
            r
        }).collect();
        prop_assert_eq!(cotangent_classes_of(rows, s.arity()), s.cotangent_classes());
        let plus: Vec<usize> = (0..s.arity()).filter(|&v| s.arrow_grading().w[v] > 0).collect();
        let z: Vec<usize> = plus.iter().zip(pick.iter().cycle()).filter(|(_, &p)| p).map(|(&v, _)| v).collect();
        let original = LinearModule::new(&s);
        let rescaled = LinearModule::from_generators(&s, scaled);
        prop_assert_eq!(original.is_separating(&z), rescaled.is_separating(&z));
    }
}

#[test]
fn elimination_never_leaves_non_exposed_variables() {
    for o in planar(1, 6, None) {
        let s = BBScheme::new(o);
        let (_, r) = eliminate_non_exposed(&s).unwrap();
        let exposure = s.exposure();
        for g in &r.generators {
            assert!(g.variables().iter().all(|&v| exposure.is_exposed(v)), "{}", s.order_ideal());
        }
        for (_, img) in r.substitution.iter() {
            assert!(img.variables().iter().all(|&v| exposure.is_exposed(v)), "{}", s.order_ideal());
        }
    }
}
