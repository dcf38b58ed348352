use std::sync::OnceLock;

use calibrated_torsion::frame_relations::{derive_relations, Family, RelationSet};
use calibrated_torsion::g2_algebra::G2Structure;
use calibrated_torsion::g2_torsion::{self, RefinedTorsionG2};
use calibrated_torsion::multilinear::json::{form_from_json, form_to_json};
use calibrated_torsion::multilinear::MultiIndex;
use calibrated_torsion::rational::rat;
use calibrated_torsion::so4_refine::{self, So4Refinement};
use calibrated_torsion::sph4_refine::{self, Sph4Refinement};
use calibrated_torsion::spin7_torsion::{self, RefinedTorsionSpin7};
use calibrated_torsion::{Coeff, Form, ParamExpr, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn form(dim: usize, grade: usize) -> impl Strategy<Value = Form> {
    let idx = MultiIndex::all(dim, grade);
    prop::collection::vec(-3i64..=3, idx.len()).prop_map(move |cs| {
        let mut f = Form::zero(dim, grade);
        for (m, c) in idx.iter().zip(cs) {
            f.add_term(*m, &rat(c, 1));
        }
        f
    })
}

fn relations(f: Family) -> &'static RelationSet {
    static SETS: OnceLock<Vec<RelationSet>> = OnceLock::new();
    let sets = SETS.get_or_init(|| Family::ALL.iter().map(|&f| derive_relations(f).unwrap()).collect());
    sets.iter().find(|s| s.family() == f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn g2_refined_torsion_roundtrip(vals in prop::collection::vec(rational(), 49)) {
        let mut rt = RefinedTorsionG2::zero();
        for (n, v) in RefinedTorsionG2::slot_names().iter().zip(vals) {
            rt = rt.with(n, ParamExpr::constant(v)).unwrap();
        }
        let t = g2_torsion::solve_t(&rt);
        prop_assert_eq!(g2_torsion::refined_from_t(&t), rt.clone());
        prop_assert_eq!(g2_torsion::bryant_tau_from_t(&t), g2_torsion::assemble_refined(&rt).unwrap());
        let back = RefinedTorsionG2::from_json(&rt.to_json()).unwrap();
        prop_assert_eq!(back, rt);
    }

    #[test]
    fn spin7_refined_torsion_roundtrip(vals in prop::collection::vec(rational(), 56)) {
        let mut rt = RefinedTorsionSpin7::zero();
        for (n, v) in RefinedTorsionSpin7::slot_names().iter().zip(vals) {
            rt = rt.with(n, ParamExpr::constant(v)).unwrap();
        }
        let t = spin7_torsion::solve_t_spin7(&rt);
        prop_assert_eq!(spin7_torsion::refined_from_t_spin7(&t), rt.clone());
        prop_assert_eq!(spin7_torsion::tau_from_t_spin7(&t), spin7_torsion::assemble_refined_spin7(&rt).unwrap());
    }

    #[test]
    fn g2_three_form_pieces(f in form(7, 3)) {
        let g2 = G2Structure::standard();
        let (a, b, c) = g2.project_lambda3(&f).unwrap();
        prop_assert_eq!(a.add(&b).add(&c), f.clone());
        prop_assert!(g2.in_lambda3_27(&c));
        prop_assert_eq!(g2.project_lambda3(&c).unwrap().2, c.clone());
        let r = So4Refinement::standard();
        let parts = r.refine3(&f).unwrap();
        prop_assert_eq!(parts.total(), f);
        for (label, p) in parts.to_vec() {
            prop_assert!(r.in_component(&p, label).unwrap());
        }
        // pieces of distinct labels are orthogonal
        let v = parts.to_vec();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                prop_assert!(v[i].1.inner(&v[j].1).unwrap().is_zero_coeff());
            }
        }
    }

    #[test]
    fn g2_two_form_pieces(f in form(7, 2)) {
        let r = So4Refinement::standard();
        let parts = r.refine2(&f).unwrap();
        prop_assert_eq!(parts.total(), f);
        prop_assert_eq!(parts.to_vec().len(), so4_refine::LABELS2.len());
    }

    #[test]
    fn spin7_pieces(f in form(8, 3), b in form(8, 2)) {
        let r = Sph4Refinement::standard();
        prop_assert_eq!(r.refine3(&f).unwrap().total(), f.clone());
        prop_assert_eq!(r.refine2(&b).unwrap().total(), b);
        for (label, p) in r.refine3(&f).unwrap().to_vec() {
            prop_assert!(r.in_component(&p, label).unwrap());
        }
        prop_assert_eq!(sph4_refine::LABELS3.len(), 8);
    }

    #[test]
    fn form_json_roundtrip(f in form(7, 3)) {
        let back: Form = form_from_json(&form_to_json(&f)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn expression_text_roundtrip(cs in prop::collection::vec(rational(), 4), k in rational()) {
        let names = ["B4", "M4", "S1_3", "T5_4"];
        let mut e = ParamExpr::constant(k);
        for (n, c) in names.iter().zip(cs) {
            e.add_assign(&ParamExpr::term(n, c));
        }
        prop_assert_eq!(ParamExpr::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn combinations_of_relations_reduce_to_zero(
        family in prop::sample::select(Family::ALL.to_vec()),
        cs in prop::collection::vec(-4i64..=4, 24),
    ) {
        let set = relations(family);
        let mut e = ParamExpr::default();
        for (r, c) in set.relations.iter().zip(cs) {
            e.add_assign(&r.expr.scale(&rat(c, 1)));
        }
        prop_assert!(set.implies(&e));
        prop_assert!(set.reduce_fully(&e).is_zero_coeff());
        // a lone T atom is never a consequence
        let t = ParamExpr::atom(&set.params.t_atoms[0]);
        prop_assert!(!set.implies(&e.add(&t)));
    }
}
