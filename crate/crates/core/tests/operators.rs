mod common;

use proptest::prelude::*;
use sgs_core::operators::*;
use sgs_core::{subset_stats, Graph, PhaseField, Potential};

fn phase_for(g: &Graph, raw: &[f64]) -> PhaseField {
    PhaseField::from_edge_values(g, raw.iter().cycle().take(g.edge_count()).copied().collect()).unwrap()
}

fn cvec(re: &[f64], im: &[f64], n: usize) -> Vec<C64> {
    (0..n).map(|i| C64::new(re[i % re.len()], im[i % im.len()])).collect()
}

fn angles() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, 1..40)
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0..3.0f64, 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laplacian_between_zero_and_twice_degree(g in common::arb_graph(14), re in values(), im in values()) {
        let z = Potential::zeros(g.vertex_count());
        let f = cvec(&re, &im, g.vertex_count());
        let lap = schrodinger(&g, &z, None).unwrap().quad_form(&f).unwrap();
        let deg = degree(&g, &z).unwrap().quad_form(&f).unwrap();
        prop_assert!(lap >= -1e-12);
        prop_assert!(lap <= 2.0 * deg + 1e-12);
    }

    #[test]
    fn indicator_form_is_boundary(g in common::arb_graph(14), bits in any::<u16>()) {
        let n = g.vertex_count();
        let z = Potential::zeros(n);
        let w: Vec<usize> = (0..n).filter(|&x| bits & (1 << x) != 0).collect();
        let ind: Vec<f64> = (0..n).map(|x| if w.contains(&x) { 1.0 } else { 0.0 }).collect();
        let form = schrodinger(&g, &z, None).unwrap().quad_form_real(&ind).unwrap();
        prop_assert_eq!(form, subset_stats(&g, &z, &w).unwrap().boundary as f64);
    }

    #[test]
    fn hermitian_and_real_forms((g, q) in common::arb_instance(12, -2.0, 3.0), th in angles(), re in values(), im in values()) {
        let phase = phase_for(&g, &th);
        let op = assemble(&g, &q, Some(&phase), OperatorKind::Magnetic).unwrap();
        let n = g.vertex_count();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(op.entry(x, y), op.entry(y, x).conj());
            }
        }
        let f = cvec(&re, &im, n);
        let mf = op.apply(&f).unwrap();
        let inner: C64 = f.iter().zip(&mf).map(|(a, b)| a.conj() * b).sum();
        prop_assert!(inner.im.abs() <= 1e-10 * (1.0 + inner.re.abs()));
        prop_assert!((inner.re - op.quad_form(&f).unwrap()).abs() <= 1e-10 * (1.0 + inner.re.abs()));
    }

    #[test]
    fn gauge_conjugation((g, q) in common::arb_instance(12, -2.0, 3.0), th in angles(), re in values(), im in values()) {
        let phase = phase_for(&g, &th);
        let f = cvec(&re, &im, g.vertex_count());
        let fc: Vec<C64> = f.iter().map(|v| v.conj()).collect();
        let a = assemble(&g, &q, Some(&phase), OperatorKind::Magnetic).unwrap().quad_form(&f).unwrap();
        let b = assemble(&g, &q, Some(&phase.negated()), OperatorKind::Magnetic).unwrap().quad_form(&fc).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn upside_down_entrywise(g in common::arb_graph(14), th in angles()) {
        prop_assert!(upside_down_identity(&g, &phase_for(&g, &th)).unwrap() <= 1e-12);
    }

    #[test]
    fn kato_inequality((g, q) in common::arb_instance(14, -2.0, 3.0), th in angles(), re in values(), im in values()) {
        let f = cvec(&re, &im, g.vertex_count());
        prop_assert!(kato_gap(&g, &q, &phase_for(&g, &th), &f).unwrap() >= -1e-10);
    }
}
