mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;
use tribox::boxes::{all_deterministic, all_two_way, family_box, Cut, FamilyParam, SingleBox, TripartiteBox};
use tribox::decomposition::{
    certify_genuine, certify_genuine_all_cuts, certify_super_bi_unsteerable, Conclusion, GenuineConclusion, SearchOptions,
    Status,
};
use tribox::inequalities::{lp_membership, mermin_value, strength, svetlichny_value, Polytope, StrengthKind};
use tribox::quantum::{
    assemblage, born_bipartite, born_single, paper_state, sigma_pair, tlm_realizable, validate_assemblage, PaperState,
    TlmVerdict,
};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn boxes_round_trip(bx in arb_box()) {
        prop_round_trip(bx)?;
    }

    #[test]
    fn family_boxes_are_exactly_no_signalling(f in arb_family()) {
        prop_ns_exact(f)?;
    }

    #[test]
    fn permutations_act_as_a_group(bx in arb_box()) {
        prop_group_action(bx)?;
    }

    #[test]
    fn violation_flag_matches_value(bx in arb_box(), tol in 0.0f64..1e-6) {
        let m = mermin_value(&bx, tol);
        prop_assert_eq!(m.violated, m.value > m.bound + tol);
        let s = svetlichny_value(&bx, tol);
        prop_assert_eq!(s.violated, s.value > s.bound + tol);
        prop_assert!((m.value - mermin_oracle(&bx)).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn search_is_monotone_on_families(f in arb_family(), cut in arb_cut()) {
        prop_monotone(&family_box(&f), cut)?;
    }

    #[test]
    fn search_is_monotone_on_mixtures(bx in arb_box(), cut in arb_cut()) {
        prop_monotone(&bx, cut)?;
    }

    #[test]
    fn feasible_witnesses_verify(f in arb_family(), cut in arb_cut()) {
        prop_witnesses_verify(&family_box(&f), cut)?;
    }

    #[test]
    fn mixture_witnesses_verify(bx in arb_box(), cut in arb_cut()) {
        prop_witnesses_verify(&bx, cut)?;
    }

    #[test]
    fn certificate_conclusion_follows_verdicts(f in arb_family(), cut in arb_cut(), qdim in 1usize..=3) {
        let c = certify_super_bi_unsteerable(&family_box(&f), cut, qdim, None, &SearchOptions::default()).unwrap();
        let low_refuted = c.verdicts[..qdim].iter().all(|v| v.status == Status::Infeasible);
        let high_quantum = c.verdicts[qdim..].iter().any(|v| v.status == Status::FeasibleWithQuantumPieces);
        prop_assert_eq!(c.conclusion == Conclusion::SuperBiUnsteerable, low_refuted && high_quantum);
    }

    #[test]
    fn strength_reconstructs(bx in arb_box()) {
        for kind in [StrengthKind::Mermin, StrengthKind::Svetlichny] {
            let r = strength(&bx, kind).unwrap();
            prop_assert!((0.0..=1.0 + 1e-9).contains(&r.p));
            let own = match kind {
                StrengthKind::Mermin => mermin_value(&bx, 1e-7),
                StrengthKind::Svetlichny => svetlichny_value(&bx, 1e-7),
            };
            if !r.decomposable {
                // p = 0 would leave the box itself as residual, so it must violate.
                prop_assert!(r.p == 0.0 && r.residual_box.is_none());
                prop_assert!(own.violated);
                continue;
            }
            prop_assert!(r.reconstruction_error <= 1e-7, "{:?}: {}", kind, r.reconstruction_error);
            if let Some(res) = &r.residual_box {
                prop_assert!(res.validate(1e-7).is_valid());
                let value = match kind {
                    StrengthKind::Mermin => mermin_value(res, 1e-7),
                    StrengthKind::Svetlichny => svetlichny_value(res, 1e-7),
                };
                prop_assert!(!value.violated, "residual violates {:?}: {}", kind, value.value);
            }
        }
    }
}

fn arb_local_mixture() -> impl Strategy<Value = TripartiteBox> {
    prop::collection::vec((0usize..64, 0.01f64..1.0), 1..=5).prop_map(|picks| {
        let det = all_deterministic();
        let total: f64 = picks.iter().map(|p| p.1).sum();
        let mut e = vec![0.0; TripartiteBox::LEN];
        for (k, w) in picks {
            for (out, v) in e.iter_mut().zip(det[k].1.entries()) {
                *out += w / total * v;
            }
        }
        TripartiteBox::from_entries(e).unwrap()
    })
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn local_mixtures_are_recovered(bx in arb_local_mixture()) {
        let r = lp_membership(&bx, Polytope::FullyLocal, 1e-7).unwrap();
        prop_assert!(r.feasible);
        prop_assert_eq!(r.weights.len(), 64);
        let det = all_deterministic();
        let mut mix = vec![0.0; TripartiteBox::LEN];
        for ((_, w), (_, v)) in r.weights.iter().zip(&det) {
            prop_assert!(*w >= -1e-9);
            for (m, e) in mix.iter_mut().zip(v.entries()) {
                *m += w * e;
            }
        }
        let err = mix.iter().zip(bx.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-7, "recovered mixture off by {}", err);
    }
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn born_tables_are_boxes(g in prop::collection::vec(-1.0f64..1.0, 128), axes in prop::collection::vec(-1.0f64..1.0, 18)) {
        prop_born_valid(&mixed_state(8, &g), &axes)?;
    }
}

proptest! {
    #![proptest_config(cfg(50))]

    #[test]
    fn assemblages_do_not_signal(g in prop::collection::vec(-1.0f64..1.0, 32), axes in prop::collection::vec(-1.0f64..1.0, 6)) {
        let rho = mixed_state(4, &g);
        let pair = [axis_measurement(&axes[..3]), axis_measurement(&axes[3..])];
        let asm = assemblage(&rho, &pair, [2, 2]).unwrap();
        let report = validate_assemblage(&asm, 1e-9);
        prop_assert!(report.is_valid(), "{:?}", report);
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn arcsine_test_accepts_quantum_correlators(ket in prop::collection::vec(-1.0f64..1.0, 8), axes in prop::collection::vec(-1.0f64..1.0, 12)) {
        let m: Vec<_> = axes.chunks(3).map(axis_measurement).collect();
        let bx = born_bipartite(&ket_state(&ket), &[[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]]).unwrap();
        let c = bx.correlators();
        let v = tlm_realizable([c[0][0], c[0][1], c[1][0], c[1][1]], true, tribox::tol::TLM).unwrap();
        prop_assert_ne!(v, TlmVerdict::NotRealizable);
    }
}

#[test]
fn hidden_pair_states_reproduce_the_tables() {
    for k in 1..=20 {
        let v = FRAC_1_SQRT_2 * k as f64 / 20.0;
        for lambda in 0..4 {
            let rho = paper_state(PaperState::LhsPair { lambda }, v).unwrap();
            let t = born_bipartite(&rho, &[sigma_pair(), sigma_pair()]).unwrap();
            let d = t.max_abs_diff(&expected_piece(lambda, v));
            assert!(d <= 1e-12, "λ = {lambda}, V = {v}: {d:e}");
        }
    }
}

#[test]
fn hidden_qubit_states_reproduce_the_tables() {
    // ⟨C_0⟩, ⟨C_1⟩ per hidden value, in units of 2V.
    let expect = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
    for k in 1..=20 {
        let v = 0.5 * k as f64 / 20.0;
        for (lambda, e) in expect.iter().enumerate() {
            let rho = paper_state(PaperState::LhsQubit { lambda }, v).unwrap();
            let t = born_single(&rho, &sigma_pair()).unwrap();
            let want = SingleBox::from_p0([(1.0 + 2.0 * v * e[0]) / 2.0, (1.0 + 2.0 * v * e[1]) / 2.0]);
            assert!(t.max_abs_diff(&want) <= 1e-12, "λ = {lambda}, V = {v}");
        }
    }
}

#[test]
fn genuine_certificate_agrees_with_every_cut() {
    let opts = SearchOptions::default();
    let mut runner = proptest::test_runner::TestRunner::new(cfg(20));
    runner
        .run(&(1e-3f64..=FRAC_1_SQRT_2), |v| {
            let bx = family_box(&FamilyParam::mermin(v).unwrap());
            let short = certify_genuine(&bx, [2, 2, 2], None, &opts).unwrap();
            let full = certify_genuine_all_cuts(&bx, [2, 2, 2], None, &opts).unwrap();
            prop_assert!(short.symmetry_shortcut && !full.symmetry_shortcut);
            prop_assert_eq!(short.conclusion, GenuineConclusion::GenuineSuperBiUnsteerable);
            prop_assert_eq!(full.conclusion, short.conclusion);
            prop_assert!(full.cuts.iter().all(|c| c.conclusion == short.cuts[0].conclusion));
            Ok(())
        })
        .unwrap();
}

#[test]
fn catalogue_respects_local_bounds() {
    for (id, d) in all_deterministic() {
        assert!(mermin_value(&d, 0.0).value <= 2.0, "{id}");
        assert!(svetlichny_value(&d, 0.0).value <= 4.0, "{id}");
    }
    for (id, t) in all_two_way() {
        assert!(svetlichny_value(&t, 0.0).value <= 4.0 + 1e-15, "{id}");
    }
}

#[test]
fn mermin_boxes_are_non_product_on_every_cut() {
    for k in 1..=10 {
        let bx = family_box(&FamilyParam::mermin(k as f64 / 10.0).unwrap());
        for cut in Cut::ALL {
            assert!(!tribox::boxes::is_product(&bx, cut, 1e-9));
        }
    }
}
