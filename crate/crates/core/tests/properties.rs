use crqa_core::optimize::optimize_param;
use crqa_core::{
    cross_correlation, crqa, ctcrqa, drpdfromts, oracle, simulate_dyad, windowdrp, CrqaParams, DyadParams,
    EmbeddingParams, Normalization, OptimizeConfig, Rescale, TimeSeries,
};
use proptest::prelude::*;

fn binary(len: std::ops::Range<usize>) -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec(0i64..2, len).prop_map(|v| TimeSeries::from_codes(&v).unwrap())
}

fn codes(len: std::ops::Range<usize>) -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec(0i64..4, len).prop_map(|v| TimeSeries::from_codes(&v).unwrap())
}

fn continuous(len: std::ops::Range<usize>) -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec(-3.0f64..3.0, len).prop_map(|v| TimeSeries::continuous(v).unwrap())
}

fn params(delay: usize, embed: usize, radius: f64, rescale: Rescale, normalize: Normalization) -> CrqaParams {
    CrqaParams {
        embedding: EmbeddingParams {
            delay,
            embed,
            rescale,
            normalize,
            radius,
        },
        ..CrqaParams::default()
    }
}

fn rescale_mode() -> impl Strategy<Value = Rescale> {
    prop_oneof![Just(Rescale::None), Just(Rescale::MeanDistance), Just(Rescale::MaxDistance)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binary_pairs_match_reference(
        a in binary(8..80),
        b in binary(8..80),
        delay in 1usize..3,
        embed in 1usize..4,
        mindiag in 2usize..4,
    ) {
        let mut p = params(delay, embed, 0.0, Rescale::None, Normalization::None);
        p.mindiagline = mindiag;
        let fast = crqa(&a, &b, &p, false).unwrap().measures;
        let slow = oracle::crqa(&a, &b, &p).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn continuous_pairs_match_reference(
        a in continuous(8..80),
        b in continuous(8..80),
        delay in 1usize..3,
        embed in 1usize..4,
        radius in 0.05f64..1.5,
        rescale in rescale_mode(),
    ) {
        let p = params(delay, embed, radius, rescale, Normalization::UnitInterval);
        let fast = crqa(&a, &b, &p, false).unwrap().measures;
        let slow = oracle::crqa(&a, &b, &p).unwrap();
        prop_assert_eq!(fast.rr, slow.rr);
        prop_assert_eq!(fast.det, slow.det);
        prop_assert_eq!(fast.lmax, slow.lmax);
        prop_assert_eq!(fast.tt, slow.tt);
        prop_assert!((fast.entr - slow.entr).abs() <= 1e-12);
    }

    #[test]
    fn measures_stay_in_range(a in continuous(10..60), b in continuous(10..60), radius in 0.0f64..4.0) {
        let m = crqa(&a, &b, &params(1, 2, radius, Rescale::None, Normalization::None), false).unwrap().measures;
        for pct in [m.rr, m.det, m.lam] {
            prop_assert!((0.0..=100.0).contains(&pct));
        }
        prop_assert!(m.entr >= 0.0 && m.rel_entr >= 0.0);
        if m.nrline == 0 {
            prop_assert_eq!(m.l, 0.0);
        } else {
            prop_assert!(m.l >= 2.0);
        }
    }

    #[test]
    fn swapping_series_transposes_the_plot(a in codes(10..60), b in codes(10..60)) {
        let p = params(1, 1, 0.0, Rescale::None, Normalization::None);
        let ab = crqa(&a, &b, &p, true).unwrap();
        let ba = crqa(&b, &a, &p, true).unwrap();
        prop_assert_eq!(ab.plot.unwrap().transpose(), ba.plot.unwrap());
        // diagonal lines map onto diagonal lines
        prop_assert_eq!(ab.measures.rr, ba.measures.rr);
        prop_assert_eq!(ab.measures.det, ba.measures.det);
        prop_assert_eq!(ab.measures.nrline, ba.measures.nrline);
        prop_assert_eq!(ab.measures.lmax, ba.measures.lmax);
        prop_assert_eq!(ab.measures.entr, ba.measures.entr);
    }

    #[test]
    fn profile_mirrors_under_swap(a in codes(30..80), b in codes(30..80), ws in 1usize..10) {
        let ab = drpdfromts(&a, &b, ws, 0.0).unwrap();
        let ba = drpdfromts(&b, &a, ws, 0.0).unwrap();
        for (k, d) in ab.positions.iter().enumerate() {
            prop_assert_eq!(Some(ab.values[k]), ba.value_at(-d));
        }
    }

    #[test]
    fn table_trace_is_categorical_recurrence(a in codes(30..80), b in codes(30..80), ws in 1usize..8) {
        prop_assume!(a.len().abs_diff(b.len()) <= 8);
        let drp = drpdfromts(&a, &b, ws, 0.0).unwrap();
        let ct = ctcrqa(&a, &b, &drp.positions, 8).unwrap();
        prop_assert_eq!(ct.values, drp.values);
    }
}

#[test]
fn non_overlapping_windows() {
    let x = TimeSeries::from_codes(&(0..80).map(|i| i % 3).collect::<Vec<i64>>()).unwrap();
    let p = windowdrp(&x, &x, 40, 40, 2, 0.0).unwrap();
    assert_eq!(p.positions, vec![0, 40]);
}

// A failed P(S|C) draw falls through to the base rate, so the coupling only
// vanishes with P(S|C) = 0.
#[test]
fn uncoupled_dyads_show_no_lead() {
    let mut total = 0.0;
    for run in 0..20 {
        let p = DyadParams {
            p_sc: 0.0,
            ..DyadParams::low(1000, 500 + run)
        };
        let (c, s) = simulate_dyad(&p).unwrap();
        assert!(c.values().iter().chain(s.values()).all(|&v| v == 0.0 || v == 1.0));
        assert_eq!((c.len(), s.len()), (1000, 1000));
        total += cross_correlation(&c, &s, 3).unwrap().value_at(-1).unwrap();
    }
    assert!((total / 20.0).abs() < 0.03, "{}", total / 20.0);
}

#[test]
fn optimizer_is_deterministic_and_feasible() {
    let x: Vec<f64> = (0..300).map(|t| (0.13 * t as f64).sin() + 0.3 * (0.71 * t as f64).cos()).collect();
    let y: Vec<f64> = (0..280).map(|t| (0.13 * t as f64 + 0.3).sin()).collect();
    let (x, y) = (TimeSeries::continuous(x).unwrap(), TimeSeries::continuous(y).unwrap());
    let cfg = OptimizeConfig {
        max_embed: 8,
        ..OptimizeConfig::default()
    };
    let first = optimize_param(&x, &y, &cfg).unwrap();
    let second = optimize_param(&x, &y, &cfg).unwrap();
    assert_eq!(first, second);
    let p = first.params;
    let embedding = EmbeddingParams {
        delay: p.delay,
        embed: p.emddim,
        radius: p.radius,
        ..EmbeddingParams::default()
    };
    assert!(embedding.feasible_for(x.len()) && embedding.feasible_for(y.len()));
    if first.radius.in_band {
        let rr = crqa(&x, &y, &CrqaParams { embedding, ..CrqaParams::default() }, false)
            .unwrap()
            .measures
            .rr;
        assert_eq!(rr, first.radius.rr);
        assert!((1.0..=5.0).contains(&rr));
    }
}

#[test]
fn measure_bundle_is_a_flat_object() {
    let m = crqa_core::CrqaMeasures::default();
    let value = serde_json::to_value(m).unwrap();
    let obj = value.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut names = crqa_core::CrqaMeasures::NAMES.to_vec();
    names.sort_unstable();
    assert_eq!(keys, names);
    assert!(obj.values().all(|v| v.is_number()));
}
