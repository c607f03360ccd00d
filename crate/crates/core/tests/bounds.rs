use defset::design_analysis::{
    lemma6_bound, theorem5_bound, theorem7_bound, theorem7_simplified_rhs, theorem7_unsimplified,
};
use defset::rect_analysis::{corollary3_bound, theorem2_bound, BoundVariant};

#[test]
fn theorem7_at_k3_is_theorem5() {
    for v in 4..=100 {
        let a = theorem7_bound(v, 3).unwrap();
        let b = theorem5_bound(v).unwrap();
        assert!((a.value - b.value).abs() <= 1e-9, "v = {v}");
        assert_eq!(a.vacuous, b.vacuous);
    }
}

#[test]
fn lemma6_is_theorem5_on_the_projected_point_set() {
    for v in 4..=14 {
        for k in 3..v {
            let vp = v - k + 3;
            if vp < 4 {
                continue;
            }
            let l6 = lemma6_bound(v, k).unwrap();
            let t5 = theorem5_bound(vp).unwrap();
            assert_eq!(l6.exact, t5.exact, "({v},{k})");
            assert_eq!(l6.block_total, t5.block_total);
        }
    }
}

#[test]
fn averaging_step_simplifies_exactly() {
    for v in 4..=30 {
        for k in 3..=v {
            assert_eq!(theorem7_unsimplified(v, k).unwrap(), theorem7_simplified_rhs(v, k).unwrap());
        }
    }
}

#[test]
fn rect_bounds_stay_inside_the_full_size() {
    for m in 1..=8 {
        for n in 1..=8 {
            for t in 2..=8 {
                for variant in [BoundVariant::Verbatim, BoundVariant::Corrected] {
                    let b = theorem2_bound(m, n, t, variant).unwrap();
                    assert!(b.lower_bound >= 0.0);
                    assert!(b.lower_bound <= (m * n * t) as f64);
                }
            }
        }
    }
}

#[test]
fn corrected_never_exceeds_verbatim() {
    for n in 2..=60 {
        let (v, _) = corollary3_bound(n, BoundVariant::Verbatim).unwrap();
        let (c, _) = corollary3_bound(n, BoundVariant::Corrected).unwrap();
        assert!(c.lower_bound <= v.lower_bound, "n = {n}");
    }
}

#[test]
fn reference_values() {
    assert_eq!(format!("{:.6}", theorem2_bound(2, 2, 2, BoundVariant::Verbatim).unwrap().lower_bound), "2.000000");
    let b = theorem2_bound(3, 3, 3, BoundVariant::Verbatim).unwrap();
    assert!((b.lower_bound - 10.040).abs() <= 1e-3);
    assert!((theorem5_bound(9).unwrap().value - 28.644).abs() <= 1e-3);
}
