//! Disagreement points frozen from an independent dense-grid solve
//! (200 001 leader points, exact follower candidates, bounded polish).

use specshare_core::disagreement::{solve_base_disagreement, solve_outside_disagreement, DisagreementConfig};
use specshare_core::model::Provenance;
use specshare_core::MarketParams;

const TOL: f64 = 1e-7;

fn base(delta: f64, s: f64) -> MarketParams {
    MarketParams { gamma: 0.5, c: 1.0, s_market: s, delta_part1: 0.01, ..Default::default() }.with_delta(delta)
}

#[test]
fn base_interior_points() {
    // (Δ, s, I_L, I_F, d_l, d_f)
    let table = [
        (-0.9, 1.0, 0.567_646_213, 0.567_646_211, 0.162_222_220, 0.612_222_221),
        (-0.5, 1.0, 0.527_046_276, 0.527_046_276, 1.0 / 6.0, 5.0 / 12.0),
        (0.0, 1.0, 0.471_404_522, 0.471_404_516, 0.222_222_220, 0.222_222_221),
        (0.5, 1.0, 0.562_617_894, 0.152_153_468, 0.417_208_458, 0.042_802_132),
        (0.9, 1.0, 0.475_011_142, 0.046_085_360, 0.762_272_678, 0.002_189_106),
        (-0.5, 0.8, 0.589_255_648, 0.589_255_648, 0.131_944_443, 0.416_666_670),
        (-0.5, 1.2, 0.481_125_227, 0.481_125_227, 0.189_814_817, 0.416_666_663),
        (-0.5, 2.0, 0.372_677_998, 0.372_677_991, 0.236_111_105, 0.416_666_663),
    ];
    for (delta, s, i_l, i_f, d_l, d_f) in table {
        let p = base(delta, s);
        let o = solve_base_disagreement(&p, &DisagreementConfig::for_params(&p)).unwrap();
        let tag = format!("Δ={delta} s={s}: {o:?}");
        assert_eq!(o.point.provenance, Provenance::NumericalPart1);
        assert!((o.point.d_l - d_l).abs() < TOL, "{tag}");
        assert!((o.point.d_f - d_f).abs() < TOL, "{tag}");
        assert!((o.alloc.i_l() - i_l).abs() < 1e-5, "{tag}");
        assert!((o.alloc.i_f() - i_f).abs() < 1e-5, "{tag}");
        assert!(o.alloc.i_l() > p.delta_part1);
    }
}

#[test]
fn follower_matches_leader_at_kink() {
    // for Δ < 0 the leader stops where the follower's optimum reaches I_L:
    // I_L² = (2 - Δ) / (9s)
    for (delta, s) in [(-0.5, 1.0), (-0.5, 2.0), (-0.2, 1.5)] {
        let p = base(delta, s);
        let o = solve_base_disagreement(&p, &DisagreementConfig::for_params(&p)).unwrap();
        let kink = ((2.0 - delta) / (9.0 * s)).sqrt();
        assert!((o.alloc.i_l() - kink).abs() < 1e-8, "{o:?} vs {kink}");
    }
}

#[test]
fn outside_preset_point() {
    let p = MarketParams::outside_preset();
    let o = solve_outside_disagreement(&p, &DisagreementConfig::for_params(&p)).unwrap();
    assert!((o.alloc.i_l() - 0.429_161_156).abs() < 1e-7);
    assert!((o.point.d_l - 0.251_711_707).abs() < TOL);
    assert!((o.point.d_f - 0.122_786_196).abs() < TOL);
}
