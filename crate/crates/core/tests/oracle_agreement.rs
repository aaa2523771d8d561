use specshare_core::bargaining::solve_base;
use specshare_core::model::DisagreementPoint;
use specshare_core::oracle::{grid_argmax_u_excess, GridSpec, OracleMode};
use specshare_core::outside::{maximize_outside_objective, solve_outside};
use specshare_core::MarketParams;

#[test]
fn base_closed_form_beats_grid() {
    let d = DisagreementPoint::user(0.05, -0.02);
    for delta in [-0.7, -0.2, 0.0, 0.3, 0.8] {
        for (gamma, l0) in [(0.3, 0.2), (0.8, 0.6)] {
            let p = MarketParams { gamma, l0, ..Default::default() }.with_delta(delta);
            let grid = GridSpec::square(l0, 3.0 * l0, 200);
            let r = grid_argmax_u_excess(&p, &d, &grid, OracleMode::Base).unwrap();
            let out = solve_base(&p, &d).unwrap();
            let best = out.solutions.iter().map(|s| s.u_excess_star).fold(f64::NEG_INFINITY, f64::max);
            assert!(best >= r.value - r.tolerance, "Δ={delta}: {best} < {}", r.value);
            assert!((best - r.value).abs() <= r.tolerance.max(1e-12));
            assert_eq!(r.alloc.i_l(), l0);
        }
    }
}

#[test]
fn outside_closed_form_beats_grid() {
    for gamma in [0.8, 1.2, 3.0] {
        let p = MarketParams { gamma, ..MarketParams::outside_preset() };
        let grid = GridSpec::square(p.l0, 1.99, 300);
        let d = DisagreementPoint::zero();
        let r = grid_argmax_u_excess(&p, &d, &grid, OracleMode::Outside).unwrap();
        let (i_star, h) = maximize_outside_objective(&p).unwrap().bounded().unwrap();
        assert!(h >= r.value - 1e-12, "γ={gamma}");
        assert!((r.alloc.i_l() - i_star).abs() <= grid.i_l_step(), "γ={gamma}: {:?} vs {i_star}", r.alloc);
        let out = solve_outside(&p, &d).unwrap();
        assert_eq!(out.solutions.len(), 2);
    }
}
