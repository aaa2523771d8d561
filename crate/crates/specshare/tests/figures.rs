use specshare::figures::{figure_configs, run_figure, DATASETS};
use specshare::table::COLUMNS;
use specshare::RunConfig;

fn idx(name: &str) -> usize {
    COLUMNS.iter().position(|c| *c == name).unwrap()
}

fn num(r: &[String], name: &str) -> f64 {
    r[idx(name)].parse().unwrap()
}

#[test]
fn every_dataset_has_points() {
    for id in DATASETS {
        assert!(!figure_configs(id, None).unwrap().is_empty(), "{id}");
    }
    assert!(figure_configs("fig99", None).is_err());
}

#[test]
fn degree_of_cooperation_is_zero_or_one() {
    let rows = run_figure("degree_coop_vs_delta", None).unwrap();
    let mut at_zero = 0;
    for r in &rows {
        let delta = num(r, "delta");
        if r[idx("exists")] != "true" {
            continue;
        }
        let ratio = num(r, "degree_coop");
        if delta < -1e-12 {
            assert_eq!(ratio, 1.0);
        } else if delta > 1e-12 {
            assert_eq!(ratio, 0.0);
        } else {
            at_zero += 1;
        }
    }
    assert_eq!(at_zero, 2);
}

#[test]
fn investment_drops_to_floor_above_gamma_threshold() {
    let rows = run_figure("outside_invest_vs_gamma", None).unwrap();
    let pts: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| !r[idx("i_l")].is_empty())
        .map(|r| (num(r, "gamma"), num(r, "i_l"), num(r, "l0")))
        .collect();
    let first_floor = pts.iter().position(|p| p.1 == p.2).unwrap();
    assert!(first_floor > 0);
    assert!(pts[..first_floor].iter().all(|p| p.1 > p.2));
    assert!(pts[first_floor..].iter().all(|p| p.1 == p.2));
}

#[test]
fn config_overrides_constants() {
    let mut cfg = RunConfig::outside();
    cfg.params.gamma = 1.0;
    let pts = figure_configs("outside_invest_vs_L0", Some(&cfg)).unwrap();
    assert!(pts.iter().all(|c| c.params.gamma == 1.0));
    let pts = figure_configs("resource_cost", Some(&cfg)).unwrap();
    assert!(pts.iter().all(|c| c.mode == specshare::Mode::Base));
}
