use std::sync::Arc;

use nyspca::experiment::{read_results_csv, write_results_csv, RESULT_COLUMNS};
use nyspca::{expand_l_grid, run_experiment, time_methods, DataSource, ExperimentConfig, LRule, ResultRow};
use nyspca_core::simgen::{standard_normal, PrecisionModel};
use nyspca_core::Method;

/// Exact rational grid point `lo + i(hi − lo)/9`, rounded half up.
fn grid_oracle(lo: usize, hi: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..10).map(|i| (2 * (9 * lo + i * (hi - lo)) + 9) / 18).collect();
    v.dedup();
    v
}

#[test]
fn grid_endpoints_at_known_sizes() {
    let g = expand_l_grid(30, 3000).unwrap();
    assert_eq!(g, (1..=10).map(|k| 45 * k).collect::<Vec<_>>());
    let g = expand_l_grid(500, 3000).unwrap();
    assert_eq!((g[0], g[9]), (750, 1200));
    assert_eq!(g, grid_oracle(750, 1200));
    let g = expand_l_grid(2, 3000).unwrap();
    assert_eq!(g, (1..=10).map(|k| 3 * k).collect::<Vec<_>>());
}

#[test]
fn grid_matches_rational_oracle() {
    for d in 1usize..40 {
        for p in [4, 10, 37, 100, 300, 1000, 3000] {
            let lo = (3 * d).div_ceil(2);
            let hi = (15 * d).min(2 * p / 5);
            match expand_l_grid(d, p) {
                Ok(g) => {
                    assert!(lo <= hi);
                    assert_eq!(g, grid_oracle(lo, hi), "d {d} p {p}");
                    assert!(g.windows(2).all(|w| w[0] < w[1]));
                }
                Err(e) => {
                    assert!(lo > hi, "d {d} p {p}: {e}");
                    assert_eq!(e.exit_code(), 1);
                }
            }
        }
    }
    assert_eq!(expand_l_grid(1, 10).unwrap(), vec![2, 3, 4]);
    assert!(expand_l_grid(0, 100).is_err());
    assert!(expand_l_grid(1, 3).is_err());
}

fn small_config(methods: Vec<Method>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(DataSource::Simulated { model: PrecisionModel::Random { x: 0.05 }, n: 80, p: 40 });
    cfg.d_list = vec![2, 3];
    cfg.l_rule = LRule::Explicit(vec![6, 10, 16]);
    cfg.methods = methods;
    cfg.seeds = vec![3, 4];
    cfg
}

fn strip_runtime(rows: &[ResultRow]) -> Vec<ResultRow> {
    rows.iter().cloned().map(|r| ResultRow { runtime_ms: 0.0, ..r }).collect()
}

#[test]
fn column_sampling_alone_has_unit_relative_error() {
    let rows = run_experiment(&small_config(vec![Method::VCs])).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3);
    for r in rows {
        assert_eq!(r.relative_error, Some(1.0), "{r:?}");
        assert_eq!(r.status, "ok");
    }
}

#[test]
fn full_selection_nystrom_is_exact() {
    let mut cfg = small_config(vec![Method::VNys]);
    cfg.l_rule = LRule::Explicit(vec![40]);
    for r in run_experiment(&cfg).unwrap() {
        assert!(r.delta.unwrap() <= 1e-8, "{r:?}");
    }
}

#[test]
fn rows_are_ordered_and_complete() {
    let methods = vec![Method::UCs, Method::VNys, Method::UHat];
    let rows = run_experiment(&small_config(methods.clone())).unwrap();
    let mut expected = Vec::new();
    for seed in [3u64, 4] {
        for d in [2usize, 3] {
            for l in [6usize, 10, 16] {
                for m in &methods {
                    expected.push((seed, d, l, m.tag().to_string()));
                }
            }
        }
    }
    let got: Vec<_> = rows.iter().map(|r| (r.seed, r.d, r.l, r.method.clone())).collect();
    assert_eq!(got, expected);
    for r in &rows {
        assert_eq!((r.condition.as_str(), r.n, r.p), ("random(0.05)", 80, 40));
        assert!(r.delta.unwrap() >= 0.0 && r.runtime_ms >= 0.0);
        assert!(r.relative_error.unwrap() > 0.0);
    }
}

#[test]
fn identical_configs_reproduce_rows() {
    let mut cfg = small_config(Method::ALL.to_vec());
    cfg.with_bounds = true;
    cfg.parallelism = Some(1);
    let a = run_experiment(&cfg).unwrap();
    cfg.parallelism = Some(3);
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(strip_runtime(&a), strip_runtime(&b));
    assert!(a.iter().any(|r| r.bound_total.is_some()));
}

#[test]
fn matched_sketches_share_one_selection() {
    // With l = p the column sketch is complete for every method, so v_nys
    // and v_cs coincide with the exact subspace and the reference is
    // degenerate.
    let mut cfg = small_config(vec![Method::VNys, Method::VCs]);
    cfg.l_rule = LRule::Explicit(vec![40]);
    for r in run_experiment(&cfg).unwrap() {
        assert_eq!(r.relative_error, None);
        assert!(r.status.contains("reference"), "{}", r.status);
    }
}

#[test]
fn cell_failures_are_recorded_not_fatal() {
    let mut cfg = small_config(vec![Method::VNys, Method::UNys]);
    cfg.l_rule = LRule::Explicit(vec![2, 41, 10]);
    cfg.d_list = vec![3];
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 2);
    for r in &rows {
        match (r.l, r.method.as_str()) {
            (2, _) | (41, "v_nys") => assert!(r.status.starts_with("error"), "{r:?}"),
            _ => assert_eq!(r.status, "ok", "{r:?}"),
        }
    }
    // 41 rows exist among the 80 observations, so u_nys can still run.
    assert!(rows.iter().any(|r| r.l == 41 && r.method == "u_nys" && r.delta.is_some()));
}

#[test]
fn bounds_are_attached_to_v_methods() {
    let mut cfg = small_config(vec![Method::VNys, Method::VCs, Method::UNys]);
    cfg.with_bounds = true;
    for r in run_experiment(&cfg).unwrap() {
        if r.method == "u_nys" {
            assert_eq!((r.bound_total, r.gap), (None, None));
        } else if let (Some(t), Some(g)) = (r.bound_total, r.gap) {
            assert!(t.is_finite() && g > 0.0);
            assert!(r.delta.unwrap() <= t + 1e-8, "{r:?}");
        } else {
            assert!(r.status.contains("bound unavailable"), "{r:?}");
        }
    }
}

#[test]
fn matrix_source_and_csv_round_trip() {
    let x = Arc::new(standard_normal(30, 20, 9));
    let mut cfg = ExperimentConfig::new(DataSource::Matrix { label: "gauss, \"quoted\"".into(), x });
    cfg.d_list = vec![2];
    cfg.l_rule = LRule::PaperGrid;
    cfg.methods = vec![Method::VNys, Method::VCs, Method::UHatCs, Method::Exact];
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), expand_l_grid(2, 20).unwrap().len() * 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    write_results_csv(&path, &rows).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), RESULT_COLUMNS.join(","));
    assert_eq!(read_results_csv(&path).unwrap(), rows);
    let exact: Vec<_> = rows.iter().filter(|r| r.method == "exact").collect();
    assert!(exact.iter().all(|r| r.delta.unwrap() < 1e-12));
}

#[test]
fn file_source_matches_matrix_source() {
    let x = standard_normal(25, 15, 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.dmat");
    nyspca::io::save(&path, &x).unwrap();
    let mut a = ExperimentConfig::new(DataSource::File(path));
    a.l_rule = LRule::Explicit(vec![4, 6]);
    a.d_list = vec![2];
    let mut b = a.clone();
    b.source = DataSource::Matrix { label: "data.dmat".into(), x: Arc::new(x) };
    assert_eq!(strip_runtime(&run_experiment(&a).unwrap()), strip_runtime(&run_experiment(&b).unwrap()));
}

#[test]
fn invalid_configs_are_usage_errors() {
    let mut cfg = small_config(vec![]);
    assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 1);
    cfg.methods = vec![Method::VCs];
    cfg.d_list = vec![0];
    assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 1);
    cfg.d_list = vec![40];
    cfg.l_rule = LRule::PaperGrid;
    assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn timing_smoke_run_emits_one_row_per_cell() {
    let mut cfg = small_config(vec![Method::VNys, Method::VCs]);
    cfg.compute_oracle = false;
    let rows = time_methods(&cfg, 1).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3 * 2);
    assert!(rows.iter().all(|r| r.delta.is_none() && r.status == "ok"));
    assert!(time_methods(&cfg, 0).is_err());
    let table = nyspca::timing::timing_table(&rows);
    assert_eq!(table.lines().count(), 1 + 2 * 3);
}

#[test]
fn column_sampling_time_grows_with_l() {
    let x = Arc::new(standard_normal(400, 600, 5));
    let mut cfg = ExperimentConfig::new(DataSource::Matrix { label: "g".into(), x });
    cfg.d_list = vec![10];
    cfg.l_rule = LRule::PaperGrid;
    cfg.methods = vec![Method::VCs];
    cfg.compute_oracle = false;
    let rows = time_methods(&cfg, 5).unwrap();
    let (first, last) = (rows.first().unwrap(), rows.last().unwrap());
    assert_eq!((first.l, last.l), (15, 150));
    assert!(last.runtime_ms >= 0.8 * first.runtime_ms, "{} ms at l = 15, {} ms at l = 150", first.runtime_ms, last.runtime_ms);
}

#[test]
fn empty_results_still_carry_the_header() {
    let mut buf = Vec::new();
    nyspca::experiment::write_results(&mut buf, &[]).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().trim_end(), RESULT_COLUMNS.join(","));
}
