mod common;

use common::*;
use proptest::prelude::*;
use psmt::io::{model_to_json, paths_to_json, parse_model, parse_paths};
use psmt::reduction::{enforce_no_subpath_rule, ga_fitness, sa_energy, GaConfig, SaConfig};
use psmt::{
    check_coverage, find_path_in_range, generate_paths, generate_requirements, Algorithm, CoverageCriterion,
    DefectSet, Model, PathSearch, Reduction, RunConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn search_matches_enumeration(seed in any::<u64>(), min in 0usize..5, span in 0usize..4) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 8);
        let req = random_requirement(&mut r, &g);
        let max = (min + span).clamp(1, 6);
        let min = min.min(max);
        let expected = brute_min_length(&g, &req, min, max);
        let found = find_path_in_range(&req, &g, min, max);
        prop_assert_eq!(found.as_ref().map(|p| p.len()), expected);
        if let Some(p) = found {
            prop_assert!(valid_test_path(&g, &p, &req, min, max), "{}", p.describe(&g));
        }
    }

    #[test]
    fn reused_search_agrees_with_one_shot(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 8);
        let search = PathSearch::new(&g);
        for _ in 0..5 {
            let req = random_requirement(&mut r, &g);
            prop_assert_eq!(search.find(&req, 2, 6), find_path_in_range(&req, &g, 2, 6));
        }
    }

    #[test]
    fn reductions_bounded_by_optimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, 12, 12);
        let opt = exhaustive_min_cover(&m);
        for red in Reduction::ALL {
            let sel = red.apply(&m, seed, &GaConfig::default(), &SaConfig::default());
            prop_assert!(m.covers_all_coverable(&sel), "{red}");
            let distinct: std::collections::BTreeSet<_> = sel.iter().collect();
            prop_assert_eq!(distinct.len(), sel.len());
            prop_assert!(opt <= sel.len() && sel.len() <= m.path_count(), "{red}: {} vs {opt}", sel.len());
        }
        let d = (0..m.path_count()).map(|i| m.covers(i).len()).max().unwrap_or(0);
        let chv = Reduction::Chvatal.apply(&m, 0, &GaConfig::default(), &SaConfig::default());
        prop_assert!(chv.len() as f64 <= harmonic(d) * opt as f64 + 1e-9);
    }

    #[test]
    fn generated_paths_always_pass_coverage(seed in any::<u64>(), alg in 0usize..7, extended in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 8);
        let config = RunConfig {
            algorithm: Algorithm::ALL[alg],
            coverage: if extended { CoverageCriterion::Extended } else { CoverageCriterion::Basic },
            seed,
            ..RunConfig::default()
        };
        match generate_paths(&g, &config) {
            Ok(out) => {
                prop_assert!(out.report.is_satisfied());
                let again = check_coverage(&out.paths, &out.feasible, &g, 2, 6);
                prop_assert!(again.is_satisfied());
                let all = generate_requirements(&g, config.coverage, &config.selection);
                prop_assert_eq!(out.feasible.len() + out.infeasible.len(), all.len());
                for req in &out.infeasible {
                    prop_assert_eq!(brute_min_length(&g, req, 2, 6), None);
                }
                for req in &out.feasible {
                    prop_assert!(out.paths.iter().any(|p| walk_covers(&g, p.first_vertex(), p.edges(), req)));
                }
            }
            Err(psmt::PipelineError::NoPathsPossible { infeasible }) => {
                for req in &infeasible {
                    prop_assert_eq!(brute_min_length(&g, req, 2, 6), None);
                }
            }
            Err(psmt::PipelineError::EnumerationOverflow(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn no_subpath_rule_output(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 6);
        let mut paths = Vec::new();
        all_walks(&g, 3, |s, e| paths.push(psmt::TestPath::from_edges(&g, e.to_vec()).filter(|p| p.first_vertex() == s).unwrap()));
        let kept = enforce_no_subpath_rule(paths.clone(), &g);
        for (i, a) in kept.iter().enumerate() {
            for (j, b) in kept.iter().enumerate() {
                prop_assert!(i == j || !a.is_subpath_of(b, &g));
            }
        }
        // Everything dropped lives on inside something kept.
        for p in &paths {
            prop_assert!(kept.iter().any(|k| p == k || p.is_subpath_of(k, &g)));
        }
    }

    #[test]
    fn model_and_paths_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 8);
        let defects = psmt::defects::plant_random_defects(&g, 1, 0, seed).unwrap_or_default();
        let model = Model { graph: g, defects };
        let back = parse_model(&model_to_json(&model), Path::new("mem")).unwrap();
        prop_assert_eq!(&back, &model);
        let mut paths = Vec::new();
        all_walks(&model.graph, 2, |_, e| paths.push(psmt::TestPath::from_edges(&model.graph, e.to_vec()).unwrap()));
        let text = paths_to_json(&paths, &model.graph);
        prop_assert_eq!(parse_paths(&text, &model.graph, Path::new("mem")).unwrap(), paths);
    }
}

#[test]
fn fitness_and_energy_share_optimum() {
    let mut r = rng(7);
    for _ in 0..30 {
        let m = random_matrix(&mut r, 9, 8);
        let p = m.path_count();
        let opt = exhaustive_min_cover(&m);
        let points: Vec<Vec<bool>> = (0u32..1 << p).map(|s| (0..p).map(|i| s >> i & 1 == 1).collect()).collect();
        let best_f = points.iter().map(|x| ga_fitness(x, &m)).fold(f64::MIN, f64::max);
        let best_e = points.iter().map(|x| sa_energy(x, &m)).fold(f64::MAX, f64::min);
        for x in &points {
            let f = ga_fitness(x, &m);
            assert_eq!(f == best_f, sa_energy(x, &m) == best_e);
            if f == best_f {
                let sel: Vec<usize> = (0..p).filter(|i| x[*i]).collect();
                assert!(m.covers_all_coverable(&sel) && sel.len() == opt);
            }
        }
    }
}

#[test]
fn metrics_identities_on_random_paths() {
    let mut r = rng(11);
    for _ in 0..50 {
        let g = random_graph(&mut r, 7);
        let defects = psmt::defects::plant_random_defects(&g, 1, 0, 3).unwrap_or_else(|_| DefectSet::default());
        let mut paths = Vec::new();
        all_walks(&g, 3, |_, e| paths.push(psmt::TestPath::from_edges(&g, e.to_vec()).unwrap()));
        let m = psmt::compute_metrics(&paths, &defects);
        if m.steps > 0 {
            assert_eq!(m.ut, m.steps as f64 / m.unique_steps as f64);
            assert_eq!(m.eff1, m.type1_activated as f64 / m.steps as f64);
            assert_eq!(m.eff2, m.type2_activated as f64 / m.steps as f64);
        }
    }
}
