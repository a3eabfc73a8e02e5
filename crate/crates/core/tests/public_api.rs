use edo_core::evolution::rng_from_seed;
use edo_core::oracle::{brute_force_optimal_diversity, count_maximum_matchings, DEFAULT_CAP};
use edo_core::{
    optimal_diversity, population_diversity, run, seeds, Algorithm, EdoError, Engine, Graph,
    Matching, Population, RunConfig, TargetDiversity,
};

#[test]
fn closed_form_optimum_matches_brute_force() {
    for left in 3..=7 {
        for right in 3..=left.min(5) {
            let g = Graph::complete_bipartite(left, right).unwrap();
            for mu in 1..=3 {
                match optimal_diversity(&g, mu) {
                    Ok(d) => assert_eq!(
                        d,
                        brute_force_optimal_diversity(&g, mu, DEFAULT_CAP)
                            .unwrap()
                            .diversity
                    ),
                    Err(e) => {
                        assert!(matches!(e, EdoError::UnsupportedRegime(_)) && 2 * mu >= right)
                    }
                }
            }
        }
    }
    for m in 1..=13 {
        let g = Graph::path(m).unwrap();
        let distinct = count_maximum_matchings(&g) as usize;
        for mu in 1..=distinct {
            let brute = brute_force_optimal_diversity(&g, mu, DEFAULT_CAP)
                .unwrap()
                .diversity;
            assert_eq!(optimal_diversity(&g, mu).unwrap(), brute, "P({m}) mu={mu}");
        }
    }
}

#[test]
fn population_serializes_as_hex() {
    let g = Graph::complete_bipartite(5, 3).unwrap();
    let p = seeds::adversarial_rotation_population(&Graph::complete_bipartite(8, 7).unwrap(), 3)
        .unwrap();
    let json = serde_json::to_string(&p).unwrap();
    let hex: Vec<String> = serde_json::from_str(&json).unwrap();
    assert_eq!(Population::from_hex(56, &hex).unwrap(), p);

    let x = Matching::from_edges(g.m(), [0, 4, 8]).unwrap();
    assert_eq!(x.to_hex(), "1101");
    assert_eq!(Matching::from_hex(g.m(), "1101").unwrap(), x);
}

#[test]
fn explicit_target_stops_early() {
    let g = Graph::path(20).unwrap();
    let mut cfg = RunConfig::new(
        g,
        Algorithm::TwoPhase,
        seeds::all_even_path_population(&g, 4).unwrap(),
        5,
        1_000_000,
    );
    let full = run(&cfg).unwrap();
    cfg.target = TargetDiversity::Value(10);
    let partial = run(&cfg).unwrap();
    assert!(partial.reached_target && partial.final_diversity >= 10);
    assert!(partial.iterations <= full.iterations);
    assert_eq!(full.final_diversity, optimal_diversity(&g, 4).unwrap());
}

#[test]
fn result_json_contains_population_and_trace() {
    let g = Graph::complete_bipartite(9, 7).unwrap();
    let mut cfg = RunConfig::new(
        g,
        Algorithm::EaD,
        seeds::homogeneous_bipartite_population(&g, 3).unwrap(),
        11,
        100_000_000,
    );
    cfg.trace = true;
    let r = run(&cfg).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["final_population"].as_array().unwrap().len(), 3);
    let trace = v["diversity_trace"].as_array().unwrap();
    assert_eq!(trace[0], serde_json::json!([0, 0]));
    assert_eq!(
        trace.last().unwrap(),
        &serde_json::json!([r.iterations, 42])
    );
}

#[test]
fn leaping_engine_keeps_invariants() {
    let g = Graph::complete_bipartite(11, 10).unwrap();
    let start = seeds::homogeneous_bipartite_population(&g, 4).unwrap();
    let mut e = Engine::new(g, Algorithm::EaD, start, rng_from_seed(3));
    let mut last = e.diversity();
    for _ in 0..2_000 {
        e.leap(u64::MAX);
        let p = e.population();
        p.audit().unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(population_diversity(p), p.diversity());
        assert!(p.diversity() >= last);
        last = p.diversity();
    }
    assert!(e.iterations() >= 2_000);
}
