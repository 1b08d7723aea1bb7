use giant_core::sim::{pair_half_edges, replica_rng, sample_degrees};
use giant_core::{giant_fraction, monte_carlo, DegreePmf};

#[test]
fn simulated_fraction_approaches_theory() {
    let cases: [&[(u32, f64)]; 3] = [
        &[(1, 0.5), (3, 0.5)],
        &[(1, 0.4), (2, 0.3), (4, 0.3)],
        &[(1, 0.6), (5, 0.4)],
    ];
    for entries in cases {
        let f = DegreePmf::new(entries.iter().copied()).unwrap();
        let xi = giant_fraction(&f).unwrap();
        let r = monte_carlo(&f, 50_000, 4, 99).unwrap();
        assert!(
            (r.mean_fraction - xi).abs() < 0.02,
            "{entries:?}: {} vs {xi}",
            r.mean_fraction
        );
    }
}

#[test]
fn subcritical_has_no_macroscopic_component() {
    let f = DegreePmf::new([(1, 0.8), (3, 0.2)]).unwrap();
    let r = monte_carlo(&f, 50_000, 3, 5).unwrap();
    assert!(r.mean_fraction < 0.02, "{}", r.mean_fraction);
}

#[test]
fn half_edges_are_conserved() {
    let f = DegreePmf::new([(1, 0.3), (2, 0.3), (7, 0.4)]).unwrap();
    let mut rng = replica_rng(3, 1);
    let d = sample_degrees(&f, 10_001, &mut rng);
    assert_eq!(d.iter().map(|&x| u64::from(x)).sum::<u64>() % 2, 0);
    let uf = pair_half_edges(&d, &mut rng).unwrap();
    assert_eq!(uf.len(), 10_001);
}

#[test]
fn replicas_independent_of_thread_count() {
    let f = DegreePmf::new([(1, 0.5), (3, 0.5)]).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let one = pool.install(|| monte_carlo(&f, 20_000, 6, 17).unwrap());
    let many = monte_carlo(&f, 20_000, 6, 17).unwrap();
    assert_eq!(one, many);
}
