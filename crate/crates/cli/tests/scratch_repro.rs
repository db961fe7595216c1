//! Temporary reproduction harness for the large robust-program instability.

use std::path::Path;

use ramf_cli::formats::{load_instance, LoadOptions};
use ramf_core::admin::{robust_flow, AttackPool};
use ramf_core::model::Attack;

#[test]
#[ignore = "manual scratch reproduction"]
fn elist96_pool_two_robust_program_stays_sane() {
    let _ = env_logger::builder().is_test(true).filter_level(log::LevelFilter::Debug).try_init();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/elist96.max");
    let net = load_instance(&path, &LoadOptions::default()).expect("load elist96");
    eprintln!("nodes={} edges={}", net.node_count(), net.edge_count());

    let pool: AttackPool = [
        Attack::new([7usize, 18, 20]),
        Attack::new([15usize, 272, 346]),
        Attack::new([149usize, 152, 154]),
    ]
    .into_iter()
    .collect();
    let start = std::time::Instant::now();
    let result = robust_flow(&net, &pool).expect("robust LP should solve");
    eprintln!("robust value = {:.9} in {:?}", result.value, start.elapsed());
    for scenario in &result.scenarios {
        eprintln!("  scenario {:?} -> {:.9}", scenario.attack.edges(), scenario.value);
    }

    let mut worst_excess = 0.0f64;
    for e in 0..net.edge_count() {
        if e == net.return_edge() {
            continue;
        }
        let excess = result.flow.get(e) - net.edge(e).capacity;
        worst_excess = worst_excess.max(excess);
    }
    eprintln!("worst capacity excess = {worst_excess:.3e}");
    assert!(worst_excess < 1e-6, "committed flow exceeds capacity by {worst_excess}");
    assert!(
        (0.0..=500.0).contains(&result.value),
        "robust value {} outside sane range",
        result.value
    );
}
