use bbm_core::engine::SimState;
use bbm_core::types::SimParams;

fn main() {
    // single non-branching particle far from the origin: isolates per-substep cost
    let mut params = SimParams::new(500.0, 1e6, 7, 0);
    params.mu = 0.0;
    params.branch_rate = 0.0;
    params.dt_max = 1.0;
    let mut state = SimState::new(&params).unwrap();
    let t0 = std::time::Instant::now();
    state.advance(1e6, &params).unwrap();
    println!("far-from-origin: {:.1} ns/substep", t0.elapsed().as_nanos() as f64 / 1e6);

    // near the origin: bridge exp + uniform on every substep
    let mut params2 = SimParams::new(2.0, 1e6, 7, 0);
    params2.mu = 0.0;
    params2.branch_rate = 0.0;
    params2.dt_max = 1e-4; // keep it alive: tiny steps, pp'/h large... need e<50: pp'~4, h=1e-4 -> e huge, skipped.
    // instead simulate many short-lived particles near origin with h=0.5
    let t1 = std::time::Instant::now();
    let mut substeps = 0u64;
    for rep in 0..200_000u64 {
        let mut p = SimParams::new(1.0, 8.0, 11, rep);
        p.mu = 0.0;
        p.branch_rate = 0.0;
        p.dt_max = 0.5;
        let mut s = SimState::new(&p).unwrap();
        s.advance(8.0, &p).unwrap();
        substeps += 16; // at most 16; most die sooner; rough upper bound
    }
    println!("near-origin (incl. exp+uniform): <= {:.1} ns/substep", t1.elapsed().as_nanos() as f64 / substeps as f64);

    // full x=12 replicate at dt=0.5, timed
    let t2 = std::time::Instant::now();
    let mut p = SimParams::new(12.0, 41.0, 13, 1);
    p.dt_max = 0.5;
    p.record_times = vec![41.0];
    let r = bbm_core::engine::run(&p).unwrap();
    println!("one x=12 replicate to s=41 (N={}): {:?}", r.snapshots[0].positions.len(), t2.elapsed());
}
