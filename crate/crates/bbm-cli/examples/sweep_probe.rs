use bbm_cli::runner::run_replicates;
use bbm_core::constants::extinction_scale;
use bbm_core::types::SimParams;

fn main() {
    let x = 12.0_f64;
    let s = extinction_scale(x) / 2.0;
    for batch_idx in 0..3u64 {
        let start = batch_idx * 400;
        let t0 = std::time::Instant::now();
        let res: Vec<(bool, usize)> = run_replicates(400, 2, |i| {
            let mut params = SimParams::new(x, s, 0xbb312026 ^ 0x5e11 ^ ((x as u64) << 8), start + i);
            params.dt_max = 0.5;
            params.record_times = vec![s];
            let r = bbm_core::engine::run(&params).map_err(anyhow::Error::msg)?;
            Ok((r.truncated, r.snapshots.first().map_or(0, |s| s.positions.len())))
        })
        .unwrap();
        let surv = res.iter().filter(|r| r.1 > 0).count();
        let trunc = res.iter().filter(|r| r.0).count();
        let max_n = res.iter().map(|r| r.1).max().unwrap();
        println!(
            "batch {batch_idx}: surviving {surv}/400, truncated {trunc}, max N {max_n}, elapsed {:?}",
            t0.elapsed()
        );
    }
}
