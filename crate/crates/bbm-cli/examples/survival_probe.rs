use bbm_cli::runner::run_replicates;
use bbm_core::constants::extinction_scale;
use bbm_core::types::SimParams;

fn main() {
    for &x in &[8.0_f64, 10.0, 12.0] {
        let s = extinction_scale(x) / 2.0;
        let n = 300u64;
        let t0 = std::time::Instant::now();
        let res: Vec<(bool, bool, usize)> = run_replicates(n, 2, |rep| {
            let mut params = SimParams::new(x, s, 0xbb312026 ^ 0x5e11 ^ ((x as u64) << 8), rep);
            params.dt_max = 0.1;
            params.record_times = vec![s];
            let r = bbm_core::engine::run(&params).map_err(anyhow::Error::msg)?;
            Ok((r.truncated, !r.snapshots[0].positions.is_empty(), r.snapshots[0].positions.len()))
        })
        .unwrap();
        let surv = res.iter().filter(|r| r.1).count();
        let trunc = res.iter().filter(|r| r.0).count();
        let max_n = res.iter().map(|r| r.2).max().unwrap();
        println!(
            "x={x}: surviving {surv}/{n}, truncated {trunc}, max N(s) {max_n}, elapsed {:?}",
            t0.elapsed()
        );
    }
}
