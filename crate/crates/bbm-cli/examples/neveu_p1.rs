use bbm_cli::runner::run_replicates;
use bbm_core::engine::neveu_count_with_dt;

fn main() {
    for &(y, n) in &[(2.0_f64, 40_000u64), (4.0, 40_000)] {
        let ones: f64 = run_replicates(n, 2, |rep| {
            Ok((neveu_count_with_dt(12.0, y, 991, rep, 0.05).unwrap() == 1) as u64 as f64)
        })
        .unwrap()
        .iter()
        .sum();
        let p = ones / n as f64;
        let want = (-y * (2.0 - std::f64::consts::SQRT_2)).exp();
        let se = (want * (1.0 - want) / n as f64).sqrt();
        println!("y={y}: P(K=1) mc {p:.5} vs exact {want:.5} ({:.2} se)", (p - want).abs() / se);
    }
}
