use bbm_cli::acceptance::two_sample_ks;
use bbm_cli::runner::run_replicates;
use bbm_core::engine::neveu_count_with_dt;
use bbm_core::SQRT_2;

fn sample(y: f64, n: u64, dt: f64, seed: u64) -> Vec<f64> {
    let scale = y * (-SQRT_2 * y).exp();
    run_replicates(n, 2, |rep| {
        Ok(scale * neveu_count_with_dt(12.0, y, seed, rep, dt).unwrap() as f64)
    })
    .unwrap()
}

fn quantiles(v: &mut Vec<f64>) -> (f64, f64, f64) {
    v.sort_by(|a, b| a.total_cmp(b));
    let q = |f: f64| v[((v.len() as f64 - 1.0) * f) as usize];
    (q(0.25), q(0.5), q(0.75))
}

fn main() {
    let n = 4000;
    let mut samples = vec![];
    for &(y, n) in &[(3.0_f64, n), (4.0, n), (5.0, n), (6.0, n), (8.0, 1000)] {
        let s = sample(y, n, 0.1, 777 + y as u64);
        samples.push((y, s));
    }
    for (y, s) in &samples {
        let mut c = s.clone();
        let (q25, q50, q75) = quantiles(&mut c);
        println!("y={y}: q25={q25:.4} median={q50:.4} q75={q75:.4}");
    }
    for w in samples.windows(2) {
        println!("KS(y={}, y={}) = {:.4}", w[0].0, w[1].0, two_sample_ks(&w[0].1, &w[1].1));
    }
    println!("KS(y=4, y=6) = {:.4}", two_sample_ks(&samples[1].1, &samples[3].1));
    println!("KS(y=6, y=8) = {:.4}", two_sample_ks(&samples[3].1, &samples[4].1));
    let a01 = sample(4.0, 3000, 0.1, 123);
    let a002 = sample(4.0, 3000, 0.02, 456);
    println!("KS(y=4 dt=0.1 vs dt=0.02) = {:.4}", two_sample_ks(&a01, &a002));
}
