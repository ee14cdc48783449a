use bbm_cli::acceptance::*;

fn main() {
    let ctx = AcceptanceContext::new(DEFAULT_SEED, 2);
    let which: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let t0 = std::time::Instant::now();
    match which {
        1 => {
            for r in strip_mean_laws(&ctx).unwrap() {
                println!("{}", r.line());
            }
        }
        3 => println!("{}", martingale_identity(&ctx).unwrap().line()),
        4 => println!("{}", moment_functionals(&ctx).unwrap().line()),
        5 => println!("{}", kernel_cross_validation(&ctx).unwrap().line()),
        10 => println!("{}", extinction_window(&ctx).unwrap().line()),
        11 => println!("{}", neveu_statistic(&ctx).unwrap().line()),
        12 => println!("{}", curved_envelope(&ctx).unwrap().line()),
        6 => {
            let sweep = run_population_sweep(&ctx).unwrap();
            for r in population_criteria(&sweep).unwrap() {
                println!("{}", r.line());
            }
        }
        _ => panic!("unknown"),
    }
    println!("[{:?}]", t0.elapsed());
}
