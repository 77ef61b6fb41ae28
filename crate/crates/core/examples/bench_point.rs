use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let v = airycov::covariance::covariance_point(airycov::Process::Airy2, 0.0).unwrap();
    println!("g2(0)   = {v:.8}  [{:?}]", t0.elapsed());
    for u in [0.25, 1.0, 6.0] {
        let t0 = Instant::now();
        let v = airycov::covariance::covariance_point(airycov::Process::Airy2, u).unwrap();
        println!("g2({u}) = {v:.8}  [{:?}]", t0.elapsed());
    }
    let t0 = Instant::now();
    let v = airycov::covariance::covariance_point(airycov::Process::Airy1, 0.0).unwrap();
    println!("g1(0)   = {v:.8}  [{:?}]", t0.elapsed());
    let t0 = Instant::now();
    let v = airycov::covariance::covariance_point(airycov::Process::Airy1, 1.0).unwrap();
    println!("g1(1)   = {v:.8}  [{:?}]", t0.elapsed());
    let t0 = Instant::now();
    let v = airycov::covariance::covariance_point(airycov::Process::Airy2, 0.02).unwrap();
    println!("g2(.02) = {v:.8}  [{:?}]", t0.elapsed());
    // MC step cost
    let cfg = airycov::rmt::EnsembleConfig::with_defaults(airycov::rmt::Ensemble::Gue, 64, 500, 7, 1).unwrap();
    let t0 = Instant::now();
    let s = airycov::rmt::run_chain(&cfg, 0).unwrap();
    println!("GUE N=64, 500 steps: [{:?}] -> {:?} per step", t0.elapsed(), t0.elapsed() / 500);
    let m: f64 = s.values.iter().sum::<f64>() / s.values.len() as f64;
    println!("  mean {m:.3}");
    let cfg = airycov::rmt::EnsembleConfig::with_defaults(airycov::rmt::Ensemble::Goe, 64, 500, 7, 1).unwrap();
    let t0 = Instant::now();
    let _ = airycov::rmt::run_chain(&cfg, 0).unwrap();
    println!("GOE N=64, 500 steps: [{:?}]", t0.elapsed());
}
