use agc_cli::suite::*;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let instances = generate_cts_instances(200, 42, true);
    let report = verify_cts_suite(&instances, 42, CtsVerifyOptions::default());
    println!("cts 200: {:?} — {}", t0.elapsed(), report.to_string().lines().next().unwrap());
    let t0 = Instant::now();
    let instances = generate_ca_instances(100, 42);
    let report = verify_ca_suite(&instances, 42);
    println!("ca 100: {:?} — {}", t0.elapsed(), report.to_string().lines().next().unwrap());
}
