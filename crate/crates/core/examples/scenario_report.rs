//! Run catalog scenarios and print a one-line summary each.
//!
//! `cargo run --release --example scenario_report -- [ID ...]`

use std::time::Instant;

use focallab::scenarios::{run_scenario, Overrides, RunOptions, SCENARIO_IDS};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ids: Vec<&str> = if args.is_empty() { SCENARIO_IDS.to_vec() } else { args.iter().map(String::as_str).collect() };
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut failed = 0;
    for id in ids {
        let start = Instant::now();
        match run_scenario(id, &Overrides::default(), RunOptions { jobs, timings: false }) {
            Ok(r) => {
                let status = if r.pass() { "PASS" } else { "FAIL" };
                failed += usize::from(!r.pass());
                println!("{status} {id:<24} {:>6.2}s", start.elapsed().as_secs_f64());
                for c in r.checks.iter().filter(|c| !c.pass) {
                    println!("     {} worst {:?}", c.name, c.worst);
                }
            }
            Err(e) => {
                failed += 1;
                println!("ERR  {id:<24} {e}");
            }
        }
    }
    std::process::exit(i32::from(failed > 0));
}
