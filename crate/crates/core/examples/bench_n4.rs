use cubepath_core::search::*;
use cubepath_core::{Configuration, TritVector};
use std::time::Instant;

fn quad(s: &str) -> Configuration {
    let vs: Vec<TritVector> = s.split(' ').map(|t| t.parse().unwrap()).collect();
    Configuration::quad(vs[0].clone(), vs[1].clone(), vs[2].clone(), vs[3].clone()).unwrap()
}

const ABCD: [&str; 4] = [
    "0000 1111 1122 2211",
    "0000 1111 0022 2200",
    "0000 0001 1110 2221",
    "0000 0011 1100 1111",
];

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let what = args.get(1).map(|s| s.as_str()).unwrap_or("stats");
    let cap: Option<u64> = args.get(2).map(|s| s.parse().unwrap());
    match what {
        "stats" => {
            let c = quad(ABCD[0]);
            let t = Instant::now();
            let st = profile_stats(&c, cap.or(Some(20_000_000)));
            println!("elapsed {:?}", t.elapsed());
            println!(
                "nodes={} memo_hits={} comp={} match={} dep={} complete={}",
                st.nodes, st.memo_hits, st.comp_prunes, st.match_prunes, st.dep_prunes, st.complete
            );
            println!("avail-size histogram (remaining unused -> nodes):");
            for (i, n) in st.by_depth.iter().enumerate() {
                if *n > 0 {
                    println!("  avail {:3}: {}", i, n);
                }
            }
        }
        "a4" => {
            for cfg in ABCD {
                let c = quad(cfg);
                let t = Instant::now();
                let (ok, nodes, complete) = profile_exhaustive(&c, true, cap);
                println!(
                    "{cfg}: found={ok} complete={complete} nodes={nodes} in {:?}",
                    t.elapsed()
                );
            }
        }
        "est" => {
            for cfg in ABCD {
                let c = quad(cfg);
                let mut ests = vec![];
                for seed in 0..10u64 {
                    ests.push(profile_estimate(&c, 4000, seed));
                }
                let mean = ests.iter().sum::<f64>() / ests.len() as f64;
                println!("{cfg}: est tree ~ {:.3e} (spread {:.2e} .. {:.2e})", mean,
                    ests.iter().cloned().fold(f64::MAX, f64::min),
                    ests.iter().cloned().fold(0.0, f64::max));
            }
        }
        "d3sum" => {
            let all = cubepath_core::symmetry::enumerate_normalized_4configs(3).unwrap();
            for memo in [false, true] {
                let t = Instant::now();
                let mut tot = 0u64;
                for c in &all {
                    let (_, nodes, _) = profile_exhaustive(c, memo, Some(3_000_000));
                    tot += nodes;
                }
                println!("memo={memo}: {tot} nodes, {:?}", t.elapsed());
            }
        }
        _ => {}
    }
}
