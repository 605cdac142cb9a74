use cubepath_core::search::*;
fn main() {
    let all = cubepath_core::symmetry::enumerate_normalized_4configs(4).unwrap();
    let sample: Vec<_> = all.iter().step_by(40).cloned().collect();
    for ordering in [0u8, 1, 2, 3] {
        let t = std::time::Instant::now();
        let mut found = 0;
        for c in &sample {
            let (ok, _) = profile_find(c, ordering, 2, 400_000);
            found += ok as u32;
        }
        println!("ordering {ordering}: found {found}/{} in {:?}", sample.len(), t.elapsed());
    }
}
