// scratch: section-4 example report numbers
use bidisc::theorem::{example_section4, ExampleParams};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let report = example_section4(&ExampleParams::default()).unwrap();
    println!("elapsed: {:.1?}", t0.elapsed());
    println!("witness_entry = {:.4e}, bound = {:.4e}, ok = {}", report.witness_entry, report.witness_bound, report.witness_ok);
    println!("rank2_max_diff = {:.3e}", report.rank2_max_diff);
    for p in &report.profiles {
        println!("bw {:>3}: s1 = {:.6e}  s5 = {:.4e}  s25 = {:.4e}  tail = {:.4e}", p.bandwidth, p.sigma1, p.sigma5, p.sigma25, p.tail_compression);
    }
    println!("sigma1_rel_change = {:.4}, stabilized = {}", report.sigma1_rel_change, report.sigma1_stabilized);
    println!("sigma_ratio: {:.4e} -> {:.4e}, decreased = {}", report.sigma_ratio_first, report.sigma_ratio_last, report.sigma_ratio_decreased);
    println!("tail_halved = {}", report.tail_compression_halved);
    println!("probe_fg = {:?}", report.probe_fg);
    println!("probe_gf = {:?}", report.probe_gf);
    println!("probes_decreasing = {}", report.probes_decreasing);
    println!("thm3 = {:?} certified {}", report.thm3.conclusion, report.thm3.certified);
}
