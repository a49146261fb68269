//! Covering the two-dimensional torus: the nearest-uncovered rule stays
//! linear in n while the SRW grows like n log^2 n.

use crw::graph::gen_torus;
use crw::harness::{estimate_cover, CoverStrategy, TrialConfig};

fn main() -> crw::Result<()> {
    let cfg = TrialConfig::new(100, 50_000_000);
    println!(
        "{:>4} {:>6} {:>12} {:>8} {:>12} {:>8}",
        "k", "n", "torus-cover", "/n", "srw", "/n"
    );
    for k in [10, 20, 30] {
        let g = gen_torus(k, 2)?;
        let n = g.n() as f64;
        let rule = CoverStrategy::TorusCover.rule(&g, 0)?;
        let crw = estimate_cover(&g, || rule.clone(), &cfg)?;
        let srw = estimate_cover(&g, || CoverStrategy::Srw.rule(&g, 0).unwrap(), &cfg)?;
        println!(
            "{k:>4} {:>6} {:>12.1} {:>8.3} {:>12.1} {:>8.3}",
            g.n(),
            crw.mean,
            crw.mean / n,
            srw.mean,
            srw.mean / n
        );
    }
    Ok(())
}
