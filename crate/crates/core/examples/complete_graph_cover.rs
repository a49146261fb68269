//! Cover time of K_n: the SRW, the greedy "take an uncovered vertex" rule and
//! their exact values.

use crw::graph::gen_complete;
use crw::harness::{complete_greedy_cover, complete_srw_cover, estimate_cover, CoverStrategy, TrialConfig};

fn main() -> crw::Result<()> {
    let cfg = TrialConfig::new(200, 10_000_000);
    println!(
        "{:>6} {:>10} {:>12} {:>10} {:>12} {:>8}",
        "n", "srw", "srw exact", "greedy", "greedy exact", "ratio"
    );
    for n in [10, 50, 200, 500] {
        let g = gen_complete(n)?;
        let srw = estimate_cover(&g, || CoverStrategy::Srw.rule(&g, 0).unwrap(), &cfg)?;
        let rule = CoverStrategy::GreedyUncovered.rule(&g, 0)?;
        let greedy = estimate_cover(&g, || rule.clone(), &cfg)?;
        println!(
            "{n:>6} {:>10.1} {:>12.1} {:>10.1} {:>12.1} {:>8.3}",
            srw.mean,
            complete_srw_cover(n),
            greedy.mean,
            complete_greedy_cover(n),
            greedy.mean / srw.mean
        );
    }
    Ok(())
}
