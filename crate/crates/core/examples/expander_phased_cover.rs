//! Phased cover on random 3-regular graphs: walk like the SRW until few
//! vertices are left, then steer with the hitting DP.

use crw::exact::spectral;
use crw::graph::gen_random_regular;
use crw::harness::{estimate_cover, CoverStrategy, TrialConfig};
use crw::strategies::PhasedBoostCover;

fn main() -> crw::Result<()> {
    let cfg = TrialConfig::new(50, 50_000_000);
    for n in [250, 500, 1000] {
        let g = gen_random_regular(n, 3, 1)?;
        let report = spectral(&g)?;
        let rule = PhasedBoostCover::from_spectrum(&g, &report, 3.0)?;
        let params = rule.params();
        let phased = estimate_cover(&g, || rule.clone(), &cfg)?;
        let srw = estimate_cover(&g, || CoverStrategy::Srw.rule(&g, 0).unwrap(), &cfg)?;
        let loglog = n as f64 * (n as f64).ln().ln();
        println!(
            "n = {n:>4}  t_rel {:.2}  {params:?}\n    phased {:.0} ({:.2} n log log n)  srw {:.0}",
            report.t_rel,
            phased.mean,
            phased.mean / loglog,
            srw.mean
        );
    }
    Ok(())
}
