//! Exact optimal cover times on small graphs, and the rule that attains them.

use std::sync::Arc;

use crw::exact::{cover_mdp, OptimalCoverRule};
use crw::graph::{gen_bull, gen_cycle, gen_path, gen_torus};
use crw::harness::{estimate_cover, TrialConfig};
use crw::{Graph, VertexSet};

fn main() -> crw::Result<()> {
    let graphs: Vec<(&str, Graph)> = vec![
        ("path 6", gen_path(6)?),
        ("cycle 8", gen_cycle(8)?),
        ("bull", gen_bull()),
        ("torus 3x3", gen_torus(3, 2)?),
    ];
    let cfg = TrialConfig::new(5_000, 1_000_000);
    for (name, g) in &graphs {
        let value = Arc::new(cover_mdp(g, 0, &VertexSet::new(g.n(), [])?)?);
        let rule = OptimalCoverRule::new(value.clone());
        let mc = estimate_cover(g, || rule.clone(), &cfg)?;
        println!(
            "{name:<10} exact {:>8.4}  simulated {:>8.4} +- {:.4}  ({} layers)",
            value.expected_cover(),
            mc.mean,
            1.96 * mc.std_error(),
            value.layers()
        );
    }
    Ok(())
}
