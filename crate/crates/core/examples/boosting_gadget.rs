//! How much the two-choice walk can raise (or lower) the chance of an event,
//! compared with the bound p^gamma.

use crw::boost::{gamma, max_boost, min_boost, srw_probability, EventSpec};
use crw::graph::{gen_bull, gen_random_tree, gen_torus};
use crw::{Graph, VertexSet};

fn report(name: &str, g: &Graph, u: usize, event: EventSpec) -> crw::Result<()> {
    let p = srw_probability(g, u, event.clone())?;
    let (q_max, _) = max_boost(g, u, event.clone())?;
    let (q_min, _) = min_boost(g, u, event.clone())?;
    let gam = gamma(g.max_degree().max(2))?;
    println!(
        "{name:<10} {event:?}: srw {p:.4}  max {q_max:.4} (p^gamma {:.4})  min {q_min:.4} (p^2 {:.4})",
        p.powf(gam),
        p * p
    );
    Ok(())
}

fn main() -> crw::Result<()> {
    let bull = gen_bull();
    report(
        "bull",
        &bull,
        0,
        EventSpec::HitSetByT {
            set: VertexSet::singleton(4),
            t: 3,
        },
    )?;
    report(
        "bull",
        &bull,
        0,
        EventSpec::AtSetAtT {
            set: VertexSet::new(5, [2, 3])?,
            t: 2,
        },
    )?;

    let tree = gen_random_tree(12, 3, 7)?;
    report(
        "tree",
        &tree,
        0,
        EventSpec::HitSetByT {
            set: VertexSet::singleton(11),
            t: 8,
        },
    )?;

    let torus = gen_torus(5, 2)?;
    report(
        "torus",
        &torus,
        0,
        EventSpec::HitSetByT {
            set: VertexSet::singleton(12),
            t: 6,
        },
    )?;
    Ok(())
}
