//! Optimal hitting strategy on the bull graph and its transition labels.

use crw::exact::optimal_hitting;
use crw::graph::gen_bull;
use crw::walk::transitions_from_alpha;
use crw::VertexSet;

fn main() -> crw::Result<()> {
    let g = gen_bull();
    let target = 4;
    let sol = optimal_hitting(&g, &VertexSet::singleton(target))?;
    let p = transitions_from_alpha(&g, &sol.strategy)?;

    println!("optimal hitting times to {target}:");
    for (v, h) in sol.h.iter().enumerate() {
        println!("  h({v}) = {h:.6}");
    }
    println!("preference order: {:?}", sol.ordering);
    println!("transitions (d = degree of the source):");
    for v in 0..g.n() {
        if v == target {
            continue;
        }
        let d = g.degree(v) as f64;
        for &u in g.neighbours(v) {
            let q = p.get(v, u);
            println!("  {v} -> {u}: {q:.4}  ({:.0}/{})", q * d * d, g.degree(v).pow(2));
        }
    }
    Ok(())
}
