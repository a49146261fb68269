//! The tree strategy towards a neighbour y and its edge weighting.

use crw::exact::strategy_hitting_times;
use crw::graph::gen_random_tree;
use crw::strategies::{tree_edge_weights, tree_sigma_strategy};
use crw::VertexSet;

fn main() -> crw::Result<()> {
    let t = gen_random_tree(20, 3, 42)?;
    let root = 0;
    let x = 0;
    let y = t.neighbours(x)[0];

    let sigma = tree_sigma_strategy(&t, root, x, y)?;
    let h = strategy_hitting_times(&t, &sigma, &VertexSet::singleton(y))?;
    let w = tree_edge_weights(&t, root, x, y)?;

    println!("tree on {} vertices, max degree {}", t.n(), t.max_degree());
    println!("H({x} -> {y}) = {:.4}", h[x]);
    println!("2 * total weight = {:.4}", 2.0 * w.total());
    for ((u, v), weight) in w.iter().filter(|(_, w)| *w > 0.0) {
        println!("  w({u}, {v}) = {weight:.5}");
    }
    Ok(())
}
