//! Graph generators and the two file formats.

use crw::graph::{gen_gnp, gen_grid, gen_random_regular, gen_random_subcubic, gen_random_tree, gen_torus};
use crw::Graph;

fn main() -> crw::Result<()> {
    let seed = 2024;
    let graphs: Vec<(&str, Graph)> = vec![
        ("torus 4x4", gen_torus(4, 2)?),
        ("grid 4x4", gen_grid(4, 2)?),
        ("tree", gen_random_tree(15, 3, seed)?),
        ("3-regular", gen_random_regular(16, 3, seed)?),
        ("subcubic", gen_random_subcubic(16, 2, seed)?),
        ("gnp", gen_gnp(16, 0.25, seed)?),
    ];
    for (name, g) in &graphs {
        println!(
            "{name:<10} n {:>3}  m {:>3}  degrees {}..{}  connected {}",
            g.n(),
            g.edge_count(),
            g.min_degree(),
            g.max_degree(),
            g.is_connected()
        );
    }

    let dir = std::env::temp_dir();
    let torus = &graphs[0].1;
    let json = dir.join("crw_torus.json");
    torus.save(&json)?;
    let back = Graph::load(&json)?;
    assert_eq!(back.adjacency(), torus.adjacency());

    let text = graphs[2].1.to_edge_list();
    let tree = Graph::from_edge_list(&text)?;
    assert!(tree.is_tree());
    println!("saved {} and read it back; tree edge list:\n{text}", json.display());
    Ok(())
}
