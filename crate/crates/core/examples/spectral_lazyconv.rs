//! Relaxation time of the lazy walk and the first time the SRW puts a third
//! of the stationary mass on a set.

use crw::exact::{lazyconv_horizon, lazyconv_search, spectral};
use crw::graph::{gen_complete, gen_cycle, gen_random_regular, gen_torus};
use crw::{Graph, VertexSet};

fn main() -> crw::Result<()> {
    let graphs: Vec<(&str, Graph)> = vec![
        ("K_20", gen_complete(20)?),
        ("cycle 40", gen_cycle(40)?),
        ("torus 8x8", gen_torus(8, 2)?),
        ("3-regular 200", gen_random_regular(200, 3, 3)?),
    ];
    for (name, g) in &graphs {
        let r = spectral(g)?;
        let far = g.n() / 2;
        let set = VertexSet::singleton(far);
        let (t, p) = lazyconv_search(g, &r, 0, &set)?;
        println!(
            "{name:<14} lambda2 {:.5}  t_rel {:>8.2}  horizon {:>6}  P_0(X_{t} = {far}) = {p:.5} >= {:.5}",
            r.lambda2,
            r.t_rel,
            lazyconv_horizon(&r),
            r.pi_of(&set) / 3.0
        );
    }
    Ok(())
}
