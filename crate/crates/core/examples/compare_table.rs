//! A small sweep of families against cover strategies, printed as CSV.

use crw::harness::{compare_table, rows_to_csv, CoverStrategy, Family, TrialConfig};

fn main() -> crw::Result<()> {
    let sweep = vec![
        (Family::Complete, vec![10, 50]),
        (Family::Cycle, vec![10, 30]),
        (Family::Torus2, vec![10]),
        (Family::Subcubic, vec![100]),
    ];
    let strategies = [
        CoverStrategy::Srw,
        CoverStrategy::GreedyUncovered,
        CoverStrategy::SpanningWalk,
        CoverStrategy::TorusCover,
        CoverStrategy::Optimal,
    ];
    let rows = compare_table(&sweep, &strategies, &TrialConfig::new(100, 10_000_000))?;
    print!("{}", rows_to_csv(&rows)?);
    Ok(())
}
