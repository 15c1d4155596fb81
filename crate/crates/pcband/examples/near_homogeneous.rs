//! How much contrast does it take to open a gap? Sweeps the modulation
//! depth of `eps = 1 + delta cos(2 pi x1)` and reports, for each delta,
//! whether the union of the first bands still covers the low spectrum
//! without holes. Near-homogeneous profiles keep full coverage; genuine
//! holes need O(1) contrast in this geometry.
//!
//! Usage: cargo run --example near_homogeneous [n_bands] [bz_grid] [cutoff]

use num_complex::Complex64;
use pcband::planewave2d;
use pcband::profiles::Profile2D;

fn main() -> pcband::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_bands: usize = args
        .next()
        .map(|s| s.parse().expect("n_bands is an integer"))
        .unwrap_or(8);
    let bz_grid: usize = args
        .next()
        .map(|s| s.parse().expect("bz_grid is an integer"))
        .unwrap_or(9);
    let cutoff: usize = args
        .next()
        .map(|s| s.parse().expect("cutoff is an integer"))
        .unwrap_or(4);

    println!("delta,covered,holes,worst_overlap,top");
    for &delta in &[0.0, 0.01, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95] {
        let eps = Profile2D::new(vec![
            ((0, 0), Complex64::new(1.0, 0.0)),
            ((1, 0), Complex64::new(delta / 2.0, 0.0)),
            ((-1, 0), Complex64::new(delta / 2.0, 0.0)),
        ])?;
        eprintln!("delta = {delta}: scanning {bz_grid}x{bz_grid} lattice at cutoff {cutoff}");
        let report = planewave2d::overlap_check(&eps, n_bands, bz_grid, cutoff)?;
        let worst = report
            .overlaps
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let top = report.intervals.last().map_or(0.0, |b| b.hi);
        println!(
            "{delta},{},{},{worst:.6},{top:.4}",
            report.covered,
            report.union_holes.len()
        );
        for (lo, hi) in &report.union_holes {
            eprintln!("  hole [{lo:.6}, {hi:.6}]");
        }
    }
    eprintln!("note: a negative worst_overlap means some consecutive intervals are disjoint,");
    eprintln!("even if later bands still cover the hole between them");
    Ok(())
}
