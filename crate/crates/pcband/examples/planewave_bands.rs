//! 2D band diagram along the high-symmetry path Gamma -> X -> M -> Gamma
//! of the reduced Brillouin zone, computed with the plane-wave Galerkin
//! method, plus the band intervals over the full zone and their overlaps.
//!
//! Usage: cargo run --example planewave_bands [n_bands] [cutoff]

use std::f64::consts::PI;

use num_complex::Complex64;
use pcband::planewave2d::{self, BlochVector};
use pcband::profiles::Profile2D;

fn main() -> pcband::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_bands: usize = args
        .next()
        .map(|s| s.parse().expect("n_bands is an integer"))
        .unwrap_or(6);
    let cutoff: usize = args
        .next()
        .map(|s| s.parse().expect("cutoff is an integer"))
        .unwrap_or(5);

    // eps = 2 + 0.3 cos(2 pi x1) cos(2 pi x2).
    let eps = Profile2D::new(vec![
        ((0, 0), Complex64::new(2.0, 0.0)),
        ((1, 1), Complex64::new(0.075, 0.0)),
        ((1, -1), Complex64::new(0.075, 0.0)),
        ((-1, 1), Complex64::new(0.075, 0.0)),
        ((-1, -1), Complex64::new(0.075, 0.0)),
    ])?;
    eprintln!("{n_bands} bands at cutoff {cutoff} ({} plane waves)", planewave2d::basis_dim(cutoff));

    // 16 segments per leg of the path.
    let mut path = Vec::new();
    for i in 0..16 {
        path.push(BlochVector::new(i as f64 / 16.0 * PI, 0.0)); // Gamma -> X
    }
    for i in 0..16 {
        path.push(BlochVector::new(PI, i as f64 / 16.0 * PI)); // X -> M
    }
    for i in 0..=16 {
        let s = 1.0 - i as f64 / 16.0;
        path.push(BlochVector::new(s * PI, s * PI)); // M -> Gamma
    }

    println!("s,alpha,beta,{}", (1..=n_bands).map(|n| format!("lambda_{n}")).collect::<Vec<_>>().join(","));
    for (i, &k) in path.iter().enumerate() {
        let eigs = planewave2d::bloch_eigs(&eps, k, cutoff, n_bands)?;
        let row: Vec<String> = eigs.iter().map(|e| format!("{e:.8}")).collect();
        println!("{},{:.6},{:.6},{}", i, k.alpha, k.beta, row.join(","));
    }

    eprintln!("band intervals over a 9x9 reduced-zone lattice:");
    let report = planewave2d::overlap_check(&eps, n_bands, 9, cutoff)?;
    for b in &report.intervals {
        eprintln!(
            "  I{} = [{:.6}, {:.6}] (min at ({:.3}, {:.3}), max at ({:.3}, {:.3}))",
            b.n, b.lo, b.hi, b.argmin.alpha, b.argmin.beta, b.argmax.alpha, b.argmax.beta
        );
    }
    eprintln!(
        "union covers [0, {:.4}] with no holes: {}",
        report.intervals.last().map_or(0.0, |b| b.hi),
        report.covered
    );
    for (i, o) in report.overlaps.iter().enumerate() {
        if *o < 0.0 {
            eprintln!("  bands {} and {} leave a gap of width {:.6}", i + 1, i + 2, -o);
        }
    }
    Ok(())
}
