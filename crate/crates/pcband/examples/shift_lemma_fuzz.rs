//! Property fuzzing of the detuning lemma: draw random instances that
//! satisfy all hypotheses (lambda near b n^2, detuned base b~ inside the
//! admissible window, lambda above the size thresholds) and brute-force
//! the conclusion that lambda stays c-far from every b~ m^2.
//!
//! Usage: cargo run --example shift_lemma_fuzz [count] [seed]

use pcband::constants::{check_shift_lemma, random_lemma_instance, ShiftLemmaOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args
        .next()
        .map(|s| s.parse().expect("count is an integer"))
        .unwrap_or(10_000);
    let seed: u64 = args
        .next()
        .map(|s| s.parse().expect("seed is an integer"))
        .unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holds = 0usize;
    let mut worst_margin = f64::INFINITY;
    let mut worst = None;
    for i in 0..count {
        let inst = random_lemma_instance(&mut rng);
        match check_shift_lemma(&inst).outcome {
            ShiftLemmaOutcome::Checked {
                holds: true,
                nearest_margin,
                nearest_m,
                ..
            } => {
                holds += 1;
                if nearest_margin < worst_margin {
                    worst_margin = nearest_margin;
                    worst = Some((inst, nearest_m));
                }
            }
            other => {
                eprintln!("instance {i} did not hold: {other:?}");
                eprintln!("  {inst:?}");
            }
        }
        if (i + 1) % 2000 == 0 {
            eprintln!("checked {} instances", i + 1);
        }
    }
    println!("{holds}/{count} instances satisfy the conclusion");
    if let Some((inst, m)) = worst {
        println!(
            "tightest instance: |lambda - b~ m^2| = {worst_margin:.6} (c = {:.6}) at m = {m}, lambda = {:.4}",
            inst.c, inst.lambda
        );
    }
}
