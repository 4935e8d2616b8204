//! Prescribed-timing synthesis of the 64-point reference path.
//!
//! Usage: `cargo run --release --example example1 -- [seed] [generations] [cr] [f_lo] [f_hi]`

use std::time::Instant;

use spherical_synth::de::{DeConfig, DifferentialEvolution, ScaleFactor};
use spherical_synth::fixtures::TABLE1_POINTS;
use spherical_synth::objective::{SynthesisProblem, TargetPath};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let generations = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let cr = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.9);
    let f_lo = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let f_hi = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);

    let problem = SynthesisProblem::prescribed(TargetPath::new(&TABLE1_POINTS).unwrap());
    let base = DeConfig {
        population_size: 100,
        max_generations: generations,
        seed,
        crossover_rate: cr,
        scale: ScaleFactor::Dither { low: f_lo, high: f_hi },
        ..DeConfig::new(vec![])
    };
    let config = problem.de_config(&base);
    let start = Instant::now();
    let mut de = DifferentialEvolution::new(|x: &[f64]| problem.objective(x), config).unwrap();
    while !de.is_finished() {
        let pop = de.step();
        if pop.generation % 1000 == 0 {
            println!("generation {:>6}  best {:.3e}", pop.generation, pop.best().1);
        }
    }
    let out = de.into_outcome();
    println!("seed {seed}: f_ob = {:.3e} in {:.1?}", out.best_fitness, start.elapsed());
    println!("design = {:?}", out.best);
}
