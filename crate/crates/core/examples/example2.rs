//! Free-timing synthesis on a subset of the 64-point reference path.
//!
//! Usage: `cargo run --release --example example2 -- [seed] [stride] [population] [generations] [cr]`

use std::f64::consts::PI;
use std::time::Instant;

use spherical_synth::de::{DeConfig, DifferentialEvolution};
use spherical_synth::fixtures::table1_subset;
use spherical_synth::objective::{theta_differences, SynthesisProblem, TargetPath};

fn main() {
    let mut args = std::env::args().skip(1);
    let mut next = |default: f64| args.next().and_then(|s| s.parse().ok()).unwrap_or(default);
    let seed = next(1.0) as u64;
    let stride = next(4.0) as usize;
    let population = next(150.0) as usize;
    let generations = next(20_000.0) as usize;
    let cr = next(0.95);

    let points = table1_subset(stride);
    let n = points.len();
    let problem = SynthesisProblem::free(TargetPath::new(&points).unwrap());
    let base = DeConfig {
        population_size: population,
        max_generations: generations,
        crossover_rate: cr,
        seed,
        ..DeConfig::new(vec![])
    };
    let start = Instant::now();
    let mut de = DifferentialEvolution::new(|x: &[f64]| problem.objective(x), problem.de_config(&base)).unwrap();
    while !de.is_finished() {
        let pop = de.step();
        if pop.generation % 2000 == 0 {
            println!("generation {:>6}  best {:.3e}", pop.generation, pop.best().1);
        }
    }
    let out = de.into_outcome();
    let (_, mean) = theta_differences(&out.best[..n]);
    println!(
        "seed {seed}: f_ob = {:.3e}, mean step {:.6} (2π/n = {:.6}) in {:.1?}",
        out.best_fitness,
        mean,
        2.0 * PI / n as f64,
        start.elapsed()
    );
}
