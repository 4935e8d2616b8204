//! DE/rand/1/bin with an optional dithered scale factor.
//!
//! Trial vectors pass through a repair step before evaluation: periodic
//! coordinates are wrapped, bounded ones reflected, and a designated block of
//! coordinates is sorted ascending. The last step keeps free-timing input
//! angles in increasing order without penalizing the objective.

use std::io::{self, Write};
use std::ops::Range;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every run. ChaCha8 streams are identical across
/// platforms for a given seed.
pub type DeRng = ChaCha8Rng;

/// How a coordinate is brought back into `[lower, upper]` after mutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Periodic: wrapped into `[lower, upper)`.
    Wrap,
    /// Mirrored at both ends.
    Reflect,
    Clamp,
    /// Left untouched; bounds only drive initialization.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
    pub boundary: Boundary,
}

impl Bound {
    pub fn new(lower: f64, upper: f64, boundary: Boundary) -> Self {
        Self { lower, upper, boundary }
    }

    pub fn apply(&self, x: f64) -> f64 {
        let (lo, hi) = (self.lower, self.upper);
        let width = hi - lo;
        if width.is_nan() || width <= 0.0 {
            return if self.boundary == Boundary::Free { x } else { lo };
        }
        match self.boundary {
            Boundary::Wrap => {
                let y = (x - lo).rem_euclid(width);
                if y >= width {
                    lo
                } else {
                    lo + y
                }
            }
            Boundary::Reflect => {
                let y = (x - lo).rem_euclid(2.0 * width);
                let y = if y > width { 2.0 * width - y } else { y };
                lo + y.clamp(0.0, width)
            }
            Boundary::Clamp => x.clamp(lo, hi),
            Boundary::Free => x,
        }
    }

    /// Whether `x` is a value this boundary rule can produce.
    pub fn contains(&self, x: f64) -> bool {
        match self.boundary {
            Boundary::Free => x.is_finite(),
            Boundary::Wrap if self.upper > self.lower => x >= self.lower && x < self.upper,
            _ => x >= self.lower && x <= self.upper,
        }
    }
}

/// Scale factor policy for the difference vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScaleFactor {
    Fixed(f64),
    /// Drawn uniformly from `[low, high)` once per generation.
    Dither {
        low: f64,
        high: f64,
    },
}

impl Default for ScaleFactor {
    fn default() -> Self {
        ScaleFactor::Dither { low: 0.5, high: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("population size {0} is below the minimum of 4")]
    PopulationTooSmall(usize),
    #[error("scale factor must be positive")]
    ScaleFactor,
    #[error("crossover rate {0} outside [0, 1]")]
    CrossoverRate(f64),
    #[error("bound {0} is invalid (lower above upper, or not finite)")]
    Bound(usize),
    #[error("ordered block {0:?} exceeds dimension {1}")]
    ThetaBlock(Range<usize>, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub scale: ScaleFactor,
    pub crossover_rate: f64,
    pub seed: u64,
    /// Coordinates kept in ascending order by repair. Empty when unused.
    pub theta_block: Range<usize>,
    pub bounds: Vec<Bound>,
}

impl DeConfig {
    pub fn new(bounds: Vec<Bound>) -> Self {
        Self {
            population_size: 100,
            max_generations: 1000,
            scale: ScaleFactor::default(),
            crossover_rate: 0.9,
            seed: 0,
            theta_block: 0..0,
            bounds,
        }
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size < 4 {
            return Err(ConfigError::PopulationTooSmall(self.population_size));
        }
        let scale_ok = match self.scale {
            ScaleFactor::Fixed(f) => f > 0.0,
            ScaleFactor::Dither { low, high } => low > 0.0 && high >= low,
        };
        if !scale_ok {
            return Err(ConfigError::ScaleFactor);
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(ConfigError::CrossoverRate(self.crossover_rate));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if !(b.lower.is_finite() && b.upper.is_finite() && b.lower <= b.upper) {
                return Err(ConfigError::Bound(j));
            }
        }
        if self.theta_block.end > self.dimension() || self.theta_block.start > self.theta_block.end {
            return Err(ConfigError::ThetaBlock(self.theta_block.clone(), self.dimension()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub generation: usize,
    pub individuals: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    pub best_index: usize,
}

impl Population {
    pub fn best(&self) -> (&[f64], f64) {
        (&self.individuals[self.best_index], self.fitness[self.best_index])
    }

    pub fn mean_fitness(&self) -> f64 {
        self.fitness.iter().sum::<f64>() / self.fitness.len() as f64
    }

    fn update_best(&mut self) {
        self.best_index =
            self.fitness.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub best: Vec<f64>,
    pub best_fitness: f64,
    pub history: Vec<GenerationStats>,
}

/// Wraps or reflects every coordinate, then sorts the ordered block.
pub fn repair(trial: &mut [f64], config: &DeConfig) {
    for (x, b) in trial.iter_mut().zip(&config.bounds) {
        *x = b.apply(*x);
    }
    trial[config.theta_block.clone()].sort_by(f64::total_cmp);
}

/// Three mutually distinct indices in `0..m`, all different from `i`.
pub fn pick_donors(m: usize, i: usize, rng: &mut impl Rng) -> [usize; 3] {
    debug_assert!(m >= 4);
    let mut draw = |taken: &[usize]| loop {
        let r = rng.gen_range(0..m);
        if r != i && !taken.contains(&r) {
            return r;
        }
    };
    let r0 = draw(&[]);
    let r1 = draw(&[r0]);
    let r2 = draw(&[r0, r1]);
    [r0, r1, r2]
}

/// `x[r0] + f·(x[r1] - x[r2])` for randomly chosen donors.
pub fn mutate(individuals: &[Vec<f64>], i: usize, f: f64, rng: &mut impl Rng) -> Vec<f64> {
    let [r0, r1, r2] = pick_donors(individuals.len(), i, rng);
    debug_assert!(r0 != i && r1 != i && r2 != i && r0 != r1 && r0 != r2 && r1 != r2);
    let (base, a, b) = (&individuals[r0], &individuals[r1], &individuals[r2]);
    base.iter().zip(a).zip(b).map(|((x0, x1), x2)| x0 + f * (x1 - x2)).collect()
}

/// Binomial crossover; coordinate `j_rand` always comes from the donor.
pub fn crossover(target: &[f64], donor: &[f64], cr: f64, rng: &mut impl Rng) -> Vec<f64> {
    let j_rand = rng.gen_range(0..target.len());
    target
        .iter()
        .zip(donor)
        .enumerate()
        .map(|(j, (&x, &v))| {
            let take = rng.gen::<f64>() <= cr;
            if take || j == j_rand {
                v
            } else {
                x
            }
        })
        .collect()
}

/// Ties go to the trial vector.
pub fn select(target_fitness: f64, trial_fitness: f64) -> bool {
    trial_fitness <= target_fitness
}

fn evaluate_all<F>(objective: &F, vectors: &[Vec<f64>]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        vectors.par_iter().map(|v| objective(v)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        vectors.iter().map(|v| objective(v)).collect()
    }
}

/// Uniform samples in `[lower, upper)` per coordinate, repaired and evaluated.
pub fn initialize<F>(objective: &F, config: &DeConfig, rng: &mut DeRng) -> Population
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let individuals: Vec<Vec<f64>> = (0..config.population_size)
        .map(|_| {
            let mut x: Vec<f64> =
                config.bounds.iter().map(|b| rng.gen::<f64>() * (b.upper - b.lower) + b.lower).collect();
            repair(&mut x, config);
            x
        })
        .collect();
    let fitness = evaluate_all(objective, &individuals);
    let mut population = Population { generation: 0, individuals, fitness, best_index: 0 };
    population.update_best();
    population
}

/// A running optimization that can be advanced one generation at a time.
pub struct DifferentialEvolution<F> {
    objective: F,
    config: DeConfig,
    rng: DeRng,
    population: Population,
    history: Vec<GenerationStats>,
}

impl<F> DifferentialEvolution<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(objective: F, config: DeConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut rng = DeRng::seed_from_u64(config.seed);
        let population = initialize(&objective, &config, &mut rng);
        let history =
            vec![GenerationStats { generation: 0, best: population.best().1, mean: population.mean_fitness() }];
        Ok(Self { objective, config, rng, population, history })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn history(&self) -> &[GenerationStats] {
        &self.history
    }

    pub fn config(&self) -> &DeConfig {
        &self.config
    }

    pub fn is_finished(&self) -> bool {
        self.population.generation >= self.config.max_generations
    }

    /// One generation: every trial is built serially from the current
    /// population, evaluated (possibly in parallel), then selected.
    pub fn step(&mut self) -> &Population {
        let f = match self.config.scale {
            ScaleFactor::Fixed(f) => f,
            ScaleFactor::Dither { low, high } if high > low => self.rng.gen_range(low..high),
            ScaleFactor::Dither { low, .. } => low,
        };
        let pop = &self.population;
        let trials: Vec<Vec<f64>> = (0..pop.individuals.len())
            .map(|i| {
                let donor = mutate(&pop.individuals, i, f, &mut self.rng);
                let mut trial = crossover(&pop.individuals[i], &donor, self.config.crossover_rate, &mut self.rng);
                repair(&mut trial, &self.config);
                trial
            })
            .collect();
        let trial_fitness = evaluate_all(&self.objective, &trials);

        let pop = &mut self.population;
        for (i, (trial, fit)) in trials.into_iter().zip(trial_fitness).enumerate() {
            if select(pop.fitness[i], fit) {
                pop.individuals[i] = trial;
                pop.fitness[i] = fit;
            }
        }
        pop.generation += 1;
        pop.update_best();
        self.history.push(GenerationStats { generation: pop.generation, best: pop.best().1, mean: pop.mean_fitness() });
        &self.population
    }

    pub fn run(mut self) -> Outcome {
        while !self.is_finished() {
            self.step();
        }
        self.into_outcome()
    }

    pub fn into_outcome(self) -> Outcome {
        let (best, best_fitness) = self.population.best();
        Outcome { best: best.to_vec(), best_fitness, history: self.history }
    }
}

/// Convenience wrapper: initialize and run all generations.
pub fn run<F>(objective: F, config: DeConfig) -> Result<Outcome, ConfigError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    Ok(DifferentialEvolution::new(objective, config)?.run())
}

/// Writes `generation,best_f_ob,mean_f_ob` rows.
pub fn write_history_csv<W: Write>(history: &[GenerationStats], mut out: W) -> io::Result<()> {
    writeln!(out, "generation,best_f_ob,mean_f_ob")?;
    for s in history {
        writeln!(out, "{},{:e},{:e}", s.generation, s.best, s.mean)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use std::f64::consts::PI;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn box_config(d: usize, m: usize, gens: usize) -> DeConfig {
        DeConfig {
            population_size: m,
            max_generations: gens,
            seed: 11,
            ..DeConfig::new(vec![Bound::new(-5.0, 5.0, Boundary::Reflect); d])
        }
    }

    #[test]
    fn sphere_function_converges() {
        let out = run(sphere, box_config(5, 30, 200)).unwrap();
        assert!(out.best_fitness <= 1e-6, "{}", out.best_fitness);
        assert_eq!(out.history.len(), 201);
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let config = box_config(3, 10, 0);
        let mut rng = DeRng::seed_from_u64(config.seed);
        let init = initialize(&sphere, &config, &mut rng);
        let out = run(sphere, config).unwrap();
        assert_eq!(out.best_fitness, init.best().1);
        assert_eq!(out.best, init.best().0);
        assert_eq!(out.history.len(), 1);
    }

    #[test]
    fn degenerate_bounds_give_identical_individuals() {
        let mut config = box_config(3, 8, 0);
        config.bounds = vec![Bound::new(1.5, 1.5, Boundary::Reflect); 3];
        let mut rng = DeRng::seed_from_u64(1);
        let pop = initialize(&sphere, &config, &mut rng);
        assert!(pop.individuals.iter().all(|x| x == &vec![1.5; 3]));
    }

    #[test]
    fn initialization_respects_bounds_and_seed() {
        let bounds = vec![
            Bound::new(0.0, 2.0 * PI, Boundary::Wrap),
            Bound::new(-PI, PI, Boundary::Wrap),
            Bound::new(0.0, PI, Boundary::Reflect),
            Bound::new(-3.0, 7.0, Boundary::Free),
        ];
        let config = DeConfig { population_size: 10_000, ..DeConfig::new(bounds.clone()) };
        let a = initialize(&sphere, &config, &mut DeRng::seed_from_u64(5));
        let b = initialize(&sphere, &config, &mut DeRng::seed_from_u64(5));
        assert_eq!(a, b);
        for x in &a.individuals {
            for (v, bd) in x.iter().zip(&bounds) {
                assert!(*v >= bd.lower && *v < bd.upper);
            }
        }
    }

    #[test]
    fn mutation_arithmetic() {
        let pop: Vec<Vec<f64>> = (0..6).map(|k| vec![k as f64, (k * k) as f64, -(k as f64)]).collect();
        let mut rng = DeRng::seed_from_u64(3);
        let mut replay = rng.clone();
        let v = mutate(&pop, 2, 0.7, &mut rng);
        let [r0, r1, r2] = pick_donors(6, 2, &mut replay);
        for j in 0..3 {
            assert_eq!(v[j], pop[r0][j] + 0.7 * (pop[r1][j] - pop[r2][j]));
        }
        let v0 = mutate(&pop, 0, 0.0, &mut rng);
        assert!(pop.contains(&v0));
        let same = vec![vec![1.0, 2.0]; 5];
        assert_eq!(mutate(&same, 1, 0.9, &mut rng), vec![1.0, 2.0]);
    }

    #[test]
    fn donors_distinct() {
        let mut rng = DeRng::seed_from_u64(9);
        for _ in 0..10_000 {
            let i = rng.gen_range(0..4);
            let [a, b, c] = pick_donors(4, i, &mut rng);
            assert!(a != b && a != c && b != c && a != i && b != i && c != i);
        }
    }

    #[test]
    fn crossover_extremes() {
        let mut rng = DeRng::seed_from_u64(2);
        let x = vec![0.0; 8];
        let v = vec![1.0; 8];
        assert_eq!(crossover(&x, &v, 1.0, &mut rng), v);
        for _ in 0..100 {
            let u = crossover(&x, &v, 0.0, &mut rng);
            assert_eq!(u.iter().filter(|&&e| e == 1.0).count(), 1);
        }
    }

    #[test]
    fn crossover_inheritance_rate() {
        let mut rng = DeRng::seed_from_u64(8);
        let d = 10;
        let trials = 100_000;
        let cr = 0.3;
        let (x, v) = (vec![0.0; d], vec![1.0; d]);
        let mut inherited = 0usize;
        for _ in 0..trials {
            let u = crossover(&x, &v, cr, &mut rng);
            inherited += u.iter().filter(|&&e| e == 1.0).count() - 1;
        }
        // The forced coordinate is excluded; the rest inherit with probability cr.
        let n = (trials * (d - 1)) as f64;
        let rate = inherited as f64 / n;
        let sigma = (cr * (1.0 - cr) / n).sqrt();
        assert!((rate - cr).abs() <= 3.0 * sigma, "{rate}");
    }

    #[test]
    fn repair_sorts_block() {
        let mut config = DeConfig::new(vec![Bound::new(0.0, 10.0, Boundary::Wrap); 4]);
        config.theta_block = 0..3;
        let mut t = vec![3.0, 1.0, 2.0, 9.0];
        repair(&mut t, &config);
        assert_eq!(t, vec![1.0, 2.0, 3.0, 9.0]);
        repair(&mut t, &config);
        assert_eq!(t, vec![1.0, 2.0, 3.0, 9.0]);
    }

    #[test]
    fn boundary_rules() {
        let wrap = Bound::new(0.0, 2.0 * PI, Boundary::Wrap);
        assert!((wrap.apply(2.0 * PI + 0.5) - 0.5).abs() < 1e-15);
        assert!(wrap.contains(wrap.apply(-1e-18)));
        let g = Bound::new(-PI, PI, Boundary::Wrap);
        assert!((g.apply(PI + 0.25) - (-PI + 0.25)).abs() < 1e-15);
        let eta = Bound::new(0.0, PI, Boundary::Reflect);
        assert!((eta.apply(-0.3) - 0.3).abs() < 1e-15);
        assert!((eta.apply(PI + 0.3) - (PI - 0.3)).abs() < 1e-15);
        assert!((eta.apply(2.0 * PI + 0.3) - 0.3).abs() < 1e-14);
        assert_eq!(Bound::new(0.0, 1.0, Boundary::Clamp).apply(3.0), 1.0);
    }

    #[test]
    fn selection_ties_prefer_trial() {
        assert!(select(5.0, 5.0));
        assert!(!select(1.0, 2.0));
        assert!(select(2.0, 1.0));
    }

    #[test]
    fn history_is_monotone_and_deterministic() {
        let obj = |x: &[f64]| x.iter().map(|v| v.abs().sqrt()).sum::<f64>();
        let a = run(obj, box_config(6, 20, 150)).unwrap();
        let b = run(obj, box_config(6, 20, 150)).unwrap();
        assert_eq!(a, b);
        assert!(a.history.windows(2).all(|w| w[1].best <= w[0].best));
    }

    #[test]
    fn history_csv_format() {
        let h = [GenerationStats { generation: 0, best: 0.5, mean: 1.0 }];
        let mut buf = Vec::new();
        write_history_csv(&h, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "generation,best_f_ob,mean_f_ob\n0,5e-1,1e0\n");
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = box_config(2, 3, 1);
        assert_eq!(c.validate(), Err(ConfigError::PopulationTooSmall(3)));
        c.population_size = 10;
        c.crossover_rate = 1.5;
        assert_eq!(c.validate(), Err(ConfigError::CrossoverRate(1.5)));
        c.crossover_rate = 0.5;
        c.scale = ScaleFactor::Fixed(0.0);
        assert_eq!(c.validate(), Err(ConfigError::ScaleFactor));
        c.scale = ScaleFactor::Fixed(0.5);
        c.theta_block = 0..3;
        assert!(matches!(c.validate(), Err(ConfigError::ThetaBlock(..))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn repair_preserves_multiset(block in proptest::collection::vec(0.0..2.0 * PI, 1..40)) {
            let n = block.len();
            let mut config = DeConfig::new(vec![Bound::new(0.0, 2.0 * PI, Boundary::Wrap); n + 2]);
            config.theta_block = 0..n;
            let mut t = block.clone();
            t.extend([1.0, 2.0]);
            repair(&mut t, &config);
            prop_assert!(t[..n].windows(2).all(|w| w[0] <= w[1]));
            let mut expected = block;
            expected.sort_by(f64::total_cmp);
            prop_assert_eq!(&t[..n], &expected[..]);
        }
    }
}
