//! Browser bindings: curve tracing, design evaluation and a stepping
//! synthesizer for the bundled 64-point path.

use std::f64::consts::TAU;

use spherical_synth::de::{DeConfig, DifferentialEvolution, ScaleFactor};
use spherical_synth::fixtures::{table1_subset, table45_design, TABLE2_DESIGN};
use spherical_synth::mechanism::grashof_check;
use spherical_synth::objective::{DesignVector, SynthesisProblem, TargetPath, TimingMode};
use wasm_bindgen::prelude::*;

fn mode(free: bool) -> TimingMode {
    if free {
        TimingMode::Free
    } else {
        TimingMode::Prescribed
    }
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn problem(free: bool, stride: usize) -> Result<SynthesisProblem, JsError> {
    let path = TargetPath::new(&table1_subset(stride.max(1))).map_err(js_err)?;
    Ok(if free { SynthesisProblem::free(path) } else { SynthesisProblem::prescribed(path) })
}

/// Target points, flattened `x, y, z` triples.
#[wasm_bindgen]
pub fn target_points(stride: usize) -> Vec<f64> {
    table1_subset(stride.max(1)).into_iter().flatten().collect()
}

/// Published prescribed-timing design (11 values).
#[wasm_bindgen]
pub fn published_prescribed() -> Vec<f64> {
    TABLE2_DESIGN.to_vec()
}

/// Published free-timing design (74 values).
#[wasm_bindgen]
pub fn published_free() -> Vec<f64> {
    table45_design()
}

/// Generated curve over one input turn as flattened `x, y, z` triples; NaN
/// where the linkage cannot be assembled.
#[wasm_bindgen]
pub fn trace_curve(design: Vec<f64>, free: bool, samples: usize) -> Result<Vec<f64>, JsError> {
    let mech = DesignVector::new(mode(free), design).and_then(|d| d.mechanism()).map_err(js_err)?;
    let branch = mech.select_branch().map_err(js_err)?;
    let n = samples.max(2);
    Ok((0..n)
        .flat_map(|k| {
            let theta = TAU * k as f64 / (n - 1) as f64;
            mech.generated_point(theta, branch).map(|p| p.to_array()).unwrap_or([f64::NAN; 3])
        })
        .collect())
}

/// Objective value and linkage summary of a design.
#[wasm_bindgen]
pub struct Evaluation {
    f_ob: f64,
    feasible: bool,
    grashof: bool,
    link_lengths: Vec<f64>,
    generated: Vec<f64>,
}

#[wasm_bindgen]
impl Evaluation {
    #[wasm_bindgen(getter)]
    pub fn f_ob(&self) -> f64 {
        self.f_ob
    }

    #[wasm_bindgen(getter)]
    pub fn feasible(&self) -> bool {
        self.feasible
    }

    #[wasm_bindgen(getter)]
    pub fn grashof(&self) -> bool {
        self.grashof
    }

    #[wasm_bindgen(getter)]
    pub fn link_lengths(&self) -> Vec<f64> {
        self.link_lengths.clone()
    }

    /// Generated points at the design's input angles, flattened.
    #[wasm_bindgen(getter)]
    pub fn generated(&self) -> Vec<f64> {
        self.generated.clone()
    }
}

fn evaluation(problem: &SynthesisProblem, design: DesignVector) -> Result<Evaluation, JsError> {
    let report = problem.structural_error(&design).map_err(js_err)?;
    let (mech, thetas) = problem.decode(&design).map_err(js_err)?;
    let link_lengths = mech.link_lengths();
    let generated = match mech.select_branch() {
        Ok(b) => thetas
            .iter()
            .flat_map(|&t| mech.generated_point(t, b).map(|p| p.to_array()).unwrap_or([f64::NAN; 3]))
            .collect(),
        Err(_) => vec![f64::NAN; 3 * thetas.len()],
    };
    Ok(Evaluation {
        f_ob: report.f_ob,
        feasible: report.feasible,
        grashof: grashof_check(&link_lengths),
        link_lengths: link_lengths.to_vec(),
        generated,
    })
}

/// Evaluates a design against every `stride`-th target point.
#[wasm_bindgen]
pub fn evaluate(design: Vec<f64>, free: bool, stride: usize) -> Result<Evaluation, JsError> {
    let problem = problem(free, stride)?;
    let design = DesignVector::new(mode(free), design).map_err(js_err)?;
    evaluation(&problem, design)
}

type Objective = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Differential evolution advanced a few generations per animation frame.
#[wasm_bindgen]
pub struct Synthesizer {
    problem: SynthesisProblem,
    de: DifferentialEvolution<Objective>,
}

#[wasm_bindgen]
impl Synthesizer {
    #[wasm_bindgen(constructor)]
    pub fn new(
        free: bool,
        stride: usize,
        population: usize,
        generations: usize,
        cr: f64,
        seed: u64,
    ) -> Result<Synthesizer, JsError> {
        let problem = problem(free, stride)?;
        let base = DeConfig {
            population_size: population,
            max_generations: generations,
            scale: ScaleFactor::Dither { low: 0.5, high: 1.0 },
            crossover_rate: cr,
            seed,
            ..DeConfig::new(Vec::new())
        };
        let config = problem.de_config(&base);
        let owned = problem.clone();
        let objective: Objective = Box::new(move |x| owned.objective(x));
        let de = DifferentialEvolution::new(objective, config).map_err(js_err)?;
        Ok(Synthesizer { problem, de })
    }

    /// Runs up to `count` generations; returns the best objective value.
    pub fn step(&mut self, count: usize) -> f64 {
        for _ in 0..count {
            if self.de.is_finished() {
                break;
            }
            self.de.step();
        }
        self.de.population().best().1
    }

    #[wasm_bindgen(getter)]
    pub fn generation(&self) -> usize {
        self.de.population().generation
    }

    #[wasm_bindgen(getter)]
    pub fn finished(&self) -> bool {
        self.de.is_finished()
    }

    pub fn best_design(&self) -> Vec<f64> {
        self.de.population().best().0.to_vec()
    }

    pub fn best_evaluation(&self) -> Result<Evaluation, JsError> {
        let design = DesignVector::new(self.problem.mode(), self.best_design()).map_err(js_err)?;
        evaluation(&self.problem, design)
    }
}
