//! On-disk formats: TOML problem, design and result files, CSV point lists.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spherical_synth::de::{DeConfig, ScaleFactor};
use spherical_synth::mechanism::{grashof_check, min_discriminant, SphericalFourBar};
use spherical_synth::objective::{DesignVector, EvaluationReport, SynthesisProblem, TargetPath, TimingMode};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Prescribed,
    Free,
}

impl From<Mode> for TimingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Prescribed => TimingMode::Prescribed,
            Mode::Free => TimingMode::Free,
        }
    }
}

impl From<TimingMode> for Mode {
    fn from(m: TimingMode) -> Self {
        match m {
            TimingMode::Prescribed => Mode::Prescribed,
            TimingMode::Free => Mode::Free,
        }
    }
}

/// Points given inline or as a path to an `x,y,z` CSV file (relative to the
/// problem file).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSource {
    File(PathBuf),
    Inline(Vec<[f64; 3]>),
}

/// Prescribed-mode timing. With no fields the spacing is `2π/n` and
/// `theta1` is a design variable.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSection {
    /// Pins the first input angle.
    pub theta1: Option<f64>,
    pub spacing: Option<f64>,
    /// Explicit input angles; only their offsets from the first are used.
    pub thetas: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeSection {
    pub population: usize,
    pub generations: usize,
    pub cr: f64,
    /// Fixed scale factor; dither over `[f_lo, f_hi)` when absent.
    pub f: Option<f64>,
    pub f_lo: f64,
    pub f_hi: f64,
    pub seed: u64,
    pub seeds: usize,
}

impl Default for DeSection {
    fn default() -> Self {
        Self { population: 100, generations: 1000, cr: 0.9, f: None, f_lo: 0.5, f_hi: 1.0, seed: 1, seeds: 1 }
    }
}

impl DeSection {
    pub fn config(&self, seed: u64) -> DeConfig {
        DeConfig {
            population_size: self.population,
            max_generations: self.generations,
            scale: match self.f {
                Some(f) => ScaleFactor::Fixed(f),
                None => ScaleFactor::Dither { low: self.f_lo, high: self.f_hi },
            },
            crossover_rate: self.cr,
            seed,
            ..DeConfig::new(Vec::new())
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub result: Option<PathBuf>,
    pub convergence: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub mode: Mode,
    pub points: PointsSource,
    pub timing: Option<TimingSection>,
    #[serde(default)]
    pub de: DeSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut file: ProblemFile =
            toml::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))?;
        file.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(file)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn points(&self) -> Result<Vec<[f64; 3]>, CliError> {
        match &self.points {
            PointsSource::Inline(p) => Ok(p.clone()),
            PointsSource::File(f) => read_points_csv(&self.resolve(f)),
        }
    }

    pub fn problem(&self) -> Result<SynthesisProblem, CliError> {
        let points = self.points()?;
        if points.is_empty() {
            return Err(CliError::Validation("problem has no points".into()));
        }
        let path = TargetPath::new(&points)?;
        match (self.mode, &self.timing) {
            (Mode::Free, Some(_)) => Err(CliError::Validation("free timing does not take a [timing] section".into())),
            (Mode::Free, None) => Ok(SynthesisProblem::free(path)),
            (Mode::Prescribed, timing) => {
                let t = timing.clone().unwrap_or_default();
                let problem = match (t.spacing, t.thetas) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Validation("give either timing.spacing or timing.thetas".into()))
                    }
                    (Some(s), None) => SynthesisProblem::prescribed_with_spacing(path, s),
                    (None, Some(th)) => SynthesisProblem::prescribed_with_thetas(path, &th)?,
                    (None, None) => SynthesisProblem::prescribed(path),
                };
                Ok(match t.theta1 {
                    Some(t1) => problem.with_fixed_theta1(t1),
                    None => problem,
                })
            }
        }
    }
}

pub fn read_points_csv(path: &Path) -> Result<Vec<[f64; 3]>, CliError> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| CliError::Csv(path.display().to_string(), e.to_string()))?;
    reader
        .deserialize::<(f64, f64, f64)>()
        .map(|row| row.map(|(x, y, z)| [x, y, z]).map_err(|e| CliError::Csv(path.display().to_string(), e.to_string())))
        .collect()
}

/// Named design coordinates. `theta` holds `theta1` alone in prescribed mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub mode: Mode,
    pub theta: Vec<f64>,
    pub beta: f64,
    pub gamma: f64,
    pub phi: [f64; 4],
    pub eta: [f64; 4],
}

impl DesignSection {
    pub fn from_vector(design: &DesignVector) -> Self {
        let joints = design.joint_coords();
        Self {
            mode: design.mode.into(),
            theta: design.thetas().to_vec(),
            beta: design.beta(),
            gamma: design.gamma(),
            phi: joints.map(|j| j.azimuth),
            eta: joints.map(|j| j.colatitude),
        }
    }

    pub fn to_vector(&self) -> Result<DesignVector, CliError> {
        let mut values = self.theta.clone();
        values.extend([self.beta, self.gamma]);
        values.extend(self.phi);
        values.extend(self.eta);
        Ok(DesignVector::new(self.mode.into(), values)?)
    }
}

/// Any file with a `[design]` table, including result files.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct DesignFile {
    pub design: DesignSection,
}

impl DesignFile {
    pub fn load(path: &Path) -> Result<DesignVector, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: DesignFile =
            toml::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))?;
        file.design.to_vector()
    }
}

/// Kinematic summary of a linkage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkageSummary {
    /// Input, coupler, output, fixed.
    pub link_lengths: [f64; 4],
    pub grashof: bool,
    /// The closure equation has a solution at every input angle.
    pub input_fully_rotates: bool,
    pub theta0: f64,
    pub phi0: f64,
}

impl LinkageSummary {
    pub fn of(mech: &SphericalFourBar) -> Self {
        let link_lengths = mech.link_lengths();
        Self {
            link_lengths,
            grashof: grashof_check(&link_lengths),
            input_fully_rotates: min_discriminant(&link_lengths, 3600) >= 0.0,
            theta0: mech.theta0(),
            phi0: mech.phi0(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub seed: u64,
    pub population: usize,
    pub generations: usize,
    pub runtime_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub design: DesignSection,
    pub f_ob: f64,
    pub feasible: bool,
    #[serde(flatten)]
    pub linkage: LinkageSummary,
    /// Arc-length error per target point, radians; NaN where unreachable.
    pub geodesic_errors: Vec<f64>,
    pub run: RunInfo,
}

impl ResultFile {
    pub fn build(
        problem: &SynthesisProblem,
        design: &DesignVector,
        run: RunInfo,
    ) -> Result<(Self, EvaluationReport), CliError> {
        let report = problem.structural_error(design)?;
        let mech = design.mechanism()?;
        let result = Self {
            design: DesignSection::from_vector(design),
            f_ob: report.f_ob,
            feasible: report.feasible,
            linkage: LinkageSummary::of(&mech),
            geodesic_errors: report.geodesic_errors.clone(),
            run,
        };
        Ok((result, report))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("result file serializes")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))
    }
}

/// Default spacing written into problem files: `2π/n`.
pub fn uniform_spacing(n: usize) -> f64 {
    2.0 * PI / n as f64
}
