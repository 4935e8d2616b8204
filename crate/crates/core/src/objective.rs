//! Design-vector layout and the structural-error objective.
//!
//! Layout of the flat design vector:
//!
//! + prescribed timing: `theta1, beta, gamma, phi1..phi4, eta1..eta4` (11)
//! + free timing: `theta1..thetan, beta, gamma, phi1..phi4, eta1..eta4` (n + 10)
//!
//! `phi` is joint azimuth and `eta` joint colatitude.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;

use crate::de::{Bound, Boundary, DeConfig};
use crate::error::{Error, Result};
use crate::mechanism::{JointCoords, SphericalFourBar};
use crate::so3::UnitVector3;

/// Objective value assigned to any design that cannot reach some target:
/// `PENALTY + number of unreachable points`.
pub const PENALTY: f64 = 1e10;

const TAU: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimingMode {
    Prescribed,
    Free,
}

impl fmt::Display for TimingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimingMode::Prescribed => "prescribed",
            TimingMode::Free => "free",
        })
    }
}

/// Ordered desired points, renormalized onto the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetPath {
    points: Vec<UnitVector3>,
}

impl TargetPath {
    pub fn new(points: &[[f64; 3]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidPath(format!("need at least 3 points, got {}", points.len())));
        }
        let points = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                UnitVector3::from_array(*p).map_err(|_| Error::InvalidPath(format!("point {} has zero length", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { points })
    }

    pub fn points(&self) -> &[UnitVector3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `theta1 + (2π/n)(k - 1)` for `k = 1..n`.
pub fn prescribed_thetas(theta1: f64, n: usize) -> Vec<f64> {
    let step = TAU / n as f64;
    (0..n).map(|k| theta1 + step * k as f64).collect()
}

/// Consecutive differences and their mean.
pub fn theta_differences(thetas: &[f64]) -> (Vec<f64>, f64) {
    let diffs: Vec<f64> = thetas.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    (diffs, mean)
}

/// Arc length between a desired and a generated point.
pub fn geodesic_error(desired: &UnitVector3, generated: &UnitVector3) -> f64 {
    // atan2 keeps full precision for nearly coincident points, where acos
    // of the dot product loses half the digits.
    let c = desired.cross(generated);
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt().atan2(desired.dot(generated))
}

/// A path-generation problem: the targets plus the timing law.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisProblem {
    path: TargetPath,
    mode: TimingMode,
    /// Prescribed mode: input angle of point k is `theta1 + offsets[k]`.
    offsets: Vec<f64>,
    /// Prescribed mode: pins `theta1` instead of leaving it to the optimizer.
    fixed_theta1: Option<f64>,
}

impl SynthesisProblem {
    /// Prescribed timing with uniform spacing `2π/n`.
    pub fn prescribed(path: TargetPath) -> Self {
        let n = path.len();
        Self::prescribed_with_spacing(path, TAU / n as f64)
    }

    pub fn prescribed_with_spacing(path: TargetPath, spacing: f64) -> Self {
        let offsets = (0..path.len()).map(|k| spacing * k as f64).collect();
        Self { path, mode: TimingMode::Prescribed, offsets, fixed_theta1: None }
    }

    /// Prescribed timing from explicit input angles; only their offsets from
    /// the first angle are kept, `theta1` remains a design variable.
    pub fn prescribed_with_thetas(path: TargetPath, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != path.len() {
            return Err(Error::InvalidPath(format!("{} input angles given for {} points", thetas.len(), path.len())));
        }
        let offsets = thetas.iter().map(|t| t - thetas[0]).collect();
        Ok(Self { path, mode: TimingMode::Prescribed, offsets, fixed_theta1: None })
    }

    pub fn with_fixed_theta1(mut self, theta1: f64) -> Self {
        if self.mode == TimingMode::Prescribed {
            self.fixed_theta1 = Some(theta1);
        }
        self
    }

    pub fn free(path: TargetPath) -> Self {
        Self { path, mode: TimingMode::Free, offsets: Vec::new(), fixed_theta1: None }
    }

    pub fn path(&self) -> &TargetPath {
        &self.path
    }

    pub fn mode(&self) -> TimingMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn dimension(&self) -> usize {
        match self.mode {
            TimingMode::Prescribed => 11,
            TimingMode::Free => self.len() + 10,
        }
    }

    /// Index range of the input-angle block in the design vector.
    pub fn theta_block(&self) -> Range<usize> {
        match self.mode {
            TimingMode::Prescribed => 0..1,
            TimingMode::Free => 0..self.len(),
        }
    }

    /// Search domain for every design coordinate.
    pub fn bounds(&self) -> Vec<Bound> {
        let mut bounds: Vec<Bound> = self.theta_block().map(|_| Bound::new(0.0, TAU, Boundary::Wrap)).collect();
        if let Some(t) = self.fixed_theta1 {
            bounds[0] = Bound::new(t, t, Boundary::Clamp);
        }
        bounds.push(Bound::new(0.0, TAU, Boundary::Wrap));
        bounds.push(Bound::new(-PI, PI, Boundary::Wrap));
        bounds.extend((0..4).map(|_| Bound::new(0.0, TAU, Boundary::Wrap)));
        bounds.extend((0..4).map(|_| Bound::new(0.0, PI, Boundary::Reflect)));
        bounds
    }

    /// Optimizer settings for this problem; only free timing has an ordered
    /// block (a single `theta1` needs no sorting).
    pub fn de_config(&self, base: &DeConfig) -> DeConfig {
        DeConfig {
            bounds: self.bounds(),
            theta_block: match self.mode {
                TimingMode::Prescribed => 0..0,
                TimingMode::Free => self.theta_block(),
            },
            ..base.clone()
        }
    }

    fn check_length(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.dimension() {
            return Err(Error::DesignLength { expected: self.dimension(), found: values.len() });
        }
        Ok(())
    }

    /// Input angles encoded by (or implied by) a design vector.
    pub fn thetas(&self, values: &[f64]) -> Vec<f64> {
        match self.mode {
            TimingMode::Prescribed => self.offsets.iter().map(|o| values[0] + o).collect(),
            TimingMode::Free => values[..self.len()].to_vec(),
        }
    }

    pub fn decode(&self, design: &DesignVector) -> Result<(SphericalFourBar, Vec<f64>)> {
        if design.mode != self.mode {
            return Err(Error::InvalidPath(format!(
                "design is {} timing but problem is {} timing",
                design.mode, self.mode
            )));
        }
        self.decode_values(&design.values)
    }

    fn decode_values(&self, values: &[f64]) -> Result<(SphericalFourBar, Vec<f64>)> {
        self.check_length(values)?;
        let mech = mechanism_from_tail(&values[self.theta_block().end..])?;
        Ok((mech, self.thetas(values)))
    }

    /// Structural error with per-point detail.
    pub fn structural_error(&self, design: &DesignVector) -> Result<EvaluationReport> {
        if design.mode != self.mode {
            return Err(Error::InvalidPath(format!(
                "design is {} timing but problem is {} timing",
                design.mode, self.mode
            )));
        }
        self.check_length(&design.values)?;
        let n = self.len();
        let infeasible_everywhere = || EvaluationReport {
            f_ob: PENALTY + n as f64,
            per_point_errors: vec![f64::NAN; n],
            geodesic_errors: vec![f64::NAN; n],
            feasible: false,
            infeasible_points: n,
        };
        let Ok((mech, thetas)) = self.decode_values(&design.values) else {
            return Ok(infeasible_everywhere());
        };
        let Ok(branch) = mech.select_branch() else {
            return Ok(infeasible_everywhere());
        };
        let mut per_point_errors = Vec::with_capacity(n);
        let mut geodesic_errors = Vec::with_capacity(n);
        let mut infeasible_points = 0;
        for (target, theta) in self.path.points.iter().zip(&thetas) {
            match mech.generated_point(*theta, branch) {
                Ok(p) => {
                    per_point_errors.push(target.distance_squared(&p));
                    geodesic_errors.push(geodesic_error(target, &p));
                }
                Err(_) => {
                    infeasible_points += 1;
                    per_point_errors.push(f64::NAN);
                    geodesic_errors.push(f64::NAN);
                }
            }
        }
        let f_ob =
            if infeasible_points == 0 { per_point_errors.iter().sum() } else { PENALTY + infeasible_points as f64 };
        Ok(EvaluationReport {
            f_ob,
            per_point_errors,
            geodesic_errors,
            feasible: infeasible_points == 0,
            infeasible_points,
        })
    }

    /// Objective value of a raw design vector, as seen by the optimizer.
    pub fn objective(&self, values: &[f64]) -> f64 {
        let n = self.len();
        let Ok((mech, _)) = self.decode_values(values) else {
            return PENALTY + n as f64;
        };
        let Ok(branch) = mech.select_branch() else {
            return PENALTY + n as f64;
        };
        let mut sum = 0.0;
        let mut infeasible = 0usize;
        for (k, target) in self.path.points.iter().enumerate() {
            let theta = match self.mode {
                TimingMode::Prescribed => values[0] + self.offsets[k],
                TimingMode::Free => values[k],
            };
            match mech.generated_point(theta, branch) {
                Ok(p) => sum += target.distance_squared(&p),
                Err(_) => infeasible += 1,
            }
        }
        if infeasible == 0 {
            sum
        } else {
            PENALTY + infeasible as f64
        }
    }
}

fn mechanism_from_tail(tail: &[f64]) -> Result<SphericalFourBar> {
    let [beta, gamma, p1, p2, p3, p4, e1, e2, e3, e4] =
        <[f64; 10]>::try_from(tail).map_err(|_| Error::DesignLength { expected: 10, found: tail.len() })?;
    let coords = [(p1, e1), (p2, e2), (p3, e3), (p4, e4)].map(|(p, e)| JointCoords::new(p, e));
    SphericalFourBar::new(coords, beta, gamma)
}

/// A flat design vector tagged with its timing mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignVector {
    pub mode: TimingMode,
    pub values: Vec<f64>,
}

impl DesignVector {
    pub fn new(mode: TimingMode, values: Vec<f64>) -> Result<Self> {
        let min = match mode {
            TimingMode::Prescribed => 11,
            TimingMode::Free => 13,
        };
        if (mode == TimingMode::Prescribed && values.len() != 11) || values.len() < min {
            return Err(Error::DesignLength { expected: min, found: values.len() });
        }
        Ok(Self { mode, values })
    }

    /// Builds a vector from named parts. `thetas` holds only `theta1` in
    /// prescribed mode.
    pub fn from_parts(
        mode: TimingMode,
        thetas: &[f64],
        beta: f64,
        gamma: f64,
        joints: &[JointCoords; 4],
    ) -> Result<Self> {
        let mut values = thetas.to_vec();
        values.extend([beta, gamma]);
        values.extend(joints.iter().map(|j| j.azimuth));
        values.extend(joints.iter().map(|j| j.colatitude));
        Self::new(mode, values)
    }

    fn tail(&self) -> &[f64] {
        &self.values[self.values.len() - 10..]
    }

    pub fn thetas(&self) -> &[f64] {
        &self.values[..self.values.len() - 10]
    }

    pub fn beta(&self) -> f64 {
        self.tail()[0]
    }

    pub fn gamma(&self) -> f64 {
        self.tail()[1]
    }

    pub fn joint_coords(&self) -> [JointCoords; 4] {
        let t = self.tail();
        [0, 1, 2, 3].map(|k| JointCoords::new(t[2 + k], t[6 + k]))
    }

    pub fn mechanism(&self) -> Result<SphericalFourBar> {
        mechanism_from_tail(self.tail())
    }
}

/// Objective value with per-point breakdown.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub f_ob: f64,
    /// Squared chordal error per point; NaN where unreachable.
    pub per_point_errors: Vec<f64>,
    /// Arc-length error per point; NaN where unreachable.
    pub geodesic_errors: Vec<f64>,
    pub feasible: bool,
    pub infeasible_points: usize,
}
