//! Forward kinematics of the spherical 4R linkage.
//!
//! Joints `x1..x4` sit on the unit sphere. The input link `x1x2` turns about
//! `x1` by `theta`, the output link `x4x3` turns about `x4` by `phi`, and the
//! coupler `x2x3` keeps its arc length. A tracer point rides on the coupler
//! at arc `beta` from `x2`, offset sideways by `gamma`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::so3::{clamped_acos, rotate, spherical_angle_at_vertex, wrap_pi, UnitVector3};

/// Azimuth and colatitude of a joint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointCoords {
    pub azimuth: f64,
    pub colatitude: f64,
}

impl JointCoords {
    pub fn new(azimuth: f64, colatitude: f64) -> Self {
        Self { azimuth, colatitude }
    }
}

/// Sign choice in the closed-form input-output equation; the two values are
/// the two assembly modes of the linkage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

pub fn joint_point(azimuth: f64, colatitude: f64) -> UnitVector3 {
    let (sp, cp) = azimuth.sin_cos();
    let (se, ce) = colatitude.sin_cos();
    UnitVector3::new_unchecked([cp * se, sp * se, ce])
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct LinkTrig {
    s1: f64,
    c1: f64,
    s3: f64,
    c3: f64,
    s4: f64,
    c4: f64,
    c2: f64,
}

/// A spherical four-bar linkage with its coupler tracer point.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalFourBar {
    joint_coords: [JointCoords; 4],
    joints: [UnitVector3; 4],
    link_lengths: [f64; 4],
    beta: f64,
    gamma: f64,
    theta0: f64,
    phi0: f64,
    trig: LinkTrig,
}

/// Positions of the moving joints and tracer for one input angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub theta: f64,
    pub phi: f64,
    pub input: UnitVector3,
    pub output: UnitVector3,
    pub generated: UnitVector3,
}

impl SphericalFourBar {
    /// Places the joints, derives link lengths and the initial angles at the
    /// fixed pivots. Fails if an adjacent joint pair is coincident or antipodal.
    pub fn new(joint_coords: [JointCoords; 4], beta: f64, gamma: f64) -> Result<Self> {
        let joints = joint_coords.map(|c| joint_point(c.azimuth, c.colatitude));
        for k in 0..4 {
            let next = (k + 1) % 4;
            if joints[k].is_parallel(&joints[next]) {
                return Err(Error::DegenerateMechanism(k + 1, next + 1));
            }
        }
        let link_lengths = [0, 1, 2, 3].map(|k| joints[k].angle_to(&joints[(k + 1) % 4]));
        let [x1, x2, x3, x4] = joints;
        let theta0 = spherical_angle_at_vertex(&x1, &x4, &x2)?;
        let phi0 = spherical_angle_at_vertex(&x4, &x1, &x3)?;
        let [a1, a2, a3, a4] = link_lengths;
        let trig = LinkTrig {
            s1: a1.sin(),
            c1: x1.dot(&x2),
            s3: a3.sin(),
            c3: x3.dot(&x4),
            s4: a4.sin(),
            c4: x4.dot(&x1),
            c2: a2.cos(),
        };
        Ok(Self { joint_coords, joints, link_lengths, beta, gamma, theta0, phi0, trig })
    }

    pub fn joint_coords(&self) -> &[JointCoords; 4] {
        &self.joint_coords
    }

    pub fn joints(&self) -> &[UnitVector3; 4] {
        &self.joints
    }

    /// `(input, coupler, output, fixed)` arc lengths.
    pub fn link_lengths(&self) -> [f64; 4] {
        self.link_lengths
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Angle at `x1` from the fixed link to the input link.
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Angle at `x4` from the fixed link to the output link.
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn input_point(&self, theta: f64) -> UnitVector3 {
        rotate(&self.joints[1], theta, &self.joints[0])
    }

    pub fn output_point(&self, phi: f64) -> UnitVector3 {
        rotate(&self.joints[2], phi, &self.joints[3])
    }

    /// Coefficients `(A, B, C)` of `A sin u + B cos u = C`-type closure in the
    /// output angle, for input angle `theta`.
    fn closure_coefficients(&self, theta: f64) -> (f64, f64, f64) {
        let t = &self.trig;
        let (s, c) = (theta + self.theta0).sin_cos();
        let a = t.s1 * t.s3 * s;
        let b = t.c1 * t.s3 * t.s4 - t.s1 * t.s3 * t.c4 * c;
        let cc = t.s1 * t.c3 * t.s4 * c + t.c1 * t.c3 * t.c4 - t.c2;
        (a, b, cc)
    }

    pub fn discriminant(&self, theta: f64) -> f64 {
        let (a, b, c) = self.closure_coefficients(theta);
        a * a + b * b - c * c
    }

    /// Output rotation angle for input angle `theta` from the closed-form
    /// tangent half-angle solution, in `(-π, π]`.
    ///
    /// The closed form measures the output angle clockwise about `x4`; it is
    /// negated here so that `output_point(phi)` is an active rotation of `x3`
    /// about `x4`, matching `input_point`.
    pub fn output_angle_analytic(&self, theta: f64, branch: Branch) -> Result<f64> {
        let (a, b, c) = self.closure_coefficients(theta);
        let mut disc = a * a + b * b - c * c;
        if disc < 0.0 {
            // Tangency at a dead point can round to a tiny negative value.
            if disc < -1e-14 {
                return Err(Error::InfeasibleConfiguration { theta, discriminant: disc });
            }
            disc = 0.0;
        }
        let den = c - b;
        if den.abs() < 1e-12 {
            return Err(Error::SingularConfiguration(theta));
        }
        let half = ((a + branch.sign() * disc.sqrt()) / den).atan();
        Ok(wrap_pi(2.0 * half - self.phi0))
    }

    /// Solves the coupler-length closure numerically for the root nearest
    /// `phi_guess`, using a bracketed secant/bisection hybrid.
    pub fn output_angle_numeric(&self, theta: f64, phi_guess: f64) -> Result<f64> {
        let r2 = self.input_point(theta);
        let target = self.joints[1].dot(&self.joints[2]);
        let g = |phi: f64| r2.dot(&self.output_point(phi)) - target;

        let step = PI / 180.0;
        let mut bracket = None;
        let g0 = g(phi_guess);
        if g0 == 0.0 {
            return Ok(phi_guess);
        }
        let (mut up_x, mut up_g) = (phi_guess, g0);
        let (mut dn_x, mut dn_g) = (phi_guess, g0);
        for _ in 0..180 {
            let x = up_x + step;
            let gx = g(x);
            if gx == 0.0 {
                return Ok(x);
            }
            if gx.signum() != up_g.signum() {
                bracket = Some((up_x, up_g, x, gx));
                break;
            }
            (up_x, up_g) = (x, gx);
            let x = dn_x - step;
            let gx = g(x);
            if gx == 0.0 {
                return Ok(x);
            }
            if gx.signum() != dn_g.signum() {
                bracket = Some((x, gx, dn_x, dn_g));
                break;
            }
            (dn_x, dn_g) = (x, gx);
        }
        let (mut lo, mut g_lo, mut hi, mut g_hi) = bracket.ok_or(Error::NoConvergence(phi_guess))?;

        let mut best = if g_lo.abs() < g_hi.abs() { (lo, g_lo) } else { (hi, g_hi) };
        let mut force_bisect = false;
        for _ in 0..64 {
            let width = hi - lo;
            if width <= 1e-14 || best.1.abs() <= 1e-16 {
                break;
            }
            let secant = lo - g_lo * width / (g_hi - g_lo);
            let x = if !force_bisect && secant > lo && secant < hi { secant } else { 0.5 * (lo + hi) };
            let gx = g(x);
            if gx.abs() < best.1.abs() {
                best = (x, gx);
            }
            if gx == 0.0 {
                break;
            }
            if gx.signum() == g_lo.signum() {
                (lo, g_lo) = (x, gx);
            } else {
                (hi, g_hi) = (x, gx);
            }
            force_bisect = hi - lo > 0.5 * width;
        }
        if best.1.abs() <= 1e-12 {
            Ok(best.0)
        } else {
            Err(Error::NoConvergence(phi_guess))
        }
    }

    /// Input point, output point and unit normal of the coupler plane.
    fn coupler_frame(&self, theta: f64, branch: Branch) -> Result<(f64, UnitVector3, UnitVector3, UnitVector3)> {
        let phi = self.output_angle_analytic(theta, branch)?;
        let r2 = self.input_point(theta);
        let r3 = self.output_point(phi);
        if r2.is_parallel(&r3) {
            return Err(Error::DegenerateCoupler(theta));
        }
        let n23 = UnitVector3::from_array(r2.cross(&r3)).map_err(|_| Error::DegenerateCoupler(theta))?;
        Ok((phi, r2, r3, n23))
    }

    /// Point at arc `nu` from the input joint along the coupler's great circle.
    pub fn coupler_point(&self, theta: f64, nu: f64, branch: Branch) -> Result<UnitVector3> {
        let (_, r2, _, n23) = self.coupler_frame(theta, branch)?;
        Ok(rotate(&r2, nu, &n23))
    }

    pub fn generated_point(&self, theta: f64, branch: Branch) -> Result<UnitVector3> {
        self.pose(theta, branch).map(|p| p.generated)
    }

    pub fn pose(&self, theta: f64, branch: Branch) -> Result<Pose> {
        let (phi, r2, r3, n23) = self.coupler_frame(theta, branch)?;
        let anchor = rotate(&r2, self.beta, &n23);
        let offset = rotate(&r2, self.beta + self.gamma, &n23);
        let generated = rotate(&offset, FRAC_PI_2, &anchor);
        Ok(Pose { theta, phi, input: r2, output: r3, generated })
    }

    /// The branch that reproduces the assembly configuration at `theta = 0`.
    pub fn select_branch(&self) -> Result<Branch> {
        let x3 = self.joints[2];
        [Branch::Plus, Branch::Minus]
            .into_iter()
            .find(|&b| {
                self.output_angle_analytic(0.0, b)
                    .map(|phi| self.output_point(phi).distance_squared(&x3).sqrt() <= 1e-6)
                    .unwrap_or(false)
            })
            .ok_or(Error::NoValidBranch)
    }
}

/// Mobility test on link arc lengths: fold each into `[0, π/2]` with
/// `min(α, π - α)`, then require shortest + longest ≤ sum of the other two.
pub fn grashof_check(link_lengths: &[f64; 4]) -> bool {
    let mut folded = link_lengths.map(|a| a.min(PI - a));
    folded.sort_by(f64::total_cmp);
    folded[0] + folded[3] <= folded[1] + folded[2] + 1e-12
}

/// Minimum of the closure discriminant over a full input revolution, from
/// link lengths alone. Non-negative means the input link turns fully.
pub fn min_discriminant(link_lengths: &[f64; 4], samples: usize) -> f64 {
    let [a1, a2, a3, a4] = *link_lengths;
    (0..samples)
        .map(|k| {
            let u = 2.0 * PI * k as f64 / samples as f64;
            let a = a1.sin() * a3.sin() * u.sin();
            let b = a1.cos() * a3.sin() * a4.sin() - a1.sin() * a3.sin() * a4.cos() * u.cos();
            let c = a1.sin() * a3.cos() * a4.sin() * u.cos() + a1.cos() * a3.cos() * a4.cos() - a2.cos();
            a * a + b * b - c * c
        })
        .fold(f64::INFINITY, f64::min)
}

/// Arc length between consecutive joints, for reports.
pub fn link_length(a: &UnitVector3, b: &UnitVector3) -> f64 {
    clamped_acos(a.dot(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coords(v: [f64; 8]) -> [JointCoords; 4] {
        [0, 1, 2, 3].map(|k| JointCoords::new(v[k], v[k + 4]))
    }

    fn example1() -> SphericalFourBar {
        SphericalFourBar::new(
            coords([0.000009, 0.38828, 0.19646, 0.97780, 1.57081, 1.46619, 0.66128, 1.34474]),
            0.23066,
            0.47437,
        )
        .unwrap()
    }

    fn dist(a: &UnitVector3, b: &UnitVector3) -> f64 {
        a.distance_squared(b).sqrt()
    }

    #[test]
    fn joint_point_poles_and_equator() {
        assert_eq!(joint_point(0.0, FRAC_PI_2).x(), 1.0);
        assert!(dist(&joint_point(0.0, FRAC_PI_2), &UnitVector3::X) < 1e-16);
        assert!(dist(&joint_point(2.7, 0.0), &UnitVector3::Z) < 1e-16);
    }

    #[test]
    fn example1_link_lengths() {
        let m = example1();
        let expected = [0.40142, 0.82033, 0.92503, 0.99484];
        for (a, e) in m.link_lengths().iter().zip(expected) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-3);
        }
        assert!(grashof_check(&m.link_lengths()));
        assert_eq!(m.select_branch().unwrap(), Branch::Plus);
    }

    #[test]
    fn coincident_joints_rejected() {
        let c = coords([0.3, 0.3, 1.0, 2.0, 1.0, 1.0, 1.2, 0.5]);
        assert_eq!(SphericalFourBar::new(c, 0.0, 0.0), Err(Error::DegenerateMechanism(1, 2)));
        let c = coords([0.3, 0.8, 1.0, 0.3 + PI, 1.0, 1.0, 1.2, PI - 1.0]);
        assert_eq!(SphericalFourBar::new(c, 0.0, 0.0), Err(Error::DegenerateMechanism(4, 1)));
    }

    #[test]
    fn input_and_output_assembly() {
        let m = example1();
        let [x1, x2, x3, x4] = *m.joints();
        assert_eq!(m.input_point(0.0), x2);
        assert!(dist(&m.input_point(2.0 * PI), &x2) < 1e-12);
        assert_eq!(m.output_point(0.0), x3);
        assert!(dist(&m.output_point(2.0 * PI), &x3) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (c1, c3) = (m.link_lengths()[0].cos(), m.link_lengths()[2].cos());
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            assert!((x1.dot(&m.input_point(t)) - c1).abs() < 1e-12);
            assert!((x4.dot(&m.output_point(t)) - c3).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_closure_at_first_point() {
        let m = example1();
        let [_, x2, x3, _] = *m.joints();
        let theta = 0.48867;
        let phi = m.output_angle_analytic(theta, Branch::Plus).unwrap();
        let residual = m.input_point(theta).dot(&m.output_point(phi)) - x2.dot(&x3);
        assert!(residual.abs() <= 1e-9, "{residual}");
        let numeric = m.output_angle_numeric(theta, phi + 0.05).unwrap();
        assert!(wrap_pi(numeric - phi).abs() <= 1e-9);
    }

    #[test]
    fn generated_point_matches_first_target() {
        let m = example1();
        let p = m.generated_point(0.48867, Branch::Plus).unwrap();
        let expected = [0.85737, -0.18481, 0.48037];
        for (a, e) in p.to_array().iter().zip(expected) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-2);
        }
    }

    #[test]
    fn numeric_assembly_closure() {
        let m = example1();
        let phi = m.output_angle_numeric(0.0, 0.01).unwrap();
        assert!(dist(&m.output_point(phi), &m.joints()[2]) < 1e-9);
    }

    // A short coupler cannot bridge the input and output joints for inputs
    // far from the assembly position.
    fn short_coupler() -> SphericalFourBar {
        SphericalFourBar::new(coords([0.0, 0.4, 0.6, 1.2, FRAC_PI_2, 1.2, 1.2, FRAC_PI_2]), 0.1, 0.1).unwrap()
    }

    #[test]
    fn infeasible_configuration_reported() {
        let m = short_coupler();
        assert!(m.output_angle_analytic(0.0, Branch::Plus).is_ok());
        for branch in [Branch::Plus, Branch::Minus] {
            assert!(matches!(m.output_angle_analytic(PI, branch), Err(Error::InfeasibleConfiguration { .. })));
            assert!(matches!(m.generated_point(PI, branch), Err(Error::InfeasibleConfiguration { .. })));
        }
        assert_eq!(m.output_angle_numeric(PI, 0.0), Err(Error::NoConvergence(0.0)));
        assert!(!grashof_check(&m.link_lengths()) || min_discriminant(&m.link_lengths(), 720) < 0.0);
    }

    #[test]
    fn collinear_frame_has_no_valid_branch() {
        // x1, x4 and x3 on the equator with x4 between: the half-angle
        // denominator vanishes at assembly.
        let m = SphericalFourBar::new(coords([0.0, 0.2, 1.8, 1.0, FRAC_PI_2, 1.0, FRAC_PI_2, FRAC_PI_2]), 0.0, 0.0)
            .unwrap();
        assert_abs_diff_eq!(m.phi0().abs(), PI, epsilon = 1e-12);
        assert_eq!(m.select_branch(), Err(Error::NoValidBranch));
    }

    #[test]
    fn double_root_either_branch() {
        // Coupler and output link stretched along one great circle: the
        // assembly is a dead point and both signs give the same output.
        let m = SphericalFourBar::new(coords([0.0, 0.6, 1.1, 1.6, 1.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2]), 0.0, 0.0)
            .unwrap();
        let d0 = m.discriminant(0.0);
        assert!(d0.abs() < 1e-12, "{d0}");
        let p = m.output_angle_analytic(0.0, Branch::Plus).unwrap();
        let q = m.output_angle_analytic(0.0, Branch::Minus).unwrap();
        assert!(wrap_pi(p - q).abs() < 1e-6);
        assert!(m.select_branch().is_ok());
    }

    #[test]
    fn coupler_point_endpoints() {
        let m = example1();
        let a2 = m.link_lengths()[1];
        for theta in [0.0, 0.7, 2.5, 4.0] {
            let r2 = m.coupler_point(theta, 0.0, Branch::Plus).unwrap();
            assert_eq!(r2, m.input_point(theta));
            let phi = m.output_angle_analytic(theta, Branch::Plus).unwrap();
            let r3 = m.coupler_point(theta, a2, Branch::Plus).unwrap();
            assert!(dist(&r3, &m.output_point(phi)) < 1e-10);
            for nu in [0.3, 1.0, 2.9] {
                let cp = m.coupler_point(theta, nu, Branch::Plus).unwrap();
                assert!((r2.dot(&cp) - nu.cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_offset_tracer_sits_on_coupler() {
        let c = *example1().joint_coords();
        let m = SphericalFourBar::new(c, 0.4, 0.0).unwrap();
        for theta in [0.0, 1.0, 3.0] {
            let g = m.generated_point(theta, Branch::Plus).unwrap();
            let cp = m.coupler_point(theta, 0.4, Branch::Plus).unwrap();
            assert!(dist(&g, &cp) < 1e-15);
        }
    }

    const TABLE3: [f64; 4] = [0.40142, 0.82033, 0.92503, 0.99484];

    fn min_discriminant_at(l: &[f64; 4], u: f64) -> f64 {
        let [a1, a2, a3, a4] = *l;
        let a = a1.sin() * a3.sin() * u.sin();
        let b = a1.cos() * a3.sin() * a4.sin() - a1.sin() * a3.sin() * a4.cos() * u.cos();
        let c = a1.sin() * a3.cos() * a4.sin() * u.cos() + a1.cos() * a3.cos() * a4.cos() - a2.cos();
        a * a + b * b - c * c
    }

    #[test]
    fn grashof_cases() {
        assert!(grashof_check(&TABLE3));
        assert!(grashof_check(&[FRAC_PI_2; 4]));
        assert!(min_discriminant(&TABLE3, 3600) >= 0.0);
        // Folded lengths (0.1, 0.1416, 0.2, 0.2) pass the rule, yet a 3.0 rad
        // coupler can never span the at most 0.5 rad between its ends: the
        // sweep shows no assembly at any input angle.
        let lengths = [0.1, 3.0, 0.2, 0.2];
        assert!(grashof_check(&lengths));
        assert!(min_discriminant(&lengths, 3600) < 0.0);
        assert!((0..360).all(|k| {
            let u = 2.0 * PI * k as f64 / 360.0;
            min_discriminant_at(&lengths, u) < 0.0
        }));
        assert!(!grashof_check(&[0.1, 0.2, 0.9, 0.3]));
        assert!(min_discriminant(&[0.1, 0.2, 0.9, 0.3], 3600) < 0.0);
    }

    fn arb_coords() -> impl Strategy<Value = ([f64; 8], f64, f64)> {
        (proptest::array::uniform4(0.0..2.0 * PI), proptest::array::uniform4(0.05..PI - 0.05), 0.0..2.0 * PI, -PI..PI)
            .prop_map(|(p, e, b, g)| ([p[0], p[1], p[2], p[3], e[0], e[1], e[2], e[3]], b, g))
    }

    proptest! {
        #[test]
        fn invariants_hold(input in arb_coords(), theta in 0.0..2.0 * PI) {
            let (v, beta, gamma) = input;
            let Ok(m) = SphericalFourBar::new(coords(v), beta, gamma) else { return Ok(()) };
            for k in 0..4 {
                let x = joint_point(v[k], v[k + 4]);
                prop_assert!(dist(&x, &m.joints()[k]) <= 1e-12);
                let a = m.link_lengths()[k];
                prop_assert!(a > 0.0 && a < PI);
                prop_assert!((a - link_length(&m.joints()[k], &m.joints()[(k + 1) % 4])).abs() <= 1e-12);
            }
            let Ok(branch) = m.select_branch() else { return Ok(()) };
            if let Ok(pose) = m.pose(theta, branch) {
                let [_, x2, x3, _] = *m.joints();
                prop_assert!((pose.input.dot(&pose.output) - x2.dot(&x3)).abs() <= 1e-10);
                for p in [pose.input, pose.output, pose.generated] {
                    prop_assert!((p.norm() - 1.0).abs() <= 1e-12);
                }
                let anchor = m.coupler_point(theta, beta, branch).unwrap();
                prop_assert!((anchor.dot(&pose.generated) - gamma.cos()).abs() <= 1e-10);
            }
        }
    }
}
