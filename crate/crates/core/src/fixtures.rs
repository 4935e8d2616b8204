//! Published reference data for the 64-point example path.

/// Desired points, in path order.
pub const TABLE1_POINTS: [[f64; 3]; 64] = [
    [0.85737, -0.18481, 0.48037],
    [0.82985, -0.20167, 0.52030],
    [0.80241, -0.21996, 0.55478],
    [0.77567, -0.23967, 0.58389],
    [0.75011, -0.26056, 0.60785],
    [0.72607, -0.28244, 0.62693],
    [0.70381, -0.30515, 0.64152],
    [0.68352, -0.32833, 0.65193],
    [0.66533, -0.35185, 0.65844],
    [0.64933, -0.37537, 0.66144],
    [0.63559, -0.39867, 0.66115],
    [0.62415, -0.42159, 0.65781],
    [0.61504, -0.44389, 0.65167],
    [0.60833, -0.46541, 0.64293],
    [0.60396, -0.48596, 0.63170],
    [0.60196, -0.50548, 0.61819],
    [0.60230, -0.52381, 0.60241],
    [0.60485, -0.54085, 0.58448],
    [0.60959, -0.55656, 0.56448],
    [0.61637, -0.57081, 0.54244],
    [0.62500, -0.58363, 0.51844],
    [0.63530, -0.59489, 0.49248],
    [0.64700, -0.60456, 0.46467],
    [0.65989, -0.61259, 0.43507],
    [0.67370, -0.61896, 0.40378],
    [0.68811, -0.62363, 0.37093],
    [0.70293, -0.62652, 0.33674],
    [0.71789, -0.62759, 0.30133],
    [0.73274, -0.62678, 0.26500],
    [0.74737, -0.62404, 0.22800],
    [0.76167, -0.61933, 0.19059],
    [0.77544, -0.61256, 0.15307],
    [0.7887, -0.60370, 0.11578],
    [0.80152, -0.59270, 0.07900],
    [0.81378, -0.57959, 0.04311],
    [0.82552, -0.56433, 0.00841],
    [0.83678, -0.54700, -0.02478],
    [0.84759, -0.52763, -0.05611],
    [0.85807, -0.50641, -0.08530],
    [0.86819, -0.48344, -0.11200],
    [0.87804, -0.45889, -0.13596],
    [0.88763, -0.43304, -0.15689],
    [0.89704, -0.40611, -0.17448],
    [0.90626, -0.37837, -0.18848],
    [0.91537, -0.35022, -0.19867],
    [0.92433, -0.32193, -0.20481],
    [0.93322, -0.29396, -0.20667],
    [0.94196, -0.26667, -0.20400],
    [0.95052, -0.24048, -0.19667],
    [0.95885, -0.21581, -0.18441],
    [0.96685, -0.19315, -0.16707],
    [0.97430, -0.17289, -0.14452],
    [0.98096, -0.15541, -0.11656],
    [0.98652, -0.14104, -0.08315],
    [0.99052, -0.13007, -0.04430],
    [0.99244, -0.12263, -0.00019],
    [0.99174, -0.11870, 0.04874],
    [0.98774, -0.11822, 0.10185],
    [0.98000, -0.12085, 0.15807],
    [0.96819, -0.12626, 0.21604],
    [0.95226, -0.13415, 0.27426],
    [0.93252, -0.14411, 0.33115],
    [0.90956, -0.15600, 0.38515],
    [0.88422, -0.16959, 0.43519],
];

/// Prescribed-timing optimum: `theta1, beta, gamma, phi1..phi4, eta1..eta4`.
pub const TABLE2_DESIGN: [f64; 11] =
    [0.48867, 0.23066, 0.47437, 0.000009, 0.38828, 0.19646, 0.97780, 1.57081, 1.46619, 0.66128, 1.34474];

/// Link lengths reported for [`TABLE2_DESIGN`]: input, coupler, output, fixed.
pub const TABLE3_LINK_LENGTHS: [f64; 4] = [0.40142, 0.82033, 0.92503, 0.99484];

/// Free-timing optimum, input angles.
pub const TABLE4_THETAS: [f64; 64] = [
    2.98039e-7, 0.0977871, 0.195564, 0.293198, 0.390854, 0.488426, 0.58619, 0.684141, 0.782192, 0.880383, 0.978634,
    1.07687, 1.17502, 1.27299, 1.37043, 1.4675, 1.5642, 1.66089, 1.7576, 1.85419, 1.95116, 2.04815, 2.14514, 2.2422,
    2.33934, 2.4366, 2.53394, 2.63134, 2.72876, 2.82621, 2.92382, 3.02148, 3.11924, 3.21722, 3.31511, 3.41321, 3.51148,
    3.60982, 3.70845, 3.80714, 3.90616, 4.0052, 4.10437, 4.20389, 4.30343, 4.40325, 4.50295, 4.60259, 4.70184, 4.80104,
    4.89973, 4.99843, 5.09691, 5.19563, 5.29455, 5.39354, 5.49265, 5.59183, 5.69105, 5.7901, 5.88913, 5.98799, 6.08645,
    6.18493,
];

/// Free-timing optimum, remaining coordinates: `beta, gamma, phi1..phi4, eta1..eta4`.
pub const TABLE5_DESIGN: [f64; 10] =
    [0.293895, 0.455927, 3.10628e-6, 0.301721, 0.358277, 1.01732, 1.60055, 1.31837, 0.456631, 1.35054];

/// Reported objective values at full precision.
pub const EXAMPLE1_FOB: f64 = 3.3e-8;
pub const EXAMPLE2_FOB: f64 = 5.7e-6;
/// Reported mean of consecutive free-timing input-angle differences.
pub const EXAMPLE2_MEAN_STEP: f64 = 0.0981734;

/// Free-timing design vector: input angles followed by the remaining coordinates.
pub fn table45_design() -> Vec<f64> {
    TABLE4_THETAS.iter().chain(TABLE5_DESIGN.iter()).copied().collect()
}

/// Every `stride`-th desired point, starting with the first.
pub fn table1_subset(stride: usize) -> Vec<[f64; 3]> {
    TABLE1_POINTS.iter().step_by(stride).copied().collect()
}
