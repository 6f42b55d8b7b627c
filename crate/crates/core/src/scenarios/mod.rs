//! Built-in catalog of charts, submanifolds and submersion bases with known
//! closed-form geometry.

pub mod embeddings;
mod run;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::comparison::TubeQuadrature;
use crate::error::{Error, Result};
use crate::manifold::{charts, Chart, CurvatureHypothesis, Kappa};
use crate::submanifold::EmbeddedSubmanifold;

pub use run::{random_families, run_checks, run_scenario, verify_ric_k_eigensum, RunOptions};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed-form solution of the Jacobi or Riccati equation.
    ClosedForm,
    /// Elementary geometry (curvature of plane curves, areas).
    Elementary,
    /// Stated in the literature as a sharp case.
    Published,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedValue {
    Equal(f64),
    AtLeast(f64),
    /// No singularity up to the scan horizon.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expected {
    pub quantity: &'static str,
    pub value: ExpectedValue,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub oracle: String,
}

fn expect(quantity: &'static str, value: ExpectedValue, tolerance: f64, provenance: Provenance, oracle: impl Into<String>) -> Expected {
    Expected { quantity, value, tolerance, provenance, oracle: oracle.into() }
}

/// What the scenario is about besides its chart.
#[derive(Debug, Clone)]
pub enum Subject {
    Chart,
    Submanifold(EmbeddedSubmanifold),
    /// Base of a submersion; the conjugate radius is taken at `x`.
    Base { x: Vec<f64>, directions: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Curvature,
    RicEigensum,
    JacobiModel,
    ComparisonLemma,
    FocalRadius,
    SecondFundamentalForm,
    ShapeBound,
    FocalPi2,
    Soul,
    Tube,
    ConjugateRadius,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Curvature,
        CheckKind::RicEigensum,
        CheckKind::JacobiModel,
        CheckKind::ComparisonLemma,
        CheckKind::FocalRadius,
        CheckKind::SecondFundamentalForm,
        CheckKind::ShapeBound,
        CheckKind::FocalPi2,
        CheckKind::Soul,
        CheckKind::Tube,
        CheckKind::ConjugateRadius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Curvature => "curvature",
            CheckKind::RicEigensum => "ric-eigensum",
            CheckKind::JacobiModel => "jacobi-model",
            CheckKind::ComparisonLemma => "comparison-lemma",
            CheckKind::FocalRadius => "focal-radius",
            CheckKind::SecondFundamentalForm => "second-fundamental-form",
            CheckKind::ShapeBound => "shape-bound",
            CheckKind::FocalPi2 => "focal-pi2",
            CheckKind::Soul => "soul",
            CheckKind::Tube => "tube",
            CheckKind::ConjugateRadius => "conjugate-radius",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSpec {
    pub radius: f64,
    pub quadrature: TubeQuadrature,
}

/// Default sampling and grid parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    /// Horizon for focal scans; "infinite" means no focal point before it.
    pub t_max: f64,
    /// Parameter points of the submanifold.
    pub params: Vec<Vec<f64>>,
    /// Normal directions per parameter point in codimension above one.
    pub normals_per_point: usize,
    /// Chart points for curvature sampling.
    pub points: Vec<Vec<f64>>,
    /// Start of the point-source and random families.
    pub lemma_point: Vec<f64>,
    pub lemma_t_max: f64,
    pub grid_start: f64,
    pub grid_step: f64,
    pub random_families: usize,
    pub seed: u64,
    /// Random orthonormal frames per point in the `Ric_k` brute-force check.
    pub ric_trials: usize,
    /// Constant sectional curvature, when the chart is a space form.
    pub constant_curvature: Option<f64>,
    pub tube: Option<TubeSpec>,
    /// Whether soul checks should find no focal point.
    pub soul_expect_infinite: bool,
}

impl Sampling {
    /// Comparison grid from `grid_start` to `lemma_t_max`.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.lemma_t_max - self.grid_start) / self.grid_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.grid_start + i as f64 * self.grid_step).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: &'static str,
    pub description: String,
    pub chart: Chart,
    pub subject: Subject,
    pub hypothesis: CurvatureHypothesis,
    pub expected: Vec<Expected>,
    pub sampling: Sampling,
    pub checks: Vec<CheckKind>,
}

impl Scenario {
    pub fn submanifold(&self) -> Option<&EmbeddedSubmanifold> {
        match &self.subject {
            Subject::Submanifold(s) => Some(s),
            _ => None,
        }
    }
}

/// Numeric overrides from the command line or a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Radius of geodesic spheres.
    pub rho: Option<f64>,
    /// Radius of circles.
    pub radius: Option<f64>,
    pub k: Option<usize>,
    pub t_max: Option<f64>,
    pub tube_radius: Option<f64>,
    pub random_families: Option<usize>,
    pub seed: Option<u64>,
    pub normals_per_point: Option<usize>,
    pub ric_trials: Option<usize>,
}

/// Identifiers of every catalog scenario.
pub const SCENARIO_IDS: [&str; 28] = [
    "euclidean2",
    "euclidean3",
    "sphere2",
    "sphere3",
    "sphere2_half",
    "sphere3_half",
    "hyperbolic2",
    "hyperbolic3",
    "hyperboloid3",
    "flat_torus2",
    "flat_torus3",
    "geodesic_sphere",
    "euclidean_sphere",
    "hyperbolic_sphere",
    "euclidean_plane_circle",
    "circle_in_r3",
    "equator_S2_in_S3",
    "equator_S1_in_S2",
    "great_circle_S3",
    "clifford_torus",
    "flat_torus_circle",
    "flat_torus3_circle",
    "flat_torus_wavy_curve",
    "hopf_base",
    "unit_s2_base",
    "euclidean_base",
    "bumpy3",
    "s2_times_r",
];

/// Every scenario with default parameters.
pub fn catalog() -> Vec<Scenario> {
    SCENARIO_IDS.iter().map(|id| build(id, &Overrides::default()).expect("catalog defaults are valid")).collect()
}

fn default_sampling(t_max: f64, points: Vec<Vec<f64>>) -> Sampling {
    let lemma_point = points[0].clone();
    Sampling {
        t_max,
        params: Vec::new(),
        normals_per_point: 8,
        points,
        lemma_point,
        lemma_t_max: t_max.min(3.0),
        grid_start: 0.1,
        grid_step: 0.05,
        random_families: 100,
        seed: 20240611,
        ric_trials: 10_000,
        constant_curvature: None,
        tube: None,
        soul_expect_infinite: true,
    }
}

fn chart_points(n: usize, scale: f64) -> Vec<Vec<f64>> {
    let base = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [-0.25, 0.4, -0.3], [0.5, 0.1, 0.35]];
    base.iter().map(|p| p[..n].iter().map(|x| x * scale).collect()).collect()
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

struct SpaceForm {
    chart: Chart,
    kappa: Kappa,
    curvature: f64,
    scale: f64,
    t_max: f64,
    fd: bool,
}

fn space_form(id: &str) -> Option<SpaceForm> {
    let sf = |chart, kappa, curvature, scale, t_max, fd| Some(SpaceForm { chart, kappa, curvature, scale, t_max, fd });
    match id {
        "euclidean2" => sf(charts::euclidean(2), Kappa::Zero, 0.0, 1.0, 3.0, false),
        "euclidean3" => sf(charts::euclidean(3), Kappa::Zero, 0.0, 1.0, 3.0, false),
        "flat_torus2" => sf(charts::flat_torus(2), Kappa::Zero, 0.0, 1.0, 3.0, false),
        "flat_torus3" => sf(charts::flat_torus(3), Kappa::Zero, 0.0, 1.0, 3.0, false),
        "sphere2" => sf(charts::sphere(2, 1.0), Kappa::One, 1.0, 1.0, 3.0, false),
        "sphere3" => sf(charts::sphere(3, 1.0), Kappa::One, 1.0, 1.0, 3.0, false),
        "sphere2_half" => sf(charts::sphere(2, 0.5), Kappa::One, 4.0, 1.0, 1.4, false),
        "sphere3_half" => sf(charts::sphere(3, 0.5), Kappa::One, 4.0, 1.0, 1.4, false),
        "hyperbolic2" => sf(charts::hyperbolic_ball(2), Kappa::MinusOne, -1.0, 0.5, 3.0, false),
        "hyperbolic3" => sf(charts::hyperbolic_ball(3), Kappa::MinusOne, -1.0, 0.5, 3.0, false),
        "hyperboloid3" => sf(charts::hyperboloid(3), Kappa::MinusOne, -1.0, 1.0, 3.0, true),
        _ => None,
    }
}

/// Build one scenario, applying overrides.
pub fn build(id: &str, ov: &Overrides) -> Result<Scenario> {
    let takes_rho = matches!(id, "geodesic_sphere" | "euclidean_sphere" | "hyperbolic_sphere");
    let takes_radius = matches!(id, "euclidean_plane_circle" | "circle_in_r3");
    if SCENARIO_IDS.contains(&id) && ((ov.rho.is_some() && !takes_rho) || (ov.radius.is_some() && !takes_radius)) {
        return Err(Error::InvalidInput(format!("scenario {id} takes no {} override", if ov.rho.is_some() { "rho" } else { "radius" })));
    }
    let mut s = build_default(id, ov)?;
    let sm = &mut s.sampling;
    if let Some(t) = ov.t_max {
        sm.t_max = positive("t_max", t)?;
        sm.lemma_t_max = sm.lemma_t_max.min(sm.t_max);
    }
    if let Some(r) = ov.tube_radius {
        let r = positive("tube_radius", r)?;
        match &mut sm.tube {
            Some(t) => t.radius = r,
            None => return Err(Error::InvalidInput(format!("scenario {id} has no tube volume check"))),
        }
    }
    if let Some(n) = ov.random_families {
        sm.random_families = n;
    }
    if let Some(seed) = ov.seed {
        sm.seed = seed;
    }
    if let Some(n) = ov.normals_per_point {
        sm.normals_per_point = n.max(1);
    }
    if let Some(n) = ov.ric_trials {
        sm.ric_trials = n;
    }
    if let Some(k) = ov.k {
        s.hypothesis.k = k;
        s.hypothesis.validate(s.chart.dim())?;
        if let Some(sub) = s.submanifold() {
            if k > sub.param_dim() {
                return Err(Error::KOutOfRange { k, max: sub.param_dim() });
            }
        }
    }
    Ok(s)
}

fn build_default(id: &str, ov: &Overrides) -> Result<Scenario> {
    use ExpectedValue::*;
    use Provenance::*;
    if let Some(sf) = space_form(id) {
        let n = sf.chart.dim();
        let mut sampling = default_sampling(sf.t_max, chart_points(n, sf.scale));
        sampling.constant_curvature = Some(sf.curvature);
        let tol = if sf.fd { 1e-6 } else { 1e-7 };
        let mut checks = vec![CheckKind::Curvature, CheckKind::RicEigensum, CheckKind::ComparisonLemma];
        if !sf.fd {
            checks.insert(2, CheckKind::JacobiModel);
        }
        let oracle = "constant sectional curvature of the model space";
        return Ok(Scenario {
            id: static_id(id),
            description: format!("{} chart, sectional curvature {}", sf.chart.name(), sf.curvature),
            hypothesis: CurvatureHypothesis::new(sf.kappa, 1),
            expected: vec![
                expect("min_sectional_curvature", Equal(sf.curvature), tol, ClosedForm, oracle),
                expect("max_sectional_curvature", Equal(sf.curvature), tol, ClosedForm, oracle),
            ],
            chart: sf.chart,
            subject: Subject::Chart,
            sampling,
            checks,
        });
    }
    let sub_checks = vec![
        CheckKind::FocalRadius,
        CheckKind::SecondFundamentalForm,
        CheckKind::ShapeBound,
        CheckKind::ComparisonLemma,
    ];
    let with_pi2 = {
        let mut c = sub_checks.clone();
        c.push(CheckKind::FocalPi2);
        c
    };
    let scenario = match id {
        "geodesic_sphere" | "euclidean_sphere" | "hyperbolic_sphere" => {
            let rho = positive("rho", ov.rho.unwrap_or(0.7))?;
            let (chart, kappa, a, t_max, ii, ii_oracle) = match id {
                "geodesic_sphere" => {
                    if rho > 1.4 {
                        return Err(Error::InvalidInput(format!("rho = {rho} too large for the stereographic chart (max 1.4)")));
                    }
                    let t_max = 2.0f64.min(PI - rho - 0.2);
                    (charts::sphere(3, 1.0), Kappa::One, (rho / 2.0).tan(), t_max, 1.0 / rho.tan(), "cot(rho)")
                }
                "euclidean_sphere" => (charts::euclidean(3), Kappa::Zero, rho, 2.0 * rho + 1.0, 1.0 / rho, "1/rho"),
                _ => {
                    if rho > 3.0 {
                        return Err(Error::InvalidInput(format!("rho = {rho} too large for the Poincare ball chart (max 3)")));
                    }
                    (charts::hyperbolic_ball(3), Kappa::MinusOne, (rho / 2.0).tanh(), 2.0, 1.0 / rho.tanh(), "coth(rho)")
                }
            };
            let sub = embeddings::coordinate_sphere(id, chart.clone(), a);
            let params = vec![vec![0.5, 0.0], vec![1.2, 2.0], vec![FRAC_PI_2, 4.0], vec![2.3, 5.5]];
            let mut sampling = default_sampling(t_max, vec![sub.point(&params[0])?.as_slice().to_vec()]);
            sampling.params = params;
            sampling.grid_start = 0.05;
            let mut checks = sub_checks.clone();
            if kappa == Kappa::One {
                checks.push(CheckKind::FocalPi2);
            }
            let mut expected = vec![
                expect("focal_radius", Equal(rho), 1e-3, ClosedForm, "inward normal geodesics meet at the center, distance rho"),
                expect("second_fundamental_form", Equal(ii), 1e-3, ClosedForm, format!("distance sphere is umbilic with principal curvature {ii_oracle}")),
                expect("max_abs_partial_trace", Equal(2.0 * ii), 1e-3, ClosedForm, format!("k = 2 principal curvatures {ii_oracle}")),
            ];
            if kappa == Kappa::One {
                expected.push(expect("min_focal_count", AtLeast(1.0), 0.0, ClosedForm, "multiplicity-2 focal point at t = rho"));
            }
            Scenario {
                id: static_id(id),
                description: format!("geodesic sphere of radius {rho} in {}", chart.name()),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(kappa, 2),
                expected,
                sampling,
                checks,
            }
        }
        "euclidean_plane_circle" | "circle_in_r3" => {
            let r = positive("radius", ov.radius.unwrap_or(1.0))?;
            let chart = if id == "circle_in_r3" { charts::euclidean(3) } else { charts::euclidean(2) };
            let sub = embeddings::planar_circle(id, chart.clone(), r);
            let params: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
            let mut sampling = default_sampling(2.0 * r + 0.5, vec![sub.point(&params[0])?.as_slice().to_vec()]);
            sampling.params = params;
            sampling.grid_start = 0.05 * r.min(1.0);
            let mut checks = sub_checks.clone();
            let mut expected = vec![
                expect("focal_radius", Equal(r), 1e-3, Elementary, "normal lines meet at the center"),
                expect("second_fundamental_form", Equal(1.0 / r), 1e-3, Elementary, "curvature of a circle is 1/r"),
            ];
            if id == "euclidean_plane_circle" {
                let h = ov.tube_radius.unwrap_or(r / 2.0);
                sampling.tube = Some(TubeSpec { radius: h, quadrature: TubeQuadrature::uniform(1, 64, 1, 16) });
                checks.push(CheckKind::Tube);
                expected.push(expect(
                    "tube_volume",
                    Equal(4.0 * PI * r * h),
                    0.01 * 4.0 * PI * r * h,
                    Elementary,
                    "annulus area pi((r+h)^2 - (r-h)^2) = 4 pi r h",
                ));
            }
            Scenario {
                id: static_id(id),
                description: format!("circle of radius {r} in {}", chart.name()),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::Zero, 1),
                expected,
                sampling,
                checks,
            }
        }
        "equator_S2_in_S3" => {
            let chart = charts::sphere(3, 1.0);
            let sub = embeddings::coordinate_hyperplane(id, chart.clone(), 3.0);
            let params = vec![vec![0.0, 0.0], vec![0.5, -0.3], vec![1.2, 0.4], vec![-0.8, 1.5]];
            let mut sampling = default_sampling(2.0, vec![vec![0.0; 3]]);
            sampling.params = params;
            sampling.grid_start = 0.05;
            Scenario {
                id: static_id(id),
                description: "totally geodesic great 2-sphere in the unit 3-sphere".into(),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::One, 1),
                expected: vec![
                    expect("focal_radius", Equal(FRAC_PI_2), 1e-3, ClosedForm, "Jacobi blocks cos(t): focal at pi/2"),
                    expect("second_fundamental_form", Equal(0.0), 1e-7, ClosedForm, "great spheres are totally geodesic"),
                    expect("min_focal_count", AtLeast(2.0), 0.0, ClosedForm, "multiplicity 2 at t = +-pi/2"),
                ],
                sampling,
                checks: with_pi2.clone(),
            }
        }
        "equator_S1_in_S2" | "great_circle_S3" => {
            let (chart, axis, m_codim) = if id == "equator_S1_in_S2" { (charts::sphere(2, 1.0), 1, 1) } else { (charts::sphere(3, 1.0), 2, 2) };
            let sub = embeddings::great_circle_line(id, chart.clone(), axis);
            let params: Vec<Vec<f64>> = if m_codim == 1 { vec![vec![0.0], vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]] } else { vec![vec![0.0], vec![-1.0], vec![1.0]] };
            let mut sampling = default_sampling(2.0, vec![vec![0.0; chart.dim()]]);
            sampling.params = params;
            sampling.grid_start = 0.05;
            let mut checks = with_pi2.clone();
            let mut expected = vec![
                expect("focal_radius", Equal(FRAC_PI_2), 1e-3, ClosedForm, "Jacobi blocks cos(t): focal at pi/2"),
                expect("second_fundamental_form", Equal(0.0), 1e-7, ClosedForm, "great circles are geodesics"),
                expect("min_focal_count", AtLeast(1.0), 0.0, ClosedForm, "focal points at t = +-pi/2"),
            ];
            if m_codim == 1 {
                let h = ov.tube_radius.unwrap_or(FRAC_PI_2);
                sampling.tube = Some(TubeSpec { radius: h, quadrature: TubeQuadrature::uniform(1, 64, 1, 24) });
                checks.push(CheckKind::Tube);
                let area = 4.0 * PI * h.sin();
                expected.push(expect("tube_volume", Equal(area), 0.02 * area, ClosedForm, "zone area 4 pi sin(r) = integral of 2 pi cos(t) over [-r, r]"));
            }
            Scenario {
                id: static_id(id),
                description: format!("great circle in {}", chart.name()),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::One, 1),
                expected,
                sampling,
                checks,
            }
        }
        "clifford_torus" => {
            let chart = charts::sphere(3, 1.0);
            let sub = embeddings::clifford_torus(id, chart.clone());
            let odd = [FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4, 7.0 * FRAC_PI_4];
            let params: Vec<Vec<f64>> = odd.iter().flat_map(|a| odd.iter().map(move |b| vec![*a, *b])).collect();
            let mut sampling = default_sampling(2.0, vec![sub.point(&params[0])?.as_slice().to_vec()]);
            sampling.params = params;
            sampling.grid_start = 0.05;
            Scenario {
                id: static_id(id),
                description: "Clifford torus in the unit 3-sphere (stereographic chart)".into(),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::One, 1),
                expected: vec![
                    expect("focal_radius", Equal(FRAC_PI_4), 1e-3, ClosedForm, "Jacobi blocks cos(t) -+ sin(t): focal at pi/4"),
                    expect("second_fundamental_form", Equal(1.0), 1e-3, ClosedForm, "principal curvatures +-1"),
                    expect("max_abs_partial_trace", Equal(1.0), 1e-3, Published, "equality cot(pi/4) = 1 in the k = 1 shape bound"),
                    expect("min_focal_count", AtLeast(2.0), 0.0, ClosedForm, "focal times +-pi/4 inside [-pi/2, pi/2]"),
                ],
                sampling,
                checks: with_pi2.clone(),
            }
        }
        "flat_torus_circle" | "flat_torus3_circle" => {
            let (chart, base, class) = if id == "flat_torus_circle" {
                (charts::flat_torus(2), vec![0.0, 0.3], vec![1.0, 1.0])
            } else {
                (charts::flat_torus(3), vec![0.0, 0.3, 0.6], vec![1.0, 1.0, 0.0])
            };
            let len = class.iter().map(|c| c * c).sum::<f64>().sqrt();
            let sub = embeddings::torus_line(id, chart.clone(), base.clone(), class);
            let mut sampling = default_sampling(50.0, vec![base]);
            sampling.params = vec![vec![0.0], vec![0.25], vec![0.5], vec![0.75]];
            sampling.grid_start = 0.05;
            let mut checks = sub_checks.clone();
            checks.push(CheckKind::Soul);
            let mut expected = vec![
                expect("focal_radius", Unbounded, 0.0, ClosedForm, "flat metric: Jacobi fields along a geodesic are affine"),
                expect("second_fundamental_form", Equal(0.0), 1e-7, ClosedForm, "closed geodesic"),
            ];
            if id == "flat_torus_circle" {
                let r = ov.tube_radius.unwrap_or(0.2);
                sampling.tube = Some(TubeSpec { radius: r, quadrature: TubeQuadrature::uniform(1, 16, 1, 8) });
                checks.push(CheckKind::Tube);
                expected.push(expect("tube_volume", Equal(2.0 * r * len), 0.01 * 2.0 * r * len, Elementary, "flat strip area 2 r L"));
            }
            Scenario {
                id: static_id(id),
                description: format!("closed geodesic of length {len} in {}", chart.name()),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::Zero, 1),
                expected,
                sampling,
                checks,
            }
        }
        "flat_torus_wavy_curve" => {
            let chart = charts::flat_torus(2);
            let amp = 0.05;
            let sub = embeddings::torus_wave(id, chart.clone(), 0.5, amp);
            let curv = amp * 4.0 * PI * PI;
            let mut sampling = default_sampling(2.0, vec![vec![0.0, 0.5]]);
            sampling.params = (0..8).map(|i| vec![i as f64 / 8.0]).collect();
            sampling.grid_start = 0.05;
            sampling.soul_expect_infinite = false;
            let mut checks = sub_checks.clone();
            checks.push(CheckKind::Soul);
            Scenario {
                id: static_id(id),
                description: "non-geodesic closed curve y = 0.5 + 0.05 sin(2 pi x) in the flat 2-torus".into(),
                chart,
                subject: Subject::Submanifold(sub),
                hypothesis: CurvatureHypothesis::new(Kappa::Zero, 1),
                expected: vec![
                    expect("focal_radius", Equal(1.0 / curv), 1e-3, Elementary, "1 / max curvature, curvature 0.05 (2 pi)^2 at the crests"),
                    expect("second_fundamental_form", Equal(curv), 1e-3, Elementary, "plane-curve curvature |y''| at the crests"),
                ],
                sampling,
                checks,
            }
        }
        "hopf_base" | "unit_s2_base" | "euclidean_base" => {
            let (chart, x, kappa, t_max, expected_value, oracle, desc) = match id {
                "hopf_base" => (
                    charts::sphere(2, 0.5),
                    vec![1.0, 0.0],
                    Kappa::One,
                    2.0,
                    Equal(FRAC_PI_2),
                    "curvature 4: sin(2t)/2 vanishes at pi/2",
                    "base S^2(1/2) of the Hopf fibration S^3 -> S^2",
                ),
                "unit_s2_base" => (charts::sphere(2, 1.0), vec![1.0, 0.0], Kappa::One, 3.5, Equal(PI), "sin(t) vanishes at pi", "unit S^2"),
                _ => (charts::euclidean(2), vec![0.0, 0.0], Kappa::Zero, 10.0, Unbounded, "flat: J(t) = t J'(0)", "Euclidean plane"),
            };
            let curvature = match id {
                "hopf_base" => 4.0,
                "unit_s2_base" => 1.0,
                _ => 0.0,
            };
            let mut sampling = default_sampling(t_max, vec![vec![0.0, 0.0], x.clone()]);
            sampling.lemma_t_max = if id == "hopf_base" { 1.4 } else { t_max.min(3.0) };
            sampling.constant_curvature = Some(curvature);
            let provenance = if id == "hopf_base" { Published } else { ClosedForm };
            Scenario {
                id: static_id(id),
                description: desc.into(),
                chart,
                subject: Subject::Base { x, directions: 8 },
                hypothesis: CurvatureHypothesis::new(kappa, 1),
                expected: vec![
                    expect("conjugate_radius", expected_value, 1e-3, provenance, oracle),
                    expect("min_sectional_curvature", Equal(curvature), 1e-7, ClosedForm, "round metric"),
                ],
                sampling,
                checks: vec![CheckKind::Curvature, CheckKind::ConjugateRadius, CheckKind::ComparisonLemma],
            }
        }
        "bumpy3" | "s2_times_r" => {
            let (chart, kappa) = if id == "bumpy3" { (charts::bumpy(3), Kappa::MinusOne) } else { (charts::s2_times_r(), Kappa::Zero) };
            let mut sampling = default_sampling(2.0, chart_points(3, 0.5));
            sampling.lemma_t_max = 2.0;
            let checks = vec![CheckKind::RicEigensum, CheckKind::ComparisonLemma];
            Scenario {
                id: static_id(id),
                description: format!("{} (non-constant curvature)", chart.name()),
                chart,
                subject: Subject::Chart,
                hypothesis: CurvatureHypothesis::new(kappa, if id == "bumpy3" { 1 } else { 2 }),
                expected: Vec::new(),
                sampling,
                checks,
            }
        }
        _ => return Err(Error::UnknownScenario(id.to_string())),
    };
    Ok(scenario)
}

fn static_id(id: &str) -> &'static str {
    SCENARIO_IDS.iter().copied().find(|s| *s == id).expect("id comes from the catalog")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_every_id_once() {
        let cat = catalog();
        assert_eq!(cat.len(), SCENARIO_IDS.len());
        for (s, id) in cat.iter().zip(SCENARIO_IDS) {
            assert_eq!(s.id, id);
            assert!(!s.checks.is_empty(), "{id}");
            assert!(s.hypothesis.validate(s.chart.dim()).is_ok(), "{id}");
        }
    }

    #[test]
    fn check_names_round_trip() {
        for s in catalog() {
            for c in s.checks {
                assert_eq!(CheckKind::from_name(c.name()), Some(c));
            }
        }
        assert_eq!(CheckKind::from_name("nope"), None);
    }

    #[test]
    fn unknown_ids_and_bad_overrides_are_rejected() {
        assert!(matches!(build("nope", &Overrides::default()), Err(Error::UnknownScenario(_))));
        let rho = Overrides { rho: Some(0.5), ..Overrides::default() };
        assert!(build("clifford_torus", &rho).is_err());
        assert!(build("geodesic_sphere", &rho).is_ok());
        let neg = Overrides { t_max: Some(-1.0), ..Overrides::default() };
        assert!(matches!(build("sphere3", &neg), Err(Error::InvalidInput(_))));
        let k = Overrides { k: Some(3), ..Overrides::default() };
        assert!(matches!(build("clifford_torus", &k), Err(Error::KOutOfRange { .. })));
        let tube = Overrides { tube_radius: Some(0.1), ..Overrides::default() };
        assert!(build("sphere3", &tube).is_err());
    }

    #[test]
    fn overrides_apply() {
        let ov = Overrides { seed: Some(7), random_families: Some(3), t_max: Some(1.0), ..Overrides::default() };
        let s = build("sphere3", &ov).unwrap();
        assert_eq!(s.sampling.seed, 7);
        assert_eq!(s.sampling.random_families, 3);
        assert_eq!(s.sampling.t_max, 1.0);
        assert!(s.sampling.lemma_t_max <= 1.0);
    }

    #[test]
    fn tube_expectations_follow_the_radius() {
        let ov = Overrides { tube_radius: Some(0.3), ..Overrides::default() };
        let s = build("euclidean_plane_circle", &ov).unwrap();
        let e = s.expected.iter().find(|e| e.quantity == "tube_volume").unwrap();
        assert_eq!(e.value, ExpectedValue::Equal(4.0 * PI * 0.3));
        assert_eq!(s.sampling.tube.as_ref().unwrap().radius, 0.3);
    }

    #[test]
    fn grid_is_uniform() {
        let s = build("sphere3", &Overrides::default()).unwrap();
        let g = s.sampling.grid();
        assert!(g.len() > 10);
        assert!(g.windows(2).all(|w| (w[1] - w[0] - s.sampling.grid_step).abs() < 1e-12));
    }

    #[test]
    fn random_families_are_seeded() {
        let chart = charts::sphere(3, 1.0);
        let a = run::random_families(&chart, &[0.0; 3], 5, 11).unwrap();
        let b = run::random_families(&chart, &[0.0; 3], 5, 11).unwrap();
        let c = run::random_families(&chart, &[0.0; 3], 5, 12).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.a0_prime(), y.a0_prime());
            assert_eq!(x.start().1, y.start().1);
        }
        assert_ne!(a[0].a0_prime(), c[0].a0_prime());
        assert!(a.iter().all(|f| f.a0_prime() == &f.a0_prime().transpose()));
    }

    #[test]
    fn small_run_is_deterministic() {
        let ov = Overrides { random_families: Some(4), ..Overrides::default() };
        let a = run::run_scenario("euclidean_plane_circle", &ov, run::RunOptions::default()).unwrap();
        let b = run::run_scenario("euclidean_plane_circle", &ov, run::RunOptions { jobs: 3, timings: false }).unwrap();
        assert!(a.pass());
        assert_eq!(crate::report::to_json(&a), crate::report::to_json(&b));
    }
}
