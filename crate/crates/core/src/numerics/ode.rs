//! Dormand–Prince 5(4) integration with its 4th-order continuous extension.

use crate::error::{Error, Result};

/// Relative and absolute error tolerances for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-11 }
    }
}

impl Tolerances {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }
}

/// Accepted integration nodes together with the dense-output interpolant.
///
/// Node times are strictly increasing; evaluating at a node returns the
/// stored state bit for bit.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    // per-interval continuous-extension coefficients (the first one is the left state)
    dense: Vec<[Vec<f64>; 4]>,
    max_error: f64,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest normalized local error estimate over accepted steps (<= 1).
    pub fn error_estimate(&self) -> f64 {
        self.max_error
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }

    /// Evaluate the state at `t`, which must lie within the span.
    pub fn eval(&self, t: f64) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(t, &mut out).then_some(out)
    }

    /// Evaluate into a caller-provided buffer; returns false when `t` is out of span.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> bool {
        let n = self.times.len();
        let span_tol = 1e-12 * (1.0 + self.t_end().abs());
        if !(t >= self.times[0] - span_tol && t <= self.times[n - 1] + span_tol) {
            return false;
        }
        // index of the last node with time <= t
        let idx = match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => {
                out.copy_from_slice(&self.states[i]);
                return true;
            }
            Err(0) => {
                out.copy_from_slice(&self.states[0]);
                return true;
            }
            Err(i) if i >= n => {
                out.copy_from_slice(&self.states[n - 1]);
                return true;
            }
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.times[idx], self.times[idx + 1]);
        let theta = (t - t0) / (t1 - t0);
        let theta1 = 1.0 - theta;
        let y0 = &self.states[idx];
        let [r2, r3, r4, r5] = &self.dense[idx];
        for i in 0..out.len() {
            out[i] = y0[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        true
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 1_000_000;

/// Integrate `y' = rhs(t, y)` over `t_span` with an embedded 5(4) pair.
///
/// `rhs` writes the derivative into its third argument and may fail, for
/// instance when the state leaves a chart domain.
pub fn integrate_ode<F>(rhs: F, y0: &[f64], t_span: (f64, f64), tol: Tolerances) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    integrate_ode_projected(rhs, y0, t_span, tol, |_, _| {})
}

/// As [`integrate_ode`], but `project` is applied to every accepted state
/// (drift correction onto an invariant manifold).
pub fn integrate_ode_projected<F, P>(
    mut rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    tol: Tolerances,
    mut project: P,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    P: FnMut(f64, &mut [f64]),
{
    let (t0, t_end) = t_span;
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidSpan { start: t0, end: t_end });
    }
    let n = y0.len();
    let mut eval = |t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        rhs(t, y, out)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteRhs { t });
        }
        Ok(())
    };

    let mut t = t0;
    let mut y = y0.to_vec();
    project(t, &mut y);
    let mut k1 = vec![0.0; n];
    eval(t, &y, &mut k1)?;

    let mut traj = Trajectory {
        times: vec![t],
        states: vec![y.clone()],
        dense: Vec::new(),
        max_error: 0.0,
    };
    if n == 0 {
        traj.times.push(t_end);
        traj.states.push(Vec::new());
        traj.dense.push(Default::default());
        return Ok(traj);
    }

    let span = t_end - t0;
    let mut h = initial_step(&mut eval, t, &y, &k1, span, tol)?;

    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    for _ in 0..MAX_STEPS {
        if t >= t_end {
            break;
        }
        let last = t + h >= t_end || (t_end - (t + h)) < 1e-12 * span;
        if last {
            h = t_end - t;
        }
        let min_step = 1e-14 * (1.0 + t.abs());
        if h < min_step {
            return Err(Error::StepUnderflow { t, step: h });
        }

        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        eval(t + C2 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        eval(t + C3 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        eval(t + C4 * h, &tmp, &mut k4)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        eval(t + C5 * h, &tmp, &mut k5)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        eval(t + h, &tmp, &mut k6)?;
        for i in 0..n {
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        eval(t + h, &y_new, &mut k7)?;

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            project(t, &mut y_new);
            let mut r2 = vec![0.0; n];
            let mut r3 = vec![0.0; n];
            let mut r4 = vec![0.0; n];
            let mut r5 = vec![0.0; n];
            for i in 0..n {
                r2[i] = y_new[i] - y[i];
                r3[i] = h * k1[i] - r2[i];
                r4[i] = r2[i] - h * k7[i] - r3[i];
                r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            std::mem::swap(&mut y, &mut y_new);
            eval(t, &y, &mut k1)?;
            traj.times.push(t);
            traj.states.push(y.clone());
            traj.dense.push([r2, r3, r4, r5]);
            traj.max_error = traj.max_error.max(err);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
    if t < t_end {
        return Err(Error::StepUnderflow { t, step: h });
    }
    Ok(traj)
}

fn initial_step<F>(eval: &mut F, t: f64, y: &[f64], f0: &[f64], span: f64, tol: Tolerances) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let sc: Vec<f64> = y.iter().map(|v| tol.abs + tol.rel * v.abs()).collect();
    let norm = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt();
    let d0 = norm(y);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; n];
    eval(t + h0, &y1, &mut f1)?;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span))
}
