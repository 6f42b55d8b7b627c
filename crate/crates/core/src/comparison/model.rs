//! Constant-curvature model functions.

use crate::error::{Error, Result};
use crate::manifold::Kappa;

/// `sn_κ`: `sin t`, `t` or `sinh t`.
pub fn sn_kappa(kappa: Kappa, t: f64) -> f64 {
    match kappa {
        Kappa::One => t.sin(),
        Kappa::Zero => t,
        Kappa::MinusOne => t.sinh(),
    }
}

/// `cs_κ = sn_κ'`.
pub fn cs_kappa(kappa: Kappa, t: f64) -> f64 {
    match kappa {
        Kappa::One => t.cos(),
        Kappa::Zero => 1.0,
        Kappa::MinusOne => t.cosh(),
    }
}

/// `ct_κ = sn_κ' / sn_κ`: `cot t`, `1/t` or `coth t`.
pub fn ct_kappa(kappa: Kappa, t: f64) -> Result<f64> {
    let sn = sn_kappa(kappa, t);
    let pole = match kappa {
        Kappa::One => {
            let r = (t / std::f64::consts::PI).round();
            (t - r * std::f64::consts::PI).abs() < 1e-300_f64.max(f64::EPSILON * t.abs())
        }
        _ => t == 0.0,
    };
    if pole || sn == 0.0 {
        return Err(Error::PoleAtT { t });
    }
    Ok(match kappa {
        Kappa::One => 1.0 / t.tan(),
        Kappa::Zero => 1.0 / t,
        Kappa::MinusOne => 1.0 / t.tanh(),
    })
}

/// Solutions `c1·sn_κ(t) + c2·cs_κ(t)` of `f'' + κ f = 0`.
pub fn model_jacobi(kappa: Kappa, c1: f64, c2: f64, t: f64) -> f64 {
    c1 * sn_kappa(kappa, t) + c2 * cs_kappa(kappa, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// `ct_κ(t − t0 + φ)`.
    Ct(f64),
    /// `tanh(t − t0 + φ)` (κ = −1, |λ0| < 1).
    Tanh(f64),
    Constant(f64),
}

/// The solution of `λ' + λ² + κ = 0` through `λ(t0) = λ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiModel {
    pub kappa: Kappa,
    pub t0: f64,
    pub lambda0: f64,
    branch: Branch,
    blowup: Option<f64>,
}

impl RiccatiModel {
    pub fn new(kappa: Kappa, lambda0: f64, t0: f64) -> Self {
        let branch = match kappa {
            Kappa::One => Branch::Ct(1f64.atan2(lambda0)),
            Kappa::Zero if lambda0 == 0.0 => Branch::Constant(0.0),
            Kappa::Zero => Branch::Ct(1.0 / lambda0),
            Kappa::MinusOne if lambda0.abs() == 1.0 => Branch::Constant(lambda0),
            Kappa::MinusOne if lambda0.abs() > 1.0 => Branch::Ct((1.0 / lambda0).atanh()),
            Kappa::MinusOne => Branch::Tanh(lambda0.atanh()),
        };
        let blowup = match (kappa, branch) {
            (Kappa::One, Branch::Ct(phi)) => Some(t0 + std::f64::consts::PI - phi),
            (_, Branch::Ct(phi)) if phi < 0.0 => Some(t0 - phi),
            _ => None,
        };
        RiccatiModel { kappa, t0, lambda0, branch, blowup }
    }

    /// First time after `t0` where the solution tends to `−∞`.
    pub fn blowup(&self) -> Option<f64> {
        self.blowup
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if let Some(b) = self.blowup {
            if t >= b {
                return Err(Error::BeyondBlowup { t, blowup: b });
            }
        }
        let s = t - self.t0;
        match self.branch {
            Branch::Constant(c) => Ok(c),
            Branch::Tanh(phi) => Ok((s + phi).tanh()),
            Branch::Ct(phi) => ct_kappa(self.kappa, s + phi),
        }
    }
}

/// `λ̃(t)` for the solution through `(t0, λ0)`.
pub fn riccati_model(kappa: Kappa, lambda0: f64, t0: f64, t: f64) -> Result<f64> {
    RiccatiModel::new(kappa, lambda0, t0).eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn model_cotangents() {
        assert!((ct_kappa(Kappa::One, FRAC_PI_4).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ct_kappa(Kappa::Zero, 2.0).unwrap(), 0.5);
        assert!(ct_kappa(Kappa::MinusOne, 20.0).unwrap() - 1.0 < 1e-8);
        assert!(matches!(ct_kappa(Kappa::Zero, 0.0), Err(Error::PoleAtT { .. })));
        assert!(matches!(ct_kappa(Kappa::One, 0.0), Err(Error::PoleAtT { .. })));
    }

    #[test]
    fn riccati_examples() {
        for t in [0.0, 0.5, 3.0] {
            assert!((riccati_model(Kappa::Zero, 0.5, 0.0, t).unwrap() - 1.0 / (t + 2.0)).abs() < 1e-14);
            assert_eq!(riccati_model(Kappa::Zero, 0.0, 0.0, t).unwrap(), 0.0);
        }
        for t in [0.0, 0.3, 1.2] {
            assert!((riccati_model(Kappa::One, 0.0, 0.0, t).unwrap() + t.tan()).abs() < 1e-12);
        }
        let m = RiccatiModel::new(Kappa::One, 0.0, 0.0);
        assert!((m.blowup().unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(matches!(m.eval(2.0), Err(Error::BeyondBlowup { .. })));
    }

    #[test]
    fn hyperbolic_branches() {
        assert_eq!(riccati_model(Kappa::MinusOne, 1.0, 0.0, 5.0).unwrap(), 1.0);
        assert!((riccati_model(Kappa::MinusOne, 0.0, 0.0, 0.7).unwrap() - 0.7f64.tanh()).abs() < 1e-15);
        let m = RiccatiModel::new(Kappa::MinusOne, -2.0, 1.0);
        let b = m.blowup().unwrap();
        assert!(b > 1.0 && m.eval(b - 1e-6).unwrap() < -1e5);
        assert!(RiccatiModel::new(Kappa::MinusOne, 2.0, 0.0).blowup().is_none());
    }

    #[test]
    fn model_jacobi_solves_the_equation() {
        for kappa in [Kappa::One, Kappa::Zero, Kappa::MinusOne] {
            let f = |t| model_jacobi(kappa, 0.7, -0.3, t);
            let h = 1e-4;
            for t in [0.2, 1.0, 2.5] {
                let second = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
                assert!((second + kappa.value() * f(t)).abs() < 1e-5);
            }
        }
    }

    proptest! {
        #[test]
        fn ct_is_odd_and_decreasing(t in 0.01f64..3.0, dt in 0.001f64..0.1) {
            for kappa in [Kappa::One, Kappa::Zero, Kappa::MinusOne] {
                if kappa == Kappa::One && t + dt >= std::f64::consts::PI { continue; }
                let a = ct_kappa(kappa, t).unwrap();
                prop_assert!((a + ct_kappa(kappa, -t).unwrap()).abs() < 1e-9 * a.abs().max(1.0));
                prop_assert!(ct_kappa(kappa, t + dt).unwrap() < a);
            }
        }

        #[test]
        fn riccati_model_satisfies_ode(kappa_i in -1i32..=1, lambda0 in -3.0f64..3.0, t0 in -1.0f64..1.0, s in 0.05f64..1.0) {
            let kappa = Kappa::from_i32(kappa_i).unwrap();
            let m = RiccatiModel::new(kappa, lambda0, t0);
            prop_assert!((m.eval(t0).unwrap() - lambda0).abs() < 1e-9 * lambda0.abs().max(1.0));
            let t = t0 + s;
            if m.blowup().is_none_or(|b| t + 1e-3 < b) {
                let h = 1e-6;
                let d = (m.eval(t + h).unwrap() - m.eval(t - h).unwrap()) / (2.0 * h);
                let l = m.eval(t).unwrap();
                prop_assert!((d + l * l + kappa.value()).abs() < 1e-4 * (1.0 + l * l));
            }
        }
    }
}
