//! Causal quantities: the average causal effect from interventional data, the
//! classical observational lower bound, the quantum causal effect and its
//! observational lower bound, the analytic mirror-geometry cross-check, and
//! the bundled report.

use crate::error::Result;
use crate::measurement::observable;
use crate::qmath::ComplexMatrix;
use crate::scalar::Scalar;
use crate::scenario::{
    do_quantum, observed_quantum, DoDistribution, ObservedDistribution, Settings,
};
use crate::states::{pure_state, TwoQubitState};

/// Bundle of the causal bounds for one state and settings: raw values, their
/// clamped-at-zero counterparts used in plots, the violation gap
/// (raw classical bound minus the quantum causal effect), and the zeta term
/// of the quantum bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AceReport<T> {
    pub cace_lb_raw: T,
    pub cace_lb: T,
    pub qace: T,
    pub qace_lb_raw: T,
    pub qace_lb: T,
    pub gap: T,
    pub zeta: T,
}

/// Average causal effect: max over a, a', b of |p(b|do(a)) - p(b|do(a'))|.
pub fn ace_from_do<T: Scalar>(d: &DoDistribution<T>) -> T {
    let mut best = T::zero();
    for a in 0..2 {
        for a2 in 0..2 {
            for b in 0..2 {
                best = best.max((d.p(a, b) - d.p(a2, b)).abs());
            }
        }
    }
    best
}

/// Classical observational lower bound on the ACE:
/// 2 p(0,0|0) + p(1,1|0) + p(0,1|1) + p(1,1|1) - 2 (raw, may be negative).
pub fn cace_lb<T: Scalar>(p: &ObservedDistribution<T>) -> T {
    T::lit(2.0) * p.p(0, 0, 0) + p.p(0, 1, 1) + p.p(1, 0, 1) + p.p(1, 1, 1) - T::lit(2.0)
}

/// Quantum average causal effect of the model: the ACE of its interventional
/// distribution.
pub fn qace<T: Scalar>(rho: &TwoQubitState<T>, s: &Settings<T>) -> Result<T> {
    Ok(ace_from_do(&do_quantum(rho, s)?))
}

/// Value and diagnostics of the quantum observational lower bound. The
/// radicands are reported before clamping; a negative radicand is clamped to
/// zero under the square root so the bound stays real and conservative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QaceLowerBound<T> {
    pub value: T,
    pub zeta: T,
    pub radicand_plus: T,
    pub radicand_minus: T,
}

/// Quantum observational lower bound on the ACE:
/// sum_x (p(0,0|x) + p(1,1|x)) - zeta - 1, with
/// zeta = min over sign of sqrt( prod_a [1 +/- sum_x (-1)^x (p(a,0|x) - p(a,1|x))] ).
pub fn qace_lb<T: Scalar>(p: &ObservedDistribution<T>) -> QaceLowerBound<T> {
    let mut agree = T::zero();
    for x in 0..2 {
        agree += p.p(x, 0, 0) + p.p(x, 1, 1);
    }
    let mut s = [T::zero(); 2];
    for a in 0..2 {
        for x in 0..2 {
            let signed = p.p(x, a, 0) - p.p(x, a, 1);
            if x == 0 {
                s[a] += signed;
            } else {
                s[a] -= signed;
            }
        }
    }
    let one = T::one();
    let radicand_plus = (one + s[0]) * (one + s[1]);
    let radicand_minus = (one - s[0]) * (one - s[1]);
    let zeta = radicand_plus
        .max(T::zero())
        .sqrt()
        .min(radicand_minus.max(T::zero()).sqrt());
    QaceLowerBound {
        value: agree - zeta - one,
        zeta,
        radicand_plus,
        radicand_minus,
    }
}

/// Closed-form classical bound for the mirror geometry phi1 = -phi0,
/// theta1 = -pi/2 on the pure state of angle alpha:
/// (1/4)(-3 + <I (x) N(phi0)> + <M(theta0) (x) I> - 2 <I (x) N(phi1)> + f)
/// with f = 3 cos(theta0) cos(phi0) + sin(2 alpha) sin(phi0) (2 + sin(theta0)).
/// Must agree with the Born-rule pipeline.
pub fn cace_lb_analytic_ms1<T: Scalar>(theta0: T, phi0: T, alpha: T) -> Result<T> {
    let rho = pure_state(alpha)?;
    let id = ComplexMatrix::identity(2);
    let expect = |left: &ComplexMatrix<T>, right: &ComplexMatrix<T>| -> T {
        left.tensor(right)
            .and_then(|op| op.matmul(rho.matrix()))
            .and_then(|m| m.trace())
            .expect("2x2/4x4 by construction")
            .re
    };
    let n_phi0 = expect(&id, observable(phi0).matrix());
    let n_phi1 = expect(&id, observable(-phi0).matrix());
    let m_theta0 = expect(observable(theta0).matrix(), &id);
    let f = T::lit(3.0) * theta0.cos() * phi0.cos()
        + (T::lit(2.0) * alpha).sin() * phi0.sin() * (T::lit(2.0) + theta0.sin());
    Ok(T::lit(0.25) * (-T::lit(3.0) + n_phi0 + m_theta0 - T::lit(2.0) * n_phi1 + f))
}

/// Evaluates every bound for one state and settings. The gap uses the raw
/// (unclamped) classical bound.
pub fn report<T: Scalar>(rho: &TwoQubitState<T>, s: &Settings<T>) -> Result<AceReport<T>> {
    let p = observed_quantum(rho, s)?;
    let cace_raw = cace_lb(&p);
    let q = qace(rho, s)?;
    let qlb = qace_lb(&p);
    Ok(AceReport {
        cace_lb_raw: cace_raw,
        cace_lb: cace_raw.max(T::zero()),
        qace: q,
        qace_lb_raw: qlb.value,
        qace_lb: qlb.value.max(T::zero()),
        gap: cace_raw - q,
        zeta: qlb.zeta,
    })
}
