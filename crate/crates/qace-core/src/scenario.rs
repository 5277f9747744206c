//! Observational p(a,b|x) and interventional p(b|do(a)) distributions, from
//! quantum models via the Born rule and from classical instrumental models
//! via deterministic response strategies.
//!
//! Wiring convention: Alice's outcome selects Bob's branch, with outcome
//! a = 0 triggering the switch and a = 1 leaving it idle. Under ideal
//! hardware this reduces to measuring N(phi0) for a = 0 and N(phi1) for
//! a = 1.

use crate::error::{Error, Result};
use crate::measurement::{effective_observable, observable, HardwareParams, Observable};
use crate::oracle::enumerate_strategies;
use crate::scalar::Scalar;
use crate::states::TwoQubitState;

/// One experiment configuration: Alice's angles theta_x, Bob's angles phi_a,
/// and optionally the switch hardware parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings<T> {
    pub theta0: T,
    pub theta1: T,
    pub phi0: T,
    pub phi1: T,
    pub hardware: Option<HardwareParams<T>>,
}

impl<T: Scalar> Settings<T> {
    pub fn new(
        theta0: T,
        theta1: T,
        phi0: T,
        phi1: T,
        hardware: Option<HardwareParams<T>>,
    ) -> Result<Self> {
        for (name, x) in [
            ("theta0", theta0),
            ("theta1", theta1),
            ("phi0", phi0),
            ("phi1", phi1),
        ] {
            if !x.is_finite() {
                return Err(Error::ParamOutOfRange(format!("{name} must be finite")));
            }
        }
        Ok(Self {
            theta0,
            theta1,
            phi0,
            phi1,
            hardware,
        })
    }

    pub fn with_hardware(mut self, hardware: HardwareParams<T>) -> Self {
        self.hardware = Some(hardware);
        self
    }

    pub fn theta(&self, x: usize) -> T {
        if x == 0 {
            self.theta0
        } else {
            self.theta1
        }
    }

    /// Bob's observables indexed by Alice's outcome. With hardware present,
    /// a = 0 is the triggered branch acting on the base angle phi1 and a = 1
    /// is the untriggered base observable; without hardware the ideal
    /// observables N(phi0), N(phi1) are used directly.
    pub fn bob_observables(&self) -> [Observable<T>; 2] {
        match &self.hardware {
            Some(hw) => [
                effective_observable(self.phi1, hw, true),
                effective_observable(self.phi1, hw, false),
            ],
            None => [observable(self.phi0), observable(self.phi1)],
        }
    }
}

/// Observational probability table p(a,b|x) for binary x, a, b. Entries are
/// validated to lie in [0,1] and to sum to one for each x.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservedDistribution<T> {
    p: [[[T; 2]; 2]; 2],
}

impl<T: Scalar> ObservedDistribution<T> {
    /// `p` is indexed [x][a][b].
    pub fn new(p: [[[T; 2]; 2]; 2]) -> Result<Self> {
        let tol = T::atol();
        for x in 0..2 {
            let mut sum = T::zero();
            for a in 0..2 {
                for b in 0..2 {
                    let v = p[x][a][b];
                    if !v.is_finite() || v < -tol || v > T::one() + tol {
                        return Err(Error::DistributionInvariant(format!(
                            "p({a},{b}|{x}) = {v} outside [0, 1]"
                        )));
                    }
                    sum += v;
                }
            }
            if (sum - T::one()).abs() > T::sum_tol() {
                return Err(Error::DistributionInvariant(format!(
                    "sum over (a,b) for x={x} is {sum}, not 1"
                )));
            }
        }
        Ok(Self { p })
    }

    pub fn p(&self, x: usize, a: usize, b: usize) -> T {
        self.p[x][a][b]
    }

    pub fn table(&self) -> &[[[T; 2]; 2]; 2] {
        &self.p
    }
}

/// Interventional probability table p(b|do(a)); each row over b sums to one.
#[derive(Clone, Debug, PartialEq)]
pub struct DoDistribution<T> {
    p: [[T; 2]; 2],
}

impl<T: Scalar> DoDistribution<T> {
    /// `p` is indexed [a][b].
    pub fn new(p: [[T; 2]; 2]) -> Result<Self> {
        let tol = T::atol();
        for a in 0..2 {
            let mut sum = T::zero();
            for b in 0..2 {
                let v = p[a][b];
                if !v.is_finite() || v < -tol || v > T::one() + tol {
                    return Err(Error::DistributionInvariant(format!(
                        "p({b}|do({a})) = {v} outside [0, 1]"
                    )));
                }
                sum += v;
            }
            if (sum - T::one()).abs() > T::sum_tol() {
                return Err(Error::DistributionInvariant(format!(
                    "sum over b for do({a}) is {sum}, not 1"
                )));
            }
        }
        Ok(Self { p })
    }

    pub fn p(&self, a: usize, b: usize) -> T {
        self.p[a][b]
    }
}

/// Mixture over the 16 deterministic response strategies (f: X -> A,
/// g: A -> B); weights are nonnegative and sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalModel<T> {
    weights: [T; 16],
}

impl<T: Scalar> ClassicalModel<T> {
    pub fn new(weights: [T; 16]) -> Result<Self> {
        let mut sum = T::zero();
        for w in &weights {
            if !w.is_finite() || *w < T::zero() {
                return Err(Error::ParamOutOfRange(format!(
                    "strategy weight {w} must be nonnegative"
                )));
            }
            sum += *w;
        }
        // 1e-12 for f64; scaled up for coarser scalars
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if (sum - T::one()).abs() > tol {
            return Err(Error::ParamOutOfRange(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    /// All weight on the strategy with the given function indices
    /// (f-major: index = f_idx * 4 + g_idx).
    pub fn point_mass(f_idx: usize, g_idx: usize) -> Self {
        let mut weights = [T::zero(); 16];
        weights[f_idx * 4 + g_idx] = T::one();
        Self { weights }
    }

    pub fn uniform() -> Self {
        Self {
            weights: [T::lit(1.0 / 16.0); 16],
        }
    }

    pub fn weights(&self) -> &[T; 16] {
        &self.weights
    }
}

fn born_probability<T: Scalar>(
    alice_proj: &crate::qmath::ComplexMatrix<T>,
    bob_proj: &crate::qmath::ComplexMatrix<T>,
    rho: &TwoQubitState<T>,
) -> T {
    alice_proj
        .tensor(bob_proj)
        .and_then(|op| op.matmul(rho.matrix()))
        .and_then(|m| m.trace())
        .expect("2x2/4x4 by construction")
        .re
}

fn clamp_probability<T: Scalar>(raw: T, what: impl Fn() -> String) -> Result<T> {
    let slack = T::clamp_slack();
    if raw < -slack || raw > T::one() + slack {
        return Err(Error::DistributionInvariant(format!(
            "{} = {raw} beyond round-off slack",
            what()
        )));
    }
    Ok(raw.max(T::zero()).min(T::one()))
}

/// Born-rule observational table: p(a,b|x) = Tr[(M_a^x (x) N_b^a) rho].
pub fn observed_quantum<T: Scalar>(
    rho: &TwoQubitState<T>,
    s: &Settings<T>,
) -> Result<ObservedDistribution<T>> {
    let bob = s.bob_observables();
    let bob_proj = [bob[0].projectors(), bob[1].projectors()];
    let mut p = [[[T::zero(); 2]; 2]; 2];
    for x in 0..2 {
        let alice = observable(s.theta(x)).projectors();
        for a in 0..2 {
            for b in 0..2 {
                let raw =
                    born_probability(alice.outcome(a as u8), bob_proj[a].outcome(b as u8), rho);
                p[x][a][b] = clamp_probability(raw, || format!("p({a},{b}|{x})"))?;
            }
        }
    }
    ObservedDistribution::new(p)
}

/// Interventional distribution p(b|do(a)) = Tr[N_b^a rho_B] on the reduced
/// state of Bob's qubit, with the same (hardware-corrected) observables as
/// the observational table.
pub fn do_quantum<T: Scalar>(rho: &TwoQubitState<T>, s: &Settings<T>) -> Result<DoDistribution<T>> {
    let rho_b = rho.rho_b();
    let bob = s.bob_observables();
    let mut p = [[T::zero(); 2]; 2];
    for a in 0..2 {
        let proj = bob[a].projectors();
        for b in 0..2 {
            let raw = proj
                .outcome(b as u8)
                .matmul(&rho_b)
                .and_then(|m| m.trace())
                .expect("2x2 by construction")
                .re;
            p[a][b] = clamp_probability(raw, || format!("p({b}|do({a}))"))?;
        }
    }
    DoDistribution::new(p)
}

/// Classical observational table: p(a,b|x) = sum_l w_l [f_l(x)=a][g_l(a)=b].
pub fn observed_classical<T: Scalar>(m: &ClassicalModel<T>) -> ObservedDistribution<T> {
    let mut p = [[[T::zero(); 2]; 2]; 2];
    for (strategy, w) in enumerate_strategies().iter().zip(m.weights()) {
        for x in 0..2 {
            let a = strategy.f.apply(x as u8) as usize;
            let b = strategy.g.apply(a as u8) as usize;
            p[x][a][b] += *w;
        }
    }
    ObservedDistribution::new(p).expect("weights sum to 1")
}

/// Classical interventional distribution: p(b|do(a)) = sum_l w_l [g_l(a)=b],
/// sharing the same weights as the observational decomposition.
pub fn do_classical<T: Scalar>(m: &ClassicalModel<T>) -> DoDistribution<T> {
    let mut p = [[T::zero(); 2]; 2];
    for (strategy, w) in enumerate_strategies().iter().zip(m.weights()) {
        for a in 0..2 {
            let b = strategy.g.apply(a as u8) as usize;
            p[a][b] += *w;
        }
    }
    DoDistribution::new(p).expect("weights sum to 1")
}
