//! Dichotomic observables in the x-z plane, their outcome projectors, and the
//! electro-optic switch model: phase retarder P(delta), rotation R(eta), the
//! conjugated observable realized when the cell is triggered, and the solve
//! for the rotation angle eta that reproduces the target observable.
//!
//! Outcome convention: outcome 0 maps to eigenvalue +1, outcome 1 to -1, for
//! both parties.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::optim::scan_then_golden;
use crate::qmath::{hermitian_eigen2, ComplexMatrix};
use crate::scalar::Scalar;
use crate::scenario::Settings;
use crate::states::pure_state;

/// A 2x2 Hermitian observable with eigenvalues {+1, -1}. `angle` records the
/// generating x-z angle when the observable came from [`observable`]; the
/// triggered hardware branch can leave the x-z plane, so the full matrix is
/// stored.
#[derive(Clone, Debug)]
pub struct Observable<T> {
    matrix: ComplexMatrix<T>,
    angle: Option<T>,
}

impl<T: Scalar> Observable<T> {
    /// Validates Hermiticity and the +/-1 spectrum.
    pub fn from_matrix(matrix: ComplexMatrix<T>) -> Result<Self> {
        let eig = hermitian_eigen2(&matrix)?;
        let tol = T::atol();
        if (eig.low + T::one()).abs() > tol || (eig.high - T::one()).abs() > tol {
            return Err(Error::NonDichotomic {
                low: eig.low.to_f64().unwrap_or(f64::NAN),
                high: eig.high.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            matrix,
            angle: None,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn angle(&self) -> Option<T> {
        self.angle
    }

    pub fn projectors(&self) -> ProjectorPair<T> {
        projectors(self)
    }
}

/// Projectors onto the +1 (`pi0`) and -1 (`pi1`) eigenspaces of a dichotomic
/// observable; they sum to the identity.
#[derive(Clone, Debug)]
pub struct ProjectorPair<T> {
    pub pi0: ComplexMatrix<T>,
    pub pi1: ComplexMatrix<T>,
}

impl<T: Scalar> ProjectorPair<T> {
    pub fn outcome(&self, o: u8) -> &ComplexMatrix<T> {
        if o == 0 {
            &self.pi0
        } else {
            &self.pi1
        }
    }
}

/// Switch parameters: retarder phase `delta` in (0, 2*pi] and rotation angle
/// `eta` in [-pi/2, pi/2].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardwareParams<T> {
    delta: T,
    eta: T,
}

impl<T: Scalar> HardwareParams<T> {
    pub fn new(delta: T, eta: T) -> Result<Self> {
        if !(delta > T::zero() && delta <= T::lit(2.0) * T::PI()) {
            return Err(Error::ParamOutOfRange(format!(
                "delta must be in (0, 2pi], got {delta}"
            )));
        }
        if !(eta >= -T::FRAC_PI_2() && eta <= T::FRAC_PI_2()) {
            return Err(Error::ParamOutOfRange(format!(
                "eta must be in [-pi/2, pi/2], got {eta}"
            )));
        }
        Ok(Self { delta, eta })
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn eta(&self) -> T {
        self.eta
    }
}

/// cos(angle) sigma_z + sin(angle) sigma_x.
pub fn observable<T: Scalar>(angle: T) -> Observable<T> {
    let m = ComplexMatrix::pauli_z()
        .scale_re(angle.cos())
        .add(&ComplexMatrix::pauli_x().scale_re(angle.sin()))
        .expect("same shape");
    Observable {
        matrix: m,
        angle: Some(angle),
    }
}

/// Outcome projectors (I +/- M)/2, so that pi0 - pi1 = M.
pub fn projectors<T: Scalar>(obs: &Observable<T>) -> ProjectorPair<T> {
    let half = T::lit(0.5);
    let id = ComplexMatrix::identity(2);
    let pi0 = id.add(obs.matrix()).expect("same shape").scale_re(half);
    let pi1 = id.sub(obs.matrix()).expect("same shape").scale_re(half);
    ProjectorPair { pi0, pi1 }
}

/// Jones matrix of the phase retarder: diag(1, e^{i delta}).
pub fn pockels<T: Scalar>(delta: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_diag(&[
        Complex::new(T::one(), T::zero()),
        Complex::new(delta.cos(), delta.sin()),
    ])
}

/// Real rotation matrix [[cos, -sin], [sin, cos]].
pub fn rotation<T: Scalar>(eta: T) -> ComplexMatrix<T> {
    let z = T::zero();
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex::new(eta.cos(), z),
            Complex::new(-eta.sin(), z),
            Complex::new(eta.sin(), z),
            Complex::new(eta.cos(), z),
        ],
    )
    .expect("static entries")
}

/// Observable actually measured on Bob's side. Untriggered, the switch acts
/// as the identity and the base observable is measured directly. Triggered,
/// the base observable is conjugated by U = R(eta) P(delta) R(-eta):
/// the result is U^dag N U, Hermitian with the same +/-1 spectrum. For
/// eta = 0, delta = pi this flips the sign of the x-z angle.
pub fn effective_observable<T: Scalar>(
    base_phi: T,
    hw: &HardwareParams<T>,
    triggered: bool,
) -> Observable<T> {
    let base = observable(base_phi);
    if !triggered {
        return base;
    }
    let u = rotation(hw.eta())
        .matmul(&pockels(hw.delta()))
        .and_then(|m| m.matmul(&rotation(-hw.eta())))
        .expect("2x2 chain");
    let m = u
        .adjoint()
        .matmul(base.matrix())
        .and_then(|m| m.matmul(&u))
        .expect("2x2 chain");
    // unitary conjugation keeps the matrix Hermitian up to round-off; make
    // that exact so downstream spectra stay clean
    let sym = m
        .add(&m.adjoint())
        .expect("same shape")
        .scale_re(T::lit(0.5));
    Observable {
        matrix: sym,
        angle: None,
    }
}

/// Squared residual of the eight trace-matching equations between the ideal
/// target observable N(phi0) and the triggered realization at rotation angle
/// `eta` (with an exact pi retarder phase), on the pure state of the given
/// entanglement angle.
fn eta_residual<T: Scalar>(eta: T, alpha: T, settings: &Settings<T>) -> Result<T> {
    let rho = pure_state(alpha)?;
    let alice = [
        observable(settings.theta0).projectors(),
        observable(settings.theta1).projectors(),
    ];
    let target = observable(settings.phi0).projectors();
    let hw = HardwareParams::new(T::PI(), eta)?;
    let realized = effective_observable(settings.phi1, &hw, true).projectors();
    let mut acc = T::zero();
    for x in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let want = born_term(&alice[x], a, target.outcome(b as u8), rho.matrix());
                let got = born_term(&alice[x], a, realized.outcome(b as u8), rho.matrix());
                acc += (want - got).powi(2);
            }
        }
    }
    Ok(acc)
}

fn born_term<T: Scalar>(
    alice: &ProjectorPair<T>,
    a: usize,
    bob: &ComplexMatrix<T>,
    rho: &ComplexMatrix<T>,
) -> T {
    alice
        .outcome(a as u8)
        .tensor(bob)
        .and_then(|op| op.matmul(rho))
        .and_then(|m| m.trace())
        .expect("2x2/4x4 by construction")
        .re
}

/// Finds the rotation angle eta in [-pi/2, pi/2] under which the triggered
/// switch reproduces the target observable N(phi0) on the given pure state:
/// dense scan at 1e-3 rad, then golden-section refinement to 1e-10 rad.
/// Errors if the best residual exceeds 1e-9 (no hardware realization at the
/// requested precision), reporting the best angle found.
pub fn solve_eta<T: Scalar>(alpha: T, settings: &Settings<T>) -> Result<T> {
    // surface state/parameter errors before scanning
    eta_residual(T::zero(), alpha, settings)?;
    let f = |eta: T| eta_residual(eta, alpha, settings).expect("validated above");
    let half_pi = T::FRAC_PI_2();
    let n = 3143; // ~1e-3 rad over [-pi/2, pi/2]
    let (eta, residual) = scan_then_golden(f, -half_pi, half_pi, n, T::lit(1e-10));
    if residual < T::lit(1e-9) {
        Ok(eta)
    } else {
        Err(Error::EtaResidual {
            eta: eta.to_f64().unwrap_or(f64::NAN),
            residual: residual.to_f64().unwrap_or(f64::NAN),
        })
    }
}
