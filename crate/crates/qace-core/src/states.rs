//! Two-qubit density matrices: the ideal partially entangled pure state and
//! its white+colored noise degradation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{partial_trace_a, ComplexMatrix};
use crate::scalar::Scalar;

/// A 4x4 density matrix, validated on construction: Hermitian, unit trace and
/// positive semidefinite on a fixed probe set.
#[derive(Clone, Debug)]
pub struct TwoQubitState<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> TwoQubitState<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::InvalidState(format!(
                "expected 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tol = T::atol();
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = matrix.trace().expect("square");
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState("trace is not 1".into()));
        }
        for i in 0..4 {
            if matrix.at(i, i).re < -tol {
                return Err(Error::InvalidState(format!("negative diagonal entry {i}")));
            }
        }
        for probe in probe_vectors::<T>() {
            let mut quad = Complex::new(T::zero(), T::zero());
            for r in 0..4 {
                for c in 0..4 {
                    quad = quad + probe[r].conj() * matrix.at(r, c) * probe[c];
                }
            }
            if quad.re < -tol {
                return Err(Error::InvalidState(
                    "negative expectation on probe vector".into(),
                ));
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Reduced state of the second (Bob's) qubit.
    pub fn rho_b(&self) -> ComplexMatrix<T> {
        partial_trace_a(&self.matrix).expect("4x4 by construction")
    }
}

/// Probe vectors for the positivity check: the computational basis plus all
/// (|i> +/- |j>)/sqrt(2) and (|i> +/- i|j>)/sqrt(2) pairs.
fn probe_vectors<T: Scalar>() -> Vec<[Complex<T>; 4]> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let si = Complex::new(T::zero(), T::FRAC_1_SQRT_2());
    let mut probes = Vec::new();
    for i in 0..4 {
        let mut v = [zero; 4];
        v[i] = one;
        probes.push(v);
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            for w in [s, -s, si, -si] {
                let mut v = [zero; 4];
                v[i] = s;
                v[j] = w;
                probes.push(v);
            }
        }
    }
    probes
}

/// White-noise visibility `v` and colored-noise fraction `lambda`, both in
/// [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams<T> {
    v: T,
    lambda: T,
}

impl<T: Scalar> NoiseParams<T> {
    pub fn new(v: T, lambda: T) -> Result<Self> {
        for (name, x) in [("v", v), ("lambda", lambda)] {
            if !(x >= T::zero() && x <= T::one()) {
                return Err(Error::ParamOutOfRange(format!(
                    "{name} must be in [0, 1], got {x}"
                )));
            }
        }
        Ok(Self { v, lambda })
    }

    pub fn v(&self) -> T {
        self.v
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if !(alpha >= T::zero() && alpha <= T::FRAC_PI_2()) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha must be in [0, pi/2], got {alpha}"
        )));
    }
    Ok(())
}

/// Rank-1 projector onto cos(alpha)|00> + sin(alpha)|11>.
pub fn pure_state<T: Scalar>(alpha: T) -> Result<TwoQubitState<T>> {
    check_alpha(alpha)?;
    TwoQubitState::new(psi_projector(alpha, T::one()))
}

/// Outer product of cos(alpha)|00> + sign*sin(alpha)|11> with itself.
fn psi_projector<T: Scalar>(alpha: T, sign: T) -> ComplexMatrix<T> {
    let amp = [alpha.cos(), T::zero(), T::zero(), sign * alpha.sin()];
    let mut m = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            m.set(r, c, Complex::new(amp[r] * amp[c], T::zero()));
        }
    }
    m
}

/// State degraded by white and colored noise:
/// rho = v |psi+><psi+| + (1-v) [ (lambda/2)(|psi+><psi+| + |psi-><psi-|)
///       + ((1-lambda)/4) I ],
/// with |psi+-> = cos(alpha)|00> +/- sin(alpha)|11>.
pub fn noisy_state<T: Scalar>(alpha: T, noise: NoiseParams<T>) -> Result<TwoQubitState<T>> {
    check_alpha(alpha)?;
    let plus = psi_projector(alpha, T::one());
    let minus = psi_projector(alpha, -T::one());
    let v = noise.v();
    let lambda = noise.lambda();
    let one = T::one();
    let colored = plus
        .add(&minus)
        .expect("same shape")
        .scale_re(lambda * T::lit(0.5));
    let white = ComplexMatrix::identity(4).scale_re((one - lambda) * T::lit(0.25));
    let tail = colored.add(&white).expect("same shape").scale_re(one - v);
    let rho = plus.scale_re(v).add(&tail).expect("same shape");
    TwoQubitState::new(rho)
}
