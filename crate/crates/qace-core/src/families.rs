//! The two measurement-setting families swept in this scenario. The mirror
//! family (MS1) keeps the quantum causal effect at zero by construction and
//! maximizes the violation of the classical bound; the swap family (MS2)
//! produces non-trivial quantum bounds over alpha in [pi/8, pi/4].

use crate::error::{Error, Result};
use crate::optim::scan_then_golden;
use crate::scalar::Scalar;
use crate::scenario::Settings;
use crate::states::NoiseParams;

/// Which measurement-setting family a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Ms1,
    Ms2,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ms1 => "ms1",
            Family::Ms2 => "ms2",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms1" => Ok(Family::Ms1),
            "ms2" => Ok(Family::Ms2),
            other => Err(Error::ParamOutOfRange(format!(
                "unknown family '{other}', expected ms1 or ms2"
            ))),
        }
    }
}

/// Sweep description: family, entanglement grid, optional noise, and the
/// optional retarder phase. The rotation angle of the switch depends on
/// alpha, so it is solved per grid point rather than stored here.
#[derive(Clone, Debug)]
pub struct SweepSpec<T> {
    pub family: Family,
    pub alpha_grid: Vec<T>,
    pub noise: Option<NoiseParams<T>>,
    pub hardware_delta: Option<T>,
}

impl<T: Scalar> SweepSpec<T> {
    pub fn validate(&self) -> Result<()> {
        for &alpha in &self.alpha_grid {
            match self.family {
                Family::Ms1 => {
                    if !(alpha >= T::zero() && alpha <= T::FRAC_PI_2()) {
                        return Err(Error::ParamOutOfRange(format!(
                            "ms1 sweep needs alpha in [0, pi/2], got {alpha}"
                        )));
                    }
                }
                Family::Ms2 => {
                    ms2_range_check(alpha)?;
                }
            }
        }
        Ok(())
    }
}

/// Mirror-family settings plus a flag marking the degenerate geometry where
/// the optimal-theta formula loses its denominator (alpha = 0 or phi0 = 0).
#[derive(Clone, Copy, Debug)]
pub struct Ms1Settings<T> {
    pub settings: Settings<T>,
    pub degenerate: bool,
}

/// Mirror-family settings: theta1 = -pi/2, phi1 = -phi0, and theta0 on the
/// arccot branch in (0, pi) maximizing the violation gap. Degenerate
/// geometries fall back to theta0 = 0 with the flag set.
pub fn ms1<T: Scalar>(alpha: T, phi0: T) -> Ms1Settings<T> {
    let s = (T::lit(2.0) * alpha).sin() * phi0.sin();
    let c = (T::lit(2.0) * alpha).cos() + T::lit(3.0) * phi0.cos();
    let degenerate = s.abs() < T::lit(1e-12);
    let theta0 = if degenerate {
        T::zero()
    } else {
        let raw = s.atan2(c);
        if raw <= T::zero() {
            raw + T::PI()
        } else {
            raw
        }
    };
    Ms1Settings {
        settings: Settings {
            theta0,
            theta1: -T::FRAC_PI_2(),
            phi0,
            phi1: -phi0,
            hardware: None,
        },
        degenerate,
    }
}

/// Violation gap of the mirror family in closed form (the quantum causal
/// effect vanishes there, so the gap equals the classical bound). Used by
/// the optimizers; cross-validated against the Born-rule pipeline in tests.
pub fn ms1_gap<T: Scalar>(alpha: T, phi0: T) -> T {
    let ms = ms1(alpha, phi0);
    let theta0 = ms.settings.theta0;
    let c2a = (T::lit(2.0) * alpha).cos();
    let s2a = (T::lit(2.0) * alpha).sin();
    T::lit(0.25)
        * (-T::lit(3.0) - phi0.cos() * c2a
            + theta0.cos() * c2a
            + T::lit(3.0) * theta0.cos() * phi0.cos()
            + s2a * phi0.sin() * (T::lit(2.0) + theta0.sin()))
}

/// The phi0 in (0, pi/2) maximizing the mirror-family gap for the given
/// alpha: 200-point bracketing scan plus golden-section refinement to 1e-8.
pub fn ms1_optimal_phi0<T: Scalar>(alpha: T) -> T {
    let lo = T::lit(1e-9);
    let hi = T::FRAC_PI_2() - T::lit(1e-9);
    let (phi0, _) = scan_then_golden(|p| -ms1_gap(alpha, p), lo, hi, 200, T::lit(1e-8));
    phi0
}

/// Global maximizer of the mirror-family gap over (alpha, phi0); returns
/// (alpha, phi0, gap).
pub fn ms1_max_violation<T: Scalar>() -> (T, T, T) {
    let h = |alpha: T| -ms1_gap(alpha, ms1_optimal_phi0(alpha));
    let lo = T::lit(0.01);
    let hi = T::FRAC_PI_2() - T::lit(0.01);
    let (alpha, neg_gap) = scan_then_golden(h, lo, hi, 200, T::lit(1e-10));
    let phi0 = ms1_optimal_phi0(alpha);
    (alpha, phi0, -neg_gap)
}

fn ms2_range_check<T: Scalar>(alpha: T) -> Result<()> {
    let lo = T::PI() * T::lit(0.125);
    let hi = T::FRAC_PI_4();
    let slack = T::lit(1e-12);
    if !(alpha >= lo - slack && alpha <= hi + slack) {
        return Err(Error::ParamOutOfRange(format!(
            "ms2 needs alpha in [pi/8, pi/4], got {alpha}"
        )));
    }
    Ok(())
}

/// Swap-family settings: theta0 = 3(alpha - pi/8), theta1 = pi,
/// phi0 = 2(alpha - pi/8), phi1 = pi - 3(alpha - pi/8), for alpha in
/// [pi/8, pi/4].
pub fn ms2<T: Scalar>(alpha: T) -> Result<Settings<T>> {
    ms2_range_check(alpha)?;
    let d = alpha - T::PI() * T::lit(0.125);
    Settings::new(
        T::lit(3.0) * d,
        T::PI(),
        T::lit(2.0) * d,
        T::PI() - T::lit(3.0) * d,
        None,
    )
}

/// Closed-form location of the maximal mirror-family violation:
/// 2 alpha = arctan(1/sqrt(3 sqrt(2) + 2)) + arctan(sqrt((3 sqrt(2) + 2)/2)).
pub fn ms1_closed_form_alpha<T: Scalar>() -> T {
    let k = T::lit(3.0) * T::SQRT_2() + T::lit(2.0);
    let two_alpha = (k.sqrt().recip()).atan() + (k * T::lit(0.5)).sqrt().atan();
    two_alpha * T::lit(0.5)
}

/// Closed-form phi0 at the maximal violation: arctan(2/sqrt(3 sqrt(2) + 2)).
pub fn ms1_closed_form_phi0<T: Scalar>() -> T {
    let k = T::lit(3.0) * T::SQRT_2() + T::lit(2.0);
    (T::lit(2.0) / k.sqrt()).atan()
}

/// Maximal mirror-family violation gap, 3 - 2 sqrt(2).
pub fn max_violation_gap<T: Scalar>() -> T {
    T::lit(3.0) - T::lit(2.0) * T::SQRT_2()
}
