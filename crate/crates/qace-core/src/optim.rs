//! Derivative-free 1-D minimization: coarse bracketing scan followed by
//! golden-section refinement.

use crate::scalar::Scalar;

/// Golden-section search for the minimum of `f` on `[lo, hi]`. Assumes `f`
/// is unimodal on the bracket; returns `(argmin, min)`. Stops at interval
/// width `xtol` or once the bracket can no longer shrink at the scalar's
/// resolution.
pub fn golden_min<T: Scalar, F: Fn(T) -> T>(f: F, lo: T, hi: T, xtol: T) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a) > xtol {
        let width = b - a;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if !(b - a < width) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Evaluates `f` on an `n`-point uniform grid over `[lo, hi]`, then refines
/// with golden-section search inside the cell pair around the best grid
/// point. Returns `(argmin, min)`.
pub fn scan_then_golden<T: Scalar, F: Fn(T) -> T>(f: F, lo: T, hi: T, n: usize, xtol: T) -> (T, T) {
    assert!(n >= 3, "scan needs at least 3 points");
    let step = (hi - lo) / T::from_usize(n - 1).expect("small grid size");
    let mut best_i = 0usize;
    let mut best_f = T::infinity();
    for i in 0..n {
        let x = lo + step * T::from_usize(i).expect("grid index");
        let fx = f(x);
        if fx < best_f {
            best_f = fx;
            best_i = i;
        }
    }
    let a = if best_i == 0 {
        lo
    } else {
        lo + step * T::from_usize(best_i - 1).expect("grid index")
    };
    let b = if best_i == n - 1 {
        hi
    } else {
        lo + step * T::from_usize(best_i + 1).expect("grid index")
    };
    let (x, fx) = golden_min(f, a, b, xtol);
    if fx <= best_f {
        (x, fx)
    } else {
        (
            lo + step * T::from_usize(best_i).expect("grid index"),
            best_f,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let (x, fx) = golden_min(|x: f64| (x - 0.3).powi(2), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-10);
        assert!(fx < 1e-20);
    }

    #[test]
    fn scan_handles_multimodal() {
        // two wells; the deeper one is near x = 2.2
        let f = |x: f64| (x + 1.0).powi(2).min(0.5 * (x - 2.2).powi(2) - 0.3);
        let (x, _) = scan_then_golden(f, -4.0, 4.0, 200, 1e-10);
        assert!((x - 2.2).abs() < 1e-8);
    }

    #[test]
    fn scan_handles_boundary_minimum() {
        let (x, _) = scan_then_golden(|x: f64| x, 0.0, 1.0, 50, 1e-10);
        assert!(x < 1e-9);
    }
}
