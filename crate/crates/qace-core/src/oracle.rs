//! Independent classical certification: the 16 deterministic response
//! strategies of the binary instrumental scenario, and a small linear program
//! that finds the minimum classical average causal effect compatible with an
//! observed distribution (or decides that none reproduces it).

use crate::causal::ace_from_do;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::scenario::{do_classical, ClassicalModel, ObservedDistribution};
use crate::simplex::{solve, LpOutcome, StandardLp};

/// One of the four binary functions {0,1} -> {0,1}, in the fixed decoding
/// order constant-0, constant-1, identity, negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryFn {
    Zero,
    One,
    Identity,
    Negation,
}

impl BinaryFn {
    pub fn from_index(idx: usize) -> Self {
        match idx {
            0 => Self::Zero,
            1 => Self::One,
            2 => Self::Identity,
            3 => Self::Negation,
            _ => panic!("binary function index must be 0..4, got {idx}"),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Identity => 2,
            Self::Negation => 3,
        }
    }

    pub fn apply(self, u: u8) -> u8 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Identity => u,
            Self::Negation => 1 - u,
        }
    }
}

/// Deterministic response pair: `f` maps the instrument to Alice's outcome,
/// `g` maps Alice's outcome to Bob's.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub f: BinaryFn,
    pub g: BinaryFn,
}

/// All 16 strategies, f-major: index = f.index() * 4 + g.index().
pub fn enumerate_strategies() -> Vec<Strategy> {
    let mut out = Vec::with_capacity(16);
    for fi in 0..4 {
        for gi in 0..4 {
            out.push(Strategy {
                f: BinaryFn::from_index(fi),
                g: BinaryFn::from_index(gi),
            });
        }
    }
    out
}

/// Result of the strategy-polytope program. `min_ace` and `witness_weights`
/// are meaningful only when `feasible`; an infeasible program reports NaN
/// weights.
#[derive(Clone, Debug)]
pub struct OracleResult<T> {
    pub min_ace: T,
    pub feasible: bool,
    pub witness_weights: [T; 16],
}

/// Equality system rows after rank-revealing pruning: coefficient rows over
/// the 16 weights plus the matching right-hand sides.
fn pruned_equalities<T: Scalar>(p: &ObservedDistribution<T>) -> (Vec<Vec<T>>, Vec<T>, bool) {
    let strategies = enumerate_strategies();
    // 8 table-matching rows plus normalization
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(9);
    let mut rhs: Vec<T> = Vec::with_capacity(9);
    for x in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let mut row = vec![T::zero(); 16];
                for (i, s) in strategies.iter().enumerate() {
                    if s.f.apply(x as u8) == a as u8 && s.g.apply(a as u8) == b as u8 {
                        row[i] = T::one();
                    }
                }
                rows.push(row);
                rhs.push(p.p(x, a as usize, b as usize));
            }
        }
    }
    rows.push(vec![T::one(); 16]);
    rhs.push(T::one());

    // Gaussian elimination with partial pivoting; per-x normalization makes
    // the raw system rank-deficient. Rows reduced to zero must have a zero
    // right-hand side, else the system is inconsistent.
    let pivot_tol = T::atol();
    let mut kept: Vec<(Vec<T>, T)> = Vec::new();
    let mut work: Vec<(Vec<T>, T)> = rows.into_iter().zip(rhs).collect();
    let mut col = 0;
    while col < 16 && !work.is_empty() {
        let (best_idx, best_mag) = work
            .iter()
            .enumerate()
            .map(|(i, (row, _))| (i, row[col].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("nonempty");
        if best_mag <= pivot_tol {
            col += 1;
            continue;
        }
        let (prow, prhs) = work.swap_remove(best_idx);
        for (row, r) in work.iter_mut() {
            let factor = row[col] / prow[col];
            if factor != T::zero() {
                for c in col..16 {
                    let delta = factor * prow[c];
                    row[c] -= delta;
                }
                *r -= factor * prhs;
            }
        }
        kept.push((prow, prhs));
        col += 1;
    }
    for (row, r) in &work {
        let max_coef = row.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if max_coef <= pivot_tol && r.abs() > T::lp_tol() {
            return (Vec::new(), Vec::new(), false);
        }
    }
    let (rows, rhs) = kept.into_iter().unzip();
    (rows, rhs, true)
}

/// Minimizes the classical average causal effect over all strategy mixtures
/// reproducing `p` exactly:
///
/// minimize t  s.t.  w >= 0, sum w = 1, table(w) = p, -t <= D(w) <= t,
///
/// with D(w) = sum_l w_l ([g_l(0)=0] - [g_l(1)=0]). For binary outcomes
/// |p(b|do(0)) - p(b|do(1))| is the same for b = 0 and b = 1, which halves
/// the inequality set.
pub fn min_classical_ace<T: Scalar>(p: &ObservedDistribution<T>) -> Result<OracleResult<T>> {
    let (eq_rows, eq_rhs, consistent) = pruned_equalities(p);
    if !consistent {
        return Ok(infeasible_result());
    }
    let strategies = enumerate_strategies();
    let d: Vec<T> = strategies
        .iter()
        .map(|s| {
            let up = if s.g.apply(0) == 0 {
                T::one()
            } else {
                T::zero()
            };
            let down = if s.g.apply(1) == 0 {
                T::one()
            } else {
                T::zero()
            };
            up - down
        })
        .collect();

    // variables: w(16), t, s_plus, s_minus
    let n = 19;
    let mut constraints: Vec<Vec<T>> = Vec::new();
    let mut rhs: Vec<T> = Vec::new();
    for (row, r) in eq_rows.iter().zip(&eq_rhs) {
        let mut full = vec![T::zero(); n];
        full[..16].copy_from_slice(row);
        constraints.push(full);
        rhs.push(*r);
    }
    let mut up = vec![T::zero(); n];
    up[..16].copy_from_slice(&d);
    up[16] = -T::one();
    up[17] = T::one();
    constraints.push(up);
    rhs.push(T::zero());
    let mut down = vec![T::zero(); n];
    for (c, v) in d.iter().enumerate() {
        down[c] = -*v;
    }
    down[16] = -T::one();
    down[18] = T::one();
    constraints.push(down);
    rhs.push(T::zero());

    let mut objective = vec![T::zero(); n];
    objective[16] = T::one();

    match solve(&StandardLp {
        objective,
        constraints,
        rhs,
    })? {
        LpOutcome::Infeasible => Ok(infeasible_result()),
        LpOutcome::Optimal { x, value } => {
            let mut weights = [T::zero(); 16];
            for (w, v) in weights.iter_mut().zip(&x[..16]) {
                *w = v.max(T::zero());
            }
            Ok(OracleResult {
                min_ace: value.max(T::zero()),
                feasible: true,
                witness_weights: weights,
            })
        }
    }
}

fn infeasible_result<T: Scalar>() -> OracleResult<T> {
    OracleResult {
        min_ace: T::nan(),
        feasible: false,
        witness_weights: [T::nan(); 16],
    }
}

/// True iff some strategy mixture reproduces `p` exactly. Every distribution
/// generated by a two-qubit model in this scenario is realizable.
pub fn check_realizability<T: Scalar>(p: &ObservedDistribution<T>) -> bool {
    min_classical_ace(p).map(|r| r.feasible).unwrap_or(false)
}

/// Renormalizes LP witness weights into a `ClassicalModel` (the simplex
/// leaves O(lp_tol) drift on the simplex constraint).
pub fn witness_model<T: Scalar>(result: &OracleResult<T>) -> Option<ClassicalModel<T>> {
    if !result.feasible {
        return None;
    }
    let sum: T = result
        .witness_weights
        .iter()
        .fold(T::zero(), |acc, w| acc + *w);
    if sum <= T::zero() {
        return None;
    }
    let mut w = result.witness_weights;
    for v in w.iter_mut() {
        *v = *v / sum;
    }
    ClassicalModel::new(w).ok()
}

/// Convenience: the ACE realized by the witness mixture, for cross-checks
/// against `min_ace`.
pub fn witness_ace<T: Scalar>(result: &OracleResult<T>) -> Option<T> {
    witness_model(result).map(|m| ace_from_do(&do_classical(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::cace_lb;
    use crate::scenario::{observed_classical, observed_quantum, Settings};
    use crate::states::pure_state;

    #[test]
    fn sixteen_distinct_strategies() {
        let all = enumerate_strategies();
        assert_eq!(all.len(), 16);
        for i in 0..16 {
            for j in (i + 1)..16 {
                assert_ne!(all[i], all[j]);
            }
        }
        assert!(all.contains(&Strategy {
            f: BinaryFn::Identity,
            g: BinaryFn::Identity
        }));
    }

    #[test]
    fn point_mass_fingerprints_are_deterministic() {
        // every point-mass model yields a deterministic table; distinct
        // strategies may share a table but all 16 exist as (f,g) pairs
        let mut tables = Vec::new();
        for fi in 0..4 {
            for gi in 0..4 {
                let p = observed_classical(&ClassicalModel::<f64>::point_mass(fi, gi));
                for x in 0..2 {
                    let mut ones = 0;
                    for a in 0..2 {
                        for b in 0..2 {
                            let v = p.p(x, a, b);
                            assert!(v == 0.0 || v == 1.0);
                            if v == 1.0 {
                                ones += 1;
                            }
                        }
                    }
                    assert_eq!(ones, 1);
                }
                tables.push(*p.table());
            }
        }
        assert_eq!(tables.len(), 16);
    }

    #[test]
    fn constant_g_has_zero_min_ace() {
        // f(x) = x, g == 0
        let p = observed_classical(&ClassicalModel::<f64>::point_mass(2, 0));
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        assert!(r.min_ace.abs() < 1e-8, "min_ace = {}", r.min_ace);
    }

    #[test]
    fn uniform_table_has_zero_min_ace() {
        let p = ObservedDistribution::new([[[0.25_f64; 2]; 2]; 2]).unwrap();
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        assert!(r.min_ace.abs() < 1e-8);
    }

    #[test]
    fn witness_reproduces_input_and_ace() {
        let m = ClassicalModel::<f64>::point_mass(2, 2);
        let p = observed_classical(&m);
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        let witness = witness_model(&r).unwrap();
        let back = observed_classical(&witness);
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert!((back.p(x, a, b) - p.p(x, a, b)).abs() < 1e-7);
                }
            }
        }
        let ace = witness_ace(&r).unwrap();
        assert!((ace - r.min_ace).abs() < 1e-7);
        // wiring f(x)=x, g(a)=a pins p(b|do(a)) completely: ACE = 1
        assert!((r.min_ace - 1.0).abs() < 1e-7);
    }

    #[test]
    fn quantum_optimum_dominates_closed_form_bound() {
        // near-maximal-violation geometry
        let alpha = 0.718223716937_f64;
        let phi0 = 0.675028322702_f64;
        let s = (2.0 * alpha).sin() * phi0.sin();
        let c = (2.0 * alpha).cos() + 3.0 * phi0.cos();
        let theta0 = s.atan2(c);
        let settings =
            Settings::new(theta0, -std::f64::consts::FRAC_PI_2, phi0, -phi0, None).unwrap();
        let p = observed_quantum(&pure_state(alpha).unwrap(), &settings).unwrap();
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        let bound = cace_lb(&p);
        assert!((bound - (3.0 - 2.0 * 2.0_f64.sqrt())).abs() < 1e-9);
        assert!(
            r.min_ace >= bound - 1e-7,
            "lp = {}, eq6 = {}",
            r.min_ace,
            bound
        );
    }

    #[test]
    fn signaling_like_table_fixture() {
        // x=0 pins (a,b) = (0,0); x=1 pins a=1 with b split evenly.
        // Forced decomposition: f = identity, g(0) = 0, g(1) mixed, so the
        // program is feasible with min ACE exactly 1/2.
        let mut t = [[[0.0_f64; 2]; 2]; 2];
        t[0][0][0] = 1.0;
        t[1][1][0] = 0.5;
        t[1][1][1] = 0.5;
        let p = ObservedDistribution::new(t).unwrap();
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        assert!((r.min_ace - 0.5).abs() < 1e-7, "min_ace = {}", r.min_ace);
    }

    #[test]
    fn truly_signaling_table_is_infeasible() {
        // Bob's marginal depends on x while a is constant: no instrumental
        // decomposition exists.
        let mut t = [[[0.0_f64; 2]; 2]; 2];
        t[0][0][0] = 1.0;
        t[1][0][1] = 1.0;
        let p = ObservedDistribution::new(t).unwrap();
        let r = min_classical_ace(&p).unwrap();
        assert!(!r.feasible);
        assert!(!check_realizability(&p));
    }

    #[test]
    fn do_symmetry_between_outcomes() {
        // |p(0|do(0)) - p(0|do(1))| = |p(1|do(0)) - p(1|do(1))| for any model
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut w = [0.0_f64; 16];
            let mut sum = 0.0;
            for v in w.iter_mut() {
                *v = rng.gen_range(0.0..1.0);
                sum += *v;
            }
            for v in w.iter_mut() {
                *v /= sum;
            }
            let d = do_classical(&ClassicalModel::new(w).unwrap());
            let d0 = (d.p(0, 0) - d.p(1, 0)).abs();
            let d1 = (d.p(0, 1) - d.p(1, 1)).abs();
            assert!((d0 - d1).abs() < 1e-12);
        }
    }
}
