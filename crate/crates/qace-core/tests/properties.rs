//! Cross-module invariants checked on randomized models with fixed seeds.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qace_core::causal::{ace_from_do, cace_lb, qace, qace_lb};
use qace_core::oracle::{check_realizability, min_classical_ace, witness_ace, witness_model};
use qace_core::qmath::{partial_trace_a, ComplexMatrix};
use qace_core::scalar::Scalar;
use qace_core::scenario::{
    do_classical, observed_classical, observed_quantum, ClassicalModel, Settings,
};
use qace_core::states::{noisy_state, pure_state, NoiseParams, TwoQubitState};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix2(rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    let entries = (0..4)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(2, 2, entries).unwrap()
}

fn random_settings(rng: &mut ChaCha8Rng) -> Settings<f64> {
    use std::f64::consts::PI;
    Settings::new(
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        None,
    )
    .unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState<f64> {
    let alpha = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    if rng.gen_bool(0.5) {
        pure_state(alpha).unwrap()
    } else {
        let noise = NoiseParams::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)).unwrap();
        noisy_state(alpha, noise).unwrap()
    }
}

fn random_classical(rng: &mut ChaCha8Rng) -> ClassicalModel<f64> {
    let mut w = [0.0_f64; 16];
    // mix dense mixtures with sparse ones to probe polytope faces
    let support = if rng.gen_bool(0.3) {
        rng.gen_range(1..=4)
    } else {
        16
    };
    let mut sum = 0.0;
    for _ in 0..support {
        let i = rng.gen_range(0..16);
        let v = rng.gen_range(0.0..1.0);
        w[i] += v;
        sum += v;
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    ClassicalModel::new(w).unwrap()
}

#[test]
fn tensor_is_multiplicative_under_matmul() {
    let mut rng = rng(101);
    for _ in 0..50 {
        let a = random_matrix2(&mut rng);
        let b = random_matrix2(&mut rng);
        let c = random_matrix2(&mut rng);
        let d = random_matrix2(&mut rng);
        let lhs = a
            .tensor(&b)
            .unwrap()
            .matmul(&c.tensor(&d).unwrap())
            .unwrap();
        let rhs = a
            .matmul(&c)
            .unwrap()
            .tensor(&b.matmul(&d).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }
}

#[test]
fn trace_of_tensor_factorizes() {
    let mut rng = rng(102);
    for _ in 0..50 {
        let a = random_matrix2(&mut rng);
        let b = random_matrix2(&mut rng);
        let lhs = a.tensor(&b).unwrap().trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_of_product_recovers_right_factor() {
    let mut rng = rng(103);
    for _ in 0..50 {
        // normalize both factors to unit trace
        let mut a = random_matrix2(&mut rng);
        let mut b = random_matrix2(&mut rng);
        let ta = a.trace().unwrap();
        let tb = b.trace().unwrap();
        if ta.norm() < 1e-3 || tb.norm() < 1e-3 {
            continue;
        }
        a = a.scale(ta.inv());
        b = b.scale(tb.inv());
        let reduced = partial_trace_a(&a.tensor(&b).unwrap()).unwrap();
        assert!(reduced.approx_eq(&b, 1e-12));
    }
}

#[test]
fn adjoint_involution_is_exact() {
    let mut rng = rng(104);
    for _ in 0..20 {
        let a = random_matrix2(&mut rng);
        assert!(a.adjoint().adjoint().approx_eq(&a, 0.0));
    }
}

#[test]
fn qace_equals_direct_observable_differences() {
    // Born-route cross-check: max_{a,a',b} Tr[(N^a_b - N^{a'}_b) rho_B]
    let mut rng = rng(105);
    for _ in 0..200 {
        let rho = random_state(&mut rng);
        let s = random_settings(&mut rng);
        let via_do = qace(&rho, &s).unwrap();
        let rho_b = rho.rho_b();
        let bob = s.bob_observables();
        let projs = [bob[0].projectors(), bob[1].projectors()];
        let mut direct: f64 = 0.0;
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..2 {
                    let diff = projs[a]
                        .outcome(b as u8)
                        .sub(projs[a2].outcome(b as u8))
                        .unwrap();
                    let t = diff.matmul(&rho_b).unwrap().trace().unwrap().re;
                    direct = direct.max(t);
                }
            }
        }
        assert!((via_do - direct).abs() < 1e-12);
    }
}

#[test]
fn quantum_lower_bound_never_exceeds_qace() {
    let mut rng = rng(106);
    for _ in 0..300 {
        let rho = random_state(&mut rng);
        let s = random_settings(&mut rng);
        let p = observed_quantum(&rho, &s).unwrap();
        let lb = qace_lb(&p).value;
        let q = qace(&rho, &s).unwrap();
        assert!(lb <= q + 1e-9, "lb = {lb}, qace = {q}");
    }
}

#[test]
fn classical_bound_never_exceeds_classical_ace() {
    let mut rng = rng(107);
    for _ in 0..500 {
        let m = random_classical(&mut rng);
        let bound = cace_lb(&observed_classical(&m));
        let ace = ace_from_do(&do_classical(&m));
        assert!(bound <= ace + 1e-12, "bound = {bound}, ace = {ace}");
    }
}

#[test]
fn shared_kernel_between_observed_and_do() {
    // p(b|do(a)) must follow from the same weights that explain p(a,b|x):
    // recompute both from the weight vector and compare
    let mut rng = rng(108);
    for _ in 0..100 {
        let m = random_classical(&mut rng);
        let p = observed_classical(&m);
        let d = do_classical(&m);
        let strategies = qace_core::oracle::enumerate_strategies();
        for a in 0..2 {
            for b in 0..2 {
                let direct: f64 = strategies
                    .iter()
                    .zip(m.weights())
                    .filter(|(s, _)| s.g.apply(a as u8) == b as u8)
                    .map(|(_, w)| *w)
                    .sum();
                assert!((d.p(a, b) - direct).abs() < 1e-12);
            }
        }
        for x in 0..2 {
            let total: f64 = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .map(|(a, b)| p.p(x, a, b))
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn oracle_dominates_closed_form_bound_on_classical_models() {
    let mut rng = rng(109);
    for _ in 0..100 {
        let m = random_classical(&mut rng);
        let p = observed_classical(&m);
        let r = min_classical_ace(&p).unwrap();
        assert!(r.feasible);
        let bound = cace_lb(&p);
        assert!(
            r.min_ace >= bound - 1e-7,
            "lp = {}, eq = {bound}",
            r.min_ace
        );
        // the generating model itself realizes its ACE, so the LP optimum
        // cannot exceed it
        let ace = ace_from_do(&do_classical(&m));
        assert!(r.min_ace <= ace + 1e-7, "lp = {}, gen = {ace}", r.min_ace);
    }
}

#[test]
fn oracle_witness_reproduces_distribution_and_ace() {
    let mut rng = rng(110);
    for _ in 0..50 {
        let m = random_classical(&mut rng);
        let p = observed_classical(&m);
        let r = min_classical_ace(&p).unwrap();
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
    }
}

#[test]
fn quantum_distributions_are_always_realizable() {
    let mut rng = rng(111);
    for _ in 0..100 {
        let rho = random_state(&mut rng);
        let s = random_settings(&mut rng);
        let p = observed_quantum(&rho, &s).unwrap();
        assert!(check_realizability(&p));
    }
}

#[test]
fn hardware_branch_distributions_stay_sound() {
    use qace_core::measurement::HardwareParams;
    use std::f64::consts::PI;
    let mut rng = rng(112);
    for _ in 0..100 {
        let rho = random_state(&mut rng);
        let mut s = random_settings(&mut rng);
        let hw = HardwareParams::new(
            rng.gen_range(0.6 * PI..PI),
            rng.gen_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2),
        )
        .unwrap();
        s = s.with_hardware(hw);
        let p = observed_quantum(&rho, &s).unwrap();
        let q = qace(&rho, &s).unwrap();
        assert!(qace_lb(&p).value <= q + 1e-9);
        assert!(check_realizability(&p));
    }
}

#[test]
fn f32_pipeline_tracks_f64() {
    let alpha64 = 0.6_f64;
    let s64 = Settings::new(0.3_f64, -0.9, 0.8, -0.8, None).unwrap();
    let r64 = qace_core::causal::report(&pure_state(alpha64).unwrap(), &s64).unwrap();
    let s32 = Settings::new(0.3_f32, -0.9, 0.8, -0.8, None).unwrap();
    let r32 = qace_core::causal::report(&pure_state(0.6_f32).unwrap(), &s32).unwrap();
    assert!((f64::from(r32.cace_lb_raw) - r64.cace_lb_raw).abs() < 1e-3);
    assert!((f64::from(r32.qace) - r64.qace).abs() < 1e-3);
    assert!((f64::from(r32.qace_lb_raw) - r64.qace_lb_raw).abs() < 1e-3);
}

#[test]
fn generic_gap_optimum_consistent_across_scalars() {
    let (a64, p64, g64) = qace_core::families::ms1_max_violation::<f64>();
    let (a32, p32, g32) = qace_core::families::ms1_max_violation::<f32>();
    assert!((f64::from(a32) - a64).abs() < 1e-3);
    assert!((f64::from(p32) - p64).abs() < 1e-3);
    assert!((f64::from(g32) - g64).abs() < 1e-4);
    assert!((g64 - qace_core::families::max_violation_gap::<f64>()).abs() < 1e-8);
}

#[test]
fn scalar_literals_are_exact_for_f64() {
    assert_eq!(f64::lit(0.25), 0.25);
    assert_eq!(f32::lit(0.5), 0.5_f32);
}
