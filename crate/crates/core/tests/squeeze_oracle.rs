//! Cross-checks of the state constructors against a dense
//! matrix-exponential of the squeeze generator (r/2)(a†² − a²): an oracle
//! that shares no code with the series/operator constructors.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use nclight_core::{pasvs, sns, squeezed_vacuum, CutoffPolicy, FockState};

/// exp(K) by Taylor series with scaling and squaring.
fn expm(k: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = k.iter().map(|v| v.abs()).fold(0.0f64, f64::max) * k.nrows() as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = k / 2.0f64.powi(squarings as i32);
    let dim = k.nrows();
    let mut term = DMatrix::<f64>::identity(dim, dim);
    let mut sum = DMatrix::<f64>::identity(dim, dim);
    for order in 1..=24 {
        term = (&term * &scaled) / order as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn squeeze_matrix(r: f64, dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    let ad = a.transpose();
    let gen = (&ad * &ad - &a * &a) * (r / 2.0);
    expm(&gen)
}

/// Column `m` of the squeeze matrix: S(r)|m⟩ on the truncation.
fn squeeze_column(r: f64, dim: usize, m: usize) -> Vec<f64> {
    let s = squeeze_matrix(r, dim);
    (0..dim).map(|n| s[(n, m)]).collect()
}

fn compare_low_amplitudes(state: &FockState, oracle: &[f64], n_compare: usize, tol: f64) {
    // fix the oracle's sign to the state's convention
    let anchor = oracle
        .iter()
        .enumerate()
        .find(|(_, v)| v.abs() > 1e-6)
        .map(|(n, _)| n)
        .unwrap();
    let sign = if oracle[anchor] * state.amplitude(anchor).re < 0.0 {
        -1.0
    } else {
        1.0
    };
    for n in 0..n_compare {
        let dev = (state.amplitude(n).re - sign * oracle[n]).abs();
        assert!(
            dev < tol,
            "n={n}: state {} vs oracle {}",
            state.amplitude(n).re,
            sign * oracle[n]
        );
        assert_eq!(state.amplitude(n).im, 0.0);
    }
}

#[test]
fn squeezed_vacuum_matches_matrix_exponential() {
    let policy = CutoffPolicy::default();
    let state = squeezed_vacuum(0.5, &policy).unwrap();
    let oracle = squeeze_column(0.5, 60, 0);
    compare_low_amplitudes(&state, &oracle, 40, 1e-9);
}

#[test]
fn sns_matches_matrix_exponential() {
    let policy = CutoffPolicy::default();
    let state = sns(2, 0.4, &policy).unwrap();
    let oracle = squeeze_column(0.4, 100, 2);
    compare_low_amplitudes(&state, &oracle, 60, 1e-9);
}

#[test]
fn sns_higher_m_matches_matrix_exponential() {
    let policy = CutoffPolicy::default();
    for (m, r) in [(3usize, 0.7f64), (5, 1.0)] {
        let state = sns(m, r, &policy).unwrap();
        let oracle = squeeze_column(r, 160, m);
        compare_low_amplitudes(&state, &oracle, 60, 1e-8);
    }
}

#[test]
fn pasvs_two_term_superposition_identity() {
    // a†²S(r)|0⟩ ∝ μ√2 S(r)|2⟩ + ν S(r)|0⟩, built from raw oracle columns
    // so no phase convention interferes
    let policy = CutoffPolicy::default();
    for r in [0.2f64, 0.6, 1.1] {
        let dim = 140;
        let s2 = squeeze_column(r, dim, 2);
        let s0 = squeeze_column(r, dim, 0);
        let (mu, nu) = (r.cosh(), r.sinh());
        let combo: Vec<C64> = (0..dim)
            .map(|n| C64::new(mu * std::f64::consts::SQRT_2 * s2[n] + nu * s0[n], 0.0))
            .collect();
        let combo = FockState::from_amplitudes(combo).unwrap();
        let direct = pasvs(2, r, &policy).unwrap();
        let n_compare = 60.min(direct.cutoff());
        for n in 0..n_compare {
            let dev = (combo.amplitude(n) - direct.amplitude(n)).norm();
            assert!(dev < 1e-10, "r={r} n={n}: dev={dev:.2e}");
        }
    }
}

#[test]
fn printed_eq11_prefactor_is_not_normalized() {
    // ‖μ√2 S|2⟩ + ν S|0⟩‖² = 3μ² − 1, so the printed 1/(μ√(2(3μ²−1)))
    // prefactor leaves norm² = 1/(2μ²); numeric renormalization is what
    // makes the identity hold
    let r = 0.6f64;
    let dim = 140;
    let s2 = squeeze_column(r, dim, 2);
    let s0 = squeeze_column(r, dim, 0);
    let (mu, nu) = (r.cosh(), r.sinh());
    let printed_prefactor = 1.0 / (mu * (2.0 * (3.0 * mu * mu - 1.0)).sqrt());
    let norm_sq: f64 = (0..dim)
        .map(|n| {
            let v = printed_prefactor * (mu * std::f64::consts::SQRT_2 * s2[n] + nu * s0[n]);
            v * v
        })
        .sum();
    assert!(
        (norm_sq - 1.0 / (2.0 * mu * mu)).abs() < 1e-9,
        "norm² = {norm_sq}"
    );
}
