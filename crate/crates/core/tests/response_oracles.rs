use std::f64::consts::PI;

use udwsim::response::{
    heaviside, response_numeric_extrapolated, response_offdiag, response_offdiag_numeric_contour, total_response,
    transition_probability, ComponentKind, EpsilonLadder, ResponseModel, SwitchingWindow,
};

/// Independent J0 oracle: (1/π) ∫_0^π cos(x sin t) dt on a dense trapezoid grid.
fn j0_oracle(x: f64) -> f64 {
    let n = 2000;
    let h = PI / n as f64;
    let mut acc = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..n {
        acc += (x * (i as f64 * h).sin()).cos();
    }
    acc * h / PI
}

fn cutoff(d: f64) -> f64 {
    400.0 * d.max(1.0)
}

#[test]
fn three_offdiagonal_evaluations_agree() {
    for &d in &[0.5, 1.0, 2.0, 5.0] {
        for i in 0..10 {
            let nu = -5.0 + (4.9 / 9.0) * i as f64;
            let closed = response_offdiag(nu, d).unwrap();
            let contour = response_offdiag_numeric_contour(nu, d, 128).unwrap();
            let fourier = response_numeric_extrapolated(nu, d, EpsilonLadder::default(), cutoff(d)).unwrap();
            let oracle = 0.5 * j0_oracle(nu * d);
            assert!((closed - oracle).abs() < 1e-12, "closed vs oracle at ({nu}, {d})");
            assert!((closed - contour).abs() < 1e-3, "closed {closed} contour {contour} at ({nu}, {d})");
            assert!((closed - fourier).abs() < 1e-3, "closed {closed} fourier {fourier} at ({nu}, {d})");
            assert!((contour - fourier).abs() < 1e-3);
        }
    }
}

#[test]
fn excitation_side_vanishes_numerically() {
    for &nu in &[0.3, 1.0, 4.0] {
        let fourier = response_numeric_extrapolated(nu, 1.0, EpsilonLadder::default(), 400.0).unwrap();
        assert!(fourier.abs() < 1e-4, "{fourier}");
        assert_eq!(response_offdiag_numeric_contour(nu, 1.0, 64).unwrap(), 0.0);
    }
}

#[test]
fn small_separation_reaches_single_location_value() {
    for &d in &[1e-2, 1e-3, 0.0] {
        for &nu in &[-3.0, -1.0, -0.2] {
            let fourier = response_numeric_extrapolated(nu, d, EpsilonLadder::default(), 400.0).unwrap();
            assert!((fourier - 0.5).abs() < 1e-3, "d = {d}, ν = {nu}: {fourier}");
            assert!((response_offdiag(nu, d).unwrap() - 0.5).abs() < 1e-3);
        }
    }
}

#[test]
fn gaussian_window_rate_approaches_response() {
    // (ν, δ) = (-1, 1) and (-1, 0); the δ = 0 case reduces to the single-location total.
    for &d in &[1.0, 0.0] {
        let target = total_response(-1.0, d).unwrap();
        let mut deviations = Vec::new();
        for &t in &[5.0, 10.0, 20.0] {
            let w = SwitchingWindow::gaussian(t).unwrap();
            let diag = transition_probability(-1.0, w, d, ComponentKind::Diagonal).unwrap();
            let off = transition_probability(-1.0, w, d, ComponentKind::OffDiagonal).unwrap();
            let rate = 2.0 * (diag.rate + off.rate);
            deviations.push(((rate - target) / target).abs());
        }
        assert!(deviations[2] < 0.02, "d = {d}: {deviations:?}");
        assert!(deviations[2] <= deviations[0] + 1e-9, "d = {d}: {deviations:?}");
    }
}

#[test]
fn model_total_matches_component_sum() {
    let m = ResponseModel::new(1.3).unwrap();
    for i in 0..50 {
        let nu = -6.0 + 0.25 * i as f64;
        let sum: f64 = m.components(nu).iter().map(|c| c.value).sum();
        assert!((sum - m.total(nu)).abs() < 1e-15);
        assert!((m.total(nu) + m.diff(nu) - 2.0 * heaviside(-nu)).abs() < 1e-15);
    }
}
