use std::f64::consts::FRAC_PI_2;
use twomode_demo::{correlation_grid, fock_distributions, phase_distribution};

#[test]
fn grid_layout_and_trailer() {
    let v = correlation_grid(100, 20.0, 1.0, FRAC_PI_2, -FRAC_PI_2, 41).unwrap();
    assert_eq!(v.len(), 41 * 41 + 4);
    let tail = &v[41 * 41..];
    assert_eq!(tail[0], 41.0);
    let max = v[..41 * 41].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert_eq!(tail[1], max);
    assert!((tail[1] / tail[3] - 1.0).abs() < 0.1);
    assert!((0.0..=1.0).contains(&tail[2]));
}

#[test]
fn distributions_are_normalized() {
    let n = 60;
    let v = fock_distributions(n, 15.0).unwrap();
    assert_eq!(v.len(), 3 * (n + 1) + 2);
    for k in 0..3 {
        let total: f64 = v[k * (n + 1)..(k + 1) * (n + 1)].iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
    assert!(v[3 * (n + 1)] > v[3 * (n + 1) + 1]);
}

#[test]
fn phase_peak_is_reported() {
    let v = phase_distribution(50, 25.0, 2.0, 360).unwrap();
    assert_eq!(v.len(), 362);
    assert!((v[360] - 2.0).abs() <= std::f64::consts::TAU / 360.0);
    assert!(v[361] > 0.0);
}

#[test]
fn invalid_input_is_an_error_message() {
    let e = correlation_grid(100, 200.0, 1.0, 0.0, 0.0, 11).unwrap_err();
    assert!(e.contains("beta_sq"));
    assert!(fock_distributions(10, 0.0).is_err());
    assert!(phase_distribution(10, 5.0, 0.0, 0).is_err());
}
