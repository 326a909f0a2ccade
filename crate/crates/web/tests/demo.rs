use colored_limits_web::demo::{coupled_path, drift_curves, mu_integral};

#[test]
fn drift_curves_single_mode() {
    let rows = drift_curves(&[], &[1.0], 1.0, 9).unwrap();
    assert_eq!(rows.len(), 36);
    for r in rows.chunks(4) {
        let x = r[0];
        assert_eq!(r[1], 0.0);
        assert!((r[2] - (2.0 * x).sin() / 8.0).abs() < 1e-12);
        assert!((r[3] - (2.0 * x).sin() / 4.0).abs() < 1e-12);
    }
    assert!(drift_curves(&[], &[1.0], 1.0, 1).is_err());
    assert!(drift_curves(&[0.1, 0.2], &[1.0], 1.0, 5).is_err());
}

#[test]
fn coupled_path_rows() {
    let rows = coupled_path(0.2, 1.0, 1.0, 1.0, 0.8, 0.0, 3, 50).unwrap();
    assert_eq!(rows.len() % 3, 0);
    assert!(rows.len() / 3 <= 51);
    assert_eq!(&rows[..3], &[0.0, 0.8, 0.8]);
    assert_eq!(rows[rows.len() - 3], 1.0);
    assert_eq!(rows, coupled_path(0.2, 1.0, 1.0, 1.0, 0.8, 0.0, 3, 50).unwrap());
    assert!(coupled_path(0.01, 3.0, 1.0, 1.0, 0.8, 0.0, 3, 50).is_err());
    assert!(coupled_path(0.2, -1.0, 1.0, 1.0, 0.8, 0.0, 3, 50).is_err());
}

#[test]
fn mu_integral_gap() {
    let r = mu_integral(0.5, 10, 100, 1).unwrap();
    assert!((r[0] - 0.5).abs() <= 4.0 * r[1]);
    assert_eq!(mu_integral(0.0, 8, 10, 1).unwrap()[0], 0.0);
}
