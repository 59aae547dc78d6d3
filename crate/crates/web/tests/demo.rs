use lr_staggered_web::demo;

#[test]
fn evolution_starts_at_cos_theta() {
    let th = 2.2_f64;
    let q = demo::evolve_nz(5.0, 1.0, 40, th, 0.0, 10.0, 21).unwrap();
    assert_eq!(q.len(), 21);
    assert!((q[0] - th.cos()).abs() < 1e-10);
    assert!(q.iter().all(|x| x.abs() <= 1.0 + 1e-10));
    let mixed = demo::evolve_nz(5.0, 1.0, 40, th, 0.05, 10.0, 21).unwrap();
    assert!(mixed[0] < 0.0 && mixed[0] > th.cos());
    let cl = demo::pendulum_nz(5.0, 1.0, 40, th, 10.0, 21).unwrap();
    assert!((cl[0] - th.cos()).abs() < 1e-12);
}

#[test]
fn husimi_grid_is_a_probability_map() {
    let q = demo::husimi_eigenstate(2.0, 1.0, 24, 0.0, 3, 16, 12).unwrap();
    assert_eq!(q.len(), 16 * 12);
    assert!(q.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
    assert!(demo::husimi_eigenstate(2.0, 1.0, 24, 0.5, 0, 4, 4).is_err());
}

#[test]
fn separatrix_value() {
    assert!((demo::separatrix(5.0, 1.0, 50).unwrap() - (2.5 + 25.0)).abs() < 1e-12);
}
