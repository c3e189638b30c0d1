use painleve_core::numeric::*;
use painleve_core::poly::Q;
use painleve_core::systems::{build_system, SystemId};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[test]
fn drift_and_order() {
    let sys = build_system(SystemId::D6Auto);
    let assignment: Vec<(&str, Q)> = vec![
        ("a1", q(1, 7)), ("a2", q(1, 9)), ("a3", q(1, 11)),
        ("a4", q(1, 13)), ("a5", q(1, 17)), ("a6", q(1, 19)),
    ];
    // check what the basis actually is
    let basis: Vec<&str> = sys.parameters.basis.iter().map(|&i| sys.table.name(i)).collect();
    println!("basis: {basis:?}");
    let ns = NumericSystem::new(&sys, &assignment).unwrap().with_value("eta", 2.0).unwrap();
    let init = [0.5, 1.0/3.0, 0.2, 1.0/7.0];
    let traj = integrate(&ns, init, 0.0, 1.0, 1e-3).unwrap();
    let drift = hamiltonian_drift(&ns, &traj);
    println!("drift h=1e-3: {drift:e}  (len {})", traj.len());
    assert!(drift < 1e-9);
    // order-4 convergence by step halving against h/8 reference
    let h = 1e-2;
    let e = |h: f64| {
        let t = integrate(&ns, init, 0.0, 1.0, h).unwrap();
        let r = integrate(&ns, init, 0.0, 1.0, h / 8.0).unwrap();
        let a = t.last().unwrap().vars;
        let b = r.last().unwrap().vars;
        (0..4).map(|j| (a[j] - b[j]).abs()).fold(0.0, f64::max)
    };
    let ratio = e(h) / e(h / 2.0);
    println!("step-halving ratio: {ratio}");
    assert!(ratio > 12.0 && ratio < 20.0);
    // fd check
    let st = traj[0];
    let err = fd_check(&ns, &st, 1e-6);
    println!("fd err: {err:e}");
    assert!(err < 1e-6);
}

#[test]
fn backlund_numeric() {
    let sys = build_system(SystemId::D6);
    let assignment: Vec<(&str, Q)> = vec![
        ("a0", q(1, 7)), ("a1", q(1, 9)), ("a2", q(1, 11)),
        ("b2", q(1, 13)), ("b3", q(1, 17)), ("b4", q(1, 19)),
    ];
    let basis: Vec<&str> = sys.parameters.basis.iter().map(|&i| sys.table.name(i)).collect();
    println!("basis: {basis:?}");
    let gens = painleve_core::maps::generators(SystemId::D6);
    let g = gens.get("s2").unwrap();
    let dev = numeric_backlund_check(&sys, g, &assignment, [0.5, 1.0/3.0, 0.21, 1.0/7.0], 2.0, 2.5, 1e-3).unwrap();
    println!("s2 deviation: {dev:e}");
    assert!(dev < 1e-6);
}
