use painleve_core::maps::*;
use painleve_core::systems::*;
use painleve_core::verify::*;

#[test]
fn d6_symplectic_all() {
    let gs = generators(SystemId::D6);
    for m in gs.all() {
        let r = check_symplectic(m).unwrap();
        assert!(r.passed(), "{} not symplectic: {:?}", m.name, r.witness);
    }
}

#[test]
fn d6_backlund_s3_and_pi3() {
    let sys = build_system(SystemId::D6);
    let gs = generators(SystemId::D6);
    for n in ["s3", "pi3"] {
        let r = check_backlund(gs.get(n).unwrap(), &sys).unwrap();
        assert!(r.passed(), "{n}: {:?}", r.witness);
    }
}

#[test]
fn d6_coxeter() {
    let r = check_coxeter(&generators(SystemId::D6)).unwrap();
    assert!(r.passed(), "{:?}", r.witness);
}

#[test]
fn d6_translation_t1() {
    let gs = generators(SystemId::D6);
    let word = ["pi1", "s5", "s4", "s3", "s2", "s1", "s0", "s2", "s3", "s4", "s5"];
    let r = check_translation(&gs, &word, &[0, 0, 0, 0, 0, -1, 1], "T1").unwrap();
    assert!(r.passed(), "{:?}", r.witness);
}

#[test]
fn d6_poisson_s2() {
    let gs = generators(SystemId::D6);
    let s2 = gs.get("s2").unwrap();
    for g in poisson_probe_set(&s2.source_table) {
        let r = check_poisson_series(s2, &g, "s2-probe").unwrap();
        assert!(r.passed(), "probe {g}: {:?}", r.witness);
    }
}

#[test]
fn d6_divisors() {
    let sys = build_system(SystemId::D6);
    for row in d6_divisor_table() {
        let r = check_invariant_divisor(&sys, &row).unwrap();
        assert!(r.passed(), "{}: {:?}", row.name, r.witness);
    }
}
