use painleve_core::holomorphy::*;
use painleve_core::maps::*;
use painleve_core::ratexpr::substitute;
use painleve_core::systems::*;

#[test]
fn chart_roundtrip_all() {
    for id in SystemId::ALL {
        let mut cs = charts(id);
        if id == SystemId::D6 {
            cs.extend(d6_composite_charts());
        }
        for c in cs {
            // forward ∘ inverse = identity on every symbol
            for (idx, f) in c.forward.iter().enumerate() {
                let rt = substitute(f, &c.inverse).unwrap();
                let idsym = painleve_core::ratexpr::RationalExpr::sym(&c.table, c.table.name(idx)).unwrap();
                assert!(rt.rat_equal(&idsym), "{:?} chart {} roundtrip fails at {}", id, c.name, c.table.name(idx));
            }
        }
    }
}

#[test]
fn holomorphy_d6_singles() {
    let sys = build_system(SystemId::D6);
    for c in charts(SystemId::D6) {
        let cert = check_chart(&sys, &c).unwrap();
        assert!(cert.passed(), "chart {}: {:?}", c.name, cert.offending);
    }
}

#[test]
fn holomorphy_d6_composites() {
    let sys = build_system(SystemId::D6);
    for c in d6_composite_charts() {
        let cert = check_chart(&sys, &c).unwrap();
        assert!(cert.passed(), "chart {}: {:?}", c.name, cert.offending);
    }
}

#[test]
fn holomorphy_other_systems() {
    for id in [SystemId::D6Auto, SystemId::A5, SystemId::A4] {
        let sys = build_system(id);
        for c in charts(id) {
            let cert = check_chart(&sys, &c).unwrap();
            assert!(cert.passed(), "{:?} chart {}: {:?}", id, c.name, cert.offending);
        }
    }
}
