use painleve_core::ansatz::*;
use painleve_core::maps::charts;
use painleve_core::parse::{parse, parse_poly};
use painleve_core::systems::{build_system, SystemId};

#[test]
fn ansatz_a4_debug() {
    let sys = build_system(SystemId::A4);
    for chart in charts(SystemId::A4) {
        let mut fam = build_ansatz(&sys.table, 3).unwrap();
        impose_holomorphy(
            &mut fam,
            std::slice::from_ref(&chart),
            Some(&sys.parameters),
        )
        .unwrap();
        let sols = solve_family(&fam).unwrap();
        let reduced = sys.parameters.reduce(&sys.hamiltonian).unwrap();
        let inspan = in_span_mod_constants(&fam, &sols, &reduced).unwrap();
        println!(
            "chart {}: rank {} dim-mod-const {} catalog-in-span {}",
            chart.name,
            fam.rank(),
            fam.solution_dim_mod_constants(),
            inspan
        );
    }
}

#[test]
fn ansatz_a4() {
    let sys = build_system(SystemId::A4);
    let mut fam = build_ansatz(&sys.table, 3).unwrap();
    assert_eq!(fam.num_unknowns(), 35);
    let t0 = std::time::Instant::now();
    impose_holomorphy(&mut fam, &charts(SystemId::A4), Some(&sys.parameters)).unwrap();
    println!(
        "A4: rank {} dim {} dim-mod-const {} in {:?}",
        fam.rank(),
        fam.solution_dim(),
        fam.solution_dim_mod_constants(),
        t0.elapsed()
    );
    let sols = solve_family(&fam).unwrap();
    let mono = parse_poly(&sys.table, "x^2*y").unwrap();
    let target = parse(&sys.table, "1").unwrap();
    let h = normalized_representative(&fam, &sols, &mono, &target).unwrap();
    assert!(sys
        .parameters
        .equal_mod_relation(&h, &sys.hamiltonian)
        .unwrap());
    println!("A4 normalized rep equals catalog Hamiltonian");
}

#[test]
fn ansatz_a5() {
    let sys = build_system(SystemId::A5);
    let mut fam = build_ansatz(&sys.table, 4).unwrap();
    assert_eq!(fam.num_unknowns(), 70);
    let t0 = std::time::Instant::now();
    impose_holomorphy(&mut fam, &charts(SystemId::A5), Some(&sys.parameters)).unwrap();
    println!(
        "A5: rank {} dim {} dim-mod-const {} in {:?}",
        fam.rank(),
        fam.solution_dim(),
        fam.solution_dim_mod_constants(),
        t0.elapsed()
    );
    let sols = solve_family(&fam).unwrap();
    let mono = parse_poly(&sys.table, "x^2*y^2").unwrap();
    let target = parse(&sys.table, "1/t").unwrap();
    let h = normalized_representative(&fam, &sols, &mono, &target).unwrap();
    assert!(sys
        .parameters
        .equal_mod_relation(&h, &sys.hamiltonian)
        .unwrap());
    println!("A5 normalized rep equals catalog Hamiltonian");
}
