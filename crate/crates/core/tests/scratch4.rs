use painleve_core::holomorphy::pullback_state_field;
use painleve_core::maps::charts;
use painleve_core::systems::{build_system, SystemId};
use painleve_core::table::SymbolRole;

#[test]
fn a4_pulled_field() {
    let sys = build_system(SystemId::A4);
    let states = sys.table.indices_with_role(SymbolRole::State);
    println!("H = {}", sys.hamiltonian);
    for chart in charts(SystemId::A4) {
        let pulled =
            pullback_state_field(&sys.hamiltonian, &chart, &states, Some(&sys.parameters))
                .unwrap();
        for (k, comp) in pulled.iter().enumerate() {
            let den = comp.den();
            let statey = states.iter().any(|&s| den.contains_symbol(s));
            println!(
                "chart {} comp {}: den state-bearing {} den = {}",
                chart.name, k, statey, den
            );
        }
    }
}
