//! Pullback of Hamiltonians and vector fields through canonical charts,
//! and certification that the result is polynomial in the chart's state
//! variables (allowing declared time-singularity denominators).

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::maps::{divisor_catalog, Chart, ChartMode};
use crate::parse::parse;
use crate::poly::Polynomial;
use crate::ratexpr::{identity_images, substitute, RationalExpr};
use crate::systems::{HamiltonianSystem, ParameterSpace};
use crate::table::SymbolRole;
use crate::verify::Status;

/// Certificate that a chart keeps the dynamics polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct PolynomialityCertificate {
    pub chart: String,
    pub mode: &'static str,
    /// The correction term that made the Hamiltonian pullback polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    pub status: Status,
    /// The leftover denominator on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<String>,
    pub millis: u128,
}

impl PolynomialityCertificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Remove all factors from `strip` out of `den`; what survives must be a
/// constant for the expression to count as polynomial.
fn strip_denominator(den: &Polynomial, strip: &[Polynomial]) -> Polynomial {
    let mut den = den.clone();
    for f in strip {
        if f.is_constant() {
            continue;
        }
        while den.divisible_by(f) {
            den = den.exact_div(f);
        }
    }
    den
}

/// Try to synthesize an r0-style correction: when the uncorrected pullback
/// has a simple pole in exactly one chart state `s` whose coefficient `c`
/// is state-free, and some original coordinate `u` pulls back to `1/s`,
/// the correction `c·u` cancels the pole.
fn detect_correction(
    h: &RationalExpr,
    chart: &Chart,
    strip: &[Polynomial],
    space: Option<&ParameterSpace>,
) -> Result<Option<RationalExpr>> {
    let table = &chart.table;
    let mut pulled = pullback_hamiltonian(h, chart, None)?;
    if let Some(s) = space {
        pulled = s.reduce(&pulled)?;
    }
    let rest = strip_denominator(pulled.den(), strip);
    // The leftover must be a single state symbol to first power.
    let states = table.indices_with_role(SymbolRole::State);
    let pole = states.iter().copied().find(|&i| {
        let sym = Polynomial::var(table, i);
        rest.num_terms() == 1 && rest.divisible_by(&sym) && rest.total_degree() == 1
    });
    let Some(pole) = pole else { return Ok(None) };
    // Pole coefficient: (pulled · s) at s = 0.
    let sym = RationalExpr::sym(table, table.name(pole))?;
    let mut at_zero = identity_images(table);
    at_zero[pole] = RationalExpr::zero(table);
    let coeff = substitute(&pulled.mul(&sym), &at_zero)?;
    if states.iter().any(|&i| coeff.num().contains_symbol(i)) {
        return Ok(None);
    }
    // Original coordinate whose pullback is 1/s.
    let inv_s = RationalExpr::one(table).div(&sym)?;
    for &u in &states {
        if chart.inverse[u].rat_equal(&inv_s) {
            let old = RationalExpr::sym(table, table.name(u))?;
            return Ok(Some(coeff.mul(&old)));
        }
    }
    Ok(None)
}

/// Substitute the chart inverse into `h − correction`, expressing the
/// (corrected) Hamiltonian in the chart coordinates.
pub fn pullback_hamiltonian(
    h: &RationalExpr,
    chart: &Chart,
    correction: Option<&RationalExpr>,
) -> Result<RationalExpr> {
    let mut g = h.clone();
    if let Some(c) = correction {
        g = g.sub(c);
    }
    let catalog = divisor_catalog(&chart.table);
    Ok(substitute(&g, &chart.inverse)?.reduce_with(&catalog))
}

/// The vector field generated by `h` (and the chart's time), pushed into
/// the chart coordinates: component k is Σ_j ∂F_k/∂u_j·v_j + ∂F_k/∂t,
/// rewritten via the stored inverse.
pub fn pullback_field(
    h: &RationalExpr,
    chart: &Chart,
    states: &[usize],
    space: Option<&ParameterSpace>,
) -> Result<Vec<RationalExpr>> {
    pullback_field_impl(h, chart, states, space, true)
}

/// Like [`pullback_field`] but without the chart's explicit time derivative
/// (the `∂F/∂t` part, which does not depend on the Hamiltonian). Useful when
/// the pullback must stay linear-homogeneous in `h`.
pub fn pullback_state_field(
    h: &RationalExpr,
    chart: &Chart,
    states: &[usize],
    space: Option<&ParameterSpace>,
) -> Result<Vec<RationalExpr>> {
    pullback_field_impl(h, chart, states, space, false)
}

fn pullback_field_impl(
    h: &RationalExpr,
    chart: &Chart,
    states: &[usize],
    space: Option<&ParameterSpace>,
    include_time: bool,
) -> Result<Vec<RationalExpr>> {
    let table = &chart.table;
    let reduce = |e: &RationalExpr| -> Result<RationalExpr> {
        match space {
            Some(s) => s.reduce(e),
            None => Ok(e.clone()),
        }
    };
    // Cancellation catalog: the standard divisors plus the forward map's
    // pole divisors pushed through the inverse (the denominators of the
    // pullback live on those images).
    let mut catalog = divisor_catalog(table);
    let push_seed = |p: &Polynomial, catalog: &mut Vec<Polynomial>| {
        let p = p.divide_monomial(&p.monomial_content());
        let p = p.scale(&p.rational_content().recip());
        if !p.is_constant() && !catalog.iter().any(|c| c == &p) {
            catalog.push(p);
        }
    };
    let base = divisor_catalog(table);
    let mut factors: Vec<Polynomial> = Vec::new();
    for &k in states {
        let mut den = chart.forward[k].den().clone();
        for f in &base {
            while !f.is_constant() && den.divisible_by(f) {
                den = den.exact_div(f);
                if !factors.contains(f) {
                    factors.push(f.clone());
                }
            }
        }
        if !den.is_constant() && !factors.contains(&den) {
            factors.push(den);
        }
    }
    for f in factors {
        let img = substitute(&RationalExpr::from_poly(f), &chart.inverse)?;
        for g in [img.clone(), reduce(&img)?] {
            push_seed(g.num(), &mut catalog);
            push_seed(g.den(), &mut catalog);
        }
    }
    // The chart is a (possibly time-dependent) symplectic coordinate
    // change, so the pushforward of the Hamiltonian field is the canonical
    // field of K = h∘inverse, plus the chart's own time derivative.
    let k_expr = substitute(h, &chart.inverse)?.reduce_with(&catalog);
    let k_expr = reduce(&k_expr)?.reduce_with(&catalog);
    let mut out = Vec::with_capacity(states.len());
    for pair in states.chunks(2) {
        let (q, p) = (pair[0], pair[1]);
        out.push(k_expr.differentiate(p).reduce_with(&catalog));
        out.push(k_expr.differentiate(q).neg().reduce_with(&catalog));
    }
    if include_time {
        if let Some(ts) = table.find("t") {
            for (slot, &k) in states.iter().enumerate() {
                let dfdt = chart.forward[k].differentiate(ts);
                if dfdt.num().is_zero() {
                    continue;
                }
                let s = substitute(&dfdt, &chart.inverse)?.reduce_with(&catalog);
                out[slot] = out[slot].add(&reduce(&s)?.reduce_with(&catalog));
            }
        }
    }
    for comp in out.iter_mut() {
        *comp = reduce(&comp.reduce_with(&catalog))?.reduce_with(&catalog);
    }
    Ok(out)
}

/// Certify a chart against an explicit Hamiltonian: HAMILTONIAN mode tries
/// no correction first, then the declared (or the r0-style `y`) correction,
/// and records which one succeeded; VECTOR_FIELD mode requires all pulled
/// back field components to be polynomial in the chart states.
pub fn check_chart_h(
    h: &RationalExpr,
    chart: &Chart,
    strip: &[Polynomial],
    space: Option<&ParameterSpace>,
) -> Result<PolynomialityCertificate> {
    let reduce = |e: &RationalExpr| -> Result<RationalExpr> {
        match space {
            Some(s) => s.reduce(e),
            None => Ok(e.clone()),
        }
    };
    let start = Instant::now();
    let table = &chart.table;
    let states = table.indices_with_role(SymbolRole::State);
    match chart.mode {
        ChartMode::Hamiltonian => {
            let fallback = chart
                .correction
                .clone()
                .or_else(|| parse(table, "y").ok());
            let detected = detect_correction(h, chart, strip, space)?;
            let mut offending = None;
            for correction in [None, fallback, detected] {
                let pulled = reduce(&pullback_hamiltonian(h, chart, correction.as_ref())?)?;
                let rest = strip_denominator(pulled.den(), strip);
                if rest.is_constant() {
                    return Ok(PolynomialityCertificate {
                        chart: chart.name.clone(),
                        mode: "HAMILTONIAN",
                        correction: correction.map(|c| c.to_string()),
                        status: Status::Pass,
                        offending: None,
                        millis: start.elapsed().as_millis(),
                    });
                }
                offending = Some(format!("denominator {rest}"));
            }
            Ok(PolynomialityCertificate {
                chart: chart.name.clone(),
                mode: "HAMILTONIAN",
                correction: None,
                status: Status::Fail,
                offending,
                millis: start.elapsed().as_millis(),
            })
        }
        ChartMode::VectorField => {
            let mut offending = None;
            for comp in pullback_field(h, chart, &states, space)? {
                let rest = strip_denominator(comp.den(), strip);
                if !rest.is_constant() {
                    offending = Some(format!("denominator {rest}"));
                    break;
                }
            }
            Ok(PolynomialityCertificate {
                chart: chart.name.clone(),
                mode: "VECTOR_FIELD",
                correction: None,
                status: if offending.is_none() {
                    Status::Pass
                } else {
                    Status::Fail
                },
                offending,
                millis: start.elapsed().as_millis(),
            })
        }
    }
}

/// Certify a cataloged chart of a system.
pub fn check_chart(sys: &HamiltonianSystem, chart: &Chart) -> Result<PolynomialityCertificate> {
    check_chart_h(
        &sys.hamiltonian,
        chart,
        &sys.time_singularities,
        Some(&sys.parameters),
    )
}
