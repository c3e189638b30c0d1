//! Floating-point cross-checks: fixed-step RK4 trajectory integration,
//! first-integral drift, numeric Bäcklund solution-mapping, and
//! finite-difference validation of the symbolic vector fields.
//!
//! Doubles only; exactness lives in the symbolic layer. The integrator is
//! deliberately fixed-step so trajectories are deterministic and
//! reproducible in acceptance tests.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::maps::{divisor_catalog, BirationalSymplecticMap};
use crate::poly::{Polynomial, Q};
use crate::ratexpr::RationalExpr;
use crate::systems::{vector_field, HamiltonianSystem};
use crate::table::{SymbolRole, SymbolTable};

/// Default distance each accepted step must keep from every singular divisor.
pub const DEFAULT_GUARD: f64 = 1e-3;

/// One accepted integration step.
#[derive(Debug, Clone, Copy)]
pub struct NumericState {
    pub t: f64,
    /// Values of (x, y, z, w).
    pub vars: [f64; 4],
}

/// A system prepared for floating-point evaluation: the field and
/// Hamiltonian plus a full table-indexed value vector with the parameter
/// assignment baked in.
#[derive(Debug, Clone)]
pub struct NumericSystem {
    pub table: Arc<SymbolTable>,
    pub states: [usize; 4],
    pub time: Option<usize>,
    field: [RationalExpr; 4],
    hamiltonian: RationalExpr,
    /// Divisors the trajectory must keep away from (field denominators and
    /// declared time singularities).
    guards: Vec<Polynomial>,
    /// Table-indexed scratch values; parameter slots hold the assignment.
    base: Vec<f64>,
    pub guard: f64,
}

impl NumericSystem {
    /// Prepare a system at an exact parameter assignment for the free basis;
    /// eliminated parameters are resolved through the relation.
    pub fn new(sys: &HamiltonianSystem, assignment: &[(&str, Q)]) -> Result<NumericSystem> {
        let mut base = vec![0.0; sys.table.len()];
        for (name, value) in sys.parameters.resolve(assignment)? {
            if let Some(idx) = sys.table.find(&name) {
                base[idx] = value.to_f64().ok_or(Error::NonFinite(f64::NAN))?;
            }
        }
        // The deformation symbols (eta) are parameters of the autonomous
        // system's table but not of its relation space; callers set them
        // through the assignment, which `resolve` has already handled.
        let v = vector_field(sys);
        let mut guards: Vec<Polynomial> = sys.time_singularities.clone();
        for f in divisor_catalog(&sys.table) {
            let is_guard = v.components.iter().any(|c| c.den().divisible_by(&f));
            let is_state_or_time = (0..sys.table.len()).any(|i| {
                matches!(
                    sys.table.role(i),
                    SymbolRole::State | SymbolRole::Time
                ) && f.contains_symbol(i)
            });
            if is_guard && is_state_or_time && !guards.iter().any(|g| g == &f) {
                guards.push(f);
            }
        }
        Ok(NumericSystem {
            table: sys.table.clone(),
            states: sys.states,
            time: sys.time,
            field: v.components,
            hamiltonian: sys.hamiltonian.clone(),
            guards,
            base,
            guard: DEFAULT_GUARD,
        })
    }

    /// Override the guard radius δ.
    pub fn with_guard(mut self, guard: f64) -> NumericSystem {
        self.guard = guard;
        self
    }

    /// Set an extra symbol value (e.g. the deformation modulus `eta`).
    pub fn with_value(mut self, name: &str, value: f64) -> Result<NumericSystem> {
        let idx = self.table.index_of(name)?;
        self.base[idx] = value;
        Ok(self)
    }

    fn values_at(&self, state: &NumericState) -> Vec<f64> {
        let mut v = self.base.clone();
        for (j, &k) in self.states.iter().enumerate() {
            v[k] = state.vars[j];
        }
        if let Some(ti) = self.time {
            v[ti] = state.t;
        }
        v
    }

    fn check_guards(&self, state: &NumericState) -> Result<()> {
        let v = self.values_at(state);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(state.t));
        }
        for g in &self.guards {
            let value = g.eval_f64(&v).abs();
            if value < self.guard {
                return Err(Error::SingularityApproached {
                    divisor: g.to_string(),
                    value,
                    t: state.t,
                });
            }
        }
        Ok(())
    }

    fn derivative(&self, t: f64, vars: [f64; 4]) -> Result<[f64; 4]> {
        let v = self.values_at(&NumericState { t, vars });
        let mut out = [0.0; 4];
        for (j, comp) in self.field.iter().enumerate() {
            out[j] = comp.eval_f64(&v);
            if !out[j].is_finite() {
                return Err(Error::NonFinite(t));
            }
        }
        Ok(out)
    }

    /// Hamiltonian value at a state.
    pub fn hamiltonian_at(&self, state: &NumericState) -> f64 {
        self.hamiltonian.eval_f64(&self.values_at(state))
    }

    /// Evaluate an arbitrary expression over the system table at a state.
    pub fn eval_at(&self, e: &RationalExpr, state: &NumericState) -> f64 {
        e.eval_f64(&self.values_at(state))
    }
}

/// Classical fixed-step fourth-order Runge–Kutta from `t0` to `t1` with step
/// `h` (sign-adjusted to the integration direction). Every accepted state
/// must respect the singularity guard.
pub fn integrate(
    ns: &NumericSystem,
    init: [f64; 4],
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<Vec<NumericState>> {
    let h = if t1 >= t0 { h.abs() } else { -h.abs() };
    let steps = ((t1 - t0) / h).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut state = NumericState { t: t0, vars: init };
    ns.check_guards(&state)?;
    out.push(state);
    for i in 0..steps {
        let NumericState { t, vars } = state;
        let k1 = ns.derivative(t, vars)?;
        let k2 = ns.derivative(t + h / 2.0, advance(vars, k1, h / 2.0))?;
        let k3 = ns.derivative(t + h / 2.0, advance(vars, k2, h / 2.0))?;
        let k4 = ns.derivative(t + h, advance(vars, k3, h))?;
        let mut next = vars;
        for j in 0..4 {
            next[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        state = NumericState {
            t: t0 + (i + 1) as f64 * h,
            vars: next,
        };
        ns.check_guards(&state)?;
        out.push(state);
    }
    Ok(out)
}

fn advance(vars: [f64; 4], k: [f64; 4], h: f64) -> [f64; 4] {
    let mut out = vars;
    for j in 0..4 {
        out[j] += h * k[j];
    }
    out
}

/// Relative first-integral drift over a trajectory:
/// max |H(state) − H(init)| / max(1, |H(init)|).
pub fn hamiltonian_drift(ns: &NumericSystem, trajectory: &[NumericState]) -> f64 {
    let Some(first) = trajectory.first() else {
        return 0.0;
    };
    let h0 = ns.hamiltonian_at(first);
    let scale = h0.abs().max(1.0);
    trajectory
        .iter()
        .map(|s| (ns.hamiltonian_at(s) - h0).abs() / scale)
        .fold(0.0, f64::max)
}

/// Numeric Bäcklund check: integrate from `init`, independently integrate
/// from the generator's image of `init` (with transformed parameters and
/// time), and report the maximum deviation between the generator's image of
/// trajectory 1 and trajectory 2 at matching times.
pub fn numeric_backlund_check(
    sys: &HamiltonianSystem,
    map: &BirationalSymplecticMap,
    assignment: &[(&str, Q)],
    init: [f64; 4],
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<f64> {
    let ns1 = NumericSystem::new(sys, assignment)?;
    let traj1 = integrate(&ns1, init, t0, t1, h)?;

    // Transformed parameter assignment and initial state.
    let start = traj1[0];
    let values0 = ns1.values_at(&start);
    let image_at = |state: &NumericState, name: &str| -> Result<f64> {
        let v = ns1.values_at(state);
        Ok(map.image(name)?.eval_f64(&v))
    };
    let mut assignment2: Vec<(&str, Q)> = Vec::new();
    let mut q_values: Vec<Q> = Vec::with_capacity(sys.table.len());
    for (idx, v) in values0.iter().enumerate() {
        let _ = idx;
        q_values.push(approx_q(*v));
    }
    // Evaluate parameter images exactly on the rationalized assignment so the
    // second trajectory's parameters satisfy the relation exactly.
    for &idx in &sys.parameters.basis {
        let name = sys.table.name(idx);
        let q = map.image(name)?.eval_q(&q_values)?;
        assignment2.push((name, q));
    }
    let ns2 = NumericSystem::new(sys, &assignment2)?;

    let tau = |state: &NumericState| -> Result<f64> {
        match sys.time {
            Some(_) => image_at(state, "t"),
            None => Ok(state.t),
        }
    };
    let s0 = tau(&traj1[0])?;
    let s1 = tau(traj1.last().unwrap())?;
    let init2 = [
        image_at(&start, sys.table.name(sys.states[0]))?,
        image_at(&start, sys.table.name(sys.states[1]))?,
        image_at(&start, sys.table.name(sys.states[2]))?,
        image_at(&start, sys.table.name(sys.states[3]))?,
    ];
    let traj2 = integrate(&ns2, init2, s0, s1, h)?;

    let mut max_dev: f64 = 0.0;
    for (s1state, s2state) in traj1.iter().zip(traj2.iter()) {
        for (j, &k) in sys.states.iter().enumerate() {
            let mapped = image_at(s1state, sys.table.name(k))?;
            max_dev = max_dev.max((mapped - s2state.vars[j]).abs());
        }
    }
    Ok(max_dev)
}

fn approx_q(v: f64) -> Q {
    // Exact binary-to-rational conversion of an f64.
    Q::from_float(v).unwrap_or_else(|| Q::from_integer(0.into()))
}

/// Finite-difference validation: compare the symbolic field against centered
/// differences of the Hamiltonian at a point, returning the maximum relative
/// error. The canonical pairing gives dx/dt = ∂H/∂y, dy/dt = −∂H/∂x, etc.
pub fn fd_check(ns: &NumericSystem, state: &NumericState, eps: f64) -> f64 {
    let base = ns.values_at(state);
    let dh = |idx: usize| -> f64 {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[idx] += eps;
        minus[idx] -= eps;
        (ns.hamiltonian.eval_f64(&plus) - ns.hamiltonian.eval_f64(&minus)) / (2.0 * eps)
    };
    let [ix, iy, iz, iw] = ns.states;
    let expected = [dh(iy), -dh(ix), dh(iw), -dh(iz)];
    let mut max_rel: f64 = 0.0;
    for (j, comp) in ns.field.iter().enumerate() {
        let sym = comp.eval_f64(&base);
        let rel = (sym - expected[j]).abs() / sym.abs().max(1.0);
        max_rel = max_rel.max(rel);
    }
    max_rel
}

/// CSV dump of a trajectory: `t,x,y,z,w,H` with one row per accepted step.
pub fn trajectory_csv(ns: &NumericSystem, trajectory: &[NumericState]) -> String {
    let mut out = String::from("t,x,y,z,w,H\n");
    for s in trajectory {
        let h = ns.hamiltonian_at(s);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.t, s.vars[0], s.vars[1], s.vars[2], s.vars[3], h
        )
        .unwrap();
    }
    out
}
