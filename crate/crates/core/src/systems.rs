//! Catalog of the coupled Painlevé-type Hamiltonian systems.
//!
//! Each system carries a fixed symbol table (states `x,y,z,w`, a time symbol
//! `t` where the flow is non-autonomous, and its parameter symbols), the
//! exact rational Hamiltonian, the affine relation satisfied by the
//! parameters, and helpers to derive the Hamiltonian vector field and to
//! resolve a numeric parameter assignment from a free basis.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parse::parse;
use crate::poly::{Polynomial, Q};
use crate::ratexpr::{identity_images, substitute, RationalExpr};
use crate::table::{SymbolRole, SymbolTable};

/// Identifier of a system in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemId {
    D6,
    B6A,
    B6B,
    D72,
    D6Auto,
    A5,
    A4,
}

impl SystemId {
    pub const ALL: [SystemId; 7] = [
        SystemId::D6,
        SystemId::B6A,
        SystemId::B6B,
        SystemId::D72,
        SystemId::D6Auto,
        SystemId::A5,
        SystemId::A4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemId::D6 => "d6",
            SystemId::B6A => "b6a",
            SystemId::B6B => "b6b",
            SystemId::D72 => "d72",
            SystemId::D6Auto => "d6auto",
            SystemId::A5 => "a5",
            SystemId::A4 => "a4",
        }
    }

    pub fn parse(s: &str) -> Result<SystemId> {
        match s.to_ascii_lowercase().as_str() {
            "d6" => Ok(SystemId::D6),
            "b6a" => Ok(SystemId::B6A),
            "b6b" => Ok(SystemId::B6B),
            "d72" => Ok(SystemId::D72),
            "d6auto" => Ok(SystemId::D6Auto),
            "a5" => Ok(SystemId::A5),
            "a4" => Ok(SystemId::A4),
            other => Err(Error::Parse(format!("unknown system id `{other}`"))),
        }
    }
}

impl std::fmt::Display for SystemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kind selector for the scalar one-degree-of-freedom Hamiltonians that the
/// coupled systems are assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    /// Sixth Painlevé Hamiltonian; 5 parameters.
    Vi,
    /// Alternate form of the sixth Painlevé Hamiltonian; 5 parameters.
    ViTilde,
    /// Fifth Painlevé Hamiltonian; 3 parameters.
    V,
    /// Fourth Painlevé Hamiltonian; 2 parameters.
    Iv,
    /// Autonomous sixth-type Hamiltonian with modulus `eta`; 5 parameters
    /// plus `eta` passed as the time-like argument.
    Auto,
}

/// Scalar building-block Hamiltonian in a single canonical pair `(q, p)`.
///
/// `t` is the time symbol for `Vi`/`ViTilde`/`V`/`Iv` and the modulus `eta`
/// for `Auto`. `params` must have length 5 (`Vi`, `ViTilde`, `Auto`),
/// 3 (`V`) or 2 (`Iv`).
pub fn scalar_hamiltonian(
    kind: ScalarKind,
    q: &RationalExpr,
    p: &RationalExpr,
    t: &RationalExpr,
    params: &[RationalExpr],
) -> Result<RationalExpr> {
    let expected = match kind {
        ScalarKind::Vi | ScalarKind::ViTilde | ScalarKind::Auto => 5,
        ScalarKind::V => 3,
        ScalarKind::Iv => 2,
    };
    if params.len() != expected {
        return Err(Error::Arity(format!(
            "expected {expected} parameters, got {}",
            params.len()
        )));
    }
    let table = q.table();
    let one = RationalExpr::one(table);
    match kind {
        ScalarKind::Vi => {
            // (1/(t(t-1))) [ p^2 (q-t)(q-1)q
            //   - {(d0-1)(q-1)q + d3 (q-t)q + d4 (q-t)(q-1)} p + d2(d1+d2) q ]
            let (d0, d1, d2, d3, d4) =
                (&params[0], &params[1], &params[2], &params[3], &params[4]);
            let qt = q.sub(t);
            let q1 = q.sub(&one);
            let quad = p.pow(2).mul(&qt).mul(&q1).mul(q);
            let lin = d0
                .sub(&one)
                .mul(&q1)
                .mul(q)
                .add(&d3.mul(&qt).mul(q))
                .add(&d4.mul(&qt).mul(&q1))
                .mul(p);
            let cst = d2.mul(&d1.add(d2)).mul(q);
            quad.sub(&lin).add(&cst).div(&t.mul(&t.sub(&one)))
        }
        ScalarKind::ViTilde => {
            // (1/(t(t-1))) [ p^2 (tq-1)(q-1)q
            //   - {(g0-1) t (q-1)q + g1 (q-1)(tq-1) + g3 q(tq-1)} p + g2(g2+g4) t q ]
            let (g0, g1, g2, g3, g4) =
                (&params[0], &params[1], &params[2], &params[3], &params[4]);
            let tq1 = t.mul(q).sub(&one);
            let q1 = q.sub(&one);
            let quad = p.pow(2).mul(&tq1).mul(&q1).mul(q);
            let lin = g0
                .sub(&one)
                .mul(t)
                .mul(&q1)
                .mul(q)
                .add(&g1.mul(&q1).mul(&tq1))
                .add(&g3.mul(q).mul(&tq1))
                .mul(p);
            let cst = g2.mul(&g2.add(g4)).mul(t).mul(q);
            quad.sub(&lin).add(&cst).div(&t.mul(&t.sub(&one)))
        }
        ScalarKind::V => {
            // (q^2 p^2 - q^2 p)/t - q p^2 + (1 + g3/t) q p + g2 p - g1 q/t
            let (g1, g2, g3) = (&params[0], &params[1], &params[2]);
            let qp = q.mul(p);
            Ok(q.pow(2)
                .mul(&p.pow(2))
                .sub(&q.pow(2).mul(p))
                .div(t)?
                .sub(&q.mul(&p.pow(2)))
                .add(&one.add(&g3.div(t)?).mul(&qp))
                .add(&g2.mul(p))
                .sub(&g1.mul(q).div(t)?))
        }
        ScalarKind::Iv => {
            // q^2 p + q p^2 - t q p - g1 q + g2 p
            let (g1, g2) = (&params[0], &params[1]);
            Ok(q.pow(2)
                .mul(p)
                .add(&q.mul(&p.pow(2)))
                .sub(&t.mul(q).mul(p))
                .sub(&g1.mul(q))
                .add(&g2.mul(p)))
        }
        ScalarKind::Auto => {
            // q(q-1)(q-eta) p^2 - {b0 q(q-1) + b4 (q-1)(q-eta) + b3 q(q-eta)} p
            //   + b2(b1+b2) q      (here `t` plays the role of eta)
            let (b0, b1, b2, b3, b4) =
                (&params[0], &params[1], &params[2], &params[3], &params[4]);
            let q1 = q.sub(&one);
            let qe = q.sub(t);
            let quad = q.mul(&q1).mul(&qe).mul(&p.pow(2));
            let lin = b0
                .mul(q)
                .mul(&q1)
                .add(&b4.mul(&q1).mul(&qe))
                .add(&b3.mul(q).mul(&qe))
                .mul(p);
            let cst = b2.mul(&b1.add(b2)).mul(q);
            Ok(quad.sub(&lin).add(&cst))
        }
    }
}

/// Parameter space of a system: the table parameters, the affine relation(s)
/// they satisfy, a free basis, and elimination data.
#[derive(Debug, Clone)]
pub struct ParameterSpace {
    pub table: Arc<SymbolTable>,
    /// Indices of all parameter symbols in the table.
    pub parameters: Vec<usize>,
    /// Affine relations `r = 0` satisfied by the table parameters.
    pub relations: Vec<Polynomial>,
    /// Indices of the free basis parameters.
    pub basis: Vec<usize>,
    /// The parameter eliminated when reducing modulo the residual relation,
    /// with its expression in the basis. `None` when the table parameters
    /// are already free.
    pub elimination: Option<(usize, RationalExpr)>,
    /// Derived parameter combinations that are not table symbols, as
    /// `(name, expression in the basis)`.
    pub derived: Vec<(String, RationalExpr)>,
}

impl ParameterSpace {
    /// Substitution images that replace the eliminated parameter by its basis
    /// expression and leave every other symbol fixed. Applying these to both
    /// sides of an identity reduces it modulo the parameter relation.
    pub fn reduction_images(&self) -> Vec<RationalExpr> {
        let mut images = identity_images(&self.table);
        if let Some((idx, expr)) = &self.elimination {
            images[*idx] = expr.clone();
        }
        images
    }

    /// Reduce an expression modulo the parameter relation.
    pub fn reduce(&self, e: &RationalExpr) -> Result<RationalExpr> {
        if self.elimination.is_none() {
            return Ok(e.clone());
        }
        substitute(e, &self.reduction_images())
    }

    /// Equality of two expressions modulo the parameter relation.
    pub fn equal_mod_relation(&self, a: &RationalExpr, b: &RationalExpr) -> Result<bool> {
        Ok(self.reduce(a)?.rat_equal(&self.reduce(b)?))
    }

    /// Resolve a full exact assignment from values for the free basis.
    ///
    /// Returns `(name, value)` pairs for every table parameter followed by
    /// every derived parameter. The assignment must cover exactly the basis.
    pub fn resolve(&self, assignment: &[(&str, Q)]) -> Result<Vec<(String, Q)>> {
        let mut point: Vec<Q> = vec![Q::default(); self.table.len()];
        let mut seen = vec![false; self.table.len()];
        for (name, value) in assignment {
            let idx = self.table.index_of(name)?;
            if !self.basis.contains(&idx) {
                return Err(Error::Parse(format!("`{name}` is not a free basis symbol")));
            }
            if seen[idx] {
                return Err(Error::Parse(format!("duplicate assignment for `{name}`")));
            }
            seen[idx] = true;
            point[idx] = value.clone();
        }
        for &idx in &self.basis {
            if !seen[idx] {
                return Err(Error::Parse(format!(
                    "missing assignment for basis symbol `{}`",
                    self.table.name(idx)
                )));
            }
        }
        let mut out = Vec::new();
        for &idx in &self.parameters {
            let value = match &self.elimination {
                Some((eidx, expr)) if *eidx == idx => expr.eval_q(&point)?,
                _ => point[idx].clone(),
            };
            point[idx] = value.clone();
            out.push((self.table.name(idx).to_string(), value));
        }
        for (name, expr) in &self.derived {
            out.push((name.clone(), expr.eval_q(&point)?));
        }
        Ok(out)
    }
}

/// Resolve a full parameter assignment from basis values (free function form).
pub fn resolve_parameters(space: &ParameterSpace, assignment: &[(&str, Q)]) -> Result<Vec<(String, Q)>> {
    space.resolve(assignment)
}

/// A coupled Hamiltonian system from the catalog.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    pub id: SystemId,
    pub table: Arc<SymbolTable>,
    /// Indices of `x, y, z, w` in the table.
    pub states: [usize; 4],
    /// Index of the time symbol; `None` for the autonomous system.
    pub time: Option<usize>,
    pub parameters: ParameterSpace,
    pub hamiltonian: RationalExpr,
    pub autonomous: bool,
    /// Polynomials in `t` whose zeros the numeric integrator must avoid.
    pub time_singularities: Vec<Polynomial>,
}

impl HamiltonianSystem {
    /// Convenience: parse an expression over this system's table.
    pub fn expr(&self, input: &str) -> Result<RationalExpr> {
        parse(&self.table, input)
    }
}

/// The Hamiltonian vector field (dx/dt, dy/dt, dz/dt, dw/dt) of a system.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub table: Arc<SymbolTable>,
    pub states: [usize; 4],
    pub components: [RationalExpr; 4],
}

/// Derive the vector field `(∂H/∂y, −∂H/∂x, ∂H/∂w, −∂H/∂z)`.
pub fn vector_field(sys: &HamiltonianSystem) -> VectorField {
    vector_field_of(&sys.hamiltonian, sys.states)
}

/// Vector field of an arbitrary Hamiltonian over a table with states at the
/// given indices `[x, y, z, w]`.
pub fn vector_field_of(h: &RationalExpr, states: [usize; 4]) -> VectorField {
    let [ix, iy, iz, iw] = states;
    VectorField {
        table: h.table().clone(),
        states,
        components: [
            h.differentiate(iy),
            h.differentiate(ix).neg(),
            h.differentiate(iw),
            h.differentiate(iz).neg(),
        ],
    }
}

fn param_indices(table: &Arc<SymbolTable>) -> Vec<usize> {
    table.indices_with_role(SymbolRole::Parameter)
}

fn state_indices(table: &Arc<SymbolTable>) -> [usize; 4] {
    [
        table.index_of("x").unwrap(),
        table.index_of("y").unwrap(),
        table.index_of("z").unwrap(),
        table.index_of("w").unwrap(),
    ]
}

/// Build a parameter space with a single affine relation, eliminating the
/// parameter named `eliminated`. `relation` and `solved` are expression
/// strings over the table.
fn single_relation_space(
    table: &Arc<SymbolTable>,
    relation: &str,
    eliminated: &str,
    solved: &str,
) -> ParameterSpace {
    let parameters = param_indices(table);
    let rel = parse(table, relation).unwrap();
    assert!(rel.is_polynomial_form());
    let eidx = table.index_of(eliminated).unwrap();
    let basis: Vec<usize> = parameters.iter().copied().filter(|&i| i != eidx).collect();
    ParameterSpace {
        table: table.clone(),
        parameters,
        relations: vec![rel.num().clone()],
        basis,
        elimination: Some((eidx, parse(table, solved).unwrap())),
        derived: Vec::new(),
    }
}

/// Build one of the catalog systems.
pub fn build_system(id: SystemId) -> HamiltonianSystem {
    match id {
        SystemId::D6 => build_d6(),
        SystemId::B6A => build_b6a(),
        SystemId::B6B => build_b6b(),
        SystemId::D72 => build_d72(),
        SystemId::D6Auto => build_d6auto(),
        SystemId::A5 => build_a5(),
        SystemId::A4 => build_a4(),
    }
}

fn d6_table() -> Arc<SymbolTable> {
    use SymbolRole::*;
    SymbolTable::new(&[
        ("x", State),
        ("y", State),
        ("z", State),
        ("w", State),
        ("t", Time),
        ("a0", Parameter),
        ("a1", Parameter),
        ("a2", Parameter),
        ("g1", Parameter),
        ("b2", Parameter),
        ("b3", Parameter),
        ("b4", Parameter),
    ])
}

fn alpha_table(n_params: usize, time: bool, eta: bool) -> Arc<SymbolTable> {
    use SymbolRole::*;
    let mut syms: Vec<(String, SymbolRole)> = vec![
        ("x".into(), State),
        ("y".into(), State),
        ("z".into(), State),
        ("w".into(), State),
    ];
    if time {
        syms.push(("t".into(), Time));
    }
    for i in 0..n_params {
        syms.push((format!("a{i}"), Parameter));
    }
    if eta {
        syms.push(("eta".into(), Deformation));
    }
    let borrowed: Vec<(&str, SymbolRole)> = syms.iter().map(|(n, r)| (n.as_str(), *r)).collect();
    SymbolTable::new(&borrowed)
}

fn sym(table: &Arc<SymbolTable>, name: &str) -> RationalExpr {
    RationalExpr::sym(table, name).unwrap()
}

fn t_singularities(table: &Arc<SymbolTable>, with_t_minus_1: bool) -> Vec<Polynomial> {
    match table.find("t") {
        None => Vec::new(),
        Some(_) => {
            let mut v = vec![parse(table, "t").unwrap().num().clone()];
            if with_t_minus_1 {
                v.push(parse(table, "t - 1").unwrap().num().clone());
            }
            v
        }
    }
}

fn build_d6() -> HamiltonianSystem {
    let table = d6_table();
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    // Eliminated parameters expressed through the free basis (a0,a1,a2,g1,b2,b3,b4):
    // a3 = g1 + 2 b2 + b3, a4 = g1 + b4, b0 = a0 + g1, b1 = a1 + 2 a2 + g1.
    let first = scalar_hamiltonian(
        ScalarKind::Vi,
        &x,
        &y,
        &t,
        &[e("a0"), e("a1"), e("a2"), e("g1 + 2*b2 + b3"), e("g1 + b4")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::Vi,
        &z,
        &w,
        &t,
        &[e("a0 + g1"), e("a1 + 2*a2 + g1"), e("b2"), e("b3"), e("b4")],
    )
    .unwrap();
    let coupling = e("2*(x - t)*y*z*((z - 1)*w + b2) / (t*(t - 1))");
    let hamiltonian = first.add(&second).add(&coupling);

    let mut space = single_relation_space(
        &table,
        "a0 + a1 + 2*a2 + 2*g1 + 2*b2 + b3 + b4 - 1",
        "g1",
        "(1 - a0 - a1 - 2*a2 - 2*b2 - b3 - b4) / 2",
    );
    // The derived parameters of the underlying pair of 5-parameter systems,
    // written over the free basis (a0,a1,a2,b2,b3,b4); g1 itself is derived
    // when resolving numeric assignments from that basis.
    space.derived = vec![
        ("a3".to_string(), e("(1 - a0 - a1 - 2*a2 + 2*b2 + b3 - b4) / 2")),
        ("a4".to_string(), e("(1 - a0 - a1 - 2*a2 - 2*b2 - b3 + b4) / 2")),
        ("b0".to_string(), e("(1 + a0 - a1 - 2*a2 - 2*b2 - b3 - b4) / 2")),
        ("b1".to_string(), e("(1 - a0 + a1 + 2*a2 - 2*b2 - b3 - b4) / 2")),
    ];
    // g1 is not free once the relation is imposed: the numeric basis is
    // (a0,a1,a2,b2,b3,b4) with g1 = a4 - b4 recovered from the elimination.
    HamiltonianSystem {
        id: SystemId::D6,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: t_singularities(&table, true),
        table,
    }
}

fn build_b6a() -> HamiltonianSystem {
    let table = alpha_table(7, true, false);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    let first = scalar_hamiltonian(
        ScalarKind::ViTilde,
        &x,
        &y,
        &t,
        &[e("2*a0 + a1"), e("a1"), e("a2"), e("a3 + 2*a4 + a5"), e("a3 + a6")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::Vi,
        &z,
        &w,
        &t,
        &[e("2*a0 + a1 + 2*a2 + a3"), e("a1 + a3"), e("a4"), e("a5"), e("a6")],
    )
    .unwrap();
    let coupling = e("2*x*z*((t*x - 1)*y + t*a2)*((z - 1)*w + a4) / (t*(t - 1))");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "2*a0 + 2*a1 + 2*a2 + 2*a3 + 2*a4 + a5 + a6 - 1",
        "a0",
        "(1 - 2*a1 - 2*a2 - 2*a3 - 2*a4 - a5 - a6) / 2",
    );
    HamiltonianSystem {
        id: SystemId::B6A,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: t_singularities(&table, true),
        table,
    }
}

fn build_b6b() -> HamiltonianSystem {
    let table = alpha_table(7, true, false);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    let first = scalar_hamiltonian(
        ScalarKind::Vi,
        &x,
        &y,
        &t,
        &[e("a0"), e("a1"), e("a2"), e("a3 + a5 + 2*a6"), e("a3 + 2*a4 + a5")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::ViTilde,
        &z,
        &w,
        &t,
        &[e("a0 + a3"), e("a1 + 2*a2 + a3"), e("a4"), e("a5 + 2*a6"), e("a5")],
    )
    .unwrap();
    let coupling = e("2*(x - t)*y*(z - 1)*w / (t*(t - 1))");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "a0 + a1 + 2*a2 + 2*a3 + 2*a4 + 2*a5 + 2*a6 - 1",
        "a0",
        "1 - a1 - 2*a2 - 2*a3 - 2*a4 - 2*a5 - 2*a6",
    );
    HamiltonianSystem {
        id: SystemId::B6B,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: t_singularities(&table, true),
        table,
    }
}

fn build_d72() -> HamiltonianSystem {
    let table = alpha_table(7, true, false);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    let first = scalar_hamiltonian(
        ScalarKind::ViTilde,
        &x,
        &y,
        &t,
        &[e("2*a0 + a1"), e("a1"), e("a2"), e("a3 + a5 + 2*a6"), e("a3 + 2*a4 + a5")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::ViTilde,
        &z,
        &w,
        &t,
        &[e("2*a0 + a1 + 2*a2 + a3"), e("a1 + a3"), e("a4"), e("a5 + 2*a6"), e("a5")],
    )
    .unwrap();
    let coupling = e("2*x*((t*x - 1)*y + t*a2)*(z - 1)*w / (t*(t - 1))");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "a0 + a1 + a2 + a3 + a4 + a5 + a6 - 1/2",
        "a0",
        "1/2 - a1 - a2 - a3 - a4 - a5 - a6",
    );
    HamiltonianSystem {
        id: SystemId::D72,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: t_singularities(&table, true),
        table,
    }
}

fn build_d6auto() -> HamiltonianSystem {
    let table = alpha_table(7, false, true);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"));
    let eta = sym(&table, "eta");
    let first = scalar_hamiltonian(
        ScalarKind::Auto,
        &x,
        &y,
        &eta,
        &[e("a0"), e("a1"), e("a2"), e("a3 + 2*a4 + a5"), e("a3 + a6")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::Auto,
        &z,
        &w,
        &eta,
        &[e("a0 + a3"), e("a1 + 2*a2 + a3"), e("a4"), e("a5"), e("a6")],
    )
    .unwrap();
    let coupling = e("2*(x - eta)*y*z*((z - 1)*w + a4)");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "a0 + a1 + 2*a2 + 2*a3 + 2*a4 + a5 + a6",
        "a0",
        "0 - a1 - 2*a2 - 2*a3 - 2*a4 - a5 - a6",
    );
    HamiltonianSystem {
        id: SystemId::D6Auto,
        states: state_indices(&table),
        time: None,
        parameters: space,
        hamiltonian,
        autonomous: true,
        time_singularities: Vec::new(),
        table,
    }
}

fn build_a5() -> HamiltonianSystem {
    let table = alpha_table(6, true, false);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    let first = scalar_hamiltonian(
        ScalarKind::V,
        &x,
        &y,
        &t,
        &[e("a1"), e("a2 + a4"), e("a1 + a3 + a5")],
    )
    .unwrap();
    let second = scalar_hamiltonian(
        ScalarKind::V,
        &z,
        &w,
        &t,
        &[e("a3"), e("a4"), e("a1 + a3 + a5")],
    )
    .unwrap();
    let coupling = e("0 - 2*y*z*w + 2*x*y*z*w/t");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "a0 + a1 + a2 + a3 + a4 + a5 - 1",
        "a0",
        "1 - a1 - a2 - a3 - a4 - a5",
    );
    HamiltonianSystem {
        id: SystemId::A5,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: t_singularities(&table, false),
        table,
    }
}

fn build_a4() -> HamiltonianSystem {
    let table = alpha_table(5, true, false);
    let e = |s: &str| parse(&table, s).unwrap();
    let (x, y, z, w, t) = (sym(&table, "x"), sym(&table, "y"), sym(&table, "z"), sym(&table, "w"), sym(&table, "t"));
    let first =
        scalar_hamiltonian(ScalarKind::Iv, &x, &y, &t, &[e("a1"), e("a2 + a4")]).unwrap();
    let second = scalar_hamiltonian(ScalarKind::Iv, &z, &w, &t, &[e("a3"), e("a4")]).unwrap();
    let coupling = e("2*y*z*w");
    let hamiltonian = first.add(&second).add(&coupling);
    let space = single_relation_space(
        &table,
        "a0 + a1 + a2 + a3 + a4 - 1",
        "a0",
        "1 - a1 - a2 - a3 - a4",
    );
    HamiltonianSystem {
        id: SystemId::A4,
        states: state_indices(&table),
        time: table.find("t"),
        parameters: space,
        hamiltonian,
        autonomous: false,
        time_singularities: Vec::new(),
        table,
    }
}

/// Serializable description of a system for the JSON envelope.
#[derive(Debug, Serialize)]
pub struct SystemEnvelope {
    pub id: SystemId,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub relations: Vec<String>,
    pub hamiltonian: String,
}

pub fn envelope(sys: &HamiltonianSystem) -> SystemEnvelope {
    SystemEnvelope {
        id: sys.id,
        variables: sys
            .states
            .iter()
            .chain(sys.time.iter())
            .map(|&i| sys.table.name(i).to_string())
            .collect(),
        parameters: sys
            .parameters
            .parameters
            .iter()
            .map(|&i| sys.table.name(i).to_string())
            .collect(),
        relations: sys
            .parameters
            .relations
            .iter()
            .map(|r| format!("{r} = 0"))
            .collect(),
        hamiltonian: sys.hamiltonian.to_string(),
    }
}
