//! Theorem-checking layer: symplecticity, Bäcklund symmetry, Coxeter
//! relations, translations, invariant divisors, first integrals and the
//! Poisson-series formula, each producing a [`VerificationReport`].

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{
    compose_word, divisor_catalog, generators, identity_witness, pushforward_field,
    BirationalSymplecticMap, GeneratorSet,
};
use crate::parse::parse;
use crate::poly::Polynomial;
use crate::ratexpr::{identity_images, substitute, RationalExpr};
use crate::systems::{build_system, vector_field, HamiltonianSystem, SystemId};
use crate::table::SymbolRole;

/// Pass/fail status of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one verification, serializable as a JSON line.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub system: String,
    pub subject: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn build(
        check: &str,
        system: &str,
        subject: &str,
        witness: Option<String>,
        start: Instant,
    ) -> Self {
        VerificationReport {
            check: check.to_string(),
            system: system.to_string(),
            subject: subject.to_string(),
            status: if witness.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            witness,
            millis: start.elapsed().as_millis(),
        }
    }
}

/// Canonical Poisson bracket on a table whose state symbols come in
/// (q,p) pairs in table order, normalized so that {p,q}=1.
pub fn poisson_bracket(f: &RationalExpr, g: &RationalExpr, states: &[usize]) -> RationalExpr {
    let mut acc = RationalExpr::zero(f.table());
    for pair in states.chunks(2) {
        let (q, p) = (pair[0], pair[1]);
        acc = acc
            .add(&f.differentiate(p).mul(&g.differentiate(q)))
            .sub(&f.differentiate(q).mul(&g.differentiate(p)));
    }
    acc
}

/// PASS iff the map preserves every canonical bracket among the state
/// images, i.e. JᵀΩJ = Ω for the standard form dy∧dx + dw∧dz.
pub fn check_symplectic(map: &BirationalSymplecticMap) -> Result<VerificationReport> {
    let start = Instant::now();
    let table = &map.source_table;
    let states = table.indices_with_role(SymbolRole::State);
    let mut witness = None;
    'outer: for (a, &i) in states.iter().enumerate() {
        for &j in states.iter().skip(a + 1) {
            let ui = RationalExpr::sym(table, table.name(i))?;
            let uj = RationalExpr::sym(table, table.name(j))?;
            let expected = poisson_bracket(&ui, &uj, &states);
            let got = poisson_bracket(&map.images[i], &map.images[j], &states);
            if !got.rat_equal(&expected) {
                witness = Some(format!(
                    "{{{}, {}}}: {}",
                    table.name(i),
                    table.name(j),
                    got.residual(&expected)
                ));
                break 'outer;
            }
        }
    }
    Ok(VerificationReport::build(
        "symplectic",
        map.source.as_str(),
        &map.name,
        witness,
        start,
    ))
}

/// PASS iff the map sends solutions to solutions: the pushforward of the
/// system's vector field equals the field with the map's parameter action
/// applied, evaluated at the image point, modulo the parameter relation.
pub fn check_backlund(
    map: &BirationalSymplecticMap,
    sys: &HamiltonianSystem,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let v = vector_field(sys);
    let pushed = pushforward_field(map, &v, sys.states)?;
    let catalog = divisor_catalog(&sys.table);
    let mut witness = None;
    for (k, comp) in pushed.iter().enumerate() {
        let target = substitute(&v.components[k], &map.images)?.reduce_with(&catalog);
        let lhs = sys.parameters.reduce(&comp.reduce_with(&catalog))?;
        let rhs = sys.parameters.reduce(&target)?;
        if !lhs.rat_equal(&rhs) {
            witness = Some(format!(
                "component {}: {}",
                sys.table.name(sys.states[k]),
                lhs.residual(&rhs)
            ));
            break;
        }
    }
    Ok(VerificationReport::build(
        "backlund",
        sys.id.as_str(),
        &map.name,
        witness,
        start,
    ))
}

/// PASS iff a word composes to the identity modulo the parameter relation.
pub fn check_relation(
    sys: &HamiltonianSystem,
    gen_set: &GeneratorSet,
    word: &[&str],
    subject: &str,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let maps: Vec<&BirationalSymplecticMap> =
        word.iter().map(|n| gen_set.get(n)).collect::<Result<_>>()?;
    let composed = compose_word(&maps)?;
    let witness = identity_witness(&composed, &sys.parameters)?
        .map(|(sym, res)| format!("{sym}: {res}"));
    Ok(VerificationReport::build(
        "relation",
        sys.id.as_str(),
        subject,
        witness,
        start,
    ))
}

/// PASS iff every pair of reflections satisfies its Coxeter relation
/// (s_i s_j)^{m(i,j)} = 1, with m read off the Dynkin diagram.
pub fn check_coxeter(gen_set: &GeneratorSet) -> Result<VerificationReport> {
    let start = Instant::now();
    let sys = build_system(gen_set.system);
    let n = gen_set.reflections.len();
    let mut witness = None;
    'outer: for i in 0..n {
        for j in i..n {
            let m = gen_set.coxeter[i][j] as usize;
            let mut word = Vec::with_capacity(2 * m);
            for _ in 0..m {
                word.push(&gen_set.reflections[i]);
                word.push(&gen_set.reflections[j]);
            }
            let composed = compose_word(&word)?;
            if let Some((sym, res)) = identity_witness(&composed, &sys.parameters)? {
                witness = Some(format!(
                    "(s{i} s{j})^{m} is not the identity at {sym}: {res}"
                ));
                break 'outer;
            }
        }
    }
    Ok(VerificationReport::build(
        "coxeter",
        gen_set.system.as_str(),
        "coxeter-matrix",
        witness,
        start,
    ))
}

/// Affine action of a map on the parameter vector: `p ↦ M p + v`.
pub fn parameter_action(map: &BirationalSymplecticMap) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let table = &map.source_table;
    let params = table.indices_with_role(SymbolRole::Parameter);
    let n = params.len();
    let zeros = vec![BigRational::zero(); table.len()];
    let mut matrix = vec![vec![BigRational::zero(); n]; n];
    let mut shift = vec![BigRational::zero(); n];
    for (r, &pi) in params.iter().enumerate() {
        let img = &map.images[pi];
        if !img.is_polynomial_form() || img.num().total_degree() > 1 {
            return Err(Error::NotApplicable(map.name.clone()));
        }
        shift[r] = img.eval_q(&zeros)?;
        for (c, &pj) in params.iter().enumerate() {
            let d = img.differentiate(pj);
            if !(d.is_polynomial_form() && d.num().is_constant()) {
                return Err(Error::NotApplicable(map.name.clone()));
            }
            matrix[r][c] = d.num().constant_term();
        }
    }
    Ok((matrix, shift))
}

fn compose_affine(
    a: &(Vec<Vec<BigRational>>, Vec<BigRational>),
    b: &(Vec<Vec<BigRational>>, Vec<BigRational>),
) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    // Apply b first, then a: p ↦ Ma (Mb p + vb) + va.
    let n = a.1.len();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    let mut v = a.1.clone();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                m[i][j] += &a.0[i][k] * &b.0[k][j];
            }
            v[i] += &a.0[i][j] * &b.1[j];
        }
    }
    (m, v)
}

/// Affine parameter action of a word (rightmost generator acts first).
pub fn word_parameter_action(
    gen_set: &GeneratorSet,
    word: &[&str],
) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = build_system(gen_set.system)
        .table
        .indices_with_role(SymbolRole::Parameter)
        .len();
    let mut matrix = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    let mut acc = (matrix, vec![BigRational::zero(); n]);
    // Words act left-to-right: the first named generator acts first.
    for name in word {
        let act = parameter_action(gen_set.get(name)?)?;
        acc = compose_affine(&act, &acc);
    }
    Ok(acc)
}

/// Root multiplicities λ of a system: the coefficients of each parameter
/// in the normalization relation (λ·p = const along the affine subspace).
pub fn root_multiplicities(sys: &HamiltonianSystem) -> Vec<BigRational> {
    let table = &sys.table;
    let params = table.indices_with_role(SymbolRole::Parameter);
    let rel = &sys.parameters.relations[0];
    let re = RationalExpr::from_poly(rel.clone());
    params
        .iter()
        .map(|&p| re.differentiate(p).num().constant_term())
        .collect()
}

/// PASS iff the word's parameter action restricts to the translation by
/// `expected_shift` on the affine subspace λ·p = 1: the generators act
/// linearly, so this means zero affine part and M − I = shift ⊗ λ.
pub fn check_translation(
    gen_set: &GeneratorSet,
    word: &[&str],
    expected_shift: &[i64],
    subject: &str,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let sys = build_system(gen_set.system);
    let lambda = root_multiplicities(&sys);
    let (matrix, shift) = word_parameter_action(gen_set, word)?;
    let n = shift.len();
    let mut witness = None;
    'outer: for i in 0..n {
        let si = BigRational::from_integer(expected_shift[i].into());
        for j in 0..n {
            let mut want = &si * &lambda[j];
            if i == j {
                want += BigRational::one();
            }
            if matrix[i][j] != want {
                witness = Some(format!(
                    "linear part ({i},{j}) = {} ≠ {}",
                    matrix[i][j], want
                ));
                break 'outer;
            }
        }
        if !shift[i].is_zero() {
            witness = Some(format!("affine part [{i}] = {} ≠ 0", shift[i]));
            break;
        }
    }
    Ok(VerificationReport::build(
        "translation",
        gen_set.system.as_str(),
        subject,
        witness,
        start,
    ))
}

/// One row of a system's invariant-divisor table.
pub struct DivisorRow {
    /// Name used in reports (e.g. `f2`).
    pub name: &'static str,
    /// The divisor polynomial, in the (possibly changed) coordinates.
    pub divisor: &'static str,
    /// Parameter substitutions expressing the condition (e.g. α2 = 0).
    pub condition: &'static [(&'static str, &'static str)],
    /// Optional symplectic change of coordinates applied first:
    /// (forward images, inverse images) as override lists.
    pub change: Option<(
        &'static [(&'static str, &'static str)],
        &'static [(&'static str, &'static str)],
    )>,
}

/// The seven-row invariant-divisor table of the D6 system.
pub fn d6_divisor_table() -> Vec<DivisorRow> {
    vec![
        DivisorRow {
            name: "f0",
            divisor: "x - t",
            condition: &[("a0", "0")],
            change: None,
        },
        // The divisor at x = ∞ is certified in the r2 chart coordinates.
        DivisorRow {
            name: "f1",
            divisor: "x",
            condition: &[("a1", "0")],
            change: Some((
                &[("x", "1/x"), ("y", "0 - x*(x*y + a2)")],
                &[("x", "1/x"), ("y", "0 - x^2*y - a2*x")],
            )),
        },
        DivisorRow {
            name: "f2",
            divisor: "y",
            condition: &[("a2", "0")],
            change: None,
        },
        // x = z requires the stated symplectic change x↦x−z, w↦w+y first.
        DivisorRow {
            name: "f3",
            divisor: "x",
            condition: &[("g1", "0")],
            change: Some((
                &[("x", "x - z"), ("w", "w + y")],
                &[("x", "x + z"), ("w", "w - y")],
            )),
        },
        DivisorRow {
            name: "f4",
            divisor: "w",
            condition: &[("b2", "0")],
            change: None,
        },
        DivisorRow {
            name: "f5",
            divisor: "z - 1",
            condition: &[("b3", "0")],
            change: None,
        },
        DivisorRow {
            name: "f6",
            divisor: "z",
            condition: &[("b4", "0")],
            change: None,
        },
    ]
}

/// Substitute parameters by expressions (over the same table).
fn substitute_params(
    e: &RationalExpr,
    condition: &[(&str, &str)],
) -> Result<RationalExpr> {
    let table = e.table();
    let mut images = identity_images(table);
    for (name, value) in condition {
        images[table.index_of(name)?] = parse(table, value)?;
    }
    substitute(e, &images)
}

/// PASS iff under the row's parameter condition the derivative of the
/// divisor along the flow is divisible by the divisor.
pub fn check_invariant_divisor(
    sys: &HamiltonianSystem,
    row: &DivisorRow,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let table = &sys.table;
    let v = vector_field(sys);

    // Field components in the row's working coordinates.
    let components: Vec<RationalExpr> = match &row.change {
        None => v.components.to_vec(),
        Some((forward, inverse)) => {
            let fwd = crate::maps::images_from(table, table, forward)?;
            let inv = crate::maps::images_from(table, table, inverse)?;
            let mut out = Vec::with_capacity(4);
            for &k in &sys.states {
                let mut comp = RationalExpr::zero(table);
                for (j, &uj) in v.states.iter().enumerate() {
                    comp = comp.add(&fwd[k].differentiate(uj).mul(&v.components[j]));
                }
                if let Some(ts) = table.find("t") {
                    comp = comp.add(&fwd[k].differentiate(ts));
                }
                out.push(substitute(&comp, &inv)?);
            }
            out
        }
    };

    let f = parse(table, row.divisor)?;
    let mut lf = RationalExpr::zero(table);
    for (j, &uj) in sys.states.iter().enumerate() {
        lf = lf.add(&f.differentiate(uj).mul(&components[j]));
    }
    if let Some(ts) = table.find("t") {
        lf = lf.add(&f.differentiate(ts));
    }
    let lf = substitute_params(&lf, row.condition)?;

    // Divisibility of the numerator by f (the denominator only carries
    // t-powers and chart units, none divisible by a state polynomial),
    // modulo the parameter relation with the condition substituted.
    let (_, rem) = lf.num().divide(f.num())?;
    let witness = if rem.is_zero() {
        None
    } else {
        let mut reduced = Some(rem.clone());
        for rel in &sys.parameters.relations {
            let rel_cond = substitute_params(&RationalExpr::from_poly(rel.clone()), row.condition)?;
            if !rel_cond.num().is_zero() && rem.divisible_by(rel_cond.num()) {
                reduced = None;
                break;
            }
        }
        reduced.map(|r| format!("remainder {r}"))
    };
    Ok(VerificationReport::build(
        "invariant-divisor",
        sys.id.as_str(),
        row.name,
        witness,
        start,
    ))
}

/// PASS iff the autonomous Hamiltonian is constant along its own flow.
pub fn check_first_integral(sys: &HamiltonianSystem) -> Result<VerificationReport> {
    let start = Instant::now();
    if !sys.autonomous {
        return Err(Error::NotAutonomous(sys.id.as_str().to_string()));
    }
    let v = vector_field(sys);
    let mut lh = RationalExpr::zero(&sys.table);
    for (j, &uj) in sys.states.iter().enumerate() {
        lh = lh.add(&sys.hamiltonian.differentiate(uj).mul(&v.components[j]));
    }
    let witness = if lh.is_zero() {
        None
    } else {
        Some(format!("dH/dt = {}", lh.num()))
    };
    Ok(VerificationReport::build(
        "first-integral",
        sys.id.as_str(),
        "hamiltonian",
        witness,
        start,
    ))
}

/// The terminating series g + Σ_k (α^k / (k! f^k)) ad_f^k(g).
pub fn poisson_series(
    gen: &BirationalSymplecticMap,
    g: &Polynomial,
) -> Result<RationalExpr> {
    let data = gen.poisson.as_ref().ok_or_else(|| Error::NotApplicable(gen.name.clone()))?;
    let table = &gen.source_table;
    let states = table.indices_with_role(SymbolRole::State);
    let f = RationalExpr::from_poly(data.f.clone());
    let alpha = RationalExpr::sym(table, &data.alpha)?;
    let mut sum = RationalExpr::from_poly(g.clone());
    let mut bracket = RationalExpr::from_poly(g.clone());
    let mut factor = RationalExpr::one(table);
    let mut factorial = BigRational::one();
    for k in 1..64u32 {
        bracket = poisson_bracket(&f, &bracket, &states);
        if bracket.is_zero() {
            return Ok(sum);
        }
        factor = factor.mul(&alpha).div(&f)?;
        factorial *= BigRational::from_integer(k.into());
        sum = sum.add(&factor.mul(&bracket).scale(&factorial.recip()));
    }
    Err(Error::Parse(
        "Poisson series did not terminate within 64 brackets".to_string(),
    ))
}

/// PASS iff the Poisson series of `g` equals the generator's action on `g`.
pub fn check_poisson_series(
    gen: &BirationalSymplecticMap,
    g: &Polynomial,
    subject: &str,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let series = poisson_series(gen, g)?;
    let direct = substitute(&RationalExpr::from_poly(g.clone()), &gen.images)?;
    let witness = if series.rat_equal(&direct) {
        None
    } else {
        Some(format!("{}", series.residual(&direct)))
    };
    Ok(VerificationReport::build(
        "poisson-series",
        gen.source.as_str(),
        subject,
        witness,
        start,
    ))
}

/// The fixed probe set for the Poisson-series check.
pub fn poisson_probe_set(table: &std::sync::Arc<crate::table::SymbolTable>) -> Vec<Polynomial> {
    ["x", "y", "z", "w", "x*y", "z*w", "x^2*z"]
        .iter()
        .map(|s| parse(table, s).unwrap().num().clone())
        .collect()
}

/// Apply a documented mutation to a cataloged generator; used as a
/// negative control so that every checker is known to be able to fail.
/// Format: `<generator>:<mutation>` with mutations
/// `drop-<sym>-shift` (parameter action removed on `sym`) and
/// `scale-<sym>` (coordinate image doubled).
pub fn mutate_generator(id: SystemId, spec: &str) -> Result<BirationalSymplecticMap> {
    let (name, mutation) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bad mutation spec `{spec}`")))?;
    let mut map = generators(id).get(name)?.clone();
    let table = map.source_table.clone();
    if let Some(sym) = mutation.strip_prefix("drop-").and_then(|s| s.strip_suffix("-shift")) {
        let sym = canonical_symbol(id, sym);
        let idx = table.index_of(&sym)?;
        map.images[idx] = RationalExpr::sym(&table, &sym)?;
    } else if let Some(sym) = mutation.strip_prefix("scale-") {
        let sym = canonical_symbol(id, sym);
        let idx = table.index_of(&sym)?;
        map.images[idx] = map.images[idx].scale(&BigRational::from_integer(2.into()));
    } else {
        return Err(Error::Parse(format!("unknown mutation `{mutation}`")));
    }
    map.name = format!("{name}:{mutation}");
    Ok(map)
}

/// Translate spelled-out symbol names (`alpha2`) to table names (`a2`).
fn canonical_symbol(id: SystemId, sym: &str) -> String {
    let renamed = sym
        .replace("alpha", "a")
        .replace("beta", "b")
        .replace("gamma", "g");
    match (id, renamed.as_str()) {
        // The D6 table stores γ1 as `g1`.
        _ => renamed,
    }
}
