//! Degree-bounded Hamiltonian ansatz: a full monomial basis in the state
//! variables with one unknown coefficient per monomial, chart-polynomiality
//! imposed as linear-homogeneous constraints over ℚ(parameters, t), and the
//! solution space computed by fraction-free elimination.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::holomorphy::pullback_state_field;
use crate::maps::{divisor_catalog, Chart};
use crate::poly::{Monomial, Polynomial, Q};
use crate::ratexpr::RationalExpr;
use crate::systems::ParameterSpace;
use crate::table::{SymbolRole, SymbolTable};

/// A degree-bounded unknown-coefficient Hamiltonian together with the
/// accumulated holomorphy constraints.
///
/// The constraint matrix is kept in incrementally reduced row-echelon form:
/// each imposed row is eliminated against the existing pivots (fraction-free
/// Bareiss-style cross-multiplication) and either vanishes or contributes a
/// fresh pivot.
pub struct AnsatzFamily {
    pub table: Arc<SymbolTable>,
    pub states: Vec<usize>,
    pub degree: u32,
    /// Monomial basis in the state variables (graded order, constant first).
    pub basis: Vec<Polynomial>,
    /// Unknown coefficient labels, one per basis monomial.
    pub labels: Vec<String>,
    /// Echelonized constraint rows over the polynomial ring in
    /// (parameters, t); entry `j` multiplies unknown `j`.
    pub rows: Vec<Vec<Polynomial>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
}

/// Build the full monomial family of the given total degree over the
/// table's state symbols.
pub fn build_ansatz(table: &Arc<SymbolTable>, degree: u32) -> Result<AnsatzFamily> {
    if !(3..=5).contains(&degree) {
        return Err(Error::NotApplicable(format!(
            "ansatz degree must be 3, 4 or 5, got {degree}"
        )));
    }
    let states = table.indices_with_role(SymbolRole::State);
    if states.len() != 2 && states.len() != 4 {
        return Err(Error::NotApplicable(format!(
            "ansatz needs 2 or 4 state variables, got {}",
            states.len()
        )));
    }
    let mut basis = Vec::new();
    let mut exps = vec![0u32; states.len()];
    enumerate(&mut basis, table, &states, &mut exps, 0, degree);
    basis.sort_by_key(|m| m.total_degree());
    let labels = (0..basis.len()).map(|i| format!("c{i}")).collect();
    Ok(AnsatzFamily {
        table: table.clone(),
        states,
        degree,
        basis,
        labels,
        rows: Vec::new(),
        pivots: Vec::new(),
    })
}

fn enumerate(
    out: &mut Vec<Polynomial>,
    table: &Arc<SymbolTable>,
    states: &[usize],
    exps: &mut Vec<u32>,
    pos: usize,
    budget: u32,
) {
    if pos == states.len() {
        let mut m = Polynomial::constant(table, Q::from_integer(1.into()));
        for (i, &e) in exps.iter().enumerate() {
            m = m.mul(&Polynomial::var(table, states[i]).pow(e));
        }
        out.push(m);
        return;
    }
    for e in 0..=budget {
        exps[pos] = e;
        enumerate(out, table, states, exps, pos + 1, budget - e);
    }
    exps[pos] = 0;
}

impl AnsatzFamily {
    pub fn num_unknowns(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Nullspace dimension of the accumulated constraints.
    pub fn solution_dim(&self) -> usize {
        self.basis.len() - self.rows.len()
    }

    /// Dimension modulo the constant solution (always present: constants
    /// generate the zero vector field).
    pub fn solution_dim_mod_constants(&self) -> usize {
        self.solution_dim().saturating_sub(1)
    }

    /// Assemble the Hamiltonian Σ cᵢ·mᵢ from a coefficient vector.
    pub fn hamiltonian_of(&self, coeffs: &[RationalExpr]) -> RationalExpr {
        let mut acc = RationalExpr::zero(&self.table);
        for (c, m) in coeffs.iter().zip(self.basis.iter()) {
            acc = acc.add(&c.mul(&RationalExpr::from_poly(m.clone())));
        }
        acc
    }

    /// Insert one constraint row (entries over the polynomial ring),
    /// eliminating against existing pivots; keeps the matrix in echelon
    /// form and returns whether the row was independent.
    fn insert_row(&mut self, mut row: Vec<Polynomial>) -> bool {
        for (r, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if row[p].is_zero() {
                continue;
            }
            // Fraction-free elimination: row := row·r[p] − r·row[p].
            let a = r[p].clone();
            let b = row[p].clone();
            for j in 0..row.len() {
                row[j] = row[j].mul(&a).sub(&r[j].mul(&b));
            }
            normalize_row(&mut row);
        }
        let pivot = pivot_column(&row);
        match pivot {
            None => false,
            Some(p) => {
                normalize_row(&mut row);
                self.rows.push(row);
                self.pivots.push(p);
                true
            }
        }
    }
}

/// Divide out the numeric and monomial content shared by a whole row.
fn normalize_row(row: &mut [Polynomial]) {
    let mut num_gcd = BigInt::zero();
    let mut den_gcd = BigInt::zero();
    for e in row.iter() {
        if e.is_zero() {
            continue;
        }
        let c = e.rational_content();
        num_gcd = num_gcd.gcd(&c.numer().abs());
        den_gcd = den_gcd.gcd(&c.denom().abs());
    }
    if num_gcd.is_zero() {
        return;
    }
    let scale = BigRational::new(den_gcd, num_gcd);
    for e in row.iter_mut() {
        if !e.is_zero() {
            *e = e.scale(&scale);
        }
    }
}

/// Lowest-total-degree nonzero entry (ties broken by column index).
fn pivot_column(row: &[Polynomial]) -> Option<usize> {
    let mut best: Option<(u32, usize)> = None;
    for (j, e) in row.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let d = e.total_degree();
        if best.map(|(bd, _)| d < bd).unwrap_or(true) {
            best = Some((d, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Impose chart-polynomiality of the generated vector field as linear
/// constraints on the unknown coefficients. Constraints derive from the
/// pushforward of the Hamiltonian vector field (linear in the Hamiltonian),
/// so additive corrections never change the row space. Returns the number
/// of independent rows added.
pub fn impose_holomorphy(
    family: &mut AnsatzFamily,
    charts: &[Chart],
    space: Option<&ParameterSpace>,
) -> Result<usize> {
    let mut added = 0;
    for chart in charts {
        for row in chart_rows(family, chart, space)? {
            if family.insert_row(row) {
                added += 1;
            }
        }
    }
    Ok(added)
}

/// All constraint rows contributed by a single chart.
fn chart_rows(
    family: &AnsatzFamily,
    chart: &Chart,
    space: Option<&ParameterSpace>,
) -> Result<Vec<Vec<Polynomial>>> {
    let table = &family.table;
    let states = &family.states;
    let n = family.basis.len();
    let catalog = divisor_catalog(table);

    // Pullback of every basis monomial's field, component by component.
    let mut pulled: Vec<Vec<RationalExpr>> = Vec::with_capacity(n);
    for m in &family.basis {
        let h = RationalExpr::from_poly(m.clone());
        pulled.push(pullback_state_field(&h, chart, states, space)?);
    }

    let mut rows = Vec::new();
    for k in 0..states.len() {
        // Factor each denominator into state-bearing divisors and a
        // state-free unit (a unit of the coefficient field ℚ(params, t)).
        let mut facs: Vec<(Vec<(Polynomial, u32)>, Polynomial)> = Vec::with_capacity(n);
        let mut all_factors: Vec<(Polynomial, u32)> = Vec::new();
        let mut units: Vec<Polynomial> = Vec::new();
        for e in pulled.iter().map(|p| &p[k]) {
            let (fs, unit) = split_denominator(e.den(), &catalog, states);
            for (f, pow) in &fs {
                match all_factors.iter_mut().find(|(g, _)| g == f) {
                    Some((_, mp)) => *mp = (*mp).max(*pow),
                    None => all_factors.push((f.clone(), *pow)),
                }
            }
            if !unit.is_constant() && !units.contains(&unit) {
                units.push(unit.clone());
            }
            facs.push((fs, unit));
        }
        // Common state-bearing denominator; trivial one means the whole
        // component is already polynomial for every basis element.
        if all_factors.is_empty() {
            continue;
        }
        let mut common = Polynomial::constant(table, Q::from_integer(1.into()));
        for (f, p) in &all_factors {
            common = common.mul(&f.pow(*p));
        }
        let unit_product = units
            .iter()
            .fold(Polynomial::constant(table, Q::from_integer(1.into())), |a, u| a.mul(u));
        // Remainder of each scaled numerator modulo the common denominator;
        // the sum Σ cᵢ·Rᵢ must vanish identically.
        let mut remainders: Vec<Polynomial> = Vec::with_capacity(n);
        for (e, (fs, unit)) in pulled.iter().map(|p| &p[k]).zip(facs.iter()) {
            if e.num().is_zero() {
                remainders.push(Polynomial::zero(table));
                continue;
            }
            let mut q = e.num().clone();
            // Scale up to the common denominator.
            for (f, p) in &all_factors {
                let have = fs.iter().find(|(g, _)| g == f).map(|(_, p)| *p).unwrap_or(0);
                if *p > have {
                    q = q.mul(&f.pow(*p - have));
                }
            }
            // Multiply by the other units (the condition may be scaled by
            // any state-free unit without changing polynomiality).
            if !unit.is_constant() {
                q = q.mul(&unit_product.exact_div(unit));
            } else {
                q = q.mul(&unit_product);
            }
            let (_, r) = q.divide(&common)?;
            remainders.push(r);
        }
        // Group remainder terms by their state-monomial part: each group
        // yields one linear equation over ℚ(params, t).
        let mut groups: BTreeMap<Monomial, Vec<Polynomial>> = BTreeMap::new();
        for (i, r) in remainders.iter().enumerate() {
            for (m, c) in r.terms() {
                let (state_part, coeff_part) = split_monomial(table, m, states);
                let entry = groups
                    .entry(state_part)
                    .or_insert_with(|| vec![Polynomial::zero(table); n]);
                let mut term = BTreeMap::new();
                term.insert(coeff_part.clone(), c.clone());
                entry[i] = entry[i].add(&Polynomial::from_terms(table, term));
            }
        }
        rows.extend(groups.into_values());
    }
    Ok(rows)
}

/// Split a denominator into catalog state-bearing factors (with powers) and
/// a state-free unit; a state-bearing residual is kept as its own factor.
fn split_denominator(
    den: &Polynomial,
    catalog: &[Polynomial],
    states: &[usize],
) -> (Vec<(Polynomial, u32)>, Polynomial) {
    let mut rest = den.clone();
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for f in catalog {
        if f.is_constant() || !states.iter().any(|&s| f.contains_symbol(s)) {
            continue;
        }
        let mut pow = 0;
        while rest.divisible_by(f) {
            rest = rest.exact_div(f);
            pow += 1;
        }
        if pow > 0 {
            factors.push((f.clone(), pow));
        }
    }
    if states.iter().any(|&s| rest.contains_symbol(s)) {
        let norm = rest.divide_monomial(&rest.monomial_content());
        let norm = norm.scale(&norm.rational_content().recip());
        factors.push((norm, 1));
        rest = Polynomial::constant(&rest.table().clone(), Q::from_integer(1.into()));
    }
    let unit = rest.divide_monomial(&monomial_state_free(&rest, states));
    (factors, unit)
}

/// The state portion of a monomial content is never present in a unit, but
/// pure t/parameter monomial factors are; keep them.
fn monomial_state_free(p: &Polynomial, states: &[usize]) -> Monomial {
    let mut m = p.monomial_content();
    for i in 0..m.0.len() {
        if !states.contains(&i) {
            m.0[i] = 0;
        }
    }
    m
}

/// Split one full-table monomial into its state part (as a monomial) and
/// its coefficient part (parameters and t only).
fn split_monomial(
    _table: &Arc<SymbolTable>,
    m: &Monomial,
    states: &[usize],
) -> (Monomial, Monomial) {
    let mut state_part = m.clone();
    let mut coeff_part = m.clone();
    for i in 0..m.0.len() {
        if states.contains(&i) {
            coeff_part.0[i] = 0;
        } else {
            state_part.0[i] = 0;
        }
    }
    (state_part, coeff_part)
}

/// Basis of the nullspace of the accumulated constraints, one coefficient
/// vector per free column (entries in ℚ(params, t)).
pub fn solve_family(family: &AnsatzFamily) -> Result<Vec<Vec<RationalExpr>>> {
    let table = &family.table;
    let n = family.basis.len();
    let free: Vec<usize> = (0..n).filter(|j| !family.pivots.contains(j)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x: Vec<Option<RationalExpr>> = vec![None; n];
        x[f] = Some(RationalExpr::one(table));
        for &g in &free {
            if g != f {
                x[g] = Some(RationalExpr::zero(table));
            }
        }
        // Row i was eliminated against all earlier pivots, so in reverse
        // order each row involves only its own pivot plus already-solved
        // columns.
        for (row, &p) in family.rows.iter().zip(family.pivots.iter()).rev() {
            let mut acc = RationalExpr::zero(table);
            for (j, e) in row.iter().enumerate() {
                if j == p || e.is_zero() {
                    continue;
                }
                let xj = x[j]
                    .as_ref()
                    .ok_or_else(|| Error::Parse("echelon order violated".into()))?;
                acc = acc.add(&RationalExpr::from_poly(e.clone()).mul(xj));
            }
            let val = acc.neg().div(&RationalExpr::from_poly(row[p].clone()))?;
            x[p] = Some(val.reduce_with(&divisor_catalog(table)));
        }
        out.push(x.into_iter().map(|v| v.expect("solved")).collect());
    }
    Ok(out)
}

/// For a family whose solution space is one-dimensional modulo constants:
/// the representative scaled so that the designated monomial has the given
/// coefficient, with the constant term dropped.
pub fn normalized_representative(
    family: &AnsatzFamily,
    solutions: &[Vec<RationalExpr>],
    monomial: &Polynomial,
    target: &RationalExpr,
) -> Result<RationalExpr> {
    let idx = family
        .basis
        .iter()
        .position(|m| m == monomial)
        .ok_or_else(|| Error::Parse("monomial not in basis".into()))?;
    let constant = family
        .basis
        .iter()
        .position(|m| m.is_constant())
        .expect("constant monomial always present");
    for sol in solutions {
        if sol[idx].num().is_zero() {
            continue;
        }
        let scale = target.div(&sol[idx])?;
        let mut coeffs: Vec<RationalExpr> = sol.iter().map(|c| c.mul(&scale)).collect();
        coeffs[constant] = RationalExpr::zero(&family.table);
        return Ok(family.hamiltonian_of(&coeffs));
    }
    Err(Error::NotApplicable(
        "no solution with a nonzero designated coefficient".into(),
    ))
}

/// Whether a candidate Hamiltonian (polynomial in the states with
/// ℚ(params, t) coefficients) lies in the span of the solved family,
/// modulo the constant solution.
pub fn in_span_mod_constants(
    family: &AnsatzFamily,
    solutions: &[Vec<RationalExpr>],
    candidate: &RationalExpr,
) -> Result<bool> {
    let table = &family.table;
    // Express the candidate in the monomial basis.
    let mut cand = vec![RationalExpr::zero(table); family.basis.len()];
    let den = candidate.den();
    for (m, c) in candidate.num().terms() {
        let (state_part, coeff_part) = split_monomial(table, m, &family.states);
        let idx = family
            .basis
            .iter()
            .position(|b| {
                b.terms()
                    .next()
                    .map(|(bm, _)| *bm == state_part)
                    .unwrap_or(false)
                    && b.num_terms() == 1
            })
            .ok_or_else(|| Error::NotApplicable("candidate exceeds the degree bound".into()))?;
        let mut term = BTreeMap::new();
        term.insert(coeff_part, c.clone());
        let num = Polynomial::from_terms(table, term);
        cand[idx] = cand[idx].add(&RationalExpr::from_poly(num).div(&RationalExpr::from_poly(den.clone()))?);
    }
    // Row-reduce the candidate against the solution vectors (as rows over
    // ℚ(params, t)): in span iff it reduces to zero (ignoring the constant
    // column).
    let constant = family
        .basis
        .iter()
        .position(|m| m.is_constant())
        .expect("constant monomial always present");
    // Solution vectors from `solve_family` are unit vectors on the free
    // columns: solution r has 1 at its own free column and 0 at the others,
    // so the combination coefficients are read off directly.
    let free: Vec<usize> = (0..family.basis.len())
        .filter(|j| !family.pivots.contains(j))
        .collect();
    let mut target = cand;
    target[constant] = RationalExpr::zero(table);
    for (row, &f) in solutions.iter().zip(free.iter()) {
        let factor = target[f].clone();
        if factor.num().is_zero() {
            continue;
        }
        for j in 0..target.len() {
            if j != constant {
                target[j] = target[j].sub(&factor.mul(&row[j]));
            }
        }
    }
    Ok(target
        .iter()
        .enumerate()
        .all(|(j, e)| j == constant || e.num().is_zero()))
}
