//! Degeneration machinery: the ε-rewrite of the D6 system, its ε→0 limit to
//! the A5 system, convergence of the Bäcklund group to W(A5(1)), the planar
//! (single-pair) degeneration, and the exact cross-system equivalences.
//!
//! ε is an ordinary symbol throughout; "limit" means substitution at ε = 0
//! after checking that every denominator is nonzero there.

use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::maps::{
    compose_word, confluence_substitution, divisor_catalog, equivalence_dictionary,
    equivalence_map, generators, planar_p5_table, planar_p6_table, pushforward_field,
    ConfluenceSubstitution, EquivalenceId,
};
use crate::parse::parse;
use crate::ratexpr::{identity_images, substitute, RationalExpr};
use crate::systems::{
    build_system, scalar_hamiltonian, vector_field, ParameterSpace, ScalarKind, SystemId,
};
use crate::table::{SymbolRole, SymbolTable};
use crate::verify::{Status, VerificationReport};

/// The D6 vector field rewritten in the ε-family variables: states X,Y,Z,W
/// (named `x,y,z,w`), time T (named `t`), parameters A0…A5 and ε.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    pub table: Arc<SymbolTable>,
    /// Indices of the four state symbols.
    pub states: [usize; 4],
    /// dX/dT, dY/dT, dZ/dT, dW/dT as rational expressions over `table`.
    pub components: [RationalExpr; 4],
}

/// Parameter space of the ε-family: A0+A1+A2+A3+A4+A5 = 1, eliminating A0.
pub fn eps_parameter_space(table: &Arc<SymbolTable>) -> ParameterSpace {
    let parameters = table.indices_with_role(SymbolRole::Parameter);
    let a0 = table.index_of("a0").unwrap();
    let basis = parameters.iter().copied().filter(|&i| i != a0).collect();
    ParameterSpace {
        table: table.clone(),
        parameters,
        relations: vec![parse(table, "a0 + a1 + a2 + a3 + a4 + a5 - 1")
            .unwrap()
            .num()
            .clone()],
        basis,
        elimination: Some((a0, parse(table, "1 - a1 - a2 - a3 - a4 - a5").unwrap())),
        derived: Vec::new(),
    }
}

/// The inverse of the confluence substitution: one image per ε-family
/// symbol, expressed over the D6 table (new variables in terms of old).
pub fn inverse_substitution(sub: &ConfluenceSubstitution) -> Result<Vec<RationalExpr>> {
    let overrides: Vec<(&str, &str)> = vec![
        ("x", "x*a0*(1 - t)/(x - 1)"),
        ("y", "0 - (x - 1)*((x - 1)*y + a2)/(a0*(1 - t))"),
        ("z", "z*a0*(1 - t)/(z - 1)"),
        ("w", "0 - (z - 1)*((z - 1)*w + b2)/(a0*(1 - t))"),
        ("t", "a0*(1 - t)"),
        ("a0", "a1"),
        ("a1", "a2"),
        ("a2", "g1"),
        ("a3", "b2"),
        ("a4", "b4"),
        ("a5", "b3 + a0 + a2 + g1 + b2"),
        ("eps", "1/a0"),
    ];
    let mut images = Vec::with_capacity(sub.eps_table.len());
    for idx in 0..sub.eps_table.len() {
        let name = sub.eps_table.name(idx);
        let (_, expr) = overrides
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        images.push(parse(&sub.d6_table, expr)?);
    }
    Ok(images)
}

/// Rewrite the D6 system in the ε-family variables: push the D6 vector
/// field through the confluence substitution (the chain rule contributes the
/// factor dt/dT = −ε) and express the result over the ε-family table.
///
/// Fails with [`Error::DegenerationSingular`] if any component has a pole at
/// ε = 0.
pub fn rewrite_confluence() -> Result<EpsilonFamily> {
    let sub = confluence_substitution();
    let d6 = build_system(SystemId::D6);
    let v = vector_field(&d6);
    let inverse = inverse_substitution(&sub)?;
    let dt_dtau = parse(&d6.table, "0 - 1/a0")?;
    let t_idx = d6.table.index_of("t")?;
    let catalog = divisor_catalog(&sub.eps_table);
    let eps_poly = parse(&sub.eps_table, "eps")?.num().clone();

    let states = state_indices(&sub.eps_table)?;
    let mut components = Vec::with_capacity(4);
    for &k in &states {
        let g = &inverse[k];
        // dX_k/dT = (Σ_j ∂G_k/∂u_j · v_j + ∂G_k/∂t) · dt/dT, then expressed
        // in the new variables.
        let mut comp = g.differentiate(t_idx);
        for (j, &uj) in v.states.iter().enumerate() {
            comp = comp.add(&g.differentiate(uj).mul(&v.components[j]));
        }
        comp = comp.mul(&dt_dtau);
        let comp = substitute(&comp, &sub.old_in_new)?.reduce_with(&catalog);
        if comp.den().divisible_by(&eps_poly) {
            return Err(Error::DegenerationSingular(format!(
                "component d{}/dT has a pole at eps = 0",
                sub.eps_table.name(k)
            )));
        }
        components.push(comp);
    }
    Ok(EpsilonFamily {
        states,
        components: components.try_into().expect("four components"),
        table: sub.eps_table,
    })
}

fn state_indices(table: &Arc<SymbolTable>) -> Result<[usize; 4]> {
    Ok([
        table.index_of("x")?,
        table.index_of("y")?,
        table.index_of("z")?,
        table.index_of("w")?,
    ])
}

/// Images that fix every symbol and send ε to 0.
fn eps_to_zero(table: &Arc<SymbolTable>) -> Result<Vec<RationalExpr>> {
    let mut images = identity_images(table);
    images[table.index_of("eps")?] = RationalExpr::zero(table);
    Ok(images)
}

/// Substitute ε = 0 into the family. Every component must be regular there
/// (which [`rewrite_confluence`] has already certified).
pub fn epsilon_limit(family: &EpsilonFamily) -> Result<[RationalExpr; 4]> {
    let at_zero = eps_to_zero(&family.table)?;
    let mut out = Vec::with_capacity(4);
    for comp in &family.components {
        out.push(substitute(comp, &at_zero)?);
    }
    Ok(out.try_into().expect("four components"))
}

/// Full Theorem-1.3 check: the rewritten family is regular at ε = 0 and its
/// limit equals the A5 vector field (modulo the A-parameter relation).
pub fn check_confluence_limit() -> Result<VerificationReport> {
    let start = Instant::now();
    let mut witness = None;
    match rewrite_confluence() {
        Err(e) => witness = Some(e.to_string()),
        Ok(family) => {
            let limit = epsilon_limit(&family)?;
            let a5 = build_system(SystemId::A5);
            let va5 = vector_field(&a5);
            let space = eps_parameter_space(&family.table);
            for (j, comp) in limit.iter().enumerate() {
                let expected = va5.components[j].rename_into(&family.table)?;
                if !space.equal_mod_relation(comp, &expected)? {
                    witness = Some(format!(
                        "limit of d{}/dT differs from the A5 field",
                        family.table.name(family.states[j])
                    ));
                    break;
                }
            }
        }
    }
    Ok(report("confluence-limit", "d6->a5", "eps->0", witness, start))
}

/// The D6 words whose conjugates by the confluence substitution converge to
/// the A5 generators s0…s5, in that order.
pub fn subgroup_words() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("S0", vec!["s1"]),
        ("S1", vec!["s2"]),
        ("S2", vec!["s3"]),
        ("S3", vec!["s4"]),
        ("S4", vec!["s6"]),
        ("S5", vec!["s5", "s4", "s3", "s2", "s0", "s2", "s3", "s4", "s5"]),
    ]
}

/// The ε-dependent parameter action of each subgroup generator on
/// (A0,…,A5,ε), as printed expressions over the ε-family table.
fn expected_parameter_actions() -> Vec<(&'static str, [&'static str; 7])> {
    vec![
        ("S0", ["0 - a0", "a1 + a0", "a2", "a3", "a4", "a5 + a0", "eps"]),
        (
            "S1",
            ["a0 + a1", "0 - a1", "a2 + a1", "a3", "a4", "a5", "eps/(1 + eps*a1)"],
        ),
        ("S2", ["a0", "a1 + a2", "0 - a2", "a3 + a2", "a4", "a5", "eps"]),
        ("S3", ["a0", "a1", "a2 + a3", "0 - a3", "a4 + a3", "a5", "eps"]),
        ("S4", ["a0", "a1", "a2", "a3 + a4", "0 - a4", "a5 + a4", "eps"]),
        (
            "S5",
            ["a0 + a5", "a1", "a2", "a3", "a4 + a5", "0 - a5", "eps/(1 - eps*a5)"],
        ),
    ]
}

/// Conjugate a word of D6 generators by the confluence substitution: one
/// image per ε-family symbol, over the ε-family table.
pub fn conjugated_word(word: &[&str]) -> Result<Vec<RationalExpr>> {
    let sub = confluence_substitution();
    let gens = generators(SystemId::D6);
    let maps: Vec<_> = word.iter().map(|n| gens.get(n)).collect::<Result<_>>()?;
    let m = compose_word(&maps)?;
    let inverse = inverse_substitution(&sub)?;
    let catalog = divisor_catalog(&sub.eps_table);
    let mut images = Vec::with_capacity(sub.eps_table.len());
    for g in &inverse {
        let through = substitute(g, &m.images)?;
        images.push(substitute(&through, &sub.old_in_new)?.reduce_with(&catalog));
    }
    Ok(images)
}

/// Compose two extended-parameter actions (apply `second` first).
fn compose_action(
    table: &Arc<SymbolTable>,
    first: &[RationalExpr],
    second: &[RationalExpr],
) -> Result<Vec<RationalExpr>> {
    let catalog = divisor_catalog(table);
    first
        .iter()
        .map(|img| Ok(substitute(img, second)?.reduce_with(&catalog)))
        .collect()
}

/// Theorem-1.4 check: conjugating the chosen D6 words by the confluence
/// substitution reproduces the printed ε-dependent parameter actions, the
/// ε→0 coordinate actions equal the cataloged A5 generators, and the
/// extended parameter action composes associatively on words of length ≤ 3.
pub fn check_subgroup_convergence() -> Result<VerificationReport> {
    let start = Instant::now();
    let sub = confluence_substitution();
    let table = &sub.eps_table;
    let space = eps_parameter_space(table);
    let a5 = generators(SystemId::A5);
    let expected_params = expected_parameter_actions();
    let at_zero = eps_to_zero(table)?;

    let mut witness = None;
    let mut actions: Vec<Vec<RationalExpr>> = Vec::new();
    'outer: for (idx, (name, word)) in subgroup_words().iter().enumerate() {
        let images = conjugated_word(word)?;
        // (a) the parameter/ε action matches the printed table.
        let param_names = ["a0", "a1", "a2", "a3", "a4", "a5", "eps"];
        for (j, pname) in param_names.iter().enumerate() {
            let got = &images[table.index_of(pname)?];
            let want = parse(table, expected_params[idx].1[j])?;
            if !space.equal_mod_relation(got, &want)? {
                witness = Some(format!("{name}: parameter action on {pname} differs"));
                break 'outer;
            }
        }
        // (b) time is untouched in the limit (at finite ε the conjugate
        // rescales T whenever it rescales ε, since T = (1−t)/ε).
        let t_idx = table.index_of("t")?;
        let t_limit = substitute(&images[t_idx], &at_zero)?;
        if !t_limit.rat_equal(&RationalExpr::sym(table, "t")?) {
            witness = Some(format!("{name}: time image does not converge to the identity"));
            break;
        }
        // (c) the ε→0 coordinate action equals the cataloged A5 generator.
        let a5_gen = &a5.reflections[idx];
        for &k in &state_indices(table)? {
            let limit = substitute(&images[k], &at_zero)?;
            let expected = a5_gen.images[a5_gen.source_table.index_of(table.name(k))?]
                .rename_into(table)?;
            if !space.equal_mod_relation(&limit, &expected)? {
                witness = Some(format!(
                    "{name}: eps->0 coordinate action on {} differs from A5 {}",
                    table.name(k),
                    a5_gen.name
                ));
                break 'outer;
            }
        }
        actions.push(images);
    }

    // (d) associativity of the extended parameter action on words ≤ 3.
    if witness.is_none() {
        let n = actions.len();
        let mut pairs = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                pairs[i][j] = compose_action(table, &actions[i], &actions[j])?;
            }
        }
        'assoc: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = compose_action(table, &pairs[i][j], &actions[k])?;
                    let right = compose_action(table, &actions[i], &pairs[j][k])?;
                    if left.iter().zip(&right).any(|(a, b)| !a.rat_equal(b)) {
                        witness =
                            Some(format!("associativity fails on the word S{i} S{j} S{k}"));
                        break 'assoc;
                    }
                }
            }
        }
    }

    Ok(report("subgroup-convergence", "d6->a5", "S0..S5", witness, start))
}

/// Check one of the exact cross-system equivalences: the pushforward of the
/// D6 field equals the target system's field under the parameter dictionary,
/// and every entry of the generator dictionary holds at map level.
pub fn check_equivalence(id: EquivalenceId) -> Result<VerificationReport> {
    let start = Instant::now();
    let map = equivalence_map(id);
    let d6 = build_system(SystemId::D6);
    let tgt = build_system(id.target());
    let vd6 = vector_field(&d6);
    let vt = vector_field(&tgt);
    let catalog = divisor_catalog(&d6.table);

    let mut witness = None;
    // Field level: d(E_k)/dt computed along the D6 flow vs the target field
    // with the dictionary parameters substituted.
    let pushed = pushforward_field(&map, &vd6, tgt.states)?;
    for (j, got) in pushed.iter().enumerate() {
        let expected = substitute(&vt.components[j], &map.images)?.reduce_with(&catalog);
        if !d6.parameters.equal_mod_relation(got, &expected)? {
            witness = Some(format!(
                "field component d{}/dt differs",
                tgt.table.name(tgt.states[j])
            ));
            break;
        }
    }

    // Map level: for every dictionary entry g := word, verify g∘E = E∘word.
    if witness.is_none() {
        let d6_gens = generators(SystemId::D6);
        let tgt_gens = generators(id.target());
        'dict: for (tname, word) in equivalence_dictionary(id) {
            let g = tgt_gens.get(tname)?;
            let maps: Vec<_> = word.iter().map(|n| d6_gens.get(n)).collect::<Result<_>>()?;
            let w = compose_word(&maps)?;
            for k in 0..tgt.table.len() {
                let lhs = substitute(&map.images[k], &w.images)?.reduce_with(&catalog);
                let rhs = substitute(&g.images[k], &map.images)?.reduce_with(&catalog);
                if !d6.parameters.equal_mod_relation(&lhs, &rhs)? {
                    witness = Some(format!(
                        "dictionary entry {tname} fails on symbol {}",
                        tgt.table.name(k)
                    ));
                    break 'dict;
                }
            }
        }
    }

    Ok(report(
        "equivalence",
        "d6",
        &map.name.clone(),
        witness,
        start,
    ))
}

/// The planar (single canonical pair) confluence substitution: sixth-type
/// Hamiltonian symbols expressed over the fifth-type table.
pub fn planar_substitution() -> Result<(Arc<SymbolTable>, Arc<SymbolTable>, Vec<RationalExpr>)> {
    let p6 = planar_p6_table();
    let p5 = planar_p5_table();
    let overrides: Vec<(&str, &str)> = vec![
        ("x", "x/(x - 1)"),
        ("y", "0 - (x - 1)*((x - 1)*y + a2)"),
        ("t", "1 + eps*t"),
        ("d0", "1/eps"),
        ("d1", "a3"),
        ("d2", "a2"),
        ("d3", "a0 - a2 - 1/eps"),
        ("d4", "a1"),
    ];
    let mut images = Vec::with_capacity(p6.len());
    for idx in 0..p6.len() {
        let name = p6.name(idx);
        let (_, expr) = overrides
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        images.push(parse(&p5, expr)?);
    }
    Ok((p6, p5, images))
}

/// Inverse of the planar substitution: fifth-type symbols over the
/// sixth-type table.
fn planar_inverse(p6: &Arc<SymbolTable>, p5: &Arc<SymbolTable>) -> Result<Vec<RationalExpr>> {
    let overrides: Vec<(&str, &str)> = vec![
        ("x", "x/(x - 1)"),
        ("y", "0 - (x - 1)*((x - 1)*y + d2)"),
        ("t", "(t - 1)*d0"),
        ("a0", "d3 + d2 + d0"),
        ("a1", "d4"),
        ("a2", "d2"),
        ("a3", "d1"),
        ("eps", "1/d0"),
    ];
    let mut images = Vec::with_capacity(p5.len());
    for idx in 0..p5.len() {
        let name = p5.name(idx);
        let (_, expr) = overrides
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        images.push(parse(p6, expr)?);
    }
    Ok(images)
}

/// The fifth-type parameters of the planar limit Hamiltonian, expressed in
/// the A-parameters of the fifth-type table.
pub const PLANAR_LIMIT_PARAMETERS: [&str; 3] = ["a2", "a3", "a0 + a2"];

/// The planar degeneration check: the sixth-type canonical field, rewritten
/// through the planar substitution, is regular at ε = 0 and its limit is the
/// canonical field of the fifth-type Hamiltonian, after the further
/// canonical identification q = t(1−X), p = −Y/t (modulo the A-relation).
pub fn check_planar_degeneration() -> Result<VerificationReport> {
    let start = Instant::now();
    let (p6, p5, old_in_new) = planar_substitution()?;
    let inverse = planar_inverse(&p6, &p5)?;
    let catalog = divisor_catalog(&p5);
    let eps_poly = parse(&p5, "eps")?.num().clone();

    // Sixth-type Hamiltonian and its canonical field over (x, y).
    let e = |s: &str| parse(&p6, s);
    let h6 = scalar_hamiltonian(
        ScalarKind::Vi,
        &e("x")?,
        &e("y")?,
        &e("t")?,
        &[e("d0")?, e("d1")?, e("d2")?, e("d3")?, e("d4")?],
    )?;
    let (x6, y6, t6) = (p6.index_of("x")?, p6.index_of("y")?, p6.index_of("t")?);
    let field6 = [h6.differentiate(y6), h6.differentiate(x6).neg()];

    // Push the field through the substitution and take the ε → 0 limit.
    let dt_dtau = parse(&p6, "1/d0")?;
    let at_zero = eps_to_zero(&p5)?;
    let (x5, y5) = (p5.index_of("x")?, p5.index_of("y")?);
    let mut limit = Vec::with_capacity(2);
    for &k in &[x5, y5] {
        let g = &inverse[k];
        let mut comp = g.differentiate(t6);
        comp = comp.add(&g.differentiate(x6).mul(&field6[0]));
        comp = comp.add(&g.differentiate(y6).mul(&field6[1]));
        comp = comp.mul(&dt_dtau);
        let comp = substitute(&comp, &old_in_new)?.reduce_with(&catalog);
        if comp.den().divisible_by(&eps_poly) {
            return Ok(report(
                "confluence-limit",
                "p6->p5",
                "planar",
                Some(format!("d{}/dT has a pole at eps = 0", p5.name(k))),
                start,
            ));
        }
        limit.push(substitute(&comp, &at_zero)?.reduce_with(&catalog));
    }

    // Transform the limit field into the fifth-type chart q = t(1−X),
    // p = −Y/t, writing q,p with the table symbols x,y.
    let f = |s: &str| parse(&p5, s);
    let mut to_qp = identity_images(&p5);
    to_qp[x5] = f("1 - x/t")?;
    to_qp[y5] = f("0 - t*y")?;
    let fx = substitute(&limit[0], &to_qp)?;
    let fy = substitute(&limit[1], &to_qp)?;
    let dq = f("x/t")?.sub(&f("t")?.mul(&fx));
    let dp = fy.neg().div(&f("t")?)?.sub(&f("y/t")?);

    // Fifth-type target field with the derived parameter dictionary.
    let h5 = scalar_hamiltonian(
        ScalarKind::V,
        &f("x")?,
        &f("y")?,
        &f("t")?,
        &[
            f(PLANAR_LIMIT_PARAMETERS[0])?,
            f(PLANAR_LIMIT_PARAMETERS[1])?,
            f(PLANAR_LIMIT_PARAMETERS[2])?,
        ],
    )?;
    let space = planar_p5_space(&p5);
    let mut witness = None;
    for (got, want, name) in [
        (&dq, h5.differentiate(y5), "q"),
        (&dp, h5.differentiate(x5).neg(), "p"),
    ] {
        if !space.equal_mod_relation(got, &want)? {
            witness = Some(format!(
                "limit of d{name}/dT differs from the fifth-type field"
            ));
            break;
        }
    }

    Ok(report("confluence-limit", "p6->p5", "planar", witness, start))
}

/// Parameter space of the planar fifth-type table: A0+A1+A2+A3 = 1.
pub fn planar_p5_space(table: &Arc<SymbolTable>) -> ParameterSpace {
    let parameters = table.indices_with_role(SymbolRole::Parameter);
    let a0 = table.index_of("a0").unwrap();
    let basis = parameters.iter().copied().filter(|&i| i != a0).collect();
    ParameterSpace {
        table: table.clone(),
        parameters,
        relations: vec![parse(table, "a0 + a1 + a2 + a3 - 1").unwrap().num().clone()],
        basis,
        elimination: Some((a0, parse(table, "1 - a1 - a2 - a3").unwrap())),
        derived: Vec::new(),
    }
}

fn report(
    check: &str,
    system: &str,
    subject: &str,
    witness: Option<String>,
    start: Instant,
) -> VerificationReport {
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
