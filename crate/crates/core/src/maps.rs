//! Catalog and algebra of the birational maps attached to the systems:
//! Bäcklund generators, diagram automorphisms, holomorphy charts,
//! cross-system equivalence maps and the confluence substitution.
//!
//! A map is stored as a substitution: one image per **target** symbol,
//! each image an expression over the **source** table. Composition,
//! pushforward of vector fields and identity testing are pure functions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parse::parse;
use crate::poly::Polynomial;
use crate::ratexpr::{identity_images, substitute, RationalExpr};
use crate::systems::{build_system, HamiltonianSystem, ParameterSpace, SystemId, VectorField};
use crate::table::{same_table, SymbolRole, SymbolTable};

/// Poisson reflection data: the generator acts on functions as the
/// terminating series g ↦ Σ_k (α^k / (k! f^k)) ad_f^k(g).
#[derive(Debug, Clone)]
pub struct PoissonData {
    /// The invariant-divisor polynomial f of the reflection.
    pub f: Polynomial,
    /// Name of the root parameter α.
    pub alpha: String,
}

/// A birational symplectic map between (usually identical) systems.
#[derive(Debug, Clone)]
pub struct BirationalSymplecticMap {
    pub name: String,
    pub source: SystemId,
    pub target: SystemId,
    pub source_table: Arc<SymbolTable>,
    pub target_table: Arc<SymbolTable>,
    /// One image per target symbol, expressed over the source table.
    pub images: Vec<RationalExpr>,
    /// Poisson series data; `None` when the series formula does not apply.
    pub poisson: Option<PoissonData>,
}

impl BirationalSymplecticMap {
    /// Image of the named target symbol.
    pub fn image(&self, name: &str) -> Result<&RationalExpr> {
        Ok(&self.images[self.target_table.index_of(name)?])
    }

    /// dτ/dt of the time image; `1` for autonomous systems.
    pub fn tau_derivative(&self) -> i64 {
        let (Some(ts), Some(tt)) = (self.source_table.find("t"), self.target_table.find("t"))
        else {
            return 1;
        };
        let tau = &self.images[tt];
        let d = tau.differentiate(ts);
        assert!(
            d.is_polynomial_form() && d.num().is_constant(),
            "time image must be affine in t"
        );
        let c = d.num().constant_term();
        assert!(c.is_integer(), "dτ/dt must be ±1");
        use num_traits::ToPrimitive;
        c.to_integer().to_i64().unwrap()
    }

    /// Apply the map to a function of the target variables (pullback).
    pub fn pullback(&self, g: &RationalExpr) -> Result<RationalExpr> {
        same_table(g.table(), &self.target_table)?;
        substitute(g, &self.images)
    }
}

/// Build images over `source`, one per symbol of `target`: overrides are
/// `(target-symbol, expression-over-source)`; everything else maps to the
/// source symbol of the same name.
pub fn images_from(
    source: &Arc<SymbolTable>,
    target: &Arc<SymbolTable>,
    overrides: &[(&str, &str)],
) -> Result<Vec<RationalExpr>> {
    let mut images = Vec::with_capacity(target.len());
    for idx in 0..target.len() {
        let name = target.name(idx);
        match overrides.iter().find(|(n, _)| *n == name) {
            Some((_, expr)) => images.push(parse(source, expr)?),
            None => images.push(RationalExpr::sym(source, name)?),
        }
    }
    for (n, _) in overrides {
        if target.find(n).is_none() {
            return Err(Error::UnknownSymbol((*n).to_string()));
        }
    }
    Ok(images)
}

/// Same-system map from coordinate/parameter overrides.
fn self_map(
    sys: &HamiltonianSystem,
    name: &str,
    overrides: &[(&str, &str)],
    poisson: Option<(&str, &str)>,
) -> BirationalSymplecticMap {
    let images = images_from(&sys.table, &sys.table, overrides).unwrap();
    BirationalSymplecticMap {
        name: name.to_string(),
        source: sys.id,
        target: sys.id,
        source_table: sys.table.clone(),
        target_table: sys.table.clone(),
        images,
        poisson: poisson.map(|(f, alpha)| PoissonData {
            f: parse(&sys.table, f).unwrap().num().clone(),
            alpha: alpha.to_string(),
        }),
    }
}

/// The identity map of a system.
pub fn identity_map(sys: &HamiltonianSystem) -> BirationalSymplecticMap {
    BirationalSymplecticMap {
        name: "id".to_string(),
        source: sys.id,
        target: sys.id,
        source_table: sys.table.clone(),
        target_table: sys.table.clone(),
        images: identity_images(&sys.table),
        poisson: None,
    }
}

/// Low-degree factors worth cancelling from composed images; keeps the
/// fraction-free representation small across long generator words.
pub fn divisor_catalog(table: &Arc<SymbolTable>) -> Vec<Polynomial> {
    let candidates = [
        "t", "t - 1", "x", "y", "z", "w", "x - t", "z - t", "x - z", "z - 1", "x - 1", "y + w",
        "y + w - 1", "x + y + w - t", "x - eta", "z - eta", "t*x - 1", "t*z - 1", "x*z - 1",
        "eps",
    ];
    candidates
        .iter()
        .filter_map(|s| parse(table, s).ok())
        .map(|e| e.num().clone())
        .collect()
}

/// Denominator factors of a map's images, split against the static
/// catalog; leftover cofactors are kept whole.
fn denominator_seeds(map: &BirationalSymplecticMap) -> Vec<Polynomial> {
    let catalog = divisor_catalog(&map.source_table);
    let mut seeds: Vec<Polynomial> = Vec::new();
    let mut push = |p: Polynomial| {
        if !p.is_constant() && !seeds.iter().any(|s| s == &p) {
            seeds.push(p);
        }
    };
    for img in &map.images {
        let mut den = img.den().clone();
        for f in &catalog {
            while !f.is_constant() && den.divisible_by(f) {
                den = den.exact_div(f);
                push(f.clone());
            }
        }
        let den = den.divide_monomial(&den.monomial_content());
        push(den.scale(&den.rational_content().recip()));
    }
    seeds
}

/// Compose two maps: `compose(a, b)` applies `b` first, then `a`.
///
/// Denominators of the composition are products of `b`-images of `a`'s
/// pole divisors; their numerators are added to the cancellation catalog
/// so that iterated compositions stay in lowest terms.
pub fn compose(
    a: &BirationalSymplecticMap,
    b: &BirationalSymplecticMap,
) -> Result<BirationalSymplecticMap> {
    same_table(&a.source_table, &b.target_table)?;
    let mut catalog = divisor_catalog(&b.source_table);
    for seed in denominator_seeds(a) {
        let img = substitute(&RationalExpr::from_poly(seed), &b.images)?;
        for p in [img.num(), img.den()] {
            let p = p.divide_monomial(&p.monomial_content());
            let p = p.scale(&p.rational_content().recip());
            if !p.is_constant() && !catalog.iter().any(|c| c == &p) {
                catalog.push(p);
            }
        }
    }
    let mut images = Vec::with_capacity(a.images.len());
    for img in &a.images {
        images.push(substitute(img, &b.images)?.reduce_with(&catalog));
    }
    Ok(BirationalSymplecticMap {
        name: format!("{}*{}", a.name, b.name),
        source: b.source,
        target: a.target,
        source_table: b.source_table.clone(),
        target_table: a.target_table.clone(),
        images,
        poisson: None,
    })
}

/// Compose a word of same-system generators, rightmost acting first.
pub fn compose_word(maps: &[&BirationalSymplecticMap]) -> Result<BirationalSymplecticMap> {
    let mut iter = maps.iter().rev();
    let first = iter
        .next()
        .ok_or_else(|| Error::Parse("empty generator word".to_string()))?;
    let mut acc = (*first).clone();
    for m in iter {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

/// Is the map the identity on every symbol, modulo the parameter relation?
/// Returns the first nonzero residual as a witness otherwise.
pub fn identity_witness(
    map: &BirationalSymplecticMap,
    space: &ParameterSpace,
) -> Result<Option<(String, Polynomial)>> {
    same_table(&map.source_table, &map.target_table)?;
    for (idx, img) in map.images.iter().enumerate() {
        let target = RationalExpr::sym(&map.source_table, map.source_table.name(idx))?;
        let lhs = space.reduce(img)?;
        let rhs = space.reduce(&target)?;
        if !lhs.rat_equal(&rhs) {
            return Ok(Some((
                map.source_table.name(idx).to_string(),
                lhs.residual(&rhs),
            )));
        }
    }
    Ok(None)
}

/// Pushforward of a vector field through a map: component `k` is
/// `(Σ_j ∂X_k/∂u_j · v_j + ∂X_k/∂t) / (dτ/dt)`, expressed in the source
/// coordinates. `target_states` are the state indices in the target table.
pub fn pushforward_field(
    map: &BirationalSymplecticMap,
    v: &VectorField,
    target_states: [usize; 4],
) -> Result<[RationalExpr; 4]> {
    same_table(&v.table, &map.source_table)?;
    let dtau = map.tau_derivative();
    let mut out = Vec::with_capacity(4);
    for &k in &target_states {
        let img = &map.images[k];
        let mut comp = RationalExpr::zero(&map.source_table);
        for (j, &uj) in v.states.iter().enumerate() {
            comp = comp.add(&img.differentiate(uj).mul(&v.components[j]));
        }
        if let Some(ts) = map.source_table.find("t") {
            comp = comp.add(&img.differentiate(ts));
        }
        if dtau == -1 {
            comp = comp.neg();
        } else {
            assert_eq!(dtau, 1, "dτ/dt must be ±1");
        }
        out.push(comp);
    }
    let arr: [RationalExpr; 4] = out.try_into().expect("four components");
    Ok(arr)
}

/// A system's generators with the Coxeter matrix of its Dynkin diagram.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub system: SystemId,
    /// Reflection generators in diagram order.
    pub reflections: Vec<BirationalSymplecticMap>,
    /// Diagram automorphisms (π's, φ, ψ) — empty for some systems.
    pub automorphisms: Vec<BirationalSymplecticMap>,
    /// Coxeter matrix m(i,j) over the reflections.
    pub coxeter: Vec<Vec<u32>>,
}

impl GeneratorSet {
    pub fn all(&self) -> impl Iterator<Item = &BirationalSymplecticMap> {
        self.reflections.iter().chain(self.automorphisms.iter())
    }

    pub fn get(&self, name: &str) -> Result<&BirationalSymplecticMap> {
        self.all()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

/// Symmetric Coxeter matrix from an edge list (order 3 unless overridden).
fn coxeter_from_edges(n: usize, edges: &[(usize, usize)], fours: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let mut m = vec![vec![2u32; n]; n];
    for i in 0..n {
        m[i][i] = 1;
    }
    for &(i, j) in edges {
        m[i][j] = 3;
        m[j][i] = 3;
    }
    for &(i, j) in fours {
        m[i][j] = 4;
        m[j][i] = 4;
    }
    m
}

/// Generator catalog for a system.
pub fn generators(id: SystemId) -> GeneratorSet {
    let sys = build_system(id);
    match id {
        SystemId::D6 => d6_generators(&sys),
        SystemId::B6A => b6a_generators(&sys),
        SystemId::B6B => b6b_generators(&sys),
        SystemId::D72 => d72_generators(&sys),
        SystemId::D6Auto => d6auto_generators(&sys),
        SystemId::A5 => a5_generators(&sys),
        SystemId::A4 => a4_generators(&sys),
    }
}

/// Look up one generator by name.
pub fn generator(id: SystemId, name: &str) -> Result<BirationalSymplecticMap> {
    generators(id).get(name).cloned()
}

fn d6_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "s0",
            &[("y", "y - a0/(x - t)"), ("a0", "0 - a0"), ("a2", "a2 + a0")],
            Some(("x - t", "a0")),
        ),
        g("s1", &[("a1", "0 - a1"), ("a2", "a2 + a1")], None),
        g(
            "s2",
            &[
                ("x", "x + a2/y"),
                ("a0", "a0 + a2"),
                ("a1", "a1 + a2"),
                ("a2", "0 - a2"),
                ("g1", "g1 + a2"),
            ],
            Some(("y", "a2")),
        ),
        g(
            "s3",
            &[
                ("y", "y - g1/(x - z)"),
                ("w", "w + g1/(x - z)"),
                ("a2", "a2 + g1"),
                ("g1", "0 - g1"),
                ("b2", "b2 + g1"),
            ],
            Some(("x - z", "g1")),
        ),
        g(
            "s4",
            &[
                ("z", "z + b2/w"),
                ("g1", "g1 + b2"),
                ("b2", "0 - b2"),
                ("b3", "b3 + b2"),
                ("b4", "b4 + b2"),
            ],
            Some(("w", "b2")),
        ),
        g(
            "s5",
            &[("w", "w - b3/(z - 1)"), ("b2", "b2 + b3"), ("b3", "0 - b3")],
            Some(("z - 1", "b3")),
        ),
        g(
            "s6",
            &[("w", "w - b4/z"), ("b2", "b2 + b4"), ("b4", "0 - b4")],
            Some(("z", "b4")),
        ),
    ];
    let automorphisms = vec![
        g(
            "pi1",
            &[
                ("x", "(t*(t - 1) + t*(x - t))/(x - t)"),
                ("y", "0 - (x - t)*((x - t)*y + a2)/(t*(t - 1))"),
                ("z", "(t*(t - 1) + t*(z - t))/(z - t)"),
                ("w", "0 - (z - t)*((z - t)*w + b2)/(t*(t - 1))"),
                ("a0", "a1"),
                ("a1", "a0"),
                ("b3", "b4"),
                ("b4", "b3"),
            ],
            None,
        ),
        g(
            "pi2",
            &[
                ("x", "t/z"),
                ("y", "0 - z*(z*w + b2)/t"),
                ("z", "t/x"),
                ("w", "0 - x*(x*y + a2)/t"),
                ("a0", "b3"),
                ("a1", "b4"),
                ("a2", "b2"),
                ("b2", "a2"),
                ("b3", "a0"),
                ("b4", "a1"),
            ],
            None,
        ),
        g(
            "pi3",
            &[
                ("x", "1 - x"),
                ("y", "0 - y"),
                ("z", "1 - z"),
                ("w", "0 - w"),
                ("t", "1 - t"),
                ("b3", "b4"),
                ("b4", "b3"),
            ],
            None,
        ),
        g(
            "pi4",
            &[
                ("x", "(t - 1)*x/(t - x)"),
                ("y", "(t - x)*(t*y - x*y - a2)/(t*(t - 1))"),
                ("z", "(t - 1)*z/(t - z)"),
                ("w", "(t - z)*(t*w - z*w - b2)/(t*(t - 1))"),
                ("t", "1 - t"),
                ("a0", "a1"),
                ("a1", "a0"),
            ],
            None,
        ),
    ];
    // Dynkin diagram: s0, s1 both attach to s2; chain s2-s3-s4; s5, s6 attach to s4.
    let coxeter = coxeter_from_edges(7, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6)], &[]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms,
        coxeter,
    }
}

fn b6a_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "S0",
            &[
                ("x", "(t*x - 1)/(t - 1)"),
                ("y", "(t - 1)*y/t"),
                ("z", "(t - 1)*z/(t - z)"),
                ("w", "(t - z)*(t*w - z*w - a4)/(t*(t - 1))"),
                ("t", "1 - t"),
                ("a0", "0 - a0"),
                ("a1", "a1 + 2*a0"),
            ],
            None,
        ),
        g(
            "S1",
            &[("y", "y - a1/x"), ("a0", "a0 + a1"), ("a1", "0 - a1"), ("a2", "a2 + a1")],
            Some(("x", "a1")),
        ),
        g(
            "S2",
            &[("x", "x + a2/y"), ("a1", "a1 + a2"), ("a2", "0 - a2"), ("a3", "a3 + a2")],
            Some(("y", "a2")),
        ),
        g(
            "S3",
            &[
                ("y", "y - a3*z/(x*z - 1)"),
                ("w", "w - a3*x/(x*z - 1)"),
                ("a2", "a2 + a3"),
                ("a3", "0 - a3"),
                ("a4", "a4 + a3"),
            ],
            Some(("x*z - 1", "a3")),
        ),
        g(
            "S4",
            &[
                ("z", "z + a4/w"),
                ("a3", "a3 + a4"),
                ("a4", "0 - a4"),
                ("a5", "a5 + a4"),
                ("a6", "a6 + a4"),
            ],
            Some(("w", "a4")),
        ),
        g(
            "S5",
            &[("w", "w - a5/(z - 1)"), ("a4", "a4 + a5"), ("a5", "0 - a5")],
            Some(("z - 1", "a5")),
        ),
        g(
            "S6",
            &[("w", "w - a6/z"), ("a4", "a4 + a6"), ("a6", "0 - a6")],
            Some(("z", "a6")),
        ),
    ];
    let automorphisms = vec![g(
        "phi",
        &[
            ("x", "x/(x - 1)"),
            ("y", "0 - (x - 1)*((x - 1)*y + a2)"),
            ("z", "1 - z"),
            ("w", "0 - w"),
            ("t", "1 - t"),
            ("a5", "a6"),
            ("a6", "a5"),
        ],
        None,
    )];
    // Double edge S0=S1; chain S1-S2-S3-S4; fork S4-S5, S4-S6.
    let coxeter = coxeter_from_edges(7, &[(1, 2), (2, 3), (3, 4), (4, 5), (4, 6)], &[(0, 1)]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms,
        coxeter,
    }
}

fn b6b_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "w0",
            &[("y", "y - a0/(x - t)"), ("a0", "0 - a0"), ("a2", "a2 + a0")],
            Some(("x - t", "a0")),
        ),
        g("w1", &[("a1", "0 - a1"), ("a2", "a2 + a1")], None),
        g(
            "w2",
            &[("x", "x + a2/y"), ("a0", "a0 + a2"), ("a1", "a1 + a2"), ("a2", "0 - a2"), ("a3", "a3 + a2")],
            Some(("y", "a2")),
        ),
        g(
            "w3",
            &[
                ("y", "y - a3*z/(x*z - 1)"),
                ("w", "w - a3*x/(x*z - 1)"),
                ("a2", "a2 + a3"),
                ("a3", "0 - a3"),
                ("a4", "a4 + a3"),
            ],
            Some(("x*z - 1", "a3")),
        ),
        g(
            "w4",
            &[("z", "z + a4/w"), ("a3", "a3 + a4"), ("a4", "0 - a4"), ("a5", "a5 + a4")],
            Some(("w", "a4")),
        ),
        g("w5", &[("a4", "a4 + a5"), ("a5", "0 - a5"), ("a6", "a6 + a5")], None),
        g(
            "w6",
            &[
                ("x", "1 - x"),
                ("y", "0 - y"),
                ("z", "z/(z - 1)"),
                ("w", "0 - (z - 1)*((z - 1)*w + a4)"),
                ("t", "1 - t"),
                ("a5", "a5 + 2*a6"),
                ("a6", "0 - a6"),
            ],
            None,
        ),
    ];
    let automorphisms = vec![g(
        "psi",
        &[
            ("x", "(t - 1)*x/(t - x)"),
            ("y", "(t - x)*((t - x)*y - a2)/(t*(t - 1))"),
            ("z", "(t*z - 1)/(t - 1)"),
            ("w", "(t - 1)*w/t"),
            ("t", "1 - t"),
            ("a0", "a1"),
            ("a1", "a0"),
        ],
        None,
    )];
    // Fork w0-w2, w1-w2; chain w2-w3-w4-w5; double edge w5=w6.
    let coxeter = coxeter_from_edges(7, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5)], &[(5, 6)]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms,
        coxeter,
    }
}

fn d72_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "u0",
            &[
                ("x", "(t*x - 1)/(t - 1)"),
                ("y", "(t - 1)*y/t"),
                ("z", "(t*z - 1)/(t - 1)"),
                ("w", "(t - 1)*w/t"),
                ("t", "1 - t"),
                ("a0", "0 - a0"),
                ("a1", "a1 + 2*a0"),
            ],
            None,
        ),
        g(
            "u1",
            &[("y", "y - a1/x"), ("a0", "a0 + a1"), ("a1", "0 - a1"), ("a2", "a2 + a1")],
            Some(("x", "a1")),
        ),
        g(
            "u2",
            &[("x", "x + a2/y"), ("a1", "a1 + a2"), ("a2", "0 - a2"), ("a3", "a3 + a2")],
            Some(("y", "a2")),
        ),
        g(
            "u3",
            &[
                ("y", "y - a3/(x - z)"),
                ("w", "w + a3/(x - z)"),
                ("a2", "a2 + a3"),
                ("a3", "0 - a3"),
                ("a4", "a4 + a3"),
            ],
            Some(("x - z", "a3")),
        ),
        g(
            "u4",
            &[("z", "z + a4/w"), ("a3", "a3 + a4"), ("a4", "0 - a4"), ("a5", "a5 + a4")],
            Some(("w", "a4")),
        ),
        g("u5", &[("a4", "a4 + a5"), ("a5", "0 - a5"), ("a6", "a6 + a5")], None),
        g(
            "u6",
            &[
                ("x", "x/(x - 1)"),
                ("y", "0 - (x - 1)*((x - 1)*y + a2)"),
                ("z", "z/(z - 1)"),
                ("w", "0 - (z - 1)*((z - 1)*w + a4)"),
                ("t", "1 - t"),
                ("a5", "a5 + 2*a6"),
                ("a6", "0 - a6"),
            ],
            None,
        ),
    ];
    let automorphisms = vec![g(
        "phi",
        &[
            ("x", "1/(t*z)"),
            ("y", "0 - t*z*(z*w + a4)"),
            ("z", "1/(t*x)"),
            ("w", "0 - t*x*(x*y + a2)"),
            ("a0", "a6"),
            ("a1", "a5"),
            ("a2", "a4"),
            ("a4", "a2"),
            ("a5", "a1"),
            ("a6", "a0"),
        ],
        None,
    )];
    // Chain u0-…-u6 with double edges at both ends.
    let coxeter = coxeter_from_edges(7, &[(1, 2), (2, 3), (3, 4), (4, 5)], &[(0, 1), (5, 6)]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms,
        coxeter,
    }
}

fn d6auto_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "s0",
            &[("y", "y - a0/(x - eta)"), ("a0", "0 - a0"), ("a2", "a2 + a0")],
            Some(("x - eta", "a0")),
        ),
        g("s1", &[("a1", "0 - a1"), ("a2", "a2 + a1")], None),
        g(
            "s2",
            &[("x", "x + a2/y"), ("a0", "a0 + a2"), ("a1", "a1 + a2"), ("a2", "0 - a2"), ("a3", "a3 + a2")],
            Some(("y", "a2")),
        ),
        g(
            "s3",
            &[
                ("y", "y - a3/(x - z)"),
                ("w", "w + a3/(x - z)"),
                ("a2", "a2 + a3"),
                ("a3", "0 - a3"),
                ("a4", "a4 + a3"),
            ],
            Some(("x - z", "a3")),
        ),
        g(
            "s4",
            &[
                ("z", "z + a4/w"),
                ("a3", "a3 + a4"),
                ("a4", "0 - a4"),
                ("a5", "a5 + a4"),
                ("a6", "a6 + a4"),
            ],
            Some(("w", "a4")),
        ),
        g(
            "s5",
            &[("w", "w - a5/(z - 1)"), ("a4", "a4 + a5"), ("a5", "0 - a5")],
            Some(("z - 1", "a5")),
        ),
        g(
            "s6",
            &[("w", "w - a6/z"), ("a4", "a4 + a6"), ("a6", "0 - a6")],
            Some(("z", "a6")),
        ),
    ];
    let coxeter = coxeter_from_edges(7, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6)], &[]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms: Vec::new(),
        coxeter,
    }
}

fn a5_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "s0",
            &[("y", "y - a0/(x - t)"), ("a0", "0 - a0"), ("a1", "a1 + a0"), ("a5", "a5 + a0")],
            Some(("x - t", "a0")),
        ),
        g(
            "s1",
            &[("x", "x + a1/y"), ("a0", "a0 + a1"), ("a1", "0 - a1"), ("a2", "a2 + a1")],
            Some(("y", "a1")),
        ),
        g(
            "s2",
            &[
                ("y", "y - a2/(x - z)"),
                ("w", "w + a2/(x - z)"),
                ("a1", "a1 + a2"),
                ("a2", "0 - a2"),
                ("a3", "a3 + a2"),
            ],
            Some(("x - z", "a2")),
        ),
        g(
            "s3",
            &[("z", "z + a3/w"), ("a2", "a2 + a3"), ("a3", "0 - a3"), ("a4", "a4 + a3")],
            Some(("w", "a3")),
        ),
        g(
            "s4",
            &[("w", "w - a4/z"), ("a3", "a3 + a4"), ("a4", "0 - a4"), ("a5", "a5 + a4")],
            Some(("z", "a4")),
        ),
        g(
            "s5",
            &[
                ("x", "x + a5/(y + w - 1)"),
                ("z", "z + a5/(y + w - 1)"),
                ("a0", "a0 + a5"),
                ("a4", "a4 + a5"),
                ("a5", "0 - a5"),
            ],
            Some(("y + w - 1", "a5")),
        ),
    ];
    // 6-cycle in index order.
    let coxeter = coxeter_from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)], &[]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms: Vec::new(),
        coxeter,
    }
}

fn a4_generators(sys: &HamiltonianSystem) -> GeneratorSet {
    let g = |name: &str, ov: &[(&str, &str)], p: Option<(&str, &str)>| self_map(sys, name, ov, p);
    let reflections = vec![
        g(
            "s0",
            &[
                ("x", "x - a0/(x + y + w - t)"),
                ("y", "y + a0/(x + y + w - t)"),
                ("z", "z - a0/(x + y + w - t)"),
                ("a0", "0 - a0"),
                ("a1", "a1 + a0"),
                ("a4", "a4 + a0"),
            ],
            Some(("x + y + w - t", "a0")),
        ),
        g(
            "s1",
            &[("x", "x - a1/y"), ("a0", "a0 + a1"), ("a1", "0 - a1"), ("a2", "a2 + a1")],
            Some(("y", "a1")),
        ),
        g(
            "s2",
            &[
                ("y", "y + a2/(x - z)"),
                ("w", "w - a2/(x - z)"),
                ("a1", "a1 + a2"),
                ("a2", "0 - a2"),
                ("a3", "a3 + a2"),
            ],
            Some(("x - z", "a2")),
        ),
        g(
            "s3",
            &[("z", "z - a3/w"), ("a2", "a2 + a3"), ("a3", "0 - a3"), ("a4", "a4 + a3")],
            Some(("w", "a3")),
        ),
        g(
            "s4",
            &[("w", "w + a4/z"), ("a0", "a0 + a4"), ("a3", "a3 + a4"), ("a4", "0 - a4")],
            Some(("z", "a4")),
        ),
    ];
    // 5-cycle in index order.
    let coxeter = coxeter_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], &[]);
    GeneratorSet {
        system: sys.id,
        reflections,
        automorphisms: Vec::new(),
        coxeter,
    }
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

/// How a chart's polynomiality is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartMode {
    /// The pulled-back Hamiltonian (minus the declared correction) must be
    /// polynomial in the chart state variables.
    Hamiltonian,
    /// The four pulled-back vector-field components must be polynomial.
    VectorField,
}

/// A canonical coordinate chart with its stored triangular inverse.
#[derive(Debug, Clone)]
pub struct Chart {
    pub name: String,
    pub system: SystemId,
    pub table: Arc<SymbolTable>,
    /// Chart coordinates in terms of the original ones.
    pub forward: Vec<RationalExpr>,
    /// Original coordinates in terms of the chart ones.
    pub inverse: Vec<RationalExpr>,
    pub mode: ChartMode,
    /// Term subtracted from H before the pullback (e.g. `y`).
    pub correction: Option<RationalExpr>,
}

fn chart_of(
    sys: &HamiltonianSystem,
    name: &str,
    forward: &[(&str, &str)],
    inverse: &[(&str, &str)],
    mode: ChartMode,
    correction: Option<&str>,
) -> Chart {
    Chart {
        name: name.to_string(),
        system: sys.id,
        table: sys.table.clone(),
        forward: images_from(&sys.table, &sys.table, forward).unwrap(),
        inverse: images_from(&sys.table, &sys.table, inverse).unwrap(),
        mode,
        correction: correction.map(|c| parse(&sys.table, c).unwrap()),
    }
}

/// Chart catalog for a system.
pub fn charts(id: SystemId) -> Vec<Chart> {
    let sys = build_system(id);
    match id {
        SystemId::D6 => d6_charts(&sys),
        SystemId::D6Auto => d6auto_charts(&sys),
        SystemId::A5 => a5_charts(&sys),
        SystemId::A4 => a4_charts(&sys),
        _ => Vec::new(),
    }
}

/// Look up a chart by name (includes the composite appendix charts for D6).
pub fn chart(id: SystemId, name: &str) -> Result<Chart> {
    let mut catalog = charts(id);
    if id == SystemId::D6 {
        catalog.extend(d6_composite_charts());
    }
    catalog
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownChart(name.to_string()))
}

fn d6_charts(sys: &HamiltonianSystem) -> Vec<Chart> {
    let c = |name, f: &[(&str, &str)], i: &[(&str, &str)], corr: Option<&str>| {
        chart_of(sys, name, f, i, ChartMode::Hamiltonian, corr)
    };
    vec![
        c(
            "r0",
            &[("x", "0 - ((x - t)*y - a0)*y"), ("y", "1/y")],
            &[("x", "t + a0*y - x*y^2"), ("y", "1/y")],
            Some("y"),
        ),
        c(
            "r1",
            &[("x", "1/x"), ("y", "0 - x*(x*y + a1 + a2)")],
            &[("x", "1/x"), ("y", "0 - x^2*y - (a1 + a2)*x")],
            None,
        ),
        c(
            "r2",
            &[("x", "1/x"), ("y", "0 - x*(x*y + a2)")],
            &[("x", "1/x"), ("y", "0 - x^2*y - a2*x")],
            None,
        ),
        c(
            "r3",
            &[("x", "0 - ((x - z)*y - g1)*y"), ("y", "1/y"), ("w", "y + w")],
            &[("x", "z + y*(g1 - x*y)"), ("y", "1/y"), ("w", "w - 1/y")],
            None,
        ),
        c(
            "r4",
            &[("z", "1/z"), ("w", "0 - z*(z*w + b2)")],
            &[("z", "1/z"), ("w", "0 - z^2*w - b2*z")],
            None,
        ),
        c(
            "r5",
            &[("z", "0 - ((z - 1)*w - b3)*w"), ("w", "1/w")],
            &[("z", "1 + b3*w - z*w^2"), ("w", "1/w")],
            None,
        ),
        c(
            "r6",
            &[("z", "0 - w*(z*w - b4)"), ("w", "1/w")],
            &[("z", "w*(b4 - z*w)"), ("w", "1/w")],
            None,
        ),
    ]
}

fn d6auto_charts(sys: &HamiltonianSystem) -> Vec<Chart> {
    let c = |name, f: &[(&str, &str)], i: &[(&str, &str)], corr: Option<&str>| {
        chart_of(sys, name, f, i, ChartMode::Hamiltonian, corr)
    };
    vec![
        c(
            "r0",
            &[("x", "0 - ((x - eta)*y - a0)*y"), ("y", "1/y")],
            &[("x", "eta + a0*y - x*y^2"), ("y", "1/y")],
            Some("y"),
        ),
        c(
            "r1",
            &[("x", "1/x"), ("y", "0 - x*(x*y + a1 + a2)")],
            &[("x", "1/x"), ("y", "0 - x^2*y - (a1 + a2)*x")],
            None,
        ),
        c(
            "r2",
            &[("x", "1/x"), ("y", "0 - x*(x*y + a2)")],
            &[("x", "1/x"), ("y", "0 - x^2*y - a2*x")],
            None,
        ),
        c(
            "r3",
            &[("x", "0 - ((x - z)*y - a3)*y"), ("y", "1/y"), ("w", "y + w")],
            &[("x", "z + y*(a3 - x*y)"), ("y", "1/y"), ("w", "w - 1/y")],
            None,
        ),
        c(
            "r4",
            &[("z", "1/z"), ("w", "0 - z*(z*w + a4)")],
            &[("z", "1/z"), ("w", "0 - z^2*w - a4*z")],
            None,
        ),
        c(
            "r5",
            &[("z", "0 - ((z - 1)*w - a5)*w"), ("w", "1/w")],
            &[("z", "1 + a5*w - z*w^2"), ("w", "1/w")],
            None,
        ),
        c(
            "r6",
            &[("z", "0 - w*(z*w - a6)"), ("w", "1/w")],
            &[("z", "w*(a6 - z*w)"), ("w", "1/w")],
            None,
        ),
    ]
}

fn a5_charts(sys: &HamiltonianSystem) -> Vec<Chart> {
    let c = |name, f: &[(&str, &str)], i: &[(&str, &str)], corr: Option<&str>| {
        chart_of(sys, name, f, i, ChartMode::Hamiltonian, corr)
    };
    vec![
        c(
            "r0",
            &[("x", "0 - ((x - t)*y - a0)*y"), ("y", "1/y")],
            &[("x", "t + a0*y - x*y^2"), ("y", "1/y")],
            Some("y"),
        ),
        c(
            "r1",
            &[("x", "1/x"), ("y", "0 - (x*y + a1)*x")],
            &[("x", "1/x"), ("y", "0 - x^2*y - a1*x")],
            None,
        ),
        c(
            "r2",
            &[("x", "0 - ((x - z)*y - a2)*y"), ("y", "1/y"), ("w", "w + y")],
            &[("x", "z + y*(a2 - x*y)"), ("y", "1/y"), ("w", "w - 1/y")],
            None,
        ),
        c(
            "r3",
            &[("z", "1/z"), ("w", "0 - (z*w + a3)*z")],
            &[("z", "1/z"), ("w", "0 - z^2*w - a3*z")],
            None,
        ),
        c(
            "r4",
            &[("z", "0 - (z*w - a4)*w"), ("w", "1/w")],
            &[("z", "w*(a4 - z*w)"), ("w", "1/w")],
            None,
        ),
        // The printed x-degree-5 chart here is not symplectic as typeset; the
        // inner factor must be x (triangular, invertible, symplectic form
        // preserved), which is what this entry stores.
        c(
            "r5",
            &[
                ("x", "1/x"),
                ("y", "0 - ((y + w - 1)*x + a5)*x"),
                ("z", "z - x"),
            ],
            &[
                ("x", "1/x"),
                ("y", "1 - w - a5*x - y*x^2"),
                ("z", "z + 1/x"),
            ],
            None,
        ),
    ]
}

fn a4_charts(sys: &HamiltonianSystem) -> Vec<Chart> {
    let c = |name, f: &[(&str, &str)], i: &[(&str, &str)], corr: Option<&str>| {
        chart_of(sys, name, f, i, ChartMode::Hamiltonian, corr)
    };
    vec![
        c(
            "r0",
            &[
                ("x", "0 - ((x + y + w - t)*y - a0)*y"),
                ("y", "1/y"),
                ("z", "z + y"),
            ],
            &[
                ("x", "t - 1/y - w + a0*y - x*y^2"),
                ("y", "1/y"),
                ("z", "z - 1/y"),
            ],
            Some("y"),
        ),
        c(
            "r1",
            &[("x", "1/x"), ("y", "0 - (x*y + a1)*x")],
            &[("x", "1/x"), ("y", "0 - x^2*y - a1*x")],
            None,
        ),
        c(
            "r2",
            &[("x", "0 - ((x - z)*y - a2)*y"), ("y", "1/y"), ("w", "w + y")],
            &[("x", "z + y*(a2 - x*y)"), ("y", "1/y"), ("w", "w - 1/y")],
            None,
        ),
        c(
            "r3",
            &[("z", "1/z"), ("w", "0 - (z*w + a3)*z")],
            &[("z", "1/z"), ("w", "0 - z^2*w - a3*z")],
            None,
        ),
        c(
            "r4",
            &[("z", "0 - (z*w - a4)*w"), ("w", "1/w")],
            &[("z", "w*(a4 - z*w)"), ("w", "1/w")],
            None,
        ),
    ]
}

/// The composite pair (`r_i r_j`) and triple (`r_i r_j r_k`) charts of the
/// D6 system, certified at vector-field level. Names follow the composed
/// transformations; the pair charts are `r0r3 … r3r6`, the triples
/// `r3r4r2 … r1r0r3`.
pub fn d6_composite_charts() -> Vec<Chart> {
    let sys = build_system(SystemId::D6);
    let c = |name, f: &[(&str, &str)], i: &[(&str, &str)]| {
        chart_of(&sys, name, f, i, ChartMode::VectorField, None)
    };
    let mut out = vec![
        c(
            "r0r3",
            &[
                ("x", "0 - (y + w)*((x - t)*(y + w) - a0)"),
                ("y", "1/(y + w)"),
                ("z", "0 - ((z - x)*w - g1)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "t + a0*y - x*y^2"),
                ("y", "1/y - 1/w"),
                ("z", "t + a0*y - x*y^2 + g1*w - z*w^2"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r0r4",
            &[
                ("x", "0 - ((x - t)*y - a0)*y"),
                ("y", "1/y"),
                ("z", "1/z"),
                ("w", "0 - z*(z*w + b2)"),
            ],
            &[
                ("x", "t + a0*y - x*y^2"),
                ("y", "1/y"),
                ("z", "1/z"),
                ("w", "0 - z^2*w - b2*z"),
            ],
        ),
        c(
            "r0r5",
            &[
                ("x", "0 - ((x - t)*y - a0)*y"),
                ("y", "1/y"),
                ("z", "0 - ((z - 1)*w - b3)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "t + a0*y - x*y^2"),
                ("y", "1/y"),
                ("z", "1 + b3*w - z*w^2"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r0r6",
            &[
                ("x", "0 - ((x - t)*y - a0)*y"),
                ("y", "1/y"),
                ("z", "0 - (z*w - b4)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "t + a0*y - x*y^2"),
                ("y", "1/y"),
                ("z", "w*(b4 - z*w)"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r1r4",
            &[
                ("x", "1/x"),
                ("y", "0 - (x*y + a1 + a2)*x"),
                ("z", "1/z"),
                ("w", "0 - z*(z*w + b2)"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - (a1 + a2)*x"),
                ("z", "1/z"),
                ("w", "0 - z^2*w - b2*z"),
            ],
        ),
        c(
            "r1r5",
            &[
                ("x", "1/x"),
                ("y", "0 - (x*y + a1 + a2)*x"),
                ("z", "0 - ((z - 1)*w - b3)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - (a1 + a2)*x"),
                ("z", "1 + b3*w - z*w^2"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r1r6",
            &[
                ("x", "1/x"),
                ("y", "0 - (x*y + a1 + a2)*x"),
                ("z", "0 - (z*w - b4)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - (a1 + a2)*x"),
                ("z", "w*(b4 - z*w)"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r2r4",
            &[
                ("x", "1/x"),
                ("y", "0 - x*(x*y + a2)"),
                ("z", "1/z"),
                ("w", "0 - z*(z*w + b2)"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - a2*x"),
                ("z", "1/z"),
                ("w", "0 - z^2*w - b2*z"),
            ],
        ),
        c(
            "r2r5",
            &[
                ("x", "1/x"),
                ("y", "0 - x*(x*y + a2)"),
                ("z", "0 - ((z - 1)*w - b3)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - a2*x"),
                ("z", "1 + b3*w - z*w^2"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r2r6",
            &[
                ("x", "1/x"),
                ("y", "0 - x*(x*y + a2)"),
                ("z", "0 - (z*w - b4)*w"),
                ("w", "1/w"),
            ],
            &[
                ("x", "1/x"),
                ("y", "0 - x^2*y - a2*x"),
                ("z", "w*(b4 - z*w)"),
                ("w", "1/w"),
            ],
        ),
        c(
            "r3r5",
            &[
                ("x", "0 - ((x - z)*y - g1)*y"),
                ("y", "1/y"),
                ("z", "0 - ((z - 1)*(y + w) - b3)*(y + w)"),
                ("w", "1/(y + w)"),
            ],
            &[
                ("x", "1 + b3*w - z*w^2 + y*(g1 - x*y)"),
                ("y", "1/y"),
                ("z", "1 + b3*w - z*w^2"),
                ("w", "1/w - 1/y"),
            ],
        ),
        c(
            "r3r6",
            &[
                ("x", "0 - ((x - z)*y - g1)*y"),
                ("y", "1/y"),
                ("z", "0 - (z*(y + w) - b4)*(y + w)"),
                ("w", "1/(y + w)"),
            ],
            &[
                ("x", "w*(b4 - z*w) + y*(g1 - x*y)"),
                ("y", "1/y"),
                ("z", "w*(b4 - z*w)"),
                ("w", "1/w - 1/y"),
            ],
        ),
    ];
    out.extend(d6_triple_charts(&sys));
    out
}

/// The six triple composite charts, with inverses built step by step
/// (each is triangular in the chart coordinates).
fn d6_triple_charts(sys: &HamiltonianSystem) -> Vec<Chart> {
    let t = &sys.table;
    let e = |s: &str| parse(t, s).unwrap();
    let mk = |name: &str, forward: &[(&str, &str)], inverse: Vec<(&str, RationalExpr)>| {
        let mut inv = identity_images(t);
        for (n, x) in inverse {
            inv[t.index_of(n).unwrap()] = x;
        }
        Chart {
            name: name.to_string(),
            system: sys.id,
            table: t.clone(),
            forward: images_from(t, t, forward).unwrap(),
            inverse: inv,
            mode: ChartMode::VectorField,
            correction: None,
        }
    };

    let mut out = Vec::new();

    // r3(r4 r2) and r3(r4 r1): u := z(zw+b2) = -1/W; the chart z-coordinate
    // gives 1/z = X + g1 W - Z W^2, then w and y unwind triangularly.
    for (name, shift) in [("r3r4r2", "a2"), ("r3r4r1", "a1 + a2")] {
        let forward_y = format!("0 - x^2*y - z^2*w - ({shift})*x - b2*z");
        let forward: Vec<(&str, &str)> = vec![
            ("x", "1/x"),
            ("y", forward_y.leak()),
            (
                "z",
                "z*(z*w + b2)*(0 - x*z*w + z^2*w - (g1 + b4)*x - b2*x + b2*z + b4*x)/x",
            ),
            ("w", "0 - 1/(z*(z*w + b2))"),
        ];
        let x_inv = e("1/x");
        let u = e("0 - 1/w"); // z(zw+b2)
        let z_inv = e("x + g1*w - z*w^2").inverse().unwrap();
        let w_inv = u
            .div(&z_inv)
            .unwrap()
            .sub(&e("b2"))
            .div(&z_inv)
            .unwrap();
        // y = (-Y - z^2 w - shift*x - b2 z) / x^2  with x,z,w the originals
        let y_inv = e("0 - y")
            .sub(&z_inv.pow(2).mul(&w_inv))
            .sub(&e(shift).mul(&x_inv))
            .sub(&e("b2").mul(&z_inv))
            .div(&x_inv.pow(2))
            .unwrap();
        out.push(mk(
            name,
            &forward,
            vec![("x", x_inv), ("y", y_inv), ("z", z_inv), ("w", w_inv)],
        ));
    }

    // r4(r5 r3): with s := y+w and q := s(z-1) - b3 we have s q = -1/Z and
    // w q = (WZ - b2)/Y, which solves for q, then s, w, z, x in turn.
    {
        let forward: Vec<(&str, &str)> = vec![
            (
                "x",
                "w^2 + 2*y*w + y^2 - x*y^2 - z*w^2 - 2*y*z*w + (g1 + b4)*y + b3*(y + w) - b4*y",
            ),
            ("y", "1/y"),
            ("z", "0 - 1/((y + w)*(z*w + y*z - y - w - b3))"),
            (
                "w",
                "0 - ((y + w)*(z*w + y*z - y - w - b3)*((y + w)*(z*w - w) + b2*y - b3*w))/y",
            ),
        ];
        let y_inv = e("1/y");
        let q = e("0 - y/z - w*z + b2");
        let s = e("0 - 1")
            .div(&e("z").mul(&q))
            .unwrap();
        let w_inv = s.sub(&y_inv);
        let z_inv = RationalExpr::one(t).sub(&e("z").mul(&q).mul(&q.add(&e("b3"))));
        // x = (s^2 - z w^2 - 2 y z w + g1 y + b3 s - X)/y^2
        let x_inv = s
            .pow(2)
            .sub(&z_inv.mul(&w_inv.pow(2)))
            .sub(&e("2").mul(&y_inv).mul(&z_inv).mul(&w_inv))
            .add(&e("g1").mul(&y_inv))
            .add(&e("b3").mul(&s))
            .sub(&e("x"))
            .div(&y_inv.pow(2))
            .unwrap();
        out.push(mk(
            "r4r5r3",
            &forward,
            vec![("x", x_inv), ("y", y_inv), ("z", z_inv), ("w", w_inv)],
        ));
    }

    // r4(r6 r3): same scheme with q := s z - b4.
    {
        let forward: Vec<(&str, &str)> = vec![
            (
                "x",
                "0 - x*y^2 - z*w^2 - 2*y*z*w + (g1 + b4)*y + b4*w",
            ),
            ("y", "1/y"),
            ("z", "0 - 1/((y + w)*(z*w + y*z - b4))"),
            (
                "w",
                "0 - (y + w)*(z*w + y*z - b4)*(z*w^2 + y*z*w + b2*y - b4*w)/y",
            ),
        ];
        let y_inv = e("1/y");
        let q = e("0 - y/z - w*z + b2");
        let s = e("0 - 1").div(&e("z").mul(&q)).unwrap();
        let w_inv = s.sub(&y_inv);
        let z_inv = e("0 - z").mul(&q).mul(&q.add(&e("b4")));
        // x = (-X - z w^2 - 2 y z w + (g1+b4) y + b4 w)/y^2
        let x_inv = e("0 - x")
            .sub(&z_inv.mul(&w_inv.pow(2)))
            .sub(&e("2").mul(&y_inv).mul(&z_inv).mul(&w_inv))
            .add(&e("g1 + b4").mul(&y_inv))
            .add(&e("b4").mul(&w_inv))
            .div(&y_inv.pow(2))
            .unwrap();
        out.push(mk(
            "r4r6r3",
            &forward,
            vec![("x", x_inv), ("y", y_inv), ("z", z_inv), ("w", w_inv)],
        ));
    }

    // r2(r0 r3) and r1(r0 r3): with s := y+w and p := (t-x)s + a0 we have
    // s p = 1/X and y p = (Y X + shift)/W, so p, s, y, x, z unwind.
    for (name, shift) in [("r2r0r3", "a2"), ("r1r0r3", "a1 + a2")] {
        let fx = "1/((y + w)*(t*w - x*w + t*y - x*y + a0))";
        let fy = format!(
            "(y + w)*(t*w - x*w + t*y - x*y + a0)*(t*y*w - x*y*w + t*y^2 - x*y^2 + a0*y - ({shift})*w)/w"
        );
        let forward: Vec<(&str, &str)> = vec![
            ("x", fx),
            ("y", fy.leak()),
            (
                "z",
                "t*w^2 + 2*(t - x)*y*w + t*y^2 - x*y^2 - z*w^2 + a0*(y + w) + g1*w",
            ),
            ("w", "1/w"),
        ];
        let w_inv = e("1/w");
        let p = e("w/x").sub(&e(shift)).sub(&e("x*y"));
        let s = e("1/x").div(&p).unwrap();
        let y_inv = s.sub(&w_inv);
        let x_inv = e("t").sub(&p.sub(&e("a0")).div(&s).unwrap());
        // z = (t w^2 + 2(t-x) y w + (t-x) y^2 + a0 s + g1 w - Z)/w^2
        let z_inv = e("t")
            .mul(&w_inv.pow(2))
            .add(
                &e("2")
                    .mul(&e("t").sub(&x_inv))
                    .mul(&y_inv)
                    .mul(&w_inv),
            )
            .add(&e("t").sub(&x_inv).mul(&y_inv.pow(2)))
            .add(&e("a0").mul(&s))
            .add(&e("g1").mul(&w_inv))
            .sub(&e("z"))
            .div(&w_inv.pow(2))
            .unwrap();
        out.push(mk(
            name,
            &forward,
            vec![("x", x_inv), ("y", y_inv), ("z", z_inv), ("w", w_inv)],
        ));
    }

    out
}

// ---------------------------------------------------------------------------
// Section-7 auxiliary systems (planar pair and the quartic g-system)
// ---------------------------------------------------------------------------

/// Table of the planar two-parameter system of the derivation section.
pub fn planar_table() -> Arc<SymbolTable> {
    use SymbolRole::*;
    SymbolTable::new(&[
        ("x", State),
        ("y", State),
        ("t", Time),
        ("g1", Parameter),
        ("g2", Parameter),
    ])
}

/// Table of the quartic coupled system acted on by g1…g4.
pub fn quartic_table() -> Arc<SymbolTable> {
    use SymbolRole::*;
    SymbolTable::new(&[
        ("x", State),
        ("y", State),
        ("z", State),
        ("w", State),
        ("t", Time),
        ("a1", Parameter),
        ("a2", Parameter),
        ("a3", Parameter),
        ("a4", Parameter),
    ])
}

fn raw_map(
    table: &Arc<SymbolTable>,
    name: &str,
    overrides: &[(&str, &str)],
    poisson: Option<(&str, &str)>,
) -> BirationalSymplecticMap {
    BirationalSymplecticMap {
        name: name.to_string(),
        source: SystemId::D6, // placeholder id; these live on their own tables
        target: SystemId::D6,
        source_table: table.clone(),
        target_table: table.clone(),
        images: images_from(table, table, overrides).unwrap(),
        poisson: poisson.map(|(f, alpha)| PoissonData {
            f: parse(table, f).unwrap().num().clone(),
            alpha: alpha.to_string(),
        }),
    }
}

/// The planar generators u1, u2 (classical W(A2) representation).
pub fn planar_generators() -> Vec<BirationalSymplecticMap> {
    let t = planar_table();
    vec![
        raw_map(
            &t,
            "u1",
            &[("x", "x + g1/y"), ("g1", "0 - g1"), ("g2", "g2 + g1")],
            Some(("y", "g1")),
        ),
        raw_map(
            &t,
            "u2",
            &[("y", "y - g2/x"), ("g1", "g1 + g2"), ("g2", "0 - g2")],
            Some(("x", "g2")),
        ),
    ]
}

/// The quartic generators g1…g4 (classical W(A4) representation).
pub fn quartic_generators() -> Vec<BirationalSymplecticMap> {
    let t = quartic_table();
    vec![
        raw_map(
            &t,
            "g1",
            &[("z", "z + a1/w"), ("a1", "0 - a1"), ("a2", "a2 + a1"), ("a4", "a4 + a1")],
            Some(("w", "a1")),
        ),
        raw_map(
            &t,
            "g2",
            &[("w", "w - a2/z"), ("a1", "a1 + a2"), ("a2", "0 - a2")],
            Some(("z", "a2")),
        ),
        raw_map(
            &t,
            "g3",
            &[("x", "x + a3/y"), ("a3", "0 - a3"), ("a4", "a4 + a3")],
            Some(("y", "a3")),
        ),
        raw_map(
            &t,
            "g4",
            &[
                ("y", "y - a4/(x - z)"),
                ("w", "w + a4/(x - z)"),
                ("a1", "a1 + a4"),
                ("a3", "a3 + a4"),
                ("a4", "0 - a4"),
            ],
            Some(("x - z", "a4")),
        ),
    ]
}

/// Coxeter matrix of the classical A4 representation g1…g4:
/// braid pairs (g1,g2), (g1,g4), (g3,g4); the rest commute.
pub fn quartic_coxeter() -> Vec<Vec<u32>> {
    coxeter_from_edges(4, &[(0, 1), (0, 3), (2, 3)], &[])
}

/// The two planar charts of the derivation section.
pub fn planar_charts() -> Vec<Chart> {
    let t = planar_table();
    let mk = |name: &str, f: &[(&str, &str)], i: &[(&str, &str)]| Chart {
        name: name.to_string(),
        system: SystemId::D6, // placeholder; lives on the planar table
        table: t.clone(),
        forward: images_from(&t, &t, f).unwrap(),
        inverse: images_from(&t, &t, i).unwrap(),
        mode: ChartMode::Hamiltonian,
        correction: None,
    };
    vec![
        mk(
            "c1",
            &[("x", "1/x"), ("y", "0 - (x*y + g1)*x")],
            &[("x", "1/x"), ("y", "0 - x^2*y - g1*x")],
        ),
        mk(
            "c2",
            &[("x", "0 - (x*y - g2)*y"), ("y", "1/y")],
            &[("x", "y*(g2 - x*y)"), ("y", "1/y")],
        ),
    ]
}

/// The four charts attached to g1…g4.
pub fn quartic_charts() -> Vec<Chart> {
    let t = quartic_table();
    let mk = |name: &str, f: &[(&str, &str)], i: &[(&str, &str)]| Chart {
        name: name.to_string(),
        system: SystemId::D6, // placeholder; lives on the quartic table
        table: t.clone(),
        forward: images_from(&t, &t, f).unwrap(),
        inverse: images_from(&t, &t, i).unwrap(),
        mode: ChartMode::Hamiltonian,
        correction: None,
    };
    vec![
        mk(
            "g1",
            &[("z", "1/z"), ("w", "0 - z*(z*w + a1)")],
            &[("z", "1/z"), ("w", "0 - z^2*w - a1*z")],
        ),
        mk(
            "g2",
            &[("z", "0 - w*(z*w - a2)"), ("w", "1/w")],
            &[("z", "w*(a2 - z*w)"), ("w", "1/w")],
        ),
        mk(
            "g3",
            &[("x", "1/x"), ("y", "0 - x*(x*y + a3)")],
            &[("x", "1/x"), ("y", "0 - x^2*y - a3*x")],
        ),
        mk(
            "g4",
            &[("x", "0 - ((x - z)*y - a4)*y"), ("y", "1/y"), ("w", "y + w")],
            &[("x", "z + y*(a4 - x*y)"), ("y", "1/y"), ("w", "w - 1/y")],
        ),
    ]
}

// ---------------------------------------------------------------------------
// Cross-system equivalence maps and the confluence substitution
// ---------------------------------------------------------------------------

/// Identifier of a cross-system equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceId {
    D6ToB6A,
    D6ToB6B,
    D6ToD72,
}

impl EquivalenceId {
    pub const ALL: [EquivalenceId; 3] = [
        EquivalenceId::D6ToB6A,
        EquivalenceId::D6ToB6B,
        EquivalenceId::D6ToD72,
    ];

    pub fn parse(s: &str) -> Result<EquivalenceId> {
        match s.to_ascii_lowercase().as_str() {
            "d6-to-b6a" | "b6a" => Ok(EquivalenceId::D6ToB6A),
            "d6-to-b6b" | "b6b" => Ok(EquivalenceId::D6ToB6B),
            "d6-to-d72" | "d72" => Ok(EquivalenceId::D6ToD72),
            other => Err(Error::Parse(format!("unknown equivalence `{other}`"))),
        }
    }

    pub fn target(&self) -> SystemId {
        match self {
            EquivalenceId::D6ToB6A => SystemId::B6A,
            EquivalenceId::D6ToB6B => SystemId::B6B,
            EquivalenceId::D6ToD72 => SystemId::D72,
        }
    }
}

/// The birational symplectic equivalence from the D6 system to the target,
/// including the parameter dictionary.
pub fn equivalence_map(id: EquivalenceId) -> BirationalSymplecticMap {
    let d6 = build_system(SystemId::D6);
    let tgt = build_system(id.target());
    let (name, overrides): (&str, Vec<(&str, &str)>) = match id {
        EquivalenceId::D6ToB6A => (
            "d6-to-b6a",
            vec![
                ("x", "1/x"),
                ("y", "0 - (x*y + a2)*x"),
                ("a0", "(a0 - a1)/2"),
                ("a1", "a1"),
                ("a2", "a2"),
                ("a3", "g1"),
                ("a4", "b2"),
                ("a5", "b3"),
                ("a6", "b4"),
            ],
        ),
        EquivalenceId::D6ToB6B => (
            "d6-to-b6b",
            vec![
                ("z", "1/z"),
                ("w", "0 - z*(z*w + b2)"),
                ("a0", "a0"),
                ("a1", "a1"),
                ("a2", "a2"),
                ("a3", "g1"),
                ("a4", "b2"),
                ("a5", "b4"),
                ("a6", "(b3 - b4)/2"),
            ],
        ),
        EquivalenceId::D6ToD72 => (
            "d6-to-d72",
            vec![
                ("x", "1/x"),
                ("y", "0 - (x*y + a2)*x"),
                ("z", "1/z"),
                ("w", "0 - (z*w + b2)*z"),
                ("a0", "(a0 - a1)/2"),
                ("a1", "a1"),
                ("a2", "a2"),
                ("a3", "g1"),
                ("a4", "b2"),
                ("a5", "b4"),
                ("a6", "(b3 - b4)/2"),
            ],
        ),
    };
    BirationalSymplecticMap {
        name: name.to_string(),
        source: SystemId::D6,
        target: tgt.id,
        source_table: d6.table.clone(),
        target_table: tgt.table.clone(),
        images: images_from(&d6.table, &tgt.table, &overrides).unwrap(),
        poisson: None,
    }
}

/// The generator dictionary of an equivalence: pairs
/// `(target generator name, word in D6 generator names)`.
pub fn equivalence_dictionary(id: EquivalenceId) -> Vec<(&'static str, Vec<&'static str>)> {
    match id {
        EquivalenceId::D6ToB6A => vec![
            ("S0", vec!["pi4"]),
            ("S1", vec!["s1"]),
            ("S2", vec!["s2"]),
            ("S3", vec!["s3"]),
            ("S4", vec!["s4"]),
            ("S5", vec!["s5"]),
            ("S6", vec!["s6"]),
            ("phi", vec!["pi3"]),
        ],
        EquivalenceId::D6ToB6B => vec![
            ("w0", vec!["s0"]),
            ("w1", vec!["s1"]),
            ("w2", vec!["s2"]),
            ("w3", vec!["s3"]),
            ("w4", vec!["s4"]),
            ("w5", vec!["s6"]),
            ("w6", vec!["pi3"]),
            ("psi", vec!["pi4"]),
        ],
        EquivalenceId::D6ToD72 => vec![
            ("u0", vec!["pi4"]),
            ("u1", vec!["s1"]),
            ("u2", vec!["s2"]),
            ("u3", vec!["s3"]),
            ("u4", vec!["s4"]),
            ("u5", vec!["s6"]),
            ("u6", vec!["pi3"]),
            ("phi", vec!["pi2"]),
        ],
    }
}

/// Table of the ε-family: states X,Y,Z,W (named x,y,z,w), time T (named t),
/// parameters A0…A5 (named a0…a5) and the confluence parameter ε.
pub fn epsilon_table() -> Arc<SymbolTable> {
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
        ("a3", Parameter),
        ("a4", Parameter),
        ("a5", Parameter),
        ("eps", Deformation),
    ])
}

/// The confluence substitution: every D6 symbol expressed over the ε-family
/// table (old variables and parameters in terms of the new ones).
pub struct ConfluenceSubstitution {
    pub d6_table: Arc<SymbolTable>,
    pub eps_table: Arc<SymbolTable>,
    /// One image per D6 symbol, over the ε-family table.
    pub old_in_new: Vec<RationalExpr>,
}

pub fn confluence_substitution() -> ConfluenceSubstitution {
    let d6 = build_system(SystemId::D6);
    let eps = epsilon_table();
    let overrides: Vec<(&str, &str)> = vec![
        ("x", "x/(x - t)"),
        ("y", "0 - (x - t)*((x - t)*y + a1)/t"),
        ("z", "z/(z - t)"),
        ("w", "0 - (z - t)*((z - t)*w + a3)/t"),
        ("t", "1 - eps*t"),
        ("a0", "1/eps"),
        ("a1", "a0"),
        ("a2", "a1"),
        ("g1", "a2"),
        ("b2", "a3"),
        ("b3", "0 - 1/eps - (a1 + a2 + a3 - a5)"),
        ("b4", "a4"),
    ];
    ConfluenceSubstitution {
        old_in_new: images_from(&eps, &d6.table, &overrides).unwrap(),
        d6_table: d6.table.clone(),
        eps_table: eps,
    }
}

/// Tables for the planar degeneration (Painlevé VI → V).
pub fn planar_p6_table() -> Arc<SymbolTable> {
    use SymbolRole::*;
    SymbolTable::new(&[
        ("x", State),
        ("y", State),
        ("t", Time),
        ("d0", Parameter),
        ("d1", Parameter),
        ("d2", Parameter),
        ("d3", Parameter),
        ("d4", Parameter),
    ])
}

pub fn planar_p5_table() -> Arc<SymbolTable> {
    use SymbolRole::*;
    SymbolTable::new(&[
        ("x", State),
        ("y", State),
        ("t", Time),
        ("a0", Parameter),
        ("a1", Parameter),
        ("a2", Parameter),
        ("a3", Parameter),
        ("eps", Deformation),
    ])
}
