//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by a graded-lexicographic monomial
//! order (total degree first, then lexicographic in symbol-table order), so
//! iteration order, leading terms and printed forms are all canonical.

use crate::error::{Error, Result};
use crate::table::{same_table, SymbolTable};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exact rational scalar used for every coefficient in the engine.
pub type Q = BigRational;

/// Convenience constructor for small rationals.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for small integers as rationals.
pub fn qi(num: i64) -> Q {
    Q::from(BigInt::from(num))
}

/// An exponent vector, one nonnegative entry per table symbol.
///
/// Ordering is graded-lexicographic: compare total degrees first, then the
/// exponent vectors lexicographically in table order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 16]>);

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn var(len: usize, idx: usize) -> Self {
        let mut m = Self::unit(len);
        m.0[idx] = 1;
        m
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Total degree restricted to the given symbol indices.
    pub fn degree_in(&self, indices: &[usize]) -> u32 {
        indices.iter().map(|&i| self.0[i] as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise division; `None` when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    /// True when every exponent of `other` is dominated by `self`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a >= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over `Q` in a fixed symbol table.
///
/// Invariants: no stored coefficient is zero; every exponent vector has the
/// table's length. Values are immutable after construction and safe to share
/// across threads.
#[derive(Debug, Clone)]
pub struct Polynomial {
    table: Arc<SymbolTable>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Polynomial {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<SymbolTable>, c: Q) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(table.len()), c);
        }
        p
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(table, Q::one())
    }

    pub fn int(table: &Arc<SymbolTable>, n: i64) -> Self {
        Self::constant(table, qi(n))
    }

    /// The polynomial consisting of the single symbol at `idx`.
    pub fn var(table: &Arc<SymbolTable>, idx: usize) -> Self {
        let mut p = Self::zero(table);
        p.terms.insert(Monomial::var(table.len(), idx), Q::one());
        p
    }

    /// The polynomial for the named symbol.
    pub fn sym(table: &Arc<SymbolTable>, name: &str) -> Result<Self> {
        Ok(Self::var(table, table.index_of(name)?))
    }

    pub fn from_terms(table: &Arc<SymbolTable>, terms: BTreeMap<Monomial, Q>) -> Self {
        let mut p = Polynomial {
            table: table.clone(),
            terms,
        };
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.total_degree() == 0 && c.is_one())
                .unwrap_or(false)
    }

    /// True when the polynomial is a (possibly zero) constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&Monomial::unit(self.table.len()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Leading (graded-lex greatest) term, if nonzero.
    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of an explicit monomial (zero when absent).
    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Total degree; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Degree counting only the given symbols.
    pub fn degree_in(&self, indices: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(indices))
            .max()
            .unwrap_or(0)
    }

    /// True when the symbol at `idx` occurs in some term.
    pub fn contains_symbol(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        same_table(&self.table, &other.table).expect("polynomial add");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        same_table(&self.table, &other.table).expect("polynomial mul");
        let mut terms: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m.clone()).or_insert_with(Q::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Self::one(&self.table);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to the symbol at `idx`.
    pub fn differentiate(&self, idx: usize) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] = e - 1;
            terms.insert(m2, c * qi(e as i64));
        }
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    /// Multivariate reduction of `self` by `f` under the graded-lex order:
    /// returns `(q, r)` with `self = q*f + r` and no term of `r` divisible by
    /// the leading monomial of `f`. For exact multiples the remainder is
    /// zero, so this doubles as the engine's divisibility test.
    pub fn divide(&self, f: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        match self.divide_impl(f, false)? {
            Some(pair) => Ok(pair),
            None => unreachable!("divide_impl only aborts in exact mode"),
        }
    }

    /// Quotient when `f` divides `self` exactly; `None` as soon as a
    /// remainder term appears (much cheaper than a full `divide` on large
    /// non-divisible inputs).
    pub fn try_exact_div(&self, f: &Polynomial) -> Result<Option<Polynomial>> {
        Ok(self.divide_impl(f, true)?.map(|(q, _)| q))
    }

    fn divide_impl(
        &self,
        f: &Polynomial,
        exact_only: bool,
    ) -> Result<Option<(Polynomial, Polynomial)>> {
        same_table(&self.table, &f.table)?;
        let (flm, flc) = f.leading_term().ok_or(Error::DivisionByZero)?;
        let flm = flm.clone();
        let flc = flc.clone();
        let mut p = self.terms.clone();
        let mut quot: BTreeMap<Monomial, Q> = BTreeMap::new();
        let mut rem: BTreeMap<Monomial, Q> = BTreeMap::new();
        while let Some((plm, _)) = p.iter().next_back() {
            let plm = plm.clone();
            if let Some(mq) = plm.div(&flm) {
                let plc = p.remove(&plm).expect("leading term present");
                let cq = &plc / &flc;
                // p -= (cq·mq)·f, in place.
                for (fm, fc) in f.terms.iter() {
                    let m = fm.mul(&mq);
                    if m == plm {
                        continue; // removed above
                    }
                    let delta = fc * &cq;
                    let entry = p.entry(m);
                    match entry {
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let v = o.get() - &delta;
                            if v.is_zero() {
                                o.remove();
                            } else {
                                *o.get_mut() = v;
                            }
                        }
                        std::collections::btree_map::Entry::Vacant(vac) => {
                            vac.insert(-delta);
                        }
                    }
                }
                quot.insert(mq, cq);
            } else {
                if exact_only {
                    return Ok(None);
                }
                let plc = p.remove(&plm).expect("leading term present");
                rem.insert(plm, plc);
            }
        }
        Ok(Some((
            Polynomial {
                table: self.table.clone(),
                terms: quot,
            },
            Polynomial {
                table: self.table.clone(),
                terms: rem,
            },
        )))
    }

    /// True iff `f` divides `self` exactly.
    pub fn divisible_by(&self, f: &Polynomial) -> bool {
        matches!(self.try_exact_div(f), Ok(Some(_)))
    }

    /// Exact quotient; panics when the division is inexact (used where
    /// exactness is a proven invariant, e.g. fraction-free elimination).
    pub fn exact_div(&self, f: &Polynomial) -> Polynomial {
        self.try_exact_div(f)
            .expect("exact_div by zero")
            .expect("exact_div: inexact division")
    }

    /// Componentwise minimum exponent vector over all terms (the largest
    /// monomial dividing every term). Zero polynomial returns the unit.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut acc = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::unit(self.table.len()),
        };
        for m in it {
            for (a, &b) in acc.0.iter_mut().zip(m.0.iter()) {
                *a = (*a).min(b);
            }
        }
        acc
    }

    /// Divide every term by the given monomial (must divide all terms).
    pub fn divide_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial content"), c.clone()))
                .collect(),
        }
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients; the sign is chosen so that the leading
    /// coefficient of `self / c` is positive. Zero polynomial returns 1.
    pub fn rational_content(&self) -> Q {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Q::one();
        }
        let mut content = Q::new(num_gcd, den_lcm);
        if let Some((_, lc)) = self.leading_term() {
            if lc.is_negative() {
                content = -content;
            }
        }
        content
    }

    /// Map this polynomial into another table by symbol name. Every symbol
    /// occurring in a term must exist in the target table.
    pub fn rename_into(&self, target: &Arc<SymbolTable>) -> Result<Polynomial> {
        let mut index_map: Vec<Option<usize>> = Vec::with_capacity(self.table.len());
        for i in 0..self.table.len() {
            index_map.push(target.find(self.table.name(i)));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = Monomial::unit(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let j = index_map[i]
                        .ok_or_else(|| Error::UnknownSymbol(self.table.name(i).to_string()))?;
                    m2.0[j] = e;
                }
            }
            terms.insert(m2, c.clone());
        }
        Ok(Polynomial {
            table: target.clone(),
            terms,
        })
    }

    /// Exact evaluation at a full rational assignment (one value per symbol).
    pub fn eval_q(&self, values: &[Q]) -> Q {
        assert_eq!(values.len(), self.table.len());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &values[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Floating-point evaluation at a full assignment.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for (i, &e) in m.0.iter().enumerate() {
                term *= values[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Collect terms by the exponents of the given symbols: returns a map
    /// from the restricted exponent vector (in the order of `indices`) to the
    /// polynomial coefficient in the remaining symbols.
    pub fn collect_by(&self, indices: &[usize]) -> BTreeMap<Vec<u16>, Polynomial> {
        let mut out: BTreeMap<Vec<u16>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u16> = indices.iter().map(|&i| m.0[i]).collect();
            let mut rest = m.clone();
            for &i in indices {
                rest.0[i] = 0;
            }
            let entry = out
                .entry(key)
                .or_insert_with(|| Polynomial::zero(&self.table));
            let mut single = Polynomial::zero(&self.table);
            single.terms.insert(rest, c.clone());
            *entry = entry.add(&single);
        }
        out
    }
}

/// Lossless-enough conversion of a big rational to f64 via a quotient of
/// doubles after scaling; adequate for the numeric cross-checks.
pub fn rational_to_f64(c: &Q) -> f64 {
    let num = c.numer();
    let den = c.denom();
    // Fast path for small values.
    if let (Some(n), Some(d)) = (to_i128(num), to_i128(den)) {
        return n as f64 / d as f64;
    }
    let bits = num.bits().max(den.bits()) as i64;
    let shift = (bits - 100).max(0) as u64;
    let n = num >> shift;
    let d = den >> shift;
    bigint_to_f64(&n) / bigint_to_f64(&d)
}

fn to_i128(x: &BigInt) -> Option<i128> {
    use num_traits::ToPrimitive;
    x.to_i128()
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

impl fmt::Display for Polynomial {
    /// Canonical printer: terms in descending graded-lex order, e.g.
    /// `x^3*y^2 - 2*t*x*y + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.total_degree() == 0 {
                if abs.denom().is_one() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (idx, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.table.name(idx).to_string()),
                    _ => factors.push(format!("{}^{}", self.table.name(idx), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
