//! Rational expressions: quotients of polynomials with fraction-free
//! equality.
//!
//! No multivariate GCD is ever computed. Normalization is limited to cheap,
//! always-sound steps: stripping a common monomial factor, rescaling so the
//! denominator is integer-primitive with positive leading coefficient, and
//! optional trial division by a catalog of known low-degree factors.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Q};
use crate::table::{same_table, SymbolTable};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// A quotient `num/den` of polynomials over a shared symbol table.
///
/// Invariants: `den` is nonzero with positive leading coefficient and
/// integer-primitive content; `num` and `den` share no monomial factor.
/// Equality of `a/b` and `c/d` is defined as `a*d - c*b = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        same_table(num.table(), den.table())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let table = num.table().clone();
            return Ok(RationalExpr {
                num,
                den: Polynomial::one(&table),
            });
        }
        // Strip the common monomial factor.
        let mut cn = num.monomial_content();
        let cd = den.monomial_content();
        for (a, &b) in cn.0.iter_mut().zip(cd.0.iter()) {
            *a = (*a).min(b);
        }
        let (mut num, mut den) = if cn.total_degree() > 0 {
            (num.divide_monomial(&cn), den.divide_monomial(&cn))
        } else {
            (num, den)
        };
        // Scale so the denominator is primitive with positive leading
        // coefficient. This keeps coefficient growth bounded and makes the
        // printed form deterministic.
        let content = den.rational_content();
        if !content.is_one() {
            let inv = Q::one() / content;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalExpr { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let table = p.table().clone();
        RationalExpr {
            num: p,
            den: Polynomial::one(&table),
        }
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(Polynomial::zero(table))
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(Polynomial::one(table))
    }

    pub fn int(table: &Arc<SymbolTable>, n: i64) -> Self {
        Self::from_poly(Polynomial::int(table, n))
    }

    pub fn sym(table: &Arc<SymbolTable>, name: &str) -> Result<Self> {
        Ok(Self::from_poly(Polynomial::sym(table, name)?))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1 (expression is already a
    /// polynomial in stored form).
    pub fn is_polynomial_form(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("add")
    }

    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("mul")
    }

    pub fn div(&self, other: &RationalExpr) -> Result<RationalExpr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalExpr::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Q) -> RationalExpr {
        RationalExpr::new(self.num.scale(c), self.den.clone()).expect("scale")
    }

    pub fn pow(&self, n: u32) -> RationalExpr {
        let mut acc = RationalExpr::one(self.table());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inverse(&self) -> Result<RationalExpr> {
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    /// Quotient-rule partial derivative.
    pub fn differentiate(&self, idx: usize) -> RationalExpr {
        let dn = self.num.differentiate(idx);
        let dd = self.den.differentiate(idx);
        if dd.is_zero() {
            return RationalExpr::new(dn, self.den.clone()).expect("diff");
        }
        RationalExpr::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
        .expect("diff")
    }

    /// Fraction-free equality: `a/b = c/d` iff `a*d - c*b = 0`.
    pub fn rat_equal(&self, other: &RationalExpr) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }

    /// The cross-multiplied residual `a*d - c*b`; zero iff equal. Used as the
    /// witness polynomial in verification reports.
    pub fn residual(&self, other: &RationalExpr) -> Polynomial {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den))
    }

    /// Trial-divide `num` and `den` by each catalog factor while both remain
    /// divisible. This is the engine's only cancellation mechanism beyond
    /// monomial content: sound for any factor list and needed to keep long
    /// map compositions from swelling.
    pub fn reduce_with(&self, catalog: &[Polynomial]) -> RationalExpr {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return self.clone();
        }
        let mut changed = false;
        for f in catalog {
            if f.is_constant() {
                continue;
            }
            loop {
                if den.total_degree() < f.total_degree() {
                    break;
                }
                let Ok(Some(qd)) = den.try_exact_div(f) else {
                    break;
                };
                let Ok(Some(qn)) = num.try_exact_div(f) else {
                    break;
                };
                num = qn;
                den = qd;
                changed = true;
            }
        }
        if changed {
            RationalExpr::new(num, den).expect("reduce")
        } else {
            self.clone()
        }
    }

    /// Exact evaluation at a full rational assignment.
    pub fn eval_q(&self, values: &[Q]) -> Result<Q> {
        let d = self.den.eval_q(values);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_q(values) / d)
    }

    /// Floating-point evaluation at a full assignment.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    /// Map into another table by symbol name.
    pub fn rename_into(&self, target: &Arc<SymbolTable>) -> Result<RationalExpr> {
        RationalExpr::new(self.num.rename_into(target)?, self.den.rename_into(target)?)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Substitute images for every symbol of `p`'s table simultaneously.
///
/// `images[i]` is the replacement for symbol `i`; all images must share one
/// target table (which may differ from `p`'s). The result is assembled over
/// the single common denominator `prod_i d_i^{E_i}` where `E_i` is the
/// largest exponent of symbol `i` in `p`, avoiding quadratic blowup from
/// repeated pairwise rational addition.
pub fn substitute_poly(p: &Polynomial, images: &[RationalExpr]) -> Result<RationalExpr> {
    assert_eq!(images.len(), p.table().len(), "one image per symbol");
    let target = if let Some(img) = images.first() {
        img.table().clone()
    } else {
        p.table().clone()
    };
    for img in images {
        same_table(img.table(), &target)?;
    }
    if p.is_zero() {
        return Ok(RationalExpr::zero(&target));
    }
    // Max exponent per symbol.
    let n = images.len();
    let mut maxes = vec![0u16; n];
    for (m, _) in p.terms() {
        for (i, &e) in m.0.iter().enumerate() {
            maxes[i] = maxes[i].max(e);
        }
    }
    // Power tables for numerators and denominators.
    let mut num_pows: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    let mut den_pows: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for (i, img) in images.iter().enumerate() {
        let mut np = vec![Polynomial::one(&target)];
        let mut dp = vec![Polynomial::one(&target)];
        for e in 1..=maxes[i] as usize {
            np.push(np[e - 1].mul(img.num()));
            dp.push(dp[e - 1].mul(img.den()));
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut acc = Polynomial::zero(&target);
    for (m, c) in p.terms() {
        let mut term = Polynomial::constant(&target, c.clone());
        for i in 0..n {
            let e = m.0[i] as usize;
            if e > 0 {
                term = term.mul(&num_pows[i][e]);
            }
            let co_e = maxes[i] as usize - e;
            if co_e > 0 {
                term = term.mul(&den_pows[i][co_e]);
            }
        }
        acc = acc.add(&term);
    }
    let mut den = Polynomial::one(&target);
    for i in 0..n {
        let e = maxes[i] as usize;
        if e > 0 {
            den = den.mul(&den_pows[i][e]);
        }
    }
    RationalExpr::new(acc, den)
}

/// Substitute into a rational expression: images applied to numerator and
/// denominator, recombined as a quotient. Errors when the substituted
/// denominator is identically zero.
pub fn substitute(e: &RationalExpr, images: &[RationalExpr]) -> Result<RationalExpr> {
    let n = substitute_poly(e.num(), images)?;
    let d = substitute_poly(e.den(), images)?;
    if d.is_zero() {
        return Err(Error::DivisionByZeroExpr(format!("{e}")));
    }
    n.div(&d)
}

/// Identity images for a table: symbol `i` maps to itself.
pub fn identity_images(table: &Arc<SymbolTable>) -> Vec<RationalExpr> {
    (0..table.len())
        .map(|i| RationalExpr::from_poly(Polynomial::var(table, i)))
        .collect()
}

/// Same-table substitution of a few named symbols, all others fixed.
pub fn substitute_named(
    e: &RationalExpr,
    bindings: &[(&str, RationalExpr)],
) -> Result<RationalExpr> {
    let table = e.table();
    let mut images = identity_images(table);
    for (name, img) in bindings {
        same_table(img.table(), table)?;
        images[table.index_of(name)?] = img.clone();
    }
    substitute(e, &images)
}
