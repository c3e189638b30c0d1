//! Exact symbolic verification engine for coupled Painlevé VI Hamiltonian
//! systems in dimension four, together with a floating-point cross-checker.
//!
//! The crate is organized as:
//! - [`poly`], [`ratexpr`], [`parse`], [`table`]: the exact arithmetic kernel
//!   (big-rational sparse polynomials, fraction-free rational expressions,
//!   the text grammar);
//! - [`systems`]: the catalog of Hamiltonian systems (types D6(1), two B6(1)
//!   forms, D7(2), the autonomous D6 variant, A5(1), A4(1));
//! - [`maps`]: birational symplectic maps — Bäcklund generators, diagram
//!   automorphisms, holomorphy charts, equivalence maps;
//! - [`verify`]: the theorem-checking layer (symplecticity, Bäcklund
//!   symmetry, Coxeter relations, translations, invariant divisors, first
//!   integrals, the Poisson-series formula);
//! - [`holomorphy`]: chart pullbacks and polynomiality certificates;
//! - [`ansatz`]: re-derivation of the Hamiltonians from holomorphy
//!   constraints by fraction-free elimination;
//! - [`confluence`]: the eps-degeneration to A5(1), subgroup convergence, and
//!   the cross-system equivalences;
//! - [`numeric`]: RK4 integration, first-integral drift, numeric Bäcklund
//!   checks, finite-difference validation.

pub mod ansatz;
pub mod confluence;
pub mod error;
pub mod holomorphy;
pub mod maps;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod ratexpr;
pub mod systems;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Q};
pub use ratexpr::RationalExpr;
pub use systems::{HamiltonianSystem, ParameterSpace, SystemId, VectorField};
pub use table::{SymbolRole, SymbolTable};
