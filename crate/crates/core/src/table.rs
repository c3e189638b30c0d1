//! Symbol tables: ordered, immutable lists of named symbols with roles.

use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

/// Role of a symbol inside a system's table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymbolRole {
    /// Canonical state variable (x, y, z, w).
    State,
    /// The independent time variable.
    Time,
    /// A root-lattice / Hamiltonian parameter.
    Parameter,
    /// A deformation symbol (eps of a degeneration family, eta of the
    /// autonomous system).
    Deformation,
}

/// An ordered list of unique symbol names. Expression types hold an
/// `Arc<SymbolTable>` and all arithmetic demands pointer- or content-equality
/// of tables. The order is fixed for the lifetime of every expression
/// referencing the table and drives the graded-lexicographic term order.
#[derive(Debug, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    roles: Vec<SymbolRole>,
}

impl SymbolTable {
    /// Build a table from `(name, role)` pairs. Panics on duplicate names:
    /// tables are compile-time catalog data, not user input.
    pub fn new(symbols: &[(&str, SymbolRole)]) -> Arc<Self> {
        let names: Vec<String> = symbols.iter().map(|(n, _)| n.to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate symbol {n} in symbol table"
            );
        }
        Arc::new(SymbolTable {
            names,
            roles: symbols.iter().map(|&(_, r)| r).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn role(&self, idx: usize) -> SymbolRole {
        self.roles[idx]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    /// Index of `name`, if present.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name` or an `UnknownSymbol` error.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.find(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Indices of all symbols with the given role.
    pub fn indices_with_role(&self, role: SymbolRole) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }
}

/// Check that two expressions share a table (pointer or structural equality).
pub fn same_table(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::TableMismatch(format!(
            "[{}] vs [{}]",
            a.names.join(","),
            b.names.join(",")
        )))
    }
}
