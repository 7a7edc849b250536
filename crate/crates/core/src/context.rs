//! Variable contexts, monomials, and monomial orders.
//!
//! A [`VarContext`] fixes the variable list, the coefficient field, and the
//! active monomial order for every polynomial that refers to it. Contexts are
//! shared behind `Arc` and compared by content, so two independently built
//! contexts with the same data are interchangeable. The first variable in the
//! list plays the distinguished role in the univariate-direction operations
//! (factorization, per-prime Smith profiles).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Total order on monomials. Both options are global orders: multiplying by a
/// fixed monomial preserves comparisons, and 1 is the smallest monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Pure lexicographic with x1 > x2 > ... > xn.
    Lex,
    /// Graded reverse lexicographic: total degree first, ties broken by the
    /// smallest exponent on the last distinguishing variable.
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps().cmp(b.exps()),
            MonomialOrder::GrevLex => {
                let da = a.total_degree();
                let db = b.total_degree();
                if da != db {
                    return da.cmp(&db);
                }
                for (ea, eb) in a.exps().iter().rev().zip(b.exps().iter().rev()) {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GrevLex => write!(f, "grevlex"),
        }
    }
}

/// Dense exponent vector; the length always equals the context's variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n_vars: usize) -> Monomial {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Monomial {
        assert!(idx < n_vars, "variable index out of range");
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.0[idx]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Does `self` divide `other` componentwise?
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, or None when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * e).collect())
    }
}

/// Shared ring description: variable names, coefficient field, monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

impl VarContext {
    /// Validates that names are nonempty, unique, and identifier-shaped
    /// (letter or underscore, then letters, digits, underscores).
    pub fn new(names: &[&str], field: Field, order: MonomialOrder) -> Result<Arc<VarContext>> {
        if names.is_empty() {
            return Err(Error::InvalidContext("need at least one variable".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidContext(format!("invalid variable name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidContext(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Arc::new(VarContext {
            names: names.iter().map(|s| s.to_string()).collect(),
            field,
            order,
        }))
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Same variables and field under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<VarContext> {
        Arc::new(VarContext { names: self.names.clone(), field: self.field, order })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Contexts are interchangeable when their content matches; the pointer check
/// is just a fast path.
pub fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
