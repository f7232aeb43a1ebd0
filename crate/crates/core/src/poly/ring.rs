use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::field::PrimeField;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub field: PrimeField,
    pub variables: Vec<String>,
    pub order: MonomialOrder,
}

/// Shared handle to a polynomial ring `F_p[x_1, ..., x_d]` with a fixed
/// monomial order. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(Arc<RingSpec>);

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: Into<String>>(
        characteristic: u32,
        variables: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Result<Self> {
        let field = PrimeField::new(characteristic)?;
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.is_empty() {
            return Err(Error::InvalidRing(
                "at least one variable is required".into(),
            ));
        }
        for (i, v) in variables.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
            }
            if variables[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Ring(Arc::new(RingSpec {
            field,
            variables,
            order,
        })))
    }

    /// `F_p[x, y, z, ...]` in grevlex with `n` conventionally named variables.
    pub fn with_standard_names(characteristic: u32, n: usize) -> Result<Self> {
        const NAMES: [&str; 8] = ["x", "y", "z", "w", "v", "u", "t", "s"];
        let vars: Vec<String> = if n <= NAMES.len() {
            NAMES[..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        Ring::new(characteristic, vars, MonomialOrder::Grevlex)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.0.field
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.field.characteristic()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.0.variables
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    #[inline]
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.0.order.cmp(a, b)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.variables.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::constant(self, 1)
    }

    pub fn var(&self, index: usize) -> Polynomial {
        Polynomial::monomial(self, 1, Monomial::var(self.nvars(), index))
    }

    pub fn vars(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.characteristic(),
            self.0.variables.join(","),
            self.0.order
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Ring::new(32003, ["x", "y"], MonomialOrder::Grevlex).is_ok());
        assert!(Ring::new(32003, Vec::<String>::new(), MonomialOrder::Grevlex).is_err());
        assert!(Ring::new(32003, ["x", "x"], MonomialOrder::Grevlex).is_err());
        assert!(Ring::new(32003, ["x", "1y"], MonomialOrder::Grevlex).is_err());
        assert!(Ring::new(32002, ["x"], MonomialOrder::Grevlex).is_err());
    }

    #[test]
    fn structural_equality() {
        let a = Ring::new(101, ["x", "y"], MonomialOrder::Grevlex).unwrap();
        let b = Ring::new(101, ["x", "y"], MonomialOrder::Grevlex).unwrap();
        let c = Ring::new(101, ["x", "y"], MonomialOrder::Lex).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(
            Ring::with_standard_names(101, 4).unwrap().variables()[3],
            "w"
        );
    }
}
