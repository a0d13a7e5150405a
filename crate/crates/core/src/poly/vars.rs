use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::VarError;

/// Names of the base coordinates `x_1..x_n` and their paired symbol
/// variables `xi_1..xi_n`. Position `i` in a polynomial exponent vector is
/// `base[i]` for `i < n` and `symbols[i - n]` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    base: Vec<String>,
    symbols: Vec<String>,
}

impl VarTable {
    pub fn new(base: Vec<String>, symbols: Vec<String>) -> Result<Self, VarError> {
        if base.is_empty() {
            return Err(VarError::Empty);
        }
        if base.len() != symbols.len() {
            return Err(VarError::LengthMismatch {
                base: base.len(),
                symbols: symbols.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in base.iter().chain(symbols.iter()) {
            if !is_identifier(name) || name.starts_with("d_") {
                return Err(VarError::BadName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(VarError::Duplicate(name.clone()));
            }
        }
        Ok(VarTable { base, symbols })
    }

    /// Base names as given; symbol names default to `xi_<name>`.
    pub fn from_base<S: AsRef<str>>(base: &[S]) -> Result<Self, VarError> {
        let base: Vec<String> = base.iter().map(|s| s.as_ref().trim().to_string()).collect();
        let symbols = base.iter().map(|b| format!("xi_{b}")).collect();
        Self::new(base, symbols)
    }

    /// Parses a comma separated list such as `"x,y,t"`.
    pub fn parse_list(list: &str) -> Result<Self, VarError> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::from_base(&names)
    }

    /// Number of base variables `n`.
    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Name of exponent-vector position `i` (0..2n).
    pub fn name(&self, i: usize) -> &str {
        let n = self.n();
        if i < n {
            &self.base[i]
        } else {
            &self.symbols[i - n]
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.base
            .iter()
            .position(|b| b == name)
            .or_else(|| self.symbols.iter().position(|s| s == name).map(|i| i + self.n()))
    }

    pub fn base_index(&self, name: &str) -> Option<usize> {
        self.base.iter().position(|b| b == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_symbol_names() {
        let v = VarTable::parse_list("x, y,t").unwrap();
        assert_eq!(v.n(), 3);
        assert_eq!(v.symbols(), &["xi_x", "xi_y", "xi_t"]);
        assert_eq!(v.index_of("xi_y"), Some(4));
        assert_eq!(v.name(5), "xi_t");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(VarTable::parse_list(""), Err(VarError::Empty)));
        assert!(matches!(VarTable::parse_list("x,x"), Err(VarError::Duplicate(_))));
        assert!(matches!(VarTable::parse_list("x,2y"), Err(VarError::BadName(_))));
        assert!(matches!(VarTable::parse_list("d_x"), Err(VarError::BadName(_))));
        assert!(VarTable::new(vec!["x".into()], vec![]).is_err());
    }
}
