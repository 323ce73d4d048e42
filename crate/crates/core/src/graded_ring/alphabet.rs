use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{structural, Result};

/// A graded variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

/// An ordered list of distinct graded variables.
///
/// Cloning is cheap; equality compares names and weights.
#[derive(Clone)]
pub struct Alphabet(Arc<[Variable]>);

impl Alphabet {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, weight)| Variable {
                name: name.into(),
                weight,
            })
            .collect();
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(structural!("variable {:?} has weight 0", v.name));
            }
            if v.name.is_empty() {
                return Err(structural!("empty variable name"));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(structural!("duplicate variable {:?}", v.name));
            }
        }
        Ok(Alphabet(vars.into()))
    }

    pub fn empty() -> Self {
        Alphabet(Arc::from(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i].name
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.0[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v.name == name)
    }

    pub fn concat(&self, other: &Alphabet) -> Result<Alphabet> {
        Alphabet::new(
            self.0
                .iter()
                .chain(other.0.iter())
                .map(|v| (v.name.clone(), v.weight)),
        )
    }

    /// Index in `self` of every variable of `sub`, matched by name and weight.
    pub fn embedding_of(&self, sub: &Alphabet) -> Result<Vec<usize>> {
        sub.0
            .iter()
            .map(|v| match self.index_of(&v.name) {
                Some(i) if self.weight(i) == v.weight => Ok(i),
                Some(_) => Err(structural!("variable {:?} has a different weight", v.name)),
                None => Err(structural!("variable {:?} missing from target alphabet", v.name)),
            })
            .collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|v| format!("{}:{}", v.name, v.weight)))
            .finish()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0
            .iter()
            .map(|v| (v.name.as_str(), v.weight))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vars = Vec::<(String, u32)>::deserialize(d)?;
        Alphabet::new(vars).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_weights() {
        assert!(Alphabet::new([("x", 1), ("x", 2)]).is_err());
        assert!(Alphabet::new([("x", 0)]).is_err());
        let a = Alphabet::new([("x", 1), ("y", 2)]).unwrap();
        assert_eq!(a.index_of("y"), Some(1));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[["x",1],["y",2]]"#);
    }
}
