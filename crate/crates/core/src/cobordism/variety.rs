use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{structural, Error, Result};

/// A product of projective spaces `P^{r_1} × … × P^{r_s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    dims: Vec<u32>,
}

impl Cell {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(structural!("cell factors must be positive-dimensional, got {dims:?}"));
        }
        Ok(Cell { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn dimension(&self) -> u32 {
        self.dims.iter().sum()
    }

    /// Number of hyperplane variables.
    pub fn factors(&self) -> usize {
        self.dims.len()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|r| format!("P{r}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split('x')
            .map(|part| {
                let part = part.trim();
                part.strip_prefix('P')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad projective factor {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Cell::new(dims).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Disjoint union of cells, all of one dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalVariety {
    cells: Vec<Cell>,
}

impl FormalVariety {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        let Some(first) = cells.first() else {
            return Err(structural!("a formal variety needs at least one cell"));
        };
        let d = first.dimension();
        if let Some(bad) = cells.iter().find(|c| c.dimension() != d) {
            return Err(structural!(
                "cell {bad} has dimension {} but the variety has dimension {d}",
                bad.dimension()
            ));
        }
        Ok(FormalVariety { cells })
    }

    pub fn single(dims: &[u32]) -> Result<Self> {
        FormalVariety::new(vec![Cell::new(dims.to_vec())?])
    }

    pub fn disjoint_union<'a>(parts: impl IntoIterator<Item = &'a FormalVariety>) -> Result<Self> {
        FormalVariety::new(parts.into_iter().flat_map(|p| p.cells.iter().cloned()).collect())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn dimension(&self) -> u32 {
        self.cells[0].dimension()
    }
}

impl fmt::Display for FormalVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(Cell::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses `P2 + P1xP1`; whitespace is ignored.
impl FromStr for FormalVariety {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty variety spec".into()));
        }
        let cells = compact
            .split('+')
            .map(Cell::from_str)
            .collect::<Result<Vec<_>>>()?;
        FormalVariety::new(cells).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for FormalVariety {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormalVariety {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
