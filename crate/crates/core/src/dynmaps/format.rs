//! JSON exchange format for maps:
//! `{"d": 2, "kind": "A", "re": [[..], ..], "im": [[..], ..]}` with `re`
//! and `im` given as `d² × d²` row-major nested arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::CMatrix;

use super::{DynamicalMap, StochasticMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub d: usize,
    pub kind: MapKind,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MapFile {
    pub fn from_matrix(kind: MapKind, d: usize, m: &CMatrix) -> Self {
        let n = m.dim();
        let rows = |f: fn(&Complex64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        MapFile { d, kind, re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn from_stochastic(map: &StochasticMap) -> Self {
        Self::from_matrix(MapKind::A, map.d(), map.matrix())
    }

    pub fn from_dynamical(map: &DynamicalMap) -> Self {
        Self::from_matrix(MapKind::B, map.d(), map.matrix())
    }

    pub fn parse(json: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        file.check_shape()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map file serializes")
    }

    fn check_shape(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Format("d must be positive".into()));
        }
        let n = self.d * self.d;
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                return Err(Error::Format(format!("{name} has {} rows, expected {n}", rows.len())));
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(Error::Format(format!("{name} row {i} has {} entries, expected {n}", r.len())));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        self.check_shape()?;
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)))
            .collect();
        CMatrix::from_vec(self.d * self.d, data)
    }

    /// The map in A form, realigning if the file holds B.
    pub fn stochastic(&self) -> Result<StochasticMap> {
        let m = self.matrix()?;
        match self.kind {
            MapKind::A => StochasticMap::new(m),
            MapKind::B => Ok(DynamicalMap::new(m)?.to_stochastic()),
        }
    }

    pub fn dynamical(&self) -> Result<DynamicalMap> {
        Ok(self.stochastic()?.to_dynamical())
    }
}
