//! Evaluation grids and gridded field values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{convolve, Convolution, Integrand, QuadratureSpec, SourceFunction};

/// One axis of a grid, in units of `L / pi`.
///
/// `count == 1` pins the axis at `min` (which must equal `max`) and
/// `count == 0` gives an empty grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self { min, max, count };
        axis.validate()?;
        Ok(axis)
    }

    pub fn fixed(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "axis range [{}, {}] is not finite",
                self.min, self.max
            )));
        }
        match self.count {
            0 => Ok(()),
            1 if self.min == self.max => Ok(()),
            1 => Err(Error::InvalidGrid(format!(
                "a single-node axis needs min == max, got [{}, {}]",
                self.min, self.max
            ))),
            _ if self.max > self.min => Ok(()),
            _ => Err(Error::InvalidGrid(format!(
                "axis range [{}, {}] must be increasing",
                self.min, self.max
            ))),
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return self.min;
        }
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn spacing(&self) -> Option<f64> {
        (self.count >= 2).then(|| (self.max - self.min) / (self.count - 1) as f64)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// A rectilinear grid over `(xi, eta, zeta)`. Nodes are ordered with `xi`
/// slowest: `index = (i * n_eta + j) * n_zeta + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub xi: AxisSpec,
    pub eta: AxisSpec,
    pub zeta: AxisSpec,
}

impl Default for GridSpec {
    /// `[-pi, 2pi]^3` at 48 points per axis: the cavity plus one cavity
    /// length of exterior on every side.
    fn default() -> Self {
        Self::cube(-PI, 2.0 * PI, 48)
    }
}

impl GridSpec {
    pub fn new(xi: AxisSpec, eta: AxisSpec, zeta: AxisSpec) -> Result<Self> {
        let grid = Self { xi, eta, zeta };
        grid.validate()?;
        Ok(grid)
    }

    pub fn cube(min: f64, max: f64, count: usize) -> Self {
        let axis = AxisSpec { min, max, count };
        Self {
            xi: axis,
            eta: axis,
            zeta: axis,
        }
    }

    /// Interior nodes `k pi / divisions`, `k = first..=divisions - first`,
    /// on every axis; `first = 1` stays one spacing away from the walls.
    pub fn interior(divisions: usize, first: usize) -> Result<Self> {
        if divisions < 2 * first + 1 {
            return Err(Error::InvalidGrid(format!(
                "{divisions} divisions leave no nodes {first} spacings from the walls"
            )));
        }
        let h = PI / divisions as f64;
        let axis = AxisSpec::new(
            first as f64 * h,
            (divisions - first) as f64 * h,
            divisions - 2 * first + 1,
        )?;
        Self::new(axis, axis, axis)
    }

    /// Plane at fixed `xi`.
    pub fn xi_slice(xi: f64, eta: AxisSpec, zeta: AxisSpec) -> Result<Self> {
        Self::new(AxisSpec::fixed(xi), eta, zeta)
    }

    pub fn validate(&self) -> Result<()> {
        self.xi.validate()?;
        self.eta.validate()?;
        self.zeta.validate()
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.xi.count, self.eta.count, self.zeta.count]
    }

    pub fn len(&self) -> usize {
        self.xi.count * self.eta.count * self.zeta.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.eta.count + j) * self.zeta.count + k
    }

    pub fn point(&self, index: usize) -> [f64; 3] {
        let k = index % self.zeta.count;
        let j = (index / self.zeta.count) % self.eta.count;
        let i = index / (self.zeta.count * self.eta.count);
        [self.xi.value(i), self.eta.value(j), self.zeta.value(k)]
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|n| self.point(n)).collect()
    }
}

/// A named array of values on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub values: Vec<f64>,
}

/// Field values on a grid with per-node error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMap {
    pub grid: GridSpec,
    /// `"per-P"` when values are per unit amplitude, `"absolute"` otherwise.
    pub units: String,
    /// Multiplier already applied to every value (1 for per-`P` units).
    pub amplitude: f64,
    pub components: Vec<Component>,
    /// Largest absolute error estimate over the components at each node.
    pub error: Vec<f64>,
    /// Nodes whose quadrature missed the tolerance.
    pub unconverged: usize,
    /// Free-form provenance (quadrature settings, seed, config hash, ...).
    pub metadata: BTreeMap<String, String>,
}

pub const UNITS_PER_P: &str = "per-P";
pub const UNITS_ABSOLUTE: &str = "absolute";

impl FieldMap {
    /// An all-zero map with the given component names.
    pub fn zeros(grid: GridSpec, names: &[&str]) -> Self {
        let n = grid.len();
        Self {
            grid,
            units: UNITS_PER_P.into(),
            amplitude: 1.0,
            components: names
                .iter()
                .map(|name| Component {
                    name: (*name).into(),
                    values: vec![0.0; n],
                })
                .collect(),
            error: vec![0.0; n],
            unconverged: 0,
            metadata: BTreeMap::new(),
        }
    }

    pub fn component(&self, name: &str) -> Option<&[f64]> {
        self.components
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn component_names(&self) -> Vec<&str> {
        self.components.iter().map(|c| c.name.as_str()).collect()
    }

    /// Multiply every value and error by `amplitude` (e.g. `P` for a photon
    /// number) and tag the units accordingly.
    pub fn scaled(mut self, amplitude: f64) -> Self {
        for c in &mut self.components {
            for v in &mut c.values {
                *v *= amplitude;
            }
        }
        for e in &mut self.error {
            *e *= amplitude.abs();
        }
        self.amplitude *= amplitude;
        self.units = if self.amplitude == 1.0 {
            UNITS_PER_P.into()
        } else {
            UNITS_ABSOLUTE.into()
        };
        self
    }

    pub fn converged(&self) -> bool {
        self.unconverged == 0
    }

    pub fn check(&self) -> Result<()> {
        let n = self.grid.len();
        if self.error.len() != n || self.components.iter().any(|c| c.values.len() != n) {
            return Err(Error::InvalidGrid(format!(
                "field arrays do not match the {n}-node grid"
            )));
        }
        Ok(())
    }
}

/// Record the quadrature settings in a map's metadata.
pub(crate) fn quadrature_metadata(spec: &QuadratureSpec) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("quadrature.tolerance".into(), format!("{:e}", spec.tolerance)),
        ("quadrature.max_depth".into(), spec.max_depth.to_string()),
        ("quadrature.points_per_panel".into(), spec.points_per_panel.to_string()),
        ("quadrature.split_singularity".into(), spec.split_singularity.to_string()),
    ])
}

/// Convolve a vector source at every node. Each node is independent, so
/// the result does not depend on the number of worker threads.
pub fn convolve_nodes<S, const N: usize>(
    source: &S,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Vec<Convolution<N>>>
where
    S: Integrand<N>,
{
    grid.validate()?;
    spec.validate()?;
    let results: Vec<Convolution<N>> = (0..grid.len())
        .into_par_iter()
        .map(|n| convolve(source, grid.point(n), spec))
        .collect::<Result<_>>()?;
    let missed = results.iter().filter(|c| !c.converged).count();
    if missed > 0 {
        log::warn!("{missed} of {} nodes missed the quadrature tolerance", results.len());
    }
    Ok(results)
}

/// Convolve a scalar source over a grid; the single component is named
/// after the source label.
pub fn convolve_grid(
    source: &SourceFunction,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<FieldMap> {
    let nodes = convolve_nodes(source, grid, spec)?;
    let mut map = FieldMap::zeros(*grid, &[source.label()]);
    for (n, c) in nodes.iter().enumerate() {
        map.components[0].values[n] = c.value[0];
        map.error[n] = c.error[0];
    }
    map.unconverged = nodes.iter().filter(|c| !c.converged).count();
    map.metadata = quadrature_metadata(spec);
    map.metadata.insert("source".into(), source.label().into());
    Ok(map)
}
