//! Metric perturbation `h_{mu nu}` and the light-speed deviation it causes.
//!
//! All values are in units of the amplitude `P`. For the axial `(0,1,M)`
//! mode the factor `M` is folded into the values, so they are `M` times the
//! dimensionless convolution.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{convolve_nodes, quadrature_metadata, FieldMap, GridSpec};
use crate::modes::{fundamental_sources, stress_components, ModeKind, AXIAL_WARN_INDEX};
use crate::quadrature::{convolve, Convolution, QuadratureSpec};

/// Smallest `M` accepted by the axial-mode metric.
pub const AXIAL_METRIC_MIN_INDEX: u64 = 8;

/// Component names of a metric field map, in order.
pub const METRIC_COMPONENTS: [&str; 8] = ["h00", "h11", "h22", "h33", "h23", "dcx", "dcy", "dcz"];

/// Convolutions of the five (011) sources at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GIntegrals {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub g3_tilde: f64,
    pub g4: f64,
    /// Absolute error estimates in the same order.
    pub error: [f64; 5],
    pub converged: bool,
}

impl GIntegrals {
    fn from_convolution(c: &Convolution<5>) -> Self {
        let [g1, g2, g3, g3_tilde, g4] = c.value;
        Self {
            g1,
            g2,
            g3,
            g3_tilde,
            g4,
            error: c.error,
            converged: c.converged,
        }
    }

    pub fn values(&self) -> [f64; 5] {
        [self.g1, self.g2, self.g3, self.g3_tilde, self.g4]
    }
}

/// `g1 .. g4` at `point`, all from one adaptive pass.
pub fn g_integrals(point: [f64; 3], spec: &QuadratureSpec) -> Result<GIntegrals> {
    let c = convolve(&fundamental_sources, point, spec)?;
    Ok(GIntegrals::from_convolution(&c))
}

/// `h~ = 4 int I sin^2(eta')`, the axial-mode profile without the factor `M`.
pub fn axial_profile(point: [f64; 3], spec: &QuadratureSpec) -> Result<Convolution<1>> {
    convolve(&axial_source, point, spec)
}

#[inline]
fn axial_source(eta: f64, _zeta: f64) -> [f64; 1] {
    let s = eta.sin();
    [4.0 * s * s]
}

/// Metric perturbation at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricPerturbation {
    pub kind: ModeKind,
    pub h00: f64,
    pub h11: f64,
    pub h22: f64,
    pub h33: f64,
    pub h23: f64,
    /// Largest absolute error estimate over the components.
    pub error: f64,
    pub converged: bool,
}

impl MetricPerturbation {
    pub fn from_g(g: &GIntegrals) -> Self {
        let [e1, e2, e3, e3t, e4] = g.error;
        let error = (0.5 * (e1 + e2 + e3 + e3t)).max(e4);
        Self {
            kind: ModeKind::Fundamental,
            h00: 0.5 * (g.g1 + g.g2 + g.g3 + g.g3_tilde),
            h11: 0.5 * (g.g1 + g.g2 - g.g3 - g.g3_tilde),
            h22: 0.5 * (g.g1 - g.g2 + g.g3 - g.g3_tilde),
            h33: 0.5 * (g.g1 - g.g2 + g.g3_tilde - g.g3),
            h23: g.g4,
            error,
            converged: g.converged,
        }
    }

    fn from_axial(m: u64, profile: &Convolution<1>) -> Self {
        let h = m as f64 * profile.value[0];
        Self {
            kind: ModeKind::Axial { m },
            h00: h,
            h11: 0.0,
            h22: 0.0,
            h33: h,
            h23: 0.0,
            error: m as f64 * profile.error[0],
            converged: profile.converged,
        }
    }

    /// `-h00 + h11 + h22 + h33`.
    pub fn trace(&self) -> f64 {
        -self.h00 + self.h11 + self.h22 + self.h33
    }

    /// Diagonal spatial component `h_ii`, `axis` in `0..3` for x, y, z.
    pub fn diagonal(&self, axis: usize) -> f64 {
        [self.h11, self.h22, self.h33][axis]
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        for v in [
            &mut self.h00,
            &mut self.h11,
            &mut self.h22,
            &mut self.h33,
            &mut self.h23,
        ] {
            *v *= amplitude;
        }
        self.error *= amplitude.abs();
        self
    }
}

/// Metric of the (011) mode at `point`.
pub fn metric_011(point: [f64; 3], spec: &QuadratureSpec) -> Result<MetricPerturbation> {
    Ok(MetricPerturbation::from_g(&g_integrals(point, spec)?))
}

fn check_axial(m: u64) -> Result<()> {
    if m < AXIAL_METRIC_MIN_INDEX {
        return Err(Error::InvalidArgument(format!(
            "axial metric needs M >= {AXIAL_METRIC_MIN_INDEX}, got {m}"
        )));
    }
    if m < AXIAL_WARN_INDEX {
        log::warn!("M = {m}: large-M metric carries O(1/M) errors");
    }
    Ok(())
}

/// Metric of the `(0,1,M)` mode at `point`: `h00 = h33 = M h~`.
pub fn metric_01m(point: [f64; 3], m: u64, spec: &QuadratureSpec) -> Result<MetricPerturbation> {
    check_axial(m)?;
    Ok(MetricPerturbation::from_axial(m, &axial_profile(point, spec)?))
}

/// Metric for either supported mode kind.
pub fn metric_point(kind: ModeKind, point: [f64; 3], spec: &QuadratureSpec) -> Result<MetricPerturbation> {
    match kind {
        ModeKind::Fundamental => metric_011(point, spec),
        ModeKind::Axial { m } => metric_01m(point, m, spec),
    }
}

/// Which light speed the deviation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightSpeed {
    /// Coordinate speed along a null ray: `-(h00 + h_ii) / 2`.
    #[default]
    Coordinate,
    /// Value inferred from a local measurement: `-h00 - h_ii / 2`.
    Measured,
}

/// Relative light-speed deviation `delta c / c` along x, y and z.
pub fn lightspeed_field(metric: &MetricPerturbation, variant: LightSpeed) -> [f64; 3] {
    std::array::from_fn(|axis| {
        let hii = metric.diagonal(axis);
        match variant {
            LightSpeed::Coordinate => -0.5 * (metric.h00 + hii),
            LightSpeed::Measured => -metric.h00 - 0.5 * hii,
        }
    })
}

/// Alternative axial-mode deviation `-M (g1 + g2 + g3 + g3~) / 4` built
/// from the (011) integrals. It disagrees with [`lightspeed_field`] on
/// [`metric_01m`] because its integrand is `4 - 2 cos 2eta - 2 cos 2zeta`
/// rather than `4 sin^2 eta`; kept for comparison.
pub fn axial_lightspeed_from_g(g: &GIntegrals, m: u64) -> f64 {
    -(m as f64) * (g.g1 + g.g2 + g.g3 + g.g3_tilde) / 4.0
}

fn metric_nodes(
    kind: ModeKind,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Vec<MetricPerturbation>> {
    Ok(match kind {
        ModeKind::Fundamental => convolve_nodes(&fundamental_sources, grid, spec)?
            .iter()
            .map(|c| MetricPerturbation::from_g(&GIntegrals::from_convolution(c)))
            .collect(),
        ModeKind::Axial { m } => {
            check_axial(m)?;
            convolve_nodes(&axial_source, grid, spec)?
                .iter()
                .map(|c| MetricPerturbation::from_axial(m, c))
                .collect()
        }
    })
}

/// Metric and light-speed deviation on a grid, per unit `P`.
pub fn metric_grid(
    kind: ModeKind,
    grid: &GridSpec,
    spec: &QuadratureSpec,
    variant: LightSpeed,
) -> Result<FieldMap> {
    let nodes = metric_nodes(kind, grid, spec)?;
    let mut map = FieldMap::zeros(*grid, &METRIC_COMPONENTS);
    for (n, h) in nodes.iter().enumerate() {
        let dc = lightspeed_field(h, variant);
        let values = [h.h00, h.h11, h.h22, h.h33, h.h23, dc[0], dc[1], dc[2]];
        for (c, v) in values.into_iter().enumerate() {
            map.components[c].values[n] = v;
        }
        map.error[n] = h.error;
    }
    map.unconverged = nodes.iter().filter(|h| !h.converged).count();
    map.metadata = quadrature_metadata(spec);
    map.metadata.insert("mode".into(), kind.label());
    map.metadata.insert(
        "lightspeed".into(),
        match variant {
            LightSpeed::Coordinate => "coordinate",
            LightSpeed::Measured => "measured",
        }
        .into(),
    );
    Ok(map)
}

/// Residual of the discrete field equation for one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentResidual {
    pub name: String,
    /// `max |lap h + 4 pi A t|`.
    pub max_absolute: f64,
    /// `max_absolute / max |4 pi A t|`.
    pub max_relative: f64,
    /// Mean of `|lap h + 4 pi A t|` over the same scale.
    pub mean_relative: f64,
}

/// Summary of [`laplacian_residual`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub spacing: f64,
    /// Number of nodes where the stencil fits.
    pub nodes: usize,
    pub components: Vec<ComponentResidual>,
    pub max_relative: f64,
    pub mean_relative: f64,
}

impl ResidualReport {
    pub fn component(&self, name: &str) -> Option<&ComponentResidual> {
        self.components.iter().find(|c| c.name == name)
    }
}

/// Coarsest spacing the residual check accepts.
pub const MAX_RESIDUAL_SPACING: f64 = PI / 32.0;

const METRIC_INDICES: [(&str, usize, usize); 5] = [
    ("h00", 0, 0),
    ("h11", 1, 1),
    ("h22", 2, 2),
    ("h33", 3, 3),
    ("h23", 2, 3),
];

/// Compare the 7-point Laplacian of every metric component in `field` with
/// `-4 pi A t^{mu nu}`, where `A` is the field's amplitude. The grid must be
/// uniform, lie inside the cavity at least one spacing from the walls, and
/// have spacing at most `pi / 32`.
pub fn laplacian_residual(field: &FieldMap, kind: ModeKind) -> Result<ResidualReport> {
    residual_with_stencil(field, kind, 1, 1)
}

/// Residuals with stencil spacings `2h` and `h` on the same nodes; their
/// ratio is 4 for a second-order-accurate field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    /// `coarse.max_relative / fine.max_relative`.
    pub max_ratio: f64,
    /// `coarse.mean_relative / fine.mean_relative`.
    pub mean_ratio: f64,
}

/// Second-order convergence check from a single field: the Laplacian is
/// taken with stride 2 and stride 1 over the nodes where both fit. The
/// stride-1 spacing must respect [`MAX_RESIDUAL_SPACING`].
pub fn laplacian_convergence(field: &FieldMap, kind: ModeKind) -> Result<ConvergenceReport> {
    let fine = residual_with_stencil(field, kind, 1, 2)?;
    let coarse = residual_impl(field, kind, 2, 2, 2.0 * MAX_RESIDUAL_SPACING)?;
    Ok(ConvergenceReport {
        max_ratio: coarse.max_relative / fine.max_relative,
        mean_ratio: coarse.mean_relative / fine.mean_relative,
        coarse,
        fine,
    })
}

/// Residual with a stencil of `stride` nodes, skipping `border >= stride`
/// node layers at every face of the grid.
pub fn residual_with_stencil(
    field: &FieldMap,
    kind: ModeKind,
    stride: usize,
    border: usize,
) -> Result<ResidualReport> {
    residual_impl(field, kind, stride, border, MAX_RESIDUAL_SPACING)
}

fn residual_impl(
    field: &FieldMap,
    kind: ModeKind,
    stride: usize,
    border: usize,
    limit: f64,
) -> Result<ResidualReport> {
    field.check()?;
    if stride == 0 || border < stride {
        return Err(Error::InvalidArgument(format!(
            "stencil stride {stride} needs a border of at least that many nodes, got {border}"
        )));
    }
    let grid = &field.grid;
    let [nx, ny, nz] = grid.shape();
    if [nx, ny, nz].iter().any(|&n| n < 2 * border + 1) {
        return Err(Error::InvalidGrid(format!(
            "Laplacian with a border of {border} needs at least {} nodes per axis",
            2 * border + 1
        )));
    }
    let h = grid.xi.spacing().unwrap_or(0.0);
    for axis in [&grid.eta, &grid.zeta] {
        let s = axis.spacing().unwrap_or(0.0);
        if (s - h).abs() > 1e-9 * h {
            return Err(Error::InvalidGrid(format!(
                "Laplacian needs equal spacing on all axes, got {h} and {s}"
            )));
        }
    }
    let step = h * stride as f64;
    if step > limit * (1.0 + 1e-12) {
        return Err(Error::GridTooCoarse {
            spacing: step,
            limit,
        });
    }
    let margin = h * (1.0 - 1e-9);
    for axis in [&grid.xi, &grid.eta, &grid.zeta] {
        if axis.min < margin || axis.max > PI - margin {
            return Err(Error::InvalidGrid(format!(
                "grid [{}, {}] must stay one spacing ({h}) inside the cavity",
                axis.min, axis.max
            )));
        }
    }

    let scale = 4.0 * PI * field.amplitude * kind.source_scale();
    let inv_h2 = 1.0 / (step * step);
    let (di, dj, dk) = (stride * ny * nz, stride * nz, stride);
    let mut components = Vec::new();
    for (name, mu, nu) in METRIC_INDICES {
        let Some(values) = field.component(name) else {
            continue;
        };
        let mut max_abs: f64 = 0.0;
        let mut sum_abs = 0.0;
        let mut max_source: f64 = 0.0;
        let mut count = 0usize;
        for i in border..nx - border {
            for j in border..ny - border {
                let t = stress_components(kind, grid.eta.value(j), 0.0);
                for k in border..nz - border {
                    let c = grid.index(i, j, k);
                    let lap = (values[c - di]
                        + values[c + di]
                        + values[c - dj]
                        + values[c + dj]
                        + values[c - dk]
                        + values[c + dk]
                        - 6.0 * values[c])
                        * inv_h2;
                    let t = match kind {
                        ModeKind::Fundamental => {
                            stress_components(kind, grid.eta.value(j), grid.zeta.value(k))[mu][nu]
                        }
                        // h00 = h33 carry the energy density; the oscillating
                        // t11, t22 terms are not part of the field
                        ModeKind::Axial { .. } if mu == nu && (mu == 0 || mu == 3) => t[mu][nu],
                        ModeKind::Axial { .. } => 0.0,
                    };
                    let target = -scale * t;
                    let r = (lap - target).abs();
                    max_abs = max_abs.max(r);
                    sum_abs += r;
                    max_source = max_source.max(target.abs());
                    count += 1;
                }
            }
        }
        components.push((name, max_abs, sum_abs / count as f64, max_source));
    }
    let global_source = components.iter().fold(0.0f64, |m, c| m.max(c.3));
    let components: Vec<ComponentResidual> = components
        .into_iter()
        .map(|(name, max_abs, mean_abs, src)| {
            let denom = if src > 0.0 { src } else { global_source };
            let rel = |x: f64| if x == 0.0 { 0.0 } else { x / denom };
            ComponentResidual {
                name: name.into(),
                max_absolute: max_abs,
                max_relative: rel(max_abs),
                mean_relative: rel(mean_abs),
            }
        })
        .collect();
    let max_relative = components.iter().fold(0.0f64, |m, c| m.max(c.max_relative));
    let mean_relative = components.iter().fold(0.0f64, |m, c| m.max(c.mean_relative));
    Ok(ResidualReport {
        spacing: step,
        nodes: (nx - 2 * border) * (ny - 2 * border) * (nz - 2 * border),
        components,
        max_relative,
        mean_relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn metric_is_trace_free() {
        let spec = QuadratureSpec::default();
        let h = metric_011([0.7, 1.3, 2.2], &spec).unwrap();
        assert!(h.trace().abs() < 2.0 * spec.tolerance * h.h00.abs());
    }

    #[test]
    fn axial_components() {
        let h = metric_01m([0.7, 1.3, 2.2], 100, &QuadratureSpec::default()).unwrap();
        assert_eq!(h.h00, h.h33);
        assert_eq!(h.trace(), 0.0);
        let dc = lightspeed_field(&h, LightSpeed::Coordinate);
        assert_eq!(dc[0], dc[1]);
        assert_eq!(dc[2], 2.0 * dc[0]);
        assert!(metric_01m([0.7, 1.3, 2.2], 7, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn measured_variant() {
        let h = metric_011([FRAC_PI_2; 3], &QuadratureSpec::default()).unwrap();
        let c = lightspeed_field(&h, LightSpeed::Coordinate);
        let m = lightspeed_field(&h, LightSpeed::Measured);
        for axis in 0..3 {
            assert!((m[axis] - (c[axis] - 0.5 * h.h00)).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_rejects_bad_grids() {
        let coarse = FieldMap::zeros(GridSpec::interior(16, 1).unwrap(), &["h00"]);
        assert!(matches!(
            laplacian_residual(&coarse, ModeKind::Fundamental),
            Err(Error::GridTooCoarse { .. })
        ));
        let touching = FieldMap::zeros(GridSpec::cube(0.0, PI, 65), &["h00"]);
        assert!(laplacian_residual(&touching, ModeKind::Fundamental).is_err());
    }

    #[test]
    fn zero_photon_field_has_zero_residual() {
        let map = FieldMap::zeros(GridSpec::interior(32, 1).unwrap(), &METRIC_COMPONENTS).scaled(0.0);
        let r = laplacian_residual(&map, ModeKind::Fundamental).unwrap();
        assert_eq!(r.max_relative, 0.0);
    }
}
