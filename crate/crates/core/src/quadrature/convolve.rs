//! Adaptive evaluation of `int_0^pi int_0^pi I(xi, eta - eta', zeta - zeta') s(eta', zeta')`.
//!
//! The square is cut at the projection of the evaluation point so the
//! logarithmic singularity of the kernel sits on panel corners. Each
//! quarter is covered by a Duffy-mapped corner square (radial coordinate
//! `u = s^2`, which smooths `u ln u`) plus strips whose length doubles away
//! from the corner. Panels carry an embedded Gauss/Kronrod error estimate
//! and the worst one is bisected until the tolerance is met.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::kernel::kernel_rho2;
use super::rules::{EmbeddedRule, PanelRule};
use crate::error::{Error, Result};

/// Panels narrower than this fraction of their length are dropped; their
/// contribution is below `1e-12` of any integral of a bounded source.
const SLIVER_RATIO: f64 = 1e-13;
/// Hard cap on the number of live panels per evaluation.
const MAX_PANELS: usize = 4096;

/// Accuracy controls for one convolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    /// Target error relative to `int |I s|`.
    pub tolerance: f64,
    /// Maximum number of bisections of an initial panel.
    pub max_depth: u32,
    /// Kronrod points per panel axis (15 or 21).
    pub points_per_panel: usize,
    /// Cut the square at the singular projection.
    pub split_singularity: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_depth: 10,
            points_per_panel: 15,
            split_singularity: true,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quadrature tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
        }
        self.rule()?;
        Ok(())
    }

    fn rule(&self) -> Result<PanelRule> {
        PanelRule::from_points(self.points_per_panel).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "points_per_panel must be 15 or 21, got {}",
                self.points_per_panel
            ))
        })
    }
}

/// A vector of source functions evaluated together on the square.
pub trait Integrand<const N: usize>: Sync {
    fn eval(&self, eta: f64, zeta: f64) -> [f64; N];
}

impl<F, const N: usize> Integrand<N> for F
where
    F: Fn(f64, f64) -> [f64; N] + Sync,
{
    fn eval(&self, eta: f64, zeta: f64) -> [f64; N] {
        self(eta, zeta)
    }
}

/// A labelled scalar source on `[0, pi]^2`.
#[derive(Clone)]
pub struct SourceFunction {
    label: String,
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for SourceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceFunction").field("label", &self.label).finish()
    }
}

impl SourceFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_, _| 0.0)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("constant({value})"), move |_, _| value)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn value(&self, eta: f64, zeta: f64) -> f64 {
        (self.eval)(eta, zeta)
    }
}

impl Integrand<1> for SourceFunction {
    #[inline]
    fn eval(&self, eta: f64, zeta: f64) -> [f64; 1] {
        [(self.eval)(eta, zeta)]
    }
}

/// Result of one adaptive convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convolution<const N: usize> {
    pub value: [f64; N],
    /// Absolute error estimate per component.
    pub error: [f64; N],
    pub converged: bool,
    pub evaluations: usize,
    pub panels: usize,
}

impl Convolution<1> {
    pub fn scalar(&self) -> f64 {
        self.value[0]
    }
}

impl<const N: usize> Convolution<N> {
    pub fn max_error(&self) -> f64 {
        self.error.iter().fold(0.0, |m, &e| m.max(e))
    }
}

/// Local frame of one quarter: `absolute = corner + x * ax + y * ay`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    corner: [f64; 2],
    /// `corner - evaluation point` in `(eta, zeta)`.
    offset: [f64; 2],
    ax: [f64; 2],
    ay: [f64; 2],
}

#[derive(Debug, Clone, Copy)]
enum Map {
    /// Triangle of the corner rectangle `[0, w] x [0, h]`; `upper` picks the
    /// half above the diagonal.
    Duffy { w: f64, h: f64, upper: bool },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    frame: usize,
    map: Map,
    /// Parameter box in `[0, 1]^2`.
    p: [f64; 2],
    q: [f64; 2],
    depth: u32,
    value: [f64; N],
    error: [f64; N],
    abs: [f64; N],
}

struct Problem<'a, S, const N: usize> {
    source: &'a S,
    xi: f64,
    point: [f64; 2],
    frames: Vec<Frame>,
    rule: &'a EmbeddedRule,
}

impl<S: Integrand<N>, const N: usize> Problem<'_, S, N> {
    /// Map a parameter pair to absolute coordinates, offset from the
    /// evaluation point, and Jacobian.
    #[inline]
    fn map(&self, frame: &Frame, map: Map, p: f64, q: f64) -> ([f64; 2], [f64; 2], f64) {
        let (x, y, jac) = match map {
            Map::Duffy { w, h, upper } => {
                let u = p * p;
                let jac = 2.0 * w * h * p * p * p;
                if upper {
                    (w * u * q, h * u, jac)
                } else {
                    (w * u, h * u * q, jac)
                }
            }
            Map::Rect { x0, x1, y0, y1 } => {
                let (w, h) = (x1 - x0, y1 - y0);
                (x0 + w * p, y0 + h * q, w * h)
            }
        };
        let local = [x * frame.ax[0] + y * frame.ay[0], x * frame.ax[1] + y * frame.ay[1]];
        let abs = [frame.corner[0] + local[0], frame.corner[1] + local[1]];
        let rel = [frame.offset[0] + local[0], frame.offset[1] + local[1]];
        (abs, rel, jac)
    }

    fn evaluate(&self, panel: &mut Panel<N>) -> usize {
        let frame = self.frames[panel.frame];
        let rule = self.rule;
        let n = rule.len();
        let (p0, dp) = (panel.p[0], panel.p[1] - panel.p[0]);
        let (q0, dq) = (panel.q[0], panel.q[1] - panel.q[0]);
        let area = dp * dq;
                let mut kron = [0.0; N];
        let mut gauss = [0.0; N];
        let mut abs = [0.0; N];
        for i in 0..n {
            let p = p0 + dp * rule.nodes[i];
            let mut row_k = [0.0; N];
            let mut row_g = [0.0; N];
            let mut row_a = [0.0; N];
            for j in 0..n {
                let q = q0 + dq * rule.nodes[j];
                let (at, rel, jac) = self.map(&frame, panel.map, p, q);
                let rho2 = rel[0] * rel[0] + rel[1] * rel[1];
                let weight = kernel_rho2(self.xi, rho2) * jac;
                let s = self.source.eval(at[0], at[1]);
                let f: [f64; N] = std::array::from_fn(|c| weight * s[c]);
                let (wk, wg) = (rule.kronrod[j], rule.gauss[j]);
                for c in 0..N {
                    row_k[c] += wk * f[c];
                    row_g[c] += wg * f[c];
                    row_a[c] += wk * f[c].abs();
                }
            }
            let (wk, wg) = (rule.kronrod[i], rule.gauss[i]);
            for c in 0..N {
                kron[c] += wk * row_k[c];
                gauss[c] += wg * row_g[c];
                abs[c] += wk * row_a[c];
            }
        }
        for c in 0..N {
            panel.value[c] = kron[c] * area;
            panel.error[c] = ((kron[c] - gauss[c]) * area).abs();
            panel.abs[c] = abs[c] * area;
        }
        n * n
    }

    fn initial_panels(&mut self, split: bool) -> Vec<Panel<N>> {
        let mut panels = Vec::new();
        let blank = |frame, map| Panel {
            frame,
            map,
            p: [0.0, 1.0],
            q: [0.0, 1.0],
            depth: 0,
            value: [0.0; N],
            error: [0.0; N],
            abs: [0.0; N],
        };
        if !split {
            self.frames.push(Frame {
                corner: [0.0, 0.0],
                offset: [-self.point[0], -self.point[1]],
                ax: [1.0, 0.0],
                ay: [0.0, 1.0],
            });
            panels.push(blank(0, Map::Rect { x0: 0.0, x1: PI, y0: 0.0, y1: PI }));
            return panels;
        }
        let corner = [self.point[0].clamp(0.0, PI), self.point[1].clamp(0.0, PI)];
        let offset = [corner[0] - self.point[0], corner[1] - self.point[1]];
        for (se, sz) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
            let a = if se > 0.0 { PI - corner[0] } else { corner[0] };
            let b = if sz > 0.0 { PI - corner[1] } else { corner[1] };
            let (long, short) = (a.max(b), a.min(b));
            if short <= SLIVER_RATIO * long || short <= 0.0 {
                continue;
            }
            // local x runs along the longer side
            let (ax, ay) = if a >= b {
                ([se, 0.0], [0.0, sz])
            } else {
                ([0.0, sz], [se, 0.0])
            };
            let frame = self.frames.len();
            self.frames.push(Frame {
                corner,
                offset,
                ax,
                ay,
            });
            for upper in [false, true] {
                panels.push(blank(
                    frame,
                    Map::Duffy {
                        w: short,
                        h: short,
                        upper,
                    },
                ));
            }
            let mut x0 = short;
            while x0 < long {
                let mut x1 = (2.0 * x0).min(long);
                if long - x1 < 0.25 * x0 {
                    x1 = long;
                }
                panels.push(blank(frame, Map::Rect { x0, x1, y0: 0.0, y1: short }));
                x0 = x1;
            }
        }
        panels
    }
}

/// Convolve a vector source with the kernel at `point = (xi, eta, zeta)`.
pub fn convolve<S, const N: usize>(
    source: &S,
    point: [f64; 3],
    spec: &QuadratureSpec,
) -> Result<Convolution<N>>
where
    S: Integrand<N>,
{
    spec.validate()?;
    if point.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("evaluation point {point:?} is not finite")));
    }
    let rule = cached_rule(spec.rule()?);
    let mut problem = Problem {
        source,
        xi: point[0],
        point: [point[1], point[2]],
        frames: Vec::with_capacity(4),
        rule,
    };
    let mut panels = problem.initial_panels(spec.split_singularity);
    let mut evaluations = 0;
    for panel in panels.iter_mut() {
        evaluations += problem.evaluate(panel);
    }

    let converged = loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let mut abs = [0.0; N];
        for panel in &panels {
            for c in 0..N {
                value[c] += panel.value[c];
                error[c] += panel.error[c];
                abs[c] += panel.abs[c];
            }
        }
        let target: [f64; N] = std::array::from_fn(|c| spec.tolerance * abs[c]);
        if (0..N).all(|c| error[c] <= target[c]) {
            break true;
        }
        if panels.len() + 3 > MAX_PANELS {
            break false;
        }
        let score = |p: &Panel<N>| -> f64 {
            (0..N)
                .map(|c| if target[c] > 0.0 { p.error[c] / target[c] } else { p.error[c] })
                .sum()
        };
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < spec.max_depth)
            .max_by(|(_, a), (_, b)| score(a).total_cmp(&score(b)))
            .map(|(i, _)| i);
        let Some(index) = worst else {
            break false;
        };
        let parent = panels.swap_remove(index);
        let pm = 0.5 * (parent.p[0] + parent.p[1]);
        let qm = 0.5 * (parent.q[0] + parent.q[1]);
        for (p, q) in [
            ([parent.p[0], pm], [parent.q[0], qm]),
            ([pm, parent.p[1]], [parent.q[0], qm]),
            ([parent.p[0], pm], [qm, parent.q[1]]),
            ([pm, parent.p[1]], [qm, parent.q[1]]),
        ] {
            let mut child = Panel {
                p,
                q,
                depth: parent.depth + 1,
                ..parent
            };
            evaluations += problem.evaluate(&mut child);
            panels.push(child);
        }
    };

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for panel in &panels {
        for c in 0..N {
            value[c] += panel.value[c];
            error[c] += panel.error[c];
        }
    }
    Ok(Convolution {
        value,
        error,
        converged,
        evaluations,
        panels: panels.len(),
    })
}

/// Scalar convolution of a labelled source.
pub fn convolve_point(
    source: &SourceFunction,
    point: [f64; 3],
    spec: &QuadratureSpec,
) -> Result<Convolution<1>> {
    convolve(source, point, spec)
}

fn cached_rule(rule: PanelRule) -> &'static EmbeddedRule {
    use std::sync::OnceLock;
    static GK15: OnceLock<EmbeddedRule> = OnceLock::new();
    static GK21: OnceLock<EmbeddedRule> = OnceLock::new();
    match rule {
        PanelRule::Gk15 => GK15.get_or_init(|| EmbeddedRule::new(PanelRule::Gk15)),
        PanelRule::Gk21 => GK21.get_or_init(|| EmbeddedRule::new(PanelRule::Gk21)),
    }
}
