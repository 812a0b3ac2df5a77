//! One-dimensional rules on `[-1, 1]`: embedded Gauss-Kronrod pairs for
//! the adaptive panels and plain Gauss-Legendre for smooth averages.

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

// Abscissae and weights from QUADPACK (qk15, qk21), positive half, outermost first.
const K15_X: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const K15_W: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// 7-point Gauss weights on K15_X[1], [3], [5], [7].
const G7_W: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const K21_X: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const K21_W: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_223_339,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// 10-point Gauss weights on K21_X[1], [3], ..., [9].
const G10_W: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Which embedded pair the panels use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelRule {
    /// 7-point Gauss inside 15-point Kronrod.
    #[default]
    Gk15,
    /// 10-point Gauss inside 21-point Kronrod.
    Gk21,
}

impl PanelRule {
    pub fn points(&self) -> usize {
        match self {
            PanelRule::Gk15 => 15,
            PanelRule::Gk21 => 21,
        }
    }

    pub fn from_points(points: usize) -> Option<Self> {
        match points {
            15 => Some(PanelRule::Gk15),
            21 => Some(PanelRule::Gk21),
            _ => None,
        }
    }
}

/// A Kronrod rule expanded to all nodes on `[0, 1]`, with the embedded
/// Gauss weights (zero where a node is Kronrod-only).
#[derive(Debug, Clone)]
pub struct EmbeddedRule {
    pub nodes: Vec<f64>,
    pub kronrod: Vec<f64>,
    pub gauss: Vec<f64>,
}

impl EmbeddedRule {
    pub fn new(rule: PanelRule) -> Self {
        let (x, wk, gauss_on_odd): (&[f64], &[f64], Vec<f64>) = match rule {
            PanelRule::Gk15 => (&K15_X, &K15_W, G7_W.to_vec()),
            PanelRule::Gk21 => (&K21_X, &K21_W, G10_W.to_vec()),
        };
        let half = x.len() - 1; // index of the centre node
        // Gauss nodes sit at odd indices; the centre is one for G7 but not G10.
        let gauss_weight = |i: usize| if i % 2 == 1 { gauss_on_odd[i / 2] } else { 0.0 };
        let mut nodes = Vec::with_capacity(2 * half + 1);
        let mut kronrod = Vec::with_capacity(2 * half + 1);
        let mut gauss = Vec::with_capacity(2 * half + 1);
        for i in 0..half {
            nodes.push(0.5 * (1.0 - x[i]));
            kronrod.push(0.5 * wk[i]);
            gauss.push(0.5 * gauss_weight(i));
        }
        nodes.push(0.5);
        kronrod.push(0.5 * wk[half]);
        gauss.push(0.5 * gauss_weight(half));
        for i in (0..half).rev() {
            nodes.push(0.5 * (1.0 + x[i]));
            kronrod.push(0.5 * wk[i]);
            gauss.push(0.5 * gauss_weight(i));
        }
        Self {
            nodes,
            kronrod,
            gauss,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `n`-point Gauss-Legendre nodes and weights on `[a, b]` (Newton iteration
/// on the three-term recurrence).
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half_len = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half_len * x;
        nodes[n - 1 - i] = mid + half_len * x;
        weights[i] = w * half_len;
        weights[n - 1 - i] = w * half_len;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(nodes: &[f64], w: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        nodes.iter().zip(w).map(|(&x, &w)| w * f(x)).sum()
    }

    #[test]
    fn embedded_rules_integrate_polynomials() {
        for (rule, kdeg, gdeg) in [(PanelRule::Gk15, 22, 13), (PanelRule::Gk21, 31, 19)] {
            let r = EmbeddedRule::new(rule);
            assert_eq!(r.len(), rule.points());
            for d in 0..=kdeg {
                let exact = 1.0 / (d as f64 + 1.0);
                let k = integrate(&r.nodes, &r.kronrod, |x| x.powi(d));
                assert!((k - exact).abs() < 1e-14, "{rule:?} kronrod degree {d}");
                if d <= gdeg {
                    let g = integrate(&r.nodes, &r.gauss, |x| x.powi(d));
                    assert!((g - exact).abs() < 1e-14, "{rule:?} gauss degree {d}");
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1usize, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n, -1.0, 2.0);
            for d in 0..(2 * n) {
                let exact = (2f64.powi(d as i32 + 1) - (-1f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
                let got = integrate(&x, &w, |t| t.powi(d as i32));
                assert!((got - exact).abs() < 1e-11 * exact.abs().max(1.0), "n={n} d={d}");
            }
        }
    }
}
