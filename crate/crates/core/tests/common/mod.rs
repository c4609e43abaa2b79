//! Test-only oracles, independent of the library's closed forms.
#![allow(dead_code, clippy::excessive_precision)]

use std::f64::consts::PI;

use lvq_drift_core::{Label, ModelParams, OrderParams, PrototypeState};
use rand::Rng;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (k, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return k;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    recurse(f, a, b, tol, 40)
}

/// Mean, standard deviation and correlation of a pair of Gaussian variables.
#[derive(Debug, Clone, Copy)]
pub struct Pair {
    pub mx: f64,
    pub sx: f64,
    pub mz: f64,
    pub sz: f64,
    pub rho: f64,
}

const SPAN: f64 = 11.0;

/// `E[Theta(z)]` by integrating the density of `z` over `z > 0`.
pub fn quad_theta(p: &Pair) -> f64 {
    let lo = (p.mz - SPAN * p.sz).max(0.0);
    let hi = p.mz + SPAN * p.sz;
    let mut dens = |z: f64| {
        let v = (z - p.mz) / p.sz;
        (-0.5 * v * v).exp() / ((2.0 * PI).sqrt() * p.sz)
    };
    integrate(&mut dens, lo, hi, 1e-13)
}

/// `E[x Theta(z)]` by two-dimensional quadrature of `x p(x, z)` over
/// `z > 0`, with `p` the bivariate normal density.
pub fn quad_x_theta(p: &Pair) -> f64 {
    let lo = (p.mz - SPAN * p.sz).max(0.0);
    let hi = p.mz + SPAN * p.sz;
    let r2 = 1.0 - p.rho * p.rho;
    let norm = 1.0 / (2.0 * PI * p.sx * p.sz * r2.sqrt());
    let mut outer = |z: f64| {
        let v = (z - p.mz) / p.sz;
        // bounds follow the bulk of x given z; the integrand is the joint density
        let centre = p.mx + p.rho * p.sx * v;
        let half = SPAN * p.sx * r2.sqrt();
        let mut inner = |x: f64| {
            let u = (x - p.mx) / p.sx;
            let q = (u * u - 2.0 * p.rho * u * v + v * v) / r2;
            x * norm * (-0.5 * q).exp()
        };
        integrate(&mut inner, centre - half, centre + half, 1e-13)
    };
    integrate(&mut outer, lo, hi, 1e-12)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Moments of `(u . xi, z_S)` under cluster `sigma`, computed directly from
/// the vectors, where `z_S = d_{-S} - d_S = c + a . xi`.
pub fn pair_from_vectors(
    u: &[f64],
    w_plus: &[f64],
    w_minus: &[f64],
    s: Label,
    params: &ModelParams,
    sigma: Label,
) -> Pair {
    let (w_s, w_o) = match s {
        Label::Plus => (w_plus, w_minus),
        Label::Minus => (w_minus, w_plus),
    };
    let a: Vec<f64> = w_s.iter().zip(w_o).map(|(x, y)| 2.0 * (x - y)).collect();
    let c = dot(w_o, w_o) - dot(w_s, w_s);
    let lambda = params.lambda();
    let v = params.variance(sigma);
    let centre = params.direction(sigma);
    let sx = (v * dot(u, u)).sqrt();
    let sz = (v * dot(&a, &a)).sqrt();
    Pair {
        mx: lambda * dot(u, centre),
        sx,
        mz: c + lambda * dot(&a, centre),
        sz,
        rho: v * dot(u, &a) / (sx * sz),
    }
}

/// Random prototypes in `R^dim` (cluster directions along the first two
/// axes), scaled by `scale`.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> PrototypeState {
    let mut v = || {
        (0..dim)
            .map(|_| scale * rng.random_range(-1.0..1.0))
            .collect::<Vec<f64>>()
    };
    PrototypeState {
        w_plus: v(),
        w_minus: v(),
        mu: 0,
        eta: 1.0,
        gamma: 0.0,
    }
}

pub fn max_abs_diff(a: &OrderParams, b: &OrderParams) -> f64 {
    a.to_array()
        .iter()
        .zip(b.to_array())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}
