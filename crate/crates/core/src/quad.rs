//! Globally adaptive Gauss-Kronrod quadrature (21-point rule).

use alloc::vec::Vec;

use libm::pow;

use crate::error::Error;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
pub fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<QuadResult, Error>
where
    F: FnMut(f64) -> Result<f64, Error>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = pow(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::Quadrature {
            abs_error: f64::INFINITY,
        });
    }
    Ok(QuadResult {
        value,
        abs_error: err,
    })
}

/// Integrates over consecutive `breakpoints`, bisecting the panel with the
/// largest error estimate until the total error meets
/// `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F>(
    mut f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadResult, Error>
where
    F: FnMut(f64) -> Result<f64, Error>,
{
    let mut panels: Vec<(f64, f64, QuadResult)> = Vec::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            panels.push((w[0], w[1], gk21(&mut f, w[0], w[1])?));
        }
    }
    loop {
        let value: f64 = panels.iter().map(|p| p.2.value).sum();
        let err: f64 = panels.iter().map(|p| p.2.abs_error).sum();
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                abs_error: err,
            });
        }
        if panels.len() >= max_panels {
            return Err(Error::Quadrature { abs_error: err });
        }
        let (k, _) = panels.iter().enumerate().fold((0, -1.0), |best, (i, p)| {
            if p.2.abs_error > best.1 {
                (i, p.2.abs_error)
            } else {
                best
            }
        });
        let (a, b, _) = panels[k];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::Quadrature { abs_error: err });
        }
        panels[k] = (a, m, gk21(&mut f, a, m)?);
        panels.push((m, b, gk21(&mut f, m, b)?));
    }
}
