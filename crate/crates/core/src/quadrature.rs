//! Globally adaptive 21-point Gauss–Kronrod quadrature on a finite interval.
//!
//! The integrand is vector valued: a TE/TM pair plus one auxiliary
//! non-negative channel (used to carry the error of an inner integral
//! through an outer one). Only the pair drives refinement. Subdivision is
//! fully deterministic: the interval with the largest error is bisected,
//! ties going to the leftmost.

use crate::error::{Error, Result};
use crate::optics::Polarized;
use crate::scalar::Scalar;

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss
// weights (QUADPACK qk21).
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

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: Polarized<T>,
    pub abs_error: T,
    /// Integral of the auxiliary channel.
    pub aux: T,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: Polarized<T>,
    aux: T,
    error: T,
}

fn rescale_error<T: Scalar>(err: T, resabs: T, resasc: T) -> T {
    let mut err = err.abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = if scale < T::one() { resasc * scale } else { resasc };
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if resabs > T::min_positive_value() / fifty_eps {
        err = err.max(fifty_eps * resabs);
    }
    err
}

/// One 21-point rule on `[a, b]`.
fn kronrod21<T, F>(f: &mut F, a: T, b: T) -> Result<Segment<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<(Polarized<T>, T)>,
{
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);

    let mut fv = [(Polarized::<T>::default(), T::zero()); 21];
    fv[10] = f(center)?;
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        fv[j] = f(center - dx)?;
        fv[20 - j] = f(center + dx)?;
    }

    let mut kron = Polarized::new(T::zero(), T::zero());
    let mut gauss = Polarized::new(T::zero(), T::zero());
    let mut aux = T::zero();
    let mut resabs = Polarized::new(T::zero(), T::zero());
    for (i, (v, x)) in fv.iter().enumerate() {
        let w = T::lit(WGK[i.min(20 - i)]);
        kron.te = kron.te + w * v.te;
        kron.tm = kron.tm + w * v.tm;
        resabs.te = resabs.te + w * v.te.abs();
        resabs.tm = resabs.tm + w * v.tm.abs();
        aux = aux + w * *x;
        let k = i.min(20 - i);
        if k % 2 == 1 {
            let wg = T::lit(WG[k / 2]);
            gauss.te = gauss.te + wg * v.te;
            gauss.tm = gauss.tm + wg * v.tm;
        }
    }
    let mean = kron.map(|k| k * half);
    let mut resasc = Polarized::new(T::zero(), T::zero());
    for (i, (v, _)) in fv.iter().enumerate() {
        let w = T::lit(WGK[i.min(20 - i)]);
        resasc.te = resasc.te + w * (v.te - mean.te).abs();
        resasc.tm = resasc.tm + w * (v.tm - mean.tm).abs();
    }
    let h = half_len.abs();
    let err_te = rescale_error((kron.te - gauss.te) * half_len, resabs.te * h, resasc.te * h);
    let err_tm = rescale_error((kron.tm - gauss.tm) * half_len, resabs.tm * h, resasc.tm * h);
    let value = kron.map(|k| k * half_len);
    let seg = Segment {
        a,
        b,
        value,
        aux: aux * half_len,
        error: err_te + err_tm,
    };
    if !(seg.value.te.is_finite() && seg.value.tm.is_finite() && seg.error.is_finite()) {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    Ok(seg)
}

fn totals<T: Scalar>(segs: &[Segment<T>]) -> (Polarized<T>, T, T) {
    segs.iter().fold(
        (Polarized::new(T::zero(), T::zero()), T::zero(), T::zero()),
        |(v, e, x), s| {
            (
                Polarized::new(v.te + s.value.te, v.tm + s.value.tm),
                e + s.error,
                x + s.aux,
            )
        },
    )
}

/// Integrates `f` over `[a, b]` to `max(abs, rel·(|∫TE| + |∫TM|))`.
pub fn integrate<T, F>(mut f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<Integral<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<(Polarized<T>, T)>,
{
    if a == b {
        return Ok(Integral {
            value: Polarized::new(T::zero(), T::zero()),
            abs_error: T::zero(),
            aux: T::zero(),
            evaluations: 0,
            intervals: 0,
        });
    }
    let mut segs = vec![kronrod21(&mut f, a, b)?];
    let mut evaluations = 21;
    loop {
        let (value, error, aux) = totals(&segs);
        let target = tol.abs.max(tol.rel * (value.te.abs() + value.tm.abs()));
        if error <= target {
            return Ok(Integral {
                value,
                abs_error: error,
                aux,
                evaluations,
                intervals: segs.len(),
            });
        }
        // Largest error first; intervals that can no longer be split in
        // floating point are skipped.
        let pick = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                let mid = T::lit(0.5) * (s.a + s.b);
                mid > s.a.min(s.b) && mid < s.a.max(s.b)
            })
            .fold(None::<(usize, T)>, |best, (i, s)| match best {
                Some((_, e)) if e >= s.error => best,
                _ => Some((i, s.error)),
            });
        let Some((i, _)) = pick.filter(|_| segs.len() < tol.max_subdivisions) else {
            return Err(Error::NotConverged {
                estimate: value.sum().to_f64().unwrap_or(f64::NAN),
                abs_error: error.to_f64().unwrap_or(f64::NAN),
                subdivisions: segs.len(),
            });
        };
        let s = segs[i];
        let mid = T::lit(0.5) * (s.a + s.b);
        let left = kronrod21(&mut f, s.a, mid)?;
        let right = kronrod21(&mut f, mid, s.b)?;
        evaluations += 42;
        segs[i] = left;
        segs.insert(i + 1, right);
    }
}
