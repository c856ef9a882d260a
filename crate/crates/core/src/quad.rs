//! Adaptive Gauss–Kronrod quadrature (15-point Kronrod / 7-point Gauss).
//!
//! Worklist-based bisection: the segment with the largest error estimate is
//! split until the summed estimate meets the tolerance or the segment budget
//! is exhausted.

use crate::error::{Error, Result};

// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub abs_error: f64,
    pub evals: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [0.0_f64; 15];
    fv[14] = fc;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let (fl, fr) = (f(c - x), f(c + x));
        fv[2 * j] = fl;
        fv[2 * j + 1] = fr;
        kronrod += WGK[j] * (fl + fr);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }
    let value = kronrod * h;
    let mean = 0.5 * kronrod;
    // QUADPACK rescaling against the variation resasc = ∫|f - mean|.
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    resasc *= h.abs();
    let raw = ((kronrod - gauss) * h).abs();
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        err = resasc * (1.0_f64).min((200.0 * raw / resasc).powf(1.5));
    }
    (value, err.max(50.0 * f64::EPSILON * value.abs()))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrate `f` over the finite interval `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quad> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature("non-finite interval endpoint".into()));
    }
    if a == b {
        return Ok(Quad { value: 0.0, abs_error: 0.0, evals: 0 });
    }
    let mut evals = 15usize;
    let (v0, e0) = gk15(&mut f, a, b);
    let mut segs = vec![Segment { a, b, value: v0, error: e0 }];
    let max_segments = 4096;

    loop {
        let total_err: f64 = segs.iter().map(|s| s.error).sum();
        if total_err <= tol || segs.len() >= max_segments {
            let value: f64 = segs.iter().map(|s| s.value).sum();
            if !value.is_finite() {
                return Err(Error::Quadrature("integrand produced a non-finite value".into()));
            }
            if total_err > tol.max(1e-12 * value.abs().max(1.0)) && segs.len() >= max_segments {
                return Err(Error::Quadrature(format!(
                    "segment budget exhausted with error estimate {total_err:.3e} > {tol:.3e}"
                )));
            }
            return Ok(Quad { value, abs_error: total_err, evals });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs.swap_remove(worst);
        let m = 0.5 * (seg.a + seg.b);
        if m == seg.a || m == seg.b {
            // Interval no longer splittable; keep it as is.
            segs.push(Segment { error: 0.0, ..seg });
            continue;
        }
        let (vl, el) = gk15(&mut f, seg.a, m);
        let (vr, er) = gk15(&mut f, m, seg.b);
        evals += 30;
        segs.push(Segment { a: seg.a, b: m, value: vl, error: el });
        segs.push(Segment { a: m, b: seg.b, value: vr, error: er });
    }
}

/// Integrate `f` over `[a, ∞)` for integrands that decay at infinity.
///
/// Maps the tail through x = a + (1-u)/u and integrates on (0, 1].
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: f64) -> Result<Quad> {
    integrate(
        |u| {
            let x = a + (1.0 - u) / u;
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx / (u * u)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Simultaneous integration of a vector-valued integrand over `[a, b]`.
///
/// The integrand writes its `dim` components into the provided slice; the
/// subdivision is driven by the worst per-component error.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Vec<Quad>> {
    struct VSeg {
        a: f64,
        b: f64,
        value: Vec<f64>,
        error: Vec<f64>,
    }
    let mut buf = vec![0.0; dim];
    let gk = |f: &mut F, a: f64, b: f64, buf: &mut [f64]| -> (Vec<f64>, Vec<f64>) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut kron = vec![0.0; dim];
        let mut gauss = vec![0.0; dim];
        let add = |x: f64, wk: f64, wg: Option<f64>, buf: &mut [f64], kron: &mut [f64], gauss: &mut [f64], f: &mut F| {
            f(x, buf);
            for i in 0..dim {
                kron[i] += wk * buf[i];
                if let Some(w) = wg {
                    gauss[i] += w * buf[i];
                }
            }
        };
        add(c, WGK[7], Some(WG[3]), buf, &mut kron, &mut gauss, f);
        for j in 0..7 {
            let wg = if j % 2 == 1 { Some(WG[j / 2]) } else { None };
            add(c - h * XGK[j], WGK[j], wg, buf, &mut kron, &mut gauss, f);
            add(c + h * XGK[j], WGK[j], wg, buf, &mut kron, &mut gauss, f);
        }
        let value: Vec<f64> = kron.iter().map(|v| v * h).collect();
        let error: Vec<f64> = kron
            .iter()
            .zip(&gauss)
            .map(|(k, g)| {
                let e = ((k - g) * h).abs();
                let s = (200.0 * e).powf(1.5);
                s.min(e)
            })
            .collect();
        (value, error)
    };

    let (v0, e0) = gk(&mut f, a, b, &mut buf);
    let mut segs = vec![VSeg { a, b, value: v0, error: e0 }];
    let max_segments = 4096;
    loop {
        let worst_err = |s: &VSeg| s.error.iter().cloned().fold(0.0_f64, f64::max);
        let total: f64 = segs
            .iter()
            .map(|s| s.error.iter().sum::<f64>())
            .sum::<f64>();
        if total <= tol * (dim as f64).sqrt() || segs.len() >= max_segments {
            let mut out = Vec::with_capacity(dim);
            for i in 0..dim {
                let value: f64 = segs.iter().map(|s| s.value[i]).sum();
                let err: f64 = segs.iter().map(|s| s.error[i]).sum();
                if !value.is_finite() {
                    return Err(Error::Quadrature("non-finite vector integrand".into()));
                }
                out.push(Quad { value, abs_error: err, evals: 0 });
            }
            return Ok(out);
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| worst_err(x.1).total_cmp(&worst_err(y.1)))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs.swap_remove(worst);
        let m = 0.5 * (seg.a + seg.b);
        if m == seg.a || m == seg.b {
            segs.push(VSeg { error: vec![0.0; dim], ..seg });
            continue;
        }
        let (vl, el) = gk(&mut f, seg.a, m, &mut buf);
        let (vr, er) = gk(&mut f, m, seg.b, &mut buf);
        segs.push(VSeg { a: seg.a, b: m, value: vl, error: el });
        segs.push(VSeg { a: m, b: seg.b, value: vr, error: er });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(q.value, 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_tail() {
        let q = integrate_to_inf(|x| (-x * x).exp(), 0.0, 1e-12).unwrap();
        assert_relative_eq!(q.value, PI.sqrt() / 2.0, max_relative = 1e-11);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let q = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn vector_integrand_matches_scalar() {
        let qs = integrate_vec(
            |x, out| {
                out[0] = x.sin();
                out[1] = x.cos();
            },
            2,
            0.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(qs[0].value, 1.0 - 1.0_f64.cos(), max_relative = 1e-12);
        assert_relative_eq!(qs[1].value, 1.0_f64.sin(), max_relative = 1e-12);
    }
}
