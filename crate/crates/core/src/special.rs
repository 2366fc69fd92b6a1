//! Special functions: log-gamma, K-Bessel functions of order 0 and of
//! purely imaginary order, the upper incomplete gamma function and the
//! smoothing weights built from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Principal-branch-free `log Gamma(z)`: exponentiating gives `Gamma(z)`, the
/// imaginary part may differ from the principal branch by multiples of `2 pi`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.norm() < 16.0 {
        prod *= w;
        w += 1.0;
    }
    stirling(w) - prod.ln()
}

fn stirling(w: Complex64) -> Complex64 {
    // B_2k / (2k (2k - 1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in C {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `Gamma(x)` for real `x` off the poles.
pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `K_0(x)` for `x > 0` at machine precision: power series below 2 and
/// Steed's continued fraction above.
pub fn bessel_k0(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 2.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut i0 = 1.0;
        let mut harmonic = 0.0;
        let mut tail = 0.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= q / (kf * kf);
            harmonic += 1.0 / kf;
            i0 += term;
            tail += term * harmonic;
            if term < 1e-18 * i0 {
                break;
            }
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let (mut q1, mut q2) = (0.0, 1.0);
        let a1 = 0.25;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < 1e-17 {
                break;
            }
        }
        let _ = h;
        (PI / (2.0 * x)).sqrt() * (-x).exp() / s
    }
}

/// `K_{it}(y) = int_0^inf exp(-y cosh u) cos(t u) du` by the trapezoid rule,
/// halving the step until successive values agree.
pub fn bessel_kit_quadrature(t: f64, y: f64) -> f64 {
    let u_max = (50.0 / y).asinh().max(20.0 / t.abs().max(1.0));
    let f = |u: f64| (-y * u.cosh()).exp() * (t * u).cos();
    let mut h = 0.25;
    let mut prev = trapezoid_half_line(&f, h, u_max);
    loop {
        h *= 0.5;
        // Reuse the previous nodes: T(h/2) = T(h)/2 + (h/2) * sum at midpoints.
        let mut mid = 0.0;
        let mut u = h;
        while u <= u_max {
            mid += f(u);
            u += 2.0 * h;
        }
        let next = 0.5 * prev + h * mid;
        let scale = next.abs().max((-y).exp() * 1e-3);
        if (next - prev).abs() <= 1e-15 * scale || h < 1e-4 {
            return next;
        }
        prev = next;
    }
}

fn trapezoid_half_line(f: &impl Fn(f64) -> f64, h: f64, u_max: f64) -> f64 {
    let mut sum = 0.5 * f(0.0);
    let mut u = h;
    while u <= u_max {
        sum += f(u);
        u += h;
    }
    h * sum
}

/// Evaluator for `K_nu(y)` with `nu = i * nu_im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesselEvaluator {
    pub nu_im: f64,
    /// Below this argument the order-0 path uses the power series.
    pub series_cutoff: f64,
    /// Initial trapezoid step for imaginary order.
    pub quad_step: f64,
}

impl BesselEvaluator {
    pub fn new(nu_im: f64) -> Self {
        Self {
            nu_im,
            series_cutoff: 2.0,
            quad_step: 0.25,
        }
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        bessel_k(self.nu_im, y)
    }

    /// Value without the domain check, for hot loops with `y > 0` known.
    #[inline]
    pub fn eval_unchecked(&self, y: f64) -> f64 {
        if self.nu_im == 0.0 {
            bessel_k0(y)
        } else {
            bessel_kit_quadrature(self.nu_im, y)
        }
    }
}

/// `K_{i nu_im}(y)` for `y > 0`.
pub fn bessel_k(nu_im: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("K-Bessel needs y > 0, got {y}")));
    }
    Ok(if nu_im == 0.0 {
        bessel_k0(y)
    } else {
        bessel_kit_quadrature(nu_im, y)
    })
}

/// Upper bound for `|K_{it}(y)|` valid for all real `t` and `y > 0`.
pub fn bessel_k_bound(y: f64) -> f64 {
    (PI / (2.0 * y)).sqrt() * (-y).exp()
}

/// `int_0^inf K_nu(y)^2 y^s dy/y = 2^(s-3)/Gamma(s) Gamma((s+2nu)/2) Gamma(s/2)^2 Gamma((s-2nu)/2)`.
pub fn mellin_k_moment(nu: Complex64, s: Complex64) -> Result<Complex64> {
    let args = [(s + 2.0 * nu) / 2.0, s / 2.0, (s - 2.0 * nu) / 2.0];
    if args.iter().any(|&a| is_gamma_pole(a)) {
        return Err(Error::Domain(format!("Gamma pole in the Mellin moment at s = {s}")));
    }
    if s.re <= 2.0 * nu.re.abs() {
        return Err(Error::Domain(format!("moment integral diverges at s = {s}")));
    }
    let log = (s - 3.0) * 2f64.ln() - ln_gamma(s)
        + ln_gamma(args[0])
        + 2.0 * ln_gamma(args[1])
        + ln_gamma(args[2]);
    Ok(log.exp())
}

/// Upper incomplete gamma `Gamma(a, z)` for real `a` and `z > 0`.
pub fn gamma_upper(a: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("Gamma(a, z) needs z > 0, got {z}")));
    }
    if z >= 1.0 && z >= a + 1.0 {
        return Ok(gamma_upper_cf(a, z));
    }
    if a > 0.0 {
        return Ok(gamma_upper_series(a, z));
    }
    // a <= 0 and z < 1: recur downward from b in [0, 1).
    let k = (-a).ceil();
    let b = a + k;
    let mut g = if b == 0.0 {
        exp_integral_e1(z)
    } else {
        gamma_upper_series(b, z)
    };
    let mut c = b;
    for _ in 0..(k as u64) {
        c -= 1.0;
        // Gamma(c, z) = (Gamma(c + 1, z) - z^c e^-z) / c
        g = (g - (c * z.ln() - z).exp()) / c;
    }
    Ok(g)
}

/// `Gamma(a) - gamma(a, z)` with the lower function from its positive series
/// `gamma(a, z) = z^a e^-z sum_k z^k / (a (a+1) .. (a+k))`.
fn gamma_upper_series(a: f64, z: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..1000 {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if del.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    gamma_real(a) - (a * z.ln() - z).exp() * sum
}

/// Modified Lentz evaluation of the Legendre continued fraction.
fn gamma_upper_cf(a: f64, z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let fi = i as f64;
        let an = -fi * (fi - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * z.ln() - z).exp() * h
}

/// `E_1(z) = Gamma(0, z)`.
pub fn exp_integral_e1(z: f64) -> f64 {
    if z >= 1.0 {
        return gamma_upper_cf(0.0, z);
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -z / kf;
        let add = term / kf;
        sum += add;
        if add.abs() < 1e-18 {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Archimedean gamma factor of a completed L-function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaFactor {
    /// `Gamma((s + delta)/2)`, for Dirichlet L-functions.
    Dirichlet { delta: u8 },
    /// `Gamma((s + eps + nu)/2) Gamma((s + eps - nu)/2)` with `nu = i * nu_im`.
    Hecke { epsilon: u8, nu_im: f64 },
}

impl GammaFactor {
    pub fn gamma(&self, s: f64) -> f64 {
        match *self {
            GammaFactor::Dirichlet { delta } => gamma_real((s + delta as f64) / 2.0),
            GammaFactor::Hecke { epsilon, nu_im } => {
                let z = Complex64::new((s + epsilon as f64) / 2.0, nu_im / 2.0);
                (2.0 * ln_gamma(z).re).exp()
                    * if is_gamma_pole(z) { f64::NAN } else { gamma_sign(z) }
            }
        }
    }

    /// The incomplete Mellin transform `G(s, x) = int_x^inf Phi(u) u^s du/u`
    /// of the kernel `Phi` whose Mellin transform is the gamma factor.
    pub fn incomplete(&self, s: f64, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("smoothing argument must be positive, got {x}")));
        }
        match *self {
            GammaFactor::Dirichlet { delta } => gamma_upper((s + delta as f64) / 2.0, x * x),
            GammaFactor::Hecke { epsilon, nu_im } => hecke_incomplete(s, epsilon, nu_im, x),
        }
    }
}

fn gamma_sign(z: Complex64) -> f64 {
    // Gamma(conj z) = conj Gamma(z), so |Gamma(z)|^2 only needs the real case sign.
    if z.im != 0.0 {
        1.0
    } else {
        let g = gamma(z);
        g.re.signum() * g.re.signum()
    }
}

/// `4 int_0^inf cos(t v) (2 cosh v)^-(s+eps) Gamma(s + eps, 2 x cosh v) dv`.
fn hecke_incomplete(s: f64, epsilon: u8, t: f64, x: f64) -> Result<f64> {
    let a = s + epsilon as f64;
    let f = |v: f64| -> Result<f64> {
        let c = v.cosh();
        Ok((t * v).cos() * (-a * (2.0 * c).ln()).exp() * gamma_upper(a, 2.0 * x * c)?)
    };
    // Integrand is analytic in |Im v| < pi/2 and decays like exp(-2x cosh v).
    let h = 0.05;
    let mut sum = 0.5 * f(0.0)?;
    let mut k = 1;
    loop {
        let v = k as f64 * h;
        let term = f(v)?;
        sum += term;
        if 2.0 * x * v.cosh() > 60.0 + a.abs() * (2.0 * x * v.cosh()).ln().max(0.0) {
            break;
        }
        k += 1;
        if k > 100_000 {
            return Err(Error::Internal("smoothing integral did not converge".into()));
        }
    }
    Ok(4.0 * h * sum)
}

/// Normalized weight `W(x) = G(s, x) / gamma(s)`, tending to 1 as `x -> 0`.
pub fn smoothing_weight(factor: &GammaFactor, x: f64, s: f64) -> Result<f64> {
    Ok(factor.incomplete(s, x)? / factor.gamma(s))
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Adaptive Gauss-Kronrod quadrature, used as an independent check.

    const XGK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_728_8,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];

    fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = WGK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let x = h * XGK[i];
            let (f1, f2) = (f(c - x), f(c + x));
            k += WGK[i] * (f1 + f2);
            if i % 2 == 1 {
                g += WG[i / 2] * (f1 + f2);
            }
        }
        (k * h, ((k - g) * h).abs())
    }

    /// Globally adaptive: bisect the interval with the largest error estimate
    /// until the total estimate drops below `tol` (relative) or the budget runs out.
    pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        let mut parts = vec![(a, b, gk15(f, a, b))];
        for _ in 0..4000 {
            let total: f64 = parts.iter().map(|p| p.2 .0).sum();
            let err: f64 = parts.iter().map(|p| p.2 .1).sum();
            if err <= tol * total.abs() {
                break;
            }
            let (i, _) = parts
                .iter()
                .enumerate()
                .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
                .unwrap();
            let (lo, hi, _) = parts.swap_remove(i);
            let mid = 0.5 * (lo + hi);
            parts.push((lo, mid, gk15(f, lo, mid)));
            parts.push((mid, hi, gk15(f, mid, hi)));
        }
        // Sum smallest first.
        let mut vals: Vec<f64> = parts.iter().map(|p| p.2 .0).collect();
        vals.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        vals.iter().sum()
    }

    /// `int_0^inf f` via `x = e^u` on a finite `u` window.
    pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, umin: f64, umax: f64, tol: f64) -> f64 {
        integrate(&|u: f64| f(u.exp()) * u.exp(), umin, umax, tol)
    }
}
