//! Theta lifts of class group characters: construction, evaluation with a
//! rigorous truncation bound, and numerical checks of the modularity claims.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classforms::{ideal_to_class, ClassGroup, IdealClassCounts};
use crate::cyclo::{Cyclo, RootOfUnity};
use crate::error::{Error, Result};
use crate::heckechar::{is_norm_induced, DirichletCharacter, HeckeCharacter};
use crate::quadfield::{ideal_mul, QfIdeal, SplitKind};
use crate::special::BesselEvaluator;

/// Terms with `2 pi n y` above this are dropped; `e^-45 ~ 2.9e-20`.
pub const TRUNCATION_EXPONENT: f64 = 45.0;

const CHUNK: usize = 4096;

const DECAY_NOISE_FLOOR: f64 = 1e-12;

/// Exact coefficient data: for every norm `n`, the number of ideals of norm
/// `n` in each narrow class.
#[derive(Clone, Debug)]
struct ClassCounts {
    exponent: u32,
    class_exps: Vec<u32>,
    counts: Arc<IdealClassCounts>,
}

/// A Maass form `sum_{n >= 1} a'(n) sqrt(y) K_nu(2 pi n y) cs(2 pi n x)` with
/// `cs = cos` for `epsilon = 0` and `sin` for `epsilon = 1`.
///
/// `a'(n)` is the sum of `psi` over ideals of norm `n`; the coefficients of
/// the symmetric expansion over `n != 0` are `a(n) = a'(|n|)/2` resp.
/// `sgn(n) a'(|n|)/(2i)`.
#[derive(Clone, Debug)]
pub struct MaassForm {
    level: u64,
    nu_im: f64,
    epsilon: u8,
    nebentypus: DirichletCharacter,
    root_number: Complex64,
    cuspidal: bool,
    coeffs: Vec<Complex64>,
    exact: Option<ClassCounts>,
    growth: f64,
    /// Coefficients past `n_max` are zero rather than unknown.
    finite: bool,
    bessel: BesselEvaluator,
}

/// Value of a truncated theta series with the bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaValue {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

impl ThetaValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: u64,
    pub re: f64,
    pub im: f64,
}

/// Point at which the phase `n x mod 1` is computed, either from a float or
/// as `p/q + dx` with the rational part reduced exactly.
#[derive(Clone, Copy, Debug)]
enum Phase {
    Float(f64),
    Rational { p: i64, q: i64, dx: f64 },
}

impl Phase {
    /// `n x mod 1`, without the rounding error of forming `n x`.
    #[inline]
    fn turns(&self, n: u64) -> f64 {
        match *self {
            Phase::Float(x) => frac_product(n as f64, x),
            Phase::Rational { p, q, dx } => {
                let r = ((n as i128 * p as i128).rem_euclid(q as i128)) as f64 / q as f64;
                r + frac_product(n as f64, dx)
            }
        }
    }
}

/// Fractional part of `a * b` using the exact product split `a b = p + e`.
#[inline]
fn frac_product(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p - p.floor()) + e
}

/// `sum_{N a = n} psi(a)` for every `n`, with `psi(class c) = zeta_e^{exps[c]}`.
pub fn character_sums(counts: &IdealClassCounts, exps: &[u32], e: u32) -> Vec<Complex64> {
    let roots: Vec<Complex64> = exps
        .iter()
        .map(|&k| RootOfUnity::new(k as i64, e).to_complex())
        .collect();
    (0..=counts.max_norm())
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return Complex64::new(0.0, 0.0);
            }
            counts
                .of_norm(n)
                .iter()
                .zip(&roots)
                .map(|(&c, r)| r * c as f64)
                .sum::<Complex64>()
        })
        .collect()
}

/// The same sum as an element of `Z[zeta_e]`.
pub fn character_sum_exact(counts: &IdealClassCounts, exps: &[u32], e: u32, n: u64) -> Cyclo {
    let mut out = Cyclo::zero(e);
    for (k, &c) in exps.iter().zip(counts.of_norm(n)) {
        out.add_root(*k, c as i64);
    }
    out
}

pub fn build_theta(psi: &HeckeCharacter, n_max: u64) -> Result<MaassForm> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let counts = IdealClassCounts::new(psi.class_group(), n_max)?;
    build_theta_from_counts(psi, Arc::new(counts))
}

/// As [`build_theta`], reusing ideal class counts computed for the same class group.
pub fn build_theta_from_counts(psi: &HeckeCharacter, counts: Arc<IdealClassCounts>) -> Result<MaassForm> {
    let cg: &Arc<ClassGroup> = psi.class_group();
    if counts.h() != cg.h_narrow() || counts.max_norm() == 0 {
        return Err(Error::Precondition("class counts do not match the class group".into()));
    }
    let field = cg.field();
    let (exps, e) = psi.class_exponents();
    let coeffs = character_sums(&counts, exps, e);

    let inf = psi.infinity();
    // T(psi) = i^(-2 eps) tau_F(psi), and for conductor (1) the Gauss sum is
    // psi of the different (sqrt D), whose narrow class is J.
    let sign = if inf.epsilon == 0 { 1.0 } else { -1.0 };
    let root_number = psi.value_class(cg.j_class()).to_complex() * sign;

    Ok(MaassForm {
        level: field.disc() as u64,
        nu_im: inf.nu_im,
        epsilon: inf.epsilon,
        nebentypus: DirichletCharacter::kronecker(field.disc()),
        root_number,
        cuspidal: !is_norm_induced(psi),
        coeffs,
        exact: Some(ClassCounts {
            exponent: e,
            class_exps: exps.to_vec(),
            counts,
        }),
        growth: 1.0,
        finite: false,
        bessel: BesselEvaluator::new(inf.nu_im),
    })
}

impl MaassForm {
    /// A form with the finite expansion `a'(1..=n_max)` (index 0 ignored).
    pub fn from_coefficients(
        level: u64,
        nu_im: f64,
        epsilon: u8,
        nebentypus: DirichletCharacter,
        root_number: Complex64,
        mut coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if epsilon > 1 {
            return Err(Error::InfinityType(format!("epsilon must be 0 or 1, got {epsilon}")));
        }
        if coeffs.len() < 2 {
            return Err(Error::Precondition("need at least one coefficient".into()));
        }
        coeffs[0] = Complex64::new(0.0, 0.0);
        let growth = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.norm() / (2.0 * (n as f64).sqrt()))
            .fold(1.0, f64::max);
        Ok(Self {
            level,
            nu_im,
            epsilon,
            nebentypus,
            root_number,
            cuspidal: true,
            coeffs,
            exact: None,
            growth,
            finite: true,
            bessel: BesselEvaluator::new(nu_im),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn nu_im(&self) -> f64 {
        self.nu_im
    }

    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    pub fn nebentypus(&self) -> &DirichletCharacter {
        &self.nebentypus
    }

    pub fn root_number(&self) -> Complex64 {
        self.root_number
    }

    /// False for norm-induced characters, whose lift is not a cusp form.
    pub fn is_cuspidal(&self) -> bool {
        self.cuspidal
    }

    pub fn n_max(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    /// Laplace eigenvalue `1/4 - nu^2 = 1/4 + nu_im^2`.
    pub fn eigenvalue(&self) -> f64 {
        0.25 + self.nu_im * self.nu_im
    }

    /// `a'(n)`, the coefficient of `sqrt(y) K cs(2 pi n x)`.
    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a(n)` of the expansion over all `n != 0`.
    pub fn fourier_coeff(&self, n: i64) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let c = self.coeffs[n.unsigned_abs() as usize] / 2.0;
        if self.epsilon == 0 {
            c
        } else {
            c / Complex64::i() * n.signum() as f64
        }
    }

    /// `a'(n)` as an element of `Z[zeta_e]`, when built from a character.
    pub fn coeff_exact(&self, n: u64) -> Option<Cyclo> {
        let ex = self.exact.as_ref()?;
        Some(character_sum_exact(&ex.counts, &ex.class_exps, ex.exponent, n))
    }

    /// Number of ideals of norm `n`, when built from a character.
    pub fn ideal_count(&self, n: u64) -> Option<u64> {
        Some(self.exact.as_ref()?.counts.total(n))
    }

    /// The smallest `y` the stored coefficients can evaluate at.
    pub fn min_y(&self) -> f64 {
        TRUNCATION_EXPONENT / (2.0 * PI * self.n_max() as f64)
    }

    /// Rigorous bound for `sum_{n > n_cut} |a'(n)| sqrt(y) |K_nu(2 pi n y)|`.
    ///
    /// Uses `|a'(n)| <= tau(n) <= 2 sqrt(n)` (scaled by the observed growth
    /// for explicit coefficients) and `|K_nu(x)| <= sqrt(pi/(2x)) e^-x`, so
    /// the `n`-th term is at most `e^(-2 pi n y)`.
    pub fn tail_bound(&self, y: f64, n_cut: u64) -> f64 {
        let q = (-2.0 * PI * y).exp();
        self.growth * (-2.0 * PI * (n_cut as f64 + 1.0) * y).exp() / (1.0 - q)
    }

    fn cutoff(&self, y: f64) -> Result<u64> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("need y > 0, got {y}")));
        }
        let needed = (TRUNCATION_EXPONENT / (2.0 * PI * y)).floor() as u64;
        if self.finite {
            return Ok(needed.clamp(1, self.n_max()));
        }
        if needed > self.n_max() {
            return Err(Error::NotEvaluable {
                y,
                needed,
                have: self.n_max(),
            });
        }
        Ok(needed.max(1))
    }

    /// `Theta(x + iy)` truncated where `2 pi n y > 45`.
    pub fn eval(&self, x: f64, y: f64) -> Result<ThetaValue> {
        let n_cut = self.cutoff(y)?;
        Ok(self.sum(Phase::Float(x.rem_euclid(1.0)), y, n_cut))
    }

    /// `Theta(x + iy)` truncated after `n_cut` terms.
    pub fn eval_truncated(&self, x: f64, y: f64, n_cut: u64) -> Result<ThetaValue> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("need y > 0, got {y}")));
        }
        if n_cut > self.n_max() && !self.finite {
            return Err(Error::NotEvaluable {
                y,
                needed: n_cut,
                have: self.n_max(),
            });
        }
        Ok(self.sum(Phase::Float(x.rem_euclid(1.0)), y, n_cut.min(self.n_max())))
    }

    /// `Theta(gamma z)` for an integer matrix with `c != 0`, writing
    /// `gamma z = a/c - 1/(c (cz + d))` so that `n Re(gamma z) mod 1` keeps
    /// full precision for large `n`.
    pub fn eval_image(&self, gamma: [[i64; 2]; 2], x: f64, y: f64) -> Result<ThetaValue> {
        let [[a, b], [c, d]] = gamma;
        if c == 0 {
            let (xi, yi) = mobius(gamma, x, y);
            return self.eval(xi, yi);
        }
        let _ = b;
        let u = (c as f64).mul_add(x, d as f64);
        let czd = Complex64::new(u, c as f64 * y);
        let w = (czd * c as f64).inv();
        let yi = y / czd.norm_sqr();
        let n_cut = self.cutoff(yi)?;
        let (p, q) = if c > 0 { (a, c) } else { (-a, -c) };
        Ok(self.sum(Phase::Rational { p, q, dx: -w.re }, yi, n_cut))
    }

    fn sum(&self, phase: Phase, y: f64, n_cut: u64) -> ThetaValue {
        let sy = y.sqrt();
        let two_pi_y = 2.0 * PI * y;
        let eps = self.epsilon;
        let bessel = self.bessel;
        let coeffs = &self.coeffs[..=n_cut as usize];
        let partials: Vec<(Complex64, Complex64)> = coeffs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut s = Complex64::new(0.0, 0.0);
                let mut comp = Complex64::new(0.0, 0.0);
                for (j, a) in chunk.iter().enumerate() {
                    let n = (ci * CHUNK + j) as u64;
                    if n == 0 || (a.re == 0.0 && a.im == 0.0) {
                        continue;
                    }
                    let k = bessel.eval_unchecked(two_pi_y * n as f64);
                    let (sn, cs) = (2.0 * PI * phase.turns(n)).sin_cos();
                    let trig = if eps == 0 { cs } else { sn };
                    let term = a * (k * trig) - comp;
                    let t = s + term;
                    comp = (t - s) - term;
                    s = t;
                }
                (s, comp)
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (s, c) in partials {
            total += s - c;
        }
        let v = total * sy;
        ThetaValue {
            re: v.re,
            im: v.im,
            tail_bound: self.tail_bound(y, n_cut),
            terms: n_cut,
        }
    }

    /// Rows `(n, re a'(n), im a'(n))` for `1 <= n <= n_max`.
    pub fn coefficient_rows(&self) -> Vec<CoeffRow> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| CoeffRow {
                n: n as u64,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for r in self.coefficient_rows() {
            let _ = writeln!(out, "{},{:.14e},{:.14e}", r.n, r.re, r.im);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "nu_im": self.nu_im,
            "epsilon": self.epsilon,
            "root_number": [self.root_number.re, self.root_number.im],
            "cuspidal": self.cuspidal,
            "coefficients": self.coefficient_rows(),
        })
    }
}

/// `a'(p^r)` computed from the primes above `p` alone.
pub fn prime_power_coeff(psi: &HeckeCharacter, p: u64, r: u32) -> Result<Cyclo> {
    let cg = psi.class_group();
    let field = cg.field();
    let split = field.split_prime(p)?;
    let (_, e) = psi.class_exponents();
    let mut out = Cyclo::zero(e);
    let mut add = |ideal: &QfIdeal| -> Result<()> {
        let v = psi.value_class(ideal_to_class(cg, ideal)?);
        out.add_root(v.k * (e / v.m) % e, 1);
        Ok(())
    };
    match split.kind {
        SplitKind::Inert => {
            if r % 2 == 0 {
                add(&field.rational_ideal(p.pow(r / 2)))?;
            }
        }
        SplitKind::Ramified => {
            let q = split.primes_above[0];
            let mut x = field.unit_ideal();
            for _ in 0..r {
                x = ideal_mul(&x, &q)?;
            }
            add(&x)?;
        }
        SplitKind::Split => {
            let (q, qb) = (split.primes_above[0], split.primes_above[1]);
            for i in 0..=r {
                let mut x = field.unit_ideal();
                for _ in 0..i {
                    x = ideal_mul(&x, &q)?;
                }
                for _ in i..r {
                    x = ideal_mul(&x, &qb)?;
                }
                add(&x)?;
            }
        }
    }
    Ok(out)
}

/// `gamma z` as `(x, y)`.
pub fn mobius(gamma: [[i64; 2]; 2], x: f64, y: f64) -> (f64, f64) {
    let [[a, b], [c, d]] = gamma;
    let z = Complex64::new(x, y);
    let w = (z * a as f64 + b as f64) / (z * c as f64 + d as f64);
    (w.re, w.im)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomorphyReport {
    pub gamma: [[i64; 2]; 2],
    pub multiplier: [f64; 2],
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub max_tail_bound: f64,
}

/// `max |Theta(gamma z) - chi(d) Theta(z)|` over the points.
pub fn check_automorphy(
    form: &MaassForm,
    gamma: [[i64; 2]; 2],
    points: &[(f64, f64)],
) -> Result<AutomorphyReport> {
    let [[a, b], [c, d]] = gamma;
    if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
        return Err(Error::Precondition("matrix must have determinant 1".into()));
    }
    if c.rem_euclid(form.level as i64) != 0 {
        return Err(Error::Precondition(format!(
            "matrix is not in Gamma_0({}): c = {c}",
            form.level
        )));
    }
    let chi = form.nebentypus.value_complex(d);
    let mut residuals = Vec::with_capacity(points.len());
    let mut max_tail = 0.0f64;
    for &(x, y) in points {
        let lhs = form.eval_image(gamma, x, y)?;
        let rhs = form.eval(x, y)?;
        max_tail = max_tail.max(lhs.tail_bound).max(rhs.tail_bound);
        residuals.push((lhs.value() - chi * rhs.value()).norm());
    }
    Ok(AutomorphyReport {
        gamma,
        multiplier: [chi.re, chi.im],
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        residuals,
        max_tail_bound: max_tail,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenvalueReport {
    pub x: f64,
    pub y: f64,
    pub eigenvalue: f64,
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `residuals[i] / residuals[i + 1]`; about 4 for a second-order scheme.
    pub ratios: Vec<f64>,
}

/// `|Delta_h Theta - lambda Theta|` with the five-point Laplacian
/// `Delta_h = -y^2 (d_xx + d_yy)`, at steps `h`, `h/2`, `h/4`.
pub fn check_eigenvalue(form: &MaassForm, x: f64, y: f64, h: f64) -> Result<EigenvalueReport> {
    if !(h > 0.0) || h >= y / 2.0 {
        return Err(Error::Precondition("need 0 < h < y/2".into()));
    }
    let lambda = form.eigenvalue();
    let f0 = form.eval(x, y)?.value();
    let mut steps = Vec::new();
    let mut residuals = Vec::new();
    for k in 0..3 {
        let s = h / f64::powi(2.0, k);
        let sum = form.eval(x + s, y)?.value()
            + form.eval(x - s, y)?.value()
            + form.eval(x, y + s)?.value()
            + form.eval(x, y - s)?.value()
            - f0 * 4.0;
        let lap = -sum * (y * y / (s * s));
        steps.push(s);
        residuals.push((lap - f0 * lambda).norm());
    }
    let ratios = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(EigenvalueReport {
        x,
        y,
        eigenvalue: lambda,
        steps,
        residuals,
        ratios,
    })
}

/// `max |Theta_psi(z) -+ T Theta_dual(-1/(N z))|` over the points, with the
/// minus sign for `epsilon = 1`; `dual` is the lift of `psi-bar`.
pub fn check_functional_equation(
    form: &MaassForm,
    dual: &MaassForm,
    points: &[(f64, f64)],
) -> Result<f64> {
    if form.level != dual.level || form.epsilon != dual.epsilon {
        return Err(Error::Precondition("dual form has a different level or parity".into()));
    }
    let sign = if form.epsilon == 0 { 1.0 } else { -1.0 };
    let w = [[0, -1], [form.level as i64, 0]];
    let mut worst = 0.0f64;
    for &(x, y) in points {
        let (xi, yi) = mobius(w, x, y);
        let lhs = form.eval(x, y)?.value();
        let rhs = dual.eval(xi, yi)?.value() * form.root_number * sign;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `max |Theta_psi(iy) -+ T Theta_dual(i/(N y))|` along the imaginary axis.
pub fn check_functional_equation_axis(form: &MaassForm, dual: &MaassForm, ys: &[f64]) -> Result<f64> {
    let points: Vec<(f64, f64)> = ys.iter().map(|&y| (0.0, y)).collect();
    check_functional_equation(form, dual, &points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cusp {
    Infinity,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub cusp: Cusp,
    pub t: u32,
    pub ys: Vec<f64>,
    /// `max_x |Theta|` over a grid of `x` in `[0, 1)`, after moving the cusp to infinity.
    pub sup_values: Vec<f64>,
    /// `y^t` times the sup values.
    pub weighted: Vec<f64>,
    /// Values below this are rounding noise and count as decayed.
    pub noise_floor: f64,
    pub decays: bool,
}

/// Empirical decay of `Theta | sigma` along `y in {2, 4, 8, 16}`, where
/// `sigma` moves the cusp to infinity: the identity for infinity and
/// `z -> -1/(N z)` for 0, which also normalizes the cusp width `N`.
pub fn check_cuspidal_decay(form: &MaassForm, cusp: Cusp, t: u32) -> Result<DecayReport> {
    if t == 0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    let ys = vec![2.0, 4.0, 8.0, 16.0];
    let xs: Vec<f64> = (0..8).map(|k| (k as f64 + 0.37) / 8.0).collect();
    let mut sup_values = Vec::new();
    for &y in &ys {
        let mut sup = 0.0f64;
        for &x in &xs {
            let v = match cusp {
                Cusp::Infinity => form.eval(x, y)?,
                Cusp::Zero => {
                    let (xi, yi) = mobius([[0, -1], [form.level as i64, 0]], x, y);
                    form.eval(xi, yi)?
                }
            };
            sup = sup.max(v.value().norm() + v.tail_bound);
        }
        sup_values.push(sup);
    }
    let weighted: Vec<f64> = ys
        .iter()
        .zip(&sup_values)
        .map(|(y, v)| y.powi(t as i32) * v)
        .collect();
    let decays = (1..ys.len()).all(|i| weighted[i] < weighted[i - 1] || sup_values[i] < DECAY_NOISE_FLOOR)
        && weighted[weighted.len() - 1] < 1e-6;
    Ok(DecayReport {
        cusp,
        t,
        ys,
        sup_values,
        weighted,
        noise_floor: DECAY_NOISE_FLOOR,
        decays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classforms::build_class_group;
    use crate::heckechar::{make_class_character, InfinityType};
    use crate::quadfield::QuadField;

    fn form229(n_max: u64) -> MaassForm {
        let cg = Arc::new(build_class_group(&QuadField::new(229).unwrap()).unwrap());
        let psi = make_class_character(&cg, 1, InfinityType::unramified()).unwrap();
        build_theta(&psi, n_max).unwrap()
    }

    #[test]
    fn small_coefficients() {
        let f = form229(50);
        assert_eq!(f.coeff_exact(1).unwrap(), Cyclo::one(3));
        assert!(f.coeff_exact(2).unwrap().is_zero());
        assert_eq!(f.coeff_exact(3).unwrap().to_integer(), Some(-1));
        assert_eq!(f.level(), 229);
        assert_eq!(f.root_number(), Complex64::new(1.0, 0.0));
        assert!(f.is_cuspidal());
    }

    #[test]
    fn frac_product_is_exact() {
        // fl(0.1) = 3602879701896397 / 2^55 exactly.
        let x = 0.1f64;
        for n in [7u64, 10_000_000, 987_654_321] {
            let num = (n as i128 * 3602879701896397) % (1i128 << 55);
            let exact = num as f64 / (1u64 << 55) as f64;
            assert!((frac_product(n as f64, x) - exact).abs() < 1e-16, "n={n}");
        }
    }

    #[test]
    fn needs_enough_coefficients() {
        let f = form229(100);
        assert!(matches!(f.eval(0.1, 0.01), Err(Error::NotEvaluable { .. })));
        assert!(f.eval(0.1, 0.5).is_ok());
    }
}
