//! Hecke L-series of class group characters, Dirichlet L-series, the
//! Rankin-Selberg series `sum |a'(n)|^2 n^-s`, and their values.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, CompensatedSum};
use crate::classforms::{ideal_to_class, IdealClassCounts};
use crate::cyclo::{Cyclo, RootOfUnity};
use crate::error::{Error, Result};
use crate::heckechar::{gauss_sum_rational, is_norm_induced, DirichletCharacter, HeckeCharacter};
use crate::maassform::{character_sum_exact, character_sums, MaassForm};
use crate::quadfield::SplitKind;
use crate::special::{exp_integral_e1, GammaFactor};

/// Cutoffs of the two smoothed evaluations compared by [`l_value_at_1`].
pub const CUTOFFS: (f64, f64) = (1.0, 1.2);

/// Data of the completed function `Lambda(s) = Q^s gamma(s) L(s)` with
/// `Lambda(1 - s) = T Lambda-bar(s)`, where `Lambda-bar` has conjugate coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalData {
    /// `D N(f)` for Hecke series, `q` for Dirichlet series.
    pub conductor: f64,
    pub gamma: GammaFactor,
    pub root_number: Complex64Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex64Pair(pub f64, pub f64);

impl From<Complex64> for Complex64Pair {
    fn from(z: Complex64) -> Self {
        Complex64Pair(z.re, z.im)
    }
}

impl FunctionalData {
    /// `Q` with `Q^s gamma(s)` the archimedean factor.
    pub fn q(&self) -> f64 {
        match self.gamma {
            GammaFactor::Dirichlet { .. } => (self.conductor / PI).sqrt(),
            GammaFactor::Hecke { .. } => self.conductor.sqrt() / PI,
        }
    }

    pub fn root_number(&self) -> Complex64 {
        Complex64::new(self.root_number.0, self.root_number.1)
    }

    /// Beyond this argument the incomplete gamma weight is below `1e-20`.
    fn x_max(&self) -> f64 {
        match self.gamma {
            GammaFactor::Dirichlet { .. } => 7.5,
            GammaFactor::Hecke { .. } => 26.0,
        }
    }
}

#[derive(Clone, Debug)]
struct ExactSums {
    counts: Arc<IdealClassCounts>,
    exps: Vec<u32>,
    exponent: u32,
}

/// A Dirichlet series `sum b(n) n^-s` known for `n <= n_max`.
#[derive(Clone, Debug)]
pub struct LSeries {
    coeffs: Vec<Complex64>,
    functional: Option<FunctionalData>,
    primitive: bool,
    exact: Option<ExactSums>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LValue {
    pub s: f64,
    pub re: f64,
    pub im: f64,
    pub cutoff: f64,
    pub terms: u64,
}

impl LValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LValueReport {
    pub s: f64,
    pub value: f64,
    pub imag: f64,
    pub value_alt: f64,
    pub cutoffs: (f64, f64),
    /// `|L_A(s) - L_A'(s)|` for the two cutoffs.
    pub discrepancy: f64,
    /// Discrepancy plus the truncation bound of the smoothed sums.
    pub error_bound: f64,
    pub terms: u64,
}

impl LSeries {
    /// A series from explicit coefficients `b(1..=n_max)` (index 0 ignored).
    pub fn from_coefficients(mut coeffs: Vec<Complex64>, functional: Option<FunctionalData>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Precondition("need at least one coefficient".into()));
        }
        coeffs[0] = Complex64::new(0.0, 0.0);
        Ok(Self {
            coeffs,
            functional,
            primitive: true,
            exact: None,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn functional(&self) -> Option<&FunctionalData> {
        self.functional.as_ref()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// `b(n)` in `Z[zeta_e]`, for series of class group characters.
    pub fn coeff_exact(&self, n: u64) -> Option<Cyclo> {
        let ex = self.exact.as_ref()?;
        Some(character_sum_exact(&ex.counts, &ex.exps, ex.exponent, n))
    }

    /// Dirichlet convolution, i.e. the coefficients of the product series.
    pub fn convolve(&self, other: &LSeries) -> LSeries {
        let n = self.n_max().min(other.n_max()) as usize;
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        for i in 1..=n {
            if self.coeffs[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 1..=n / i {
                c[i * j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        LSeries {
            coeffs: c,
            functional: None,
            primitive: false,
            exact: None,
        }
    }

    /// Coefficients needed by [`LSeries::value`] at cutoff `a`.
    pub fn terms_needed(&self, a: f64) -> Result<u64> {
        let fd = self
            .functional
            .ok_or_else(|| Error::Precondition("series has no functional equation data".into()))?;
        Ok((fd.x_max() * fd.q() / a.min(1.0 / a)).ceil() as u64)
    }

    /// `L(s)` from the smoothed approximate functional equation
    /// `Lambda(s) = sum b(n) (Q/n)^s G(s, n a/Q) + T sum b-bar(n) (Q/n)^(1-s) G(1-s, n/(a Q))`.
    pub fn value(&self, s: f64, a: f64) -> Result<LValue> {
        if !(a > 0.0) {
            return Err(Error::Precondition("cutoff must be positive".into()));
        }
        let fd = self
            .functional
            .ok_or_else(|| Error::Precondition("series has no functional equation data".into()))?;
        let q = fd.q();
        let n_need = self.terms_needed(a)?;
        if n_need > self.n_max() {
            return Err(Error::Precondition(format!(
                "smoothed sum needs {n_need} coefficients, have {}",
                self.n_max()
            )));
        }
        let t = fd.root_number();
        let mut acc = CompensatedSum::default();
        for n in 1..=n_need {
            let b = self.coeffs[n as usize];
            if b == Complex64::new(0.0, 0.0) {
                continue;
            }
            let r = q / n as f64;
            let x1 = n as f64 * a / q;
            let x2 = n as f64 / (a * q);
            if x1 <= fd.x_max() {
                acc.add(b * (r.powf(s) * fd.gamma.incomplete(s, x1)?));
            }
            if x2 <= fd.x_max() {
                acc.add(t * b.conj() * (r.powf(1.0 - s) * fd.gamma.incomplete(1.0 - s, x2)?));
            }
        }
        let l = acc.value() / (q.powf(s) * fd.gamma.gamma(s));
        Ok(LValue {
            s,
            re: l.re,
            im: l.im,
            cutoff: a,
            terms: n_need,
        })
    }

    /// `L(s)` at the two cutoffs of [`CUTOFFS`], with their discrepancy.
    pub fn value_report(&self, s: f64) -> Result<LValueReport> {
        let a = self.value(s, CUTOFFS.0)?;
        let b = self.value(s, CUTOFFS.1)?;
        let discrepancy = (a.value() - b.value()).norm();
        Ok(LValueReport {
            s,
            value: a.re,
            imag: a.im,
            value_alt: b.re,
            cutoffs: CUTOFFS,
            discrepancy,
            error_bound: discrepancy + 1e-18,
            terms: a.terms.max(b.terms),
        })
    }

    /// `sum b(n) n^-s exp(-(n/x)^2)`.
    pub fn gaussian_sum(&self, s: f64, x: f64) -> Result<Complex64> {
        let n_need = (6.5 * x).ceil() as u64;
        if n_need > self.n_max() {
            return Err(Error::Precondition(format!(
                "smoothed sum needs {n_need} coefficients, have {}",
                self.n_max()
            )));
        }
        let mut acc = CompensatedSum::default();
        for n in 1..=n_need {
            let b = self.coeffs[n as usize];
            if b != Complex64::new(0.0, 0.0) {
                let u = n as f64 / x;
                acc.add(b * ((n as f64).powf(-s) * (-u * u).exp()));
            }
        }
        Ok(acc.value())
    }

    /// `L(s)` for an entire `L` from Gaussian-smoothed partial sums alone.
    ///
    /// The smoothed sum at scale `x` is `L(s) + sum_k (-1)^k/k! L(s - 2k) x^-2k`,
    /// so two Richardson steps over `x, 2x, 4x` leave an `x^-6` error. The
    /// returned estimate of the error is the size of the last correction.
    pub fn direct_value(&self, s: f64, x: f64) -> Result<(Complex64, f64)> {
        let s1 = self.gaussian_sum(s, x)?;
        let s2 = self.gaussian_sum(s, 2.0 * x)?;
        let s4 = self.gaussian_sum(s, 4.0 * x)?;
        let r1 = (s2 * 4.0 - s1) / 3.0;
        let r2 = (s4 * 4.0 - s2) / 3.0;
        let l = (r2 * 16.0 - r1) / 15.0;
        Ok((l, (l - r2).norm()))
    }
}

/// `b(n) = sum_{N a = n} psi(a)` for `n <= n_max`.
pub fn hecke_l_coeffs(psi: &HeckeCharacter, n_max: u64) -> Result<LSeries> {
    let counts = Arc::new(IdealClassCounts::new(psi.class_group(), n_max)?);
    hecke_l_from_counts(psi, counts)
}

pub fn hecke_l_from_counts(psi: &HeckeCharacter, counts: Arc<IdealClassCounts>) -> Result<LSeries> {
    let cg = psi.class_group();
    if counts.h() != cg.h_narrow() {
        return Err(Error::Precondition("class counts do not match the class group".into()));
    }
    let (exps, e) = psi.class_exponents();
    let inf = psi.infinity();
    let sign = if inf.epsilon == 0 { 1.0 } else { -1.0 };
    let root_number = psi.value_class(cg.j_class()).to_complex() * sign;
    Ok(LSeries {
        coeffs: character_sums(&counts, exps, e),
        functional: Some(FunctionalData {
            conductor: cg.field().disc() as f64 * psi.conductor().norm() as f64,
            gamma: GammaFactor::Hecke {
                epsilon: inf.epsilon,
                nu_im: inf.nu_im,
            },
            root_number: root_number.into(),
        }),
        primitive: true,
        exact: Some(ExactSums {
            counts,
            exps: exps.to_vec(),
            exponent: e,
        }),
    })
}

/// `b(n) = chi(n)`; functional data only when `chi` is primitive.
pub fn dirichlet_l_coeffs(chi: &DirichletCharacter, n_max: u64) -> Result<LSeries> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let coeffs = (0..=n_max)
        .map(|n| if n == 0 { Complex64::new(0.0, 0.0) } else { chi.value_complex(n as i64) })
        .collect();
    let primitive = chi.is_primitive();
    let functional = primitive.then(|| {
        let q = chi.modulus() as f64;
        let delta = chi.parity();
        // Lambda(1 - s, chi) = i^delta sqrt(q) / tau(chi-bar) Lambda(s, chi-bar).
        let tau_bar = gauss_sum_rational(&chi.conj()).complex();
        let t = Complex64::i().powu(delta as u32) * q.sqrt() / tau_bar;
        FunctionalData {
            conductor: q,
            gamma: GammaFactor::Dirichlet { delta },
            root_number: t.into(),
        }
    });
    Ok(LSeries {
        coeffs,
        functional,
        primitive,
        exact: None,
    })
}

/// `L(1, chi)` for a nontrivial primitive Dirichlet character in closed form:
/// `-(tau/q) sum chi-bar(a) log|1 - e(a/q)|` (even) or
/// `(pi i tau / q^2) sum chi-bar(a) a` (odd).
pub fn dirichlet_l1_closed_form(chi: &DirichletCharacter) -> Result<Complex64> {
    let q = chi.modulus();
    if q == 1 || !chi.is_primitive() {
        return Err(Error::Precondition("need a nontrivial primitive character".into()));
    }
    let tau = gauss_sum_rational(chi).complex();
    let mut acc = CompensatedSum::default();
    let even = chi.parity() == 0;
    for a in 1..q {
        if let Some(v) = chi.value(a as i64) {
            let w = if even {
                (2.0 * (PI * a as f64 / q as f64).sin()).ln()
            } else {
                a as f64
            };
            acc.add(v.conj().to_complex() * w);
        }
    }
    let qf = q as f64;
    Ok(if even {
        -tau / qf * acc.value()
    } else {
        Complex64::new(0.0, PI) * tau / (qf * qf) * acc.value()
    })
}

/// Local roots of the degree-two Euler factor at `p`; `None` stands for 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SatakeData {
    pub p: u64,
    pub alpha: Option<RootOfUnity>,
    pub beta: Option<RootOfUnity>,
}

impl SatakeData {
    /// `sum_{i + j = r} alpha^i beta^j` for `r = 0..=r_max`, i.e. the
    /// coefficients of `1/((1 - alpha X)(1 - beta X))`.
    pub fn local_coeffs(&self, r_max: u32) -> Vec<Cyclo> {
        let m = [self.alpha, self.beta]
            .iter()
            .flatten()
            .map(|r| r.m)
            .fold(1, num_integer::lcm);
        let pow = |r: Option<RootOfUnity>, k: u32| -> Cyclo {
            match r {
                Some(r) => r.pow(k as i64).to_cyclo().lift(m),
                None if k == 0 => Cyclo::one(m),
                None => Cyclo::zero(m),
            }
        };
        (0..=r_max)
            .map(|r| {
                let mut acc = Cyclo::zero(m);
                for i in 0..=r {
                    acc = &acc + &(&pow(self.alpha, i) * &pow(self.beta, r - i));
                }
                acc
            })
            .collect()
    }
}

/// Satake parameters of the theta lift of `psi` at `p`: `{psi(P), psi(P')}`
/// when `p` splits, `alpha = -beta` with `alpha beta = -psi(pO)` when inert,
/// and `{psi(P), 0}` when ramified.
pub fn satake(psi: &HeckeCharacter, p: u64) -> Result<SatakeData> {
    let cg = psi.class_group();
    let field = cg.field();
    let split = field.split_prime(p)?;
    let val = |i: &crate::quadfield::QfIdeal| -> Result<RootOfUnity> {
        Ok(psi.value_class(ideal_to_class(cg, i)?))
    };
    Ok(match split.kind {
        SplitKind::Split => SatakeData {
            p,
            alpha: Some(val(&split.primes_above[0])?),
            beta: Some(val(&split.primes_above[1])?),
        },
        SplitKind::Inert => {
            let v = val(&field.rational_ideal(p))?;
            let root = RootOfUnity::new(v.k as i64, 2 * v.m);
            SatakeData {
                p,
                alpha: Some(root),
                beta: Some(root.mul(RootOfUnity::new(1, 2))),
            }
        }
        SplitKind::Ramified => SatakeData {
            p,
            alpha: Some(val(&split.primes_above[0])?),
            beta: None,
        },
    })
}

/// `b(n) = |a'(n)|^2` for `n <= n_max`.
pub fn rankin_coeffs(form: &MaassForm, n_max: u64) -> Result<LSeries> {
    if n_max > form.n_max() {
        return Err(Error::Precondition(format!(
            "form is built to {}, asked for {n_max}",
            form.n_max()
        )));
    }
    let coeffs = form.coeffs()[..=n_max as usize]
        .iter()
        .map(|c| Complex64::new(c.norm_sqr(), 0.0))
        .collect();
    Ok(LSeries {
        coeffs,
        functional: None,
        primitive: false,
        exact: None,
    })
}

/// `|a'(n)|^2` in `Z[zeta_e]`.
pub fn rankin_coeff_exact(form: &MaassForm, n: u64) -> Option<Cyclo> {
    Some(form.coeff_exact(n)?.abs2())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankinResidual {
    pub s: f64,
    pub x: u64,
    /// `sum_{n <= x} |a'(n)|^2 n^-s`.
    pub lhs: f64,
    /// The product over `p <= x` of the local factors of
    /// `prod_{p | D}(1 + p^-s)^-1 (1 - chi_D(p) p^-s) zeta_F(s) L(s, psi (psi-bar o sigma)) / zeta(2s)`.
    pub rhs: f64,
    pub raw: f64,
    /// First-order estimate of `sum_{n > x}`, `C x^(1-s)/(s-1)` with `C` the residue at 1.
    pub lhs_tail: f64,
    /// First-order estimate of `log prod_{p > x}`, `E1((s-1) log x)`.
    pub rhs_tail: f64,
    pub corrected: f64,
}

/// Compares both sides of the Rankin-Selberg coefficient identity.
///
/// `residue` is the residue at `s = 1` of the left side, used only for the tail
/// correction; see [`rankin_residue`].
pub fn rankin_euler_identity_residual(
    form: &MaassForm,
    psi: &HeckeCharacter,
    s: f64,
    x: u64,
    residue: f64,
) -> Result<RankinResidual> {
    if !(s > 1.0) {
        return Err(Error::Precondition("need s > 1".into()));
    }
    if x > form.n_max() {
        return Err(Error::Precondition(format!(
            "form is built to {}, asked for {x}",
            form.n_max()
        )));
    }
    let mut lhs = CompensatedSum::default();
    for n in 1..=x {
        let b = form.coeff(n).norm_sqr();
        if b != 0.0 {
            lhs.add(Complex64::new(b * (n as f64).powf(-s), 0.0));
        }
    }
    let lhs = lhs.value().re;
    let log_rhs = rankin_log_euler_product(psi, s, x)?;
    let rhs = log_rhs.exp();
    let lhs_tail = residue * (x as f64).powf(1.0 - s) / (s - 1.0);
    let rhs_tail = exp_integral_e1((s - 1.0) * (x as f64).ln());
    Ok(RankinResidual {
        s,
        x,
        lhs,
        rhs,
        raw: (lhs - rhs).abs(),
        lhs_tail,
        rhs_tail,
        corrected: (lhs + lhs_tail - (log_rhs + rhs_tail).exp()).abs(),
    })
}

/// Logarithm of the truncated Euler product on the right of the Rankin identity.
pub fn rankin_log_euler_product(psi: &HeckeCharacter, s: f64, x: u64) -> Result<f64> {
    if is_norm_induced(psi) {
        return Err(Error::NormInduced);
    }
    let cg = psi.class_group();
    let field = cg.field();
    let chi2 = psi.twisted_square();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = CompensatedSum::default();
    for p in arith::primes_up_to(x) {
        let t = (p as f64).powf(-s);
        let split = field.split_prime(p)?;
        let val = |i: &crate::quadfield::QfIdeal| -> Result<Complex64> {
            Ok(chi2.value_class(ideal_to_class(cg, i)?).to_complex())
        };
        // zeta_F, L(chi2) and 1/zeta(2s) local factors, as logs.
        let mut log = (1.0 - t * t).ln();
        let mut l = Complex64::new(0.0, 0.0);
        match split.kind {
            SplitKind::Split => {
                log -= 2.0 * (1.0 - t).ln();
                for q in &split.primes_above {
                    l -= (one - val(q)? * t).ln();
                }
            }
            SplitKind::Inert => {
                log -= (1.0 - t * t).ln();
                l -= (one - val(&field.rational_ideal(p))? * (t * t)).ln();
            }
            SplitKind::Ramified => {
                log -= (1.0 - t).ln();
                l -= (one - val(&split.primes_above[0])? * t).ln();
                let chi = field.chi(p as i64) as f64;
                log += (1.0 - chi * t).ln() - (1.0 + t).ln();
            }
        }
        acc.add(l + log);
    }
    Ok(acc.value().re)
}

/// Residue at `s = 1` of `sum |a'(n)|^2 n^-s`:
/// `prod_{p | D}(1 + 1/p)^-1 (1 - chi_D(p)/p) Res zeta_F L(1, psi (psi-bar o sigma)) / zeta(2)`.
pub fn rankin_residue(disc: i64, res_zeta_f: f64, l1: f64) -> f64 {
    let corr: f64 = arith::factorize(disc as u64)
        .iter()
        .map(|&(p, _)| {
            let pf = p as f64;
            let chi = arith::kronecker(disc, p) as f64;
            (1.0 - chi / pf) / (1.0 + 1.0 / pf)
        })
        .product();
    corr * res_zeta_f * l1 / (PI * PI / 6.0)
}

/// Coefficients needed to evaluate `L(1, psi (psi-bar o sigma))` at both cutoffs.
pub fn l1_terms_needed(psi: &HeckeCharacter) -> u64 {
    let d = psi.field().disc() as f64 * psi.conductor().norm() as f64;
    (26.0 * d.sqrt() / PI * CUTOFFS.1).ceil() as u64 + 1
}

/// `L(1, psi (psi-bar o sigma))` by the smoothed functional equation at two cutoffs.
pub fn l_value_at_1(psi: &HeckeCharacter) -> Result<LValueReport> {
    if is_norm_induced(psi) {
        return Err(Error::NormInduced);
    }
    let series = hecke_l_coeffs(&psi.twisted_square(), l1_terms_needed(psi))?;
    series.value_report(1.0)
}
