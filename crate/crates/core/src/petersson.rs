//! The Petersson norm `<Theta, Theta>` of a theta lift as
//! `C1 C2 C3 Res zeta_F(1) L(1, psi (psi-bar o sigma))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith;
use crate::classforms::ClassGroup;
use crate::error::{Error, Result};
use crate::heckechar::{is_norm_induced, HeckeCharacter};
use crate::lseries::{l_value_at_1, LValueReport};
use crate::quadfield::{QuadField, SplitKind};
use crate::special::ln_gamma;

/// Published values of the norm for the order-3, order-4 lifts at 229, 445.
pub const REFERENCE_229: f64 = 38.3345331336184;
pub const REFERENCE_445: f64 = 81.0223272397348;
/// `total(psi) total(psi^2)` for a character of order 5 at 401.
pub const REFERENCE_401_PRODUCT: f64 = 12489.3392834563;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeterssonReport {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub res_zeta_f: f64,
    pub l_value: f64,
    pub total: f64,
    pub paper_value: Option<f64>,
    pub rel_err: Option<f64>,
    #[serde(skip)]
    pub closed_form_reference: Option<f64>,
    #[serde(skip)]
    pub l_report: Option<LValueReport>,
}

impl PeterssonReport {
    /// Recomputes the product of the factors.
    pub fn assembled(&self) -> f64 {
        self.c1 * self.c2 * self.c3 * self.res_zeta_f * self.l_value
    }

    pub fn with_reference(mut self, value: f64) -> Self {
        self.paper_value = Some(value);
        self.rel_err = Some(((self.total - value) / value).abs());
        self
    }
}

/// `(D N)^2 / phi(D N)`; `C1` is this over `4 pi`.
pub fn constant_c1_rational(d: u64, nf: u64) -> Result<Ratio<u128>> {
    let m = d
        .checked_mul(nf)
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::Precondition("need D N(f) >= 1".into()))?;
    let m = m as u128;
    Ok(Ratio::new(m * m, arith::euler_phi(m as u64) as u128))
}

/// `(D N)^2 / (4 pi phi(D N))`.
pub fn constant_c1(d: u64, nf: u64) -> Result<f64> {
    Ok(constant_c1_rational(d, nf)?.to_f64().unwrap() / (4.0 * PI))
}

/// `Gamma((1 + 2 nu)/2) Gamma((1 - 2 nu)/2)` for `nu = i nu_im`.
pub fn constant_c2(nu_im: f64) -> f64 {
    let a = Complex64::new(0.5, nu_im);
    let b = Complex64::new(0.5, -nu_im);
    (ln_gamma(a) + ln_gamma(b)).exp().re
}

/// `prod (1 - 1/N P)^-1` over split `P | f` with `N P | N f`, times
/// `prod_{p | D N f} (1 - 1/p)(1 - chi_D(p)/p)`, exactly.
pub fn constant_c3_rational(field: &QuadField, nf: u64) -> Result<Ratio<i128>> {
    let d = field.disc() as u64;
    let one = Ratio::from_integer(1i128);
    let mut c = one;
    for (p, _) in arith::factorize(nf) {
        if field.split_prime(p)?.kind == SplitKind::Split {
            c /= one - Ratio::new(1, p as i128);
        }
    }
    for (p, _) in arith::factorize(d * nf) {
        let chi = field.chi(p as i64) as i128;
        c *= (one - Ratio::new(1, p as i128)) * (one - Ratio::new(chi, p as i128));
    }
    Ok(c)
}

pub fn constant_c3(field: &QuadField, nf: u64) -> Result<f64> {
    Ok(constant_c3_rational(field, nf)?.to_f64().unwrap())
}

/// `2 h R / sqrt D`, the residue at 1 of the Dedekind zeta function of a real
/// quadratic field (two real places, two roots of unity).
pub fn residue_zeta_f(cg: &ClassGroup) -> Result<f64> {
    let r = cg.unit().regulator;
    if !(r > 0.0) {
        return Err(Error::Precondition("regulator must be positive".into()));
    }
    Ok(2.0 * cg.h_wide() as f64 * r / cg.field().sqrt_disc())
}

/// The published value for this character, when there is one.
pub fn reference_value(psi: &HeckeCharacter) -> Option<f64> {
    match (psi.field().disc(), psi.order(), psi.infinity().epsilon) {
        (229, 3, 0) => Some(REFERENCE_229),
        (445, 4, 0) => Some(REFERENCE_445),
        _ => None,
    }
}

/// Assembles `C1 C2 C3 Res zeta_F L(1, psi (psi-bar o sigma))`.
pub fn petersson_norm(psi: &HeckeCharacter) -> Result<PeterssonReport> {
    if is_norm_induced(psi) {
        return Err(Error::NormInduced);
    }
    let cg = psi.class_group();
    let field = cg.field();
    let nf = psi.conductor().norm();
    let d = field.disc() as u64;
    let c1 = constant_c1(d, nf)?;
    let c2 = constant_c2(psi.infinity().nu_im);
    let c3 = constant_c3(field, nf)?;
    let res_zeta_f = residue_zeta_f(cg)?;
    let l = l_value_at_1(psi)?;
    let total = c1 * c2 * c3 * res_zeta_f * l.value;
    let report = PeterssonReport {
        c1,
        c2,
        c3,
        res_zeta_f,
        l_value: l.value,
        total,
        paper_value: None,
        rel_err: None,
        closed_form_reference: None,
        l_report: Some(l),
    };
    Ok(match reference_value(psi) {
        Some(v) => report.with_reference(v),
        None => report,
    })
}
