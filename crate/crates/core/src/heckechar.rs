//! Hecke characters of real quadratic fields that factor through the narrow
//! class group, Dirichlet characters, and their Gauss sums.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, CompensatedSum};
use crate::classforms::{ideal_to_class, ClassGroup};
use crate::cyclo::{root_complex, RootOfUnity};
use crate::error::{Error, Result};
use crate::quadfield::{QfIdeal, QuadField};

/// Archimedean type `(eps, eps, nu/i, -nu/i)` with `nu = i * nu_im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfinityType {
    pub epsilon: u8,
    pub nu_im: f64,
}

impl InfinityType {
    pub fn new(epsilon: u8, nu: Complex64) -> Result<Self> {
        if epsilon > 1 {
            return Err(Error::InfinityType(format!("epsilon must be 0 or 1, got {epsilon}")));
        }
        if nu.re != 0.0 || !nu.im.is_finite() {
            return Err(Error::InfinityType(format!("nu must be purely imaginary, got {nu}")));
        }
        Ok(Self {
            epsilon,
            nu_im: nu.im,
        })
    }

    pub fn unramified() -> Self {
        Self {
            epsilon: 0,
            nu_im: 0.0,
        }
    }

    pub fn nu(&self) -> Complex64 {
        Complex64::new(0.0, self.nu_im)
    }
}

/// All characters of the narrow class group as exponent tables: character
/// `i` sends class `c` to `zeta_e^{table[i][c]}` with `e` the group exponent.
///
/// Characters are ordered lexicographically by their values on the
/// generators, so for a cyclic group character `k` sends the generator to `zeta_h^k`.
pub fn class_characters(cg: &ClassGroup) -> Vec<Vec<u32>> {
    let e = cg.exponent();
    let rel = cg.relative_orders();
    let relations = cg.relations();
    let ngen = rel.len();
    let mut assignments: Vec<Vec<u32>> = vec![Vec::new()];
    for i in 0..ngen {
        let mut next = Vec::new();
        for a in &assignments {
            // r_i x_i = sum_j rel_ij x_j (mod e)
            let rhs: u64 = relations[i]
                .iter()
                .zip(a)
                .map(|(c, x)| *c as u64 * *x as u64)
                .sum::<u64>()
                % e as u64;
            for x in 0..e {
                if (rel[i] as u64 * x as u64) % e as u64 == rhs {
                    let mut b = a.clone();
                    b.push(x);
                    next.push(b);
                }
            }
        }
        assignments = next;
    }
    assignments
        .into_iter()
        .map(|a| {
            (0..cg.h_narrow())
                .map(|c| {
                    let s: u64 = cg
                        .coords(c)
                        .iter()
                        .zip(&a)
                        .map(|(k, x)| *k as u64 * *x as u64)
                        .sum();
                    (s % e as u64) as u32
                })
                .collect()
        })
        .collect()
}

/// A Hecke character of conductor `(1)`: a narrow class group character
/// together with a compatible infinity type.
#[derive(Clone, Debug)]
pub struct HeckeCharacter {
    cg: Arc<ClassGroup>,
    index: usize,
    infinity: InfinityType,
    exponent: u32,
    values: Vec<u32>,
    conductor: QfIdeal,
}

pub fn make_class_character(
    cg: &Arc<ClassGroup>,
    index: usize,
    infinity: InfinityType,
) -> Result<HeckeCharacter> {
    let h = cg.h_narrow();
    if index >= h {
        return Err(Error::CharacterIndex { index, order: h });
    }
    if infinity.nu_im != 0.0 {
        return Err(Error::InfinityType(
            "class group characters have nu = 0".into(),
        ));
    }
    let exponent = cg.exponent();
    let values = class_characters(cg).swap_remove(index);
    // A principal ideal with a generator of negative norm gets psi_inf = (-1)^eps.
    let j = RootOfUnity::new(values[cg.j_class()] as i64, exponent);
    let want = RootOfUnity::new(infinity.epsilon as i64, 2).normalized();
    if j.normalized() != want {
        return Err(Error::InfinityType(format!(
            "character {index} has value {} on the class of (sqrt D), which forces epsilon = {}",
            if j.is_one() { "1" } else { "-1" },
            if j.is_one() { 0 } else { 1 }
        )));
    }
    Ok(HeckeCharacter {
        conductor: cg.field().unit_ideal(),
        cg: cg.clone(),
        index,
        infinity,
        exponent,
        values,
    })
}

impl HeckeCharacter {
    pub fn field(&self) -> &QuadField {
        self.cg.field()
    }

    pub fn class_group(&self) -> &Arc<ClassGroup> {
        &self.cg
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn infinity(&self) -> InfinityType {
        self.infinity
    }

    pub fn conductor(&self) -> &QfIdeal {
        &self.conductor
    }

    /// Order of the character.
    pub fn order(&self) -> u32 {
        self.values
            .iter()
            .map(|&k| RootOfUnity::new(k as i64, self.exponent).order())
            .fold(1, num_integer::lcm)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&k| k == 0)
    }

    pub fn value_class(&self, class: usize) -> RootOfUnity {
        RootOfUnity::new(self.values[class] as i64, self.exponent)
    }

    /// Exponents `k` with `psi(class) = zeta_e^k`, and `e`.
    pub fn class_exponents(&self) -> (&[u32], u32) {
        (&self.values, self.exponent)
    }

    pub fn value(&self, ideal: &QfIdeal) -> Result<RootOfUnity> {
        Ok(self.value_class(ideal_to_class(&self.cg, ideal)?))
    }

    pub fn value_complex(&self, ideal: &QfIdeal) -> Result<Complex64> {
        Ok(self.value(ideal)?.to_complex())
    }

    fn with_values(&self, values: Vec<u32>) -> HeckeCharacter {
        let index = class_characters(&self.cg)
            .iter()
            .position(|v| *v == values)
            .expect("character group is closed");
        HeckeCharacter {
            index,
            values,
            ..self.clone()
        }
    }

    /// The character `psi^k` with the same infinity type.
    ///
    /// Only meaningful when `psi^k` is compatible with that type, which is
    /// automatic for the unramified case.
    pub fn pow(&self, k: i64) -> HeckeCharacter {
        let e = self.exponent as i64;
        self.with_values(
            self.values
                .iter()
                .map(|&v| (v as i64 * k).rem_euclid(e) as u32)
                .collect(),
        )
    }

    pub fn conj(&self) -> HeckeCharacter {
        self.pow(-1)
    }

    /// `psi o sigma` on classes.
    pub fn compose_conjugation(&self) -> HeckeCharacter {
        self.with_values(
            (0..self.cg.h_narrow())
                .map(|c| self.values[self.cg.conjugate(c)])
                .collect(),
        )
    }

    /// Pointwise product; infinity types multiply.
    pub fn mul(&self, other: &HeckeCharacter) -> Result<HeckeCharacter> {
        if !Arc::ptr_eq(&self.cg, &other.cg) && self.cg.field().disc() != other.cg.field().disc() {
            return Err(Error::FieldMismatch(self.field().disc(), other.field().disc()));
        }
        let e = self.exponent;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % e)
            .collect();
        Ok(HeckeCharacter {
            infinity: InfinityType {
                epsilon: (self.infinity.epsilon + other.infinity.epsilon) % 2,
                nu_im: self.infinity.nu_im + other.infinity.nu_im,
            },
            ..self.with_values(values)
        })
    }

    /// The character `psi (psi-bar o sigma)`.
    pub fn twisted_square(&self) -> HeckeCharacter {
        self.mul(&self.compose_conjugation().conj())
            .expect("same class group")
    }

    /// Values of `psi (psi-bar o sigma)` on classes.
    pub fn twisted_square_values(&self) -> Vec<RootOfUnity> {
        (0..self.cg.h_narrow())
            .map(|c| {
                let a = self.value_class(c);
                let b = self.value_class(self.cg.conjugate(c)).conj();
                a.mul(b)
            })
            .collect()
    }
}

/// Whether `psi = psi o sigma`, checked on generators of the class group.
pub fn is_norm_induced(psi: &HeckeCharacter) -> bool {
    let cg = psi.class_group();
    cg.generators()
        .iter()
        .all(|&g| psi.values[g] == psi.values[cg.conjugate(g)])
}

/// A Dirichlet character given by its values on `Z/mZ` (`None` off the units).
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Option<RootOfUnity>>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus)
            .map(|x| (num_integer::gcd(x, modulus) == 1).then(RootOfUnity::one))
            .collect();
        Self { modulus, values }
    }

    /// The character mod the prime `p` sending the least primitive root to `zeta_{p-1}^j`.
    pub fn from_prime(p: u64, j: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Ok(Self::trivial(2));
        }
        let g = arith::primitive_root(p);
        let mut values = vec![None; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            values[x as usize] = Some(RootOfUnity::new((j * k) as i64, (p - 1) as u32).normalized());
            x = x * g % p;
        }
        Ok(Self { modulus: p, values })
    }

    /// `n -> (d/n)` as a character mod `|d|`.
    pub fn kronecker(d: i64) -> Self {
        let m = d.unsigned_abs();
        let values = (0..m)
            .map(|x| match arith::kronecker(d, x) {
                0 => None,
                1 => Some(RootOfUnity::one()),
                _ => Some(RootOfUnity::new(1, 2)),
            })
            .collect();
        Self { modulus: m, values }
    }

    pub fn from_values(modulus: u64, values: Vec<Option<RootOfUnity>>) -> Result<Self> {
        if values.len() as u64 != modulus {
            return Err(Error::Precondition("value table length must equal the modulus".into()));
        }
        let chi = Self { modulus, values };
        for x in 0..modulus {
            let unit = num_integer::gcd(x, modulus) == 1;
            if unit != chi.values[x as usize].is_some() {
                return Err(Error::Precondition(format!("value at {x} inconsistent with gcd")));
            }
            for y in 0..modulus {
                if let (Some(a), Some(b)) = (chi.values[x as usize], chi.values[y as usize]) {
                    if chi.values[(x * y % modulus) as usize] != Some(a.mul(b)) {
                        return Err(Error::Precondition("value table is not multiplicative".into()));
                    }
                }
            }
        }
        Ok(chi)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value_complex(&self, n: i64) -> Complex64 {
        self.value(n)
            .map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
    }

    /// `delta` with `chi(-1) = (-1)^delta`.
    pub fn parity(&self) -> u8 {
        match self.value(-1) {
            Some(r) if !r.is_one() => 1,
            _ => 0,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            modulus: self.modulus,
            values: self.values.iter().map(|v| v.map(RootOfUnity::conj)).collect(),
        }
    }

    /// Pointwise product, as a character modulo the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = num_integer::lcm(self.modulus, other.modulus);
        let values = (0..m as i64)
            .map(|x| match (self.value(x), other.value(x)) {
                (Some(a), Some(b)) => Some(a.mul(b)),
                _ => None,
            })
            .collect();
        Self { modulus: m, values }
    }

    /// Not induced from any proper divisor of the modulus.
    pub fn is_primitive(&self) -> bool {
        let m = self.modulus;
        if m == 1 {
            return true;
        }
        // Induced from m/p for some prime p | m iff trivial on units = 1 mod m/p.
        arith::factorize(m).iter().all(|&(p, _)| {
            let d = m / p;
            (0..m).any(|x| {
                x % d == 1 % d
                    && self.values[x as usize].is_some_and(|v| !v.is_one())
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussSumResult {
    pub value: Complex64Ser,
    pub modulus_norm: u64,
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex64Ser {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex64Ser {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Complex64Ser> for Complex64 {
    fn from(z: Complex64Ser) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl GaussSumResult {
    pub fn complex(&self) -> Complex64 {
        self.value.into()
    }
}

/// `sum_x chi(x) e(x/m)`.
pub fn gauss_sum_rational(chi: &DirichletCharacter) -> GaussSumResult {
    let m = chi.modulus();
    let mut acc = CompensatedSum::default();
    for x in 0..m {
        if let Some(v) = chi.value(x as i64) {
            acc.add(v.to_complex() * root_complex(x, m));
        }
    }
    GaussSumResult {
        value: acc.value().into(),
        modulus_norm: m,
    }
}

/// Gauss sum over `O_F / m O_F` with base point `a = m sqrt(D)`.
///
/// `chi_fin(u, v)` is the finite part at `u + v w` (`None` off the units) and
/// `epsilon` the sign exponent of the infinity type. Since
/// `Tr((u + v w)/(m sqrt D)) = v/m`, the phase only depends on `v`.
pub fn gauss_sum_quadratic_field<F>(
    field: &QuadField,
    m: u64,
    epsilon: u8,
    chi_fin: F,
) -> Result<GaussSumResult>
where
    F: Fn(i64, i64) -> Option<Complex64>,
{
    if m == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let _ = field;
    let mut acc = CompensatedSum::default();
    for v in 0..m {
        let phase = root_complex(v, m);
        for u in 0..m {
            if let Some(val) = chi_fin(u as i64, v as i64) {
                acc.add(val * phase);
            }
        }
    }
    // psi_inf(m sqrt D) = sgn(m sqrt D)^eps sgn(-m sqrt D)^eps
    let sign = if epsilon == 1 { -1.0 } else { 1.0 };
    Ok(GaussSumResult {
        value: (acc.value() * sign).into(),
        modulus_norm: m * m,
    })
}

/// The character `sigma o N` on `O_F / p O_F`.
pub fn norm_composed<'a>(
    field: &'a QuadField,
    sigma: &'a DirichletCharacter,
) -> impl Fn(i64, i64) -> Option<Complex64> + 'a {
    move |u, v| {
        let n = field.element_norm(u, v);
        let r = n.rem_euclid(sigma.modulus() as i128) as i64;
        sigma.value(r).map(RootOfUnity::to_complex)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussRelation {
    pub p: u64,
    pub tau_f: Complex64Ser,
    pub product_form: Complex64Ser,
    pub square_form: Complex64Ser,
    pub residual: f64,
}

/// Both sides of `tau_F(sigma o N) = D^{-1/2} tau(sigma) tau(sigma chi_D) = sigma(D) chi_D(p) tau(sigma)^2`
/// for an inert prime `p` and a primitive `sigma` mod `p`, by direct summation.
pub fn check_gauss_relation(
    field: &QuadField,
    p: u64,
    sigma: &DirichletCharacter,
) -> Result<GaussRelation> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if sigma.modulus() != p {
        return Err(Error::Precondition(format!("sigma must have modulus {p}")));
    }
    if field.chi(p as i64) != -1 {
        return Err(Error::Precondition(format!(
            "{p} is not inert in the field of discriminant {}",
            field.disc()
        )));
    }
    if !sigma.is_primitive() || p == 2 {
        return Err(Error::Precondition(format!("sigma is not primitive mod {p}")));
    }
    let delta = sigma.parity();
    let tau_f = gauss_sum_quadratic_field(field, p, delta, norm_composed(field, sigma))?.complex();
    let tau_sigma = gauss_sum_rational(sigma).complex();
    let twisted = sigma.mul(&DirichletCharacter::kronecker(field.disc()));
    let tau_twisted = gauss_sum_rational(&twisted).complex();
    let product_form = tau_sigma * tau_twisted / field.sqrt_disc();
    let square_form =
        sigma.value_complex(field.disc()) * field.chi(p as i64) as f64 * tau_sigma * tau_sigma;
    let residual = (tau_f - square_form).norm().max((tau_f - product_form).norm());
    Ok(GaussRelation {
        p,
        tau_f: tau_f.into(),
        product_form: product_form.into(),
        square_form: square_form.into(),
        residual,
    })
}

/// `|tau(chi1 chi2) - chi1(q) chi2(p) tau(chi1) tau(chi2)|` for primitive
/// characters of coprime moduli `p`, `q`.
pub fn twisting_identity_residual(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
) -> Result<f64> {
    let (p, q) = (chi1.modulus(), chi2.modulus());
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::Precondition("moduli must be coprime".into()));
    }
    if !chi1.is_primitive() || !chi2.is_primitive() {
        return Err(Error::Precondition("characters must be primitive".into()));
    }
    let lhs = gauss_sum_rational(&chi1.mul(chi2)).complex();
    let rhs = chi1.value_complex(q as i64)
        * chi2.value_complex(p as i64)
        * gauss_sum_rational(chi1).complex()
        * gauss_sum_rational(chi2).complex();
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classforms::build_class_group;
    use crate::cyclo::Cyclo;
    use crate::quadfield::ideal_mul;

    fn cg(d: i64) -> Arc<ClassGroup> {
        Arc::new(build_class_group(&QuadField::new(d).unwrap()).unwrap())
    }

    #[test]
    fn trivial_character() {
        let g = cg(229);
        let psi = make_class_character(&g, 0, InfinityType::unramified()).unwrap();
        assert!(psi.is_trivial());
        assert!(is_norm_induced(&psi));
        for id in g.field().enumerate_ideals(50).unwrap().all() {
            assert!(psi.value(id).unwrap().is_one());
        }
    }

    #[test]
    fn index_and_type_checks() {
        let g = cg(229);
        assert!(matches!(
            make_class_character(&g, 3, InfinityType::unramified()),
            Err(Error::CharacterIndex { index: 3, order: 3 })
        ));
        let odd = InfinityType::new(1, Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(make_class_character(&g, 1, odd), Err(Error::InfinityType(_))));
        let nu = InfinityType::new(0, Complex64::new(0.0, 2.0)).unwrap();
        assert!(make_class_character(&g, 1, nu).is_err());
        assert!(InfinityType::new(2, Complex64::new(0.0, 0.0)).is_err());
        assert!(InfinityType::new(0, Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn narrow_characters_need_odd_type_when_j_nontrivial() {
        // Q(sqrt 3): narrow group of order 2 generated by J.
        let g = cg(12);
        assert!(make_class_character(&g, 1, InfinityType::unramified()).is_err());
        let odd = InfinityType::new(1, Complex64::new(0.0, 0.0)).unwrap();
        assert!(make_class_character(&g, 1, odd).is_ok());
    }

    #[test]
    fn d229_character_on_p3() {
        let g = cg(229);
        let f = g.field().clone();
        let psi = make_class_character(&g, 1, InfinityType::unramified()).unwrap();
        assert!(!is_norm_induced(&psi));
        let s3 = f.split_prime(3).unwrap();
        let v = psi.value(&s3.primes_above[0]).unwrap();
        assert_eq!(v.order(), 3);
        let w = psi.value(&s3.primes_above[1]).unwrap();
        let sum = &v.to_cyclo() + &w.to_cyclo();
        assert_eq!(sum.to_integer(), Some(-1));
        assert_eq!(psi.order(), 3);
    }

    #[test]
    fn norm_induced_detection() {
        for d in [229i64, 445, 401] {
            let g = cg(d);
            for i in 0..g.h_narrow() {
                let psi = make_class_character(&g, i, InfinityType::unramified()).unwrap();
                // Narrow conjugation is inversion, so psi o sigma = psi iff psi^2 = 1.
                assert_eq!(is_norm_induced(&psi), psi.order() <= 2, "D={d} i={i}");
            }
        }
        let g40 = cg(40);
        assert_eq!(g40.h_narrow(), 2);
        let psi = make_class_character(&g40, 1, InfinityType::unramified()).unwrap();
        assert!(is_norm_induced(&psi));
        assert_eq!(psi.order(), 2);
    }

    #[test]
    fn multiplicative_on_random_ideal_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in [229i64, 445, 401] {
            let g = cg(d);
            let ideals = g.field().enumerate_ideals(400).unwrap();
            let all = ideals.all();
            for i in 0..g.h_narrow() {
                let psi = make_class_character(&g, i, InfinityType::unramified()).unwrap();
                for _ in 0..500 / g.h_narrow() + 1 {
                    let a = &all[rng.gen_range(0..all.len())];
                    let b = &all[rng.gen_range(0..all.len())];
                    let ab = ideal_mul(a, b).unwrap();
                    assert_eq!(
                        psi.value(&ab).unwrap(),
                        psi.value(a).unwrap().mul(psi.value(b).unwrap())
                    );
                    let conj = psi.value(&a.conjugate()).unwrap();
                    assert!(psi.value(a).unwrap().mul(conj).is_one());
                }
            }
        }
    }

    #[test]
    fn orthogonality_is_exact() {
        for d in [229i64, 445, 401, 4_641] {
            let g = cg(d);
            let chars = class_characters(&g);
            assert_eq!(chars.len(), g.h_narrow());
            let e = g.exponent();
            for (i, c) in chars.iter().enumerate() {
                let mut s = Cyclo::zero(e);
                for &k in c {
                    s.add_root(k, 1);
                }
                let expected = if i == 0 { g.h_narrow() as i64 } else { 0 };
                assert_eq!(s.to_integer(), Some(expected), "D={d} char {i}");
            }
            // Distinct characters.
            for i in 0..chars.len() {
                for j in 0..i {
                    assert_ne!(chars[i], chars[j]);
                }
            }
        }
    }

    #[test]
    fn cyclic_indexing() {
        let g = cg(401);
        let gen = g.generators()[0];
        for k in 0..5 {
            let psi = make_class_character(&g, k, InfinityType::unramified()).unwrap();
            assert_eq!(psi.value_class(gen), RootOfUnity::new(k as i64, 5));
            assert_eq!(psi.conj().index(), (5 - k) % 5);
            assert_eq!(psi.pow(2).index(), (2 * k) % 5);
            assert_eq!(psi.compose_conjugation().index(), psi.conj().index());
        }
    }

    #[test]
    fn rational_gauss_sums() {
        let chi5 = DirichletCharacter::kronecker(5);
        let t = gauss_sum_rational(&chi5).complex();
        assert!((t - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-13);
        let t1 = gauss_sum_rational(&DirichletCharacter::trivial(1)).complex();
        assert!((t1 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for p in arith::primes_up_to(100).into_iter().skip(1) {
            for j in 1..(p - 1).min(4) {
                let chi = DirichletCharacter::from_prime(p, j).unwrap();
                assert!(chi.is_primitive());
                let t = gauss_sum_rational(&chi);
                assert!((t.complex().norm_sqr() - p as f64).abs() < 1e-9, "p={p} j={j}");
            }
            assert!(!DirichletCharacter::from_prime(p, 0).unwrap().is_primitive());
        }
    }

    #[test]
    fn kronecker_gauss_sum_sign() {
        // tau(chi_D) = sqrt(D) for D > 0 fundamental.
        for d in [5i64, 8, 12, 13, 229, 445] {
            let t = gauss_sum_rational(&DirichletCharacter::kronecker(d)).complex();
            assert!((t - Complex64::new((d as f64).sqrt(), 0.0)).norm() < 1e-10, "D={d}");
        }
    }

    #[test]
    fn primitivity_of_composite_moduli() {
        let a = DirichletCharacter::from_prime(3, 1).unwrap();
        let b = DirichletCharacter::from_prime(5, 1).unwrap();
        assert!(a.mul(&b).is_primitive());
        assert!(!a.mul(&DirichletCharacter::trivial(5)).is_primitive());
        assert!(DirichletCharacter::kronecker(12).is_primitive());
        assert!(DirichletCharacter::kronecker(229).is_primitive());
    }

    #[test]
    fn quadratic_field_gauss_sums() {
        let f = QuadField::new(229).unwrap();
        let unit = gauss_sum_quadratic_field(&f, 1, 0, |_, _| Some(Complex64::new(1.0, 0.0))).unwrap();
        assert!((unit.complex() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for p in [2u64, 5, 7, 13] {
            if f.chi(p as i64) != -1 || p == 2 {
                continue;
            }
            for j in 1..p - 1 {
                let sigma = DirichletCharacter::from_prime(p, j).unwrap();
                let t = gauss_sum_quadratic_field(&f, p, sigma.parity(), norm_composed(&f, &sigma)).unwrap();
                assert!((t.complex().norm_sqr() - (p * p) as f64).abs() < 1e-8, "p={p} j={j}");
            }
        }
    }

    #[test]
    fn gauss_relation_inert_primes() {
        let f = QuadField::new(229).unwrap();
        let mut checked = 0;
        for p in arith::primes_up_to(50).into_iter().skip(1) {
            if f.chi(p as i64) != -1 {
                continue;
            }
            for j in 1..p - 1 {
                let sigma = DirichletCharacter::from_prime(p, j).unwrap();
                let r = check_gauss_relation(&f, p, &sigma).unwrap();
                assert!(r.residual < 1e-9, "p={p} j={j} residual {}", r.residual);
            }
            checked += 1;
        }
        assert!(checked >= 3);
        assert!(check_gauss_relation(&f, 13, &DirichletCharacter::trivial(13)).is_err());
        assert!(check_gauss_relation(&f, 2, &DirichletCharacter::trivial(2)).is_err());
        assert!(check_gauss_relation(&f, 3, &DirichletCharacter::from_prime(3, 1).unwrap()).is_err());
    }

    #[test]
    fn twisting_identity() {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29];
        for (i, &p) in primes.iter().enumerate() {
            for &q in &primes[i + 1..] {
                let a = DirichletCharacter::from_prime(p, 1).unwrap();
                let b = DirichletCharacter::from_prime(q, 2.min(q - 2)).unwrap();
                let r = twisting_identity_residual(&a, &b).unwrap();
                assert!(r < 1e-9, "p={p} q={q} r={r}");
            }
        }
    }

    #[test]
    fn dirichlet_table_validation() {
        let chi = DirichletCharacter::from_prime(7, 2).unwrap();
        let ok = DirichletCharacter::from_values(7, chi.values.clone());
        assert!(ok.is_ok());
        let mut bad = chi.values.clone();
        bad[3] = Some(RootOfUnity::new(1, 7));
        assert!(DirichletCharacter::from_values(7, bad).is_err());
    }
}
