//! Exact arithmetic in the cyclotomic rings `Z[zeta_m]`.
//!
//! Elements are kept as coefficient vectors over the powers `zeta^0 .. zeta^(m-1)`,
//! which is not a basis; equality and zero tests reduce modulo the cyclotomic
//! polynomial first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// `zeta_m^k`, with `k` reduced modulo `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct RootOfUnity {
    pub k: u32,
    pub m: u32,
}

impl RootOfUnity {
    /// `zeta_m^k` in lowest terms, so equal roots compare equal.
    pub fn new(k: i64, m: u32) -> Self {
        assert!(m > 0);
        Self {
            k: k.rem_euclid(m as i64) as u32,
            m,
        }
        .normalized()
    }

    pub fn one() -> Self {
        Self { k: 0, m: 1 }
    }

    pub fn normalized(self) -> Self {
        let g = num_integer::gcd(self.k, self.m).max(1);
        if self.k == 0 {
            return Self { k: 0, m: 1 };
        }
        Self {
            k: self.k / g,
            m: self.m / g,
        }
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    pub fn mul(self, other: Self) -> Self {
        let m = num_integer::lcm(self.m, other.m);
        let k = self.k as u64 * (m / self.m) as u64 + other.k as u64 * (m / other.m) as u64;
        Self::new(k as i64, m).normalized()
    }

    pub fn pow(self, e: i64) -> Self {
        Self::new(self.k as i64 * e, self.m).normalized()
    }

    pub fn conj(self) -> Self {
        Self::new(-(self.k as i64), self.m).normalized()
    }

    /// Smallest `r >= 1` with `self^r = 1`.
    pub fn order(self) -> u32 {
        self.normalized().m
    }

    pub fn to_complex(self) -> Complex64 {
        root_complex(self.k as u64, self.m as u64)
    }

    pub fn to_cyclo(self) -> Cyclo {
        let mut c = Cyclo::zero(self.m);
        c.c[self.k as usize] = 1;
        c
    }
}

/// `exp(2 pi i k / m)` with exact values at the quarter turns.
pub fn root_complex(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * k == m {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * k == m {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * m {
        return Complex64::new(0.0, -1.0);
    }
    let theta = std::f64::consts::TAU * (k as f64) / (m as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// `Phi_m` as a coefficient vector, constant term first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let q = cyclotomic_poly(d);
            poly = poly_div_exact(&poly, &q);
        }
    }
    let out = Arc::new(poly);
    cache.lock().unwrap().insert(m, out.clone());
    out
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let coef = rem[i + dd];
        quot[i] = coef;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= coef * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element `sum_j c_j zeta_m^j` of `Z[zeta_m]`.
#[derive(Clone)]
pub struct Cyclo {
    m: u32,
    c: Vec<i64>,
}

impl Cyclo {
    pub fn zero(m: u32) -> Self {
        assert!(m > 0);
        Self {
            m,
            c: vec![0; m as usize],
        }
    }

    pub fn from_int(m: u32, v: i64) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = v;
        z
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// Builds from raw power coefficients (length `m`).
    pub fn from_coeffs(c: Vec<i64>) -> Self {
        let m = c.len() as u32;
        assert!(m > 0);
        Self { m, c }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    /// Adds `v * zeta_m^k` in place.
    pub fn add_root(&mut self, k: u32, v: i64) {
        self.c[(k % self.m) as usize] += v;
    }

    /// Re-expresses in `Z[zeta_n]` for a multiple `n` of `m`.
    pub fn lift(&self, n: u32) -> Self {
        assert!(n % self.m == 0, "{} does not divide {n}", self.m);
        let step = (n / self.m) as usize;
        let mut out = Self::zero(n);
        for (j, &v) in self.c.iter().enumerate() {
            out.c[j * step] += v;
        }
        out
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let n = num_integer::lcm(self.m, other.m);
        (self.lift(n), other.lift(n))
    }

    /// Complex conjugate, `zeta^j -> zeta^(-j)`.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut out = Self::zero(self.m);
        for (j, &v) in self.c.iter().enumerate() {
            out.c[(m - j) % m] += v;
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        Self {
            m: self.m,
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn abs2(&self) -> Self {
        self * &self.conj()
    }

    /// Coefficients in the power basis `1, zeta, .., zeta^(phi(m)-1)`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        for i in (deg..r.len()).rev() {
            let coef = r[i];
            if coef != 0 {
                for (j, &pj) in phi.iter().enumerate() {
                    r[i - deg + j] -= coef * pj;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&v| v == 0)
    }

    /// The element as a rational integer, if it is one.
    pub fn to_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r[1..].iter().all(|&v| v == 0) {
            Some(r[0])
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in self.c.iter().enumerate() {
            if v != 0 {
                acc += root_complex(j as u64, self.m as u64) * v as f64;
            }
        }
        acc
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        (&a - &b).is_zero()
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo(m={}, {:?})", self.m, self.reduced())
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x += y;
        }
        a
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x -= y;
        }
        a
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        self.scale(-1)
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        let (a, b) = self.common(rhs);
        let m = a.m as usize;
        let mut out = Cyclo::zero(a.m);
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    out.c[(i + j) % m] += x * y;
                }
            }
        }
        out
    }
}
