//! Exact arithmetic in a real quadratic field `Q(sqrt(D))`.
//!
//! Integral ideals are stored in Hermite normal form as `k * (aZ + (b + w)Z)`,
//! where `w` is the standard generator of the ring of integers:
//! `w = (1 + sqrt(D))/2` when `D = 1 mod 4` and `w = sqrt(D)/2` when `D = 0 mod 4`.
//! With that representation the norm of an ideal is `k^2 a` and enumeration
//! by norm never needs anything beyond 128-bit integers.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// Default cap on the number of ideals an enumeration may produce.
pub const DEFAULT_IDEAL_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OmegaKind {
    /// `D = 1 mod 4`, `w = (1 + sqrt(D))/2`.
    HalfOnePlusRoot,
    /// `D = 0 mod 4`, `w = sqrt(D)/2`.
    HalfRoot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadField {
    disc: i64,
    omega_kind: OmegaKind,
    sqrt_disc: f64,
}

impl QuadField {
    /// Builds the field of fundamental discriminant `disc > 1`.
    ///
    /// Non-fundamental discriminants are rejected rather than reduced.
    pub fn new(disc: i64) -> Result<Self> {
        if disc <= 1 || arith::is_square(disc as u128) {
            return Err(Error::NotFundamental(disc));
        }
        let omega_kind = match disc.rem_euclid(4) {
            1 => {
                if !arith::is_squarefree(disc as u64) {
                    return Err(Error::NotFundamental(disc));
                }
                OmegaKind::HalfOnePlusRoot
            }
            0 => {
                let m = disc / 4;
                if !(m % 4 == 2 || m % 4 == 3) || !arith::is_squarefree(m as u64) {
                    return Err(Error::NotFundamental(disc));
                }
                OmegaKind::HalfRoot
            }
            _ => return Err(Error::NotFundamental(disc)),
        };
        Ok(Self {
            disc,
            omega_kind,
            sqrt_disc: (disc as f64).sqrt(),
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega_kind
    }

    pub fn sqrt_disc(&self) -> f64 {
        self.sqrt_disc
    }

    /// `Tr(w)`: 1 or 0.
    pub fn omega_trace(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::HalfOnePlusRoot => 1,
            OmegaKind::HalfRoot => 0,
        }
    }

    /// `N(w)`: `(1 - D)/4` or `-D/4`.
    pub fn omega_norm(&self) -> i64 {
        let t = self.omega_trace();
        (t * t - self.disc) / 4
    }

    /// Norm of `x + y w`.
    pub fn element_norm(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        x * x + (self.omega_trace() as i128) * x * y + (self.omega_norm() as i128) * y * y
    }

    /// The two real embeddings of `x + y w`, the first with `sqrt(D) > 0`.
    pub fn embed(&self, x: f64, y: f64) -> (f64, f64) {
        let t = self.omega_trace() as f64;
        let half_root = 0.5 * self.sqrt_disc;
        (
            x + y * (0.5 * t + half_root),
            x + y * (0.5 * t - half_root),
        )
    }

    /// The Kronecker symbol `(D/n)`, extended to negative `n` by `(D/-1) = 1`.
    pub fn chi(&self, n: i64) -> i8 {
        arith::kronecker(self.disc, n.unsigned_abs())
    }

    pub fn unit_ideal(&self) -> QfIdeal {
        QfIdeal {
            disc: self.disc,
            k: 1,
            a: 1,
            b: 0,
        }
    }

    /// The ideal `m O_F` for a positive rational integer `m`.
    pub fn rational_ideal(&self, m: u64) -> QfIdeal {
        QfIdeal {
            disc: self.disc,
            k: m,
            a: 1,
            b: 0,
        }
    }

    /// Builds `k (aZ + (b + w)Z)`, checking that the lattice is an ideal.
    pub fn ideal(&self, k: u64, a: u64, b: u64) -> Result<QfIdeal> {
        if k == 0 || a == 0 || b >= a {
            return Err(Error::Precondition(format!(
                "({k}, {a}, {b}) is not a normalized ideal triple"
            )));
        }
        let b_i = b as i128;
        let t = self.omega_trace() as i128;
        let n = self.omega_norm() as i128;
        if (b_i * b_i + t * b_i + n).rem_euclid(a as i128) != 0 {
            return Err(Error::Precondition(format!(
                "aZ + (b + w)Z with a = {a}, b = {b} is not an O_F-module"
            )));
        }
        Ok(QfIdeal {
            disc: self.disc,
            k,
            a,
            b,
        })
    }

    /// Decomposition of the rational prime `p` in `O_F`.
    pub fn split_prime(&self, p: u64) -> Result<PrimeSplit> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let chi = self.chi(p as i64);
        let kind = match chi {
            1 => SplitKind::Split,
            -1 => SplitKind::Inert,
            _ => SplitKind::Ramified,
        };
        let roots = self.omega_poly_roots(p);
        let expected = match kind {
            SplitKind::Split => 2,
            SplitKind::Inert => 0,
            SplitKind::Ramified => 1,
        };
        if roots.len() != expected {
            return Err(Error::Internal(format!(
                "p = {p}: chi_D(p) = {chi} but found {} roots of the minimal polynomial of w",
                roots.len()
            )));
        }
        let primes_above = roots
            .into_iter()
            .map(|b| QfIdeal {
                disc: self.disc,
                k: 1,
                a: p,
                b,
            })
            .collect();
        Ok(PrimeSplit {
            p,
            kind,
            primes_above,
        })
    }

    /// Roots of `x^2 + Tr(w) x + N(w)` modulo the prime `p`, sorted.
    fn omega_poly_roots(&self, p: u64) -> Vec<u64> {
        let t = self.omega_trace();
        let n = self.omega_norm();
        if p == 2 {
            return (0..2u64)
                .filter(|&x| {
                    let x = x as i64;
                    (x * x + t * x + n).rem_euclid(2) == 0
                })
                .collect();
        }
        // x = (-t +- r)/2 with r^2 = D mod p.
        let d = self.disc.rem_euclid(p as i64) as u64;
        let Some(r) = arith::sqrt_mod_prime(d, p) else {
            return Vec::new();
        };
        let inv2 = (p + 1) / 2;
        let pi = p as i128;
        let root = |s: i128| -> u64 {
            ((((-(t as i128) + s).rem_euclid(pi)) * inv2 as i128) % pi) as u64
        };
        let mut out = vec![root(r as i128), root(-(r as i128))];
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of integral ideals of norm `n`, via `sum_{d | n} chi_D(d)`.
    pub fn ideal_count(&self, n: u64) -> u64 {
        let mut total: i64 = 0;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                total += self.chi(d as i64) as i64;
                let e = n / d;
                if e != d {
                    total += self.chi(e as i64) as i64;
                }
            }
            d += 1;
        }
        total as u64
    }

    /// Number of integral ideals of norm at most `x`, `sum_{d <= x} chi_D(d) floor(x/d)`.
    pub fn ideal_count_up_to(&self, x: u64) -> u64 {
        let total: i64 = (1..=x)
            .map(|d| self.chi(d as i64) as i64 * (x / d) as i64)
            .sum();
        total as u64
    }

    pub fn enumerate_ideals(&self, max_norm: u64) -> Result<IdealTable> {
        self.enumerate_ideals_capped(max_norm, DEFAULT_IDEAL_CAP)
    }

    /// All integral ideals of norm at most `max_norm`, grouped by norm and
    /// ordered lexicographically in `(a, b, k)` within each norm.
    pub fn enumerate_ideals_capped(&self, max_norm: u64, cap: u64) -> Result<IdealTable> {
        if max_norm == 0 {
            return Err(Error::Precondition("max_norm must be at least 1".into()));
        }
        let needed = self.ideal_count_up_to(max_norm);
        if needed > cap {
            return Err(Error::ResourceCap {
                what: "ideal enumeration",
                needed,
                cap,
            });
        }

        let mut local: Vec<(u64, Vec<(u64, QfIdeal)>)> = Vec::new();
        for p in arith::primes_up_to(max_norm) {
            let split = self.split_prime(p)?;
            local.push((p, self.prime_power_ideals(&split, max_norm)?));
        }

        let mut found: Vec<(u64, QfIdeal)> = Vec::with_capacity(needed as usize);
        let mut stack = vec![(0usize, 1u64, self.unit_ideal())];
        while let Some((start, norm, ideal)) = stack.pop() {
            found.push((norm, ideal));
            for (j, (p, options)) in local.iter().enumerate().skip(start) {
                // Every local factor at this or a later prime has norm at least p.
                if norm.saturating_mul(*p) > max_norm {
                    break;
                }
                for (local_norm, factor) in options {
                    let total = norm.saturating_mul(*local_norm);
                    if total > max_norm {
                        break;
                    }
                    stack.push((j + 1, total, ideal_mul(&ideal, factor)?));
                }
            }
        }
        if found.len() as u64 != needed {
            return Err(Error::Internal(format!(
                "enumerated {} ideals, divisor-sum count says {}",
                found.len(),
                needed
            )));
        }
        found.sort_unstable_by_key(|(n, id)| (*n, id.a, id.b, id.k));

        let mut offsets = vec![0u32; max_norm as usize + 2];
        for (n, _) in &found {
            offsets[*n as usize + 1] += 1;
        }
        for i in 1..offsets.len() {
            offsets[i] += offsets[i - 1];
        }
        Ok(IdealTable {
            disc: self.disc,
            max_norm,
            offsets,
            ideals: found.into_iter().map(|(_, id)| id).collect(),
        })
    }

    /// Nontrivial ideals supported above `p` with norm at most `max_norm`, sorted by norm.
    fn prime_power_ideals(&self, split: &PrimeSplit, max_norm: u64) -> Result<Vec<(u64, QfIdeal)>> {
        let p = split.p;
        let mut out = Vec::new();
        match split.kind {
            SplitKind::Inert => {
                let mut norm = p.saturating_mul(p);
                let mut k = p;
                while norm <= max_norm {
                    out.push((norm, self.rational_ideal(k)));
                    norm = norm.saturating_mul(p * p);
                    k *= p;
                }
            }
            SplitKind::Ramified => {
                let prime = split.primes_above[0];
                let mut power = prime;
                let mut norm = p;
                while norm <= max_norm {
                    out.push((norm, power));
                    power = ideal_mul(&power, &prime)?;
                    norm = norm.saturating_mul(p);
                }
            }
            SplitKind::Split => {
                let (q, q_bar) = (split.primes_above[0], split.primes_above[1]);
                // Powers of each prime up to the norm bound.
                let mut pows = vec![(1u64, self.unit_ideal(), self.unit_ideal())];
                loop {
                    let (n, x, y) = pows[pows.len() - 1];
                    let next = n.saturating_mul(p);
                    if next > max_norm {
                        break;
                    }
                    pows.push((next, ideal_mul(&x, &q)?, ideal_mul(&y, &q_bar)?));
                }
                for &(ni, qi, _) in &pows {
                    for &(nj, _, qj) in &pows {
                        let norm = ni.saturating_mul(nj);
                        if norm == 1 || norm > max_norm {
                            continue;
                        }
                        out.push((norm, ideal_mul(&qi, &qj)?));
                    }
                }
                out.sort_by_key(|(n, id)| (*n, id.a, id.b, id.k));
            }
        }
        Ok(out)
    }
}

/// `chi_D(n)`, the quadratic character attached to the field.
pub fn kronecker_chi_d(field: &QuadField, n: i64) -> i8 {
    field.chi(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplit {
    pub p: u64,
    pub kind: SplitKind,
    /// Prime ideals of norm `p` above `p`: two for split, one for ramified, none for inert.
    pub primes_above: Vec<QfIdeal>,
}

/// An integral ideal `k (aZ + (b + w)Z)` with `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QfIdeal {
    #[serde(skip)]
    disc: i64,
    pub k: u64,
    pub a: u64,
    pub b: u64,
}

impl QfIdeal {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn norm(&self) -> u64 {
        self.k * self.k * self.a
    }

    pub fn is_unit(&self) -> bool {
        self.k == 1 && self.a == 1
    }

    fn trace_omega(&self) -> i64 {
        if self.disc.rem_euclid(4) == 1 {
            1
        } else {
            0
        }
    }

    /// Galois conjugate: `b -> (-b - Tr(w)) mod a`.
    pub fn conjugate(&self) -> QfIdeal {
        let a = self.a as i64;
        let b = (-(self.b as i64) - self.trace_omega()).rem_euclid(a) as u64;
        QfIdeal { b, ..*self }
    }

    /// Whether `x + y w` lies in the ideal.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let k = self.k as i64;
        if x % k != 0 || y % k != 0 {
            return false;
        }
        let (x, y) = (x / k, y / k);
        ((x as i128) - (y as i128) * (self.b as i128)).rem_euclid(self.a as i128) == 0
    }
}

/// The principal ideal `(x + y w)`.
pub fn principal_ideal(field: &QuadField, x: i64, y: i64) -> Result<QfIdeal> {
    if x == 0 && y == 0 {
        return Err(Error::Precondition("the zero ideal is not integral".into()));
    }
    let (x, y) = (x as i128, y as i128);
    let t = field.omega_trace() as i128;
    let n = field.omega_norm() as i128;
    // alpha and alpha * w = -n y + (x + t y) w span (alpha) over Z.
    let (big_a, big_b, c) = lattice_hnf(&[(x, y), (-n * y, x + t * y)]);
    if big_a % c != 0 || big_b % c != 0 {
        return Err(Error::Internal("principal lattice is not an ideal".into()));
    }
    let a = big_a / c;
    field.ideal(c as u64, a as u64, (big_b / c).rem_euclid(a) as u64)
}

/// Product of two ideals in canonical form.
pub fn ideal_mul(x: &QfIdeal, y: &QfIdeal) -> Result<QfIdeal> {
    if x.disc != y.disc {
        return Err(Error::FieldMismatch(x.disc, y.disc));
    }
    let disc = x.disc as i128;
    let t = if disc.rem_euclid(4) == 1 { 1i128 } else { 0 };
    let n = (t * t - disc) / 4;
    let (a1, b1) = (x.a as i128, x.b as i128);
    let (a2, b2) = (y.a as i128, y.b as i128);
    // (b1 + w)(b2 + w) = (b1 b2 - N(w)) + (b1 + b2 + Tr(w)) w
    let gens = [
        (a1 * a2, 0),
        (a1 * b2, a1),
        (a2 * b1, a2),
        (b1 * b2 - n, b1 + b2 + t),
    ];
    let (big_a, big_b, c) = lattice_hnf(&gens);
    if big_a % c != 0 || big_b % c != 0 {
        return Err(Error::Internal(format!(
            "product lattice ({big_a}, {big_b}, {c}) is not an ideal"
        )));
    }
    let a = big_a / c;
    let b = (big_b / c).rem_euclid(a);
    let k = (x.k as i128) * (y.k as i128) * c;
    let out = QfIdeal {
        disc: x.disc,
        k: u64::try_from(k).map_err(|_| Error::Internal("ideal scale overflow".into()))?,
        a: a as u64,
        b: b as u64,
    };
    debug_assert_eq!(out.norm() as u128, x.norm() as u128 * y.norm() as u128);
    Ok(out)
}

/// Hermite normal form `{(A, 0), (B, C)}` of the Z-lattice spanned by `gens`
/// (pairs `(u, v)` standing for `u + v w`), with `A, C > 0` and `0 <= B < A`.
fn lattice_hnf(gens: &[(i128, i128)]) -> (i128, i128, i128) {
    let mut pivot: (i128, i128) = (0, 0);
    let mut a_gcd: i128 = 0;
    for &g in gens {
        // Combine g with the current pivot so one vector carries gcd of v-parts.
        let (mut p, mut q) = (pivot, g);
        while q.1 != 0 {
            let m = p.1.div_euclid(q.1);
            let r = (p.0 - m * q.0, p.1 - m * q.1);
            p = q;
            q = r;
        }
        // q has v = 0 now; fold its u into the A gcd.
        a_gcd = num_integer::Integer::gcd(&a_gcd, &q.0);
        pivot = p;
    }
    if pivot.1 < 0 {
        pivot = (-pivot.0, -pivot.1);
    }
    let a = a_gcd.abs();
    (a, pivot.0.rem_euclid(a), pivot.1)
}

/// Ideals of a field grouped by norm (compressed row storage).
#[derive(Clone, Debug)]
pub struct IdealTable {
    disc: i64,
    max_norm: u64,
    offsets: Vec<u32>,
    ideals: Vec<QfIdeal>,
}

impl IdealTable {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn max_norm(&self) -> u64 {
        self.max_norm
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// The ideals of norm exactly `n` (empty slice if `n > max_norm`).
    pub fn of_norm(&self, n: u64) -> &[QfIdeal] {
        if n == 0 || n > self.max_norm {
            return &[];
        }
        let lo = self.offsets[n as usize] as usize;
        let hi = self.offsets[n as usize + 1] as usize;
        &self.ideals[lo..hi]
    }

    /// `(norm, ideals)` for every norm `1..=max_norm`, including empty ones.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &[QfIdeal])> + '_ {
        (1..=self.max_norm).map(move |n| (n, self.of_norm(n)))
    }

    pub fn all(&self) -> &[QfIdeal] {
        &self.ideals
    }
}
