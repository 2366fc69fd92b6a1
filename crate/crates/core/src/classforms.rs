//! Narrow class groups of real quadratic fields through cycles of reduced
//! indefinite binary quadratic forms, plus the fundamental unit.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::{QfIdeal, QuadField};

/// Largest discriminant the cycle enumeration accepts.
pub const MAX_CLASS_GROUP_DISC: i64 = 100_000_000;

/// The form `A x^2 + B xy + C y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndefiniteForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IndefiniteForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        (self.b as i128) * (self.b as i128) - 4 * (self.a as i128) * (self.c as i128)
    }

    /// `0 < B < sqrt(D)` and `sqrt(D) - B < 2|A| < sqrt(D) + B`, decided exactly.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        if d <= 0 {
            return false;
        }
        let b = self.b as i128;
        let a2 = 2 * (self.a as i128).abs();
        if b <= 0 || b * b >= d {
            return false;
        }
        let lower = a2 + b;
        if lower * lower <= d {
            return false;
        }
        let upper = a2 - b;
        upper <= 0 || upper * upper < d
    }

    /// One reduction step `(A, B, C) -> (C, B', (B'^2 - D)/(4C))` with `B' = -B mod 2C`.
    pub fn rho(&self) -> Self {
        let d = self.disc();
        let c = self.c as i128;
        let m = 2 * c.abs();
        let target = (-(self.b as i128)).rem_euclid(m);
        let root = arith::isqrt(d as u128) as i128;
        let b_new = if c * c > d {
            // Representative in (-|C|, |C|].
            if target > c.abs() {
                target - m
            } else {
                target
            }
        } else {
            // Largest representative below sqrt(D).
            root - (root - target).rem_euclid(m)
        };
        let c_new = (b_new * b_new - d) / (4 * c);
        Self {
            a: self.c,
            b: b_new as i64,
            c: c_new as i64,
        }
    }

    fn conjugate(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }
}

/// Reduces a form of positive non-square discriminant by iterating `rho`.
pub fn reduce_form(f: IndefiniteForm) -> IndefiniteForm {
    let mut g = f;
    // Each step at least halves |A| until |A| < sqrt(D); afterwards a bounded
    // number of steps reaches a reduced form.
    for _ in 0..10_000 {
        if g.is_reduced() {
            return g;
        }
        g = g.rho();
    }
    panic!("reduction of {f:?} did not terminate");
}

/// Gauss composition of two primitive forms of the same discriminant.
pub fn compose_forms(f1: &IndefiniteForm, f2: &IndefiniteForm) -> Result<IndefiniteForm> {
    let d = f1.disc();
    if d != f2.disc() {
        return Err(Error::Precondition("forms of different discriminants".into()));
    }
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2) = (f2.a as i128, f2.b as i128);
    let s = (b1 + b2) / 2;
    let (g1, x1, y1) = arith::ext_gcd(a1, a2);
    let (g, u, z) = arith::ext_gcd(g1, s);
    let (x, y) = (u * x1, u * y1);
    let big_a = a1 * a2 / (g * g);
    let num = a1 * x * b2 + a2 * y * b1 + z * (b1 * b2 + d) / 2;
    if num % g != 0 {
        return Err(Error::Internal("composition numerator not divisible".into()));
    }
    let m = 2 * big_a.abs();
    let mut big_b = (num / g).rem_euclid(m);
    if big_b > big_a.abs() {
        big_b -= m;
    }
    let num_c = big_b * big_b - d;
    if num_c % (4 * big_a) != 0 {
        return Err(Error::Internal(format!(
            "composition of {f1:?} and {f2:?} gave non-integral C"
        )));
    }
    let to_i64 = |v: i128| i64::try_from(v).map_err(|_| Error::Internal("form overflow".into()));
    Ok(IndefiniteForm {
        a: to_i64(big_a)?,
        b: to_i64(big_b)?,
        c: to_i64(num_c / (4 * big_a))?,
    })
}

/// `eps = (x + y sqrt(D))/2 > 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalUnit {
    #[serde(serialize_with = "big_as_string")]
    pub x: BigInt,
    #[serde(serialize_with = "big_as_string")]
    pub y: BigInt,
    pub norm: i8,
    pub regulator: f64,
}

fn big_as_string<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Natural log of a positive big integer.
fn big_ln(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Least unit `> 1` from the continued fraction of `w`, in exact arithmetic.
pub fn fundamental_unit(field: &QuadField) -> Result<FundamentalUnit> {
    let d = field.disc();
    let t = field.omega_trace();
    let n = field.omega_norm();
    let root = arith::isqrt(d as u128) as i64;
    // w = (P + sqrt(D))/Q with Q | D - P^2.
    let (mut p_q, mut q_q) = (t, 2i64);
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let big_t = BigInt::from(t);
    let big_n = BigInt::from(n);
    for _ in 0..(64 * d.max(64)) {
        if q_q <= 0 {
            return Err(Error::Internal("continued fraction left the reduced range".into()));
        }
        let a_i = (p_q + root).div_euclid(q_q);
        let a_big = BigInt::from(a_i);
        let p_next = &a_big * &p_cur + &p_prev;
        let q_next = &a_big * &q_cur + &q_prev;
        (p_prev, p_cur) = (p_cur, p_next);
        (q_prev, q_cur) = (q_cur, q_next);
        // N(p - q w) = p^2 - t p q + n q^2
        let norm = &p_cur * &p_cur - &big_t * &p_cur * &q_cur + &big_n * &q_cur * &q_cur;
        if norm.abs().is_one() {
            // eps = p - q w' = (p - q t) + q w = ((2p - q t) + q sqrt(D))/2
            let x = BigInt::from(2) * &p_cur - &q_cur * &big_t;
            let y = q_cur.clone();
            let norm_i = if norm.is_positive() { 1 } else { -1 };
            let check = (&x * &x - BigInt::from(d) * &y * &y) / BigInt::from(4);
            if check != BigInt::from(norm_i) {
                return Err(Error::Internal("unit norm check failed".into()));
            }
            // ln((x + y sqrt D)/2) computed as ln(y) + ln((x/y + sqrt D)/2).
            let ratio = if y.bits() < 1000 {
                x.to_f64().unwrap() / y.to_f64().unwrap()
            } else {
                (d as f64).sqrt()
            };
            let regulator = big_ln(&y) + ((ratio + (d as f64).sqrt()) / 2.0).ln();
            return Ok(FundamentalUnit {
                x,
                y,
                norm: norm_i,
                regulator,
            });
        }
        let p_new = a_i * q_q - p_q;
        let q_new = (d - p_new * p_new) / q_q;
        p_q = p_new;
        q_q = q_new;
    }
    Err(Error::Internal("no unit found in the continued fraction".into()))
}

/// The narrow class group, one class per cycle of reduced forms.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: QuadField,
    cycles: Vec<Vec<IndefiniteForm>>,
    lookup: HashMap<IndefiniteForm, usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    conj: Vec<usize>,
    j_class: usize,
    unit: FundamentalUnit,
    h_wide: usize,
    generators: Vec<usize>,
    relative_orders: Vec<u32>,
    /// `g_i^{r_i}` expressed in the earlier generators.
    relations: Vec<Vec<u32>>,
    /// Exponents of each class in terms of the generators.
    coords: Vec<Vec<u32>>,
}

impl ClassGroup {
    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn h_narrow(&self) -> usize {
        self.cycles.len()
    }

    pub fn h_wide(&self) -> usize {
        self.h_wide
    }

    pub fn unit(&self) -> &FundamentalUnit {
        &self.unit
    }

    pub fn unit_norm(&self) -> i8 {
        self.unit.norm
    }

    pub fn cycles(&self) -> &[Vec<IndefiniteForm>] {
        &self.cycles
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Class of principal ideals with a generator of negative norm.
    pub fn j_class(&self) -> usize {
        self.j_class
    }

    pub fn compose(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// Class of the Galois-conjugate ideals.
    pub fn conjugate(&self, x: usize) -> usize {
        self.conj[x]
    }

    pub fn pow(&self, x: usize, e: u64) -> usize {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.compose(acc, x);
        }
        acc
    }

    pub fn order(&self, x: usize) -> u32 {
        let mut acc = x;
        let mut r = 1;
        while acc != 0 {
            acc = self.compose(acc, x);
            r += 1;
        }
        r
    }

    /// Least common multiple of the class orders.
    pub fn exponent(&self) -> u32 {
        (0..self.h_narrow()).fold(1u32, |e, c| num_integer::lcm(e, self.order(c)))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn relative_orders(&self) -> &[u32] {
        &self.relative_orders
    }

    pub fn relations(&self) -> &[Vec<u32>] {
        &self.relations
    }

    /// Exponent vector of a class over the generators.
    pub fn coords(&self, class: usize) -> &[u32] {
        &self.coords[class]
    }

    /// Class of a reduced form, `None` if the form is not reduced or of another discriminant.
    pub fn class_of_reduced(&self, f: &IndefiniteForm) -> Option<usize> {
        self.lookup.get(f).copied()
    }

    pub fn class_of_form(&self, f: &IndefiniteForm) -> Result<usize> {
        if f.disc() != self.field.disc() as i128 {
            return Err(Error::Precondition(format!(
                "form {f:?} has discriminant {} not {}",
                f.disc(),
                self.field.disc()
            )));
        }
        let r = reduce_form(*f);
        self.lookup
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Internal(format!("reduced form {r:?} missing from cycles")))
    }

    /// A representative with positive leading coefficient, as an ideal.
    pub fn representative_ideal(&self, class: usize) -> Result<QfIdeal> {
        let f = self.cycles[class]
            .iter()
            .find(|f| f.a > 0)
            .ok_or_else(|| Error::Internal("cycle without a positive form".into()))?;
        form_to_ideal(&self.field, f)
    }
}

/// Ideal `[a, b + w]` to the form `(a, -(2b + Tr w), (b^2 + Tr(w) b + N(w))/a)`.
pub fn ideal_to_form(field: &QuadField, ideal: &QfIdeal) -> IndefiniteForm {
    let t = field.omega_trace();
    let n = field.omega_norm();
    let (a, b) = (ideal.a as i64, ideal.b as i64);
    let c = ((b as i128 * b as i128 + (t * b) as i128 + n as i128) / a as i128) as i64;
    IndefiniteForm {
        a,
        b: -(2 * b + t),
        c,
    }
}

/// Inverse of [`ideal_to_form`] for forms with `A > 0`.
pub fn form_to_ideal(field: &QuadField, f: &IndefiniteForm) -> Result<QfIdeal> {
    if f.a <= 0 {
        return Err(Error::Precondition("form must have A > 0".into()));
    }
    let t = field.omega_trace();
    let b = (-f.b - t).div_euclid(2).rem_euclid(f.a);
    field.ideal(1, f.a as u64, b as u64)
}

pub fn ideal_to_class(cg: &ClassGroup, ideal: &QfIdeal) -> Result<usize> {
    if ideal.disc() != cg.field.disc() {
        return Err(Error::FieldMismatch(ideal.disc(), cg.field.disc()));
    }
    cg.class_of_form(&ideal_to_form(&cg.field, ideal))
}

/// For each norm `n <= max_norm`, the number of integral ideals of norm `n`
/// in each narrow class, stored flat with stride `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealClassCounts {
    h: usize,
    counts: Vec<u32>,
}

impl IdealClassCounts {
    pub fn new(cg: &ClassGroup, max_norm: u64) -> Result<Self> {
        let table = cg.field.enumerate_ideals(max_norm)?;
        let h = cg.h_narrow();
        let mut counts = vec![0u32; h * (max_norm as usize + 1)];
        counts
            .par_chunks_mut(h)
            .enumerate()
            .skip(1)
            .try_for_each(|(n, slot)| -> Result<()> {
                for ideal in table.of_norm(n as u64) {
                    slot[ideal_to_class(cg, ideal)?] += 1;
                }
                Ok(())
            })?;
        Ok(Self { h, counts })
    }

    pub fn max_norm(&self) -> u64 {
        (self.counts.len() / self.h) as u64 - 1
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Counts per class for ideals of norm `n`.
    pub fn of_norm(&self, n: u64) -> &[u32] {
        &self.counts[n as usize * self.h..(n as usize + 1) * self.h]
    }

    pub fn total(&self, n: u64) -> u64 {
        self.of_norm(n).iter().map(|&c| c as u64).sum()
    }
}

/// Every reduced form of discriminant `d`.
fn all_reduced_forms(d: i64) -> Vec<IndefiniteForm> {
    let root = arith::isqrt(d as u128) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= root {
        let m = (d - b * b) / 4;
        let mut a = 1;
        while a * a <= m {
            if m % a == 0 {
                for aa in [a, m / a] {
                    for sign in [1, -1] {
                        let f = IndefiniteForm::new(sign * aa, b, -sign * (m / aa));
                        if f.is_reduced() {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    out
}

fn class_sort_key(f: &IndefiniteForm) -> (i64, bool, i64) {
    (f.a.abs(), f.a < 0, f.b)
}

pub fn build_class_group(field: &QuadField) -> Result<ClassGroup> {
    let d = field.disc();
    if d > MAX_CLASS_GROUP_DISC {
        return Err(Error::ResourceCap {
            what: "class group discriminant",
            needed: d as u64,
            cap: MAX_CLASS_GROUP_DISC as u64,
        });
    }
    let root = arith::isqrt(d as u128) as i64;
    let b0 = if (root - d) % 2 == 0 { root } else { root - 1 };
    let principal = IndefiniteForm::new(1, b0, (b0 * b0 - d) / 4);

    let reduced = all_reduced_forms(d);
    let mut seen: HashMap<IndefiniteForm, usize> = HashMap::new();
    let mut raw_cycles: Vec<Vec<IndefiniteForm>> = Vec::new();
    for f in &reduced {
        if seen.contains_key(f) {
            continue;
        }
        let mut cycle = vec![*f];
        let mut g = f.rho();
        while g != *f {
            if !g.is_reduced() {
                return Err(Error::Internal(format!("rho left the reduced set at {g:?}")));
            }
            cycle.push(g);
            g = g.rho();
        }
        for g in &cycle {
            seen.insert(*g, usize::MAX);
        }
        raw_cycles.push(cycle);
    }
    if seen.len() != reduced.len() {
        return Err(Error::Internal("cycles do not partition the reduced forms".into()));
    }
    // Principal cycle first, the rest by their smallest member.
    let principal_cycle = raw_cycles
        .iter()
        .position(|c| c.contains(&principal))
        .ok_or_else(|| Error::Internal("principal form not reduced".into()))?;
    let first = raw_cycles.swap_remove(principal_cycle);
    raw_cycles.sort_by_key(|c| c.iter().map(class_sort_key).min().unwrap());
    let mut cycles = vec![first];
    cycles.extend(raw_cycles);

    let mut lookup = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for f in c {
            lookup.insert(*f, i);
        }
    }
    let h = cycles.len();
    let class_of = |f: &IndefiniteForm| -> Result<usize> {
        let r = reduce_form(*f);
        lookup
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Internal(format!("{r:?} not in any cycle")))
    };

    let reps: Vec<IndefiniteForm> = cycles.iter().map(|c| c[0]).collect();
    let mut table = vec![vec![0usize; h]; h];
    for i in 0..h {
        for j in i..h {
            let k = class_of(&compose_forms(&reps[i], &reps[j])?)?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    let inverse: Vec<usize> = (0..h)
        .map(|i| (0..h).find(|&j| table[i][j] == 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("class without inverse".into()))?;
    let conj = reps
        .iter()
        .map(|f| class_of(&f.conjugate()))
        .collect::<Result<Vec<_>>>()?;
    let j_class = class_of(&IndefiniteForm::new(-1, b0, -(b0 * b0 - d) / 4))?;

    let unit = fundamental_unit(field)?;
    let j_trivial = j_class == 0;
    if j_trivial != (unit.norm == -1) {
        return Err(Error::Internal(format!(
            "unit norm {} inconsistent with the class of (-1, B, -C)",
            unit.norm
        )));
    }
    let h_wide = if j_trivial { h } else { h / 2 };

    let mut cg = ClassGroup {
        field: field.clone(),
        cycles,
        lookup,
        table,
        inverse,
        conj,
        j_class,
        unit,
        h_wide,
        generators: Vec::new(),
        relative_orders: Vec::new(),
        relations: Vec::new(),
        coords: Vec::new(),
    };
    decompose(&mut cg);
    Ok(cg)
}

/// Greedy generating set: repeatedly adjoin the class of largest order
/// modulo the subgroup generated so far.
fn decompose(cg: &mut ClassGroup) {
    let h = cg.h_narrow();
    let mut coords: Vec<Option<Vec<u32>>> = vec![None; h];
    coords[0] = Some(Vec::new());
    let mut members = vec![0usize];
    while members.len() < h {
        let mut best: Option<(u32, usize)> = None;
        for g in 0..h {
            if coords[g].is_some() {
                continue;
            }
            let mut acc = g;
            let mut r = 1u32;
            while coords[acc].is_none() {
                acc = cg.compose(acc, g);
                r += 1;
            }
            if best.map_or(true, |(br, _)| r > br) {
                best = Some((r, g));
            }
        }
        let (r, g) = best.unwrap();
        let rel = coords[cg.pow(g, r as u64)].clone().unwrap();
        let old: Vec<(usize, Vec<u32>)> = members
            .iter()
            .map(|&m| (m, coords[m].clone().unwrap()))
            .collect();
        let mut new_members = Vec::with_capacity(members.len() * r as usize);
        let mut power = 0usize;
        for i in 0..r {
            for (m, mc) in &old {
                let x = cg.compose(*m, power);
                let mut c = mc.clone();
                c.push(i);
                coords[x] = Some(c);
                new_members.push(x);
            }
            power = cg.compose(power, g);
        }
        members = new_members;
        cg.generators.push(g);
        cg.relative_orders.push(r);
        cg.relations.push(rel);
    }
    let n = cg.generators.len();
    cg.coords = coords
        .into_iter()
        .map(|c| {
            let mut c = c.unwrap();
            c.resize(n, 0);
            c
        })
        .collect();
    for rel in cg.relations.iter_mut() {
        rel.resize(n, 0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{ideal_mul, principal_ideal};

    fn group(d: i64) -> ClassGroup {
        build_class_group(&QuadField::new(d).unwrap()).unwrap()
    }

    /// Whether the ideal has a totally positive generator, by bounded search.
    fn narrow_principal_brute(field: &QuadField, id: &QfIdeal, eps: f64) -> bool {
        let n = id.norm() as f64;
        let sd = field.sqrt_disc();
        let ymax = (2.0 * eps * n.sqrt() / sd).ceil() as i64 + 2;
        for y in -ymax..=ymax {
            let w = (field.omega_trace() as f64) / 2.0;
            let center = -(y as f64) * w;
            let half = eps * n.sqrt() + (y.abs() as f64) * sd;
            let (lo, hi) = ((center - half).floor() as i64, (center + half).ceil() as i64);
            for x in lo..=hi {
                if field.element_norm(x, y) == id.norm() as i128 && id.contains(x, y) {
                    let (e1, e2) = field.embed(x as f64, y as f64);
                    if e1 > 0.0 && e2 > 0.0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn class_numbers_229_445_401() {
        assert_eq!(group(229).h_wide(), 3);
        assert_eq!(group(445).h_wide(), 4);
        assert_eq!(group(401).h_wide(), 5);
        for d in [229, 445, 401] {
            let cg = group(d);
            assert_eq!(cg.unit_norm(), -1, "D={d}");
            assert_eq!(cg.h_narrow(), cg.h_wide());
            assert_eq!(cg.exponent() as usize, cg.h_narrow(), "D={d} cyclic");
        }
    }

    #[test]
    fn small_fields() {
        assert_eq!(group(5).h_narrow(), 1);
        let g12 = group(12);
        assert_eq!(g12.unit_norm(), 1);
        assert_eq!((g12.h_wide(), g12.h_narrow()), (1, 2));
        let g40 = group(40);
        assert_eq!(g40.unit_norm(), -1);
        assert_eq!(g40.h_narrow(), 2);
    }

    #[test]
    fn units() {
        let f = QuadField::new(229).unwrap();
        let u = fundamental_unit(&f).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (BigInt::from(15), BigInt::from(1), -1));
        let expected = ((15.0 + 229f64.sqrt()) / 2.0).ln();
        assert!((u.regulator - expected).abs() < 1e-13);
        let u5 = fundamental_unit(&QuadField::new(5).unwrap()).unwrap();
        assert_eq!((u5.x, u5.y, u5.norm), (BigInt::from(1), BigInt::from(1), -1));
        let u445 = fundamental_unit(&QuadField::new(445).unwrap()).unwrap();
        assert_eq!((u445.x, u445.y, u445.norm), (BigInt::from(21), BigInt::from(1), -1));
        let u12 = fundamental_unit(&QuadField::new(12).unwrap()).unwrap();
        assert_eq!((u12.x, u12.y, u12.norm), (BigInt::from(4), BigInt::from(1), 1));
    }

    #[test]
    fn unit_by_pell_search() {
        // Least y > 0 with x^2 - D y^2 = +-4.
        for d in [5i64, 8, 12, 13, 40, 60, 229, 401, 445] {
            let Ok(f) = QuadField::new(d) else { continue };
            let u = fundamental_unit(&f).unwrap();
            let (x, y, norm) = (1..100_000i64)
                .find_map(|y| {
                    let dy2 = (d * y * y) as u128;
                    [(dy2 - 4, -1i8), (dy2 + 4, 1)]
                        .into_iter()
                        .find(|(v, _)| arith::is_square(*v))
                        .map(|(v, n)| (arith::isqrt(v) as i64, y, n))
                })
                .unwrap();
            assert_eq!((u.x, u.y, u.norm), (BigInt::from(x), BigInt::from(y), norm), "D={d}");
        }
    }

    #[test]
    fn reduction_examples() {
        let f = IndefiniteForm::new(3, 13, -5);
        assert_eq!(f.disc(), 229);
        let r = reduce_form(f);
        assert!(r.is_reduced());
        let cg = group(229);
        assert_ne!(cg.class_of_form(&f).unwrap(), 0);
        assert_eq!(cg.class_of_form(&IndefiniteForm::new(1, 15, -1)).unwrap(), 0);
        for c in cg.cycles() {
            for g in c {
                assert_eq!(reduce_form(*g), *g);
            }
        }
    }

    #[test]
    fn cycles_partition_reduced_forms() {
        for d in [229i64, 445, 401, 40, 12, 1_001] {
            let Ok(f) = QuadField::new(d) else { continue };
            let cg = build_class_group(&f).unwrap();
            let total: usize = cg.cycles().iter().map(|c| c.len()).sum();
            assert_eq!(total, all_reduced_forms(d).len());
        }
    }

    #[test]
    fn group_axioms() {
        for d in [229i64, 445, 401, 40, 12, 2_305, 4_641] {
            let Ok(f) = QuadField::new(d) else { continue };
            let cg = build_class_group(&f).unwrap();
            let h = cg.h_narrow();
            for x in 0..h {
                assert_eq!(cg.compose(x, 0), x);
                assert_eq!(cg.compose(x, cg.inverse(x)), 0);
                assert_eq!(cg.conjugate(x), cg.inverse(x), "narrow conjugate is inverse");
                for y in 0..h {
                    assert_eq!(cg.compose(x, y), cg.compose(y, x));
                    for z in 0..h {
                        assert_eq!(
                            cg.compose(cg.compose(x, y), z),
                            cg.compose(x, cg.compose(y, z))
                        );
                    }
                }
            }
            if cg.unit_norm() == -1 {
                assert_eq!(cg.h_narrow(), cg.h_wide());
            } else {
                assert_eq!(cg.h_narrow(), 2 * cg.h_wide());
            }
        }
    }

    #[test]
    fn composition_matches_ideal_products() {
        for d in [229i64, 445, 401, 12, 4_641] {
            let f = QuadField::new(d).unwrap();
            let cg = build_class_group(&f).unwrap();
            let table = f.enumerate_ideals(80).unwrap();
            for i in table.all() {
                for j in table.all() {
                    let ij = ideal_mul(i, j).unwrap();
                    assert_eq!(
                        ideal_to_class(&cg, &ij).unwrap(),
                        cg.compose(ideal_to_class(&cg, i).unwrap(), ideal_to_class(&cg, j).unwrap()),
                        "D={d} {i:?} {j:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn ideal_classes_examples() {
        let f = QuadField::new(229).unwrap();
        let cg = build_class_group(&f).unwrap();
        assert_eq!(ideal_to_class(&cg, &f.unit_ideal()).unwrap(), 0);
        let s3 = f.split_prime(3).unwrap();
        let (p, q) = (s3.primes_above[0], s3.primes_above[1]);
        let (cp, cq) = (ideal_to_class(&cg, &p).unwrap(), ideal_to_class(&cg, &q).unwrap());
        assert_ne!(cp, 0);
        assert_eq!(cg.compose(cp, cq), 0);
        let p3 = ideal_mul(&ideal_mul(&p, &p).unwrap(), &p).unwrap();
        assert_eq!(ideal_to_class(&cg, &p3).unwrap(), 0);
        assert!(narrow_principal_brute(&f, &p3, 16.0));
        assert!(!narrow_principal_brute(&f, &p, 16.0));
    }

    #[test]
    fn principal_classes_match_brute_force() {
        for d in [229i64, 445, 12] {
            let f = QuadField::new(d).unwrap();
            let cg = build_class_group(&f).unwrap();
            let eps = {
                let u = &cg.unit().regulator;
                let e = u.exp();
                if cg.unit_norm() == -1 { e * e } else { e }
            };
            for id in f.enumerate_ideals(60).unwrap().all() {
                let principal = ideal_to_class(&cg, id).unwrap() == 0;
                assert_eq!(principal, narrow_principal_brute(&f, id, eps), "D={d} {id:?}");
            }
        }
    }

    #[test]
    fn class_invariant_under_principal_multipliers() {
        use rand::{Rng, SeedableRng};
        let f = QuadField::new(229).unwrap();
        let cg = build_class_group(&f).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let ideals = f.enumerate_ideals(100).unwrap();
        let mut done = 0;
        while done < 20 {
            let (x, y) = (rng.gen_range(-40i64..40), rng.gen_range(-10i64..10));
            let (e1, e2) = f.embed(x as f64, y as f64);
            if !(e1 > 0.0 && e2 > 0.0) {
                continue;
            }
            let alpha = principal_ideal(&f, x, y).unwrap();
            assert_eq!(ideal_to_class(&cg, &alpha).unwrap(), 0);
            for id in ideals.all().iter().take(30) {
                let m = ideal_mul(id, &alpha).unwrap();
                assert_eq!(ideal_to_class(&cg, &m).unwrap(), ideal_to_class(&cg, id).unwrap());
            }
            done += 1;
        }
    }

    #[test]
    fn decomposition_reconstructs_classes() {
        for d in [229i64, 445, 401, 40, 12, 4_641, 1_541] {
            let Ok(f) = QuadField::new(d) else { continue };
            let cg = build_class_group(&f).unwrap();
            let prod: u32 = cg.relative_orders().iter().product();
            assert_eq!(prod as usize, cg.h_narrow());
            for c in 0..cg.h_narrow() {
                let mut acc = 0;
                for (g, e) in cg.generators().iter().zip(cg.coords(c)) {
                    acc = cg.compose(acc, cg.pow(*g, *e as u64));
                }
                assert_eq!(acc, c);
            }
        }
    }
}
