#![allow(dead_code)]

use std::sync::Arc;

use maassforge::classforms::{build_class_group, ClassGroup};
use maassforge::heckechar::{make_class_character, HeckeCharacter, InfinityType};
use maassforge::quadfield::QuadField;

pub fn class_group(d: i64) -> Arc<ClassGroup> {
    Arc::new(build_class_group(&QuadField::new(d).unwrap()).unwrap())
}

pub fn character(d: i64, index: usize) -> HeckeCharacter {
    character_eps(d, index, 0)
}

pub fn character_eps(d: i64, index: usize, eps: u8) -> HeckeCharacter {
    let cg = class_group(d);
    let inf = InfinityType::new(eps, 0.0.into()).unwrap();
    make_class_character(&cg, index, inf).unwrap()
}

/// Brute force: is `n` (in absolute value) the norm of some `(x + y sqrt D)/2`
/// with `|x| <= xmax`, `|y| <= ymax`, `x = y D mod 2`?
pub fn represents_norm(d: i64, n: i64, xmax: i64, ymax: i64) -> bool {
    for y in 0..=ymax {
        for x in 0..=xmax {
            if (x - y * d).rem_euclid(2) != 0 {
                continue;
            }
            let norm4 = x * x - d * y * y;
            if norm4 == 4 * n || norm4 == -4 * n {
                return true;
            }
        }
    }
    false
}

/// `gcd(a, b)` and Bezout coefficients.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A matrix `(a b; c d)` of determinant one with the given bottom row.
pub fn complete_matrix(c: i64, d: i64) -> [[i64; 2]; 2] {
    let (g, u, v) = ext_gcd(d, c);
    assert_eq!(g, 1);
    // u d + v c = 1, so a = u, b = -v.
    let m = [[u, -v], [c, d]];
    assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
    m
}
