//! Oracles shared by the integration tests. Nothing here calls into the
//! transfer or growth code of the library.
#![allow(dead_code)]

use dagas::algebra::{Field, Gaussian, Matrix};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn gauss(n: i64, d: i64) -> Gaussian {
    Complex::new(rat(n, d), rat(0, 1))
}

pub fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Digit `i` of `code` in base `states` is the value of site `i`.
pub fn digits(code: usize, width: usize, states: usize) -> Vec<u8> {
    let mut c = code;
    (0..width)
        .map(|_| {
            let d = (c % states) as u8;
            c /= states;
            d
        })
        .collect()
}

pub fn ones_code(width: usize, states: usize) -> usize {
    (0..width).fold(0, |acc, _| acc * states + 1)
}

/// `T[a, b] = prod_i t(a_i, a_{i+1 mod n}, b_i)`.
pub fn product_transfer<F: Field>(width: usize, states: usize, t: impl Fn(u8, u8, u8) -> F) -> Matrix<F> {
    let size = states.pow(width as u32);
    Matrix::from_fn(size, size, |a, b| {
        let (da, db) = (digits(a, width, states), digits(b, width, states));
        (0..width).fold(F::one(), |acc, i| acc * t(da[i], da[(i + 1) % width], db[i]))
    })
}

/// Hard-core gas: a site is 1 with probability `p` exactly when both parents are 0.
pub fn table_x<F: Field>(p: F) -> impl Fn(u8, u8, u8) -> F {
    move |x, y, z| {
        let one = if x == 0 && y == 0 { p.clone() } else { F::zero() };
        if z == 1 {
            one
        } else {
            F::one() - one
        }
    }
}

/// Probability of a 1 is `(1-p) q` when some parent is 0 and `p + (1-p) q` otherwise.
pub fn table_y<F: Field>(p: F, q: F) -> impl Fn(u8, u8, u8) -> F {
    move |x, y, z| {
        let base = (F::one() - p.clone()) * q.clone();
        let one = if x.min(y) == 0 { base } else { p.clone() + base };
        if z == 1 {
            one
        } else {
            F::one() - one
        }
    }
}

/// `delta_code T^k` as a plain vector.
pub fn transfer_power_row<F: Field>(t: &Matrix<F>, code: usize, k: usize) -> Vec<F> {
    let mut v: Vec<F> = (0..t.rows()).map(|i| if i == code { F::one() } else { F::zero() }).collect();
    for _ in 0..k {
        v = (0..t.cols())
            .map(|j| (0..t.rows()).fold(F::zero(), |acc, i| acc + v[i].clone() * t[(i, j)].clone()))
            .collect();
    }
    v
}
