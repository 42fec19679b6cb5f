//! Clebsch-Gordan coefficients and coupling isometries.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AngularMomentum;
use crate::error::{invalid, Result};
use crate::linalg::ComplexMatrix;

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_projection(j: AngularMomentum, twice_m: i32, label: &str) -> Result<()> {
    if j.index_of(twice_m).is_none() {
        return Err(invalid(format!(
            "{label}: 2m = {twice_m} is not a valid projection for j = {j}"
        )));
    }
    Ok(())
}

/// `⟨j1 m1; j2 m2 | J M⟩` in the Condon-Shortley convention.
///
/// Projections are passed doubled (`twice_m = 2m`). Returns zero when
/// `M ≠ m1 + m2` or `(j1, j2, J)` violates the triangle rule. Fails when a
/// projection is not one of `j, j−1, …, −j` for its angular momentum.
///
/// The Racah sum is evaluated in exact rational arithmetic; only the final
/// square root is taken in floating point.
pub fn clebsch_gordan(
    j1: AngularMomentum,
    twice_m1: i32,
    j2: AngularMomentum,
    twice_m2: i32,
    big_j: AngularMomentum,
    twice_big_m: i32,
) -> Result<f64> {
    check_projection(j1, twice_m1, "m1")?;
    check_projection(j2, twice_m2, "m2")?;
    check_projection(big_j, twice_big_m, "M")?;
    if twice_m1 + twice_m2 != twice_big_m {
        return Ok(0.0);
    }
    let (a, b, c) = (j1.twice_j as i64, j2.twice_j as i64, big_j.twice_j as i64);
    if c > a + b || c < (a - b).abs() || (a + b + c) % 2 != 0 {
        return Ok(0.0);
    }
    let (m1, m2, m) = (twice_m1 as i64, twice_m2 as i64, twice_big_m as i64);
    // All quantities below are integers; inputs are doubled.
    let j1j2_j = (a + b - c) / 2;
    let j1_j2j = (a - b + c) / 2;
    let j2_j1j = (-a + b + c) / 2;
    let total = (a + b + c) / 2 + 1;

    let mut prefactor = BigRational::new(
        BigInt::from(c + 1) * factorial(j1j2_j) * factorial(j1_j2j) * factorial(j2_j1j),
        factorial(total),
    );
    for k in [
        (a + m1) / 2,
        (a - m1) / 2,
        (b + m2) / 2,
        (b - m2) / 2,
        (c + m) / 2,
        (c - m) / 2,
    ] {
        prefactor *= BigRational::from_integer(factorial(k));
    }

    let k_min = 0.max((b - c - m1) / 2).max((a - c + m2) / 2);
    let k_max = j1j2_j.min((a - m1) / 2).min((b + m2) / 2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(j1j2_j - k)
            * factorial((a - m1) / 2 - k)
            * factorial((b + m2) / 2 - k)
            * factorial((c - b + m1) / 2 + k)
            * factorial((c - a - m2) / 2 + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(0.0);
    }
    let square = prefactor * &sum * &sum;
    let magnitude = square.to_f64().expect("finite rational").sqrt();
    Ok(if sum.is_negative() { -magnitude } else { magnitude })
}

/// Irreps in `j1 ⊗ j2` with their row offsets in the coupled basis,
/// `J` descending.
pub fn coupled_blocks(j1: AngularMomentum, j2: AngularMomentum) -> Vec<(AngularMomentum, usize)> {
    let (a, b) = (j1.twice_j, j2.twice_j);
    let mut offset = 0;
    let mut blocks = Vec::new();
    let mut c = a + b;
    loop {
        let big_j = AngularMomentum::from_twice(c);
        blocks.push((big_j, offset));
        offset += big_j.dim();
        if c < a.abs_diff(b) + 2 {
            break;
        }
        c -= 2;
    }
    blocks
}

/// Unitary from the product basis `|j1 m1⟩ ⊗ |j2 m2⟩` (first factor major)
/// to the coupled basis `⊕_J |J M⟩`.
///
/// Entry `[(J, M), (m1, m2)] = ⟨j1 m1; j2 m2 | J M⟩`.
pub fn coupling_isometry(j1: AngularMomentum, j2: AngularMomentum) -> ComplexMatrix {
    let d2 = j2.dim();
    let dim = j1.dim() * d2;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (big_j, offset) in coupled_blocks(j1, j2) {
        for (row, tm) in big_j.twice_m_values().enumerate() {
            for (i1, tm1) in j1.twice_m_values().enumerate() {
                let tm2 = tm - tm1;
                let Some(i2) = j2.index_of(tm2) else { continue };
                let cg = clebsch_gordan(j1, tm1, j2, tm2, big_j, tm).expect("valid projections");
                u[(offset + row, i1 * d2 + i2)] = Complex64::new(cg, 0.0);
            }
        }
    }
    u
}
