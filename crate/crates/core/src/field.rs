//! Scalar fields for representable matroids.
//!
//! Column matroids are built by Gaussian elimination over any type that
//! implements [`Field`]. The crate ships the prime fields used by the
//! catalogs ([`Gf`] with a const modulus) and exact rationals via
//! `num_rational`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact field arithmetic: everything Gaussian elimination needs.
pub trait Field:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Maps an integer into the field.
    fn from_i64(v: i64) -> Self;
}

/// The prime field GF(P).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    pub fn new(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn inverse(self) -> Self {
        assert!(self.0 != 0, "division by zero in GF({P})");
        // Fermat: a^(P-2)
        let mut base = self.0 as u64;
        let mut exp = P - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Gf(acc as u32)
    }
}

impl<const P: u32> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf((self.0 + rhs.0) % P)
    }
}

impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Div for Gf<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse()
    }
}

impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf(1 % P)
    }
}

impl<const P: u32> Field for Gf<P> {
    fn from_i64(v: i64) -> Self {
        Gf::new(v)
    }
}

impl Field for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

/// Rank of the columns of `rows` selected by `cols` (indices into each row).
pub fn column_rank<F: Field>(rows: &[Vec<F>], cols: &[usize]) -> usize {
    // Work on the transpose so each selected column is a vector to reduce.
    let mut vecs: Vec<Vec<F>> = cols
        .iter()
        .map(|&c| rows.iter().map(|row| row[c].clone()).collect())
        .collect();
    row_reduce(&mut vecs)
}

/// In-place Gaussian elimination; returns the rank of the vector family.
pub fn row_reduce<F: Field>(vecs: &mut [Vec<F>]) -> usize {
    let width = vecs.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..vecs.len()).find(|&i| !vecs[i][col].is_zero()) else {
            continue;
        };
        vecs.swap(rank, pivot);
        let inv = F::one() / vecs[rank][col].clone();
        for j in col..width {
            vecs[rank][j] = vecs[rank][j].clone() * inv.clone();
        }
        for i in 0..vecs.len() {
            if i != rank && !vecs[i][col].is_zero() {
                let factor = vecs[i][col].clone();
                for j in col..width {
                    let t = vecs[rank][j].clone() * factor.clone();
                    vecs[i][j] = vecs[i][j].clone() - t;
                }
            }
        }
        rank += 1;
        if rank == vecs.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_arithmetic() {
        type F7 = Gf<7>;
        let a = F7::new(3);
        let b = F7::new(5);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a / b * b), a);
        assert_eq!((-a).value(), 4);
        assert_eq!(F7::new(-1).value(), 6);
        for v in 1..7 {
            let x = F7::new(v);
            assert_eq!(x * x.inverse(), F7::one());
        }
        assert_eq!(Gf::<2>::new(1) + Gf::<2>::new(1), Gf::<2>::zero());
    }

    #[test]
    fn rank_over_gf3_and_rationals() {
        let to = |m: &[[i64; 4]]| -> Vec<Vec<Gf<3>>> {
            m.iter()
                .map(|r| r.iter().map(|&v| Gf::new(v)).collect())
                .collect()
        };
        let m = to(&[[1, 0, 1, 1], [0, 1, 1, 2]]);
        assert_eq!(column_rank(&m, &[0, 1, 2, 3]), 2);
        assert_eq!(column_rank(&m, &[2, 3]), 2);
        // (2,1) = 2·(1,2) over GF(3)
        let dep = to(&[[1, 2, 0, 0], [2, 1, 0, 0]]);
        assert_eq!(column_rank(&dep, &[0, 1]), 1);

        let q: Vec<Vec<Ratio<i64>>> = vec![
            vec![Ratio::from_i64(1), Ratio::from_i64(2)],
            vec![Ratio::from_i64(2), Ratio::from_i64(1)],
        ];
        assert_eq!(column_rank(&q, &[0, 1]), 2);
    }
}
