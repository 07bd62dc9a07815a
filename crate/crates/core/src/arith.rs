//! Exact linear algebra over the integers and rationals.
//!
//! Ranks are computed by fraction-free (Bareiss) elimination over `BigInt`.
//! A prime-field rank is available as a fast path: over `Z/p` the rank can
//! only drop, so a full modular rank certifies full rational rank.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn denominator_lcm(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = denominator_lcm(v);
    v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect()
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMatrix { nrows, ncols, entries: vec![Rational::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(QMatrix { nrows, ncols, entries: rows.into_iter().flatten().collect() })
    }

    /// A matrix with `nrows` rows and no columns is representable.
    pub fn with_shape(nrows: usize, ncols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != nrows * ncols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {nrows}x{ncols} matrix, got {}",
                nrows * ncols,
                entries.len()
            )));
        }
        Ok(QMatrix { nrows, ncols, entries })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(rows).expect("rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.ncols, v.len(), "dimension mismatch in product");
        (0..self.nrows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Left multiplication of a row vector: `v^T M`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.nrows, v.len(), "dimension mismatch in product");
        (0..self.ncols).map(|j| (0..self.nrows).map(|i| &v[i] * &self[(i, j)]).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.nrows).map(|i| clear_denominators(self.row(i))).collect();
        bareiss_rank(rows)
    }

    /// Appends `v` as an extra column.
    pub fn augmented(&self, v: &[Rational]) -> QMatrix {
        assert_eq!(v.len(), self.nrows);
        let rows = (0..self.nrows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(v[i].clone());
                r
            })
            .collect();
        QMatrix::from_rows(rows).unwrap_or_else(|_| QMatrix::zeros(self.nrows, 1))
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.ncols {
            if r == m.nrows {
                break;
            }
            let Some(p) = (r..m.nrows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.ncols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.nrows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.ncols {
                    let x = &m[(r, j)] * &f;
                    m[(i, j)] -= x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -rref[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Solves `M x = b`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let (rref, pivots) = self.augmented(b).rref();
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rref[(r, self.ncols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        let rows = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let (rref, pivots) = QMatrix::from_rows(rows).ok()?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let entries = (0..n).flat_map(|i| rref.row(i)[n..].to_vec()).collect();
        QMatrix::with_shape(n, n, entries).ok()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.entries.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.ncols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Matrices serialize as a list of rows of `"p/q"` strings.
impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.nrows).map(|i| self.row(i).iter().map(format_rational).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals as `"p/q"` strings.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| parse_rational(s)).collect::<Result<_>>().map_err(serde::de::Error::custom)
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
///
/// Every division performed is exact, so intermediate entries stay integral
/// and are bounded by minors of the input.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in (c + 1)..ncols {
                let x = &pivot * &row[j] - &f * &pivot_row[j];
                row[j] = x / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

pub fn reduce_mod(x: i64) -> u64 {
    x.rem_euclid(MODULUS as i64) as u64
}

/// Rank over `Z/p` for `p = 2^61 - 1`. Never exceeds the rational rank.
pub fn rank_mod_p(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| reduce_mod(x)).collect()).collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = powmod(a[rank][c], MODULUS - 2);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mulmod(row[c], inv);
            for j in c..ncols {
                let sub = mulmod(f, pivot_row[j]);
                row[j] = (row[j] + MODULUS - sub) % MODULUS;
            }
        }
        rank += 1;
    }
    rank
}

/// Indices of a maximal set of rows independent modulo `p`, chosen greedily
/// in order. Rows independent modulo `p` are independent over `Q`.
pub fn independent_rows_mod_p(m: &[Vec<i64>]) -> Option<Vec<usize>> {
    let ncols = m.first().map_or(0, Vec::len);
    // echelon basis: (pivot column, normalized row)
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in m.iter().enumerate() {
        if row.len() != ncols {
            return None;
        }
        let mut v: Vec<u64> = row.iter().map(|&x| reduce_mod(x)).collect();
        for (c, b) in &basis {
            let f = v[*c];
            if f != 0 {
                for j in 0..ncols {
                    v[j] = (v[j] + MODULUS - mulmod(f, b[j])) % MODULUS;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[c], MODULUS - 2);
            v.iter_mut().for_each(|x| *x = mulmod(*x, inv));
            basis.push((c, v));
            picked.push(i);
            if picked.len() == ncols {
                break;
            }
        }
    }
    Some(picked)
}

/// Integer rank: modular fast path, Bareiss when the modular rank is deficient.
pub fn integer_rank(m: &[Vec<i64>]) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let full = m.len().min(ncols);
    let r = rank_mod_p(m);
    if r == full {
        return r;
    }
    bareiss_rank(m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

/// Converts a `BigInt` to `i64` if it fits.
pub fn small(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

pub fn abs_max(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
}
