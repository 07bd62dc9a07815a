//! Root systems of simple complex Lie algebras and their Weyl groups.
//!
//! Conventions:
//!
//! - Bourbaki node numbering. `E_n` is the chain `1-3-4-5-...` with node 2
//!   attached to node 4; in `B_n` the last root is short, in `C_n` it is long;
//!   in `D_n` nodes `n-1` and `n` are the two branch ends; in `F_4` roots 1, 2
//!   are long; in `G_2` root 1 is short.
//! - `cartan[i][j] = alpha_j(h_i)`, where `h_i` is the simple coroot. A row
//!   of the Cartan matrix is therefore the coweight coordinate vector of `h_i`.
//! - Cartan vectors use fundamental-coweight coordinates and the simple
//!   reflection `s_i` acts by `c_j -> c_j - c_i * cartan[i][j]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{clear_denominators, denominator_lcm, Rational};
use crate::error::{Error, Result};

/// Default cap on the number of orbit points held in memory.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple type `X_r` with `r <= 8`. `C2` is stored as `B2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=8).contains(&rank),
            Family::B => (2..=8).contains(&rank),
            Family::C => (2..=8).contains(&rank),
            Family::D => (4..=8).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType(format!("{}{}", family.letter(), rank)));
        }
        let family = if family == Family::C && rank == 2 { Family::B } else { family };
        Ok(SimpleType { family, rank })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Enumerates every valid type of rank at most 8.
    pub fn all() -> Vec<SimpleType> {
        let mut out = Vec::new();
        for r in 1..=8 {
            out.push(SimpleType { family: Family::A, rank: r });
        }
        for r in 2..=8 {
            out.push(SimpleType { family: Family::B, rank: r });
        }
        for r in 3..=8 {
            out.push(SimpleType { family: Family::C, rank: r });
        }
        for r in 4..=8 {
            out.push(SimpleType { family: Family::D, rank: r });
        }
        for r in 6..=8 {
            out.push(SimpleType { family: Family::E, rank: r });
        }
        out.push(SimpleType { family: Family::F, rank: 4 });
        out.push(SimpleType { family: Family::G, rank: 2 });
        out
    }

    /// Degrees of the fundamental invariants.
    pub fn degrees(self) -> Vec<u64> {
        let r = self.rank as u64;
        match self.family {
            Family::A => (2..=r + 1).collect(),
            Family::B | Family::C => (1..=r).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..r).map(|i| 2 * i).collect();
                d.push(r);
                d
            }
            Family::E => match r {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 1..r {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 1..r - 1 {
                    link(i, i + 1);
                }
                link(r - 2, r);
            }
            Family::E => {
                link(1, 3);
                link(2, 4);
                for i in 3..r {
                    link(i, i + 1);
                }
            }
            Family::F => {
                link(1, 2);
                link(2, 3);
                link(3, 4);
            }
            Family::G => link(1, 2),
        }
        // row i holds alpha_j(h_i); the short root's row carries the -2 / -3
        match self.family {
            Family::B => a[r - 1][r - 2] = -2,
            Family::C => a[r - 2][r - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        SimpleType::new(family, rank)
    }
}

impl TryFrom<String> for SimpleType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SimpleType> for String {
    fn from(t: SimpleType) -> String {
        t.to_string()
    }
}

/// Roots of a simple type, in simple-root coordinates.
///
/// Positive roots are ordered by height, then by decreasing lexicographic
/// order, so the simple roots come first in node order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: SimpleType,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

/// Builds the root system of `ty` by closing the simple roots under root
/// strings.
pub fn build_root_system(ty: SimpleType) -> RootSystem {
    let cartan = ty.cartan_matrix();
    let r = ty.rank();
    let mut positive: Vec<Vec<i64>> = (0..r).map(|i| unit(r, i)).collect();
    let mut known: HashSet<Vec<i64>> = positive.iter().cloned().collect();
    let mut layer = positive.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // alpha_i-string through beta: beta - p alpha_i, ..., beta + q alpha_i
                let pairing: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        positive.extend(next.iter().cloned());
        layer = next;
    }
    positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));

    let symmetrizer = symmetrizer(&cartan);
    let mut index = HashMap::new();
    for (k, root) in positive.iter().enumerate() {
        index.insert(root.clone(), k);
    }
    let n = positive.len();
    for (k, root) in positive.iter().enumerate() {
        index.insert(root.iter().map(|x| -x).collect(), n + k);
    }
    RootSystem { ty, cartan, symmetrizer, positive, index }
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Smallest positive integers `d_i` with `d_i * cartan[i][j]` symmetric.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let r = cartan.len();
    // d_i a_ij = d_j a_ji; walk the (connected) diagram from node 0
    let mut d: Vec<Option<(i64, i64)>> = vec![None; r];
    d[0] = Some((1, 1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let (ni, di) = d[i].unwrap();
        for j in 0..r {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                // d_j = d_i * a_ij / a_ji
                let num = ni * cartan[i][j];
                let den = di * cartan[j][i];
                let g = num_integer::gcd(num, den);
                d[j] = Some((num / g, den / g));
                stack.push(j);
            }
        }
    }
    let lcm = d.iter().fold(1i64, |acc, x| num_integer::lcm(acc, x.unwrap().1));
    d.iter().map(|x| x.unwrap().0 * lcm / x.unwrap().1).collect()
}

impl RootSystem {
    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Root by index: `0..N` are positive roots, `N..2N` their negatives.
    pub fn root(&self, k: usize) -> Vec<i64> {
        let n = self.positive.len();
        if k < n {
            self.positive[k].clone()
        } else {
            self.positive[k - n].iter().map(|x| -x).collect()
        }
    }

    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        (0..2 * self.positive.len()).map(|k| self.root(k)).collect()
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    /// `(alpha_i, alpha_i) / 2`, normalized so the short roots get 1.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// Invariant form with short roots of squared length 2.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a[i] * self.symmetrizer[i] * self.cartan[i][j] * b[j];
            }
        }
        s
    }

    /// `alpha(h_i)` for the simple coroot `h_i`.
    pub fn pairing(&self, root: &[i64], i: usize) -> i64 {
        root.iter().zip(&self.cartan[i]).map(|(n, a)| n * a).sum()
    }

    /// Coefficients of the coroot `alpha^vee` in the simple coroots.
    pub fn coroot(&self, root: &[i64]) -> Vec<i64> {
        let half_len = self.inner(root, root) / 2;
        root.iter()
            .zip(&self.symmetrizer)
            .map(|(n, d)| {
                debug_assert_eq!((n * d) % half_len, 0);
                n * d / half_len
            })
            .collect()
    }

    /// Simple reflection on a root given in simple-root coordinates.
    pub fn reflect_root(&self, i: usize, root: &[i64]) -> Vec<i64> {
        let mut out = root.to_vec();
        out[i] -= self.pairing(root, i);
        out
    }

    /// `alpha(x)` for `x` in coweight coordinates.
    pub fn evaluate(&self, root: &[i64], coords: &[i64]) -> i64 {
        root.iter().zip(coords).map(|(a, b)| a * b).sum()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty root system")
    }
}

/// A Cartan element in fundamental-coweight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanVector(#[serde(with = "crate::arith::rational_vec")] pub Vec<Rational>);

impl CartanVector {
    pub fn from_ints(v: &[i64]) -> Self {
        CartanVector(v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Integer coordinates, if every coordinate is integral and fits `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None }).collect()
    }
}

impl fmt::Display for CartanVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::arith::format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weyl group of a root system, acting on coweight coordinates.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    root_system: RootSystem,
    generators: Vec<Vec<Vec<i64>>>,
}

/// Matrix of `s_i` (1-based `i`) on coweight coordinates, acting on columns.
pub fn simple_reflection_matrix(rs: &RootSystem, i: usize) -> Result<Vec<Vec<i64>>> {
    let r = rs.rank();
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange { index: i, rank: r });
    }
    let i = i - 1;
    let mut m = vec![vec![0i64; r]; r];
    for (j, row) in m.iter_mut().enumerate() {
        row[j] = 1;
        row[i] -= rs.cartan[i][j];
    }
    Ok(m)
}

pub fn apply_matrix(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect()).collect()
}

/// Coordinate types the orbit walk can run over.
trait Coord: Clone + Eq + Hash {
    fn reflect(v: &[Self], i: usize, cartan_row: &[i64]) -> Option<Vec<Self>>;
    fn is_zero_at(v: &[Self], i: usize) -> bool;
}

impl Coord for i64 {
    fn reflect(v: &[i64], i: usize, cartan_row: &[i64]) -> Option<Vec<i64>> {
        let ci = v[i];
        let mut out = v.to_vec();
        for (j, &a) in cartan_row.iter().enumerate() {
            if a != 0 {
                out[j] = v[j].checked_sub(ci.checked_mul(a)?)?;
            }
        }
        Some(out)
    }

    fn is_zero_at(v: &[i64], i: usize) -> bool {
        v[i] == 0
    }
}

impl Coord for BigInt {
    fn reflect(v: &[BigInt], i: usize, cartan_row: &[i64]) -> Option<Vec<BigInt>> {
        let mut out = v.to_vec();
        for (j, &a) in cartan_row.iter().enumerate() {
            if a != 0 {
                out[j] = &v[j] - &v[i] * a;
            }
        }
        Some(out)
    }

    fn is_zero_at(v: &[BigInt], i: usize) -> bool {
        v[i].is_zero()
    }
}

enum Walk {
    Finished(usize),
    Stopped,
    Overflow,
}

impl WeylGroup {
    pub fn new(root_system: &RootSystem) -> Self {
        let generators = (1..=root_system.rank())
            .map(|i| simple_reflection_matrix(root_system, i).expect("index in range"))
            .collect();
        WeylGroup { root_system: root_system.clone(), generators }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn generators(&self) -> &[Vec<Vec<i64>>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    /// |W| as the product of the degrees of the fundamental invariants.
    pub fn order(&self) -> u64 {
        weyl_group_order(self)
    }

    /// Breadth-first walk of the orbit, generators tried in node order.
    fn walk<T: Coord>(
        &self,
        start: Vec<T>,
        cap: usize,
        visit: &mut dyn FnMut(&[T]) -> ControlFlow<()>,
    ) -> Result<Walk> {
        let cartan = &self.root_system.cartan;
        let mut seen: HashSet<Vec<T>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        if visit(&start).is_break() {
            return Ok(Walk::Stopped);
        }
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for (i, row) in cartan.iter().enumerate() {
                if T::is_zero_at(&v, i) {
                    continue;
                }
                let Some(w) = T::reflect(&v, i, row) else {
                    return Ok(Walk::Overflow);
                };
                if seen.contains(&w) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                if visit(&w).is_break() {
                    return Ok(Walk::Stopped);
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
        Ok(Walk::Finished(seen.len()))
    }

    /// Visits each point of the orbit of an integral vector in breadth-first
    /// order, stopping when `visit` breaks. Returns `Some(size)` when the
    /// whole orbit was traversed.
    pub fn visit_orbit(
        &self,
        start: &[i64],
        cap: usize,
        mut visit: impl FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<Option<usize>> {
        self.check_len(start.len())?;
        match self.walk(start.to_vec(), cap, &mut visit)? {
            Walk::Finished(n) => Ok(Some(n)),
            Walk::Stopped => Ok(None),
            Walk::Overflow => {
                // restart in arbitrary precision; points already seen are revisited
                let big: Vec<BigInt> = start.iter().map(|&x| BigInt::from(x)).collect();
                let mut fallback = |p: &[BigInt]| match p.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() {
                    Some(q) => visit(&q),
                    None => ControlFlow::Continue(()),
                };
                match self.walk(big, cap, &mut fallback)? {
                    Walk::Finished(n) => Ok(Some(n)),
                    _ => Ok(None),
                }
            }
        }
    }

    /// The full orbit `W v`, in breadth-first order from `v`.
    pub fn orbit(&self, v: &CartanVector, cap: usize) -> Result<Vec<CartanVector>> {
        self.check_len(v.len())?;
        let lcm = denominator_lcm(v.coords());
        let scaled = clear_denominators(v.coords());
        let unscale = |p: &[BigInt]| CartanVector(p.iter().map(|x| BigRational::new(x.clone(), lcm.clone())).collect());
        let mut out = Vec::new();
        let fits = crate::arith::abs_max(&scaled) < BigInt::from(1i64 << 40);
        if fits {
            let small: Vec<i64> = scaled.iter().map(|x| x.to_i64().unwrap()).collect();
            let res = self.walk(small, cap, &mut |p: &[i64]| {
                out.push(p.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
                ControlFlow::Continue(())
            })?;
            if matches!(res, Walk::Finished(_)) {
                return Ok(out.iter().map(|p| unscale(p)).collect());
            }
            out.clear();
        }
        self.walk(scaled, cap, &mut |p: &[BigInt]| {
            out.push(p.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out.iter().map(|p| unscale(p)).collect())
    }

    /// The dominant element of `W v`, found by reflecting at negative
    /// coordinates until none remain.
    pub fn dominant_representative(&self, v: &CartanVector) -> CartanVector {
        let cartan = &self.root_system.cartan;
        let mut c = v.0.clone();
        while let Some(i) = c.iter().position(Signed::is_negative) {
            let ci = c[i].clone();
            for (j, &a) in cartan[i].iter().enumerate() {
                if a != 0 {
                    c[j] -= &ci * Rational::from_integer(BigInt::from(a));
                }
            }
        }
        CartanVector(c)
    }

    /// Integer version of [`Self::dominant_representative`].
    pub fn dominant_int(&self, v: &[i64]) -> Vec<i64> {
        let cartan = &self.root_system.cartan;
        let mut c = v.to_vec();
        while let Some(i) = c.iter().position(|&x| x < 0) {
            let ci = c[i];
            for (j, &a) in cartan[i].iter().enumerate() {
                c[j] -= ci * a;
            }
        }
        c
    }

    /// Matrix of the longest element `w0` on coweight coordinates.
    ///
    /// Obtained by driving `-rho` to the dominant chamber; the word used is a
    /// reduced word for `w0`.
    pub fn longest_element_action(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let cartan = &self.root_system.cartan;
        let mut c = vec![-1i64; r];
        let mut m: Vec<Vec<i64>> = (0..r).map(|i| unit(r, i)).collect();
        while let Some(i) = c.iter().position(|&x| x < 0) {
            let ci = c[i];
            for (j, &a) in cartan[i].iter().enumerate() {
                c[j] -= ci * a;
            }
            m = mat_mul(&self.generators[i], &m);
        }
        m
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::TypeMismatch {
                expected: format!("vector of length {}", self.rank()),
                found: format!("length {n}"),
            });
        }
        Ok(())
    }
}

/// Orbit of `v` under the Weyl group, with the default point cap.
pub fn weyl_orbit(w: &WeylGroup, v: &CartanVector) -> Result<Vec<CartanVector>> {
    if v.is_zero() {
        return Err(Error::Precondition("orbit of the zero vector requested".into()));
    }
    w.orbit(v, DEFAULT_ORBIT_CAP)
}

pub fn dominant_representative(w: &WeylGroup, v: &CartanVector) -> CartanVector {
    w.dominant_representative(v)
}

pub fn longest_element_action(w: &WeylGroup) -> Vec<Vec<i64>> {
    w.longest_element_action()
}

pub fn weyl_group_order(w: &WeylGroup) -> u64 {
    w.root_system.simple_type().degrees().iter().product()
}
