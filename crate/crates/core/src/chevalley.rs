//! Chevalley bases and gradings by Cartan elements.
//!
//! Basis indices `0..r` are the simple coroots `h_i`; index `r + k` is the
//! root vector `e_alpha` for root number `k` of the [`RootSystem`] (positive
//! roots first, then their negatives).
//!
//! Structure constants follow the extraspecial-pair convention: for every
//! non-simple positive root `xi`, the pair `(alpha, beta)` with `alpha`
//! earliest in the root order gets `N(alpha, beta) = p + 1`, and everything
//! else is forced by the Chevalley relations `[e_a, e_-a] = h_a`,
//! `N(-a, -b) = -N(a, b)`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{
    clear_denominators, independent_rows_mod_p, integer_rank, rank_mod_p, rat, small, QMatrix, Rational,
};
use crate::error::{Error, Result};
use crate::rootsys::{CartanVector, RootSystem};

const NO_ROOT: u32 = u32::MAX;

/// A basis-coordinate vector, sparse.
pub type Sparse = BTreeMap<usize, i64>;

#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    root_system: RootSystem,
    roots: Vec<Vec<i64>>,
    /// `sum[a * n + b]` is the index of `root_a + root_b`, or `NO_ROOT`.
    sum: Vec<u32>,
    /// `consts[a * n + b] = N(root_a, root_b)`; zero when the sum is no root.
    consts: Vec<i8>,
    /// Coroot coefficients `h_alpha = sum_i c_i h_i`.
    coroots: Vec<Vec<i64>>,
}

/// Builds the Chevalley basis structure constants of `rs`.
pub fn build_chevalley(rs: &RootSystem) -> ChevalleyAlgebra {
    let roots = rs.all_roots();
    let n = roots.len();
    let npos = rs.num_positive();
    let mut sum = vec![NO_ROOT; n * n];
    for a in 0..n {
        for b in 0..n {
            let s: Vec<i64> = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
            if let Some(k) = rs.root_index(&s) {
                sum[a * n + b] = k as u32;
            }
        }
    }
    let norm: Vec<i64> = roots.iter().map(|r| rs.inner(r, r)).collect();
    let neg = |a: usize| if a < npos { a + npos } else { a - npos };

    let mut table = Table { n, npos, sum: &sum, norm: &norm, pos: vec![0i64; npos * npos] };

    // positive pairs, by increasing height of the sum
    for xi in 0..npos {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for a in 0..npos {
            for b in (a + 1)..npos {
                if sum[a * n + b] == xi as u32 {
                    pairs.push((a, b));
                }
            }
        }
        let Some(&(g, d)) = pairs.first() else {
            continue;
        };
        // largest p with delta - p gamma a root
        let mut p = 0;
        let mut probe = roots[d].clone();
        loop {
            for (x, y) in probe.iter_mut().zip(&roots[g]) {
                *x -= y;
            }
            if rs.is_root(&probe) {
                p += 1;
            } else {
                break;
            }
        }
        table.set(g, d, p + 1);
        for &(a, b) in &pairs[1..] {
            let mut acc = Ratio::from_integer(0i64);
            // beta - gamma and alpha - delta are roots together
            if sum[b * n + neg(g)] != NO_ROOT {
                let r = sum[b * n + neg(g)] as usize;
                acc += Ratio::new(table.get(b, neg(g)) * table.get(a, neg(d)), norm[r]);
            }
            if sum[a * n + neg(g)] != NO_ROOT {
                let r = sum[a * n + neg(g)] as usize;
                acc += Ratio::new(table.get(neg(g), a) * table.get(b, neg(d)), norm[r]);
            }
            let value = acc * Ratio::new(norm[xi], table.get(g, d));
            assert!(value.is_integer(), "non-integral structure constant");
            table.set(a, b, *value.numer());
        }
    }

    let mut consts = vec![0i8; n * n];
    for a in 0..n {
        for b in 0..n {
            if sum[a * n + b] != NO_ROOT {
                consts[a * n + b] = table.get(a, b) as i8;
            }
        }
    }
    let coroots = roots.iter().map(|r| rs.coroot(r)).collect();
    ChevalleyAlgebra { root_system: rs.clone(), roots, sum, consts, coroots }
}

/// Positive-pair table plus the rules extending it to all pairs.
struct Table<'a> {
    n: usize,
    npos: usize,
    sum: &'a [u32],
    norm: &'a [i64],
    pos: Vec<i64>,
}

impl Table<'_> {
    fn set(&mut self, a: usize, b: usize, v: i64) {
        self.pos[a * self.npos + b] = v;
        self.pos[b * self.npos + a] = -v;
    }

    fn neg(&self, a: usize) -> usize {
        if a < self.npos {
            a + self.npos
        } else {
            a - self.npos
        }
    }

    fn positive(&self, a: usize) -> bool {
        a < self.npos
    }

    /// `N(a, b)` for any roots with `a + b` a root.
    fn get(&self, a: usize, b: usize) -> i64 {
        let s = self.sum[a * self.n + b];
        debug_assert_ne!(s, NO_ROOT);
        match (self.positive(a), self.positive(b)) {
            (true, true) => self.pos[a * self.npos + b],
            (false, false) => -self.get(self.neg(a), self.neg(b)),
            _ => {
                // a + b + c = 0 gives N(a,b)/|c|^2 = N(b,c)/|a|^2 = N(c,a)/|b|^2
                let c = self.neg(s as usize);
                if self.positive(b) == self.positive(c) {
                    let v = self.norm[c] * self.get(b, c);
                    debug_assert_eq!(v % self.norm[a], 0);
                    v / self.norm[a]
                } else {
                    let v = self.norm[c] * self.get(c, a);
                    debug_assert_eq!(v % self.norm[b], 0);
                    v / self.norm[b]
                }
            }
        }
    }
}

impl ChevalleyAlgebra {
    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    /// Basis index of the root vector for root number `k`.
    pub fn root_basis(&self, k: usize) -> usize {
        self.rank() + k
    }

    /// `N(alpha, beta)` by root number; zero when `alpha + beta` is not a root.
    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        self.consts[a * self.roots.len() + b] as i64
    }

    /// Root number of `root_a + root_b`, if it is a root.
    pub fn root_sum(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.sum[a * self.roots.len() + b];
        (s != NO_ROOT).then_some(s as usize)
    }

    fn negative_of(&self, a: usize) -> usize {
        let npos = self.roots.len() / 2;
        if a < npos {
            a + npos
        } else {
            a - npos
        }
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, x: usize, y: usize) -> Sparse {
        let r = self.rank();
        let rs = &self.root_system;
        let mut out = Sparse::new();
        match (x < r, y < r) {
            (true, true) => {}
            (true, false) => {
                let v = rs.pairing(&self.roots[y - r], x);
                if v != 0 {
                    out.insert(y, v);
                }
            }
            (false, true) => {
                let v = rs.pairing(&self.roots[x - r], y);
                if v != 0 {
                    out.insert(x, -v);
                }
            }
            (false, false) => {
                let (a, b) = (x - r, y - r);
                if self.negative_of(a) == b {
                    for (i, &c) in self.coroots[a].iter().enumerate() {
                        if c != 0 {
                            out.insert(i, c);
                        }
                    }
                } else if let Some(s) = self.root_sum(a, b) {
                    out.insert(r + s, self.structure_constant(a, b));
                }
            }
        }
        out
    }

    /// Bilinear extension of the bracket to sparse vectors.
    pub fn bracket(&self, x: &Sparse, y: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (&i, &a) in x {
            for (&j, &b) in y {
                for (k, c) in self.bracket_basis(i, j) {
                    *out.entry(k).or_insert(0) += a * b * c;
                }
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

/// Eigenspace decomposition of `ad h` for an integral `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    grader: Vec<i64>,
    /// Degree -> root numbers of that degree. The Cartan subalgebra is added
    /// to degree 0 implicitly.
    components: BTreeMap<i64, Vec<usize>>,
    rank: usize,
}

impl GradedDecomposition {
    pub fn grader(&self) -> &[i64] {
        &self.grader
    }

    /// Root numbers in degree `k` (the Cartan part of degree 0 is excluded).
    pub fn roots_of_degree(&self, k: i64) -> &[usize] {
        self.components.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn dim_of_degree(&self, k: i64) -> usize {
        self.roots_of_degree(k).len() + if k == 0 { self.rank } else { 0 }
    }

    /// `(degree, dimension)` for every nonzero component, in increasing degree.
    pub fn dimensions(&self) -> Vec<(i64, usize)> {
        let mut degrees: Vec<i64> = self.components.keys().copied().collect();
        if !degrees.contains(&0) {
            degrees.push(0);
            degrees.sort();
        }
        degrees.into_iter().map(|k| (k, self.dim_of_degree(k))).collect()
    }
}

/// Grades the algebra by the eigenvalues of `ad h`.
pub fn grade_by(alg: &ChevalleyAlgebra, h: &CartanVector) -> Result<GradedDecomposition> {
    let ints = h.to_ints().ok_or_else(|| Error::Precondition(format!("grading element {h} is not integral")))?;
    grade_by_ints(alg, &ints)
}

pub fn grade_by_ints(alg: &ChevalleyAlgebra, h: &[i64]) -> Result<GradedDecomposition> {
    if h.len() != alg.rank() {
        return Err(Error::TypeMismatch {
            expected: format!("grading vector of length {}", alg.rank()),
            found: format!("length {}", h.len()),
        });
    }
    let rs = alg.root_system();
    let mut components: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, root) in alg.roots.iter().enumerate() {
        components.entry(rs.evaluate(root, h)).or_default().push(k);
    }
    Ok(GradedDecomposition { grader: h.to_vec(), components, rank: alg.rank() })
}

/// Random draws used by [`generic_bracket_rank`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub seed: u64,
    /// Coefficients of the random element are drawn from `[-bound, bound]`.
    pub bound: i64,
}

impl Default for Genericity {
    fn default() -> Self {
        Genericity { seed: 0x5eed, bound: 20 }
    }
}

/// SplitMix64 finalizer; derives independent stream seeds.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Matrix of `x -> [x, e]` from degree 0 to degree 2, rows indexed by the
/// degree-2 roots and columns by the degree-0 basis.
pub fn bracket_matrix(alg: &ChevalleyAlgebra, g: &GradedDecomposition, e: &[i64]) -> Vec<Vec<i64>> {
    let rs = alg.root_system();
    let two = g.roots_of_degree(2);
    let zero = g.roots_of_degree(0);
    debug_assert_eq!(two.len(), e.len());
    let row_of: BTreeMap<usize, usize> = two.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let ncols = alg.rank() + zero.len();
    let mut m = vec![vec![0i64; ncols]; two.len()];
    for (row, (&beta, &c)) in two.iter().zip(e).enumerate() {
        for i in 0..alg.rank() {
            m[row][i] = c * rs.pairing(alg.root(beta), i);
        }
    }
    for (col, &gamma) in zero.iter().enumerate() {
        for (&beta, &c) in two.iter().zip(e) {
            if c == 0 {
                continue;
            }
            if let Some(s) = alg.root_sum(gamma, beta) {
                let row = row_of[&s];
                m[row][alg.rank() + col] += c * alg.structure_constant(gamma, beta);
            }
        }
    }
    m
}

fn random_element(len: usize, genericity: Genericity, trial: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(genericity.seed, trial));
    (0..len).map(|_| rng.gen_range(-genericity.bound..=genericity.bound)).collect()
}

/// Maximum over `trials` random `e` in degree 2 of the rank of
/// `ad(e)` restricted to degree 0. Ranks are exact.
pub fn generic_bracket_rank(
    alg: &ChevalleyAlgebra,
    g: &GradedDecomposition,
    trials: usize,
    genericity: Genericity,
) -> Result<usize> {
    if trials < 1 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let two = g.roots_of_degree(2).len();
    if two == 0 {
        return Err(Error::Precondition("degree-2 component is empty".into()));
    }
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let e = random_element(two, genericity, t);
            integer_rank(&bracket_matrix(alg, g, &e))
        })
        .max()
        .unwrap_or(0))
}

/// Matrix of `y -> [e, y]` from degree -2 to degree 0. Columns follow the
/// degree-2 roots (column `j` is `e_{-beta_j}`); rows are the simple coroots
/// followed by the degree-0 roots.
pub fn lowering_matrix(alg: &ChevalleyAlgebra, g: &GradedDecomposition, e: &[i64]) -> Vec<Vec<i64>> {
    let r = alg.rank();
    let two = g.roots_of_degree(2);
    let zero = g.roots_of_degree(0);
    let row_of: BTreeMap<usize, usize> = zero.iter().enumerate().map(|(i, &k)| (k, r + i)).collect();
    let mut m = vec![vec![0i64; two.len()]; r + zero.len()];
    for (col, &beta) in two.iter().enumerate() {
        let minus = alg.negative_of(beta);
        for (&alpha, &c) in two.iter().zip(e) {
            if c == 0 {
                continue;
            }
            if alpha == beta {
                for (i, &x) in alg.coroots[alpha].iter().enumerate() {
                    m[i][col] += c * x;
                }
            } else if let Some(s) = alg.root_sum(alpha, minus) {
                m[row_of[&s]][col] += c * alg.structure_constant(alpha, minus);
            }
        }
    }
    m
}

/// `h` expressed in the simple coroots, scaled to a primitive integer vector.
fn coroot_coordinates(alg: &ChevalleyAlgebra, h: &[i64]) -> Vec<i64> {
    let cartan = QMatrix::from_int_rows(alg.root_system().cartan_matrix());
    let c: Vec<Rational> = h.iter().map(|&x| rat(x)).collect();
    let x = cartan.transpose().solve(&c).expect("Cartan matrix is invertible");
    clear_denominators(&x).iter().map(|v| small(v).expect("small coroot coordinates")).collect()
}

/// Exact test of `target in span(columns of m)`, given that `m` has full
/// column rank modulo p. Returns `None` when that premise fails.
fn in_column_span_full_rank(m: &[Vec<i64>], target: &[i64]) -> Option<bool> {
    let ncols = m.first().map_or(0, Vec::len);
    let rows = independent_rows_mod_p(m)?;
    if rows.len() != ncols {
        return None;
    }
    let square = QMatrix::from_int_rows(&rows.iter().map(|&i| m[i].clone()).collect::<Vec<_>>());
    let rhs: Vec<Rational> = rows.iter().map(|&i| rat(target[i])).collect();
    let y = square.solve(&rhs)?;
    let full = QMatrix::from_int_rows(m);
    let image = full.mul_vec(&y);
    Some(image.iter().zip(target).all(|(a, &b)| *a == rat(b)))
}

/// Necessary conditions on the graded dimensions: `ad e` maps `g_k` onto
/// `g_{k+2}` for `k >= -1`, and `g_1` carries a symplectic form.
fn sl2_shape(g: &GradedDecomposition) -> bool {
    let top = g.components.keys().copied().max().unwrap_or(0);
    g.dim_of_degree(1).is_multiple_of(2) && (-1..top).all(|k| g.dim_of_degree(k) >= g.dim_of_degree(k + 2))
}

/// Dynkin's test for a dominant `h` with weights in `{0,1,2}`: some trial
/// `e` in degree 2 has `[g_0, e] = g_2` and `h in [e, g_{-2}]`. The second
/// condition makes `(h, e, f)` an sl2-triple for some `f`.
///
/// A successful trial is an exact certificate; trials are tried in order.
pub fn dynkin_test(alg: &ChevalleyAlgebra, g: &GradedDecomposition, trials: usize, genericity: Genericity) -> bool {
    let two = g.roots_of_degree(2).len();
    if two == 0 || !sl2_shape(g) {
        return false;
    }
    let h = coroot_coordinates(alg, g.grader());
    let mut target = h.clone();
    target.extend(std::iter::repeat_n(0, g.roots_of_degree(0).len()));
    (0..trials as u64).any(|t| {
        let e = random_element(two, genericity, t);
        rank_mod_p(&bracket_matrix(alg, g, &e)) == two
            && in_column_span_full_rank(&lowering_matrix(alg, g, &e), &target) == Some(true)
    })
}
