//! Weighted Dynkin diagrams (characteristics) of nilpotent orbits.
//!
//! A dominant `h` with weights in `{0,1,2}` is scanned with Dynkin's test:
//! a generic `e` of degree 2 must satisfy `[g_0, e] = g_2`, and `h` must lie
//! in `[e, g_{-2}]` so that `(h, e, f)` is an sl2-triple. Density alone
//! admits `(2,0)` for A2, whose generic `e` is the minimal nilpotent.
//! [`scan_characteristics`] tests all `3^r - 1` candidates. Classical types
//! are checked against partition recipes, exceptional ones against
//! [`EXCEPTIONAL_ORBIT_COUNTS`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{build_chevalley, dynkin_test, grade_by_ints, mix_seed, Genericity};
use crate::error::{Error, Result};
use crate::rootsys::{build_root_system, CartanVector, Family, SimpleType};

/// Numbers of nonzero nilpotent orbits of the exceptional algebras.
///
/// Cross-check values from the standard tables (Collingwood–McGovern,
/// "Nilpotent orbits in semisimple Lie algebras").
pub const EXCEPTIONAL_ORBIT_COUNTS: [(&str, usize); 5] = [("G2", 4), ("F4", 15), ("E6", 20), ("E7", 44), ("E8", 69)];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Characteristic {
    #[serde(rename = "type")]
    ty: SimpleType,
    weights: Vec<u8>,
}

impl Characteristic {
    pub fn new(ty: SimpleType, weights: Vec<u8>) -> Result<Self> {
        if weights.len() != ty.rank() {
            return Err(Error::TypeMismatch {
                expected: format!("{} weights for {ty}", ty.rank()),
                found: format!("{}", weights.len()),
            });
        }
        if weights.iter().any(|&w| w > 2) || weights.iter().all(|&w| w == 0) {
            return Err(Error::Precondition(format!("weights {weights:?} are not a nonzero {{0,1,2}} diagram")));
        }
        Ok(Characteristic { ty, weights })
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    /// The Cartan vector, identical to the weights in coweight coordinates.
    pub fn h(&self) -> CartanVector {
        CartanVector::from_ints(&self.h_ints())
    }

    pub fn h_ints(&self) -> Vec<i64> {
        self.weights.iter().map(|&w| w as i64).collect()
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Randomness used by the density test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScanOptions {
    pub seed: u64,
    pub trials: usize,
    pub bound: i64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        let g = Genericity::default();
        ScanOptions { seed: g.seed, trials: 8, bound: g.bound }
    }
}

fn candidate(code: u64, rank: usize) -> Vec<i64> {
    let mut c = code;
    (0..rank)
        .map(|_| {
            let w = (c % 3) as i64;
            c /= 3;
            w
        })
        .rev()
        .collect()
}

/// The raw density scan, without oracle cross-checks. Sorted lexicographically.
pub fn scan_characteristics(ty: SimpleType, opts: &ScanOptions) -> Vec<Characteristic> {
    let rs = build_root_system(ty);
    let alg = build_chevalley(&rs);
    let r = ty.rank();
    let total = 3u64.pow(r as u32);
    let found: BTreeSet<Characteristic> = (1..total)
        .into_par_iter()
        .filter_map(|code| {
            let h = candidate(code, r);
            let g = grade_by_ints(&alg, &h).expect("length matches rank");
            let genericity = Genericity { seed: mix_seed(opts.seed, code), bound: opts.bound };
            dynkin_test(&alg, &g, opts.trials, genericity)
                .then(|| Characteristic { ty, weights: h.iter().map(|&w| w as u8).collect() })
        })
        .collect();
    found.into_iter().collect()
}

/// Characteristics of all nonzero nilpotent orbits of `ty`, sorted
/// lexicographically by weights.
///
/// Fails with [`Error::Consistency`] when the scan disagrees with the
/// partition oracle (classical types) or the orbit-count table
/// (exceptional types).
pub fn enumerate_characteristics(ty: SimpleType) -> Result<Vec<Characteristic>> {
    enumerate_characteristics_with(ty, &ScanOptions::default())
}

pub fn enumerate_characteristics_with(ty: SimpleType, opts: &ScanOptions) -> Result<Vec<Characteristic>> {
    static CACHE: OnceLock<Mutex<HashMap<(SimpleType, ScanOptions), Vec<Characteristic>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(ty, *opts)) {
        return Ok(hit.clone());
    }
    let scanned = scan_characteristics(ty, opts);
    cross_check(ty, &scanned)?;
    cache.lock().expect("cache lock").insert((ty, *opts), scanned.clone());
    Ok(scanned)
}

fn cross_check(ty: SimpleType, scanned: &[Characteristic]) -> Result<()> {
    if let Some(oracle) = classical_oracle(ty) {
        if oracle != scanned {
            let missing: Vec<String> =
                oracle.iter().filter(|c| !scanned.contains(c)).map(ToString::to_string).collect();
            let extra: Vec<String> = scanned.iter().filter(|c| !oracle.contains(c)).map(ToString::to_string).collect();
            return Err(Error::Consistency(format!(
                "{ty}: density scan disagrees with the partition oracle (missing {missing:?}, extra {extra:?})"
            )));
        }
    }
    if let Some(expected) = expected_exceptional_count(ty) {
        if expected != scanned.len() {
            return Err(Error::Consistency(format!(
                "{ty}: density scan found {} orbits, table lists {expected}",
                scanned.len()
            )));
        }
    }
    Ok(())
}

pub fn expected_exceptional_count(ty: SimpleType) -> Option<usize> {
    let name = ty.to_string();
    EXCEPTIONAL_ORBIT_COUNTS.iter().find(|(t, _)| *t == name).map(|&(_, n)| n)
}

pub fn orbit_count(ty: SimpleType) -> Result<usize> {
    Ok(enumerate_characteristics(ty)?.len())
}

/// All partitions of `n`, each in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Eigenvalues of `h` for the partition: a string `p-1, p-3, ..., 1-p` per
/// part, sorted in decreasing order.
fn eigenvalues(parts: &[usize]) -> Vec<i64> {
    let mut ev: Vec<i64> = parts.iter().flat_map(|&p| (0..p).map(move |k| p as i64 - 1 - 2 * k as i64)).collect();
    ev.sort_by(|a, b| b.cmp(a));
    ev
}

fn multiplicity(parts: &[usize], p: usize) -> usize {
    parts.iter().filter(|&&q| q == p).count()
}

fn to_characteristic(ty: SimpleType, weights: Vec<i64>) -> Characteristic {
    Characteristic { ty, weights: weights.into_iter().map(|w| w as u8).collect() }
}

fn sorted_set(v: Vec<Characteristic>) -> Vec<Characteristic> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Nonzero nilpotent orbits of `sl(n)` from the partitions of `n`.
pub fn partitions_oracle_a(n: usize) -> Result<Vec<Characteristic>> {
    if !(2..=9).contains(&n) {
        return Err(Error::Precondition(format!("type A oracle needs 2 <= n <= 9, got {n}")));
    }
    let ty = SimpleType::new(Family::A, n - 1)?;
    let out = partitions(n)
        .into_iter()
        .filter(|p| p[0] > 1)
        .map(|p| {
            let d = eigenvalues(&p);
            to_characteristic(ty, d.windows(2).map(|w| w[0] - w[1]).collect())
        })
        .collect();
    Ok(sorted_set(out))
}

/// `so(2n+1)`: partitions of `2n+1` whose even parts have even multiplicity.
pub fn partitions_oracle_b(rank: usize) -> Result<Vec<Characteristic>> {
    let ty = SimpleType::new(Family::B, rank)?;
    let out = partitions(2 * rank + 1)
        .into_iter()
        .filter(|p| p[0] > 1)
        .filter(|p| p.iter().all(|&q| q % 2 == 1 || multiplicity(p, q).is_multiple_of(2)))
        .map(|p| {
            let d = &eigenvalues(&p)[..rank];
            let mut w: Vec<i64> = d.windows(2).map(|x| x[0] - x[1]).collect();
            w.push(d[rank - 1]);
            to_characteristic(ty, w)
        })
        .collect();
    Ok(sorted_set(out))
}

/// `sp(2n)`: partitions of `2n` whose odd parts have even multiplicity.
pub fn partitions_oracle_c(rank: usize) -> Result<Vec<Characteristic>> {
    if rank < 3 {
        return Err(Error::InvalidType(format!("C{rank}")));
    }
    let ty = SimpleType::new(Family::C, rank)?;
    let out = partitions(2 * rank)
        .into_iter()
        .filter(|p| p[0] > 1)
        .filter(|p| p.iter().all(|&q| q % 2 == 0 || multiplicity(p, q).is_multiple_of(2)))
        .map(|p| {
            let d = &eigenvalues(&p)[..rank];
            let mut w: Vec<i64> = d.windows(2).map(|x| x[0] - x[1]).collect();
            w.push(2 * d[rank - 1]);
            to_characteristic(ty, w)
        })
        .collect();
    Ok(sorted_set(out))
}

/// `so(2n)`: partitions of `2n` whose even parts have even multiplicity; very
/// even partitions (all parts even) split into two orbits.
pub fn partitions_oracle_d(rank: usize) -> Result<Vec<Characteristic>> {
    let ty = SimpleType::new(Family::D, rank)?;
    let weights = |d: &[i64]| {
        let mut w: Vec<i64> = d.windows(2).map(|x| x[0] - x[1]).collect();
        w.push(d[rank - 2] + d[rank - 1]);
        w
    };
    let mut out = Vec::new();
    for p in partitions(2 * rank) {
        if p[0] == 1 || !p.iter().all(|&q| q % 2 == 1 || multiplicity(&p, q).is_multiple_of(2)) {
            continue;
        }
        let d = eigenvalues(&p)[..rank].to_vec();
        out.push(to_characteristic(ty, weights(&d)));
        if p.iter().all(|&q| q % 2 == 0) {
            // the other class: flip the sign of the last coordinate
            let mut flipped = d.clone();
            flipped[rank - 1] = -flipped[rank - 1];
            out.push(to_characteristic(ty, weights(&flipped)));
        }
    }
    Ok(sorted_set(out))
}

/// Partition oracle for a classical type, `None` for exceptional types.
pub fn classical_oracle(ty: SimpleType) -> Option<Vec<Characteristic>> {
    let r = ty.rank();
    let res = match ty.family() {
        Family::A => partitions_oracle_a(r + 1),
        Family::B => partitions_oracle_b(r),
        Family::C => partitions_oracle_c(r),
        Family::D => partitions_oracle_d(r),
        _ => return None,
    };
    Some(res.expect("valid classical type"))
}
