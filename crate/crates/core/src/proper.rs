//! Deciding whether `G/H` admits a proper action of a non-virtually-abelian
//! discrete subgroup.
//!
//! Pairs are first sorted by rank comparisons ([`triage`]). Pairs of class
//! L3 with both algebras split go through the orbit test of
//! [`check_proper_sl2`]: some characteristic `h0` of a nonzero nilpotent
//! orbit of `g` must have its whole Weyl orbit outside the Cartan of `h`.
//!
//! Orbit-point membership in `span(M)` has two independent routes: the fast
//! one tests `N p = 0` for an integral basis `N` of the left kernel of `M`,
//! the replay route in [`verify_certificate`] compares ranks of `[M | p]` and
//! `M` and checks negative certificates by substitution.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{clear_denominators, integer_rank, rat, small, QMatrix, Rational};
use crate::embed::{CartanEmbedding, PairRecord};
use crate::error::{Error, Result};
use crate::nilporb::{enumerate_characteristics_with, Characteristic, ScanOptions};
use crate::realform::{RealFormDescriptor, ReductiveRankProfile};
use crate::rootsys::{build_root_system, WeylGroup, DEFAULT_ORBIT_CAP};

pub const CERTIFICATE_SCHEMA: &str = "lie-proper/certificate/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriageClass {
    L0,
    L1,
    L2,
    L3,
}

impl fmt::Display for TriageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// First matching rule wins: equal real ranks, equal a-hyperbolic ranks,
/// `ahyp g > rank_R h`, otherwise L3.
pub fn triage_ranks(g: &RealFormDescriptor, h: &ReductiveRankProfile) -> TriageClass {
    if g.real_rank == h.real_rank {
        TriageClass::L0
    } else if g.ahyp_rank == h.ahyp_rank {
        TriageClass::L1
    } else if g.ahyp_rank > h.real_rank {
        TriageClass::L2
    } else {
        TriageClass::L3
    }
}

pub fn triage(pair: &PairRecord) -> TriageClass {
    triage_ranks(&pair.g, &ReductiveRankProfile::new(pair.h.clone()))
}

/// `true`, `false` or `"undecided"` in serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Admits {
    Yes,
    No,
    Undecided,
}

impl Admits {
    pub fn exit_code(self) -> i32 {
        match self {
            Admits::Yes => 0,
            Admits::No => 1,
            Admits::Undecided => 2,
        }
    }
}

impl From<bool> for Admits {
    fn from(b: bool) -> Self {
        if b {
            Admits::Yes
        } else {
            Admits::No
        }
    }
}

impl fmt::Display for Admits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admits::Yes => "admits",
            Admits::No => "does not admit",
            Admits::Undecided => "undecided",
        })
    }
}

impl Serialize for Admits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Admits::Yes => s.serialize_bool(true),
            Admits::No => s.serialize_bool(false),
            Admits::Undecided => s.serialize_str("undecided"),
        }
    }
}

impl<'de> Deserialize<'de> for Admits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            B(bool),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::B(b) => Ok(b.into()),
            Raw::S(s) if s == "undecided" => Ok(Admits::Undecided),
            Raw::S(s) => Err(serde::de::Error::custom(format!("unexpected verdict `{s}`"))),
        }
    }
}

/// A Weyl image of a characteristic lying in the Cartan of `h`:
/// `image = M coefficients`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub characteristic: Characteristic,
    pub image: Vec<i64>,
    #[serde(with = "crate::arith::rational_vec")]
    pub coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evidence {
    /// No point of the witness orbit lies in the Cartan of `h`.
    Witness { characteristic: Characteristic, orbit_size: usize },
    /// One refutation per characteristic, in lexicographic order.
    Refuted { refutations: Vec<Refutation> },
}

/// Self-contained record of an orbit-test run, replayable by
/// [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub pair: String,
    pub embedding: CartanEmbedding,
    pub seed: u64,
    pub admits: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProperOptions {
    pub cap: usize,
    pub scan: ScanOptions,
}

impl Default for ProperOptions {
    fn default() -> Self {
        ProperOptions { cap: DEFAULT_ORBIT_CAP, scan: ScanOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub id: String,
    pub g: String,
    pub h: String,
    pub triage: TriageClass,
    pub admits_nonabelian: Admits,
    pub witness: Option<Characteristic>,
    pub certificate: Option<Certificate>,
}

/// Integral basis of `{n : n^T M = 0}`.
fn left_annihilator(m: &QMatrix) -> Vec<Vec<i64>> {
    if m.ncols() == 0 {
        return (0..m.nrows()).map(|i| (0..m.nrows()).map(|j| i64::from(i == j)).collect()).collect();
    }
    m.transpose()
        .kernel()
        .iter()
        .map(|v| clear_denominators(v).iter().map(|x| small(x).expect("annihilator entries fit in i64")).collect())
        .collect()
}

fn annihilated(n: &[Vec<i64>], p: &[i64]) -> bool {
    n.iter().all(|row| row.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() == 0)
}

enum OrbitOutcome {
    Clear(usize),
    Hit(Refutation),
    Skipped,
}

fn solve_in_span(m: &QMatrix, p: &[i64]) -> Option<Vec<Rational>> {
    if m.ncols() == 0 {
        return p.iter().all(|&x| x == 0).then(Vec::new);
    }
    let target: Vec<Rational> = p.iter().map(|&x| rat(x)).collect();
    m.solve(&target)
}

/// The orbit test on an embedding, against the given characteristics
/// (processed in the given order).
///
/// Returns the evidence for the first characteristic whose orbit misses
/// `span(M)`, or refutations for all of them. Orbits are walked in
/// parallel; a shared index makes later orbits stop once an earlier one is
/// known to be clear, so the result does not depend on scheduling.
pub fn orbit_test(e: &CartanEmbedding, characteristics: &[Characteristic], cap: usize) -> Result<Evidence> {
    let w = WeylGroup::new(&build_root_system(e.g_type));
    let ann = left_annihilator(&e.matrix);
    let best = AtomicUsize::new(usize::MAX);
    let outcomes: Vec<Result<OrbitOutcome>> = characteristics
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            if c.simple_type() != e.g_type {
                return Err(Error::TypeMismatch { expected: e.g_type.to_string(), found: c.simple_type().to_string() });
            }
            if best.load(Ordering::Relaxed) < k {
                return Ok(OrbitOutcome::Skipped);
            }
            let mut hit = None;
            let mut cancelled = false;
            let done = w.visit_orbit(&c.h_ints(), cap, |p| {
                if best.load(Ordering::Relaxed) < k {
                    cancelled = true;
                    return ControlFlow::Break(());
                }
                if annihilated(&ann, p) {
                    hit = Some(p.to_vec());
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            match (done, hit) {
                (_, Some(image)) => {
                    let coefficients = solve_in_span(&e.matrix, &image)
                        .ok_or_else(|| Error::Consistency("annihilator and solver disagree".into()))?;
                    Ok(OrbitOutcome::Hit(Refutation { characteristic: c.clone(), image, coefficients }))
                }
                (Some(n), None) => {
                    best.fetch_min(k, Ordering::Relaxed);
                    Ok(OrbitOutcome::Clear(n))
                }
                (None, None) if cancelled => Ok(OrbitOutcome::Skipped),
                (None, None) => Err(Error::Consistency("orbit walk stopped without a result".into())),
            }
        })
        .collect();
    let mut refutations = Vec::new();
    for (c, out) in characteristics.iter().zip(outcomes) {
        match out? {
            OrbitOutcome::Clear(n) => return Ok(Evidence::Witness { characteristic: c.clone(), orbit_size: n }),
            OrbitOutcome::Hit(r) => refutations.push(r),
            OrbitOutcome::Skipped => {
                return Err(Error::Consistency("orbit skipped before the first clear orbit".into()))
            }
        }
    }
    Ok(Evidence::Refuted { refutations })
}

fn require_split(pair: &PairRecord) -> Result<()> {
    if let Some(d) = std::iter::once(&pair.g).chain(&pair.h).find(|d| !d.is_split()) {
        return Err(Error::Precondition(format!(
            "{} is not split; the orbit test needs split g and h (use the triage result instead)",
            d.name
        )));
    }
    Ok(())
}

/// Runs the orbit test on a split pair, whatever its triage class.
pub fn check_proper_sl2(pair: &PairRecord, opts: &ProperOptions) -> Result<PairVerdict> {
    require_split(pair)?;
    let characteristics = enumerate_characteristics_with(pair.embedding.g_type, &opts.scan)?;
    let evidence = orbit_test(&pair.embedding, &characteristics, opts.cap)?;
    let (admits, witness) = match &evidence {
        Evidence::Witness { characteristic, .. } => (true, Some(characteristic.clone())),
        Evidence::Refuted { .. } => (false, None),
    };
    let certificate = Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        pair: pair.id.clone(),
        embedding: pair.embedding.clone(),
        seed: opts.scan.seed,
        admits,
        evidence,
    };
    Ok(PairVerdict {
        id: pair.id.clone(),
        g: pair.g.name.clone(),
        h: pair.h_label(),
        triage: triage(pair),
        admits_nonabelian: admits.into(),
        witness,
        certificate: Some(certificate),
    })
}

/// Triage, then the orbit test for split L3 pairs. Non-split L3 pairs are
/// undecided.
pub fn decide(pair: &PairRecord, opts: &ProperOptions) -> Result<PairVerdict> {
    let class = triage(pair);
    let plain = |admits: Admits| PairVerdict {
        id: pair.id.clone(),
        g: pair.g.name.clone(),
        h: pair.h_label(),
        triage: class,
        admits_nonabelian: admits,
        witness: None,
        certificate: None,
    };
    match class {
        TriageClass::L0 | TriageClass::L1 => Ok(plain(Admits::No)),
        TriageClass::L2 => Ok(plain(Admits::Yes)),
        TriageClass::L3 if require_split(pair).is_err() => Ok(plain(Admits::Undecided)),
        TriageClass::L3 => check_proper_sl2(pair, opts),
    }
}

/// Verdicts in input order; a failing record does not affect the others.
pub fn classify_database(records: &[PairRecord], opts: &ProperOptions) -> Vec<Result<PairVerdict>> {
    records.par_iter().map(|r| decide(r, opts)).collect()
}

fn rank_route_in_span(m: &[Vec<i64>], p: &[i64]) -> bool {
    let rm = integer_rank(m);
    let aug: Vec<Vec<i64>> = m.iter().zip(p).map(|(row, &x)| row.iter().copied().chain([x]).collect()).collect();
    integer_rank(&aug) == rm
}

/// Columns of `M` scaled to integers; the span is unchanged.
fn integral_columns(m: &QMatrix) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(m.ncols()); m.nrows()];
    for j in 0..m.ncols() {
        let col: Vec<BigInt> = clear_denominators(&m.column(j));
        for (row, x) in out.iter_mut().zip(&col) {
            row.push(small(x).expect("column entries fit in i64"));
        }
    }
    out
}

/// Replays a certificate by the rank route.
///
/// A witness is checked by re-walking its orbit and comparing
/// `rank [M | p]` with `rank M` at every point. A negative certificate is
/// checked by substituting the coefficients, reducing each image to the
/// dominant chamber, and checking that the refuted characteristics are
/// exactly the current enumeration.
pub fn verify_certificate(cert: &Certificate, opts: &ProperOptions) -> Result<bool> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(Error::Schema { expected: CERTIFICATE_SCHEMA.into(), found: cert.schema.clone() });
    }
    let e = &cert.embedding;
    let w = WeylGroup::new(&build_root_system(e.g_type));
    let m = integral_columns(&e.matrix);
    let scan = ScanOptions { seed: cert.seed, ..opts.scan };
    let characteristics = enumerate_characteristics_with(e.g_type, &scan)?;
    match &cert.evidence {
        Evidence::Witness { characteristic, orbit_size } => {
            if !cert.admits || !characteristics.contains(characteristic) {
                return Ok(false);
            }
            let mut clear = true;
            let n = w.visit_orbit(&characteristic.h_ints(), opts.cap, |p| {
                if rank_route_in_span(&m, p) {
                    clear = false;
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            Ok(clear && n == Some(*orbit_size))
        }
        Evidence::Refuted { refutations } => {
            if cert.admits || refutations.len() != characteristics.len() {
                return Ok(false);
            }
            for (r, c) in refutations.iter().zip(&characteristics) {
                if &r.characteristic != c || r.coefficients.len() != e.matrix.ncols() {
                    return Ok(false);
                }
                let image: Vec<Rational> = r.image.iter().map(|&x| rat(x)).collect();
                let substituted = if e.matrix.ncols() == 0 {
                    vec![rat(0); e.matrix.nrows()]
                } else {
                    e.matrix.mul_vec(&r.coefficients)
                };
                if substituted != image || w.dominant_int(&r.image) != c.h_ints() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
