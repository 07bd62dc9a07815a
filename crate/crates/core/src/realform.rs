//! Simple real Lie algebras through Satake diagrams: real rank, a-hyperbolic
//! rank and the matching test against weighted Dynkin diagrams.
//!
//! Node indices are 1-based in the Bourbaki numbering used by
//! [`crate::rootsys`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::integer_rank;
use crate::error::{Error, Result};
use crate::nilporb::Characteristic;
use crate::rootsys::{build_root_system, SimpleType, WeylGroup};

pub const CATALOG_SCHEMA: &str = "lie-proper/catalog/v1";

const BUNDLED_CATALOG: &str = include_str!("../data/catalog.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatakeDiagram {
    #[serde(rename = "type")]
    ty: SimpleType,
    black: BTreeSet<usize>,
    /// Arrow pairs, each stored as `(a, b)` with `a < b`, sorted.
    arrows: Vec<(usize, usize)>,
}

impl SatakeDiagram {
    pub fn new(ty: SimpleType, black: impl IntoIterator<Item = usize>, arrows: &[(usize, usize)]) -> Result<Self> {
        let r = ty.rank();
        let black: BTreeSet<usize> = black.into_iter().collect();
        let check = |i: usize| {
            if i == 0 || i > r {
                Err(Error::IndexOutOfRange { index: i, rank: r })
            } else {
                Ok(())
            }
        };
        for &b in &black {
            check(b)?;
        }
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::with_capacity(arrows.len());
        for &(a, b) in arrows {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::Catalog(format!("{ty}: arrow joins node {a} to itself")));
            }
            if black.contains(&a) || black.contains(&b) {
                return Err(Error::Catalog(format!("{ty}: arrow {a}<->{b} touches a black node")));
            }
            if !seen.insert(a) || !seen.insert(b) {
                return Err(Error::Catalog(format!("{ty}: node in more than one arrow ({a}<->{b})")));
            }
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort();
        Ok(SatakeDiagram { ty, black, arrows: pairs })
    }

    pub fn split(ty: SimpleType) -> Self {
        SatakeDiagram { ty, black: BTreeSet::new(), arrows: Vec::new() }
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn black_nodes(&self) -> &BTreeSet<usize> {
        &self.black
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn is_split(&self) -> bool {
        self.black.is_empty() && self.arrows.is_empty()
    }

    /// Number of orbits of the arrow involution on white nodes.
    pub fn real_rank(&self) -> usize {
        self.ty.rank() - self.black.len() - self.arrows.len()
    }
}

pub fn real_rank(s: &SatakeDiagram) -> usize {
    s.real_rank()
}

/// Black nodes carry weight 0 and arrow-joined nodes carry equal weights.
pub fn matches_satake(w: &Characteristic, s: &SatakeDiagram) -> Result<bool> {
    if w.simple_type() != s.ty {
        return Err(Error::TypeMismatch { expected: s.ty.to_string(), found: w.simple_type().to_string() });
    }
    let wt = w.weights();
    Ok(s.black.iter().all(|&b| wt[b - 1] == 0) && s.arrows.iter().all(|&(a, b)| wt[a - 1] == wt[b - 1]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFormDescriptor {
    pub name: String,
    pub satake: SatakeDiagram,
    pub real_rank: usize,
    pub ahyp_rank: usize,
}

impl RealFormDescriptor {
    /// Builds a descriptor, reading the a-hyperbolic rank from the table
    /// rules (or the real rank off the table).
    pub fn new(name: &str, satake: SatakeDiagram) -> Result<Self> {
        let real_rank = satake.real_rank();
        let ahyp_rank = match table_row(name) {
            Some(row) => {
                if row.real_rank != real_rank {
                    return Err(Error::Catalog(format!(
                        "{name}: Satake diagram gives real rank {real_rank}, table row says {}",
                        row.real_rank
                    )));
                }
                row.ahyp_rank
            }
            None => real_rank,
        };
        Ok(RealFormDescriptor { name: name.to_string(), satake, real_rank, ahyp_rank })
    }

    pub fn simple_type(&self) -> SimpleType {
        self.satake.ty
    }

    pub fn is_split(&self) -> bool {
        self.satake.is_split()
    }
}

impl fmt::Display for RealFormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn ahyp_rank(d: &RealFormDescriptor) -> usize {
    d.ahyp_rank
}

/// `dim ker(iota - 1)` for `iota = -w0`, on the full Cartan of the split form.
pub fn ahyp_rank_split_computed(ty: SimpleType) -> usize {
    let w = WeylGroup::new(&build_root_system(ty));
    let mut m = w.longest_element_action();
    // -w0 - 1 has the same kernel as w0 + 1
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += 1;
    }
    ty.rank() - integer_rank(&m)
}

/// A row of the table of algebras whose a-hyperbolic rank differs from the
/// real rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub ahyp_rank: usize,
    pub real_rank: usize,
}

fn row(ahyp_rank: usize, real_rank: usize) -> Option<TableRow> {
    Some(TableRow { ahyp_rank, real_rank })
}

/// Canonical form of a real-form label: lowercase, no whitespace, `ℝ`/`ℂ`
/// spelled `r`/`c`.
pub fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(|c| match c {
            'ℝ' => "r".chars().collect::<Vec<_>>(),
            'ℂ' => "c".chars().collect(),
            '−' => "-".chars().collect(),
            c => c.to_lowercase().collect(),
        })
        .collect()
}

fn args<'a>(name: &'a str, prefix: &str) -> Option<Vec<&'a str>> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').collect())
}

/// Table lookup by name. Families are matched by pattern with their
/// parameter ranges, so no rank bound is built in. Complex algebras viewed
/// as real (`sl(n,C)`, `so(4k+2,C)`, `e6(C)`) are covered here even though
/// the catalog only holds absolutely simple forms.
pub fn table_row(name: &str) -> Option<TableRow> {
    let n = normalize_name(name);
    if let Some(a) = args(&n, "sl") {
        let [size, field] = a[..] else { return None };
        let size: usize = size.parse().ok()?;
        if field != "r" && field != "c" {
            return None;
        }
        let k = size / 2;
        return match size % 2 {
            0 if k >= 2 => row(k, 2 * k - 1),
            1 if k >= 1 => row(k, 2 * k),
            _ => None,
        };
    }
    if let Some(a) = args(&n, "su*") {
        let [size] = a[..] else { return None };
        let size: usize = size.parse().ok()?;
        let k = size / 4;
        return match size % 4 {
            0 if k >= 2 => row(k, 2 * k - 1),
            2 if k >= 1 => row(k, 2 * k),
            _ => None,
        };
    }
    if let Some(a) = args(&n, "so") {
        return match a[..] {
            [size, "c"] => {
                let size: usize = size.parse().ok()?;
                let k = size / 4;
                (size % 4 == 2 && k >= 2).then_some(TableRow { ahyp_rank: 2 * k, real_rank: 2 * k + 1 })
            }
            [p, q] => {
                let (p, q): (usize, usize) = (p.parse().ok()?, q.parse().ok()?);
                let k = p / 2;
                (p == q && p % 2 == 1 && k >= 2).then_some(TableRow { ahyp_rank: 2 * k, real_rank: 2 * k + 1 })
            }
            _ => None,
        };
    }
    match n.as_str() {
        "e6(6)" | "e6(i)" => row(4, 6),
        "e6(-26)" | "e6(iv)" => row(1, 2),
        "e6(c)" => row(4, 6),
        _ => None,
    }
}

/// Semisimple rank data: the summand ranks add up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductiveRankProfile {
    pub summands: Vec<RealFormDescriptor>,
    pub real_rank: usize,
    pub ahyp_rank: usize,
}

impl ReductiveRankProfile {
    pub fn new(summands: Vec<RealFormDescriptor>) -> Self {
        let real_rank = summands.iter().map(|d| d.real_rank).sum();
        let ahyp_rank = summands.iter().map(|d| d.ahyp_rank).sum();
        ReductiveRankProfile { summands, real_rank, ahyp_rank }
    }

    pub fn is_split(&self) -> bool {
        self.summands.iter().all(RealFormDescriptor::is_split)
    }

    pub fn types(&self) -> Vec<SimpleType> {
        self.summands.iter().map(RealFormDescriptor::simple_type).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    schema: String,
    #[serde(default)]
    form: Vec<FormRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormRecord {
    name: String,
    #[serde(rename = "type")]
    ty: String,
    #[serde(default)]
    black: Vec<usize>,
    #[serde(default)]
    arrows: Vec<[usize; 2]>,
    #[serde(default)]
    aliases: Vec<String>,
    real_rank: Option<usize>,
    ahyp_rank: Option<usize>,
}

/// Real forms by name. Read-only after loading.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    forms: Vec<RealFormDescriptor>,
    index: HashMap<String, usize>,
}

impl Catalog {
    /// The catalog shipped with the library.
    pub fn bundled() -> &'static Catalog {
        static BUNDLED: OnceLock<Catalog> = OnceLock::new();
        BUNDLED.get_or_init(|| Catalog::from_toml_str(BUNDLED_CATALOG).expect("bundled catalog is valid"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Catalog> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Catalog::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Catalog> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema != CATALOG_SCHEMA {
            return Err(Error::Schema { expected: CATALOG_SCHEMA.into(), found: file.schema });
        }
        let mut catalog = Catalog::default();
        for rec in file.form {
            let ty: SimpleType = rec.ty.parse()?;
            let arrows: Vec<(usize, usize)> = rec.arrows.iter().map(|&[a, b]| (a, b)).collect();
            let satake = SatakeDiagram::new(ty, rec.black, &arrows)?;
            let d = RealFormDescriptor::new(&rec.name, satake)?;
            for (field, expected, got) in
                [("real_rank", rec.real_rank, d.real_rank), ("ahyp_rank", rec.ahyp_rank, d.ahyp_rank)]
            {
                if expected.is_some_and(|e| e != got) {
                    return Err(Error::Catalog(format!(
                        "{}: {field} recorded as {}, computed {got}",
                        rec.name,
                        expected.unwrap_or_default()
                    )));
                }
            }
            let slot = catalog.forms.len();
            for key in std::iter::once(&rec.name).chain(&rec.aliases) {
                if catalog.index.insert(normalize_name(key), slot).is_some() {
                    return Err(Error::Catalog(format!("duplicate name `{key}`")));
                }
            }
            catalog.forms.push(d);
        }
        Ok(catalog)
    }

    pub fn forms(&self) -> &[RealFormDescriptor] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Result<&RealFormDescriptor> {
        self.index
            .get(&normalize_name(name))
            .map(|&i| &self.forms[i])
            .ok_or_else(|| Error::UnknownRealForm(name.to_string()))
    }

    pub fn split_form(&self, ty: SimpleType) -> Option<&RealFormDescriptor> {
        self.forms.iter().find(|d| d.simple_type() == ty && d.is_split())
    }

    /// Resolves `"sl(2,R)+sl(3,R)"` (or `⊕`-separated) into a profile.
    pub fn profile(&self, names: &str) -> Result<ReductiveRankProfile> {
        let parts = split_summands(names);
        if parts.is_empty() {
            return Err(Error::Parse(format!("no summands in `{names}`")));
        }
        let summands = parts.iter().map(|p| self.lookup(p).cloned()).collect::<Result<Vec<_>>>()?;
        Ok(ReductiveRankProfile::new(summands))
    }
}

/// Splits a semisimple label at top-level `+` or `⊕`.
pub fn split_summands(names: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in names.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '⊕') {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}
