//! Cartan embeddings of semisimple subalgebras and the pair database.
//!
//! An embedding is a rational `r_g x r_h` matrix. Its columns are the images
//! of the fundamental coweights of the summands of `h` (concatenated in
//! summand order), written in the fundamental coweights of `g`. With this
//! convention a root `alpha` of `g`, given by its simple-root coefficients
//! `a`, restricts to the linear form `a^T M` on the Cartan of `h`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, rat, rat_frac, QMatrix, Rational};
use crate::error::{Error, Result};
use crate::realform::{Catalog, RealFormDescriptor};
use crate::rootsys::{build_root_system, Family, SimpleType};

pub const PAIRS_SCHEMA: &str = "lie-proper/pairs/v1";
pub const EMBEDDING_SCHEMA: &str = "lie-proper/embedding/v1";

const BUNDLED_PAIRS: &str = include_str!("../data/pairs.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanEmbedding {
    pub g_type: SimpleType,
    pub h_profile: Vec<SimpleType>,
    pub matrix: QMatrix,
}

impl CartanEmbedding {
    pub fn h_rank(&self) -> usize {
        self.h_profile.iter().map(|t| t.rank()).sum()
    }

    /// Same embedding with columns replaced by `matrix * t`.
    pub fn transformed(&self, t: &QMatrix) -> CartanEmbedding {
        CartanEmbedding { matrix: self.matrix.mul(t), ..self.clone() }
    }

    /// Same embedding followed by a linear map of the `g` Cartan.
    pub fn composed(&self, w: &QMatrix) -> CartanEmbedding {
        CartanEmbedding { matrix: w.mul(&self.matrix), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Tensor,
    Lambda2,
    Matrix,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Tensor => "tensor",
            EmbeddingKind::Lambda2 => "lambda2",
            EmbeddingKind::Matrix => "matrix",
        })
    }
}

fn sl(n: usize) -> SimpleType {
    SimpleType::new(Family::A, n - 1).expect("rank within bounds")
}

/// Diagonal of the fundamental coweight `j` (1-based) of `sl(n)`.
fn coweight_diagonal(n: usize, j: usize) -> Vec<Rational> {
    (0..n).map(|i| if i < j { rat_frac((n - j) as i64, n as i64) } else { rat_frac(-(j as i64), n as i64) }).collect()
}

/// Coweight coordinates `x_i - x_{i+1}` of a traceless diagonal.
fn diagonal_to_coweights(d: &[Rational]) -> Vec<Rational> {
    d.windows(2).map(|w| &w[0] - &w[1]).collect()
}

fn from_columns(nrows: usize, cols: &[Vec<Rational>]) -> QMatrix {
    let mut m = QMatrix::zeros(nrows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    m
}

/// `sl(a) + sl(b) -> sl(ab)` on `C^a (x) C^b`, basis `(i, j)` at position
/// `i * b + j`.
pub fn tensor_embedding(a: usize, b: usize) -> Result<CartanEmbedding> {
    let order: Vec<usize> = (0..a * b).collect();
    tensor_embedding_ordered(a, b, &order)
}

/// As [`tensor_embedding`], with the diagonal positions permuted: entry `k`
/// of the image diagonal is basis vector `order[k]`.
pub fn tensor_embedding_ordered(a: usize, b: usize, order: &[usize]) -> Result<CartanEmbedding> {
    if a < 2 || a > b {
        return Err(Error::Precondition(format!("tensor embedding needs 2 <= a <= b, got ({a}, {b})")));
    }
    if a * b > 9 {
        return Err(Error::Precondition(format!("tensor embedding into sl({}) exceeds rank 8", a * b)));
    }
    check_permutation(order, a * b)?;
    let image = |f: &dyn Fn(usize) -> Rational| {
        let d: Vec<Rational> = order.iter().map(|&k| f(k)).collect();
        diagonal_to_coweights(&d)
    };
    let mut cols = Vec::new();
    for j in 1..a {
        let d = coweight_diagonal(a, j);
        cols.push(image(&|k| d[k / b].clone()));
    }
    for j in 1..b {
        let d = coweight_diagonal(b, j);
        cols.push(image(&|k| d[k % b].clone()));
    }
    Ok(CartanEmbedding { g_type: sl(a * b), h_profile: vec![sl(a), sl(b)], matrix: from_columns(a * b - 1, &cols) })
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n || !order.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true)) {
        return Err(Error::Precondition(format!("{order:?} is not a permutation of 0..{n}")));
    }
    Ok(())
}

/// `sl(4) -> sl(6)` on the exterior square, pairs `i < j` in lexicographic
/// order.
pub fn lambda2_embedding() -> CartanEmbedding {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let cols: Vec<Vec<Rational>> = (1..4)
        .map(|j| {
            let d = coweight_diagonal(4, j);
            let image: Vec<Rational> = pairs.iter().map(|&(p, q)| &d[p] + &d[q]).collect();
            diagonal_to_coweights(&image)
        })
        .collect();
    CartanEmbedding { g_type: sl(6), h_profile: vec![sl(4)], matrix: from_columns(5, &cols) }
}

/// An externally supplied matrix, accepted only if it validates.
pub fn matrix_embedding(g_type: SimpleType, h_profile: Vec<SimpleType>, matrix: QMatrix) -> Result<CartanEmbedding> {
    let e = CartanEmbedding { g_type, h_profile, matrix };
    validate_embedding(&e)?;
    Ok(e)
}

/// Outcome of the root-restriction check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub g_type: SimpleType,
    pub h_profile: Vec<SimpleType>,
    pub column_rank: usize,
    /// Number of roots of `h` matched by restricted roots of `g`.
    pub h_roots: usize,
    /// Restrictions left after removing one copy of every `h` root, plus one
    /// zero form per Cartan direction of `g` not covered by `h`. Sorted.
    pub module_weights: Vec<WeightForm>,
}

impl ValidationReport {
    /// `dim g - dim h`.
    pub fn module_dimension(&self) -> usize {
        self.module_weights.len()
    }

    pub fn zero_weights(&self) -> usize {
        self.module_weights.iter().filter(|w| w.0.iter().all(|x| *x == rat(0))).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightForm(#[serde(with = "crate::arith::rational_vec")] pub Vec<Rational>);

impl fmt::Display for WeightForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Restricts every root of `g` to the Cartan of `h` and removes the roots of
/// each `h` summand, one copy each. Fails naming the first `h` root that is
/// not found.
pub fn validate_embedding(e: &CartanEmbedding) -> Result<ValidationReport> {
    let rg = e.g_type.rank();
    let rh = e.h_rank();
    if e.matrix.nrows() != rg || e.matrix.ncols() != rh {
        return Err(Error::Embedding(format!(
            "matrix is {}x{}, expected {rg}x{rh} for {} in {}",
            e.matrix.nrows(),
            e.matrix.ncols(),
            profile_label(&e.h_profile),
            e.g_type
        )));
    }
    let column_rank = e.matrix.rank();
    if column_rank != rh {
        return Err(Error::Embedding(format!("matrix has column rank {column_rank}, expected {rh}")));
    }
    let rs = build_root_system(e.g_type);
    let mut forms: Vec<WeightForm> = rs
        .all_roots()
        .iter()
        .map(|a| {
            let v: Vec<Rational> = a.iter().map(|&x| rat(x)).collect();
            WeightForm(e.matrix.vec_mul(&v))
        })
        .collect();
    forms.sort();
    let mut h_roots = 0;
    let mut offset = 0;
    for &ty in &e.h_profile {
        for root in build_root_system(ty).all_roots() {
            let mut w = vec![rat(0); rh];
            for (k, &c) in root.iter().enumerate() {
                w[offset + k] = rat(c);
            }
            let w = WeightForm(w);
            match forms.binary_search(&w) {
                Ok(pos) => {
                    forms.remove(pos);
                    h_roots += 1;
                }
                Err(_) => {
                    return Err(Error::Embedding(format!(
                        "root {w} of summand {ty} is not a restriction of a root of {}; restricted forms: [{}]",
                        e.g_type,
                        forms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    )));
                }
            }
        }
        offset += ty.rank();
    }
    forms.extend(std::iter::repeat_n(WeightForm(vec![rat(0); rh]), rg - rh));
    forms.sort();
    Ok(ValidationReport {
        g_type: e.g_type,
        h_profile: e.h_profile.clone(),
        column_rank,
        h_roots,
        module_weights: forms,
    })
}

pub fn profile_label(profile: &[SimpleType]) -> String {
    profile.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
}

/// Matrix entries in data files: integers or `"p/q"` strings.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Str(String),
}

fn matrix_from_entries(rows: &[Vec<Entry>]) -> Result<QMatrix> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    Entry::Int(n) => Ok(rat(*n)),
                    Entry::Str(s) => parse_rational(s),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    QMatrix::from_rows(rows)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingFile {
    schema: String,
    g: String,
    h: Vec<String>,
    matrix: Vec<Vec<Entry>>,
}

/// Reads a standalone embedding (`.emb`) file.
pub fn load_embedding_file(path: impl AsRef<Path>) -> Result<CartanEmbedding> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_embedding(&text)
}

pub fn parse_embedding(text: &str) -> Result<CartanEmbedding> {
    let f: EmbeddingFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if f.schema != EMBEDDING_SCHEMA {
        return Err(Error::Schema { expected: EMBEDDING_SCHEMA.into(), found: f.schema });
    }
    let g_type = f.g.parse()?;
    let h_profile = f.h.iter().map(|s| s.parse()).collect::<Result<Vec<SimpleType>>>()?;
    matrix_embedding(g_type, h_profile, matrix_from_entries(&f.matrix)?)
}

pub fn format_embedding(e: &CartanEmbedding) -> String {
    let h: Vec<String> = e.h_profile.iter().map(|t| format!("\"{t}\"")).collect();
    let mut out =
        format!("schema = \"{EMBEDDING_SCHEMA}\"\ng = \"{}\"\nh = [{}]\nmatrix = [\n", e.g_type, h.join(", "));
    for row in e.matrix.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("\"{}\"", format_rational(x))).collect();
        out.push_str(&format!("  [{}],\n", cells.join(", ")));
    }
    out.push_str("]\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub id: String,
    pub g: RealFormDescriptor,
    pub h: Vec<RealFormDescriptor>,
    pub kind: EmbeddingKind,
    pub embedding: CartanEmbedding,
    pub provenance: String,
}

impl PairRecord {
    pub fn h_label(&self) -> String {
        self.h.iter().map(|d| d.name.as_str()).collect::<Vec<_>>().join("+")
    }
}

/// Builds a pair from catalog names. `matrix` is required for
/// [`EmbeddingKind::Matrix`] and ignored otherwise.
pub fn build_pair(
    catalog: &Catalog,
    id: &str,
    g: &str,
    h: &[String],
    kind: EmbeddingKind,
    matrix: Option<QMatrix>,
    provenance: &str,
) -> Result<PairRecord> {
    let g = catalog.lookup(g)?.clone();
    let h = h.iter().map(|n| catalog.lookup(n).cloned()).collect::<Result<Vec<_>>>()?;
    if h.is_empty() {
        return Err(Error::Embedding("h has no summands".into()));
    }
    let h_types: Vec<SimpleType> = h.iter().map(RealFormDescriptor::simple_type).collect();
    let embedding = match kind {
        EmbeddingKind::Tensor => {
            let sizes: Vec<usize> = h_types
                .iter()
                .map(|t| (t.family() == Family::A).then_some(t.rank() + 1))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Embedding("tensor embedding needs sl summands".into()))?;
            let [a, b] = sizes[..] else {
                return Err(Error::Embedding(format!("tensor embedding needs two summands, got {}", sizes.len())));
            };
            tensor_embedding(a, b)?
        }
        EmbeddingKind::Lambda2 => lambda2_embedding(),
        EmbeddingKind::Matrix => {
            let m = matrix.ok_or_else(|| Error::Embedding("matrix embedding without a matrix".into()))?;
            matrix_embedding(g.simple_type(), h_types.clone(), m)?
        }
    };
    if embedding.g_type != g.simple_type() || embedding.h_profile != h_types {
        return Err(Error::TypeMismatch {
            expected: format!("{} in {}", profile_label(&embedding.h_profile), embedding.g_type),
            found: format!("{} in {}", profile_label(&h_types), g.simple_type()),
        });
    }
    validate_embedding(&embedding)?;
    Ok(PairRecord { id: id.to_string(), g, h, kind, embedding, provenance: provenance.to_string() })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    id: Option<String>,
    g: String,
    h: Vec<String>,
    embedding: EmbeddingKind,
    matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    provenance: String,
}

#[derive(Deserialize)]
struct RawPairFile {
    schema: Option<String>,
    #[serde(default)]
    pair: Vec<toml::Value>,
}

/// A record that failed to load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordError {
    /// 0-based position in the file.
    pub index: usize,
    pub id: Option<String>,
    /// 1-based line of the record header, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}", self.index + 1)?;
        if let Some(id) = &self.id {
            write!(f, " ({id})")?;
        }
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairDatabase {
    pub records: Vec<PairRecord>,
    pub errors: Vec<RecordError>,
}

/// Entries in file order: loaded records and per-record failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Loaded {
    Record(PairRecord),
    Error(RecordError),
}

/// Parses a pair database. File-level problems (syntax, schema) are errors;
/// a bad record is reported and the rest still load.
pub fn parse_pair_database(text: &str, catalog: &Catalog) -> Result<Vec<Loaded>> {
    let raw: RawPairFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match raw.schema.as_deref() {
        Some(PAIRS_SCHEMA) => {}
        None if raw.pair.is_empty() => return Ok(Vec::new()),
        other => {
            return Err(Error::Schema { expected: PAIRS_SCHEMA.into(), found: other.unwrap_or("<missing>").into() })
        }
    }
    let headers: Vec<usize> =
        text.lines().enumerate().filter(|(_, l)| l.trim_start().starts_with("[[pair]]")).map(|(i, _)| i + 1).collect();
    Ok(raw
        .pair
        .into_iter()
        .enumerate()
        .map(|(index, value)| {
            let id = value.get("id").and_then(|v| v.as_str()).map(str::to_string);
            let fail = |message: String| {
                Loaded::Error(RecordError { index, id: id.clone(), line: headers.get(index).copied(), message })
            };
            let rec: RawPair = match value.clone().try_into() {
                Ok(r) => r,
                Err(e) => return fail(e.to_string()),
            };
            let id = rec.id.clone().unwrap_or_else(|| format!("pair-{}", index + 1));
            let matrix = match rec.matrix.as_deref().map(matrix_from_entries).transpose() {
                Ok(m) => m,
                Err(e) => return fail(e.to_string()),
            };
            match build_pair(catalog, &id, &rec.g, &rec.h, rec.embedding, matrix, &rec.provenance) {
                Ok(p) => Loaded::Record(p),
                Err(e) => fail(e.to_string()),
            }
        })
        .collect())
}

pub fn load_pair_database(path: impl AsRef<Path>, catalog: &Catalog) -> Result<PairDatabase> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(split_loaded(parse_pair_database(&text, catalog)?))
}

pub fn split_loaded(entries: Vec<Loaded>) -> PairDatabase {
    let mut db = PairDatabase::default();
    for e in entries {
        match e {
            Loaded::Record(r) => db.records.push(r),
            Loaded::Error(e) => db.errors.push(e),
        }
    }
    db
}

/// The bundled database text.
pub fn bundled_pairs_text() -> &'static str {
    BUNDLED_PAIRS
}

pub fn bundled_pairs() -> Result<PairDatabase> {
    Ok(split_loaded(parse_pair_database(BUNDLED_PAIRS, Catalog::bundled())?))
}
