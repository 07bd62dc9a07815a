use std::path::PathBuf;

use lie_proper_core::arith::{rat, QMatrix};
use lie_proper_core::embed::{
    bundled_pairs, format_embedding, lambda2_embedding, load_embedding_file, matrix_embedding, parse_embedding,
    tensor_embedding, tensor_embedding_ordered, validate_embedding, CartanEmbedding, ValidationReport,
};
use lie_proper_core::rootsys::{build_root_system, SimpleType};
use lie_proper_core::Error;
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn ty(s: &str) -> SimpleType {
    s.parse().unwrap()
}

fn e6() -> CartanEmbedding {
    load_embedding_file(data("e6-sl3+g2.emb")).unwrap()
}

fn roots_of(profile: &[SimpleType]) -> usize {
    profile.iter().map(|t| 2 * build_root_system(*t).num_positive()).sum()
}

fn dim(t: SimpleType) -> usize {
    t.rank() + 2 * build_root_system(t).num_positive()
}

fn check_full(e: &CartanEmbedding) -> ValidationReport {
    let r = validate_embedding(e).unwrap();
    assert_eq!(r.h_roots, roots_of(&e.h_profile), "{} in {}", r.h_roots, e.g_type);
    let dim_h: usize = e.h_profile.iter().map(|t| dim(*t)).sum();
    assert_eq!(r.module_dimension(), dim(e.g_type) - dim_h);
    r
}

#[test]
fn standard_embeddings_recover_all_roots() {
    for (a, b, zeros) in [(2, 3, 2), (2, 4, 3), (3, 3, 4)] {
        let r = check_full(&tensor_embedding(a, b).unwrap());
        // sl(ab) = sl(a) + sl(b) + sl(a) (x) sl(b); the last has rank-many zero weights
        assert_eq!(r.zero_weights(), zeros, "tensor({a},{b})");
    }
    let r = check_full(&lambda2_embedding());
    assert_eq!(r.h_roots, 12);
    // sl(6) = so(6) + Sym^2_0(R^6): 20 weights, two of them zero
    assert_eq!(r.module_dimension(), 20);
    assert_eq!(r.zero_weights(), 2);
    let r = check_full(&e6());
    assert_eq!((r.h_roots, r.module_dimension(), r.zero_weights()), (18, 56, 2));
}

#[test]
fn stored_e6_report_matches() {
    let stored: ValidationReport =
        serde_json::from_str(&std::fs::read_to_string(data("e6-sl3+g2.report.json")).unwrap()).unwrap();
    assert_eq!(stored, validate_embedding(&e6()).unwrap());
}

#[test]
fn stored_e6_matrix_matches_the_database() {
    let db = bundled_pairs().unwrap();
    let rec = db.records.iter().find(|r| r.id == "e6-sl3+g2").unwrap();
    assert_eq!(rec.embedding, e6());
}

#[test]
fn zero_matrix_fails() {
    for e in [
        CartanEmbedding { g_type: ty("A5"), h_profile: vec![ty("A1"), ty("A2")], matrix: QMatrix::zeros(5, 3) },
        CartanEmbedding { g_type: ty("E6"), h_profile: vec![ty("A2"), ty("G2")], matrix: QMatrix::zeros(6, 4) },
    ] {
        assert!(matches!(validate_embedding(&e), Err(Error::Embedding(_))));
    }
}

#[test]
fn corrupted_e6_matrix_fails() {
    let good = e6();
    for (i, j) in [(0, 0), (3, 3), (1, 2), (2, 1)] {
        let mut m = good.matrix.clone();
        m[(i, j)] = &m[(i, j)] + rat(1);
        let bad = CartanEmbedding { matrix: m, ..good.clone() };
        match validate_embedding(&bad) {
            Err(Error::Embedding(msg)) => assert!(msg.contains("not a restriction") || msg.contains("rank"), "{msg}"),
            other => panic!("corruption at ({i},{j}) accepted: {other:?}"),
        }
    }
    // swapping the two g2 columns turns the short coroot into the long one
    let mut m = good.matrix.clone();
    for i in 0..6 {
        let t = m[(i, 2)].clone();
        m[(i, 2)] = m[(i, 3)].clone();
        m[(i, 3)] = t;
    }
    assert!(validate_embedding(&CartanEmbedding { matrix: m, ..good }).is_err());
}

#[test]
fn wrong_shape_is_rejected_by_constructor() {
    let m = QMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]);
    assert!(matrix_embedding(ty("A3"), vec![ty("A2")], m).is_err());
}

#[test]
fn embedding_files_round_trip() {
    for name in ["sl5-sl4.emb", "e6-sl3+g2.emb", "sl3-principal-sl2.emb"] {
        let e = load_embedding_file(data(name)).unwrap();
        assert_eq!(parse_embedding(&format_embedding(&e)).unwrap(), e, "{name}");
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Reordering the tensor basis is a Weyl element of g: the restricted
    /// multiset, and so the report, does not change.
    #[test]
    fn tensor_report_is_basis_order_invariant(
        (a, b, order) in prop_oneof![Just((2usize, 3usize)), Just((2, 4)), Just((3, 3))]
            .prop_flat_map(|(a, b)| (Just(a), Just(b), permutation(a * b)))
    ) {
        let base = validate_embedding(&tensor_embedding(a, b).unwrap()).unwrap();
        let permuted = validate_embedding(&tensor_embedding_ordered(a, b, &order).unwrap()).unwrap();
        prop_assert_eq!(permuted, base);
    }

}

#[test]
#[ignore = "writes data/e6-sl3+g2.report.json"]
fn bless_e6_report() {
    let r = validate_embedding(&e6()).unwrap();
    std::fs::write(data("e6-sl3+g2.report.json"), serde_json::to_string_pretty(&r).unwrap() + "\n").unwrap();
}
