//! Helpers shared by the integration targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lie_proper_core::chevalley::{ChevalleyAlgebra, Sparse};
use lie_proper_core::rootsys::{build_root_system, Family, SimpleType, WeylGroup};

pub fn ty(s: &str) -> SimpleType {
    s.parse().unwrap()
}

/// Partitions of `n` with parts at most `max`, non-increasing.
fn partitions_bounded(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max.min(n)).rev() {
        prefix.push(part);
        partitions_bounded(n - part, part, prefix, out);
        prefix.pop();
    }
}

pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    partitions_bounded(n, n, &mut Vec::new(), &mut out);
    out
}

/// Jordan block of size `k` contributes `k-1, k-3, ..., 1-k` to `h`.
fn h_eigenvalues(p: &[usize]) -> Vec<i64> {
    p.iter().flat_map(|&k| (0..k).map(move |j| k as i64 - 1 - 2 * j as i64)).collect()
}

fn count(p: &[usize], q: usize) -> usize {
    p.iter().filter(|&&x| x == q).count()
}

/// Simple roots as linear forms on the standard diagonal torus coordinates.
fn simple_root_forms(ty: SimpleType) -> Vec<Vec<i64>> {
    let r = ty.rank();
    let n = if ty.family() == Family::A { r + 1 } else { r };
    let e = |i: usize| (0..n).map(|k| i64::from(k == i)).collect::<Vec<_>>();
    let diff = |i: usize, j: usize| e(i).iter().zip(e(j)).map(|(a, b)| a - b).collect::<Vec<_>>();
    let mut out: Vec<Vec<i64>> = (0..r.min(n - 1)).map(|i| diff(i, i + 1)).collect();
    match ty.family() {
        Family::A => {}
        Family::B => out.push(e(r - 1)),
        Family::C => out.push(e(r - 1).iter().map(|x| 2 * x).collect()),
        Family::D => out.push(e(r - 2).iter().zip(e(r - 1)).map(|(a, b)| a + b).collect()),
        _ => unreachable!("classical types only"),
    }
    out
}

/// Weighted Dynkin diagrams of the classical type `ty`, computed without the
/// library's oracle: torus coordinates in partition order, converted to
/// simple-root values and then moved to the dominant chamber by the Weyl
/// group. Very even classes of type D come out as the pair related by the
/// sign change of the last coordinate.
pub fn classical_diagrams(ty: SimpleType) -> BTreeSet<Vec<i64>> {
    let r = ty.rank();
    let (n, even_parts_paired) = match ty.family() {
        Family::A => (r + 1, None),
        Family::B => (2 * r + 1, Some(true)),
        Family::C => (2 * r, Some(false)),
        Family::D => (2 * r, Some(true)),
        _ => return BTreeSet::new(),
    };
    let forms = simple_root_forms(ty);
    let w = WeylGroup::new(&build_root_system(ty));
    let mut out = BTreeSet::new();
    for p in partitions(n) {
        if p[0] == 1 {
            continue;
        }
        if let Some(even) = even_parts_paired {
            // B, D: even parts paired; C: odd parts paired
            if !p.iter().all(|&q| (q % 2 == 1) == even || count(&p, q).is_multiple_of(2)) {
                continue;
            }
        }
        let mut hs = h_eigenvalues(&p);
        let coords: Vec<Vec<i64>> = if ty.family() == Family::A {
            vec![hs]
        } else {
            // keep one of each +-pair: the eigenvalue multiset is symmetric
            hs.sort_unstable_by(|a, b| b.cmp(a));
            let half = hs[..r].to_vec();
            let mut flipped = half.clone();
            flipped[r - 1] = -flipped[r - 1];
            let very_even = ty.family() == Family::D && p.iter().all(|&q| q % 2 == 0);
            if very_even {
                vec![half, flipped]
            } else {
                vec![half]
            }
        };
        for x in coords {
            let v: Vec<i64> = forms.iter().map(|f| f.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
            out.insert(w.dominant_int(&v));
        }
    }
    out
}

/// p(n) - 1 for n = 2..=9, the number of nonzero nilpotent orbits of sl(n).
pub const SL_ORBIT_COUNTS: [(usize, usize); 8] = [(2, 1), (3, 2), (4, 4), (5, 6), (6, 10), (7, 14), (8, 21), (9, 29)];

/// All Weyl group elements as matrices, by closing the generators under
/// multiplication. Independent of the orbit walk.
pub fn enumerate_group(w: &WeylGroup) -> Vec<Vec<Vec<i64>>> {
    use std::collections::HashSet;
    let r = w.rank();
    let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in w.generators() {
            let sg = lie_proper_core::rootsys::mat_mul(s, &g);
            if seen.insert(sg.clone()) {
                frontier.push(sg);
            }
        }
    }
    seen.into_iter().collect()
}

fn add_into(acc: &mut Sparse, v: Sparse) {
    for (k, x) in v {
        *acc.entry(k).or_insert(0) += x;
    }
}

pub fn basis(i: usize) -> Sparse {
    Sparse::from([(i, 1)])
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`, zero entries dropped.
pub fn jacobiator(a: &ChevalleyAlgebra, x: &Sparse, y: &Sparse, z: &Sparse) -> Sparse {
    let mut total = a.bracket(x, &a.bracket(y, z));
    add_into(&mut total, a.bracket(y, &a.bracket(z, x)));
    add_into(&mut total, a.bracket(z, &a.bracket(x, y)));
    total.retain(|_, v| *v != 0);
    total
}

/// Orbits of the opposition involution `-w0` on the Dynkin nodes, read off
/// the diagram symmetry: A_r folds in half, D_r with odd r swaps the two
/// spin nodes, E6 folds 1-6 and 3-5.
pub fn opposition_orbits(ty: SimpleType) -> usize {
    let r = ty.rank();
    match ty.family() {
        Family::A => r.div_ceil(2),
        Family::D if r % 2 == 1 => r - 1,
        Family::E if r == 6 => 4,
        _ => r,
    }
}
