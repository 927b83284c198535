//! Faces of a generating set of `ℤⁿ × T`.
//!
//! A subset `F ⊆ S` is a face when every relation `Σ αₛ s = Σ β_f f` with
//! nonnegative coefficients and `Σα = Σβ` forces `αₛ = 0` outside `F`. In
//! the free part these are the hull faces of `π(S)` pulled back to `S`.

use std::collections::{BTreeSet, HashSet};

use super::{AbelianGroupSpec, Face, HoroError};

pub const MAX_HULL_RANK: usize = 3;

/// Integer normal of the hyperplane through `pts` (affinely `n` points in
/// `ℝⁿ`), zero when they are affinely dependent.
fn hyperplane_normal(pts: &[&[i64]]) -> Vec<i128> {
    let n = pts[0].len();
    let d: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| (0..n).map(|i| p[i] as i128 - pts[0][i] as i128).collect())
        .collect();
    match n {
        1 => vec![1],
        2 => vec![-d[0][1], d[0][0]],
        3 => vec![
            d[0][1] * d[1][2] - d[0][2] * d[1][1],
            d[0][2] * d[1][0] - d[0][0] * d[1][2],
            d[0][0] * d[1][1] - d[0][1] * d[1][0],
        ],
        _ => unreachable!("rank is checked before hull enumeration"),
    }
}

fn dot(a: &[i128], p: &[i64]) -> i128 {
    a.iter().zip(p).map(|(x, &y)| x * y as i128).sum()
}

/// Rank of a set of integer vectors (fraction-free elimination).
pub fn vector_rank(vs: &[Vec<i64>], dim: usize) -> usize {
    let mut m: Vec<Vec<i128>> = vs.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    for c in 0..dim {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let g = num_integer::gcd(a, b);
                for k in 0..dim {
                    m[r][k] = m[r][k] * (a / g) - m[rank][k] * (b / g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Proper faces of `conv(π(S))`, as sets of distinct projected points
/// (indices into `points`), together with their dimensions.
fn hull_faces(points: &[Vec<i64>], rank: usize) -> Vec<(BTreeSet<usize>, usize)> {
    let refs: Vec<&[i64]> = points.iter().map(|p| p.as_slice()).collect();
    let mut facets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for subset in k_subsets(points.len(), rank) {
        let sel: Vec<&[i64]> = subset.iter().map(|&i| refs[i]).collect();
        let normal = hyperplane_normal(&sel);
        if normal.iter().all(|&c| c == 0) {
            continue;
        }
        let c = dot(&normal, sel[0]);
        let vals: Vec<i128> = refs.iter().map(|p| dot(&normal, p)).collect();
        let on: BTreeSet<usize> = (0..points.len()).filter(|&i| vals[i] == c).collect();
        if vals.iter().all(|&v| v <= c) || vals.iter().all(|&v| v >= c) {
            facets.insert(on);
        }
    }
    // every proper face is an intersection of facets
    let mut faces: BTreeSet<BTreeSet<usize>> = facets.clone();
    let mut frontier: Vec<BTreeSet<usize>> = facets.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for g in &facets {
            let h: BTreeSet<usize> = f.intersection(g).copied().collect();
            if !h.is_empty() && faces.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    faces
        .into_iter()
        .map(|f| {
            let base = &points[*f.first().expect("faces are nonempty")];
            let diffs: Vec<Vec<i64>> = f
                .iter()
                .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let dim = vector_rank(&diffs, rank);
            (f, dim)
        })
        .collect()
}

/// Faces of `S` from the convex hull of `π(S)`, with hull-face dimensions.
pub fn faces_hull_with_dims(spec: &AbelianGroupSpec) -> Result<Vec<(Face, usize)>, HoroError> {
    let n = spec.rank;
    if n == 0 || n > MAX_HULL_RANK {
        return Err(HoroError::UnsupportedRank(n));
    }
    let proj: Vec<Vec<i64>> = spec.elements.iter().map(|e| e[..n].to_vec()).collect();
    if vector_rank(&proj, n) < n {
        return Err(HoroError::NotSpanning);
    }
    let mut distinct: Vec<Vec<i64>> = proj.clone();
    distinct.sort();
    distinct.dedup();
    let mut out: Vec<(Face, usize)> = hull_faces(&distinct, n)
        .into_iter()
        .map(|(pts, dim)| {
            let members: Vec<usize> = (0..proj.len())
                .filter(|&s| pts.iter().any(|&p| distinct[p] == proj[s]))
                .collect();
            (Face(members), dim)
        })
        .collect();
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    Ok(out)
}

pub fn faces_hull(spec: &AbelianGroupSpec) -> Result<Vec<Face>, HoroError> {
    Ok(faces_hull_with_dims(spec)?.into_iter().map(|(f, _)| f).collect())
}

/// Group elements that are sums of exactly `t` elements of `xs`, for
/// `t = 0..=bound`.
fn sum_sets(spec: &AbelianGroupSpec, xs: &[usize], bound: usize) -> Vec<HashSet<Vec<i64>>> {
    let mut out: Vec<HashSet<Vec<i64>>> = vec![HashSet::from([vec![0; spec.dim()]])];
    for t in 1..=bound {
        let next: HashSet<Vec<i64>> = out[t - 1]
            .iter()
            .flat_map(|a| xs.iter().map(move |&s| spec.add(a, &spec.elements[s])))
            .collect();
        out.push(next);
    }
    out
}

/// Result of testing one subset against the face condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceTest {
    pub face: Face,
    /// `Σα` of the smallest refuting relation, if one exists within the bound.
    pub refuted_at: Option<usize>,
}

/// Tests every proper nonempty subset of `S` against all relations with
/// `Σα = Σβ ≤ bound`. Passing is necessary, not sufficient.
pub fn face_tests(spec: &AbelianGroupSpec, bound: usize) -> Vec<FaceTest> {
    let m = spec.elements.len();
    let all: Vec<usize> = (0..m).collect();
    let sums_s = sum_sets(spec, &all, bound);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) - 1 {
        let f: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let sums_f = sum_sets(spec, &f, bound);
        // relation with some αₛ > 0, s ∉ F: s + (t−1 letters of S) = t letters of F
        let refuted_at = (1..=bound).find(|&t| {
            (0..m).filter(|s| mask >> s & 1 == 0).any(|s| {
                sums_s[t - 1]
                    .iter()
                    .any(|a| sums_f[t].contains(&spec.add(a, &spec.elements[s])))
            })
        });
        out.push(FaceTest {
            face: Face(f),
            refuted_at,
        });
    }
    out
}

/// Subsets passing the face condition at the given bound.
pub fn faces_bruteforce(spec: &AbelianGroupSpec, bound: usize) -> Vec<Face> {
    let mut faces: Vec<Face> = face_tests(spec, bound)
        .into_iter()
        .filter(|t| t.refuted_at.is_none())
        .map(|t| t.face)
        .collect();
    faces.sort();
    faces
}

/// Smallest bound at which the brute-force oracle returns exactly the hull
/// faces, searching up to `max_bound`.
pub fn agreement_bound(spec: &AbelianGroupSpec, max_bound: usize) -> Result<Option<usize>, HoroError> {
    let mut hull = faces_hull(spec)?;
    hull.sort();
    let tests = face_tests(spec, max_bound);
    // a subset survives bound b iff it is not refuted at any t ≤ b
    for b in 1..=max_bound {
        let mut surviving: Vec<Face> = tests
            .iter()
            .filter(|t| t.refuted_at.map_or(true, |r| r > b))
            .map(|t| t.face.clone())
            .collect();
        surviving.sort();
        if surviving == hull {
            return Ok(Some(b));
        }
    }
    Ok(None)
}
