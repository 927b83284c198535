//! The isoperimetric constant `γ_V = sup a(P)/l(P)²` of a symmetric planar
//! vector set, computed exactly.
//!
//! The supremum is attained by a symmetric ordered polygon on the extreme
//! vectors of `conv(V)`. With half counts `c` over the `≺`-sorted extreme
//! vectors `w₁..w_m`, the area is `q(c) = Σ_{i<j} cᵢcⱼ det(wᵢ,wⱼ)` and the
//! perimeter is `2Σc`, so `γ_V = (max_Δ q)/4` over the standard simplex.
//!
//! The maximum of `q` on the simplex is found by visiting every support
//! `T`, solving the Lagrange system `B_T x = μ·1, Σx = 1` exactly, and
//! keeping nonnegative solutions. On such a solution `q = μ/2`. A
//! minimal-support maximizer always has a nonsingular system: if the
//! solution set through it were a line, `q` would be constant along it and
//! walking to the boundary would shrink the support. Singular systems can
//! therefore be skipped; their maximizers reappear on smaller supports.
//! Nothing here relies on positivity of `B`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polygon::{area_from_counts, counts_to_polygon, CountVector, Polygon, PolygonError, Vec2, VectorSet};

/// Default cap on the number of extreme vectors (supports are enumerated
/// exhaustively, `2^m` of them).
pub const DEFAULT_MAX_EXTREME: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("all vectors are collinear: every polygon has zero area (gamma = 0)")]
    Degenerate,
    #[error("{got} extreme vectors exceed the support-enumeration cap of {cap}")]
    TooManyExtremePoints { got: usize, cap: usize },
    #[error("vector set needs at least two vectors")]
    TooFewVectors,
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> i128 {
    (a.x as i128 - o.x as i128) * (b.y as i128 - o.y as i128)
        - (a.y as i128 - o.y as i128) * (b.x as i128 - o.x as i128)
}

/// Vertices of `conv(V)`; points in the relative interior of hull edges are
/// dropped. Returned `≺`-sorted, hence symmetric.
pub fn extreme_points(vs: &VectorSet) -> Result<VectorSet, IsoError> {
    if vs.len() < 2 {
        return Err(IsoError::TooFewVectors);
    }
    if vs.is_collinear() {
        return Err(IsoError::Degenerate);
    }
    let mut pts: Vec<Vec2> = vs.vectors().to_vec();
    pts.sort_by_key(|p| (p.x, p.y));
    // Andrew's monotone chain, strict turns only
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    Ok(VectorSet::new(hull)?)
}

/// `q(x) = ½ xᵀBx` with `B_ij = det(wᵢ, wⱼ)` for `i < j`, symmetrized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexQp {
    vectors: VectorSet,
    matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpMaximum {
    /// `max_Δ q`.
    pub value: BigRational,
    /// A maximizer of minimal support (lexicographically first support on ties).
    pub point: Vec<BigRational>,
    pub support: Vec<usize>,
    pub supports_visited: usize,
}

impl SimplexQp {
    pub fn new(vectors: VectorSet) -> Self {
        let v = vectors.vectors();
        let m = v.len();
        let mut matrix = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let d = v[i].det(&v[j]) as i64;
                matrix[i][j] = d;
                matrix[j][i] = d;
            }
        }
        Self { vectors, matrix }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn vectors(&self) -> &VectorSet {
        &self.vectors
    }

    /// `q(x) = Σ_{i<j} xᵢxⱼ B_ij`.
    pub fn value(&self, x: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                if self.matrix[i][j] != 0 {
                    acc += &x[i] * &x[j] * BigRational::from_integer(self.matrix[i][j].into());
                }
            }
        }
        acc
    }

    /// Exact Lagrange point for support `t` (sorted indices), if the
    /// system is nonsingular and the point is nonnegative.
    fn critical_point(&self, t: &[usize]) -> Option<(BigRational, Vec<BigRational>)> {
        let k = t.len();
        let n = k + 1;
        let mut a: Vec<Vec<i64>> = vec![vec![0; n + 1]; n];
        for (r, &i) in t.iter().enumerate() {
            for (c, &j) in t.iter().enumerate() {
                a[r][c] = self.matrix[i][j];
            }
            a[r][k] = -1;
        }
        for c in 0..k {
            a[k][c] = 1;
        }
        a[k][n] = 1;
        let sol = match solve_i128(&a) {
            Ok(s) => s,
            Err(Overflow) => solve_big(&a),
        }?;
        let (det, num) = sol;
        let positive = det.is_positive();
        if num[..k].iter().any(|v| v.is_negative() == positive && !v.is_zero()) {
            return None;
        }
        let x: Vec<BigRational> = num[..k]
            .iter()
            .map(|v| BigRational::new(v.clone(), det.clone()))
            .collect();
        let mu = BigRational::new(num[k].clone(), det);
        Some((mu / BigRational::from_integer(2.into()), x))
    }

    /// Maximizes `q` over the simplex by exhaustive support enumeration.
    pub fn maximize(&self, cap: usize) -> Result<QpMaximum, IsoError> {
        let m = self.dimension();
        if m > cap || m >= 63 {
            return Err(IsoError::TooManyExtremePoints { got: m, cap });
        }
        let total = (1u64 << m) - 1;
        let best = (1..=total)
            .into_par_iter()
            .filter_map(|mask| {
                let t: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                self.critical_point(&t).map(|(q, x)| Candidate { value: q, support: t, x })
            })
            .reduce_with(Candidate::better)
            .expect("vertices of the simplex are always critical");
        let mut point = vec![BigRational::zero(); m];
        for (&i, v) in best.support.iter().zip(best.x) {
            point[i] = v;
        }
        Ok(QpMaximum {
            value: best.value,
            point,
            support: best.support,
            supports_visited: total as usize,
        })
    }
}

struct Candidate {
    value: BigRational,
    support: Vec<usize>,
    x: Vec<BigRational>,
}

impl Candidate {
    /// Larger value wins; ties go to the lexicographically smaller support,
    /// then the smaller point.
    fn better(a: Candidate, b: Candidate) -> Candidate {
        match a.value.cmp(&b.value) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => match a.support.cmp(&b.support).then_with(|| a.x.cmp(&b.x)) {
                Ordering::Greater => b,
                _ => a,
            },
        }
    }
}

struct Overflow;

type Solution = Option<(BigInt, Vec<BigInt>)>;

/// Fraction-free Gauss–Jordan elimination on an augmented `n × (n+1)`
/// system. Afterwards every diagonal entry equals `±det` and the last
/// column holds `det·x`. All divisions are exact.
fn solve_i128(a: &[Vec<i64>]) -> Result<Solution, Overflow> {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut prev: i128 = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r][k] != 0) else {
            return Ok(None);
        };
        m.swap(k, p);
        let pivot = m[k][k];
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k];
            for j in 0..=n {
                if j == k {
                    continue;
                }
                let v = pivot
                    .checked_mul(m[i][j])
                    .and_then(|u| f.checked_mul(m[k][j]).and_then(|w| u.checked_sub(w)))
                    .ok_or(Overflow)?;
                m[i][j] = v / prev;
            }
            m[i][k] = 0;
        }
        prev = pivot;
    }
    let det = BigInt::from(m[n - 1][n - 1]);
    Ok(Some((det, m.iter().map(|r| BigInt::from(r[n])).collect())))
}

fn solve_big(a: &[Vec<i64>]) -> Solution {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        let pivot = m[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..=n {
                if j == k {
                    continue;
                }
                m[i][j] = (&pivot * &m[i][j] - &f * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Some((det, m.into_iter().map(|mut r| r.swap_remove(n)).collect()))
}

/// The exact constant with a primitive integer witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaResult {
    pub gamma: BigRational,
    /// Half counts over `extreme_set`, divided by their gcd.
    pub witness_counts: CountVector,
    pub witness: Polygon,
    pub extreme_set: VectorSet,
    pub supports_visited: usize,
}

impl GammaResult {
    /// Area of the witness polygon `a(P₀)`.
    pub fn witness_area(&self) -> BigInt {
        area_from_counts(&self.extreme_set, &self.witness_counts)
    }

    pub fn report(&self) -> GammaReport {
        GammaReport {
            gamma: format_ratio(&self.gamma),
            witness_counts: self.witness_counts.0.clone(),
            extreme_set: self.extreme_set.vectors().iter().map(|&v| v.into()).collect(),
        }
    }
}

/// JSON shape of a `gamma` result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub gamma: String,
    pub witness_counts: Vec<u64>,
    pub extreme_set: Vec<[i64; 2]>,
}

pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `γ_V` with the default extreme-vector cap.
pub fn gamma_exact(vs: &VectorSet) -> Result<GammaResult, IsoError> {
    gamma_exact_capped(vs, DEFAULT_MAX_EXTREME)
}

pub fn gamma_exact_capped(vs: &VectorSet, cap: usize) -> Result<GammaResult, IsoError> {
    let ext = extreme_points(vs)?;
    let qp = SimplexQp::new(ext.clone());
    let max = qp.maximize(cap)?;
    let gamma = &max.value / BigRational::from_integer(4.into());

    let lcm = max.point.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<BigInt> = max.point.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let counts = CountVector(
        scaled
            .iter()
            .map(|v| (v / &g).to_u64().expect("witness counts are small"))
            .collect(),
    );
    let witness = counts_to_polygon(&ext, &counts)?;
    Ok(GammaResult {
        gamma,
        witness_counts: counts,
        witness,
        extreme_set: ext,
        supports_visited: max.supports_visited,
    })
}

/// `γ_V`, with collinear sets mapped to zero.
pub fn gamma_value(vs: &VectorSet) -> Result<BigRational, IsoError> {
    match gamma_exact(vs) {
        Ok(r) => Ok(r.gamma),
        Err(IsoError::Degenerate) => Ok(BigRational::zero()),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub gamma: BigRational,
    /// Best half counts over all of `V` (first found on ties).
    pub counts: CountVector,
    pub examined: u64,
}

/// Visits every count vector over all of `V` with `1 ≤ Σc ≤ max_total`,
/// passing `(counts, twice... area, total)` where area is the exact area of
/// the symmetric polygon.
fn for_each_count_vector(vs: &VectorSet, max_total: u64, mut f: impl FnMut(&[u64], i128, u64)) {
    fn rec(
        v: &[Vec2],
        idx: usize,
        left: u64,
        prefix: (i128, i128),
        area: i128,
        counts: &mut Vec<u64>,
        total: u64,
        f: &mut dyn FnMut(&[u64], i128, u64),
    ) {
        if idx == v.len() {
            if total > 0 {
                f(counts, area, total);
            }
            return;
        }
        let w = v[idx];
        for c in 0..=left {
            let ci = c as i128;
            let gain = ci * (prefix.0 * w.y as i128 - prefix.1 * w.x as i128);
            counts[idx] = c;
            rec(
                v,
                idx + 1,
                left - c,
                (prefix.0 + ci * w.x as i128, prefix.1 + ci * w.y as i128),
                area + gain,
                counts,
                total + c,
                f,
            );
        }
        counts[idx] = 0;
    }
    let mut counts = vec![0u64; vs.len()];
    rec(vs.vectors(), 0, max_total, (0, 0), 0, &mut counts, 0, &mut f);
}

/// Lower bound for `γ_V` from all symmetric ordered polygons with at most
/// `n` half edges, over every vector of `V` (not only extreme ones).
pub fn gamma_bruteforce(vs: &VectorSet, n: u64) -> BruteForceResult {
    let mut best: Option<(i128, u64, Vec<u64>)> = None;
    let mut examined = 0u64;
    for_each_count_vector(vs, n, |c, area, total| {
        examined += 1;
        // compare area/total² against the incumbent
        let better = match &best {
            None => true,
            Some((ba, bt, _)) => area * (*bt as i128) * (*bt as i128) > *ba * (total as i128) * (total as i128),
        };
        if better {
            best = Some((area, total, c.to_vec()));
        }
    });
    let (area, total, counts) = best.expect("n >= 1 yields at least one count vector");
    let gamma = if area <= 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(area), BigInt::from(4u64 * total * total))
    };
    BruteForceResult {
        gamma,
        counts: CountVector(counts),
        examined,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub bound: u64,
    pub maximizers: usize,
    pub counterexamples: Vec<Vec<u64>>,
}

impl UniquenessReport {
    pub fn unique(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks that every count vector with `Σc ≤ n` attaining `γ_V` describes
/// a polygon homothetic to the witness up to cyclic permutation.
pub fn check_uniqueness(vs: &VectorSet, n: u64) -> Result<UniquenessReport, IsoError> {
    let result = match gamma_exact(vs) {
        Ok(r) => r,
        Err(IsoError::Degenerate) => {
            return Ok(UniquenessReport {
                bound: n,
                maximizers: 0,
                counterexamples: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let target = result.witness.homothety_class();
    let num = result.gamma.numer().clone();
    let den = result.gamma.denom().clone();
    let mut maximizers = 0;
    let mut counterexamples = Vec::new();
    let mut err = None;
    for_each_count_vector(vs, n, |c, area, total| {
        let t2 = BigInt::from(4u64 * total * total);
        if BigInt::from(area) * &den != &t2 * &num {
            return;
        }
        maximizers += 1;
        match counts_to_polygon(vs, &CountVector(c.to_vec())) {
            Ok(p) => {
                if p.homothety_class() != target {
                    counterexamples.push(c.to_vec());
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(UniquenessReport {
        bound: n,
        maximizers,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(pairs: &[[i64; 2]]) -> VectorSet {
        VectorSet::symmetric_closure(pairs.iter().map(|&p| Vec2::from(p))).unwrap()
    }

    fn square() -> VectorSet {
        set(&[[1, 0], [0, 1]])
    }

    fn hexagon() -> VectorSet {
        set(&[[1, 0], [0, 1], [1, 1]])
    }

    /// Exact rational Gaussian elimination; reference for the fraction-free solver.
    fn rational_solve(a: &[Vec<i64>]) -> Option<Vec<BigRational>> {
        let n = a.len();
        let mut m: Vec<Vec<BigRational>> = a
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, p);
            let piv = m[k][k].clone();
            for j in 0..=n {
                m[k][j] = &m[k][j] / &piv;
            }
            for i in 0..n {
                if i != k {
                    let f = m[i][k].clone();
                    for j in 0..=n {
                        let d = &f * &m[k][j];
                        m[i][j] -= d;
                    }
                }
            }
        }
        Some(m.into_iter().map(|r| r[n].clone()).collect())
    }

    #[test]
    fn fraction_free_solver_matches_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let n = rng.gen_range(1..7);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..=n).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let reference = rational_solve(&a);
            let small = solve_i128(&a).ok().unwrap();
            let big = solve_big(&a);
            match reference {
                None => {
                    assert!(small.is_none());
                    assert!(big.is_none());
                }
                Some(x) => {
                    for sol in [small.unwrap(), big.unwrap()] {
                        let got: Vec<BigRational> =
                            sol.1.iter().map(|v| BigRational::new(v.clone(), sol.0.clone())).collect();
                        assert_eq!(got, x);
                    }
                }
            }
        }
    }

    #[test]
    fn extreme_point_examples() {
        assert_eq!(extreme_points(&square()).unwrap(), square());
        let with_inner = set(&[[1, 0], [2, 0], [0, 1]]);
        assert_eq!(extreme_points(&with_inner).unwrap(), set(&[[2, 0], [0, 1]]));
        assert_eq!(extreme_points(&hexagon()).unwrap(), hexagon());
        // (1,1) lies in the relative interior of the hull edge [(2,0),(0,2)]
        let edge_point = set(&[[2, 0], [0, 2], [1, 1]]);
        assert_eq!(extreme_points(&edge_point).unwrap(), set(&[[2, 0], [0, 2]]));
        assert_eq!(extreme_points(&set(&[[1, 0], [2, 0]])), Err(IsoError::Degenerate));
    }

    #[test]
    fn square_constant_and_normalization() {
        let r = gamma_exact(&square()).unwrap();
        // max q on the simplex is 1/4 at (½,½,0,0); γ = q/4
        assert_eq!(r.gamma, q(1, 16));
        assert_eq!(r.witness_counts, CountVector(vec![1, 1, 0, 0]));
        assert_eq!(r.witness, Polygon::from_pairs(&[[1, 0], [0, 1], [-1, 0], [0, -1]]));
        assert_eq!(r.witness.gamma().unwrap(), r.gamma);
        assert_eq!(r.witness_area(), BigInt::from(1));
    }

    #[test]
    fn hexagon_constant() {
        let r = gamma_exact(&hexagon()).unwrap();
        assert_eq!(r.gamma, q(1, 12));
        assert_eq!(r.witness_counts, CountVector(vec![1, 1, 1, 0, 0, 0]));
        assert_eq!(r.witness.gamma().unwrap(), q(1, 12));
        assert!(r.witness.is_ordered());
    }

    #[test]
    fn degenerate_sets() {
        let line = set(&[[1, 0], [2, 0]]);
        assert_eq!(gamma_exact(&line), Err(IsoError::Degenerate));
        assert_eq!(gamma_value(&line).unwrap(), BigRational::zero());
        assert!(check_uniqueness(&line, 5).unwrap().unique());
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(gamma_bruteforce(&square(), 2).gamma, q(1, 16));
        assert_eq!(gamma_bruteforce(&square(), 1).gamma, BigRational::zero());
        assert_eq!(gamma_bruteforce(&hexagon(), 3).gamma, q(1, 12));
        let b = gamma_bruteforce(&square(), 8);
        assert_eq!(b.gamma, q(1, 16));
        // C(8+4, 4) − 1 count vectors with 1 ≤ Σc ≤ 8
        assert_eq!(b.examined, 494);
    }

    #[test]
    fn uniqueness_examples() {
        let r = check_uniqueness(&square(), 8).unwrap();
        assert!(r.unique(), "{r:?}");
        assert!(r.maximizers >= 4);
        let r = check_uniqueness(&hexagon(), 9).unwrap();
        assert!(r.unique(), "{r:?}");
        assert!(r.maximizers >= 3);
    }

    fn random_set(rng: &mut ChaCha8Rng) -> VectorSet {
        loop {
            let k = rng.gen_range(2..=4);
            let v: Vec<Vec2> = (0..k)
                .map(|_| Vec2::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
                .filter(|v| !v.is_zero())
                .collect();
            if let Ok(vs) = VectorSet::symmetric_closure(v) {
                if vs.len() >= 4 && !vs.is_collinear() {
                    return vs;
                }
            }
        }
    }

    #[test]
    fn random_sets_agree_with_bruteforce_and_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..8 {
            let vs = random_set(&mut rng);
            let r = gamma_exact(&vs).unwrap();
            let ext = gamma_exact(&r.extreme_set).unwrap();
            assert_eq!(ext.gamma, r.gamma);
            assert_eq!(r.witness.gamma().unwrap(), r.gamma);
            assert!(r.witness.is_ordered() && r.witness.is_symmetric());
            let n = r.witness_counts.total();
            let b = gamma_bruteforce(&vs, n.max(1));
            assert_eq!(b.gamma, r.gamma, "{vs:?}");
            let b = gamma_bruteforce(&vs, 4);
            assert!(b.gamma <= r.gamma);
        }
    }

    #[test]
    fn unimodular_and_scaling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let maps = [[[1i64, 1], [0, 1]], [[2, 1], [1, 1]], [[0, -1], [1, 0]]];
        for _ in 0..4 {
            let vs = random_set(&mut rng);
            let g = gamma_exact(&vs).unwrap().gamma;
            for a in maps {
                let mapped = VectorSet::new(
                    vs.vectors()
                        .iter()
                        .map(|v| Vec2::new(a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y)),
                )
                .unwrap();
                assert_eq!(gamma_exact(&mapped).unwrap().gamma, g);
            }
            for k in 2..=3i64 {
                let scaled = VectorSet::new(vs.vectors().iter().map(|v| v.scale(k))).unwrap();
                assert_eq!(
                    gamma_exact(&scaled).unwrap().gamma,
                    &g * BigRational::from_integer((k * k).into())
                );
            }
        }
    }

    #[test]
    fn witness_uses_exactly_the_extreme_vectors() {
        let vs = set(&[[1, 0], [0, 1], [1, 1], [2, 1], [1, 2]]);
        let r = gamma_exact(&vs).unwrap();
        // each ±w pair of extreme vectors contributes an edge of the witness
        let c = &r.witness_counts.0;
        let half = c.len() / 2;
        for i in 0..half {
            assert!(c[i] + c[i + half] > 0, "extreme vector {} unused", r.extreme_set.vectors()[i]);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let vs = set(&[[2, 1], [1, 2], [-1, 2], [-2, 1]]);
        assert_eq!(
            gamma_exact_capped(&vs, 4),
            Err(IsoError::TooManyExtremePoints { got: 8, cap: 4 })
        );
    }

    #[test]
    fn qp_value_matches_counts_area() {
        let qp = SimplexQp::new(hexagon());
        let x = vec![q(1, 3), q(1, 3), q(1, 3), q(0, 1), q(0, 1), q(0, 1)];
        assert_eq!(qp.value(&x), q(1, 3));
        let m = qp.maximize(DEFAULT_MAX_EXTREME).unwrap();
        assert_eq!(m.value, q(1, 3));
        assert_eq!(m.support, vec![0, 1, 2]);
    }
}
