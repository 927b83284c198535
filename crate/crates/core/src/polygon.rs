//! Closed words in a symmetric set of plane vectors.
//!
//! A polygon is a sequence of edges summing to zero. Its combinatorial
//! perimeter is the number of edges and its signed area is
//! `½ Σ_{i<j} det(uᵢ, uⱼ)`, the shoelace area of the realization obtained by
//! concatenating the edges.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("edges do not sum to zero")]
    NotClosed,
    #[error("polygon has odd length {0}")]
    OddLength(usize),
    #[error("polygon is not symmetric")]
    NotSymmetric,
    #[error("vector set must be symmetric: missing {0}")]
    VectorSetNotSymmetric(Vec2),
    #[error("vector set contains the zero vector")]
    ZeroVector,
    #[error("vector {0} is not in the vector set")]
    UnknownVector(Vec2),
    #[error("count vector has {got} entries, expected {expected}")]
    CountLength { got: usize, expected: usize },
    #[error("edge index {0} out of range")]
    BadIndex(usize),
}

/// An integer plane vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for Vec2 {
    fn from(a: [i64; 2]) -> Self {
        Vec2 { x: a[0], y: a[1] }
    }
}

impl From<Vec2> for [i64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Vec2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn det(&self, o: &Vec2) -> i128 {
        self.x as i128 * o.y as i128 - self.y as i128 * o.x as i128
    }

    pub fn dot(&self, o: &Vec2) -> i128 {
        self.x as i128 * o.x as i128 + self.y as i128 * o.y as i128
    }

    pub fn scale(&self, k: i64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    /// 0 for arguments in `[0, π)`, 1 for `[π, 2π)`.
    fn half_plane(&self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// The argument order `≺` on `[0, 2π)`; same-direction vectors are
    /// ordered by length.
    pub fn arg_cmp(&self, o: &Vec2) -> Ordering {
        self.half_plane()
            .cmp(&o.half_plane())
            .then_with(|| 0.cmp(&self.det(o)))
            .then_with(|| self.dot(self).cmp(&o.dot(o)))
    }
}

/// A symmetric set of nonzero plane vectors, kept sorted by `≺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet {
    vectors: Vec<Vec2>,
}

impl VectorSet {
    /// Duplicates are dropped; the set must satisfy `V = −V`.
    pub fn new(vectors: impl IntoIterator<Item = Vec2>) -> Result<Self, PolygonError> {
        let mut v: Vec<Vec2> = Vec::new();
        for u in vectors {
            if u.is_zero() {
                return Err(PolygonError::ZeroVector);
            }
            if !v.contains(&u) {
                v.push(u);
            }
        }
        for u in &v {
            if !v.contains(&-*u) {
                return Err(PolygonError::VectorSetNotSymmetric(*u));
            }
        }
        v.sort_by(Vec2::arg_cmp);
        Ok(Self { vectors: v })
    }

    /// Builds `{±v}` for each listed `v`.
    pub fn symmetric_closure(vectors: impl IntoIterator<Item = Vec2>) -> Result<Self, PolygonError> {
        Self::new(vectors.into_iter().flat_map(|v| [v, -v]))
    }

    pub fn from_pairs(pairs: &[[i64; 2]]) -> Result<Self, PolygonError> {
        Self::new(pairs.iter().map(|&p| Vec2::from(p)))
    }

    pub fn vectors(&self) -> &[Vec2] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index_of(&self, v: &Vec2) -> Option<usize> {
        self.vectors.iter().position(|u| u == v)
    }

    /// True when every vector lies on one line through the origin.
    pub fn is_collinear(&self) -> bool {
        let first = self.vectors[0];
        self.vectors.iter().all(|v| first.det(v) == 0)
    }
}

/// Half-edge multiplicities of a symmetric ordered polygon, indexed by the
/// `≺`-sorted vectors of a [`VectorSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountVector(pub Vec<u64>);

impl CountVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Divides out the gcd of the entries.
    pub fn primitive(&self) -> CountVector {
        let g = self.0.iter().fold(0u64, |g, &c| g.gcd(&c));
        if g <= 1 {
            return self.clone();
        }
        CountVector(self.0.iter().map(|c| c / g).collect())
    }
}

/// An edge sequence in the plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polygon {
    edges: Vec<Vec2>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vectors: Vec<[i64; 2]>,
    pub edges: Vec<usize>,
}

impl Polygon {
    pub fn new(edges: Vec<Vec2>) -> Self {
        Self { edges }
    }

    pub fn from_pairs(pairs: &[[i64; 2]]) -> Self {
        Self::new(pairs.iter().map(|&p| p.into()).collect())
    }

    pub fn edges(&self) -> &[Vec2] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        let (sx, sy) = self
            .edges
            .iter()
            .fold((0i128, 0i128), |(a, b), e| (a + e.x as i128, b + e.y as i128));
        sx == 0 && sy == 0
    }

    /// Combinatorial perimeter `l(P)`.
    pub fn perimeter(&self) -> usize {
        self.edges.len()
    }

    /// `Σ_{i<j} det(uᵢ, uⱼ)`, i.e. twice the signed area. Does not check
    /// closure.
    pub fn twice_area_unchecked(&self) -> BigInt {
        let mut px = BigInt::zero();
        let mut py = BigInt::zero();
        let mut acc = BigInt::zero();
        for e in &self.edges {
            acc += &px * e.y - &py * e.x;
            px += e.x;
            py += e.y;
        }
        acc
    }

    /// Signed area `a(P)`.
    pub fn area(&self) -> Result<BigRational, PolygonError> {
        if !self.is_closed() {
            return Err(PolygonError::NotClosed);
        }
        Ok(BigRational::new(self.twice_area_unchecked(), BigInt::from(2)))
    }

    /// `γ(P) = a(P)/l(P)²`; zero for the empty polygon.
    pub fn gamma(&self) -> Result<BigRational, PolygonError> {
        let a = self.area()?;
        let l = self.perimeter();
        if l == 0 {
            return Ok(BigRational::zero());
        }
        Ok(a / BigRational::from_integer(BigInt::from(l * l)))
    }

    /// `kP`: every edge repeated `k` consecutive times.
    pub fn rescale(&self, k: usize) -> Polygon {
        assert!(k >= 1, "rescale factor must be positive");
        Polygon::new(
            self.edges
                .iter()
                .flat_map(|e| std::iter::repeat(*e).take(k))
                .collect(),
        )
    }

    pub fn reversed(&self) -> Polygon {
        Polygon::new(self.edges.iter().rev().copied().collect())
    }

    pub fn rotated(&self, by: usize) -> Polygon {
        let mut e = self.edges.clone();
        if !e.is_empty() {
            let n = e.len();
            e.rotate_left(by % n);
        }
        Polygon::new(e)
    }

    /// `(u₁..uₙ, −u₁..−uₙ)`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.edges.len();
        if n % 2 == 1 {
            return false;
        }
        let h = n / 2;
        (0..h).all(|i| self.edges[h + i] == -self.edges[i])
    }

    /// Symmetric with a `≺`-sorted first half, up to cyclic rotation of
    /// the half.
    pub fn is_ordered(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let half = &self.edges[..self.edges.len() / 2];
        let descents = (0..half.len())
            .filter(|&i| {
                let j = (i + 1) % half.len();
                half[i].arg_cmp(&half[j]) == Ordering::Greater
            })
            .count();
        descents <= 1
    }

    /// The symmetrizations `(P₊, P₋)` of an even-length polygon.
    pub fn split_symmetric(&self) -> Result<(Polygon, Polygon), PolygonError> {
        let n = self.edges.len();
        if n % 2 == 1 {
            return Err(PolygonError::OddLength(n));
        }
        let h = n / 2;
        let (first, second) = self.edges.split_at(h);
        let plus = first.iter().copied().chain(first.iter().map(|&u| -u)).collect();
        let minus = second.iter().map(|&u| -u).chain(second.iter().copied()).collect();
        Ok((Polygon::new(plus), Polygon::new(minus)))
    }

    /// Sorts the first half of a symmetric polygon by `≺`, rotates it to
    /// the cyclic start of largest area (first such start on ties) and
    /// mirrors it. Perimeter is kept and `a(order(P)) ≥ |a(P)|`.
    pub fn order(&self) -> Result<Polygon, PolygonError> {
        if !self.is_symmetric() {
            return Err(PolygonError::NotSymmetric);
        }
        let mut half = self.edges[..self.edges.len() / 2].to_vec();
        half.sort_by(Vec2::arg_cmp);
        // Moving the first edge u of the half to its end changes
        // Σ_{i<j} det(uᵢ, uⱼ) by −2·det(u, Σ half).
        let (sx, sy) = half
            .iter()
            .fold((0i128, 0i128), |(a, b), e| (a + e.x as i128, b + e.y as i128));
        let mut area = Polygon::new(half.clone()).twice_area_unchecked();
        let mut best = (area.clone(), 0usize);
        for (i, u) in half.iter().enumerate().take(half.len().saturating_sub(1)) {
            let d = u.x as i128 * sy - u.y as i128 * sx;
            area -= BigInt::from(d) * 2;
            if area > best.0 {
                best = (area.clone(), i + 1);
            }
        }
        half.rotate_left(best.1);
        let edges = half.iter().copied().chain(half.iter().map(|&u| -u)).collect();
        Ok(Polygon::new(edges))
    }

    /// Vertices of the realization, starting at the origin.
    pub fn vertices(&self) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut p = Vec2::default();
        out.push(p);
        for e in &self.edges {
            p = Vec2::new(p.x + e.x, p.y + e.y);
            out.push(p);
        }
        out
    }

    /// Cyclic run-length form divided by the gcd of the run lengths and
    /// rotated to its lexicographic minimum. Two polygons agree here
    /// exactly when they are homothetic up to cyclic permutation.
    pub fn homothety_class(&self) -> Vec<(Vec2, u64)> {
        let mut runs: Vec<(Vec2, u64)> = Vec::new();
        for &e in &self.edges {
            match runs.last_mut() {
                Some((v, c)) if *v == e => *c += 1,
                _ => runs.push((e, 1)),
            }
        }
        if runs.len() > 1 && runs[0].0 == runs[runs.len() - 1].0 {
            let (_, c) = runs.pop().expect("nonempty");
            runs[0].1 += c;
        }
        let g = runs.iter().fold(0u64, |g, r| g.gcd(&r.1));
        if g > 1 {
            for r in &mut runs {
                r.1 /= g;
            }
        }
        let key = |r: &(Vec2, u64)| (r.0.x, r.0.y, r.1);
        (0..runs.len().max(1))
            .map(|s| {
                let mut r = runs.clone();
                if !r.is_empty() {
                    r.rotate_left(s);
                }
                r
            })
            .min_by(|a, b| a.iter().map(key).cmp(b.iter().map(key)))
            .unwrap_or_default()
    }

    pub fn to_json(&self, vs: &VectorSet) -> Result<PolygonJson, PolygonError> {
        let edges = self
            .edges
            .iter()
            .map(|e| vs.index_of(e).ok_or(PolygonError::UnknownVector(*e)))
            .collect::<Result<_, _>>()?;
        Ok(PolygonJson {
            vectors: vs.vectors().iter().map(|&v| v.into()).collect(),
            edges,
        })
    }

    pub fn from_json(json: &PolygonJson) -> Result<Polygon, PolygonError> {
        let edges = json
            .edges
            .iter()
            .map(|&i| json.vectors.get(i).map(|&v| Vec2::from(v)).ok_or(PolygonError::BadIndex(i)))
            .collect::<Result<_, _>>()?;
        Ok(Polygon::new(edges))
    }

    /// `x,y` rows of the realized vertices.
    pub fn vertices_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for v in self.vertices() {
            s.push_str(&format!("{},{}\n", v.x, v.y));
        }
        s
    }
}

/// The symmetric ordered polygon whose half uses `c[i]` copies of the
/// i-th vector of `vs` in `≺` order.
pub fn counts_to_polygon(vs: &VectorSet, counts: &CountVector) -> Result<Polygon, PolygonError> {
    if counts.0.len() != vs.len() {
        return Err(PolygonError::CountLength {
            got: counts.0.len(),
            expected: vs.len(),
        });
    }
    let half: Vec<Vec2> = vs
        .vectors()
        .iter()
        .zip(&counts.0)
        .flat_map(|(&v, &c)| std::iter::repeat(v).take(c as usize))
        .collect();
    let edges = half.iter().copied().chain(half.iter().map(|&u| -u)).collect();
    Ok(Polygon::new(edges))
}

/// Half-edge counts of a symmetric polygon.
pub fn polygon_to_counts(vs: &VectorSet, p: &Polygon) -> Result<CountVector, PolygonError> {
    if !p.is_symmetric() {
        return Err(PolygonError::NotSymmetric);
    }
    let mut c = vec![0u64; vs.len()];
    for e in &p.edges()[..p.perimeter() / 2] {
        let i = vs.index_of(e).ok_or(PolygonError::UnknownVector(*e))?;
        c[i] += 1;
    }
    Ok(CountVector(c))
}

/// `Σ_{i<j} cᵢcⱼ det(wᵢ, wⱼ)` over `≺`-sorted vectors: the area of the
/// symmetric ordered polygon with half counts `c`.
pub fn area_from_counts(vs: &VectorSet, counts: &CountVector) -> BigInt {
    let mut acc = BigInt::zero();
    let mut px = BigInt::zero();
    let mut py = BigInt::zero();
    for (v, &c) in vs.vectors().iter().zip(&counts.0) {
        if c == 0 {
            continue;
        }
        acc += (&px * v.y - &py * v.x) * c;
        px += BigInt::from(v.x) * c;
        py += BigInt::from(v.y) * c;
    }
    acc
}
