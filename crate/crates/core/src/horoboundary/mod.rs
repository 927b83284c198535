//! Reduced horoboundaries of finitely generated abelian groups
//! `G = ℤⁿ × ℤ/d₁ × … × ℤ/d_k` with a finite symmetric generating set.
//!
//! Points of the reduced boundary correspond to faces of `S`, ordered by
//! inclusion; the boundary point of a face `F` has a fiber isometric to the
//! Cayley graph of `G/⟨F⟩`.

mod faces;
mod snf;
mod window;

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{AbelianGraph, MetricError};

pub use faces::{agreement_bound, face_tests, faces_bruteforce, faces_hull, faces_hull_with_dims, vector_rank, FaceTest};
pub use snf::{smith_diagonal, QuotientGroup};
pub use window::{bounded_difference_classes, face_rays, horofunction_window, window_points, Ray, WindowFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HoroError {
    #[error("projected generators do not span the free part")]
    NotSpanning,
    #[error("hull enumeration supports free rank 1..=3, got {0}")]
    UnsupportedRank(usize),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("window values did not stabilize within {steps} steps")]
    NonStabilized { steps: u64 },
    #[error("could not parse group spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A subset of `S` by generator index, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(pub Vec<usize>);

impl Face {
    pub fn is_subset(&self, other: &Face) -> bool {
        self.0.iter().all(|i| other.0.contains(i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `ℤ^rank × ∏ ℤ/torsionᵢ` with generators given as `rank + k` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    #[serde(default)]
    pub name: String,
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    pub elements: Vec<Vec<i64>>,
}

impl AbelianGroupSpec {
    pub fn new(name: impl Into<String>, rank: usize, torsion: Vec<i64>, elements: Vec<Vec<i64>>) -> Result<Self, HoroError> {
        let mut spec = Self {
            name: name.into(),
            rank,
            torsion,
            elements,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A free abelian group `ℤⁿ` with the given generators.
    pub fn free(name: impl Into<String>, elements: Vec<Vec<i64>>) -> Result<Self, HoroError> {
        let rank = elements.first().map_or(0, Vec::len);
        Self::new(name, rank, Vec::new(), elements)
    }

    /// `ℤ` with the symmetric closure of `gens`.
    pub fn integers(gens: &[i64]) -> Result<Self, HoroError> {
        let mut all: Vec<i64> = gens.iter().flat_map(|&g| [g, -g]).collect();
        all.sort_by_key(|&g| (g.abs(), g < 0));
        all.dedup();
        let name = format!("Z{:?}", gens);
        Self::free(name, all.into_iter().map(|g| vec![g]).collect())
    }

    pub fn from_json(text: &str) -> Result<Self, HoroError> {
        let mut spec: Self = serde_json::from_str(text).map_err(|e| HoroError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, HoroError> {
        let text = std::fs::read_to_string(path).map_err(|e| HoroError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&mut self) -> Result<(), HoroError> {
        let dim = self.dim();
        if self.elements.is_empty() {
            return Err(HoroError::InvalidSpec("empty generating set".into()));
        }
        if let Some(d) = self.torsion.iter().find(|&&d| d < 2) {
            return Err(HoroError::InvalidSpec(format!("torsion factor {d} < 2")));
        }
        if let Some(e) = self.elements.iter().find(|e| e.len() != dim) {
            return Err(HoroError::InvalidSpec(format!("element {e:?} does not have {dim} coordinates")));
        }
        self.elements = self.elements.iter().map(|e| self.reduce(e)).collect();
        for e in &self.elements {
            if !self.elements.contains(&self.neg(e)) {
                return Err(HoroError::InvalidSpec(format!("inverse of {e:?} missing")));
            }
        }
        Ok(())
    }

    /// Number of coordinates, free plus torsion.
    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for (i, &d) in self.torsion.iter().enumerate() {
            out[self.rank + i] = out[self.rank + i].rem_euclid(d);
        }
        out
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let n: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    pub fn graph(&self) -> Result<AbelianGraph, HoroError> {
        Ok(AbelianGraph::new(self.rank, self.torsion.clone(), self.elements.clone())?)
    }

    fn face_vectors(&self, f: &Face) -> Vec<Vec<i64>> {
        f.0.iter().map(|&i| self.elements[i].clone()).collect()
    }
}

/// One point of the reduced horoboundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryPoint {
    pub face: Face,
    /// Dimension of the corresponding face of `conv(π(S))`.
    pub dimension: usize,
    pub fiber: QuotientGroup,
    #[serde(serialize_with = "ser_opt_big")]
    pub fiber_order: Option<BigInt>,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_str(&b.to_string()),
        None => s.serialize_str("infinite"),
    }
}

/// Faces ordered by inclusion, with the fiber over each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacePoset {
    pub rank: usize,
    pub faces: Vec<BoundaryPoint>,
    /// `(i, j)` with `faces[i] ⊊ faces[j]`.
    pub order: Vec<(usize, usize)>,
    /// Size of the whole horoboundary when every fiber is finite.
    #[serde(serialize_with = "ser_opt_big")]
    pub total: Option<BigInt>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.order.contains(&(i, j))
    }
}

pub fn reduced_boundary(spec: &AbelianGroupSpec) -> Result<FacePoset, HoroError> {
    let faces = faces_hull_with_dims(spec)?;
    let points: Vec<BoundaryPoint> = faces
        .into_iter()
        .map(|(face, dimension)| {
            let fiber = QuotientGroup::of(spec.rank, &spec.torsion, &spec.face_vectors(&face));
            BoundaryPoint {
                fiber_order: fiber.order(),
                face,
                dimension,
                fiber,
            }
        })
        .collect();
    let mut order = Vec::new();
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i != j && points[i].face.is_subset(&points[j].face) {
                order.push((i, j));
            }
        }
    }
    let total = points
        .iter()
        .map(|p| p.fiber_order.clone())
        .sum::<Option<BigInt>>();
    Ok(FacePoset {
        rank: spec.rank,
        faces: points,
        order,
        total,
    })
}

/// The order complex of the face poset: simplices are nonempty chains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagComplex {
    pub simplices: Vec<Vec<usize>>,
    /// Number of simplices per dimension.
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    /// `1 + (−1)^{rank−1}`, the Euler characteristic of `S^{rank−1}`.
    pub sphere_euler_characteristic: i64,
    /// Distinct lengths of maximal chains; a graded poset has one.
    pub max_chain_lengths: Vec<usize>,
}

impl FlagComplex {
    pub fn matches_sphere(&self) -> bool {
        self.euler_characteristic == self.sphere_euler_characteristic
    }

    /// Whether the 1-skeleton is a single cycle through every vertex and
    /// there are no higher simplices.
    pub fn is_cycle(&self) -> bool {
        if self.f_vector.len() != 2 {
            return false;
        }
        let n = self.f_vector[0];
        let mut adj = vec![Vec::new(); n];
        for s in self.simplices.iter().filter(|s| s.len() == 2) {
            adj[s[0]].push(s[1]);
            adj[s[1]].push(s[0]);
        }
        if adj.iter().any(|a| a.len() != 2) {
            return false;
        }
        let (mut prev, mut cur, mut seen) = (usize::MAX, 0usize, 1usize);
        loop {
            let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
            if next == 0 {
                return seen == n;
            }
            prev = cur;
            cur = next;
            seen += 1;
        }
    }
}

pub fn flag_complex(poset: &FacePoset) -> FlagComplex {
    let n = poset.len();
    let mut up = vec![Vec::new(); n];
    for &(i, j) in &poset.order {
        up[i].push(j);
    }
    // j covers i when nothing lies strictly between them
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            up[i]
                .iter()
                .copied()
                .filter(|&j| !up[i].iter().any(|&k| up[k].contains(&j)))
                .collect()
        })
        .collect();
    let mut simplices = Vec::new();
    let mut max_chain_lengths = Vec::new();
    fn extend(
        chain: &mut Vec<usize>,
        up: &[Vec<usize>],
        covers: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
        maximal: &mut Vec<usize>,
    ) {
        out.push(chain.clone());
        let last = *chain.last().unwrap();
        let saturated = chain.windows(2).all(|p| covers[p[0]].contains(&p[1]));
        if up[last].is_empty() && saturated {
            maximal.push(chain.len());
        }
        for &j in &up[last] {
            chain.push(j);
            extend(chain, up, covers, out, maximal);
            chain.pop();
        }
    }
    for i in 0..n {
        let minimal = !poset.order.iter().any(|&(_, j)| j == i);
        let mut chain = vec![i];
        let mut maximal = Vec::new();
        extend(&mut chain, &up, &covers, &mut simplices, &mut maximal);
        if minimal {
            max_chain_lengths.extend(maximal);
        }
    }
    let top = simplices.iter().map(Vec::len).max().unwrap_or(0);
    let mut f_vector = vec![0; top];
    for s in &simplices {
        f_vector[s.len() - 1] += 1;
    }
    let euler_characteristic = f_vector
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    max_chain_lengths.sort_unstable();
    max_chain_lengths.dedup();
    FlagComplex {
        simplices,
        f_vector,
        euler_characteristic,
        sphere_euler_characteristic: if poset.rank % 2 == 1 { 2 } else { 0 },
        max_chain_lengths,
    }
}
