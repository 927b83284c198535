//! Exact arithmetic in the discrete Heisenberg group H₃(ℤ).
//!
//! Elements are integer triples `(x, y, z)` with the product
//! `(x₁,y₁,z₁)(x₂,y₂,z₂) = (x₁+x₂, y₁+y₂, z₁+z₂+x₁y₂)`. Coordinates are
//! arbitrary precision; `z` grows quadratically in word length.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cayley::{self, HeisPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generating set is not symmetric: inverse of {0} is missing")]
    NotSymmetric(HeisElement),
    #[error("generating set contains the identity")]
    ContainsIdentity,
    #[error("generating set contains {0} twice")]
    Duplicate(HeisElement),
    #[error("generating set is empty")]
    Empty,
    #[error("generation unconfirmed: a BFS of depth {probe_radius} did not reach {missing}")]
    GenerationUnconfirmed {
        probe_radius: u32,
        missing: HeisElement,
    },
    #[error("word letter {index} out of range for a generating set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("generating sets are limited to 255 elements, got {0}")]
    TooManyGenerators(usize),
    #[error("generator coordinates do not fit the BFS engine's 64-bit keys")]
    CoordinateOverflow,
    #[error("invalid generating set file: {0}")]
    Parse(String),
    #[error("probe radius must be at least 1")]
    BadProbeRadius,
}

/// An element `(x, y, z)` of H₃(ℤ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HeisElement {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl HeisElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Central elements are exactly those with `x = y = 0`.
    pub fn is_central(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn central(z: impl Into<BigInt>) -> Self {
        Self::new(0, 0, z)
    }

    pub fn mul(&self, rhs: &HeisElement) -> HeisElement {
        HeisElement {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
            z: &self.z + &rhs.z + &self.x * &rhs.y,
        }
    }

    /// `(x, y, z)⁻¹ = (−x, −y, xy − z)`.
    pub fn inv(&self) -> HeisElement {
        HeisElement {
            x: -&self.x,
            y: -&self.y,
            z: &self.x * &self.y - &self.z,
        }
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`. Always central.
    pub fn commutator(&self, rhs: &HeisElement) -> HeisElement {
        self.inv().mul(&rhs.inv()).mul(self).mul(rhs)
    }

    /// The abelianization `(x, y, z) ↦ (x, y)`.
    pub fn abelianize(&self) -> (BigInt, BigInt) {
        (self.x.clone(), self.y.clone())
    }

    /// `|z − xy|`, the per-letter area defect.
    pub fn area_defect(&self) -> BigInt {
        (&self.z - &self.x * &self.y).abs()
    }

    pub(crate) fn to_point(&self) -> Option<HeisPoint> {
        Some(HeisPoint {
            x: self.x.to_i64()?,
            y: self.y.to_i64()?,
            z: self.z.to_i64()?,
        })
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl From<HeisPoint> for HeisElement {
    fn from(p: HeisPoint) -> Self {
        HeisElement::new(p.x, p.y, p.z)
    }
}

/// A word over a generating set, stored as letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The formal inverse: reversed, each letter replaced by its inverse.
    pub fn inverse(&self, genset: &GeneratorSet) -> Word {
        Word(self.0.iter().rev().map(|&s| genset.inverse_index(s)).collect())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GeneratorSetFile {
    name: String,
    elements: Vec<[i64; 3]>,
}

/// A finite symmetric generating set of H₃(ℤ).
///
/// Construction enforces symmetry, absence of the identity and of
/// duplicates. Generation itself is confirmed separately by
/// [`validate_genset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    name: String,
    elements: Vec<HeisElement>,
    inverse: Vec<usize>,
}

impl GeneratorSet {
    pub fn new(name: impl Into<String>, elements: Vec<HeisElement>) -> Result<Self, GroupError> {
        if elements.is_empty() {
            return Err(GroupError::Empty);
        }
        if elements.len() > 255 {
            return Err(GroupError::TooManyGenerators(elements.len()));
        }
        for (i, e) in elements.iter().enumerate() {
            if e.is_identity() {
                return Err(GroupError::ContainsIdentity);
            }
            if elements[..i].contains(e) {
                return Err(GroupError::Duplicate(e.clone()));
            }
        }
        let mut inverse = Vec::with_capacity(elements.len());
        for e in &elements {
            let ie = e.inv();
            match elements.iter().position(|f| *f == ie) {
                Some(j) => inverse.push(j),
                None => return Err(GroupError::NotSymmetric(e.clone())),
            }
        }
        Ok(Self {
            name: name.into(),
            elements,
            inverse,
        })
    }

    pub fn from_triples(name: impl Into<String>, triples: &[[i64; 3]]) -> Result<Self, GroupError> {
        Self::new(
            name,
            triples
                .iter()
                .map(|t| HeisElement::new(t[0], t[1], t[2]))
                .collect(),
        )
    }

    /// `{±(1,0,0), ±(0,1,0)}` in the order a, a⁻¹, b, b⁻¹.
    pub fn standard() -> Self {
        Self::from_triples("standard", &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]])
            .expect("standard generating set is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let file: GeneratorSetFile =
            serde_json::from_str(text).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::from_triples(file.name, &file.elements)
    }

    pub fn load(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String, GroupError> {
        let elements = self
            .elements
            .iter()
            .map(|e| {
                e.to_point()
                    .map(|p| [p.x, p.y, p.z])
                    .ok_or(GroupError::CoordinateOverflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        serde_json::to_string(&GeneratorSetFile {
            name: self.name.clone(),
            elements,
        })
        .map_err(|e| GroupError::Parse(e.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[HeisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&HeisElement> {
        self.elements.get(i)
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Index of a generator equal to `g`, if any.
    pub fn index_of(&self, g: &HeisElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    /// `K = max |z − xy|` over the generators.
    pub fn area_defect_k(&self) -> BigInt {
        self.elements
            .iter()
            .map(HeisElement::area_defect)
            .max()
            .unwrap_or_default()
    }

    pub fn max_x(&self) -> BigInt {
        self.elements.iter().map(|e| e.x.clone()).max().unwrap_or_default()
    }

    pub fn max_y(&self) -> BigInt {
        self.elements.iter().map(|e| e.y.clone()).max().unwrap_or_default()
    }

    /// The abelianized generators `π(S)` in generator order (may repeat).
    pub fn abelianized(&self) -> Vec<[i64; 2]> {
        self.points()
            .map(|pts| pts.iter().map(|p| [p.x, p.y]).collect())
            .unwrap_or_default()
    }

    /// Stable content hash: generator order matters because balls store
    /// generator indices.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"heisenberg-genset:");
        for e in &self.elements {
            h.update(format!("{},{},{};", e.x, e.y, e.z).as_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }

    pub(crate) fn points(&self) -> Result<Vec<HeisPoint>, GroupError> {
        self.elements
            .iter()
            .map(|e| e.to_point().ok_or(GroupError::CoordinateOverflow))
            .collect()
    }
}

/// Folds a word left to right with the group product.
pub fn eval_word(word: &Word, genset: &GeneratorSet) -> Result<HeisElement, GroupError> {
    let mut acc = HeisElement::identity();
    for &s in word.letters() {
        let g = genset.get(s).ok_or(GroupError::IndexOutOfRange {
            index: s,
            size: genset.len(),
        })?;
        acc = acc.mul(g);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub size: usize,
    pub probe_radius: u32,
    pub area_defect_k: String,
    pub max_x: String,
    pub max_y: String,
}

/// Structural checks happen at construction; here generation is confirmed
/// by a BFS of depth `probe_radius` reaching `(1,0,0)`, `(0,1,0)` and
/// `(0,0,1)`.
pub fn validate_genset(genset: &GeneratorSet, probe_radius: u32) -> Result<ValidationReport, GroupError> {
    if probe_radius < 1 {
        return Err(GroupError::BadProbeRadius);
    }
    let targets = [
        HeisElement::new(1, 0, 0),
        HeisElement::new(0, 1, 0),
        HeisElement::new(0, 0, 1),
    ];
    let ball = cayley::bfs_ball(genset, probe_radius, cayley::Budget::unlimited())
        .map_err(|_| GroupError::CoordinateOverflow)?;
    for t in targets {
        let reached = t.to_point().map(|p| ball.contains(&p)).unwrap_or(false);
        if !reached {
            return Err(GroupError::GenerationUnconfirmed {
                probe_radius,
                missing: t,
            });
        }
    }
    Ok(ValidationReport {
        name: genset.name().to_string(),
        size: genset.len(),
        probe_radius,
        area_defect_k: genset.area_defect_k().to_string(),
        max_x: genset.max_x().to_string(),
        max_y: genset.max_y().to_string(),
    })
}
