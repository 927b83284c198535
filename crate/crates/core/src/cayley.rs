//! Word-metric balls by breadth-first search.
//!
//! The engine is generic over a [`CayleyGraph`]: neighbors are right
//! multiplications `g·s`, so `d(g, h) = |g⁻¹h|`. Each BFS level is expanded
//! in parallel; new elements are sorted and deduplicated keeping the
//! smallest generator index, so the table (including parent pointers) is
//! the same for every thread count.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::fs;
use std::hash::Hash;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::group::{GeneratorSet, GroupError, HeisElement, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("element budget exceeded: only radius {reached} fits within {budget} elements")]
    BudgetExceeded { reached: u32, budget: usize },
    #[error("element lies outside the ball of radius {radius}")]
    OutsideRadius { radius: u32 },
    #[error("coordinates overflowed 64-bit keys during expansion")]
    Overflow,
    #[error("no element qualifies for the requested regime")]
    RegimeEmpty,
    #[error("displacement element must be central")]
    NotCentral,
    #[error("|g0| + n must be smaller than the ball radius ({needed} >= {radius})")]
    RadiusTooSmall { needed: u32, radius: u32 },
    #[error("generating set is not symmetric")]
    NotSymmetric,
    #[error("invalid abelian generating set: {0}")]
    InvalidGenerators(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cache error: {0}")]
    Cache(String),
}

/// A group presented by a finite symmetric generating set, as seen by BFS.
pub trait CayleyGraph: Clone + Send + Sync {
    type Element: Clone + Eq + Hash + Ord + Send + Sync + Debug;

    fn identity(&self) -> Self::Element;
    fn generator_count(&self) -> usize;
    fn inverse_index(&self, s: usize) -> usize;
    /// Right multiplication by generator `s`; `None` on key overflow.
    fn step(&self, g: &Self::Element, s: usize) -> Option<Self::Element>;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Option<Self::Element>;
    fn is_central(&self, g: &Self::Element) -> bool;
    fn fingerprint(&self) -> String;
}

/// Packed Heisenberg coordinates used as BFS keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HeisPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl HeisPoint {
    pub const IDENTITY: HeisPoint = HeisPoint { x: 0, y: 0, z: 0 };

    pub fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }

    pub fn checked_mul(&self, rhs: &HeisPoint) -> Option<HeisPoint> {
        let cross = self.x.checked_mul(rhs.y)?;
        Some(HeisPoint {
            x: self.x.checked_add(rhs.x)?,
            y: self.y.checked_add(rhs.y)?,
            z: self.z.checked_add(rhs.z)?.checked_add(cross)?,
        })
    }

    pub fn is_central(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

#[derive(Debug, Clone)]
pub struct HeisGraph {
    gens: Vec<HeisPoint>,
    inverse: Vec<usize>,
    fingerprint: String,
}

impl HeisGraph {
    pub fn new(genset: &GeneratorSet) -> Result<Self, MetricError> {
        Ok(Self {
            gens: genset.points()?,
            inverse: (0..genset.len()).map(|i| genset.inverse_index(i)).collect(),
            fingerprint: genset.fingerprint(),
        })
    }

    pub fn generator(&self, s: usize) -> HeisPoint {
        self.gens[s]
    }
}

impl CayleyGraph for HeisGraph {
    type Element = HeisPoint;

    fn identity(&self) -> HeisPoint {
        HeisPoint::IDENTITY
    }
    fn generator_count(&self) -> usize {
        self.gens.len()
    }
    fn inverse_index(&self, s: usize) -> usize {
        self.inverse[s]
    }
    fn step(&self, g: &HeisPoint, s: usize) -> Option<HeisPoint> {
        g.checked_mul(&self.gens[s])
    }
    fn mul(&self, a: &HeisPoint, b: &HeisPoint) -> Option<HeisPoint> {
        a.checked_mul(b)
    }
    fn is_central(&self, g: &HeisPoint) -> bool {
        g.is_central()
    }
    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }
}

/// `ℤⁿ × ℤ/d₁ × … × ℤ/d_k` with a symmetric generating set. Torsion
/// coordinates are kept reduced into `0..dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGraph {
    rank: usize,
    torsion: Vec<i64>,
    gens: Vec<Vec<i64>>,
    inverse: Vec<usize>,
}

impl AbelianGraph {
    pub fn new(rank: usize, torsion: Vec<i64>, gens: Vec<Vec<i64>>) -> Result<Self, MetricError> {
        let dim = rank + torsion.len();
        if torsion.iter().any(|&d| d < 2) {
            return Err(MetricError::InvalidGenerators("torsion factors must be >= 2".into()));
        }
        if gens.len() > 255 || gens.is_empty() {
            return Err(MetricError::InvalidGenerators("need 1..=255 generators".into()));
        }
        let reduce = |v: &[i64]| -> Vec<i64> {
            v.iter()
                .enumerate()
                .map(|(i, &c)| if i < rank { c } else { c.rem_euclid(torsion[i - rank]) })
                .collect()
        };
        let mut reduced: Vec<Vec<i64>> = Vec::with_capacity(gens.len());
        for g in &gens {
            if g.len() != dim {
                return Err(MetricError::InvalidGenerators(format!(
                    "generator {g:?} has {} coordinates, expected {dim}",
                    g.len()
                )));
            }
            let r = reduce(g);
            if r.iter().all(|&c| c == 0) {
                return Err(MetricError::InvalidGenerators("identity in generating set".into()));
            }
            if reduced.contains(&r) {
                return Err(MetricError::InvalidGenerators(format!("duplicate generator {g:?}")));
            }
            reduced.push(r);
        }
        let mut inverse = Vec::with_capacity(reduced.len());
        for g in &reduced {
            let neg: Vec<i64> = g.iter().map(|c| -c).collect();
            let neg = reduce(&neg);
            match reduced.iter().position(|h| *h == neg) {
                Some(j) => inverse.push(j),
                None => return Err(MetricError::NotSymmetric),
            }
        }
        Ok(Self {
            rank,
            torsion,
            gens: reduced,
            inverse,
        })
    }

    /// Free abelian group with generators `vectors` (all of one length).
    pub fn free(vectors: Vec<Vec<i64>>) -> Result<Self, MetricError> {
        let rank = vectors.first().map(Vec::len).unwrap_or(0);
        Self::new(rank, Vec::new(), vectors)
    }

    /// The symmetric planar set `S̄`, deduplicated, zero vectors dropped.
    pub fn planar(vectors: &[[i64; 2]]) -> Result<Self, MetricError> {
        let mut uniq: Vec<Vec<i64>> = Vec::new();
        for v in vectors {
            let v = v.to_vec();
            if v.iter().any(|&c| c != 0) && !uniq.contains(&v) {
                uniq.push(v);
            }
        }
        Self::new(2, Vec::new(), uniq)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .enumerate()
            .map(|(i, &c)| {
                if i < self.rank {
                    c
                } else {
                    c.rem_euclid(self.torsion[i - self.rank])
                }
            })
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(a.len());
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            let s = x.checked_add(*y)?;
            out.push(if i < self.rank {
                s
            } else {
                s.rem_euclid(self.torsion[i - self.rank])
            });
        }
        Some(out)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let n: Vec<i64> = a.iter().map(|c| -c).collect();
        self.reduce(&n)
    }
}

impl CayleyGraph for AbelianGraph {
    type Element = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank + self.torsion.len()]
    }
    fn generator_count(&self) -> usize {
        self.gens.len()
    }
    fn inverse_index(&self, s: usize) -> usize {
        self.inverse[s]
    }
    fn step(&self, g: &Vec<i64>, s: usize) -> Option<Vec<i64>> {
        self.add(g, &self.gens[s])
    }
    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Option<Vec<i64>> {
        self.add(a, b)
    }
    fn is_central(&self, _g: &Vec<i64>) -> bool {
        true
    }
    fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("abelian:{}:{:?}:{:?}", self.rank, self.torsion, self.gens).as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

/// Cap on the number of stored elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { max_elements: None }
    }

    pub fn elements(n: usize) -> Self {
        Self {
            max_elements: Some(n),
        }
    }
}

const ROOT: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    norm: u32,
    /// Last letter of a geodesic: `g = parent · s`.
    last: u8,
}

/// A radius-`R` word-metric ball. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Ball<G: CayleyGraph> {
    graph: G,
    radius: u32,
    table: FxHashMap<G::Element, Cell>,
}

pub type HeisBall = Ball<HeisGraph>;
pub type AbelianBall = Ball<AbelianGraph>;

/// Generic BFS. Fails rather than truncating when the budget is hit.
pub fn bfs<G: CayleyGraph>(graph: &G, radius: u32, budget: Budget) -> Result<Ball<G>, MetricError> {
    let n = graph.generator_count();
    assert!(n < ROOT as usize, "generator count checked at construction");
    let mut table = FxHashMap::default();
    let id = graph.identity();
    table.insert(id.clone(), Cell { norm: 0, last: ROOT });
    let mut frontier = vec![id];

    for r in 1..=radius {
        if frontier.is_empty() {
            break;
        }
        let chunk = (frontier.len() / (4 * rayon::current_num_threads())).max(256);
        let table_ref = &table;
        let parts: Vec<Vec<(G::Element, u8)>> = frontier
            .par_chunks(chunk)
            .map(|gs| {
                let mut out = Vec::with_capacity(gs.len() * n / 2);
                for g in gs {
                    for s in 0..n {
                        let h = graph.step(g, s).ok_or(MetricError::Overflow)?;
                        if !table_ref.contains_key(&h) {
                            out.push((h, s as u8));
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, MetricError>>()?;
        let mut fresh: Vec<(G::Element, u8)> = parts.into_iter().flatten().collect();
        fresh.par_sort_unstable();
        fresh.dedup_by(|a, b| a.0 == b.0);

        if let Some(cap) = budget.max_elements {
            if table.len() + fresh.len() > cap {
                return Err(MetricError::BudgetExceeded {
                    reached: r - 1,
                    budget: cap,
                });
            }
        }
        table.reserve(fresh.len());
        frontier = Vec::with_capacity(fresh.len());
        for (h, s) in fresh {
            table.insert(h.clone(), Cell { norm: r, last: s });
            frontier.push(h);
        }
    }
    Ok(Ball {
        graph: graph.clone(),
        radius,
        table,
    })
}

/// Ball of radius `R` for a Heisenberg generating set.
pub fn bfs_ball(genset: &GeneratorSet, radius: u32, budget: Budget) -> Result<HeisBall, MetricError> {
    bfs(&HeisGraph::new(genset)?, radius, budget)
}

/// Ball of radius `R` for an abelian generating set.
pub fn abelian_ball(graph: &AbelianGraph, radius: u32, budget: Budget) -> Result<AbelianBall, MetricError> {
    bfs(graph, radius, budget)
}

impl<G: CayleyGraph> Ball<G> {
    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn fingerprint(&self) -> String {
        self.graph.fingerprint()
    }

    pub fn contains(&self, g: &G::Element) -> bool {
        self.table.contains_key(g)
    }

    pub fn norm(&self, g: &G::Element) -> Result<u32, MetricError> {
        self.table
            .get(g)
            .map(|c| c.norm)
            .ok_or(MetricError::OutsideRadius { radius: self.radius })
    }

    /// The last letter of the stored geodesic of `g` (`None` for the identity).
    pub fn last_letter(&self, g: &G::Element) -> Option<usize> {
        self.table
            .get(g)
            .and_then(|c| (c.last != ROOT).then_some(c.last as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&G::Element, u32)> {
        self.table.iter().map(|(g, c)| (g, c.norm))
    }

    /// Geodesic word for `g`, read off the parent pointers.
    pub fn geodesic_word(&self, g: &G::Element) -> Result<Word, MetricError> {
        let mut letters = Vec::new();
        let mut cur = g.clone();
        loop {
            let cell = self
                .table
                .get(&cur)
                .ok_or(MetricError::OutsideRadius { radius: self.radius })?;
            if cell.last == ROOT {
                break;
            }
            let s = cell.last as usize;
            letters.push(s);
            cur = self
                .graph
                .step(&cur, self.graph.inverse_index(s))
                .ok_or(MetricError::Overflow)?;
        }
        letters.reverse();
        Ok(Word::new(letters))
    }

    /// Sphere sizes `|{g : |g| = k}|` for `k = 0..=R`.
    pub fn growth_profile(&self) -> GrowthProfile {
        let mut spheres = vec![0u64; self.radius as usize + 1];
        for c in self.table.values() {
            spheres[c.norm as usize] += 1;
        }
        GrowthProfile { spheres }
    }

    /// `(element, norm)` pairs sorted by element.
    pub fn sorted_entries(&self) -> Vec<(G::Element, u32)> {
        let mut v: Vec<_> = self.table.iter().map(|(g, c)| (g.clone(), c.norm)).collect();
        v.par_sort_unstable();
        v
    }

    /// Parent pointers with their generators, for invariant checks.
    pub fn parent(&self, g: &G::Element) -> Option<G::Element> {
        let s = self.last_letter(g)?;
        self.graph.step(g, self.graph.inverse_index(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub spheres: Vec<u64>,
}

impl GrowthProfile {
    pub fn cumulative(&self) -> Vec<u64> {
        self.spheres
            .iter()
            .scan(0u64, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Displacement {
    /// `max | |g₀y| − |y| |` over `n < |y| ≤ R − |g₀|`.
    pub observed: u32,
    /// Maximum displacement per norm shell `|y| = k`.
    pub profile: Vec<(u32, u32)>,
    pub regime_size: usize,
    pub g0_norm: u32,
}

/// Largest norm change caused by left multiplication with a central `g₀`
/// over all `y` with `n < |y| ≤ R − |g₀|`.
pub fn eh_displacement<G: CayleyGraph>(
    ball: &Ball<G>,
    g0: &G::Element,
    n: u32,
) -> Result<Displacement, MetricError> {
    let graph = ball.graph();
    if !graph.is_central(g0) {
        return Err(MetricError::NotCentral);
    }
    let g0_norm = ball.norm(g0)?;
    if g0_norm + n >= ball.radius() {
        return Err(MetricError::RadiusTooSmall {
            needed: g0_norm + n,
            radius: ball.radius(),
        });
    }
    let top = ball.radius() - g0_norm;
    let rows: Vec<(u32, u32)> = ball
        .table
        .par_iter()
        .filter(|(_, c)| c.norm > n && c.norm <= top)
        .map(|(y, c)| {
            let gy = graph.mul(g0, y).ok_or(MetricError::Overflow)?;
            let m = ball.norm(&gy)?;
            Ok((c.norm, m.abs_diff(c.norm)))
        })
        .collect::<Result<_, MetricError>>()?;
    if rows.is_empty() {
        return Err(MetricError::RegimeEmpty);
    }
    let mut shells: BTreeMap<u32, u32> = BTreeMap::new();
    for &(k, d) in &rows {
        let e = shells.entry(k).or_insert(0);
        *e = (*e).max(d);
    }
    Ok(Displacement {
        observed: shells.values().copied().max().unwrap_or(0),
        profile: shells.into_iter().collect(),
        regime_size: rows.len(),
        g0_norm,
    })
}

impl HeisBall {
    pub fn norm_of(&self, g: &HeisElement) -> Result<u32, MetricError> {
        match g.to_point() {
            Some(p) => self.norm(&p),
            None => Err(MetricError::OutsideRadius { radius: self.radius }),
        }
    }

    /// Text dump: a header, then `x y z norm` records sorted
    /// lexicographically. Byte-identical for identical balls.
    pub fn write_cache(&self, path: &Path) -> Result<(), MetricError> {
        let io = |e: std::io::Error| MetricError::Cache(e.to_string());
        let mut w = BufWriter::new(fs::File::create(path).map_err(io)?);
        writeln!(w, "{CACHE_MAGIC}").map_err(io)?;
        writeln!(w, "genset {}", self.fingerprint()).map_err(io)?;
        writeln!(w, "radius {}", self.radius).map_err(io)?;
        writeln!(w, "count {}", self.len()).map_err(io)?;
        for (p, norm) in self.sorted_entries() {
            writeln!(w, "{} {} {} {}", p.x, p.y, p.z, norm).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// Loads a cache file, refusing one written for another generating set
    /// or radius. Parent pointers are rebuilt with the BFS tie-break
    /// (smallest last letter), so the result equals a fresh build.
    pub fn read_cache(path: &Path, genset: &GeneratorSet, radius: u32) -> Result<HeisBall, MetricError> {
        let graph = HeisGraph::new(genset)?;
        let bad = |m: &str| MetricError::Cache(format!("{}: {m}", path.display()));
        let file = fs::File::open(path).map_err(|e| MetricError::Cache(e.to_string()))?;
        let mut lines = BufReader::new(file).lines();
        let mut header = |key: &str| -> Result<String, MetricError> {
            let line = lines
                .next()
                .ok_or_else(|| bad("truncated header"))?
                .map_err(|e| MetricError::Cache(e.to_string()))?;
            if key.is_empty() {
                return Ok(line);
            }
            line.strip_prefix(key)
                .map(|s| s.trim().to_string())
                .ok_or_else(|| bad(&format!("expected `{key}`")))
        };
        if header("")? != CACHE_MAGIC {
            return Err(bad("unknown format version"));
        }
        if header("genset")? != graph.fingerprint() {
            return Err(bad("generating set mismatch"));
        }
        if header("radius")?.parse::<u32>().ok() != Some(radius) {
            return Err(bad("radius mismatch"));
        }
        let count: usize = header("count")?.parse().map_err(|_| bad("bad count"))?;
        let mut table: FxHashMap<HeisPoint, Cell> = FxHashMap::default();
        table.reserve(count);
        for line in lines {
            let line = line.map_err(|e| MetricError::Cache(e.to_string()))?;
            let f: Vec<i64> = line
                .split_ascii_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| bad("bad record"))?;
            if f.len() != 4 {
                return Err(bad("bad record"));
            }
            table.insert(
                HeisPoint::new(f[0], f[1], f[2]),
                Cell {
                    norm: f[3] as u32,
                    last: ROOT,
                },
            );
        }
        if table.len() != count {
            return Err(bad("record count mismatch"));
        }
        let lasts: Vec<(HeisPoint, u8)> = table
            .par_iter()
            .filter(|(_, c)| c.norm > 0)
            .map(|(g, c)| {
                (0..graph.generator_count())
                    .find(|&s| {
                        graph
                            .step(g, graph.inverse_index(s))
                            .and_then(|p| table.get(&p))
                            .is_some_and(|pc| pc.norm + 1 == c.norm)
                    })
                    .map(|s| (*g, s as u8))
                    .ok_or_else(|| bad("record without a parent"))
            })
            .collect::<Result<_, _>>()?;
        for (g, s) in lasts {
            if let Some(c) = table.get_mut(&g) {
                c.last = s;
            }
        }
        Ok(Ball {
            graph,
            radius,
            table,
        })
    }
}

const CACHE_MAGIC: &str = "wordgeom-ball v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Built,
    Loaded,
    Disabled,
}

pub fn cache_path(dir: &Path, genset: &GeneratorSet, radius: u32) -> PathBuf {
    dir.join(format!("ball-{}-r{}.txt", genset.fingerprint(), radius))
}

/// Loads the ball from `cache_dir` when present; otherwise builds it and
/// writes the cache.
pub fn load_or_build(
    genset: &GeneratorSet,
    radius: u32,
    budget: Budget,
    cache_dir: Option<&Path>,
) -> Result<(HeisBall, CacheStatus), MetricError> {
    let Some(dir) = cache_dir else {
        return Ok((bfs_ball(genset, radius, budget)?, CacheStatus::Disabled));
    };
    let path = cache_path(dir, genset, radius);
    if path.exists() {
        return Ok((HeisBall::read_cache(&path, genset, radius)?, CacheStatus::Loaded));
    }
    let ball = bfs_ball(genset, radius, budget)?;
    fs::create_dir_all(dir).map_err(|e| MetricError::Cache(e.to_string()))?;
    ball.write_cache(&path)?;
    Ok((ball, CacheStatus::Built))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::eval_word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn std_ball(r: u32) -> HeisBall {
        bfs_ball(&GeneratorSet::standard(), r, Budget::unlimited()).unwrap()
    }

    /// Independent oracle: enumerate all words of length ≤ r and keep the
    /// shortest length reaching each element.
    fn brute_norms(genset: &GeneratorSet, r: usize) -> std::collections::HashMap<HeisElement, usize> {
        let mut best = std::collections::HashMap::new();
        let mut layer = vec![HeisElement::identity()];
        best.insert(HeisElement::identity(), 0);
        for len in 1..=r {
            let mut next = Vec::new();
            for g in &layer {
                for s in genset.elements() {
                    let h = g.mul(s);
                    best.entry(h.clone()).or_insert(len);
                    next.push(h);
                }
            }
            layer = next;
        }
        best
    }

    #[test]
    fn small_balls_match_word_enumeration() {
        let s = GeneratorSet::standard();
        let brute = brute_norms(&s, 5);
        let ball = std_ball(5);
        assert_eq!(ball.len(), brute.len());
        for (g, n) in &brute {
            assert_eq!(ball.norm_of(g).unwrap() as usize, *n, "{g}");
        }
    }

    #[test]
    fn radius_one_and_two() {
        assert_eq!(std_ball(1).len(), 5);
        assert_eq!(std_ball(2).growth_profile().spheres, vec![1, 4, 12]);
    }

    #[test]
    fn central_element_norms() {
        let ball = std_ball(12);
        assert_eq!(ball.norm_of(&HeisElement::central(1)).unwrap(), 4);
        for k in 1..=3i64 {
            assert_eq!(ball.norm_of(&HeisElement::central(k * k)).unwrap(), 4 * k as u32);
        }
        assert_eq!(ball.norm_of(&HeisElement::identity()).unwrap(), 0);
        assert_eq!(
            ball.norm_of(&HeisElement::new(13, 0, 0)),
            Err(MetricError::OutsideRadius { radius: 12 })
        );
    }

    #[test]
    fn ball_invariants_radius_8() {
        let ball = std_ball(8);
        let g = ball.graph().clone();
        let s = GeneratorSet::standard();
        for (p, n) in ball.iter() {
            let inv = HeisElement::from(*p).inv().to_point().unwrap();
            assert_eq!(ball.norm(&inv).unwrap(), n);
            if n > 0 {
                let parent = ball.parent(p).unwrap();
                assert_eq!(ball.norm(&parent).unwrap() + 1, n);
            }
            for k in 0..g.generator_count() {
                let q = g.step(p, k).unwrap();
                if let Ok(m) = ball.norm(&q) {
                    assert!(m.abs_diff(n) <= 1);
                }
            }
            let w = ball.geodesic_word(p).unwrap();
            assert_eq!(w.len() as u32, n);
            assert_eq!(eval_word(&w, &s).unwrap(), HeisElement::from(*p));
        }
    }

    #[test]
    fn geodesic_examples() {
        let ball = std_ball(6);
        assert!(ball.geodesic_word(&HeisPoint::IDENTITY).unwrap().is_empty());
        assert_eq!(ball.geodesic_word(&HeisPoint::new(1, 0, 0)).unwrap(), Word::new(vec![0]));
        let w = ball.geodesic_word(&HeisPoint::new(0, 0, 1)).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(eval_word(&w, &GeneratorSet::standard()).unwrap(), HeisElement::central(1));
        assert!(ball.geodesic_word(&HeisPoint::new(9, 0, 0)).is_err());
    }

    #[test]
    fn triangle_inequality_samples() {
        let ball = std_ball(12);
        let entries = ball.sorted_entries();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 10_000 {
            let (g, ng) = &entries[rng.gen_range(0..entries.len())];
            let (h, nh) = &entries[rng.gen_range(0..entries.len())];
            let gh = g.checked_mul(h).unwrap();
            if let Ok(ngh) = ball.norm(&gh) {
                assert!(ngh <= ng + nh);
                checked += 1;
            }
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let build = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| std_ball(10))
        };
        let a = build(1);
        let b = build(4);
        assert_eq!(a.sorted_entries(), b.sorted_entries());
        for (p, _) in a.iter() {
            assert_eq!(a.last_letter(p), b.last_letter(p));
        }
    }

    #[test]
    fn budget_is_an_error_not_a_truncation() {
        let err = bfs_ball(&GeneratorSet::standard(), 10, Budget::elements(100)).unwrap_err();
        // radius 3 holds 1 + 4 + 12 + 36 = 53 elements, radius 4 holds 135
        assert_eq!(err, MetricError::BudgetExceeded { reached: 3, budget: 100 });
    }

    #[test]
    fn abelian_balls() {
        let sq = AbelianGraph::free(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let ball = abelian_ball(&sq, 1, Budget::unlimited()).unwrap();
        assert_eq!(ball.len(), 5);
        let ball = abelian_ball(&sq, 10, Budget::unlimited()).unwrap();
        assert_eq!(ball.norm(&vec![3, 4]).unwrap(), 7);
        let prof = ball.growth_profile();
        for k in 1..=10 {
            assert_eq!(prof.spheres[k], 4 * k as u64);
        }
        let cum = prof.cumulative();
        assert_eq!(*cum.last().unwrap() as usize, ball.len());

        let t = AbelianGraph::free(vec![vec![1], vec![-1], vec![10], vec![-10]]).unwrap();
        let ball = abelian_ball(&t, 3, Budget::unlimited()).unwrap();
        assert_eq!(ball.norm(&vec![10]).unwrap(), 1);
        assert_eq!(ball.norm(&vec![9]).unwrap(), 2);
    }

    #[test]
    fn abelian_with_torsion() {
        let g = AbelianGraph::new(1, vec![2], vec![vec![1, 1], vec![-1, 1]]).unwrap();
        let ball = abelian_ball(&g, 3, Budget::unlimited()).unwrap();
        assert_eq!(ball.norm(&vec![2, 0]).unwrap(), 2);
        assert!(!ball.contains(&vec![2, 1]));
        assert!(matches!(
            AbelianGraph::new(1, vec![2], vec![vec![1, 0]]),
            Err(MetricError::NotSymmetric)
        ));
    }

    #[test]
    fn displacement_examples() {
        let ball = std_ball(14);
        let d = eh_displacement(&ball, &HeisPoint::IDENTITY, 0).unwrap();
        assert_eq!(d.observed, 0);

        let g0 = HeisPoint::new(0, 0, 1);
        let d0 = eh_displacement(&ball, &g0, 0).unwrap();
        assert!(d0.observed <= 4);
        let mut prev = d0.observed;
        for n in 1..10 {
            let d = eh_displacement(&ball, &g0, n).unwrap();
            assert!(d.observed <= prev);
            prev = d.observed;
        }
        assert!(matches!(
            eh_displacement(&ball, &HeisPoint::new(1, 0, 0), 0),
            Err(MetricError::NotCentral)
        ));
        assert!(matches!(
            eh_displacement(&ball, &g0, 10),
            Err(MetricError::RadiusTooSmall { .. })
        ));

        let sq = AbelianGraph::free(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let ab = abelian_ball(&sq, 8, Budget::unlimited()).unwrap();
        assert_eq!(eh_displacement(&ab, &vec![0, 0], 0).unwrap().observed, 0);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = GeneratorSet::standard();
        let (a, st) = load_or_build(&s, 8, Budget::unlimited(), Some(dir.path())).unwrap();
        assert_eq!(st, CacheStatus::Built);
        let (b, st) = load_or_build(&s, 8, Budget::unlimited(), Some(dir.path())).unwrap();
        assert_eq!(st, CacheStatus::Loaded);
        assert_eq!(a.sorted_entries(), b.sorted_entries());
        for (p, _) in a.iter() {
            assert_eq!(a.last_letter(p), b.last_letter(p));
        }
        let path = cache_path(dir.path(), &s, 8);
        let other = GeneratorSet::from_triples("x", &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [1, 1, 0], [-1, -1, 1]]).unwrap();
        assert!(HeisBall::read_cache(&path, &other, 8).is_err());
        assert!(HeisBall::read_cache(&path, &s, 9).is_err());
        let p2 = dir.path().join("again.txt");
        b.write_cache(&p2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&p2).unwrap());
    }
}
