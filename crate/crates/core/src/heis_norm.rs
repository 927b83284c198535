//! Word norms of `H₃(ℤ)` against the isoperimetric estimate.
//!
//! For a word `w = s₁…sₙ` whose projection closes up, the central
//! coordinate of `w` and the signed area of the projected polygon differ by
//! a sum of per-letter terms: `z − a(w) = Σ (zᵢ − xᵢyᵢ/2)`. For a symmetric
//! set each term is bounded by `K = max |z − xy|`, because the inverse of
//! `(x,y,z)` has defect `|z|` and `z − xy/2` lies between `z` and `z − xy`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{bfs_ball, AbelianBall, Budget, CayleyGraph, HeisBall, HeisPoint, MetricError};
use crate::group::{eval_word, GeneratorSet, GroupError, HeisElement, Word};
use crate::isoperimetric::{gamma_exact, IsoError};
use crate::polygon::{area_from_counts, CountVector, Polygon, PolygonError, Vec2, VectorSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("the projected word is not a closed polygon")]
    NotClosed,
    #[error("no word for the residue (0,0,{needed}) within lexicon radius {radius}")]
    ResidueUnreachable { needed: i64, radius: u32 },
    #[error("no non-central element satisfies |z| >= L*max(x^4,y^4); largest nonvacuous L is {largest}")]
    RegimeEmpty { largest: String },
    #[error("the ball contains no nontrivial central element")]
    NoCentralElements,
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `K = max |z − xy|` over `S`.
pub fn area_defect_k(genset: &GeneratorSet) -> BigInt {
    genset.area_defect_k()
}

/// The exact per-letter contribution `z − xy/2`.
pub fn letter_defect(s: &HeisElement) -> BigRational {
    rational(s.z.clone()) - BigRational::new(&s.x * &s.y, 2.into())
}

/// The symmetric vector set `S̄ = π(S) \ {0}`.
pub fn projected_set(genset: &GeneratorSet) -> Result<VectorSet, PolygonError> {
    VectorSet::new(genset.abelianized().into_iter().map(Vec2::from).filter(|v| !v.is_zero()))
}

/// `γ_{S̄}` for a generating set.
pub fn gamma_of(genset: &GeneratorSet) -> Result<BigRational, NormError> {
    Ok(gamma_exact(&projected_set(genset)?)?.gamma)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AreaCheck {
    #[serde(serialize_with = "ser_ratio")]
    pub area: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub z: BigInt,
    /// `Σ (zᵢ − xᵢyᵢ/2)` over the letters.
    #[serde(serialize_with = "ser_ratio")]
    pub letter_sum: BigRational,
    /// `Σ (zᵢ − xᵢyᵢ)`, the form with the full product.
    #[serde(serialize_with = "ser_display")]
    pub full_product_sum: BigInt,
    /// `z − a(w) = Σ (zᵢ − xᵢyᵢ/2)`.
    pub identity_holds: bool,
    /// `z − a(w) = Σ (zᵢ − xᵢyᵢ)`; holds iff `Σ xᵢyᵢ = 0`.
    pub full_product_identity_holds: bool,
    /// `|a(w) − z| ≤ K·l(w)`.
    pub bound_ok: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Compares the central coordinate of a closed word with the area of its
/// projected polygon.
pub fn check_area_z(w: &Word, genset: &GeneratorSet) -> Result<AreaCheck, NormError> {
    let g = eval_word(w, genset)?;
    if !g.is_central() {
        return Err(NormError::NotClosed);
    }
    let pts = genset.abelianized();
    let polygon = Polygon::new(w.letters().iter().map(|&s| Vec2::from(pts[s])).collect());
    let area = polygon.area().map_err(|_| NormError::NotClosed)?;
    let mut letter_sum = BigRational::zero();
    let mut full_product_sum = BigInt::zero();
    for &s in w.letters() {
        let e = &genset.elements()[s];
        letter_sum += letter_defect(e);
        full_product_sum += &e.z - &e.x * &e.y;
    }
    let defect = rational(g.z.clone()) - &area;
    let k = genset.area_defect_k();
    let bound_ok = defect.abs() <= rational(k * BigInt::from(w.len()));
    Ok(AreaCheck {
        identity_holds: defect == letter_sum,
        full_product_identity_holds: defect == rational(full_product_sum.clone()),
        area,
        z: g.z,
        letter_sum,
        full_product_sum,
        bound_ok,
    })
}

/// A random word whose projection is closed: `len` uniform letters
/// followed by a greedy walk back to the origin in the plane.
pub fn random_closed_word<R: Rng>(genset: &GeneratorSet, len: usize, rng: &mut R) -> Word {
    let pts = genset.abelianized();
    let mut letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..genset.len())).collect();
    let (mut x, mut y) = letters.iter().fold((0i64, 0i64), |(x, y), &s| (x + pts[s][0], y + pts[s][1]));
    while x != 0 || y != 0 {
        let best = (0..pts.len())
            .filter(|&s| pts[s] != [0, 0])
            .min_by_key(|&s| ((x + pts[s][0]).abs() + (y + pts[s][1]).abs(), s))
            .expect("generating sets have a nonzero projection");
        let next = (x + pts[best][0], y + pts[best][1]);
        if next.0.abs() + next.1.abs() >= x.abs() + y.abs() {
            // no single letter helps: retrace the path instead
            let w = Word::new(letters.clone());
            letters.extend(w.inverse(genset).letters());
            return Word::new(letters);
        }
        letters.push(best);
        (x, y) = next;
    }
    Word::new(letters)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub element: HeisPoint,
    /// `√(|z|/γ) − |(x,y)|_{S̄}`.
    pub estimate: f64,
    pub exact_norm: Option<u32>,
    pub deviation: Option<f64>,
}

impl NormEstimate {
    pub fn new(element: HeisPoint, gamma: &BigRational, planar_norm: u32, exact_norm: Option<u32>) -> Self {
        let estimate = (element.z.unsigned_abs() as f64 / to_f64(gamma)).sqrt() - planar_norm as f64;
        Self {
            element,
            estimate,
            exact_norm,
            deviation: exact_norm.map(|n| (n as f64 - estimate).abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralRow {
    pub z: i64,
    pub norm: u32,
    /// `√(|z|/γ)`.
    pub estimate: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralTable {
    pub radius: u32,
    pub rows: Vec<CentralRow>,
    /// `max_z | |(0,0,z)| − √(|z|/γ) |`.
    pub c_obs: f64,
    /// For sets whose letters have zero defect, `|(0,0,z)|²·γ ≥ |z|` must
    /// hold exactly; `None` when the bound does not apply.
    pub lower_bound_ok: Option<bool>,
}

impl CentralTable {
    pub fn norm(&self, z: i64) -> Option<u32> {
        self.rows.iter().find(|r| r.z == z).map(|r| r.norm)
    }
}

/// Tabulates every nontrivial central element of the ball.
pub fn central_norm_table(ball: &HeisBall, gamma: &BigRational) -> Result<CentralTable, NormError> {
    let mut rows: Vec<CentralRow> = ball
        .iter()
        .filter(|(g, _)| g.is_central() && g.z != 0)
        .map(|(g, norm)| {
            let estimate = (g.z.unsigned_abs() as f64 / to_f64(gamma)).sqrt();
            CentralRow {
                z: g.z,
                norm,
                estimate,
                deviation: (norm as f64 - estimate).abs(),
            }
        })
        .collect();
    if rows.is_empty() {
        return Err(NormError::NoCentralElements);
    }
    rows.sort_by_key(|r| r.z);
    let graph = ball.graph();
    let exact = (0..graph.generator_count()).all(|s| {
        let g = graph.generator(s);
        2 * g.z == g.x * g.y
    });
    let lower_bound_ok = exact.then(|| {
        rows.iter()
            .all(|r| rational(r.norm as u64 * r.norm as u64) * gamma >= rational(r.z.unsigned_abs()))
    });
    let c_obs = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(CentralTable {
        radius: ball.radius(),
        rows,
        c_obs,
        lower_bound_ok,
    })
}

/// How a central word was assembled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralWordPlan {
    pub z: i64,
    /// Dilation factor of the witness polygon.
    pub k: u64,
    /// Extra letters added to one side of `kP₀`.
    pub extra_units: u64,
    /// Adjacent-letter swaps used to trim the overshoot.
    pub swaps: u64,
    /// Central correction `(0,0,residue)` appended from the lexicon.
    pub residue: i64,
    pub word: Word,
    pub length: usize,
}

/// Builds short words for central elements from dilates of the witness
/// polygon `P₀` of `γ_{S̄}`.
///
/// For `z > 0`: take `k` maximal with `k²a(P₀) ≤ z`, add `u` letters along
/// one edge direction (each adds `k(Bc₀)_j` area), then swap letters
/// across one corner of the half polygon (each swap removes `2·det` area)
/// and close the last small gap with a geodesic word from the lexicon.
/// Generators lifting `−w` are the inverses of those lifting `w`, so the
/// letter defects cancel and the central coordinate equals the area.
#[derive(Debug, Clone)]
pub struct CentralWordBuilder {
    genset: GeneratorSet,
    extreme: VectorSet,
    base: Vec<u64>,
    lifts: Vec<usize>,
    area0: i128,
    unit_index: usize,
    unit_gain: i128,
    corner: (usize, usize),
    swap_step: i128,
    k_min: u64,
    lexicon: BTreeMap<i64, Word>,
    lexicon_radius: u32,
    c_impl: u64,
}

pub const DEFAULT_LEXICON_RADIUS: u32 = 16;

impl CentralWordBuilder {
    pub fn new(genset: &GeneratorSet) -> Result<Self, NormError> {
        Self::with_lexicon_radius(genset, DEFAULT_LEXICON_RADIUS)
    }

    pub fn with_lexicon_radius(genset: &GeneratorSet, max_radius: u32) -> Result<Self, NormError> {
        let gamma = gamma_exact(&projected_set(genset)?)?;
        let ext = gamma.extreme_set.clone();
        let v = ext.vectors();
        let m = v.len();
        let half = m / 2;

        // lift each extreme vector; antipodes use inverse letters
        let mut lifts = vec![usize::MAX; m];
        for i in 0..half {
            let best = genset
                .elements()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.x == BigInt::from(v[i].x) && e.y == BigInt::from(v[i].y))
                .min_by_key(|(s, e)| (letter_defect(e).abs(), *s))
                .map(|(s, _)| s)
                .expect("extreme vectors are projections of generators");
            lifts[i] = best;
            lifts[i + half] = genset.inverse_index(best);
        }

        let base = gamma.witness_counts.0.clone();
        let area0 = gamma.witness_area().to_i128().expect("witness area fits");
        let support: Vec<usize> = (0..m).filter(|&i| base[i] > 0).collect();
        let gain = |j: usize| -> i128 {
            support
                .iter()
                .map(|&i| {
                    let d = if i < j { v[i].det(&v[j]) } else { v[j].det(&v[i]) };
                    base[i] as i128 * d
                })
                .sum()
        };
        let unit_index = *support
            .iter()
            .max_by_key(|&&j| (gain(j), std::cmp::Reverse(j)))
            .expect("witness has nonempty support");
        let unit_gain = gain(unit_index);
        let corner = support
            .windows(2)
            .map(|p| (p[0], p[1]))
            .filter(|&(a, b)| v[a].det(&v[b]) > 0)
            .min_by_key(|&(a, b)| (v[a].det(&v[b]), a))
            .expect("a polygon with positive area has a convex corner");
        let swap_step = 2 * v[corner.0].det(&v[corner.1]);

        // smallest k where the swap capacity covers any overshoot
        let mut k_min = 1u64;
        loop {
            let kk = k_min as i128;
            let cap = kk * base[corner.0] as i128 * kk * base[corner.1] as i128;
            if kk * unit_gain > 0 && cap * swap_step >= kk * unit_gain {
                break;
            }
            k_min += 1;
        }

        let mut needed: Vec<i64> = (1..(k_min as i128 * k_min as i128 * area0) as i64).collect();
        needed.extend((1..swap_step as i64).map(|r| -r));
        let (lexicon, lexicon_radius) = build_lexicon(genset, &needed, max_radius)?;

        let u_max = {
            let num = (2 * k_min as i128 + 1) * area0 - 1;
            let den = k_min as i128 * unit_gain;
            ((num + den - 1) / den).max(0) as u64
        };
        let residue_len = (1..swap_step as i64).map(|r| lexicon[&-r].len()).max().unwrap_or(0) as u64;
        let small_len = lexicon.values().map(Word::len).max().unwrap_or(0) as u64;
        let c_impl = (2 * u_max + residue_len).max(small_len);

        Ok(Self {
            genset: genset.clone(),
            extreme: ext,
            base,
            lifts,
            area0,
            unit_index,
            unit_gain,
            corner,
            swap_step,
            k_min,
            lexicon,
            lexicon_radius,
            c_impl,
        })
    }

    /// Additive constant with `l(word) ≤ √(|z|/γ) + C_impl` for every `z`.
    pub fn c_impl(&self) -> u64 {
        self.c_impl
    }

    pub fn witness_area(&self) -> i128 {
        self.area0
    }

    pub fn witness_counts(&self) -> &[u64] {
        &self.base
    }

    pub fn lexicon_radius(&self) -> u32 {
        self.lexicon_radius
    }

    pub fn build(&self, z: i64) -> Result<CentralWordPlan, NormError> {
        if z < 0 {
            let mut plan = self.build_positive(z.unsigned_abs())?;
            plan.word = plan.word.inverse(&self.genset);
            plan.z = z;
            return Ok(plan);
        }
        self.build_positive(z as u64)
    }

    fn lexicon_plan(&self, z: i64) -> Result<CentralWordPlan, NormError> {
        let word = self.lexicon.get(&z).cloned().ok_or(NormError::ResidueUnreachable {
            needed: z,
            radius: self.lexicon_radius,
        })?;
        Ok(CentralWordPlan {
            z,
            k: 0,
            extra_units: 0,
            swaps: 0,
            residue: z,
            length: word.len(),
            word,
        })
    }

    fn build_positive(&self, z: u64) -> Result<CentralWordPlan, NormError> {
        if z == 0 {
            return Ok(CentralWordPlan {
                z: 0,
                k: 0,
                extra_units: 0,
                swaps: 0,
                residue: 0,
                word: Word::default(),
                length: 0,
            });
        }
        let zi = z as i128;
        let mut k = (z as u128 / self.area0 as u128).sqrt() as i128;
        while (k + 1) * (k + 1) * self.area0 <= zi {
            k += 1;
        }
        while k * k * self.area0 > zi {
            k -= 1;
        }
        if (k as u64) < self.k_min {
            return self.lexicon_plan(z as i64);
        }
        let gap = zi - k * k * self.area0;
        let step = k * self.unit_gain;
        let u = (gap + step - 1) / step;

        let mut counts: Vec<u64> = self.base.iter().map(|&c| c * k as u64).collect();
        counts[self.unit_index] += u as u64;
        let reached = area_from_counts(&self.extreme, &CountVector(counts.clone()))
            .to_i128()
            .expect("area fits");
        let overshoot = reached - zi;
        debug_assert!(overshoot >= 0 && overshoot < step.max(1));
        let swaps = overshoot / self.swap_step;
        let residue = overshoot % self.swap_step;

        let (a, b) = self.corner;
        let mut half: Vec<usize> = Vec::with_capacity(counts.iter().sum::<u64>() as usize);
        for (i, &c) in counts.iter().enumerate() {
            if i == b {
                continue;
            }
            if i == a {
                half.extend(shuffle(a, counts[a], b, counts[b], swaps as u64));
            } else {
                half.extend(std::iter::repeat(i).take(c as usize));
            }
        }
        let m = self.lifts.len();
        let mut letters: Vec<usize> = half.iter().map(|&i| self.lifts[i]).collect();
        letters.extend(half.iter().map(|&i| self.lifts[(i + m / 2) % m]));
        if residue > 0 {
            let fix = self.lexicon.get(&-(residue as i64)).ok_or(NormError::ResidueUnreachable {
                needed: -(residue as i64),
                radius: self.lexicon_radius,
            })?;
            letters.extend(fix.letters());
        }
        let word = Word::new(letters);
        Ok(CentralWordPlan {
            z: z as i64,
            k: k as u64,
            extra_units: u as u64,
            swaps: swaps as u64,
            residue: -(residue as i64),
            length: word.len(),
            word,
        })
    }
}

/// `p` copies of `a` and `q` copies of `b` arranged with exactly `n ≤ pq`
/// pairs where `b` precedes `a`.
fn shuffle(a: usize, p: u64, b: usize, q: u64, n: u64) -> Vec<usize> {
    assert!(n <= p * q, "swap capacity exceeded");
    let mut out = Vec::with_capacity((p + q) as usize);
    if p == 0 {
        out.extend(std::iter::repeat(b).take(q as usize));
        return out;
    }
    let lead = n / p;
    let rem = n % p;
    out.extend(std::iter::repeat(b).take(lead as usize));
    out.extend(std::iter::repeat(a).take((p - rem) as usize));
    let mut rest = q - lead;
    if rem > 0 {
        out.push(b);
        rest -= 1;
    }
    out.extend(std::iter::repeat(a).take(rem as usize));
    out.extend(std::iter::repeat(b).take(rest as usize));
    out
}

/// Geodesic words for the requested central elements, from the smallest
/// BFS radius (stepping by 2 from 4) that contains all of them.
fn build_lexicon(
    genset: &GeneratorSet,
    needed: &[i64],
    max_radius: u32,
) -> Result<(BTreeMap<i64, Word>, u32), NormError> {
    let mut radius = 4.min(max_radius);
    loop {
        let ball = bfs_ball(genset, radius, Budget::unlimited())?;
        let missing = needed
            .iter()
            .copied()
            .find(|&z| !ball.contains(&HeisPoint::new(0, 0, z)));
        match missing {
            None => {
                let mut lex = BTreeMap::new();
                for &z in needed {
                    lex.insert(z, ball.geodesic_word(&HeisPoint::new(0, 0, z))?);
                }
                return Ok((lex, radius));
            }
            Some(z) if radius >= max_radius => {
                return Err(NormError::ResidueUnreachable { needed: z, radius });
            }
            Some(_) => radius = (radius + 2).min(max_radius),
        }
    }
}

/// `h(w)`: the central coordinate of the evaluated word.
pub fn height(w: &Word, genset: &GeneratorSet) -> Result<BigInt, NormError> {
    Ok(eval_word(w, genset)?.z)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightScan {
    pub samples: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub max_ratio: BigRational,
    pub argmax: Word,
    /// Best ratio among the square and dilated-witness families.
    #[serde(serialize_with = "ser_ratio")]
    pub structured_ratio: BigRational,
}

/// Empirical `max |h(w)|/l(w)²` over random words and structured families
/// (coordinate squares `aᵏbᵏa⁻ᵏb⁻ᵏ` on the first two generators, and
/// witness dilates from the central word builder).
pub fn height_ratio_scan<R: Rng>(
    genset: &GeneratorSet,
    samples: usize,
    max_len: usize,
    rng: &mut R,
) -> Result<HeightScan, NormError> {
    let ratio = |w: &Word| -> Result<BigRational, NormError> {
        if w.is_empty() {
            return Ok(BigRational::zero());
        }
        let h = height(w, genset)?.abs();
        Ok(BigRational::new(h, BigInt::from(w.len() * w.len())))
    };
    let mut best = (BigRational::zero(), Word::default());
    let consider = |w: Word, best: &mut (BigRational, Word)| -> Result<BigRational, NormError> {
        let r = ratio(&w)?;
        if r > best.0 {
            *best = (r.clone(), w);
        }
        Ok(r)
    };
    for _ in 0..samples {
        let len = rng.gen_range(1..=max_len.max(1));
        let w = Word::new((0..len).map(|_| rng.gen_range(0..genset.len())).collect());
        consider(w, &mut best)?;
    }
    let mut structured = BigRational::zero();
    let n = genset.len();
    let (a, b) = (0, (1..n).find(|&s| s != genset.inverse_index(0)).unwrap_or(0));
    for k in 1..=8usize {
        let mut letters = vec![a; k];
        letters.extend(std::iter::repeat(b).take(k));
        letters.extend(std::iter::repeat(genset.inverse_index(a)).take(k));
        letters.extend(std::iter::repeat(genset.inverse_index(b)).take(k));
        let r = consider(Word::new(letters), &mut best)?;
        structured = structured.max(r);
    }
    if let Ok(builder) = CentralWordBuilder::new(genset) {
        for k in 1..=8i128 {
            let z = (k * k * builder.witness_area()) as i64;
            let plan = builder.build(z)?;
            let r = consider(plan.word, &mut best)?;
            structured = structured.max(r);
        }
    }
    Ok(HeightScan {
        samples,
        max_ratio: best.0,
        argmax: best.1,
        structured_ratio: structured,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeisReport {
    pub radius: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub l: BigRational,
    /// Elements of the ball with `|z| ≥ L·max(x⁴,y⁴)`, central ones included.
    pub regime_size: usize,
    pub noncentral_in_regime: usize,
    pub max_deviation: f64,
    pub worst: Option<NormEstimate>,
}

/// Largest `|z|/max(x⁴,y⁴)` over the non-central elements of the ball.
pub fn largest_nonvacuous_l(ball: &HeisBall) -> Option<BigRational> {
    ball.iter()
        .filter(|(g, _)| !g.is_central())
        .map(|(g, _)| {
            let m = BigInt::from(g.x.unsigned_abs().max(g.y.unsigned_abs())).pow(4);
            BigRational::new(BigInt::from(g.z.unsigned_abs()), m)
        })
        .max()
}

/// Compares exact norms with `√(|z|/γ) − |(x,y)|_{S̄}` on the regime
/// `|z| ≥ L·max(x⁴,y⁴)`.
pub fn verify_prop_heis(
    ball: &HeisBall,
    planar: &AbelianBall,
    gamma: &BigRational,
    l: &BigRational,
) -> Result<HeisReport, NormError> {
    let mut regime_size = 0;
    let mut noncentral = 0;
    let mut worst: Option<NormEstimate> = None;
    for (g, norm) in ball.iter() {
        let m = BigInt::from(g.x.unsigned_abs().max(g.y.unsigned_abs())).pow(4);
        if rational(g.z.unsigned_abs()) < l * rational(m) {
            continue;
        }
        regime_size += 1;
        if !g.is_central() {
            noncentral += 1;
        }
        let pn = planar.norm(&vec![g.x, g.y])?;
        let est = NormEstimate::new(*g, gamma, pn, Some(norm));
        let better = match &worst {
            None => true,
            Some(w) => {
                let (d, wd) = (est.deviation.unwrap(), w.deviation.unwrap());
                d > wd || (d == wd && est.element < w.element)
            }
        };
        if better {
            worst = Some(est);
        }
    }
    if noncentral == 0 {
        let largest = largest_nonvacuous_l(ball)
            .map(|r| format!("{}/{}", r.numer(), r.denom()))
            .unwrap_or_else(|| "none".into());
        return Err(NormError::RegimeEmpty { largest });
    }
    Ok(HeisReport {
        radius: ball.radius(),
        l: l.clone(),
        regime_size,
        noncentral_in_regime: noncentral,
        max_deviation: worst.as_ref().and_then(|w| w.deviation).unwrap_or(0.0),
        worst,
    })
}

/// Runs [`verify_prop_heis`] for each `L` of a grid.
pub fn sweep_l_grid(
    ball: &HeisBall,
    planar: &AbelianBall,
    gamma: &BigRational,
    grid: &[BigRational],
) -> Vec<Result<HeisReport, NormError>> {
    grid.iter().map(|l| verify_prop_heis(ball, planar, gamma, l)).collect()
}
