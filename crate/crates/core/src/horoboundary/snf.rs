//! Smith normal form over ℤ, used to identify quotients `G/⟨F⟩`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries
/// only, each dividing the next, all positive).
pub fn smith_diagonal(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pr, pc)) = (t..m)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !a[r][c].is_zero())
            .min_by(|&(r1, c1), &(r2, c2)| a[r1][c1].abs().cmp(&a[r2][c2].abs()))
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut changed = false;
            // clear column t below the pivot
            for r in t + 1..m {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&a[t][t]);
                for c in t..cols {
                    let v = &a[t][c] * &q;
                    a[r][c] -= v;
                }
                if !a[r][t].is_zero() {
                    a.swap(t, r);
                    changed = true;
                }
            }
            // clear row t right of the pivot
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[c] -= v;
                }
                if !a[t][c].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, c);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let bad = (t + 1..m)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(&a[r][c] % &a[t][t]).is_zero());
            match bad {
                Some((r, _)) => {
                    for c in t..cols {
                        let v = a[r][c].clone();
                        a[t][c] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Isomorphism type `ℤ^free_rank × ∏ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_vec")]
    pub invariant_factors: Vec<BigInt>,
}

fn ser_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl QuotientGroup {
    /// `ℤⁿ × ∏ ℤ/dᵢ` modulo the subgroup generated by `gens`.
    pub fn of(rank: usize, torsion: &[i64], gens: &[Vec<i64>]) -> Self {
        let cols = rank + torsion.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, &d) in torsion.iter().enumerate() {
            let mut r = vec![BigInt::zero(); cols];
            r[rank + i] = BigInt::from(d);
            rows.push(r);
        }
        for g in gens {
            rows.push(g.iter().map(|&v| BigInt::from(v)).collect());
        }
        let diag = smith_diagonal(&rows, cols);
        Self {
            free_rank: cols - diag.len(),
            invariant_factors: diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().fold(BigInt::one(), |acc, d| acc * d))
    }
}
