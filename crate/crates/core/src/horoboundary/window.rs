//! Horofunctions restricted to a finite window.
//!
//! Along a ray `p_k = offset + k·step`, the functions
//! `φ_k(x) = d(p_k, x) − d(p_k, 0)` converge pointwise; on a finite window
//! they are eventually constant in `k`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{AbelianGroupSpec, Face, HoroError};
use crate::cayley::{abelian_ball, AbelianBall, Budget, MetricError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ray {
    pub offset: Vec<i64>,
    pub step: Vec<i64>,
}

impl Ray {
    pub fn point(&self, k: i64) -> Vec<i64> {
        self.offset.iter().zip(&self.step).map(|(o, s)| o + k * s).collect()
    }
}

/// Stabilized values of a horofunction on the window, in the order of
/// [`window_points`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowFunction {
    pub ray: Ray,
    pub stabilized_at: u64,
    pub values: Vec<i64>,
}

/// Points of the window: free coordinates in `[−radius, radius]`, torsion
/// coordinates over all residues, in lexicographic order.
pub fn window_points(spec: &AbelianGroupSpec, radius: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 0..spec.dim() {
        let range: Vec<i64> = if i < spec.rank {
            (-radius..=radius).collect()
        } else {
            (0..spec.torsion[i - spec.rank]).collect()
        };
        pts = pts
            .into_iter()
            .flat_map(|p| {
                range.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Word norms on `G`, from a ball that is regrown when a query leaves it.
struct NormOracle<'a> {
    spec: &'a AbelianGroupSpec,
    ball: AbelianBall,
}

impl<'a> NormOracle<'a> {
    fn new(spec: &'a AbelianGroupSpec) -> Result<Self, HoroError> {
        let ball = abelian_ball(&spec.graph()?, 8, Budget::unlimited())?;
        Ok(Self { spec, ball })
    }

    fn norm(&mut self, g: &[i64]) -> Result<i64, HoroError> {
        let g = self.spec.reduce(g);
        loop {
            match self.ball.norm(&g) {
                Ok(n) => return Ok(n as i64),
                Err(MetricError::OutsideRadius { radius }) => {
                    self.ball = abelian_ball(self.ball.graph(), radius * 2, Budget::unlimited())?;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

/// Follows the ray until the window table is unchanged for `depth`
/// consecutive steps.
pub fn horofunction_window(
    spec: &AbelianGroupSpec,
    ray: &Ray,
    radius: i64,
    depth: u64,
    max_steps: u64,
) -> Result<WindowFunction, HoroError> {
    let pts = window_points(spec, radius);
    let mut oracle = NormOracle::new(spec)?;
    let mut prev: Option<Vec<i64>> = None;
    let mut streak = 0;
    for k in 1..=max_steps {
        let p = ray.point(k as i64);
        let base = oracle.norm(&p)?;
        let values = pts
            .iter()
            .map(|x| {
                let diff: Vec<i64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
                Ok(oracle.norm(&diff)? - base)
            })
            .collect::<Result<Vec<i64>, HoroError>>()?;
        if prev.as_ref() == Some(&values) {
            streak += 1;
            if streak >= depth {
                return Ok(WindowFunction {
                    ray: ray.clone(),
                    stabilized_at: k - depth,
                    values,
                });
            }
        } else {
            streak = 0;
        }
        prev = Some(values);
    }
    Err(HoroError::NonStabilized { steps: max_steps })
}

/// Rays heading into a face: the step is the sum of the face's
/// generators, offsets run over the box `0 ≤ xᵢ < max(1, |stepᵢ|)` times
/// all torsion residues.
pub fn face_rays(spec: &AbelianGroupSpec, face: &Face) -> Vec<Ray> {
    let step = face
        .0
        .iter()
        .fold(vec![0; spec.dim()], |acc, &i| spec.add(&acc, &spec.elements[i]));
    let mut offsets: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 0..spec.dim() {
        let width = if i < spec.rank { step[i].abs().max(1) } else { spec.torsion[i - spec.rank] };
        offsets = offsets
            .into_iter()
            .flat_map(|o| {
                (0..width).map(move |v| {
                    let mut q = o.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    offsets
        .into_iter()
        .map(|offset| Ray {
            offset,
            step: step.clone(),
        })
        .collect()
}

fn oscillation(vals: impl Iterator<Item = i64>) -> i64 {
    let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        0
    } else {
        hi - lo
    }
}

/// Groups window functions whose difference looks bounded: the oscillation
/// of `φ − ψ` over the full window equals its oscillation over the half
/// window (free coordinates within `radius/2`). Classes are the connected
/// components of that relation, listed by smallest member.
pub fn bounded_difference_classes(
    spec: &AbelianGroupSpec,
    fns: &[WindowFunction],
    radius: i64,
) -> Vec<Vec<usize>> {
    let pts = window_points(spec, radius);
    let inner: Vec<bool> = pts
        .iter()
        .map(|p| p[..spec.rank].iter().all(|v| v.abs() <= radius / 2))
        .collect();
    let n = fns.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let diff = || fns[i].values.iter().zip(&fns[j].values).map(|(a, b)| a - b);
            let full = oscillation(diff());
            let half = oscillation(diff().zip(&inner).filter(|(_, &keep)| keep).map(|(d, _)| d));
            if full == half {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<BTreeSet<usize>> = Vec::new();
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let distinct: BTreeSet<usize> = roots.iter().copied().collect();
    for r in distinct {
        classes.push((0..n).filter(|&i| roots[i] == r).collect());
    }
    classes.into_iter().map(|c| c.into_iter().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horoboundary::faces_hull;

    #[test]
    fn line_horofunction() {
        let z = AbelianGroupSpec::integers(&[1]).unwrap();
        let ray = Ray {
            offset: vec![0],
            step: vec![1],
        };
        let w = horofunction_window(&z, &ray, 10, 3, 100).unwrap();
        let expected: Vec<i64> = (-10..=10).map(|x: i64| -x).collect();
        assert_eq!(w.values, expected);
    }

    #[test]
    fn t_has_twenty_functions_in_two_classes() {
        let t = AbelianGroupSpec::integers(&[1, 10]).unwrap();
        let mut fns = Vec::new();
        for face in faces_hull(&t).unwrap() {
            let rays = face_rays(&t, &face);
            assert_eq!(rays.len(), 10);
            for r in rays {
                fns.push(horofunction_window(&t, &r, 40, 3, 200).unwrap());
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = fns.iter().map(|f| &f.values).collect();
        assert_eq!(distinct.len(), 20);
        let classes = bounded_difference_classes(&t, &fns, 40);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0], (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn same_face_offsets_differ_boundedly() {
        let t = AbelianGroupSpec::integers(&[1, 10]).unwrap();
        let a = horofunction_window(&t, &Ray { offset: vec![0], step: vec![10] }, 30, 3, 200).unwrap();
        let b = horofunction_window(&t, &Ray { offset: vec![3], step: vec![10] }, 30, 3, 200).unwrap();
        let c = horofunction_window(&t, &Ray { offset: vec![0], step: vec![-10] }, 30, 3, 200).unwrap();
        let classes = bounded_difference_classes(&t, &[a, b, c], 30);
        assert_eq!(classes, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn non_stabilized_is_reported() {
        let t = AbelianGroupSpec::integers(&[1, 10]).unwrap();
        let ray = Ray {
            offset: vec![0],
            step: vec![10],
        };
        assert_eq!(
            horofunction_window(&t, &ray, 40, 3, 2),
            Err(HoroError::NonStabilized { steps: 2 })
        );
    }

    #[test]
    fn window_with_torsion() {
        let s = AbelianGroupSpec::new("zz2", 1, vec![2], vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert_eq!(window_points(&s, 1).len(), 6);
        let ray = Ray {
            offset: vec![0, 0],
            step: vec![1, 0],
        };
        let w = horofunction_window(&s, &ray, 4, 3, 100).unwrap();
        // φ(x, t) = −x + t
        let expected: Vec<i64> = window_points(&s, 4).iter().map(|p| -p[0] + p[1]).collect();
        assert_eq!(w.values, expected);
    }
}
