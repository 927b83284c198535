//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line
//! (visible with `--nocapture`, and always shown for failures).

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wordgeom::cayley::{bfs_ball, eh_displacement, Budget, HeisPoint};
use wordgeom::group::{eval_word, GeneratorSet, HeisElement};
use wordgeom::heis_norm::{central_norm_table, check_area_z, random_closed_word, CentralWordBuilder};
use wordgeom::horoboundary::{
    agreement_bound, bounded_difference_classes, face_rays, faces_bruteforce, faces_hull, flag_complex,
    horofunction_window, reduced_boundary, AbelianGroupSpec,
};
use wordgeom::isoperimetric::{extreme_points, gamma_bruteforce, gamma_exact};
use wordgeom::polygon::{Polygon, Vec2, VectorSet};

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn set(pairs: &[[i64; 2]]) -> VectorSet {
    VectorSet::symmetric_closure(pairs.iter().map(|&p| Vec2::from(p))).unwrap()
}

#[test]
fn criterion_1_gamma_exactness() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, vs, expected) in [
        ("square", set(&[[1, 0], [0, 1]]), q(1, 16)),
        ("hexagon", set(&[[1, 0], [0, 1], [1, 1]]), q(1, 12)),
    ] {
        let exact = gamma_exact(&vs).unwrap().gamma;
        let brute = gamma_bruteforce(&vs, 9).gamma;
        ok &= exact == expected && brute == expected;
        // every bound up to 9 stays below the exact value
        for n in 1..=9 {
            ok &= gamma_bruteforce(&vs, n).gamma <= exact;
        }
        notes.push(format!("{name}: exact {exact}, bruteforce(9) {brute}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 1.0;
    report(1, ok, format!("{}; {secs:.3}s", notes.join("; ")));
}

#[test]
fn criterion_2_extreme_point_restriction() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    let mut checked = 0;
    while checked < 6 {
        let k = rng.gen_range(2..=5);
        let vs: Vec<Vec2> = (0..k)
            .map(|_| Vec2::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            .filter(|v| !v.is_zero())
            .collect();
        let Ok(vs) = VectorSet::symmetric_closure(vs) else { continue };
        if vs.len() < 4 || vs.is_collinear() {
            continue;
        }
        let exact = gamma_exact(&vs).unwrap().gamma;
        let ext = gamma_exact(&extreme_points(&vs).unwrap()).unwrap().gamma;
        let brute = gamma_bruteforce(&vs, 8).gamma;
        ok &= exact == ext && brute <= exact;
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    report(2, ok, format!("{checked} random sets; {secs:.2}s"));
}

#[test]
fn criterion_3_central_norms() {
    let start = Instant::now();
    let s = GeneratorSet::standard();
    let gamma = q(1, 16);
    let b28 = bfs_ball(&s, 28, Budget::unlimited()).unwrap();
    let t28 = central_norm_table(&b28, &gamma).unwrap();
    let mut squares_ok = true;
    for k in 1..=7i64 {
        squares_ok &= t28.norm(k * k) == Some(4 * k as u32);
    }
    let lower_ok = t28.lower_bound_ok == Some(true);
    let b24 = bfs_ball(&s, 24, Budget::unlimited()).unwrap();
    let t24 = central_norm_table(&b24, &gamma).unwrap();
    let monotone = t28.c_obs <= t24.c_obs;
    let worst = |t: &wordgeom::heis_norm::CentralTable| {
        t.rows
            .iter()
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
            .map(|r| r.z)
            .unwrap()
    };
    report(
        3,
        squares_ok && lower_ok && monotone,
        format!(
            "|(0,0,k^2)| = 4k for k=1..7: {squares_ok}; lower bound: {lower_ok}; C_obs(24) = {:.4} at z={}, C_obs(28) = {:.4} at z={}; C_obs(28) <= C_obs(24): {monotone}; {:.1}s",
            t24.c_obs,
            worst(&t24),
            t28.c_obs,
            worst(&t28),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_4_area_and_height() {
    let s = GeneratorSet::from_triples(
        "k4",
        &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [1, 1, 4], [-1, -1, -3]],
    )
    .unwrap();
    assert_eq!(s.area_defect_k(), BigInt::from(4));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut literal_fail, mut exact_fail, mut bound_fail) = (0, 0, 0);
    let words = 100_000;
    for _ in 0..words {
        let len = rng.gen_range(0..=30);
        let w = random_closed_word(&s, len, &mut rng);
        let c = check_area_z(&w, &s).unwrap();
        literal_fail += usize::from(!c.full_product_identity_holds);
        exact_fail += usize::from(!c.identity_holds);
        bound_fail += usize::from(!c.bound_ok);
    }
    report(
        4,
        literal_fail == 0 && bound_fail == 0,
        format!(
            "{words} closed words, K = 4: z - a = sum(z_i - x_i y_i) fails on {literal_fail}; \
             z - a = sum(z_i - x_i y_i / 2) fails on {exact_fail}; |a - z| <= K l fails on {bound_fail}"
        ),
    );
}

#[test]
fn criterion_5_eh_displacement() {
    let s = GeneratorSet::standard();
    let g0 = HeisPoint::new(0, 0, 1);
    let mut observed = Vec::new();
    for r in [24u32, 28] {
        let ball = bfs_ball(&s, r, Budget::unlimited()).unwrap();
        let g0_norm = ball.norm(&g0).unwrap();
        // only the shell |y| = R − |g₀|
        let d = eh_displacement(&ball, &g0, r - g0_norm - 1).unwrap();
        observed.push((r, d.observed, d.regime_size));
    }
    let ok = observed[1].1 <= observed[0].1;
    let detail = observed
        .iter()
        .map(|(r, d, n)| format!("D_obs({r}) = {d} over {n} elements"))
        .collect::<Vec<_>>()
        .join("; ");
    report(5, ok, detail);
}

#[test]
fn criterion_6_faces_and_horoboundary() {
    let start = Instant::now();
    let t = AbelianGroupSpec::integers(&[1, 10]).unwrap();
    let poset = reduced_boundary(&t).unwrap();
    let two_faces = poset.len() == 2;
    let fibers = poset.faces.iter().all(|b| b.fiber_order == Some(BigInt::from(10)));
    let mut fns = Vec::new();
    for face in faces_hull(&t).unwrap() {
        for ray in face_rays(&t, &face) {
            fns.push(horofunction_window(&t, &ray, 40, 3, 500).unwrap());
        }
    }
    let distinct: BTreeSet<&Vec<i64>> = fns.iter().map(|f| &f.values).collect();
    let classes = bounded_difference_classes(&t, &fns, 40);

    let sq = AbelianGroupSpec::free("square", vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
    let sq_poset = reduced_boundary(&sq).unwrap();
    let fc = flag_complex(&sq_poset);
    let secs = start.elapsed().as_secs_f64();
    let ok = two_faces
        && fibers
        && distinct.len() == 20
        && classes.len() == 2
        && sq_poset.len() == 8
        && fc.is_cycle()
        && fc.euler_characteristic == 0
        && secs < 10.0;
    report(
        6,
        ok,
        format!(
            "T: {} faces, fibers of order 10: {fibers}, total {:?}, {} distinct window functions, {} classes; \
             square: {} faces, f-vector {:?}, 8-cycle: {}, chi = {}; {secs:.2}s",
            poset.len(),
            poset.total,
            distinct.len(),
            classes.len(),
            sq_poset.len(),
            fc.f_vector,
            fc.is_cycle(),
            fc.euler_characteristic
        ),
    );
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn criterion_7_face_oracle_agreement() {
    let mut specs = vec![AbelianGroupSpec::integers(&[1]).unwrap()];
    for a in 1..=12 {
        for b in a + 1..=12 {
            if gcd(a, b) == 1 {
                specs.push(AbelianGroupSpec::integers(&[a, b]).unwrap());
            }
        }
    }
    specs.push(AbelianGroupSpec::free("square", vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap());
    specs.push(
        AbelianGroupSpec::free(
            "hexagon",
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, 1], vec![-1, -1]],
        )
        .unwrap(),
    );
    let mut disagree = Vec::new();
    let mut bounds: HashMap<String, Option<usize>> = HashMap::new();
    for spec in &specs {
        let mut hull = faces_hull(spec).unwrap();
        hull.sort();
        if faces_bruteforce(spec, 8) != hull {
            disagree.push(spec.name.clone());
            bounds.insert(spec.name.clone(), agreement_bound(spec, 30).unwrap());
        }
    }
    let worst = bounds.values().filter_map(|b| *b).max();
    let unresolved = bounds.values().filter(|b| b.is_none()).count();
    let t_bound = bounds.get("Z[1, 10]").copied().flatten();
    report(
        7,
        disagree.is_empty(),
        format!(
            "{} examples; {} disagree at bound 8; agreement bounds for those range up to {:?} ({} unresolved at 30); T agrees from bound {:?}",
            specs.len(),
            disagree.len(),
            worst,
            unresolved,
            t_bound
        ),
    );
}

#[test]
fn criterion_8_central_word_builder() {
    let start = Instant::now();
    let s = GeneratorSet::standard();
    let builder = CentralWordBuilder::new(&s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut eval_fail, mut ratio_fail) = (0, 0);
    let (mut lo, mut hi) = (f64::MAX, 0f64);
    for _ in 0..1000 {
        let z = rng.gen_range(10_000i64..=1_000_000);
        let plan = builder.build(z).unwrap();
        eval_fail += usize::from(eval_word(&plan.word, &s).unwrap() != HeisElement::central(z));
        let ratio = plan.length as f64 / (16.0 * z as f64).sqrt();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        ratio_fail += usize::from(!(1.0..=1.05).contains(&ratio));
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        8,
        eval_fail == 0 && ratio_fail == 0 && secs < 60.0,
        format!("1000 z in [1e4, 1e6]: eval failures {eval_fail}, ratio range [{lo:.5}, {hi:.5}], out of range {ratio_fail}; {secs:.2}s"),
    );
}

/// Checks the three polygon identities on one closed even-length polygon.
fn polygon_identities(p: &Polygon) -> bool {
    let (plus, minus) = p.split_symmetric().unwrap();
    let g = p.gamma().unwrap();
    let split = g == (plus.gamma().unwrap() + minus.gamma().unwrap()) / BigRational::from_integer(2.into());
    let order = [&plus, &minus]
        .iter()
        .all(|h| h.order().unwrap().area().unwrap() >= h.area().unwrap());
    let scale = (2..=3).all(|k| p.rescale(k).gamma().unwrap() == g);
    split && order && scale
}

#[test]
fn criterion_9_polygon_identities() {
    let hex = set(&[[1, 0], [0, 1], [1, 1]]);
    let v = hex.vectors().to_vec();
    // all words of length ≤ 4, grouped by endpoint
    let mut halves: Vec<Vec<Vec<Vec2>>> = vec![vec![Vec::new()]];
    for len in 1..=4 {
        let next: Vec<Vec<Vec2>> = halves[len - 1]
            .iter()
            .flat_map(|w| {
                v.iter().map(move |&e| {
                    let mut x = w.clone();
                    x.push(e);
                    x
                })
            })
            .collect();
        halves.push(next);
    }
    let mut failures = 0usize;
    let mut checked = 0usize;
    for (n, words) in halves.iter().enumerate().skip(1) {
        let mut by_end: HashMap<(i64, i64), Vec<&Vec<Vec2>>> = HashMap::new();
        for w in words {
            let e = w.iter().fold((0, 0), |(x, y), u| (x + u.x, y + u.y));
            by_end.entry(e).or_default().push(w);
        }
        for a in words {
            let e = a.iter().fold((0, 0), |(x, y), u| (x + u.x, y + u.y));
            for b in by_end.get(&(-e.0, -e.1)).into_iter().flatten() {
                let p = Polygon::new(a.iter().chain(b.iter()).copied().collect());
                debug_assert_eq!(p.perimeter(), 2 * n);
                checked += 1;
                failures += usize::from(!polygon_identities(&p));
            }
        }
    }
    let exhaustive = checked;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let mut edges: Vec<Vec2> = (0..2 * n - 1)
            .map(|_| Vec2::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4)))
            .collect();
        let (sx, sy) = edges.iter().fold((0, 0), |(x, y), u| (x + u.x, y + u.y));
        edges.push(Vec2::new(-sx, -sy));
        let p = Polygon::new(edges);
        checked += 1;
        failures += usize::from(!polygon_identities(&p));
    }
    report(
        9,
        failures == 0,
        format!("{exhaustive} closed hexagon-set words of length 2n (n <= 4) plus 10000 random closed polygons; {checked} checked, {failures} failures"),
    );
}
