//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use arcspace::catalog::{self, DEFAULT_NAMES};
use arcspace_core::arcjets::{
    filtration_dims, nonreduced_component_dim, reduced_component_dim, ComponentKey,
};
use arcspace_core::characters::{
    component_character, freeness_check, principal_ideal_slice_dims, veronese_segre_character,
};
use arcspace_core::cubedata::{
    box_data, gamma_parallelepiped, gamma_simplex, segment_data, simplex_data,
};
use arcspace_core::lattice::{LatticePoint, LatticePolytope, PointOrder};
use arcspace_core::relations::{pushforward, verify_identically_zero};
use arcspace_core::symfun::{
    phi_vee_points, poly_add, poly_scale, power_sum, split_check, PairOrder, SymPoly,
};
use arcspace_core::toricring::{cells, toric_ideal_generators, ToricContext};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ctx_of(p: LatticePolytope) -> ToricContext {
    ToricContext::new(p).expect("catalog polytopes have nonnegative coordinates")
}

fn segment_oracle() -> Outcome {
    let (p, data) = segment_data(2);
    let ctx = ctx_of(p);
    let chi = component_character(&data, 2, 2);
    let dims: Vec<usize> = (0..=2)
        .map(|d| reduced_component_dim(&ctx, &ComponentKey::new(vec![2], 2, d)))
        .collect();
    let formula: Vec<usize> = (0..=2).map(|d| chi.get(&[2], d) as usize).collect();
    if dims == [1, 2, 4] && formula == dims {
        Ok(format!("dims {dims:?}"))
    } else {
        Err(format!("oracle {dims:?}, formula {formula:?}"))
    }
}

fn nilpotency() -> Outcome {
    let mut checked = 0;
    for name in DEFAULT_NAMES {
        let e = catalog::entry(name).map_err(|e| e.to_string())?;
        if e.polytope.len() > 10 {
            continue;
        }
        let m = e.polytope.len();
        let ctx = ctx_of(e.polytope.clone());
        for i in 0..m {
            for j in 0..m {
                for k in 0..e.data.gamma(i, j) {
                    let rs = pushforward(&e.data, i, j, k).map_err(|x| format!("{name}: {x}"))?;
                    let zero = verify_identically_zero(&ctx, &rs, 6).map_err(|x| x.to_string())?;
                    if !zero {
                        return Err(format!("{name}: pair ({i},{j}) k={k} is not zero"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} series vanish up to N=6"))
}

fn non_reducedness() -> Outcome {
    let (p, _) = segment_data(3);
    let ctx = ctx_of(p);
    let gens: Vec<_> = toric_ideal_generators(&ctx, 2)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|b| b.to_poly())
        .collect();
    let key = ComponentKey::new(vec![3], 2, 1);
    let nonreduced = nonreduced_component_dim(&ctx, &gens, &key).map_err(|e| e.to_string())?;
    let reduced = reduced_component_dim(&ctx, &key);
    if nonreduced == 3 && reduced == 2 {
        Ok(format!("nonreduced {nonreduced} > reduced {reduced}"))
    } else {
        Err(format!("nonreduced {nonreduced}, reduced {reduced}"))
    }
}

fn filtration_subquotients() -> Outcome {
    let mut checked = 0;
    for name in [
        "triangle:2",
        "hirzebruch:1,2",
        "square",
        "cube",
        "simplex:3,1",
        "box:2,1,1",
    ] {
        let e = catalog::entry(name).map_err(|e| e.to_string())?;
        let gamma = e.data.gamma_matrix();
        let order = e.data.order();
        let ctx = ctx_of(e.polytope.clone());
        for l in 1..=2 {
            for a in cells(&ctx, l).keys() {
                for d in 0..=5 {
                    let steps = filtration_dims(&ctx, a, l, d, |x, y| order.compare(x, y).unwrap());
                    for s in steps {
                        let formula = principal_ideal_slice_dims(&s.r, &gamma, d) as usize;
                        if formula != s.subquotient {
                            return Err(format!(
                                "{name} a={a:?} r={:?} d={d}: oracle {} formula {formula}",
                                s.r, s.subquotient
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} subquotients"))
}

fn power_sum_images() -> Outcome {
    let pts: Vec<LatticePoint> = [[0, 0], [1, 1], [2, 1], [1, 2]]
        .iter()
        .map(|c| LatticePoint::new(c.to_vec()))
        .collect();
    let map = phi_vee_points(&pts, &[1, 1, 1, 1]).map_err(|e| e.to_string())?;
    let src = map.source();
    let tgt = map.target();
    let w = src.group_of_label("w").expect("w group");
    let expected: [(usize, [i64; 4]); 3] =
        [(w, [1, 1, 1, 1]), (0, [0, 1, 2, 1]), (1, [0, 1, 1, 2])];
    for k in 1..=6 {
        for (g, coeffs) in &expected {
            let mut want = SymPoly::new();
            for (j, c) in coeffs.iter().enumerate() {
                want = poly_add(&want, &poly_scale(&power_sum(tgt, j, k), &BigInt::from(*c)));
            }
            if map.apply(&power_sum(src, *g, k)) != want {
                return Err(format!("group {g}, k={k}"));
            }
        }
    }
    Ok(String::from("three images, k = 1..6"))
}

fn freeness() -> Outcome {
    let mut checked = 0;
    for name in DEFAULT_NAMES {
        let e = catalog::entry(name).map_err(|e| e.to_string())?;
        let ctx = ctx_of(e.polytope.clone());
        for l in 1..=2 {
            let chi = component_character(&e.data, l, 8);
            for a in cells(&ctx, l).keys() {
                let numerator = chi.numerator(a);
                if numerator.nonnegative_integers().is_none() || !freeness_check(&chi, a) {
                    return Err(format!("{name} a={a:?} L={l}: {numerator}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} components"))
}

fn rows_with_total(len: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<u32>| {
                let used: u32 = pre.iter().sum();
                (0..=max_total - used).map(move |x| {
                    let mut v = pre.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn split_membership() -> Outcome {
    let mut cases = Vec::new();
    for z0 in 0..=2usize {
        for r0 in rows_with_total(z0 + 1, 3) {
            let t0: u32 = r0.iter().sum();
            if t0 > 0 {
                cases.push(vec![r0.clone()]);
            }
            for z1 in 0..=2usize {
                for r1 in rows_with_total(z1 + 1, 3 - t0) {
                    if t0 + r1.iter().sum::<u32>() > 0 {
                        cases.push(vec![r0.clone(), r1]);
                    }
                }
            }
        }
    }
    for r in &cases {
        for order in [PairOrder::ByPoint, PairOrder::ByLevel] {
            if !split_check(r, order, 4).map_err(|e| e.to_string())? {
                return Err(format!("r={r:?} {order:?}"));
            }
        }
    }
    Ok(format!("{} vectors, two pair orders", cases.len()))
}

fn gamma_consistency() -> Outcome {
    let mut checked = 0;
    for dims in [
        vec![1, 1],
        vec![2, 1],
        vec![1, 2],
        vec![2, 2],
        vec![1, 1, 1],
        vec![2, 1, 1],
        vec![1, 2, 1],
        vec![2, 2, 1],
    ] {
        let (p, data) = box_data(&dims).map_err(|e| e.to_string())?;
        for (i, a) in p.points().iter().enumerate() {
            for (j, b) in p.points().iter().enumerate() {
                if i == j {
                    continue;
                }
                let closed = gamma_parallelepiped(&dims, a.coords(), b.coords())
                    .map_err(|e| e.to_string())?;
                if closed != data.gamma(i, j) {
                    return Err(format!(
                        "box {dims:?} {a} {b}: {closed} vs {}",
                        data.gamma(i, j)
                    ));
                }
                checked += 1;
            }
        }
    }
    for n in 1..=3 {
        for d in 1..=2 {
            let (p, data) = if n == 1 {
                segment_data(d)
            } else {
                simplex_data(n, d).map_err(|e| e.to_string())?
            };
            for (i, a) in p.points().iter().enumerate() {
                for (j, b) in p.points().iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let closed =
                        gamma_simplex(n, d, a.coords(), b.coords()).map_err(|e| e.to_string())?;
                    if closed != data.gamma(i, j) {
                        return Err(format!(
                            "simplex {n},{d} {a} {b}: {closed} vs {}",
                            data.gamma(i, j)
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} ordered pairs"))
}

fn product_formula() -> Outcome {
    let vs = veronese_segre_character(&[2, 2], &[1, 2], 2, 4).map_err(|e| e.to_string())?;
    let rect = LatticePolytope::from_vertices(
        [[0, 0], [1, 0], [0, 2], [1, 2]]
            .iter()
            .map(|c| LatticePoint::new(c.to_vec()))
            .collect(),
        PointOrder::GradedLex,
    )
    .map_err(|e| e.to_string())?;
    let ctx = ctx_of(rect);
    let mut oracle = vec![0u64; 5];
    for a in cells(&ctx, 2).keys() {
        for (d, slot) in oracle.iter_mut().enumerate() {
            *slot += reduced_component_dim(&ctx, &ComponentKey::new(a.clone(), 2, d as u32)) as u64;
        }
    }
    if vs.totals() == oracle {
        Ok(format!("totals {oracle:?}"))
    } else {
        Err(format!("formula {:?}, oracle {oracle:?}", vs.totals()))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "segment oracle match",
            Some(Duration::from_secs(1)),
            segment_oracle,
        ),
        (
            "nilpotency suite",
            Some(Duration::from_secs(60)),
            nilpotency,
        ),
        (
            "non-reducedness on [0,3]",
            Some(Duration::from_secs(1)),
            non_reducedness,
        ),
        (
            "filtration subquotients",
            Some(Duration::from_secs(300)),
            filtration_subquotients,
        ),
        ("power-sum images", None, power_sum_images),
        ("freeness divisibility", None, freeness),
        ("split membership", None, split_membership),
        ("iterated gamma vs closed forms", None, gamma_consistency),
        (
            "product formula",
            Some(Duration::from_secs(60)),
            product_formula,
        ),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let late = limit.is_some_and(|l| elapsed > l);
        let (verdict, detail) = match (&outcome, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {:?} limit", limit.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} {} {name} [{:.2}s]: {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
