//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always reach the output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use meyerion_core::arrangement::{cone_contains, closure, Arrangement, CutType};
use meyerion_core::cps::{
    covering_check, fibonacci, flc_census, generate_model_set, meyer_witness, min_sq_distance, octagonal, torus_reduce,
    BoundaryConvention, BoundaryPolicy, PointPattern, Provenance, Scheme,
};
use meyerion_core::dynamics::{
    coincidence_rank_estimate, fiber_elements, hull_metric_upper, n_r, sample_translates, statistical_coincidence,
    strong_proximal_witness, validate_convention,
};
use meyerion_core::ellis::{
    compatible_elements, compatible_points, ellis_action, ellis_product, lattice_samples, Monoid, Order,
};
use meyerion_core::exact::linalg;
use meyerion_core::substitution::{classify, punctures_fixed_point, CoincidenceRank, Lengths, PunctureRule};
use meyerion_core::FieldScalar;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn int(n: i64) -> FieldScalar {
    FieldScalar::from_integer(n)
}

fn ratio(p: i64, q: i64) -> FieldScalar {
    FieldScalar::ratio(p, q)
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Zero-based cut type from one-based indices.
fn cut(indices: &[usize]) -> CutType {
    CutType(indices.iter().map(|i| i - 1).collect())
}

fn octagonal_arrangement() -> Arrangement {
    Arrangement::new(&octagonal()).expect("octagonal arrangement")
}

fn c1_arrangement_census() -> Outcome {
    let arr = octagonal_arrangement();
    let cuts = arr.cut_types().len();
    let points = arr.point_types();
    let on = |c: CutType| points.iter().filter(|p| p.domain() == c).count();
    let (d1, d24) = (on(cut(&[1])), on(cut(&[2, 4])));
    ensure(cuts == 8 && points.len() == 25 && d1 == 2 && d24 == 4, || {
        format!("cut types {cuts}, point types {}, dom{{1}} {d1}, dom{{2,4}} {d24}", points.len())
    })?;
    Ok("8 cut types, 25 point types, dom{1} = 2, dom{2,4} = 4".to_string())
}

fn c2_monoid() -> Outcome {
    let arr = octagonal_arrangement();
    let m = Monoid::new(&arr).map_err(err)?;
    let n = m.len();
    ensure(n == 17, || format!("{n} transformation types"))?;
    ensure(m.types().iter().all(|t| t.is_effective()), || "ineffective type".into())?;
    for a in 0..n {
        ensure(m.product(a, a) == a, || format!("{} is not idempotent", m.types()[a].signs))?;
        ensure(m.product(m.unit(), a) == a && m.product(a, m.unit()) == a, || "unit law".into())?;
        for b in 0..n {
            for c in 0..n {
                ensure(m.product(m.product(a, b), c) == m.product(a, m.product(b, c)), || {
                    format!("associativity fails at ({a}, {b}, {c})")
                })?;
            }
        }
    }
    let ideal = m.minimal_ideal().map_err(err)?;
    let full: Vec<usize> = (0..n).filter(|&a| m.types()[a].is_full_domain()).collect();
    ensure(ideal == full && ideal.len() == 8, || format!("minimal ideal {ideal:?}"))?;
    // unique: every principal left ideal T t contains the full-domain types
    for a in 0..n {
        let principal: BTreeSet<usize> = (0..n).map(|b| m.product(b, a)).collect();
        ensure(ideal.iter().all(|i| principal.contains(i)), || "second minimal ideal".into())?;
    }
    let mut dominated = 0;
    for &t in &ideal {
        for s in 0..n {
            ensure(m.product(t, s) == t, || "left domination fails".into())?;
            dominated += 1;
        }
    }
    Ok(format!(
        "17 effective idempotent types, {} associative triples, unique minimal ideal of 8, {dominated} dominated products",
        n * n * n
    ))
}

fn c3_order_geometry() -> Outcome {
    let arr = octagonal_arrangement();
    let m = Monoid::new(&arr).map_err(err)?;
    let dim = arr.dim();
    let mut exceptions = 0;
    for a in 0..m.len() {
        for b in 0..m.len() {
            let alg = matches!(m.algebraic_order(a, b), Order::Greater | Order::Equal);
            let geo = cone_contains(&closure(&m.types()[b].cone), &m.types()[a].cone, dim).map_err(err)?;
            if alg != geo {
                exceptions += 1;
            }
        }
    }
    ensure(exceptions == 0, || format!("{exceptions} exceptions"))?;
    Ok(format!("{} ordered pairs, 0 exceptions", m.len() * m.len()))
}

fn c4_action_laws() -> Outcome {
    let arr = octagonal_arrangement();
    let s = arr.scheme();
    let samples = lattice_samples(&arr, 1, 3);
    let elements = compatible_elements(&arr, &samples).map_err(err)?;
    let points = compatible_points(&arr, &samples).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let triples = 200;
    let mut types = BTreeSet::new();
    for _ in 0..triples {
        let e = &elements[rng.gen_range(0..elements.len())];
        let f = &elements[rng.gen_range(0..elements.len())];
        let x = &points[rng.gen_range(0..points.len())];
        types.insert(e.signs().to_string());
        let left = ellis_action(&arr, &ellis_product(&arr, e, f).map_err(err)?, x).map_err(err)?;
        let right = ellis_action(&arr, e, &ellis_action(&arr, f, x).map_err(err)?).map_err(err)?;
        ensure(left == right, || format!("({e} {f}) {x} = {left} but {e} ({f} {x}) = {right}"))?;
        ensure(left.xi == torus_reduce(s, &linalg::add(&linalg::add(&e.xi, &f.xi), &x.xi)), || {
            format!("first coordinate of {left}")
        })?;
        ensure(arr.point_type(&left.point_type.signs).is_some(), || {
            format!("{} is not a feasible point type", left.point_type.signs)
        })?;
    }
    Ok(format!(
        "{triples} triples over {} elements / {} points ({} transformation types hit)",
        elements.len(),
        points.len(),
        types.len()
    ))
}

/// Least squared distance by direct comparison of all pairs.
fn brute_min_sq(p: &PointPattern) -> f64 {
    let a = p.approx();
    let mut best = f64::INFINITY;
    for i in 0..a.len() {
        for j in 0..i {
            let d: f64 = a[i].iter().zip(&a[j]).map(|(x, y)| (x - y) * (x - y)).sum();
            best = best.min(d);
        }
    }
    best
}

fn c5_model_set_geometry() -> Outcome {
    let s = octagonal();
    let y = [ratio(1, 3), ratio(1, 5)];
    let gen = |r| generate_model_set(&s, &y, &int(r), &BoundaryPolicy::Open).map_err(err);
    let p20 = gen(20)?;
    let min = min_sq_distance(&p20).ok_or("no pairs")?;
    let expected = FieldScalar::quadratic(2, 1, -1, 1, 2);
    ensure(min == expected, || format!("min squared distance {min}"))?;
    ensure((brute_min_sq(&p20) - expected.to_f64()).abs() < 1e-12, || "brute force disagrees".into())?;
    let cover = covering_check(&p20, &int(1), &rat(1, 4)).map_err(err)?;
    ensure(cover.holds(), || format!("{} uncovered grid points", cover.uncovered.len()))?;
    let (f30, f40) = (flc_census(&gen(30)?, &int(2)), flc_census(&gen(40)?, &int(2)));
    ensure(f30 == f40, || format!("2-patch census {f30} at R = 30, {f40} at R = 40"))?;
    let m = meyer_witness(&p20, &int(1)).map_err(err)?;
    ensure(m.f.len() == 34 && m.inclusion_holds(), || {
        format!("|F| = {}, {} failures", m.f.len(), m.failures.len())
    })?;
    Ok(format!(
        "{} points, min distance^2 = {min}, covering rc = 1 on {} samples, {f30} 2-patches at R = 30 and 40, |F| = 34 at K = 1",
        p20.len(),
        cover.sample_points
    ))
}

fn c6_fiber_structure() -> Outcome {
    let arr = octagonal_arrangement();
    let mut parts = Vec::new();
    for (xi, size) in [
        ([ratio(1, 3), ratio(1, 5)], 1),
        ([ratio(1, 2), int(0)], 2),
        ([ratio(1, 2), ratio(-1, 2)], 4),
        ([int(0), int(0)], 8),
    ] {
        let f = fiber_elements(&arr, &xi, BoundaryConvention::Forward).map_err(err)?;
        let distinct = n_r(&f, &int(5)).map_err(err)?;
        ensure(f.len() == size && distinct == size, || {
            format!("cut {}: {} elements, {distinct} distinct 5-patches", f.cut_type, f.len())
        })?;
        parts.push(format!("{}:{size}", f.cut_type));
    }
    Ok(format!("fiber sizes {} with pairwise distinct 5-patches", parts.join(" ")))
}

fn c7_convention() -> Outcome {
    let arr = octagonal_arrangement();
    let mut checked = 0;
    let mut flips = 0;
    for xi in [[ratio(1, 2), int(0)], [ratio(1, 2), ratio(-1, 2)], [int(0), int(0)]] {
        let r = validate_convention(&arr, &xi, &int(10), &[6, 7, 8]).map_err(err)?;
        let label = || format!("xi = ({}, {})", xi[0], xi[1]);
        ensure(r.checks.iter().all(|c| c.oracle_stable), || format!("{}: oracle not stable for k = 6, 7, 8", label()))?;
        ensure(r.validated(), || format!("{}: convention {:?} does not match the oracle", label(), r.convention))?;
        checked += r.checks.len();
        flips += usize::from(r.flipped);
    }
    Ok(format!(
        "{checked} cone-limit patterns over cut types {{1}}, {{2,4}}, {{1,2,3,4}} equal the open-window limit on B_10 for k = 6, 7, 8; {flips} flips"
    ))
}

fn worm_fiber(arr: &Arrangement, radius: i64) -> Result<Vec<PointPattern>, String> {
    let f = fiber_elements(arr, &[ratio(1, 2), int(0)], BoundaryConvention::Forward).map_err(err)?;
    f.patterns(&int(radius)).map_err(err)
}

fn c8_statistical_coincidence() -> Outcome {
    let arr = octagonal_arrangement();
    let p = worm_fiber(&arr, 80)?;
    let d = statistical_coincidence(&p[0], &p[1], &[int(20), int(40), int(80)]).map_err(err)?;
    ensure(d.is_monotone_decreasing() && d.densities[2] <= d.densities[0] / 3.0, || {
        format!("densities {:?}", d.densities)
    })?;
    let w = strong_proximal_witness(&p[0], &p[1], &int(10), &rat(10, 1), None).map_err(err)?;
    let t = w.witness.ok_or("no strong-proximality witness at R = 10")?;
    let approx: Vec<String> = t.iter().map(|x| format!("{:.3}", x.to_f64())).collect();
    Ok(format!(
        "densities {:.5} {:.5} {:.5} (counts {:?}), R = 10 witness t = ({})",
        d.densities[0],
        d.densities[1],
        d.densities[2],
        d.counts,
        approx.join(", ")
    ))
}

fn c9_density_one() -> Outcome {
    let arr = octagonal_arrangement();
    let f = fiber_elements(&arr, &[ratio(1, 2), int(0)], BoundaryConvention::Forward).map_err(err)?;
    let samples = sample_translates(2, 20, 200, 2024);
    let est = coincidence_rank_estimate(&f, &int(5), &samples).map_err(err)?;
    let fraction = est.single_patch_fraction();
    let summary = format!(
        "cr estimate {}, single 5-patch fraction {fraction:.3} ({} of {} translates in [-20, 20]^2)",
        est.estimate, est.single_patch_translates, est.samples
    );
    ensure(est.estimate == 1 && fraction >= 0.95, || summary.clone())?;
    Ok(summary)
}

fn c10_classifier() -> Outcome {
    let get = |rules: &str| rules.parse().and_then(|s| classify(&s)).map_err(err);
    let has = |r: &meyerion_core::substitution::SpectralReport, claim: &str| r.verdicts.iter().any(|v| v.claim == claim);

    let tm = get("0:01,1:10")?;
    ensure(
        tm.primitive
            && tm.constant_length == Some(2)
            && tm.pisot()
            && tm.perron.minpoly.to_string() == "x - 2"
            && tm.coincidence_rank == CoincidenceRank::Known(2)
            && tm.pure_point == Some(false),
        || format!("Thue-Morse: {tm:?}"),
    )?;
    let pd = get("a:ab,b:aa")?;
    ensure(pd.coincidence_rank == CoincidenceRank::Known(1) && pd.pure_point == Some(true), || {
        format!("period doubling: {} pure_point {:?}", pd.coincidence_rank, pd.pure_point)
    })?;
    let fib = get("a:ab,b:a")?;
    ensure(fib.pisot() && fib.meyer && has(&fib, "Meyer"), || "Fibonacci is not Meyer".into())?;
    let np = get("a:abbb,b:a")?;
    ensure(
        !np.pisot() && !np.meyer && has(&np, "maximal equicontinuous factor trivial"),
        || "a:abbb,b:a misclassified".into(),
    )?;
    for r in [&tm, &pd, &fib, &np] {
        ensure(r.is_consistent(), || format!("{} verdicts inconsistent", r.substitution))?;
    }
    Ok("Thue-Morse cr=2 not pure point, period doubling cr=1 pure point, Fibonacci Meyer, a:abbb,b:a trivial factor".into())
}

fn in_unit_range(p: &PointPattern, lo: &FieldScalar, hi: &FieldScalar) -> Vec<FieldScalar> {
    let mut v: Vec<FieldScalar> = p
        .points()
        .iter()
        .map(|x| x[0].clone())
        .filter(|x| x >= lo && x <= hi)
        .collect();
    v.sort();
    v
}

fn c11_cross_validation() -> Outcome {
    let s: Scheme = fibonacci();
    let (lo, hi) = (int(0), int(100));
    let cps = generate_model_set(&s, &[int(0)], &int(101), &BoundaryPolicy::Open).map_err(err)?;
    let cps = in_unit_range(&cps, &lo, &hi);
    let subst = "a:ab,b:a".parse().map_err(err)?;
    let half = ratio(1, 2);
    let punct = punctures_fixed_point(&subst, 100, Lengths::Natural, &PunctureRule::Offset(half.clone())).map_err(err)?;
    let shifted: Vec<FieldScalar> = punct.points().iter().map(|x| &x[0] - &half).collect();
    let shifted = in_unit_range(
        &PointPattern::new(1, shifted.into_iter().map(|x| vec![x]).collect(), punct.radius().clone(), Provenance::default())
            .map_err(err)?,
        &lo,
        &hi,
    );
    ensure(cps.first() == Some(&lo) && shifted.first() == Some(&lo), || "first points differ from 0".into())?;
    ensure(cps == shifted, || {
        let k = cps.iter().zip(&shifted).position(|(a, b)| a != b).unwrap_or(cps.len().min(shifted.len()));
        format!("{} vs {} points, first difference at index {k}", cps.len(), shifted.len())
    })?;
    Ok(format!("{} points of [0, 100] agree exactly", cps.len()))
}

fn lattice_z(shift: &FieldScalar, radius: i64) -> PointPattern {
    let pts = (-radius - 1..=radius + 1)
        .map(|k| &int(k) + shift)
        .filter(|x| x.abs() <= int(radius))
        .map(|x| vec![x])
        .collect();
    PointPattern::new(1, pts, int(radius), Provenance::default()).expect("lattice pattern")
}

fn c12_metric() -> Outcome {
    let step = rat(1, 20);
    let max = rat(1, 1);
    let s = fibonacci();
    let p = generate_model_set(&s, &[ratio(1, 7)], &int(30), &BoundaryPolicy::Open).map_err(err)?;

    let same = hull_metric_upper(&p, &p, &step, &max).map_err(err)?;
    ensure(same.bound <= step, || format!("identical patterns give {}", same.bound))?;

    let t = ratio(1, 10);
    let moved = p.translated(std::slice::from_ref(&t), int(29)).map_err(err)?;
    let tr = hull_metric_upper(&p, &moved, &step, &max).map_err(err)?;
    let limit = rat(1, 11);
    ensure(tr.bound <= limit, || format!("translate by 1/10 gives {}", tr.bound))?;

    let z = hull_metric_upper(&lattice_z(&int(0), 30), &lattice_z(&ratio(-1, 10), 30), &step, &max).map_err(err)?;
    ensure(z.bound == rat(1, 21), || format!("Z vs Z - 1/10 gives {}", z.bound))?;
    Ok(format!(
        "identical {} (one grid step), translate by 1/10 {} <= 1/11, Z vs Z - 1/10 {}",
        same.bound, tr.bound, z.bound
    ))
}

fn main() -> ExitCode {
    // Criterion 9 is measured and reported but does not fail the suite.
    const INFORMATIONAL: &[usize] = &[9];
    let criteria: [Criterion; 12] = [
        ("octagonal arrangement census", c1_arrangement_census),
        ("transformation monoid", c2_monoid),
        ("order-geometry equivalence", c3_order_geometry),
        ("Ellis action laws", c4_action_laws),
        ("model-set geometry", c5_model_set_geometry),
        ("fiber structure", c6_fiber_structure),
        ("boundary convention", c7_convention),
        ("statistical coincidence", c8_statistical_coincidence),
        ("density-one single patches", c9_density_one),
        ("substitution classifier", c10_classifier),
        ("punctures vs cut-and-project", c11_cross_validation),
        ("hull metric examples", c12_metric),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                if !INFORMATIONAL.contains(&n) {
                    failed.push(n);
                }
                ("FAIL", d)
            }
        };
        println!("{tag} {n:>2} {name}: {detail} [{:.1}s]", t.elapsed().as_secs_f64());
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
