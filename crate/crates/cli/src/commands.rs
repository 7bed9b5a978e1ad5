use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use meyerion_core::arrangement::Arrangement;
use meyerion_core::cps::{
    fibonacci, generate_model_set, octagonal, validate_scheme, BoundaryConvention, BoundaryPolicy, PointPattern,
    Status,
};
use meyerion_core::dynamics::{
    ball_volume, coincidence_rank_estimate, fiber_elements, hull_metric_upper, n_r, sample_translates,
    statistical_coincidence, strong_proximal_witness, validate_convention, DEFAULT_PROBE_RADIUS,
};
use meyerion_core::ellis::{ellis_action, structure_report, EllisElement, XiPoint};
use meyerion_core::exact::rational::parse_rational;
use meyerion_core::substitution::{classify, punctures_fixed_point, Lengths, PunctureRule, Substitution1D};
use meyerion_core::FieldScalar;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::files::{self, load_points, load_scheme, points_json, read_input, sha256_hex, SchemeFile};
use crate::{pretty, svg, CliError, Meta, Report};

fn rational(name: &str, text: &str) -> Result<BigRational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

fn positive(name: &str, text: &str) -> Result<BigRational, CliError> {
    let q = rational(name, text)?;
    if q <= BigRational::from_integer(0.into()) {
        return Err(CliError::Input(format!("--{name} must be positive, got {q}")));
    }
    Ok(q)
}

fn scalar(q: &BigRational) -> FieldScalar {
    FieldScalar::from_rational(q.clone())
}

fn join(v: &[FieldScalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn strings(v: &[FieldScalar]) -> Value {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Octagonal,
    Fibonacci,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Boundary {
    Open,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LengthChoice {
    Natural,
    Unit,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub scheme: PathBuf,
    #[arg(long)]
    pub radius: String,
    /// Internal shift `y`, comma separated.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub shift: String,
    #[arg(long, value_enum, default_value_t = Boundary::Open)]
    pub boundary: Boundary,
    /// Write the points as a JSON array of coordinate strings.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    pub scheme: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    /// Radius of the generated patterns.
    #[arg(long)]
    pub radius: String,
    /// Patch radius for n_R and the coincidence test.
    #[arg(long, default_value_t = DEFAULT_PROBE_RADIUS.to_string())]
    pub probe_radius: String,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Half side of the sampling box for translates.
    #[arg(long = "box", default_value_t = 20)]
    pub half_side: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Convention::Forward)]
    pub convention: Convention,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write the density series here instead of into the text report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub rules: String,
    #[arg(long, value_enum, default_value_t = LengthChoice::Natural)]
    pub lengths: LengthChoice,
    /// Number of tiles in the sample of the fixed point.
    #[arg(long, default_value_t = 64)]
    pub prefix: usize,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Radius of the ball both point files cover.
    #[arg(long)]
    pub radius: String,
    #[arg(long)]
    pub grid_step: String,
    #[arg(long, default_value = "1")]
    pub max_epsilon: String,
}

#[derive(Debug, Args)]
pub struct ProximalityArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Radius of the ball both point files cover.
    #[arg(long)]
    pub radius: String,
    #[arg(long)]
    pub patch_radius: String,
    /// Half side of the search box.
    #[arg(long = "box", default_value = "10")]
    pub half_side: String,
    /// Radii of the density series; defaults to a quarter, half and all of `--radius`.
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn scheme_validate(path: &Path) -> Result<Report, CliError> {
    let input = read_input(path)?;
    let desc = files::parse_scheme_description(&input)?;
    let report = validate_scheme(&desc)?;
    let mut text = format!("scheme {}\n", report.scheme);
    for c in &report.checks {
        writeln!(text, "{:<4} {}: {}", c.status, c.name, c.detail).unwrap();
    }
    let overall = report.overall();
    writeln!(text, "overall {overall}").unwrap();
    let body = json!({
        "scheme": report.scheme,
        "overall": overall.to_string(),
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name, "status": c.status.to_string(), "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    let code = if overall == Status::Fail { 2 } else { 0 };
    Ok(Meta::new("scheme validate")
        .input("scheme", &input.sha256)
        .report(text, body, code))
}

pub fn scheme_generate(args: &GenerateArgs) -> Result<Report, CliError> {
    let (scheme, input) = load_scheme(&args.scheme)?;
    let radius = scalar(&positive("radius", &args.radius)?);
    let shift = scheme.parse_internal(&args.shift)?;
    let policy = match args.boundary {
        Boundary::Open => BoundaryPolicy::Open,
        Boundary::Closed => BoundaryPolicy::Closed,
    };
    let p = generate_model_set(&scheme, &shift, &radius, &policy)?;
    let points = points_json(&p);
    if let Some(out) = &args.out {
        files::write_file(out, &pretty(&points))?;
    }
    if let Some(path) = &args.svg {
        files::write_file(path, &svg::pattern(&p))?;
    }
    let mut text = format!("{} points\n", p.len());
    for v in p.points() {
        writeln!(text, "{}", join(v)).unwrap();
    }
    let body = json!({ "count": p.len(), "policy": policy.label(), "points": points });
    Ok(Meta::new("scheme generate")
        .input("scheme", &input.sha256)
        .param("radius", &radius)
        .param("shift", join(&shift))
        .param("boundary", policy.label())
        .report(text, body, 0))
}

pub fn scheme_builtin(name: Builtin) -> Result<Report, CliError> {
    let s = match name {
        Builtin::Octagonal => octagonal(),
        Builtin::Fibonacci => fibonacci(),
    };
    let file = SchemeFile::from_description(s.description());
    let invariant = |e: serde_json::Error| CliError::Invariant(e.to_string());
    let mut text = serde_json::to_string_pretty(&file).map_err(invariant)?;
    text.push('\n');
    Ok(Report {
        text,
        json: serde_json::to_value(&file).map_err(invariant)?,
        code: 0,
    })
}

pub fn arrangement_analyze(path: &Path) -> Result<Report, CliError> {
    let (scheme, input) = load_scheme(path)?;
    let arr = Arrangement::new(&scheme)?;
    let mut text = format!(
        "scheme {}: {} singular forms, minimal complexity {}\n",
        scheme.name(),
        arr.len(),
        arr.is_minimal_complexity()
    );
    writeln!(text, "\ncut types ({})", arr.cut_types().len()).unwrap();
    for c in arr.cut_types() {
        writeln!(text, "  {c}").unwrap();
    }
    writeln!(text, "\npoint types ({})", arr.point_types().len()).unwrap();
    for p in arr.point_types() {
        writeln!(text, "  {}  domain {}  witness {}", p.signs, p.domain(), join(&p.witness)).unwrap();
    }
    writeln!(text, "\ntransformation types ({})", arr.transformation_types().len()).unwrap();
    for t in arr.transformation_types() {
        writeln!(
            text,
            "  {}  effective {:<5}  cone dim {}{}",
            t.signs,
            t.is_effective(),
            t.cone_dim,
            if t.note.is_empty() { String::new() } else { format!("  ({})", t.note) }
        )
        .unwrap();
    }
    let body = json!({
        "scheme": scheme.name(),
        "forms": arr.len(),
        "minimal_complexity": arr.is_minimal_complexity(),
        "cut_types": arr.cut_types().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "point_types": arr.point_types().iter().map(|p| json!({
            "signs": p.signs.to_string(), "domain": p.domain().to_string(), "witness": strings(&p.witness),
        })).collect::<Vec<_>>(),
        "transformation_types": arr.transformation_types().iter().map(|t| json!({
            "signs": t.signs.to_string(), "effective": t.is_effective(), "cone_dim": t.cone_dim, "note": t.note,
        })).collect::<Vec<_>>(),
    });
    Ok(Meta::new("arrangement analyze")
        .input("scheme", &input.sha256)
        .report(text, body, 0))
}

pub fn ellis_table(path: &Path, csv_path: Option<&Path>) -> Result<Report, CliError> {
    let (scheme, input) = load_scheme(path)?;
    let arr = Arrangement::new(&scheme)?;
    let report = structure_report(&arr)?;
    let types = report.monoid.types();
    let sign = |k: usize| types[k].signs.to_string();

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "column", "product"]).map_err(csv_err)?;
    for row in report.cayley_rows() {
        w.write_record(row.iter().map(ToString::to_string)).map_err(csv_err)?;
    }
    let table = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
        .expect("CSV of sign strings is UTF-8");

    let mut text = format!("{} transformation types, unit {}\n", types.len(), sign(report.monoid.unit()));
    writeln!(text, "\ntypes (signs, cone dim, internal group, suspension group)").unwrap();
    for g in &report.groups {
        writeln!(
            text,
            "  {}{}  {}  {}  {}",
            g.signs,
            if g.minimal { "*" } else { " " },
            g.cone_dim,
            g.internal_group,
            g.suspension_group
        )
        .unwrap();
    }
    let ideal: Vec<String> = report.minimal_ideal.iter().map(|&k| sign(k)).collect();
    writeln!(text, "\nminimal ideal ({}): {}", ideal.len(), ideal.join(" ")).unwrap();
    writeln!(text, "\nhasse edges ({}), upper > lower", report.hasse.len()).unwrap();
    for &(a, b) in &report.hasse {
        writeln!(text, "  {} > {}", sign(a), sign(b)).unwrap();
    }
    match csv_path {
        Some(p) => files::write_file(p, &table)?,
        None => {
            text.push('\n');
            text.push_str(&table);
        }
    }
    let body = json!({
        "types": report.groups.iter().map(|g| json!({
            "signs": g.signs.to_string(), "cone_dim": g.cone_dim, "internal_group": g.internal_group,
            "suspension_group": g.suspension_group, "minimal": g.minimal,
        })).collect::<Vec<_>>(),
        "unit": sign(report.monoid.unit()),
        "minimal_ideal": ideal,
        "hasse": report.hasse.iter().map(|&(a, b)| [sign(a), sign(b)]).collect::<Vec<_>>(),
        "cayley": report.cayley_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Meta::new("ellis table")
        .input("scheme", &input.sha256)
        .report(text, body, 0))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn ellis_act(path: &Path, element: &str, point: &str) -> Result<Report, CliError> {
    let (scheme, input) = load_scheme(path)?;
    let arr = Arrangement::new(&scheme)?;
    let e = EllisElement::parse(&arr, element)?;
    let x = XiPoint::parse(&arr, point)?;
    let y = ellis_action(&arr, &e, &x)?;
    let certificate: Vec<String> = e.certificate.iter().map(ToString::to_string).collect();
    let text = format!("{e} . {x} = {y}\ncertificate {}\n", certificate.join(","));
    let body = json!({
        "element": e.to_string(),
        "certificate": certificate,
        "point": x.to_string(),
        "result": y.to_string(),
        "result_xi": strings(&y.xi),
        "result_signs": y.point_type.signs.to_string(),
    });
    Ok(Meta::new("ellis act")
        .input("scheme", &input.sha256)
        .param("element", &e)
        .param("point", &x)
        .report(text, body, 0))
}

pub fn fiber(args: &FiberArgs) -> Result<Report, CliError> {
    let (scheme, input) = load_scheme(&args.scheme)?;
    let arr = Arrangement::new(&scheme)?;
    let xi = scheme.parse_internal(&args.xi)?;
    let radius = scalar(&positive("radius", &args.radius)?);
    let probe = positive("probe-radius", &args.probe_radius)?;
    let probe_s = scalar(&probe);
    if args.half_side < 0 {
        return Err(CliError::Input("--box must be non-negative".into()));
    }
    let convention = match args.convention {
        Convention::Forward => BoundaryConvention::Forward,
        Convention::Backward => BoundaryConvention::Backward,
    };
    let fiber = fiber_elements(&arr, &xi, convention)?;
    let patterns = fiber.patterns(&radius)?;

    let max_r = probe.to_integer().try_into().unwrap_or(i64::MAX).max(1);
    let nr = (1..=max_r)
        .map(|r| Ok((r, n_r(&fiber, &FieldScalar::from_integer(r))?)))
        .collect::<Result<Vec<_>, CliError>>()?;

    let translates = sample_translates(scheme.physical_dim(), args.half_side, args.samples, args.seed);
    let cr = coincidence_rank_estimate(&fiber, &probe_s, &translates)?;

    let quarter = FieldScalar::ratio(1, 4);
    let half = FieldScalar::ratio(1, 2);
    let radii = [&radius * &quarter, &radius * &half, radius.clone()];
    let series = disagreement_series(&patterns, &radii);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["radius", "count", "density"]).map_err(csv_err)?;
    for (r, count, density) in &series {
        w.write_record([r.to_string(), count.to_string(), format!("{density:.9}")])
            .map_err(csv_err)?;
    }
    let table = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
        .expect("CSV of numbers is UTF-8");

    let mut text = format!(
        "xi {} (reduced), cut type {}, {} fiber elements\n",
        join(&fiber.xi),
        fiber.cut_type,
        fiber.len()
    );
    for (k, e) in fiber.elements.iter().enumerate() {
        writeln!(text, "  [{k}] {}  {} points", e.point_type.signs, patterns[k].len()).unwrap();
    }
    writeln!(text, "\nn_R").unwrap();
    for (r, n) in &nr {
        writeln!(text, "  R={r}: {n}").unwrap();
    }
    writeln!(
        text,
        "\ncr <= {} (upper bound from {} sampled translates, patch radius {probe})",
        cr.estimate, cr.samples
    )
    .unwrap();
    writeln!(
        text,
        "clique {:?}, single-patch fraction {:.4}",
        cr.clique,
        cr.single_patch_fraction()
    )
    .unwrap();
    for (i, j, t) in &cr.witnesses {
        writeln!(text, "  coincide [{i}] [{j}] at t = {}", join(t)).unwrap();
    }

    let oracle = if fiber.len() > 1 {
        let r = validate_convention(&arr, &xi, &probe_s, &[6, 7, 8])?;
        writeln!(
            text,
            "\nboundary convention {:?}{}: {}",
            r.convention,
            if r.flipped { " (flipped)" } else { "" },
            if r.validated() { "matches the open-window oracle" } else { "not validated" }
        )
        .unwrap();
        json!({
            "convention": format!("{:?}", r.convention),
            "flipped": r.flipped,
            "validated": r.validated(),
        })
    } else {
        Value::Null
    };

    match &args.csv {
        Some(p) => files::write_file(p, &table)?,
        None => {
            text.push('\n');
            text.push_str(&table);
        }
    }
    if let Some(path) = &args.svg {
        files::write_file(path, &fiber_svg(&patterns, &radius))?;
    }

    let body = json!({
        "xi": strings(&fiber.xi),
        "cut_type": fiber.cut_type.to_string(),
        "elements": fiber.elements.iter().zip(&patterns).map(|(e, p)| json!({
            "signs": e.point_type.signs.to_string(), "policy": e.policy.label(), "points": p.len(),
        })).collect::<Vec<_>>(),
        "n_r": nr.iter().map(|(r, n)| json!({"radius": r, "count": n})).collect::<Vec<_>>(),
        "coincidence_rank": {
            "upper_bound": cr.estimate,
            "clique": cr.clique,
            "samples": cr.samples,
            "single_patch_translates": cr.single_patch_translates,
            "witnesses": cr.witnesses.iter().map(|(i, j, t)| json!({"i": i, "j": j, "t": strings(t)})).collect::<Vec<_>>(),
        },
        "convention_check": oracle,
        "density_series": series.iter().map(|(r, c, d)| json!({"radius": r.to_string(), "count": c, "density": d})).collect::<Vec<_>>(),
    });
    Ok(Meta::new("fiber")
        .input("scheme", &input.sha256)
        .param("xi", join(&xi))
        .param("radius", &radius)
        .param("probe_radius", &probe)
        .param("samples", args.samples)
        .param("box", args.half_side)
        .param("seed", args.seed)
        .param("convention", format!("{convention:?}"))
        .report(text, body, 0))
}

/// Points within each radius that lie in some but not all patterns.
fn disagreement_series(patterns: &[PointPattern], radii: &[FieldScalar]) -> Vec<(FieldScalar, usize, f64)> {
    let dim = patterns.first().map_or(1, PointPattern::dim);
    let origin = vec![FieldScalar::zero(); dim];
    radii
        .iter()
        .map(|r| {
            let mut seen = std::collections::BTreeSet::new();
            for p in patterns {
                for i in p.indices_within(&origin, r) {
                    let v = &p.points()[i];
                    if !patterns.iter().all(|q| q.contains(v)) {
                        seen.insert(v.clone());
                    }
                }
            }
            let density = seen.len() as f64 / ball_volume(dim, r.to_f64());
            (r.clone(), seen.len(), density)
        })
        .collect()
}

/// Shared points in black, the rest colored by fiber element.
fn fiber_svg(patterns: &[PointPattern], radius: &FieldScalar) -> String {
    let mut d = svg::Drawing::new(radius.to_f64());
    if let Some(first) = patterns.first() {
        let shared = (0..first.len()).filter(|&i| patterns.iter().all(|q| q.contains(&first.points()[i])));
        d.layer("black", svg::coords(first, shared));
    }
    for (k, p) in patterns.iter().enumerate() {
        let own = (0..p.len()).filter(|&i| !patterns.iter().all(|q| q.contains(&p.points()[i])));
        d.layer(svg::PALETTE[k % svg::PALETTE.len()], svg::coords(p, own));
    }
    d.finish()
}

pub fn subst_classify(args: &ClassifyArgs) -> Result<Report, CliError> {
    let s: Substitution1D = args.rules.parse()?;
    let hash = sha256_hex(s.to_string().as_bytes());
    let r = classify(&s)?;
    let lengths = match args.lengths {
        LengthChoice::Natural => Lengths::Natural,
        LengthChoice::Unit => Lengths::Unit,
    };
    let pure = match r.pure_point {
        Some(b) => b.to_string(),
        None => "UNKNOWN".to_string(),
    };
    let mut text = format!("substitution {}\n", r.substitution);
    writeln!(text, "primitive={} aperiodic={}", r.primitive, r.aperiodic).unwrap();
    if let Some(q) = r.constant_length {
        writeln!(text, "constant_length={q}").unwrap();
    }
    writeln!(text, "charpoly {}", r.perron.charpoly).unwrap();
    writeln!(text, "minpoly {}", r.perron.minpoly).unwrap();
    writeln!(
        text,
        "perron={:.9} conjugates inside={} on={} outside={} pisot={}",
        r.perron.perron_approx,
        r.perron.unit_disk.inside,
        r.perron.unit_disk.on_circle,
        r.perron.unit_disk.outside,
        r.pisot()
    )
    .unwrap();
    if let Some(h) = r.height {
        writeln!(text, "height={h}").unwrap();
    }
    if let Some(c) = r.column_number {
        writeln!(text, "column_number={c}").unwrap();
    }
    writeln!(text, "{} meyer={} pure_point={pure}", r.coincidence_rank, r.meyer).unwrap();
    if let meyerion_core::substitution::CoincidenceRank::Unknown(why) = &r.coincidence_rank {
        writeln!(text, "  cr unknown: {why}").unwrap();
    }

    // A sample of the tiling by punctures; degree > 2 lengths are not exact.
    let tiles = match punctures_fixed_point(&s, args.prefix, lengths, &PunctureRule::Midpoint) {
        Ok(p) => {
            let pts = p.sorted_points();
            let gaps: std::collections::BTreeSet<String> =
                pts.windows(2).map(|w| (&w[1][0] - &w[0][0]).to_string()).collect();
            writeln!(text, "tiling sample: {} punctures, gaps {}", pts.len(), gaps.iter().cloned().collect::<Vec<_>>().join(" | ")).unwrap();
            json!({"punctures": pts.len(), "gaps": gaps.into_iter().collect::<Vec<_>>()})
        }
        Err(meyerion_core::Error::Unsupported(why)) => {
            writeln!(text, "tiling sample unavailable: {why}").unwrap();
            Value::Null
        }
        Err(e) => return Err(e.into()),
    };

    writeln!(text, "\nverdicts").unwrap();
    for v in &r.verdicts {
        writeln!(text, "  {}  [{}]", v.claim, v.basis).unwrap();
    }
    for c in &r.caveats {
        writeln!(text, "  caveat: {c}").unwrap();
    }
    let body = json!({
        "substitution": r.substitution,
        "primitive": r.primitive,
        "aperiodic": r.aperiodic,
        "constant_length": r.constant_length,
        "charpoly": r.perron.charpoly.to_string(),
        "minpoly": r.perron.minpoly.to_string(),
        "perron_approx": r.perron.perron_approx,
        "pisot": r.pisot(),
        "height": r.height,
        "column_number": r.column_number,
        "coincidence_rank": r.coincidence_rank.to_string(),
        "meyer": r.meyer,
        "pure_point": r.pure_point,
        "tiling_sample": tiles,
        "verdicts": r.verdicts.iter().map(|v| json!({"claim": v.claim, "basis": v.basis})).collect::<Vec<_>>(),
        "caveats": r.caveats,
    });
    Ok(Meta::new("subst classify")
        .input("rules", &hash)
        .param("rules", &s)
        .param("lengths", format!("{lengths:?}").to_lowercase())
        .param("prefix", args.prefix)
        .report(text, body, 0))
}

pub fn metric(args: &MetricArgs) -> Result<Report, CliError> {
    let radius = scalar(&positive("radius", &args.radius)?);
    let step = positive("grid-step", &args.grid_step)?;
    let max_eps = positive("max-epsilon", &args.max_epsilon)?;
    let (a, ia) = load_points(&args.a, &radius)?;
    let (b, ib) = load_points(&args.b, &radius)?;
    let m = hull_metric_upper(&a, &b, &step, &max_eps)?;
    let rationals = |v: &[BigRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let mut text = format!("d(a, b) <= {} (~{:.9})\n", m.bound, m.bound_f64());
    match &m.epsilon {
        Some(eps) => writeln!(
            text,
            "at eps = {eps}, t = ({}), t' = ({})",
            rationals(&m.t).join(","),
            rationals(&m.t_prime).join(",")
        )
        .unwrap(),
        None => writeln!(text, "no matching patches up to eps = {max_eps}; trivial bound").unwrap(),
    }
    writeln!(text, "{} pairs tested, {} grid radii skipped as beyond the data", m.tested_pairs, m.skipped).unwrap();
    let body = json!({
        "bound": m.bound.to_string(),
        "bound_approx": m.bound_f64(),
        "epsilon": m.epsilon.as_ref().map(ToString::to_string),
        "t": rationals(&m.t),
        "t_prime": rationals(&m.t_prime),
        "tested_pairs": m.tested_pairs,
        "skipped": m.skipped,
    });
    Ok(Meta::new("metric")
        .input("a", &ia.sha256)
        .input("b", &ib.sha256)
        .param("radius", &radius)
        .param("grid_step", &step)
        .param("max_epsilon", &max_eps)
        .report(text, body, 0))
}

pub fn proximality(args: &ProximalityArgs) -> Result<Report, CliError> {
    let radius_q = positive("radius", &args.radius)?;
    let radius = scalar(&radius_q);
    let patch = scalar(&positive("patch-radius", &args.patch_radius)?);
    let half_side = rational("box", &args.half_side)?;
    let (a, ia) = load_points(&args.a, &radius)?;
    let (b, ib) = load_points(&args.b, &radius)?;
    let radii = if args.radii.is_empty() {
        vec![&radius * &FieldScalar::ratio(1, 4), &radius * &FieldScalar::ratio(1, 2), radius.clone()]
    } else {
        args.radii
            .iter()
            .map(|r| positive("radii", r).map(|q| scalar(&q)))
            .collect::<Result<Vec<_>, _>>()?
    };
    let search = strong_proximal_witness(&a, &b, &patch, &half_side, args.seed)?;
    let density = statistical_coincidence(&a, &b, &radii)?;
    let mut text = match &search.witness {
        Some(t) => format!(
            "strongly proximal witness t = {} after {} candidates\n",
            join(t),
            search.candidates_checked
        ),
        None => format!("no witness among {} candidates\n", search.candidates_checked),
    };
    writeln!(text, "\nradius,count,density").unwrap();
    for ((r, c), d) in density.radii.iter().zip(&density.counts).zip(&density.densities) {
        writeln!(text, "{r},{c},{d:.9}").unwrap();
    }
    writeln!(text, "monotone decreasing {}", density.is_monotone_decreasing()).unwrap();
    let body = json!({
        "witness": search.witness.as_deref().map(strings),
        "candidates_checked": search.candidates_checked,
        "density_series": density.radii.iter().zip(&density.counts).zip(&density.densities)
            .map(|((r, c), d)| json!({"radius": r.to_string(), "count": c, "density": d})).collect::<Vec<_>>(),
        "monotone_decreasing": density.is_monotone_decreasing(),
    });
    let seed = args.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    Ok(Meta::new("proximality")
        .input("a", &ia.sha256)
        .input("b", &ib.sha256)
        .param("radius", &radius)
        .param("patch_radius", &patch)
        .param("box", &half_side)
        .param("radii", join(&radii))
        .param("seed", seed)
        .report(text, body, 0))
}
