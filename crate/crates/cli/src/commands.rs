use daggerhom::algebra::{dagger_gauge, in_linear_growth, AlgebraElement, Gauge};
use daggerhom::barcomplex::{
    augmentation, bar_differential, growth_certificate, homotopy_commutator, prism_homotopy, pushforward, random_chain,
    summand_count, BarChain, PRISM_SIGN,
};
use daggerhom::combing::{combing_profile, default_combing};
use daggerhom::forms::{commutator_quotient_dim, x_complex_homology, FiniteAlgebra};
use daggerhom::sample;
use daggerhom::torus::{hh_total, HhMethod, HhReport, TorusParams};
use daggerhom::tower::{iwasawa_tower, TowerSpec};
use daggerhom::{GroupDescriptor, GroupElement, Prime, Result, Scalar};
use serde_json::{json, Value};

use crate::report::{Report, Status};

pub struct BarArgs {
    pub group: String,
    pub max_degree: usize,
    pub ball: usize,
    pub samples: usize,
    pub seed: u64,
    pub p: u64,
    pub cap: usize,
    pub corrupt_prism_sign: bool,
}

fn tally(report: &mut Report, name: &str, total: usize, failures: &[String]) {
    match failures.first() {
        None => report.check(name, Status::Pass, format!("{total} cases")),
        Some(first) => report.check(name, Status::Fail, format!("{} of {total} failed; first: {first}", failures.len())),
    };
}

/// Scales each term by `p^{Σl+1}` so that the chain has positive gauge.
fn weighted(g: &GroupDescriptor, ch: &BarChain, p: u64) -> Result<BarChain> {
    let terms = ch.terms().iter().map(|(t, c)| {
        let len: usize = t.iter().map(|x| g.length(x)).sum();
        (t.clone(), c * &Scalar::from_int(p as i64).pow(len as i64 + 1))
    });
    BarChain::from_terms(g, ch.degree(), ch.reduced(), terms)
}

pub fn verify_bar(a: &BarArgs) -> Result<Report> {
    let g = GroupDescriptor::parse(&a.group)?;
    let p = Prime::new(a.p)?;
    let ball = g.ball(a.ball, a.cap)?;
    let mut rng = sample::rng(a.seed);
    let mut report = Report::new("verify bar", a.seed);
    report
        .param("group", g.spec())
        .param("max_degree", a.max_degree)
        .param("ball", a.ball)
        .param("samples", a.samples)
        .param("p", a.p);
    if a.corrupt_prism_sign {
        report.param("corrupt_prism_sign", true);
    }
    let reducible = ball.len() > 1;

    let (mut total, mut failures) = (0, Vec::new());
    for degree in 1..=a.max_degree.max(1) {
        for i in 0..a.samples {
            let ch = random_chain(&g, &ball, degree, 3, i % 2 == 0 && reducible, &mut rng);
            let d = bar_differential(&ch)?;
            let ok = if degree == 1 { augmentation(&d)?.is_zero() } else { bar_differential(&d)?.is_zero() };
            if !ok {
                failures.push(format!("degree {degree}"));
            }
            total += 1;
        }
    }
    tally(&mut report, "differential", total, &failures);

    let sign = Scalar::from_int(if a.corrupt_prism_sign { -PRISM_SIGN } else { PRISM_SIGN });
    let s = sample::choose(&mut rng, &ball).clone();
    let gg = g.clone();
    let shift = move |x: &GroupElement| gg.mul(x, &s);
    let id = |x: &GroupElement| x.clone();
    let (mut total, mut failures) = (0, Vec::new());
    for degree in 0..=a.max_degree {
        for _ in 0..a.samples {
            let ch = random_chain(&g, &ball, degree, 3, false, &mut rng);
            let mut lhs = bar_differential(&prism_homotopy(&shift, &id, &ch))?;
            if degree > 0 {
                lhs = lhs.add(&prism_homotopy(&shift, &id, &bar_differential(&ch)?))?;
            }
            let rhs = pushforward(&id, &ch).sub(&pushforward(&shift, &ch))?.scale(&sign);
            if lhs != rhs {
                failures.push(format!("degree {degree}"));
            }
            total += 1;
        }
    }
    tally(&mut report, "prism_identity", total, &failures);

    let combing = match default_combing(&g) {
        Ok(c) => c,
        Err(e) => {
            for name in ["contraction", "growth_certificate", "summand_count"] {
                report.check(name, Status::Skip, e.to_string());
            }
            return Ok(report);
        }
    };
    let e = g.identity();
    let (mut total, mut failures, mut summand_failures) = (0, Vec::new(), Vec::new());
    for degree in 0..=a.max_degree {
        for _ in 0..a.samples {
            let ch = if degree == 0 {
                let x = sample::choose(&mut rng, &ball).clone();
                if x == e {
                    continue;
                }
                BarChain::from_terms(&g, 0, true, [(vec![x], Scalar::one()), (vec![e.clone()], Scalar::from_int(-1))])?
            } else {
                random_chain(&g, &ball, degree, 3, true, &mut rng)
            };
            if ch.is_zero() {
                continue;
            }
            if homotopy_commutator(combing.as_ref(), &ch)? != ch {
                failures.push(format!("degree {degree}"));
            }
            for t in ch.terms().keys() {
                let (count, bound) = summand_count(combing.as_ref(), t)?;
                if count > bound {
                    summand_failures.push(format!("{count} > {bound} in degree {degree}"));
                }
            }
            total += 1;
        }
    }
    tally(&mut report, "contraction", total, &failures);
    tally(&mut report, "summand_count", total, &summand_failures);

    let (mut total, mut failures) = (0, Vec::new());
    for degree in 0..=a.max_degree {
        for _ in 0..a.samples.min(20) {
            let ch = weighted(&g, &random_chain(&g, &ball, degree, 2, reducible, &mut rng), a.p)?;
            let Gauge::Finite(gauge) = ch.gauge(p) else { continue };
            let cert = growth_certificate(combing.as_ref(), &ch, &gauge, p, a.cap)?;
            if !cert.verified {
                let mut why = cert.declared_problems.join("; ");
                if !cert.coefficients_ok {
                    why = format!("observed {} < {}; {why}", cert.observed_gauge, cert.gauge_out);
                }
                failures.push(format!("degree {degree}: {why}"));
            }
            total += 1;
        }
    }
    tally(&mut report, "growth_certificate", total, &failures);

    let profile = combing_profile(combing.as_ref(), a.ball, a.cap)?;
    report.results = json!({
        "combing": profile.combing,
        "ball_size": ball.len(),
        "profile": {
            "radius": profile.radius,
            "quasi_lipschitz": profile.quasi_lipschitz.to_string(),
            "step": profile.step,
            "length_distortion": profile.length_distortion.to_string(),
            "growth_order": format!("{:.3}", profile.growth_order),
            "max_stabilization": profile.max_stabilization(),
        },
    });
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Graded,
    Windowed,
    Both,
}

fn hh_json(r: &HhReport) -> Value {
    json!({
        "dims": r.dims,
        "history": r.history.iter().map(|(w, d)| json!({"window": w, "dims": d})).collect::<Vec<_>>(),
        "stabilized": r.stabilized,
        "generators": r.generators.iter().map(|g| json!({
            "degree": g.degree,
            "charge": [g.charge.0, g.charge.1],
            "representative": g.representative,
        })).collect::<Vec<_>>(),
        "generators_truncated": r.generators_truncated,
    })
}

pub fn torus_hh(p: u64, lambda: &str, window: usize, method: MethodArg) -> Result<Report> {
    let lambda: Scalar = lambda.parse()?;
    let params = TorusParams::new(Prime::new(p)?, lambda.clone())?;
    let mut report = Report::new("torus hh", 0);
    let method_name = format!("{method:?}").to_lowercase();
    report.param("p", p).param("lambda", lambda.to_string()).param("window", window).param("method", method_name);

    if params.is_unit() {
        report.check("lambda_unit", Status::Pass, format!("ν(λ) = {}", params.valuation()));
    } else {
        report.check("lambda_unit", Status::Warn, format!("λ is not a unit at p = {p}: ν(λ) = {}", params.valuation()));
    }
    let degenerate = params.is_root_of_unity();
    if degenerate {
        report.check("lambda_generic", Status::Warn, "λ is a root of unity; totals grow with the window");
    } else {
        report.check("lambda_generic", Status::Pass, "λ is not a root of unity");
    }

    let methods: Vec<HhMethod> = match method {
        MethodArg::Graded => vec![HhMethod::Graded],
        MethodArg::Windowed => vec![HhMethod::Windowed],
        MethodArg::Both => vec![HhMethod::Graded, HhMethod::Windowed],
    };
    let mut results = serde_json::Map::new();
    let mut all = Vec::new();
    for m in methods {
        let r = hh_total(&params, window, m)?;
        let name = format!("{m:?}").to_lowercase();
        let status = match (r.stabilized, degenerate) {
            (true, _) => Status::Pass,
            (false, true) => Status::Warn,
            (false, false) => Status::Fail,
        };
        let totals: Vec<String> = r.history.iter().map(|(w, d)| format!("W={w}: {d:?}")).collect();
        report.check(format!("stabilized_{name}"), status, totals.join(", "));
        results.insert(name, hh_json(&r));
        all.push(r);
    }
    if all.len() == 2 {
        let agree = all[0].history == all[1].history;
        report.check("methods_agree", Status::from_bool(agree), format!("graded {:?} vs windowed {:?}", all[0].dims, all[1].dims));
    }
    results.insert("dims".into(), json!(all[0].dims));
    report.results = Value::Object(results);
    Ok(report)
}

fn finite_algebra(spec: &str) -> Result<(FiniteAlgebra, Option<usize>)> {
    match spec {
        "m2" => Ok((FiniteAlgebra::matrix2(), None)),
        "field" => Ok((FiniteAlgebra::field(), None)),
        _ => {
            let g = GroupDescriptor::parse(spec)?;
            let finite = g
                .as_finite()
                .ok_or_else(|| daggerhom::Error::GroupSpec(format!("{spec} is not a finite group")))?;
            Ok((FiniteAlgebra::group_algebra(spec, finite)?, Some(finite.conjugacy_class_count())))
        }
    }
}

pub fn finite_x(group: &str, level: usize, cap: usize) -> Result<Report> {
    let (alg, classes) = finite_algebra(group)?;
    let mut report = Report::new("finite x", 0);
    report.param("group", group).param("level", level);
    let (h_even, h_odd) = x_complex_homology(&alg, level, cap)?;
    let quotient = commutator_quotient_dim(&alg, 0);
    if let Some(classes) = classes {
        report.check(
            "quotient_matches_classes",
            Status::from_bool(quotient == classes),
            format!("dim F[G]/[,] = {quotient}, {classes} conjugacy classes"),
        );
        report.check(
            "x_homology_is_quotient",
            Status::from_bool((h_even, h_odd) == (classes, 0)),
            format!("h = ({h_even}, {h_odd})"),
        );
    }
    report.results = json!({
        "h_even": h_even,
        "h_odd": h_odd,
        "quotient_dim": quotient,
        "conjugacy_classes": classes,
        "algebra_dim": alg.dim(),
        "omega_dims": (0..=level).map(|k| alg.omega_dim(k)).collect::<Vec<_>>(),
    });
    Ok(report)
}

pub fn iwasawa(path: &str, levels: usize, n: usize, cap: usize) -> Result<Report> {
    let spec = TowerSpec::from_file(path)?;
    let levels = levels.min(spec.levels.len());
    let reports = iwasawa_tower(&spec, levels, n, cap)?;
    let mut report = Report::new("iwasawa", 0);
    report.param("tower", path).param("levels", levels).param("n", n);
    for l in &reports[1..] {
        let ok = l.map_is_homomorphism == Some(true) && l.map_is_surjective == Some(true) && l.quotient_map_surjective == Some(true);
        let details = match (l.map_is_homomorphism, l.quotient_map_rank) {
            (Some(false), _) => "not a homomorphism".to_string(),
            (_, Some(rank)) => format!("surjective on groups: {}; quotient map rank {rank}", l.map_is_surjective == Some(true)),
            _ => String::new(),
        };
        report.check(format!("transition_{:02}", l.level), Status::from_bool(ok), details);
    }
    report.results = json!({
        "dims": reports.iter().map(|l| l.quotient_dim).collect::<Vec<_>>(),
        "levels": serde_json::to_value(&reports)?,
    });
    Ok(report)
}

pub fn gauge(path: &str, p: u64) -> Result<Report> {
    let prime = Prime::new(p)?;
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let f = AlgebraElement::from_json(&v, prime)?;
    let g = dagger_gauge(&f, prime);
    let mut report = Report::new("gauge", 0);
    report.param("input", path).param("p", p);
    let in_m1 = in_linear_growth(&f, 1, prime);
    report.check("gauge_computed", Status::Pass, format!("c = {g}"));
    report.results = json!({
        "group": f.group().spec(),
        "support": f.support_len(),
        "gauge": g.to_string(),
        "in_linear_growth_1": in_m1,
    });
    Ok(report)
}
