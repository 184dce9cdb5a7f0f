//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use daggerhom::algebra::{convolve, crossed_multiply, crossed_to_torus, symmetry_u, AlgebraElement, Cocycle, CrossedProductElement, Gauge};
use daggerhom::barcomplex::{
    augmentation, bar_differential, growth_certificate, homotopy_commutator, is_degenerate, random_chain, summand_count, BarChain,
};
use daggerhom::combing::{Combing, FnCombing, PrefixCombing};
use daggerhom::forms::{
    commutator_quotient_dim, connection_check, forms_b, forms_big_b, solve_connection, x_complex_homology, Connection,
    ConnectionConstraints, FiniteAlgebra, Form, AXIOM_EXTENSION, AXIOM_HOMOTOPY, AXIOM_LEIBNIZ, AXIOM_LINEAR, DEFAULT_FORM_CAP,
};
use daggerhom::group::{FiniteGroup, DEFAULT_BALL_CAP};
use daggerhom::par;
use daggerhom::sample::{self, SampleRng};
use daggerhom::torus::{
    hh_bidegree, hh_total, hochschild_d0, hochschild_d1, koszul_b0, koszul_b1, koszul_b2, HhMethod, TorusElement, TorusParams,
    TorusTensor,
};
use daggerhom::tower::{iwasawa_tower, TowerSpec};
use daggerhom::{GroupDescriptor, GroupElement, Prime, Scalar};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn lambda() -> Scalar {
    Scalar::new(6, 5)
}

fn torus_hh() -> Outcome {
    let mut runs = 0;
    for p in [5, 7] {
        let params = TorusParams::new(prime(p), lambda()).map_err(err)?;
        for window in 4..=8 {
            let graded = hh_total(&params, window, HhMethod::Graded).map_err(err)?;
            let windowed = hh_total(&params, window, HhMethod::Windowed).map_err(err)?;
            for r in [&graded, &windowed] {
                ensure(r.dims == [1, 2, 1, 0], || format!("p={p} W={window} {:?}: dims {:?}", r.method, r.dims))?;
                ensure(r.stabilized, || format!("p={p} W={window} {:?}: not stabilized", r.method))?;
            }
            ensure(graded.dims == windowed.dims, || format!("p={p} W={window}: methods disagree"))?;
            runs += 2;
        }
    }
    Ok(format!("(1,2,1,0) in {runs} runs, p = 5 and 7, windows 4-8"))
}

fn random_torus_element(rng: &mut SampleRng, l: &Scalar) -> TorusElement {
    let terms: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| ((rng.gen_range(-3..=3), rng.gen_range(-3..=3)), sample::nonzero_scalar(rng, 9)))
        .collect();
    TorusElement::new(l, terms)
}

fn random_tensor(rng: &mut SampleRng, l: &Scalar) -> TorusTensor {
    let mono = |rng: &mut SampleRng| (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let terms: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| ((mono(rng), mono(rng)), sample::nonzero_scalar(rng, 9))).collect();
    TorusTensor::new(l, terms)
}

fn complex_identities() -> Outcome {
    let mut rng = sample::rng(2);
    let l = lambda();
    for i in 0..100 {
        let t = random_tensor(&mut rng, &l);
        ensure(koszul_b1(&koszul_b2(&t)).map_err(err)?.is_zero(), || format!("b1 b2 != 0 at instance {i}"))?;
        let pair = (random_tensor(&mut rng, &l), random_tensor(&mut rng, &l));
        ensure(koszul_b0(&koszul_b1(&pair).map_err(err)?).is_zero(), || format!("b0 b1 != 0 at instance {i}"))?;
        let (x, y) = hochschild_d1(&random_torus_element(&mut rng, &l));
        ensure(hochschild_d0(&x, &y).map_err(err)?.is_zero(), || format!("d0 d1 != 0 at instance {i}"))?;
    }
    let mut checked = 0;
    for spec in ["free:2", "zn:2", "sym:3"] {
        let g = GroupDescriptor::parse(spec).map_err(err)?;
        let ball = g.ball(3, DEFAULT_BALL_CAP).map_err(err)?;
        for degree in 1..=4 {
            for i in 0..100 {
                let reduced = i % 2 == 0 && ball.len() > 1;
                let ch = random_chain(&g, &ball, degree, 1 + i % 5, reduced, &mut rng);
                let d = bar_differential(&ch).map_err(err)?;
                if degree == 1 {
                    ensure(augmentation(&d).map_err(err)?.is_zero(), || format!("{spec}: α δ != 0"))?;
                } else {
                    ensure(bar_differential(&d).map_err(err)?.is_zero(), || format!("{spec}: δδ != 0 in degree {degree}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("300 torus instances, {checked} bar chains"))
}

/// Basis tuples of the reduced complex, one per non-degenerate tuple.
fn tuples(ball: &[GroupElement], len: usize) -> Vec<Vec<GroupElement>> {
    let mut out: Vec<Vec<GroupElement>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| ball.iter().map(move |x| [t.clone(), vec![x.clone()]].concat()))
            .filter(|t| !is_degenerate(t))
            .collect();
    }
    out
}

fn check_contraction(c: &dyn Combing, ch: &BarChain) -> Result<(), String> {
    let image = homotopy_commutator(c, ch).map_err(err)?;
    ensure(&image == ch, || format!("δH + Hδ differs from the identity on {:?}", ch.terms().keys().next()))
}

fn contraction() -> Outcome {
    let g = GroupDescriptor::free(2);
    let c = PrefixCombing::new(g.clone()).map_err(err)?;
    let ball5 = g.ball(5, DEFAULT_BALL_CAP).map_err(err)?;
    let e = g.identity();

    let zero_chains: Vec<BarChain> = ball5
        .iter()
        .filter(|x| **x != e)
        .map(|x| BarChain::from_terms(&g, 0, true, [(vec![x.clone()], 1.into()), (vec![e.clone()], (-1).into())]).unwrap())
        .collect();
    let mut basis: Vec<Vec<GroupElement>> = Vec::new();
    basis.extend(tuples(&ball5, 2));
    basis.extend(tuples(&g.ball(3, DEFAULT_BALL_CAP).map_err(err)?, 3));
    basis.extend(tuples(&g.ball(2, DEFAULT_BALL_CAP).map_err(err)?, 4));

    par::try_map(&zero_chains, |ch| check_contraction(&c, ch))?;
    par::try_map(&basis, |t| {
        let ch = BarChain::basis(&g, t.clone(), true).map_err(err)?;
        check_contraction(&c, &ch)?;
        let (count, bound) = summand_count(&c, t).map_err(err)?;
        ensure(count <= bound, || format!("{count} summands exceed ΣJ = {bound}"))
    })?;

    let mut rng = sample::rng(3);
    let mut sampled = 0;
    for degree in [2, 3] {
        for _ in 0..100 {
            let ch = random_chain(&g, &ball5, degree, 3, true, &mut rng);
            check_contraction(&c, &ch)?;
            for t in ch.terms().keys() {
                let (count, bound) = summand_count(&c, t).map_err(err)?;
                ensure(count <= bound, || format!("{count} summands exceed ΣJ = {bound}"))?;
            }
            sampled += 1;
        }
    }
    Ok(format!(
        "{} degree-0 generators, {} basis tuples exhaustively, {sampled} sampled chains from ball(5)",
        zero_chains.len(),
        basis.len()
    ))
}

/// Scales each term by `p^{Σl+1}` so the chain has positive gauge.
fn weighted(g: &GroupDescriptor, ch: &BarChain, p: u64) -> BarChain {
    let terms = ch.terms().iter().map(|(t, c)| {
        let len: usize = t.iter().map(|x| g.length(x)).sum();
        (t.clone(), c * &Scalar::from_int(p as i64).pow(len as i64 + 1))
    });
    BarChain::from_terms(g, ch.degree(), true, terms).unwrap()
}

fn growth() -> Outcome {
    let g = GroupDescriptor::free(2);
    let c = PrefixCombing::new(g.clone()).map_err(err)?;
    let p = prime(5);
    let ball = g.ball(4, DEFAULT_BALL_CAP).map_err(err)?;
    let mut rng = sample::rng(4);
    let mut count = 0;
    for degree in 0..=3 {
        for _ in 0..25 {
            let ch = weighted(&g, &random_chain(&g, &ball, degree, 3, true, &mut rng), 5);
            let Gauge::Finite(gauge) = ch.gauge(p) else { continue };
            let cert = growth_certificate(&c, &ch, &gauge, p, DEFAULT_BALL_CAP).map_err(err)?;
            ensure(cert.verified, || format!("certificate failed: {cert:?}"))?;
            count += 1;
        }
    }

    // Jumps far away at stage 1 while declaring the prefix constants.
    let far = GroupElement::Word(vec![2; 8]);
    let gg = g.clone();
    let fake = FnCombing::new(
        g.clone(),
        "jump",
        move |k, x| match (k, x) {
            (0, _) => gg.identity(),
            (1, GroupElement::Word(v)) if v.len() > 1 => far.clone(),
            (k, GroupElement::Word(v)) => GroupElement::Word(v[..k.min(v.len())].to_vec()),
            _ => unreachable!(),
        },
        c.declared(),
    );
    let ch = weighted(&g, &BarChain::basis(&g, vec![g.parse_word("abA").unwrap()], true).map_err(err)?, 5);
    let Gauge::Finite(gauge) = ch.gauge(p) else { return Err("fixture gauge".into()) };
    let cert = growth_certificate(&fake, &ch, &gauge, p, DEFAULT_BALL_CAP).map_err(err)?;
    ensure(!cert.verified, || "adversarial combing passed the certificate".into())?;
    Ok(format!("{count} certified chains, adversarial fixture rejected"))
}

fn symmetry() -> Outcome {
    let f2 = GroupDescriptor::free(2);
    let gg = GroupDescriptor::product(f2.clone(), f2.clone());
    let ball = f2.ball(3, DEFAULT_BALL_CAP).map_err(err)?;
    let mut rng = sample::rng(5);
    for _ in 0..100 {
        let terms: Vec<_> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let x = sample::choose(&mut rng, &ball).clone();
                let y = sample::choose(&mut rng, &ball).clone();
                (GroupElement::pair(x, y), sample::nonzero_scalar(&mut rng, 9))
            })
            .collect();
        let phi = AlgebraElement::from_terms(&gg, None, terms).map_err(err)?;
        let back = symmetry_u(&symmetry_u(&phi, false).map_err(err)?, true).map_err(err)?;
        ensure(back == phi, || "U⁻¹ U φ != φ".into())?;
    }
    let mut pairs = 0;
    for x in &ball {
        for y in &ball {
            let delta = AlgebraElement::delta(&gg, None, GroupElement::pair(x.clone(), y.clone())).map_err(err)?;
            let bound = 3 * (f2.length(x) + f2.length(y));
            for inverse in [false, true] {
                let image = symmetry_u(&delta, inverse).map_err(err)?;
                let (z, _) = image.terms().iter().next().unwrap();
                ensure(gg.length(z) <= bound, || format!("length bound fails at ({}, {})", f2.format(x), f2.format(y)))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("100 round trips, {pairs} pairs on ball(3)²"))
}

fn crossed_product() -> Outcome {
    let cocycle = Cocycle::new(lambda(), prime(7)).map_err(err)?;
    let mut rng = sample::rng(6);
    let random = |rng: &mut SampleRng| {
        let terms: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| ((rng.gen_range(-2..=2), rng.gen_range(-2..=2)), sample::nonzero_scalar(rng, 9)))
            .collect();
        CrossedProductElement::new(lambda(), terms)
    };
    for i in 0..200 {
        let (x, y) = (random(&mut rng), random(&mut rng));
        let lhs = crossed_to_torus(&crossed_multiply(&x, &y).map_err(err)?, &cocycle).map_err(err)?;
        let rhs = convolve(&crossed_to_torus(&x, &cocycle).map_err(err)?, &crossed_to_torus(&y, &cocycle).map_err(err)?)
            .map_err(err)?;
        ensure(lhs == rhs, || format!("not multiplicative at pair {i}"))?;
    }
    Ok("200 pairs".into())
}

/// Conjugacy classes by orbit enumeration straight from the table.
fn brute_force_classes(g: &FiniteGroup) -> usize {
    let table = g.table();
    let n = table.len();
    let inverse = |a: usize| (0..n).find(|&b| table[a][b] == g.identity()).unwrap();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if seen[x] {
            continue;
        }
        classes += 1;
        let orbit: BTreeSet<usize> = (0..n).map(|s| table[table[s][x]][inverse(s)]).collect();
        orbit.into_iter().for_each(|y| seen[y] = true);
    }
    classes
}

fn group_algebra(spec: &str) -> (FiniteGroup, FiniteAlgebra) {
    let g = GroupDescriptor::parse(spec).unwrap().as_finite().unwrap().clone();
    let alg = FiniteAlgebra::group_algebra(spec, &g).unwrap();
    (g, alg)
}

fn finite_x() -> Outcome {
    let (_, s3) = group_algebra("sym:3");
    let h = x_complex_homology(&s3, 1, DEFAULT_FORM_CAP).map_err(err)?;
    ensure(h == (3, 0), || format!("X(1)(F[S3]) = {h:?}"))?;
    for (spec, expected) in [("sym:3", 3), ("cyclic:4", 4)] {
        let (_, alg) = group_algebra(spec);
        let dim = commutator_quotient_dim(&alg, 0);
        ensure(dim == expected, || format!("{spec}: quotient dim {dim}"))?;
    }
    let m2 = commutator_quotient_dim(&FiniteAlgebra::matrix2(), 0);
    ensure(m2 == 1, || format!("M2: quotient dim {m2}"))?;
    for spec in ["cyclic:2", "cyclic:4", "cyclic:6", "sym:3", "sym:4"] {
        let (g, alg) = group_algebra(spec);
        let (dim, oracle) = (commutator_quotient_dim(&alg, 0), brute_force_classes(&g));
        ensure(dim == oracle, || format!("{spec}: quotient {dim} vs {oracle} classes"))?;
    }
    Ok("X(1)(F[S3]) = (3,0); quotients 3, 4, 1; oracle agrees on 5 groups".into())
}

fn tower() -> Outcome {
    let spec = TowerSpec::from_json(
        r#"{"levels": [
            {"group": "cyclic:2"},
            {"group": "cyclic:4", "generators": [1], "images": [1]},
            {"group": "cyclic:8", "generators": [1], "images": [1]}
        ]}"#,
    )
    .map_err(err)?;
    let report = iwasawa_tower(&spec, 3, 1, DEFAULT_FORM_CAP).map_err(err)?;
    let dims: Vec<usize> = report.iter().map(|l| l.quotient_dim).collect();
    ensure(dims == [2, 4, 8], || format!("dims {dims:?}"))?;
    for level in &report[1..] {
        ensure(
            level.map_is_homomorphism == Some(true)
                && level.map_is_surjective == Some(true)
                && level.quotient_map_surjective == Some(true),
            || format!("transition into level {} not a surjection", level.level),
        )?;
    }
    ensure(report.iter().all(|l| l.x_homology.1 == 0), || "odd X-homology".into())?;
    Ok("dims (2,4,8), both transitions surjective on quotients".into())
}

fn form_identities() -> Outcome {
    let mut total = 0;
    for spec in ["cyclic:2", "cyclic:4", "sym:3"] {
        let (_, alg) = group_algebra(spec);
        for k in 0..=3 {
            let basis = alg.form_basis(k);
            let failures = par::map(&basis, |key| {
                let w = Form::basis(key.clone());
                let big = forms_big_b(&alg, &w);
                let mut ok = forms_big_b(&alg, &big).is_zero();
                let mut anti = forms_b(&alg, &big).unwrap();
                if k >= 1 {
                    let bw = forms_b(&alg, &w).unwrap();
                    anti = anti.add(&forms_big_b(&alg, &bw));
                    if k >= 2 {
                        ok &= forms_b(&alg, &bw).unwrap().is_zero();
                    }
                }
                ok && anti.is_zero()
            });
            if let Some(i) = failures.iter().position(|ok| !ok) {
                return Err(format!("{spec}: identity fails on {}", alg.form_label(&basis[i])));
            }
            total += basis.len();
        }
    }
    Ok(format!("{total} basis forms"))
}

fn connections() -> Outcome {
    let (_, alg) = group_algebra("cyclic:2");
    let solved = solve_connection(&alg, 1, ConnectionConstraints::ALL).ok_or("no connection solves the system")?;
    let conn = Connection::new(&alg, 1, solved.clone()).map_err(err)?;
    let report = connection_check(&alg, &conn).map_err(err)?;
    ensure(report.all_passed(), || format!("solved connection fails {:?}", report.failed()))?;

    let zero = connection_check(&alg, &Connection::zero(&alg, 1)).map_err(err)?;
    ensure(zero.failed().contains(&AXIOM_HOMOTOPY), || "zero map passes [∇,b] = id".into())?;

    let mut bad_extension = conn.clone();
    bad_extension.extension.add_to(0, 0, &Scalar::one());
    let failed = connection_check(&alg, &bad_extension).map_err(err)?.failed();
    ensure(failed == [AXIOM_EXTENSION], || format!("extension fixture fails {failed:?}"))?;

    let no_base = ConnectionConstraints { homotopy_base: false, ..ConnectionConstraints::ALL };
    let nabla2 = solve_connection(&alg, 2, no_base).ok_or("degree-2 system has no solution")?;
    let failed = connection_check(&alg, &Connection::new(&alg, 2, nabla2).map_err(err)?).map_err(err)?.failed();
    ensure(failed == [AXIOM_HOMOTOPY], || format!("homotopy fixture fails {failed:?}"))?;

    // Any perturbation of ∇ that breaks linearity or Leibniz also breaks a
    // second axiom once the extension rule holds.
    let mut extra = Vec::new();
    for (axiom, row, col) in [(AXIOM_LINEAR, 1, 0), (AXIOM_LEIBNIZ, 0, 0)] {
        let mut nabla = solved.clone();
        nabla.add_to(row, col, &Scalar::one());
        let failed = connection_check(&alg, &Connection::new(&alg, 1, nabla).map_err(err)?).map_err(err)?.failed();
        ensure(failed.contains(&axiom), || format!("{axiom} fixture fails {failed:?}"))?;
        extra.push(format!("{axiom}: {failed:?}"));
    }
    Ok(format!("zero map fails {:?}; {}", zero.failed(), extra.join("; ")))
}

fn degenerate_lambda() -> Outcome {
    let minus_one = Scalar::from_int(-1);
    let h = hh_bidegree(&minus_one, 2, 2);
    ensure(h == (1, 2, 1), || format!("hh_bidegree(2,2) = {h:?}"))?;
    let params = TorusParams::new(prime(5), minus_one).map_err(err)?;
    let report = hh_total(&params, 6, HhMethod::Graded).map_err(err)?;
    ensure(!report.stabilized, || "λ = -1 reported as stabilized".into())?;
    ensure(report.degenerate_lambda, || "λ = -1 not flagged as degenerate".into())?;
    Ok(format!("bidegree (2,2) = (1,2,1); totals {:?}", report.history))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("torus Hochschild homology", torus_hh),
        ("complex identities", complex_identities),
        ("contracting homotopy", contraction),
        ("growth certificates", growth),
        ("symmetry operator", symmetry),
        ("crossed-product isomorphism", crossed_product),
        ("finite-group X-complex", finite_x),
        ("Iwasawa tower", tower),
        ("form identities", form_identities),
        ("connection verifier", connections),
        ("degenerate lambda", degenerate_lambda),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
