//! Combings and their measured profiles.
//!
//! A combing is a family of maps `f_k : G → G` with `f_0 = e` and
//! `f_k(g) = g` for `k ≫ 0`. The profile reports estimates of the
//! quasi-Lipschitz constant `C`, the step bound `S`, the stabilisation time
//! `J(g)` and the length distortion `D = max (l(f_j g) + 1) / (l(g) + 1)`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement, GroupKind, DEFAULT_BALL_CAP};
use crate::par;
use crate::scalar::Scalar;

/// Constants a combing claims about itself. These are cross-checked against
/// the measured profile, never trusted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeclaredConstants {
    pub quasi_lipschitz: Scalar,
    pub step: usize,
    pub growth_order: u32,
}

pub trait Combing: Send + Sync {
    fn group(&self) -> &GroupDescriptor;
    fn name(&self) -> String;
    /// `f_k(g)`.
    fn stage(&self, k: usize, g: &GroupElement) -> GroupElement;
    fn declared(&self) -> Option<DeclaredConstants> {
        None
    }
}

/// Stage count used when combing elements of length at most `radius`.
pub fn stage_budget(radius: usize) -> usize {
    4 * radius.max(1)
}

/// `f_k(g)` with validation.
pub fn combing_eval(c: &dyn Combing, k: usize, g: &GroupElement) -> Result<GroupElement> {
    c.group().check(g)?;
    Ok(c.stage(k, g))
}

/// Smallest `n ≤ budget` with `f_k(g) = g` for all `n ≤ k ≤ budget`.
pub fn stabilization(c: &dyn Combing, g: &GroupElement, budget: usize) -> Result<usize> {
    if c.stage(budget, g) != *g {
        return Err(Error::NotStabilized { element: c.group().format(g), stages: budget });
    }
    let mut n = budget;
    while n > 0 && c.stage(n - 1, g) == *g {
        n -= 1;
    }
    Ok(n)
}

/// Prefix combing of a free group: `f_k(w)` is the length-`k` prefix.
#[derive(Clone, Debug)]
pub struct PrefixCombing {
    group: GroupDescriptor,
}

impl PrefixCombing {
    pub fn new(group: GroupDescriptor) -> Result<Self> {
        match group.kind() {
            GroupKind::Free { .. } => Ok(PrefixCombing { group }),
            _ => Err(Error::GroupSpec(format!("prefix combing needs a free group, got {group}"))),
        }
    }
}

impl Combing for PrefixCombing {
    fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    fn name(&self) -> String {
        "prefix".into()
    }

    fn stage(&self, k: usize, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Word(w) => GroupElement::Word(w[..k.min(w.len())].to_vec()),
            _ => panic!("prefix combing applied to {g:?}"),
        }
    }

    fn declared(&self) -> Option<DeclaredConstants> {
        Some(DeclaredConstants { quasi_lipschitz: Scalar::one(), step: 1, growth_order: 1 })
    }
}

/// Combing of `Z^k` that walks coordinate by coordinate along a geodesic.
#[derive(Clone, Debug)]
pub struct LatticeCombing {
    group: GroupDescriptor,
}

impl LatticeCombing {
    pub fn new(group: GroupDescriptor) -> Result<Self> {
        match group.kind() {
            GroupKind::FreeAbelian { .. } => Ok(LatticeCombing { group }),
            _ => Err(Error::GroupSpec(format!("lattice combing needs Z^k, got {group}"))),
        }
    }
}

impl Combing for LatticeCombing {
    fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    fn name(&self) -> String {
        "lattice".into()
    }

    fn stage(&self, k: usize, g: &GroupElement) -> GroupElement {
        let GroupElement::Vector(v) = g else { panic!("lattice combing applied to {g:?}") };
        let mut left = k as i64;
        let out = v
            .iter()
            .map(|&x| {
                let step = x.abs().min(left);
                left -= step;
                step * x.signum()
            })
            .collect();
        GroupElement::Vector(out)
    }

    fn declared(&self) -> Option<DeclaredConstants> {
        Some(DeclaredConstants { quasi_lipschitz: Scalar::from_int(2), step: 1, growth_order: 1 })
    }
}

/// One-step combing of a finite group: `f_0 = e`, `f_k = id` for `k ≥ 1`.
#[derive(Clone, Debug)]
pub struct OneStepCombing {
    group: GroupDescriptor,
    diameter: usize,
}

impl OneStepCombing {
    pub fn new(group: GroupDescriptor) -> Result<Self> {
        match group.kind() {
            GroupKind::Finite(g) => {
                let diameter = (0..g.order()).map(|a| g.length(a)).max().unwrap_or(0);
                Ok(OneStepCombing { group, diameter })
            }
            _ => Err(Error::GroupSpec(format!("one-step combing needs a finite group, got {group}"))),
        }
    }
}

impl Combing for OneStepCombing {
    fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    fn name(&self) -> String {
        "one-step".into()
    }

    fn stage(&self, k: usize, g: &GroupElement) -> GroupElement {
        if k == 0 {
            self.group.identity()
        } else {
            g.clone()
        }
    }

    /// Each stage is constant or the identity; the single step has length at
    /// most the diameter, and `J ≤ 1`.
    fn declared(&self) -> Option<DeclaredConstants> {
        Some(DeclaredConstants { quasi_lipschitz: Scalar::one(), step: self.diameter.max(1), growth_order: 0 })
    }
}

type StageFn = dyn Fn(usize, &GroupElement) -> GroupElement + Send + Sync;

/// A combing given by an arbitrary closure, for experiments and fixtures.
#[derive(Clone)]
pub struct FnCombing {
    group: GroupDescriptor,
    name: String,
    f: Arc<StageFn>,
    declared: Option<DeclaredConstants>,
}

impl FnCombing {
    pub fn new(
        group: GroupDescriptor,
        name: impl Into<String>,
        f: impl Fn(usize, &GroupElement) -> GroupElement + Send + Sync + 'static,
        declared: Option<DeclaredConstants>,
    ) -> Self {
        FnCombing { group, name: name.into(), f: Arc::new(f), declared }
    }
}

impl Combing for FnCombing {
    fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn stage(&self, k: usize, g: &GroupElement) -> GroupElement {
        (self.f)(k, g)
    }

    fn declared(&self) -> Option<DeclaredConstants> {
        self.declared.clone()
    }
}

/// The default combing for a group, when one is built in.
pub fn default_combing(group: &GroupDescriptor) -> Result<Box<dyn Combing>> {
    Ok(match group.kind() {
        GroupKind::Free { .. } => Box::new(PrefixCombing::new(group.clone())?),
        GroupKind::FreeAbelian { .. } => Box::new(LatticeCombing::new(group.clone())?),
        GroupKind::Finite(_) => Box::new(OneStepCombing::new(group.clone())?),
        GroupKind::Product(..) => {
            return Err(Error::GroupSpec(format!("no built-in combing for {group}")));
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationEntry {
    pub element: String,
    pub length: usize,
    pub stabilization: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombingProfile {
    pub combing: String,
    pub radius: usize,
    pub stages: usize,
    pub quasi_lipschitz: Scalar,
    pub step: usize,
    pub length_distortion: Scalar,
    pub growth_order: f64,
    pub j_table: Vec<StabilizationEntry>,
    /// Set when the combing misbehaves on the ball; the estimates are then
    /// meaningless.
    pub failure: Option<String>,
}

impl CombingProfile {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn max_stabilization(&self) -> usize {
        self.j_table.iter().map(|e| e.stabilization).max().unwrap_or(0)
    }
}

/// Least-squares slope of `ln(J + 1)` against `ln(l + 1)` over `g ≠ e`.
fn growth_fit(points: &[(usize, usize)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(l, _)| *l > 0)
        .map(|&(l, j)| (((l + 1) as f64).ln(), ((j + 1) as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Measures a combing on the ball of the given radius.
pub fn combing_profile(c: &dyn Combing, radius: usize, cap: usize) -> Result<CombingProfile> {
    let group = c.group();
    let ball = group.ball(radius, cap)?;
    let budget = stage_budget(radius);
    let e = group.identity();
    let mut profile = CombingProfile {
        combing: c.name(),
        radius,
        stages: budget,
        quasi_lipschitz: Scalar::zero(),
        step: 0,
        length_distortion: Scalar::one(),
        growth_order: 0.0,
        j_table: Vec::new(),
        failure: None,
    };

    let images: Vec<Vec<GroupElement>> = par::map(&ball, |g| (0..=budget).map(|k| c.stage(k, g)).collect());
    for (g, imgs) in ball.iter().zip(&images) {
        if imgs[0] != e {
            profile.failure = Some(format!("f_0({}) = {} ≠ e", group.format(g), group.format(&imgs[0])));
            return Ok(profile);
        }
        if let Some(bad) = imgs.iter().find(|x| !group.contains(x)) {
            profile.failure = Some(format!("stage image {bad:?} is not a group element"));
            return Ok(profile);
        }
    }

    let mut entries = Vec::with_capacity(ball.len());
    for (g, imgs) in ball.iter().zip(&images) {
        if imgs[budget] != *g {
            profile.failure = Some(format!("{} does not stabilise within {budget} stages", group.format(g)));
            return Ok(profile);
        }
        let j = (0..=budget).rev().take_while(|&k| imgs[k] == *g).last().unwrap_or(budget);
        entries.push(StabilizationEntry { element: group.format(g), length: group.length(g), stabilization: j });
    }

    // S: consecutive stages; D: length distortion.
    let mut step = 0;
    let mut dist = Scalar::one();
    for (g, imgs) in ball.iter().zip(&images) {
        let lg = group.length(g) as i64;
        for k in 0..budget {
            step = step.max(group.distance(&imgs[k], &imgs[k + 1]));
        }
        for img in imgs {
            let ratio = Scalar::new(group.length(img) as i64 + 1, lg + 1);
            if ratio > dist {
                dist = ratio;
            }
        }
    }

    // C: sup over pairs and stages of d(f_k x, f_k y) / d(x, y).
    let ql = par::map_range(ball.len(), |i| {
        let mut best = Scalar::zero();
        for j in (i + 1)..ball.len() {
            let d = group.distance(&ball[i], &ball[j]) as i64;
            let worst = (0..=budget).map(|k| group.distance(&images[i][k], &images[j][k])).max().unwrap_or(0);
            let r = Scalar::new(worst as i64, d);
            if r > best {
                best = r;
            }
        }
        best
    });
    profile.quasi_lipschitz = ql.into_iter().max().unwrap_or_else(Scalar::zero);
    profile.step = step;
    profile.length_distortion = dist;
    profile.growth_order = growth_fit(&entries.iter().map(|e| (e.length, e.stabilization)).collect::<Vec<_>>());
    profile.j_table = entries;
    Ok(profile)
}

/// Compares declared constants with a measured profile; returns the list of
/// violated claims.
pub fn check_declared(c: &dyn Combing, profile: &CombingProfile) -> Vec<String> {
    let mut problems = Vec::new();
    if let Some(f) = &profile.failure {
        problems.push(f.clone());
    }
    let Some(decl) = c.declared() else { return problems };
    if profile.quasi_lipschitz > decl.quasi_lipschitz {
        problems.push(format!(
            "measured C = {} exceeds declared {}",
            profile.quasi_lipschitz, decl.quasi_lipschitz
        ));
    }
    if profile.step > decl.step {
        problems.push(format!("measured S = {} exceeds declared {}", profile.step, decl.step));
    }
    for e in &profile.j_table {
        let bound = decl.quasi_lipschitz.clone() * Scalar::from_big(num_rational::BigRational::from_integer(BigInt::from(e.length + 1).pow(decl.growth_order)));
        if Scalar::from_int(e.stabilization as i64) > bound {
            problems.push(format!(
                "J({}) = {} exceeds declared bound {} (l + 1)^{}",
                e.element, e.stabilization, decl.quasi_lipschitz, decl.growth_order
            ));
            break;
        }
    }
    problems
}

/// Profile at the default cap.
pub fn profile(c: &dyn Combing, radius: usize) -> Result<CombingProfile> {
    combing_profile(c, radius, DEFAULT_BALL_CAP)
}
