//! Bar complexes `C_n(G, V)` with basis tuples `(x_0, …, x_n)`, prism
//! homotopies, and the contracting homotopy induced by a combing.
//!
//! Reduced chains live in the quotient by degenerate tuples (some
//! `x_i = x_{i+1}`); every operation drops such tuples from its output.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Gauge;
use crate::combing::{check_declared, combing_profile, stabilization, stage_budget, Combing};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::accumulate;
use crate::par;
use crate::sample::{self, SampleRng};
use crate::scalar::{Prime, Scalar, Valuation};

/// Orientation of the prism identity `δH(f,g) + H(f,g)δ = PRISM_SIGN·(g★ − f★)`
/// for `H(f,g)(x) = Σ_j (−1)^j (f x_0, …, f x_j, g x_j, …, g x_n)`.
pub const PRISM_SIGN: i64 = 1;

pub type Tuple = Vec<GroupElement>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain {
    group: GroupDescriptor,
    degree: usize,
    reduced: bool,
    terms: BTreeMap<Tuple, Scalar>,
}

pub fn is_degenerate(t: &[GroupElement]) -> bool {
    t.windows(2).any(|w| w[0] == w[1])
}

impl BarChain {
    pub fn zero(group: &GroupDescriptor, degree: usize, reduced: bool) -> Self {
        BarChain { group: group.clone(), degree, reduced, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(group: &GroupDescriptor, degree: usize, reduced: bool, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Tuple, Scalar)>,
    {
        let mut out = Self::zero(group, degree, reduced);
        for (t, c) in terms {
            if t.len() != degree + 1 {
                return Err(Error::Degree(format!("tuple of length {} in degree {degree}", t.len())));
            }
            for x in &t {
                group.check(x)?;
            }
            out.push(t, &c);
        }
        Ok(out)
    }

    pub fn basis(group: &GroupDescriptor, tuple: Tuple, reduced: bool) -> Result<Self> {
        let degree = tuple.len().checked_sub(1).ok_or_else(|| Error::Degree("empty tuple".into()))?;
        Self::from_terms(group, degree, reduced, [(tuple, Scalar::one())])
    }

    fn push(&mut self, t: Tuple, c: &Scalar) {
        if self.reduced && is_degenerate(&t) {
            return;
        }
        accumulate(&mut self.terms, t, c);
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    pub fn terms(&self) -> &BTreeMap<Tuple, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &[GroupElement]) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.group, self.degree, self.reduced);
        for (t, x) in &self.terms {
            accumulate(&mut out.terms, t.clone(), &(x * c));
        }
        out
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.group != other.group || self.degree != other.degree || self.reduced != other.reduced {
            return Err(Error::OperandMismatch(format!(
                "chains over {} (deg {}, reduced {}) and {} (deg {}, reduced {})",
                self.group, self.degree, self.reduced, other.group, other.degree, other.reduced
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            accumulate(&mut out.terms, t.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Largest `c` with `ν(a_x) + 1 ≥ c·(Σ l(x_i) + 1)` on the support.
    pub fn gauge(&self, p: Prime) -> Gauge {
        let mut best = Gauge::Infinite;
        for (t, a) in &self.terms {
            let Valuation::Finite(v) = a.valuation(p) else { continue };
            let size: usize = t.iter().map(|x| self.group.length(x)).sum();
            let c = Gauge::Finite(Scalar::new(v + 1, size as i64 + 1));
            if c < best {
                best = c;
            }
        }
        best
    }

    /// Diagonal left action `g·(x_0, …, x_n) = (g x_0, …, g x_n)`.
    pub fn translate(&self, g: &GroupElement) -> Self {
        let mut out = Self::zero(&self.group, self.degree, self.reduced);
        for (t, c) in &self.terms {
            out.push(t.iter().map(|x| self.group.mul(g, x)).collect(), c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let tuple: Vec<Value> = t.iter().map(|x| self.group.element_to_json(x)).collect();
                json!({"tuple": tuple, "coeff": c.to_string()})
            })
            .collect();
        json!({"group": self.group.spec(), "degree": self.degree, "reduced": self.reduced, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let spec = v["group"].as_str().ok_or_else(|| Error::Parse("missing \"group\"".into()))?;
        let group = GroupDescriptor::parse(spec)?;
        let degree = v["degree"].as_u64().ok_or_else(|| Error::Parse("missing \"degree\"".into()))? as usize;
        let reduced = v["reduced"].as_bool().unwrap_or(false);
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| Error::Parse("missing \"terms\"".into()))? {
            let tuple = t["tuple"].as_array().ok_or_else(|| Error::Parse("missing \"tuple\"".into()))?;
            let tuple: Result<Tuple> = tuple.iter().map(|x| group.element_from_json(x)).collect();
            let c: Scalar = serde_json::from_value(t["coeff"].clone())?;
            terms.push((tuple?, c));
        }
        Self::from_terms(&group, degree, reduced, terms)
    }
}

/// `δ(x_0, …, x_n) = Σ_j (−1)^j (x_0, …, x̂_j, …, x_n)`.
pub fn bar_differential(ch: &BarChain) -> Result<BarChain> {
    if ch.degree == 0 {
        return Err(Error::Degree("bar differential on a degree-0 chain".into()));
    }
    let mut out = BarChain::zero(&ch.group, ch.degree - 1, ch.reduced);
    for (t, c) in &ch.terms {
        for j in 0..t.len() {
            let mut face = t.clone();
            face.remove(j);
            let coeff = if j % 2 == 0 { c.clone() } else { -c };
            out.push(face, &coeff);
        }
    }
    Ok(out)
}

/// `α(f) = Σ_x f(x)` on degree 0.
pub fn augmentation(ch: &BarChain) -> Result<Scalar> {
    if ch.degree != 0 {
        return Err(Error::Degree(format!("augmentation on a degree-{} chain", ch.degree)));
    }
    Ok(ch.terms.values().cloned().sum())
}

/// Pushforward `f★(x_0, …, x_n) = (f x_0, …, f x_n)`.
pub fn pushforward(f: &dyn Fn(&GroupElement) -> GroupElement, ch: &BarChain) -> BarChain {
    let mut out = BarChain::zero(&ch.group, ch.degree, ch.reduced);
    for (t, c) in &ch.terms {
        out.push(t.iter().map(f).collect(), c);
    }
    out
}

/// `H(f,g)(x) = Σ_j (−1)^j (f x_0, …, f x_j, g x_j, …, g x_n)`.
pub fn prism_homotopy(
    f: &dyn Fn(&GroupElement) -> GroupElement,
    g: &dyn Fn(&GroupElement) -> GroupElement,
    ch: &BarChain,
) -> BarChain {
    let mut out = BarChain::zero(&ch.group, ch.degree + 1, ch.reduced);
    for (t, c) in &ch.terms {
        let fs: Vec<GroupElement> = t.iter().map(f).collect();
        let gs: Vec<GroupElement> = t.iter().map(g).collect();
        for j in 0..t.len() {
            let tuple: Tuple = fs[..=j].iter().chain(&gs[j..]).cloned().collect();
            let coeff = if j % 2 == 0 { c.clone() } else { -c };
            out.push(tuple, &coeff);
        }
    }
    out
}

fn stage_limit(group: &GroupDescriptor, x: &GroupElement) -> usize {
    stage_budget(group.length(x) + 1)
}

/// Non-degenerate summands of `Σ_j H(f_j, f_{j+1})` applied to one basis
/// tuple, before merging.
fn homotopy_summands(c: &dyn Combing, t: &[GroupElement]) -> Result<Vec<(Tuple, bool)>> {
    let group = c.group();
    let mut horizon = 0;
    for x in t {
        horizon = horizon.max(stabilization(c, x, stage_limit(group, x))?);
    }
    let mut stages: Vec<Vec<GroupElement>> = (0..=horizon).map(|k| t.iter().map(|x| c.stage(k, x)).collect()).collect();
    stages.push(t.to_vec());
    let mut out = Vec::new();
    for j in 0..horizon {
        let (lo, hi) = (&stages[j], &stages[j + 1]);
        for i in 0..t.len() {
            if lo[i] == hi[i] {
                continue;
            }
            let tuple: Tuple = lo[..=i].iter().chain(&hi[i..]).cloned().collect();
            if !is_degenerate(&tuple) {
                out.push((tuple, i % 2 == 1));
            }
        }
    }
    Ok(out)
}

/// `H = Σ_j H(f_j, f_{j+1})` on a reduced chain.
pub fn combing_homotopy(c: &dyn Combing, ch: &BarChain) -> Result<BarChain> {
    if !ch.reduced {
        return Err(Error::Precondition("combing homotopy needs a reduced chain".into()));
    }
    if c.group() != &ch.group {
        return Err(Error::OperandMismatch(format!("combing on {} vs chain on {}", c.group(), ch.group)));
    }
    let basis: Vec<(&Tuple, &Scalar)> = ch.terms.iter().collect();
    let parts = par::try_map(&basis, |&(t, _)| homotopy_summands(c, t))?;
    let mut out = BarChain::zero(&ch.group, ch.degree + 1, true);
    for ((_, coeff), summands) in basis.into_iter().zip(parts) {
        for (t, negate) in summands {
            let v = if negate { -coeff } else { coeff.clone() };
            accumulate(&mut out.terms, t, &v);
        }
    }
    Ok(out)
}

/// Number of non-degenerate summands produced from one basis tuple, and the
/// bound `J(x_0) + … + J(x_n)`.
pub fn summand_count(c: &dyn Combing, t: &[GroupElement]) -> Result<(usize, usize)> {
    let group = c.group();
    let bound = t.iter().map(|x| stabilization(c, x, stage_limit(group, x))).sum::<Result<usize>>()?;
    Ok((homotopy_summands(c, t)?.len(), bound))
}

/// `(δH + Hδ)(ch)`, with `Hδ = 0` in degree 0.
pub fn homotopy_commutator(c: &dyn Combing, ch: &BarChain) -> Result<BarChain> {
    let dh = bar_differential(&combing_homotopy(c, ch)?)?;
    if ch.degree == 0 {
        return Ok(dh);
    }
    dh.add(&combing_homotopy(c, &bar_differential(ch)?)?)
}

pub type FreeCoordinates = BTreeMap<GroupElement, BTreeMap<Tuple, Scalar>>;

/// `(x_0, …, x_n) ↦ x_0 ⊗ (e, x_0⁻¹x_1, …, x_0⁻¹x_n)`.
pub fn free_coordinates(ch: &BarChain) -> FreeCoordinates {
    let g = &ch.group;
    let mut out: FreeCoordinates = BTreeMap::new();
    for (t, c) in &ch.terms {
        let inv = g.inverse(&t[0]);
        let inner: Tuple = t.iter().map(|x| g.mul(&inv, x)).collect();
        accumulate(out.entry(t[0].clone()).or_default(), inner, c);
    }
    out
}

/// Inverse of [`free_coordinates`]: `g ⊗ (e, h_1, …) ↦ (g, g h_1, …)`.
pub fn from_free_coordinates(group: &GroupDescriptor, degree: usize, reduced: bool, coords: &FreeCoordinates) -> BarChain {
    let mut out = BarChain::zero(group, degree, reduced);
    for (g, inner) in coords {
        for (t, c) in inner {
            out.push(t.iter().map(|h| group.mul(g, h)).collect(), c);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthCertificate {
    /// Length distortion measured by the combing profile.
    pub d_profile: Scalar,
    /// `(n + 2)·d_profile`: the factor that controls the chain gauge, since
    /// each homotopy summand repeats one coordinate.
    pub d_chain: Scalar,
    pub gauge_in: Scalar,
    pub gauge_out: Scalar,
    pub observed_gauge: Gauge,
    pub coefficients_ok: bool,
    pub declared_problems: Vec<String>,
    pub verified: bool,
}

/// Certifies that `combing_homotopy(c, ch)` has gauge at least
/// `gauge_in / d_chain`, with the distortion measured rather than declared.
pub fn growth_certificate(c: &dyn Combing, ch: &BarChain, gauge_in: &Scalar, p: Prime, cap: usize) -> Result<GrowthCertificate> {
    if *gauge_in <= Scalar::zero() {
        return Err(Error::Precondition(format!("gauge_in = {gauge_in} must be positive")));
    }
    if let Gauge::Finite(g) = ch.gauge(p) {
        if &g < gauge_in {
            return Err(Error::Precondition(format!("chain gauge {g} is below gauge_in {gauge_in}")));
        }
    }
    let group = &ch.group;
    let radius = ch.terms.keys().flatten().map(|x| group.length(x)).max().unwrap_or(0);
    let profile = combing_profile(c, radius, cap)?;
    let mut declared_problems = check_declared(c, &profile);
    if c.declared().is_none() {
        declared_problems.push("combing declares no constants to cross-check".into());
    }
    let h = combing_homotopy(c, ch)?;
    let d_profile = profile.length_distortion.clone();
    let d_chain = Scalar::from_int(ch.degree as i64 + 2) * &d_profile;
    let gauge_out = gauge_in / &d_chain;
    let observed_gauge = h.gauge(p);
    let coefficients_ok = observed_gauge >= Gauge::Finite(gauge_out.clone());
    let verified = coefficients_ok && declared_problems.is_empty();
    Ok(GrowthCertificate {
        d_profile,
        d_chain,
        gauge_in: gauge_in.clone(),
        gauge_out,
        observed_gauge,
        coefficients_ok,
        declared_problems,
        verified,
    })
}

/// A random chain with `count` terms drawn from `ball^{degree+1}`; reduced
/// chains avoid degenerate tuples.
pub fn random_chain(
    group: &GroupDescriptor,
    ball: &[GroupElement],
    degree: usize,
    count: usize,
    reduced: bool,
    rng: &mut SampleRng,
) -> BarChain {
    let mut out = BarChain::zero(group, degree, reduced);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let t: Tuple = (0..=degree).map(|_| sample::choose(rng, ball).clone()).collect();
        if reduced && is_degenerate(&t) {
            continue;
        }
        let c = sample::nonzero_scalar(rng, 9);
        out.push(t, &c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combing::{FnCombing, LatticeCombing, PrefixCombing};
    use crate::group::DEFAULT_BALL_CAP;

    fn free2() -> GroupDescriptor {
        GroupDescriptor::free(2)
    }

    fn w(g: &GroupDescriptor, s: &str) -> GroupElement {
        g.parse_word(s).unwrap()
    }

    #[test]
    fn differential_examples() {
        let g = free2();
        let (a, b, c) = (w(&g, "a"), w(&g, "b"), w(&g, "ab"));
        let d1 = bar_differential(&BarChain::basis(&g, vec![a.clone(), b.clone()], false).unwrap()).unwrap();
        let expected = BarChain::from_terms(&g, 0, false, [(vec![b.clone()], 1.into()), (vec![a.clone()], (-1).into())]).unwrap();
        assert_eq!(d1, expected);
        let d2 = bar_differential(&BarChain::basis(&g, vec![a.clone(), b.clone(), c.clone()], false).unwrap()).unwrap();
        let expected = BarChain::from_terms(
            &g,
            1,
            false,
            [(vec![b.clone(), c.clone()], 1.into()), (vec![a.clone(), c], (-1).into()), (vec![a, b], 1.into())],
        )
        .unwrap();
        assert_eq!(d2, expected);
        assert!(bar_differential(&BarChain::basis(&g, vec![g.identity()], false).unwrap()).is_err());
    }

    #[test]
    fn augmentation_examples() {
        let g = free2();
        let (x, y) = (w(&g, "a"), w(&g, "b"));
        let ch = BarChain::from_terms(&g, 0, false, [(vec![x.clone()], 1.into()), (vec![y], (-1).into())]).unwrap();
        assert!(augmentation(&ch).unwrap().is_zero());
        assert_eq!(augmentation(&BarChain::from_terms(&g, 0, false, [(vec![x.clone()], 3.into())]).unwrap()).unwrap(), 3.into());
        assert!(augmentation(&BarChain::basis(&g, vec![x.clone(), x], false).unwrap()).is_err());
    }

    #[test]
    fn differential_squares_to_zero() {
        let groups = [free2(), GroupDescriptor::free_abelian(2), GroupDescriptor::parse("sym:3").unwrap()];
        let mut rng = sample::rng(3);
        for g in &groups {
            let ball = g.ball(3, DEFAULT_BALL_CAP).unwrap();
            for degree in 1..=4 {
                for reduced in [false, true] {
                    for _ in 0..25 {
                        let ch = random_chain(g, &ball, degree, 5, reduced, &mut rng);
                        let d = bar_differential(&ch).unwrap();
                        if degree >= 2 {
                            assert!(bar_differential(&d).unwrap().is_zero());
                        } else {
                            assert!(augmentation(&d).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn prism_examples_and_identity() {
        let g = free2();
        let ball = g.ball(3, DEFAULT_BALL_CAP).unwrap();
        let s = w(&g, "aB");
        let gg = g.clone();
        let f = move |x: &GroupElement| gg.mul(x, &s);
        let comb = PrefixCombing::new(g.clone()).unwrap();
        let h = move |x: &GroupElement| comb.stage(2, x);
        let x = w(&g, "ab");
        let p0 = prism_homotopy(&f, &h, &BarChain::basis(&g, vec![x.clone()], false).unwrap());
        assert_eq!(p0, BarChain::basis(&g, vec![f(&x), h(&x)], false).unwrap());

        let mut rng = sample::rng(5);
        for reduced in [false, true] {
            for degree in 0..=3 {
                for _ in 0..25 {
                    let ch = random_chain(&g, &ball, degree, 4, reduced, &mut rng);
                    assert!(prism_homotopy(&f, &f, &ch).is_zero() || !reduced);
                    let p = prism_homotopy(&f, &h, &ch);
                    let mut lhs = bar_differential(&p).unwrap();
                    if degree > 0 {
                        lhs = lhs.add(&prism_homotopy(&f, &h, &bar_differential(&ch).unwrap())).unwrap();
                    }
                    let rhs = pushforward(&h, &ch).sub(&pushforward(&f, &ch)).unwrap().scale(&PRISM_SIGN.into());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn combing_homotopy_example() {
        let g = free2();
        let c = PrefixCombing::new(g.clone()).unwrap();
        let ab = w(&g, "ab");
        let h = combing_homotopy(&c, &BarChain::basis(&g, vec![ab.clone()], true).unwrap()).unwrap();
        let expected = BarChain::from_terms(
            &g,
            1,
            true,
            [(vec![g.identity(), w(&g, "a")], 1.into()), (vec![w(&g, "a"), ab.clone()], 1.into())],
        )
        .unwrap();
        assert_eq!(h, expected);
        assert!(combing_homotopy(&c, &BarChain::basis(&g, vec![ab], false).unwrap()).is_err());
    }

    #[test]
    fn contraction_on_small_balls() {
        let groups: Vec<(GroupDescriptor, Box<dyn Combing>)> = vec![
            (free2(), Box::new(PrefixCombing::new(free2()).unwrap())),
            (
                GroupDescriptor::free_abelian(2),
                Box::new(LatticeCombing::new(GroupDescriptor::free_abelian(2)).unwrap()),
            ),
        ];
        for (g, c) in &groups {
            let ball = g.ball(2, DEFAULT_BALL_CAP).unwrap();
            let e = g.identity();
            for x in &ball {
                let ch = BarChain::from_terms(g, 0, true, [(vec![x.clone()], 1.into()), (vec![e.clone()], (-1).into())]).unwrap();
                assert_eq!(homotopy_commutator(c.as_ref(), &ch).unwrap(), ch);
                for y in &ball {
                    let t = vec![x.clone(), y.clone()];
                    if is_degenerate(&t) {
                        continue;
                    }
                    let ch = BarChain::basis(g, t.clone(), true).unwrap();
                    assert_eq!(homotopy_commutator(c.as_ref(), &ch).unwrap(), ch);
                    let (count, bound) = summand_count(c.as_ref(), &t).unwrap();
                    assert!(count <= bound);
                }
            }
        }
    }

    #[test]
    fn summand_bound_on_random_tuples() {
        let g = free2();
        let c = PrefixCombing::new(g.clone()).unwrap();
        let ball = g.ball(4, DEFAULT_BALL_CAP).unwrap();
        let mut rng = sample::rng(9);
        for degree in 0..=3 {
            for _ in 0..25 {
                let ch = random_chain(&g, &ball, degree, 1, true, &mut rng);
                let t = ch.terms().keys().next().unwrap();
                let (count, bound) = summand_count(&c, t).unwrap();
                assert!(count <= bound);
                assert!(combing_homotopy(&c, &ch).unwrap().len() <= bound);
            }
        }
    }

    #[test]
    fn free_coordinates_round_trip_and_equivariance() {
        let g = free2();
        let ball = g.ball(3, DEFAULT_BALL_CAP).unwrap();
        let x = w(&g, "ab");
        let h = w(&g, "B");
        let coords = free_coordinates(&BarChain::basis(&g, vec![x.clone(), g.mul(&x, &h)], false).unwrap());
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[&x].keys().next().unwrap(), &vec![g.identity(), h]);

        let mut rng = sample::rng(13);
        for _ in 0..100 {
            let degree = 1 + rng_index(&mut rng, 3);
            let ch = random_chain(&g, &ball, degree, 4, false, &mut rng);
            let coords = free_coordinates(&ch);
            assert_eq!(from_free_coordinates(&g, degree, false, &coords), ch);
            let s = sample::choose(&mut rng, &ball).clone();
            let moved = free_coordinates(&ch.translate(&s));
            let expected: FreeCoordinates = coords.into_iter().map(|(k, v)| (g.mul(&s, &k), v)).collect();
            assert_eq!(moved, expected);
        }
    }

    fn rng_index(rng: &mut SampleRng, n: usize) -> usize {
        use rand::Rng;
        rng.gen_range(0..n)
    }

    #[test]
    fn certificate_prefix_example() {
        let g = free2();
        let c = PrefixCombing::new(g.clone()).unwrap();
        let p = Prime::new(5).unwrap();
        let ch = BarChain::basis(&g, vec![w(&g, "abA")], true).unwrap();
        let cert = growth_certificate(&c, &ch, &Scalar::new(1, 4), p, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(cert.d_profile, Scalar::one());
        assert_eq!(cert.gauge_out, Scalar::new(1, 4) / cert.d_chain.clone());
        assert!(cert.verified, "{cert:?}");

        let at_e = BarChain::basis(&g, vec![g.identity()], true).unwrap();
        assert!(growth_certificate(&c, &at_e, &Scalar::new(1, 4), p, DEFAULT_BALL_CAP).unwrap().verified);
        assert!(growth_certificate(&c, &ch, &Scalar::from_int(2), p, DEFAULT_BALL_CAP).is_err());
    }

    #[test]
    fn certificate_rejects_jumping_fake() {
        let g = free2();
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
            PrefixCombing::new(g.clone()).unwrap().declared(),
        );
        let ch = BarChain::basis(&g, vec![w(&g, "abA")], true).unwrap();
        let cert = growth_certificate(&fake, &ch, &Scalar::new(1, 4), Prime::new(5).unwrap(), DEFAULT_BALL_CAP).unwrap();
        assert!(!cert.verified);
        assert!(!cert.declared_problems.is_empty());
    }

    #[test]
    fn chain_json_round_trip() {
        let g = free2();
        let ball = g.ball(2, DEFAULT_BALL_CAP).unwrap();
        let ch = random_chain(&g, &ball, 2, 5, true, &mut sample::rng(1));
        assert_eq!(BarChain::from_json(&ch.to_json()).unwrap(), ch);
    }
}
