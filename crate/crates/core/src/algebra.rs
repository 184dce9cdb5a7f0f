//! Group algebras `V[G]`, the torus twist, linear-growth gauges, the
//! symmetry operator on `V[G × G]`, and the crossed product `Z ⋉ V[t, t⁻¹]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement, GroupKind};
use crate::linalg::accumulate;
use crate::par;
use crate::scalar::{Prime, Scalar, Valuation};

/// The normalised 2-cocycle `c((m₁,n₁),(m₂,n₂)) = λ^{n₁·m₂}` on `Z²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    lambda: Scalar,
}

impl Cocycle {
    /// Requires `λ` to be a `p`-adic unit.
    pub fn new(lambda: Scalar, p: Prime) -> Result<Self> {
        if !lambda.is_unit(p) {
            return Err(Error::NotUnit(format!("lambda = {lambda} at p = {p}")));
        }
        Ok(Cocycle { lambda })
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    /// Over `Q` the only roots of unity are `±1`.
    pub fn is_root_of_unity(&self) -> bool {
        self.lambda.is_one() || (-&self.lambda).is_one()
    }

    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> Scalar {
        match (x, y) {
            (GroupElement::Vector(a), GroupElement::Vector(b)) if a.len() == 2 && b.len() == 2 => {
                self.lambda.pow(a[1] * b[0])
            }
            _ => panic!("torus cocycle evaluated off Z²"),
        }
    }
}

/// Dagger gauge: a rational, or `+∞` when the support lies in `{e}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gauge {
    Finite(Scalar),
    Infinite,
}

impl Gauge {
    pub fn divide(&self, d: &Scalar) -> Gauge {
        match self {
            Gauge::Finite(c) => Gauge::Finite(c / d),
            Gauge::Infinite => Gauge::Infinite,
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gauge::Finite(c) => write!(f, "{c}"),
            Gauge::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Gauge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finitely supported element `Σ x_g δ_g` of `V[G]` or of the torus
/// `V[Z², c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    group: GroupDescriptor,
    terms: BTreeMap<GroupElement, Scalar>,
    twist: Option<Cocycle>,
}

impl AlgebraElement {
    pub fn zero(group: &GroupDescriptor, twist: Option<Cocycle>) -> Result<Self> {
        if twist.is_some() && !matches!(group.kind(), GroupKind::FreeAbelian { rank: 2 }) {
            return Err(Error::OperandMismatch(format!("torus twist on {group}")));
        }
        Ok(AlgebraElement { group: group.clone(), terms: BTreeMap::new(), twist })
    }

    /// Builds an element, validating group membership and dropping zeros.
    pub fn from_terms<I>(group: &GroupDescriptor, twist: Option<Cocycle>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Scalar)>,
    {
        let mut out = Self::zero(group, twist)?;
        for (g, c) in terms {
            group.check(&g)?;
            accumulate(&mut out.terms, g, &c);
        }
        Ok(out)
    }

    pub fn delta(group: &GroupDescriptor, twist: Option<Cocycle>, g: GroupElement) -> Result<Self> {
        Self::from_terms(group, twist, [(g, Scalar::one())])
    }

    pub fn unit(group: &GroupDescriptor, twist: Option<Cocycle>) -> Result<Self> {
        Self::delta(group, twist, group.identity())
    }

    /// The torus generator `U₁^m U₂^n = δ_{(m,n)}`.
    pub fn torus_monomial(lambda: &Cocycle, m: i64, n: i64) -> Self {
        let group = GroupDescriptor::free_abelian(2);
        let mut terms = BTreeMap::new();
        terms.insert(GroupElement::Vector(vec![m, n]), Scalar::one());
        AlgebraElement { group, terms, twist: Some(lambda.clone()) }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn twist(&self) -> Option<&Cocycle> {
        self.twist.as_ref()
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, g: &GroupElement) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = AlgebraElement { terms: BTreeMap::new(), ..self.clone() };
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect();
        }
        out
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::OperandMismatch(format!("{} vs {}", self.group, other.group)));
        }
        if self.twist != other.twist {
            return Err(Error::OperandMismatch("different twists".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            accumulate(&mut out.terms, g.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(g, c)| json!({"g": self.group.element_to_json(g), "coeff": c.to_string()}))
            .collect();
        let mut v = json!({"group": self.group.spec(), "terms": terms});
        if let Some(t) = &self.twist {
            v["lambda"] = Value::String(t.lambda.to_string());
        }
        v
    }

    /// Reads the element file format; a `lambda` field makes the element
    /// live on the torus and must be a unit at `p`.
    pub fn from_json(v: &Value, p: Prime) -> Result<Self> {
        let spec = v["group"].as_str().ok_or_else(|| Error::Parse("missing \"group\"".into()))?;
        let group = GroupDescriptor::parse(spec)?;
        let twist = match &v["lambda"] {
            Value::Null => None,
            Value::String(s) => Some(Cocycle::new(s.parse()?, p)?),
            other => Some(Cocycle::new(Scalar::from_int(other.as_i64().ok_or_else(|| Error::Parse("bad lambda".into()))?), p)?),
        };
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| Error::Parse("missing \"terms\"".into()))? {
            let g = group.element_from_json(&t["g"])?;
            let c: Scalar = serde_json::from_value(t["coeff"].clone())?;
            terms.push((g, c));
        }
        Self::from_terms(&group, twist, terms)
    }
}

/// Twisted convolution `(f * h)(k) = Σ_{g·g' = k} f(g) h(g') c(g, g')`.
pub fn convolve(f: &AlgebraElement, h: &AlgebraElement) -> Result<AlgebraElement> {
    f.same_space(h)?;
    let group = &f.group;
    let left: Vec<(&GroupElement, &Scalar)> = f.terms.iter().collect();
    let partials = par::map(&left, |&(g, x)| {
        let mut acc = BTreeMap::new();
        for (g2, y) in &h.terms {
            let mut c = x * y;
            if let Some(t) = &f.twist {
                c *= &t.eval(g, g2);
            }
            accumulate(&mut acc, group.mul(g, g2), &c);
        }
        acc
    });
    let mut out = AlgebraElement { terms: BTreeMap::new(), ..f.clone() };
    for part in partials {
        for (k, c) in part {
            accumulate(&mut out.terms, k, &c);
        }
    }
    Ok(out)
}

/// Largest `c` with `ν(x_g) + 1 ≥ c·l(g)` on the support, i.e. the minimum of
/// `(ν(x_g) + 1) / l(g)` over `g ≠ e`.
pub fn dagger_gauge(f: &AlgebraElement, p: Prime) -> Gauge {
    let mut best = Gauge::Infinite;
    for (g, x) in &f.terms {
        let l = f.group.length(g);
        if l == 0 {
            continue;
        }
        let Valuation::Finite(v) = x.valuation(p) else { continue };
        let c = Gauge::Finite(Scalar::new(v + 1, l as i64));
        if c < best {
            best = c;
        }
    }
    best
}

/// Membership in `M_n = {Σ x_g δ_g : ν(x_g) + 1 ≥ l(g)/n}`.
pub fn in_linear_growth(f: &AlgebraElement, n: u64, p: Prime) -> bool {
    assert!(n > 0, "n must be positive");
    f.terms.iter().all(|(g, x)| match x.valuation(p) {
        Valuation::Infinite => true,
        Valuation::Finite(v) => Scalar::from_int(v + 1) >= Scalar::new(f.group.length(g) as i64, n as i64),
    })
}

/// The substitution `U(φ)(g, h) = φ(gh, g)`, or its inverse
/// `U⁻¹(φ)(g, h) = φ(h, h⁻¹g)`, on `V[G × G]`.
///
/// On basis elements: `U δ(a, b) = δ(b, b⁻¹a)` and `U⁻¹ δ(a, b) = δ(ab, a)`.
pub fn symmetry_u(phi: &AlgebraElement, inverse: bool) -> Result<AlgebraElement> {
    if phi.twist.is_some() {
        return Err(Error::OperandMismatch("symmetry operator needs an untwisted element".into()));
    }
    let GroupKind::Product(a, b) = phi.group.kind() else {
        return Err(Error::OperandMismatch(format!("symmetry operator needs G × G, got {}", phi.group)));
    };
    if a != b {
        return Err(Error::OperandMismatch(format!("factors differ in {}", phi.group)));
    }
    let mut out = AlgebraElement { terms: BTreeMap::new(), ..phi.clone() };
    for (pair, c) in &phi.terms {
        let GroupElement::Pair(x, y) = pair else { unreachable!("validated pair") };
        let image = if inverse {
            GroupElement::pair(a.mul(x, y), (**x).clone())
        } else {
            GroupElement::pair((**y).clone(), a.mul(&a.inverse(y), x))
        };
        accumulate(&mut out.terms, image, c);
    }
    Ok(out)
}

/// `Σ a_{n,m} t^m δ_n` in `Z ⋉_α V[t, t⁻¹]` with `α_n(t^m) = λ^{nm} t^m`.
/// Terms are keyed by `(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedProductElement {
    lambda: Scalar,
    terms: BTreeMap<(i64, i64), Scalar>,
}

impl CrossedProductElement {
    pub fn new<I: IntoIterator<Item = ((i64, i64), Scalar)>>(lambda: Scalar, terms: I) -> Self {
        let mut out = CrossedProductElement { lambda, terms: BTreeMap::new() };
        for (k, c) in terms {
            accumulate(&mut out.terms, k, &c);
        }
        out
    }

    /// `t^m δ_n`.
    pub fn monomial(lambda: Scalar, m: i64, n: i64) -> Self {
        Self::new(lambda, [((n, m), Scalar::one())])
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Scalar> {
        &self.terms
    }

    /// Coefficient of `t^m δ_n`.
    pub fn coeff(&self, m: i64, n: i64) -> Scalar {
        self.terms.get(&(n, m)).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// `(t^m δ_n)(t^{m'} δ_{n'}) = λ^{n m'} t^{m+m'} δ_{n+n'}`.
pub fn crossed_multiply(x: &CrossedProductElement, y: &CrossedProductElement) -> Result<CrossedProductElement> {
    if x.lambda != y.lambda {
        return Err(Error::OperandMismatch(format!("lambda {} vs {}", x.lambda, y.lambda)));
    }
    let mut out = CrossedProductElement { lambda: x.lambda.clone(), terms: BTreeMap::new() };
    for (&(n, m), a) in &x.terms {
        for (&(n2, m2), b) in &y.terms {
            let c = a * b * x.lambda.pow(n * m2);
            accumulate(&mut out.terms, (n + n2, m + m2), &c);
        }
    }
    Ok(out)
}

/// The isomorphism `t ↦ U₁`, `δ_1 ↦ U₂`, i.e. `t^m δ_n ↦ U₁^m U₂^n`.
pub fn crossed_to_torus(x: &CrossedProductElement, twist: &Cocycle) -> Result<AlgebraElement> {
    if &x.lambda != twist.lambda() {
        return Err(Error::OperandMismatch(format!("lambda {} vs {}", x.lambda, twist.lambda())));
    }
    let group = GroupDescriptor::free_abelian(2);
    AlgebraElement::from_terms(
        &group,
        Some(twist.clone()),
        x.terms.iter().map(|(&(n, m), c)| (GroupElement::Vector(vec![m, n]), c.clone())),
    )
}
