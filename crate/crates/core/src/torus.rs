//! The noncommutative torus `A = F[U₁^{±1}, U₂^{±1}]` with `U₂U₁ = λU₁U₂`,
//! its Koszul bimodule resolution, and Hochschild homology via the complex
//! `A --d₁--> A ⊕ A --d₀--> A`.
//!
//! Monomials are kept in the normal form `U₁^m U₂^n`, keyed by `(m, n)`.
//! A monomial `U₁^m U₂^n` has charge `(m+1, n+1)` in degree 2, charge
//! `(m+1, n)` in the first slot of degree 1, charge `(m, n+1)` in the second
//! slot, and charge `(m, n)` in degree 0. Every differential preserves charge.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{accumulate, homology_basis, homology_dim, SparseMatrix, SparseVec};
use crate::par;
use crate::scalar::{Prime, Scalar, Valuation};

pub type Monomial = (i64, i64);

/// The deformation parameter together with the prime used for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusParams {
    pub p: Prime,
    pub lambda: Scalar,
}

impl TorusParams {
    pub fn new(p: Prime, lambda: Scalar) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::NotUnit("lambda = 0".into()));
        }
        Ok(TorusParams { p, lambda })
    }

    pub fn is_unit(&self) -> bool {
        self.lambda.is_unit(self.p)
    }

    pub fn valuation(&self) -> Valuation {
        self.lambda.valuation(self.p)
    }

    /// Over `Q` the only roots of unity are `±1`.
    pub fn is_root_of_unity(&self) -> bool {
        self.lambda.is_one() || (-&self.lambda).is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    lambda: Scalar,
    terms: BTreeMap<Monomial, Scalar>,
}

impl TorusElement {
    pub fn zero(lambda: &Scalar) -> Self {
        TorusElement { lambda: lambda.clone(), terms: BTreeMap::new() }
    }

    pub fn new<I: IntoIterator<Item = (Monomial, Scalar)>>(lambda: &Scalar, terms: I) -> Self {
        let mut out = Self::zero(lambda);
        for (k, c) in terms {
            accumulate(&mut out.terms, k, &c);
        }
        out
    }

    pub fn monomial(lambda: &Scalar, m: i64, n: i64) -> Self {
        Self::new(lambda, [((m, n), Scalar::one())])
    }

    pub fn one(lambda: &Scalar) -> Self {
        Self::monomial(lambda, 0, 0)
    }

    pub fn u1(lambda: &Scalar) -> Self {
        Self::monomial(lambda, 1, 0)
    }

    pub fn u2(lambda: &Scalar) -> Self {
        Self::monomial(lambda, 0, 1)
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: i64, n: i64) -> Scalar {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.lambda != other.lambda {
            return Err(Error::OperandMismatch(format!("lambda {} vs {}", self.lambda, other.lambda)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, *k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(&self.lambda, self.terms.iter().map(|(k, x)| (*k, x * c)))
    }

    /// `(U₁^m U₂^n)(U₁^{m'} U₂^{n'}) = λ^{n m'} U₁^{m+m'} U₂^{n+n'}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.lambda);
        for (&(m, n), a) in &self.terms {
            for (&(m2, n2), b) in &other.terms {
                accumulate(&mut out.terms, (m + m2, n + n2), &(a * b * self.lambda.pow(n * m2)));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(m, n), c)| if c.is_one() { monomial_name(m, n) } else { format!("{c}·{}", monomial_name(m, n)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn monomial_name(m: i64, n: i64) -> String {
    let power = |name: &str, e: i64| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    let parts: Vec<String> = [power("U1", m), power("U2", n)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// An element of `A ⊗ A`, keyed by pairs of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusTensor {
    lambda: Scalar,
    terms: BTreeMap<(Monomial, Monomial), Scalar>,
}

impl TorusTensor {
    pub fn zero(lambda: &Scalar) -> Self {
        TorusTensor { lambda: lambda.clone(), terms: BTreeMap::new() }
    }

    pub fn new<I: IntoIterator<Item = ((Monomial, Monomial), Scalar)>>(lambda: &Scalar, terms: I) -> Self {
        let mut out = Self::zero(lambda);
        for (k, c) in terms {
            accumulate(&mut out.terms, k, &c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self, c: &Scalar) {
        for (k, x) in &other.terms {
            accumulate(&mut self.terms, *k, &(x * c));
        }
    }

    /// `f ⊗ g ↦ f·x ⊗ y·g`.
    fn sandwich(&self, x: &TorusElement, y: &TorusElement) -> Self {
        let mut out = Self::zero(&self.lambda);
        for ((f, g), c) in &self.terms {
            let fx = TorusElement::monomial(&self.lambda, f.0, f.1).mul(x).expect("same lambda");
            let yg = y.mul(&TorusElement::monomial(&self.lambda, g.0, g.1)).expect("same lambda");
            for (a, s) in &fx.terms {
                for (b, t) in &yg.terms {
                    accumulate(&mut out.terms, (*a, *b), &(c * s * t));
                }
            }
        }
        out
    }
}

/// `b₂(f⊗g) = (λ f⊗U₂g − fU₂⊗g, −f⊗U₁g + λ fU₁⊗g)`.
pub fn koszul_b2(t: &TorusTensor) -> (TorusTensor, TorusTensor) {
    let lam = &t.lambda;
    let (one, u1, u2) = (TorusElement::one(lam), TorusElement::u1(lam), TorusElement::u2(lam));
    let mut first = TorusTensor::zero(lam);
    first.add_assign(&t.sandwich(&one, &u2), lam);
    first.add_assign(&t.sandwich(&u2, &one), &Scalar::from_int(-1));
    let mut second = TorusTensor::zero(lam);
    second.add_assign(&t.sandwich(&one, &u1), &Scalar::from_int(-1));
    second.add_assign(&t.sandwich(&u1, &one), lam);
    (first, second)
}

/// `b₁(f₁⊗f₂, f₃⊗f₄) = f₁U₁⊗f₂ − f₁⊗U₁f₂ + f₃U₂⊗f₄ − f₃⊗U₂f₄`.
pub fn koszul_b1(pair: &(TorusTensor, TorusTensor)) -> Result<TorusTensor> {
    let (s, t) = pair;
    if s.lambda != t.lambda {
        return Err(Error::OperandMismatch("tensors with different lambda".into()));
    }
    let lam = &s.lambda;
    let (one, u1, u2) = (TorusElement::one(lam), TorusElement::u1(lam), TorusElement::u2(lam));
    let minus = Scalar::from_int(-1);
    let mut out = TorusTensor::zero(lam);
    out.add_assign(&s.sandwich(&u1, &one), &Scalar::one());
    out.add_assign(&s.sandwich(&one, &u1), &minus);
    out.add_assign(&t.sandwich(&u2, &one), &Scalar::one());
    out.add_assign(&t.sandwich(&one, &u2), &minus);
    Ok(out)
}

/// Multiplication `f ⊗ g ↦ fg`.
pub fn koszul_b0(t: &TorusTensor) -> TorusElement {
    let mut out = TorusElement::zero(&t.lambda);
    for ((f, g), c) in &t.terms {
        let fg = TorusElement::monomial(&t.lambda, f.0, f.1)
            .mul(&TorusElement::monomial(&t.lambda, g.0, g.1))
            .expect("same lambda");
        for (k, x) in &fg.terms {
            accumulate(&mut out.terms, *k, &(c * x));
        }
    }
    out
}

/// `d₁(a) = (λU₂a − aU₂, λaU₁ − U₁a)`.
pub fn hochschild_d1(a: &TorusElement) -> (TorusElement, TorusElement) {
    let lam = &a.lambda;
    let (u1, u2) = (TorusElement::u1(lam), TorusElement::u2(lam));
    let first = u2.mul(a).unwrap().scale(lam).sub(&a.mul(&u2).unwrap()).unwrap();
    let second = a.mul(&u1).unwrap().scale(lam).sub(&u1.mul(a).unwrap()).unwrap();
    (first, second)
}

/// `d₀(a, b) = aU₁ − U₁a + bU₂ − U₂b`.
pub fn hochschild_d0(a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
    a.check(b)?;
    let lam = &a.lambda;
    let (u1, u2) = (TorusElement::u1(lam), TorusElement::u2(lam));
    a.mul(&u1)?.sub(&u1.mul(a)?)?.add(&b.mul(&u2)?.sub(&u2.mul(b)?)?)
}

/// `(λ^{n+1} − 1) a_{m,n+1} = (λ^{m+1} − 1) b_{m+1,n}` for all `(m, n)`;
/// equivalent to `d₀(a, b) = 0`.
pub fn kernel_relation_check(a: &TorusElement, b: &TorusElement) -> bool {
    let lam = &a.lambda;
    let one = Scalar::one();
    let charges: std::collections::BTreeSet<Monomial> =
        a.terms.keys().map(|&(m, n)| (m + 1, n)).chain(b.terms.keys().map(|&(m, n)| (m, n + 1))).collect();
    charges.into_iter().all(|(cm, cn)| {
        let (m, n) = (cm - 1, cn - 1);
        (lam.pow(n + 1) - &one) * a.coeff(m, n + 1) == (lam.pow(m + 1) - &one) * b.coeff(m + 1, n)
    })
}

/// Relations satisfied by an image `(f₁, f₂) = d₁(f)`: `f₁` vanishes on
/// `U₁^{-1}U₂^n`, `f₂` vanishes on `U₁^m U₂^{-1}`, and
/// `(λ^{n+1} − 1) f₁_{m,n+1} = (λ^{m+1} − 1) f₂_{m+1,n}`.
pub fn image_relations_hold(f1: &TorusElement, f2: &TorusElement) -> bool {
    let zeros = f1.terms.keys().all(|&(m, _)| m != -1) && f2.terms.keys().all(|&(_, n)| n != -1);
    zeros && kernel_relation_check(f1, f2)
}

/// Charge-`(M, N)` differentials: `d₁ = (λ^M − 1, λ^N − 1)ᵀ`, `d₀ = (λ^N − 1, 1 − λ^M)`.
pub fn charge_differentials(lambda: &Scalar, m: i64, n: i64) -> (SparseMatrix, SparseMatrix) {
    let one = Scalar::one();
    let (lm, ln) = (lambda.pow(m) - &one, lambda.pow(n) - &one);
    let mut d1 = SparseMatrix::zero(2, 1);
    d1.set(0, 0, lm.clone());
    d1.set(1, 0, ln.clone());
    let mut d0 = SparseMatrix::zero(1, 2);
    d0.set(0, 0, ln);
    d0.set(0, 1, -lm);
    (d1, d0)
}

/// `(h₀, h₁, h₂)` of the charge-`(M, N)` subcomplex `F → F² → F`.
pub fn hh_bidegree(lambda: &Scalar, m: i64, n: i64) -> (usize, usize, usize) {
    let (d1, d0) = charge_differentials(lambda, m, n);
    let h2 = homology_dim(&SparseMatrix::zero(1, 0), &d1).expect("complex");
    let h1 = homology_dim(&d1, &d0).expect("complex");
    let h0 = homology_dim(&d0, &SparseMatrix::zero(0, 1)).expect("complex");
    (h0, h1, h2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HhMethod {
    Graded,
    Windowed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HhGenerator {
    pub degree: usize,
    pub charge: Monomial,
    pub representative: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HhReport {
    pub method: HhMethod,
    pub window: usize,
    /// `(HH₀, HH₁, HH₂, HH₃)` at the requested window.
    pub dims: [usize; 4],
    /// Totals at windows `window−2, window−1, window`.
    pub history: Vec<(usize, [usize; 4])>,
    pub stabilized: bool,
    pub generators: Vec<HhGenerator>,
    pub generators_truncated: bool,
    pub degenerate_lambda: bool,
    pub lambda_unit: bool,
}

const GENERATOR_LIMIT: usize = 32;

fn graded_totals(lambda: &Scalar, window: i64) -> [usize; 4] {
    let charges: Vec<Monomial> = (-window..=window).flat_map(|m| (-window..=window).map(move |n| (m, n))).collect();
    let dims = par::map(&charges, |&(m, n)| hh_bidegree(lambda, m, n));
    let mut out = [0; 4];
    for (h0, h1, h2) in dims {
        out[0] += h0;
        out[1] += h1;
        out[2] += h2;
    }
    out
}

fn describe(degree: usize, m: i64, n: i64, v: &SparseVec) -> String {
    let coeff = |i: usize| v.get(&i).cloned().unwrap_or_else(Scalar::zero);
    let term = |c: Scalar, mm: i64, nn: i64| {
        if c.is_zero() {
            "0".to_string()
        } else if c.is_one() {
            monomial_name(mm, nn)
        } else {
            format!("{c}·{}", monomial_name(mm, nn))
        }
    };
    match degree {
        2 => term(coeff(0), m - 1, n - 1),
        1 => format!("({}, {})", term(coeff(0), m - 1, n), term(coeff(1), m, n - 1)),
        _ => term(coeff(0), m, n),
    }
}

/// Generators of the per-charge homology for every charge in the window.
fn graded_generators(lambda: &Scalar, window: i64) -> (Vec<HhGenerator>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    let mut charges: Vec<Monomial> = (-window..=window).flat_map(|m| (-window..=window).map(move |n| (m, n))).collect();
    charges.sort_by_key(|&(m, n)| (m.abs() + n.abs(), m, n));
    for (m, n) in charges {
        let (d1, d0) = charge_differentials(lambda, m, n);
        let bases = [
            (2, homology_basis(&SparseMatrix::zero(1, 0), &d1).expect("complex")),
            (1, homology_basis(&d1, &d0).expect("complex")),
            (0, homology_basis(&d0, &SparseMatrix::zero(0, 1)).expect("complex")),
        ];
        for (degree, basis) in bases {
            for v in basis {
                if out.len() == GENERATOR_LIMIT {
                    truncated = true;
                    continue;
                }
                out.push(HhGenerator { degree, charge: (m, n), representative: describe(degree, m, n, &v) });
            }
        }
    }
    (out, truncated)
}

/// Sparse matrices of `d₁`, `d₀` on the charge box `|M|, |N| ≤ window`,
/// assembled by multiplying in the algebra.
pub fn windowed_matrices(lambda: &Scalar, window: i64) -> (SparseMatrix, SparseMatrix) {
    let inside = |(m, n): Monomial| m.abs() <= window && n.abs() <= window;
    let box_monomials = |shift: Monomial| -> Vec<Monomial> {
        let mut v: Vec<Monomial> = (-window - 1..=window + 1)
            .flat_map(|m| (-window - 1..=window + 1).map(move |n| (m, n)))
            .filter(|&(m, n)| inside((m + shift.0, n + shift.1)))
            .collect();
        v.sort();
        v
    };
    let c2 = box_monomials((1, 1));
    let s1 = box_monomials((1, 0));
    let s2 = box_monomials((0, 1));
    let c0 = box_monomials((0, 0));
    let index = |list: &[Monomial]| -> BTreeMap<Monomial, usize> { list.iter().enumerate().map(|(i, k)| (*k, i)).collect() };
    let (i_s1, i_s2, i_c0) = (index(&s1), index(&s2), index(&c0));
    let c1_len = s1.len() + s2.len();

    let d1_cols = par::map(&c2, |&(m, n)| {
        let (f1, f2) = hochschild_d1(&TorusElement::monomial(lambda, m, n));
        let mut col = SparseVec::new();
        for (k, c) in &f1.terms {
            col.insert(i_s1[k], c.clone());
        }
        for (k, c) in &f2.terms {
            col.insert(s1.len() + i_s2[k], c.clone());
        }
        col
    });
    let zero = TorusElement::zero(lambda);
    let d0_cols = par::map_range(c1_len, |j| {
        let image = if j < s1.len() {
            let (m, n) = s1[j];
            hochschild_d0(&TorusElement::monomial(lambda, m, n), &zero)
        } else {
            let (m, n) = s2[j - s1.len()];
            hochschild_d0(&zero, &TorusElement::monomial(lambda, m, n))
        }
        .expect("same lambda");
        image.terms.iter().map(|(k, c)| (i_c0[k], c.clone())).collect::<SparseVec>()
    });
    (SparseMatrix::from_columns(c1_len, &d1_cols), SparseMatrix::from_columns(c0.len(), &d0_cols))
}

fn windowed_totals(lambda: &Scalar, window: i64) -> Result<[usize; 4]> {
    let (d1, d0) = windowed_matrices(lambda, window);
    let h2 = homology_dim(&SparseMatrix::zero(d1.cols(), 0), &d1)?;
    let h1 = homology_dim(&d1, &d0)?;
    let h0 = homology_dim(&d0, &SparseMatrix::zero(0, d0.rows()))?;
    Ok([h0, h1, h2, 0])
}

/// Total Hochschild homology over the charge window, with stabilisation
/// judged on windows `window−2 ..= window`.
pub fn hh_total(params: &TorusParams, window: usize, method: HhMethod) -> Result<HhReport> {
    if window < 2 {
        return Err(Error::Precondition("window must be at least 2".into()));
    }
    let lambda = &params.lambda;
    let mut history = Vec::new();
    for w in window - 2..=window {
        let dims = match method {
            HhMethod::Graded => graded_totals(lambda, w as i64),
            HhMethod::Windowed => windowed_totals(lambda, w as i64)?,
        };
        history.push((w, dims));
    }
    let dims = history[2].1;
    let stabilized = history.iter().all(|(_, d)| *d == dims);
    let (generators, generators_truncated) = graded_generators(lambda, window as i64);
    Ok(HhReport {
        method,
        window,
        dims,
        history,
        stabilized,
        generators,
        generators_truncated,
        degenerate_lambda: params.is_root_of_unity(),
        lambda_unit: params.is_unit(),
    })
}
