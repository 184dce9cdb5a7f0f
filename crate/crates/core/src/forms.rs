//! Noncommutative differential forms `Ω^n(A) = A ⊗ Ā^{⊗n}` over a
//! finite-dimensional algebra, the operators `b` and `B`, commutator
//! quotients, the truncated complex `X^(n)`, and a verifier for connections.
//!
//! A basis form `a_0 da_1 ⋯ da_n` is stored as the index list
//! `[a_0, a_1, …, a_n]` with `a_i ≠ unit` for `i ≥ 1`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{accumulate, homology_dim, solve_affine, RowSpace, SparseMatrix, SparseVec};
use crate::par;
use crate::scalar::Scalar;

/// Default bound on `dim Ω^n` for the quotient and X-complex computations.
pub const DEFAULT_FORM_CAP: usize = 20_000;

/// A unital associative algebra with a basis containing the unit.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    name: String,
    labels: Vec<String>,
    unit: usize,
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
    nonunit_rank: Vec<Option<usize>>,
}

impl FiniteAlgebra {
    /// `table[i][j]` lists the coordinates of `e_i e_j`. Associativity and
    /// unitality are checked exhaustively.
    pub fn new(name: impl Into<String>, labels: Vec<String>, unit: usize, table: Vec<Vec<SparseVec>>) -> Result<Self> {
        let d = labels.len();
        if d == 0 || unit >= d || table.len() != d || table.iter().any(|r| r.len() != d) {
            return Err(Error::Structure("structure constants must be d×d with the unit in range".into()));
        }
        if table.iter().flatten().flat_map(|v| v.keys()).any(|&k| k >= d) {
            return Err(Error::Structure("structure constant index out of range".into()));
        }
        let table: Vec<Vec<Vec<(usize, Scalar)>>> = table
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect())
            .collect();
        let mut nonunit_rank = vec![None; d];
        let mut r = 0;
        for (i, slot) in nonunit_rank.iter_mut().enumerate() {
            if i != unit {
                *slot = Some(r);
                r += 1;
            }
        }
        let alg = FiniteAlgebra { name: name.into(), labels, unit, table, nonunit_rank };
        for i in 0..d {
            let e = basis_vec(i);
            if alg.mul(&basis_vec(unit), &e) != e || alg.mul(&e, &basis_vec(unit)) != e {
                return Err(Error::Structure(format!("basis element {i} is not fixed by the unit")));
            }
            for j in 0..d {
                for k in 0..d {
                    let lhs = alg.mul(&alg.mul(&basis_vec(i), &basis_vec(j)), &basis_vec(k));
                    let rhs = alg.mul(&basis_vec(i), &alg.mul(&basis_vec(j), &basis_vec(k)));
                    if lhs != rhs {
                        return Err(Error::Structure(format!("associativity fails at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// `F[G]` with basis the group elements and unit the identity.
    pub fn group_algebra(name: impl Into<String>, g: &FiniteGroup) -> Result<Self> {
        let d = g.order();
        let labels = (0..d).map(|i| format!("g{i}")).collect();
        let table = (0..d).map(|i| (0..d).map(|j| basis_vec(g.mul(i, j))).collect()).collect();
        Self::new(name, labels, g.identity(), table)
    }

    pub fn field() -> Self {
        Self::new("F", vec!["1".into()], 0, vec![vec![basis_vec(0)]]).expect("field")
    }

    /// `M₂(F)` with basis `[I, E11, E12, E21]`.
    pub fn matrix2() -> Self {
        let mats: [[i64; 4]; 4] = [[1, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]];
        // [[a, b], [c, d]] = d·I + (a − d)·E11 + b·E12 + c·E21
        let decompose = |m: [i64; 4]| -> SparseVec {
            let mut v = SparseVec::new();
            for (i, c) in [(0, m[3]), (1, m[0] - m[3]), (2, m[1]), (3, m[2])] {
                if c != 0 {
                    v.insert(i, Scalar::from_int(c));
                }
            }
            v
        };
        let mul = |x: [i64; 4], y: [i64; 4]| {
            [
                x[0] * y[0] + x[1] * y[2],
                x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2],
                x[2] * y[1] + x[3] * y[3],
            ]
        };
        let table = (0..4).map(|i| (0..4).map(|j| decompose(mul(mats[i], mats[j]))).collect()).collect();
        let labels = ["I", "E11", "E12", "E21"].iter().map(|s| s.to_string()).collect();
        Self::new("M2", labels, 0, table).expect("matrix algebra")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    accumulate(&mut out, *k, &(&ab * c));
                }
            }
        }
        out
    }

    /// `dim Ω^n = d·(d−1)^n`.
    pub fn omega_dim(&self, n: usize) -> usize {
        self.dim() * (self.dim() - 1).pow(n as u32)
    }

    /// Position of a basis form in the ordered basis of `Ω^n`.
    pub fn form_index(&self, key: &[usize]) -> usize {
        let base = self.dim() - 1;
        key[1..].iter().fold(key[0], |acc, &a| acc * base + self.nonunit_rank[a].expect("non-unit entry"))
    }

    /// The ordered basis of `Ω^n`.
    pub fn form_basis(&self, n: usize) -> Vec<Vec<usize>> {
        let nonunit: Vec<usize> = (0..self.dim()).filter(|&i| i != self.unit).collect();
        let mut out: Vec<Vec<usize>> = (0..self.dim()).map(|a| vec![a]).collect();
        for _ in 0..n {
            out = out.into_iter().flat_map(|k| nonunit.iter().map(move |&a| [k.clone(), vec![a]].concat())).collect();
        }
        out
    }

    pub fn form_label(&self, key: &[usize]) -> String {
        let mut s = self.labels[key[0]].clone();
        for &a in &key[1..] {
            s.push_str(&format!(" d{}", self.labels[a]));
        }
        s
    }
}

pub fn basis_vec(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Scalar::one());
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    degree: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl Form {
    pub fn zero(degree: usize) -> Self {
        Form { degree, terms: BTreeMap::new() }
    }

    pub fn basis(key: Vec<usize>) -> Self {
        let degree = key.len() - 1;
        let mut terms = BTreeMap::new();
        terms.insert(key, Scalar::one());
        Form { degree, terms }
    }

    /// `a ∈ A = Ω⁰`.
    pub fn from_algebra(x: &SparseVec) -> Self {
        Form { degree: 0, terms: x.iter().map(|(&i, c)| (vec![i], c.clone())).collect() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &Form, c: &Scalar) {
        debug_assert_eq!(self.degree, other.degree);
        for (k, x) in &other.terms {
            accumulate(&mut self.terms, k.clone(), &(x * c));
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        let mut out = Form::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn to_vector(&self, alg: &FiniteAlgebra) -> SparseVec {
        self.terms.iter().map(|(k, c)| (alg.form_index(k), c.clone())).collect()
    }

    pub fn from_vector(alg: &FiniteAlgebra, degree: usize, v: &SparseVec) -> Form {
        let basis = alg.form_basis(degree);
        Form { degree, terms: v.iter().map(|(&i, c)| (basis[i].clone(), c.clone())).collect() }
    }

    pub fn describe(&self, alg: &FiniteAlgebra) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}·{}", alg.form_label(k))).collect();
        parts.join(" + ")
    }
}

/// Universal derivation `d : A → Ω¹`, `x ↦ 1 ⊗ x̄`.
pub fn d(alg: &FiniteAlgebra, x: &SparseVec) -> Form {
    append_d(alg, &Form::from_algebra(&basis_vec(alg.unit)), x)
}

/// `ω ↦ ω·dx`.
pub fn append_d(alg: &FiniteAlgebra, w: &Form, x: &SparseVec) -> Form {
    let mut out = Form::zero(w.degree + 1);
    for (k, c) in &w.terms {
        for (&j, xj) in x {
            if j != alg.unit {
                let mut key = k.clone();
                key.push(j);
                accumulate(&mut out.terms, key, &(c * xj));
            }
        }
    }
    out
}

/// `x·(a_0 da_1 ⋯ da_n) = (x a_0) da_1 ⋯ da_n`.
pub fn mul_left(alg: &FiniteAlgebra, x: &SparseVec, w: &Form) -> Form {
    let mut out = Form::zero(w.degree);
    for (k, c) in &w.terms {
        for (i, a) in alg.mul(x, &basis_vec(k[0])) {
            let mut key = k.clone();
            key[0] = i;
            accumulate(&mut out.terms, key, &(c * &a));
        }
    }
    out
}

/// Right multiplication via `(ω' da)·x = ω'·d(ax) − (ω'a)·dx`.
pub fn mul_right(alg: &FiniteAlgebra, w: &Form, x: &SparseVec) -> Form {
    let mut out = Form::zero(w.degree);
    for (k, c) in &w.terms {
        if w.degree == 0 {
            for (i, a) in alg.mul(&basis_vec(k[0]), x) {
                accumulate(&mut out.terms, vec![i], &(c * &a));
            }
            continue;
        }
        let prefix = Form::basis(k[..k.len() - 1].to_vec());
        let last = basis_vec(k[k.len() - 1]);
        let first = append_d(alg, &prefix, &alg.mul(&last, x));
        let second = append_d(alg, &mul_right(alg, &prefix, &last), x);
        out.add_scaled(&first, c);
        out.add_scaled(&second, &-c);
    }
    out
}

/// Product `ω·η` of forms.
pub fn mul_forms(alg: &FiniteAlgebra, w: &Form, eta: &Form) -> Form {
    let mut out = Form::zero(w.degree + eta.degree);
    for (k, c) in &eta.terms {
        let mut part = mul_right(alg, w, &basis_vec(k[0]));
        for &a in &k[1..] {
            part = append_d(alg, &part, &basis_vec(a));
        }
        out.add_scaled(&part, c);
    }
    out
}

/// Hochschild `b(ω da) = (−1)^{|ω|} (ω a − a ω)`.
pub fn forms_b(alg: &FiniteAlgebra, w: &Form) -> Result<Form> {
    if w.degree == 0 {
        return Err(Error::Degree("b on a 0-form".into()));
    }
    let mut out = Form::zero(w.degree - 1);
    let sign = if (w.degree - 1) % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
    for (k, c) in &w.terms {
        let prefix = Form::basis(k[..k.len() - 1].to_vec());
        let a = basis_vec(k[k.len() - 1]);
        let comm = mul_right(alg, &prefix, &a).sub(&mul_left(alg, &a, &prefix));
        out.add_scaled(&comm, &(c * &sign));
    }
    Ok(out)
}

/// Connes `B(a_0 da_1 ⋯ da_n) = Σ_i (−1)^{ni} da_i ⋯ da_n da_0 ⋯ da_{i−1}`.
pub fn forms_big_b(alg: &FiniteAlgebra, w: &Form) -> Form {
    let n = w.degree;
    let mut out = Form::zero(n + 1);
    for (k, c) in &w.terms {
        if k[0] == alg.unit {
            continue;
        }
        for i in 0..=n {
            let mut key = vec![alg.unit];
            key.extend_from_slice(&k[i..]);
            key.extend_from_slice(&k[..i]);
            let v = if (n * i) % 2 == 0 { c.clone() } else { -c };
            accumulate(&mut out.terms, key, &v);
        }
    }
    out
}

/// Matrix of a linear operator `Ω^from → Ω^to` on the standard bases.
pub fn operator_matrix<F>(alg: &FiniteAlgebra, from: usize, to: usize, op: F) -> SparseMatrix
where
    F: Fn(&Form) -> Form + Sync + Send,
{
    let basis = alg.form_basis(from);
    let cols = par::map(&basis, |k| op(&Form::basis(k.clone())).to_vector(alg));
    SparseMatrix::from_columns(alg.omega_dim(to), &cols)
}

fn check_cap(alg: &FiniteAlgebra, n: usize, cap: usize) -> Result<()> {
    let size = alg.dim().checked_mul((alg.dim() - 1).checked_pow(n as u32 + 1).unwrap_or(usize::MAX));
    match size {
        Some(s) if s <= cap => Ok(()),
        _ => Err(Error::CapExceeded { what: format!("Ω^{} of {}", n + 1, alg.name), cap }),
    }
}

/// Row space spanned by the commutators `[a, ω]`, `a` and `ω` basis elements.
pub fn commutator_space(alg: &FiniteAlgebra, n: usize) -> RowSpace {
    let basis = alg.form_basis(n);
    let pairs: Vec<(usize, &Vec<usize>)> = (0..alg.dim()).flat_map(|a| basis.iter().map(move |k| (a, k))).collect();
    let rows = par::map(&pairs, |&(a, k)| {
        let w = Form::basis(k.clone());
        let a = basis_vec(a);
        mul_left(alg, &a, &w).sub(&mul_right(alg, &w, &a)).to_vector(alg)
    });
    RowSpace::from_rows(alg.omega_dim(n), &rows)
}

/// `dim Ω^n / [A, Ω^n]`.
pub fn commutator_quotient_dim(alg: &FiniteAlgebra, n: usize) -> usize {
    let space = commutator_space(alg, n);
    space.cols() - space.rank()
}

/// Homology `(h_even, h_odd)` of `X^(n)`: `Ω^0 ⊕ ⋯ ⊕ Ω^{n−1} ⊕ Ω^n/[−,−]`
/// with differential `b + B`, the top layer reached through the quotient.
pub fn x_complex_homology(alg: &FiniteAlgebra, n: usize, cap: usize) -> Result<(usize, usize)> {
    check_cap(alg, n, cap)?;
    let quotient = commutator_space(alg, n);
    let free = quotient.free_cols();
    let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();

    // Blocks: Ω^0 … Ω^{n−1} then the quotient; block k has parity k mod 2.
    let sizes: Vec<usize> = (0..n).map(|k| alg.omega_dim(k)).chain([free.len()]).collect();
    let mut offset = [0usize; 2];
    let mut start = Vec::new();
    for (k, &s) in sizes.iter().enumerate() {
        start.push(offset[k % 2]);
        offset[k % 2] += s;
    }
    let (dim_even, dim_odd) = (offset[0], offset[1]);
    let mut maps = [SparseMatrix::zero(dim_odd, dim_even), SparseMatrix::zero(dim_even, dim_odd)];

    let place = |from_k: usize, col: usize, to_k: usize, v: &SparseVec, maps: &mut [SparseMatrix; 2]| {
        let m = &mut maps[from_k % 2];
        for (&i, c) in v {
            m.add_to(start[to_k] + i, start[from_k] + col, c);
        }
    };
    for k in 0..n {
        for (col, key) in alg.form_basis(k).into_iter().enumerate() {
            let w = Form::basis(key);
            if k >= 1 {
                place(k, col, k - 1, &forms_b(alg, &w)?.to_vector(alg), &mut maps);
            }
            let bw = forms_big_b(alg, &w).to_vector(alg);
            if k + 1 < n {
                place(k, col, k + 1, &bw, &mut maps);
            } else {
                let reduced: SparseVec = quotient.reduce(&bw).into_iter().map(|(i, c)| (free_pos[&i], c)).collect();
                place(k, col, n, &reduced, &mut maps);
            }
        }
    }
    if n >= 1 {
        for (col, &f) in free.iter().enumerate() {
            let w = Form::from_vector(alg, n, &basis_vec(f));
            place(n, col, n - 1, &forms_b(alg, &w)?.to_vector(alg), &mut maps);
        }
    }
    let [d_even, d_odd] = maps;
    let h_even = homology_dim(&d_odd, &d_even)?;
    let h_odd = homology_dim(&d_even, &d_odd)?;
    Ok((h_even, h_odd))
}

/// A candidate connection: `∇ : Ω^n → Ω^{n+1}` and its claimed extension
/// `Ω^{n+1} → Ω^{n+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub n: usize,
    pub nabla: SparseMatrix,
    pub extension: SparseMatrix,
}

impl Connection {
    /// Uses the canonical extension `∇(ω dx) = ∇(ω) dx`.
    pub fn new(alg: &FiniteAlgebra, n: usize, nabla: SparseMatrix) -> Result<Self> {
        let extension = canonical_extension(alg, n, &nabla)?;
        Ok(Connection { n, nabla, extension })
    }

    pub fn zero(alg: &FiniteAlgebra, n: usize) -> Self {
        Connection {
            n,
            nabla: SparseMatrix::zero(alg.omega_dim(n + 1), alg.omega_dim(n)),
            extension: SparseMatrix::zero(alg.omega_dim(n + 2), alg.omega_dim(n + 1)),
        }
    }
}

fn check_shape(alg: &FiniteAlgebra, n: usize, m: &SparseMatrix, what: &str) -> Result<()> {
    if m.cols() != alg.omega_dim(n) || m.rows() != alg.omega_dim(n + 1) {
        return Err(Error::Dimension(format!(
            "{what} is {}×{}, expected {}×{}",
            m.rows(),
            m.cols(),
            alg.omega_dim(n + 1),
            alg.omega_dim(n)
        )));
    }
    Ok(())
}

fn apply(alg: &FiniteAlgebra, m: &SparseMatrix, w: &Form) -> Form {
    Form::from_vector(alg, w.degree + 1, &m.mul_vec(&w.to_vector(alg)))
}

/// Extension of `∇` to `Ω^{n+1}` by `∇(ω dx) = ∇(ω) dx`.
pub fn canonical_extension(alg: &FiniteAlgebra, n: usize, nabla: &SparseMatrix) -> Result<SparseMatrix> {
    check_shape(alg, n, nabla, "nabla")?;
    Ok(operator_matrix(alg, n + 1, n + 2, |w| {
        let mut out = Form::zero(n + 2);
        for (k, c) in w.terms() {
            let head = Form::basis(k[..=n].to_vec());
            let image = append_d(alg, &apply(alg, nabla, &head), &basis_vec(k[n + 1]));
            out.add_scaled(&image, c);
        }
        out
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub n: usize,
    pub axioms: Vec<AxiomResult>,
}

impl ConnectionReport {
    pub fn all_passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.axioms.iter().filter(|a| !a.passed).map(|a| a.axiom).collect()
    }
}

pub const AXIOM_LINEAR: &str = "left-linear";
pub const AXIOM_LEIBNIZ: &str = "leibniz";
pub const AXIOM_EXTENSION: &str = "extension";
pub const AXIOM_HOMOTOPY: &str = "homotopy";

fn sign(n: usize) -> Scalar {
    if n % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

/// Checks a candidate `n`-connection:
/// (i) `∇(aω) = a∇(ω)`;
/// (ii) `∇(ωa) = ∇(ω)a + (−1)^n ω da`;
/// (iii) the supplied extension equals `ω dx ↦ ∇(ω) dx`;
/// (iv) `[∇, b] = id` on `Ω^n` (where `∇` vanishes below degree `n`) and on
/// `Ω^{n+1}`.
pub fn connection_check(alg: &FiniteAlgebra, conn: &Connection) -> Result<ConnectionReport> {
    let n = conn.n;
    if n == 0 {
        return Err(Error::Precondition("connections are checked in degree n ≥ 1".into()));
    }
    check_shape(alg, n, &conn.nabla, "nabla")?;
    check_shape(alg, n + 1, &conn.extension, "extension")?;
    let basis = alg.form_basis(n);
    let nabla = |w: &Form| apply(alg, &conn.nabla, w);
    let mut linear = None;
    let mut leibniz = None;
    'outer: for a in 0..alg.dim() {
        let av = basis_vec(a);
        for k in &basis {
            let w = Form::basis(k.clone());
            if linear.is_none() && nabla(&mul_left(alg, &av, &w)) != mul_left(alg, &av, &nabla(&w)) {
                linear = Some(format!("a = {}, ω = {}", alg.labels[a], alg.form_label(k)));
            }
            if leibniz.is_none() {
                let lhs = nabla(&mul_right(alg, &w, &av));
                let rhs = mul_right(alg, &nabla(&w), &av).add(&append_d(alg, &w, &av).scale(&sign(n)));
                if lhs != rhs {
                    leibniz = Some(format!("ω = {}, a = {}", alg.form_label(k), alg.labels[a]));
                }
            }
            if linear.is_some() && leibniz.is_some() {
                break 'outer;
            }
        }
    }

    let canonical = canonical_extension(alg, n, &conn.nabla)?;
    let extension = alg
        .form_basis(n + 1)
        .into_iter()
        .find(|k| {
            let w = Form::basis(k.clone());
            apply(alg, &canonical, &w) != apply(alg, &conn.extension, &w)
        })
        .map(|k| format!("ω dx = {}", alg.form_label(&k)));

    let mut homotopy = None;
    for k in &basis {
        let w = Form::basis(k.clone());
        if forms_b(alg, &nabla(&w))? != w {
            homotopy = Some(format!("m = 0 at {}", alg.form_label(k)));
            break;
        }
    }
    if homotopy.is_none() {
        for k in alg.form_basis(n + 1) {
            let w = Form::basis(k.clone());
            let lhs = forms_b(alg, &apply(alg, &conn.extension, &w))?.add(&nabla(&forms_b(alg, &w)?));
            if lhs != w {
                homotopy = Some(format!("m = 1 at {}", alg.form_label(&k)));
                break;
            }
        }
    }
    let result = |axiom, witness: Option<String>| AxiomResult { axiom, passed: witness.is_none(), witness };
    Ok(ConnectionReport {
        n,
        axioms: vec![
            result(AXIOM_LINEAR, linear),
            result(AXIOM_LEIBNIZ, leibniz),
            result(AXIOM_EXTENSION, extension),
            result(AXIOM_HOMOTOPY, homotopy),
        ],
    })
}

/// Which linear constraints to impose when solving for `∇`.
#[derive(Clone, Copy, Debug)]
pub struct ConnectionConstraints {
    pub linear: bool,
    pub leibniz: bool,
    pub homotopy_base: bool,
}

impl ConnectionConstraints {
    pub const ALL: Self = ConnectionConstraints { linear: true, leibniz: true, homotopy_base: true };
}

/// Solves the linear system for the entries of `∇ : Ω^n → Ω^{n+1}`.
pub fn solve_connection(alg: &FiniteAlgebra, n: usize, constraints: ConnectionConstraints) -> Option<SparseMatrix> {
    let basis = alg.form_basis(n);
    solve_operator(alg, n, |nabla| {
        let apply_n = |w: &Form| apply(alg, nabla, w);
        let mut out: Vec<SparseVec> = Vec::new();
        for a in 0..alg.dim() {
            let av = basis_vec(a);
            for k in &basis {
                let w = Form::basis(k.clone());
                if constraints.linear {
                    out.push(apply_n(&mul_left(alg, &av, &w)).sub(&mul_left(alg, &av, &apply_n(&w))).to_vector(alg));
                }
                if constraints.leibniz {
                    let lhs = apply_n(&mul_right(alg, &w, &av));
                    let rhs = mul_right(alg, &apply_n(&w), &av).add(&append_d(alg, &w, &av).scale(&sign(n)));
                    out.push(lhs.sub(&rhs).to_vector(alg));
                }
            }
        }
        if constraints.homotopy_base {
            for k in &basis {
                let w = Form::basis(k.clone());
                out.push(forms_b(alg, &apply_n(&w)).expect("degree ≥ 1").sub(&w).to_vector(alg));
            }
        }
        out
    })
}

/// Solves `residual(∇) = 0` for an operator `∇ : Ω^n → Ω^{n+1}`, where
/// `residual` is affine in `∇` and returns blocks of equations.
pub fn solve_operator<F>(alg: &FiniteAlgebra, n: usize, residual: F) -> Option<SparseMatrix>
where
    F: Fn(&SparseMatrix) -> Vec<SparseVec> + Sync + Send,
{
    let (rows_out, cols_in) = (alg.omega_dim(n + 1), alg.omega_dim(n));
    // Each block lives in Ω^n or Ω^{n+1}; pad to the larger of the two.
    let flatten = |blocks: Vec<SparseVec>| -> (SparseVec, usize) {
        let mut out = SparseVec::new();
        let mut offset = 0;
        for block in blocks {
            let width = alg.omega_dim(n).max(alg.omega_dim(n + 1));
            for (i, c) in block {
                out.insert(offset + i, c);
            }
            offset += width;
        }
        (out, offset)
    };
    let (base, eq_count) = flatten(residual(&SparseMatrix::zero(rows_out, cols_in)));
    let unknowns: Vec<(usize, usize)> = (0..rows_out).flat_map(|i| (0..cols_in).map(move |j| (i, j))).collect();
    let columns = par::map(&unknowns, |&(i, j)| {
        let mut m = SparseMatrix::zero(rows_out, cols_in);
        m.set(i, j, Scalar::one());
        let (mut v, _) = flatten(residual(&m));
        for (k, c) in &base {
            accumulate(&mut v, *k, &-c);
        }
        v
    });
    let system = SparseMatrix::from_columns(eq_count, &columns);
    let rhs: SparseVec = base.into_iter().map(|(k, c)| (k, -c)).collect();
    let x = solve_affine(&system, &rhs)?;
    let mut nabla = SparseMatrix::zero(rows_out, cols_in);
    for (idx, c) in x {
        let (i, j) = unknowns[idx];
        nabla.set(i, j, c);
    }
    Some(nabla)
}
