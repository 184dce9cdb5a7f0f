//! Towers of finite groups `G_1 ← G_2 ← ⋯` with surjections given on
//! generators, and the induced maps on commutator quotients of `F[G_k]`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{basis_vec, commutator_space, x_complex_homology, FiniteAlgebra};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::linalg::{accumulate, RowSpace, SparseVec};
use crate::par;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct LevelSpec {
    pub group: String,
    /// Generators of this level, as element indices.
    #[serde(default)]
    pub generators: Vec<usize>,
    /// Their images in the previous level.
    #[serde(default)]
    pub images: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TowerSpec {
    pub levels: Vec<LevelSpec>,
}

impl TowerSpec {
    /// Accepts `{"levels": [...]}` or a bare list of levels.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.is_array() {
            return Ok(TowerSpec { levels: serde_json::from_value(value)? });
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The constant tower `G ← G ← ⋯` with identity maps.
    pub fn constant(group: &str, levels: usize) -> Result<Self> {
        let g = finite(group)?;
        let gens = g.generators().to_vec();
        let levels = (0..levels)
            .map(|k| LevelSpec {
                group: group.to_string(),
                generators: if k == 0 { vec![] } else { gens.clone() },
                images: if k == 0 { vec![] } else { gens.clone() },
            })
            .collect();
        Ok(TowerSpec { levels })
    }
}

fn finite(spec: &str) -> Result<FiniteGroup> {
    GroupDescriptor::parse(spec)?
        .as_finite()
        .cloned()
        .ok_or_else(|| Error::GroupSpec(format!("{spec} is not a finite group")))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub group: String,
    pub order: usize,
    pub quotient_dim: usize,
    pub x_homology: (usize, usize),
    /// `None` on the first level.
    pub map_is_homomorphism: Option<bool>,
    pub map_is_surjective: Option<bool>,
    pub quotient_map_rank: Option<usize>,
    pub quotient_map_surjective: Option<bool>,
}

/// Extends `generators ↦ images` to a map `G → H` by breadth-first search
/// over right multiplication; errors if the generators miss some element or
/// two words for one element get different images.
pub fn extend_on_generators(g: &FiniteGroup, h: &FiniteGroup, generators: &[usize], images: &[usize]) -> Result<Vec<usize>> {
    if generators.len() != images.len() {
        return Err(Error::Dimension("generators and images differ in length".into()));
    }
    if generators.iter().any(|&x| x >= g.order()) || images.iter().any(|&y| y >= h.order()) {
        return Err(Error::Structure("generator or image index out of range".into()));
    }
    let mut phi = vec![None; g.order()];
    phi[g.identity()] = Some(h.identity());
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = phi[x].expect("visited");
        for (&s, &t) in generators.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            match phi[y] {
                None => {
                    phi[y] = Some(fy);
                    queue.push_back(y);
                }
                Some(prev) if prev != fy => {
                    return Err(Error::Structure(format!("images do not define a homomorphism (element {y})")));
                }
                Some(_) => {}
            }
        }
    }
    phi.into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Structure("generators do not generate the group".into()))
}

pub fn is_homomorphism(g: &FiniteGroup, h: &FiniteGroup, phi: &[usize]) -> bool {
    (0..g.order()).all(|x| (0..g.order()).all(|y| phi[g.mul(x, y)] == h.mul(phi[x], phi[y])))
}

/// Rank of the induced map `F[G]/[,] → F[H]/[,]`, after checking that it
/// sends every commutator `ab − ba` to a commutator.
pub fn quotient_map_rank(g: &FiniteGroup, h: &FiniteAlgebra, phi: &[usize]) -> Result<usize> {
    let source = FiniteAlgebra::group_algebra("source", g)?;
    let source = commutator_space(&source, 0);
    let target = commutator_space(h, 0);
    let push = |v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in v {
            accumulate(&mut out, phi[i], c);
        }
        out
    };
    for a in 0..g.order() {
        for b in 0..g.order() {
            let mut comm = basis_vec(g.mul(a, b));
            accumulate(&mut comm, g.mul(b, a), &Scalar::from_int(-1));
            if !target.reduce(&push(&comm)).is_empty() {
                return Err(Error::Structure("the map does not preserve commutators".into()));
            }
        }
    }
    let images: Vec<SparseVec> = source.free_cols().into_iter().map(|f| target.reduce(&push(&basis_vec(f)))).collect();
    Ok(RowSpace::from_rows(h.dim(), &images).rank())
}

/// Processes the first `levels` levels: quotient dimensions, `X^(n)`
/// homology, and the transition maps.
pub fn iwasawa_tower(spec: &TowerSpec, levels: usize, n: usize, cap: usize) -> Result<Vec<LevelReport>> {
    if spec.levels.is_empty() {
        return Err(Error::Precondition("a tower needs at least one level".into()));
    }
    let levels: Vec<&LevelSpec> = spec.levels.iter().take(levels).collect();
    let built = par::try_map(&levels, |level| -> Result<(FiniteGroup, FiniteAlgebra, (usize, usize))> {
        let g = finite(&level.group)?;
        let alg = FiniteAlgebra::group_algebra(&level.group, &g)?;
        let x = x_complex_homology(&alg, n, cap)?;
        Ok((g, alg, x))
    })?;
    let mut out = Vec::new();
    for (k, (level, (g, _, x_homology))) in levels.iter().zip(&built).enumerate() {
        let mut report = LevelReport {
            level: k + 1,
            group: level.group.clone(),
            order: g.order(),
            quotient_dim: g.conjugacy_class_count(),
            x_homology: *x_homology,
            map_is_homomorphism: None,
            map_is_surjective: None,
            quotient_map_rank: None,
            quotient_map_surjective: None,
        };
        if k > 0 {
            let (pg, palg, _) = &built[k - 1];
            let phi = match extend_on_generators(g, pg, &level.generators, &level.images) {
                Ok(phi) if is_homomorphism(g, pg, &phi) => Some(phi),
                Ok(_) | Err(Error::Structure(_)) => None,
                Err(e) => return Err(e),
            };
            report.map_is_homomorphism = Some(phi.is_some());
            if let Some(phi) = phi {
                let mut hit = vec![false; pg.order()];
                phi.iter().for_each(|&y| hit[y] = true);
                report.map_is_surjective = Some(hit.iter().all(|&b| b));
                let rank = quotient_map_rank(g, palg, &phi)?;
                report.quotient_map_rank = Some(rank);
                report.quotient_map_surjective = Some(rank == pg.conjugacy_class_count());
            }
        }
        out.push(report);
    }
    Ok(out)
}
