//! Gröbner bases of submodules of free modules, normal forms, syzygies,
//! finite free resolutions and their pruning, and Krull dimension of
//! quotient rings.
//!
//! Submodules of `R^n` are ordered position-over-term: component 0 is the
//! most significant. Syzygies are computed by eliminating the first block
//! of the stacked module `[f; I]`.

mod buchberger;
mod dimension;
mod resolution;
mod sparse;

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{FreeModuleSpec, PolyMatrix};
use crate::poly::{Monomial, Polynomial, Ring};

pub use dimension::quotient_dimension;
pub use resolution::{prune, prune_with_witness, resolve, PruneOutcome, ResolutionData};

pub(crate) use buchberger::{groebner, minimal_homogeneous_generators};
pub(crate) use sparse::{ModCtx, SVec};

/// An element of a free module `R^n`, stored by components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    ring: Ring,
    components: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn new(ring: &Ring, components: Vec<Polynomial>) -> Result<Self> {
        for c in &components {
            ring.check_same(c.ring())?;
        }
        Ok(Self {
            ring: ring.clone(),
            components,
        })
    }

    pub fn zero(ring: &Ring, rank: usize) -> Self {
        Self {
            ring: ring.clone(),
            components: vec![ring.zero(); rank],
        }
    }

    /// The basis vector `e_index` of `R^rank`.
    pub fn basis(ring: &Ring, rank: usize, index: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[index] = ring.one();
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }
}

impl std::fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleOrder {
    PositionOverTerm,
}

/// A reduced Gröbner basis of a submodule of a free module.
#[derive(Clone, Debug)]
pub struct GroebnerBasisData {
    ring: Ring,
    ambient: FreeModuleSpec,
    generators: Vec<ModuleElement>,
    order: ModuleOrder,
    ctx: ModCtx,
    internal: Vec<SVec>,
    index: sparse::LeadIndex,
}

impl GroebnerBasisData {
    fn from_internal(
        ring: &Ring,
        ambient: FreeModuleSpec,
        ctx: ModCtx,
        internal: Vec<SVec>,
    ) -> Self {
        let generators = internal
            .iter()
            .map(|v| ModuleElement {
                ring: ring.clone(),
                components: ctx.to_components(v),
            })
            .collect();
        let mut index = sparse::LeadIndex::new(ambient.rank());
        for (k, g) in internal.iter().enumerate() {
            index.insert(g.terms[0].comp, k);
        }
        Self {
            ring: ring.clone(),
            ambient,
            generators,
            order: ModuleOrder::PositionOverTerm,
            ctx,
            internal,
            index,
        }
    }

    pub fn ambient(&self) -> &FreeModuleSpec {
        &self.ambient
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn order(&self) -> ModuleOrder {
        self.order
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero_module(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether the submodule is all of the ambient free module.
    pub fn is_everything(&self) -> bool {
        (0..self.ambient.rank()).all(|c| {
            self.internal
                .iter()
                .any(|g| g.terms[0].comp as usize == c && g.terms[0].mono.is_one())
        })
    }

    pub fn lead_monomials(&self) -> Vec<(usize, Monomial)> {
        self.internal
            .iter()
            .map(|g| (g.terms[0].comp as usize, g.terms[0].mono.clone()))
            .collect()
    }

    pub fn contains(&self, v: &ModuleElement) -> Result<bool> {
        Ok(normal_form(v, self)?.is_zero())
    }

    pub(crate) fn reduce_components(&self, comps: &[Polynomial]) -> Vec<Polynomial> {
        let v = self.ctx.from_components(comps);
        let r = sparse::reduce(&self.ctx, &v, &self.internal, &self.index);
        self.ctx.to_components(&r)
    }

    /// Whether every column of `m` lies in the submodule.
    pub fn contains_columns(&self, m: &PolyMatrix) -> Result<bool> {
        if m.rows() != self.ambient.rank() {
            return Err(Error::Dimension(
                "column length does not match ambient rank".into(),
            ));
        }
        Ok(m.columns()
            .iter()
            .all(|c| self.reduce_components(c).iter().all(Polynomial::is_zero)))
    }
}

/// Remainder of `v` modulo the basis; no term of the result is divisible by
/// a lead term in the same component.
pub fn normal_form(v: &ModuleElement, basis: &GroebnerBasisData) -> Result<ModuleElement> {
    if v.rank() != basis.ambient.rank() {
        return Err(Error::Dimension(format!(
            "element of rank {} against ambient rank {}",
            v.rank(),
            basis.ambient.rank()
        )));
    }
    basis.ring.check_same(&v.ring)?;
    Ok(ModuleElement {
        ring: v.ring.clone(),
        components: basis.reduce_components(&v.components),
    })
}

fn ambient_ctx(ring: &Ring, ambient: &FreeModuleSpec) -> ModCtx {
    ModCtx::new(ring, ambient.rank(), ambient.degrees().map(|d| d.to_vec()))
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger(
    ring: &Ring,
    gens: &[ModuleElement],
    ambient: &FreeModuleSpec,
) -> Result<GroebnerBasisData> {
    for g in gens {
        ring.check_same(&g.ring)?;
        if g.rank() != ambient.rank() {
            return Err(Error::Dimension(
                "generator rank differs from ambient".into(),
            ));
        }
    }
    let ctx = ambient_ctx(ring, ambient);
    let internal: Vec<SVec> = gens
        .iter()
        .map(|g| ctx.from_components(&g.components))
        .collect();
    let gb = groebner(&ctx, &internal);
    Ok(GroebnerBasisData::from_internal(
        ring,
        ambient.clone(),
        ctx,
        gb,
    ))
}

/// Gröbner basis of the column span of `m` inside its target.
pub fn column_basis(m: &PolyMatrix) -> GroebnerBasisData {
    let ctx = ambient_ctx(m.ring(), m.target());
    let internal: Vec<SVec> = m.columns().iter().map(|c| ctx.from_components(c)).collect();
    let gb = groebner(&ctx, &internal);
    GroebnerBasisData::from_internal(m.ring(), m.target().clone(), ctx, gb)
}

/// Generators of `Ker(f)` as the columns of a matrix `S` with `f S = 0`.
///
/// For graded `f` the columns form a minimal homogeneous generating set;
/// otherwise they are the syzygy part of a reduced Gröbner basis.
pub fn syzygies(f: &PolyMatrix) -> PolyMatrix {
    let ring = f.ring();
    let (r, c) = (f.rows(), f.cols());
    let graded = f.is_graded();
    let shifts = if graded {
        let mut s = f.target().degrees().unwrap().to_vec();
        s.extend_from_slice(f.source().degrees().unwrap());
        Some(s)
    } else {
        None
    };
    let ctx = ModCtx::new(ring, r + c, shifts);
    let gens: Vec<SVec> = (0..c)
        .map(|j| {
            let mut comps = f.column(j);
            comps.extend((0..c).map(|k| if k == j { ring.one() } else { ring.zero() }));
            ctx.from_components(&comps)
        })
        .collect();
    let gb = groebner(&ctx, &gens);
    let kernel: Vec<SVec> = gb
        .into_iter()
        .filter(|v| v.terms[0].comp as usize >= r)
        .collect();
    let kernel: Vec<SVec> = if graded {
        minimal_homogeneous_generators(&ctx, &kernel)
            .into_iter()
            .map(|k| kernel[k].clone())
            .collect()
    } else {
        kernel
    };
    let columns: Vec<Vec<Polynomial>> = kernel
        .iter()
        .map(|v| ctx.to_components(v)[r..].to_vec())
        .collect();
    let source = if graded {
        FreeModuleSpec::graded(kernel.iter().map(|v| ctx.sugar(v)).collect())
    } else {
        FreeModuleSpec::new(columns.len())
    };
    PolyMatrix::from_columns(ring, f.source().clone(), source, &columns)
        .expect("syzygy columns are homogeneous of their recorded degree")
}

/// An ideal given by generators; zero generators are dropped and repeats
/// removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealData {
    ring: Ring,
    generators: Vec<Polynomial>,
}

impl IdealData {
    pub fn new(ring: &Ring, generators: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut seen = HashSet::new();
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero() && seen.insert(g.clone()))
            .collect();
        Self {
            ring: ring.clone(),
            generators,
        }
    }

    pub fn unit(ring: &Ring) -> Self {
        Self::new(ring, [ring.one()])
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::new(ring, [])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Reduced Gröbner basis. Generators are first echelonized as vectors
    /// over `F_p`, which leaves the ideal unchanged and keeps large minor
    /// sets tractable.
    pub fn groebner_basis(&self) -> GroebnerBasisData {
        let ambient = FreeModuleSpec::new(1);
        let ctx = ModCtx::new(&self.ring, 1, None);
        let gens: Vec<SVec> = linear_echelon(&self.ring, &self.generators)
            .iter()
            .map(|g| ctx.from_components(std::slice::from_ref(g)))
            .collect();
        let gb = groebner(&ctx, &gens);
        GroebnerBasisData::from_internal(&self.ring, ambient, ctx, gb)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        let gb = self.groebner_basis();
        gb.reduce_components(std::slice::from_ref(f))[0].is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner_basis().is_everything()
    }
}

impl std::fmt::Display for IdealData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Row-echelon form of polynomials viewed as coefficient vectors: the
/// output spans the same `F_p`-space and has pairwise distinct leading
/// monomials.
pub(crate) fn linear_echelon(ring: &Ring, polys: &[Polynomial]) -> Vec<Polynomial> {
    let mut rows: Vec<Polynomial> = Vec::new();
    let mut by_lead: HashMap<Monomial, usize> = HashMap::new();
    for p in polys {
        let mut v = p.clone();
        while let Some(lm) = v.leading_monomial().cloned() {
            match by_lead.get(&lm) {
                Some(&k) => {
                    let c = ring.field().neg(v.leading_coefficient());
                    v = v.add_scaled(&rows[k], c);
                }
                None => {
                    by_lead.insert(lm, rows.len());
                    rows.push(v.monic());
                    break;
                }
            }
        }
    }
    rows
}
