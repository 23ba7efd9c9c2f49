//! Cochain complexes of poset modules: the standard cofree resolution, hom
//! complexes over spreads, Möbius cohomology and homology, and the Euler
//! characteristic checks tying them back to Möbius inversion.
//!
//! Conventions, fixed once for the whole crate:
//! - the incidence coefficient of a codimension-1 face is `(-1)^i` where `i`
//!   is the index of the deleted vertex; the complex law `delta o delta = 0`
//!   is verified on every assembled complex rather than assumed;
//! - coordinates within a degree follow the canonical chain enumeration
//!   (lexicographic by element indices), so matrices are reproducible;
//! - complexes are truncated at the dimension of the longest chain, beyond
//!   which every cochain group is zero;
//! - Euler characteristics sum over all degrees `d >= 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::{FieldSpec, LinalgError, Matrix};
use crate::module::{ModuleError, ModuleMap, PosetModule};
use crate::poset::{facets_with_max, Chain, ElemId, ElemSet};
use crate::report::CheckReport;

/// A bounded cochain complex with chain-labelled coordinates.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    field: FieldSpec,
    dims: Vec<usize>,
    deltas: Vec<Matrix>,
    labels: Vec<Vec<Chain>>,
}

impl CochainComplex {
    /// Validates shapes and the complex law `delta^{d+1} o delta^d = 0`.
    pub fn new(
        field: FieldSpec,
        dims: Vec<usize>,
        deltas: Vec<Matrix>,
        labels: Vec<Vec<Chain>>,
    ) -> Result<CochainComplex, LinalgError> {
        assert_eq!(deltas.len() + 1, dims.len(), "one delta between degrees");
        assert_eq!(labels.len(), dims.len(), "labels per degree");
        for (d, delta) in deltas.iter().enumerate() {
            if delta.rows() != dims[d + 1] || delta.cols() != dims[d] {
                return Err(LinalgError::ShapeMismatch(format!(
                    "delta^{d} is {}x{}, expected {}x{}",
                    delta.rows(),
                    delta.cols(),
                    dims[d + 1],
                    dims[d]
                )));
            }
        }
        for w in deltas.windows(2) {
            if !w[1].compose(&w[0])?.is_zero() {
                return Err(LinalgError::NotAComplex);
            }
        }
        Ok(CochainComplex {
            field,
            dims,
            deltas,
            labels,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Per-degree dimensions of the cochain groups.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn deltas(&self) -> &[Matrix] {
        &self.deltas
    }

    pub fn labels(&self) -> &[Vec<Chain>] {
        &self.labels
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// Per-degree cohomology dimensions `dim ker / im`.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.deltas.iter().map(Matrix::rank).collect();
        (0..self.dims.len())
            .map(|d| {
                let kernel = if d < self.deltas.len() {
                    self.dims[d] - ranks[d]
                } else {
                    self.dims[d]
                };
                let image = if d == 0 { 0 } else { ranks[d - 1] };
                kernel - image
            })
            .collect()
    }

    pub fn cohomology(&self) -> CohomologyResult {
        CohomologyResult::from_betti(self.betti())
    }
}

/// Per-degree cohomology dimensions and their alternating sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyResult {
    pub betti: Vec<usize>,
    pub euler: BigInt,
}

impl CohomologyResult {
    pub fn from_betti(betti: Vec<usize>) -> CohomologyResult {
        let euler = alternating_sum(&betti);
        CohomologyResult { betti, euler }
    }
}

fn alternating_sum(values: &[usize]) -> BigInt {
    let mut acc = BigInt::zero();
    for (d, &v) in values.iter().enumerate() {
        if d % 2 == 0 {
            acc += BigInt::from(v);
        } else {
            acc -= BigInt::from(v);
        }
    }
    acc
}

/// The hom complex of the indicator module of a spread into `n`: degree `d`
/// has one block `N(max sigma)` per `d`-chain with minimum in `z`, and the
/// differential has block `[tau:sigma] N(max sigma <= max tau)` for each
/// codimension-1 face relation staying inside the spread.
pub fn hom_complex(z: ElemSet, n: &PosetModule) -> Result<CochainComplex, ModuleError> {
    let poset = n.poset();
    if !poset.is_spread(z) {
        let names: Vec<&str> = z.iter().map(|a| poset.name(a)).collect();
        return Err(ModuleError::NotASpread(format!("{{{}}}", names.join(","))));
    }
    let field = n.field();
    let top = poset.max_chain_dim();
    let labels: Vec<Vec<Chain>> = (0..=top).map(|d| poset.chains_with_min_in(z, d)).collect();
    let mut dims = Vec::with_capacity(top + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for chains in &labels {
        let mut offs = Vec::with_capacity(chains.len());
        let mut total = 0;
        for sigma in chains {
            offs.push(total);
            total += n.dim(sigma.max());
        }
        offsets.push(offs);
        dims.push(total);
    }
    let mut deltas = Vec::with_capacity(top);
    for d in 0..top {
        let position: BTreeMap<&[ElemId], usize> = labels[d]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.vertices(), i))
            .collect();
        let mut delta = Matrix::zero(field, dims[d + 1], dims[d]);
        for (t, tau) in labels[d + 1].iter().enumerate() {
            for (sigma, sign) in tau.facets() {
                if !z.contains(sigma.min()) {
                    continue;
                }
                let s = position[sigma.vertices()];
                let block = n.map_between(sigma.max(), tau.max())?;
                delta.add_scaled(
                    offsets[d + 1][t],
                    offsets[d][s],
                    &block,
                    &field.from_i64(sign),
                );
            }
        }
        deltas.push(delta);
    }
    Ok(CochainComplex::new(field, dims, deltas, labels)?)
}

/// Möbius cohomology of `n` at `a`: the cohomology of the hom complex of the
/// one-point spread `{a}`.
pub fn mobius_cohomology(a: ElemId, n: &PosetModule) -> CohomologyResult {
    hom_complex(ElemSet::singleton(a), n)
        .expect("a singleton is a spread")
        .cohomology()
}

/// Möbius homology of `n` at `a`: homology of the chain complex with one
/// block `N(min sigma)` per chain with maximum `a`; the dual of
/// [`mobius_cohomology`]. The result lists homology dimensions by degree.
pub fn mobius_homology(a: ElemId, n: &PosetModule) -> CohomologyResult {
    let poset = n.poset();
    let field = n.field();
    let top = poset.max_chain_dim();
    let chains: Vec<Vec<Chain>> = (0..=top).map(|d| poset.chains_with_max(a, d)).collect();
    let mut dims = Vec::with_capacity(top + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for level in &chains {
        let mut offs = Vec::with_capacity(level.len());
        let mut total = 0;
        for sigma in level {
            offs.push(total);
            total += n.dim(sigma.min());
        }
        offsets.push(offs);
        dims.push(total);
    }
    // boundary_d : C_d -> C_{d-1}
    let mut boundaries = Vec::with_capacity(top);
    for d in 1..=top {
        let position: BTreeMap<&[ElemId], usize> = chains[d - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.vertices(), i))
            .collect();
        let mut boundary = Matrix::zero(field, dims[d - 1], dims[d]);
        for (t, tau) in chains[d].iter().enumerate() {
            for (sigma, sign) in facets_with_max(tau, a) {
                let s = position[sigma.vertices()];
                let block = n
                    .map_between(tau.min(), sigma.min())
                    .expect("deleting a vertex can only raise the minimum");
                boundary.add_scaled(
                    offsets[d - 1][s],
                    offsets[d][t],
                    &block,
                    &field.from_i64(sign),
                );
            }
        }
        boundaries.push(boundary);
    }
    // read the chain complex backwards as a cochain complex
    let reversed_dims: Vec<usize> = dims.iter().rev().copied().collect();
    let reversed_deltas: Vec<Matrix> = boundaries.into_iter().rev().collect();
    let reversed_labels: Vec<Vec<Chain>> = chains.into_iter().rev().collect();
    let complex = CochainComplex::new(field, reversed_dims, reversed_deltas, reversed_labels)
        .expect("boundary of a boundary vanishes");
    let mut betti = complex.betti();
    betti.reverse();
    CohomologyResult::from_betti(betti)
}

/// The Euler characteristic of the hom complex of the spread `z` into `n`.
pub fn euler_characteristic(z: ElemSet, n: &PosetModule) -> Result<BigInt, ModuleError> {
    Ok(hom_complex(z, n)?.cohomology().euler)
}

/// Verifies, element by element, that the upper Möbius inversion of the
/// dimension function equals the Euler characteristic of the Möbius
/// cohomology at that element.
pub fn euler_check(n: &PosetModule) -> CheckReport {
    let poset = n.poset();
    let inverted = n.dimension_function().upper_inversion();
    let mut report = CheckReport::new();
    for a in poset.elements() {
        let chi = mobius_cohomology(a, n).euler;
        report.check(
            format!("inversion vs euler at {}", poset.name(a)),
            inverted.get(a).clone(),
            chi,
        );
    }
    report
}

/// The standard cofree resolution of a module: degree `d` is the product
/// over `d`-chains of the principal cofree module on `N(max sigma)` at
/// `min sigma`, with the coboundary assembled from signed structure maps and
/// the augmentation from `N(a <= max sigma)`.
pub struct Resolution {
    pub terms: Vec<PosetModule>,
    pub deltas: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
    pub chains: Vec<Vec<Chain>>,
}

pub fn standard_resolution(n: &PosetModule) -> Result<Resolution, ModuleError> {
    let poset = n.poset();
    let field = n.field();
    let top = poset.max_chain_dim();
    let chains: Vec<Vec<Chain>> = (0..=top)
        .map(|d| poset.chains_with_min_in(poset.all(), d))
        .collect();

    // block offsets of each chain at each element (present when x <= min)
    let mut offsets: Vec<Vec<BTreeMap<usize, usize>>> = Vec::with_capacity(top + 1);
    let mut term_dims: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for level in &chains {
        let mut per_elem_offs = Vec::with_capacity(poset.len());
        let mut per_elem_dims = Vec::with_capacity(poset.len());
        for x in poset.elements() {
            let mut offs = BTreeMap::new();
            let mut total = 0;
            for (i, sigma) in level.iter().enumerate() {
                if poset.leq(x, sigma.min()) {
                    offs.insert(i, total);
                    total += n.dim(sigma.max());
                }
            }
            per_elem_offs.push(offs);
            per_elem_dims.push(total);
        }
        offsets.push(per_elem_offs);
        term_dims.push(per_elem_dims);
    }

    let mut terms = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let mut cover_maps = BTreeMap::new();
        for &(x, y) in poset.covers() {
            let mut m = Matrix::zero(field, term_dims[d][y.index()], term_dims[d][x.index()]);
            for (&i, &roff) in &offsets[d][y.index()] {
                let coff = offsets[d][x.index()][&i];
                let size = n.dim(chains[d][i].max());
                m.paste(roff, coff, &Matrix::identity(field, size));
            }
            cover_maps.insert((x, y), m);
        }
        terms.push(PosetModule::from_parts_unchecked(
            Arc::clone(poset),
            field,
            term_dims[d].clone(),
            cover_maps,
        )?);
    }

    let mut deltas = Vec::with_capacity(top);
    for d in 0..top {
        let position: BTreeMap<&[ElemId], usize> = chains[d]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.vertices(), i))
            .collect();
        let components = poset
            .elements()
            .map(|x| {
                let mut m =
                    Matrix::zero(field, term_dims[d + 1][x.index()], term_dims[d][x.index()]);
                for (&t, &roff) in &offsets[d + 1][x.index()] {
                    let tau = &chains[d + 1][t];
                    for (sigma, sign) in tau.facets() {
                        // x <= min tau <= min sigma, so the source block exists
                        let s = position[sigma.vertices()];
                        let coff = offsets[d][x.index()][&s];
                        let block = n.map_between(sigma.max(), tau.max())?;
                        m.add_scaled(roff, coff, &block, &field.from_i64(sign));
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, ModuleError>>()?;
        deltas.push(ModuleMap { components });
    }

    let components = poset
        .elements()
        .map(|x| {
            let mut m = Matrix::zero(field, term_dims[0][x.index()], n.dim(x));
            for (&i, &roff) in &offsets[0][x.index()] {
                let b = chains[0][i].max();
                m.paste(roff, 0, &n.map_between(x, b)?);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    let augmentation = ModuleMap { components };

    Ok(Resolution {
        terms,
        deltas,
        augmentation,
        chains,
    })
}

/// Where a resolution fails to be exact: the element and the degree of the
/// first slot whose kernel and image disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessFailure {
    pub element: ElemId,
    pub degree: usize,
}

impl Resolution {
    /// Pointwise exactness of this resolution of `n`: at each element,
    /// `0 -> N(a) -> F^0(a) -> F^1(a) -> ...` must have injective
    /// augmentation, vanishing composites, and kernel equal to image at
    /// every slot.
    pub fn check_exact(&self, n: &PosetModule) -> Result<(), ExactnessFailure> {
        let poset = n.poset();
        for x in poset.elements() {
            // the maps at x, augmentation first
            let mut maps: Vec<&Matrix> = vec![self.augmentation.component(x)];
            for delta in &self.deltas {
                maps.push(delta.component(x));
            }
            if maps[0].rank() != n.dim(x) {
                return Err(ExactnessFailure {
                    element: x,
                    degree: 0,
                });
            }
            for s in 0..self.terms.len() {
                let incoming = maps[s];
                let outgoing = maps.get(s + 1);
                if let Some(out) = outgoing {
                    let composite = out.compose(incoming).expect("resolution shapes align");
                    if !composite.is_zero() {
                        return Err(ExactnessFailure {
                            element: x,
                            degree: s,
                        });
                    }
                }
                let kernel = match outgoing {
                    Some(out) => out.nullity(),
                    None => self.terms[s].dim(x),
                };
                if kernel != incoming.rank() {
                    return Err(ExactnessFailure {
                        element: x,
                        degree: s,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Builds the standard cofree resolution of `n` and verifies its pointwise
/// exactness.
pub fn check_resolution_exact(
    n: &PosetModule,
) -> Result<Result<(), ExactnessFailure>, ModuleError> {
    Ok(standard_resolution(n)?.check_exact(n))
}
