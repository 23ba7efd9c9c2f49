//! Vector-space valued poset modules and the functors between them.
//!
//! A [`PosetModule`] is a functor from a poset into vector spaces over an
//! exact field: a dimension per element and a matrix per covering relation.
//! Maps along longer relations are composites of cover maps; functoriality
//! means those composites are path independent, which [`PosetModule::check_functoriality`]
//! verifies and constructors for load paths enforce.
//!
//! The three change-of-poset functors of a monotone map `f` are computed as
//! finite (co)limits: the pushforward takes the limit over the up-fiber
//! `{a : f(a) >= x}` (kernel of a cover-compatibility map), the pushforward
//! with open supports takes the colimit over the down-fiber (cokernel of the
//! dual map), and the pullback precomposes. Limits and colimits over an empty
//! index poset are the zero space.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::incidence::GrFunction;
use crate::linalg::{quotient_map, FieldSpec, LinalgError, Matrix};
use crate::poset::{same_poset, ElemId, ElemSet, MonotoneMap, Poset, PosetError};
use crate::rng::SplitMix64;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("modules live over different posets")]
    PosetMismatch,
    #[error("modules live over different fields")]
    FieldMismatch,
    #[error("cover map {0}<{1} has shape {2}x{3}, expected {4}x{5}")]
    CoverShape(String, String, usize, usize, usize, usize),
    #[error("missing cover map {0}<{1}")]
    MissingCoverMap(String, String),
    #[error("map given for non-covering pair {0}<{1}")]
    NotACover(String, String),
    #[error("not functorial: paths from {0} to {1} disagree")]
    NotFunctorial(String, String),
    #[error("{0} is not a spread")]
    NotASpread(String),
}

/// A functor from a finite poset to finite-dimensional vector spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetModule {
    poset: Arc<Poset>,
    field: FieldSpec,
    dims: Vec<usize>,
    cover_maps: BTreeMap<(ElemId, ElemId), Matrix>,
}

impl PosetModule {
    /// Builds a module and verifies shapes and path independence.
    pub fn from_parts(
        poset: Arc<Poset>,
        field: FieldSpec,
        dims: Vec<usize>,
        cover_maps: BTreeMap<(ElemId, ElemId), Matrix>,
    ) -> Result<PosetModule, ModuleError> {
        let m = PosetModule::from_parts_unchecked(poset, field, dims, cover_maps)?;
        match m.check_functoriality() {
            Ok(()) => Ok(m),
            Err((a, b)) => Err(ModuleError::NotFunctorial(
                m.poset.name(a).to_string(),
                m.poset.name(b).to_string(),
            )),
        }
    }

    /// Builds a module checking shapes only. The result may fail
    /// [`PosetModule::check_functoriality`]; load paths use [`PosetModule::from_parts`].
    pub fn from_parts_unchecked(
        poset: Arc<Poset>,
        field: FieldSpec,
        dims: Vec<usize>,
        cover_maps: BTreeMap<(ElemId, ElemId), Matrix>,
    ) -> Result<PosetModule, ModuleError> {
        assert_eq!(dims.len(), poset.len(), "one dimension per element");
        for (&(a, b), m) in &cover_maps {
            if !poset.covers().contains(&(a, b)) {
                return Err(ModuleError::NotACover(
                    poset.name(a).to_string(),
                    poset.name(b).to_string(),
                ));
            }
            if m.rows() != dims[b.index()] || m.cols() != dims[a.index()] {
                return Err(ModuleError::CoverShape(
                    poset.name(a).to_string(),
                    poset.name(b).to_string(),
                    m.rows(),
                    m.cols(),
                    dims[b.index()],
                    dims[a.index()],
                ));
            }
            if m.field() != field {
                return Err(ModuleError::FieldMismatch);
            }
        }
        for &(a, b) in poset.covers() {
            if !cover_maps.contains_key(&(a, b)) {
                return Err(ModuleError::MissingCoverMap(
                    poset.name(a).to_string(),
                    poset.name(b).to_string(),
                ));
            }
        }
        Ok(PosetModule {
            poset,
            field,
            dims,
            cover_maps,
        })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, a: ElemId) -> usize {
        self.dims[a.index()]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cover_map(&self, a: ElemId, b: ElemId) -> Option<&Matrix> {
        self.cover_maps.get(&(a, b))
    }

    /// The structure map `M(a <= b)`: the identity for `a = b`, otherwise the
    /// composite of cover maps along a canonical saturated chain. For a
    /// functorial module every saturated chain gives the same answer.
    pub fn map_between(&self, a: ElemId, b: ElemId) -> Result<Matrix, ModuleError> {
        if !self.poset.leq(a, b) {
            return Err(PosetError::NotComparable(
                self.poset.name(a).to_string(),
                self.poset.name(b).to_string(),
            )
            .into());
        }
        Ok(self.canonical_map(a, b, &mut BTreeMap::new()))
    }

    fn canonical_map(
        &self,
        a: ElemId,
        b: ElemId,
        memo: &mut BTreeMap<(ElemId, ElemId), Matrix>,
    ) -> Matrix {
        if a == b {
            return Matrix::identity(self.field, self.dim(a));
        }
        if let Some(m) = memo.get(&(a, b)) {
            return m.clone();
        }
        // first upper cover of `a` that stays below `b`
        let c = self
            .poset
            .upper_covers(a)
            .into_iter()
            .find(|&c| self.poset.leq(c, b))
            .expect("a < b implies a cover of a below b");
        let first = self.cover_maps[&(a, c)].clone();
        let rest = self.canonical_map(c, b, memo);
        let composed = rest.compose(&first).expect("cover map shapes align");
        memo.insert((a, b), composed.clone());
        composed
    }

    /// Verifies path independence of the cover maps over all pairs. On
    /// failure returns the first pair `(x, b)` whose maps disagree (covers
    /// scanned in index order, then `x` ascending).
    pub fn check_functoriality(&self) -> Result<(), (ElemId, ElemId)> {
        let mut memo = BTreeMap::new();
        for &(a, b) in self.poset.covers() {
            let step = &self.cover_maps[&(a, b)];
            for x in self.poset.down_set(a).iter() {
                let via_canonical = self.canonical_map(x, b, &mut memo);
                let via_a = step
                    .compose(&self.canonical_map(x, a, &mut memo))
                    .expect("shapes align");
                if via_canonical != via_a {
                    return Err((x, b));
                }
            }
        }
        Ok(())
    }

    /// The constant module: the same dimension everywhere, identity covers.
    pub fn constant(poset: &Arc<Poset>, field: FieldSpec, dim: usize) -> PosetModule {
        let cover_maps = poset
            .covers()
            .iter()
            .map(|&(a, b)| ((a, b), Matrix::identity(field, dim)))
            .collect();
        PosetModule {
            poset: Arc::clone(poset),
            field,
            dims: vec![dim; poset.len()],
            cover_maps,
        }
    }

    pub fn zero(poset: &Arc<Poset>, field: FieldSpec) -> PosetModule {
        PosetModule::constant(poset, field, 0)
    }

    /// The principal cofree module: `dim` on the down-set of `at`, zero
    /// elsewhere, identity maps inside the support.
    pub fn principal_cofree(
        poset: &Arc<Poset>,
        field: FieldSpec,
        at: ElemId,
        dim: usize,
    ) -> PosetModule {
        let support = poset.down_set(at);
        let dims: Vec<usize> = poset
            .elements()
            .map(|b| if support.contains(b) { dim } else { 0 })
            .collect();
        let cover_maps = poset
            .covers()
            .iter()
            .map(|&(a, b)| {
                let m = if support.contains(b) {
                    Matrix::identity(field, dim)
                } else {
                    Matrix::zero(field, dims[b.index()], dims[a.index()])
                };
                ((a, b), m)
            })
            .collect();
        PosetModule {
            poset: Arc::clone(poset),
            field,
            dims,
            cover_maps,
        }
    }

    /// The indicator module of a spread: one-dimensional on `z`, zero off it,
    /// identity maps between comparable members of `z`.
    pub fn indicator(
        poset: &Arc<Poset>,
        field: FieldSpec,
        z: ElemSet,
    ) -> Result<PosetModule, ModuleError> {
        if !poset.is_spread(z) {
            let names: Vec<&str> = z.iter().map(|a| poset.name(a)).collect();
            return Err(ModuleError::NotASpread(format!("{{{}}}", names.join(","))));
        }
        let dims: Vec<usize> = poset
            .elements()
            .map(|b| usize::from(z.contains(b)))
            .collect();
        let cover_maps = poset
            .covers()
            .iter()
            .map(|&(a, b)| {
                let m = if z.contains(a) && z.contains(b) {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zero(field, dims[b.index()], dims[a.index()])
                };
                ((a, b), m)
            })
            .collect();
        Ok(PosetModule {
            poset: Arc::clone(poset),
            field,
            dims,
            cover_maps,
        })
    }

    /// Direct sum of modules over the same poset and field; the empty product
    /// is the zero module.
    pub fn product(
        poset: &Arc<Poset>,
        field: FieldSpec,
        parts: &[PosetModule],
    ) -> Result<PosetModule, ModuleError> {
        for part in parts {
            if !same_poset(&part.poset, poset) {
                return Err(ModuleError::PosetMismatch);
            }
            if part.field != field {
                return Err(ModuleError::FieldMismatch);
            }
        }
        let dims: Vec<usize> = poset
            .elements()
            .map(|a| parts.iter().map(|m| m.dim(a)).sum())
            .collect();
        let mut cover_maps = BTreeMap::new();
        for &(a, b) in poset.covers() {
            let mut block = Matrix::zero(field, dims[b.index()], dims[a.index()]);
            let mut roff = 0;
            let mut coff = 0;
            for part in parts {
                block.paste(roff, coff, &part.cover_maps[&(a, b)]);
                roff += part.dim(b);
                coff += part.dim(a);
            }
            cover_maps.insert((a, b), block);
        }
        Ok(PosetModule {
            poset: Arc::clone(poset),
            field,
            dims,
            cover_maps,
        })
    }

    /// A random functorial module, deterministic per seed. Dimensions are
    /// uniform in `0..=max_dim`; one cover into each element is drawn freely
    /// and the remaining covers are completed by solving the commutativity
    /// constraints. Unsolvable draws are regenerated; after 100 failed
    /// attempts the generator falls back to a cofree product, which is
    /// functorial for any choice of dimensions.
    pub fn random(poset: &Arc<Poset>, field: FieldSpec, max_dim: usize, seed: u64) -> PosetModule {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..100 {
            if let Some(m) = PosetModule::try_random(poset, field, max_dim, &mut rng) {
                return m;
            }
        }
        let parts: Vec<PosetModule> = poset
            .elements()
            .map(|a| PosetModule::principal_cofree(poset, field, a, rng.below(2) as usize))
            .collect();
        PosetModule::product(poset, field, &parts).expect("cofree fallback is well formed")
    }

    fn try_random(
        poset: &Arc<Poset>,
        field: FieldSpec,
        max_dim: usize,
        rng: &mut SplitMix64,
    ) -> Option<PosetModule> {
        let n = poset.len();
        let dims: Vec<usize> = (0..n)
            .map(|_| rng.below(max_dim as u64 + 1) as usize)
            .collect();
        let mut cover_maps: BTreeMap<(ElemId, ElemId), Matrix> = BTreeMap::new();
        // phi holds the full maps on the processed region
        let mut phi: BTreeMap<(ElemId, ElemId), Matrix> = BTreeMap::new();
        for b in poset.topo_order() {
            phi.insert((b, b), Matrix::identity(field, dims[b.index()]));
            let lows = poset.lower_covers(b);
            let mut defined = ElemSet::empty();
            for &a in &lows {
                let common: Vec<ElemId> = poset.down_set(a).intersect(defined).iter().collect();
                let f = if common.is_empty() {
                    random_matrix(field, dims[b.index()], dims[a.index()], rng)
                } else {
                    // stack constraints F * phi(x,a) = phi(x,b) over common x
                    let width: usize = common.iter().map(|&x| dims[x.index()]).sum();
                    let mut c = Matrix::zero(field, dims[a.index()], width);
                    let mut r = Matrix::zero(field, dims[b.index()], width);
                    let mut off = 0;
                    for &x in &common {
                        c.paste(0, off, &phi[&(x, a)]);
                        r.paste(0, off, &phi[&(x, b)]);
                        off += dims[x.index()];
                    }
                    let ct = c.transpose();
                    let particular = ct.solve(&r.transpose())?;
                    let hom = ct.kernel_basis();
                    let ft = if hom.cols() > 0 {
                        let mix = random_matrix(field, hom.cols(), dims[b.index()], rng);
                        particular
                            .add(&hom.compose(&mix).expect("shapes align"))
                            .expect("shapes align")
                    } else {
                        particular
                    };
                    ft.transpose()
                };
                for x in poset.down_set(a).iter() {
                    if !phi.contains_key(&(x, b)) {
                        let composed = f.compose(&phi[&(x, a)]).expect("shapes align");
                        phi.insert((x, b), composed);
                    }
                }
                cover_maps.insert((a, b), f);
                defined = defined.union(poset.down_set(a));
            }
        }
        let module = PosetModule {
            poset: Arc::clone(poset),
            field,
            dims,
            cover_maps,
        };
        module.check_functoriality().ok()?;
        Some(module)
    }

    /// The element-wise dimension, valued in the integers.
    pub fn dimension_function(&self) -> GrFunction {
        GrFunction::new(
            Arc::clone(&self.poset),
            self.dims.iter().map(|&d| BigInt::from(d)).collect(),
        )
    }
}

fn random_matrix(field: FieldSpec, rows: usize, cols: usize, rng: &mut SplitMix64) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, field.from_i64(rng.int_in(-2, 2)));
        }
    }
    m
}

/// A morphism of modules over one poset: a matrix per element. Naturality is
/// a property, not an invariant; [`ModuleMap::is_natural`] checks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub components: Vec<Matrix>,
}

impl ModuleMap {
    pub fn component(&self, a: ElemId) -> &Matrix {
        &self.components[a.index()]
    }

    /// True iff the components commute with every cover map.
    pub fn is_natural(&self, source: &PosetModule, target: &PosetModule) -> bool {
        for &(a, b) in source.poset.covers() {
            let lhs = target.cover_maps[&(a, b)]
                .compose(&self.components[a.index()])
                .expect("shapes align");
            let rhs = self.components[b.index()]
                .compose(&source.cover_maps[&(a, b)])
                .expect("shapes align");
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

/// The space of natural transformations `M -> N`.
#[derive(Debug, Clone)]
pub struct NatSpace {
    pub dimension: usize,
    pub basis: Vec<ModuleMap>,
}

/// Computes `Nat(M, N)` as the kernel of the naturality constraint map
/// sending a family `(eta_a)` to `(N(a<=b) eta_a - eta_b M(a<=b))` over the
/// covers. Over vector spaces this realizes the hom-object of the two
/// modules, so its dimension is the hom dimension.
pub fn nat_space(m: &PosetModule, n: &PosetModule) -> Result<NatSpace, ModuleError> {
    if !same_poset(&m.poset, &n.poset) {
        return Err(ModuleError::PosetMismatch);
    }
    if m.field != n.field {
        return Err(ModuleError::FieldMismatch);
    }
    let poset = &m.poset;
    let field = m.field;
    let mut offsets = Vec::with_capacity(poset.len());
    let mut total = 0usize;
    for a in poset.elements() {
        offsets.push(total);
        total += n.dim(a) * m.dim(a);
    }
    let rows: usize = poset
        .covers()
        .iter()
        .map(|&(a, b)| n.dim(b) * m.dim(a))
        .sum();
    let mut constraint = Matrix::zero(field, rows, total);
    let mut roff = 0;
    for &(a, b) in poset.covers() {
        let nm = &n.cover_maps[&(a, b)]; // n.dim(b) x n.dim(a)
        let mm = &m.cover_maps[&(a, b)]; // m.dim(b) x m.dim(a)
        for i in 0..n.dim(b) {
            for j in 0..m.dim(a) {
                let row = roff + i * m.dim(a) + j;
                for k in 0..n.dim(a) {
                    let col = offsets[a.index()] + k * m.dim(a) + j;
                    let v = field.add(constraint.get(row, col), nm.get(i, k));
                    constraint.set(row, col, v);
                }
                for l in 0..m.dim(b) {
                    let col = offsets[b.index()] + i * m.dim(b) + l;
                    let v = field.sub(constraint.get(row, col), mm.get(l, j));
                    constraint.set(row, col, v);
                }
            }
        }
        roff += n.dim(b) * m.dim(a);
    }
    let kernel = constraint.kernel_basis();
    let mut basis = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let components = poset
            .elements()
            .map(|a| {
                let mut eta = Matrix::zero(field, n.dim(a), m.dim(a));
                for i in 0..n.dim(a) {
                    for j in 0..m.dim(a) {
                        let idx = offsets[a.index()] + i * m.dim(a) + j;
                        eta.set(i, j, kernel.get(idx, col).clone());
                    }
                }
                eta
            })
            .collect();
        basis.push(ModuleMap { components });
    }
    Ok(NatSpace {
        dimension: kernel.cols(),
        basis,
    })
}

/// The pullback `f* N`: precomposition with `f`.
pub fn pullback(f: &MonotoneMap, n: &PosetModule) -> Result<PosetModule, ModuleError> {
    if !same_poset(&n.poset, f.target()) {
        return Err(ModuleError::PosetMismatch);
    }
    let p = f.source();
    let dims: Vec<usize> = p.elements().map(|a| n.dim(f.apply(a))).collect();
    let mut cover_maps = BTreeMap::new();
    for &(a, b) in p.covers() {
        cover_maps.insert((a, b), n.map_between(f.apply(a), f.apply(b))?);
    }
    Ok(PosetModule {
        poset: Arc::clone(p),
        field: n.field,
        dims,
        cover_maps,
    })
}

/// A pushforward together with the limit presentation at each element, kept
/// so canonical comparison maps can be extracted.
pub struct PushforwardData {
    pub module: PosetModule,
    index_sets: Vec<Vec<ElemId>>,
    offsets: Vec<Vec<usize>>,
    bases: Vec<Matrix>,
}

impl PushforwardData {
    /// Projection of the limit at `x` onto the `M(a)` component, for `a` in
    /// the index poset of `x`.
    pub fn projection(&self, x: ElemId, a: ElemId) -> Option<Matrix> {
        let pos = self.index_sets[x.index()].iter().position(|&e| e == a)?;
        let off = self.offsets[x.index()][pos];
        let width = if pos + 1 < self.offsets[x.index()].len() {
            self.offsets[x.index()][pos + 1] - off
        } else {
            self.bases[x.index()].rows() - off
        };
        let rows: Vec<usize> = (off..off + width).collect();
        Some(self.bases[x.index()].select_rows(&rows))
    }
}

/// The pushforward `f_* M`: at `x`, the limit of `M` over `{a : f(a) >= x}`,
/// realized as the kernel of the cover-compatibility map
/// `(v_a) -> (M(a<=b) v_a - v_b)`. Structure maps restrict limit vectors to
/// the smaller index poset.
pub fn pushforward_data(f: &MonotoneMap, m: &PosetModule) -> Result<PushforwardData, ModuleError> {
    if !same_poset(&m.poset, f.source()) {
        return Err(ModuleError::PosetMismatch);
    }
    let p = f.source();
    let q = f.target();
    let field = m.field;

    let mut index_sets = Vec::with_capacity(q.len());
    let mut offsets = Vec::with_capacity(q.len());
    let mut bases = Vec::with_capacity(q.len());
    for x in q.elements() {
        let index: Vec<ElemId> = p.elements().filter(|&a| q.leq(x, f.apply(a))).collect();
        let (offs, total) = block_offsets(&index, |a| m.dim(a));
        let subcovers = induced_covers(p, &index);
        let rows: usize = subcovers.iter().map(|&(_, b)| m.dim(b)).sum();
        let mut compat = Matrix::zero(field, rows, total);
        let mut roff = 0;
        for &(a, b) in &subcovers {
            let pa = index.iter().position(|&e| e == a).unwrap();
            let pb = index.iter().position(|&e| e == b).unwrap();
            compat.paste(roff, offs[pa], &m.map_between(a, b)?);
            let neg_id = Matrix::identity(field, m.dim(b)).scale(&field.from_i64(-1));
            compat.paste(roff, offs[pb], &neg_id);
            roff += m.dim(b);
        }
        bases.push(compat.kernel_basis());
        index_sets.push(index);
        offsets.push(offs);
    }

    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let mut cover_maps = BTreeMap::new();
    for &(x, y) in q.covers() {
        // the index poset of y sits inside that of x
        let mut rows = Vec::new();
        for &a in &index_sets[y.index()] {
            let px = index_sets[x.index()]
                .iter()
                .position(|&e| e == a)
                .expect("up-fibers nest along covers");
            let off = offsets[x.index()][px];
            rows.extend(off..off + m.dim(a));
        }
        let restricted = bases[x.index()].select_rows(&rows);
        let map = bases[y.index()]
            .solve(&restricted)
            .expect("restricted limit vectors lie in the target limit");
        cover_maps.insert((x, y), map);
    }
    let module = PosetModule {
        poset: Arc::clone(q),
        field,
        dims,
        cover_maps,
    };
    Ok(PushforwardData {
        module,
        index_sets,
        offsets,
        bases,
    })
}

pub fn pushforward(f: &MonotoneMap, m: &PosetModule) -> Result<PosetModule, ModuleError> {
    Ok(pushforward_data(f, m)?.module)
}

/// A pushforward with open supports together with the colimit presentation
/// at each element.
pub struct PushforwardOpenData {
    pub module: PosetModule,
    index_sets: Vec<Vec<ElemId>>,
    offsets: Vec<Vec<usize>>,
    quotients: Vec<Matrix>,
}

impl PushforwardOpenData {
    /// Injection of the `M(a)` component into the colimit at `x`, for `a` in
    /// the index poset of `x`.
    pub fn injection(&self, x: ElemId, a: ElemId) -> Option<Matrix> {
        let pos = self.index_sets[x.index()].iter().position(|&e| e == a)?;
        let off = self.offsets[x.index()][pos];
        let width = if pos + 1 < self.offsets[x.index()].len() {
            self.offsets[x.index()][pos + 1] - off
        } else {
            self.quotients[x.index()].cols() - off
        };
        let cols: Vec<usize> = (off..off + width).collect();
        Some(self.quotients[x.index()].select_cols(&cols))
    }
}

/// The pushforward with open supports `f_dagger M`: at `x`, the colimit of
/// `M` over `{a : f(a) <= x}`, realized as the cokernel of the dual
/// compatibility map. Structure maps are induced by inclusion of index
/// posets.
pub fn pushforward_open_data(
    f: &MonotoneMap,
    m: &PosetModule,
) -> Result<PushforwardOpenData, ModuleError> {
    if !same_poset(&m.poset, f.source()) {
        return Err(ModuleError::PosetMismatch);
    }
    let p = f.source();
    let q = f.target();
    let field = m.field;

    let mut index_sets = Vec::with_capacity(q.len());
    let mut offsets = Vec::with_capacity(q.len());
    let mut quotients = Vec::with_capacity(q.len());
    let mut representatives = Vec::with_capacity(q.len());
    for x in q.elements() {
        let index: Vec<ElemId> = p.elements().filter(|&a| q.leq(f.apply(a), x)).collect();
        let (offs, total) = block_offsets(&index, |a| m.dim(a));
        let subcovers = induced_covers(p, &index);
        let cols: usize = subcovers.iter().map(|&(a, _)| m.dim(a)).sum();
        let mut relations = Matrix::zero(field, total, cols);
        let mut coff = 0;
        for &(a, b) in &subcovers {
            let pa = index.iter().position(|&e| e == a).unwrap();
            let pb = index.iter().position(|&e| e == b).unwrap();
            relations.paste(offs[pb], coff, &m.map_between(a, b)?);
            let neg_id = Matrix::identity(field, m.dim(a)).scale(&field.from_i64(-1));
            relations.paste(offs[pa], coff, &neg_id);
            coff += m.dim(a);
        }
        let (quot, reps) = quotient_map(&relations);
        quotients.push(quot);
        representatives.push(reps);
        index_sets.push(index);
        offsets.push(offs);
    }

    let dims: Vec<usize> = quotients.iter().map(Matrix::rows).collect();
    let mut cover_maps = BTreeMap::new();
    for &(x, y) in q.covers() {
        // the index poset of x sits inside that of y
        let mut cols = Vec::new();
        for &a in &index_sets[x.index()] {
            let py = index_sets[y.index()]
                .iter()
                .position(|&e| e == a)
                .expect("down-fibers nest along covers");
            let off = offsets[y.index()][py];
            cols.extend(off..off + m.dim(a));
        }
        // quotient map of y restricted to the x-coordinates, then evaluated
        // on the canonical representatives of the x-colimit
        let through = quotients[y.index()].select_cols(&cols);
        let map = through.select_cols(&representatives[x.index()]);
        cover_maps.insert((x, y), map);
    }
    let module = PosetModule {
        poset: Arc::clone(q),
        field,
        dims,
        cover_maps,
    };
    Ok(PushforwardOpenData {
        module,
        index_sets,
        offsets,
        quotients,
    })
}

pub fn pushforward_open(f: &MonotoneMap, m: &PosetModule) -> Result<PosetModule, ModuleError> {
    Ok(pushforward_open_data(f, m)?.module)
}

fn block_offsets(index: &[ElemId], dim: impl Fn(ElemId) -> usize) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(index.len());
    let mut total = 0;
    for &a in index {
        offsets.push(total);
        total += dim(a);
    }
    (offsets, total)
}

/// Covering pairs of the subposet induced on `index`, which need not be
/// covers of the ambient poset.
fn induced_covers(p: &Poset, index: &[ElemId]) -> Vec<(ElemId, ElemId)> {
    let mask: ElemSet = index.iter().copied().collect();
    let mut out = Vec::new();
    for &a in index {
        for &b in index {
            if p.lt(a, b) {
                let between = p.strict_up(a).intersect(p.strict_down(b)).intersect(mask);
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
    }
    out.sort();
    out
}
