//! The integer incidence algebra of a poset and Möbius inversion.
//!
//! Values live in arbitrary-precision integers: dimension functions of
//! vector-space valued modules land there, and nothing in this crate needs a
//! more general coefficient ring.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poset::{same_poset, ElemId, MonotoneMap, Poset, PosetError};
use crate::rng::SplitMix64;

/// An integer-valued function on the intervals of a poset. Entries exist
/// exactly for pairs `a <= b`; the backing storage keeps zeros elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceFunction {
    poset: Arc<Poset>,
    values: Vec<BigInt>,
}

impl IncidenceFunction {
    fn zeros(poset: &Arc<Poset>) -> IncidenceFunction {
        IncidenceFunction {
            poset: Arc::clone(poset),
            values: vec![BigInt::zero(); poset.len() * poset.len()],
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    /// Value on the interval `[a, b]`; `None` when `a` is not below `b`.
    pub fn get(&self, a: ElemId, b: ElemId) -> Option<&BigInt> {
        if self.poset.leq(a, b) {
            Some(&self.values[a.index() * self.poset.len() + b.index()])
        } else {
            None
        }
    }

    /// Value on `[a, b]`, or zero when the pair is not comparable. Rota-style
    /// sums over fibers use this convention.
    pub fn get_or_zero(&self, a: ElemId, b: ElemId) -> BigInt {
        self.get(a, b).cloned().unwrap_or_else(BigInt::zero)
    }

    fn set(&mut self, a: ElemId, b: ElemId, v: BigInt) {
        debug_assert!(self.poset.leq(a, b));
        let n = self.poset.len();
        self.values[a.index() * n + b.index()] = v;
    }

    /// Convolution `(self * other)[a,c] = sum over a <= b <= c`.
    pub fn convolve(&self, other: &IncidenceFunction) -> Result<IncidenceFunction, PosetError> {
        if !same_poset(&self.poset, &other.poset) {
            return Err(PosetError::PosetMismatch);
        }
        let p = &self.poset;
        let mut out = IncidenceFunction::zeros(p);
        for a in p.elements() {
            for c in p.up_set(a).iter() {
                let mut acc = BigInt::zero();
                for b in p.interval(a, c).unwrap().iter() {
                    acc += self.get(a, b).unwrap() * other.get(b, c).unwrap();
                }
                out.set(a, c, acc);
            }
        }
        Ok(out)
    }
}

/// The zeta function: 1 on every interval.
pub fn zeta(poset: &Arc<Poset>) -> IncidenceFunction {
    let mut out = IncidenceFunction::zeros(poset);
    for a in poset.elements() {
        for b in poset.up_set(a).iter() {
            out.set(a, b, BigInt::one());
        }
    }
    out
}

/// The convolution identity: 1 on the diagonal, 0 on proper intervals.
pub fn identity_one(poset: &Arc<Poset>) -> IncidenceFunction {
    let mut out = IncidenceFunction::zeros(poset);
    for a in poset.elements() {
        out.set(a, a, BigInt::one());
    }
    out
}

/// The Möbius function, by interval recursion: `mu[a,a] = 1` and
/// `mu[a,c] = -sum of mu[a,b] over a <= b < c`. Intervals are processed by
/// increasing size so every sub-interval is ready when needed.
pub fn mobius_recursive(poset: &Arc<Poset>) -> IncidenceFunction {
    let mut out = IncidenceFunction::zeros(poset);
    let mut pairs: Vec<(ElemId, ElemId)> = Vec::new();
    for a in poset.elements() {
        for c in poset.up_set(a).iter() {
            pairs.push((a, c));
        }
    }
    pairs.sort_by_key(|&(a, c)| (poset.interval(a, c).unwrap().len(), a, c));
    for (a, c) in pairs {
        if a == c {
            out.set(a, a, BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for b in poset.interval(a, c).unwrap().iter() {
            if b != c {
                acc += out.get(a, b).unwrap();
            }
        }
        out.set(a, c, -acc);
    }
    out
}

/// The Möbius function by chain counting: for `a < b`,
/// `mu[a,b] = sum over i > 0 of (-1)^i n_i` where `n_i` counts chains
/// `a = c_0 < ... < c_i = b`; the diagonal is 1. Serves as an independent
/// oracle for [`mobius_recursive`].
pub fn mobius_hall(poset: &Arc<Poset>) -> IncidenceFunction {
    let n = poset.len();
    let mut out = identity_one(poset);
    // step[a][b] counts strict one-step relations; powers count longer chains.
    let strict: Vec<Vec<BigInt>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if poset.lt(ElemId(a), ElemId(b)) {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut power = strict.clone();
    let mut sign = -1i32;
    for _ in 0..n.max(1) {
        if power.iter().all(|row| row.iter().all(Zero::is_zero)) {
            break;
        }
        for a in poset.elements() {
            for b in poset.strict_up(a).iter() {
                let term = &power[a.index()][b.index()];
                let cur = out.get(a, b).unwrap().clone();
                out.set(a, b, if sign < 0 { cur - term } else { cur + term });
            }
        }
        power = mat_mul_int(&power, &strict);
        sign = -sign;
    }
    out
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// An integer-valued function on the elements of a poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrFunction {
    poset: Arc<Poset>,
    values: Vec<BigInt>,
}

impl GrFunction {
    pub fn new(poset: Arc<Poset>, values: Vec<BigInt>) -> GrFunction {
        assert_eq!(values.len(), poset.len(), "function must be total");
        GrFunction { poset, values }
    }

    pub fn zero(poset: &Arc<Poset>) -> GrFunction {
        GrFunction::new(Arc::clone(poset), vec![BigInt::zero(); poset.len()])
    }

    pub fn from_i64(poset: &Arc<Poset>, values: &[i64]) -> GrFunction {
        GrFunction::new(
            Arc::clone(poset),
            values.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    /// The indicator of a single element.
    pub fn indicator(poset: &Arc<Poset>, at: ElemId) -> GrFunction {
        let mut values = vec![BigInt::zero(); poset.len()];
        values[at.index()] = BigInt::one();
        GrFunction::new(Arc::clone(poset), values)
    }

    pub fn random(poset: &Arc<Poset>, lo: i64, hi: i64, rng: &mut SplitMix64) -> GrFunction {
        let values = (0..poset.len())
            .map(|_| BigInt::from(rng.int_in(lo, hi)))
            .collect();
        GrFunction::new(Arc::clone(poset), values)
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn get(&self, a: ElemId) -> &BigInt {
        &self.values[a.index()]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Upper Möbius inversion: `df(a) = sum over b >= a of f(b) mu[a,b]`.
    pub fn upper_inversion(&self) -> GrFunction {
        let mu = mobius_recursive(&self.poset);
        let values = self
            .poset
            .elements()
            .map(|a| {
                let mut acc = BigInt::zero();
                for b in self.poset.up_set(a).iter() {
                    acc += self.get(b) * mu.get(a, b).unwrap();
                }
                acc
            })
            .collect();
        GrFunction::new(Arc::clone(&self.poset), values)
    }

    /// Lower Möbius inversion: `df(a) = sum over b <= a of f(b) mu[b,a]`.
    pub fn lower_inversion(&self) -> GrFunction {
        let mu = mobius_recursive(&self.poset);
        let values = self
            .poset
            .elements()
            .map(|a| {
                let mut acc = BigInt::zero();
                for b in self.poset.down_set(a).iter() {
                    acc += self.get(b) * mu.get(b, a).unwrap();
                }
                acc
            })
            .collect();
        GrFunction::new(Arc::clone(&self.poset), values)
    }

    /// Pushforward along a monotone map: sums over fibers, 0 on empty ones.
    pub fn pushforward(&self, f: &MonotoneMap) -> Result<GrFunction, PosetError> {
        if !same_poset(&self.poset, f.source()) {
            return Err(PosetError::PosetMismatch);
        }
        let mut values = vec![BigInt::zero(); f.target().len()];
        for a in self.poset.elements() {
            values[f.apply(a).index()] += self.get(a);
        }
        Ok(GrFunction::new(Arc::clone(f.target()), values))
    }

    /// Pullback along a monotone map: precomposition.
    pub fn pullback(&self, f: &MonotoneMap) -> Result<GrFunction, PosetError> {
        if !same_poset(&self.poset, f.target()) {
            return Err(PosetError::PosetMismatch);
        }
        let values = (0..f.source().len())
            .map(|a| self.get(f.apply(ElemId(a))).clone())
            .collect();
        Ok(GrFunction::new(Arc::clone(f.source()), values))
    }
}
