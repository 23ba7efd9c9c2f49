//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything downstream reduces to ranks and kernels of small dense
//! matrices, so this module keeps one dense representation and one
//! deterministic reduced-row-echelon routine. Pivots are chosen as the first
//! nonzero entry in row-major scan order; the arithmetic is exact, so the
//! choice is about reproducibility, not stability.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("maps do not compose to zero: not a complex")]
    NotAComplex,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The coefficient field: exact rationals, or integers modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> FieldSpec {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<FieldSpec, LinalgError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => {
                let p = *p as i128;
                Scalar::Mod((((v as i128 % p) + p) % p) as u64)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            FieldSpec::Prime(p) => {
                let p_big = BigInt::from(*p);
                let mut r = v % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let digits = r.to_u64_digits().1;
                Scalar::Mod(digits.first().copied().unwrap_or(0))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()).into(),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Some(Scalar::Mod(mod_pow(*x, p - 2, *p))),
            _ => panic!("scalar does not belong to this field"),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms by
/// `BigRational`; prime-field values are reduced representatives in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Scalar::Rat(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A dense matrix over an exact field, acting on column vectors. Zero rows
/// or columns are legal and denote maps to or from the zero space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from row-major integer data; handy in tests and generators.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            entries: data.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn from_entries(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Matrix, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        self.paste_scaled(r0, c0, block, &self.field.one());
    }

    /// Copies `k * block` into `self` at `(r0, c0)`.
    pub fn paste_scaled(&mut self, r0: usize, c0: usize, block: &Matrix, k: &Scalar) {
        debug_assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.field.mul(k, block.get(r, c));
                self.set(r0 + r, c0 + c, v);
            }
        }
    }

    /// Adds `k * block` into `self` at `(r0, c0)`.
    pub fn add_scaled(&mut self, r0: usize, c0: usize, block: &Matrix, k: &Scalar) {
        debug_assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.field.mul(k, block.get(r, c));
                let v = self.field.add(self.get(r0 + r, c0 + c), &v);
                self.set(r0 + r, c0 + c, v);
            }
        }
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zero(self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zero(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| self.field.mul(k, v)).collect(),
        }
    }

    /// Composition `self` after `other`: the matrix product `self * other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if other.rows != self.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = self.field.add(out.get(r, c), &self.field.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            Err(LinalgError::FieldMismatch)
        } else {
            Ok(())
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let field = m.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = field.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = field.mul(&inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A canonical basis of the kernel, one column per free column of the
    /// reduced echelon form.
    pub fn kernel_basis(&self) -> Matrix {
        let rref = self.rref();
        let pivots = &rref.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, self.field.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, self.field.neg(rref.matrix.get(i, fc)));
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// A particular solution `X` of `self * X = rhs`, or `None` when the
    /// system is inconsistent. Free variables are set to zero, so the result
    /// is deterministic; when `self` has full column rank it is unique.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.field, rhs.field, "field mismatch in solve");
        assert_eq!(self.rows, rhs.rows, "shape mismatch in solve");
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + rhs.cols);
        aug.paste(0, 0, self);
        aug.paste(0, self.cols, rhs);
        let red = aug.rref();
        if red.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(self.field, self.cols, rhs.cols);
        for (i, &pc) in red.pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, red.matrix.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of reduced row echelon elimination.
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Dimension of `ker(delta_out) / im(delta_in)` at one slot of a complex.
pub fn cohomology_dim(delta_in: &Matrix, delta_out: &Matrix) -> Result<usize, LinalgError> {
    if delta_out.cols != delta_in.rows {
        return Err(LinalgError::ShapeMismatch(format!(
            "slot dimension {} vs {}",
            delta_out.cols, delta_in.rows
        )));
    }
    if !delta_out.compose(delta_in)?.is_zero() {
        return Err(LinalgError::NotAComplex);
    }
    Ok(delta_out.nullity() - delta_in.rank())
}

/// The quotient map `k^n -> k^n / colspace(subspace)` in the canonical
/// coordinates given by the non-pivot rows of the subspace basis. Its kernel
/// is exactly the column space of `subspace`, and the standard basis vectors
/// at the returned representative coordinates form a section.
pub fn quotient_map(subspace: &Matrix) -> (Matrix, Vec<usize>) {
    let field = subspace.field;
    let n = subspace.rows();
    let red = subspace.transpose().rref();
    let pivots = &red.pivots;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zero(field, free.len(), n);
    for (j, &fc) in free.iter().enumerate() {
        out.set(j, fc, field.one());
        for (i, &pc) in pivots.iter().enumerate() {
            out.set(j, pc, field.neg(red.matrix.get(i, fc)));
        }
    }
    (out, free)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn identity_has_full_rank() {
        for n in 0..5 {
            assert_eq!(Matrix::identity(Q, n).rank(), n);
        }
    }

    #[test]
    fn dependent_rows_drop_rank() {
        let m = Matrix::from_i64(Q, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = Matrix::zero(Q, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 3);
    }

    #[test]
    fn kernel_of_invertible_is_trivial() {
        let m = Matrix::from_i64(Q, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(m.kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_map_spans_domain() {
        let m = Matrix::zero(Q, 3, 3);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert!(m.compose(&k).unwrap().is_zero());
    }

    #[test]
    fn kernel_of_row_sums() {
        let m = Matrix::from_i64(Q, 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // spans (1, -1)^T: the two coordinates are opposite and nonzero
        assert!(!k.get(0, 0).is_zero());
        assert_eq!(k.get(0, 0), &Q.neg(k.get(1, 0)));
        assert!(m.compose(&k).unwrap().is_zero());
    }

    #[test]
    fn compose_with_identity() {
        let f = Matrix::from_i64(Q, 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(f.compose(&Matrix::identity(Q, 3)).unwrap(), f);
        assert_eq!(Matrix::identity(Q, 2).compose(&f).unwrap(), f);
    }

    #[test]
    fn compose_requires_matching_shapes() {
        let f = Matrix::zero(Q, 2, 3);
        let g = Matrix::zero(Q, 2, 3);
        assert!(matches!(f.compose(&g), Err(LinalgError::ShapeMismatch(_))));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let f = Matrix::zero(Q, 2, 2);
        let g = Matrix::zero(FieldSpec::prime(7).unwrap(), 2, 2);
        assert_eq!(f.compose(&g), Err(LinalgError::FieldMismatch));
    }

    #[test]
    fn cohomology_of_zero_maps() {
        let din = Matrix::zero(Q, 3, 0);
        let dout = Matrix::zero(Q, 0, 3);
        assert_eq!(cohomology_dim(&din, &dout).unwrap(), 3);
    }

    #[test]
    fn cohomology_with_invertible_outgoing() {
        let din = Matrix::zero(Q, 2, 0);
        let dout = Matrix::identity(Q, 2);
        assert_eq!(cohomology_dim(&din, &dout).unwrap(), 0);
    }

    #[test]
    fn non_complex_is_rejected() {
        let din = Matrix::identity(Q, 2);
        let dout = Matrix::identity(Q, 2);
        assert_eq!(cohomology_dim(&din, &dout), Err(LinalgError::NotAComplex));
    }

    #[test]
    fn cohomology_of_two_term_complex_vanishes() {
        // 0 -> k -> k -> 0 with an invertible middle map
        let delta = Matrix::from_i64(Q, 1, 1, &[-1]);
        let into = Matrix::zero(Q, 1, 0);
        let out_of = Matrix::zero(Q, 0, 1);
        assert_eq!(cohomology_dim(&into, &delta).unwrap(), 0);
        assert_eq!(cohomology_dim(&delta, &out_of).unwrap(), 0);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_i64(Q, 2, 2, &[1, 2, 3, 4]);
        let b = Matrix::from_i64(Q, 2, 1, &[5, 6]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.compose(&x).unwrap(), b);

        let sing = Matrix::from_i64(Q, 2, 2, &[1, 1, 1, 1]);
        let bad = Matrix::from_i64(Q, 2, 1, &[0, 1]);
        assert!(sing.solve(&bad).is_none());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = f7.from_i64(-3);
        assert_eq!(a, Scalar::Mod(4));
        let inv = f7.inv(&f7.from_i64(3)).unwrap();
        assert_eq!(f7.mul(&inv, &f7.from_i64(3)), f7.one());
        assert!(FieldSpec::prime(6).is_err());
        assert!(FieldSpec::prime(1000003).is_ok());
    }

    #[test]
    fn quotient_map_kills_exactly_the_subspace() {
        // span{(1,1,0), (0,0,1)} in k^3
        let sub = Matrix::from_i64(Q, 3, 2, &[1, 0, 1, 0, 0, 1]);
        let (q, reps) = quotient_map(&sub);
        assert_eq!(q.rows(), 1);
        assert!(q.compose(&sub).unwrap().is_zero());
        // (1,0,0) is not in the subspace and survives
        let v = Matrix::from_i64(Q, 3, 1, &[1, 0, 0]);
        assert!(!q.compose(&v).unwrap().is_zero());
        // representative coordinates give a section of q
        let section = Matrix::identity(Q, 3).select_cols(&reps);
        assert_eq!(q.compose(&section).unwrap(), Matrix::identity(Q, 1));
    }

    #[test]
    fn rref_is_deterministic() {
        let m = Matrix::from_i64(Q, 3, 4, &[0, 2, 4, 1, 1, 1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(m.kernel_basis(), m.clone().kernel_basis());
        assert_eq!(m.rref().pivots, vec![0, 1, 3]);
    }
}
