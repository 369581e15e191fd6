//! Compact matrix Lie algebras with a bi-invariant inner product.
//!
//! The algebra is treated as a *real* inner-product space; complex
//! matrices are only the carrier representation. The inner product is
//! fixed as `<A,B> = -Re tr(AB)` and the stored basis is orthonormal
//! with respect to it, so coordinates are plain Euclidean vectors and
//! `ad_X` is a real antisymmetric matrix.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::tol;

/// Complex carrier matrix.
pub type CMat<T> = DMatrix<Complex<T>>;
/// Real coordinate vector in the orthonormal basis.
pub type Coords<T> = DVector<T>;
/// Real operator matrix in the orthonormal basis.
pub type RMat<T> = DMatrix<T>;

/// Shared handle to an algebra; vectors keep one so operations can
/// check membership and reuse the basis.
pub type AlgebraRef<T> = Arc<LieAlgebra<T>>;

/// `-Re tr(a b)`, the fixed ad-invariant inner product on anti-Hermitian matrices.
pub fn trace_ip<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    let n = a.nrows();
    let mut acc = T::zero();
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    -acc
}

fn trace_norm<T: Real>(a: &CMat<T>) -> T {
    trace_ip(a, a).max(T::zero()).sqrt()
}

fn commutator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a * b - b * a
}

fn anti_hermitian_residual<T: Real>(a: &CMat<T>) -> T {
    (a + a.adjoint()).norm() / (T::one() + a.norm())
}

/// Structure constants `c[i][j][k]` with `[b_i, b_j] = sum_k c[i][j][k] b_k`,
/// stored flat.
#[derive(Debug, Clone)]
pub struct StructureConstants<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> StructureConstants<T> {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Which built-in construction an algebra came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// su(n): traceless anti-Hermitian n x n complex matrices.
    Su,
    /// so(n): real antisymmetric n x n matrices.
    So,
    /// User-supplied basis, Gram-Schmidt orthonormalized.
    Custom,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Su => write!(f, "su"),
            Family::So => write!(f, "so"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

/// A compact matrix Lie algebra with orthonormal basis and structure constants.
#[derive(Debug)]
pub struct LieAlgebra<T: Real> {
    name: String,
    family: Family,
    dim_matrix: usize,
    basis: Vec<CMat<T>>,
    structure_constants: StructureConstants<T>,
    inner_product_scale: T,
}

impl<T: Real> LieAlgebra<T> {
    /// Build a standard algebra: `su(n)` or `so(n)`.
    pub fn build(family: Family, n: usize) -> Result<AlgebraRef<T>> {
        match family {
            Family::Su => {
                if n < 2 {
                    return Err(Error::MatrixTooSmall(n));
                }
                Self::from_basis(format!("su({n})"), Family::Su, n, su_basis(n))
            }
            Family::So => {
                if n < 2 {
                    return Err(Error::MatrixTooSmall(n));
                }
                Self::from_basis(format!("so({n})"), Family::So, n, so_basis(n))
            }
            Family::Custom => Err(Error::UnsupportedFamily(
                "custom algebras require an explicit basis; use from_custom_basis".into(),
            )),
        }
    }

    /// Build from a user-supplied spanning set, orthonormalizing it first.
    pub fn from_custom_basis(name: impl Into<String>, mats: Vec<CMat<T>>) -> Result<AlgebraRef<T>> {
        let n = mats.first().map(|m| m.nrows()).unwrap_or(0);
        if n == 0 {
            return Err(Error::MatrixTooSmall(0));
        }
        let ortho = gram_schmidt(mats)?;
        Self::from_basis(name.into(), Family::Custom, n, ortho)
    }

    fn from_basis(
        name: String,
        family: Family,
        n: usize,
        basis: Vec<CMat<T>>,
    ) -> Result<AlgebraRef<T>> {
        let dim = basis.len();
        for (idx, b) in basis.iter().enumerate() {
            let r = anti_hermitian_residual(b);
            if r > real(tol::STRUCTURAL * 100.0) {
                return Err(Error::NotAntiHermitian {
                    index: idx,
                    residual: to_f64(r),
                });
            }
        }
        // Brackets of basis pairs, reused for the structure constants and
        // the closure check.
        let mut data = vec![T::zero(); dim * dim * dim];
        let mut worst_closure = T::zero();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let br = commutator(&basis[i], &basis[j]);
                let mut rem = br.clone();
                for k in 0..dim {
                    let c = trace_ip(&br, &basis[k]);
                    data[(i * dim + j) * dim + k] = c;
                    data[(j * dim + i) * dim + k] = -c;
                    rem -= basis[k].map(|z| z * Complex::new(c, T::zero()));
                }
                worst_closure = worst_closure.max(trace_norm(&rem));
            }
        }
        if worst_closure > real(tol::CLOSURE) {
            return Err(Error::NotClosed {
                residual: to_f64(worst_closure),
            });
        }
        Ok(Arc::new(LieAlgebra {
            name,
            family,
            dim_matrix: n,
            basis,
            structure_constants: StructureConstants { dim, data },
            inner_product_scale: T::one(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Size of the carrier matrices.
    pub fn matrix_dim(&self) -> usize {
        self.dim_matrix
    }

    /// Dimension of the algebra as a real vector space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat<T>] {
        &self.basis
    }

    pub fn structure_constants(&self) -> &StructureConstants<T> {
        &self.structure_constants
    }

    /// Scale of the chosen inner product relative to `-Re tr(AB)`.
    pub fn inner_product_scale(&self) -> T {
        self.inner_product_scale
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    nalgebra::try_convert(x).unwrap_or(f64::NAN)
}

/// Modified Gram-Schmidt over the trace inner product.
fn gram_schmidt<T: Real>(mats: Vec<CMat<T>>) -> Result<Vec<CMat<T>>> {
    let mut out: Vec<CMat<T>> = Vec::new();
    let scale = mats
        .iter()
        .map(trace_norm)
        .fold(T::zero(), |a, b| a.max(b));
    for (idx, m) in mats.into_iter().enumerate() {
        let mut v = m;
        for _ in 0..2 {
            for q in &out {
                let c = trace_ip(&v, q);
                v -= q.map(|z| z * Complex::new(c, T::zero()));
            }
        }
        let nv = trace_norm(&v);
        if nv <= real::<T>(1e-10) * (T::one() + scale) {
            return Err(Error::DegenerateBasis { index: idx });
        }
        let inv = T::one() / nv;
        out.push(v.map(|z| z * Complex::new(inv, T::zero())));
    }
    Ok(out)
}

/// `E_ij`: 1 at `(i,j)`, -1 at `(j,i)` (0-based indices), unnormalized.
pub fn skew_e<T: Real>(n: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros(n, n);
    m[(i, j)] = Complex::new(T::one(), T::zero());
    m[(j, i)] = Complex::new(-T::one(), T::zero());
    m
}

/// `F_ij`: i at `(i,j)` and `(j,i)` (0-based indices), unnormalized.
pub fn skew_f<T: Real>(n: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros(n, n);
    m[(i, j)] = Complex::new(T::zero(), T::one());
    m[(j, i)] = Complex::new(T::zero(), T::one());
    m
}

/// Traceless diagonal generator `i*diag(1,..,1,-k,0,..,0)` with k ones, unnormalized.
pub fn su_diag<T: Real>(n: usize, k: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros(n, n);
    for l in 0..k {
        m[(l, l)] = Complex::new(T::zero(), T::one());
    }
    m[(k, k)] = Complex::new(T::zero(), -real::<T>(k as f64));
    m
}

fn normalized<T: Real>(m: CMat<T>) -> CMat<T> {
    let inv = T::one() / trace_norm(&m);
    m.map(|z| z * Complex::new(inv, T::zero()))
}

fn su_basis<T: Real>(n: usize) -> Vec<CMat<T>> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(normalized(skew_e(n, i, j)));
            out.push(normalized(skew_f(n, i, j)));
        }
    }
    for k in 1..n {
        out.push(normalized(su_diag(n, k)));
    }
    out
}

fn so_basis<T: Real>(n: usize) -> Vec<CMat<T>> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(normalized(skew_e(n, i, j)));
        }
    }
    out
}

/// An algebra element, carried both as a matrix and as coordinates in
/// the orthonormal basis.
#[derive(Debug, Clone)]
pub struct AlgebraVector<T: Real> {
    algebra: AlgebraRef<T>,
    coords: Coords<T>,
    matrix: CMat<T>,
}

impl<T: Real> AlgebraVector<T> {
    pub fn zero(algebra: &AlgebraRef<T>) -> Self {
        Self::from_coords(algebra, Coords::zeros(algebra.dim()))
    }

    pub fn basis_vector(algebra: &AlgebraRef<T>, i: usize) -> Self {
        let mut c = Coords::zeros(algebra.dim());
        c[i] = T::one();
        AlgebraVector {
            algebra: algebra.clone(),
            coords: c,
            matrix: algebra.basis[i].clone(),
        }
    }

    pub fn from_coords(algebra: &AlgebraRef<T>, coords: Coords<T>) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "coordinate length mismatch");
        let n = algebra.matrix_dim();
        let mut m = CMat::zeros(n, n);
        for (i, b) in algebra.basis.iter().enumerate() {
            let c = coords[i];
            if c != T::zero() {
                m += b.map(|z| z * Complex::new(c, T::zero()));
            }
        }
        AlgebraVector {
            algebra: algebra.clone(),
            coords,
            matrix: m,
        }
    }

    /// Project a matrix onto the algebra; errors if it is not a member.
    pub fn from_matrix(algebra: &AlgebraRef<T>, matrix: CMat<T>) -> Result<Self> {
        let dim = algebra.dim();
        let mut coords = Coords::zeros(dim);
        let mut rem = matrix.clone();
        for (i, b) in algebra.basis.iter().enumerate() {
            let c = trace_ip(&matrix, b);
            coords[i] = c;
            rem -= b.map(|z| z * Complex::new(c, T::zero()));
        }
        let resid = trace_norm(&rem) / (T::one() + trace_norm(&matrix));
        if resid > real(tol::MEMBERSHIP) {
            return Err(Error::NotInAlgebra {
                residual: to_f64(resid),
            });
        }
        Ok(AlgebraVector {
            algebra: algebra.clone(),
            coords,
            matrix,
        })
    }

    pub fn algebra(&self) -> &AlgebraRef<T> {
        &self.algebra
    }

    pub fn coords(&self) -> &Coords<T> {
        &self.coords
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn norm(&self) -> T {
        self.coords.norm()
    }

    pub fn inner(&self, other: &Self) -> T {
        self.coords.dot(&other.coords)
    }

    pub fn scaled(&self, c: T) -> Self {
        AlgebraVector {
            algebra: self.algebra.clone(),
            coords: &self.coords * c,
            matrix: self.matrix.map(|z| z * Complex::new(c, T::zero())),
        }
    }

    pub fn is_zero(&self, tolerance: T) -> bool {
        self.norm() <= tolerance
    }

    fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            || (self.algebra.name == other.algebra.name
                && self.algebra.dim() == other.algebra.dim())
    }

    /// `[x, y] = xy - yx`, re-expressed in coordinates.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let m = commutator(&self.matrix, &other.matrix);
        // Closure of the algebra makes membership automatic; project directly.
        let dim = self.algebra.dim();
        let mut coords = Coords::zeros(dim);
        for (i, b) in self.algebra.basis.iter().enumerate() {
            coords[i] = trace_ip(&m, b);
        }
        Ok(AlgebraVector {
            algebra: self.algebra.clone(),
            coords,
            matrix: m,
        })
    }

    /// Bracket by structure-constant contraction; the independent route
    /// used to cross-check `bracket`.
    pub fn bracket_structure(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let sc = &self.algebra.structure_constants;
        let dim = sc.dim();
        let mut coords = Coords::zeros(dim);
        for i in 0..dim {
            let xi = self.coords[i];
            if xi == T::zero() {
                continue;
            }
            for j in 0..dim {
                let yj = other.coords[j];
                if yj == T::zero() {
                    continue;
                }
                for k in 0..dim {
                    coords[k] += xi * yj * sc.get(i, j, k);
                }
            }
        }
        Ok(Self::from_coords(&self.algebra, coords))
    }

    /// The matrix of `y -> [x, y]` in the orthonormal basis; real antisymmetric.
    pub fn ad_operator(&self) -> RMat<T> {
        let sc = &self.algebra.structure_constants;
        let dim = sc.dim();
        let mut m = RMat::zeros(dim, dim);
        for i in 0..dim {
            let xi = self.coords[i];
            if xi == T::zero() {
                continue;
            }
            for j in 0..dim {
                for k in 0..dim {
                    m[(k, j)] += xi * sc.get(i, j, k);
                }
            }
        }
        m
    }
}

impl<T: Real> std::ops::Add for &AlgebraVector<T> {
    type Output = AlgebraVector<T>;
    fn add(self, rhs: &AlgebraVector<T>) -> AlgebraVector<T> {
        debug_assert!(self.same_algebra(rhs));
        AlgebraVector {
            algebra: self.algebra.clone(),
            coords: &self.coords + &rhs.coords,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<T: Real> std::ops::Sub for &AlgebraVector<T> {
    type Output = AlgebraVector<T>;
    fn sub(self, rhs: &AlgebraVector<T>) -> AlgebraVector<T> {
        debug_assert!(self.same_algebra(rhs));
        AlgebraVector {
            algebra: self.algebra.clone(),
            coords: &self.coords - &rhs.coords,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<T: Real> std::ops::Neg for &AlgebraVector<T> {
    type Output = AlgebraVector<T>;
    fn neg(self) -> AlgebraVector<T> {
        self.scaled(-T::one())
    }
}

/// A point of the group, with its measured deviation from unitarity.
#[derive(Debug, Clone)]
pub struct GroupElement<T: Real> {
    matrix: CMat<T>,
    unitarity_drift: T,
}

impl<T: Real> GroupElement<T> {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            matrix: CMat::identity(n, n),
            unitarity_drift: T::zero(),
        }
    }

    pub fn from_matrix(matrix: CMat<T>) -> Self {
        let n = matrix.nrows();
        let drift = (matrix.adjoint() * &matrix - CMat::<T>::identity(n, n)).norm();
        GroupElement {
            matrix,
            unitarity_drift: drift,
        }
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn unitarity_drift(&self) -> T {
        self.unitarity_drift
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::from_matrix(&self.matrix * &other.matrix)
    }

    /// Frobenius distance between two group elements.
    pub fn distance(&self, other: &Self) -> T {
        (&self.matrix - &other.matrix).norm()
    }

    /// `Ad_g y = g y g^{-1}`. Errors when the stored drift exceeds the bound,
    /// since the adjoint inverse is only valid near the unitary group.
    pub fn ad(&self, y: &AlgebraVector<T>) -> Result<AlgebraVector<T>> {
        if self.unitarity_drift > real(tol::DRIFT_MAX) {
            return Err(Error::ExcessiveDrift {
                drift: to_f64(self.unitarity_drift),
                bound: tol::DRIFT_MAX,
            });
        }
        let m = &self.matrix * &y.matrix * self.matrix.adjoint();
        AlgebraVector::from_matrix(&y.algebra, m)
    }
}

/// Matrix exponential of `t * x`; no re-unitarization, drift is recorded.
pub fn exp_matrix<T: Real>(x: &AlgebraVector<T>, t: T) -> GroupElement<T> {
    let m = x.matrix.map(|z| z * Complex::new(t, T::zero())).exp();
    GroupElement::from_matrix(m)
}

/// Geodesic through `p` with initial left-pullback velocity `w`:
/// `p * exp(t w)`.
pub fn riemannian_exp<T: Real>(p: &GroupElement<T>, w: &AlgebraVector<T>, t: T) -> GroupElement<T> {
    p.compose(&exp_matrix(w, t))
}

/// Algebra element with independent standard-normal coordinates, for
/// seeded sampling checks.
pub fn random_vector<T: Real, R: rand::Rng + ?Sized>(
    algebra: &AlgebraRef<T>,
    rng: &mut R,
) -> AlgebraVector<T> {
    let coords = Coords::from_iterator(
        algebra.dim(),
        (0..algebra.dim()).map(|_| {
            // Box-Muller from two uniforms; avoids a rand_distr dependency.
            let u1: f64 = rng.random_range(1e-12..1.0);
            let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            real::<T>((-2.0 * u1.ln()).sqrt() * u2.cos())
        }),
    );
    AlgebraVector::from_coords(algebra, coords)
}

/// Bi-invariant curvature tensor `R(x,y)z = -1/4 [[x,y],z]`.
pub fn curvature<T: Real>(
    x: &AlgebraVector<T>,
    y: &AlgebraVector<T>,
    z: &AlgebraVector<T>,
) -> Result<AlgebraVector<T>> {
    Ok(x.bracket(y)?.bracket(z)?.scaled(-real::<T>(0.25)))
}

/// `sec(x,y) = 1/4 |[x,y]|^2 / (|x|^2 |y|^2 - <x,y>^2)`; nonnegative, zero
/// exactly on commuting pairs.
pub fn sectional_curvature<T: Real>(x: &AlgebraVector<T>, y: &AlgebraVector<T>) -> Result<T> {
    let nx2 = x.inner(x);
    let ny2 = y.inner(y);
    let xy = x.inner(y);
    let denom = nx2 * ny2 - xy * xy;
    if denom <= real::<T>(1e-12) * nx2 * ny2 || denom <= T::zero() {
        return Err(Error::DegeneratePlane);
    }
    let br = x.bracket(y)?;
    Ok(real::<T>(0.25) * br.inner(&br) / denom)
}

/// True iff the bracket of every pair lies back in the span of the list.
pub fn is_subalgebra<T: Real>(vectors: &[AlgebraVector<T>]) -> Result<bool> {
    let first = vectors.first().ok_or(Error::ZeroVector)?;
    let alg = first.algebra();
    let dim = alg.dim();
    let mut m = RMat::<T>::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v.coords());
    }
    let q = orthonormal_span(&m, real(tol::KRYLOV_RANK_REL));
    for (i, a) in vectors.iter().enumerate() {
        for b in vectors.iter().skip(i) {
            let br = a.bracket(b)?;
            let c = br.coords();
            let resid = (c - &q * (q.transpose() * c)).norm();
            let scale = T::one() + a.norm() * b.norm();
            if resid > real::<T>(tol::MEMBERSHIP) * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orthonormal basis for the column span, with a relative singular value cutoff.
pub fn orthonormal_span<T: Real>(m: &RMat<T>, rel_cutoff: T) -> RMat<T> {
    if m.ncols() == 0 {
        return RMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let smax = svd.singular_values.max();
    let cutoff = rel_cutoff * smax.max(T::one() * real(1e-300));
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff && smax > T::zero())
        .count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the kernel of `m`, with a cutoff relative to the
/// largest singular value.
pub fn kernel_basis<T: Real>(m: &RMat<T>, rel_cutoff: T) -> RMat<T> {
    // The kernel is the orthogonal complement of the row space. Complete
    // the row-space basis with coordinate vectors via Gram-Schmidt; the
    // thin SVD alone does not expose trailing null directions.
    let ncols = m.ncols();
    let q = orthonormal_span(&m.transpose(), rel_cutoff);
    let want = ncols - q.ncols();
    let mut out = RMat::zeros(ncols, 0);
    for i in 0..ncols {
        if out.ncols() == want {
            break;
        }
        let mut r = Coords::<T>::zeros(ncols);
        r[i] = T::one();
        for _ in 0..2 {
            if q.ncols() > 0 {
                r -= &q * (q.transpose() * &r);
            }
            if out.ncols() > 0 {
                r -= &out * (out.transpose() * &r);
            }
        }
        let n = r.norm();
        if n > real(1e-6) {
            let k = out.ncols();
            out = out.insert_column(k, T::zero());
            out.set_column(k, &(r / n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = AlgebraRef<f64>;

    fn su2() -> A {
        LieAlgebra::build(Family::Su, 2).unwrap()
    }

    /// Unnormalized su(2) generators E1=diag(i,-i), E2, E3 as in the
    /// quaternion basis.
    fn su2_e123(alg: &A) -> [AlgebraVector<f64>; 3] {
        let e1 = AlgebraVector::from_matrix(alg, su_diag(2, 1)).unwrap();
        let e2 = AlgebraVector::from_matrix(alg, skew_e(2, 0, 1)).unwrap();
        let e3 = AlgebraVector::from_matrix(alg, skew_f(2, 0, 1)).unwrap();
        [e1, e2, e3]
    }

    #[test]
    fn dims_match_families() {
        assert_eq!(su2().dim(), 3);
        assert_eq!(LieAlgebra::<f64>::build(Family::Su, 4).unwrap().dim(), 15);
        assert_eq!(LieAlgebra::<f64>::build(Family::So, 3).unwrap().dim(), 3);
        assert_eq!(LieAlgebra::<f64>::build(Family::So, 5).unwrap().dim(), 10);
    }

    #[test]
    fn su4_contains_e12() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 4).unwrap();
        // E_12 (1-based) = skew_e(4,0,1); must be an algebra member with
        // norm sqrt(2) under the fixed inner product.
        let v = AlgebraVector::from_matrix(&alg, skew_e(4, 0, 1)).unwrap();
        assert!((v.norm() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn basis_orthonormal_and_anti_hermitian() {
        for alg in [
            LieAlgebra::<f64>::build(Family::Su, 3).unwrap(),
            LieAlgebra::<f64>::build(Family::So, 4).unwrap(),
        ] {
            for (i, a) in alg.basis().iter().enumerate() {
                assert!(anti_hermitian_residual(a) < 1e-12);
                for (j, b) in alg.basis().iter().enumerate() {
                    let ip = trace_ip(a, b);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12, "ip({i},{j}) = {ip}");
                }
            }
        }
    }

    #[test]
    fn su2_bracket_table() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        // [E1,E1] = 0
        assert!(e1.bracket(&e1).unwrap().norm() < 1e-14);
        // [E1,E2] = 2 E3
        let b = e1.bracket(&e2).unwrap();
        assert!((&b - &e3.scaled(2.0)).norm() < 1e-12);
        // [E2,E3] = 2 E1
        let b = e2.bracket(&e3).unwrap();
        assert!((&b - &e1.scaled(2.0)).norm() < 1e-12);
    }

    #[test]
    fn su4_bracket_x_e12() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 4).unwrap();
        let mut xm = CMat::<f64>::zeros(4, 4);
        xm[(0, 0)] = Complex::new(0.0, -1.0);
        xm[(2, 2)] = Complex::new(0.0, 1.0);
        let x = AlgebraVector::from_matrix(&alg, xm).unwrap();
        let e12 = AlgebraVector::from_matrix(&alg, skew_e(4, 0, 1)).unwrap();
        let f12 = AlgebraVector::from_matrix(&alg, skew_f(4, 0, 1)).unwrap();
        let b = x.bracket(&e12).unwrap();
        assert!((&b - &f12.scaled(-1.0)).norm() < 1e-12);
        // ad_X^2 E12 = -E12
        let b2 = x.bracket(&b).unwrap();
        assert!((&b2 - &e12.scaled(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn ad_operator_matches_bracket() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let ad = e1.ad_operator();
        // ad_operator(0) is zero
        assert!(AlgebraVector::zero(&alg).ad_operator().norm() < 1e-15);
        let map = |v: &AlgebraVector<f64>| AlgebraVector::from_coords(&alg, &ad * v.coords());
        assert!((&map(&e2) - &e3.scaled(2.0)).norm() < 1e-12);
        assert!((&map(&e3) - &e2.scaled(-2.0)).norm() < 1e-12);
        assert!(map(&e1).norm() < 1e-12);
        // antisymmetric as a real matrix
        assert!((&ad + &ad.transpose()).norm() < 1e-12);
    }

    #[test]
    fn exp_su2_closed_forms() {
        let alg = su2();
        let [e1, e2, _] = su2_e123(&alg);
        let g = exp_matrix(&e1, 0.0);
        assert!(g.distance(&GroupElement::identity(2)) < 1e-14);
        // exp(pi E1) = -I
        let g = exp_matrix(&e1, std::f64::consts::PI);
        let minus_i = GroupElement::from_matrix(CMat::identity(2, 2).map(|z| -z));
        assert!(g.distance(&minus_i) < 1e-12);
        // exp(t E2) is the plane rotation by t
        let t = 0.7;
        let g = exp_matrix(&e2, t);
        let mut rot = CMat::<f64>::zeros(2, 2);
        rot[(0, 0)] = Complex::new(t.cos(), 0.0);
        rot[(0, 1)] = Complex::new(t.sin(), 0.0);
        rot[(1, 0)] = Complex::new(-t.sin(), 0.0);
        rot[(1, 1)] = Complex::new(t.cos(), 0.0);
        assert!(g.distance(&GroupElement::from_matrix(rot)) < 1e-12);
    }

    #[test]
    fn ad_conjugation_rotation() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        // Ad(I, y) = y
        let idg = GroupElement::identity(2);
        assert!((&idg.ad(&e2).unwrap() - &e2).norm() < 1e-14);
        // Ad(exp(-s E1)) E2 = cos(2s) E2 - sin(2s) E3
        let s = 0.37;
        let g = exp_matrix(&e1, -s);
        let got = g.ad(&e2).unwrap();
        let want = &e2.scaled((2.0 * s).cos()) - &e3.scaled((2.0 * s).sin());
        assert!((&got - &want).norm() < 1e-12);
        // Ad(exp(s X)) X = X
        let g = exp_matrix(&e1, s);
        assert!((&g.ad(&e1).unwrap() - &e1).norm() < 1e-12);
    }

    #[test]
    fn riemannian_exp_basics() {
        let alg = su2();
        let [e1, e2, _] = su2_e123(&alg);
        let idg = GroupElement::identity(2);
        let t = 1.3;
        assert!(riemannian_exp(&idg, &e1, t)
            .distance(&exp_matrix(&e1, t))
            < 1e-13);
        let p = exp_matrix(&e2, 0.4);
        assert!(riemannian_exp(&p, &AlgebraVector::zero(&alg), t).distance(&p) < 1e-13);
    }

    #[test]
    fn curvature_su2() {
        let alg = su2();
        let [_, e2, e3] = su2_e123(&alg);
        // R(x,x)z = 0
        assert!(curvature(&e2, &e2, &e3).unwrap().norm() < 1e-14);
        // R(E2,E3)E2 = -1/4 [[E2,E3],E2] = -E3
        let r = curvature(&e2, &e3, &e2).unwrap();
        assert!((&r - &e3.scaled(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn curvature_jacobi_identity_form() {
        // R(J,X)X = -1/4 ad_X^2 J, the form entering the Jacobi equation.
        let alg = su2();
        let [e1, e2, _] = su2_e123(&alg);
        let r = curvature(&e2, &e1, &e1).unwrap();
        let ad = e1.ad_operator();
        let want = AlgebraVector::from_coords(&alg, &ad * (&ad * e2.coords()) * (-0.25));
        assert!((&r - &want).norm() < 1e-12);
    }

    #[test]
    fn sectional_curvature_su2() {
        let alg = su2();
        let [e1, e2, _] = su2_e123(&alg);
        // commuting pair
        let s = sectional_curvature(&e1, &e1.scaled(1.0).bracket(&e1).unwrap());
        assert!(s.is_err() || s.unwrap() < 1e-12);
        let s12 = sectional_curvature(&e1, &e2).unwrap();
        assert!(s12 > 0.0);
        let s21 = sectional_curvature(&e2, &e1).unwrap();
        assert!((s12 - s21).abs() < 1e-12);
        assert!(sectional_curvature(&e1, &e1.scaled(2.0)).is_err());
    }

    #[test]
    fn subalgebra_checks() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        assert!(is_subalgebra(std::slice::from_ref(&e1)).unwrap());
        assert!(!is_subalgebra(&[e2.clone(), e3.clone()]).unwrap());
        assert!(is_subalgebra(&[e1, e2, e3]).unwrap());
    }

    #[test]
    fn custom_algebra_roundtrip() {
        // span{E1} inside su(2): a one-dimensional custom torus algebra.
        let mats = vec![su_diag::<f64>(2, 1)];
        let alg = LieAlgebra::from_custom_basis("torus", mats).unwrap();
        assert_eq!(alg.dim(), 1);
        // a non-closed set errors
        let bad = vec![skew_e::<f64>(2, 0, 1), skew_f::<f64>(2, 0, 1)];
        assert!(matches!(
            LieAlgebra::from_custom_basis("bad", bad),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn kernel_and_span_helpers() {
        let m = RMat::<f64>::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let k = kernel_basis(&m, 1e-10);
        assert_eq!(k.ncols(), 1);
        assert!((k.column(0)[2]).abs() > 0.99);
        let q = orthonormal_span(&m.transpose(), 1e-10);
        assert_eq!(q.ncols(), 2);
    }
}
