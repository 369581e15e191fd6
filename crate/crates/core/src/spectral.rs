//! Eigenspace decomposition of `ad_X^2`, maximal torus and root-space
//! refinement, dual roots, and the weak-regularity classification.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{kernel_basis, AlgebraVector, Coords, RMat};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::tol;

/// One eigenvalue cluster of `ad_X^2`: eigenvalue `-lambda^2` with an
/// orthonormal basis of the eigenspace as matrix columns (coordinates).
#[derive(Debug, Clone)]
pub struct EigenCluster<T: Real> {
    pub lambda: T,
    pub basis: RMat<T>,
}

impl<T: Real> EigenCluster<T> {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Orthogonal decomposition `g = U_0 + sum U_i` into eigenspaces of `ad_X^2`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Real> {
    x: AlgebraVector<T>,
    /// Cluster 0 is always the kernel `U_0`; the rest are sorted by
    /// increasing `lambda`.
    clusters: Vec<EigenCluster<T>>,
}

/// Project coordinates onto the column span of an orthonormal basis.
pub fn project_coords<T: Real>(basis: &RMat<T>, c: &Coords<T>) -> Coords<T> {
    if basis.ncols() == 0 {
        return Coords::zeros(c.len());
    }
    basis * (basis.transpose() * c)
}

/// Orthogonal projection of `v` onto the subspace spanned by the columns
/// of `basis` (idempotent; sums to `v` over a full decomposition).
pub fn project<T: Real>(v: &AlgebraVector<T>, basis: &RMat<T>) -> AlgebraVector<T> {
    AlgebraVector::from_coords(v.algebra(), project_coords(basis, v.coords()))
}

impl<T: Real> SpectralDecomposition<T> {
    /// Decompose the algebra into eigenspaces of `ad_X^2`.
    pub fn new(x: &AlgebraVector<T>) -> Self {
        let ad = x.ad_operator();
        let dim = ad.nrows();
        let m = &ad * &ad;
        // ad_X^2 is real symmetric negative semidefinite.
        let eig = SymmetricEigen::new(m);
        let scale = eig
            .eigenvalues
            .iter()
            .fold(T::zero(), |a, &b| a.max(b.abs()));
        let width = real::<T>(tol::CLUSTER_REL) * scale.max(T::one() * real(1e-300));
        // Sort by |eigenvalue| ascending so the kernel comes first.
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .abs()
                .partial_cmp(&eig.eigenvalues[b].abs())
                .unwrap()
        });
        let mut clusters: Vec<EigenCluster<T>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        let mut current_val = T::zero();
        let flush = |idxs: &[usize], val: T, clusters: &mut Vec<EigenCluster<T>>| {
            if idxs.is_empty() {
                return;
            }
            let mut basis = RMat::zeros(dim, idxs.len());
            for (c, &i) in idxs.iter().enumerate() {
                basis.set_column(c, &eig.eigenvectors.column(i));
            }
            let lambda = val.abs().max(T::zero()).sqrt();
            clusters.push(EigenCluster { lambda, basis });
        };
        for &i in &order {
            let e = eig.eigenvalues[i];
            let is_zero = e.abs() <= width;
            let v = if is_zero { T::zero() } else { e };
            if current.is_empty() {
                current_val = v;
                current.push(i);
            } else if (v - current_val).abs() <= width {
                current.push(i);
            } else {
                flush(&current, current_val, &mut clusters);
                current = vec![i];
                current_val = v;
            }
        }
        flush(&current, current_val, &mut clusters);
        // Guarantee a (possibly empty) kernel cluster in slot 0.
        if clusters.is_empty() || clusters[0].lambda > T::zero() {
            clusters.insert(
                0,
                EigenCluster {
                    lambda: T::zero(),
                    basis: RMat::zeros(dim, 0),
                },
            );
        }
        SpectralDecomposition {
            x: x.clone(),
            clusters,
        }
    }

    pub fn x(&self) -> &AlgebraVector<T> {
        &self.x
    }

    pub fn clusters(&self) -> &[EigenCluster<T>] {
        &self.clusters
    }

    /// The kernel `U_0 = null(ad_X^2)`.
    pub fn kernel(&self) -> &EigenCluster<T> {
        &self.clusters[0]
    }

    /// Clusters with nonzero eigenvalue, increasing `lambda`.
    pub fn nonzero(&self) -> &[EigenCluster<T>] {
        &self.clusters[1..]
    }

    /// Smallest nonzero frequency, if any.
    pub fn lambda_min(&self) -> Option<T> {
        self.nonzero().first().map(|c| c.lambda)
    }

    pub fn project(&self, v: &AlgebraVector<T>, cluster: usize) -> AlgebraVector<T> {
        project(v, &self.clusters[cluster].basis)
    }

    /// Component of `v` in the kernel of `ad_X^2`.
    pub fn project_kernel(&self, v: &AlgebraVector<T>) -> AlgebraVector<T> {
        self.project(v, 0)
    }

    /// Finite frequency expansion of `t -> Ad_{e^{-tX}} w`:
    /// constant part plus `cos(lambda_i t) c_i + sin(lambda_i t) s_i` terms.
    pub fn ad_expansion(&self, w: &AlgebraVector<T>) -> AdExpansion<T> {
        let ad = self.x.ad_operator();
        let constant = self.project_kernel(w);
        let mut terms = Vec::new();
        for (idx, cl) in self.nonzero().iter().enumerate() {
            let c = self.project(w, idx + 1);
            // e^{-t ad_X} acts on U_i as rotation with frequency lambda:
            // cos(lambda t) c - sin(lambda t) (ad_X / lambda) c.
            let s = AlgebraVector::from_coords(
                w.algebra(),
                &ad * c.coords() * (-T::one() / cl.lambda),
            );
            terms.push(AdTerm {
                lambda: cl.lambda,
                cos_part: c,
                sin_part: s,
            });
        }
        AdExpansion { constant, terms }
    }
}

/// One frequency of an `Ad_{e^{-tX}}` orbit.
#[derive(Debug, Clone)]
pub struct AdTerm<T: Real> {
    pub lambda: T,
    pub cos_part: AlgebraVector<T>,
    pub sin_part: AlgebraVector<T>,
}

/// Trigonometric-polynomial form of `t -> Ad_{e^{-tX}} w`.
#[derive(Debug, Clone)]
pub struct AdExpansion<T: Real> {
    pub constant: AlgebraVector<T>,
    pub terms: Vec<AdTerm<T>>,
}

impl<T: Real> AdExpansion<T> {
    pub fn eval(&self, t: T) -> AlgebraVector<T> {
        let mut out = self.constant.clone();
        for term in &self.terms {
            let a = (term.lambda * t).cos();
            let b = (term.lambda * t).sin();
            out = &out + &(&term.cos_part.scaled(a) + &term.sin_part.scaled(b));
        }
        out
    }
}

/// A two-dimensional oriented root plane.
#[derive(Debug, Clone)]
pub struct RootSpace<T: Real> {
    /// Orthonormal oriented pair spanning the plane; `ad_X w1` is a
    /// positive multiple of `w2` whenever the root is nonzero on `X`.
    pub w1: Coords<T>,
    pub w2: Coords<T>,
    /// Values of the root functional on the torus basis.
    pub root: DVector<T>,
    /// Dual root `[w1, ad_X w1]`, in coordinates; lies in the torus.
    pub dual_root: Coords<T>,
    /// `|root(X)|`, the rotation frequency of `Ad_{e^{tX}}` on this plane.
    pub lambda_x: T,
}

impl<T: Real> RootSpace<T> {
    pub fn basis(&self) -> RMat<T> {
        let mut m = RMat::zeros(self.w1.len(), 2);
        m.set_column(0, &self.w1);
        m.set_column(1, &self.w2);
        m
    }
}

/// Root-space decomposition `g = tau + sum l_i` relative to a maximal
/// abelian subalgebra containing `X`.
#[derive(Debug, Clone)]
pub struct RootDecomposition<T: Real> {
    x: AlgebraVector<T>,
    torus: RMat<T>,
    root_spaces: Vec<RootSpace<T>>,
}

const MAX_RANDOM_TRIES: usize = 24;

impl<T: Real> RootDecomposition<T> {
    /// Build with the default deterministic seed.
    pub fn new(x: &AlgebraVector<T>) -> Result<Self> {
        Self::with_seed(x, 0x5eed)
    }

    pub fn with_seed(x: &AlgebraVector<T>, seed: u64) -> Result<Self> {
        if x.norm() <= real(1e-300) {
            return Err(Error::ZeroVector);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let torus = maximal_torus(x, &mut rng)?;
        let complement = kernel_basis(&torus.transpose(), real(tol::KRYLOV_RANK_REL));
        let mut planes = Vec::new();
        split_into_planes(x, &torus, complement, &mut rng, &mut planes, 0)?;
        let mut root_spaces: Vec<RootSpace<T>> = planes
            .into_iter()
            .map(|p| make_root_space(x, &torus, p))
            .collect::<Result<_>>()?;
        // Canonical order: by frequency along X, then by root values.
        root_spaces.sort_by(|a, b| {
            a.lambda_x
                .partial_cmp(&b.lambda_x)
                .unwrap()
                .then_with(|| {
                    for (&p, &q) in a.root.iter().zip(b.root.iter()) {
                        if (p - q).abs() > real(1e-9) {
                            return p.partial_cmp(&q).unwrap();
                        }
                    }
                    std::cmp::Ordering::Equal
                })
        });
        Ok(RootDecomposition {
            x: x.clone(),
            torus,
            root_spaces,
        })
    }

    pub fn x(&self) -> &AlgebraVector<T> {
        &self.x
    }

    /// Orthonormal basis of the maximal abelian subalgebra, as columns.
    pub fn torus(&self) -> &RMat<T> {
        &self.torus
    }

    pub fn torus_dim(&self) -> usize {
        self.torus.ncols()
    }

    pub fn root_spaces(&self) -> &[RootSpace<T>] {
        &self.root_spaces
    }

    /// Coordinates of `v` relative to the torus basis.
    pub fn torus_coords(&self, v: &AlgebraVector<T>) -> DVector<T> {
        self.torus.transpose() * v.coords()
    }

    /// Group root spaces with nonzero frequency along `X` by that
    /// frequency; returns `(lambda, indices)` sorted by `lambda`.
    pub fn frequency_clusters(&self) -> Vec<FrequencyCluster<T>> {
        let scale = self
            .root_spaces
            .iter()
            .fold(T::zero(), |a, r| a.max(r.lambda_x));
        let width = real::<T>(tol::CLUSTER_REL) * scale.max(T::one() * real(1e-300));
        let mut order: Vec<usize> = (0..self.root_spaces.len())
            .filter(|&i| self.root_spaces[i].lambda_x > width)
            .collect();
        order.sort_by(|&a, &b| {
            self.root_spaces[a]
                .lambda_x
                .partial_cmp(&self.root_spaces[b].lambda_x)
                .unwrap()
        });
        let mut out: Vec<FrequencyCluster<T>> = Vec::new();
        for i in order {
            let l = self.root_spaces[i].lambda_x;
            match out.last_mut() {
                Some(c) if (l - c.lambda).abs() <= width => c.indices.push(i),
                _ => out.push(FrequencyCluster {
                    lambda: l,
                    indices: vec![i],
                }),
            }
        }
        out
    }
}

/// Index set of root spaces composing one nonzero eigenspace of `ad_X^2`.
#[derive(Debug, Clone)]
pub struct FrequencyCluster<T> {
    pub lambda: T,
    pub indices: Vec<usize>,
}

fn random_combination<T: Real, R: Rng>(basis: &RMat<T>, rng: &mut R) -> Coords<T> {
    let k = basis.ncols();
    let mut coeffs = Coords::<T>::zeros(k);
    for i in 0..k {
        coeffs[i] = real(rng.random_range(-1.0..1.0));
    }
    let v = basis * coeffs;
    let n = v.norm();
    if n > T::zero() {
        v / n
    } else {
        v
    }
}

/// Centralizer chain: start from `null(ad_X)` and intersect with the
/// kernels of generic elements until abelian.
fn maximal_torus<T: Real, R: Rng>(x: &AlgebraVector<T>, rng: &mut R) -> Result<RMat<T>> {
    let alg = x.algebra();
    let cutoff = real::<T>(tol::KRYLOV_RANK_REL);
    let mut k = kernel_basis(&x.ad_operator(), cutoff);
    for _ in 0..MAX_RANDOM_TRIES {
        if is_abelian(x, &k) {
            // Maximality: the joint centralizer of the candidate torus
            // must not exceed it.
            let mut stacked = RMat::zeros(0, alg.dim());
            for j in 0..k.ncols() {
                let t = AlgebraVector::from_coords(alg, k.column(j).into_owned());
                let ad = t.ad_operator();
                let rows = stacked.nrows();
                stacked = stacked.insert_rows(rows, alg.dim(), T::zero());
                stacked.rows_mut(rows, alg.dim()).copy_from(&ad);
            }
            let joint = kernel_basis(&stacked, cutoff);
            if joint.ncols() == k.ncols() {
                return Ok(k);
            }
            return Err(Error::TorusDegenerate(format!(
                "joint centralizer has dimension {} > torus dimension {}",
                joint.ncols(),
                k.ncols()
            )));
        }
        let g = random_combination(&k, rng);
        let gv = AlgebraVector::from_coords(alg, g);
        let restricted = gv.ad_operator() * &k;
        let coeff_kernel = kernel_basis(&restricted, cutoff);
        k = crate::algebra::orthonormal_span(&(&k * coeff_kernel), cutoff);
    }
    Err(Error::TorusDegenerate(
        "centralizer chain did not become abelian".into(),
    ))
}

fn is_abelian<T: Real>(x: &AlgebraVector<T>, k: &RMat<T>) -> bool {
    let alg = x.algebra();
    let tolerance = real::<T>(tol::MEMBERSHIP);
    for i in 0..k.ncols() {
        let a = AlgebraVector::from_coords(alg, k.column(i).into_owned());
        for j in (i + 1)..k.ncols() {
            let b = AlgebraVector::from_coords(alg, k.column(j).into_owned());
            if a.bracket(&b).map(|v| v.norm() > tolerance).unwrap_or(true) {
                return false;
            }
        }
    }
    true
}

/// Recursively split a torus-invariant subspace into 2-planes by
/// block-diagonalizing generic torus elements.
fn split_into_planes<T: Real, R: Rng>(
    x: &AlgebraVector<T>,
    torus: &RMat<T>,
    q: RMat<T>,
    rng: &mut R,
    out: &mut Vec<RMat<T>>,
    depth: usize,
) -> Result<()> {
    let m = q.ncols();
    if m == 0 {
        return Ok(());
    }
    if m % 2 != 0 {
        return Err(Error::RootPairingFailed(format!(
            "odd-dimensional invariant block of size {m}"
        )));
    }
    if m == 2 {
        out.push(q);
        return Ok(());
    }
    if depth > 64 {
        return Err(Error::RootPairingFailed("recursion depth exceeded".into()));
    }
    let alg = x.algebra();
    for _ in 0..MAX_RANDOM_TRIES {
        let g = random_combination(torus, rng);
        let gv = AlgebraVector::from_coords(alg, g);
        let s = q.transpose() * gv.ad_operator() * &q;
        let eig = SymmetricEigen::new(&s * &s);
        let scale = eig
            .eigenvalues
            .iter()
            .fold(T::zero(), |a, &b| a.max(b.abs()));
        if scale <= real(1e-20) {
            continue;
        }
        // Cluster with a wide margin; sub-splitting handles collisions.
        let width = real::<T>(1e-6) * scale;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match groups.last_mut() {
                Some(g)
                    if (eig.eigenvalues[i] - eig.eigenvalues[*g.last().unwrap()]).abs()
                        <= width =>
                {
                    g.push(i)
                }
                _ => groups.push(vec![i]),
            }
        }
        if groups.len() < 2 {
            continue;
        }
        for grp in groups {
            let mut sub = RMat::zeros(m, grp.len());
            for (c, &i) in grp.iter().enumerate() {
                sub.set_column(c, &eig.eigenvectors.column(i));
            }
            split_into_planes(x, torus, &q * sub, rng, out, depth + 1)?;
        }
        return Ok(());
    }
    Err(Error::RootPairingFailed(
        "no generic torus element separated the block".into(),
    ))
}

fn make_root_space<T: Real>(
    x: &AlgebraVector<T>,
    torus: &RMat<T>,
    plane: RMat<T>,
) -> Result<RootSpace<T>> {
    let alg = x.algebra();
    let q = crate::algebra::orthonormal_span(&plane, real(tol::KRYLOV_RANK_REL));
    if q.ncols() != 2 {
        return Err(Error::RootPairingFailed(
            "degenerate two-plane candidate".into(),
        ));
    }
    let mut w1 = q.column(0).into_owned();
    let mut w2 = q.column(1).into_owned();
    let root_value = |w1: &Coords<T>, w2: &Coords<T>, t: &AlgebraVector<T>| -> T {
        let img = t.ad_operator() * w1;
        img.dot(w2)
    };
    // Orientation: root(X) >= 0 when it does not vanish.
    let ax = root_value(&w1, &w2, x);
    if ax < T::zero() {
        w2 = -w2;
    }
    let r = torus.ncols();
    let mut root = DVector::zeros(r);
    for l in 0..r {
        let t = AlgebraVector::from_coords(alg, torus.column(l).into_owned());
        root[l] = root_value(&w1, &w2, &t);
    }
    let lambda_x = root_value(&w1, &w2, x).abs();
    let w1v = AlgebraVector::from_coords(alg, w1.clone());
    let adx_w1 = AlgebraVector::from_coords(alg, x.ad_operator() * &w1);
    let dual = w1v.bracket(&adx_w1)?;
    // keep the unused orientation deterministic
    let _ = &mut w1;
    Ok(RootSpace {
        w1,
        w2,
        root,
        dual_root: dual.coords().clone(),
        lambda_x,
    })
}

/// Verdict of the weak-regularity test, with the dependent cluster as a
/// witness on failure.
#[derive(Debug, Clone)]
pub struct WeakRegularity<T: Real> {
    pub weakly_regular: bool,
    pub witness: Option<DependentCluster<T>>,
}

/// A frequency cluster whose roots are linearly dependent.
#[derive(Debug, Clone)]
pub struct DependentCluster<T: Real> {
    pub lambda: T,
    pub roots: Vec<DVector<T>>,
}

/// `X` is weakly regular when, within each nonzero eigenspace of
/// `ad_X^2`, the contributing roots are linearly independent.
pub fn is_weakly_regular<T: Real>(x: &AlgebraVector<T>) -> Result<WeakRegularity<T>> {
    let dec = RootDecomposition::new(x)?;
    weak_regularity_of(&dec)
}

pub fn weak_regularity_of<T: Real>(dec: &RootDecomposition<T>) -> Result<WeakRegularity<T>> {
    for cluster in dec.frequency_clusters() {
        let roots: Vec<DVector<T>> = cluster
            .indices
            .iter()
            .map(|&i| dec.root_spaces()[i].root.clone())
            .collect();
        if roots.len() < 2 {
            continue;
        }
        let r = dec.torus_dim();
        let mut m = DMatrix::zeros(r, roots.len());
        for (j, rv) in roots.iter().enumerate() {
            m.set_column(j, rv);
        }
        let svd = m.svd(false, false);
        let smax = svd.singular_values.max();
        let smin = if roots.len() > r {
            T::zero()
        } else {
            svd.singular_values.iter().fold(smax, |a, &b| a.min(b))
        };
        if smin <= real::<T>(tol::ROOT_INDEP_REL) * smax {
            return Ok(WeakRegularity {
                weakly_regular: false,
                witness: Some(DependentCluster {
                    lambda: cluster.lambda,
                    roots,
                }),
            });
        }
    }
    Ok(WeakRegularity {
        weakly_regular: true,
        witness: None,
    })
}

/// One term of the constant-length diagnostic: amplitude `A_i` and
/// oriented angle `theta_i` of a root-space pair.
#[derive(Debug, Clone)]
pub struct DiagnosticTerm<T> {
    pub index: usize,
    pub amplitude: T,
    pub theta: T,
}

/// The trigonometric diagnostic `s -> sum A_i cos(theta_i - lambda s)`
/// attached to one frequency cluster.
#[derive(Debug, Clone)]
pub struct ConstantLengthDiagnostic<T: Real> {
    pub lambda: T,
    pub terms: Vec<DiagnosticTerm<T>>,
}

impl<T: Real> ConstantLengthDiagnostic<T> {
    pub fn eval(&self, s: T) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, t| acc + t.amplitude * (t.theta - self.lambda * s).cos())
    }
}

/// Per-root-space amplitudes and oriented angles of a left/right pair
/// over one frequency cluster; zero-amplitude indices are dropped.
pub fn constant_length_diagnostic<T: Real>(
    dec: &RootDecomposition<T>,
    v_l: &AlgebraVector<T>,
    v_r: &AlgebraVector<T>,
    cluster: &FrequencyCluster<T>,
) -> ConstantLengthDiagnostic<T> {
    let mut terms = Vec::new();
    let two_pi = real::<T>(std::f64::consts::TAU);
    for &i in &cluster.indices {
        let rs = &dec.root_spaces()[i];
        let a = v_l.coords().dot(&rs.w1);
        let b = v_l.coords().dot(&rs.w2);
        let c = v_r.coords().dot(&rs.w1);
        let d = v_r.coords().dot(&rs.w2);
        let amp = (a * a + b * b).sqrt() * (c * c + d * d).sqrt();
        if amp <= real(1e-12) {
            continue;
        }
        let phi_l = b.atan2(a);
        let phi_r = d.atan2(c);
        let mut theta = phi_r - phi_l;
        while theta < T::zero() {
            theta += two_pi;
        }
        while theta >= two_pi {
            theta -= two_pi;
        }
        terms.push(DiagnosticTerm {
            index: i,
            amplitude: amp,
            theta,
        });
    }
    ConstantLengthDiagnostic {
        lambda: cluster.lambda,
        terms,
    }
}
