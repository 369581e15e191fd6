//! Good-triple verdicts, example constructors, sign search, and surface
//! sampling.
//!
//! A triple `{X, V, A}` is *good* when the two exponential
//! parameterizations built from its Jacobi fields agree for all `(s,t)`.
//! Goodness is decided here by four routes: the finite Krylov-bracket
//! certificate, the series independence-in-t condition, the left/right
//! per-frequency test, and a direct numerical surface comparison. The
//! routes are independent and must agree; the curvature condition is a
//! necessary filter only.

use crate::algebra::{
    exp_matrix, is_subalgebra, orthonormal_span, AlgebraVector, Coords, GroupElement, RMat,
};
use crate::error::{Error, Result};
use crate::jacobi::{jacobi_series_eval, JacobiField};
use crate::scalar::{real, Real};
use crate::spectral::{
    weak_regularity_of, AdExpansion, RootDecomposition, SpectralDecomposition,
};
use crate::tol;

/// The ordered data `{X, V, A}` with the derived certificate seeds
/// `B = 1/2 [X,V] - A` and `Bbar = 1/2 [V,X] - A`.
#[derive(Debug, Clone)]
pub struct Triple<T: Real> {
    pub x: AlgebraVector<T>,
    pub v: AlgebraVector<T>,
    pub a: AlgebraVector<T>,
    pub b: AlgebraVector<T>,
    pub b_bar: AlgebraVector<T>,
}

impl<T: Real> Triple<T> {
    pub fn new(x: AlgebraVector<T>, v: AlgebraVector<T>, a: AlgebraVector<T>) -> Result<Self> {
        let half_xv = x.bracket(&v)?.scaled(real(0.5));
        let b = &half_xv - &a;
        let b_bar = &(-&half_xv) - &a;
        Ok(Triple { x, v, a, b, b_bar })
    }
}

/// Which decision route produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AlgebraicKrylov,
    ConditionQ2,
    LrCor,
    NumericalSurface,
    CurvatureNecessary,
    SingleEigenspace,
    ConstantLength,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::AlgebraicKrylov => "algebraic-krylov",
            Method::ConditionQ2 => "condition-q2",
            Method::LrCor => "lrcor",
            Method::NumericalSurface => "numerical-surface",
            Method::CurvatureNecessary => "curvature-necessary",
            Method::SingleEigenspace => "single-eigenspace",
            Method::ConstantLength => "constant-length",
        };
        write!(f, "{s}")
    }
}

/// One labelled residual entering a verdict.
#[derive(Debug, Clone)]
pub struct CheckDetail<T> {
    pub label: String,
    pub residual: T,
}

/// Outcome of one check: `good` holds when the residual is within the
/// method tolerance. Necessary-only methods prove nothing on success.
#[derive(Debug, Clone)]
pub struct Verdict<T: Real> {
    pub method: Method,
    pub good: bool,
    pub necessary_only: bool,
    pub residual: T,
    pub tolerance: T,
    pub details: Vec<CheckDetail<T>>,
}

impl<T: Real> Verdict<T> {
    fn from_details(
        method: Method,
        necessary_only: bool,
        tolerance: T,
        details: Vec<CheckDetail<T>>,
    ) -> Self {
        let residual = details
            .iter()
            .fold(T::zero(), |a, d| a.max(d.residual));
        Verdict {
            method,
            good: residual <= tolerance,
            necessary_only,
            residual,
            tolerance,
            details,
        }
    }
}

/// Orthonormal basis of the Krylov closure `span{seed, A seed, A^2 seed, ...}`,
/// grown Arnoldi-style until the rank stabilizes.
pub fn krylov_closure<T: Real>(seed: &Coords<T>, a: &RMat<T>) -> RMat<T> {
    let dim = seed.len();
    let scale = seed.norm().max(T::one());
    let cutoff = real::<T>(tol::KRYLOV_RANK_REL);
    let mut q = RMat::<T>::zeros(dim, 0);
    let mut frontier: Vec<Coords<T>> = vec![seed.clone()];
    while let Some(w) = frontier.pop() {
        let mut r = w;
        for _ in 0..2 {
            if q.ncols() > 0 {
                r -= &q * (q.transpose() * &r);
            }
        }
        let n = r.norm();
        if n <= cutoff * scale {
            continue;
        }
        let r = r / n;
        let k = q.ncols();
        q = q.insert_column(k, T::zero());
        q.set_column(k, &r);
        if q.ncols() >= dim {
            break;
        }
        frontier.push(a * r);
    }
    q
}

/// Finite bracket certificate: `[ad_X^n B, ad_V^m Bbar] = 0` for all
/// `n, m >= 0`, decided via the two Krylov closures.
pub fn check_algebraic<T: Real>(triple: &Triple<T>) -> Result<Verdict<T>> {
    let alg = triple.x.algebra();
    let kx = krylov_closure(triple.b.coords(), &triple.x.ad_operator());
    let kv = krylov_closure(triple.b_bar.coords(), &triple.v.ad_operator());
    let mut details = Vec::new();
    for i in 0..kx.ncols() {
        let u = AlgebraVector::from_coords(alg, kx.column(i).into_owned());
        let mut worst = T::zero();
        for j in 0..kv.ncols() {
            let w = AlgebraVector::from_coords(alg, kv.column(j).into_owned());
            worst = worst.max(u.bracket(&w)?.norm());
        }
        details.push(CheckDetail {
            label: format!("max |[K_X(B)_{i}, K_V(Bbar)_*]|"),
            residual: worst,
        });
    }
    Ok(Verdict::from_details(
        Method::AlgebraicKrylov,
        false,
        real(tol::ALGEBRAIC_GOOD),
        details,
    ))
}

/// Default `t` samples: 7 points spanning one fundamental period of the
/// `Ad` orbit along the relevant geodesic direction. The window is
/// capped so truncated-series evaluations stay well inside their
/// convergence budget; any nontrivial interval decides the analytic
/// conditions sampled here.
pub fn default_t_samples<T: Real>(direction: &AlgebraVector<T>) -> Vec<T> {
    let spec = SpectralDecomposition::new(direction);
    let period = match spec.lambda_min() {
        Some(l) => real::<T>(std::f64::consts::TAU) / l,
        None => T::one(),
    };
    let cap = real::<T>(2.0) / (T::one() + direction.norm());
    let span = period.min(cap);
    (0..7)
        .map(|k| span * real(k as f64 / 7.0))
        .collect()
}

/// Series condition: `ad_{Xhat(t)}^m B` must be independent of `t` for
/// all `m >= 0`, with `Xhat(t)` evaluated by the swapped-role series.
pub fn check_condition_q2<T: Real>(triple: &Triple<T>, t_samples: &[T]) -> Result<Verdict<T>> {
    assert!(!t_samples.is_empty(), "need at least one t sample");
    let alg = triple.x.algebra();
    let dim = alg.dim();
    let ad_x = triple.x.ad_operator();
    let scale = T::one() + triple.x.norm() + triple.v.norm() + triple.a.norm();
    let mut details = Vec::new();
    for (ti, &t) in t_samples.iter().enumerate() {
        let xhat = jacobi_series_eval(&triple.v, &triple.x, &triple.a, t, tol::SERIES_TERMS);
        if xhat.remainder_bound > real::<T>(1e-12) * scale {
            return Err(Error::SeriesTruncation {
                bound: nalgebra::try_convert(xhat.remainder_bound).unwrap_or(f64::NAN),
                tol: 1e-12,
            });
        }
        let ad_xhat = xhat.value.ad_operator();
        let mut w_t = triple.b.coords().clone();
        let mut w_0 = triple.b.coords().clone();
        let mut worst = T::zero();
        for _m in 0..=dim {
            let denom = T::one() + w_0.norm();
            worst = worst.max((&w_t - &w_0).norm() / denom);
            w_t = &ad_xhat * w_t;
            w_0 = &ad_x * w_0;
        }
        details.push(CheckDetail {
            label: format!("max_m |ad_Xhat(t{ti})^m B - ad_X^m B|"),
            residual: worst,
        });
    }
    Ok(Verdict::from_details(
        Method::ConditionQ2,
        false,
        real(tol::Q2_GOOD),
        details,
    ))
}

fn freq_vanishing_details<T: Real>(
    expansion: &AdExpansion<T>,
    label: &str,
    mut check: impl FnMut(&AlgebraVector<T>) -> Result<T>,
) -> Result<Vec<CheckDetail<T>>> {
    let mut details = Vec::new();
    let r = check(&expansion.constant)?;
    details.push(CheckDetail {
        label: format!("{label}: constant part"),
        residual: r,
    });
    for term in &expansion.terms {
        for (name, part) in [("cos", &term.cos_part), ("sin", &term.sin_part)] {
            let r = check(part)?;
            details.push(CheckDetail {
                label: format!("{label}: {name} @ lambda={:.4}", nalgebra::try_convert::<T, f64>(term.lambda).unwrap_or(f64::NAN)),
                residual: r,
            });
        }
    }
    Ok(details)
}

/// Left/right characterization of the triple
/// `{X, V_L + V_R, 1/2 [X, V_L - V_R]}`: the two `for all t` bracket
/// conditions, verified per frequency component, plus a redundant
/// randomized `t`-sampling guard.
pub fn check_lrcor<T: Real>(
    x: &AlgebraVector<T>,
    v_l: &AlgebraVector<T>,
    v_r: &AlgebraVector<T>,
) -> Result<Verdict<T>> {
    let spec = SpectralDecomposition::new(x);
    let kernel_part = spec.project_kernel(v_r).norm();
    if kernel_part > real::<T>(tol::MEMBERSHIP) * (T::one() + v_r.norm()) {
        return Err(Error::NotOrthogonalToKernel {
            residual: nalgebra::try_convert(kernel_part).unwrap_or(f64::NAN),
        });
    }
    let expansion = spec.ad_expansion(v_r);
    let adx_vl = x.bracket(v_l)?;
    let mut details = Vec::new();
    // Condition (1): [Ad_{e^{-tX}} V_R, ad_X V_L] = 0 for all t.
    let norm1 = T::one() + v_r.norm() * adx_vl.norm();
    details.extend(freq_vanishing_details(&expansion, "cond1", |part| {
        Ok(part.bracket(&adx_vl)?.norm() / norm1)
    })?);
    // Condition (2): [ad_{V_L}^m X, [Ad_{e^{-tX}} V_R, V_L]] = 0 for m >= 1,
    // with m ranging over the Krylov closure of {ad_{V_L}^m X}.
    let seed = v_l.bracket(x)?;
    let km = krylov_closure(seed.coords(), &v_l.ad_operator());
    let alg = x.algebra();
    let norm2 = T::one() + v_r.norm() * v_l.norm();
    for mi in 0..km.ncols() {
        let u = AlgebraVector::from_coords(alg, km.column(mi).into_owned());
        details.extend(freq_vanishing_details(
            &expansion,
            &format!("cond2 m-basis {mi}"),
            |part| Ok(u.bracket(&part.bracket(v_l)?)?.norm() / norm2),
        )?);
    }
    // Randomized sampling guard against frequency bookkeeping errors.
    for (k, t) in default_t_samples(x).into_iter().enumerate() {
        let conj = exp_matrix(x, -t).ad(v_r)?;
        let r1 = conj.bracket(&adx_vl)?.norm() / norm1;
        let inner = conj.bracket(v_l)?;
        let mut r2 = T::zero();
        for mi in 0..km.ncols() {
            let u = AlgebraVector::from_coords(alg, km.column(mi).into_owned());
            r2 = r2.max(u.bracket(&inner)?.norm() / norm2);
        }
        details.push(CheckDetail {
            label: format!("sampled t{k}"),
            residual: r1.max(r2),
        });
    }
    Ok(Verdict::from_details(
        Method::LrCor,
        false,
        real(tol::ALGEBRAIC_GOOD),
        details,
    ))
}

/// Grid specification for surface sampling.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec<T> {
    pub s_range: (T, T),
    pub t_range: (T, T),
    pub s_count: usize,
    pub t_count: usize,
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec {
            s_range: (real(-2.0), real(2.0)),
            t_range: (real(-2.0), real(2.0)),
            s_count: 21,
            t_count: 21,
        }
    }
}

impl<T: Real> GridSpec<T> {
    fn axis(range: (T, T), count: usize) -> Vec<T> {
        let (a, b) = range;
        if count == 1 {
            return vec![a];
        }
        (0..count)
            .map(|i| a + (b - a) * real(i as f64 / (count - 1) as f64))
            .collect()
    }
}

/// The two parameterizations of a triple's surface sampled over a grid,
/// with the pointwise deviation field.
#[derive(Debug, Clone)]
pub struct SurfaceSample<T: Real> {
    pub s_values: Vec<T>,
    pub t_values: Vec<T>,
    /// Row-major over `(s_index, t_index)`.
    pub f: Vec<GroupElement<T>>,
    pub f_tilde: Vec<GroupElement<T>>,
    pub deviations: Vec<T>,
    pub max_deviation: T,
}

impl<T: Real> SurfaceSample<T> {
    pub fn at(&self, si: usize, ti: usize) -> (&GroupElement<T>, &GroupElement<T>, T) {
        let k = si * self.t_values.len() + ti;
        (&self.f[k], &self.f_tilde[k], self.deviations[k])
    }
}

/// Sample `f(s,t) = e^{tV} exp(s Xhat(t))` and
/// `ftilde(s,t) = e^{sX} exp(t Vhat(s))` over the grid.
pub fn sample_surface<T: Real>(triple: &Triple<T>, grid: &GridSpec<T>) -> Result<SurfaceSample<T>> {
    let s_values = GridSpec::axis(grid.s_range, grid.s_count);
    let t_values = GridSpec::axis(grid.t_range, grid.t_count);
    let field_v = JacobiField::new(&triple.x, &triple.v, &triple.a);
    let field_x = JacobiField::new(&triple.v, &triple.x, &triple.a);
    // Pre-evaluate the Jacobi directions along each axis.
    let vhat: Vec<AlgebraVector<T>> = s_values
        .iter()
        .map(|&s| field_v.eval(s).map(|p| p.0))
        .collect::<Result<_>>()?;
    let xhat: Vec<AlgebraVector<T>> = t_values
        .iter()
        .map(|&t| field_x.eval(t).map(|p| p.0))
        .collect::<Result<_>>()?;
    let base_s: Vec<GroupElement<T>> = s_values.iter().map(|&s| exp_matrix(&triple.x, s)).collect();
    let base_t: Vec<GroupElement<T>> = t_values.iter().map(|&t| exp_matrix(&triple.v, t)).collect();
    let mut f = Vec::with_capacity(s_values.len() * t_values.len());
    let mut f_tilde = Vec::with_capacity(f.capacity());
    let mut deviations = Vec::with_capacity(f.capacity());
    let mut max_dev = T::zero();
    for (si, &s) in s_values.iter().enumerate() {
        for (ti, &t) in t_values.iter().enumerate() {
            let p = base_t[ti].compose(&exp_matrix(&xhat[ti], s));
            let q = base_s[si].compose(&exp_matrix(&vhat[si], t));
            let d = p.distance(&q);
            max_dev = max_dev.max(d);
            f.push(p);
            f_tilde.push(q);
            deviations.push(d);
        }
    }
    Ok(SurfaceSample {
        s_values,
        t_values,
        f,
        f_tilde,
        deviations,
        max_deviation: max_dev,
    })
}

/// Brute-force verdict: compare the two surface parameterizations over a
/// grid. Non-good triples keep their deviation field as diagnostic output.
pub fn check_surface_numeric<T: Real>(
    triple: &Triple<T>,
    grid: &GridSpec<T>,
) -> Result<(Verdict<T>, SurfaceSample<T>)> {
    let sample = sample_surface(triple, grid)?;
    let scale = T::one() + triple.x.norm() + triple.v.norm() + triple.a.norm();
    let verdict = Verdict::from_details(
        Method::NumericalSurface,
        false,
        real::<T>(tol::SURFACE_GOOD) * scale,
        vec![CheckDetail {
            label: "max grid deviation".into(),
            residual: sample.max_deviation,
        }],
    );
    Ok((verdict, sample))
}

/// Necessary condition `R(X,V)A = 0`: failure proves the triple is not
/// good; success proves nothing.
pub fn check_curvature_necessary<T: Real>(triple: &Triple<T>) -> Result<Verdict<T>> {
    let r = crate::algebra::curvature(&triple.x, &triple.v, &triple.a)?;
    let scale = T::one() + triple.x.norm() * triple.v.norm() * triple.a.norm();
    Ok(Verdict::from_details(
        Method::CurvatureNecessary,
        true,
        real::<T>(tol::CURVATURE_NECESSARY) * scale,
        vec![CheckDetail {
            label: "|R(X,V)A|".into(),
            residual: r.norm(),
        }],
    ))
}

/// Which coset fibration a constructed triple models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
}

/// Coset-fibration triple: `A = +1/2 [X,V]` (left) or `-1/2 [X,V]`
/// (right), with `V` vertical in the given subalgebra and `X` horizontal.
pub fn make_coset_triple<T: Real>(
    subalg_basis: &[AlgebraVector<T>],
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    side: CosetSide,
) -> Result<Triple<T>> {
    if !is_subalgebra(subalg_basis)? {
        return Err(Error::CosetConstraint(
            "vertical space",
            "the given vectors do not span a subalgebra".into(),
        ));
    }
    let alg = x.algebra();
    let mut m = RMat::<T>::zeros(alg.dim(), subalg_basis.len());
    for (j, b) in subalg_basis.iter().enumerate() {
        m.set_column(j, b.coords());
    }
    let q = orthonormal_span(&m, real(tol::KRYLOV_RANK_REL));
    let v_out = (v.coords() - &q * (q.transpose() * v.coords())).norm();
    if v_out > real::<T>(tol::MEMBERSHIP) * (T::one() + v.norm()) {
        return Err(Error::ComponentConstraint(
            "V outside the vertical subalgebra",
            nalgebra::try_convert(v_out).unwrap_or(f64::NAN),
        ));
    }
    let x_in = (q.transpose() * x.coords()).norm();
    if x_in > real::<T>(tol::MEMBERSHIP) * (T::one() + x.norm()) {
        return Err(Error::ComponentConstraint(
            "X not horizontal",
            nalgebra::try_convert(x_in).unwrap_or(f64::NAN),
        ));
    }
    let sign = match side {
        CosetSide::Left => real::<T>(0.5),
        CosetSide::Right => real::<T>(-0.5),
    };
    let a = x.bracket(v)?.scaled(sign);
    Triple::new(x.clone(), v.clone(), a)
}

/// Residual of `[Ad_{e^{sX}} V_alpha, V_beta] = 0 for all s`, checked
/// per frequency.
pub fn biquotient_commutation_residual<T: Real>(
    x: &AlgebraVector<T>,
    v_alpha: &AlgebraVector<T>,
    v_beta: &AlgebraVector<T>,
) -> Result<T> {
    let spec = SpectralDecomposition::new(x);
    let expansion = spec.ad_expansion(v_alpha);
    let norm = T::one() + v_alpha.norm() * v_beta.norm();
    let mut worst = expansion.constant.bracket(v_beta)?.norm() / norm;
    for term in &expansion.terms {
        worst = worst.max(term.cos_part.bracket(v_beta)?.norm() / norm);
        worst = worst.max(term.sin_part.bracket(v_beta)?.norm() / norm);
    }
    Ok(worst)
}

/// Biquotient triple from two roots `alpha, beta` with `alpha +- beta`
/// not a root and both nonzero on `X`:
/// `V = V_alpha - V_beta`, `A = -1/2 [X, V_alpha + V_beta]`.
pub fn make_biquotient_triple<T: Real>(
    dec: &RootDecomposition<T>,
    root_i: usize,
    root_j: usize,
    v_alpha: &AlgebraVector<T>,
    v_beta: &AlgebraVector<T>,
) -> Result<Triple<T>> {
    if root_i == root_j {
        // Opposite roots share a plane, so equality also covers alpha = -beta.
        return Err(Error::RootsNotDistinct);
    }
    let x = dec.x();
    let spaces = dec.root_spaces();
    let alpha = &spaces[root_i];
    let beta = &spaces[root_j];
    for (idx, rs) in [(root_i, alpha), (root_j, beta)] {
        if rs.lambda_x <= real(1e-8) {
            return Err(Error::RootVanishesOnX {
                index: idx,
                value: nalgebra::try_convert(rs.lambda_x).unwrap_or(f64::NAN),
            });
        }
    }
    // alpha +- beta must miss every root (both plane orientations).
    let scale = spaces
        .iter()
        .fold(T::zero(), |m, r| m.max(r.root.norm()))
        .max(T::one());
    let tolerance = real::<T>(1e-8) * scale;
    for (name, comb) in [
        ("plus", &alpha.root + &beta.root),
        ("minus", &alpha.root - &beta.root),
    ] {
        for rs in spaces {
            if (&comb - &rs.root).norm() <= tolerance || (&comb + &rs.root).norm() <= tolerance {
                return Err(Error::RootSumIsRoot(name));
            }
        }
    }
    for (label, vec, rs) in [("V_alpha", v_alpha, alpha), ("V_beta", v_beta, beta)] {
        let p = crate::spectral::project(vec, &rs.basis());
        let out = (&p - vec).norm();
        if out > real::<T>(tol::MEMBERSHIP) * (T::one() + vec.norm()) {
            return Err(Error::ComponentConstraint(
                match label {
                    "V_alpha" => "V_alpha outside its root space",
                    _ => "V_beta outside its root space",
                },
                nalgebra::try_convert(out).unwrap_or(f64::NAN),
            ));
        }
    }
    let resid = biquotient_commutation_residual(x, v_alpha, v_beta)?;
    if resid > real(1e-8) {
        return Err(Error::ComponentConstraint(
            "biquotient commutation [Ad_{e^{sX}} V_alpha, V_beta]",
            nalgebra::try_convert(resid).unwrap_or(f64::NAN),
        ));
    }
    let v = v_alpha - v_beta;
    let a = x.bracket(&(v_alpha + v_beta))?.scaled(real(-0.5));
    Triple::new(x.clone(), v, a)
}

/// The exceptional SU(4) example: `X = diag(-i, 0, i, 0)` with left and
/// right data concentrated on one eigenspace of `ad_X^2`.
#[derive(Debug, Clone)]
pub struct Su4Example<T: Real> {
    pub x: AlgebraVector<T>,
    pub v_l: AlgebraVector<T>,
    pub v_r: AlgebraVector<T>,
    pub triple: Triple<T>,
}

pub fn make_su4_example<T: Real>() -> Result<Su4Example<T>> {
    use crate::algebra::{skew_e, skew_f, CMat, Family, LieAlgebra};
    use num_complex::Complex;
    let alg = LieAlgebra::<T>::build(Family::Su, 4)?;
    let mut xm = CMat::<T>::zeros(4, 4);
    xm[(0, 0)] = Complex::new(T::zero(), -T::one());
    xm[(2, 2)] = Complex::new(T::zero(), T::one());
    let x = AlgebraVector::from_matrix(&alg, xm)?;
    // V_L = E_12 + E_23 + E_34 + E_14, V_R = F_12 + F_23 + F_34 - F_14
    // (1-based index pairs).
    let v_l = AlgebraVector::from_matrix(
        &alg,
        skew_e(4, 0, 1) + skew_e(4, 1, 2) + skew_e(4, 2, 3) + skew_e(4, 0, 3),
    )?;
    let v_r = AlgebraVector::from_matrix(
        &alg,
        skew_f(4, 0, 1) + skew_f(4, 1, 2) + skew_f(4, 2, 3) - skew_f(4, 0, 3),
    )?;
    let v = &v_l + &v_r;
    let a = x.bracket(&(&v_l - &v_r))?.scaled(real(0.5));
    let triple = Triple::new(x.clone(), v, a)?;
    Ok(Su4Example { x, v_l, v_r, triple })
}

/// Sufficient condition: `V_L, V_R` in a single eigenspace of `ad_X^2`
/// and `[Ad_{e^{-tX}} V_R, V_L] = 0` for all `t` (per frequency).
pub fn check_single_eigenspace_criterion<T: Real>(
    x: &AlgebraVector<T>,
    v_l: &AlgebraVector<T>,
    v_r: &AlgebraVector<T>,
) -> Result<Verdict<T>> {
    let spec = SpectralDecomposition::new(x);
    let scale = T::one() + v_l.norm() + v_r.norm();
    // (1): both vectors inside one nonzero eigenspace.
    let mut single = scale;
    for i in 1..spec.clusters().len() {
        let rl = (&spec.project(v_l, i) - v_l).norm();
        let rr = (&spec.project(v_r, i) - v_r).norm();
        single = single.min(rl + rr);
    }
    if v_l.norm() + v_r.norm() <= real(1e-12) {
        single = T::zero();
    }
    let mut details = vec![CheckDetail {
        label: "single-eigenspace containment".into(),
        residual: single / scale,
    }];
    // (2): per-frequency vanishing of [Ad_{e^{-tX}} V_R, V_L].
    let expansion = spec.ad_expansion(v_r);
    let norm = T::one() + v_r.norm() * v_l.norm();
    details.extend(freq_vanishing_details(&expansion, "commutation", |part| {
        Ok(part.bracket(v_l)?.norm() / norm)
    })?);
    Ok(Verdict::from_details(
        Method::SingleEigenspace,
        false,
        real(tol::ALGEBRAIC_GOOD),
        details,
    ))
}

/// One candidate from the finite sign enumeration.
#[derive(Debug, Clone)]
pub struct SignCandidate<T: Real> {
    pub signs: Vec<i8>,
    pub a: AlgebraVector<T>,
    pub verdict: Verdict<T>,
}

/// Default cap on the number of root spaces entering the enumeration.
pub const SIGN_SEARCH_CAP: usize = 20;

/// Enumerate all `A` candidates `sum_i eps_i 1/2 [X, V^i]` over the root
/// spaces carrying `V`, for weakly regular `X`. The torus component of
/// `A` is forced to zero (it would make the field unbounded). Ordering
/// is lexicographic in the sign vector, `+1` before `-1`.
pub fn sign_search<T: Real>(
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    cap: usize,
) -> Result<Vec<SignCandidate<T>>> {
    let dec = RootDecomposition::new(x)?;
    let reg = weak_regularity_of(&dec)?;
    if !reg.weakly_regular {
        let witness = reg
            .witness
            .map(|w| {
                format!(
                    "lambda={:.6}, {} dependent roots",
                    nalgebra::try_convert::<T, f64>(w.lambda).unwrap_or(f64::NAN),
                    w.roots.len()
                )
            })
            .unwrap_or_else(|| "unknown".into());
        return Err(Error::NotWeaklyRegular { witness });
    }
    let cut = real::<T>(1e-10) * (T::one() + v.norm());
    let mut brackets = Vec::new();
    for rs in dec.root_spaces() {
        let vi = crate::spectral::project(v, &rs.basis());
        if vi.norm() > cut {
            brackets.push(x.bracket(&vi)?.scaled(real(0.5)));
        }
    }
    let k = brackets.len();
    if k > cap {
        return Err(Error::SignSearchTooLarge(k, cap));
    }
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let mut signs = Vec::with_capacity(k);
        let mut a = AlgebraVector::zero(x.algebra());
        for (i, half_bracket) in brackets.iter().enumerate() {
            // bit 0 means +1 so candidates come out lexicographically.
            let plus = mask & (1 << (k - 1 - i)) == 0;
            signs.push(if plus { 1 } else { -1 });
            a = if plus {
                &a + half_bracket
            } else {
                &a - half_bracket
            };
        }
        let candidate = Triple::new(x.clone(), v.clone(), a.clone())?;
        let necessary = check_curvature_necessary(&candidate)?;
        let verdict = if necessary.good {
            check_algebraic(&candidate)?
        } else {
            necessary
        };
        out.push(SignCandidate { signs, a, verdict });
    }
    Ok(out)
}

/// Verify the constant-length conclusion on a good, bounded triple: the
/// per-eigenspace predicate and the sampled-norm constancy must agree.
pub fn check_constant_length<T: Real>(triple: &Triple<T>) -> Result<Verdict<T>> {
    let algebraic = check_algebraic(triple)?;
    if !algebraic.good {
        return Err(Error::PreconditionUnmet(
            "triple is not good; the constant-length conclusion does not apply".into(),
        ));
    }
    let field = JacobiField::new(&triple.x, &triple.v, &triple.a);
    if !field.is_bounded() {
        return Err(Error::UnboundedField);
    }
    let structural = field.is_constant_length()?;
    let lambda_min = field
        .spectral()
        .lambda_min()
        .unwrap_or_else(|| T::one());
    let span = real::<T>(4.0 * std::f64::consts::PI) / lambda_min;
    let n = 200;
    let mut norms = Vec::with_capacity(n);
    for k in 0..n {
        let s = span * real(k as f64 / n as f64);
        norms.push(field.eval(s)?.0.norm());
    }
    let mean = norms.iter().fold(T::zero(), |a, &b| a + b) / real(n as f64);
    let var = norms
        .iter()
        .fold(T::zero(), |a, &b| a + (b - mean) * (b - mean))
        / real(n as f64);
    let rel_std = if mean > T::zero() {
        var.sqrt() / mean
    } else {
        T::zero()
    };
    let details = vec![
        CheckDetail {
            label: "component predicate (0 = constant)".into(),
            residual: if structural { T::zero() } else { T::one() },
        },
        CheckDetail {
            label: "relative std of |Vhat(s)| over 200 samples".into(),
            residual: rel_std,
        },
    ];
    Ok(Verdict::from_details(
        Method::ConstantLength,
        false,
        real(tol::SERIES_AGREEMENT),
        details,
    ))
}
