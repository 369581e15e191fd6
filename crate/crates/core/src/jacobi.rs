//! Closed-form Jacobi fields along geodesics through the identity,
//! their left/right-invariant decomposition, boundedness and
//! constant-length predicates, and independent ODE oracles.
//!
//! Everything is expressed in the left-pullback to the algebra. Two
//! frequency conventions coexist and are both honored exactly: the
//! closed form oscillates at `lambda_i s / 2` on top of parallel
//! transport, while the `Ad_{e^{-sX}}` form of a bounded field
//! oscillates at `lambda_i`.

use crate::algebra::{exp_matrix, AlgebraVector};
use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::spectral::SpectralDecomposition;
use crate::tol;

/// Parallel transport of `v` along `s -> exp(sX)`, left-pulled-back:
/// `Ad_{exp(-sX/2)} v`. The closed form is validated against
/// [`parallel_transport_ode_oracle`].
pub fn parallel_transport<T: Real>(
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    s: T,
) -> Result<AlgebraVector<T>> {
    exp_matrix(x, -s / real(2.0)).ad(v)
}

/// RK4 integration of the left-pullback parallel ODE `W' = -1/2 [x, W]`.
pub fn parallel_transport_ode_oracle<T: Real>(
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    s: T,
    step: T,
) -> AlgebraVector<T> {
    let ad = x.ad_operator();
    let half = real::<T>(0.5);
    let f = |w: &crate::algebra::Coords<T>| -(&ad * w) * half;
    let w = rk4(v.coords().clone(), s, step, f);
    AlgebraVector::from_coords(v.algebra(), w)
}

fn rk4<T: Real, F>(mut y: nalgebra::DVector<T>, s: T, step: T, f: F) -> nalgebra::DVector<T>
where
    F: Fn(&nalgebra::DVector<T>) -> nalgebra::DVector<T>,
{
    if s == T::zero() {
        return y;
    }
    let n: usize = nalgebra::try_convert::<T, f64>((s.abs() / step).ceil())
        .map(|v| v as usize)
        .unwrap_or(1)
        .max(1);
    let h = s / real(n as f64);
    let half = real::<T>(0.5);
    let sixth = T::one() / real(6.0);
    for _ in 0..n {
        let k1 = f(&y);
        let k2 = f(&(&y + &k1 * (h * half)));
        let k3 = f(&(&y + &k2 * (h * half)));
        let k4 = f(&(&y + &k3 * h));
        y += (k1 + k2 * real::<T>(2.0) + k3 * real::<T>(2.0) + k4) * (h * sixth);
    }
    y
}

/// Per-eigenspace data `(E_i, F_i)` of a Jacobi field.
#[derive(Debug, Clone)]
pub struct Component<T: Real> {
    pub lambda: T,
    pub e: AlgebraVector<T>,
    pub f: AlgebraVector<T>,
}

/// The unique left and right vectors of a bounded field, `J_R` in the
/// orthogonal complement of the kernel.
#[derive(Debug, Clone)]
pub struct LeftRight<T: Real> {
    pub j_l: AlgebraVector<T>,
    pub j_r: AlgebraVector<T>,
}

/// A Jacobi field along `s -> exp(sX)` with initial data `J(0) = V`,
/// `J'(0) = A`, held in closed form via the eigenspaces of `ad_X^2`.
#[derive(Debug, Clone)]
pub struct JacobiField<T: Real> {
    x: AlgebraVector<T>,
    v: AlgebraVector<T>,
    a: AlgebraVector<T>,
    spectral: SpectralDecomposition<T>,
    components: Vec<Component<T>>,
    left_right: Option<LeftRight<T>>,
}

impl<T: Real> JacobiField<T> {
    pub fn new(x: &AlgebraVector<T>, v: &AlgebraVector<T>, a: &AlgebraVector<T>) -> Self {
        let spectral = SpectralDecomposition::new(x);
        Self::with_spectral(spectral, v, a)
    }

    pub fn with_spectral(
        spectral: SpectralDecomposition<T>,
        v: &AlgebraVector<T>,
        a: &AlgebraVector<T>,
    ) -> Self {
        let x = spectral.x().clone();
        let mut components = Vec::with_capacity(spectral.clusters().len());
        for (i, cl) in spectral.clusters().iter().enumerate() {
            let e = spectral.project(v, i);
            let pa = spectral.project(a, i);
            // J'(0) = F_0 + sum (lambda_i / 2) F_i fixes the scaling.
            let f = if i == 0 {
                pa
            } else {
                pa.scaled(real::<T>(2.0) / cl.lambda)
            };
            components.push(Component {
                lambda: cl.lambda,
                e,
                f,
            });
        }
        let f0 = &components[0].f;
        let bounded = f0.norm() <= real::<T>(tol::BOUNDED_KERNEL) * (T::one() + a.norm());
        let left_right = if bounded {
            let inv_a = ad_pseudo_inverse_apply(&x, a);
            let half_v = v.scaled(real(0.5));
            Some(LeftRight {
                j_l: &half_v + &inv_a,
                j_r: &half_v - &inv_a,
            })
        } else {
            None
        };
        JacobiField {
            x,
            v: v.clone(),
            a: a.clone(),
            spectral,
            components,
            left_right,
        }
    }

    pub fn x(&self) -> &AlgebraVector<T> {
        &self.x
    }

    pub fn v(&self) -> &AlgebraVector<T> {
        &self.v
    }

    pub fn a(&self) -> &AlgebraVector<T> {
        &self.a
    }

    pub fn spectral(&self) -> &SpectralDecomposition<T> {
        &self.spectral
    }

    pub fn components(&self) -> &[Component<T>] {
        &self.components
    }

    /// Bounded iff the kernel component `F_0` of the initial derivative vanishes.
    pub fn is_bounded(&self) -> bool {
        self.left_right.is_some()
    }

    /// `(J_L, J_R)` with `J_R` orthogonal to the kernel; `None` when unbounded.
    pub fn left_right(&self) -> Option<&LeftRight<T>> {
        self.left_right.as_ref()
    }

    /// Left-pullback value and covariant derivative at parameter `s`:
    ///
    /// `J(s) = P_s E_0 + s P_s F_0 + sum cos(l s/2) P_s E_i + sin(l s/2) P_s F_i`.
    pub fn eval(&self, s: T) -> Result<(AlgebraVector<T>, AlgebraVector<T>)> {
        let half = real::<T>(0.5);
        let mut u = &self.components[0].e + &self.components[0].f.scaled(s);
        let mut du = self.components[0].f.clone();
        for c in &self.components[1..] {
            let phase = c.lambda * s * half;
            u = &u + &(&c.e.scaled(phase.cos()) + &c.f.scaled(phase.sin()));
            let rate = c.lambda * half;
            du = &du
                + &(&c.f.scaled(rate * phase.cos()) - &c.e.scaled(rate * phase.sin()));
        }
        let g = exp_matrix(&self.x, -s * half);
        Ok((g.ad(&u)?, g.ad(&du)?))
    }

    /// Constant length iff for each nonzero eigenspace `E_i` and `F_i`
    /// are orthogonal and of equal length. Errors on unbounded fields.
    pub fn is_constant_length(&self) -> Result<bool> {
        if !self.is_bounded() {
            return Err(Error::UnboundedField);
        }
        let scale = T::one() + self.v.norm() + self.a.norm();
        let tolerance = real::<T>(tol::SERIES_AGREEMENT) * scale * scale;
        for c in &self.components[1..] {
            if c.e.inner(&c.f).abs() > tolerance {
                return Ok(false);
            }
            if (c.e.norm() - c.f.norm()).abs() > tolerance {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `ad_X^{-1}` as the Moore-Penrose pseudo-inverse, applied to `w`.
/// Singular values below `1e-10 * sigma_max` are treated as zero.
pub fn ad_pseudo_inverse_apply<T: Real>(
    x: &AlgebraVector<T>,
    w: &AlgebraVector<T>,
) -> AlgebraVector<T> {
    let ad = x.ad_operator();
    let svd = ad.svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = real::<T>(tol::PINV_CUTOFF_REL) * smax;
    let mut sv = svd.singular_values.clone();
    for s in sv.iter_mut() {
        *s = if *s > cutoff { T::one() / *s } else { T::zero() };
    }
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    let mut tmp = u.transpose() * w.coords();
    for (i, t) in tmp.iter_mut().enumerate() {
        *t *= sv[i];
    }
    AlgebraVector::from_coords(w.algebra(), vt.transpose() * tmp)
}

/// Result of a truncated series evaluation, with the reported remainder bound.
#[derive(Debug, Clone)]
pub struct SeriesEval<T: Real> {
    pub value: AlgebraVector<T>,
    pub remainder_bound: T,
}

/// Truncated series form of the left-pullback Jacobi field,
/// `V + sum_{n>=1} (-s)^n/n! (1/2 ad_X^n V - ad_X^{n-1} A)`,
/// valid for bounded or unbounded fields.
pub fn jacobi_series_eval<T: Real>(
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    a: &AlgebraVector<T>,
    s: T,
    terms: usize,
) -> SeriesEval<T> {
    assert!(terms >= 1, "series needs at least one term");
    let ad = x.ad_operator();
    let half = real::<T>(0.5);
    let mut value = v.coords().clone();
    // p = ad^{n-1} a, q = ad^n v
    let mut p = a.coords().clone();
    let mut q = &ad * v.coords();
    let mut coeff = T::one();
    for n in 1..=terms {
        coeff *= -s / real(n as f64);
        value += (&q * half - &p) * coeff;
        if n < terms {
            p = &ad * p;
            q = &ad * q;
        }
    }
    // (|s ad|^N / N!) * (|v| + |a|), with the operator norm bounded by
    // the Frobenius norm.
    let op = ad.norm();
    let mut bound = v.norm() + a.norm();
    for n in 1..=(terms + 1) {
        bound *= s.abs() * op / real(n as f64);
    }
    SeriesEval {
        value: AlgebraVector::from_coords(v.algebra(), value),
        remainder_bound: bound,
    }
}

/// RK4 integration of the Jacobi equation in left-pullback coordinates.
///
/// With `K` the pullback of the covariant derivative, the system is
/// `J' = K - 1/2 ad_X J`, `K' = -1/2 ad_X K + 1/4 ad_X^2 J`; the last
/// term is `-R(J,X)X` for the bi-invariant curvature. Discretization
/// order 4.
pub fn jacobi_ode_oracle<T: Real>(
    x: &AlgebraVector<T>,
    v: &AlgebraVector<T>,
    a: &AlgebraVector<T>,
    s: T,
    step: T,
) -> AlgebraVector<T> {
    let ad = x.ad_operator();
    let dim = ad.nrows();
    let half = real::<T>(0.5);
    let quarter = real::<T>(0.25);
    let ad2 = &ad * &ad;
    let f = |y: &nalgebra::DVector<T>| {
        let j = y.rows(0, dim).into_owned();
        let k = y.rows(dim, dim).into_owned();
        let dj = &k - (&ad * &j) * half;
        let dk = -(&ad * &k) * half + (&ad2 * &j) * quarter;
        let mut out = nalgebra::DVector::zeros(2 * dim);
        out.rows_mut(0, dim).copy_from(&dj);
        out.rows_mut(dim, dim).copy_from(&dk);
        out
    };
    let mut y0 = nalgebra::DVector::zeros(2 * dim);
    y0.rows_mut(0, dim).copy_from(v.coords());
    y0.rows_mut(dim, dim).copy_from(a.coords());
    let y = rk4(y0, s, step, f);
    AlgebraVector::from_coords(v.algebra(), y.rows(0, dim).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{skew_e, skew_f, su_diag, AlgebraRef, Family, LieAlgebra};

    fn su2() -> AlgebraRef<f64> {
        LieAlgebra::build(Family::Su, 2).unwrap()
    }

    fn su2_e123(alg: &AlgebraRef<f64>) -> [AlgebraVector<f64>; 3] {
        [
            AlgebraVector::from_matrix(alg, su_diag(2, 1)).unwrap(),
            AlgebraVector::from_matrix(alg, skew_e(2, 0, 1)).unwrap(),
            AlgebraVector::from_matrix(alg, skew_f(2, 0, 1)).unwrap(),
        ]
    }

    fn pseudo_random_vec(alg: &AlgebraRef<f64>, seed: u64) -> AlgebraVector<f64> {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = crate::algebra::Coords::from_iterator(
            alg.dim(),
            (0..alg.dim()).map(|_| rng.random_range(-1.0..1.0)),
        );
        AlgebraVector::from_coords(alg, c)
    }

    #[test]
    fn transport_closed_form_su2() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let s = 0.83;
        // cos(s) E2 - sin(s) E3: half the Ad_{e^{-sX}} frequency
        let got = parallel_transport(&e1, &e2, s).unwrap();
        let want = &e2.scaled(s.cos()) - &e3.scaled(s.sin());
        assert!((&got - &want).norm() < 1e-12);
        // kernel vectors are fixed
        let got = parallel_transport(&e1, &e1, s).unwrap();
        assert!((&got - &e1).norm() < 1e-12);
        // s = 0 is the identity
        let got = parallel_transport(&e1, &e3, 0.0).unwrap();
        assert!((&got - &e3).norm() < 1e-14);
    }

    #[test]
    fn transport_matches_ode_oracle() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 3).unwrap();
        for seed in 0..5 {
            let x = pseudo_random_vec(&alg, seed);
            let v = pseudo_random_vec(&alg, seed + 100);
            for &s in &[0.5, 2.0, 5.0] {
                let closed = parallel_transport(&x, &v, s).unwrap();
                let ode = parallel_transport_ode_oracle(&x, &v, s, 1e-3);
                assert!((&closed - &ode).norm() < 1e-8, "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn initial_data_roundtrip() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 3).unwrap();
        let x = pseudo_random_vec(&alg, 1);
        let v = pseudo_random_vec(&alg, 2);
        let a = pseudo_random_vec(&alg, 3);
        let field = JacobiField::new(&x, &v, &a);
        let (j0, dj0) = field.eval(0.0).unwrap();
        assert!((&j0 - &v).norm() < 1e-10);
        assert!((&dj0 - &a).norm() < 1e-10);
    }

    #[test]
    fn su2_closed_form_regression() {
        // x = E1, v = E2, a = 0: J(s) = 1/2 (1 + cos 2s) E2 - 1/2 sin(2s) E3,
        // norm |cos s| |E2|. Pins both frequency conventions at once.
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let zero = AlgebraVector::zero(&alg);
        let field = JacobiField::new(&e1, &e2, &zero);
        for k in 0..9 {
            let s = 0.41 * k as f64;
            let (j, _) = field.eval(s).unwrap();
            let want =
                &e2.scaled(0.5 * (1.0 + (2.0 * s).cos())) - &e3.scaled(0.5 * (2.0 * s).sin());
            assert!((&j - &want).norm() < 1e-10, "s={s}");
            assert!((j.norm() - s.cos().abs() * e2.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn linear_field_in_kernel() {
        // v = 0, a = F_0 in U_0: J(s) = s a.
        let alg = su2();
        let [e1, _, _] = su2_e123(&alg);
        let zero = AlgebraVector::zero(&alg);
        let field = JacobiField::new(&e1, &zero, &e1);
        assert!(!field.is_bounded());
        let (j, _) = field.eval(2.5).unwrap();
        assert!((&j - &e1.scaled(2.5)).norm() < 1e-10);
    }

    #[test]
    fn left_right_decomposition() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let zero = AlgebraVector::zero(&alg);
        // a = 0, v in U_0: J_L = J_R = v/2
        let field = JacobiField::new(&e2, &e1, &zero);
        let lr = field.left_right().unwrap();
        assert!((&lr.j_l - &e1.scaled(0.5)).norm() < 1e-10);
        assert!((&lr.j_r - &e1.scaled(0.5)).norm() < 1e-10);
        // x = E1, v = E2, a = 0
        let field = JacobiField::new(&e1, &e2, &zero);
        let lr = field.left_right().unwrap();
        assert!((&lr.j_l - &e2.scaled(0.5)).norm() < 1e-10);
        assert!((&lr.j_r - &e2.scaled(0.5)).norm() < 1e-10);
        // nonzero kernel component of a: unbounded
        let field = JacobiField::new(&e1, &e2, &e1);
        assert!(field.left_right().is_none());
        // invariants of the bounded case: v = J_L + J_R, a = 1/2 [x, J_L - J_R]
        let a = e3.scaled(-1.0);
        let field = JacobiField::new(&e1, &e2, &a);
        let lr = field.left_right().unwrap();
        assert!((&(&lr.j_l + &lr.j_r) - &e2).norm() < 1e-10);
        let diff = &lr.j_l - &lr.j_r;
        let want_a = e1.bracket(&diff).unwrap().scaled(0.5);
        assert!((&want_a - &a).norm() < 1e-10);
        // J_R in the complement of the kernel
        let spec = field.spectral();
        assert!(spec.project_kernel(&lr.j_r).norm() < 1e-10);
    }

    #[test]
    fn eval_matches_left_right_form() {
        // For bounded fields: J(s) = J_L + Ad_{e^{-sX}} J_R.
        let alg = LieAlgebra::<f64>::build(Family::Su, 3).unwrap();
        let x = pseudo_random_vec(&alg, 7);
        let spec = SpectralDecomposition::new(&x);
        let v = pseudo_random_vec(&alg, 8);
        // force boundedness: take a with zero kernel component
        let raw = pseudo_random_vec(&alg, 9);
        let a = &raw - &spec.project_kernel(&raw);
        let field = JacobiField::new(&x, &v, &a);
        let lr = field.left_right().expect("bounded");
        for k in 0..8 {
            let s = -1.5 + 0.6 * k as f64;
            let (j, _) = field.eval(s).unwrap();
            let want = &lr.j_l + &exp_matrix(&x, -s).ad(&lr.j_r).unwrap();
            assert!((&j - &want).norm() < 1e-9, "s={s}");
        }
    }

    #[test]
    fn series_agrees_with_closed_form() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 3).unwrap();
        for seed in 0..6 {
            let x = pseudo_random_vec(&alg, 20 + seed);
            let v = pseudo_random_vec(&alg, 40 + seed);
            let a = pseudo_random_vec(&alg, 60 + seed);
            let field = JacobiField::new(&x, &v, &a);
            for &s in &[-2.0, -0.7, 0.0, 1.3, 2.0] {
                let (j, _) = field.eval(s).unwrap();
                let ser = jacobi_series_eval(&x, &v, &a, s, 40);
                assert!((&j - &ser.value).norm() < 1e-10, "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn series_trivial_cases() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let ser = jacobi_series_eval(&e1, &e2, &e3, 0.0, 10);
        assert!((&ser.value - &e2).norm() < 1e-14);
        // abelian direction: everything brackets to zero against itself
        let ser = jacobi_series_eval(&e1, &e1, &AlgebraVector::zero(&alg), 1.0, 10);
        assert!((&ser.value - &e1).norm() < 1e-14);
    }

    #[test]
    fn ode_oracle_agreement() {
        let alg = LieAlgebra::<f64>::build(Family::Su, 3).unwrap();
        for seed in 0..3 {
            let x = pseudo_random_vec(&alg, 200 + seed);
            let v = pseudo_random_vec(&alg, 300 + seed);
            let a = pseudo_random_vec(&alg, 400 + seed);
            let field = JacobiField::new(&x, &v, &a);
            for &s in &[1.0, 3.0, 5.0] {
                let (j, _) = field.eval(s).unwrap();
                let ode = jacobi_ode_oracle(&x, &v, &a, s, 1e-3);
                assert!((&j - &ode).norm() < 1e-6, "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn ode_oracle_flat_cases() {
        let alg = su2();
        let [e1, _, _] = su2_e123(&alg);
        let zero = AlgebraVector::zero(&alg);
        // parallel field: constant
        let j = jacobi_ode_oracle(&e1, &e1, &zero, 4.0, 1e-3);
        assert!((&j - &e1).norm() < 1e-8);
        // linear field: s * a
        let j = jacobi_ode_oracle(&e1, &zero, &e1, 4.0, 1e-3);
        assert!((&j - &e1.scaled(4.0)).norm() < 1e-8);
    }

    #[test]
    fn constant_length_predicate() {
        let alg = su2();
        let [e1, e2, e3] = su2_e123(&alg);
        let zero = AlgebraVector::zero(&alg);
        // a = 1/2 [x, v] makes the field the parallel transport of v
        let a = e2.bracket(&e1).unwrap().scaled(0.5);
        let field = JacobiField::new(&e2, &e1, &a);
        assert!(field.is_constant_length().unwrap());
        // E_1 = E2, F_1 = 0: norms differ, not constant
        let field = JacobiField::new(&e1, &e2, &zero);
        assert!(!field.is_constant_length().unwrap());
        // v = E2, a = -E3 gives F_1 = -E3: orthogonal, equal norms
        let field = JacobiField::new(&e1, &e2, &e3.scaled(-1.0));
        assert!(field.is_constant_length().unwrap());
        // sampled-norm cross-check of the last verdict
        let mut max_dev: f64 = 0.0;
        for k in 0..200 {
            let s = 4.0 * std::f64::consts::PI * k as f64 / 200.0 / 2.0;
            let (j, _) = field.eval(s).unwrap();
            max_dev = max_dev.max((j.norm() - e2.norm()).abs());
        }
        assert!(max_dev < 1e-9);
        // unbounded: error
        let field = JacobiField::new(&e1, &e2, &e1);
        assert!(matches!(
            field.is_constant_length(),
            Err(Error::UnboundedField)
        ));
    }
}
