use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_finite, Matrix, Vector};
use crate::error::{Error, FitPrecondition, Result};

/// Orthogonal transformation followed by a translation: `x -> Q x + t`.
/// Reflections (`det Q = -1`) are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidMotion {
    rotation: Matrix,
    translation: Vector,
}

/// Entrywise tolerance on `Q^T Q - I`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

impl RigidMotion {
    pub fn new(rotation: Matrix, translation: Vector) -> Result<Self> {
        let n = translation.len();
        if rotation.nrows() != n || rotation.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rotation.nrows() });
        }
        check_finite(&translation)?;
        let deviation = (rotation.transpose() * &rotation - Matrix::identity(n, n)).amax();
        if !(deviation <= ORTHOGONALITY_TOL) {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(RigidMotion { rotation, translation })
    }

    pub fn identity(n: usize) -> Self {
        RigidMotion { rotation: Matrix::identity(n, n), translation: Vector::zeros(n) }
    }

    pub fn translation_by(t: Vector) -> Self {
        let n = t.len();
        RigidMotion { rotation: Matrix::identity(n, n), translation: t }
    }

    /// Planar rotation by `angle`, optionally preceded by the reflection
    /// `(x, y) -> (x, -y)`.
    pub fn planar(angle: f64, reflect: bool, translation: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let f = if reflect { -1.0 } else { 1.0 };
        let rotation = Matrix::from_row_slice(2, 2, &[c, -s * f, s, c * f]);
        RigidMotion { rotation, translation: Vector::from_column_slice(&translation) }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn rotation(&self) -> &Matrix {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector {
        &self.translation
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.rotation * x + &self.translation
    }

    /// Applies only the orthogonal part (directions transform this way).
    pub fn rotate(&self, u: &Vector) -> Vector {
        &self.rotation * u
    }

    /// `Q^T u`, the pull-back of a direction.
    pub fn rotate_back(&self, u: &Vector) -> Vector {
        self.rotation.tr_mul(u)
    }

    pub fn inverse(&self) -> Self {
        let qt = self.rotation.transpose();
        let t = -(&qt * &self.translation);
        RigidMotion { rotation: qt, translation: t }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidMotion) -> Self {
        RigidMotion {
            rotation: &self.rotation * &other.rotation,
            translation: &self.rotation * &other.translation + &self.translation,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.rotation.determinant()
    }

    /// Operator-norm distance of the orthogonal parts.
    pub fn rotation_distance(&self, other: &RigidMotion) -> f64 {
        let diff = &self.rotation - &other.rotation;
        diff.svd(false, false).singular_values.max()
    }

    pub fn translation_distance(&self, other: &RigidMotion) -> f64 {
        (&self.translation - &other.translation).norm()
    }
}

/// Haar-style random orthogonal matrix (QR of a Gaussian matrix with the
/// sign convention fixed), with determinant `-1` when `reflect` is set.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, reflect: bool, rng: &mut R) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    let det = q.determinant();
    if (det < 0.0) != reflect {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    q
}

/// Least-squares rigid motion (orthogonal, reflections allowed) mapping
/// `sources` onto `targets`. Returns the motion and its RMS residual.
pub fn procrustes_fit(sources: &[Vector], targets: &[Vector]) -> Result<(RigidMotion, f64)> {
    if sources.len() != targets.len() {
        return Err(Error::Fit(FitPrecondition::LengthMismatch));
    }
    let n = sources.first().map(|s| s.len()).ok_or(Error::Fit(FitPrecondition::TooFewPoints))?;
    if sources.len() < n + 1 {
        return Err(Error::Fit(FitPrecondition::TooFewPoints));
    }
    if sources.iter().chain(targets).any(|v| v.len() != n) {
        return Err(Error::Fit(FitPrecondition::DimensionMismatch));
    }
    let count = sources.len() as f64;
    let src_mean = sources.iter().fold(Vector::zeros(n), |acc, s| acc + s) / count;
    let tgt_mean = targets.iter().fold(Vector::zeros(n), |acc, t| acc + t) / count;

    let centered = Matrix::from_fn(n, sources.len(), |i, j| sources[j][i] - src_mean[i]);
    let smin = centered.clone().svd(false, false).singular_values.min();
    if !(smin > 1e-9) {
        return Err(Error::Fit(FitPrecondition::AffinelyDependent));
    }

    // cross-covariance H = sum (t - t̄)(s - s̄)^T; Q = U V^T from H = U Σ V^T
    let mut cross = Matrix::zeros(n, n);
    for (s, t) in sources.iter().zip(targets) {
        cross += (t - &tgt_mean) * (s - &src_mean).transpose();
    }
    let svd = cross.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let rotation = u * v_t;
    let translation = &tgt_mean - &rotation * &src_mean;
    let motion = RigidMotion { rotation, translation };
    let sq: f64 = sources
        .iter()
        .zip(targets)
        .map(|(s, t)| (motion.apply(s) - t).norm_squared())
        .sum();
    Ok((motion, (sq / count).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn simplex(n: usize) -> Vec<Vector> {
        let mut pts = vec![Vector::zeros(n)];
        for i in 0..n {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            pts.push(e);
        }
        pts
    }

    #[test]
    fn identity_on_simplex() {
        let pts = simplex(3);
        let (g, res) = procrustes_fit(&pts, &pts).unwrap();
        assert!(res < 1e-12);
        assert!(g.rotation_distance(&RigidMotion::identity(3)) < 1e-12);
        assert!(g.translation().norm() < 1e-12);
    }

    #[test]
    fn recovers_quarter_turn() {
        let pts = vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 2.0]), vector(&[-1.0, 1.0])];
        let planted = RigidMotion::planar(std::f64::consts::FRAC_PI_2, false, [0.0, 0.0]);
        let tgt: Vec<Vector> = pts.iter().map(|p| planted.apply(p)).collect();
        let (g, res) = procrustes_fit(&pts, &tgt).unwrap();
        assert!(res <= 1e-9);
        assert!(g.rotation_distance(&planted) < 1e-9);
        assert!((g.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recovers_reflection() {
        let pts = simplex(2);
        let planted = RigidMotion::planar(0.3, true, [1.0, -2.0]);
        let tgt: Vec<Vector> = pts.iter().map(|p| planted.apply(p)).collect();
        let (g, res) = procrustes_fit(&pts, &tgt).unwrap();
        assert!(res <= 1e-9);
        assert!((g.determinant() + 1.0).abs() < 1e-9);
        assert!(g.rotation_distance(&planted) < 1e-9);
        assert!(g.translation_distance(&planted) < 1e-9);
    }

    #[test]
    fn preconditions_are_named() {
        let pts = simplex(2);
        let err = procrustes_fit(&pts, &pts[..2]).unwrap_err();
        assert!(matches!(err, Error::Fit(FitPrecondition::LengthMismatch)));
        let err = procrustes_fit(&pts[..2], &pts[..2]).unwrap_err();
        assert!(matches!(err, Error::Fit(FitPrecondition::TooFewPoints)));
        let line = vec![vector(&[0.0, 0.0]), vector(&[1.0, 1.0]), vector(&[2.0, 2.0])];
        let err = procrustes_fit(&line, &line).unwrap_err();
        assert!(matches!(err, Error::Fit(FitPrecondition::AffinelyDependent)));
    }

    #[test]
    fn random_orthogonal_has_requested_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..5 {
            for reflect in [false, true] {
                let q = random_orthogonal(n, reflect, &mut rng);
                let g = RigidMotion::new(q, Vector::zeros(n)).unwrap();
                assert!((g.determinant() - if reflect { -1.0 } else { 1.0 }).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn non_orthogonal_rejected() {
        let q = Matrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            RigidMotion::new(q, Vector::zeros(2)),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn inverse_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_orthogonal(3, true, &mut rng);
        let g = RigidMotion::new(q, vector(&[1.0, 2.0, 3.0])).unwrap();
        let id = g.compose(&g.inverse());
        assert!(id.rotation_distance(&RigidMotion::identity(3)) < 1e-12);
        assert!(id.translation().norm() < 1e-12);
    }
}
