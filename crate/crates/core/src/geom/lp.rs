//! Chebyshev-center style min-max over a finite direction set, solved as
//! a small linear program with a revised simplex method.

use nalgebra::LU;

use super::{Matrix, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ChebyshevCenter {
    pub center: Vector,
    /// `max_j (values_j - <center, u_j>)`, evaluated at `center`.
    pub radius: f64,
}

/// Minimizes `f(z) = max_j (values_j - <z, u_j>)`.
///
/// The LP `min r s.t. r + <z, u_j> >= values_j` is solved through its dual
/// `max sum_j w_j values_j s.t. sum_j w_j = 1, sum_j w_j u_j = 0, w >= 0`,
/// which has only `n + 1` rows. The basis is refactored from scratch at
/// every step, entering columns are the most violated primal constraints,
/// and Bland's rule takes over if the objective stalls. `(r, z)` are the
/// simplex multipliers of the optimal basis.
pub fn chebyshev_center(directions: &[Vector], values: &[f64]) -> Result<ChebyshevCenter> {
    let cols = directions.len();
    if cols == 0 || values.len() != cols {
        return Err(Error::InvalidArgument("one value per direction required".into()));
    }
    let n = directions[0].len();
    let lp = Lp { directions, n, cols };

    // phase 1 from the artificial basis
    let mut basis: Vec<usize> = (cols..cols + n + 1).collect();
    let phase1 = |j: usize| if j >= cols { -1.0 } else { 0.0 };
    lp.optimize(&mut basis, &phase1, 1.0)?;
    let (lu, _) = lp.factor(&basis)?;
    let x = lu.solve(&lp.rhs()).ok_or_else(singular)?;
    let infeas: f64 = basis.iter().zip(x.iter()).filter(|(&j, _)| j >= cols).map(|(_, v)| v.abs()).sum();
    if infeas > 1e-9 {
        return Err(Error::InvalidArgument("directions do not surround the origin".into()));
    }
    lp.evict_artificials(&mut basis)?;

    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let phase2 = |j: usize| if j >= cols { f64::NEG_INFINITY } else { values[j] };
    lp.optimize(&mut basis, &phase2, scale)?;

    let (_, b) = lp.factor(&basis)?;
    let cb = Vector::from_iterator(n + 1, basis.iter().map(|&j| values[j]));
    let y = b.transpose().lu().solve(&cb).ok_or_else(singular)?;
    let center = Vector::from_iterator(n, (0..n).map(|i| y[i + 1]));
    let radius = directions
        .iter()
        .zip(values)
        .map(|(u, h)| h - center.dot(u))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ChebyshevCenter { center, radius })
}

fn singular() -> Error {
    Error::InvalidArgument("singular simplex basis".into())
}

struct Lp<'a> {
    directions: &'a [Vector],
    n: usize,
    cols: usize,
}

impl Lp<'_> {
    fn rhs(&self) -> Vector {
        let mut b = Vector::zeros(self.n + 1);
        b[0] = 1.0;
        b
    }

    fn column(&self, j: usize) -> Vector {
        let mut a = Vector::zeros(self.n + 1);
        if j < self.cols {
            a[0] = 1.0;
            for i in 0..self.n {
                a[i + 1] = self.directions[j][i];
            }
        } else {
            a[j - self.cols] = 1.0;
        }
        a
    }

    fn factor(&self, basis: &[usize]) -> Result<(LU<f64, nalgebra::Dyn, nalgebra::Dyn>, Matrix)> {
        let m = self.n + 1;
        let mut b = Matrix::zeros(m, m);
        for (k, &j) in basis.iter().enumerate() {
            b.set_column(k, &self.column(j));
        }
        Ok((b.clone().lu(), b))
    }

    /// Maximizes `cost` over the structural columns (and, in phase 1,
    /// keeps artificials as they are).
    fn optimize(&self, basis: &mut [usize], cost: &dyn Fn(usize) -> f64, scale: f64) -> Result<()> {
        let eps = 1e-12 * scale;
        let max_iter = 20 * (self.cols + self.n + 1) + 1000;
        let mut stalled = 0usize;
        let mut bland = false;
        let mut last_obj = f64::NEG_INFINITY;
        for _ in 0..max_iter {
            let (lu, b) = self.factor(basis)?;
            let x = lu.solve(&self.rhs()).ok_or_else(singular)?;
            let cb = Vector::from_iterator(self.n + 1, basis.iter().map(|&j| cost(j)));
            let y = b.transpose().lu().solve(&cb).ok_or_else(singular)?;
            let obj = cb.dot(&x);
            if obj > last_obj + 1e-15 * scale {
                stalled = 0;
            } else {
                stalled += 1;
                if stalled > 50 {
                    bland = true;
                }
            }
            last_obj = last_obj.max(obj);

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols {
                if basis.contains(&j) {
                    continue;
                }
                let u = &self.directions[j];
                let reduced = cost(j) - y[0] - (0..self.n).map(|i| y[i + 1] * u[i]).sum::<f64>();
                if reduced > eps && entering.is_none_or(|(_, r)| reduced > r) {
                    entering = Some((j, reduced));
                    if bland {
                        break;
                    }
                }
            }
            let Some((c, _)) = entering else { return Ok(()) };
            let d = lu.solve(&self.column(c)).ok_or_else(singular)?;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..=self.n {
                if d[i] > 1e-12 {
                    let ratio = x[i].max(0.0) / d[i];
                    let better = match leave {
                        None => true,
                        // ties: artificials leave first, then the lowest index
                        Some((li, lr)) => {
                            let key = |k: usize| (basis[k] < self.cols, basis[k]);
                            ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && key(i) < key(li))
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::InvalidArgument("unbounded linear program".into()));
            };
            basis[r] = c;
        }
        Err(Error::NoConvergence { tol: eps, gap: f64::NAN })
    }

    /// Replaces artificial columns sitting at level zero by structural
    /// ones; the directions span the space, so a replacement exists.
    fn evict_artificials(&self, basis: &mut [usize]) -> Result<()> {
        for r in 0..basis.len() {
            if basis[r] < self.cols {
                continue;
            }
            let (lu, _) = self.factor(basis)?;
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.cols {
                if basis.contains(&j) {
                    continue;
                }
                let d = lu.solve(&self.column(j)).ok_or_else(singular)?;
                if best.is_none_or(|(_, v)| d[r].abs() > v) {
                    best = Some((j, d[r].abs()));
                }
            }
            match best {
                Some((j, v)) if v > 1e-9 => basis[r] = j,
                _ => return Err(Error::InvalidArgument("directions do not span the space".into())),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_sphere_net, vector};

    #[test]
    fn ball_support_recovers_center() {
        let net = make_sphere_net(2, 0.05).unwrap();
        let c = vector(&[0.3, -1.2]);
        let h: Vec<f64> = net.directions().iter().map(|u| c.dot(u) + 1.0).collect();
        let cc = chebyshev_center(net.directions(), &h).unwrap();
        assert!((cc.center - c).norm() < 1e-9);
        assert!((cc.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn segment_support() {
        // support of the segment [(0,0),(2,0)]: max(0, 2 u_x)
        let net = make_sphere_net(2, 0.01).unwrap();
        let h: Vec<f64> = net.directions().iter().map(|u| (2.0 * u[0]).max(0.0)).collect();
        let cc = chebyshev_center(net.directions(), &h).unwrap();
        assert!((&cc.center - vector(&[1.0, 0.0])).norm() < 2.0 * net.mesh(), "{:?} {}", cc.center.as_slice(), cc.radius);
        assert!((cc.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spatial_point() {
        let net = make_sphere_net(3, 0.3).unwrap();
        let p = vector(&[1.0, 2.0, -0.5]);
        let h: Vec<f64> = net.directions().iter().map(|u| p.dot(u)).collect();
        let cc = chebyshev_center(net.directions(), &h).unwrap();
        assert!((cc.center - p).norm() < 1e-9);
        assert!(cc.radius.abs() < 1e-9);
    }
}
