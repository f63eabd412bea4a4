//! Certified support evaluation for finite intersections of balls.
//!
//! For `K = ⋂ B(x_i, r_i)` and a unit direction `u` the solver brackets
//! `h_K(u) = max_{y∈K} <y, u>` between
//! - a lower bound `<y, u>` at a strictly feasible point `y`, and
//! - an upper bound `Σ h_{B_i}(u_i) = Σ <x_i, u_i> + r_i |u_i|` for an
//!   exact split `u = Σ u_i` (valid for any split, since
//!   `<y, u> = Σ <y, u_i> <= Σ h_{B_i}(u_i)` for every `y ∈ K`).
//!
//! The feasible point and the split come from a log-barrier path: at the
//! minimizer of `-t<y,u> - Σ log(r_i² - |y - x_i|²)` the multipliers
//! `u_i = 2(y - x_i) / (t s_i)` split `u` and the gap is at most `m/t`.
//! The path is followed until the certified gap drops below the requested
//! tolerance; the returned value is the midpoint of the bracket.
//!
//! An exact active-set solve (closed-form maximizers on intersections of
//! at most `n` spheres, grown over a working set of violated balls) runs
//! first and usually certifies the value on its own; the barrier path is
//! the fallback, and its iterates seed the same solve where the path
//! stalls at sharp corners.

use super::super::geom::{min_max_power, Ball, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SupportSolution {
    pub value: f64,
    /// A point of the body whose inner product with `u` is within `gap`
    /// of the support value.
    pub point: Vector,
    /// Certified width of the bracket containing the true support value.
    pub gap: f64,
}

/// Intersection of closed balls `B(x_i, r_i)`, preprocessed for support
/// queries.
#[derive(Clone, Debug)]
pub struct BallIntersection {
    dim: usize,
    /// centers relative to `hub`, flattened row-major
    centers: Vec<f64>,
    radii: Vec<f64>,
    hub: Vector,
    /// radius of a ball about `hub` containing the intersection
    spread: f64,
}

impl BallIntersection {
    /// Builds the intersection; `slack` is the largest positive value of the
    /// minimal power `max_i |y - x_i|² - r_i²` still treated as a single
    /// point rather than an empty set.
    pub fn new(centers: &[Vector], radii: &[f64], slack: f64) -> Result<Self> {
        if centers.is_empty() || centers.len() != radii.len() {
            return Err(Error::InvalidArgument("one radius per center required".into()));
        }
        if radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidArgument("ball radii must be finite and >= 0".into()));
        }
        let weights: Vec<f64> = radii.iter().map(|r| -r * r).collect();
        let pc = min_max_power(centers, &weights)?;
        if pc.value > slack {
            return Err(Error::Infeasible);
        }
        let spread = (-pc.value).max(0.0).sqrt();
        let dim = pc.center.len();
        let hub = pc.center;
        let mut flat = Vec::with_capacity(centers.len() * dim);
        let mut kept = Vec::with_capacity(centers.len());
        for (x, &r) in centers.iter().zip(radii) {
            let rel = x - &hub;
            // a ball containing B(hub, spread) is redundant
            if centers.len() > 1 && rel.norm() + spread < r - 1e-12 {
                continue;
            }
            flat.extend(rel.iter());
            kept.push(r);
        }
        if kept.is_empty() {
            // every ball contains B(hub, spread); keep the smallest
            let (i, r) = radii
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, &r)| if r < acc.1 { (i, r) } else { acc });
            flat.extend((&centers[i] - &hub).iter());
            kept.push(r);
        }
        Ok(BallIntersection { dim, centers: flat, radii: kept, hub, spread })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of non-redundant constraint balls.
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// A ball containing the whole intersection; its center is in the set.
    pub fn enclosing(&self) -> Ball {
        Ball { center: self.hub.clone(), radius: self.spread }
    }

    pub fn contains(&self, y: &Vector, slack: f64) -> bool {
        let rel = y - &self.hub;
        (0..self.len()).all(|i| {
            let d: f64 = (0..self.dim)
                .map(|k| (rel[k] - self.centers[i * self.dim + k]).powi(2))
                .sum::<f64>()
                .sqrt();
            d <= self.radii[i] + slack
        })
    }

    fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.dim..(i + 1) * self.dim]
    }

    /// Support value in the unit direction `u`, certified to `tol`.
    pub fn support(&self, u: &Vector, tol: f64) -> Result<SupportSolution> {
        let n = self.dim;
        let base = self.hub.dot(u);
        if self.len() == 1 {
            let x = self.center(0);
            let r = self.radii[0];
            let value = base + dot(x, u.as_slice()) + r;
            let point = Vector::from_iterator(n, (0..n).map(|k| self.hub[k] + x[k] + r * u[k]));
            return Ok(SupportSolution { value, point, gap: 0.0 });
        }
        if self.spread <= tol {
            return Ok(SupportSolution {
                value: base + 0.5 * self.spread,
                point: self.hub.clone(),
                gap: self.spread,
            });
        }
        // the exact active-set solve usually settles it outright; the
        // barrier path is the fallback
        let (y, lower, upper) = match self.crossover(None, u.as_slice()) {
            Some(found) if found.2 - found.1 <= tol => found,
            _ => self.barrier(u.as_slice(), tol)?,
        };
        let point = Vector::from_iterator(n, (0..n).map(|k| self.hub[k] + y[k]));
        Ok(SupportSolution {
            value: base + 0.5 * (lower + upper),
            point,
            gap: upper - lower,
        })
    }

    /// Barrier path in coordinates relative to `hub` (where `y = 0` is
    /// strictly feasible). Returns `(y, lower, upper)`.
    fn barrier(&self, u: &[f64], tol: f64) -> Result<(Vec<f64>, f64, f64)> {
        let n = self.dim;
        let m = self.len();
        let mut y = vec![0.0; n];
        let mut t = m as f64 / self.spread;
        let mu = 12.0;
        let mut best_gap = f64::INFINITY;

        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        let mut step = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut slacks = vec![0.0; m];

        for _outer in 0..80 {
            // centering by damped Newton
            for _newton in 0..60 {
                self.slacks(&y, &mut slacks);
                grad.iter_mut().zip(u).for_each(|(g, &ui)| *g = -t * ui);
                hess.iter_mut().for_each(|h| *h = 0.0);
                for i in 0..m {
                    let x = self.center(i);
                    let s = slacks[i];
                    for a in 0..n {
                        let da = y[a] - x[a];
                        grad[a] += 2.0 * da / s;
                        hess[a * n + a] += 2.0 / s;
                        for b in 0..n {
                            let db = y[b] - x[b];
                            hess[a * n + b] += 4.0 * da * db / (s * s);
                        }
                    }
                }
                step.iter_mut().zip(&grad).for_each(|(d, g)| *d = -g);
                if !cholesky_solve(&mut hess, &mut step, n) {
                    break;
                }
                let decrement: f64 = -dot(&grad, &step);
                if decrement < 1e-14 {
                    break;
                }
                let mut alpha = 1.0;
                let mut accepted = false;
                for _ in 0..60 {
                    for k in 0..n {
                        trial[k] = alpha * step[k];
                    }
                    let dphi = self.phi_change(&y, &trial, &slacks, u, t);
                    if dphi <= -0.25 * alpha * decrement {
                        accepted = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if !accepted {
                    break;
                }
                for k in 0..n {
                    y[k] += trial[k];
                }
            }

            self.slacks(&y, &mut slacks);
            if slacks.iter().any(|s| !(*s > 0.0)) {
                break;
            }
            let (lower, upper) = self.certificate(&y, u, t, &slacks);
            let gap = upper - lower;
            best_gap = best_gap.min(gap);
            if gap <= tol {
                return Ok((y, lower, upper));
            }
            if gap <= 1e3 * tol {
                if let Some(found) = self.polish(&y, u, lower, upper, tol, &mut best_gap) {
                    return Ok(found);
                }
            }
            t *= mu;
            if !t.is_finite() || t > 1e18 {
                break;
            }
        }
        // the crossover only ranks balls by slack at `y`, so an iterate
        // that left the interior is still a usable start
        if let Some(found) = self.polish(&y, u, f64::NEG_INFINITY, f64::INFINITY, tol, &mut best_gap) {
            return Ok(found);
        }
        Err(Error::NoConvergence { tol, gap: best_gap })
    }

    /// Crossover from the barrier bracket `[lower, upper]` at `y`.
    fn polish(
        &self,
        y: &[f64],
        u: &[f64],
        lower: f64,
        upper: f64,
        tol: f64,
        best_gap: &mut f64,
    ) -> Option<(Vec<f64>, f64, f64)> {
        let (cand, lo, hi) = self.crossover(Some(y), u)?;
        let (lo, hi) = (lo.max(lower), hi.min(upper));
        *best_gap = best_gap.min(hi - lo);
        (hi - lo <= tol).then(|| (if lo > lower { cand } else { y.to_vec() }, lo, hi))
    }



    fn slacks(&self, y: &[f64], out: &mut [f64]) {
        for (i, s) in out.iter_mut().enumerate() {
            let x = self.center(i);
            let d2: f64 = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            *s = self.radii[i] * self.radii[i] - d2;
        }
    }

    /// `phi(y + dy) - phi(y)` for `phi(y) = -t<y,u> - Σ log s_i(y)`,
    /// computed from the step itself so that it stays accurate when `t`
    /// is large; infinite if `y + dy` leaves the interior.
    fn phi_change(&self, y: &[f64], dy: &[f64], slacks: &[f64], u: &[f64], t: f64) -> f64 {
        let mut change = -t * dot(dy, u);
        for (i, &s) in slacks.iter().enumerate() {
            let x = self.center(i);
            // s(y + dy) - s(y) = -<dy, dy + 2 (y - x)>
            let ds: f64 = -(0..self.dim).map(|k| dy[k] * (dy[k] + 2.0 * (y[k] - x[k]))).sum::<f64>();
            let ratio = ds / s;
            // stay a fixed fraction away from every sphere
            if !(ratio > -0.99) {
                return f64::INFINITY;
            }
            change -= ratio.ln_1p();
        }
        change
    }

    /// Lower and upper bounds on the support value (relative to `hub`).
    fn certificate(&self, y: &[f64], u: &[f64], t: f64, slacks: &[f64]) -> (f64, f64) {
        let n = self.dim;
        let m = self.len();
        let mut parts = vec![0.0; m * n];
        let mut residual = u.to_vec();
        let mut heaviest = (0, 0.0);
        for i in 0..m {
            let x = self.center(i);
            let w = 2.0 / (t * slacks[i]);
            if w > heaviest.1 {
                heaviest = (i, w);
            }
            for k in 0..n {
                let p = w * (y[k] - x[k]);
                parts[i * n + k] = p;
                residual[k] -= p;
            }
        }
        // the split must reproduce u exactly
        for k in 0..n {
            parts[heaviest.0 * n + k] += residual[k];
        }
        let mut upper = 0.0;
        for i in 0..m {
            let ui = &parts[i * n..(i + 1) * n];
            upper += dot(self.center(i), ui) + self.radii[i] * dot(ui, ui).sqrt();
        }
        (dot(y, u), upper)
    }
    /// Active-set crossover from a barrier point `y`.
    ///
    /// The maximizer lies on the spheres of at most `n` balls, and for any
    /// such subset the maximizer of `<y, u>` over the intersection of their
    /// spheres has a closed form. Starting from the balls with least slack
    /// at `y`, the relaxed problem over a working set is solved by
    /// enumerating those subsets; balls the relaxed optimum violates join
    /// the working set until it lies in every ball (up to rounding), at
    /// which point it is the maximizer. The upper bound comes from the
    /// cone of tight normals there. This stays exact at sharp corners and
    /// thin spikes where the barrier Hessian is too ill-conditioned to
    /// finish the path. Returns `(y, lower, upper)`.
    ///
    /// Without a start point the working set begins with the single ball
    /// of least support in direction `u`.
    fn crossover(&self, y: Option<&[f64]>, u: &[f64]) -> Option<(Vec<f64>, f64, f64)> {
        let n = self.dim;
        let m = self.len();
        let gaps = |p: &[f64]| -> Vec<f64> {
            (0..m)
                .map(|i| {
                    let d2: f64 = p.iter().zip(self.center(i)).map(|(a, b)| (a - b) * (a - b)).sum();
                    self.radii[i] - d2.sqrt()
                })
                .collect()
        };
        let by_gap = |g: &[f64]| -> Vec<usize> {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
            order
        };
        let mut work: Vec<usize> = match y {
            Some(y) => by_gap(&gaps(y)).into_iter().take(3 * n + 3).collect(),
            None => {
                let top = |i: usize| dot(self.center(i), u) + self.radii[i];
                vec![(0..m).min_by(|&a, &b| top(a).total_cmp(&top(b)).then(a.cmp(&b)))?]
            }
        };
        for _ in 0..64 {
            let mut best: Option<(Vec<f64>, f64)> = None;
            for subset in subsets(&work, n) {
                let Some(cand) = self.sphere_maximizer(&subset, u) else { continue };
                let lower = dot(&cand, u);
                if best.as_ref().is_some_and(|b| lower <= b.1) || !self.feasible_among(&cand, &work, 1e-12) {
                    continue;
                }
                best = Some((cand, lower));
            }
            let (cand, lower) = best?;
            let g = gaps(&cand);
            let violated: Vec<usize> = by_gap(&g)
                .into_iter()
                .take_while(|&i| g[i] < -1e-12 * (1.0 + self.radii[i]))
                .filter(|i| !work.contains(i))
                .take(2)
                .collect();
            if violated.is_empty() {
                let upper = self.cone_upper(&cand, u);
                return Some((cand, lower, upper));
            }
            work.extend(violated);
        }
        None
    }

    fn feasible_among(&self, y: &[f64], set: &[usize], slack: f64) -> bool {
        set.iter().all(|&i| {
            let d2: f64 = y.iter().zip(self.center(i)).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() <= self.radii[i] + slack * (1.0 + self.radii[i])
        })
    }

    /// `argmax <y, u>` over the intersection of the spheres of `subset`.
    fn sphere_maximizer(&self, subset: &[usize], u: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim;
        let x0 = self.center(subset[0]);
        let r0 = self.radii[subset[0]];
        let k = subset.len() - 1;
        // directions a_j = x_j - x_0 spanning the affine hull
        let dirs: Vec<Vec<f64>> =
            subset[1..].iter().map(|&j| (0..n).map(|a| self.center(j)[a] - x0[a]).collect()).collect();
        let mut gram = vec![0.0; k * k];
        for p in 0..k {
            for q in 0..k {
                gram[p * k + q] = dot(&dirs[p], &dirs[q]);
            }
        }
        // center c = x_0 + Σ α_j a_j with equal power to every sphere
        let mut alpha: Vec<f64> = subset[1..]
            .iter()
            .zip(&dirs)
            .map(|(&j, a)| 0.5 * (dot(a, a) - self.radii[j] * self.radii[j] + r0 * r0))
            .collect();
        let mut g = gram.clone();
        if k > 0 && !cholesky_solve(&mut g, &mut alpha, k) {
            return None;
        }
        let mut c = x0.to_vec();
        let mut offset = vec![0.0; n];
        for (p, a) in dirs.iter().enumerate() {
            for i in 0..n {
                offset[i] += alpha[p] * a[i];
            }
        }
        for i in 0..n {
            c[i] += offset[i];
        }
        let rho2 = r0 * r0 - dot(&offset, &offset);
        if !(rho2 >= 0.0) {
            return None;
        }
        // project u onto the complement of the hull directions
        let mut beta: Vec<f64> = dirs.iter().map(|a| dot(a, u)).collect();
        let mut g = gram;
        if k > 0 && !cholesky_solve(&mut g, &mut beta, k) {
            return None;
        }
        let mut w = u.to_vec();
        for (p, a) in dirs.iter().enumerate() {
            for i in 0..n {
                w[i] -= beta[p] * a[i];
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm < 1e-12 {
            return None;
        }
        let rho = rho2.sqrt();
        Some((0..n).map(|i| c[i] + rho * w[i] / norm).collect())
    }

    /// Upper bound from a nonnegative split of `u` along the outer
    /// normals of the balls nearly tight at `y`.
    ///
    /// At a maximizer `u` lies in the cone of those normals, so a
    /// nonnegative least-squares fit carries it with a negligible residual;
    /// the bound then exceeds `<y, u>` only by the weighted slacks.
    fn cone_upper(&self, y: &[f64], u: &[f64]) -> f64 {
        let n = self.dim;
        let mut near: Vec<(f64, usize)> = (0..self.len())
            .map(|i| {
                let d2: f64 = y.iter().zip(self.center(i)).map(|(a, b)| (a - b) * (a - b)).sum();
                (self.radii[i] - d2.sqrt(), i)
            })
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let keep = near
            .iter()
            .enumerate()
            .take_while(|(k, (g, i))| *k == 0 || *g <= 1e-9 * (1.0 + self.radii[*i]))
            .count();
        let normals: Vec<Vec<f64>> = near[..keep]
            .iter()
            .map(|&(_, i)| {
                let v: Vec<f64> = (0..n).map(|a| y[a] - self.center(i)[a]).collect();
                let len = dot(&v, &v).sqrt().max(f64::MIN_POSITIVE);
                v.iter().map(|c| c / len).collect()
            })
            .collect();
        let Some(weights) = nnls(&normals, u, n) else { return f64::INFINITY };
        let mut parts: Vec<Vec<f64>> =
            normals.iter().zip(&weights).map(|(v, w)| v.iter().map(|c| w * c).collect()).collect();
        let mut residual = u.to_vec();
        for part in &parts {
            for a in 0..n {
                residual[a] -= part[a];
            }
        }
        let heavy = (0..keep).max_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap_or(0);
        for a in 0..n {
            parts[heavy][a] += residual[a];
        }
        near[..keep]
            .iter()
            .zip(&parts)
            .filter(|(_, ui)| ui.iter().any(|c| *c != 0.0))
            .map(|(&(_, i), ui)| dot(self.center(i), ui) + self.radii[i] * dot(ui, ui).sqrt())
            .sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `H x = b` in place for symmetric positive definite `H` (n×n).
fn cholesky_solve(h: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = h[j * n + j];
        for k in 0..j {
            d -= h[j * n + k] * h[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        h[j * n + j] = d;
        for i in j + 1..n {
            let mut s = h[i * n + j];
            for k in 0..j {
                s -= h[i * n + k] * h[j * n + k];
            }
            h[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= h[i * n + k] * b[k];
        }
        b[i] = s / h[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= h[k * n + i] * b[k];
        }
        b[i] = s / h[i * n + i];
    }
    true
}


/// Nonnegative least squares `min |Σ w_j a_j - b|, w >= 0` over columns
/// `a_j` of length `n` (Lawson-Hanson active set).
fn nnls(cols: &[Vec<f64>], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut w = vec![0.0; k];
    let mut passive: Vec<usize> = Vec::new();
    let residual = |w: &[f64]| -> Vec<f64> {
        let mut r = b.to_vec();
        for (c, wj) in cols.iter().zip(w) {
            for a in 0..n {
                r[a] -= wj * c[a];
            }
        }
        r
    };
    // least squares on the passive columns
    let solve = |set: &[usize]| -> Option<Vec<f64>> {
        let p = set.len();
        let mut gram = vec![0.0; p * p];
        let mut rhs: Vec<f64> = set.iter().map(|&j| dot(&cols[j], b)).collect();
        for (x, &i) in set.iter().enumerate() {
            for (y, &j) in set.iter().enumerate() {
                gram[x * p + y] = dot(&cols[i], &cols[j]);
            }
        }
        cholesky_solve(&mut gram, &mut rhs, p).then_some(rhs)
    };
    for _ in 0..(3 * k + 10) {
        let r = residual(&w);
        let best = (0..k)
            .filter(|j| !passive.contains(j))
            .map(|j| (dot(&cols[j], &r), j))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((g, j)) if g > 1e-14 => passive.push(j),
            _ => return Some(w),
        }
        loop {
            let Some(z) = solve(&passive) else {
                passive.pop();
                return Some(w);
            };
            if z.iter().all(|v| *v > 0.0) {
                for (&j, v) in passive.iter().zip(&z) {
                    w[j] = *v;
                }
                break;
            }
            let mut alpha = 1.0f64;
            for (&j, v) in passive.iter().zip(&z) {
                if *v <= 0.0 {
                    alpha = alpha.min(w[j] / (w[j] - v));
                }
            }
            for (&j, v) in passive.iter().zip(&z) {
                w[j] += alpha * (v - w[j]);
            }
            passive.retain(|&j| w[j] > 1e-15);
            for j in 0..k {
                if !passive.contains(&j) {
                    w[j] = 0.0;
                }
            }
            if passive.is_empty() {
                break;
            }
        }
    }
    Some(w)
}

/// Nonempty subsets of `items` with at most `max` elements.
fn subsets(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        for i in start..items.len() {
            let mut next = cur.clone();
            next.push(items[i]);
            if next.len() < max {
                stack.push((i + 1, next.clone()));
            }
            out.push(next);
        }
    }
    out
}
