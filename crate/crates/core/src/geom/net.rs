use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Vector;
use crate::error::{Error, Result};

/// A finite set of unit directions with a certified covering radius.
///
/// Every unit vector lies within Euclidean distance `mesh` of some listed
/// direction. The net is symmetric: `-u` is listed whenever `u` is.
#[derive(Clone, Debug)]
pub struct SphereNet {
    dim: usize,
    directions: Vec<Vector>,
    mesh: f64,
}

/// Builds a deterministic net of `S^{n-1}` with covering radius at most `mesh`.
///
/// In the plane this is a uniform angular grid with an even number `m` of
/// directions, chosen so that the chord between neighbours `2 sin(pi/m)`
/// is at most `mesh`. In dimension `n >= 3` the boundary of the cube
/// `[-1, 1]^n` is gridded with `k` cells per edge and projected radially;
/// the projection onto the unit ball is 1-Lipschitz, so the covering
/// radius is at most `sqrt(n - 1) / k`.
pub fn make_sphere_net(n: usize, mesh: f64) -> Result<SphereNet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sphere net needs n >= 2, got {n}")));
    }
    if !(mesh > 0.0) || !mesh.is_finite() {
        return Err(Error::InvalidArgument(format!("mesh must be > 0, got {mesh}")));
    }
    if n == 2 {
        Ok(planar_net(mesh))
    } else {
        Ok(cube_net(n, mesh))
    }
}

fn planar_net(mesh: f64) -> SphereNet {
    let chord = mesh.min(2.0);
    let mut m = (PI / (chord / 2.0).asin()).ceil() as usize;
    while 2.0 * (PI / m as f64).sin() > chord {
        m += 1;
    }
    m = m.max(2);
    if m % 2 == 1 {
        m += 1;
    }
    let directions = (0..m)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / m as f64;
            Vector::from_vec(vec![theta.cos(), theta.sin()])
        })
        .collect();
    // Farthest point from the grid sits half-way between two neighbours.
    let covering = 2.0 * (PI / (2.0 * m as f64)).sin();
    SphereNet { dim: 2, directions, mesh: covering }
}

fn cube_net(n: usize, mesh: f64) -> SphereNet {
    let root = ((n - 1) as f64).sqrt();
    let mut k = (root / mesh).ceil().max(1.0) as usize;
    while root / k as f64 > mesh {
        k += 1;
    }
    let mut directions = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        if idx.iter().any(|&i| i == 0 || i == k) {
            let v = Vector::from_iterator(n, idx.iter().map(|&i| -1.0 + 2.0 * i as f64 / k as f64));
            let norm = v.norm();
            directions.push(v / norm);
        }
        // odometer increment
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] <= k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    SphereNet { dim: n, directions, mesh: root / k as f64 }
}

impl SphereNet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Certified covering radius.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Monte-Carlo audit: the largest distance from `samples` random unit
    /// vectors to their nearest net direction.
    pub fn covering_audit(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g = Vector::from_iterator(self.dim, (0..self.dim).map(|_| StandardNormal.sample(&mut rng)));
            let u = &g / g.norm();
            // nearest = max inner product
            let best = self
                .directions
                .iter()
                .map(|d| d.dot(&u))
                .fold(f64::NEG_INFINITY, f64::max);
            let dist = (2.0 - 2.0 * best).max(0.0).sqrt();
            worst = worst.max(dist);
        }
        worst
    }
}
