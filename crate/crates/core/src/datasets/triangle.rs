//! Delaunay triangulations of Poisson-disk samples.

use core::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::geometry::Point;
use crate::mesh::Mesh;
use crate::prelude::*;

/// Sampling radius of level 0; it halves at every level.
pub const BASE_RADIUS: f64 = 0.25;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Bridson dart throwing on the unit square with minimum spacing `r`.
///
/// The boundary is sampled first at spacing `1 / ceil(1 / r)` (corners
/// included) and those samples seed the active list, so the interior
/// points keep a distance of about `r` from the sides.
pub fn poisson_disk(r: f64, seed: u64) -> Vec<Point> {
    const ATTEMPTS: usize = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = r / SQRT_2;
    let g = (1.0 / cell).ceil() as usize;
    let cell_of = |p: Point| {
        let i = ((p.x / cell) as usize).min(g - 1);
        let j = ((p.y / cell) as usize).min(g - 1);
        (i, j)
    };
    let mut grid: Vec<Option<usize>> = vec![None; g * g];
    let mut points: Vec<Point> = Vec::new();
    let mut active = Vec::new();

    let m = (1.0 / r).ceil() as usize;
    for i in 0..m {
        let s = i as f64 / m as f64;
        for p in [Point::new(s, 0.0), Point::new(1.0, s), Point::new(1.0 - s, 1.0), Point::new(0.0, 1.0 - s)] {
            let (ci, cj) = cell_of(p);
            grid[cj * g + ci] = Some(points.len());
            active.push(points.len());
            points.push(p);
        }
    }

    let r2 = r * r;
    while !active.is_empty() {
        let slot = rng.gen_range(0..active.len());
        let base = points[active[slot]];
        let mut placed = false;
        for _ in 0..ATTEMPTS {
            let rad = r * (1.0 + rng.gen::<f64>());
            let ang = 2.0 * PI * rng.gen::<f64>();
            let c = base + Point::new(rad * ang.cos(), rad * ang.sin());
            if c.x <= 0.0 || c.x >= 1.0 || c.y <= 0.0 || c.y >= 1.0 {
                continue;
            }
            let (ci, cj) = cell_of(c);
            let far = (cj.saturating_sub(2)..(cj + 3).min(g)).all(|j| {
                (ci.saturating_sub(2)..(ci + 3).min(g))
                    .all(|i| grid[j * g + i].is_none_or(|q| (points[q] - c).norm2() >= r2))
            });
            if far {
                grid[cj * g + ci] = Some(points.len());
                active.push(points.len());
                points.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            active.swap_remove(slot);
        }
    }
    points
}

/// Delaunay triangulation of a point set whose convex hull is the domain.
pub fn delaunay(points: &[Point], level: usize) -> Mesh {
    let verts: Vec<Point2<f64>> = points.iter().map(|p| Point2::new(p.x, p.y)).collect();
    let dt = DelaunayTriangulation::<Point2<f64>>::bulk_load_stable(verts).expect("finite sample coordinates");
    let vertices = dt.vertices().map(|v| Point::new(v.position().x, v.position().y)).collect();
    let elements = dt.inner_faces().map(|f| f.vertices().map(|v| v.fix().index()).to_vec()).collect();
    Mesh::new(vertices, elements, level)
}

pub fn gen_triangle(n: usize) -> Mesh {
    gen_triangle_seeded(n, DEFAULT_SEED)
}

/// Level `n` samples with radius `BASE_RADIUS / 2^n` and RNG seed `seed + n`.
pub fn gen_triangle_seeded(n: usize, seed: u64) -> Mesh {
    let r = BASE_RADIUS / (1u64 << n) as f64;
    delaunay(&poisson_disk(r, seed.wrapping_add(n as u64)), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;

    #[test]
    fn samples_respect_spacing() {
        let r = 0.1;
        let pts = poisson_disk(r, 7);
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                assert!(p.dist(*q) >= r - 1e-12);
            }
        }
        // Maximality: no point of a fine probe grid is farther than 2r from every sample.
        for i in 0..=20 {
            for j in 0..=20 {
                let c = Point::new(i as f64 / 20.0, j as f64 / 20.0);
                assert!(pts.iter().any(|p| p.dist(c) < 2.0 * r));
            }
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        assert_eq!(poisson_disk(0.1, 3), poisson_disk(0.1, 3));
        assert_ne!(poisson_disk(0.1, 3), poisson_disk(0.1, 4));
    }

    #[test]
    fn triangulation_is_valid() {
        for n in 0..3 {
            let m = gen_triangle(n);
            assert!(validate(&m).is_empty(), "level {n}: {:?}", validate(&m));
            assert!(m.elements.iter().all(|e| e.len() == 3));
            assert_eq!(m.level, n);
        }
    }
}
