//! Mesh dataset generators and the scaling indicators `A_n`, `e_n`.

pub mod hybrid;
pub mod mirroring;
pub mod parametric;
pub mod triangle;

use core::fmt;
use core::str::FromStr;

pub use hybrid::{fill_complement, gen_maze, gen_star};
pub use mirroring::{gen_jenga, gen_jenga4, gen_slices, gen_slices4, gen_ulike, gen_ulike4, mirror};
pub use parametric::{gen_parametric, parametric_polygon, ParamClass, SWEEP_STEPS};
pub use triangle::{gen_triangle, gen_triangle_seeded, DEFAULT_SEED};

use crate::geometry;
use crate::mesh::{Dataset, Mesh};
use crate::prelude::*;
use crate::{Error, Result};

/// Largest-to-smallest element area (`a_n`) and edge length (`e_n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingIndicators {
    pub a_n: f64,
    pub e_n: f64,
}

pub fn scaling_indicators(mesh: &Mesh) -> Result<ScalingIndicators> {
    if mesh.elements.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let ratio = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi / lo
    };
    let areas = mesh.polygons().map(|p| geometry::area(&p)).collect::<Result<Vec<_>>>()?;
    let a_n = ratio(&mut areas.into_iter());
    let e_n = ratio(&mut mesh.edges().keys().map(|&(a, b)| mesh.vertices[a].dist(mesh.vertices[b])));
    Ok(ScalingIndicators { a_n, e_n })
}

/// Dataset identifiers as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Triangle,
    Maze,
    Star,
    Jenga,
    Slices,
    Ulike,
    Jenga4,
    Slices4,
    Ulike4,
    /// Level `i` is the deformation `t = i / SWEEP_STEPS`.
    Parametric(ParamClass),
}

impl Generator {
    pub const REFERENCE: [Generator; 9] = [
        Generator::Triangle,
        Generator::Maze,
        Generator::Star,
        Generator::Jenga,
        Generator::Slices,
        Generator::Ulike,
        Generator::Jenga4,
        Generator::Slices4,
        Generator::Ulike4,
    ];

    pub fn generate(self, level: usize, seed: u64) -> Result<Mesh> {
        Ok(match self {
            Generator::Triangle => gen_triangle_seeded(level, seed),
            Generator::Maze => gen_maze(level)?,
            Generator::Star => gen_star(level)?,
            Generator::Jenga => gen_jenga(level),
            Generator::Slices => gen_slices(level),
            Generator::Ulike => gen_ulike(level),
            Generator::Jenga4 => gen_jenga4(level),
            Generator::Slices4 => gen_slices4(level),
            Generator::Ulike4 => gen_ulike4(level),
            Generator::Parametric(c) => {
                if level > SWEEP_STEPS {
                    return Err(Error::Parameter(format!("parametric level {level} exceeds {SWEEP_STEPS}")));
                }
                gen_parametric(c, level as f64 / SWEEP_STEPS as f64)?
            }
        })
    }

    pub fn dataset(self, levels: core::ops::RangeInclusive<usize>, seed: u64) -> Result<Dataset> {
        Ok(Dataset {
            name: self.to_string(),
            meshes: levels.map(|n| self.generate(n, seed)).collect::<Result<_>>()?,
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::Triangle => "triangle",
            Generator::Maze => "maze",
            Generator::Star => "star",
            Generator::Jenga => "jenga",
            Generator::Slices => "slices",
            Generator::Ulike => "ulike",
            Generator::Jenga4 => "jenga4",
            Generator::Slices4 => "slices4",
            Generator::Ulike4 => "ulike4",
            Generator::Parametric(c) => return write!(f, "parametric:{c}"),
        };
        f.write_str(s)
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Some(class) = s.strip_prefix("parametric:") {
            return Ok(Generator::Parametric(class.parse()?));
        }
        Generator::REFERENCE
            .into_iter()
            .find(|g| g.to_string() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown dataset '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_size, uniform_grid, validate};
    use crate::metrics::{polygon_metrics, MetricId};
    use approx::assert_relative_eq;

    fn ind(m: &Mesh) -> ScalingIndicators {
        scaling_indicators(m).unwrap()
    }

    #[test]
    fn uniform_grid_indicators() {
        let s = ind(&uniform_grid(4, 4));
        assert_eq!((s.a_n, s.e_n), (1.0, 1.0));
    }

    #[test]
    fn ids_round_trip() {
        for g in Generator::REFERENCE.into_iter().chain(ParamClass::ALL.map(Generator::Parametric)) {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
        assert!("parametric:blob".parse::<Generator>().is_err());
    }

    #[test]
    fn jenga_base_diameter() {
        assert_relative_eq!(mesh_size(&gen_jenga(0)).unwrap(), (1.0f64 + 1.0 / 16.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn jenga_indicators_double() {
        // Areas double from the first level on; edge ratios only once the
        // split rectangles get narrower than the 1/4-high bars (n >= 1).
        let s: Vec<_> = (0..5).map(|n| ind(&gen_jenga(n))).collect();
        for n in 0..4 {
            assert_relative_eq!(s[n + 1].a_n / s[n].a_n, 2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(s[0].e_n, 4.0, epsilon = 1e-12);
        assert_relative_eq!(s[1].e_n, 4.0, epsilon = 1e-12);
        for n in 1..4 {
            assert_relative_eq!(s[n + 1].e_n / s[n].e_n, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn multiple_variants_scale_by_sixteen() {
        let j: Vec<_> = (0..3).map(|n| ind(&gen_jenga4(n))).collect();
        assert_relative_eq!(j[1].a_n / j[0].a_n, 16.0, epsilon = 1e-12);
        assert_relative_eq!(j[2].a_n / j[1].a_n, 16.0, epsilon = 1e-12);
        let s: Vec<_> = (0..4).map(|n| ind(&gen_slices4(n))).collect();
        for w in s.windows(2) {
            assert!((w[1].e_n / w[0].e_n - 1.0).abs() < 0.05, "{s:?}");
            assert!(w[1].a_n / w[0].a_n > 8.0);
        }
        // 16^n U lines at spacing 1 / (2 (16^n + 1)).
        for n in 0..2 {
            let u = ind(&gen_ulike4(n));
            assert!(u.a_n < 4.0, "{u:?}");
            assert_relative_eq!(u.e_n, 2.0 * ((1 << (4 * n)) + 1) as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn slices_and_ulike_trends() {
        let s: Vec<_> = (0..5).map(|n| ind(&gen_slices(n))).collect();
        for w in s.windows(2) {
            assert!((w[1].e_n / w[0].e_n - 1.0).abs() < 0.05, "{s:?}");
            assert_relative_eq!(w[1].a_n / w[0].a_n, 2.0, max_relative = 0.1);
        }
        // Area ratios stay bounded; edge ratios are 2 (2^n + 1) ~ 2^n.
        for n in 0..6 {
            let u = ind(&gen_ulike(n));
            assert!(u.a_n < 4.0, "{u:?}");
            assert_relative_eq!(u.e_n, 2.0 * ((1 << n) + 1) as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn triangle_indicators_bounded() {
        for n in 0..4 {
            let s = ind(&gen_triangle(n));
            assert!(s.a_n < 30.0 && s.e_n < 10.0, "level {n}: {s:?}");
        }
    }

    #[test]
    fn maze_and_star_features() {
        let mut last_kar = f64::INFINITY;
        for n in 0..4 {
            let maze = gen_maze(n).unwrap();
            let star = gen_star(n).unwrap();
            let big = |m: &Mesh| m.polygons().filter(|p| p.len() > 3).collect::<Vec<_>>();
            assert!(big(&maze).iter().all(|p| polygon_metrics(p).unwrap().ke == 0.0));
            let kar = polygon_metrics(&big(&star)[0]).unwrap().get(MetricId::Kar);
            assert!(kar < last_kar);
            last_kar = kar;
        }
    }

    #[test]
    fn datasets_valid_and_monotone() {
        for g in Generator::REFERENCE {
            let top = if g == Generator::Ulike4 { 1 } else { 3 };
            let d = g.dataset(0..=top, DEFAULT_SEED).unwrap();
            assert!(d.is_monotone(), "{g}");
            for m in &d.meshes {
                assert!(validate(m).is_empty(), "{g} level {}", m.level);
            }
        }
    }
}
