//! One-polygon hybrid meshes deformed by a parameter `t` in `[0, 1]`.
//!
//! Every class starts at `t = 0` from a shape without critical features
//! (a square, a regular polygon or a triangle) and sharpens one feature as
//! `t` grows.

use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use super::hybrid::{fill_complement, spiral, star};
use crate::geometry::{self, Point};
use crate::mesh::Mesh;
use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamClass {
    Maze,
    Star,
    Comb,
    Zeta,
    ULike,
    NSides,
    Convexity,
    Isotropy,
}

impl ParamClass {
    pub const ALL: [ParamClass; 8] = [
        ParamClass::Maze,
        ParamClass::Star,
        ParamClass::Comb,
        ParamClass::Zeta,
        ParamClass::ULike,
        ParamClass::NSides,
        ParamClass::Convexity,
        ParamClass::Isotropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamClass::Maze => "maze",
            ParamClass::Star => "star",
            ParamClass::Comb => "comb",
            ParamClass::Zeta => "zeta",
            ParamClass::ULike => "u-like",
            ParamClass::NSides => "n-sides",
            ParamClass::Convexity => "convexity",
            ParamClass::Isotropy => "isotropy",
        }
    }
}

impl fmt::Display for ParamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ParamClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown polygon class '{s}'")))
    }
}

/// Number of deformation steps of the sweep; `t = i / SWEEP_STEPS`.
pub const SWEEP_STEPS: usize = 20;
/// Area bound of the complement triangles.
pub const PARAMETRIC_MAX_AREA: f64 = 1.0 / 200.0;
/// The polygon occupies `[OFFSET, 1 - OFFSET]^2`.
const OFFSET: f64 = 0.25;

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

fn unit_square() -> Vec<Point> {
    pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])
}

fn regular(ns: usize) -> Vec<Point> {
    (0..ns)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / ns as f64 - PI / 2.0;
            Point::new(0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
        })
        .collect()
}

/// Square with rectangular notches of depth `depth` cut from the top side,
/// spanning the given `x` intervals.
fn notched(depth: f64, notches: &[(f64, f64)]) -> Vec<Point> {
    let mut p = pts(&[(0., 0.), (1., 0.), (1., 1.)]);
    for &(a, b) in notches.iter().rev() {
        p.extend(pts(&[(b, 1.), (b, 1. - depth), (a, 1. - depth), (a, 1.)]));
    }
    p.push(Point::new(0., 1.));
    p
}

/// The class polygon on the unit cell.
pub fn unit_polygon(class: ParamClass, t: f64) -> Result<Vec<Point>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("deformation t = {t} outside [0, 1]")));
    }
    let d = 0.9 * t;
    Ok(match class {
        ParamClass::NSides => regular(3 + (3.0 * SWEEP_STEPS as f64 * t).round() as usize),
        ParamClass::Star => star(5, 0.5, 0.5 * (PI / 5.0).cos() * (1.0 - 0.95 * t)),
        ParamClass::Isotropy => {
            let hh = 0.5 * (1.0 - 0.95 * t);
            pts(&[(0., 0.5 - hh), (1., 0.5 - hh), (1., 0.5 + hh), (0., 0.5 + hh)])
        }
        ParamClass::Convexity => pts(&[(0., 0.), (1., 0.), (1., 1.), (0.5, 1. - 0.95 * t), (0., 1.)]),
        _ if t == 0.0 => unit_square(),
        ParamClass::ULike => notched(d, &[(0.2, 0.8)]),
        ParamClass::Comb => notched(d, &[(1. / 7., 2. / 7.), (3. / 7., 4. / 7.), (5. / 7., 6. / 7.)]),
        ParamClass::Zeta => pts(&[
            (0., 0.),
            (1., 0.),
            (1., 0.55),
            (1. - d, 0.55),
            (1. - d, 0.75),
            (1., 0.75),
            (1., 1.),
            (0., 1.),
            (0., 0.45),
            (d, 0.45),
            (d, 0.25),
            (0., 0.25),
        ]),
        // The hole widens and the corridor thins as t grows.
        ParamClass::Maze => {
            let c = 0.5 - 0.45 * t;
            spiral(c, (1.0 - 2.0 * c) / 2.0)
        }
    })
}

/// The class polygon placed in the middle of the domain.
pub fn parametric_polygon(class: ParamClass, t: f64) -> Result<Vec<Point>> {
    let s = 1.0 - 2.0 * OFFSET;
    Ok(unit_polygon(class, t)?
        .into_iter()
        .map(|p| p * s + Point::new(OFFSET, OFFSET))
        .collect())
}

pub fn gen_parametric(class: ParamClass, t: f64) -> Result<Mesh> {
    let poly = parametric_polygon(class, t)?;
    let area = geometry::signed_area(&poly);
    let level = (t * SWEEP_STEPS as f64).round() as usize;
    fill_complement(&[poly], PARAMETRIC_MAX_AREA.min(0.99 * area), level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;
    use crate::metrics::kernel_area;

    #[test]
    fn names_round_trip() {
        for c in ParamClass::ALL {
            assert_eq!(c.name().parse::<ParamClass>().unwrap(), c);
        }
        assert!("blob".parse::<ParamClass>().is_err());
    }

    #[test]
    fn baseline_is_convex() {
        for c in ParamClass::ALL {
            let p = unit_polygon(c, 0.0).unwrap();
            let a = geometry::signed_area(&p);
            assert!((kernel_area(&p) - a).abs() < 1e-12 * a.max(1.0), "{c}");
        }
    }

    #[test]
    fn deformation_out_of_range() {
        assert!(matches!(gen_parametric(ParamClass::Comb, 1.5), Err(Error::Parameter(_))));
        assert!(matches!(gen_parametric(ParamClass::Comb, -0.1), Err(Error::Parameter(_))));
    }

    #[test]
    fn n_sides_strictly_increasing() {
        let ns: Vec<usize> = (0..=SWEEP_STEPS)
            .map(|i| unit_polygon(ParamClass::NSides, i as f64 / SWEEP_STEPS as f64).unwrap().len())
            .collect();
        assert!(ns.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn polygons_simple_over_sweep() {
        for c in ParamClass::ALL {
            for i in 0..=SWEEP_STEPS {
                let p = parametric_polygon(c, i as f64 / SWEEP_STEPS as f64).unwrap();
                assert!(geometry::is_simple(&p), "{c} step {i}");
                assert!(geometry::signed_area(&p) > 0.0);
            }
        }
    }

    #[test]
    fn sample_meshes_valid() {
        for c in ParamClass::ALL {
            for t in [0.0, 0.5, 1.0] {
                let m = gen_parametric(c, t).unwrap();
                assert!(validate(&m).is_empty(), "{c} t={t}: {:?}", validate(&m));
            }
        }
    }
}
