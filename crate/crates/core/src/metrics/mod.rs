//! Polygon quality metrics and their aggregation into mesh metrics.

pub mod circles;
pub mod kernel;
pub mod lp;

use core::fmt;

use crate::geometry::{self, Point};
use crate::mesh::Mesh;
use crate::prelude::*;
use crate::{Error, Result};

pub use circles::{chebyshev_circle, max_inscribed_circle, min_enclosing_circle, Circle};
pub use kernel::{kernel, kernel_area};

/// The fourteen quality metrics of a single polygon. Lengths and areas are in
/// domain units, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonMetrics {
    /// Radius of the smallest enclosing circle.
    pub cc: f64,
    /// Radius of the largest inscribed circle.
    pub ic: f64,
    /// `ic / cc`.
    pub cr: f64,
    pub ar: f64,
    /// Kernel area.
    pub ke: f64,
    /// `ke / ar`.
    pub kar: f64,
    /// `2 pi area / perimeter^2`.
    pub apr: f64,
    /// Shortest edge.
    pub se: f64,
    /// Shortest over longest edge.
    pub er: f64,
    /// Minimum vertex-to-vertex distance.
    pub mpd: f64,
    pub ma: f64,
    pub mxa: f64,
    /// Number of edges.
    pub ns: usize,
    /// Chebyshev radius of the kernel over `cc`; zero when not star-shaped.
    pub sr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    Cc,
    Ic,
    Cr,
    Ar,
    Ke,
    Kar,
    Apr,
    Se,
    Er,
    Mpd,
    Ma,
    Mxa,
    Ns,
    Sr,
}

impl MetricId {
    pub const ALL: [MetricId; 14] = [
        MetricId::Cc,
        MetricId::Ic,
        MetricId::Cr,
        MetricId::Ar,
        MetricId::Ke,
        MetricId::Kar,
        MetricId::Apr,
        MetricId::Se,
        MetricId::Er,
        MetricId::Mpd,
        MetricId::Ma,
        MetricId::Mxa,
        MetricId::Ns,
        MetricId::Sr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Cc => "CC",
            MetricId::Ic => "IC",
            MetricId::Cr => "CR",
            MetricId::Ar => "AR",
            MetricId::Ke => "KE",
            MetricId::Kar => "KAR",
            MetricId::Apr => "APR",
            MetricId::Se => "SE",
            MetricId::Er => "ER",
            MetricId::Mpd => "MPD",
            MetricId::Ma => "MA",
            MetricId::Mxa => "MXA",
            MetricId::Ns => "NS",
            MetricId::Sr => "SR",
        }
    }

    /// Metrics that do not change when the polygon is scaled.
    pub fn is_scale_invariant(self) -> bool {
        matches!(
            self,
            MetricId::Cr
                | MetricId::Kar
                | MetricId::Apr
                | MetricId::Er
                | MetricId::Ma
                | MetricId::Mxa
                | MetricId::Ns
                | MetricId::Sr
        )
    }

    /// Whether large values flag the worst polygon. AR is grouped with the
    /// minimum metrics: tiny elements are the hazard.
    pub fn worst_is_max(self) -> bool {
        matches!(self, MetricId::Cc | MetricId::Mxa | MetricId::Ns)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PolygonMetrics {
    pub fn get(&self, id: MetricId) -> f64 {
        match id {
            MetricId::Cc => self.cc,
            MetricId::Ic => self.ic,
            MetricId::Cr => self.cr,
            MetricId::Ar => self.ar,
            MetricId::Ke => self.ke,
            MetricId::Kar => self.kar,
            MetricId::Apr => self.apr,
            MetricId::Se => self.se,
            MetricId::Er => self.er,
            MetricId::Mpd => self.mpd,
            MetricId::Ma => self.ma,
            MetricId::Mxa => self.mxa,
            MetricId::Ns => self.ns as f64,
            MetricId::Sr => self.sr,
        }
    }
}

/// AR, APR, SE, ER, MPD, MA, MXA and NS in one pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleMetrics {
    pub ar: f64,
    pub apr: f64,
    pub se: f64,
    pub er: f64,
    pub mpd: f64,
    pub ma: f64,
    pub mxa: f64,
    pub ns: usize,
}

pub fn simple_metrics(poly: &[Point]) -> Result<SimpleMetrics> {
    let ar = geometry::area(poly)?;
    let lengths = geometry::edge_lengths(poly);
    let perimeter: f64 = lengths.iter().sum();
    let se = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let le = lengths.iter().copied().fold(0.0, f64::max);
    let mut mpd = f64::INFINITY;
    for (i, &p) in poly.iter().enumerate() {
        for &q in &poly[i + 1..] {
            mpd = mpd.min(p.dist(q));
        }
    }
    let angles = geometry::interior_angles(poly);
    Ok(SimpleMetrics {
        ar,
        apr: 2.0 * core::f64::consts::PI * ar / (perimeter * perimeter),
        se,
        er: se / le,
        mpd,
        ma: angles.iter().copied().fold(f64::INFINITY, f64::min),
        mxa: angles.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ns: poly.len(),
    })
}

/// Chebyshev radius of the kernel over the enclosing radius.
pub fn shape_regularity(kernel: &[Point], cc: f64) -> f64 {
    if kernel.len() < 3 || cc <= 0.0 {
        return 0.0;
    }
    chebyshev_circle(kernel).map_or(0.0, |c| c.radius / cc)
}

/// All fourteen metrics of a simple counterclockwise polygon.
pub fn polygon_metrics(poly: &[Point]) -> Result<PolygonMetrics> {
    let s = simple_metrics(poly)?;
    let cc = min_enclosing_circle(poly).radius;
    let ic = max_inscribed_circle(poly).radius;
    let ker = kernel(poly);
    let ke = if ker.is_empty() {
        0.0
    } else {
        geometry::signed_area(&ker).max(0.0).min(s.ar)
    };
    Ok(PolygonMetrics {
        cc,
        ic,
        cr: ic / cc,
        ar: s.ar,
        ke,
        kar: ke / s.ar,
        apr: s.apr,
        se: s.se,
        er: s.er,
        mpd: s.mpd,
        ma: s.ma,
        mxa: s.mxa,
        ns: s.ns,
        sr: shape_regularity(&ker, cc),
    })
}

pub fn mesh_metrics(mesh: &Mesh) -> Result<Vec<PolygonMetrics>> {
    mesh.polygons().map(|p| polygon_metrics(&p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aggregation {
    Average,
    L2,
    Max,
    Min,
    Worst,
}

impl Aggregation {
    pub const ALL: [Aggregation; 5] = [
        Aggregation::Average,
        Aggregation::L2,
        Aggregation::Max,
        Aggregation::Min,
        Aggregation::Worst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Aggregation::Average => "avg",
            Aggregation::L2 => "l2",
            Aggregation::Max => "max",
            Aggregation::Min => "min",
            Aggregation::Worst => "worst",
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One aggregated mesh metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshMetric {
    pub metric: MetricId,
    pub aggregation: Aggregation,
    pub value: f64,
}

/// Aggregates per-element values. `worst` resolves through
/// [`MetricId::worst_is_max`].
pub fn aggregate(values: &[f64], strategy: Aggregation, metric: MetricId) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let max = || values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = || values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(match strategy {
        Aggregation::Average => values.iter().sum::<f64>() / values.len() as f64,
        Aggregation::L2 => values.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Aggregation::Max => max(),
        Aggregation::Min => min(),
        Aggregation::Worst if metric.worst_is_max() => max(),
        Aggregation::Worst => min(),
    })
}

/// Every (metric, aggregation) pair for a mesh, in `MetricId::ALL` x
/// `Aggregation::ALL` order.
pub fn aggregate_all(per_element: &[PolygonMetrics]) -> Result<Vec<MeshMetric>> {
    let mut out = Vec::with_capacity(70);
    for metric in MetricId::ALL {
        let values: Vec<f64> = per_element.iter().map(|m| m.get(metric)).collect();
        for aggregation in Aggregation::ALL {
            out.push(MeshMetric {
                metric,
                aggregation,
                value: aggregate(&values, aggregation, metric)?,
            });
        }
    }
    Ok(out)
}
