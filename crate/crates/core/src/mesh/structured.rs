use serde::{Deserialize, Serialize};

use super::{BoundaryTag, Mesh};
use crate::error::{Error, Result};
use crate::Point;

/// Tags for the four sides of an axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideTags {
    pub left: BoundaryTag,
    pub right: BoundaryTag,
    pub bottom: BoundaryTag,
    pub top: BoundaryTag,
}

impl SideTags {
    pub fn uniform(tag: BoundaryTag) -> Self {
        SideTags {
            left: tag,
            right: tag,
            bottom: tag,
            top: tag,
        }
    }

    /// Inlet on the left, outlet on the right, walls top and bottom.
    pub fn channel() -> Self {
        SideTags {
            left: BoundaryTag::Inlet,
            right: BoundaryTag::Outlet,
            bottom: BoundaryTag::Wall,
            top: BoundaryTag::Wall,
        }
    }
}

impl Default for SideTags {
    fn default() -> Self {
        Self::channel()
    }
}

/// Structured triangulation of `(0,1)^2` with `n` cells per side, each cell
/// split along its lower-left to upper-right diagonal.
///
/// `n` must be even and at least 2 so that the multiplier partition of the
/// non-inlet boundary pairs up fine edges.
pub fn build_unit_square(n: usize, tags: SideTags) -> Result<Mesh> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "unit square needs an even subdivision count n >= 2 so boundary edges pair up, got {n}"
        )));
    }
    build_rectangle([0.0, 0.0], [1.0, 1.0], n, n, tags)
}

/// Structured right-diagonal triangulation of the rectangle spanned by
/// `origin` and `origin + extent` with `nx x ny` cells.
pub fn build_rectangle(
    origin: Point,
    extent: [f64; 2],
    nx: usize,
    ny: usize,
    tags: SideTags,
) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("rectangle needs at least one cell per side".into()));
    }
    if !(extent[0] > 0.0 && extent[1] > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rectangle extent must be positive, got {extent:?}"
        )));
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            // exact endpoints so that the far sides land on origin + extent
            let x = if i == nx { origin[0] + extent[0] } else { origin[0] + extent[0] * i as f64 / nx as f64 };
            let y = if j == ny { origin[1] + extent[1] } else { origin[1] + extent[1] * j as f64 / ny as f64 };
            vertices.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    let mut boundary = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary.push(([idx(i, 0), idx(i + 1, 0)], tags.bottom));
        boundary.push(([idx(i, ny), idx(i + 1, ny)], tags.top));
    }
    for j in 0..ny {
        boundary.push(([idx(0, j), idx(0, j + 1)], tags.left));
        boundary.push(([idx(nx, j), idx(nx, j + 1)], tags.right));
    }
    Mesh::new(vertices, triangles, &boundary)
}

/// Vertices of a regular polygon inscribed in a circle, counterclockwise,
/// for feeding circular spacer cross-sections to an external mesh generator.
pub fn polygonize_circle(center: Point, radius: f64, segments: usize) -> Vec<Point> {
    let segments = segments.max(3);
    (0..segments)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / segments as f64;
            [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
        })
        .collect()
}
