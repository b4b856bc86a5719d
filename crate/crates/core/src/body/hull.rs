use nalgebra::Vector2;

use crate::grid::cross;

type P = Vector2<f64>;

/// Convex hull in counterclockwise order with duplicate and collinear points
/// removed. A turn counts as strict only if its cross product exceeds
/// `rel_eps * scale²`, where `scale` is the bounding-box diagonal.
pub fn convex_hull(points: &[P], rel_eps: f64) -> Vec<P> {
    let mut pts: Vec<P> = points.iter().copied().filter(|p| p.x.is_finite() && p.y.is_finite()).collect();
    if pts.len() < 3 {
        return pts;
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let scale = (hi - lo).norm();
    let eps = rel_eps * scale * scale;

    let turn = |o: &P, a: &P, b: &P| cross(&(a - o), &(b - o));
    let mut lower: Vec<P> = Vec::with_capacity(pts.len());
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<P> = Vec::with_capacity(pts.len());
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut hull = lower;

    // The chain joins at the extreme points; sweep once more cyclically so a
    // near-collinear join cannot survive.
    let mut changed = true;
    while changed && hull.len() >= 3 {
        changed = false;
        let n = hull.len();
        for i in 0..n {
            let prev = hull[(i + n - 1) % n];
            let next = hull[(i + 1) % n];
            if turn(&prev, &hull[i], &next) <= eps {
                hull.remove(i);
                changed = true;
                break;
            }
        }
    }
    hull
}
