//! Self-intersection detection and the graphicality/embeddedness predicates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::curve::{self, ArcCurve, CurveKind};

/// How two branches meet at a self-intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Transversal,
    TangentialSame,
    TangentialOpposite,
}

/// A detected self-intersection; `s1 < s2` are curve parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionEvent {
    pub s1: f64,
    pub s2: f64,
    pub point: Vec<f64>,
    pub distance: f64,
    pub tangent_dot: f64,
    pub classification: Classification,
    /// Arclength between the two contact parameters along the curve.
    pub separation: f64,
}

/// Detection tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub spatial: f64,
    pub angle: f64,
}

impl Tolerances {
    /// `spatial = 1e-6 · diameter`, `angle = 1e-3`.
    pub fn for_curve(c: &ArcCurve) -> Self {
        Self {
            spatial: 1e-6 * c.diameter(),
            angle: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Hit {
    i: usize,
    j: usize,
    a: f64,
    b: f64,
    distance: f64,
}

/// Closest points of segments `p0 + a(p1 − p0)` and `q0 + b(q1 − q0)`, `a, b ∈ [0, 1]`.
fn segment_closest(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64]) -> (f64, f64, f64) {
    let u: Vec<f64> = p1.iter().zip(p0).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = q1.iter().zip(q0).map(|(x, y)| x - y).collect();
    let w: Vec<f64> = p0.iter().zip(q0).map(|(x, y)| x - y).collect();
    let (uu, uv, vv) = (curve::dot(&u, &u), curve::dot(&u, &v), curve::dot(&v, &v));
    let (uw, vw) = (curve::dot(&u, &w), curve::dot(&v, &w));
    let denom = uu * vv - uv * uv;
    let mut a = if denom > 1e-14 * uu * vv {
        ((uv * vw - vv * uw) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut b = (uv * a + vw) / vv;
    if b < 0.0 {
        b = 0.0;
        a = (-uw / uu).clamp(0.0, 1.0);
    } else if b > 1.0 {
        b = 1.0;
        a = ((uv - uw) / uu).clamp(0.0, 1.0);
    }
    let d: f64 = (0..u.len())
        .map(|k| (w[k] + a * u[k] - b * v[k]).powi(2))
        .sum::<f64>()
        .sqrt();
    (a, b, d)
}

/// Local cubic through the four samples around segment `i`.
struct LocalCubic<'a> {
    c: &'a ArcCurve,
    nodes: [usize; 4],
}

impl<'a> LocalCubic<'a> {
    fn around(c: &'a ArcCurve, i: usize) -> Self {
        let n = c.len();
        let start = i.saturating_sub(1).min(n.saturating_sub(4));
        Self {
            c,
            nodes: [start, start + 1, start + 2, start + 3],
        }
    }

    /// Position and derivative at parameter `s` (Lagrange form).
    fn eval(&self, s: f64) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = self.nodes.iter().map(|&k| self.c.params()[k]).collect();
        let d = self.c.dim();
        let mut pos = vec![0.0; d];
        let mut der = vec![0.0; d];
        for a in 0..4 {
            let mut w = 1.0;
            let mut dw = 0.0;
            for b in 0..4 {
                if b == a {
                    continue;
                }
                let denom = t[a] - t[b];
                dw = dw * (s - t[b]) / denom + w / denom;
                w *= (s - t[b]) / denom;
            }
            let p = self.c.point(self.nodes[a]);
            for k in 0..d {
                pos[k] += w * p[k];
                der[k] += dw * p[k];
            }
        }
        (pos, der)
    }
}

/// Levenberg–Marquardt minimization of |p(s) − q(t)|² over the two local cubics.
fn refine(c: &ArcCurve, hit: &Hit) -> (f64, f64, Vec<f64>, f64, f64) {
    let params = c.params();
    let (pi, pj) = (LocalCubic::around(c, hit.i), LocalCubic::around(c, hit.j));
    let lo1 = params[hit.i.saturating_sub(1)];
    let hi1 = params[(hit.i + 2).min(c.len() - 1)];
    let lo2 = params[hit.j.saturating_sub(1)];
    let hi2 = params[(hit.j + 2).min(c.len() - 1)];
    let mut s = params[hit.i] + hit.a * (params[hit.i + 1] - params[hit.i]);
    let mut t = params[hit.j] + hit.b * (params[hit.j + 1] - params[hit.j]);
    let objective = |s: f64, t: f64| {
        let (p, _) = pi.eval(s);
        let (q, _) = pj.eval(t);
        curve::dist(&p, &q)
    };
    let mut value = objective(s, t);
    let mut mu = 1e-3;
    for _ in 0..60 {
        let (p, dp) = pi.eval(s);
        let (q, dq) = pj.eval(t);
        let r: Vec<f64> = p.iter().zip(&q).map(|(x, y)| x - y).collect();
        // Normal equations of the 2-parameter residual r = p(s) − q(t).
        let (a11, a12, a22) = (curve::dot(&dp, &dp), -curve::dot(&dp, &dq), curve::dot(&dq, &dq));
        let (g1, g2) = (curve::dot(&dp, &r), -curve::dot(&dq, &r));
        let mut improved = false;
        for _ in 0..20 {
            let (m11, m22) = (a11 * (1.0 + mu), a22 * (1.0 + mu));
            let det = m11 * m22 - a12 * a12;
            if det <= 0.0 {
                mu *= 10.0;
                continue;
            }
            let ds = -(m22 * g1 - a12 * g2) / det;
            let dt = -(m11 * g2 - a12 * g1) / det;
            let (ns, nt) = ((s + ds).clamp(lo1, hi1), (t + dt).clamp(lo2, hi2));
            let nv = objective(ns, nt);
            if nv < value {
                s = ns;
                t = nt;
                value = nv;
                mu = (mu * 0.3).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved || value == 0.0 {
            break;
        }
    }
    let (p, dp) = pi.eval(s);
    let (q, dq) = pj.eval(t);
    let point: Vec<f64> = p.iter().zip(&q).map(|(x, y)| 0.5 * (x + y)).collect();
    let dot = (curve::dot(&dp, &dq) / (curve::norm(&dp) * curve::norm(&dq))).clamp(-1.0, 1.0);
    (s, t, point, value, dot)
}

/// All self-intersections: exact segment crossings and near contacts within `tol.spatial`.
///
/// Pairs of neighbouring segments and pairs closer than `10·tol.spatial` in arclength are skipped.
pub fn self_intersections(c: &ArcCurve, tol: Tolerances) -> Vec<IntersectionEvent> {
    let n = c.len();
    if n < 4 {
        return Vec::new();
    }
    let segs = n - 1;
    let closed = c.kind() == CurveKind::C0Closed;
    let mut cumulative = Vec::with_capacity(n);
    cumulative.push(0.0);
    for i in 0..segs {
        cumulative.push(cumulative[i] + c.segment_length(i));
    }
    let total = cumulative[segs];
    let mean = total / segs as f64;
    let cell = 2.0 * mean + 2.0 * tol.spatial;
    let key = |x: f64| (x / cell).floor() as i64;
    let bbox = |i: usize| {
        let (p, q) = (c.point(i), c.point(i + 1));
        (
            [p[0].min(q[0]) - tol.spatial, p[1].min(q[1]) - tol.spatial],
            [p[0].max(q[0]) + tol.spatial, p[1].max(q[1]) + tol.spatial],
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..segs {
        let (lo, hi) = bbox(i);
        for gx in key(lo[0])..=key(hi[0]) {
            for gy in key(lo[1])..=key(hi[1]) {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    let arc_gap = |sa: f64, sb: f64| {
        let d = (sb - sa).abs();
        if closed {
            d.min(total - d)
        } else {
            d
        }
    };
    let mut hits = Vec::new();
    let mut cells: Vec<_> = grid.iter().collect();
    cells.sort_unstable_by_key(|(k, _)| **k);
    for (&(gx, gy), members) in cells {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j <= i + 1 || (closed && i == 0 && j == segs - 1) {
                    continue;
                }
                let (bi, bj) = (bbox(i), bbox(j));
                let lo = [bi.0[0].max(bj.0[0]), bi.0[1].max(bj.0[1])];
                let hi = [bi.1[0].min(bj.1[0]), bi.1[1].min(bj.1[1])];
                // Report each pair once: in the cell holding the low corner of the overlap.
                if lo[0] > hi[0] || lo[1] > hi[1] || (key(lo[0]), key(lo[1])) != (gx, gy) {
                    continue;
                }
                let (a, b, d) = segment_closest(c.point(i), c.point(i + 1), c.point(j), c.point(j + 1));
                if d > tol.spatial {
                    continue;
                }
                let sa = cumulative[i] + a * c.segment_length(i);
                let sb = cumulative[j] + b * c.segment_length(j);
                if arc_gap(sa, sb) <= 10.0 * tol.spatial {
                    continue;
                }
                hits.push(Hit { i, j, a, b, distance: d });
            }
        }
    }
    cluster(c, hits, tol, &cumulative, arc_gap)
}

fn cluster<G: Fn(f64, f64) -> f64>(
    c: &ArcCurve,
    mut hits: Vec<Hit>,
    tol: Tolerances,
    cumulative: &[f64],
    arc_gap: G,
) -> Vec<IntersectionEvent> {
    hits.sort_by(|x, y| (x.i, x.j).cmp(&(y.i, y.j)));
    let index: HashMap<(usize, usize), usize> =
        hits.iter().enumerate().map(|(k, h)| ((h.i, h.j), k)).collect();
    let mut parent: Vec<usize> = (0..hits.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    const REACH: usize = 3;
    for (k, h) in hits.iter().enumerate() {
        for di in 0..=REACH {
            for dj in 0..=2 * REACH {
                let (i2, j2) = (h.i + di, (h.j + dj).wrapping_sub(REACH));
                if let Some(&other) = index.get(&(i2, j2)) {
                    let (ra, rb) = (find(&mut parent, k), find(&mut parent, other));
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut best: HashMap<usize, usize> = HashMap::new();
    for k in 0..hits.len() {
        let root = find(&mut parent, k);
        let entry = best.entry(root).or_insert(k);
        if hits[k].distance < hits[*entry].distance {
            *entry = k;
        }
    }
    let mut reps: Vec<usize> = best.into_values().collect();
    reps.sort_unstable();
    let mut events: Vec<IntersectionEvent> = reps
        .into_iter()
        .map(|k| {
            let (s1, s2, point, distance, dot) = refine(c, &hits[k]);
            let classification = if dot >= 1.0 - tol.angle {
                Classification::TangentialSame
            } else if dot <= -1.0 + tol.angle {
                Classification::TangentialOpposite
            } else {
                Classification::Transversal
            };
            IntersectionEvent {
                s1,
                s2,
                point,
                distance,
                tangent_dot: dot,
                classification,
                separation: 0.0,
            }
        })
        .collect();
    for e in events.iter_mut() {
        e.separation = arc_gap(param_to_arc(c, cumulative, e.s1), param_to_arc(c, cumulative, e.s2));
    }
    // Clusters whose refinements converged to the same contact are reported once.
    events.dedup_by(|b, a| (a.s1 - b.s1).abs() < 1e-9 && (a.s2 - b.s2).abs() < 1e-9);
    events
}

fn param_to_arc(c: &ArcCurve, cumulative: &[f64], s: f64) -> f64 {
    let p = c.params();
    let i = p.partition_point(|&x| x <= s).clamp(1, p.len() - 1) - 1;
    cumulative[i] + (s - p[i]) / (p[i + 1] - p[i]) * c.segment_length(i)
}

/// `(min ⟨T, e₁⟩ > 0, min ⟨T, e₁⟩)` over the samples, with fourth-order tangents.
pub fn is_graphical(c: &ArcCurve) -> crate::Result<(bool, f64)> {
    let frame = c.frame()?;
    let d = c.dim();
    let min = (0..c.len())
        .map(|i| frame.tangent[i * d])
        .fold(f64::INFINITY, f64::min);
    Ok((min > GRAPHICAL_FLOOR, min))
}

/// ⟨T, e₁⟩ at or below this value counts as vertical.
pub const GRAPHICAL_FLOOR: f64 = 1e-10;

/// Index of the sample where ⟨T, e₁⟩ is smallest.
pub fn min_tangent_e1_index(c: &ArcCurve) -> crate::Result<usize> {
    let frame = c.frame()?;
    let d = c.dim();
    Ok((0..c.len())
        .min_by(|&a, &b| frame.tangent[a * d].total_cmp(&frame.tangent[b * d]))
        .unwrap_or(0))
}

pub fn is_embedded(c: &ArcCurve, tol: Tolerances) -> bool {
    self_intersections(c, tol).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn crossing_segments() {
        let (a, b, d) = segment_closest(&[0.0, 0.0], &[2.0, 2.0], &[0.0, 2.0], &[2.0, 0.0]);
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15 && d < 1e-15);
        let (_, _, d) = segment_closest(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]);
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn line_is_embedded_and_graphical() {
        let c = zoo::line_curve(10.0, 101).unwrap();
        assert!(is_embedded(&c, Tolerances::for_curve(&c)));
        assert_eq!(is_graphical(&c).unwrap(), (true, 1.0));
    }

    #[test]
    fn borderline_has_one_transversal_crossing() {
        let c = zoo::borderline_curve(20.0, 8001).unwrap();
        let events = self_intersections(&c, Tolerances::for_curve(&c));
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].classification, Classification::Transversal);
        // Crossing on the symmetry axis at ±s with s − 2 tanh s = 0.
        let s = crate::specfun::find_root(|s| s - 2.0 * s.tanh(), 1.0, 3.0, 1e-14).unwrap();
        assert!((events[0].s1 + s).abs() < 1e-6 && (events[0].s2 - s).abs() < 1e-6);
    }

    #[test]
    fn circle_closure_is_not_an_intersection() {
        let c = zoo::circle_curve(1.0, 401).unwrap();
        assert!(is_embedded(&c, Tolerances::for_curve(&c)));
    }
}
