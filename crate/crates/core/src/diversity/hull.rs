use crate::{Error, Result};

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull vertices in counter-clockwise order (Andrew's monotone chain),
/// collinear boundary points dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in [&pts[..], &pts.iter().rev().copied().collect::<Vec<_>>()[..]] {
        let floor = hull.len();
        for &p in pass {
            while hull.len() >= floor + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice.abs() / 2.0
}

/// Area of the convex hull of `points`.
pub fn hull_area(points: &[(f64, f64)]) -> Result<f64> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return Err(Error::DegenerateCloud);
    }
    let area = polygon_area(&hull);
    if area > 0.0 {
        Ok(area)
    } else {
        Err(Error::DegenerateCloud)
    }
}

/// Area of the axis-aligned bounding box of `points`.
pub fn bounding_box_area(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::DegenerateCloud);
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let area = (x1 - x0) * (y1 - y0);
    if area > 0.0 {
        Ok(area)
    } else {
        Err(Error::DegenerateCloud)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng};

    /// Hull edges found by checking every ordered pair against all points,
    /// then chained into a polygon.
    fn brute_force_area(points: &[(f64, f64)]) -> f64 {
        let mut distinct: Vec<(f64, f64)> = Vec::new();
        for &p in points {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        let points = &distinct[..];
        let mut edges = Vec::new();
        for (i, &a) in points.iter().enumerate() {
            for (j, &b) in points.iter().enumerate() {
                if i == j || a == b {
                    continue;
                }
                let all_left = points.iter().all(|&p| cross(a, b, p) >= 0.0);
                // Keep only the outermost pair among collinear candidates.
                let maximal = points.iter().all(|&p| {
                    cross(a, b, p) != 0.0 || {
                        let t = (p.0 - a.0) * (b.0 - a.0) + (p.1 - a.1) * (b.1 - a.1);
                        let len2 = (b.0 - a.0).powi(2) + (b.1 - a.1).powi(2);
                        (0.0..=len2).contains(&t)
                    }
                });
                if all_left && maximal {
                    edges.push((a, b));
                }
            }
        }
        edges.iter().map(|&(a, b)| a.0 * b.1 - b.0 * a.1).sum::<f64>() / 2.0
    }

    #[test]
    fn unit_square() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)];
        assert_eq!(hull_area(&pts).unwrap(), 1.0);
        assert_eq!(bounding_box_area(&pts).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_clouds() {
        assert!(matches!(hull_area(&[(0.0, 0.0), (1.0, 1.0)]), Err(Error::DegenerateCloud)));
        assert!(matches!(
            hull_area(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]),
            Err(Error::DegenerateCloud)
        ));
        assert!(matches!(hull_area(&[(1.0, 1.0); 5]), Err(Error::DegenerateCloud)));
    }

    #[test]
    fn random_cloud_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<(f64, f64)> = (0..100).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let fast = hull_area(&pts).unwrap();
        let slow = brute_force_area(&pts);
        assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
    }

    proptest! {
        #[test]
        fn matches_brute_force_on_grids(pts in proptest::collection::vec((0i32..6, 0i32..6), 3..30)) {
            let pts: Vec<(f64, f64)> = pts.into_iter().map(|(x, y)| (x as f64, y as f64)).collect();
            let slow = brute_force_area(&pts);
            match hull_area(&pts) {
                Ok(a) => prop_assert!((a - slow).abs() < 1e-9),
                Err(_) => prop_assert_eq!(slow, 0.0),
            }
        }

        #[test]
        fn order_does_not_matter(mut pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..40)) {
            let a = hull_area(&pts).ok();
            pts.reverse();
            pts.rotate_left(1);
            prop_assert_eq!(hull_area(&pts).ok(), a);
        }
    }
}
