use crate::BinaryMask;

/// Euclidean distance from every intervillous pixel to the nearest villous
/// pixel, with everything outside the raster counted as villous.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMap {
    width: usize,
    height: usize,
    squared: Vec<u64>,
    values: Vec<f64>,
}

impl DistanceMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Exact squared distance.
    #[inline]
    pub fn squared(&self, x: usize, y: usize) -> u64 {
        self.squared[y * self.width + x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over one line.
fn envelope_1d(f: &[u64], out: &mut [u64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let key = |q: usize| f[q] as f64 + (q * q) as f64;
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        // z[0] is -inf, so k never underflows.
        let mut s = (key(q) - key(v[k])) / (2.0 * (q - v[k]) as f64);
        while s <= z[k] {
            k -= 1;
            s = (key(q) - key(v[k])) / (2.0 * (q - v[k]) as f64);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q.abs_diff(p) as u64;
        *o = d * d + f[p];
    }
}

/// Exact Euclidean distance transform of the intervillous phase.
pub fn distance_map(mask: &BinaryMask) -> DistanceMap {
    let (w, h) = (mask.width(), mask.height());
    // One ring of villous padding makes the raster border a wall.
    let (pw, ph) = (w + 2, h + 2);
    let inf = ((pw + ph) * (pw + ph)) as u64 * 4;
    let mut g: Vec<u64> = (0..pw * ph)
        .map(|i| {
            let (x, y) = (i % pw, i / pw);
            let inside = x >= 1 && y >= 1 && x <= w && y <= h;
            if inside && !mask.is_villous(x - 1, y - 1) {
                inf
            } else {
                0
            }
        })
        .collect();
    let len = pw.max(ph);
    let (mut f, mut out) = (vec![0u64; len], vec![0u64; len]);
    let (mut v, mut z) = (vec![0usize; len], vec![0f64; len + 1]);
    for x in 0..pw {
        for y in 0..ph {
            f[y] = g[y * pw + x];
        }
        envelope_1d(&f[..ph], &mut out[..ph], &mut v, &mut z);
        for y in 0..ph {
            g[y * pw + x] = out[y];
        }
    }
    for y in 0..ph {
        f[..pw].copy_from_slice(&g[y * pw..(y + 1) * pw]);
        envelope_1d(&f[..pw], &mut out[..pw], &mut v, &mut z);
        g[y * pw..(y + 1) * pw].copy_from_slice(&out[..pw]);
    }
    let mut squared = Vec::with_capacity(w * h);
    for y in 1..=h {
        squared.extend_from_slice(&g[y * pw + 1..y * pw + 1 + w]);
    }
    let values = squared.iter().map(|&s| (s as f64).sqrt()).collect();
    DistanceMap {
        width: w,
        height: h,
        squared,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Minimum over every villous pixel and every padding pixel.
    fn brute_force(mask: &BinaryMask) -> Vec<u64> {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let mut walls = Vec::new();
        for y in -1..=h {
            for x in -1..=w {
                let inside = x >= 0 && y >= 0 && x < w && y < h;
                if !inside || mask.is_villous(x as usize, y as usize) {
                    walls.push((x, y));
                }
            }
        }
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let d = walls
                    .iter()
                    .map(|&(wx, wy)| ((wx - x).pow(2) + (wy - y).pow(2)) as u64)
                    .min()
                    .unwrap();
                out.push(d);
            }
        }
        out
    }

    #[test]
    fn all_villous_is_zero() {
        let d = distance_map(&BinaryMask::filled(7, 5, true));
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lone_void_pixel_is_one() {
        let m = BinaryMask::from_fn(9, 9, |x, y| !(x == 4 && y == 3));
        let d = distance_map(&m);
        assert_eq!(d.get(4, 3), 1.0);
    }

    #[test]
    fn block_centre() {
        // 11x11 void block at (5..16, 5..16) of a 21x21 villous raster: the
        // centre (10, 10) is 6 px from the nearest wall pixel.
        let m = BinaryMask::from_fn(21, 21, |x, y| !((5..16).contains(&x) && (5..16).contains(&y)));
        let d = distance_map(&m);
        assert_eq!(d.get(10, 10), 6.0);
        assert_eq!(d.squared(10, 10), brute_force(&m)[10 * 21 + 10]);
    }

    #[test]
    fn border_is_a_wall() {
        let d = distance_map(&BinaryMask::filled(5, 1, false));
        assert_eq!(d.values(), &[1.0; 5]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(w in 1usize..24, h in 1usize..24, density in 0.0f64..1.0, bits in proptest::collection::vec(0.0f64..1.0, 576)) {
            let m = BinaryMask::from_fn(w, h, |x, y| bits[y * 24 + x] < density);
            let d = distance_map(&m);
            let bf = brute_force(&m);
            for y in 0..h {
                for x in 0..w {
                    prop_assert_eq!(d.squared(x, y), bf[y * w + x]);
                }
            }
        }
    }
}
