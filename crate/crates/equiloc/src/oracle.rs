//! Independent floating-point verification on the unit sphere.
//!
//! A product rule, Gauss-Legendre in the z coordinate times uniform
//! longitude, integrates polynomials in z exactly up to degree 2*n_lat - 1;
//! that is what lets the sphere checks run at tight tolerances.

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub n_lat: usize,
    pub n_lon: usize,
    /// (z, phi, weight) triples.
    nodes: Vec<(f64, f64, f64)>,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl QuadratureGrid {
    pub fn new(n_lat: usize, n_lon: usize) -> Self {
        assert!(n_lat >= 1 && n_lon >= 1, "grid must be nonempty");
        let (zs, wz) = gauss_legendre(n_lat);
        let dphi = 2.0 * std::f64::consts::PI / n_lon as f64;
        let mut nodes = Vec::with_capacity(n_lat * n_lon);
        for (z, w) in zs.iter().zip(&wz) {
            for j in 0..n_lon {
                let phi = dphi * (j as f64 + 0.5);
                nodes.push((*z, phi, w * dphi));
            }
        }
        QuadratureGrid {
            n_lat,
            n_lon,
            nodes,
        }
    }

    pub fn weight_sum(&self) -> f64 {
        pairwise_sum(&self.nodes.iter().map(|&(_, _, w)| w).collect::<Vec<_>>())
    }
}

/// Deterministic pairwise summation.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum_complex(a) + pairwise_sum_complex(b)
        }
    }
}

/// Integral of f over the unit sphere with the area measure.
pub fn sphere_integral<F: Fn(f64, f64, f64) -> Complex64>(
    f: F,
    grid: &QuadratureGrid,
) -> Complex64 {
    let values: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&(z, phi, w)| {
            let r = (1.0 - z * z).max(0.0).sqrt();
            f(r * phi.cos(), r * phi.sin(), z) * w
        })
        .collect();
    pairwise_sum_complex(&values)
}

/// Quadrature-weighted histogram of a scalar function's values, normalized
/// to density per unit length.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    /// Densities per bin.
    pub density: Vec<f64>,
    /// Total mass before normalization.
    pub mass: f64,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.density.len() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + self.bin_width() * (i as f64 + 0.5)
    }
}

pub fn pushforward_histogram<F: Fn(f64, f64, f64) -> f64>(
    mu: F,
    grid: &QuadratureGrid,
    bins: usize,
) -> Histogram {
    assert!(bins >= 8, "at least 8 bins");
    let samples: Vec<(f64, f64)> = grid
        .nodes
        .iter()
        .map(|&(z, phi, w)| {
            let r = (1.0 - z * z).max(0.0).sqrt();
            (mu(r * phi.cos(), r * phi.sin(), z), w)
        })
        .collect();
    let lo = samples
        .iter()
        .map(|&(v, _)| v)
        .fold(f64::INFINITY, f64::min);
    let hi = samples
        .iter()
        .map(|&(v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let mut sums = vec![0.0f64; bins];
    for &(v, w) in &samples {
        let idx = (((v - lo) / span) * bins as f64) as usize;
        sums[idx.min(bins - 1)] += w;
    }
    let mass = pairwise_sum(&sums);
    let width = span / bins as f64;
    Histogram {
        lo,
        hi,
        density: sums.iter().map(|s| s / width).collect(),
        mass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

    #[test]
    fn weights_sum_to_sphere_area() {
        let grid = QuadratureGrid::new(64, 64);
        assert!((grid.weight_sum() - FOUR_PI).abs() < 1e-12);
        let coarse = QuadratureGrid::new(8, 16);
        assert!((coarse.weight_sum() - FOUR_PI).abs() < 1e-12);
    }

    #[test]
    fn constant_integrates_to_area() {
        let grid = QuadratureGrid::new(64, 64);
        let v = sphere_integral(|_, _, _| Complex64::new(1.0, 0.0), &grid);
        assert!((v.re - FOUR_PI).abs() < 1e-9);
    }

    #[test]
    fn odd_function_integrates_to_zero() {
        let grid = QuadratureGrid::new(64, 64);
        let v = sphere_integral(|_, _, z| Complex64::new(z, 0.0), &grid);
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn plane_wave_matches_closed_form() {
        let grid = QuadratureGrid::new(64, 64);
        for &t in &[0.5, 1.0, 2.0, 5.0] {
            let v = sphere_integral(|_, _, z| Complex64::new(0.0, t * z).exp(), &grid);
            let expect = FOUR_PI * t.sin() / t;
            assert!((v.re - expect).abs() < 1e-8, "t = {}", t);
            assert!(v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn refinement_reduces_error() {
        let t = 5.0f64;
        let expect = FOUR_PI * t.sin() / t;
        let mut last = f64::INFINITY;
        for n in [4usize, 8, 16, 32] {
            let grid = QuadratureGrid::new(n, 16);
            let v = sphere_integral(|_, _, z| Complex64::new(0.0, t * z).exp(), &grid);
            let err = (v.re - expect).abs();
            assert!(err <= last * 1.01 + 1e-13, "n = {}", n);
            last = err;
        }
    }

    #[test]
    fn height_pushforward_is_uniform() {
        // bins slice between latitude nodes, so the grid must be much finer
        // than the bin count
        let grid = QuadratureGrid::new(2048, 8);
        let hist = pushforward_histogram(|_, _, z| z, &grid, 20);
        assert!((hist.mass - FOUR_PI).abs() < 1e-9);
        let two_pi = 2.0 * std::f64::consts::PI;
        for (i, d) in hist.density.iter().enumerate() {
            if i == 0 || i == hist.density.len() - 1 {
                continue; // edge bins clip the open range
            }
            assert!((d - two_pi).abs() / two_pi < 0.02, "bin {}: {}", i, d);
        }
    }

    #[test]
    fn constant_map_concentrates_mass() {
        let grid = QuadratureGrid::new(32, 32);
        let hist = pushforward_histogram(|_, _, _| 3.0, &grid, 10);
        assert!((hist.mass - FOUR_PI).abs() < 1e-9);
        let occupied: Vec<usize> = hist
            .density
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(occupied.len(), 1);
    }

    #[test]
    fn square_pushforward_decreases() {
        let grid = QuadratureGrid::new(1024, 8);
        let hist = pushforward_histogram(|_, _, z| z * z, &grid, 16);
        assert!((hist.mass - FOUR_PI).abs() < 1e-9);
        // density ~ 1/sqrt(x): monotone decreasing over interior bins
        for w in hist.density[1..hist.density.len() - 1].windows(2) {
            assert!(w[0] >= w[1] * 0.98, "{} then {}", w[0], w[1]);
        }
    }
}
