//! Small dense univariate polynomials (coefficients low to high degree).

use nalgebra::{Complex, DMatrix};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(c: &[f64]) -> Self {
        Poly(c.to_vec())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&0.0) + o.0.get(i).unwrap_or(&0.0)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn abs(&self) -> Poly {
        Poly(self.0.iter().map(|c| c.abs()).collect())
    }

    pub fn eval_c(&self, x: Complex<f64>) -> Complex<f64> {
        self.0.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn deriv(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// All complex roots, through the eigenvalues of the companion matrix
    /// followed by Newton polishing. Leading coefficients below
    /// `1e-14·max|cᵢ|` are treated as zero (roots at infinity are dropped).
    pub fn roots(&self) -> Option<Vec<Complex<f64>>> {
        let m = self.max_abs();
        if m == 0.0 {
            return None;
        }
        let mut c = self.0.clone();
        while c.len() > 1 && c.last().unwrap().abs() <= 1e-14 * m {
            c.pop();
        }
        let n = c.len() - 1;
        if n == 0 {
            return Some(Vec::new());
        }
        let lead = c[n];
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            comp[(0, i)] = -c[n - 1 - i] / lead;
            if i + 1 < n {
                comp[(i + 1, i)] = 1.0;
            }
        }
        let schur = nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 10_000)?;
        let eig = schur.complex_eigenvalues();
        let p = Poly(c);
        let dp = p.deriv();
        let roots = eig
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..8 {
                    let d = dp.eval_c(z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = p.eval_c(z) / d;
                    let nz = z - step;
                    if !(nz.re.is_finite() && nz.im.is_finite()) || p.eval_c(nz).norm() > p.eval_c(z).norm() {
                        break;
                    }
                    z = nz;
                    if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                        break;
                    }
                }
                z
            })
            .collect();
        Some(roots)
    }
}

/// Real roots of `a·t³ + b·t² + c·t + d` when all three are real, by the
/// trigonometric (Viète) method. Returns `None` if the discriminant is
/// negative or `a` vanishes.
#[cfg(test)]
pub(crate) fn cubic_trig_roots(a: f64, b: f64, c: f64, d: f64) -> Option<[f64; 3]> {
    if a == 0.0 {
        return None;
    }
    let (b, c, d) = (b / a, c / a, d / a);
    // depressed t = s − b/3: s³ + p s + q
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    if p >= 0.0 {
        return None;
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let shift = b / 3.0;
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        *o = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_roots_of_known_polynomial() {
        // (x−1)(x−2)(x+3)(x²+1)/(x²+1) → (x−1)(x−2)(x+3)(x−0.5)
        let p = Poly::new(&[-1.0, 1.0]).mul(&Poly::new(&[-2.0, 1.0])).mul(&Poly::new(&[3.0, 1.0])).mul(&Poly::new(&[-0.5, 1.0]));
        let mut r: Vec<f64> = p.roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-3.0, 0.5, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_pair_detected() {
        let p = Poly::new(&[1.0, 0.0, 1.0]).mul(&Poly::new(&[-2.0, 1.0]));
        let r = p.roots().unwrap();
        let n_complex = r.iter().filter(|z| z.im.abs() > 1e-6).count();
        assert_eq!(n_complex, 2);
    }

    #[test]
    fn vanishing_leading_coefficient_reduces_degree() {
        let p = Poly::new(&[-2.0, 1.0, 0.0, 1e-20]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn viete_matches_known_roots() {
        // (t−1)(t+2)(t−3) = t³ − 2t² − 5t + 6
        let mut r = cubic_trig_roots(1.0, -2.0, -5.0, 6.0).unwrap();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(cubic_trig_roots(1.0, 0.0, 1.0, 0.0).is_none());
    }
}
