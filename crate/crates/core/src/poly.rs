//! Dense univariate polynomials over `f64` with real-root isolation.
//!
//! Real roots are isolated with a Sturm sequence and bisection, then polished
//! with a safeguarded Newton iteration. Complex roots (used for root
//! multiplicity certificates) come from an Aberth–Ehrlich iteration.

use num_complex::Complex64;

/// Coefficients in ascending order: `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut p = Poly { coeffs: coeffs.into() };
        p.trim_exact();
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    fn trim_exact(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    /// Drops leading coefficients below `rel * max|c|`.
    fn trim_relative(&mut self, rel: f64) {
        let scale = self.max_abs_coeff();
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().abs() <= rel * scale {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect::<Vec<_>>())
    }

    /// `x^n p(1/x)` with `n` the stored length minus one.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Divides every coefficient by the largest magnitude.
    pub fn normalized(&self) -> Poly {
        let s = self.max_abs_coeff();
        if s == 0.0 {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|c| c / s).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out: Vec<f64> =
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0)).collect();
        Poly::new(out)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    /// Remainder of polynomial division `self mod divisor`.
    fn rem(&self, divisor: &Poly) -> Poly {
        let mut r = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dn = d.len() - 1;
        let lead = d[dn];
        while r.len() > dn && r.len() > 1 {
            let k = r[r.len() - 1] / lead;
            let shift = r.len() - 1 - dn;
            for (i, &dc) in d.iter().enumerate() {
                r[shift + i] -= k * dc;
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0.0);
        }
        Poly { coeffs: r }
    }

    /// Sturm chain of `self`, terminated once a remainder is negligible
    /// relative to its predecessor (which then carries the repeated factor).
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut p0 = self.normalized();
        p0.trim_relative(1e-14);
        let mut chain = vec![p0.clone()];
        if p0.degree() == 0 {
            return chain;
        }
        let mut p1 = p0.derivative().normalized();
        p1.trim_relative(1e-14);
        chain.push(p1);
        loop {
            let n = chain.len();
            if chain[n - 1].degree() == 0 {
                break;
            }
            let prev_scale = chain[n - 2].max_abs_coeff().max(chain[n - 1].max_abs_coeff());
            let mut r = chain[n - 2].rem(&chain[n - 1]).scale(-1.0);
            if r.max_abs_coeff() <= 1e-11 * prev_scale {
                break;
            }
            r = r.normalized();
            r.trim_relative(1e-14);
            chain.push(r);
        }
        chain
    }

    /// Finds the distinct real roots in `[lo, hi]`, sorted ascending.
    pub fn real_roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        if self.is_zero() {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        if chain[0].degree() == 0 {
            return Vec::new();
        }
        let variations = |x: f64| sign_variations(&chain, x);
        // Widen slightly so roots sitting on either end are caught.
        let a0 = lo - 1e-13 * (1.0 + lo.abs());
        let b0 = hi + 1e-13 * (1.0 + hi.abs());
        let mut stack = vec![(a0, b0, variations(a0), variations(b0))];
        let mut roots = Vec::new();
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va.saturating_sub(vb);
            if count == 0 {
                continue;
            }
            if count == 1 {
                roots.push(self.polish_in(a, b));
                continue;
            }
            if b - a < 1e-13 * (1.0 + a.abs()) {
                roots.push(0.5 * (a + b));
                continue;
            }
            let m = 0.5 * (a + b);
            let vm = variations(m);
            stack.push((a, m, va, vm));
            stack.push((m, b, vm, vb));
        }
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * (1.0 + x.abs()));
        roots
    }

    /// Polishes the single root isolated in `(a, b]`.
    fn polish_in(&self, mut a: f64, mut b: f64) -> f64 {
        let fb = self.eval(b);
        if fb == 0.0 {
            return b;
        }
        let fa = self.eval(a);
        if fa * fb < 0.0 {
            return self.bracketed_newton(a, b, fa);
        }
        // No sign change: even multiplicity. Minimize |p| by golden section.
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        for _ in 0..200 {
            if (b - a).abs() < 1e-16 * (1.0 + a.abs()) {
                break;
            }
            if self.eval(c).abs() < self.eval(d).abs() {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        0.5 * (a + b)
    }

    fn bracketed_newton(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        let dp = self.derivative();
        let mut x = 0.5 * (a + b);
        for _ in 0..200 {
            let fx = self.eval(x);
            if fx == 0.0 {
                return x;
            }
            if fa * fx < 0.0 {
                b = x;
            } else {
                a = x;
                fa = fx;
            }
            let d = dp.eval(x);
            let newton = x - fx / d;
            let next = if d != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
            if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) || b - a <= 4.0 * f64::EPSILON * (1.0 + x.abs())
            {
                return next;
            }
            x = next;
        }
        x
    }

    /// All complex roots (with multiplicity) by Aberth–Ehrlich iteration.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let mut p = self.normalized();
        p.trim_relative(1e-15);
        let n = p.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = p.coeffs[n];
        let monic = Poly::new(p.coeffs.iter().map(|c| c / lead).collect::<Vec<_>>());
        let dp = monic.derivative();
        // Fujiwara-style bound for the initial circle.
        let radius = monic.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs().powf(1.0 / (n - i) as f64))
            .fold(0.0_f64, f64::max)
            .max(1e-3);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                Complex64::from_polar(radius, ang)
            })
            .collect();
        for _ in 0..1000 {
            let mut max_step = 0.0_f64;
            for i in 0..n {
                let pz = monic.eval_complex(z[i]);
                if pz.norm() == 0.0 {
                    continue;
                }
                let ratio = pz / dp.eval_complex(z[i]);
                let sum: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d = z[i] - z[j];
                        if d.norm() == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            1.0 / d
                        }
                    })
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_step < 1e-17 {
                break;
            }
        }
        z
    }
}

fn sign_variations(chain: &[Poly], x: f64) -> usize {
    let mut last = 0.0_f64;
    let mut count = 0;
    for p in chain {
        let v = p.eval(x);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Chordal distance on the Riemann sphere; invariant under `t -> 1/t`.
pub fn chordal_distance(a: Complex64, b: Complex64) -> f64 {
    if a.is_infinite() && b.is_infinite() {
        return 0.0;
    }
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[f64]) -> Poly {
        roots.iter().fold(Poly::new(vec![1.0]), |acc, &r| acc.mul(&Poly::new(vec![-r, 1.0])))
    }

    #[test]
    fn simple_quartic_roots() {
        let p = from_roots(&[-1.5, -0.2, 0.3, 2.0]);
        let r = p.real_roots_in(-10.0, 10.0);
        assert_eq!(r.len(), 4);
        for (got, want) in r.iter().zip([-1.5, -0.2, 0.3, 2.0]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn interval_restriction() {
        let p = from_roots(&[-1.5, -0.2, 0.3, 2.0]);
        assert_eq!(p.real_roots_in(-1.0, 1.0).len(), 2);
        assert_eq!(p.real_roots_in(0.3, 2.0).len(), 2);
    }

    #[test]
    fn no_real_roots() {
        // (x^2 + 1)(x^2 + 4)
        let p = Poly::new(vec![1.0, 0.0, 1.0]).mul(&Poly::new(vec![4.0, 0.0, 1.0]));
        assert!(p.real_roots_in(-100.0, 100.0).is_empty());
    }

    #[test]
    fn double_root_found_once() {
        let p = from_roots(&[0.5, 0.5, -1.0, 3.0]);
        let r = p.real_roots_in(-5.0, 5.0);
        assert_eq!(r.len(), 3, "{r:?}");
        assert!((r[1] - 0.5).abs() < 1e-7);
    }

    #[test]
    fn aberth_finds_triple_cluster() {
        let p = from_roots(&[0.25, 0.25, 0.25, -2.0]);
        let z = p.complex_roots();
        let near: Vec<_> = z.iter().filter(|r| (**r - 0.25).norm() < 1e-4).collect();
        assert_eq!(near.len(), 3, "{z:?}");
    }

    #[test]
    fn chordal_distance_reciprocal_invariant() {
        let a = Complex64::new(3.0, 0.5);
        let b = Complex64::new(-0.7, 0.1);
        let d1 = chordal_distance(a, b);
        let d2 = chordal_distance(1.0 / a, 1.0 / b);
        assert!((d1 - d2).abs() < 1e-14);
    }
}
