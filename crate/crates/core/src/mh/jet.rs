//! Truncated bivariate Taylor polynomials in `(λ, ξ)` with orders `i ≤ 1`
//! in `λ` and `j ≤ 3` in `ξ`, enough to evaluate `∂_λ^i ∂_ξ^j` exactly.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const MAX_I: usize = 1;
pub const MAX_J: usize = 3;

/// `Σ c[i][j] dλ^i dξ^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [[f64; MAX_J + 1]; MAX_I + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [[0.0; MAX_J + 1]; MAX_I + 1];
        c[0][0] = v;
        Self { c }
    }

    pub fn lambda(v: f64) -> Self {
        let mut j = Self::constant(v);
        j.c[1][0] = 1.0;
        j
    }

    pub fn xi(v: f64) -> Self {
        let mut j = Self::constant(v);
        j.c[0][1] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    /// `∂_λ^i ∂_ξ^j` at the expansion point.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        assert!(i <= MAX_I && j <= MAX_J, "jet order exceeded");
        let fact = |k: usize| (1..=k).product::<usize>() as f64;
        self.c[i][j] * fact(i) * fact(j)
    }

    fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.c.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    /// `self^p` for a positive constant term.
    pub fn powf(self, p: f64) -> Self {
        let f0 = self.value();
        assert!(f0 > 0.0, "jet power needs a positive base, got {f0}");
        let h = (self - Jet::constant(f0)).scale(1.0 / f0);
        // (1 + h)^p = Σ_k binom(p, k) h^k; h is nilpotent of order MAX_I + MAX_J + 1
        let mut sum = Jet::constant(1.0);
        let mut term = Jet::constant(1.0);
        let mut binom = 1.0;
        for k in 1..=(MAX_I + MAX_J) {
            term = term * h;
            binom *= (p - (k as f64 - 1.0)) / k as f64;
            sum = sum + term.scale(binom);
        }
        sum.scale(f0.powf(p))
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(self) -> Self {
        let f0 = self.value();
        assert!(f0 != 0.0, "jet reciprocal of zero");
        let h = (self - Jet::constant(f0)).scale(1.0 / f0);
        let mut sum = Jet::constant(1.0);
        let mut term = Jet::constant(1.0);
        for _ in 1..=(MAX_I + MAX_J) {
            term = term * -h;
            sum = sum + term;
        }
        sum.scale(1.0 / f0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut out = self;
        for i in 0..=MAX_I {
            for j in 0..=MAX_J {
                out.c[i][j] += o.c[i][j];
            }
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [[0.0; MAX_J + 1]; MAX_I + 1];
        for i1 in 0..=MAX_I {
            for j1 in 0..=MAX_J {
                let a = self.c[i1][j1];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=(MAX_I - i1) {
                    for j2 in 0..=(MAX_J - j1) {
                        c[i1 + i2][j1 + j2] += a * o.c[i2][j2];
                    }
                }
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        self + Jet::constant(o)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // f = λ ξ³ + 2ξ² at (2, 3)
        let l = Jet::lambda(2.0);
        let x = Jet::xi(3.0);
        let f = l * x * x * x + x * x * 2.0;
        assert_eq!(f.value(), 2.0 * 27.0 + 18.0);
        assert_eq!(f.derivative(1, 0), 27.0);
        assert_eq!(f.derivative(0, 1), 3.0 * 2.0 * 9.0 + 12.0);
        assert_eq!(f.derivative(1, 2), 18.0);
        assert_eq!(f.derivative(0, 3), 12.0);
        assert_eq!(f.derivative(1, 3), 6.0);
    }

    #[test]
    fn powers_against_closed_forms() {
        let (l0, x0) = (0.7, 2.5);
        let g = (Jet::xi(x0) + Jet::lambda(l0) * Jet::lambda(l0)).powf(-0.5);
        let b = x0 + l0 * l0;
        assert!((g.derivative(1, 0) - (-0.5 * b.powf(-1.5) * 2.0 * l0)).abs() < 1e-14);
        assert!((g.derivative(0, 3) - (-0.5 * -1.5 * -2.5 * b.powf(-3.5))).abs() < 1e-14);
        assert!((g.derivative(1, 2) - (-0.5 * -1.5 * -2.5 * b.powf(-3.5) * 2.0 * l0)).abs() < 1e-14);
        let r = Jet::xi(x0).recip();
        assert!((r.derivative(0, 3) + 6.0 / x0.powi(4)).abs() < 1e-14);
    }
}
