use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{C64, I, ONE, ZERO};

type Custom = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Heat(f64),
    ImaginaryPower(f64),
    DyadicBump(i32),
    RieszRatio(f64),
    Jump(f64),
    Identity,
    Constant(C64),
    Product(Box<MultiplierSpec>, Box<MultiplierSpec>),
    Custom(Custom),
}

/// A multiplier `m` on `(0, ∞)`.
#[derive(Clone)]
pub struct MultiplierSpec {
    label: String,
    kind: Kind,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec").field("label", &self.label).finish()
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {value}")))
    }
}

impl MultiplierSpec {
    /// `e^{-ts}`.
    pub fn heat(t: f64) -> Result<Self> {
        Ok(Self { label: format!("heat(t={t})"), kind: Kind::Heat(positive("t", t)?) })
    }

    /// `s^{iu}`.
    pub fn imaginary_power(u: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::Config(format!("u must be finite, got {u}")));
        }
        Ok(Self { label: format!("imaginary_power(u={u})"), kind: Kind::ImaginaryPower(u) })
    }

    /// Smooth bump supported in `[2^j, 2^{j+1}]`, equal to 1 on
    /// `[1.25·2^j, 1.75·2^j]`.
    pub fn dyadic_bump(j: i32) -> Self {
        Self { label: format!("dyadic_bump(j={j})"), kind: Kind::DyadicBump(j) }
    }

    /// `(s / (1 + s))^r`.
    pub fn riesz_ratio(r: f64) -> Result<Self> {
        Ok(Self { label: format!("riesz_ratio(r={r})"), kind: Kind::RieszRatio(positive("r", r)?) })
    }

    /// Indicator of `s < s0`.
    pub fn jump(s0: f64) -> Result<Self> {
        Ok(Self { label: format!("jump(s0={s0})"), kind: Kind::Jump(positive("s0", s0)?) })
    }

    pub fn identity() -> Self {
        Self { label: "identity".to_string(), kind: Kind::Identity }
    }

    pub fn constant(c: C64) -> Self {
        Self { label: format!("constant({c})"), kind: Kind::Constant(c) }
    }

    pub fn product(a: &MultiplierSpec, b: &MultiplierSpec) -> Self {
        Self { label: format!("{}*{}", a.label, b.label), kind: Kind::Product(Box::new(a.clone()), Box::new(b.clone())) }
    }

    pub fn custom<F: Fn(f64) -> C64 + Send + Sync + 'static>(label: &str, f: F) -> Self {
        Self { label: label.to_string(), kind: Kind::Custom(Arc::new(f)) }
    }

    /// Library lookup by name with a single optional parameter.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        match name {
            "heat" => Self::heat(param.unwrap_or(1.0)),
            "imaginary_power" => Self::imaginary_power(param.unwrap_or(1.0)),
            "dyadic_bump" => {
                let j = param.unwrap_or(0.0);
                if j.fract() != 0.0 || j.abs() > 60.0 {
                    return Err(Error::Config(format!("dyadic_bump needs a small integer j, got {j}")));
                }
                Ok(Self::dyadic_bump(j as i32))
            }
            "riesz_ratio" => Self::riesz_ratio(param.unwrap_or(1.0)),
            "jump" => Self::jump(param.unwrap_or(1.5)),
            "identity" => Ok(Self::identity()),
            "one" => Ok(Self::constant(ONE)),
            _ => Err(Error::Config(format!("unknown multiplier '{name}'"))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether `m` is real-valued on `(0, ∞)` (custom multipliers are not
    /// assumed to be).
    pub fn is_real(&self) -> bool {
        match &self.kind {
            Kind::ImaginaryPower(u) => *u == 0.0,
            Kind::Constant(c) => c.im == 0.0,
            Kind::Product(a, b) => a.is_real() && b.is_real(),
            Kind::Custom(_) => false,
            _ => true,
        }
    }

    pub fn eval(&self, s: f64) -> Result<C64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("{} evaluated at {s}, outside (0, inf)", self.label)));
        }
        Ok(self.eval_unchecked(s))
    }

    fn eval_unchecked(&self, s: f64) -> C64 {
        match &self.kind {
            Kind::Heat(t) => C64::from((-t * s).exp()),
            Kind::ImaginaryPower(u) => C64::from_polar(1.0, u * s.ln()),
            Kind::DyadicBump(j) => {
                let x = s / 2f64.powi(*j);
                C64::from(smooth_step((x - 1.0) / 0.25) * smooth_step((2.0 - x) / 0.25))
            }
            Kind::RieszRatio(r) => C64::from((s / (1.0 + s)).powf(*r)),
            Kind::Jump(s0) => {
                if s < *s0 {
                    ONE
                } else {
                    ZERO
                }
            }
            Kind::Identity => C64::from(s),
            Kind::Constant(c) => *c,
            Kind::Product(a, b) => a.eval_unchecked(s) * b.eval_unchecked(s),
            Kind::Custom(f) => f(s),
        }
    }

    /// `m^{(k)}(s)` where a closed form is known.
    pub fn derivative(&self, k: usize, s: f64) -> Option<C64> {
        if !(s > 0.0 && s.is_finite()) {
            return None;
        }
        match &self.kind {
            Kind::Heat(t) => Some(C64::from((-t).powi(k as i32) * (-t * s).exp())),
            Kind::ImaginaryPower(u) => {
                let z = I * *u;
                let falling: C64 = (0..k).map(|l| z - l as f64).product();
                Some(falling * ((z - k as f64) * s.ln()).exp())
            }
            Kind::Identity => Some(match k {
                0 => C64::from(s),
                1 => ONE,
                _ => ZERO,
            }),
            Kind::Constant(c) => Some(if k == 0 { *c } else { ZERO }),
            Kind::RieszRatio(r) if k <= 1 => {
                let base = s / (1.0 + s);
                Some(C64::from(if k == 0 { base.powf(*r) } else { r * base.powf(r - 1.0) / ((1.0 + s) * (1.0 + s)) }))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_values() {
        let h = MultiplierSpec::heat(1.0).unwrap();
        assert!((h.eval(2.0).unwrap().re - 0.135_335_283_236_612_7).abs() < 1e-15);
        let p = MultiplierSpec::imaginary_power(1.0).unwrap();
        for s in [1e-3, 0.5, 1.0, 7.0, 1e5] {
            assert!((p.eval(s).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        let b = MultiplierSpec::dyadic_bump(0);
        for s in [0.5, 0.99, 1.0, 2.0, 2.5] {
            assert_eq!(b.eval(s).unwrap(), ZERO);
        }
        for s in [1.25, 1.4, 1.6, 1.75] {
            assert_eq!(b.eval(s).unwrap(), ONE);
        }
        let v = b.eval(1.1).unwrap().re;
        assert!(v > 0.0 && v < 1.0);
        assert_eq!(MultiplierSpec::dyadic_bump(3).eval(8.0 * 1.5).unwrap(), ONE);
        let j = MultiplierSpec::jump(1.5).unwrap();
        assert_eq!(j.eval(1.0).unwrap(), ONE);
        assert_eq!(j.eval(2.0).unwrap(), ZERO);
    }

    #[test]
    fn bad_parameters() {
        assert!(MultiplierSpec::heat(0.0).is_err());
        assert!(MultiplierSpec::riesz_ratio(-1.0).is_err());
        assert!(MultiplierSpec::from_name("nope", None).is_err());
        assert!(MultiplierSpec::heat(1.0).unwrap().eval(0.0).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let h = 1e-5;
        for m in
            [MultiplierSpec::heat(0.7).unwrap(), MultiplierSpec::imaginary_power(2.0).unwrap(), MultiplierSpec::riesz_ratio(1.5).unwrap()]
        {
            for s in [0.3, 1.0, 4.0] {
                let fd = (m.eval(s + h).unwrap() - m.eval(s - h).unwrap()) / (2.0 * h);
                let exact = m.derivative(1, s).unwrap();
                assert!((fd - exact).norm() < 1e-8, "{}: {fd} vs {exact}", m.label());
            }
        }
        let p = MultiplierSpec::imaginary_power(1.0).unwrap();
        let s = 2.0;
        let fd = (p.derivative(1, s + h).unwrap() - p.derivative(1, s - h).unwrap()) / (2.0 * h);
        assert!((fd - p.derivative(2, s).unwrap()).norm() < 1e-8);
    }
}
