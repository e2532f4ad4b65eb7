//! Gamma-family functions: log-gamma (real and complex), reciprocal gamma,
//! Pochhammer symbols and the digamma function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use super::Neumaier;

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Cody-Waite split of ln 2; the high part has trailing zero bits so that
/// `e * LN2_HI` is exact for any double exponent.
const LN2_HI: f64 = 6.931_471_803_691_238_164_9e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;

/// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Arguments at or above this use the Stirling series directly.
const STIRLING_MIN: f64 = 12.0;

/// Taylor coefficients of 1/Γ(1+z) about z = 0.
pub(crate) const RGAMMA1P_TAYLOR: [f64; 29] = [
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -2.013_485_478_078_823_866e-5,
    -1.250_493_482_142_670_657e-6,
    1.133_027_231_981_695_882e-6,
    -2.056_338_416_977_607_104e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_511e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == r.floor() {
        return 0.0;
    }
    // r in (0, 2)
    let (s, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let s = if s > 0.5 { 1.0 - s } else { s };
    sign * (PI * s).sin()
}

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING[..8].iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// ln Γ(x) for x ≥ STIRLING_MIN, carrying ln x in two pieces so that
/// exp() of the result keeps relative accuracy near the top of the range.
fn ln_gamma_stirling(x: f64) -> f64 {
    let bits = x.to_bits();
    let mut e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mut m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    if m > std::f64::consts::SQRT_2 {
        m /= 2.0;
        e += 1;
    }
    let ef = e as f64;
    let ln_hi = ef * LN2_HI;
    let ln_lo = m.ln() + ef * LN2_LO;
    let y = x - 0.5;
    let p1 = y * ln_hi;
    let e1 = y.mul_add(ln_hi, -p1);
    let mut acc = Neumaier::new();
    acc.add(p1);
    acc.add(-x);
    acc.add(y * ln_lo);
    acc.add(e1);
    acc.add(HALF_LN_2PI);
    acc.add(stirling_tail(x));
    acc.value()
}

/// ln|Γ(x)| for real x.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain { func: "ln_gamma", msg: "NaN argument".into() });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "ln_gamma", at: x });
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = sin_pi(x).abs();
        return Ok(PI.ln() - s.ln() - ln_gamma_abs(1.0 - x)?);
    }
    if x >= STIRLING_MIN {
        return Ok(ln_gamma_stirling(x));
    }
    Ok(gamma_small(x).ln())
}

/// Γ(x) for 0 < x < STIRLING_MIN from the series of 1/Γ(1+μ), |μ| ≤ 1/2.
fn gamma_small(x: f64) -> f64 {
    let mut y = x;
    let mut scale = 1.0;
    while y >= 1.5 {
        y -= 1.0;
        scale *= y;
    }
    while y < 0.5 {
        scale /= y;
        y += 1.0;
    }
    scale / rgamma1p_small(y - 1.0)
}

/// Sign of Γ(x) for real x that is not a pole.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || is_nonpositive_integer(x) {
        1.0
    } else if (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x < STIRLING_MIN {
        return Ok(gamma_small(x));
    }
    let lg = ln_gamma_abs(x)?;
    let v = gamma_sign(x) * lg.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("gamma({x}) exceeds the double range")));
    }
    Ok(v)
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 && x < STIRLING_MIN {
        return 1.0 / gamma_small(x);
    }
    match ln_gamma_abs(x) {
        Ok(lg) => gamma_sign(x) * (-lg).exp(),
        Err(_) => f64::NAN,
    }
}

fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole { func: "ln_gamma", at: z.re });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain { func: "ln_gamma", msg: format!("non-finite argument {z}") });
    }
    const MAX_SHIFT: f64 = 1.0e6;
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    if w.re < STIRLING_MIN {
        let k = (STIRLING_MIN - w.re).ceil();
        if k > MAX_SHIFT {
            return Err(Error::Domain {
                func: "ln_gamma",
                msg: format!("real part {} too negative", z.re),
            });
        }
        for _ in 0..k as usize {
            shift += w.ln();
            w += 1.0;
        }
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

/// Log-gamma on the principal branch.
///
/// Real arguments return ln|Γ(x)| in the real part and π in the imaginary
/// part when Γ(x) < 0. Complex arguments follow the branch that is real on
/// the positive axis and continuous off the negative real axis.
pub fn ln_gamma<T: Into<Complex64>>(x: T) -> Result<Complex64> {
    let z: Complex64 = x.into();
    if z.im == 0.0 {
        let re = ln_gamma_abs(z.re)?;
        let im = if gamma_sign(z.re) < 0.0 { PI } else { 0.0 };
        return Ok(Complex64::new(re, im));
    }
    ln_gamma_complex(z)
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), by explicit product.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// Complex rising factorial.
pub fn pochhammer_complex(a: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// Digamma ψ(x) for real x.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { func: "digamma", at: x });
    }
    if x < 0.5 {
        // ψ(1-x) - ψ(x) = π cot(πx)
        let s = sin_pi(x);
        let c = sin_pi(x + 0.5);
        return Ok(digamma(1.0 - x)? - PI * c / s);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    // Σ B_{2k}/(2k y^{2k})
    let b = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut s = 0.0;
    for c in b.iter().rev() {
        s = s * inv2 + c;
    }
    Ok(acc + y.ln() - 0.5 / y - s * inv2)
}

/// 1/Γ(1+μ) from its Taylor series; accurate for |μ| ≤ 1.
pub(crate) fn rgamma1p_small(mu: f64) -> f64 {
    RGAMMA1P_TAYLOR.iter().rev().fold(0.0, |acc, c| acc * mu + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_gamma_trivial_points() {
        assert_eq!(ln_gamma(1.0).unwrap().re, 0.0);
        assert!((ln_gamma(2.0).unwrap().re).abs() < 1e-16);
        assert!(rel(ln_gamma(5.0).unwrap().re, 24f64.ln()) < 1e-15);
    }

    #[test]
    fn ln_gamma_half_matches_sqrt_pi() {
        let v = ln_gamma(0.5).unwrap();
        assert!((v.re - PI.sqrt().ln()).abs() < 1e-15);
        assert!((v.re - 0.572_364_942_9).abs() < 1e-10);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(ln_gamma(x), Err(Error::Pole { .. })));
            assert!(matches!(digamma(x), Err(Error::Pole { .. })));
        }
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn negative_real_sign() {
        // Γ(-0.5) = -2√π
        let v = ln_gamma(-0.5).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        assert_eq!(v.im, PI);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0) < 1e-14);
    }

    #[test]
    fn factorials_to_170() {
        let mut fact = 1.0f64;
        for n in 1..170u32 {
            fact *= n as f64;
            let g = gamma(n as f64 + 1.0).unwrap();
            // the running product itself carries ~n/2 ulp of rounding
            assert!(rel(g, fact) < 1e-13, "n={n}: {g} vs {fact}");
        }
    }

    #[test]
    fn recurrence_identity() {
        for &x in &[0.1, 0.37, 1.9, 7.5, 11.99, 12.0, 55.25] {
            let lhs = ln_gamma_abs(x + 1.0).unwrap();
            let rhs = ln_gamma_abs(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() < 2e-14 * lhs.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn pochhammer_products() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.0, 2), 6.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
        assert_eq!(pochhammer(-1.5, 2), -1.5 * -0.5);
        let c = pochhammer_complex(Complex64::new(1.0, 2.0), 2);
        assert_eq!(c, Complex64::new(1.0, 2.0) * Complex64::new(2.0, 2.0));
    }

    #[test]
    fn digamma_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(1.0).unwrap() + euler).abs() < 1e-15);
        assert!((digamma(0.5).unwrap() + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        // ψ(x+1) = ψ(x) + 1/x
        for &x in &[-2.5, -0.3, 0.2, 3.3, 20.0] {
            let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
            assert!(d.abs() < 1e-13, "x={x}: {d}");
        }
    }

    #[test]
    fn reciprocal_gamma_series() {
        for &mu in &[-0.5, -0.1, 0.0, 0.25, 0.5] {
            let direct = rgamma(1.0 + mu);
            assert!((rgamma1p_small(mu) - direct).abs() < 1e-15, "mu={mu}: {} {}", rgamma1p_small(mu), direct);
        }
    }

    #[test]
    fn complex_conjugate_symmetry() {
        let z = Complex64::new(0.3, 1.7);
        let a = ln_gamma(z).unwrap();
        let b = ln_gamma(z.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn complex_frozen_values() {
        // multiprecision reference values on the continuous branch
        let cases = [
            (0.5, 1.0, -0.652_790_644_204_372_92, -0.955_007_724_342_569_11),
            (-3.2, 0.7, -2.340_607_893_963_262_6, -10.713_635_915_626_588),
            (20.0, -5.0, 38.705_835_948_079_529, -14.906_326_673_515_808),
            (1e-3, -2.0, -2.568_511_437_974_074_3, 1.439_329_442_136_139_3),
        ];
        for (re, im, lr, li) in cases {
            let v = ln_gamma(Complex64::new(re, im)).unwrap();
            assert!((v.re - lr).abs() < 1e-13 * lr.abs().max(1.0), "{re}+{im}i: {v}");
            assert!((v.im - li).abs() < 1e-13 * li.abs().max(1.0), "{re}+{im}i: {v}");
        }
    }

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(1.25) + (PI / 4.0).sin()).abs() < 1e-16);
    }
}
