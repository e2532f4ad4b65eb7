//! Globally adaptive Gauss–Kronrod (G15/K31) quadrature on finite and
//! semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 16] = [
    0.998_002_298_693_397_060_285_172_840_152_271,
    0.987_992_518_020_485_428_489_565_718_586_613,
    0.967_739_075_679_139_134_257_347_978_784_337,
    0.937_273_392_400_705_904_307_758_947_710_209,
    0.897_264_532_344_081_900_882_509_656_454_496,
    0.848_206_583_410_427_216_200_648_320_774_217,
    0.790_418_501_442_465_932_967_649_294_817_947,
    0.724_417_731_360_170_047_416_186_054_613_938,
    0.650_996_741_297_416_970_533_735_895_313_275,
    0.570_972_172_608_538_847_537_226_737_253_911,
    0.485_081_863_640_239_680_693_655_740_232_351,
    0.394_151_347_077_563_369_897_207_370_981_045,
    0.299_180_007_153_168_812_166_780_024_266_389,
    0.201_194_093_997_434_522_300_628_303_394_596,
    0.101_142_066_918_717_499_027_074_231_447_392,
    0.0,
];

const WGK: [f64; 16] = [
    0.005_377_479_872_923_348_987_792_051_430_128,
    0.015_007_947_329_316_122_538_374_763_075_807,
    0.025_460_847_326_715_320_186_874_001_019_654,
    0.035_346_360_791_375_846_222_037_948_478_359,
    0.044_589_751_324_764_876_608_227_299_373_279,
    0.053_481_524_690_928_087_265_343_147_239_431,
    0.062_009_567_800_670_640_285_139_230_960_803,
    0.069_854_121_318_728_258_709_520_077_099_147,
    0.076_849_680_757_720_378_894_432_777_482_659,
    0.083_080_502_823_133_021_038_289_247_286_103,
    0.088_564_443_056_211_770_647_275_443_693_775,
    0.093_126_598_170_825_321_225_486_872_747_346,
    0.096_642_726_983_623_678_505_179_907_627_589,
    0.099_173_598_721_791_959_332_393_173_484_604,
    0.100_769_845_523_875_595_044_946_662_617_569,
    0.101_330_007_014_791_549_017_374_792_767_492,
];

/// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[13] and the centre.
const WG: [f64; 8] = [
    0.030_753_241_996_117_268_354_628_393_577_204,
    0.070_366_047_488_108_124_709_267_416_450_667,
    0.107_159_220_467_171_935_011_869_546_685_869,
    0.139_570_677_926_154_314_447_804_794_511_028,
    0.166_269_205_816_993_933_553_200_860_481_209,
    0.186_161_000_015_562_211_026_800_561_866_423,
    0.198_431_485_327_111_576_456_118_326_443_839,
    0.202_578_241_925_561_272_880_620_199_967_519,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-10, max_intervals: 4000 }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOptions { rel_tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod31<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 31];
    fv[15] = f(centre);
    for j in 0..15 {
        let dx = half * XGK[j];
        fv[j] = f(centre - dx);
        fv[30 - j] = f(centre + dx);
    }
    let mut res_k = WGK[15] * fv[15];
    let mut res_g = WG[7] * fv[15];
    let mut res_abs = res_k.abs();
    for j in 0..15 {
        let (f1, f2) = (fv[j], fv[30 - j]);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[15] * (fv[15] - mean).abs();
    for j in 0..15 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[30 - j] - mean).abs());
    }
    let half_abs = half.abs();
    res_asc *= half_abs;
    res_abs *= half_abs;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if error < floor {
        error = floor;
    }
    Ok(Segment { a, b, value: res_k * half, error })
}

/// ∫_a^b f(x) dx with global bisection of the worst segment.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, intervals: 0, evaluations: 0 });
    }
    let first = kronrod31(&mut f, a, b)?;
    let mut evaluations = 31;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut done_value = 0.0;
    let mut done_err = 0.0;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "interval limit {} reached on [{a}, {b}] (error {total_err:e}, target {target:e})",
                opts.max_intervals
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // cannot split further; freeze this segment
            done_value += worst.value;
            done_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = kronrod31(&mut f, worst.a, mid)?;
        let right = kronrod31(&mut f, mid, worst.b)?;
        evaluations += 62;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-add from segments to limit drift of the running sums
    let value = heap.iter().map(|s| s.value).sum::<f64>() + done_value;
    let abs_error = heap.iter().map(|s| s.error).sum::<f64>() + done_err;
    let target = opts.abs_tol.max(opts.rel_tol * value.abs());
    if abs_error > target * 4.0 {
        return Err(Error::Quadrature(format!(
            "roundoff limit on [{a}, {b}]: error {abs_error:e} above target {target:e}"
        )));
    }
    Ok(QuadResult { value, abs_error, intervals: heap.len(), evaluations })
}

/// ∫_a^∞ f(x) dx through x = a + t/(1-t).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: &QuadOptions) -> Result<QuadResult> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            if !x.is_finite() {
                return 0.0;
            }
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        opts,
    )
}
