//! Globally adaptive Gauss-Kronrod (7/15) quadrature in one and two
//! dimensions. Used as the independent check on the closed-form modal
//! integrals, never on the production path.

// QUADPACK node and weight tables are kept at their published precision.
#![allow(clippy::excessive_precision)]

use std::cell::Cell;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], ...).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    /// Cap on the number of subintervals.
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-12,
            relative: 1e-12,
            max_intervals: 500,
        }
    }
}

impl Tolerance {
    pub fn absolute(absolute: f64) -> Self {
        Self {
            absolute,
            relative: 0.0,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.absolute.max(self.relative * value.abs())
    }
}

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
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Integral of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod15(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    while error > tol.target(value) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::QuadratureFailure {
                tolerance: tol.target(value),
                estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval collapsed to floating-point resolution
            return Err(Error::QuadratureFailure {
                tolerance: tol.target(value),
                estimate: error,
            });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift from the running updates
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Iterated integral of `f(y, z)` over `[y0, y1] x [z0, z1]`. Each inner
/// integral is solved to a tolerance scaled down by the outer interval
/// length so the combined error stays within `tol`.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (y0, y1): (f64, f64),
    (z0, z1): (f64, f64),
    tol: Tolerance,
) -> Result<f64> {
    let inner_tol = Tolerance {
        absolute: tol.absolute / (10.0 * (y1 - y0).abs().max(1.0)),
        relative: tol.relative / 10.0,
        max_intervals: tol.max_intervals,
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = integrate(
        |y| match integrate(|z| f(y, z), z0, z1, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        y0,
        y1,
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    outer
}
