//! Adaptive Gauss–Kronrod (7/15) quadrature for vector-valued integrands on a
//! finite interval. Nodes and weights are the standard QUADPACK `qk15` set.
#![allow(clippy::excessive_precision)]

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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    /// Sum over subintervals of `max_k |K15_k - G7_k|`.
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

fn gk15<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64) -> Segment<N> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let fc = f(center);
    for k in 0..N {
        kron[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for k in 0..N {
            let s = f1[k] + f2[k];
            kron[k] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut error = 0.0f64;
    for k in 0..N {
        kron[k] *= half;
        gauss[k] *= half;
        error = error.max((kron[k] - gauss[k]).abs());
    }
    Segment { a, b, value: kron, error }
}

/// Integrates `f` over `[a, b]`, bisecting the worst subinterval until the
/// summed error estimate is below `max(abs_tol, rel_tol * max_k |value_k|)`
/// or `max_intervals` is reached.
pub fn integrate<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult<N> {
    let mut segs = vec![gk15(&f, a, b)];
    loop {
        let mut value = [0.0; N];
        let mut error = 0.0;
        for s in &segs {
            for k in 0..N {
                value[k] += s.value[k];
            }
            error += s.error;
        }
        let size = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = abs_tol.max(rel_tol * size);
        if error <= target || segs.len() >= max_intervals {
            return QuadResult { value, error, intervals: segs.len(), converged: error <= target };
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval exhausted at machine precision; keep its estimate.
            return QuadResult { value, error, intervals: segs.len() + 1, converged: false };
        }
        segs.push(gk15(&f, s.a, mid));
        segs.push(gk15(&f, mid, s.b));
    }
}
