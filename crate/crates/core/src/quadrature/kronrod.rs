use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-11, rel_tol: 1e-11, max_panels: 4000 }
    }
}

/// Outcome of a vector-valued integration.
#[derive(Debug, Clone)]
pub struct VecQuadResult {
    pub values: Vec<f64>,
    /// Sum over panels of the largest componentwise Kronrod-Gauss gap.
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Outcome of a scalar integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    est: Vec<f64>,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        // largest error first; ties broken by position for determinism
        self.err.total_cmp(&o.err).then_with(|| o.a.total_cmp(&self.a))
    }
}

fn kronrod_panel<F: Fn(f64, &mut [f64])>(f: &F, dim: usize, a: f64, b: f64, buf: &mut [f64]) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    f(c, buf);
    for i in 0..dim {
        kron[i] = WGK[7] * buf[i];
        gauss[i] = WG[3] * buf[i];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        for x in [c - dx, c + dx] {
            // on panels a few ulps wide the outer nodes can round onto an
            // endpoint, where the integrand may be singular
            let (lo, hi) = (a.next_up(), b.next_down());
            f(if lo <= hi { x.clamp(lo, hi) } else { c }, buf);
            for i in 0..dim {
                kron[i] += WGK[j] * buf[i];
                if j % 2 == 1 {
                    gauss[i] += WG[j / 2] * buf[i];
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for i in 0..dim {
        kron[i] *= h;
        gauss[i] *= h;
        err = err.max((kron[i] - gauss[i]).abs());
    }
    Panel { a, b, est: kron, err }
}

/// Adaptive Gauss-Kronrod integration of a vector-valued integrand over the
/// interval spanned by `breakpoints`, which also seed the initial panels.
///
/// The integrand writes its `dim` components into the slice it is given. The
/// panel with the largest error is bisected until the summed error falls
/// below `max(abs_tol, rel_tol · max_i |I_i|)` or the panel cap is hit.
pub fn integrate_vec<F>(f: F, dim: usize, breakpoints: &[f64], opts: &QuadOptions) -> VecQuadResult
where
    F: Fn(f64, &mut [f64]),
{
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut buf = vec![0.0; dim];
    let mut heap: BinaryHeap<Panel> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod_panel(&f, dim, w[0], w[1], &mut buf))
        .collect();

    let totals = |heap: &BinaryHeap<Panel>| -> (Vec<f64>, f64) {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let mut sum = vec![0.0; dim];
        let mut err = 0.0;
        for p in panels {
            for (s, v) in sum.iter_mut().zip(&p.est) {
                *s += v;
            }
            err += p.err;
        }
        (sum, err)
    };

    let (mut running, mut running_err) = totals(&heap);
    loop {
        let scale = running.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        let worst = if running_err <= target || heap.len() >= opts.max_panels {
            None
        } else {
            match heap.pop() {
                Some(w) if w.err > 0.0 => Some(w),
                Some(w) => {
                    heap.push(w);
                    None
                }
                None => None,
            }
        };
        let Some(worst) = worst else {
            let (values, error) = totals(&heap);
            let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let converged = error <= opts.abs_tol.max(opts.rel_tol * scale);
            return VecQuadResult { values, error, panels: heap.len(), converged };
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point; freeze the panel
            running_err -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        let left = kronrod_panel(&f, dim, worst.a, mid, &mut buf);
        let right = kronrod_panel(&f, dim, mid, worst.b, &mut buf);
        for (i, r) in running.iter_mut().enumerate().take(dim) {
            *r += left.est[i] + right.est[i] - worst.est[i];
        }
        running_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
}

/// Scalar version of [`integrate_vec`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], opts: &QuadOptions) -> QuadResult {
    let r = integrate_vec(|t, out: &mut [f64]| out[0] = f(t), 1, breakpoints, opts);
    QuadResult { value: r.values[0], error: r.error, panels: r.panels, converged: r.converged }
}

/// Breakpoints `a, a + (b-a)/2^levels, ..., a + (b-a)/2, b`, concentrating
/// panels geometrically toward the left endpoint. Integrands singular at a
/// point should be written in terms of the distance to it and refined here,
/// since doubles resolve distances to 0 far better than distances to 1.
pub fn geometric_breakpoints_left(a: f64, b: f64, levels: u32) -> Vec<f64> {
    let mut pts = vec![a];
    let w = b - a;
    for j in (1..=levels).rev() {
        let x = a + w * 0.5f64.powi(j as i32);
        if x > a && x < b {
            pts.push(x);
        }
    }
    pts.push(b);
    pts
}

/// Breakpoints `a, b - (b-a)/2, b - (b-a)/4, ..., b - (b-a)/2^levels, b`,
/// concentrating panels geometrically toward the right endpoint.
pub fn geometric_breakpoints(a: f64, b: f64, levels: u32) -> Vec<f64> {
    let mut pts = vec![a];
    let w = b - a;
    for j in 1..=levels {
        let x = b - w * 0.5f64.powi(j as i32);
        if x > *pts.last().unwrap() && x < b {
            pts.push(x);
        }
    }
    pts.push(b);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5), &[0.0, 1.0], &QuadOptions::default());
        assert!((r.value - 1.0 / 6.0).abs() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫ x^{-1/2} = 2
        let bp = geometric_breakpoints_left(0.0, 1.0, 60);
        let r = integrate(|x| x.powf(-0.5), &bp, &QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_panels: 4000 });
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn log_endpoint() {
        // ∫ log(1/(1-t)) dt = 1
        let bp = geometric_breakpoints(0.0, 1.0, 50);
        let r = integrate(|t| -(-t).ln_1p(), &bp, &QuadOptions::default());
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn vector_moments() {
        let bp = geometric_breakpoints(0.0, 1.0, 10);
        let r = integrate_vec(
            |t, out: &mut [f64]| {
                let mut p = 1.0;
                for o in out.iter_mut() {
                    *o = p;
                    p *= t;
                }
            },
            50,
            &bp,
            &QuadOptions::default(),
        );
        for (k, v) in r.values.iter().enumerate() {
            assert!((v - 1.0 / (k + 1) as f64).abs() < 1e-12);
        }
    }
}
