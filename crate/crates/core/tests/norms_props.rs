use hgops::norms::{
    decomposition_norm, hardy_norm, integral_mean, integral_mean_sampled, k_p_functional, space_norm, SpaceParams,
};
use hgops::quadrature::{geometric_breakpoints_left, integrate, QuadOptions};
use hgops::sampling::{stream_rng, RandomPolySampler};
use hgops::series::{dyadic_block_shifted, DyadicBlockIndex, PowerSeries};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn ratio_range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values.into_iter().fold((f64::INFINITY, 0.0), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn integral_means_increase_with_radius(seed in 0u64..10_000, degree in 1usize..80, p in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0])) {
        let f = RandomPolySampler::new(seed, 0.5).sample(0, degree);
        let mut prev = 0.0;
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            let m = integral_mean(&f, r, p).unwrap();
            prop_assert!(m >= prev * (1.0 - 1e-12), "M_p drops at r = {}: {} < {}", r, m, prev);
            prev = m;
        }
    }

    #[test]
    fn parseval_at_the_boundary(seed in 0u64..10_000, degree in 0usize..300) {
        let f = RandomPolySampler::new(seed, 0.0).sample(0, degree);
        let direct: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let sampled = integral_mean_sampled(&f, 1.0, 2.0).unwrap();
        let exact = integral_mean(&f, 1.0, 2.0).unwrap();
        prop_assert!((sampled - direct).abs() <= 1e-12 * direct);
        prop_assert!((exact - direct).abs() <= 1e-12 * direct);
    }
}

/// Max and min of `decomposition_norm / ‖f‖_{A^p_β}` over a sample.
fn decomposition_ratios(p: f64, beta: f64, degree: usize, count: u64) -> (f64, f64) {
    let sampler = RandomPolySampler::new(101, 0.0);
    let space = SpaceParams::bergman(p, beta);
    ratio_range((0..count).map(|i| {
        let f = sampler.sample(i, degree);
        decomposition_norm(&f, p, beta).unwrap() / space_norm(&f, &space).unwrap()
    }))
}

fn check_decomposition_equivalence(sampled_count: u64) {
    for &p in &[1.5, 2.0, 3.0] {
        for &beta in &[0.0, 1.0] {
            // p = 2 is an exact coefficient sum; other exponents need full radial quadrature
            let count = if p == 2.0 { 200 } else { sampled_count };
            let low = decomposition_ratios(p, beta, 64, count);
            let high = decomposition_ratios(p, beta, 512, count);
            eprintln!("p = {p}, β = {beta}: ratio range {low:?} at degree 64, {high:?} at degree 512");
            assert!(high.1 < 1.2 * low.1, "p = {p}, β = {beta}");
            assert!(high.0 > 0.0);
        }
    }
}

#[test]
fn decomposition_norm_equivalence_is_degree_stable() {
    check_decomposition_equivalence(40);
}

/// Full-size sample for every exponent; takes a few minutes on one core.
#[test]
#[ignore]
fn decomposition_norm_equivalence_full_sample() {
    check_decomposition_equivalence(200);
}

fn mixed_sample(i: u64, degree: usize) -> PowerSeries {
    let damping = [0.0, 0.5, 1.0][(i % 3) as usize];
    RandomPolySampler::new(7, damping).sample(i, degree)
}

#[test]
fn hardy_littlewood_inequalities() {
    // p ≤ 2: K_p(f) ≤ C ‖f‖^p; p ≥ 2: ‖f‖^p ≤ C K_p(f)
    for &p in &[1.25, 1.5, 2.0, 3.0, 4.0] {
        let mut maxima = Vec::new();
        for &degree in &[64usize, 512] {
            let (_, hi) = ratio_range((0..150).map(|i| {
                let f = mixed_sample(i, degree);
                let k = k_p_functional(&f, p).unwrap();
                let h = hardy_norm(&f, p).unwrap().powf(p);
                if p <= 2.0 {
                    k / h
                } else {
                    h / k
                }
            }));
            maxima.push(hi);
        }
        eprintln!("p = {p}: constants {maxima:?} at degrees 64, 512");
        assert!(maxima[1] < 1.2 * maxima[0], "p = {p}: {maxima:?}");
    }
}

/// Positive nonincreasing coefficients: reversed partial sums of random
/// positive increments, optionally mixed with a power law.
fn decreasing_sample(i: u64, degree: usize) -> PowerSeries {
    let mut rng = stream_rng(29, i);
    let s: f64 = rng.gen_range(0.2..1.6);
    let mut acc = 0.0;
    let mut coeffs = vec![0.0; degree + 1];
    for k in (0..=degree).rev() {
        acc += rng.gen::<f64>() * ((k + 1) as f64).powf(-s - 1.0);
        coeffs[k] = acc + ((k + 1) as f64).powf(-s);
    }
    PowerSeries::from_real(&coeffs).unwrap()
}

#[test]
fn monotone_coefficients_give_equivalent_quantities() {
    for &p in &[1.5, 2.0, 3.0] {
        let dirichlet = SpaceParams::dirichlet(p, p - 1.0);
        let mut ranges = Vec::new();
        for &degree in &[64usize, 512] {
            let mut hd = Vec::new();
            let mut hk = Vec::new();
            for i in 0..60 {
                let f = decreasing_sample(i, degree);
                let h = hardy_norm(&f, p).unwrap().powf(p);
                let d = space_norm(&f, &dirichlet).unwrap().powf(p);
                let k = k_p_functional(&f, p).unwrap();
                hd.push(h / d);
                hk.push(h / k);
            }
            ranges.push((ratio_range(hd), ratio_range(hk)));
        }
        eprintln!("p = {p}: (H/D, H/K) ranges {ranges:?} at degrees 64, 512");
        for (lo, hi) in [ranges[0].0, ranges[0].1, ranges[1].0, ranges[1].1] {
            assert!(lo > 0.0 && hi / lo < 20.0, "p = {p}: {ranges:?}");
        }
    }
}

fn block_sample(i: u64, n: usize) -> PowerSeries {
    let mut coeffs = RandomPolySampler::new(41, 0.0).sample(i, 4 * n).into_coeffs();
    for c in coeffs.iter_mut().take(n.div_ceil(2)) {
        *c = Complex64::default();
    }
    PowerSeries::new(coeffs).unwrap()
}

#[test]
fn bergman_norm_of_a_block_scales_like_a_power_of_n() {
    for &(p, alpha) in &[(1.5, 0.0), (2.0, -0.5), (2.0, 1.0), (3.0, 0.5)] {
        let space = SpaceParams::bergman(p, alpha);
        let mut per_n = Vec::new();
        let mut n = 8;
        while n <= 1024 {
            let count = if n >= 512 { 3 } else { 8 };
            let range = ratio_range((0..count).map(|i| {
                let h = block_sample(i, n);
                space_norm(&h, &space).unwrap() * (n as f64).powf((1.0 + alpha) / p) / hardy_norm(&h, p).unwrap()
            }));
            per_n.push(range);
            n *= 2;
        }
        let (lo, hi) = ratio_range(per_n.iter().flat_map(|&(a, b)| [a, b]));
        eprintln!("p = {p}, α = {alpha}: normalized ratio in [{lo:.4}, {hi:.4}]");
        // the window [N/2, 4N] alone spans a factor 8^{(1+α)/p}
        let allowed = 2.0 * 8f64.powf((1.0 + alpha) / p);
        assert!(hi / lo < allowed, "p = {p}, α = {alpha}: {per_n:?}");
    }
}

#[test]
fn coefficient_multipliers_rescale_blocks() {
    for &p in &[1.5, 2.0, 3.0] {
        for &gamma in &[-1.0, -0.5, 0.5, 1.0, 2.0] {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for i in 0..10 {
                let f = RandomPolySampler::new(53, 0.0).sample(i, 1023);
                let big_f = PowerSeries::new(
                    f.coeffs().iter().enumerate().map(|(k, c)| c * ((k + 1) as f64).powf(gamma)).collect(),
                )
                .unwrap();
                for n in DyadicBlockIndex::covering(f.degree()).skip(2) {
                    let a = hardy_norm(&dyadic_block_shifted(&big_f, n), p).unwrap();
                    let b = hardy_norm(&dyadic_block_shifted(&f, n), p).unwrap();
                    let r = a / (b * 2f64.powf(n.0 as f64 * gamma));
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
            }
            eprintln!("p = {p}, γ = {gamma}: block ratio / 2^(nγ) in [{lo:.4}, {hi:.4}]");
            let spread = 2f64.powf(gamma.abs());
            assert!(lo > 1.0 / (3.0 * spread) && hi < 3.0 * spread, "p = {p}, γ = {gamma}");
        }
    }
}

/// Nonnegative step function with values `heights[i]` on
/// `[edges[i], edges[i+1])`, `edges` running from 0 to 1.
struct Step {
    edges: Vec<f64>,
    heights: Vec<f64>,
}

impl Step {
    fn random(seed: u64) -> Self {
        let mut rng = stream_rng(seed, 0);
        let m = rng.gen_range(1..8);
        let mut edges: Vec<f64> = (0..m - 1).map(|_| rng.gen::<f64>()).collect();
        edges.push(0.0);
        edges.push(1.0);
        edges.sort_by(f64::total_cmp);
        let heights = (0..m).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..5.0) }).collect();
        Self { edges, heights }
    }

    /// `∫_x^1 h`.
    fn tail(&self, x: f64) -> f64 {
        let mut s = 0.0;
        for (i, &h) in self.heights.iter().enumerate() {
            let (a, b) = (self.edges[i], self.edges[i + 1]);
            if b > x {
                s += h * (b - a.max(x));
            }
        }
        s
    }

    /// `∫_0^1 h^q x^e dx`.
    fn weighted_power(&self, q: f64, e: f64) -> f64 {
        self.heights
            .iter()
            .enumerate()
            .map(|(i, &h)| h.powf(q) * (self.edges[i + 1].powf(e + 1.0) - self.edges[i].powf(e + 1.0)) / (e + 1.0))
            .sum()
    }
}

#[test]
fn hardy_inequality_on_step_functions() {
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_panels: 20_000 };
    for seed in 0..60 {
        let h = Step::random(seed);
        let mut bp = geometric_breakpoints_left(0.0, 1.0, 50);
        bp.extend_from_slice(&h.edges);
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        for &q in &[1.0, 1.5, 2.0, 3.0] {
            for &k in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                let lhs = integrate(|x| h.tail(x).powf(q) * x.powf(k - 1.0), &bp, &opts);
                let rhs = (q / k).powf(q) * h.weighted_power(q, q + k - 1.0);
                assert!(lhs.converged);
                assert!(
                    lhs.value <= rhs * (1.0 + 1e-9) + 1e-12,
                    "seed {seed}, q = {q}, k = {k}: {} > {rhs}",
                    lhs.value
                );
            }
        }
    }
}
