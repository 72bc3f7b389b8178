use hgops::norms::{hardy_norm, k_p_functional, space_norm, SpaceParams};
use hgops::operators::{
    abs_moments, apply_hg, apply_hg_sublinear, derivative_identity_check, hilbert_classic, moments,
    moments_by_quadrature, psi, MomentMethod,
};
use hgops::sampling::RandomPolySampler;
use hgops::series::{dyadic_block_shifted, materialize, Atom, DyadicBlockIndex, FunctionSpec, PowerSeries};
use num_complex::Complex64;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `∫_0^1 t^k (1 - a t)^{-2} dt = Σ_m (m+1) a^m / (k+m+1)`, summed until the
/// tail is negligible.
fn rational_moment_series(a: f64, k: usize) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut m = 0usize;
    loop {
        let term = (m + 1) as f64 * pow / (k + m + 1) as f64;
        sum += term;
        if term < 1e-18 * sum && m > 10 {
            return sum;
        }
        pow *= a;
        m += 1;
    }
}

fn poly_moment_direct(f: &PowerSeries, k: usize) -> Complex64 {
    f.coeffs().iter().enumerate().map(|(m, &c)| c / (k + m + 1) as f64).sum()
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn rational_moments_match_oracles(a in 0.0f64..=0.99, scale in -3.0f64..3.0, k_max in 0usize..200) {
        let spec = FunctionSpec::rational(scale, a);
        let closed = moments(&spec, k_max).unwrap();
        prop_assert_eq!(closed.method, MomentMethod::ClosedForm);
        let quad = moments_by_quadrature(&spec, k_max).unwrap();
        prop_assert!(max_abs_diff(&closed.values, &quad.values) <= 1e-9);
        for k in (0..=k_max).step_by(7) {
            let oracle = scale * rational_moment_series(a, k);
            prop_assert!((closed.values[k].re - oracle).abs() <= 1e-9, "k = {}: {} vs {}", k, closed.values[k].re, oracle);
        }
    }

    #[test]
    fn polynomial_moments_match_oracles(seed in 0u64..1000, degree in 0usize..=64, k_max in 0usize..100) {
        let f = RandomPolySampler::new(seed, 0.0).sample(0, degree);
        let spec = FunctionSpec::from(f.clone());
        let closed = moments(&spec, k_max).unwrap();
        let quad = moments_by_quadrature(&spec, k_max).unwrap();
        prop_assert!(max_abs_diff(&closed.values, &quad.values) <= 1e-9);
        for k in 0..=k_max {
            prop_assert!((closed.values[k] - poly_moment_direct(&f, k)).norm() <= 1e-12);
        }
    }

    #[test]
    fn cauchy_moments_match_quadrature(thetas in prop::collection::vec(0.05f64..6.2, 1..4), k_max in 0usize..60) {
        let atoms: Vec<Atom> = thetas.iter().enumerate()
            .map(|(j, &t)| Atom::at_angle(Complex64::new(1.0 / (j + 1) as f64, 0.3), t))
            .collect();
        let spec = FunctionSpec::CauchyTransform { atoms };
        let closed = moments(&spec, k_max).unwrap();
        let quad = moments_by_quadrature(&spec, k_max).unwrap();
        prop_assert!(max_abs_diff(&closed.values, &quad.values) <= 1e-9);
    }

    #[test]
    fn hg_is_linear_in_f(seed in 0u64..1000, degree in 0usize..64, k_out in 1usize..100, alpha in -4.0f64..4.0, beta in -4.0f64..4.0) {
        let sampler = RandomPolySampler::new(seed, 0.0);
        let g = sampler.sample(0, k_out + 1);
        let f = sampler.sample(1, degree);
        let h = sampler.sample(2, degree);
        let (a, b) = (Complex64::new(alpha, 0.0), Complex64::new(beta, 0.5));
        let lhs = apply_hg(&g, &f.linear_combination(a, &h, b).into(), k_out).unwrap();
        let rf = apply_hg(&g, &f.clone().into(), k_out).unwrap();
        let rh = apply_hg(&g, &h.clone().into(), k_out).unwrap();
        let rhs = rf.linear_combination(a, &rh, b);
        let scale = 1.0 + rf.max_abs() * alpha.abs() + rh.max_abs() * b.norm();
        prop_assert!(max_abs_diff(lhs.coeffs(), rhs.coeffs()) <= 1e-12 * scale);
    }

    #[test]
    fn log_kernel_reproduces_the_hilbert_matrix(seed in 0u64..1000, degree in 0usize..=128, k_out in 0usize..128) {
        let f = RandomPolySampler::new(seed, 0.0).sample(0, degree);
        let g = materialize(&FunctionSpec::LogKernel, k_out + 1).unwrap();
        let a = apply_hg(&g, &f.clone().into(), k_out).unwrap();
        let b = hilbert_classic(&f, k_out);
        prop_assert!(max_abs_diff(a.coeffs(), b.coeffs()) <= 1e-12);
    }

    #[test]
    fn abs_moments_are_positive_and_decreasing(seed in 0u64..1000, degree in 1usize..64, damping in 0.0f64..1.5) {
        let f = RandomPolySampler::new(seed, damping).sample(0, degree);
        let mu = abs_moments(&f, 256).unwrap();
        prop_assert!(mu.values.iter().all(|v| v.re > 0.0 && v.im == 0.0));
        for w in mu.values.windows(2) {
            prop_assert!(w[1].re <= w[0].re + 1e-10);
        }
        prop_assert!(mu.values[256].re < mu.values[0].re);
    }

    #[test]
    fn derivative_identity_holds(seed in 0u64..1000, g_degree in 2usize..80, pole in 0.0f64..0.95, which in 0usize..3) {
        let sampler = RandomPolySampler::new(seed, 0.5);
        let g = sampler.sample(0, g_degree);
        let k = g_degree - 2;
        let f = match which {
            0 => FunctionSpec::from(sampler.sample(1, 20)),
            1 => FunctionSpec::rational(1.5, pole),
            _ => FunctionSpec::LogKernel,
        };
        let check = derivative_identity_check(&g, &f, k).unwrap();
        prop_assert!(check.passes(), "discrepancy {:e} ({:?})", check.discrepancy, check.method);
    }
}

#[test]
fn psi_matches_rational_moments_and_stays_in_a_band() {
    let s_grid = [0.5625, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 3.9375];
    for &(p, alpha) in &[(1.5, 0.0), (2.0, 0.0), (2.0, 1.0), (3.0, 0.5)] {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut d_max = Vec::new();
        for j in 4..=12u32 {
            let n = 1u64 << j;
            let nf = n as f64;
            let expo = 2.0 - (2.0 + alpha) / p;
            let mut d_here: f64 = 0.0;
            for &s in &s_grid {
                let e = psi(n, p, alpha, s).unwrap();
                assert!(e.value > 0.0 && (0.0..1.0).contains(&e.a_n));
                // s N is an integer here, so ψ is a rational-kernel moment
                let k = (s * nf) as usize;
                let mu = moments(&FunctionSpec::rational(1.0, e.a_n), k).unwrap().values[k].re;
                let oracle = mu * nf.powf(-(3.0 - (2.0 + alpha) / p));
                assert!((e.value - oracle).abs() <= 1e-9 * oracle, "N = {n}, s = {s}: {} vs {oracle}", e.value);
                lo = lo.min(e.normalized());
                hi = hi.max(e.normalized());

                let h = 1e-4;
                let fd = (psi(n, p, alpha, s + h).unwrap().value - psi(n, p, alpha, s - h).unwrap().value) / (2.0 * h);
                assert!((fd - e.d1).abs() <= 1e-5 * e.d1.abs(), "N = {n}, s = {s}: {fd} vs {}", e.d1);
                d_here = d_here.max(fd.abs() * nf.powf(expo));
            }
            d_max.push(d_here);
        }
        eprintln!("p = {p}, α = {alpha}: normalized ψ in [{lo:.4}, {hi:.4}], normalized |ψ'| maxima {d_max:?}");
        assert!(lo > 0.0 && hi / lo < 100.0);
        let (dlo, dhi) = d_max.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(dhi / dlo < 2.0, "p = {p}, α = {alpha}: {d_max:?}");
    }
}

#[test]
fn block_moment_bound_constant_is_stable() {
    let p_list = [1.5, 2.0, 3.0];
    let sampler = RandomPolySampler::new(71, 0.0);
    let fs: Vec<PowerSeries> = vec![
        sampler.sample(100, 30),
        materialize(&FunctionSpec::rational(1.0, 0.9), 2000).unwrap(),
        PowerSeries::from_real(&[1.0, -3.0, 2.5]).unwrap(),
    ];
    for &p in &p_list {
        let mut per_n = vec![0.0f64; 6];
        for (fi, f) in fs.iter().enumerate() {
            let spec = FunctionSpec::from(f.clone());
            let mu = moments(&spec, 1025).unwrap();
            let abs_mu = abs_moments(f, 129).unwrap();
            for gi in 0..4 {
                let g = sampler.sample(fi as u64 * 10 + gi, 1023);
                let h = PowerSeries::new((0..=1023).map(|k| g.coeff(k) * mu.values[k + 1]).collect()).unwrap();
                for (slot, n) in (4..=9u32).enumerate() {
                    let b = DyadicBlockIndex(n);
                    let lhs = hardy_norm(&dyadic_block_shifted(&h, b), p).unwrap();
                    let rhs = abs_mu.values[(1 << (n - 2)) + 1].re * hardy_norm(&dyadic_block_shifted(&g, b), p).unwrap();
                    per_n[slot] = per_n[slot].max(lhs / rhs);
                }
            }
        }
        eprintln!("p = {p}: block constants for n = 4..9: {per_n:?}");
        let early = per_n[..3].iter().cloned().fold(0.0, f64::max);
        let late = per_n[3..].iter().cloned().fold(0.0, f64::max);
        assert!(late <= 1.2 * early, "p = {p}: {per_n:?}");
    }
}

#[test]
fn monotone_multiplier_block_bounds() {
    // with λ nonincreasing: λ_{2^n}^p ‖Δ_n g‖^p ≲ ‖Δ_n λg‖^p ≲ λ_{2^{n-1}}^p ‖Δ_n g‖^p
    let fs = [
        FunctionSpec::from(PowerSeries::from_real(&[1.0]).unwrap()),
        FunctionSpec::rational(1.0, 0.5),
        FunctionSpec::rational(1.0, 0.99),
        FunctionSpec::from(PowerSeries::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap()),
    ];
    let sampler = RandomPolySampler::new(73, 0.0);
    for &p in &[1.5, 2.0, 3.0] {
        let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
        for (fi, f) in fs.iter().enumerate() {
            let lambda: Vec<f64> = moments(f, 1023).unwrap().values.iter().map(|v| v.re).collect();
            assert!(lambda.windows(2).all(|w| w[1] <= w[0]) && lambda[1023] >= 0.0);
            for gi in 0..4 {
                let g = sampler.sample(fi as u64 * 10 + gi, 1023);
                let lg = PowerSeries::new((0..=1023).map(|k| g.coeff(k) * lambda[k]).collect()).unwrap();
                for n in 1..=9u32 {
                    let b = DyadicBlockIndex(n);
                    let num = hardy_norm(&dyadic_block_shifted(&lg, b), p).unwrap().powf(p);
                    let den = hardy_norm(&dyadic_block_shifted(&g, b), p).unwrap().powf(p);
                    lower = lower.min(num / (lambda[1 << n].powf(p) * den));
                    upper = upper.max(num / (lambda[1 << (n - 1)].powf(p) * den));
                }
            }
        }
        eprintln!("p = {p}: lower constant {lower:.4}, upper constant {upper:.4}");
        assert!(lower > 0.2 && upper < 5.0, "p = {p}");
    }
}

fn mixed_sample(seed: u64, i: u64, degree: usize) -> PowerSeries {
    let damping = [0.0, 0.5, 1.0][(i % 3) as usize];
    RandomPolySampler::new(seed, damping).sample(i, degree)
}

/// `|F(0)|^p + Σ_{j ≥ 1} (j+1)^w m_{j+shift}^p` over the available moments.
fn coefficient_sum(m: &[Complex64], p: f64, w: f64, shift: usize, upto: usize) -> f64 {
    let mut s = m[0].re.powf(p);
    for j in 1..=upto {
        s += ((j + 1) as f64).powf(w) * m[j + shift].re.powf(p);
    }
    s
}

#[test]
fn sublinear_norms_match_coefficient_sums() {
    let degree = 128;
    for &(kind, p, alpha) in &[
        ("hardy", 1.5, 0.0),
        ("hardy", 3.0, 0.0),
        ("bergman", 2.0, -0.5),
        ("bergman", 3.0, 0.5),
        ("dirichlet", 2.0, 1.0),
        ("dirichlet", 1.5, -0.25),
        ("dirichlet", 3.0, 2.0),
    ] {
        let (lo, hi) = (0..24)
            .map(|i| {
                let f = mixed_sample(83, i, 64);
                let m = abs_moments(&f, degree + 1).unwrap().values;
                let big_f = apply_hg_sublinear(&f, degree).unwrap();
                let (norm_p, sum) = match kind {
                    "hardy" => {
                        let n = hardy_norm(&big_f, p).unwrap().powf(p);
                        (n, k_p_functional(&big_f, p).unwrap())
                    }
                    "bergman" => {
                        let n = space_norm(&big_f, &SpaceParams::bergman(p, alpha)).unwrap().powf(p);
                        (n, coefficient_sum(&m, p, p - 3.0 - alpha, 0, degree))
                    }
                    _ => {
                        let n = space_norm(&big_f, &SpaceParams::dirichlet(p, alpha)).unwrap().powf(p);
                        (n, coefficient_sum(&m, p, 2.0 * p - 3.0 - alpha, 1, degree))
                    }
                };
                norm_p / sum
            })
            .fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r), b.max(r)));
        eprintln!("{kind} p = {p}, α = {alpha}: norm^p / coefficient sum in [{lo:.4}, {hi:.4}]");
        assert!(lo > 0.0 && hi / lo < 10.0, "{kind} p = {p}, α = {alpha}");
    }
}
