//! Distribution of the studentized range `Q = (max − min) / s` of `k`
//! independent standard normal samples, with `s² ~ χ²_ν / ν`.
//!
//! The CDF is evaluated by nested Gauss–Legendre quadrature:
//!
//! ```text
//! P(Q ≤ q) = ∫₀^∞ f_ν(s) · W(q·s) ds
//! W(w)     = k ∫ φ(z) [Φ(z) − Φ(z − w)]^(k−1) dz
//! ```
//!
//! where `f_ν` is the density of `sqrt(χ²_ν / ν)`. Quantiles are found by
//! Illinois regula falsi and memoized per `(alpha, k, ν)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

const GL_ORDER: usize = 16;
const INNER_PANELS: usize = 8;
const OUTER_PANELS: usize = 16;
const Z_LIMIT: f64 = 8.0;
/// Beyond this many degrees of freedom the variance estimate is treated as exact.
const DF_EXACT: f64 = 50_000.0;
/// Quantiles above this are reported as infinite.
const Q_CAP: f64 = 1e4;

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let j = j as f64;
                    let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for (x, w) in nodes.iter().zip(weights) {
            total += w * f(mid + half * x);
        }
    }
    total * 0.5 * width
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Probability that the range of `k` standard normals is at most `w`.
fn range_cdf(w: f64, k: usize) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let power = (k - 1) as i32;
    let value = integrate(
        |z| normal_pdf(z) * (normal_cdf(z) - normal_cdf(z - w)).powi(power),
        -Z_LIMIT,
        Z_LIMIT,
        INNER_PANELS,
    );
    (k as f64 * value).clamp(0.0, 1.0)
}

/// `P(Q ≤ q)` for `k ≥ 2` groups and `df > 0` error degrees of freedom.
pub fn cdf(q: f64, k: usize, df: f64) -> f64 {
    assert!(k >= 2, "studentized range needs at least two groups");
    assert!(df > 0.0, "degrees of freedom must be positive");
    if q <= 0.0 {
        return 0.0;
    }
    if !q.is_finite() {
        return 1.0;
    }
    if df >= DF_EXACT {
        return range_cdf(q, k);
    }
    let half = 0.5 * df;
    let log_norm = half * df.ln() - ln_gamma(half) - (half - 1.0) * std::f64::consts::LN_2;
    let spread = 12.0 / (2.0 * df).sqrt();
    let lo = (1.0 - spread).max(0.0);
    let hi = 1.0 + spread.max(8.0 / df.sqrt());
    let value = integrate(
        |s| {
            if s <= 0.0 {
                return 0.0;
            }
            let density = (log_norm + (df - 1.0) * s.ln() - half * s * s).exp();
            density * range_cdf(q * s, k)
        },
        lo,
        hi,
        OUTER_PANELS,
    );
    value.clamp(0.0, 1.0)
}

/// Upper-tail probability `P(Q > q)`.
pub fn sf(q: f64, k: usize, df: f64) -> f64 {
    (1.0 - cdf(q, k, df)).max(0.0)
}

/// Root of an increasing `f` bracketed by `lo` (f < 0) and `hi` (f ≥ 0),
/// by regula falsi with the Illinois modification.
fn illinois<F: Fn(f64) -> f64>(f: F, lo: (f64, f64), hi: (f64, f64)) -> f64 {
    let ((mut a, mut fa), (mut b, mut fb)) = (lo, hi);
    let mut side = 0;
    for _ in 0..200 {
        if b - a < 1e-10 * b.max(1.0) {
            break;
        }
        let c = if fb - fa > 0.0 {
            (a * fb - b * fa) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        let c = if c > a && c < b { c } else { 0.5 * (a + b) };
        let fc = f(c);
        if fc.abs() < 1e-14 {
            return c;
        }
        if fc < 0.0 {
            (a, fa) = (c, fc);
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            (b, fb) = (c, fc);
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

type Memo = Mutex<HashMap<(u64, usize, u64), f64>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Critical value `q` with `P(Q > q) = alpha`. Returns infinity when the
/// quantile exceeds the numerically resolvable range.
pub fn quantile(alpha: f64, k: usize, df: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    let key = (alpha.to_bits(), k, df.to_bits());
    if let Some(&q) = memo().lock().expect("memo lock").get(&key) {
        return q;
    }
    let target = 1.0 - alpha;
    let excess = |q: f64| cdf(q, k, df) - target;
    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut f_lo, mut f_hi) = (-target, excess(hi));
    while f_hi < 0.0 && hi <= Q_CAP {
        (lo, f_lo) = (hi, f_hi);
        hi *= 2.0;
        f_hi = excess(hi);
    }
    let q = if f_hi < 0.0 {
        f64::INFINITY
    } else {
        illinois(excess, (lo, f_lo), (hi, f_hi))
    };
    memo().lock().expect("memo lock").insert(key, q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, StudentsT};

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let v = integrate(|x| x.powi(7) - 3.0 * x * x + 1.0, -1.0, 2.0, 1);
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0) + 3.0;
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn two_groups_reduce_to_student_t() {
        // Q for two groups is sqrt(2)·|T|
        for df in [2.0, 4.0, 10.0, 30.0] {
            let t = StudentsT::new(0.0, 1.0, df).unwrap();
            let expected = std::f64::consts::SQRT_2 * t.inverse_cdf(0.975);
            let q = quantile(0.05, 2, df);
            assert!((q - expected).abs() < 1e-5, "df {df}: {q} vs {expected}");
        }
    }

    #[test]
    fn infinite_df_two_groups() {
        // range of two normals is |N(0, 2)|
        let q = quantile(0.05, 2, 1e9);
        assert!((q - 1.959_963_985 * std::f64::consts::SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn cdf_is_monotone() {
        let mut last = 0.0;
        for i in 1..40 {
            let p = cdf(i as f64 * 0.25, 4, 12.0);
            assert!(p >= last);
            last = p;
        }
        assert!(last > 0.999);
    }

    #[test]
    fn tiny_alpha_gives_huge_quantile() {
        assert!(quantile(1e-9, 3, 12.0) > 10.0);
    }
}
