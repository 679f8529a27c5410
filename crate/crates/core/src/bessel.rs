//! Bessel functions of the first kind, integer order.
//!
//! Ascending power series for |x| ≤ 5, Miller backward recurrence above.

/// Largest argument evaluated by the power series.
pub const SERIES_MAX_ARG: f64 = 5.0;

const SERIES_REL_TOL: f64 = 1e-16;

/// J_n(x) for any integer order, using J_{−n} = (−1)^n J_n.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs();
    let value = if x.abs() <= SERIES_MAX_ARG {
        series(n, x)
    } else {
        miller_sequence(n, x)[n as usize]
    };
    if order < 0 && n % 2 == 1 {
        -value
    } else {
        value
    }
}

/// J_0(x), …, J_{n_max}(x).
pub fn bessel_j_sequence(n_max: u32, x: f64) -> Vec<f64> {
    if x.abs() <= SERIES_MAX_ARG {
        (0..=n_max).map(|n| series(n, x)).collect()
    } else {
        let mut seq = miller_sequence(n_max, x);
        seq.truncate(n_max as usize + 1);
        seq
    }
}

/// Σ_k (−1)^k (x/2)^{n+2k} / (k! (n+k)!)
fn series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for j in 1..=n {
        term *= half / f64::from(j);
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    let mut peak = term.abs();
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + f64::from(n)));
        sum += term;
        peak = peak.max(term.abs());
        if term.abs() <= SERIES_REL_TOL * peak {
            break;
        }
    }
    sum
}

/// Backward recurrence J_{k−1} = (2k/x) J_k − J_{k+1}, normalized with
/// J_0 + 2 Σ J_{2k} = 1. Returns at least `n_max + 1` entries.
fn miller_sequence(n_max: u32, x: f64) -> Vec<f64> {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let top = f64::from(n_max).max(ax);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / ax * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(start + 1);
    for (k, v) in vals.iter_mut().enumerate() {
        *v /= norm;
        if sign < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        for n in 1..10 {
            assert_eq!(bessel_j(n, 0.0), 0.0);
            assert_eq!(bessel_j(-n, 0.0), 0.0);
        }
    }

    #[test]
    fn reference_values() {
        // 40-digit reference values
        assert_abs_diff_eq!(bessel_j(0, 0.1), 0.997_501_562_066_04, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_j(1, 0.1), 0.049_937_526_036_242, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_j(0, 2.0), 0.223_890_779_141_235_67, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_j(1, 2.0), 0.576_724_807_756_873_4, epsilon = 1e-15);
        assert_abs_diff_eq!(bessel_j(5, 2.0), 0.007_039_629_755_871_685, epsilon = 1e-16);
        assert_abs_diff_eq!(bessel_j(0, 10.0), -0.245_935_764_451_348_3, epsilon = 1e-13);
        assert_abs_diff_eq!(bessel_j(3, 10.0), 0.058_379_379_305_186_81, epsilon = 1e-13);
        assert_abs_diff_eq!(
            bessel_j(12, 10.0),
            0.063_370_254_970_156_02,
            epsilon = 1e-13
        );
    }

    #[test]
    fn negative_orders_alternate() {
        for n in 0..8 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j(-n, 1.3), s * bessel_j(n, 1.3));
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_the_switch() {
        let series_vals: Vec<f64> = (0..20).map(|n| series(n, 4.9)).collect();
        let miller = miller_sequence(19, 4.9);
        for (a, b) in series_vals.iter().zip(&miller) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn normalization_holds_for_large_argument() {
        let x = 12.0;
        let seq = bessel_j_sequence(60, x);
        let total = seq[0] * seq[0] + 2.0 * seq[1..].iter().map(|v| v * v).sum::<f64>();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tiny_arguments_underflow_gracefully() {
        assert_abs_diff_eq!(bessel_j(1, 1e-19), 5e-20, epsilon = 1e-34);
        assert_eq!(bessel_j(40, 1e-19), 0.0);
    }
}
