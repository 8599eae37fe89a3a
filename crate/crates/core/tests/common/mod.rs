//! Double-precision reference oracle, shared by the integration test
//! targets. Built on downward Miller recurrences with ratio normalization,
//! so it is algorithmically independent of the ball evaluation path.

#![allow(dead_code)]

const RENORM_CAP: f64 = 1e250;

fn start_order(x: f64, max_m: usize) -> usize {
    let s = max_m + 20 + (1.8 * x).ceil() as usize;
    s + (s & 1)
}

/// `J_0..=J_max` by downward recurrence, normalized with
/// `J_0 + 2(J_2 + J_4 + ...) = 1`.
pub fn bessel_j_row(x: f64, max_m: usize) -> Vec<f64> {
    assert!(x > 0.0 && x <= 50.0);
    let start = start_order(x, max_m);
    let mut out = vec![0.0; max_m + 1];
    let mut norm = 0.0;
    let mut above = 0.0_f64;
    let mut here = 1e-30_f64;
    for k in (0..=start).rev() {
        if k <= max_m {
            out[k] = here;
        }
        if k % 2 == 0 {
            norm += if k == 0 { here } else { 2.0 * here };
        }
        if k > 0 {
            let below = (2.0 * k as f64 / x) * here - above;
            above = here;
            here = below;
            if here.abs() > RENORM_CAP {
                above /= RENORM_CAP;
                here /= RENORM_CAP;
                norm /= RENORM_CAP;
                for v in &mut out {
                    *v /= RENORM_CAP;
                }
            }
        }
    }
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// `I_0..=I_max` by downward recurrence, normalized with
/// `e^x = I_0 + 2(I_1 + I_2 + ...)`.
pub fn bessel_i_row(x: f64, max_m: usize) -> Vec<f64> {
    assert!(x > 0.0 && x <= 50.0);
    let start = start_order(x, max_m);
    let mut out = vec![0.0; max_m + 1];
    let mut norm = 0.0;
    let mut above = 0.0_f64;
    let mut here = 1e-30_f64;
    for k in (0..=start).rev() {
        if k <= max_m {
            out[k] = here;
        }
        norm += if k == 0 { here } else { 2.0 * here };
        if k > 0 {
            let below = (2.0 * k as f64 / x) * here + above;
            above = here;
            here = below;
            if here.abs() > RENORM_CAP {
                above /= RENORM_CAP;
                here /= RENORM_CAP;
                norm /= RENORM_CAP;
                for v in &mut out {
                    *v /= RENORM_CAP;
                }
            }
        }
    }
    let scale = x.exp() / norm;
    for v in &mut out {
        *v *= scale;
    }
    out
}

/// Cross product `I_{m+1} J_m + I_m J_{m+1}`.
pub fn cross_w(x: f64, m: usize) -> f64 {
    let i = bessel_i_row(x, m + 1);
    let j = bessel_j_row(x, m + 1);
    i[m + 1] * j[m] + i[m] * j[m + 1]
}

/// Bounded ratio `W_m / I_m`.
pub fn ratio_g(x: f64, m: usize) -> f64 {
    cross_w(x, m) / bessel_i_row(x, m)[m]
}

/// Number of sign changes of `W_m` on `(0, x_max]`, scanned at step 1/200.
pub fn count_zeros(m: usize, x_max: f64) -> usize {
    let steps = (x_max * 200.0).round() as usize;
    let mut count = 0;
    let mut prev = 0.0_f64;
    for k in 1..=steps {
        let w = cross_w(k as f64 / 200.0, m);
        if prev != 0.0 && w != 0.0 && (prev < 0.0) != (w < 0.0) {
            count += 1;
        }
        if w != 0.0 {
            prev = w;
        }
    }
    count
}

/// First positive zero of `W_m`, bisected to double-precision resolution.
pub fn first_zero(m: usize) -> f64 {
    let mut lo = 0.01_f64;
    let mut hi = lo;
    let mut w_lo = cross_w(lo, m);
    loop {
        hi += 0.01;
        let w = cross_w(hi, m);
        if (w_lo < 0.0) != (w < 0.0) {
            break;
        }
        lo = hi;
        w_lo = w;
        assert!(hi < 50.0, "no sign change found");
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (cross_w(mid, m) < 0.0) == (w_lo < 0.0) {
            lo = mid;
            w_lo = cross_w(lo, m);
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
