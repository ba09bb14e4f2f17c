/// Number of eigenvalues strictly below `sigma` of the symmetric tridiagonal
/// matrix with diagonal `d` and off-diagonal `e` (`e[i] = T[i+1][i]`).
pub fn sturm_count(d: &[f64], e: &[f64], sigma: f64) -> usize {
    let scale = d
        .iter()
        .map(|v| v.abs())
        .chain(e.iter().map(|v| v.abs()))
        .fold(f64::MIN_POSITIVE, f64::max);
    let pivmin = f64::EPSILON * scale * f64::EPSILON;
    let mut count = 0;
    let mut q = d[0] - sigma;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = d[i] - sigma - e[i - 1] * e[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues in ascending order, by bisection on the
/// Sturm count. Each eigenvalue is resolved to a few ulps of the spectral
/// radius.
pub fn tridiagonal_lowest_eigenvalues(d: &[f64], e: &[f64], count: usize) -> Vec<f64> {
    let n = d.len();
    assert!(count <= n);
    assert_eq!(e.len() + 1, n.max(1));
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let width = (hi - lo).max(hi.abs()).max(1.0);
    lo -= 1e-12 * width;
    hi += 1e-12 * width;

    crate::par::map_range(count, |k| {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(d, e, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * (a.abs().max(b.abs())) {
                break;
            }
        }
        0.5 * (a + b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        // tridiag(-1, 2, -1) has eigenvalues 2 - 2 cos(j pi / (n + 1)).
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let ev = tridiagonal_lowest_eigenvalues(&d, &e, 10);
        for (j, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13, "{j}: {v} vs {exact}");
        }
    }

    #[test]
    fn count_brackets() {
        let d = [1.0, 2.0, 3.0];
        let e = [0.0, 0.0];
        assert_eq!(sturm_count(&d, &e, 0.5), 0);
        assert_eq!(sturm_count(&d, &e, 2.5), 2);
        assert_eq!(sturm_count(&d, &e, 10.0), 3);
    }
}
