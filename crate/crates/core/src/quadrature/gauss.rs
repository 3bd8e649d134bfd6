use crate::scalar::Real;

/// Gauss-Legendre nodes and weights on `[0, 1]`, `n >= 1` points, nodes ascending.
///
/// Roots of the Legendre polynomial are found by Newton iteration from the
/// Chebyshev-like initial guesses; the computation runs in `f64` and is
/// converted at the end.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "at least one Gauss point");
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        // z is the i-th largest root on [-1, 1]
        x[n - 1 - i] = 0.5 * (1.0 + z);
        x[i] = 0.5 * (1.0 - z);
        w[n - 1 - i] = 0.5 * weight;
        w[i] = 0.5 * weight;
    }
    (
        x.into_iter().map(T::lit).collect(),
        w.into_iter().map(T::lit).collect(),
    )
}

/// Value and derivative of the Legendre polynomial of degree `n` at `z`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
