use crate::scalar::Real;

/// `log(e_coarse / e_fine) / log(h_coarse / h_fine)`; `None` unless both
/// errors and both sizes are positive and the sizes differ.
pub fn estimate_order<T: Real>(e_coarse: T, e_fine: T, h_coarse: T, h_fine: T) -> Option<T> {
    let zero = T::zero();
    if !(e_coarse > zero && e_fine > zero && h_coarse > zero && h_fine > zero) || h_coarse == h_fine {
        return None;
    }
    let order = (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln();
    order.is_finite().then_some(order)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Names of the five error columns.
pub const ERROR_NAMES: [&str; 5] = ["y_h1", "y_l2", "p_h1", "p_l2", "u_l2"];

/// One refinement level of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// `N` for square meshes, `1/h` for disk meshes.
    pub level: f64,
    /// Size used for the orders: `2/N`, or `1/nodes` for disk meshes, so disk orders are against the node count.
    pub h: f64,
    /// Relative errors in the order of [`ERROR_NAMES`].
    pub errors: [f64; 5],
    pub orders: [Option<f64>; 5],
    pub dofs: usize,
    pub nodes: usize,
    pub ssn_iterations: usize,
}

/// Relative errors per level with orders between consecutive levels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a level and fills in the orders against the previous one.
    pub fn push(&mut self, mut row: ReportRow) {
        row.orders = match self.rows.last() {
            Some(prev) => {
                let mut o = [None; 5];
                for (k, slot) in o.iter_mut().enumerate() {
                    *slot = estimate_order(prev.errors[k], row.errors[k], prev.h, row.h);
                }
                o
            }
            None => [None; 5],
        };
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Orders between the last two levels.
    pub fn last_orders(&self) -> [Option<f64>; 5] {
        self.rows.last().map_or([None; 5], |r| r.orders)
    }

    /// Least-squares log-log slope of error column `k` against `h`.
    pub fn slope(&self, k: usize) -> Option<f64> {
        let h: Vec<f64> = self.rows.iter().map(|r| r.h).collect();
        let e: Vec<f64> = self.rows.iter().map(|r| r.errors[k]).collect();
        loglog_slope(&h, &e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert!((estimate_order::<f64>(0.1, 0.05, 0.1, 0.05).unwrap() - 1.0).abs() < 1e-12);
        assert!((estimate_order::<f64>(0.1, 0.025, 0.1, 0.05).unwrap() - 2.0).abs() < 1e-12);
        let o = estimate_order::<f64>(0.1153, 0.0912, 2.0 / 39.0, 2.0 / 49.0).unwrap();
        assert!((o - 1.03).abs() < 0.005, "{o}");
        assert_eq!(estimate_order(0.0, 0.1, 0.1, 0.05), None);
        assert_eq!(estimate_order(-1.0, 0.1, 0.1, 0.05), None);
        assert_eq!(estimate_order(0.2f32, 0.1, 0.1, 0.05), Some(1.0));
    }

    #[test]
    fn slopes_and_rows() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((loglog_slope(&h, &e).unwrap() - 2.0).abs() < 1e-12);
        let mut rep = ConvergenceReport::new();
        for (k, (&hh, &ee)) in h.iter().zip(&e).enumerate() {
            rep.push(ReportRow {
                level: k as f64,
                h: hh,
                errors: [ee; 5],
                orders: [None; 5],
                dofs: 0,
                nodes: 0,
                ssn_iterations: 1,
            });
        }
        assert_eq!(rep.rows[0].orders, [None; 5]);
        assert!((rep.last_orders()[3].unwrap() - 2.0).abs() < 1e-12);
        assert!((rep.slope(0).unwrap() - 2.0).abs() < 1e-12);
    }
}
