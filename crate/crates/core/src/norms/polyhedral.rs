//! Gauge of the convex hull of a vertex set, as the linear program
//! `min 1'l  s.t.  V l = x, l >= 0`, solved by a dense two-phase simplex
//! with Bland's rule.

const PIVOT_EPS: f64 = 1e-12;

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Columns `>= n_real` are artificial.
    n_real: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.rows[0].len()
    }

    fn rhs(&self) -> usize {
        self.width() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex on the last (objective) row; `false` if unbounded.
    fn optimise(&mut self, allowed: usize, max_pivots: usize) -> bool {
        let m = self.basis.len();
        let rhs = self.rhs();
        for _ in 0..max_pivots {
            let Some(c) = (0..allowed).find(|&j| self.rows[m][j] < -PIVOT_EPS) else {
                return true;
            };
            let mut best: Option<(f64, usize)> = None;
            for i in 0..m {
                let a = self.rows[i][c];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][rhs] / a;
                    let better = match best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < r || (ratio == r && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                Some((_, r)) => self.pivot(r, c),
                None => return false,
            }
        }
        true
    }
}

/// `min sum(l)` subject to `sum_j l_j v_j = x`, `l >= 0`; `None` when
/// infeasible (x outside the cone spanned by the vertices).
pub(crate) fn hull_gauge(vertices: &[Vec<f64>], x: &[f64]) -> Option<f64> {
    let m = x.len();
    let n = vertices.len();
    if x.iter().all(|c| *c == 0.0) {
        return Some(0.0);
    }
    let scale = x.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let width = n + m + 1;
    let mut rows = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        let sign = if x[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, v) in vertices.iter().enumerate() {
            rows[i][j] = sign * v[i];
        }
        rows[i][n + i] = 1.0;
        rows[i][width - 1] = sign * x[i] / scale;
    }
    // phase 1 objective: sum of artificials, expressed in non-basic columns
    for j in 0..width {
        if (n..n + m).contains(&j) {
            continue;
        }
        rows[m][j] = -(0..m).map(|i| rows[i][j]).sum::<f64>();
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n_real: n,
    };
    let max_pivots = 50 * (n + m);
    t.optimise(n + m, max_pivots);
    if -t.rows[m][width - 1] > 1e-9 {
        return None;
    }
    for r in 0..m {
        if t.basis[r] >= t.n_real {
            if let Some(c) = (0..n).find(|&j| t.rows[r][j].abs() > PIVOT_EPS) {
                t.pivot(r, c);
            }
        }
    }
    // phase 2 objective: unit costs on real columns
    for j in 0..width {
        let cj = if j < n { 1.0 } else { 0.0 };
        let cb: f64 = (0..m)
            .map(|i| if t.basis[i] < n { t.rows[i][j] } else { 0.0 })
            .sum();
        t.rows[m][j] = if j == width - 1 { -cb } else { cj - cb };
    }
    if !t.optimise(n, max_pivots) {
        return None;
    }
    Some(-t.rows[m][width - 1] * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<f64>> {
        vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
        ]
    }

    #[test]
    fn square_hull_is_max_norm() {
        let v = square();
        assert_eq!(hull_gauge(&v, &[0.5, -1.0]), Some(1.0));
        assert!((hull_gauge(&v, &[3.0, 2.0]).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(hull_gauge(&v, &[0.0, 0.0]), Some(0.0));
    }

    #[test]
    fn cone_exterior_is_infeasible() {
        let v = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(hull_gauge(&v, &[-1.0, 0.5]), None);
        assert!((hull_gauge(&v, &[2.0, 3.0]).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn redundant_vertices_are_harmless() {
        let mut v = square();
        v.push(vec![0.5, 0.0]);
        v.push(vec![1.0, 1.0]);
        assert!((hull_gauge(&v, &[0.2, 0.9]).unwrap() - 0.9).abs() < 1e-14);
    }
}
