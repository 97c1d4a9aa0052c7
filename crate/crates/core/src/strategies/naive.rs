use crate::numerics::linalg::binomial;

/// Largest grid the naive baseline accepts.
pub const MAX_GRID: u128 = 100_000;

/// Number of points of the lattice `{k / m}` on `Delta(n)`.
pub fn grid_size(n: usize, m: usize) -> u128 {
    binomial((m + n - 1) as u64, (n - 1) as u64)
}

/// Lattice points `k / m` of `Delta(n)` in simplex-chart coordinates (the
/// last `n - 1` entries), in lexicographic order.
pub fn simplex_grid(n: usize, m: usize) -> Vec<Vec<f64>> {
    let d = n - 1;
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    fn rec(k: usize, left: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if k == cur.len() {
            out.push(cur.iter().map(|&c| c as f64 / m as f64).collect());
            return;
        }
        for c in 0..=left {
            cur[k] = c;
            rec(k + 1, left - c, m, cur, out);
        }
    }
    if d == 0 {
        return vec![vec![0.0]];
    }
    rec(0, m, m, &mut cur, &mut out);
    out
}

/// Lattice resolution for mesh `delta`.
pub fn grid_resolution(delta: f64) -> usize {
    (1.0 / delta).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_grid() {
        let m = grid_resolution(0.3);
        assert_eq!(m, 4);
        let g = simplex_grid(2, m);
        assert_eq!(g.len(), 5);
        assert_eq!(grid_size(2, m), 5);
        // Every point of [0, 1] lies within delta of the grid.
        for k in 0..=1000 {
            let t = k as f64 / 1000.0;
            assert!(g.iter().any(|p| (p[0] - t).abs() <= 0.3));
        }
    }

    #[test]
    fn triangle_grid() {
        let g = simplex_grid(3, 2);
        assert_eq!(g.len(), 6);
        assert!(g.iter().all(|p| p[0] + p[1] <= 1.0 + 1e-15));
    }
}
