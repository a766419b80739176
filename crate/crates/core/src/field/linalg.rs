//! Gaussian elimination over a prime field.

use super::poly::pow_mod;

/// A fixed `rows x cols` matrix over F_p, reduced once so that many
/// right-hand sides can be solved against it.
#[derive(Debug, Clone)]
pub struct AffineSolver {
    p: u32,
    cols: usize,
    /// Row operations applied during reduction: `transform * A = rref`.
    transform: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    kernel: Vec<Vec<u32>>,
}

impl AffineSolver {
    /// `matrix[i][j]` is row `i`, column `j`.
    pub fn new(matrix: &[Vec<u32>], p: u32) -> Self {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        let p64 = p as u64;
        let mut a: Vec<Vec<u32>> = matrix.to_vec();
        let mut t: Vec<Vec<u32>> = (0..rows)
            .map(|i| (0..rows).map(|j| u32::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(r, piv);
            t.swap(r, piv);
            let inv = pow_mod(a[r][c], p - 2, p) as u64;
            for v in a[r].iter_mut() {
                *v = (*v as u64 * inv % p64) as u32;
            }
            for v in t[r].iter_mut() {
                *v = (*v as u64 * inv % p64) as u32;
            }
            for i in 0..rows {
                if i == r || a[i][c] == 0 {
                    continue;
                }
                let f = a[i][c] as u64;
                for j in 0..cols {
                    a[i][j] = ((a[i][j] as u64 + (p64 - f) * a[r][j] as u64) % p64) as u32;
                }
                for j in 0..rows {
                    t[i][j] = ((t[i][j] as u64 + (p64 - f) * t[r][j] as u64) % p64) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut kernel = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            kernel.push(v);
        }
        AffineSolver {
            p,
            cols,
            transform: t,
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> &[Vec<u32>] {
        &self.kernel
    }

    /// One solution of `A x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let p64 = self.p as u64;
        let reduced: Vec<u32> = self
            .transform
            .iter()
            .map(|row| {
                (row.iter()
                    .zip(b)
                    .map(|(&x, &y)| x as u64 * y as u64 % p64)
                    .sum::<u64>()
                    % p64) as u32
            })
            .collect();
        if reduced[self.rank()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in self.pivots.iter().enumerate() {
            x[pc] = reduced[row];
        }
        Some(x)
    }
}

/// Inverse of a square matrix, if it is nonsingular.
pub fn invert(matrix: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let solver = AffineSolver::new(matrix, p);
    (solver.rank() == matrix.len()).then(|| solver.transform.clone())
}
