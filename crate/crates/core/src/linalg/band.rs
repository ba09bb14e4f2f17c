use super::{tridiagonal_lowest_eigenvalues, BandMatrix};
use crate::error::{Error, Result};

/// Orthogonal reduction of a symmetric band matrix to tridiagonal form.
///
/// Entries below the first subdiagonal are annihilated column by column with
/// Givens rotations; each rotation spills one element past the band, which is
/// chased off the bottom of the matrix. Cost is `O(n^2 b)` and the
/// transformation is not accumulated. Returns `(diagonal, subdiagonal)`.
pub fn reduce_to_tridiagonal(a: &BandMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.dim();
    let bw = a.bandwidth();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut w = BandMatrix::zeros(n, (bw + 1).min(n - 1));
    for i in 0..n {
        for j in i.saturating_sub(bw)..=i {
            w.set(i, j, a.get(i, j));
        }
    }

    if bw >= 2 {
        for k in 0..n.saturating_sub(2) {
            let top = (k + bw).min(n - 1);
            for r in (k + 2..=top).rev() {
                let target = w.get(r, k);
                if target == 0.0 {
                    continue;
                }
                let (c, s) = givens(w.get(r - 1, k), target);
                rotate(&mut w, r - 1, c, s);
                w.set(r, k, 0.0);
                // chase the element spilled at (p + bw, p - 1)
                let mut p = r;
                while p + bw < n {
                    let row = p + bw;
                    let bulge = w.get(row, p - 1);
                    if bulge == 0.0 {
                        break;
                    }
                    let (c, s) = givens(w.get(row - 1, p - 1), bulge);
                    rotate(&mut w, row - 1, c, s);
                    w.set(row, p - 1, 0.0);
                    p = row;
                }
            }
        }
    }

    let d = (0..n).map(|i| w.get(i, i)).collect();
    let e = (0..n - 1).map(|i| w.get(i + 1, i)).collect();
    (d, e)
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    let r = a.hypot(b);
    if r == 0.0 {
        (1.0, 0.0)
    } else {
        (a / r, b / r)
    }
}

/// `A <- G A G^T` with `G` the rotation `[[c, s], [-s, c]]` in the plane
/// `(i, i + 1)`.
fn rotate(w: &mut BandMatrix, i: usize, c: f64, s: f64) {
    let n = w.dim();
    let wb = w.bandwidth();
    let j = i + 1;
    let lo = i.saturating_sub(wb);
    let hi = (j + wb).min(n - 1);
    for t in lo..=hi {
        if t == i || t == j {
            continue;
        }
        let (ai, aj) = (w.get(i, t), w.get(j, t));
        if ai == 0.0 && aj == 0.0 {
            continue;
        }
        w.set(i, t, c * ai + s * aj);
        w.set(j, t, -s * ai + c * aj);
    }
    let (aii, aij, ajj) = (w.get(i, i), w.get(i, j), w.get(j, j));
    w.set(i, i, c * c * aii + 2.0 * c * s * aij + s * s * ajj);
    w.set(j, j, s * s * aii - 2.0 * c * s * aij + c * c * ajj);
    w.set(i, j, c * s * (ajj - aii) + (c * c - s * s) * aij);
}

/// LU factorization with partial pivoting of `A - shift I` for a symmetric
/// band matrix `A`, stored LAPACK-style (`kl` sub- and `kl + ku` super-diagonals).
pub struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn factor(a: &BandMatrix, shift: f64) -> Self {
        let n = a.dim();
        let kl = a.bandwidth();
        let ku = kl;
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            width,
            ab: vec![0.0; width * n],
            pivots: vec![0; n],
        };
        for j in 0..n {
            for i in j.saturating_sub(ku)..=(j + kl).min(n - 1) {
                let v = a.get(i, j) - if i == j { shift } else { 0.0 };
                *lu.at_mut(i, j) = v;
            }
        }
        let tiny = f64::EPSILON * a.norm_inf().max(f64::MIN_POSITIVE);
        let reach = kl + ku;
        for j in 0..n {
            let last = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = lu.at(j, j).abs();
            for i in j + 1..=last {
                let v = lu.at(i, j).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.pivots[j] = p;
            let cmax = (j + reach).min(n - 1);
            if p != j {
                for c in j..=cmax {
                    let (x, y) = (lu.at(j, c), lu.at(p, c));
                    *lu.at_mut(j, c) = y;
                    *lu.at_mut(p, c) = x;
                }
            }
            if lu.at(j, j).abs() < tiny {
                // exactly singular shift: perturb, inverse iteration still converges
                *lu.at_mut(j, j) = tiny;
            }
            let piv = lu.at(j, j);
            for i in j + 1..=last {
                let l = lu.at(i, j) / piv;
                *lu.at_mut(i, j) = l;
                if l == 0.0 {
                    continue;
                }
                for c in j + 1..=cmax {
                    let u = lu.at(j, c);
                    *lu.at_mut(i, c) -= l * u;
                }
            }
        }
        lu
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // row offset within the column: kl + ku + i - j, with ku = kl
        let off = 2 * self.kl + i - j;
        debug_assert!(off < self.width);
        j * self.width + off
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        if i + 2 * self.kl < j || i > j + self.kl {
            0.0
        } else {
            self.ab[self.idx(i, j)]
        }
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.ab[k]
    }

    /// Solves `(A - shift I) x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            for i in j + 1..=(j + self.kl).min(n - 1) {
                b[i] -= self.at(i, j) * bj;
            }
        }
        let reach = 3 * self.kl;
        for j in (0..n).rev() {
            let mut acc = b[j];
            for c in j + 1..=(j + reach).min(n - 1) {
                acc -= self.at(j, c) * b[c];
            }
            b[j] = acc / self.at(j, j);
        }
    }
}

/// Lowest `count` eigenpairs of a symmetric band matrix, eigenvalues ascending
/// and eigenvectors Euclidean-normalized.
///
/// Eigenvalues come from bisection on the orthogonally reduced tridiagonal
/// matrix; eigenvectors from inverse iteration on the original band matrix,
/// followed by two passes of modified Gram-Schmidt in ascending order and a
/// Rayleigh-quotient update of each eigenvalue.
pub fn band_lowest_eigenpairs(a: &BandMatrix, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.dim();
    if count > n {
        return Err(Error::InvalidArgument(format!(
            "requested {count} eigenpairs of a {n}x{n} matrix"
        )));
    }
    let (d, e) = reduce_to_tridiagonal(a);
    let values = tridiagonal_lowest_eigenvalues(&d, &e, count);
    let norm = a.norm_inf();
    let tol = 64.0 * f64::EPSILON * norm;

    let vectors: Vec<Result<Vec<f64>>> = crate::par::map_range(count, |j| {
        let lu = BandLu::factor(a, values[j]);
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.754_877_666 + j as f64 * 0.618_034).sin())
            .collect();
        normalize(&mut v);
        let mut av = vec![0.0; n];
        for _ in 0..8 {
            lu.solve(&mut v);
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NoConvergence(format!(
                    "inverse iteration diverged for mode {}",
                    j + 1
                )));
            }
            normalize(&mut v);
            a.matvec(&v, &mut av);
            let res = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - values[j] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            if res <= tol {
                break;
            }
        }
        Ok(v)
    });
    let mut vectors = vectors.into_iter().collect::<Result<Vec<_>>>()?;

    for _ in 0..2 {
        for j in 0..count {
            let (done, rest) = vectors.split_at_mut(j);
            let v = &mut rest[0];
            for u in done.iter() {
                let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= dot * ui;
                }
            }
            normalize(v);
        }
    }

    let mut refined = Vec::with_capacity(count);
    let mut av = vec![0.0; n];
    for v in &vectors {
        a.matvec(v, &mut av);
        refined.push(av.iter().zip(v).map(|(x, y)| x * y).sum::<f64>());
    }
    Ok((refined, vectors))
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_eigen;

    fn test_matrix(n: usize, bw: usize) -> BandMatrix {
        let mut m = BandMatrix::zeros(n, bw);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let v = ((i * 7 + j * 13) % 11) as f64 / 11.0 - 0.5 + if i == j { 3.0 + i as f64 * 0.1 } else { 0.0 };
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn reduction_preserves_spectrum() {
        for bw in [1, 2, 3, 4] {
            let a = test_matrix(40, bw);
            let (d, e) = reduce_to_tridiagonal(&a);
            let ev = tridiagonal_lowest_eigenvalues(&d, &e, 40);
            let (dense_vals, _) = dense_eigen(&a.to_dense()).unwrap();
            for (x, y) in ev.iter().zip(&dense_vals) {
                assert!((x - y).abs() < 1e-12, "bw={bw}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn band_lu_solves() {
        let a = test_matrix(30, 3);
        let lu = BandLu::factor(&a, 0.7);
        let x: Vec<f64> = (0..30).map(|i| (i as f64).cos()).collect();
        let mut b = vec![0.0; 30];
        a.matvec(&x, &mut b);
        for (bi, xi) in b.iter_mut().zip(&x) {
            *bi -= 0.7 * xi;
        }
        lu.solve(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-11);
        }
    }

    #[test]
    fn eigenpairs_match_dense() {
        let a = test_matrix(60, 4);
        let (vals, vecs) = band_lowest_eigenpairs(&a, 12).unwrap();
        let (dvals, _) = dense_eigen(&a.to_dense()).unwrap();
        let mut av = vec![0.0; 60];
        for j in 0..12 {
            assert!((vals[j] - dvals[j]).abs() < 1e-11);
            a.matvec(&vecs[j], &mut av);
            let res: f64 = av
                .iter()
                .zip(&vecs[j])
                .map(|(x, y)| (x - vals[j] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10, "residual {res}");
            for i in 0..j {
                let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(x, y)| x * y).sum();
                assert!(dot.abs() < 1e-13);
            }
        }
    }
}
