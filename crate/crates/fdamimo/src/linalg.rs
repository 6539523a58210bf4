//! Dense complex-matrix numerics underpinning the decomposition chain:
//! Householder QR, truncated SVD (one-sided Jacobi), bilateral random
//! projections (BRP) with the power scheme, cardinality hard thresholding,
//! and the zero-padded 2-D DFT.
//!
//! All routines are pure functions of their inputs; randomized routines take
//! an explicit seeded source. Matrices are `ndarray::Array2<Complex64>`.

use ndarray::{s, Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use crate::{reject, CMat, Result};

/// Leading singular triplets of a matrix.
///
/// `u` and `v` have orthonormal columns; `lambda` is sorted descending and
/// non-negative. The rank-r reconstruction is `u * diag(lambda) * v^H`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: CMat,
    pub lambda: Vec<f64>,
    pub v: CMat,
}

impl SvdFactors {
    /// `U * diag(lambda) * V^H`.
    pub fn reconstruct(&self) -> CMat {
        let r = self.lambda.len();
        let mut scaled = self.u.clone();
        for j in 0..r {
            let s = Complex64::new(self.lambda[j], 0.0);
            scaled.column_mut(j).mapv_inplace(|z| z * s);
        }
        scaled.dot(&hermitian(&self.v))
    }
}

/// Result of a bilateral-random-projection rank approximation.
///
/// `svd_fallback` is set when the r-by-r inner matrix was numerically
/// singular (input rank below the requested r) and the result was produced
/// by a truncated SVD instead.
#[derive(Debug, Clone)]
pub struct BrpApprox {
    pub matrix: CMat,
    pub svd_fallback: bool,
}

/// Conjugate transpose.
pub fn hermitian(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Frobenius norm.
pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix of i.i.d. circular complex Gaussian entries with per-entry
/// variance `variance` (real and imaginary parts each N(0, variance/2)).
pub fn complex_gaussian(rows: usize, cols: usize, variance: f64, rng: &mut impl Rng) -> CMat {
    let s = (variance / 2.0).sqrt();
    Array2::from_shape_fn((rows, cols), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numerical_rank(a: &CMat, rel_tol: f64) -> usize {
    let r_max = a.nrows().min(a.ncols());
    if r_max == 0 || frobenius_norm(a) == 0.0 {
        return 0;
    }
    let f = svd_truncated(a, r_max).expect("r_max is always in range");
    let s1 = f.lambda[0];
    if s1 == 0.0 {
        return 0;
    }
    f.lambda.iter().filter(|&&s| s > rel_tol * s1).count()
}

// ── QR ──────────────────────────────────────────────────────────────────────

/// Thin Householder QR of a tall matrix (rows >= cols).
///
/// Returns `(Q, R)` with `Q` (rows x cols) having orthonormal columns, `R`
/// (cols x cols) upper-triangular with non-negative real diagonal, and
/// `A = Q R` to machine accuracy.
pub fn qr_decompose(a: &CMat) -> Result<(CMat, CMat)> {
    let (m, n) = a.dim();
    if m < n {
        return reject(format!("qr_decompose requires rows >= cols, got {m}x{n}"));
    }
    if m == 0 || n == 0 {
        return reject("qr_decompose requires a non-empty matrix");
    }
    let mut r = a.clone();
    let mut q = Array2::<Complex64>::eye(m);

    for k in 0..n {
        // Householder vector for column k.
        let mut norm_sq = 0.0;
        for i in k..m {
            norm_sq += r[[i, k]].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[[k, k]];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v = Array1::<Complex64>::zeros(m - k);
        for i in k..m {
            v[i - k] = r[[i, k]];
        }
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sq;

        // R <- H R on the trailing block.
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..m {
                dot += v[i - k].conj() * r[[i, j]];
            }
            dot *= tau;
            for i in k..m {
                let d = dot * v[i - k];
                r[[i, j]] -= d;
            }
        }
        // Q <- Q H (H is Hermitian).
        for row in 0..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..m {
                dot += q[[row, i]] * v[i - k];
            }
            dot *= tau;
            for i in k..m {
                let d = dot * v[i - k].conj();
                q[[row, i]] -= d;
            }
        }
    }

    // Thin factors; scrub roundoff below the diagonal and normalize phases so
    // the diagonal of R is real non-negative.
    let mut r_thin = r.slice(s![..n, ..n]).to_owned();
    let mut q_thin = q.slice(s![.., ..n]).to_owned();
    for i in 1..n {
        for j in 0..i {
            r_thin[[i, j]] = Complex64::new(0.0, 0.0);
        }
    }
    for k in 0..n {
        let d = r_thin[[k, k]];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            let ph_conj = ph.conj();
            for j in k..n {
                r_thin[[k, j]] *= ph_conj;
            }
            q_thin.column_mut(k).mapv_inplace(|z| z * ph);
        }
    }
    Ok((q_thin, r_thin))
}

// ── SVD ─────────────────────────────────────────────────────────────────────

const JACOBI_MAX_SWEEPS: usize = 60;
const JACOBI_TOL: f64 = 1e-14;

/// Leading `r` singular triplets via one-sided Jacobi.
///
/// `U diag(lambda) V^H` is the best rank-r Frobenius approximation of `A`.
/// Requires `1 <= r <= min(rows, cols)`.
pub fn svd_truncated(a: &CMat, r: usize) -> Result<SvdFactors> {
    let (m, n) = a.dim();
    if r < 1 || r > m.min(n) {
        return reject(format!(
            "svd_truncated rank {r} out of range for {m}x{n} matrix"
        ));
    }
    // Run the one-sided sweep on the orientation with fewer columns.
    if m >= n {
        let (u, lambda, v) = jacobi_svd_tall(a);
        Ok(SvdFactors {
            u: u.slice(s![.., ..r]).to_owned(),
            lambda: lambda[..r].to_vec(),
            v: v.slice(s![.., ..r]).to_owned(),
        })
    } else {
        let ah = hermitian(a);
        let (u, lambda, v) = jacobi_svd_tall(&ah);
        // A = (A^H)^H = V diag U^H.
        Ok(SvdFactors {
            u: v.slice(s![.., ..r]).to_owned(),
            lambda: lambda[..r].to_vec(),
            v: u.slice(s![.., ..r]).to_owned(),
        })
    }
}

/// One-sided Jacobi on a tall matrix (m >= n). Returns full (U m x n,
/// lambda n, V n x n) sorted descending, with orthonormal columns even for
/// rank-deficient input.
fn jacobi_svd_tall(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (m, n) = a.dim();
    let mut g = a.clone();
    let mut v = Array2::<Complex64>::eye(n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        // Columns whose norm has collapsed to roundoff of the dominant one
        // carry no information; rotating against them never converges
        // because cancellation leftovers stay parallel to the span.
        let max_col_sq = (0..n)
            .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .fold(0.0_f64, f64::max);
        let floor_sq = max_col_sq * 1e-28;
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let gp = g[[i, p]];
                    let gq = g[[i, q]];
                    app += gp.norm_sqr();
                    aqq += gq.norm_sqr();
                    apq += gp.conj() * gq;
                }
                if app <= floor_sq || aqq <= floor_sq {
                    continue;
                }
                let scale = (app * aqq).sqrt();
                if apq.norm() <= JACOBI_TOL * scale {
                    continue;
                }
                off = off.max(apq.norm() / scale);

                // Classical small-angle rotation on the phase-absorbed pair:
                // |t| <= 1 keeps the cyclic sweep convergent (no reordering).
                let d = apq.norm();
                let phase = apq / d;
                let tau = (app - aqq) / (2.0 * d);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let j00 = Complex64::new(c, 0.0);
                let j10 = Complex64::new(s, 0.0) * phase.conj();
                let j01 = Complex64::new(-s, 0.0) * phase;
                let j11 = Complex64::new(c, 0.0);

                for i in 0..m {
                    let gp = g[[i, p]];
                    let gq = g[[i, q]];
                    g[[i, p]] = gp * j00 + gq * j10;
                    g[[i, q]] = gp * j01 + gq * j11;
                }
                for i in 0..n {
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = vp * j00 + vq * j10;
                    v[[i, q]] = vp * j01 + vq * j11;
                }
            }
        }
        if off < JACOBI_TOL {
            break;
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Array2::<Complex64>::zeros((m, n));
    let mut v_sorted = Array2::<Complex64>::zeros((n, n));
    let mut lambda = vec![0.0; n];
    let sigma_max = norms[order[0]];
    for (dst, &src) in order.iter().enumerate() {
        lambda[dst] = norms[src];
        v_sorted.column_mut(dst).assign(&v.column(src));
        if norms[src] > 0.0 {
            let inv = Complex64::new(1.0 / norms[src], 0.0);
            let col = g.column(src).mapv(|z| z * inv);
            u.column_mut(dst).assign(&col);
        }
    }
    // Orthonormal completion for numerically-zero singular directions.
    let tiny = sigma_max * 1e-14;
    complete_orthonormal(&mut u, &lambda, tiny);
    (u, lambda, v_sorted)
}

/// Replace columns of `u` whose singular value is effectively zero with
/// unit vectors orthogonal to the informative columns and to one another
/// (Gram-Schmidt against the standard basis).
fn complete_orthonormal(u: &mut CMat, lambda: &[f64], tiny: f64) {
    let (m, n) = u.dim();
    let mut anchored: Vec<usize> = (0..n).filter(|&j| lambda[j] > tiny).collect();
    for j in 0..n {
        if lambda[j] > tiny {
            continue;
        }
        'candidates: for c in 0..m {
            let mut cand = Array1::<Complex64>::zeros(m);
            cand[c] = Complex64::new(1.0, 0.0);
            for &k in &anchored {
                let proj: Complex64 = u
                    .column(k)
                    .iter()
                    .zip(cand.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let col = u.column(k).to_owned();
                cand.zip_mut_with(&col, |x, &y| *x -= proj * y);
            }
            let nrm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-6 {
                let inv = Complex64::new(1.0 / nrm, 0.0);
                u.column_mut(j).assign(&cand.mapv(|z| z * inv));
                anchored.push(j);
                break 'candidates;
            }
        }
    }
}

// ── Bilateral random projections ────────────────────────────────────────────

/// Fast rank-`r` approximation of `A` by bilateral random projections.
///
/// Draws an initial right projection `A1` with i.i.d. standard complex
/// Gaussian entries, forms `A2 = X A1` and `A1 = X^H A2` on the
/// power-scheme matrix `X = (A A^H)^q A`, QR-decomposes both projections
/// and assembles `Q2 [R2 (A2^H X A1)^{-1} R1^H]^{1/(2q+1)} Q1^H`, where the
/// matrix root is taken on the singular values of the r-by-r bracket.
///
/// If the inner r-by-r matrix is numerically singular (rank of `A` below
/// `r`), the result falls back to the truncated SVD and is flagged.
pub fn brp_rank_approx(a: &CMat, r: usize, q: usize, rng: &mut impl Rng) -> Result<BrpApprox> {
    let (m, n) = a.dim();
    if r < 1 || r > m.min(n) {
        return reject(format!(
            "brp_rank_approx rank {r} out of range for {m}x{n} matrix"
        ));
    }

    // X = (A A^H)^q A without forming A A^H.
    let ah = hermitian(a);
    let mut x = a.clone();
    for _ in 0..q {
        x = a.dot(&ah.dot(&x));
    }
    let xh = hermitian(&x);

    let a1_init = complex_gaussian(n, r, 1.0, rng);
    let a2 = x.dot(&a1_init);
    let a1 = xh.dot(&a2);

    // The inner matrix pairs A2 with the *initial* right projection; using
    // the updated A1 here would assemble the inverse spectrum.
    let inner = hermitian(&a2).dot(&x.dot(&a1_init));
    let inner_svd = svd_truncated(&inner, r)?;
    let s_max = inner_svd.lambda[0];
    let s_min = inner_svd.lambda[r - 1];
    if s_max == 0.0 || s_min < 1e-12 * s_max {
        let f = svd_truncated(a, r)?;
        return Ok(BrpApprox {
            matrix: f.reconstruct(),
            svd_fallback: true,
        });
    }

    let (q1, r1) = qr_decompose(&a1)?;
    let (q2, r2) = qr_decompose(&a2)?;

    // inner^{-1} from its SVD.
    let mut inv_scaled = inner_svd.v.clone();
    for j in 0..r {
        let s = Complex64::new(1.0 / inner_svd.lambda[j], 0.0);
        inv_scaled.column_mut(j).mapv_inplace(|z| z * s);
    }
    let inner_inv = inv_scaled.dot(&hermitian(&inner_svd.u));

    let bracket = r2.dot(&inner_inv).dot(&hermitian(&r1));
    let root = matrix_root(&bracket, 2 * q + 1)?;
    Ok(BrpApprox {
        matrix: q2.dot(&root).dot(&hermitian(&q1)),
        svd_fallback: false,
    })
}

/// k-th root of a small square matrix via SVD of the matrix, taking the root
/// of its singular values.
fn matrix_root(b: &CMat, k: usize) -> Result<CMat> {
    let r = b.nrows();
    let f = svd_truncated(b, r)?;
    let mut scaled = f.u.clone();
    for j in 0..r {
        let s = Complex64::new(f.lambda[j].powf(1.0 / k as f64), 0.0);
        scaled.column_mut(j).mapv_inplace(|z| z * s);
    }
    Ok(scaled.dot(&hermitian(&f.v)))
}

// ── Hard thresholding ───────────────────────────────────────────────────────

/// Keep the `k` entries of largest modulus, zero the rest.
///
/// Ties are broken by row-major position so the projection is deterministic.
/// `k` outside `0..=rows*cols` is rejected, not clamped.
pub fn hard_threshold(a: &CMat, k: usize) -> Result<CMat> {
    let total = a.nrows() * a.ncols();
    if k > total {
        return reject(format!("hard_threshold cardinality {k} exceeds {total} entries"));
    }
    let mut out = Array2::<Complex64>::zeros(a.raw_dim());
    if k == 0 {
        return Ok(out);
    }
    let mut idx: Vec<(f64, usize)> = a
        .iter()
        .enumerate()
        .map(|(i, z)| (z.norm_sqr(), i))
        .collect();
    idx.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
    let cols = a.ncols();
    for &(_, flat) in idx.iter().take(k) {
        let (i, j) = (flat / cols, flat % cols);
        out[[i, j]] = a[[i, j]];
    }
    Ok(out)
}

// ── 2-D FFT ─────────────────────────────────────────────────────────────────

/// Unnormalized forward 2-D DFT of `Z` zero-padded to `nfft_rows x nfft_cols`:
/// bin (p, s) holds `sum_{m,n} Z[m,n] exp(-j 2 pi (m p / nfft_rows + n s / nfft_cols))`.
pub fn fft2(z: &CMat, nfft_rows: usize, nfft_cols: usize) -> Result<CMat> {
    let (rows, cols) = z.dim();
    if nfft_rows < rows || nfft_cols < cols {
        return reject(format!(
            "fft2 grid {nfft_rows}x{nfft_cols} smaller than input {rows}x{cols}"
        ));
    }
    let mut out = Array2::<Complex64>::zeros((nfft_rows, nfft_cols));
    out.slice_mut(s![..rows, ..cols]).assign(z);

    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(nfft_cols);
    for mut row in out.rows_mut() {
        let buf = row.as_slice_mut().expect("row-major layout");
        row_fft.process(buf);
    }
    let col_fft = planner.plan_fft_forward(nfft_rows);
    let mut scratch = vec![Complex64::new(0.0, 0.0); nfft_rows];
    for j in 0..nfft_cols {
        for i in 0..nfft_rows {
            scratch[i] = out[[i, j]];
        }
        col_fft.process(&mut scratch);
        for i in 0..nfft_rows {
            out[[i, j]] = scratch[i];
        }
    }
    Ok(out)
}
