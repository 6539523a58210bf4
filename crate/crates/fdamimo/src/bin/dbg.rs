use fdamimo::linalg::*;
use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// replicate the sweep to watch convergence
fn main() {
    let mut r3 = ChaCha8Rng::seed_from_u64(13);
    let a = complex_gaussian(6, 6, 1.0, &mut r3);
    let (m, n) = a.dim();
    let mut g = a.clone();
    let mut v = Array2::<Complex64>::eye(n);
    for sweep in 0..60 {
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
                let scale = (app * aqq).sqrt();
                if scale == 0.0 || apq.norm() <= 1e-14 * scale {
                    continue;
                }
                off = off.max(apq.norm() / scale);
                let half_diff = 0.5 * (app - aqq);
                let disc = (half_diff * half_diff + apq.norm_sqr()).sqrt();
                let lambda1 = 0.5 * (app + aqq) + disc;
                let v1_0 = apq;
                let v1_1 = Complex64::new(lambda1 - app, 0.0);
                let nrm = (v1_0.norm_sqr() + v1_1.norm_sqr()).sqrt();
                if nrm == 0.0 { continue; }
                let j00 = v1_0 / nrm;
                let j10 = v1_1 / nrm;
                let j01 = -v1_1.conj() / nrm;
                let j11 = v1_0.conj() / nrm;
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
        println!("sweep {sweep}: off = {off:.3e}");
        if off < 1e-14 { break; }
    }
    let mut norms: Vec<f64> = (0..n).map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    norms.sort_by(|a, b| b.partial_cmp(a).unwrap());
    println!("{norms:?}");
}
