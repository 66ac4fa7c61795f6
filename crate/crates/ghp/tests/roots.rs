use ghp::hermite::hermite_generalized;
use ghp::roots::find_roots_auto;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64 as C;

/// Coefficients of p(w + s).
fn taylor_shift(c: &[f64], s: f64) -> Vec<f64> {
    let mut q = c.to_vec();
    let d = q.len();
    for i in 0..d {
        for j in (i..d - 1).rev() {
            q[j] += s * q[j + 1];
        }
    }
    q
}

/// Eigenvalues of the companion matrix. The variable is shifted first since
/// the unshifted QR iteration can stall on spectra symmetric under rotation.
fn companion_roots(c: &[f64]) -> Vec<C> {
    let shift = 0.137;
    let c = taylor_shift(c, shift);
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let schur = Schur::try_new(m, f64::EPSILON, 100_000).expect("QR iteration did not converge");
    schur.complex_eigenvalues().iter().map(|w| w + shift).collect()
}

#[test]
fn agrees_with_companion_eigenvalues() {
    for (m, n) in [(2, 2), (3, 2), (4, 3), (5, 2), (3, 5), (6, 4), (5, 5), (8, 5)] {
        let p = hermite_generalized(m, n).unwrap();
        assert!(p.degree() <= 40);
        let ours = find_roots_auto(&p, None).unwrap().roots;
        let oracle = companion_roots(&p.to_f64());
        assert_eq!(ours.len(), oracle.len());
        let mut used = vec![false; oracle.len()];
        for z in &ours {
            let (i, d) = oracle
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, w)| (i, (w - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            used[i] = true;
            assert!(d < 1e-6 * z.norm().max(1.0), "H_{{{m},{n}}} root {z}: {d}");
        }
    }
}

#[test]
fn taylor_shift_moves_roots() {
    // (z − 1)(z − 2) at z = w + 1 is w(w − 1)
    assert_eq!(taylor_shift(&[2.0, -3.0, 1.0], 1.0), vec![0.0, -1.0, 1.0]);
}
