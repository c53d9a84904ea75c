//! Dense matrix exponential by scaling and squaring with Padé approximants
//! (Higham's 2005 variant: degrees 3, 5, 7, 9, 13).

use nalgebra::DMatrix;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(a)` for a square matrix.
///
/// # Panics
/// If `a` is not square.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let ident = DMatrix::<f64>::identity(n, n);
    let norm = one_norm(a);

    for (theta, coeffs) in [(THETA_3, &B3[..]), (THETA_5, &B5[..]), (THETA_7, &B7[..]), (THETA_9, &B9[..])] {
        if norm <= theta {
            return pade_low(a, coeffs, &ident);
        }
    }

    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil().max(0.0) as i32 } else { 0 };
    let scaled = a * 2f64.powi(-s);
    let mut x = pade_13(&scaled, &ident);
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

/// Odd/even split for degrees up to 9: `U = A Σ b_{2k+1} A^{2k}`, `V = Σ b_{2k} A^{2k}`.
fn pade_low(a: &DMatrix<f64>, b: &[f64], ident: &DMatrix<f64>) -> DMatrix<f64> {
    let a2 = a * a;
    let mut u_inner = ident * b[1];
    let mut v = ident * b[0];
    let mut power = ident.clone();
    for k in 1..b.len() / 2 {
        power = &power * &a2;
        u_inner += &power * b[2 * k + 1];
        v += &power * b[2 * k];
    }
    let u = a * u_inner;
    solve_pade(u, v)
}

fn pade_13(a: &DMatrix<f64>, ident: &DMatrix<f64>) -> DMatrix<f64> {
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_high = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = a * (u_high + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + ident * b[1]);
    let v_high = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = v_high + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + ident * b[0];
    solve_pade(u, v)
}

/// `(V − U)^{-1} (V + U)`
fn solve_pade(u: DMatrix<f64>, v: DMatrix<f64>) -> DMatrix<f64> {
    let p = &v + &u;
    let q = v - u;
    q.lu().solve(&p).expect("Padé denominator is nonsingular for the selected degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn zero_gives_identity() {
        let z = DMatrix::<f64>::zeros(5, 5);
        assert_eq!(expm(&z), DMatrix::identity(5, 5));
    }

    #[test]
    fn diagonal() {
        for scale in [1e-3, 0.2, 0.9, 2.0, 40.0] {
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![scale, -scale, 0.5 * scale]));
            let e = expm(&d);
            for (i, x) in [scale, -scale, 0.5 * scale].into_iter().enumerate() {
                assert!((e[(i, i)] - x.exp()).abs() <= 1e-13 * x.exp().max(1.0), "scale {scale}");
            }
        }
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t
        for t in [0.01f64, 0.3, 1.7, 25.0] {
            let g = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
            let want = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
            assert!(max_abs_diff(&expm(&g), &want) < 1e-13 * t.max(1.0));
        }
    }

    #[test]
    fn nilpotent() {
        // strictly upper triangular: series terminates
        let n = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 3.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0]);
        let want = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0 + 5.0, 0.0, 1.0, 5.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&expm(&n), &want) < 1e-13);
    }
}
