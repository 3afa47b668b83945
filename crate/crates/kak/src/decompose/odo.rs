//! `U = O1 D O2` for complex unitary `U` (cell F1 over C).

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use super::{finish, require_member, require_square};
use crate::error::Result;
use crate::numeric::{eigh_sorted, from_na, polar_unitary, to_na, DenseMatrix};
use crate::registry::{spec, FactoredElement, Params};

/// Orthogonal `V` with `V^T A V` and `V^T B V` both diagonal, for commuting
/// real symmetric `A`, `B`. Starts from the eigenbasis of `A` and finishes
/// with cyclic joint Jacobi rotations.
pub fn joint_diagonalize(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let (_, mut v) = eigh_sorted(a);
    let mut ma = v.transpose() * a * &v;
    let mut mb = v.transpose() * b * &v;
    let scale = (a.norm() + b.norm()).max(f64::MIN_POSITIVE);
    for _sweep in 0..50 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| ma[(i, j)].powi(2) + mb[(i, j)].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for i in 0..n {
            for j in i + 1..n {
                // Off-diagonal entry after a rotation by phi is
                // cos(2 phi) * h0 + sin(2 phi) * h1; minimize its sum of squares.
                let h = |m: &DMatrix<f64>| [m[(i, j)], 0.5 * (m[(j, j)] - m[(i, i)])];
                let (ha, hb) = (h(&ma), h(&mb));
                let g = Matrix2::new(
                    ha[0] * ha[0] + hb[0] * hb[0],
                    ha[0] * ha[1] + hb[0] * hb[1],
                    ha[0] * ha[1] + hb[0] * hb[1],
                    ha[1] * ha[1] + hb[1] * hb[1],
                );
                if g[(0, 1)].abs() <= 1e-300 && g[(0, 0)] <= g[(1, 1)] {
                    continue;
                }
                let eig = SymmetricEigen::new(g);
                let k = if eig.eigenvalues[0] <= eig.eigenvalues[1] { 0 } else { 1 };
                let mut u = eig.eigenvectors.column(k).into_owned();
                if u[0] < 0.0 {
                    u = -u;
                }
                let phi = 0.5 * u[1].atan2(u[0]);
                if phi.abs() < 1e-18 {
                    continue;
                }
                let (c, s) = (phi.cos(), phi.sin());
                for m in [&mut ma, &mut mb, &mut v] {
                    for r in 0..m.nrows() {
                        let (x, y) = (m[(r, i)], m[(r, j)]);
                        m[(r, i)] = c * x + s * y;
                        m[(r, j)] = -s * x + c * y;
                    }
                }
                for m in [&mut ma, &mut mb] {
                    for col in 0..n {
                        let (x, y) = (m[(i, col)], m[(j, col)]);
                        m[(i, col)] = c * x + s * y;
                        m[(j, col)] = -s * x + c * y;
                    }
                }
            }
        }
    }
    v
}

/// Cell F1 over C: `U = O1 diag(e^{i theta}) O2` with real orthogonal
/// `O1`, `O2` and `theta` in `[0, pi)`, descending.
pub fn odo(u: &DenseMatrix) -> Result<FactoredElement> {
    require_square(u)?;
    let s = spec(1, 2, Params::N { n: u.rows() })?;
    require_member(&s, u)?;
    let n = u.rows();
    let uc = to_na::<Complex64>(u)?;
    let m = uc.transpose() * &uc;
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let re = (&re + re.transpose()) * 0.5;
    let im = (&im + im.transpose()) * 0.5;
    let v = joint_diagonalize(&re, &im);
    let vc = v.map(|x| Complex64::new(x, 0.0));
    let diag = vc.transpose() * &m * &vc;
    let mut theta: Vec<f64> = (0..n)
        .map(|k| {
            let mut t = 0.5 * diag[(k, k)].arg();
            if t < 0.0 {
                t += PI;
            }
            if t >= PI {
                t -= PI;
            }
            t
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]));
    theta = order.iter().map(|&k| theta[k]).collect();
    let v = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let vc = v.map(|x| Complex64::new(x, 0.0));
    let dinv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        theta.iter().map(|t| Complex64::from_polar(1.0, -t)),
    ));
    let o1c = &uc * &vc * dinv;
    let o1 = polar_unitary(&o1c.map(|z| z.re));
    let o1 = from_na(&o1);
    let o2 = from_na(&v.transpose());
    Ok(finish(&s, vec![o1], theta, vec![o2], u))
}
