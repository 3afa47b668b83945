//! `g = O1 B(theta) O2` for complex orthogonal `g` (cell F23 over C), with
//! `O1`, `O2` real orthogonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::symplectic::skew_pairs;
use super::{finish, require_field, require_member, require_square};
use crate::error::Result;
use crate::numeric::{complete_basis, from_na, polar_unitary, to_na, DenseMatrix, Field};
use crate::registry::{spec, FactoredElement, Params};

pub fn complex_orthogonal_kak(g: &DenseMatrix) -> Result<FactoredElement> {
    require_square(g)?;
    require_field(g, &[Field::C])?;
    let n = g.rows();
    let sp = spec(23, 2, Params::N { n })?;
    require_member(&sp, g)?;
    let gn = to_na::<Complex64>(g)?;
    // g^H g = O2^T B^2 O2 and B^2 has imaginary part [[0, sinh 2t], [-sinh 2t, 0]].
    let w = gn.adjoint() * &gn;
    let k = w.map(|z| z.im);
    let k = (&k - k.transpose()) * 0.5;
    let (m, off) = (n / 2, n % 2);

    let (q, lambda) = skew_pairs(&k);
    // skew_pairs lays pairs out as (k, m + k); B wants (off + 2k, off + 2k + 1).
    let mut o2t = DMatrix::<f64>::zeros(n, n);
    for i in 0..m {
        o2t.set_column(off + 2 * i, &q.column(i));
        o2t.set_column(off + 2 * i + 1, &q.column(m + i));
    }
    if off == 1 {
        let partial = DMatrix::from_fn(n, 2 * m, |r, c| o2t[(r, 1 + c)]);
        let full = complete_basis(&partial);
        o2t.set_column(0, &full.column(2 * m));
    }
    let o2t = polar_unitary(&o2t);
    let theta: Vec<f64> = lambda.iter().map(|l| 0.5 * l.max(0.0).asinh()).collect();
    let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
    let b_inv = to_na::<Complex64>(&sp.template.middle_factor(&neg, Field::C)?)?;
    let o1 = &gn * o2t.map(|x| Complex64::new(x, 0.0)) * b_inv;
    let o1 = polar_unitary(&o1.map(|z| z.re));
    Ok(finish(&sp, vec![from_na(&o1)], theta, vec![from_na(&o2t.transpose())], g))
}
