//! Real symmetric eigensolver kernel: Householder tridiagonalization followed
//! by implicit-shift QL iteration (EISPACK `tred2`/`tql2` lineage).
//!
//! Storage is column-major `n * n`; the inner loops walk contiguous column
//! segments so the kernel vectorizes on the baseline target. The same kernel
//! serves the complex Hermitian class through the 2N real embedding in the
//! parent module.

use crate::spectral::SpectralError;

const MAX_QL_ITERATIONS: usize = 50;

/// Eigenvalues (ascending) and, optionally, orthonormal eigenvectors
/// (column-major, column `k` pairs with eigenvalue `k`) of a symmetric matrix.
///
/// `a` is the column-major matrix content and is consumed as workspace.
pub(crate) fn sym_eigen(
    mut a: Vec<f64>,
    n: usize,
    with_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>), SpectralError> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), with_vectors.then(Vec::new)));
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    if with_vectors {
        tred2(&mut a, n, &mut d, &mut e);
        tql(&mut d, &mut e, n, Some(&mut a))?;
        sort_pairs(&mut d, Some(&mut a), n);
        Ok((d, Some(a)))
    } else {
        tred1(&mut a, n, &mut d, &mut e);
        tql(&mut d, &mut e, n, None)?;
        sort_pairs(&mut d, None, n);
        Ok((d, None))
    }
}

/// Householder reduction to tridiagonal form, accumulating the orthogonal
/// transformation in `a`. On exit `d` holds the diagonal, `e[1..]` the
/// subdiagonal, and `a` the accumulated basis.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let col = |j: usize| j * n;
    for j in 0..n {
        d[j] = a[col(j) + (n - 1)];
    }

    for i in (1..n).rev() {
        let mut h = 0.0;
        let mut scale = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = a[col(j) + (i - 1)];
                a[col(j) + i] = 0.0;
                a[col(i) + j] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            // Apply the similarity transformation to the leading block:
            // first p = A u (using symmetry, one triangular pass).
            for j in 0..i {
                let f = d[j];
                a[col(i) + j] = f;
                let cj = &a[col(j)..col(j) + i];
                let mut g = e[j] + cj[j] * f;
                for k in j + 1..i {
                    g += cj[k] * d[k];
                    e[k] += cj[k] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            // Rank-two update A <- A - u q^T - q u^T on the lower triangle.
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let cj = &mut a[col(j)..col(j) + i];
                for k in j..i {
                    cj[k] -= f * e[k] + g * d[k];
                }
                d[j] = a[col(j) + (i - 1)];
                a[col(j) + i] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n - 1 {
        a[col(i) + (n - 1)] = a[col(i) + i];
        a[col(i) + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for (k, dk) in d.iter_mut().enumerate().take(i + 1) {
                *dk = a[col(i + 1) + k] / h;
            }
            let (left, right) = a.split_at_mut(col(i + 1));
            let ci1 = &right[..i + 1];
            for j in 0..=i {
                let cj = &mut left[col(j)..col(j) + i + 1];
                let mut g = 0.0;
                for k in 0..=i {
                    g += ci1[k] * cj[k];
                }
                for k in 0..=i {
                    cj[k] -= g * d[k];
                }
            }
        }
        a[col(i + 1)..col(i + 1) + i + 1].fill(0.0);
    }
    for j in 0..n {
        d[j] = a[col(j) + (n - 1)];
        a[col(j) + (n - 1)] = 0.0;
    }
    a[col(n - 1) + (n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Householder reduction without accumulating transformations (values-only
/// path). On exit `d` holds the diagonal and `e[1..]` the subdiagonal.
fn tred1(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let col = |j: usize| j * n;
    for j in 0..n {
        d[j] = a[col(j) + (n - 1)];
    }

    for i in (1..n).rev() {
        let mut h = 0.0;
        let mut scale = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = a[col(j) + (i - 1)];
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                let f = d[j];
                let cj = &a[col(j)..col(j) + i];
                let mut g = e[j] + cj[j] * f;
                for k in j + 1..i {
                    g += cj[k] * d[k];
                    e[k] += cj[k] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let cj = &mut a[col(j)..col(j) + i];
                for k in j..i {
                    cj[k] -= f * e[k] + g * d[k];
                }
                d[j] = a[col(j) + (i - 1)];
            }
        }
    }
    // The updated diagonal is the tridiagonal diagonal.
    for j in 0..n {
        d[j] = a[col(j) + j];
    }
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
///
/// `d` is the diagonal, `e[1..]` the subdiagonal (EISPACK layout); rotations
/// are applied to the columns of `z` when present.
fn tql(d: &mut [f64], e: &mut [f64], n: usize, mut z: Option<&mut [f64]>) -> Result<(), SpectralError> {
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            // Locate a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(SpectralError::NoConvergence { index: l });
            }
            // Form the implicit shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow by deflating.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    let (zi, zi1) = zz[i * n..(i + 2) * n].split_at_mut(n);
                    for k in 0..n {
                        f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Sort eigenvalues ascending, carrying eigenvector columns along. Exact ties
/// are broken by lexicographic comparison of the eigenvector columns so that
/// the ordering is a pure function of the input matrix.
fn sort_pairs(d: &mut [f64], z: Option<&mut [f64]>, n: usize) {
    let mut order: Vec<usize> = (0..n).collect();
    match z {
        Some(z) => {
            order.sort_by(|&i, &j| {
                d[i].partial_cmp(&d[j])
                    .expect("eigenvalues are finite")
                    .then_with(|| {
                        let ci = &z[i * n..(i + 1) * n];
                        let cj = &z[j * n..(j + 1) * n];
                        ci.partial_cmp(cj).expect("eigenvectors are finite")
                    })
            });
            let mut ds = vec![0.0; n];
            let mut zs = vec![0.0; n * n];
            for (dst, &src) in order.iter().enumerate() {
                ds[dst] = d[src];
                zs[dst * n..(dst + 1) * n].copy_from_slice(&z[src * n..(src + 1) * n]);
            }
            d.copy_from_slice(&ds);
            z.copy_from_slice(&zs);
        }
        None => {
            d.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        }
    }
}
