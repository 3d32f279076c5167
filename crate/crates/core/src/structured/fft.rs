//! Iterative radix-2 FFT and circulant-embedded Toeplitz/Hankel products.

use std::f64::consts::PI;

use num_complex::Complex64;

/// In-place radix-2 transform. `inverse` applies the conjugate twiddles and
/// the `1/N` normalisation. `data.len()` must be a power of two.
pub fn fft_in_place(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n <= 1 {
        return;
    }

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        // Twiddles computed directly per index; the recursive product drifts.
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = data[start + k];
                let b = data[start + k + half] * twiddles[k];
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }

    if inverse {
        let scale = 1.0 / n as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Smallest power of two `>= 2(n+1)` for an `(n+1) × (n+1)` Toeplitz matrix.
pub fn embedding_size(size: usize) -> usize {
    (2 * size).next_power_of_two().max(1)
}

/// First column of the circulant of length `len` embedding the Toeplitz
/// matrix with the given first column and first row:
/// `[first_col; zeros; reverse(first_row[1..])]`.
pub fn circulant_column(first_col: &[f64], first_row: &[f64], len: usize) -> Vec<f64> {
    let size = first_col.len();
    assert_eq!(first_row.len(), size);
    assert!(len >= 2 * size - 1);
    let mut c = vec![0.0; len];
    c[..size].copy_from_slice(first_col);
    for k in 1..size {
        c[len - k] = first_row[k];
    }
    c
}

pub fn forward(real: &[f64], len: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (b, &r) in buf.iter_mut().zip(real) {
        b.re = r;
    }
    fft_in_place(&mut buf, false);
    buf
}

/// Pointwise product with a precomputed spectrum, inverse transform, and
/// truncation to the first `size` real parts.
pub fn convolve_truncate(spectrum: &[Complex64], x_hat: &[Complex64], size: usize) -> Vec<f64> {
    let mut buf: Vec<Complex64> = spectrum.iter().zip(x_hat).map(|(a, b)| a * b).collect();
    fft_in_place(&mut buf, true);
    buf[..size].iter().map(|c| c.re).collect()
}

/// Toeplitz matrix–vector product through a circulant embedding.
pub fn toeplitz_matvec(first_col: &[f64], first_row: &[f64], x: &[f64]) -> Vec<f64> {
    let size = first_col.len();
    assert_eq!(x.len(), size, "vector length must match the matrix");
    assert_eq!(
        first_col.first(),
        first_row.first(),
        "first column and first row must share the diagonal entry"
    );
    let len = embedding_size(size);
    let c_hat = forward(&circulant_column(first_col, first_row, len), len);
    convolve_truncate(&c_hat, &forward(x, len), size)
}

/// Toeplitz description `(first_col, first_row)` of `H · J`, where `H` is the
/// Hankel matrix with anti-diagonals `h` and `J` reverses a vector.
pub fn hankel_as_toeplitz(h: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert!(
        h.len() % 2 == 1,
        "a square Hankel matrix has 2n+1 anti-diagonals"
    );
    let n = h.len() / 2;
    let col = (0..=n).map(|i| h[n + i]).collect();
    let row = (0..=n).map(|k| h[n - k]).collect();
    (col, row)
}

/// Hankel matrix–vector product: `(Hx)_i = Σ_j h_{i+j} x_j`, evaluated as a
/// Toeplitz product on the reversed vector.
pub fn hankel_matvec(h: &[f64], x: &[f64]) -> Vec<f64> {
    let (col, row) = hankel_as_toeplitz(h);
    let reversed: Vec<f64> = x.iter().rev().copied().collect();
    toeplitz_matvec(&col, &row, &reversed)
}
