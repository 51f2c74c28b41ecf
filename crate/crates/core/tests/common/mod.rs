#![allow(dead_code)]

/// Rows `(𝒟, ∂1, ∂2, ∂11, ∂22, ∂12)` at the ten base points, two decimals.
pub const DISCRIMINANT_TABLE: [[f64; 6]; 10] = [
    [114.24, 136.59, -45.98, -419.46, -441.48, -178.78],
    [8.71, -22.00, 15.52, 39.45, 13.84, -81.14],
    [70.23, 86.57, -124.38, -58.60, -2.96, -171.09],
    [8.59, -40.85, 4.26, 113.57, -24.69, -87.82],
    [108.31, 39.04, 162.94, -260.04, -171.83, 27.57],
    [10.43, 23.28, -23.28, 28.55, 28.55, -92.99],
    [108.31, -162.94, -39.04, -171.83, -260.04, 27.57],
    [8.59, -4.26, -40.85, -24.69, 113.57, 87.82],
    [70.23, 124.38, -86.57, -2.96, -58.60, -171.09],
    [8.71, 15.52, 22.00, 13.84, 39.45, 81.14],
];

/// `(Df_i^c)_0` rounded to four decimals.
pub const JACOBIAN_TABLE: [[[f64; 2]; 2]; 10] = [
    [[-0.2159, -0.3755], [-0.4694, 0.4623]],
    [[1.7718, -2.1227], [-12.3247, 16.3690]],
    [[0.3539, -4.7730], [0.4185, -4.6570]],
    [[-3.1432, -0.4406], [-0.0916, -1.1425]],
    [[-0.4583, 0.1150], [-0.6163, 0.8316]],
    [[1.4772, -1.9866], [0.3707, -2.6806]],
    [[-0.8852, 0.0258], [-0.1241, 0.3218]],
    [[1.0118, 1.1967], [13.6472, 13.3154]],
    [[-0.6239, -4.3400], [0.7475, 5.7641]],
    [[-1.3601, 1.6743], [-0.3730, -2.2037]],
];

/// `𝒟(x, y) = A²x²y² + 8uv − 4u²v²` with `u = 1 + x²`, `v = 1 + y²`, in plain floats.
pub fn disc_f64(a: f64, x: f64, y: f64) -> f64 {
    let (u, v) = (1.0 + x * x, 1.0 + y * y);
    a * a * x * x * y * y + 8.0 * u * v - 4.0 * u * u * v * v
}

/// Inverse by Gauss-Jordan with partial pivoting, in plain floats.
pub fn invert_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for k in 0..n {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for k in 0..n {
                    a[r][k] -= f * a[col][k];
                    inv[r][k] -= f * inv[col][k];
                }
            }
        }
    }
    inv
}

pub mod braids;
