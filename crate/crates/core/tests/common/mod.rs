//! Shared test oracles, independent of the library's closed forms.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for reproducible randomized checks.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draw from (0, hi] (uniform, excludes zero).
pub fn positive_uniform<R: Rng>(rng: &mut R, hi: f64) -> f64 {
    hi * (1.0 - rng.gen::<f64>())
}

/// Eigenvalues of a real symmetric 3×3 matrix, ascending, via its
/// characteristic polynomial: coefficients by cofactor expansion, roots
/// by the trigonometric formula for the depressed cubic (symmetry
/// guarantees three real roots), each polished by Newton steps.
///
/// This route shares no code with the closed-form frequencies under test.
pub fn symmetric_eigenvalues_by_charpoly(m: &[[f64; 3]; 3]) -> [f64; 3] {
    // λ³ + aλ² + bλ + c = −det(M − λI)
    let trace = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let a = -trace;
    let b = minors;
    let c = -det;

    // Depress with λ = x − a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    let mut roots = [0.0f64; 3];
    if p >= -1e-300 {
        // Triple (or numerically indistinct) root.
        roots = [-shift; 3];
    } else {
        let radius = 2.0 * (-p / 3.0).sqrt();
        let cos_arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let phi = cos_arg.clamp(-1.0, 1.0).acos() / 3.0;
        for (k, root) in roots.iter_mut().enumerate() {
            let x = radius * (phi - 2.0 * core::f64::consts::PI * k as f64 / 3.0).cos();
            *root = x - shift;
        }
    }

    // Newton polish on the undepressed cubic.
    for root in &mut roots {
        for _ in 0..3 {
            let f = ((*root + a) * *root + b) * *root + c;
            let df = (3.0 * *root + 2.0 * a) * *root + b;
            if df.abs() > 1e-300 {
                *root -= f / df;
            }
        }
    }

    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn charpoly_oracle_on_known_matrices() {
        let diag = [[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.5]];
        let ev = symmetric_eigenvalues_by_charpoly(&diag);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 0.5).abs() < 1e-12);
        assert!((ev[2] - 2.0).abs() < 1e-12);

        // 2×2 block with known pair ±√2 plus a decoupled 3.0.
        let m = [[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 3.0]];
        let ev = symmetric_eigenvalues_by_charpoly(&m);
        assert!((ev[0] + 2.0f64.sqrt()).abs() < 1e-12);
        assert!((ev[1] - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((ev[2] - 3.0).abs() < 1e-12);
    }
}
