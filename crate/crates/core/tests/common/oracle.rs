//! Beam-splitter action computed by expanding creation-operator products.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

/// Creation operator written as a sum over waveguide modes 1 and 2.
type Operator = Vec<(Complex64, u8)>;

/// A polynomial in waveguide creation operators: (coefficient, ordered modes).
type Polynomial = Vec<(Complex64, Vec<u8>)>;

fn supermode_operator(name: char) -> Operator {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match name {
        'S' => vec![(h, 1), (h, 2)],
        'A' => vec![(h, 1), (-h, 2)],
        _ => unreachable!(),
    }
}

fn multiply(poly: &Polynomial, op: &Operator) -> Polynomial {
    let mut out = Vec::new();
    for (c, modes) in poly {
        for (d, m) in op {
            let mut next = modes.clone();
            next.push(*m);
            out.push((c * d, next));
        }
    }
    out
}

/// Substitutes the supermode operators into Σ f_ij s_i† i_j† at one grid point
/// and collects the coefficient of each ordered waveguide pair.
pub fn expand_point(f: &[(char, char, Complex64)]) -> [Complex64; 4] {
    let mut collected = [Complex64::new(0.0, 0.0); 4];
    for &(i, j, coef) in f {
        let poly: Polynomial = vec![(coef, Vec::new())];
        let poly = multiply(&poly, &supermode_operator(i));
        let poly = multiply(&poly, &supermode_operator(j));
        for (c, modes) in poly {
            let slot = match (modes[0], modes[1]) {
                (1, 1) => 0,
                (1, 2) => 1,
                (2, 1) => 2,
                (2, 2) => 3,
                _ => unreachable!(),
            };
            collected[slot] += c;
        }
    }
    collected
}
