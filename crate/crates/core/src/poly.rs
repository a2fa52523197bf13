//! Monomial bases of `𝒫_m^d`, the polynomials of total degree at most `m`.

use alloc::vec::Vec;

/// Exponent vectors of all monomials of total degree `<= degree` in `dim`
/// variables, ordered by total degree; the constant monomial comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomials {
    dim: usize,
    degree: usize,
    exponents: Vec<u32>,
}

impl Monomials {
    pub fn new(dim: usize, degree: usize) -> Self {
        let mut exponents = Vec::new();
        let mut current = alloc::vec![0u32; dim];
        for total in 0..=degree {
            push_with_total(&mut exponents, &mut current, 0, total as u32);
        }
        Self { dim, degree, exponents }
    }

    /// Monomials of total degree exactly `degree`.
    pub fn homogeneous(dim: usize, degree: usize) -> Self {
        let mut exponents = Vec::new();
        let mut current = alloc::vec![0u32; dim];
        push_with_total(&mut exponents, &mut current, 0, degree as u32);
        Self { dim, degree, exponents }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exponent(&self, k: usize) -> &[u32] {
        &self.exponents[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.chunks_exact(self.dim.max(1))
    }

    /// Evaluate every monomial at `x` into `out`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        for (slot, alpha) in out.iter_mut().zip(self.iter()) {
            let mut v = 1.0;
            for (xi, &a) in x.iter().zip(alpha) {
                for _ in 0..a {
                    v *= xi;
                }
            }
            *slot = v;
        }
    }
}

/// `dim(𝒫_m^d) = binom(m + d, d)`.
pub fn space_dimension(dim: usize, degree: usize) -> usize {
    let mut num: usize = 1;
    for k in 1..=dim {
        num = num * (degree + k) / k;
    }
    num
}

fn push_with_total(out: &mut Vec<u32>, current: &mut Vec<u32>, axis: usize, remaining: u32) {
    let dim = current.len();
    if axis + 1 == dim {
        current[axis] = remaining;
        out.extend_from_slice(current);
        current[axis] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[axis] = e;
        push_with_total(out, current, axis + 1, remaining - e);
    }
    current[axis] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomial() {
        for d in 1..4 {
            for m in 0..4 {
                assert_eq!(Monomials::new(d, m).len(), space_dimension(d, m));
            }
        }
        assert_eq!(Monomials::homogeneous(2, 2).len(), 3);
    }

    #[test]
    fn constant_first_and_evaluation() {
        let basis = Monomials::new(2, 2);
        assert_eq!(basis.exponent(0), &[0, 0]);
        let mut out = [0.0; 6];
        basis.eval_into(&[2.0, 3.0], &mut out);
        let mut sorted = out;
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, [1.0, 2.0, 3.0, 4.0, 6.0, 9.0]);
    }
}
