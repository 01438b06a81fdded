use rug::{Assign, Rational};

use crate::exact::ExactRational;

/// Dense truncated power series `Σ_{i ≤ n_max} c_i x^i` over exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<ExactRational>,
}

impl SeriesPoly {
    /// Coefficients `0..=n_max`; an empty input is the zero series at `n_max = 0`.
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ExactRational::zero());
        }
        SeriesPoly { coeffs }
    }

    pub fn zero(n_max: usize) -> Self {
        SeriesPoly {
            coeffs: vec![ExactRational::zero(); n_max + 1],
        }
    }

    pub fn one(n_max: usize) -> Self {
        let mut s = Self::zero(n_max);
        s.coeffs[0] = ExactRational::one();
        s
    }

    /// `−log(1−x) = Σ_{i≥1} x^i / i`.
    pub fn log_series(n_max: usize) -> Self {
        let mut s = Self::zero(n_max);
        for i in 1..=n_max {
            s.coeffs[i] = ExactRational::recip_u64(i as u64);
        }
        s
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &ExactRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Truncated product; the result has the smaller of the two orders.
    /// Schoolbook O(n²) over big rationals; this is the module's hot loop.
    pub fn mul(&self, other: &SeriesPoly) -> SeriesPoly {
        let n = self.n_max().min(other.n_max());
        let a: Vec<&Rational> = self.coeffs[..=n].iter().map(|c| c.as_rational()).collect();
        let b: Vec<&Rational> = other.coeffs[..=n].iter().map(|c| c.as_rational()).collect();
        let first_a = a.iter().position(|c| *c != &0).unwrap_or(n + 1);
        let first_b = b.iter().position(|c| *c != &0).unwrap_or(n + 1);
        let mut out = Vec::with_capacity(n + 1);
        let mut prod = Rational::new();
        for m in 0..=n {
            let mut acc = Rational::new();
            if m >= first_a + first_b {
                for i in first_a..=m - first_b {
                    if *a[i] == 0 || *b[m - i] == 0 {
                        continue;
                    }
                    prod.assign(a[i] * b[m - i]);
                    acc += &prod;
                }
            }
            out.push(ExactRational::from(acc));
        }
        SeriesPoly { coeffs: out }
    }

    /// `self^k` by repeated multiplication; `k = 0` gives 1.
    pub fn pow(&self, k: u32) -> SeriesPoly {
        let mut acc = SeriesPoly::one(self.n_max());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self^k` by binary powering.
    pub fn pow_by_squaring(&self, mut k: u32) -> SeriesPoly {
        let mut acc = SeriesPoly::one(self.n_max());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &ExactRational) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn abs(&self) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(ExactRational::abs).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn log_series_head() {
        let s = SeriesPoly::log_series(3);
        assert_eq!(s.coeffs(), &[q(0, 1), q(1, 1), q(1, 2), q(1, 3)]);
    }

    #[test]
    fn product_truncates() {
        // (1 + x)^2 = 1 + 2x + x², truncated at order 1.
        let a = SeriesPoly::new(vec![q(1, 1), q(1, 1)]);
        let b = SeriesPoly::new(vec![q(1, 1), q(1, 1), q(5, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.n_max(), 1);
        assert_eq!(p.coeffs(), &[q(1, 1), q(2, 1)]);
    }

    #[test]
    fn powers_agree() {
        let s = SeriesPoly::log_series(20);
        for k in 0..7 {
            assert_eq!(s.pow(k), s.pow_by_squaring(k), "k = {k}");
        }
        assert_eq!(s.pow(0), SeriesPoly::one(20));
    }
}
