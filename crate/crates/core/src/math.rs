//! Float operations that live in `std` but not `core`, routed through libm.

#[cfg_attr(test, allow(dead_code))]
pub(crate) trait FloatExt {
    fn sqrt(self) -> f64;
    fn powf(self, e: f64) -> f64;
    fn powi(self, e: i32) -> f64;
    fn ln(self) -> f64;
    fn exp(self) -> f64;
    fn sin(self) -> f64;
}

impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }

    #[inline]
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }

    #[inline]
    fn powi(self, e: i32) -> f64 {
        // Exponents here are tiny (m, n ≤ 8); repeated squaring keeps results
        // bit-reproducible across platforms, unlike libm::pow.
        let mut base = if e < 0 { 1.0 / self } else { self };
        let mut k = e.unsigned_abs();
        let mut acc = 1.0;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        acc
    }

    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }

    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }

    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
}

/// Binomial coefficient as f64; n is small (≤ 8) throughout the crate.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// m!(n−m)!/n! = 1/C(n,m), the density normalisation of the m-Hessian measure.
pub(crate) fn hessian_norm_const(m: usize, n: usize) -> f64 {
    1.0 / binomial(n, m)
}
