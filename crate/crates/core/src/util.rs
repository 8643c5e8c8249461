//! Small combinatorial helpers shared across modules.

/// Table of `ln(k!)` for `k = 0..=n`.
pub(crate) fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Binomial probability mass function over `0..=n` for success probability
/// `p`, evaluated in log space so that large `n` does not under/overflow.
pub(crate) fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let lf = ln_factorial_table(n);
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=n)
        .map(|k| (lf[n] - lf[k] - lf[n - k] + k as f64 * lp + (n - k) as f64 * lq).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(20, 10), 184_756.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert!((ln_factorial_table(5)[5] - 120f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(n, p) in &[(10, 0.3), (1000, 0.5), (5000, 0.01), (7, 0.0), (7, 1.0)] {
            let s: f64 = binomial_pmf(n, p).iter().sum();
            assert!((s - 1.0).abs() < 1e-10, "n={n} p={p} sum={s}");
        }
        let pmf = binomial_pmf(4, 0.5);
        assert!((pmf[2] - 6.0 / 16.0).abs() < 1e-15);
    }
}
