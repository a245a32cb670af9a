/// Mean with Neumaier-compensated summation over the values in ascending
/// order, so the result does not depend on input order. Empty input gives 0.
pub fn stable_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in sorted {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    (sum + comp) / values.len() as f64
}

/// Percentile by linear interpolation between closest ranks: rank
/// `p/100 * (n-1)` over the sorted sample (the numpy default).
pub fn percentile_linear(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of an empty sample");
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}
