use std::collections::BTreeMap;

/// Sparse term-weight vector.
pub type TermVector = BTreeMap<String, f64>;

/// Cosine similarity of two non-negative sparse vectors, 0 when either is
/// zero. Clamped to `[0, 1]` to absorb rounding.
pub fn cosine(a: &TermVector, b: &TermVector) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .iter()
        .filter_map(|(t, w)| large.get(t).map(|v| w * v))
        .sum();
    if dot == 0.0 {
        return 0.0;
    }
    let na = a.values().map(|w| w * w).sum::<f64>().sqrt();
    let nb = b.values().map(|w| w * w).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(&str, f64)]) -> TermVector {
        pairs.iter().map(|(t, w)| (t.to_string(), *w)).collect()
    }

    #[test]
    fn parallel_orthogonal_and_zero() {
        assert_eq!(cosine(&v(&[("a", 1.0)]), &v(&[("a", 3.0)])), 1.0);
        assert_eq!(cosine(&v(&[("a", 1.0)]), &v(&[("b", 3.0)])), 0.0);
        assert_eq!(cosine(&v(&[]), &v(&[("b", 3.0)])), 0.0);
    }

    #[test]
    fn hand_computed() {
        // (1,1) . (1,0) / (sqrt2 * 1)
        let c = cosine(&v(&[("a", 1.0), ("b", 1.0)]), &v(&[("a", 2.0)]));
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
