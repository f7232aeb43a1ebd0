use super::IdealData;

/// Krull dimension of `R / ideal`, read off the lead-term ideal of a
/// Gröbner basis as the largest set of variables containing the support of
/// no lead monomial. Returns -1 for the unit ideal.
pub fn quotient_dimension(ideal: &IdealData) -> i32 {
    let d = ideal.ring().nvars();
    if ideal.is_zero() {
        return d as i32;
    }
    let gb = ideal.groebner_basis();
    let leads: Vec<u64> = gb
        .lead_monomials()
        .into_iter()
        .map(|(_, m)| m.support().fold(0u64, |acc, v| acc | 1 << v))
        .collect();
    if leads.contains(&0) {
        return -1;
    }
    assert!(d < 64, "dimension search supports fewer than 64 variables");
    let mut best = 0;
    for set in 0u64..(1u64 << d) {
        let size = set.count_ones();
        if size > best && leads.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    best as i32
}
