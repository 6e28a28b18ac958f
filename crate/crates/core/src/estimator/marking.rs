//! Dörfler (bulk) marking.

/// Smallest set of elements, taken greedily by decreasing `eta_T^2` (ties by
/// lower index), whose squared indicators sum to at least `theta^2` times
/// the total.
pub fn mark_dorfler(eta_sq: &[f64], theta: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eta_sq.len()).collect();
    order.sort_by(|&a, &b| eta_sq[b].total_cmp(&eta_sq[a]).then(a.cmp(&b)));
    let total: f64 = order.iter().map(|&i| eta_sq[i]).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    let target = theta * theta * total;
    let mut acc = 0.0;
    let mut marked = Vec::new();
    for i in order {
        if acc >= target {
            break;
        }
        acc += eta_sq[i];
        marked.push(i);
    }
    marked
}
