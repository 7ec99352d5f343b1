//! Deterministic low-discrepancy sequences used for graph sampling.
//!
//! Every "pseudo-random" choice in the planner is index-based, so a seed is
//! nothing more than an offset into these sequences.

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    debug_assert!(base >= 2);
    let inv_base = 1.0 / base as f64;
    let mut inv = inv_base;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * inv;
        index /= base;
        inv *= inv_base;
    }
    value
}

/// 2-D Halton sequence with bases 2 and 3, starting at `start` (index 0 is the origin).
#[derive(Debug, Clone)]
pub struct Halton2 {
    next: u64,
}

impl Halton2 {
    pub fn new(start: u64) -> Self {
        Halton2 { next: start }
    }
}

impl Iterator for Halton2 {
    type Item = [f64; 2];

    fn next(&mut self) -> Option<[f64; 2]> {
        let i = self.next;
        self.next += 1;
        Some([radical_inverse(i, 2), radical_inverse(i, 3)])
    }
}

/// The `n`-point Hammersley set `(k/n, phi_2(k))`, visited as `k = (i + offset) mod n`
/// for `i = 1..=n`; with zero offset the point `k = 0` comes last.
pub fn hammersley(n: usize, offset: u64) -> Vec<[f64; 2]> {
    if n == 0 {
        return Vec::new();
    }
    (1..=n as u64)
        .map(|i| {
            let k = (i + offset) % n as u64;
            [k as f64 / n as f64, radical_inverse(k, 2)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_two_prefix() {
        let v: Vec<f64> = (1..=4).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, [0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn base_three_prefix() {
        assert_eq!(radical_inverse(1, 3), 1.0 / 3.0);
        assert_eq!(radical_inverse(3, 3), 1.0 / 9.0);
    }

    #[test]
    fn halton_starts_at_offset() {
        let pts: Vec<_> = Halton2::new(1).take(2).collect();
        assert_eq!(pts[0], [0.5, 1.0 / 3.0]);
        assert_eq!(pts[1], [0.25, 2.0 / 3.0]);
    }

    #[test]
    fn hammersley_four_points() {
        assert_eq!(
            hammersley(4, 0),
            vec![[0.25, 0.5], [0.5, 0.25], [0.75, 0.75], [0.0, 0.0]]
        );
        assert_eq!(hammersley(1, 0), vec![[0.0, 0.0]]);
    }
}
