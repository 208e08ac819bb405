/// Sign of a slot permutation acting on graded tensors.
///
/// `perm[k]` names the input slot that lands in output position `k`. Every pair
/// of input slots whose relative order is reversed contributes
/// `(-1)^(deg_a * deg_b)`.
pub fn koszul_sign(perm: &[usize], degs: &[usize]) -> i8 {
    assert_eq!(perm.len(), degs.len(), "one degree per slot");
    let mut pos = vec![0usize; perm.len()];
    for (k, &src) in perm.iter().enumerate() {
        pos[src] = k;
    }
    let mut odd_swaps = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if pos[a] > pos[b] && degs[a] % 2 == 1 && degs[b] % 2 == 1 {
                odd_swaps += 1;
            }
        }
    }
    if odd_swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Ordinary sign of a permutation.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_transpositions() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[2, 2]), 1);
    }

    #[test]
    fn three_cycle_is_product_of_adjacent_swaps() {
        // output (a1, a2, a0): a0 moves past a1 (deg 2) then past a2 (deg 1)
        let degs = [1, 2, 1];
        let by_hand = (-1i8).pow(2) * (-1i8).pow(1);
        assert_eq!(koszul_sign(&[1, 2, 0], &degs), by_hand);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}
