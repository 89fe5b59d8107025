/// Length of the longest strictly increasing subsequence, by patience
/// sorting: `tails[k]` is the smallest possible tail of an increasing
/// subsequence of length `k + 1`.
pub fn lis_length<T: Ord>(seq: &[T]) -> usize {
    let mut tails: Vec<&T> = Vec::with_capacity(seq.len());
    for x in seq {
        let pos = tails.partition_point(|t| *t < x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Enumerates all 2^n subsequences.
    fn brute_force(seq: &[u32]) -> usize {
        let n = seq.len();
        (0u32..1 << n)
            .filter_map(|mask| {
                let picked: Vec<u32> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| seq[i])
                    .collect();
                picked
                    .windows(2)
                    .all(|w| w[0] < w[1])
                    .then_some(picked.len())
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn worked_permutation() {
        assert_eq!(lis_length(&[1, 3, 4, 5, 6, 7, 8, 9, 2]), 8);
        assert_eq!(lis_length(&[2, 9, 8, 7, 6, 5, 4, 3, 1]), 2);
    }

    #[test]
    fn identity_and_empty() {
        let id: Vec<u32> = (1..=50).collect();
        assert_eq!(lis_length(&id), 50);
        assert_eq!(lis_length::<u32>(&[]), 0);
    }

    #[test]
    fn strictness() {
        assert_eq!(lis_length(&[2, 2, 2]), 1);
        assert_eq!(lis_length(&[1, 2, 2, 3]), 3);
    }

    proptest! {
        #[test]
        fn matches_enumeration(perm in Just((1u32..=7).collect::<Vec<_>>()).prop_shuffle(), len in 0usize..=7) {
            let s = &perm[..len];
            prop_assert_eq!(lis_length(s), brute_force(s));
        }
    }
}
