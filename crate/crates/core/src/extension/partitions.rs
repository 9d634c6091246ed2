use alloc::vec::Vec;

use super::shape::{permute_mask, ExtensionShape};

/// A bipartition of the extension factors, stored as the bit mask of the
/// transposed side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(pub u32);

impl Partition {
    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn factors(self) -> Vec<usize> {
        (0..32).filter(|k| self.0 & (1 << k) != 0).collect()
    }
}

/// Representatives of the bipartitions that are inequivalent under copy
/// permutations and complementation, in increasing mask order.
pub fn partition_classes(shape: &ExtensionShape) -> Vec<Partition> {
    let k = shape.factors();
    let full = (1u32 << k) - 1;
    let perms = crate::tensor::group_permutations(&shape.hilbert_shape(), &shape.group_a(), &shape.group_b())
        .expect("valid groups");
    let mut reps: Vec<u32> = (1..full)
        .map(|mask| {
            perms
                .iter()
                .flat_map(|p| {
                    let image = permute_mask(mask, p);
                    [image, full & !image]
                })
                .min()
                .unwrap()
        })
        .collect();
    reps.sort_unstable();
    reps.dedup();
    reps.into_iter().map(Partition).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit_count(s_a: usize, s_b: usize) -> usize {
        partition_classes(&ExtensionShape::new(3, 3, s_a, s_b).unwrap()).len()
    }

    #[test]
    fn known_class_counts() {
        assert_eq!(orbit_count(1, 1), 1);
        assert_eq!(orbit_count(2, 1), 2);
        assert_eq!(orbit_count(1, 2), 2);
        let classes = partition_classes(&ExtensionShape::new(3, 3, 2, 1).unwrap());
        // {A₁} | {A₂, B} and {A₁, A₂} | {B}
        assert_eq!(classes, [Partition(0b001), Partition(0b011)]);
    }

    #[test]
    fn counts_match_brute_force_orbits() {
        // Orbits of unordered bipartitions {S, S̄} under S_{s_a} × S_{s_b} are fixed by
        // the pair (|S ∩ A|, |S ∩ B|) up to complementation.
        for (s_a, s_b) in [(1, 1), (2, 1), (1, 3), (2, 2), (3, 1), (2, 3)] {
            let mut seen = Vec::new();
            for i in 0..=s_a {
                for j in 0..=s_b {
                    if (i, j) == (0, 0) || (i, j) == (s_a, s_b) {
                        continue;
                    }
                    let key = core::cmp::min((i, j), (s_a - i, s_b - j));
                    if !seen.contains(&key) {
                        seen.push(key);
                    }
                }
            }
            assert_eq!(orbit_count(s_a, s_b), seen.len(), "shape ({s_a},{s_b})");
        }
    }
}
