//! Strictly increasing index sets, stored as bitmasks.

use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn from_indices(idx: &[usize]) -> Option<Blade> {
        let mut b = 0u32;
        for &i in idx {
            if i >= 32 || b & (1 << i) != 0 {
                return None;
            }
            b |= 1 << i;
        }
        Some(Blade(b))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Blade {
        Blade(self.0 | (1 << i))
    }

    pub fn with_all(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    /// Number of members smaller than `i`.
    pub fn position(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    /// Sign of `e_a ∧ e_b` relative to the sorted blade `a ∪ b`, or `None`
    /// when the sets overlap.
    pub fn wedge_sign(a: Blade, b: Blade) -> Option<i32> {
        if a.0 & b.0 != 0 {
            return None;
        }
        let mut swaps = 0usize;
        for j in b.indices() {
            // members of a larger than j must move past e_j
            swaps += (a.0 >> (j + 1)).count_ones() as usize;
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    /// All blades of size `k` inside `{0..n}`, in increasing bitmask order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<Blade> {
        (0u32..(1u32 << n)).filter(|b| b.count_ones() as usize == k).map(Blade).collect()
    }

    /// Maps index `i` of this blade through `f` (which must be strictly
    /// increasing on the members).
    pub fn map(self, f: impl Fn(usize) -> usize) -> Blade {
        Blade(self.indices().fold(0u32, |acc, i| acc | (1 << f(i))))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.indices()).finish()
    }
}

/// Sign of a permutation given as a sequence of distinct integers.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}
