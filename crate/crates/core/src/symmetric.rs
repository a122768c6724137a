//! Symmetric tensor-power structure of the four-component spinor space.
//!
//! A rank-`two_s` symmetric tensor over a 4-dimensional single-particle
//! space is spanned by multisets of component labels. The basis is held
//! sparsely: each multiset contributes one unit vector supported on all
//! distinct arrangements of its labels, weighted `1/sqrt(multiplicity)`.
//! Components split by how many auxiliary (lower-pair) labels they carry:
//! none, exactly one, or at least two. That split is what the reduction
//! count in [`crate::bw`] relies on.

use alloc::vec;
use alloc::vec::Vec;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::spinor::SpinorError;

/// Dimension of the rank-`two_s` symmetric power of a 4-dimensional space:
/// `C(two_s + 3, 3)`.
pub fn symmetric_dim(two_s: u32) -> usize {
    let n = two_s as usize;
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// One orthonormal symmetric basis vector, sparse over product-space
/// indices. `support` pairs a flat index (base-4 digits, first slot most
/// significant) with a coefficient; all coefficients equal
/// `1/sqrt(len(support))`.
#[derive(Debug, Clone)]
pub struct SymVector {
    pub counts: [u32; 4],
    pub support: Vec<usize>,
    pub coeff: f64,
}

impl SymVector {
    /// Number of labels from the auxiliary lower pair (components 2 and 3).
    pub fn lower_count(&self) -> u32 {
        self.counts[2] + self.counts[3]
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    pub two_s: u32,
    pub vectors: Vec<SymVector>,
}

impl SymmetricBasis {
    /// Enumerates all component multisets of size `two_s`. Supported up to
    /// `two_s = 8`; the product space has side `4^two_s`.
    pub fn build(two_s: u32) -> Result<SymmetricBasis, SpinorError> {
        if two_s < 1 {
            return Err(SpinorError::BadSpin { two_s });
        }
        if two_s > 8 {
            return Err(SpinorError::RankTooLarge { two_s });
        }
        let n = two_s;
        let mut vectors = Vec::with_capacity(symmetric_dim(two_s));
        for n0 in 0..=n {
            for n1 in 0..=(n - n0) {
                for n2 in 0..=(n - n0 - n1) {
                    let n3 = n - n0 - n1 - n2;
                    let counts = [n0, n1, n2, n3];
                    let support = arrangements(counts, n as usize);
                    let coeff = 1.0 / (support.len() as f64).sqrt();
                    vectors.push(SymVector {
                        counts,
                        support,
                        coeff,
                    });
                }
            }
        }
        debug_assert_eq!(vectors.len(), symmetric_dim(two_s));
        Ok(SymmetricBasis { two_s, vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn product_dim(&self) -> usize {
        1usize << (2 * self.two_s)
    }

    /// Counts of (no lower label, exactly one, two or more) basis vectors.
    pub fn sector_counts(&self) -> (usize, usize, usize) {
        let mut none = 0;
        let mut one = 0;
        let mut more = 0;
        for v in &self.vectors {
            match v.lower_count() {
                0 => none += 1,
                1 => one += 1,
                _ => more += 1,
            }
        }
        (none, one, more)
    }

    /// Projects a dense product-space vector onto the basis.
    pub fn project(&self, dense: &[f64]) -> Vec<f64> {
        assert_eq!(dense.len(), self.product_dim());
        self.vectors
            .iter()
            .map(|v| v.coeff * v.support.iter().map(|&i| dense[i]).sum::<f64>())
            .collect()
    }

    /// Expands basis coefficients back to the dense product space.
    pub fn expand(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.dim());
        let mut dense = vec![0.0; self.product_dim()];
        for (v, &c) in self.vectors.iter().zip(coeffs) {
            for &i in &v.support {
                dense[i] += v.coeff * c;
            }
        }
        dense
    }
}

/// All distinct slot arrangements of the multiset `counts`, as flat base-4
/// indices with the first slot most significant.
fn arrangements(counts: [u32; 4], slots: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut remaining = counts;
    recurse(&mut remaining, slots, 0, &mut out);
    out
}

fn recurse(remaining: &mut [u32; 4], slots_left: usize, prefix: usize, out: &mut Vec<usize>) {
    if slots_left == 0 {
        out.push(prefix);
        return;
    }
    for label in 0..4 {
        if remaining[label] == 0 {
            continue;
        }
        remaining[label] -= 1;
        recurse(remaining, slots_left - 1, prefix * 4 + label, out);
        remaining[label] += 1;
    }
}

/// Splits a flat product index into slot labels, first slot first.
pub fn split_index(mut index: usize, slots: usize) -> Vec<usize> {
    let mut labels = vec![0usize; slots];
    for slot in (0..slots).rev() {
        labels[slot] = index & 3;
        index >>= 2;
    }
    labels
}

/// Dense symmetrizer over the product space: the average of all slot
/// permutations. Row-major `4^two_s` square, so the rank is held to
/// `two_s <= 5`.
pub fn symmetrizer_dense(two_s: u32) -> Result<Vec<f64>, SpinorError> {
    if two_s < 1 {
        return Err(SpinorError::BadSpin { two_s });
    }
    if two_s > 5 {
        return Err(SpinorError::RankTooLarge { two_s });
    }
    let slots = two_s as usize;
    let dim = 1usize << (2 * slots);
    let perms = permutations(slots);
    let weight = 1.0 / (perms.len() as f64);
    let mut s = vec![0.0; dim * dim];
    for col in 0..dim {
        let labels = split_index(col, slots);
        for perm in &perms {
            let mut row = 0usize;
            for slot in 0..slots {
                row = row * 4 + labels[perm[slot]];
            }
            s[row * dim + col] += weight;
        }
    }
    Ok(s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
