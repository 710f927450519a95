//! Burrows-Wheeler transform over cyclic rotations.
//!
//! The forward transform sorts all `n` cyclic rotations of the input and
//! emits the last column of the sorted rotation matrix together with the rank
//! of the unrotated text (the primary index). No sentinel symbol is appended;
//! ties between equal rotations of periodic inputs are broken by ascending
//! start position. The inverse walks the LF-mapping in `O(n)` time.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// One transformed block: a permutation of the input plus the rank of the
/// unrotated text among the sorted rotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtBlock {
    pub data: Vec<u8>,
    pub primary_index: usize,
}

/// Result of applying the transform `depth` times in sequence.
///
/// `indices` holds one primary index per application, in application order;
/// depth 0 leaves `data` equal to the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedBwt {
    pub data: Vec<u8>,
    pub indices: Vec<usize>,
}

impl IteratedBwt {
    pub fn depth(&self) -> usize {
        self.indices.len()
    }
}

/// Sorts all cyclic rotations of `text` and returns their start positions in
/// lexicographic order. Equal rotations (periodic inputs) are ordered by
/// ascending start position.
///
/// Prefix doubling with counting sort: `O(n log n)` time, `O(n)` space.
pub fn sort_rotations(text: &[u8]) -> Result<Vec<u32>> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    if text.len() > u32::MAX as usize {
        return Err(Error::InvalidParameter("text exceeds u32 index range"));
    }
    let n = text.len();

    // Initial order and classes from single bytes, via counting sort.
    let mut sa = vec![0u32; n];
    let mut cls = vec![0u32; n];
    {
        let mut cnt = [0usize; 256];
        for &b in text {
            cnt[b as usize] += 1;
        }
        let mut start = [0usize; 256];
        let mut acc = 0;
        for b in 0..256 {
            start[b] = acc;
            acc += cnt[b];
        }
        for (i, &b) in text.iter().enumerate() {
            sa[start[b as usize]] = i as u32;
            start[b as usize] += 1;
        }
        let mut c = 0u32;
        cls[sa[0] as usize] = 0;
        for i in 1..n {
            if text[sa[i] as usize] != text[sa[i - 1] as usize] {
                c += 1;
            }
            cls[sa[i] as usize] = c;
        }
    }

    let mut num_classes = cls[sa[n - 1] as usize] + 1;
    let mut order2 = vec![0u32; n];
    let mut cls_new = vec![0u32; n];
    let mut h: usize = 1;

    while (num_classes as usize) < n && h < n {
        // Rotations sorted by their second half: shift the current order
        // left by h (mod n). The result is already sorted by the key at
        // offset h, so one stable counting sort by the first-half class
        // yields the order for length 2h.
        for (dst, &s) in order2.iter_mut().zip(sa.iter()) {
            let s = s as usize;
            *dst = if s >= h { (s - h) as u32 } else { (s + n - h) as u32 };
        }
        let mut cnt = vec![0u32; num_classes as usize];
        for &x in order2.iter() {
            cnt[cls[x as usize] as usize] += 1;
        }
        let mut acc = 0u32;
        for c in cnt.iter_mut() {
            let v = *c;
            *c = acc;
            acc += v;
        }
        for &x in order2.iter() {
            let c = cls[x as usize] as usize;
            sa[cnt[c] as usize] = x;
            cnt[c] += 1;
        }

        // New classes from (first-half class, second-half class) pairs.
        let second = |i: usize| -> u32 {
            let j = if i + h < n { i + h } else { i + h - n };
            cls[j]
        };
        cls_new[sa[0] as usize] = 0;
        let mut c = 0u32;
        for i in 1..n {
            let cur = sa[i] as usize;
            let prev = sa[i - 1] as usize;
            if cls[cur] != cls[prev] || second(cur) != second(prev) {
                c += 1;
            }
            cls_new[cur] = c;
        }
        core::mem::swap(&mut cls, &mut cls_new);
        num_classes = c + 1;
        h <<= 1;
    }

    if (num_classes as usize) < n {
        // Periodic input: equal rotations share a class. Order them by
        // ascending start position.
        sa.sort_unstable_by_key(|&i| (cls[i as usize], i));
    }

    Ok(sa)
}

/// Forward transform: last column of the sorted rotation matrix plus the rank
/// of the unrotated text.
pub fn forward(text: &[u8]) -> Result<BwtBlock> {
    let order = sort_rotations(text)?;
    let n = text.len();
    let mut data = Vec::with_capacity(n);
    let mut primary_index = 0;
    for (rank, &start) in order.iter().enumerate() {
        let start = start as usize;
        if start == 0 {
            primary_index = rank;
        }
        data.push(text[(start + n - 1) % n]);
    }
    Ok(BwtBlock { data, primary_index })
}

/// Inverse transform via LF-mapping: `O(n)` time, `O(n + 256)` space.
pub fn inverse(block: &BwtBlock) -> Result<Vec<u8>> {
    inverse_raw(&block.data, block.primary_index)
}

fn inverse_raw(data: &[u8], primary_index: usize) -> Result<Vec<u8>> {
    if data.is_empty() {
        return Err(Error::EmptyText);
    }
    let n = data.len();
    if primary_index >= n {
        return Err(Error::CorruptBlock);
    }

    // c_table[b] = number of symbols smaller than b; occ[i] = rank of data[i]
    // among equal symbols in data[0..i].
    let mut counts = [0usize; 256];
    for &b in data {
        counts[b as usize] += 1;
    }
    let mut c_table = [0usize; 256];
    let mut acc = 0;
    for b in 0..256 {
        c_table[b] = acc;
        acc += counts[b];
    }
    let mut running = [0usize; 256];
    let mut occ = Vec::with_capacity(n);
    for &b in data {
        occ.push(running[b as usize]);
        running[b as usize] += 1;
    }

    // Row `primary_index` is the unrotated text; LF steps move one symbol
    // left, so the text is recovered back to front.
    let mut out = vec![0u8; n];
    let mut row = primary_index;
    for slot in out.iter_mut().rev() {
        *slot = data[row];
        row = c_table[data[row] as usize] + occ[row];
    }
    Ok(out)
}

/// Applies the forward transform `depth` times, collecting the primary index
/// of each application.
pub fn iterate(text: &[u8], depth: usize) -> Result<IteratedBwt> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut data = text.to_vec();
    let mut indices = Vec::with_capacity(depth);
    for _ in 0..depth {
        let block = forward(&data)?;
        data = block.data;
        indices.push(block.primary_index);
    }
    Ok(IteratedBwt { data, indices })
}

/// Inverts [`iterate`] by applying the inverse transform with the recorded
/// indices in reverse order.
pub fn inverse_iterated(it: &IteratedBwt) -> Result<Vec<u8>> {
    let mut data = it.data.clone();
    for &index in it.indices.iter().rev() {
        data = inverse_raw(&data, index)?;
    }
    Ok(data)
}

/// Splits `text` into contiguous chunks of `block_size` (the last may be
/// shorter) and transforms each independently.
pub fn blocks(text: &[u8], block_size: usize) -> Result<Vec<BwtBlock>> {
    if block_size == 0 {
        return Err(Error::InvalidParameter("block size must be at least 1"));
    }
    text.chunks(block_size).map(forward).collect()
}

/// Concatenates the inverses of independently transformed blocks.
pub fn inverse_blocks(blocks: &[BwtBlock]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(blocks.iter().map(|b| b.data.len()).sum());
    for block in blocks {
        out.extend_from_slice(&inverse(block)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Explicit rotation-matrix sort; the production path must agree with it.
    fn naive_order(text: &[u8]) -> Vec<u32> {
        let n = text.len();
        let mut idx: Vec<u32> = (0..n as u32).collect();
        let cmp_rot = |a: u32, b: u32| {
            let (a, b) = (a as usize, b as usize);
            for j in 0..n {
                let x = text[(a + j) % n];
                let y = text[(b + j) % n];
                if x != y {
                    return x.cmp(&y);
                }
            }
            core::cmp::Ordering::Equal
        };
        idx.sort_by(|&a, &b| cmp_rot(a, b).then(a.cmp(&b)));
        idx
    }

    fn running_example() -> Vec<u8> {
        let mut t = Vec::new();
        for _ in 0..7 {
            t.extend_from_slice(b"at");
        }
        for _ in 0..11 {
            t.extend_from_slice(b"cg");
        }
        for _ in 0..7 {
            t.extend_from_slice(b"at");
        }
        t
    }

    #[test]
    fn banana_order() {
        assert_eq!(sort_rotations(b"banana").unwrap(), vec![5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn single_symbol_order() {
        assert_eq!(sort_rotations(b"a").unwrap(), vec![0]);
    }

    #[test]
    fn periodic_tie_break_ascending() {
        assert_eq!(sort_rotations(b"aaaa").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(sort_rotations(b"abab").unwrap(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn empty_text_rejected() {
        assert_eq!(sort_rotations(b"").unwrap_err(), Error::EmptyText);
        assert_eq!(forward(b"").unwrap_err(), Error::EmptyText);
        assert_eq!(iterate(b"", 0).unwrap_err(), Error::EmptyText);
    }

    #[test]
    fn banana_last_column() {
        let block = forward(b"banana").unwrap();
        assert_eq!(block.data, b"nnbaaa");
        assert_eq!(block.primary_index, 3);
        assert_eq!(inverse(&block).unwrap(), b"banana");
    }

    #[test]
    fn single_byte() {
        let block = forward(b"a").unwrap();
        assert_eq!(block.data, b"a");
        assert_eq!(block.primary_index, 0);
        assert_eq!(inverse(&block).unwrap(), b"a");
    }

    #[test]
    fn running_example_transform() {
        // Derived from the naive rotation-sort oracle on the 50-char string.
        let t = running_example();
        let block = forward(&t).unwrap();
        let mut expected = Vec::new();
        expected.push(b'g');
        expected.extend(core::iter::repeat(b't').take(13));
        expected.extend(core::iter::repeat(b'g').take(10));
        expected.push(b't');
        expected.extend(core::iter::repeat(b'c').take(11));
        expected.extend(core::iter::repeat(b'a').take(14));
        assert_eq!(block.data, expected);
        assert_eq!(block.primary_index, 7);

        let oracle = naive_order(&t);
        assert_eq!(sort_rotations(&t).unwrap(), oracle);
        assert_eq!(inverse(&block).unwrap(), t);
    }

    #[test]
    fn bad_primary_index() {
        let block = BwtBlock { data: b"nnbaaa".to_vec(), primary_index: 6 };
        assert_eq!(inverse(&block).unwrap_err(), Error::CorruptBlock);
    }

    #[test]
    fn iterate_composes_forward() {
        let t = b"banana";
        let once = iterate(t, 1).unwrap();
        assert_eq!(once.data, forward(t).unwrap().data);
        assert_eq!(once.depth(), 1);

        let twice = iterate(t, 2).unwrap();
        assert_eq!(twice.data, forward(b"nnbaaa").unwrap().data);

        let zero = iterate(t, 0).unwrap();
        assert_eq!(zero.data, t);
        assert!(zero.indices.is_empty());
    }

    #[test]
    fn iterated_roundtrip() {
        for depth in 0..4 {
            let t = running_example();
            let it = iterate(&t, depth).unwrap();
            assert_eq!(inverse_iterated(&it).unwrap(), t);
        }
        let it = iterate(b"mississippi", 2).unwrap();
        assert_eq!(inverse_iterated(&it).unwrap(), b"mississippi");
    }

    #[test]
    fn block_partitioning() {
        let t = running_example();
        let one = blocks(&t, 50).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], forward(&t).unwrap());

        let three = blocks(&t, 20).unwrap();
        assert_eq!(three.iter().map(|b| b.data.len()).collect::<Vec<_>>(), vec![20, 20, 10]);
        assert_eq!(inverse_blocks(&three).unwrap(), t);

        assert!(matches!(blocks(&t, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn blocks_larger_than_text_match_single_transform() {
        let t = b"mississippi";
        assert_eq!(blocks(t, 64).unwrap(), vec![forward(t).unwrap()]);
    }

    #[test]
    fn block_roundtrip_10k() {
        // Deterministic pseudo-random 10 KB text.
        let mut x = 0x9E3779B97F4A7C15u64;
        let t: Vec<u8> = (0..10_240)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                (x >> 32) as u8
            })
            .collect();
        let bs = blocks(&t, 1024).unwrap();
        assert_eq!(bs.len(), 10);
        assert_eq!(inverse_blocks(&bs).unwrap(), t);
    }

    proptest! {
        #[test]
        fn roundtrip(t in proptest::collection::vec(any::<u8>(), 1..4096)) {
            let block = forward(&t).unwrap();
            prop_assert_eq!(inverse(&block).unwrap(), t);
        }

        #[test]
        fn output_is_permutation(t in proptest::collection::vec(any::<u8>(), 1..1024)) {
            let block = forward(&t).unwrap();
            let mut a = block.data.clone();
            let mut b = t.clone();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn matches_naive_oracle(t in proptest::collection::vec(any::<u8>(), 1..256)) {
            prop_assert_eq!(sort_rotations(&t).unwrap(), naive_order(&t));
        }

        #[test]
        fn low_entropy_matches_oracle(t in proptest::collection::vec(0u8..3, 1..256)) {
            // Small alphabets drive long equal runs and periodic inputs.
            prop_assert_eq!(sort_rotations(&t).unwrap(), naive_order(&t));
        }

        #[test]
        fn block_roundtrip(t in proptest::collection::vec(any::<u8>(), 1..2048), bs in 1usize..512) {
            let b = blocks(&t, bs).unwrap();
            prop_assert_eq!(inverse_blocks(&b).unwrap(), t);
        }
    }
}
