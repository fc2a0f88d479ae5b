//! Suffix array by prefix doubling with counting-sort passes, and the
//! Kasai LCP array.

/// Suffix array of `s`: the start positions of all suffixes in
/// lexicographic order (a proper prefix sorts first).
pub fn suffix_array(s: &[u32]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(n < u32::MAX as usize, "sequence too long for a u32 suffix array");
    let mut symbols: Vec<u32> = s.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let mut rank: Vec<u32> = s.iter().map(|x| symbols.binary_search(x).unwrap() as u32).collect();
    let mut classes = symbols.len();

    let mut sa: Vec<u32> = vec![0; n];
    let mut count = vec![0usize; classes + 1];
    for &r in &rank {
        count[r as usize + 1] += 1;
    }
    for i in 1..count.len() {
        count[i] += count[i - 1];
    }
    for (i, &r) in rank.iter().enumerate() {
        sa[count[r as usize]] = i as u32;
        count[r as usize] += 1;
    }

    let mut tmp = vec![0u32; n];
    let mut second = vec![0u32; n];
    let mut k = 1usize;
    while classes < n {
        // order by the second key: suffixes without one first
        let mut j = 0;
        for i in n.saturating_sub(k)..n {
            second[j] = i as u32;
            j += 1;
        }
        for &p in &sa {
            if p as usize >= k {
                second[j] = p - k as u32;
                j += 1;
            }
        }
        // stable counting sort by the first key
        let mut count = vec![0usize; classes + 1];
        for &r in &rank {
            count[r as usize + 1] += 1;
        }
        for i in 1..count.len() {
            count[i] += count[i - 1];
        }
        for &p in &second {
            let r = rank[p as usize] as usize;
            sa[count[r]] = p;
            count[r] += 1;
        }
        let key2 = |rank: &[u32], i: usize| if i + k < n { rank[i + k] as i64 } else { -1 };
        tmp[sa[0] as usize] = 0;
        for j in 1..n {
            let (a, b) = (sa[j - 1] as usize, sa[j] as usize);
            let same = rank[a] == rank[b] && key2(&rank, a) == key2(&rank, b);
            tmp[b] = tmp[a] + (!same) as u32;
        }
        std::mem::swap(&mut rank, &mut tmp);
        classes = rank[sa[n - 1] as usize] as usize + 1;
        k *= 2;
    }
    sa
}

/// `lcp[r]` is the longest common prefix of suffixes `sa[r−1]` and `sa[r]`;
/// `lcp[0] = 0`.
pub fn lcp_array(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Number of distinct factors of every length `0..=n` of `s`.
pub fn distinct_factor_counts(s: &[u32]) -> Vec<u64> {
    let n = s.len();
    let sa = suffix_array(s);
    let lcp = lcp_array(s, &sa);
    // hist[l] = #{r : lcp[r] = l}; p(N) = (n − N + 1) − #{r : lcp[r] ≥ N}
    let mut hist = vec![0u64; n + 2];
    for &l in &lcp[1.min(n)..] {
        hist[l as usize] += 1;
    }
    let mut at_least = vec![0u64; n + 2];
    for l in (0..=n).rev() {
        at_least[l] = at_least[l + 1] + hist[l];
    }
    (0..=n).map(|len| if len == 0 { 1 } else { (n - len + 1) as u64 - at_least[len] }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn naive_sa(s: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = (0..s.len() as u32).collect();
        v.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        v
    }

    #[test]
    fn banana() {
        let s: Vec<u32> = "banana".bytes().map(u32::from).collect();
        assert_eq!(suffix_array(&s), vec![5, 3, 1, 0, 4, 2]);
        assert_eq!(lcp_array(&s, &suffix_array(&s)), vec![0, 1, 3, 0, 0, 2]);
        assert_eq!(distinct_factor_counts(&s), vec![1, 3, 3, 3, 3, 2, 1]);
    }

    proptest! {
        #[test]
        fn matches_naive(s in proptest::collection::vec(0u32..3, 0..120)) {
            prop_assert_eq!(suffix_array(&s), naive_sa(&s));
            let counts = distinct_factor_counts(&s);
            for len in 1..=s.len() {
                let set: HashSet<&[u32]> = s.windows(len).collect();
                prop_assert_eq!(counts[len], set.len() as u64);
            }
        }
    }
}
