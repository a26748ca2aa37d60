//! Permutations of `{0..n}` as image vectors: `p[i]` is the image of `i`.

/// All permutations of `{0..n}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Parity from the cycle decomposition: `true` for odd permutations.
pub fn is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

/// `+1` or `-1`.
pub fn sign(p: &[usize]) -> i64 {
    if is_odd(p) {
        -1
    } else {
        1
    }
}

/// `(p ∘ q)(i) = p[q[i]]`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// Position of a permutation in [`permutations`] order.
pub fn rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// `τ s` for a tuple `τ` seen as a map on positions: `(τ s)_i = τ_{s(i)}`.
pub fn permute_tuple<T: Clone>(t: &[T], s: &[usize]) -> Vec<T> {
    s.iter().map(|&i| t[i].clone()).collect()
}

/// Sorts a tuple of distinct entries, returning the sorted tuple and the sign
/// of the sorting permutation; `None` when two entries coincide.
pub fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by_key(|&i| t[i]);
    let sorted: Vec<usize> = idx.iter().map(|&i| t[i]).collect();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sign(&idx)))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_and_rank() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        for (i, p) in ps.iter().enumerate() {
            assert_eq!(rank(p), i);
        }
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn signs() {
        assert_eq!(sign(&[0, 1, 2]), 1);
        assert_eq!(sign(&[1, 0, 2]), -1);
        assert_eq!(sign(&[1, 2, 0]), 1);
        for p in permutations(4) {
            for q in permutations(4) {
                assert_eq!(sign(&compose(&p, &q)), sign(&p) * sign(&q));
            }
            assert_eq!(compose(&p, &inverse(&p)), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn sorting() {
        assert_eq!(sort_with_sign(&[3, 1, 2]), Some((vec![1, 2, 3], 1)));
        assert_eq!(sort_with_sign(&[2, 1]), Some((vec![1, 2], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}
