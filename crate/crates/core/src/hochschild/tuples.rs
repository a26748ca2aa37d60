/// `d^n`.
pub fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Lexicographic index of a tuple over `{0..d}`, first entry most significant.
pub fn tuple_index(t: &[usize], d: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * d + x)
}

pub fn tuple_of(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

/// `mask[t]` is true when tuple `t` has some entry equal to `x`.
pub fn tuples_with_slot(d: usize, n: usize, x: usize) -> Vec<bool> {
    (0..pow(d, n)).map(|t| tuple_of(t, d, n).contains(&x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for t in 0..27 {
            assert_eq!(tuple_index(&tuple_of(t, 3, 3), 3), t);
        }
        assert_eq!(tuple_of(5, 2, 3), vec![1, 0, 1]);
        assert_eq!(tuple_index(&[], 4), 0);
    }
}
