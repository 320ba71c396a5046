//! Lyndon words over `{0, ..., d-1}` and their standard factorizations.

/// All Lyndon words of length `1..=n`, ordered by length and then lexicographically.
pub fn lyndon_words(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d == 0 || n == 0 {
        return out;
    }
    // Duval's generation of Lyndon words of length <= n in lexicographic order
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(d - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(c) => *c += 1,
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn is_lyndon(w: &[usize]) -> bool {
    // strictly smaller than each of its proper suffixes
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > *w)
}

/// Splits a Lyndon word of length at least two as `uv` with `v` the longest
/// proper Lyndon suffix; both parts are Lyndon.
pub fn standard_factorization(w: &[usize]) -> (usize, usize) {
    assert!(w.len() >= 2);
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a single letter is Lyndon");
    (split, w.len() - split)
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of Lyndon words of length `w` over `d` letters.
pub fn witt_number(d: usize, w: usize) -> usize {
    assert!(w >= 1);
    let total: i128 = (1..=w)
        .filter(|e| w.is_multiple_of(*e))
        .map(|e| mobius(e) as i128 * (d as i128).pow((w / e) as u32))
        .sum();
    (total / w as i128) as usize
}
