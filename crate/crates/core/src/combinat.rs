//! Small enumeration helpers: compositions and set partitions.

/// All compositions of `n` as lists of part sizes, in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Cut points `0 = a_0 < a_1 < ... < a_m = n` of every composition of `n`.
pub fn cut_points(n: usize) -> Vec<Vec<usize>> {
    compositions(n)
        .into_iter()
        .map(|parts| {
            let mut acc = vec![0];
            for p in parts {
                acc.push(acc.last().unwrap() + p);
            }
            acc
        })
        .collect()
}

/// All set partitions of the items `0..n`, each block sorted and blocks
/// ordered by their smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    rec(0, n, &mut blocks, &mut out);
    out
}

/// Set partitions of the bitmask `set`, blocks as bitmasks ordered by their
/// lowest bit.
pub fn set_partitions_of_mask(set: u32) -> Vec<Vec<u32>> {
    let items: Vec<u32> = (0..32).filter(|b| set >> b & 1 == 1).collect();
    set_partitions(items.len())
        .into_iter()
        .map(|p| p.into_iter().map(|blk| blk.into_iter().fold(0u32, |m, i| m | 1 << items[i])).collect())
        .collect()
}

/// Bell numbers by the triangle recurrence.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}
