//! Independent brute-force oracles shared by integration tests.
#![allow(dead_code)]

use xclab::bounds::Rectangle;
use xclab::BooleanMatrix;

/// Maximal rectangles by enumerating every row subset.
pub fn oracle_maximal(b: &BooleanMatrix) -> Vec<Rectangle> {
    let (m, n) = (b.rows(), b.cols());
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let rows: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let cols: Vec<usize> = (0..n).filter(|&j| rows.iter().all(|&i| b.get(i, j))).collect();
        if cols.is_empty() {
            continue;
        }
        let closure: Vec<usize> = (0..m).filter(|&i| cols.iter().all(|&j| b.get(i, j))).collect();
        if closure == rows {
            out.push(Rectangle { row_set: rows, col_set: cols });
        }
    }
    out.sort();
    out
}

type Cells = [u64; 4];

fn set(c: &mut Cells, k: usize) {
    c[k / 64] |= 1 << (k % 64);
}

fn or(a: Cells, b: Cells) -> Cells {
    [a[0] | b[0], a[1] | b[1], a[2] | b[2], a[3] | b[3]]
}

fn cells(b: &BooleanMatrix, r: &Rectangle) -> Cells {
    let mut c = [0; 4];
    for &i in &r.row_set {
        for &j in &r.col_set {
            set(&mut c, i * b.cols() + j);
        }
    }
    c
}

fn target(b: &BooleanMatrix) -> Cells {
    let mut c = [0; 4];
    for (i, j) in b.ones() {
        set(&mut c, i * b.cols() + j);
    }
    c
}


/// Whether some subset of at most `k` rectangles covers all ones, by plain
/// subset enumeration.
pub fn oracle_cover_exists(b: &BooleanMatrix, rects: &[Rectangle], k: usize) -> bool {
    let masks: Vec<Cells> = rects.iter().map(|r| cells(b, r)).collect();
    fn rec(masks: &[Cells], start: usize, left: usize, acc: Cells, target: Cells) -> bool {
        if acc == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..masks.len()).any(|k| rec(masks, k + 1, left - 1, or(acc, masks[k]), target))
    }
    rec(&masks, 0, k, [0; 4], target(b))
}

/// Iterative deepening that branches on the uncovered 1 with the fewest
/// covering rectangles, pruned only by counting uncovered cells.
pub fn oracle_cover_deepening(b: &BooleanMatrix, rects: &[Rectangle]) -> usize {
    let masks: Vec<Cells> = rects.iter().map(|r| cells(b, r)).collect();
    let has = |m: &Cells, k: usize| m[k / 64] >> (k % 64) & 1 == 1;
    let t = target(b);
    let mut entries: Vec<(usize, Vec<usize>)> = (0..256)
        .filter(|&k| has(&t, k))
        .map(|k| (k, (0..masks.len()).filter(|&r| has(&masks[r], k)).collect()))
        .collect();
    entries.sort_by_key(|(k, c)| (c.len(), *k));

    struct Ctx<'a> {
        masks: &'a [Cells],
        entries: &'a [(usize, Vec<usize>)],
        target: Cells,
    }
    fn rec(cx: &Ctx, left: usize, acc: Cells) -> bool {
        if acc == cx.target {
            return true;
        }
        let missing = |m: &Cells| (0..4).map(|w| (m[w] & cx.target[w] & !acc[w]).count_ones()).sum::<u32>();
        let gain = cx.masks.iter().map(missing).max().unwrap_or(0);
        if left == 0 || (left as u32) * gain < missing(&cx.target) {
            return false;
        }
        let (_, cand) = cx
            .entries
            .iter()
            .find(|(k, _)| acc[k / 64] >> (k % 64) & 1 == 0)
            .unwrap();
        cand.iter().any(|&r| rec(cx, left - 1, or(acc, cx.masks[r])))
    }
    let cx = Ctx {
        masks: &masks,
        entries: &entries,
        target: t,
    };
    (0..).find(|&k| rec(&cx, k, [0; 4])).unwrap()
}

/// `M(n)_{ab} = (1 - |a ∧ b|)²` straight from the bit patterns.
pub fn m_entry(a: usize, b: usize) -> i64 {
    let k = (a & b).count_ones() as i64;
    (1 - k) * (1 - k)
}

/// `bbᵀ` in correlation coordinates (diagonal first, then `i < j`).
pub fn outer_product_point(b: &[bool]) -> Vec<i64> {
    let n = b.len();
    let mut y: Vec<i64> = b.iter().map(|&x| x as i64).collect();
    for i in 0..n {
        for j in i + 1..n {
            y.push((b[i] && b[j]) as i64);
        }
    }
    y
}

/// All `b ∈ {0,1}ⁿ`, first coordinate most significant.
pub fn bit_vectors(n: usize) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .map(|k| (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect())
        .collect()
}
