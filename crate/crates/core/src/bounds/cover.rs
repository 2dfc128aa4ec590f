use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactmath::BooleanMatrix;

/// `row_set × col_set`, both sorted and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    pub row_set: Vec<usize>,
    pub col_set: Vec<usize>,
}

impl Rectangle {
    pub fn is_monochromatic(&self, b: &BooleanMatrix) -> bool {
        self.row_set
            .iter()
            .all(|&i| self.col_set.iter().all(|&j| b.get(i, j)))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.row_set.binary_search(&i).is_ok() && self.col_set.binary_search(&j).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleCover {
    pub rectangles: Vec<Rectangle>,
    pub size: usize,
    /// Whether the search proved `size` minimum.
    pub optimal: bool,
}

impl RectangleCover {
    /// Every rectangle is 1-monochromatic and every 1-entry is covered.
    pub fn is_valid_for(&self, b: &BooleanMatrix) -> bool {
        self.size == self.rectangles.len()
            && self.rectangles.iter().all(|r| r.is_monochromatic(b))
            && b.ones().all(|(i, j)| self.rectangles.iter().any(|r| r.contains(i, j)))
    }
}

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_iter(b: &Bits, n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..n).filter(move |&i| bit_get(b, i))
}

/// All inclusion-maximal 1-monochromatic rectangles, sorted.
///
/// Column sets of maximal rectangles are exactly the nonempty intersections
/// of row supports; they are generated by closing the row supports under
/// intersection. More than `cap` candidates is a budget error.
pub fn maximal_rectangles(b: &BooleanMatrix, cap: usize) -> Result<Vec<Rectangle>> {
    let (m, n) = (b.rows(), b.cols());
    let rows: Vec<Bits> = (0..m)
        .map(|i| {
            let mut r = bits_new(n);
            for j in 0..n {
                if b.get(i, j) {
                    bit_set(&mut r, j);
                }
            }
            r
        })
        .collect();
    let mut intents: std::collections::BTreeSet<Bits> = std::collections::BTreeSet::new();
    for r in &rows {
        if r.iter().all(|&w| w == 0) {
            continue;
        }
        let mut fresh: Vec<Bits> = vec![r.clone()];
        for c in &intents {
            let x = bits_and(c, r);
            if x.iter().any(|&w| w != 0) {
                fresh.push(x);
            }
        }
        for x in fresh {
            intents.insert(x);
        }
        if intents.len() > cap {
            return Err(Error::Budget(format!(
                "more than {cap} maximal rectangles"
            )));
        }
    }
    let mut out: Vec<Rectangle> = intents
        .iter()
        .map(|c| Rectangle {
            row_set: (0..m).filter(|&i| bits_subset(c, &rows[i])).collect(),
            col_set: bits_iter(c, n).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// One rectangle per nonzero row, or per nonzero column if that is fewer.
fn line_cover(b: &BooleanMatrix) -> Vec<Rectangle> {
    let rows: Vec<Rectangle> = (0..b.rows())
        .filter_map(|i| {
            let cols: Vec<usize> = (0..b.cols()).filter(|&j| b.get(i, j)).collect();
            (!cols.is_empty()).then(|| Rectangle { row_set: vec![i], col_set: cols })
        })
        .collect();
    let cols: Vec<Rectangle> = (0..b.cols())
        .filter_map(|j| {
            let rs: Vec<usize> = (0..b.rows()).filter(|&i| b.get(i, j)).collect();
            (!rs.is_empty()).then(|| Rectangle { row_set: rs, col_set: vec![j] })
        })
        .collect();
    if cols.len() < rows.len() {
        cols
    } else {
        rows
    }
}

/// Greedy set of pairwise incompatible 1-entries (no rectangle covers two
/// of them); its size lower-bounds the cover number.
pub fn fooling_set(b: &BooleanMatrix) -> Vec<(usize, usize)> {
    const EXACT_DEGREE_LIMIT: usize = 4096;
    let ones: Vec<(usize, usize)> = b.ones().collect();
    // entries compatible with few others first
    let mut keyed: Vec<(usize, (usize, usize))> = if ones.len() <= EXACT_DEGREE_LIMIT {
        ones.iter()
            .map(|&e| (ones.iter().filter(|&&f| compatible(b, e, f)).count(), e))
            .collect()
    } else {
        let row_ones: Vec<usize> = (0..b.rows()).map(|i| (0..b.cols()).filter(|&j| b.get(i, j)).count()).collect();
        let col_ones: Vec<usize> = (0..b.cols()).map(|j| (0..b.rows()).filter(|&i| b.get(i, j)).count()).collect();
        ones.iter().map(|&(i, j)| (row_ones[i] + col_ones[j], (i, j))).collect()
    };
    keyed.sort_unstable();
    greedy_fooling(b, keyed.into_iter().map(|(_, e)| e))
}

fn compatible(b: &BooleanMatrix, (i1, j1): (usize, usize), (i2, j2): (usize, usize)) -> bool {
    b.get(i1, j2) && b.get(i2, j1)
}

/// Greedy over `cand` in the given order.
fn greedy_fooling(b: &BooleanMatrix, cand: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut set: Vec<(usize, usize)> = Vec::new();
    for e in cand {
        if set.iter().all(|&f| !compatible(b, e, f)) {
            set.push(e);
        }
    }
    set
}

struct CoverSearch {
    /// Rectangles covering each essential entry, as bitsets over rectangles.
    cand: Vec<Bits>,
    /// Essential entries covered by each rectangle.
    covers: Vec<Bits>,
    /// Essential entries ordered by candidate count, for the fooling bound.
    order: Vec<usize>,
    best: Vec<usize>,
    out_of_budget: bool,
}

impl CoverSearch {
    fn entries(&self) -> usize {
        self.cand.len()
    }

    fn lower_bound(&self, covered: &Bits) -> usize {
        // pairwise entries sharing no rectangle need distinct rectangles
        let mut used = bits_new(self.covers.len());
        let mut fooling = 0;
        for &e in &self.order {
            if bit_get(covered, e) || self.cand[e].iter().zip(&used).any(|(a, b)| a & b != 0) {
                continue;
            }
            fooling += 1;
            for (u, c) in used.iter_mut().zip(&self.cand[e]) {
                *u |= c;
            }
        }
        let uncovered = self.entries() - covered.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let gain = self
            .covers
            .iter()
            .map(|c| c.iter().zip(covered).map(|(x, y)| (x & !y).count_ones() as usize).sum::<usize>())
            .max()
            .unwrap_or(0);
        let counting = if gain == 0 { 0 } else { uncovered.div_ceil(gain) };
        fooling.max(counting)
    }

    fn search(&mut self, chosen: &mut Vec<usize>, covered: &Bits, budget: &mut Budget) {
        if self.out_of_budget {
            return;
        }
        if !budget.try_tick(1) {
            self.out_of_budget = true;
            return;
        }
        // branch on the uncovered entry with the fewest candidate rectangles
        let pick = (0..self.entries())
            .filter(|&e| !bit_get(covered, e))
            .min_by_key(|&e| (count(&self.cand[e]), e));
        let Some(e) = pick else {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        };
        if chosen.len() + self.lower_bound(covered) >= self.best.len() {
            return;
        }
        let mut options: Vec<usize> = bits_iter(&self.cand[e], self.covers.len()).collect();
        options.sort_by_key(|&k| {
            let gain: u32 = self.covers[k].iter().zip(covered).map(|(x, y)| (x & !y).count_ones()).sum();
            (std::cmp::Reverse(gain), k)
        });
        for r in options {
            let next: Bits = covered.iter().zip(&self.covers[r]).map(|(x, y)| x | y).collect();
            chosen.push(r);
            self.search(chosen, &next, budget);
            chosen.pop();
            if self.out_of_budget {
                return;
            }
        }
    }
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

/// Minimum 1-rectangle cover by branch and bound over maximal rectangles.
///
/// The initial incumbent is a greedy cover; pruning uses a greedy fooling
/// set on the uncovered entries. If the budget runs out the best cover found
/// is returned with `optimal = false`.
pub fn min_rectangle_cover(
    b: &BooleanMatrix,
    budget: &mut Budget,
    max_rectangles: usize,
) -> Result<RectangleCover> {
    let ones: Vec<(usize, usize)> = b.ones().collect();
    if ones.is_empty() {
        return Ok(RectangleCover {
            rectangles: Vec::new(),
            size: 0,
            optimal: true,
        });
    }
    let rects = match maximal_rectangles(b, max_rectangles) {
        Ok(r) => r,
        Err(Error::Budget(_)) => {
            // too many candidates: fall back to the row or column cover
            let rectangles = line_cover(b);
            let size = rectangles.len();
            return Ok(RectangleCover {
                rectangles,
                size,
                optimal: size == fooling_set(b).len(),
            });
        }
        Err(e) => return Err(e),
    };
    let nr = rects.len();
    let mut all_cand: Vec<Bits> = ones
        .iter()
        .map(|&(i, j)| {
            let mut c = bits_new(nr);
            for (k, r) in rects.iter().enumerate() {
                if r.contains(i, j) {
                    bit_set(&mut c, k);
                }
            }
            c
        })
        .collect();
    // an entry whose candidates include all candidates of another entry is
    // covered whenever that one is
    let mut keep: Vec<usize> = Vec::new();
    for e in 0..all_cand.len() {
        let implied = (0..all_cand.len()).any(|f| {
            f != e
                && bits_subset(&all_cand[f], &all_cand[e])
                && (all_cand[f] != all_cand[e] || f < e)
        });
        if !implied {
            keep.push(e);
        }
    }
    let cand: Vec<Bits> = keep.iter().map(|&e| std::mem::take(&mut all_cand[e])).collect();
    let covers: Vec<Bits> = (0..nr)
        .map(|k| {
            let mut c = bits_new(cand.len());
            for (e, ce) in cand.iter().enumerate() {
                if bit_get(ce, k) {
                    bit_set(&mut c, e);
                }
            }
            c
        })
        .collect();
    let mut order: Vec<usize> = (0..cand.len()).collect();
    order.sort_by_key(|&e| (count(&cand[e]), e));

    let greedy = {
        let mut covered = bits_new(cand.len());
        let mut chosen = Vec::new();
        while count(&covered) < cand.len() {
            let best = (0..nr)
                .max_by_key(|&k| {
                    let gain: u32 = covers[k]
                        .iter()
                        .zip(&covered)
                        .map(|(c, d)| (c & !d).count_ones())
                        .sum();
                    (gain, std::cmp::Reverse(k))
                })
                .expect("nonempty candidate list");
            for (w, c) in covered.iter_mut().zip(&covers[best]) {
                *w |= c;
            }
            chosen.push(best);
        }
        chosen
    };

    let mut st = CoverSearch {
        cand,
        covers,
        order,
        best: greedy,
        out_of_budget: false,
    };
    let root = bits_new(st.entries());
    if st.lower_bound(&root) < st.best.len() {
        st.search(&mut Vec::new(), &root, budget);
    }
    let mut chosen = st.best.clone();
    chosen.sort_unstable();
    let mut rectangles: Vec<Rectangle> = chosen.into_iter().map(|k| rects[k].clone()).collect();
    let lines = line_cover(b);
    if lines.len() < rectangles.len() {
        rectangles = lines;
    }
    Ok(RectangleCover {
        size: rectangles.len(),
        rectangles,
        optimal: !st.out_of_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(rows: &[&[u8]]) -> BooleanMatrix {
        BooleanMatrix::from_u8(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn rect(r: &[usize], c: &[usize]) -> Rectangle {
        Rectangle {
            row_set: r.to_vec(),
            col_set: c.to_vec(),
        }
    }

    #[test]
    fn maximal_examples() {
        let m1 = bm(&[&[1, 1], &[1, 0]]);
        assert_eq!(
            maximal_rectangles(&m1, 100).unwrap(),
            vec![rect(&[0], &[0, 1]), rect(&[0, 1], &[0])]
        );
        assert_eq!(maximal_rectangles(&bm(&[&[1, 1], &[1, 1]]), 100).unwrap(), vec![rect(&[0, 1], &[0, 1])]);
        assert_eq!(
            maximal_rectangles(&bm(&[&[1, 0], &[0, 1]]), 100).unwrap(),
            vec![rect(&[0], &[0]), rect(&[1], &[1])]
        );
        assert!(maximal_rectangles(&bm(&[&[0, 0]]), 100).unwrap().is_empty());
        let id = BooleanMatrix::from_fn(6, 6, |i, j| i == j);
        assert!(matches!(maximal_rectangles(&id, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn cover_examples() {
        let m1 = bm(&[&[1, 1], &[1, 0]]);
        let c = min_rectangle_cover(&m1, &mut Budget::unlimited(), 100).unwrap();
        assert_eq!(c.size, 2);
        assert!(c.optimal && c.is_valid_for(&m1));
        let ones = bm(&[&[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(min_rectangle_cover(&ones, &mut Budget::unlimited(), 100).unwrap().size, 1);
        let zero = bm(&[&[0, 0]]);
        assert_eq!(min_rectangle_cover(&zero, &mut Budget::unlimited(), 100).unwrap().size, 0);
    }

    #[test]
    fn cap_fallback_uses_rows() {
        let id = BooleanMatrix::from_fn(6, 6, |i, j| i == j);
        let c = min_rectangle_cover(&id, &mut Budget::unlimited(), 3).unwrap();
        assert_eq!(c.size, 6);
        assert!(c.optimal);
        assert!(c.is_valid_for(&id));
    }

    #[test]
    fn fooling_sets_are_pairwise_incompatible() {
        let b = BooleanMatrix::from_fn(5, 5, |i, j| (i * 3 + j * 7) % 4 != 0);
        let fs = fooling_set(&b);
        for (k, &e) in fs.iter().enumerate() {
            for &f in &fs[k + 1..] {
                assert!(!compatible(&b, e, f));
            }
        }
    }

    #[test]
    fn codec() {
        let c = min_rectangle_cover(&bm(&[&[1, 1], &[1, 0]]), &mut Budget::unlimited(), 100).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"rectangles":[{"row_set":[0],"col_set":[0,1]},{"row_set":[0,1],"col_set":[0]}],"size":2,"optimal":true}"#
        );
        assert_eq!(serde_json::from_str::<RectangleCover>(&s).unwrap(), c);
    }
}
