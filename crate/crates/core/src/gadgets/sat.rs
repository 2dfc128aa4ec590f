use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// CNF with exactly three distinct literals per clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    var_labels: Vec<String>,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(var_labels: Vec<String>, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for c in &clauses {
            if c.iter().any(|l| l.var >= var_labels.len()) {
                return Err(Error::input("literal refers to an unknown variable"));
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(Error::input("clause literals must use distinct variables"));
            }
        }
        Ok(Self { var_labels, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_labels.len()
    }

    pub fn var_labels(&self) -> &[String] {
        &self.var_labels
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.satisfied_by(assignment)))
    }

    /// Occurrences of each variable as `(clause index, negated)`, in clause
    /// order.
    pub fn occurrences(&self) -> Vec<Vec<(usize, bool)>> {
        let mut occ = vec![Vec::new(); self.var_count()];
        for (m, c) in self.clauses.iter().enumerate() {
            for l in c {
                occ[l.var].push((m, l.negated));
            }
        }
        occ
    }

    /// All satisfying assignments by exhaustive truth table (`≤ 24`
    /// variables), in increasing order of the assignment read as a binary
    /// number with variable 0 least significant.
    pub fn satisfying_assignments(&self) -> Result<Vec<Vec<bool>>> {
        let v = self.var_count();
        if v > 24 {
            return Err(Error::input("truth-table enumeration limited to 24 variables"));
        }
        Ok((0u64..1 << v)
            .map(|mask| (0..v).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| self.evaluate(a))
            .collect())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.var_labels.iter().enumerate() {
            let _ = writeln!(out, "c {} {}", i + 1, l);
        }
        let _ = writeln!(out, "p cnf {} {}", self.var_count(), self.clauses.len());
        for c in &self.clauses {
            let lits: Vec<String> = c
                .iter()
                .map(|l| {
                    let v = (l.var + 1) as i64;
                    (if l.negated { -v } else { v }).to_string()
                })
                .collect();
            let _ = writeln!(out, "{} 0", lits.join(" "));
        }
        out
    }
}

/// `φ_n`: variables `C_ij` in row-major order (index `i·n + j`); for every
/// ordered pair `i ≠ j` the four clauses encoding `C_ij = C_ii ∧ C_jj`.
pub fn build_phi(n: usize) -> Result<CnfFormula> {
    if n < 1 {
        return Err(Error::input("phi_n needs n >= 1"));
    }
    let var = |i: usize, j: usize| i * n + j;
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("C{},{}", i + 1, j + 1)))
        .collect();
    let mut clauses = Vec::with_capacity(4 * n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (ii, jj, ij) = (var(i, i), var(j, j), var(i, j));
            clauses.push([Literal::pos(ii), Literal::pos(jj), Literal::neg(ij)]);
            clauses.push([Literal::pos(ii), Literal::neg(jj), Literal::neg(ij)]);
            clauses.push([Literal::neg(ii), Literal::pos(jj), Literal::neg(ij)]);
            clauses.push([Literal::neg(ii), Literal::neg(jj), Literal::pos(ij)]);
        }
    }
    CnfFormula::new(labels, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::BitString;

    fn outer(b: &BitString) -> Vec<bool> {
        let n = b.len();
        (0..n * n).map(|k| b.get(k / n) && b.get(k % n)).collect()
    }

    #[test]
    fn sizes() {
        let p1 = build_phi(1).unwrap();
        assert_eq!((p1.var_count(), p1.clauses().len()), (1, 0));
        let p2 = build_phi(2).unwrap();
        assert_eq!((p2.var_count(), p2.clauses().len()), (4, 8));
        let p3 = build_phi(3).unwrap();
        assert_eq!((p3.var_count(), p3.clauses().len()), (9, 24));
    }

    #[test]
    fn satisfying_assignments_are_outer_products() {
        for n in 1..=3 {
            let phi = build_phi(n).unwrap();
            let mut sat = phi.satisfying_assignments().unwrap();
            let mut expect: Vec<Vec<bool>> = BitString::all(n).map(|b| outer(&b)).collect();
            sat.sort();
            expect.sort();
            assert_eq!(sat, expect, "n = {n}");
        }
    }

    #[test]
    fn dimacs_header() {
        let d = build_phi(2).unwrap().to_dimacs();
        assert!(d.contains("p cnf 4 8\n"));
        assert!(d.contains("\n1 4 -2 0\n"));
        assert!(d.lines().filter(|l| l.ends_with(" 0")).count() == 8);
    }

    #[test]
    fn clause_validation() {
        let bad = CnfFormula::new(
            vec!["a".into(), "b".into()],
            vec![[Literal::pos(0), Literal::neg(0), Literal::pos(1)]],
        );
        assert!(bad.is_err());
    }
}
