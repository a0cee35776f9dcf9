use serde::{Deserialize, Serialize};

use crate::bits::BitVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gf2LinearSystem {
    pub vars: usize,
    pub rows: Vec<(BitVec, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gf2Solution {
    Unique(BitVec),
    Inconsistent,
    Underdetermined { rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    Added,
    Redundant,
    Contradiction,
}

/// Row echelon form built one equation at a time. Each stored row is zero
/// at the pivots of all rows stored before it, so reducing a new row against
/// the rows in insertion order clears every existing pivot, and removing the
/// newest rows undoes insertions.
#[derive(Clone, Debug)]
pub struct Echelon {
    vars: usize,
    rows: Vec<(BitVec, bool, usize)>,
    is_pivot: Vec<bool>,
}

impl Echelon {
    pub fn new(vars: usize) -> Self {
        Echelon {
            vars,
            rows: Vec::new(),
            is_pivot: vec![false; vars],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &BitVec, rhs: bool) -> (BitVec, bool) {
        let mut v = row.clone();
        let mut b = rhs;
        for (r, rb, p) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
                b ^= rb;
            }
        }
        (v, b)
    }

    pub fn insert(&mut self, row: &BitVec, rhs: bool) -> Insert {
        debug_assert_eq!(row.len(), self.vars);
        let (v, b) = self.reduce(row, rhs);
        match v.first_one() {
            Some(p) => {
                self.is_pivot[p] = true;
                self.rows.push((v, b, p));
                Insert::Added
            }
            None if b => Insert::Contradiction,
            None => Insert::Redundant,
        }
    }

    /// Drops rows until `rank` remain.
    pub fn truncate(&mut self, rank: usize) {
        while self.rows.len() > rank {
            let (_, _, p) = self.rows.pop().unwrap();
            self.is_pivot[p] = false;
        }
    }

    fn back_substitute(&self, mut x: BitVec) -> BitVec {
        for (r, b, p) in self.rows.iter().rev() {
            let mut val = *b;
            for j in r.iter_ones() {
                if j != *p {
                    val ^= x.get(j);
                }
            }
            x.set(*p, val);
        }
        x
    }

    pub fn solve_unique(&self) -> Option<BitVec> {
        (self.rank() == self.vars).then(|| self.back_substitute(BitVec::zeros(self.vars)))
    }

    /// Every solution, provided at most `max_free` variables are free.
    pub fn solutions(&self, max_free: usize) -> Option<Vec<BitVec>> {
        let free: Vec<usize> = (0..self.vars).filter(|&j| !self.is_pivot[j]).collect();
        if free.len() > max_free || free.len() >= 64 {
            return None;
        }
        Some(
            (0..1u64 << free.len())
                .map(|a| {
                    let mut x = BitVec::zeros(self.vars);
                    for (k, &j) in free.iter().enumerate() {
                        x.set(j, (a >> k) & 1 == 1);
                    }
                    self.back_substitute(x)
                })
                .collect(),
        )
    }
}

pub fn gf2_solve(system: &Gf2LinearSystem) -> Gf2Solution {
    let mut e = Echelon::new(system.vars);
    for (row, rhs) in &system.rows {
        if e.insert(row, *rhs) == Insert::Contradiction {
            return Gf2Solution::Inconsistent;
        }
    }
    match e.solve_unique() {
        Some(x) => Gf2Solution::Unique(x),
        None => Gf2Solution::Underdetermined { rank: e.rank() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let s = BitVec::from_u64(0b1011_0110, 8);
        let rows = (0..8).map(|i| (BitVec::unit(8, i), s.get(i))).collect();
        assert_eq!(
            gf2_solve(&Gf2LinearSystem { vars: 8, rows }),
            Gf2Solution::Unique(s)
        );
    }

    #[test]
    fn contradictory_duplicate() {
        let r = BitVec::from_u64(0b101, 3);
        let sys = Gf2LinearSystem {
            vars: 3,
            rows: vec![(r.clone(), true), (r, false)],
        };
        assert_eq!(gf2_solve(&sys), Gf2Solution::Inconsistent);
    }

    #[test]
    fn underdetermined_enumeration() {
        let mut e = Echelon::new(3);
        e.insert(&BitVec::from_u64(0b011, 3), true);
        let sols = e.solutions(4).unwrap();
        assert_eq!(sols.len(), 4);
        for s in sols {
            assert!(s.get(0) ^ s.get(1));
        }
        e.truncate(0);
        assert_eq!(e.rank(), 0);
    }
}
