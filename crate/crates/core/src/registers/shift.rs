use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::registers::primitive;

/// Linear feedback register. Cells are numbered `1..=length`; each clock the
/// content moves toward cell 1 and the XOR of the feedback cells (read before
/// the shift) enters cell `length`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LfsrRepr", into = "LfsrRepr")]
pub struct LfsrSpec {
    length: usize,
    feedback_positions: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LfsrRepr {
    length: usize,
    feedback_positions: Vec<usize>,
}

impl TryFrom<LfsrRepr> for LfsrSpec {
    type Error = crate::Error;
    fn try_from(r: LfsrRepr) -> Result<Self> {
        LfsrSpec::new(r.length, r.feedback_positions)
    }
}

impl From<LfsrSpec> for LfsrRepr {
    fn from(s: LfsrSpec) -> Self {
        LfsrRepr {
            length: s.length,
            feedback_positions: s.feedback_positions,
        }
    }
}

impl LfsrSpec {
    pub fn new(length: usize, mut feedback_positions: Vec<usize>) -> Result<Self> {
        if length == 0 {
            return invalid("register length must be positive");
        }
        if feedback_positions.is_empty() {
            return invalid("feedback set is empty");
        }
        if let Some(&p) = feedback_positions.iter().find(|&&p| p == 0 || p > length) {
            return invalid(format!("feedback position {p} outside 1..={length}"));
        }
        feedback_positions.sort_unstable();
        feedback_positions.dedup();
        Ok(LfsrSpec {
            length,
            feedback_positions,
        })
    }

    /// Primitive feedback from the built-in table.
    pub fn primitive(length: usize) -> Result<Self> {
        match primitive::feedback_for(length) {
            Some(f) => LfsrSpec::new(length, f),
            None => invalid(format!("no built-in primitive feedback for L={length}")),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn feedback_positions(&self) -> &[usize] {
        &self.feedback_positions
    }

    /// The update is a bijection on states iff cell 1 feeds back.
    pub fn is_invertible(&self) -> bool {
        self.feedback_positions[0] == 1
    }

    pub(crate) fn feedback_bit(&self, state: &BitVec) -> bool {
        self.feedback_positions
            .iter()
            .fold(false, |acc, &p| acc ^ state.get(p - 1))
    }

    pub fn step(&self, state: &BitVec) -> Result<BitVec> {
        if state.len() != self.length {
            return invalid(format!(
                "state has {} bits, register has {}",
                state.len(),
                self.length
            ));
        }
        let mut next = state.clone();
        next.shift_in(self.feedback_bit(state));
        Ok(next)
    }
}

pub fn lfsr_step(state: &BitVec, spec: &LfsrSpec) -> Result<BitVec> {
    spec.step(state)
}

/// Nonlinear feedback register with an algebraic-normal-form update over the
/// current cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NfsrRepr", into = "NfsrRepr")]
pub struct NfsrSpec {
    length: usize,
    constant_term: bool,
    monomials: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct NfsrRepr {
    length: usize,
    constant_term: bool,
    monomials: Vec<Vec<usize>>,
}

impl TryFrom<NfsrRepr> for NfsrSpec {
    type Error = crate::Error;
    fn try_from(r: NfsrRepr) -> Result<Self> {
        NfsrSpec::new(r.length, r.constant_term, r.monomials)
    }
}

impl From<NfsrSpec> for NfsrRepr {
    fn from(s: NfsrSpec) -> Self {
        NfsrRepr {
            length: s.length,
            constant_term: s.constant_term,
            monomials: s.monomials,
        }
    }
}

impl NfsrSpec {
    /// Monomials are normalised (sorted, repeated variables merged) and equal
    /// monomials cancel in pairs, as they do over GF(2).
    pub fn new(length: usize, constant_term: bool, monomials: Vec<Vec<usize>>) -> Result<Self> {
        if length == 0 {
            return invalid("register length must be positive");
        }
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(monomials.len());
        for mut mono in monomials {
            if mono.is_empty() {
                return invalid("empty monomial; use constant_term");
            }
            if let Some(&p) = mono.iter().find(|&&p| p == 0 || p > length) {
                return invalid(format!("monomial position {p} outside 1..={length}"));
            }
            mono.sort_unstable();
            mono.dedup();
            norm.push(mono);
        }
        norm.sort();
        let mut monomials: Vec<Vec<usize>> = Vec::with_capacity(norm.len());
        for mono in norm {
            if monomials.last() == Some(&mono) {
                monomials.pop();
            } else {
                monomials.push(mono);
            }
        }
        Ok(NfsrSpec {
            length,
            constant_term,
            monomials,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn constant_term(&self) -> bool {
        self.constant_term
    }

    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Bijective on states iff cell 1 appears exactly as a linear term and in
    /// no other monomial.
    pub fn is_invertible(&self) -> bool {
        self.monomials.iter().any(|m| m == &[1])
            && self.monomials.iter().all(|m| m == &[1] || !m.contains(&1))
    }

    pub(crate) fn update_bit(&self, state: &BitVec) -> bool {
        let mut acc = self.constant_term;
        for mono in &self.monomials {
            acc ^= mono.iter().all(|&p| state.get(p - 1));
        }
        acc
    }

    pub fn step(&self, state: &BitVec) -> Result<BitVec> {
        if state.len() != self.length {
            return invalid(format!(
                "state has {} bits, register has {}",
                state.len(),
                self.length
            ));
        }
        let mut next = state.clone();
        next.shift_in(self.update_bit(state));
        Ok(next)
    }
}

pub fn nfsr_step(state: &BitVec, spec: &NfsrSpec) -> Result<BitVec> {
    spec.step(state)
}

/// An LFSR and an NFSR clocked together. With `coupling` the bit in LFSR
/// cell 1 is XORed into the new NFSR bit. The joint state is the LFSR cells
/// followed by the NFSR cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HybridRepr", into = "HybridRepr")]
pub struct HybridSpec {
    lfsr: LfsrSpec,
    nfsr: NfsrSpec,
    coupling: bool,
}

#[derive(Serialize, Deserialize)]
struct HybridRepr {
    lfsr: LfsrSpec,
    nfsr: NfsrSpec,
    coupling: bool,
}

impl TryFrom<HybridRepr> for HybridSpec {
    type Error = crate::Error;
    fn try_from(r: HybridRepr) -> Result<Self> {
        HybridSpec::new(r.lfsr, r.nfsr, r.coupling)
    }
}

impl From<HybridSpec> for HybridRepr {
    fn from(s: HybridSpec) -> Self {
        HybridRepr {
            lfsr: s.lfsr,
            nfsr: s.nfsr,
            coupling: s.coupling,
        }
    }
}

impl HybridSpec {
    pub fn new(lfsr: LfsrSpec, nfsr: NfsrSpec, coupling: bool) -> Result<Self> {
        if coupling && lfsr.length() != nfsr.length() {
            return invalid("coupled registers must have equal length");
        }
        Ok(HybridSpec {
            lfsr,
            nfsr,
            coupling,
        })
    }

    pub fn lfsr(&self) -> &LfsrSpec {
        &self.lfsr
    }

    pub fn nfsr(&self) -> &NfsrSpec {
        &self.nfsr
    }

    pub fn coupling(&self) -> bool {
        self.coupling
    }

    pub fn state_len(&self) -> usize {
        self.lfsr.length() + self.nfsr.length()
    }

    pub fn split(&self, state: &BitVec) -> (BitVec, BitVec) {
        let a = self.lfsr.length();
        let l = BitVec::from_bits(&(0..a).map(|i| state.get(i)).collect::<Vec<_>>());
        let n = BitVec::from_bits(
            &(0..self.nfsr.length())
                .map(|i| state.get(a + i))
                .collect::<Vec<_>>(),
        );
        (l, n)
    }

    pub fn join(lfsr: &BitVec, nfsr: &BitVec) -> BitVec {
        let mut bits = lfsr.to_bits();
        bits.extend(nfsr.to_bits());
        BitVec::from_bits(&bits)
    }

    pub fn step(&self, state: &BitVec) -> Result<BitVec> {
        if state.len() != self.state_len() {
            return invalid(format!(
                "state has {} bits, hybrid register has {}",
                state.len(),
                self.state_len()
            ));
        }
        let (l, n) = self.split(state);
        let mut nb = self.nfsr.update_bit(&n);
        if self.coupling {
            nb ^= l.get(0);
        }
        let lb = self.lfsr.feedback_bit(&l);
        let mut l2 = l;
        l2.shift_in(lb);
        let mut n2 = n;
        n2.shift_in(nb);
        Ok(Self::join(&l2, &n2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traced_lfsr_step() {
        let spec = LfsrSpec::new(4, vec![1, 4]).unwrap();
        let s = BitVec::from_bits(&[true, false, false, false]);
        assert_eq!(
            spec.step(&s).unwrap(),
            BitVec::from_bits(&[false, false, false, true])
        );
    }

    #[test]
    fn zero_state_is_fixed() {
        let spec = LfsrSpec::new(9, vec![1, 5, 9]).unwrap();
        let z = BitVec::zeros(9);
        assert_eq!(spec.step(&z).unwrap(), z);
    }

    #[test]
    fn length_mismatch_rejected() {
        let spec = LfsrSpec::new(9, vec![1, 5]).unwrap();
        assert!(spec.step(&BitVec::zeros(8)).is_err());
        assert!(LfsrSpec::new(9, vec![10]).is_err());
        assert!(LfsrSpec::new(9, vec![]).is_err());
    }

    #[test]
    fn constant_only_nfsr_emits_ones() {
        let spec = NfsrSpec::new(6, true, vec![]).unwrap();
        let mut s = BitVec::zeros(6);
        for _ in 0..6 {
            s = spec.step(&s).unwrap();
        }
        assert_eq!(s.count_ones(), 6);
    }

    #[test]
    fn monomials_cancel_in_pairs() {
        let spec = NfsrSpec::new(8, false, vec![vec![3, 2], vec![2, 3], vec![1]]).unwrap();
        assert_eq!(spec.monomials(), &[vec![1]]);
        assert!(NfsrSpec::new(8, false, vec![vec![9]]).is_err());
    }

    #[test]
    fn coupling_injects_lfsr_cell_one() {
        let l = LfsrSpec::new(5, vec![1, 3]).unwrap();
        let n = NfsrSpec::new(5, false, vec![vec![1]]).unwrap();
        let coupled = HybridSpec::new(l.clone(), n.clone(), true).unwrap();
        let plain = HybridSpec::new(l, n, false).unwrap();
        let state = HybridSpec::join(
            &BitVec::from_bits(&[true, false, false, false, false]),
            &BitVec::zeros(5),
        );
        let a = coupled.step(&state).unwrap();
        let b = plain.step(&state).unwrap();
        assert!(a.get(9));
        assert!(!b.get(9));
    }
}
