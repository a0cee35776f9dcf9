use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::registers::{FilterSpec, HybridSpec, LfsrSpec, NfsrSpec};
use crate::sampling::TapSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Register {
    Lfsr(LfsrSpec),
    Nfsr(NfsrSpec),
    Hybrid(HybridSpec),
}

impl Register {
    pub fn state_len(&self) -> usize {
        match self {
            Register::Lfsr(s) => s.length(),
            Register::Nfsr(s) => s.length(),
            Register::Hybrid(h) => h.state_len(),
        }
    }

    pub fn step(&self, state: &BitVec) -> Result<BitVec> {
        match self {
            Register::Lfsr(s) => s.step(state),
            Register::Nfsr(s) => s.step(state),
            Register::Hybrid(h) => h.step(state),
        }
    }
}

/// Filter inputs: one tap set, or one per register of a hybrid pair. For a
/// hybrid the NFSR taps feed x_1.. first, followed by the LFSR taps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taps {
    Single(TapSet),
    Hybrid { nfsr: TapSet, lfsr: TapSet },
}

impl Taps {
    pub fn count(&self) -> usize {
        match self {
            Taps::Single(t) => t.len(),
            Taps::Hybrid { nfsr, lfsr } => nfsr.len() + lfsr.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub register: Register,
    pub taps: Taps,
    pub filter: FilterSpec,
}

impl GeneratorSpec {
    pub fn new(register: Register, taps: Taps, filter: FilterSpec) -> Result<Self> {
        if filter.n() != taps.count() {
            return invalid(format!(
                "filter takes {} inputs but {} taps are given",
                filter.n(),
                taps.count()
            ));
        }
        match (&register, &taps) {
            (Register::Lfsr(_) | Register::Nfsr(_), Taps::Single(t)) => {
                if t.register_length() != register.state_len() {
                    return invalid("tap set length differs from register length");
                }
            }
            (Register::Hybrid(h), Taps::Hybrid { nfsr, lfsr }) => {
                if nfsr.register_length() != h.nfsr().length()
                    || lfsr.register_length() != h.lfsr().length()
                {
                    return invalid("hybrid tap sets do not match register lengths");
                }
            }
            _ => return invalid("tap layout does not match register kind"),
        }
        Ok(GeneratorSpec {
            register,
            taps,
            filter,
        })
    }

    pub fn state_len(&self) -> usize {
        self.register.state_len()
    }

    pub fn n(&self) -> usize {
        self.filter.n()
    }

    pub fn m(&self) -> usize {
        self.filter.m()
    }

    /// State bit indices read by x_1..x_n.
    pub fn tap_indices(&self) -> Vec<usize> {
        match (&self.register, &self.taps) {
            (Register::Hybrid(h), Taps::Hybrid { nfsr, lfsr }) => {
                let off = h.lfsr().length();
                nfsr.positions()
                    .iter()
                    .map(|&p| off + p - 1)
                    .chain(lfsr.positions().iter().map(|&p| p - 1))
                    .collect()
            }
            (_, Taps::Single(t)) => t.positions().iter().map(|&p| p - 1).collect(),
            _ => unreachable!("validated at construction"),
        }
    }

    pub fn filter_input(&self, state: &BitVec, tap_indices: &[usize]) -> u32 {
        tap_indices
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &c)| acc | (state.get(c) as u32) << i)
    }

    pub fn keystream(&self, initial: &BitVec, count: usize) -> Result<Vec<u32>> {
        if initial.len() != self.state_len() {
            return invalid(format!(
                "initial state has {} bits, generator has {}",
                initial.len(),
                self.state_len()
            ));
        }
        let idx = self.tap_indices();
        let mut state = initial.clone();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            out.push(self.filter.eval(self.filter_input(&state, &idx)));
            if k + 1 < count {
                state = self.register.step(&state)?;
            }
        }
        Ok(out)
    }
}

pub fn keystream(gen: &GeneratorSpec, initial: &BitVec, count: usize) -> Result<Vec<u32>> {
    gen.keystream(initial, count)
}
