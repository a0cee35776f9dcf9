use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Strictly increasing 1-based tap positions on a register of length L.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TapRepr", into = "TapRepr")]
pub struct TapSet {
    positions: Vec<usize>,
    register_length: usize,
}

#[derive(Serialize, Deserialize)]
struct TapRepr {
    positions: Vec<usize>,
    register_length: usize,
}

impl TryFrom<TapRepr> for TapSet {
    type Error = crate::Error;
    fn try_from(r: TapRepr) -> Result<Self> {
        TapSet::new(r.positions, r.register_length)
    }
}

impl From<TapSet> for TapRepr {
    fn from(t: TapSet) -> Self {
        TapRepr {
            positions: t.positions,
            register_length: t.register_length,
        }
    }
}

impl TapSet {
    pub fn new(positions: Vec<usize>, register_length: usize) -> Result<Self> {
        if positions.is_empty() {
            return invalid("tap set is empty");
        }
        if positions[0] == 0 {
            return invalid("tap positions are 1-based");
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!(
                "tap positions not strictly increasing: {positions:?}"
            ));
        }
        if *positions.last().unwrap() > register_length {
            return invalid(format!(
                "tap {} beyond register length {register_length}",
                positions.last().unwrap()
            ));
        }
        Ok(TapSet {
            positions,
            register_length,
        })
    }

    /// Taps `start, start + d_1, start + d_1 + d_2, ..`.
    pub fn from_differences(
        start: usize,
        differences: &[usize],
        register_length: usize,
    ) -> Result<Self> {
        if differences.contains(&0) {
            return invalid("differences must be positive");
        }
        let mut positions = Vec::with_capacity(differences.len() + 1);
        positions.push(start);
        let mut acc = start;
        for &d in differences {
            acc += d;
            positions.push(acc);
        }
        TapSet::new(positions, register_length)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn register_length(&self) -> usize {
        self.register_length
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn first(&self) -> usize {
        self.positions[0]
    }

    pub fn last(&self) -> usize {
        *self.positions.last().unwrap()
    }

    /// l_n - l_1.
    pub fn span(&self) -> usize {
        self.last() - self.first()
    }
}
