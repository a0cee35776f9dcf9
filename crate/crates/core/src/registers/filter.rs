use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const MAX_FILTER_INPUTS: usize = 24;

/// Vectorial Boolean function F: GF(2)^n -> GF(2)^m as a truth table.
/// Entry `x` is F at input x = (x_1..x_n) with x_1 the least significant bit;
/// output bit z_1 is the least significant bit of the entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FilterRepr", into = "FilterRepr")]
pub struct FilterSpec {
    n: usize,
    m: usize,
    truth_table: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FilterRepr {
    n: usize,
    m: usize,
    truth_table: String,
}

impl TryFrom<FilterRepr> for FilterSpec {
    type Error = crate::Error;
    fn try_from(r: FilterRepr) -> Result<Self> {
        FilterSpec::from_hex(r.n, r.m, &r.truth_table)
    }
}

impl From<FilterSpec> for FilterRepr {
    fn from(f: FilterSpec) -> Self {
        FilterRepr {
            n: f.n,
            m: f.m,
            truth_table: f.to_hex(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageSpace {
    pub output_value: u32,
    pub members: Vec<u32>,
}

impl PreimageSpace {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 || n > MAX_FILTER_INPUTS {
        return invalid(format!(
            "filter arity n={n} outside 1..={MAX_FILTER_INPUTS}"
        ));
    }
    if m == 0 || m > n {
        return invalid(format!("filter width m={m} outside 1..={n}"));
    }
    Ok(())
}

impl FilterSpec {
    pub fn new(n: usize, m: usize, truth_table: Vec<u32>) -> Result<Self> {
        check_dims(n, m)?;
        if truth_table.len() != 1 << n {
            return invalid(format!(
                "truth table has {} entries, expected {}",
                truth_table.len(),
                1usize << n
            ));
        }
        if let Some(v) = truth_table.iter().find(|&&v| (v as u64) >> m != 0) {
            return invalid(format!("table entry {v:#x} exceeds {m} output bits"));
        }
        Ok(FilterSpec { n, m, truth_table })
    }

    pub fn constant(n: usize, m: usize, value: u32) -> Result<Self> {
        check_dims(n, m)?;
        FilterSpec::new(n, m, vec![value; 1 << n])
    }

    /// Every output value receives exactly 2^(n-m) inputs.
    pub fn random_uniform<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        check_dims(n, m)?;
        let mut table: Vec<u32> = (0..1u32 << n).map(|x| x >> (n - m)).collect();
        table.shuffle(rng);
        FilterSpec::new(n, m, table)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        check_dims(n, m)?;
        let mask = ((1u64 << m) - 1) as u32;
        let table = (0..1usize << n).map(|_| rng.gen::<u32>() & mask).collect();
        FilterSpec::new(n, m, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn truth_table(&self) -> &[u32] {
        &self.truth_table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.truth_table[x as usize]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; 1 << self.m];
        for &v in &self.truth_table {
            sizes[v as usize] += 1;
        }
        sizes
    }

    pub fn is_uniform(&self) -> bool {
        let target = 1usize << (self.n - self.m);
        self.class_sizes().iter().all(|&s| s == target)
    }

    fn digits(&self) -> usize {
        self.m.div_ceil(4)
    }

    /// One lowercase hex group of ceil(m/4) digits per entry, entry 0 first.
    pub fn to_hex(&self) -> String {
        let w = self.digits();
        self.truth_table
            .iter()
            .map(|v| format!("{v:0w$x}"))
            .collect()
    }

    pub fn from_hex(n: usize, m: usize, s: &str) -> Result<Self> {
        check_dims(n, m)?;
        let w = m.div_ceil(4);
        let s = s.trim();
        if !s.is_ascii() || s.len() != w << n {
            return invalid(format!(
                "hex truth table must have {} digits, got {}",
                w << n,
                s.len()
            ));
        }
        let mut table = Vec::with_capacity(1 << n);
        for i in 0..1usize << n {
            let chunk = &s[i * w..(i + 1) * w];
            match u32::from_str_radix(chunk, 16) {
                Ok(v) => table.push(v),
                Err(_) => return invalid(format!("bad hex group {chunk:?}")),
            }
        }
        FilterSpec::new(n, m, table)
    }
}

/// Partition of all 2^n inputs by output value; index `z` holds S_z with its
/// members in increasing input order.
pub fn preimage_table(filter: &FilterSpec) -> Vec<PreimageSpace> {
    let mut spaces: Vec<PreimageSpace> = (0..1u32 << filter.m)
        .map(|z| PreimageSpace {
            output_value: z,
            members: Vec::new(),
        })
        .collect();
    for (x, &z) in filter.truth_table.iter().enumerate() {
        spaces[z as usize].members.push(x as u32);
    }
    spaces
}
