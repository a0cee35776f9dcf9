//! Published reference data: tap sets, parameters and the complexity figures
//! printed for them. Values are kept as printed; nothing here is computed.

use crate::error::Result;
use crate::registers::{HybridSpec, LfsrSpec, NfsrSpec};
use crate::sampling::TapSet;

/// One row of a mode comparison table given by consecutive differences.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceRow {
    pub len: usize,
    pub n: usize,
    pub m: usize,
    pub differences: Vec<usize>,
    pub lambda: Option<usize>,
    /// log2 costs for constant, greedy and cyclic sampling.
    pub published: [f64; 3],
}

impl DifferenceRow {
    pub fn taps(&self) -> Result<TapSet> {
        TapSet::from_differences(1, &self.differences, self.len)
    }
}

/// One row of a mode comparison table given by tap positions.
#[derive(Clone, Debug, PartialEq)]
pub struct TapRow {
    pub len: usize,
    pub n: usize,
    pub m: usize,
    pub taps: Vec<usize>,
    pub published: [f64; 3],
}

impl TapRow {
    pub fn taps(&self) -> Result<TapSet> {
        TapSet::new(self.taps.clone(), self.len)
    }
}

/// One row of a repeated-bit table for a variable schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleRow {
    pub i: usize,
    pub repeated: Vec<usize>,
    pub q: usize,
    pub sigma: usize,
}

/// One row of a window table: recovered bits, repeats, log2 preimage size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowRow {
    pub i: usize,
    pub recovered: usize,
    pub q: usize,
    pub size_log2: usize,
}

fn drow(
    len: usize,
    n: usize,
    m: usize,
    d: &[usize],
    lambda: Option<usize>,
    published: [f64; 3],
) -> DifferenceRow {
    DifferenceRow {
        len,
        n,
        m,
        differences: d.to_vec(),
        lambda,
        published,
    }
}

/// Scheme of all differences for D = (2,5,4,2).
pub const TABLE1_DIFFERENCES: [usize; 4] = [2, 5, 4, 2];
pub fn table1_rows() -> Vec<Vec<usize>> {
    vec![vec![2, 5, 4, 2], vec![7, 9, 6], vec![11, 11], vec![13]]
}

/// Tap choices with many repeated differences.
pub fn table2() -> Vec<DifferenceRow> {
    vec![
        drow(
            80,
            9,
            2,
            &[12, 3, 6, 12, 6, 4, 24, 12],
            None,
            [43.97, 67.97, 62.97],
        ),
        drow(
            120,
            11,
            3,
            &[5, 10, 15, 4, 5, 10, 5, 15, 20, 25],
            None,
            [37.7, 63.0, 69.7],
        ),
        drow(
            160,
            15,
            6,
            &[14, 7, 3, 14, 7, 7, 14, 7, 14, 28, 7, 14, 14, 7],
            None,
            [32.97, 32.97, 50.97],
        ),
    ]
}

/// Algorithmically chosen difference sets.
pub fn table3() -> Vec<DifferenceRow> {
    vec![
        drow(
            80,
            7,
            2,
            &[5, 13, 7, 26, 11, 17],
            None,
            [69.97, 63.97, 59.97],
        ),
        drow(
            120,
            13,
            3,
            &[5, 7, 3, 13, 6, 11, 5, 11, 7, 13, 21, 17],
            None,
            [99.7, 104.0, 78.7],
        ),
        drow(
            160,
            17,
            6,
            &[5, 11, 4, 3, 7, 9, 1, 2, 23, 15, 5, 13, 7, 26, 11, 17],
            None,
            [86.97, 79.97, 41.97],
        ),
        drow(
            200,
            21,
            7,
            &[
                3, 7, 9, 13, 18, 7, 9, 1, 2, 9, 1, 2, 23, 15, 5, 13, 7, 26, 11, 17,
            ],
            None,
            [108.9, 96.93, 68.93],
        ),
    ]
}

fn trow(len: usize, n: usize, m: usize, taps: &[usize], published: [f64; 3]) -> TapRow {
    TapRow {
        len,
        n,
        m,
        taps: taps.to_vec(),
        published,
    }
}

/// Full positive difference sets, first half of the FPDS comparison.
pub fn table4_fpds() -> Vec<TapRow> {
    vec![
        trow(80, 7, 2, &[1, 3, 8, 14, 22, 23, 26], [35.97, 37.97, 57.97]),
        trow(
            120,
            13,
            3,
            &[1, 3, 6, 26, 38, 44, 60, 71, 86, 90, 99, 100, 107],
            [86.72, 90.72, 95.72],
        ),
        trow(
            160,
            15,
            4,
            &[
                1, 5, 21, 31, 58, 60, 63, 77, 101, 112, 124, 137, 145, 146, 152,
            ],
            [96.97, 105.97, 116.97],
        ),
        trow(
            200,
            17,
            5,
            &[
                1, 6, 8, 18, 53, 57, 68, 81, 82, 101, 123, 139, 160, 166, 169, 192, 200,
            ],
            [113.93, 123.93, 132.93],
        ),
    ]
}

/// Algorithmic choices at the same parameters, second half of the FPDS
/// comparison, with the published λ.
pub fn table4_algorithmic() -> Vec<DifferenceRow> {
    vec![
        drow(
            80,
            7,
            2,
            &[5, 13, 7, 26, 11, 17],
            Some(1),
            [69.97, 63.97, 59.97],
        ),
        drow(
            120,
            13,
            3,
            &[5, 7, 3, 13, 6, 11, 5, 11, 7, 13, 21, 17],
            Some(3),
            [99.7, 104.0, 78.7],
        ),
        drow(
            160,
            15,
            4,
            &[5, 3, 7, 1, 9, 17, 15, 23, 5, 13, 7, 26, 11, 17],
            Some(3),
            [114.97, 124.97, 101.97],
        ),
        drow(
            200,
            17,
            5,
            &[7, 13, 10, 13, 7, 1, 9, 17, 15, 23, 5, 13, 7, 26, 11, 17],
            Some(3),
            [120.93, 120.93, 113.93],
        ),
    ]
}

/// Running example: L = 80, (n, m) = (7, 2).
pub const EXAMPLE1_TAPS: [usize; 7] = [1, 6, 19, 26, 52, 63, 80];
pub const EXAMPLE1_LEN: usize = 80;
pub const EXAMPLE1_N: usize = 7;
pub const EXAMPLE1_M: usize = 2;
/// Constant sampling: σ set, sample count, R, r-list and cost as printed.
pub const EXAMPLE1_CONSTANT_SIGMAS: [usize; 3] = [1, 13, 37];
pub const EXAMPLE1_CONSTANT_C: usize = 16;
pub const EXAMPLE1_CONSTANT_R: usize = 24;
pub const EXAMPLE1_CONSTANT_RLIST: [usize; 15] = [0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 3, 3, 4, 4, 4];
pub const EXAMPLE1_CONSTANT_COST: f64 = 69.97;
pub const EXAMPLE1_GREEDY_R: usize = 67;
pub const EXAMPLE1_GREEDY_C: usize = 22;
pub const EXAMPLE1_GREEDY_COST: f64 = 63.97;
pub const EXAMPLE2_CYCLIC_R: usize = 72;
pub const EXAMPLE2_CYCLIC_C: usize = 22;
pub const EXAMPLE2_CYCLIC_COST: f64 = 59.97;

fn srows(data: &[(&[usize], usize, usize)]) -> Vec<ScheduleRow> {
    data.iter()
        .enumerate()
        .map(|(k, &(set, q, sigma))| ScheduleRow {
            i: k + 1,
            repeated: set.to_vec(),
            q,
            sigma,
        })
        .collect()
}

/// Greedy schedule table for the running example.
pub fn example1_greedy_rows() -> Vec<ScheduleRow> {
    srows(&[
        (&[6], 1, 5),
        (&[19, 24], 2, 13),
        (&[26, 31, 44], 3, 7),
        (&[52, 57, 70, 77], 4, 26),
        (&[63, 68, 81, 88, 114], 5, 11),
        (&[80, 85, 98, 105, 131, 142], 6, 17),
        (&[85, 103], 2, 5),
        (&[114, 147], 2, 11),
        (&[131, 164, 175], 3, 17),
        (&[118, 136], 2, 5),
        (&[125, 138], 2, 2),
        (&[131, 136, 182], 3, 11),
        (&[138, 143, 156], 3, 7),
        (&[164, 169, 182, 189], 4, 26),
        (&[175, 180, 193, 200, 226], 5, 11),
        (&[192, 197, 210, 217, 243, 254], 6, 17),
        (&[197, 215], 2, 5),
        (&[199, 217], 2, 2),
        (&[210, 215, 261], 3, 11),
        (&[217, 222, 235], 3, 7),
        (&[243, 248, 261, 268], 4, 26),
    ])
}

/// Cyclic schedule table for the running example.
pub fn example2_cyclic_rows() -> Vec<ScheduleRow> {
    srows(&[
        (&[6], 1, 5),
        (&[19, 24], 2, 13),
        (&[26, 31, 44], 3, 7),
        (&[52, 57, 70, 77], 4, 26),
        (&[63, 68, 81, 88, 114], 5, 11),
        (&[80, 85, 98, 105, 131, 142], 6, 17),
        (&[85, 103], 2, 5),
        (&[98, 103], 2, 13),
        (&[105, 110, 123], 3, 7),
        (&[131, 136, 149, 156], 4, 26),
        (&[142, 147, 160, 167, 193], 5, 11),
        (&[159, 164, 177, 184, 210, 221], 6, 17),
        (&[164, 182], 2, 5),
        (&[177, 182], 2, 13),
        (&[184, 189, 202], 3, 7),
        (&[210, 215, 228, 235], 4, 26),
        (&[221, 226, 239, 246, 272], 5, 11),
        (&[238, 243, 256, 263, 289, 300], 6, 17),
        (&[243, 261], 2, 5),
        (&[256, 261], 2, 13),
        (&[263, 268, 281], 3, 7),
    ])
}

fn wrows(n: usize, m: usize, q: &[usize]) -> Vec<WindowRow> {
    q.iter()
        .enumerate()
        .map(|(k, &q)| WindowRow {
            i: k + 1,
            recovered: n - q,
            q,
            size_log2: (n - m).saturating_sub(q),
        })
        .collect()
}

/// NFSR window example: L = 128, (n, m) = (8, 1), p = 23.
pub const EXAMPLE3_TAPS: [usize; 8] = [1, 7, 21, 26, 52, 67, 89, 105];
pub const EXAMPLE3_LEN: usize = 128;
pub const EXAMPLE3_N: usize = 8;
pub const EXAMPLE3_M: usize = 1;
pub const EXAMPLE3_P: usize = 23;
pub const EXAMPLE3_RECOVERED: usize = 122;
pub const EXAMPLE3_COST: f64 = 106.0;
pub const EXAMPLE3_DATA: u64 = 150;
pub const EXAMPLE3_MEMORY_LOG2_BOUND: u32 = 15;

/// Rows follow the first sample, which recovers all n bits.
pub fn example3_rows() -> Vec<WindowRow> {
    let q = [
        0, 0, 0, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 4, 5, 5, 5, 5, 5, 5,
    ];
    wrows(EXAMPLE3_N, EXAMPLE3_M, &q)
}

fn example3_monomials() -> Vec<Vec<usize>> {
    vec![
        vec![1],
        vec![27],
        vec![57],
        vec![92],
        vec![97],
        vec![4, 68],
        vec![12, 14],
        vec![18, 19],
        vec![28, 60],
        vec![41, 49],
        vec![62, 66],
        vec![69, 85],
    ]
}

/// Grain-like update without cubic and quartic terms, complemented.
pub fn example3_nfsr() -> Result<NfsrSpec> {
    NfsrSpec::new(128, true, example3_monomials())
}

/// Hybrid window example: two 128-bit registers, (n, m) = (17, 1), p = 33.
pub const EXAMPLE4_NFSR_TAPS: [usize; 9] = [2, 12, 15, 36, 45, 64, 73, 89, 95];
pub const EXAMPLE4_LFSR_TAPS: [usize; 8] = [8, 13, 20, 42, 60, 79, 93, 95];
pub const EXAMPLE4_LEN: usize = 256;
pub const EXAMPLE4_N: usize = 17;
pub const EXAMPLE4_M: usize = 1;
pub const EXAMPLE4_P: usize = 33;
pub const EXAMPLE4_RECOVERED_SUM: usize = 227;
pub const EXAMPLE4_PRODUCT_LOG2: usize = 196;
pub const EXAMPLE4_COST: f64 = 224.0;

pub fn example4_rows() -> Vec<WindowRow> {
    let q = [
        0, 1, 2, 2, 3, 4, 5, 5, 7, 8, 8, 8, 8, 9, 9, 10, 10, 11, 13, 13, 14, 15, 15, 15, 15, 15,
        15, 15, 15, 15, 15,
    ];
    wrows(EXAMPLE4_N, EXAMPLE4_M, &q)
}

pub fn example4_hybrid() -> Result<HybridSpec> {
    let lfsr = LfsrSpec::new(128, vec![1, 8, 39, 71, 82, 97])?;
    let nfsr = NfsrSpec::new(128, false, example3_monomials())?;
    HybridSpec::new(lfsr, nfsr, true)
}

/// Restricted annihilator combination: preimage sizes, sample counts,
/// register length and solver exponent, with the printed log2 cost.
pub const ANNIHILATOR_SIZES: [f64; 2] = [5.0, 2.5];
pub const ANNIHILATOR_COUNTS: [usize; 2] = [1, 42];
pub const ANNIHILATOR_LEN: usize = 87;
pub const ANNIHILATOR_OMEGA: f64 = 2.807;
pub const ANNIHILATOR_COST: f64 = 76.32;

/// Grain-128 registers used as single filter-generator registers.
pub const GRAIN_LEN: usize = 128;
pub const GRAIN_LFSR_TAPS: [usize; 8] = EXAMPLE4_LFSR_TAPS;
pub const GRAIN_NFSR_TAPS: [usize; 9] = EXAMPLE4_NFSR_TAPS;
pub const TABLE6_LFSR: [f64; 3] = [108.0, 125.0, 118.0];
pub const TABLE7_NFSR: [f64; 3] = [114.0, 125.0, 122.0];
pub const GRAIN_LFSR_IMPROVED: [usize; 8] = [1, 16, 27, 54, 71, 95, 108, 127];
pub const GRAIN_LFSR_IMPROVED_COSTS: [f64; 3] = [129.0, 132.0, 123.0];
pub const GRAIN_NFSR_IMPROVED: [usize; 9] = [3, 10, 29, 42, 59, 67, 88, 103, 126];
pub const GRAIN_NFSR_IMPROVED_COSTS: [f64; 3] = [130.0, 139.0, 125.0];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        for r in table2()
            .iter()
            .chain(&table3())
            .chain(&table4_algorithmic())
        {
            assert_eq!(r.differences.len() + 1, r.n);
            assert!(r.taps().is_ok());
        }
        for r in table4_fpds() {
            assert_eq!(r.taps.len(), r.n);
            assert!(r.taps().is_ok());
        }
        let g: usize = example1_greedy_rows().iter().map(|r| r.q).sum();
        assert_eq!(g, EXAMPLE1_GREEDY_R);
        let c: usize = example2_cyclic_rows().iter().map(|r| r.q).sum();
        assert_eq!(c, EXAMPLE2_CYCLIC_R);
        let rec: usize = example3_rows().iter().map(|r| r.recovered).sum();
        assert_eq!(EXAMPLE3_N + rec, EXAMPLE3_RECOVERED);
        let rows = example4_rows();
        assert_eq!(
            rows.iter().map(|r| r.recovered).sum::<usize>(),
            EXAMPLE4_RECOVERED_SUM
        );
        assert_eq!(
            rows.iter().map(|r| r.size_log2).sum::<usize>(),
            EXAMPLE4_PRODUCT_LOG2
        );
        assert!(example3_nfsr().is_ok());
        assert!(example4_hybrid().is_ok());
    }
}
