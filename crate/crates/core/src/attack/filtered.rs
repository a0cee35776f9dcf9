use crate::error::{invalid, Result};
use crate::registers::PreimageSpace;

/// Members of `space` whose input bit x_i equals b for every (i, b) in
/// `known`, with i in 1..=n.
pub fn filtered_preimages(
    space: &PreimageSpace,
    n: usize,
    known: &[(usize, bool)],
) -> Result<PreimageSpace> {
    let mut mask = 0u32;
    let mut want = 0u32;
    for &(i, b) in known {
        if i == 0 || i > n {
            return invalid(format!("input index {i} outside 1..={n}"));
        }
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 && (want & bit != 0) != b {
            return Ok(PreimageSpace {
                output_value: space.output_value,
                members: Vec::new(),
            });
        }
        mask |= bit;
        if b {
            want |= bit;
        }
    }
    Ok(PreimageSpace {
        output_value: space.output_value,
        members: space
            .members
            .iter()
            .copied()
            .filter(|&x| x & mask == want)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::{preimage_table, FilterSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_restriction_keeps_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = FilterSpec::random_uniform(6, 2, &mut rng).unwrap();
        let t = preimage_table(&f);
        assert_eq!(filtered_preimages(&t[1], 6, &[]).unwrap(), t[1]);
        let r = filtered_preimages(&t[1], 6, &[(1, true), (4, false)]).unwrap();
        assert!(r.members.iter().all(|&x| x & 1 == 1 && x & 8 == 0));
        assert!(filtered_preimages(&t[1], 6, &[(7, true)]).is_err());
    }
}
