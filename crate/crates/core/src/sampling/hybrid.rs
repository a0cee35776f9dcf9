use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sampling::profile::Builder;
use crate::sampling::{RepetitionProfile, SamplingMode, StopRule, TapSet};

/// How labels of the registers of a hybrid generator are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingModel {
    /// Each register has its own timeline; repeats only within a register.
    PerRegister,
    /// One shared timeline; register tags ignored, equal labels collapse.
    Merged,
}

/// Direct repeated-bit counting for several tap sets clocked together.
/// `n` of the profile is the number of distinct inputs under the model and
/// the register length is the joint state size.
pub fn tagged_profile(
    groups: &[&TapSet],
    steps: &[usize],
    stop: StopRule,
    model: CountingModel,
) -> Result<RepetitionProfile> {
    if groups.is_empty() {
        return invalid("no tap sets");
    }
    let len: usize = groups.iter().map(|t| t.register_length()).sum();
    let max_len = groups.iter().map(|t| t.register_length()).max().unwrap();
    if let Some(&s) = steps.iter().find(|&&s| s == 0 || s > max_len) {
        return invalid(format!("sampling step {s} outside 1..={max_len}"));
    }
    let (base, stride) = match model {
        CountingModel::PerRegister => {
            let t = groups.len();
            let base: Vec<usize> = groups
                .iter()
                .enumerate()
                .flat_map(|(tag, ts)| ts.positions().iter().map(move |&l| l * t + tag))
                .collect();
            (base, t)
        }
        CountingModel::Merged => {
            let mut base: Vec<usize> = groups
                .iter()
                .flat_map(|ts| ts.positions().iter().copied())
                .collect();
            base.sort_unstable();
            base.dedup();
            (base, 1)
        }
    };
    let n = base.len();
    let mut b = Builder::new(base, stride);
    let mut it = steps.iter().copied();
    b.run(stop, n, len, |_| it.next())?;
    Ok(b.finish(SamplingMode::Custom, None, n, len))
}
