//! Computably enumerable sets given as monotone stage enumerations `s -> R_s`.

pub mod machine;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
pub use machine::{machine_halts_within, Instruction, Program};
use machine::Run;

/// Answer of a semidecision procedure: membership is confirmed or still open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semidecision {
    Yes,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CESet {
    /// Finite set with injected entry stages: `n` enters at stage `entry[n]`.
    Explicit(BTreeMap<u64, u64>),
    /// `{n : program n halts}`, with `R_s = {n <= s : program n halts within s steps}`.
    MachineHalting,
}

impl CESet {
    pub fn explicit<I: IntoIterator<Item = (u64, u64)>>(entries: I) -> CESet {
        CESet::Explicit(entries.into_iter().collect())
    }

    pub fn empty() -> CESet {
        CESet::Explicit(BTreeMap::new())
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, CESet::Explicit(_))
    }

    /// Whether `n` belongs to `R_s`.
    pub fn in_stage(&self, n: u64, s: u64) -> bool {
        match self {
            CESet::Explicit(entry) => entry.get(&n).is_some_and(|&sigma| sigma <= s),
            CESet::MachineHalting => n <= s && machine_halts_within(n, s),
        }
    }

    /// The finite set `R_s`.
    pub fn stage(&self, s: u64) -> BTreeSet<u64> {
        match self {
            CESet::Explicit(entry) => entry.iter().filter(|(_, &sigma)| sigma <= s).map(|(&n, _)| n).collect(),
            CESet::MachineHalting => (0..=s).filter(|&n| machine_halts_within(n, s)).collect(),
        }
    }

    pub fn member_semidecide(&self, n: u64, fuel: u64) -> Semidecision {
        if self.in_stage(n, fuel) {
            Semidecision::Yes
        } else {
            Semidecision::Unknown
        }
    }

    /// Entry stage `sigma(n)` for explicit sets (`None` if `n` never enters).
    pub fn entry_stage(&self, n: u64) -> Result<Option<u64>> {
        match self {
            CESet::Explicit(entry) => Ok(entry.get(&n).copied()),
            CESet::MachineHalting => Err(Error::NotExplicit),
        }
    }

    /// Membership in the limit set; only decidable for explicit sets.
    pub fn limit_contains(&self, n: u64) -> Result<bool> {
        Ok(self.entry_stage(n)?.is_some())
    }

    /// Largest entry stage of an explicit set (0 when empty).
    pub fn max_entry_stage(&self) -> Result<u64> {
        match self {
            CESet::Explicit(entry) => Ok(entry.values().copied().max().unwrap_or(0)),
            CESet::MachineHalting => Err(Error::NotExplicit),
        }
    }

    /// Incremental enumeration yielding, for `s = 0, 1, 2, ...`, the elements
    /// that enter at stage `s`. Machines are simulated once each rather than
    /// re-run per stage.
    pub fn stages(&self) -> StageEnumerator<'_> {
        StageEnumerator { set: self, stage: 0, running: Vec::new() }
    }
}

pub struct StageEnumerator<'a> {
    set: &'a CESet,
    stage: u64,
    running: Vec<(u64, Program, Run)>,
}

impl Iterator for StageEnumerator<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let s = self.stage;
        self.stage += 1;
        let entered = match self.set {
            CESet::Explicit(entry) => entry.iter().filter(|(_, &sigma)| sigma == s).map(|(&n, _)| n).collect(),
            CESet::MachineHalting => {
                // program s joins with s steps of catch-up; everyone else advances by one
                let program = Program::decode_u64(s);
                let mut run = Run::new();
                while run.steps < s && !run.halted(&program) {
                    run.step(&program);
                }
                for (_, p, r) in self.running.iter_mut() {
                    if !r.halted(p) {
                        r.step(p);
                    }
                }
                self.running.push((s, program, run));
                let mut entered = Vec::new();
                self.running.retain(|(n, p, r)| {
                    let done = r.halted(p);
                    if done {
                        entered.push(*n);
                    }
                    !done
                });
                entered.sort_unstable();
                entered
            }
        };
        Some(entered)
    }
}

impl FromStr for CESet {
    type Err = Error;

    /// `machine`, `none`/empty for the empty set, or `n@stage` pairs: `1@2,3@5`.
    fn from_str(s: &str) -> Result<CESet> {
        let s = s.trim();
        if s == "machine" {
            return Ok(CESet::MachineHalting);
        }
        if s.is_empty() || s == "none" {
            return Ok(CESet::empty());
        }
        let mut entries = BTreeMap::new();
        for pair in s.split(',') {
            let (n, stage) = pair
                .trim()
                .split_once('@')
                .ok_or_else(|| Error::SetSyntax(format!("`{pair}` is not of the form n@stage")))?;
            let n: u64 = n.trim().parse().map_err(|_| Error::SetSyntax(format!("bad element `{n}`")))?;
            let stage: u64 =
                stage.trim().parse().map_err(|_| Error::SetSyntax(format!("bad stage `{stage}`")))?;
            if entries.insert(n, stage).is_some() {
                return Err(Error::SetSyntax(format!("element {n} listed twice")));
            }
        }
        Ok(CESet::Explicit(entries))
    }
}

impl fmt::Display for CESet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CESet::MachineHalting => f.write_str("machine"),
            CESet::Explicit(entry) if entry.is_empty() => f.write_str("none"),
            CESet::Explicit(entry) => {
                let parts: Vec<String> = entry.iter().map(|(n, s)| format!("{n}@{s}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}
