use core::fmt;
use core::str::FromStr;

use super::WorldSet;

/// Frame conditions required of every agent's possibility relation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModelClass {
    pub reflexive: bool,
    pub transitive: bool,
    pub euclidean: bool,
}

impl ModelClass {
    pub const ANY: ModelClass = ModelClass { reflexive: false, transitive: false, euclidean: false };
    pub const EQUIVALENCE: ModelClass = ModelClass { reflexive: true, transitive: true, euclidean: true };

    pub const fn new(reflexive: bool, transitive: bool, euclidean: bool) -> Self {
        ModelClass { reflexive, transitive, euclidean }
    }

    /// Whether a relation, given as successor sets, meets the conditions.
    pub fn admits(&self, succ: &[WorldSet]) -> bool {
        (!self.reflexive || is_reflexive(succ))
            && (!self.transitive || is_transitive(succ))
            && (!self.euclidean || is_euclidean(succ))
    }

    /// Smallest superset of `succ` meeting the conditions.
    pub fn close(&self, succ: &mut [WorldSet]) {
        if self.reflexive {
            for (s, out) in succ.iter_mut().enumerate() {
                out.insert(s);
            }
        }
        loop {
            let mut changed = false;
            for s in 0..succ.len() {
                let mut next = succ[s];
                for t in succ[s].iter() {
                    if self.transitive {
                        next = next.union(succ[t]);
                    }
                }
                if next != succ[s] {
                    succ[s] = next;
                    changed = true;
                }
                if self.euclidean {
                    let from_s = succ[s];
                    for t in from_s.iter() {
                        let grown = succ[t].union(from_s);
                        if grown != succ[t] {
                            succ[t] = grown;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
}

pub(crate) fn is_reflexive(succ: &[WorldSet]) -> bool {
    succ.iter().enumerate().all(|(s, out)| out.contains(s))
}

pub(crate) fn is_transitive(succ: &[WorldSet]) -> bool {
    succ.iter().all(|out| out.iter().all(|t| succ[t].is_subset(*out)))
}

pub(crate) fn is_euclidean(succ: &[WorldSet]) -> bool {
    succ.iter().all(|out| out.iter().all(|t| out.is_subset(succ[t])))
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == ModelClass::ANY {
            return f.write_str("none");
        }
        for (on, c) in [(self.reflexive, 'r'), (self.transitive, 't'), (self.euclidean, 'e')] {
            if on {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown frame condition `{0}`; expected letters from `r`, `t`, `e`")]
pub struct ParseClassError(pub char);

impl FromStr for ModelClass {
    type Err = ParseClassError;

    /// Accepts `rte`, `r,t,e`, `none`, or the empty string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = ModelClass::ANY;
        if s.trim() == "none" {
            return Ok(c);
        }
        for ch in s.chars() {
            match ch {
                'r' => c.reflexive = true,
                't' => c.transitive = true,
                'e' => c.euclidean = true,
                ',' | ' ' | '{' | '}' => {}
                other => return Err(ParseClassError(other)),
            }
        }
        Ok(c)
    }
}
