use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Precision schedule for certified computations.
///
/// Work starts at `start_bits` and grows by `growth_num / growth_den` per
/// retry, ending with one attempt at exactly `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    pub growth_num: u32,
    pub growth_den: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 128,
            max_bits: 4096,
            growth_num: 2,
            growth_den: 1,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32, growth_num: u32, growth_den: u32) -> Result<Self> {
        let p = PrecisionPolicy {
            start_bits,
            max_bits,
            growth_num,
            growth_den,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start_bits < 64 {
            return Err(Error::domain("precision policy: start-bits must be at least 64"));
        }
        if self.max_bits < self.start_bits {
            return Err(Error::domain("precision policy: max-bits must be >= start-bits"));
        }
        if self.growth_den == 0 || self.growth_num <= self.growth_den {
            return Err(Error::domain("precision policy: growth factor must exceed 1"));
        }
        Ok(())
    }

    /// Same policy with a different starting precision (clamped to the cap).
    pub fn starting_at(&self, bits: u32) -> PrecisionPolicy {
        PrecisionPolicy {
            start_bits: bits.clamp(self.start_bits, self.max_bits),
            ..*self
        }
    }

    /// Strictly increasing precision ladder.
    pub fn precisions(&self) -> Vec<u32> {
        let mut out = vec![self.start_bits];
        let mut cur = self.start_bits as u64;
        while (cur as u32) < self.max_bits {
            let next = (cur * self.growth_num as u64).div_ceil(self.growth_den as u64);
            cur = next.max(cur + 1).min(self.max_bits as u64);
            out.push(cur as u32);
        }
        out
    }

    /// Runs `attempt` along the precision ladder until it returns `Some`.
    pub fn escalate<T>(
        &self,
        context: impl FnOnce() -> String,
        mut attempt: impl FnMut(u32) -> Result<Option<T>>,
    ) -> Result<T> {
        for prec in self.precisions() {
            if let Some(v) = attempt(prec)? {
                return Ok(v);
            }
        }
        Err(Error::exhausted(self.max_bits, context()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_doubles_and_ends_at_cap() {
        let p = PrecisionPolicy::default();
        assert_eq!(p.precisions(), vec![128, 256, 512, 1024, 2048, 4096]);
        let q = PrecisionPolicy::new(100, 1000, 3, 2).unwrap();
        let l = q.precisions();
        assert_eq!(l.first(), Some(&100));
        assert_eq!(l.last(), Some(&1000));
        assert!(l.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_policies() {
        assert!(PrecisionPolicy::new(32, 128, 2, 1).is_err());
        assert!(PrecisionPolicy::new(128, 64, 2, 1).is_err());
        assert!(PrecisionPolicy::new(128, 256, 1, 1).is_err());
    }

    #[test]
    fn escalation_reports_exhaustion() {
        let p = PrecisionPolicy::new(64, 256, 2, 1).unwrap();
        let mut seen = vec![];
        let r: Result<()> = p.escalate(
            || "never".into(),
            |bits| {
                seen.push(bits);
                Ok(None)
            },
        );
        assert!(matches!(r, Err(Error::PrecisionExhausted { max_bits: 256, .. })));
        assert_eq!(seen, vec![64, 128, 256]);
    }
}
