//! Windows of `PS(α) = {⌊n^α⌋ : n ≥ 1}` and queries over them.

use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{floor_pow, root_ceil, Exponent};
use crate::error::{Error, Result};

/// `PS(α) ∩ [1, M]`.
///
/// `n ↦ ⌊n^α⌋` is strictly increasing for `α > 1`, so the member at index
/// `i` has witness `n = i + 1` and the witness map needs no storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSWindow {
    alpha: Exponent,
    limit: u64,
    members: Vec<u64>,
}

impl PSWindow {
    /// Builds the window by evaluating `⌊n^α⌋` for every `n` with
    /// `n^α < M + 1`. Evaluation is split across the current rayon pool;
    /// the ordered collect keeps the result independent of the worker count.
    pub fn new(alpha: &Exponent, limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::domain("window limit M must be >= 1"));
        }
        let count = root_ceil(limit + 1, alpha)? - 1;
        let members = (1..=count)
            .into_par_iter()
            .map(|n| floor_pow(n, alpha))
            .collect::<Result<Vec<u64>>>()?;
        debug_assert!(members.last().is_none_or(|&m| m <= limit));
        Ok(PSWindow {
            alpha: alpha.clone(),
            limit,
            members,
        })
    }

    pub fn alpha(&self) -> &Exponent {
        &self.alpha
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: u64) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    /// The `n` with `⌊n^α⌋ = m`, when `m` is a member.
    pub fn witness(&self, m: u64) -> Option<u64> {
        self.members.binary_search(&m).ok().map(|i| i as u64 + 1)
    }

    /// `(n, m)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.members.iter().enumerate().map(|(i, &m)| (i as u64 + 1, m))
    }

    pub fn member_set(&self) -> HashSet<u64> {
        self.members.iter().copied().collect()
    }

    /// CSV with header `n,m`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "m"])?;
        for (n, m) in self.iter() {
            out.write_record([n.to_string(), m.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shorthand for [`PSWindow::new`].
pub fn ps_window(alpha: &Exponent, limit: u64) -> Result<PSWindow> {
    PSWindow::new(alpha, limit)
}

/// Exact membership test `⌊⌈m^{1/α}⌉^α⌋ = m`.
///
/// If `m = ⌊n^α⌋` then `n` is the smallest integer with `n^α ≥ m`, so the
/// ceiling of the root is the only possible witness.
pub fn is_member(m: u64, alpha: &Exponent) -> Result<bool> {
    if m == 0 {
        return Err(Error::domain("membership is defined for m >= 1"));
    }
    Ok(floor_pow(root_ceil(m, alpha)?, alpha)? == m)
}

/// Witness of a member, verified.
pub fn member_witness(m: u64, alpha: &Exponent) -> Result<Option<u64>> {
    if m == 0 {
        return Ok(None);
    }
    let n = root_ceil(m, alpha)?;
    Ok((floor_pow(n, alpha)? == m).then_some(n))
}

/// An arithmetic progression `z, z + x, …, z + (k − 1)x` inside `PS(α)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APRecord {
    pub start: u64,
    pub step: u64,
    pub length: u64,
}

impl APRecord {
    /// Checks every term with [`is_member`].
    pub fn new(start: u64, step: u64, length: u64, alpha: &Exponent) -> Result<Self> {
        let rec = APRecord { start, step, length };
        if !rec.verify(alpha)? {
            return Err(Error::Verification(format!(
                "progression {start} + i*{step}, i < {length} is not inside PS({alpha})"
            )));
        }
        Ok(rec)
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |i| self.start + i * self.step)
    }

    pub fn verify(&self, alpha: &Exponent) -> Result<bool> {
        for t in self.terms() {
            if !is_member(t, alpha)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Smallest member `z` such that `z, z + x, …, z + (k − 1)x` all lie in
/// `PS(α) ∩ [1, B]`.
pub fn find_ap(alpha: &Exponent, step: u64, length: u64, bound: u64) -> Result<Option<APRecord>> {
    if step == 0 {
        return Err(Error::domain("progression step must be >= 1"));
    }
    if length < 2 {
        return Err(Error::domain("progression length must be >= 2"));
    }
    if bound == 0 {
        return Ok(None);
    }
    let w = PSWindow::new(alpha, bound)?;
    let set = w.member_set();
    let span = step.checked_mul(length - 1).ok_or_else(|| Error::Overflow("z + (k-1)x".into()))?;
    for &z in w.members() {
        if z.saturating_add(span) > bound {
            break;
        }
        if (1..length).all(|i| set.contains(&(z + i * step))) {
            return APRecord::new(z, step, length, alpha).map(Some);
        }
    }
    Ok(None)
}

/// A witness `FS(x, x, z) = {x, 2x, z, z + x, z + 2x} ⊆ PS(α)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fs3Witness {
    pub x: u64,
    pub z: u64,
}

impl Fs3Witness {
    pub fn values(&self) -> [u64; 5] {
        [self.x, 2 * self.x, self.z, self.z + self.x, self.z + 2 * self.x]
    }

    pub fn verify(&self, alpha: &Exponent) -> Result<bool> {
        for v in self.values() {
            if !is_member(v, alpha)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Searches ascending `x` with `x, 2x ∈ PS(α)`, then ascending `z` starting
/// a 3-term progression of step `x`. All five values stay `≤ B`.
pub fn find_fs3(alpha: &Exponent, bound: u64) -> Result<Option<Fs3Witness>> {
    if bound == 0 {
        return Ok(None);
    }
    let w = PSWindow::new(alpha, bound)?;
    let set = w.member_set();
    let members = w.members();
    for &x in members {
        if 2 * x > bound {
            break;
        }
        if !set.contains(&(2 * x)) {
            continue;
        }
        for &z in members {
            if z + 2 * x > bound {
                break;
            }
            if set.contains(&(z + x)) && set.contains(&(z + 2 * x)) {
                let wit = Fs3Witness { x, z };
                if !wit.verify(alpha)? {
                    return Err(Error::Verification(format!("FS3 witness {wit:?}")));
                }
                return Ok(Some(wit));
            }
        }
    }
    Ok(None)
}

/// Successive differences of a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub gaps: Vec<u64>,
    pub min: u64,
    pub max: u64,
    pub mean: f64,
}

pub fn gap_stats(w: &PSWindow) -> Result<GapStats> {
    if w.len() < 2 {
        return Err(Error::TooFewMembers(w.len()));
    }
    let gaps: Vec<u64> = w.members().windows(2).map(|p| p[1] - p[0]).collect();
    let min = *gaps.iter().min().expect("non-empty");
    let max = *gaps.iter().max().expect("non-empty");
    let mean = (w.members()[w.len() - 1] - w.members()[0]) as f64 / gaps.len() as f64;
    Ok(GapStats { gaps, min, max, mean })
}
