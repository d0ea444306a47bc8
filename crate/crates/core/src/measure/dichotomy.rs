use std::io::Write;

use rug::Rational;
use serde::Serialize;

use crate::arith::PrecisionPolicy;
use crate::error::{Error, Result};
use crate::system::{solve_system_two, DiophSystem, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyRow {
    pub theta: String,
    pub theta_f64: f64,
    /// `θ < √a`.
    pub below_sqrt_a: bool,
    pub phi: f64,
    pub solutions: u64,
    pub first: Option<u64>,
    pub last: Option<u64>,
    pub complete: bool,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SideSummary {
    pub thetas: usize,
    pub total: u64,
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub budget: u64,
    pub rows: Vec<DichotomyRow>,
    pub below: SideSummary,
    pub above: SideSummary,
}

impl DichotomyReport {
    /// CSV with header `theta,side,phi,solutions,first,last,complete`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta", "side", "phi", "solutions", "first", "last", "complete"])?;
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.write_record([
                r.theta.clone(),
                if r.below_sqrt_a { "below" } else { "above" }.to_string(),
                format!("{:.6}", r.phi),
                r.solutions.to_string(),
                opt(r.first),
                opt(r.last),
                r.complete.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn summarize(rows: &[&DichotomyRow]) -> SideSummary {
    if rows.is_empty() {
        return SideSummary::default();
    }
    let total: u64 = rows.iter().map(|r| r.solutions).sum();
    SideSummary {
        thetas: rows.len(),
        total,
        mean: total as f64 / rows.len() as f64,
        min: rows.iter().map(|r| r.solutions).min().unwrap_or(0),
        max: rows.iter().map(|r| r.solutions).max().unwrap_or(0),
    }
}

/// Runs the second system at every grid `θ` and compares the two sides of
/// `√a`. `θ = √a` itself is rejected.
pub fn dichotomy_scan(
    sys: &DiophSystem,
    grid: &[Rational],
    budget: u64,
    opts: &SolverOptions,
    policy: &PrecisionPolicy,
) -> Result<DichotomyReport> {
    sys.validate()?;
    if grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows = Vec::with_capacity(grid.len());
    for theta in grid {
        let sq = Rational::from(theta.square_ref());
        if sq == sys.a {
            return Err(Error::domain(format!("theta = {theta} equals sqrt(a)")));
        }
        let rep = solve_system_two(sys, theta, budget, opts, policy)?;
        let ns = rep.ns();
        rows.push(DichotomyRow {
            theta: theta.to_string(),
            theta_f64: theta.to_f64(),
            below_sqrt_a: (sq < sys.a) == (sys.a < 1),
            phi: sys.a.to_f64().ln() / theta.to_f64().ln(),
            solutions: ns.len() as u64,
            first: ns.first().copied(),
            last: ns.last().copied(),
            complete: rep.complete,
            skipped: rep.skipped.len(),
        });
    }
    let below: Vec<&DichotomyRow> = rows.iter().filter(|r| r.below_sqrt_a).collect();
    let above: Vec<&DichotomyRow> = rows.iter().filter(|r| !r.below_sqrt_a).collect();
    Ok(DichotomyReport {
        budget,
        below: summarize(&below),
        above: summarize(&above),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational_list;

    fn sys() -> DiophSystem {
        let p = |s| crate::arith::parse_rational(s).unwrap();
        DiophSystem::new(p("1/4"), p("1"), p("1"), p("0"), p("1/2")).unwrap()
    }

    #[test]
    fn sides_are_split_at_sqrt_a() {
        let grid = parse_rational_list("0.3,0.45,0.55,0.7").unwrap();
        let r = dichotomy_scan(&sys(), &grid, 2000, &SolverOptions::default(), &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.below.thetas, 2);
        assert_eq!(r.above.thetas, 2);
        assert!(r.rows.iter().all(|row| row.solutions > 0 && row.complete));
    }

    #[test]
    fn rejects_the_threshold() {
        let grid = parse_rational_list("0.3,1/2").unwrap();
        assert!(dichotomy_scan(&sys(), &grid, 100, &SolverOptions::default(), &PrecisionPolicy::default()).is_err());
    }
}
