use rug::Rational;
use serde::Serialize;

use crate::arith::CertifiedValue;

/// One interval with rational endpoints and explicit closedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Component {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Component { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Component { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn half_open(lo: Rational, hi: Rational) -> Self {
        Component { lo, hi, lo_closed: true, hi_closed: false }
    }

    pub fn length(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    fn intersect(&self, other: &Component) -> Option<Component> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        (lo < hi).then_some(Component { lo, hi, lo_closed, hi_closed })
    }
}

/// A finite union of disjoint intervals, sorted by left endpoint.
///
/// Components are exact. When they approximate a set whose endpoints are
/// only known as enclosures, `error` bounds the measure of the symmetric
/// difference between the stored set and the true one.
///
/// Single points carry no measure and are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet {
    components: Vec<Component>,
    error: Rational,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn from_components(parts: impl IntoIterator<Item = Component>) -> Self {
        Self::with_error(parts, Rational::new())
    }

    pub fn with_error(parts: impl IntoIterator<Item = Component>, error: Rational) -> Self {
        let mut v: Vec<Component> = parts.into_iter().filter(|c| c.lo < c.hi).collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Component> = Vec::with_capacity(v.len());
        for c in v {
            if let Some(last) = out.last_mut() {
                let touches = c.lo < last.hi || (c.lo == last.hi && (last.hi_closed || c.lo_closed));
                if touches {
                    match c.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = c.hi;
                            last.hi_closed = c.hi_closed;
                        }
                        std::cmp::Ordering::Equal => last.hi_closed |= c.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(c);
        }
        IntervalSet { components: out, error }
    }

    pub fn interval(c: Component) -> Self {
        Self::from_components([c])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn error(&self) -> &Rational {
        &self.error
    }

    /// Exact total length of the stored components.
    pub fn length(&self) -> Rational {
        self.components.iter().map(Component::length).sum()
    }

    /// Measure of the represented set: `length ± error`, clamped at 0.
    pub fn measure(&self) -> CertifiedValue {
        let len = self.length();
        if self.error == 0 {
            return CertifiedValue::exact(len);
        }
        let lo = Rational::from(&len - &self.error).max(Rational::new());
        CertifiedValue::new(lo, len + &self.error)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let i = self.components.partition_point(|c| c.hi < *x);
        self.components[i..]
            .iter()
            .take_while(|c| c.lo <= *x)
            .any(|c| c.contains(x))
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.components, &other.components);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(c) = a[i].intersect(&b[j]) {
                out.push(c);
            }
            if a[i].hi < b[j].hi || (a[i].hi == b[j].hi && !a[i].hi_closed) {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::with_error(out, Rational::from(&self.error + &other.error))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::with_error(
            self.components.iter().chain(&other.components).cloned(),
            Rational::from(&self.error + &other.error),
        )
    }

    pub fn summary(&self) -> IntervalSetSummary {
        let m = self.measure();
        IntervalSetSummary {
            components: self.len(),
            measure: m.to_f64(),
            error: self.error.to_f64(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalSetSummary {
    pub components: usize,
    pub measure: f64,
    pub error: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn merging_respects_closedness() {
        let s = IntervalSet::from_components([
            Component::open(q(0, 1), q(1, 2)),
            Component::open(q(1, 2), q(1, 1)),
        ]);
        assert_eq!(s.len(), 2);
        assert!(!s.contains(&q(1, 2)));
        let t = IntervalSet::from_components([
            Component::half_open(q(0, 1), q(1, 2)),
            Component::half_open(q(1, 2), q(1, 1)),
        ]);
        assert_eq!(t.len(), 1);
        assert!(t.contains(&q(1, 2)));
        assert!(!t.contains(&q(1, 1)));
        assert_eq!(t.length(), q(1, 1));
    }

    #[test]
    fn intersection_and_union() {
        let a = IntervalSet::from_components([
            Component::closed(q(0, 1), q(2, 1)),
            Component::closed(q(3, 1), q(5, 1)),
        ]);
        let b = IntervalSet::from_components([Component::open(q(1, 1), q(4, 1))]);
        let i = a.intersect(&b);
        assert_eq!(i.length(), q(2, 1));
        assert!(!i.contains(&q(1, 1)));
        assert!(i.contains(&q(3, 1)));
        let u = a.union(&b);
        assert_eq!(u.len(), 1);
        assert_eq!(u.length(), q(5, 1));
        assert_eq!(i.length() + u.length(), a.length() + b.length());
    }

    #[test]
    fn error_widens_the_measure() {
        let s = IntervalSet::with_error([Component::closed(q(0, 1), q(1, 2))], q(1, 100));
        let m = s.measure();
        assert_eq!(m.lo(), &q(49, 100));
        assert_eq!(m.hi(), &q(51, 100));
    }

    #[test]
    fn points_are_dropped() {
        let s = IntervalSet::from_components([Component::closed(q(1, 1), q(1, 1))]);
        assert!(s.is_empty());
    }
}
