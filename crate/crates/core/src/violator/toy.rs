//! Small closed-form violator spaces used to validate the sampling engine
//! independently of any polynomial code.

use crate::violator::ViolatorSpace;

/// The maximum problem: an element violates a set iff its value exceeds
/// the set's maximum. Every basis is a single maximal element (δ = 1);
/// the empty set is violated by everything.
#[derive(Clone, Debug)]
pub struct MaxSpace {
    values: Vec<i64>,
}

impl MaxSpace {
    pub fn new(values: Vec<i64>) -> Self {
        MaxSpace { values }
    }

    pub fn value(&self, h: usize) -> i64 {
        self.values[h]
    }
}

impl ViolatorSpace for MaxSpace {
    fn universe_size(&self) -> usize {
        self.values.len()
    }

    fn is_violator(&self, h: usize, set: &[usize]) -> bool {
        match set.iter().map(|&i| self.values[i]).max() {
            None => true,
            Some(max) => self.values[h] > max,
        }
    }
}

/// The 1-D smallest enclosing interval: an element violates a set iff it
/// lies outside [min(set), max(set)]. Bases are {min, max} (δ = 2).
#[derive(Clone, Debug)]
pub struct IntervalSpace {
    points: Vec<i64>,
}

impl IntervalSpace {
    pub fn new(points: Vec<i64>) -> Self {
        IntervalSpace { points }
    }
}

impl ViolatorSpace for IntervalSpace {
    fn universe_size(&self) -> usize {
        self.points.len()
    }

    fn is_violator(&self, h: usize, set: &[usize]) -> bool {
        let vals = set.iter().map(|&i| self.points[i]);
        match (vals.clone().min(), vals.max()) {
            (Some(lo), Some(hi)) => self.points[h] < lo || self.points[h] > hi,
            _ => true,
        }
    }
}

/// Deliberately broken primitive (an element violates a set iff it is a
/// member): fails consistency on every nonempty set. Negative control for
/// the axiom checker.
#[derive(Clone, Debug)]
pub struct BrokenSpace {
    size: usize,
}

impl BrokenSpace {
    pub fn new(size: usize) -> Self {
        BrokenSpace { size }
    }
}

impl ViolatorSpace for BrokenSpace {
    fn universe_size(&self) -> usize {
        self.size
    }

    fn is_violator(&self, h: usize, set: &[usize]) -> bool {
        set.binary_search(&h).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_space_primitive() {
        let space = MaxSpace::new((0..=10).collect());
        assert!(space.is_violator(5, &[3, 4]));
        assert!(!space.is_violator(2, &[3, 4]));
        // The global maximum violates everything not containing it.
        assert!(space.is_violator(10, &[0, 3, 7]));
        assert!(space.is_violator(0, &[]));
    }

    #[test]
    fn interval_space_primitive() {
        let space = IntervalSpace::new(vec![1, 4, 7]);
        assert!(!space.is_violator(1, &[0, 2]));
        assert!(space.is_violator(2, &[0, 1]));
    }
}
