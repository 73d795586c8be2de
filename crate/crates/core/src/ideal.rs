//! Relative ideals of a fixed numerical semigroup.
//!
//! An ideal is a subset I of the integers with I + S inside I, bounded below,
//! normalized as (min element, window bitset, threshold): the window covers
//! [min, threshold) and everything at or beyond the threshold belongs to I.
//! The threshold is kept minimal, so equality of ideals is structural.
//!
//! Every binary operation evaluates on a provably sufficient finite window
//! and renormalizes. The window bounds are stated inline at each operation.

use crate::bits::Bits;
use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    EmptyGenerators,
    /// Binary operation on ideals of two different semigroups.
    ParentMismatch,
    /// Containment required; the witness belongs to the alleged subset only.
    NotContained { witness: i64 },
}

impl std::fmt::Display for IdealError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IdealError::EmptyGenerators => write!(f, "ideal generator list is empty"),
            IdealError::ParentMismatch => {
                write!(f, "ideals belong to different ambient semigroups")
            }
            IdealError::NotContained { witness } => {
                write!(f, "containment fails: {witness} lies outside the larger ideal")
            }
        }
    }
}

impl std::error::Error for IdealError {}

#[derive(Clone)]
pub struct RelativeIdeal<'s> {
    parent: &'s NumericalSemigroup,
    min: i64,
    threshold: i64,
    /// Membership over [min, threshold); empty when the ideal is a ray.
    window: Bits,
}

impl PartialEq for RelativeIdeal<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other)
            && self.min == other.min
            && self.threshold == other.threshold
            && self.window == other.window
    }
}

impl Eq for RelativeIdeal<'_> {}

impl std::fmt::Debug for RelativeIdeal<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for z in self.window_elements() {
            write!(f, "{z},")?;
        }
        write!(f, "[{}..)}}", self.threshold)
    }
}

impl<'s> RelativeIdeal<'s> {
    /// Union of x + S over the given x. The window [min xs, min xs + c) is
    /// sufficient: beyond it every integer is min(xs) plus a member above the
    /// conductor.
    pub fn from_generators(
        parent: &'s NumericalSemigroup,
        xs: &[i64],
    ) -> Result<Self, IdealError> {
        if xs.is_empty() {
            return Err(IdealError::EmptyGenerators);
        }
        let lo = *xs.iter().min().unwrap();
        let hi = lo + parent.conductor() as i64;
        let mut bits = Bits::new((hi - lo) as usize);
        for &x in xs {
            let mut s = 0i64;
            while x + s < hi {
                if parent.contains(s) {
                    bits.set((x + s - lo) as usize);
                }
                s += 1;
            }
        }
        Ok(Self::normalize(parent, lo, hi, bits))
    }

    /// The ray {z >= t}, which is an ideal of every semigroup.
    pub fn ray(parent: &'s NumericalSemigroup, t: i64) -> Self {
        RelativeIdeal {
            parent,
            min: t,
            threshold: t,
            window: Bits::new(0),
        }
    }

    /// S itself, viewed as an ideal.
    pub fn semigroup_ideal(parent: &'s NumericalSemigroup) -> Self {
        Self::from_generators(parent, &[0]).unwrap()
    }

    /// M = S minus {0}.
    pub fn maximal_ideal(parent: &'s NumericalSemigroup) -> Self {
        let c = parent.conductor() as i64;
        if c == 0 {
            return Self::ray(parent, 1);
        }
        let e = parent.multiplicity() as i64;
        let mut bits = Bits::new((c - e) as usize);
        for z in e..c {
            if parent.contains(z) {
                bits.set((z - e) as usize);
            }
        }
        Self::normalize(parent, e, c, bits)
    }

    /// The standard canonical ideal {F - a : a not in S}, with a ranging over
    /// all integers outside S. Negative a contribute exactly the tail beyond
    /// the conductor, so the window [0, c) is complete.
    pub fn canonical_ideal(parent: &'s NumericalSemigroup) -> Self {
        let c = parent.conductor() as i64;
        let f = parent.frobenius();
        let mut bits = Bits::new(c as usize);
        for z in 0..c {
            if !parent.contains(f - z) {
                bits.set(z as usize);
            }
        }
        Self::normalize(parent, 0, c, bits)
    }

    /// The conductor ideal C = {z >= c(S)}.
    pub fn conductor_ideal(parent: &'s NumericalSemigroup) -> Self {
        Self::ray(parent, parent.conductor() as i64)
    }

    pub fn parent(&self) -> &'s NumericalSemigroup {
        self.parent
    }

    pub fn min_element(&self) -> i64 {
        self.min
    }

    /// Least t with [t, infinity) contained in the ideal.
    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    #[inline]
    pub fn contains(&self, z: i64) -> bool {
        if z >= self.threshold {
            return true;
        }
        if z < self.min {
            return false;
        }
        self.window.get((z - self.min) as usize)
    }

    /// Members below the threshold, ascending.
    pub fn window_elements(&self) -> Vec<i64> {
        self.window.ones().map(|i| self.min + i as i64).collect()
    }

    pub fn translate(&self, z: i64) -> Self {
        RelativeIdeal {
            parent: self.parent,
            min: self.min + z,
            threshold: self.threshold + z,
            window: self.window.clone(),
        }
    }

    /// Minkowski sum I + J. Everything at or beyond min(mu_I + tau_J,
    /// mu_J + tau_I) is reachable as one window element plus a tail element,
    /// so the finite part only needs window-by-window sums.
    pub fn add(&self, other: &Self) -> Result<Self, IdealError> {
        self.check_parent(other)?;
        let lo = self.min + other.min;
        let hi = (self.min + other.threshold).min(other.min + self.threshold);
        let mut bits = Bits::new((hi - lo) as usize);
        let self_elems = self.window_elements();
        let other_elems = other.window_elements();
        for &i in &self_elems {
            for &j in &other_elems {
                if i + j < hi {
                    bits.set((i + j - lo) as usize);
                }
            }
        }
        Ok(Self::normalize(self.parent, lo, hi, bits))
    }

    /// Intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self, IdealError> {
        self.check_parent(other)?;
        let lo = self.min.max(other.min);
        let hi = self.threshold.max(other.threshold);
        let hi = hi.max(lo);
        let mut bits = Bits::new((hi - lo) as usize);
        for z in lo..hi {
            if self.contains(z) && other.contains(z) {
                bits.set((z - lo) as usize);
            }
        }
        Ok(Self::normalize(self.parent, lo, hi, bits))
    }

    /// Ideal quotient I - J = {z : z + J inside I}.
    ///
    /// Window bounds: z < mu_I - mu_J fails already at mu_J, and z < tau_I -
    /// tau_J fails at some tail element of J because tau_I is minimal. On the
    /// other side every z >= tau_I - mu_J works, since z + J then starts at or
    /// beyond tau_I. Inside the window, z >= tau_I - tau_J makes the tail of J
    /// harmless, so only window elements of J need testing.
    pub fn difference(&self, other: &Self) -> Result<Self, IdealError> {
        self.check_parent(other)?;
        let lo = (self.min - other.min).max(self.threshold - other.threshold);
        let hi = (self.threshold - other.min).max(lo);
        let other_elems = other.window_elements();
        let mut bits = Bits::new((hi - lo) as usize);
        for z in lo..hi {
            if other_elems.iter().all(|&j| self.contains(z + j)) {
                bits.set((z - lo) as usize);
            }
        }
        Ok(Self::normalize(self.parent, lo, hi, bits))
    }

    /// Is `other` a subset of `self`?
    pub fn contains_ideal(&self, other: &Self) -> Result<bool, IdealError> {
        self.check_parent(other)?;
        Ok(self.containment_witness(other).is_none())
    }

    /// Some element of `other` outside `self`, if containment fails.
    fn containment_witness(&self, other: &Self) -> Option<i64> {
        let hi = self.threshold.max(other.threshold);
        (other.min..hi).find(|&z| other.contains(z) && !self.contains(z))
    }

    /// |self minus other| for other a subset of self.
    pub fn length_between(&self, other: &Self) -> Result<u64, IdealError> {
        self.check_parent(other)?;
        if let Some(witness) = self.containment_witness(other) {
            return Err(IdealError::NotContained { witness });
        }
        let hi = self.threshold.max(other.threshold);
        let mut count = 0u64;
        for z in self.min..hi {
            if self.contains(z) && !other.contains(z) {
                count += 1;
            }
        }
        Ok(count)
    }

    fn same_parent(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) || self.parent == other.parent
    }

    fn check_parent(&self, other: &Self) -> Result<(), IdealError> {
        if self.same_parent(other) {
            Ok(())
        } else {
            Err(IdealError::ParentMismatch)
        }
    }

    /// Canonical form from raw evaluation: `bits` covers [lo, hi), everything
    /// at or beyond hi is a member. Trims leading absence and finds the least
    /// valid threshold.
    fn normalize(parent: &'s NumericalSemigroup, lo: i64, hi: i64, bits: Bits) -> Self {
        debug_assert_eq!(bits.len() as i64, hi - lo);
        let Some(first) = bits.first_one() else {
            return Self::ray(parent, hi);
        };
        let min = lo + first as i64;
        // Least threshold: one past the last non-member.
        let mut threshold = min;
        for i in (first..bits.len()).rev() {
            if !bits.get(i) {
                threshold = lo + i as i64 + 1;
                break;
            }
        }
        let mut window = Bits::new((threshold - min) as usize);
        for i in 0..window.len() {
            if bits.get(first + i) {
                window.set(i);
            }
        }
        debug_assert!(window.is_empty() || window.get(0));
        RelativeIdeal {
            parent,
            min,
            threshold,
            window,
        }
    }
}
