use std::fmt;

use crate::error::Error;

/// Number of trace generators.
pub const NVARS: usize = 9;

/// One of the nine trace generators `t(1), t(-1), ..., t(-4), t(5)`.
///
/// Stored as a slot in the fixed order `1, -1, 2, -2, 3, -3, 4, -4, 5`, so the
/// derived `Ord` is that order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarIndex(u8);

const VALUES: [i8; NVARS] = [1, -1, 2, -2, 3, -3, 4, -4, 5];

impl VarIndex {
    pub const T1: VarIndex = VarIndex(0);
    pub const TM1: VarIndex = VarIndex(1);
    pub const T2: VarIndex = VarIndex(2);
    pub const TM2: VarIndex = VarIndex(3);
    pub const T3: VarIndex = VarIndex(4);
    pub const TM3: VarIndex = VarIndex(5);
    pub const T4: VarIndex = VarIndex(6);
    pub const TM4: VarIndex = VarIndex(7);
    pub const T5: VarIndex = VarIndex(8);

    pub const ALL: [VarIndex; NVARS] = [
        Self::T1,
        Self::TM1,
        Self::T2,
        Self::TM2,
        Self::T3,
        Self::TM3,
        Self::T4,
        Self::TM4,
        Self::T5,
    ];

    /// The eight generators of `R`, i.e. everything except `t(5)`.
    pub const BASE: [VarIndex; 8] = [
        Self::T1,
        Self::TM1,
        Self::T2,
        Self::TM2,
        Self::T3,
        Self::TM3,
        Self::T4,
        Self::TM4,
    ];

    pub fn new(value: i64) -> Result<Self, Error> {
        VALUES
            .iter()
            .position(|&v| i64::from(v) == value)
            .map(|slot| VarIndex(slot as u8))
            .ok_or(Error::UnknownVariable(value))
    }

    pub fn from_slot(slot: usize) -> Self {
        assert!(slot < NVARS, "slot {slot} out of range");
        VarIndex(slot as u8)
    }

    #[inline]
    pub fn slot(self) -> usize {
        self.0 as usize
    }

    /// The signed subscript, e.g. `-4` for `t(-4)`.
    pub fn value(self) -> i8 {
        VALUES[self.slot()]
    }
}

impl serde::Serialize for VarIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t({})", self.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        for v in VarIndex::ALL {
            assert_eq!(VarIndex::new(v.value().into()).unwrap(), v);
        }
    }

    #[test]
    fn rejects_unknown() {
        assert!(matches!(VarIndex::new(6), Err(Error::UnknownVariable(6))));
        assert!(VarIndex::new(-5).is_err());
        assert!(VarIndex::new(0).is_err());
    }

    #[test]
    fn ordering_is_fixed() {
        let mut shuffled = vec![VarIndex::T5, VarIndex::TM4, VarIndex::T1, VarIndex::TM1];
        shuffled.sort();
        assert_eq!(
            shuffled,
            vec![VarIndex::T1, VarIndex::TM1, VarIndex::TM4, VarIndex::T5]
        );
    }
}
