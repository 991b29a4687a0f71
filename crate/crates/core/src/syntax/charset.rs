use std::fmt;

/// The input alphabet Σ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Byte values 0–127.
    #[default]
    Ascii,
    /// All 256 byte values.
    Bytes,
}

impl Alphabet {
    pub fn full(self) -> CharSet {
        match self {
            Alphabet::Ascii => CharSet::range(0, 127),
            Alphabet::Bytes => CharSet::range(0, 255),
        }
    }

    pub fn contains(self, b: u8) -> bool {
        match self {
            Alphabet::Ascii => b < 128,
            Alphabet::Bytes => true,
        }
    }
}

/// A set of byte values, used as the label of a literal.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSet {
    bits: [u64; 4],
}

impl CharSet {
    pub const fn empty() -> Self {
        CharSet { bits: [0; 4] }
    }

    pub fn singleton(b: u8) -> Self {
        let mut s = Self::empty();
        s.insert(b);
        s
    }

    /// Inclusive range `lo..=hi`. Empty when `lo > hi`.
    pub fn range(lo: u8, hi: u8) -> Self {
        let mut s = Self::empty();
        if lo <= hi {
            for b in lo..=hi {
                s.insert(b);
            }
        }
        s
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut s = Self::empty();
        for &b in bytes {
            s.insert(b);
        }
        s
    }

    #[inline]
    pub fn contains(&self, b: u8) -> bool {
        self.bits[(b >> 6) as usize] & (1u64 << (b & 63)) != 0
    }

    #[inline]
    pub fn insert(&mut self, b: u8) {
        self.bits[(b >> 6) as usize] |= 1u64 << (b & 63);
    }

    pub fn union(&self, other: &CharSet) -> CharSet {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(other.bits) {
            *a |= b;
        }
        CharSet { bits }
    }

    pub fn intersection(&self, other: &CharSet) -> CharSet {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(other.bits) {
            *a &= b;
        }
        CharSet { bits }
    }

    /// `universe \ self`.
    pub fn complement_in(&self, universe: &CharSet) -> CharSet {
        let mut bits = universe.bits;
        for (a, b) in bits.iter_mut().zip(self.bits) {
            *a &= !b;
        }
        CharSet { bits }
    }

    pub fn is_empty(&self) -> bool {
        self.bits == [0; 4]
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0u16..256).map(|b| b as u8).filter(move |&b| self.contains(b))
    }

    /// Maximal runs of consecutive members, as inclusive ranges.
    pub fn ranges(&self) -> Vec<(u8, u8)> {
        let mut out: Vec<(u8, u8)> = Vec::new();
        for b in self.iter() {
            match out.last_mut() {
                Some((_, hi)) if *hi as u16 + 1 == b as u16 => *hi = b,
                _ => out.push((b, b)),
            }
        }
        out
    }

    /// The single member, if there is exactly one.
    pub fn as_singleton(&self) -> Option<u8> {
        if self.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }
}

impl fmt::Debug for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (lo, hi)) in self.ranges().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if lo == hi {
                write!(f, "{:?}", lo as char)?;
            } else {
                write!(f, "{:?}-{:?}", lo as char, hi as char)?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_merge_adjacent_members() {
        let s = CharSet::from_bytes(b"abcxz");
        assert_eq!(s.ranges(), vec![(b'a', b'c'), (b'x', b'x'), (b'z', b'z')]);
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn alphabet_bounds() {
        assert_eq!(Alphabet::Ascii.full().len(), 128);
        assert_eq!(Alphabet::Bytes.full().len(), 256);
        assert!(!Alphabet::Ascii.full().contains(200));
        let neg = CharSet::singleton(b'a').complement_in(&Alphabet::Ascii.full());
        assert_eq!(neg.len(), 127);
        assert!(!neg.contains(b'a'));
    }
}
