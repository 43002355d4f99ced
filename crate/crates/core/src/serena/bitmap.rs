use crate::validity::Color;

/// Set of colors, stored as a little-endian bitmap: color `i` is bit
/// `i % 8` of octet `i / 8`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSet {
    octets: Vec<u8>,
}

impl ColorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Color) {
        let byte = (c / 8) as usize;
        if byte >= self.octets.len() {
            self.octets.resize(byte + 1, 0);
        }
        self.octets[byte] |= 1 << (c % 8);
    }

    pub fn contains(&self, c: Color) -> bool {
        self.octets.get((c / 8) as usize).is_some_and(|b| b & (1 << (c % 8)) != 0)
    }

    pub fn union_with(&mut self, other: &ColorSet) {
        if other.octets.len() > self.octets.len() {
            self.octets.resize(other.octets.len(), 0);
        }
        for (a, b) in self.octets.iter_mut().zip(&other.octets) {
            *a |= b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.octets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.octets
            .iter()
            .enumerate()
            .flat_map(|(i, &b)| (0..8).filter(move |bit| b & (1 << bit) != 0).map(move |bit| (i * 8 + bit) as Color))
    }

    /// Smallest color absent from the union of `sets`.
    pub fn smallest_free(sets: &[&ColorSet]) -> Color {
        let len = sets.iter().map(|s| s.octets.len()).max().unwrap_or(0);
        for i in 0..len {
            let used = sets.iter().fold(0u8, |acc, s| acc | s.octets.get(i).copied().unwrap_or(0));
            if used != 0xFF {
                return (i * 8) as Color + used.trailing_ones();
            }
        }
        (len * 8) as Color
    }

    /// Minimal octet representation: no trailing zero octet.
    pub fn as_octets(&self) -> &[u8] {
        &self.octets
    }

    /// `None` when the last octet is zero (non-canonical).
    pub fn from_octets(octets: &[u8]) -> Option<Self> {
        match octets.last() {
            Some(0) => None,
            _ => Some(ColorSet { octets: octets.to_vec() }),
        }
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_layout() {
        let s: ColorSet = [0, 2].into_iter().collect();
        assert_eq!(s.as_octets(), &[0b0000_0101]);
        let s: ColorSet = [9].into_iter().collect();
        assert_eq!(s.as_octets(), &[0, 0b10]);
    }

    #[test]
    fn smallest_free_gaps() {
        let empty = ColorSet::new();
        assert_eq!(ColorSet::smallest_free(&[&empty]), 0);
        let a: ColorSet = [0, 1].into_iter().collect();
        let b: ColorSet = [3].into_iter().collect();
        assert_eq!(ColorSet::smallest_free(&[&a, &b, &empty]), 2);
        let full: ColorSet = (0..8).collect();
        assert_eq!(ColorSet::smallest_free(&[&full]), 8);
    }

    #[test]
    fn iter_and_union() {
        let mut a: ColorSet = [1, 17].into_iter().collect();
        a.union_with(&[4].into_iter().collect());
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 4, 17]);
        assert!(a.contains(17) && !a.contains(16));
    }
}
