use std::fmt;

/// Fixed-width bit vector over item indices `0..m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemSet {
    words: Vec<u64>,
    len: usize,
}

impl ItemSet {
    pub fn empty(m: usize) -> Self {
        ItemSet {
            words: vec![0; m.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(m: usize) -> Self {
        let mut s = ItemSet::empty(m);
        for i in 0..m {
            s.insert(i);
        }
        s
    }

    pub fn from_items(m: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ItemSet::empty(m);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Width in bits (the item count `m` the set was created for).
    pub fn width(&self) -> usize {
        self.words.len() * 64
    }

    #[inline]
    pub fn contains(&self, item: usize) -> bool {
        self.words[item >> 6] & (1u64 << (item & 63)) != 0
    }

    /// Returns true if the item was newly inserted.
    #[inline]
    pub fn insert(&mut self, item: usize) -> bool {
        let w = &mut self.words[item >> 6];
        let bit = 1u64 << (item & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, item: usize) -> bool {
        let w = &mut self.words[item >> 6];
        let bit = 1u64 << (item & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn with(&self, item: usize) -> Self {
        let mut s = self.clone();
        s.insert(item);
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &ItemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    /// Items in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_across_word_boundary() {
        let mut s = ItemSet::empty(130);
        assert!(s.insert(0));
        assert!(s.insert(64));
        assert!(s.insert(129));
        assert!(!s.insert(64));
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.remove(64));
        assert!(!s.contains(64));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn subset_and_union() {
        let a = ItemSet::from_items(10, [1, 3]);
        let mut b = ItemSet::from_items(10, [3, 5]);
        assert!(!a.is_subset(&b));
        b.union_with(&a);
        assert!(a.is_subset(&b));
        assert_eq!(b.len(), 3);
        assert_eq!(ItemSet::full(5).len(), 5);
    }
}
