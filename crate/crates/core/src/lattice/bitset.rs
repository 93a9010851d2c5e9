/// Fixed-universe bitset over `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    universe: usize,
}

impl BitSet {
    pub fn new(universe: usize) -> Self {
        BitSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = BitSet {
            words: vec![u64::MAX; universe.div_ceil(64)],
            universe,
        };
        s.clear_from(universe);
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    /// Clears every element `>= i`.
    pub fn clear_from(&mut self, i: usize) {
        let w = i / 64;
        if w < self.words.len() {
            self.words[w] &= (1u64 << (i % 64)).wrapping_sub(1);
            for x in &mut self.words[w + 1..] {
                *x = 0;
            }
        }
    }

    /// True when `self` has an element below `i` that `other` lacks.
    pub fn has_new_below(&self, other: &BitSet, i: usize) -> bool {
        let w = i / 64;
        if self.words[..w]
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & !b != 0)
        {
            return true;
        }
        if w < self.words.len() {
            let mask = (1u64 << (i % 64)).wrapping_sub(1);
            return self.words[w] & !other.words[w] & mask != 0;
        }
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn from_indices(universe: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(universe);
        for i in idx {
            s.insert(i);
        }
        s
    }
}
