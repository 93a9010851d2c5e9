use super::bitset::BitSet;

/// Boolean incidence view over index sets: rows per object, columns per attribute.
#[derive(Debug, Clone)]
pub struct Context {
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl Context {
    pub fn new(
        n_objects: usize,
        n_attributes: usize,
        incidence: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut rows = vec![BitSet::new(n_attributes); n_objects];
        let mut cols = vec![BitSet::new(n_objects); n_attributes];
        for (g, m) in incidence {
            rows[g].insert(m);
            cols[m].insert(g);
        }
        Context { rows, cols }
    }

    pub fn n_objects(&self) -> usize {
        self.rows.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    pub fn col(&self, m: usize) -> &BitSet {
        &self.cols[m]
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// Attributes shared by every object in `objects`.
    pub fn intent_of(&self, objects: &BitSet) -> BitSet {
        let mut acc = BitSet::full(self.n_attributes());
        for g in objects.iter() {
            acc.intersect_with(&self.rows[g]);
        }
        acc
    }

    /// Objects having every attribute in `attributes`.
    pub fn extent_of(&self, attributes: &BitSet) -> BitSet {
        let mut acc = BitSet::full(self.n_objects());
        for m in attributes.iter() {
            acc.intersect_with(&self.cols[m]);
        }
        acc
    }

    pub fn close_objects(&self, objects: &BitSet) -> (BitSet, BitSet) {
        let intent = self.intent_of(objects);
        (self.extent_of(&intent), intent)
    }
}
