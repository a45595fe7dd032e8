//! Logical-to-physical qubit assignment.

use serde::{Deserialize, Serialize};

/// A partial bijection between logical and physical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    log2phys: Vec<Option<usize>>,
    phys2log: Vec<Option<usize>>,
}

impl Mapping {
    /// Empty mapping.
    pub fn new(num_logical: usize, num_physical: usize) -> Self {
        Mapping {
            log2phys: vec![None; num_logical],
            phys2log: vec![None; num_physical],
        }
    }

    pub fn identity(num_logical: usize, num_physical: usize) -> Self {
        let mut m = Mapping::new(num_logical, num_physical);
        for q in 0..num_logical {
            m.assign(q, q);
        }
        m
    }

    /// Builds a complete mapping from `layout[logical] = physical`. Returns
    /// `None` if the layout is not injective or out of range.
    pub fn from_layout(layout: &[usize], num_physical: usize) -> Option<Self> {
        let mut m = Mapping::new(layout.len(), num_physical);
        for (l, &p) in layout.iter().enumerate() {
            if p >= num_physical || m.phys2log[p].is_some() {
                return None;
            }
            m.assign(l, p);
        }
        Some(m)
    }

    pub fn num_logical(&self) -> usize {
        self.log2phys.len()
    }

    pub fn num_physical(&self) -> usize {
        self.phys2log.len()
    }

    pub fn physical(&self, logical: usize) -> Option<usize> {
        self.log2phys[logical]
    }

    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.phys2log[physical]
    }

    /// Physical position of a placed logical qubit.
    ///
    /// Panics if `logical` is unassigned.
    pub fn phys(&self, logical: usize) -> usize {
        self.log2phys[logical].expect("logical qubit is placed")
    }

    pub fn is_occupied(&self, physical: usize) -> bool {
        self.phys2log[physical].is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.log2phys.iter().all(Option::is_some)
    }

    pub fn assign(&mut self, logical: usize, physical: usize) {
        debug_assert!(self.log2phys[logical].is_none() && self.phys2log[physical].is_none());
        self.log2phys[logical] = Some(physical);
        self.phys2log[physical] = Some(logical);
    }

    /// Exchanges whatever occupies physical qubits `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        self.phys2log.swap(a, b);
        if let Some(l) = self.phys2log[a] {
            self.log2phys[l] = Some(a);
        }
        if let Some(l) = self.phys2log[b] {
            self.log2phys[l] = Some(b);
        }
    }

    /// Extends the mapping to a full permutation: physical qubits left free
    /// receive placeholder logical qubits `num_logical..num_physical` in
    /// increasing physical order.
    pub fn padded(&self) -> Mapping {
        let mut m = Mapping {
            log2phys: self.log2phys.clone(),
            phys2log: self.phys2log.clone(),
        };
        for p in 0..m.phys2log.len() {
            if m.phys2log[p].is_none() {
                m.log2phys.push(Some(p));
                m.phys2log[p] = Some(m.log2phys.len() - 1);
            }
        }
        m
    }

    /// `layout[logical] = physical` for a complete mapping.
    pub fn layout(&self) -> Vec<usize> {
        self.log2phys.iter().map(|p| p.expect("complete mapping")).collect()
    }

    /// Keeps only the first `num_logical` logical qubits.
    pub fn truncated(&self, num_logical: usize) -> Mapping {
        let mut m = Mapping::new(num_logical, self.num_physical());
        for l in 0..num_logical.min(self.num_logical()) {
            if let Some(p) = self.log2phys[l] {
                m.assign(l, p);
            }
        }
        m
    }
}

/// The `{"initial": [...], "final": [...]}` file consumed by `tango verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub initial: Vec<usize>,
    #[serde(rename = "final")]
    pub final_: Vec<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum MapFileError {
    #[error("invalid map file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("map file `{0}` layout is not a valid injective assignment")]
    NotInjective(&'static str),
    #[error("map file layouts differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

impl MapFile {
    pub fn parse(text: &str) -> Result<Self, MapFileError> {
        let file: MapFile = serde_json::from_str(text)?;
        if file.initial.len() != file.final_.len() {
            return Err(MapFileError::LengthMismatch(file.initial.len(), file.final_.len()));
        }
        Ok(file)
    }

    /// Both layouts as mappings onto `num_physical` qubits.
    pub fn mappings(&self, num_physical: usize) -> Result<(Mapping, Mapping), MapFileError> {
        let initial = Mapping::from_layout(&self.initial, num_physical).ok_or(MapFileError::NotInjective("initial"))?;
        let final_ = Mapping::from_layout(&self.final_, num_physical).ok_or(MapFileError::NotInjective("final"))?;
        Ok((initial, final_))
    }
}
