use std::fmt;

/// Outcome of an exhaustive law check.
///
/// Every violated instance is collected; an empty `violations` list means the
/// checked structure satisfies all laws. `notes` records laws that hold by
/// construction and were therefore not enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport<V> {
    pub violations: Vec<V>,
    pub notes: Vec<String>,
}

impl<V> Default for LawReport<V> {
    fn default() -> Self {
        LawReport { violations: Vec::new(), notes: Vec::new() }
    }
}

impl<V> LawReport<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, violation: V) {
        self.violations.push(violation);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

impl<V: fmt::Display> fmt::Display for LawReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            write!(f, "pass")?;
        } else {
            write!(f, "FAIL ({} violations)", self.violations.len())?;
            for v in &self.violations {
                write!(f, "\n  - {v}")?;
            }
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}
