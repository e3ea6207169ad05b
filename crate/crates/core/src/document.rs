use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DocumentKind {
    Dna,
    Text,
    Binary,
}

/// An identified byte sequence: the unit every distance is computed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub bytes: Vec<u8>,
    pub kind: DocumentKind,
    pub source: String,
}

impl Document {
    pub fn new(id: impl Into<String>, bytes: impl Into<Vec<u8>>, kind: DocumentKind) -> Self {
        Document {
            id: id.into(),
            bytes: bytes.into(),
            kind,
            source: String::new(),
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}
