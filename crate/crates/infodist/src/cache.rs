//! Memoized compressed sizes, shared between threads.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use infodist_core::Error as CoreError;

/// What was compressed, in terms of document ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SizeKey {
    /// C(x)
    Single(String),
    /// C(xy)
    Concat(String, String),
    /// C(body of x)
    Body(String),
    /// C(body of x, then fragment of y)
    BodyFragment(String, String),
}

/// Compressed sizes for one compressor. Reads run concurrently; inserts are
/// serialized.
#[derive(Debug)]
pub struct SizeCache {
    compressor: String,
    sizes: RwLock<HashMap<SizeKey, u64>>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl SizeCache {
    /// `compressor` names the compressor whose sizes are stored.
    pub fn new(compressor: impl Into<String>) -> Self {
        SizeCache {
            compressor: compressor.into(),
            sizes: RwLock::new(HashMap::new()),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    pub fn compressor(&self) -> &str {
        &self.compressor
    }

    pub fn get_or_compute(
        &self,
        key: SizeKey,
        compute: impl FnOnce() -> Result<u64, CoreError>,
    ) -> Result<u64, CoreError> {
        if let Some(&v) = self.sizes.read().expect("size cache poisoned").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let v = compute()?;
        self.misses.fetch_add(1, Ordering::Relaxed);
        Ok(*self.sizes.write().expect("size cache poisoned").entry(key).or_insert(v))
    }

    /// Sizes served from the cache.
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    /// Compressor invocations.
    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.sizes.read().expect("size cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_hits_and_misses() {
        let c = SizeCache::new("test");
        let k = SizeKey::Single("a".into());
        assert_eq!(c.get_or_compute(k.clone(), || Ok(10)), Ok(10));
        assert_eq!(c.get_or_compute(k, || panic!("must be cached")), Ok(10));
        assert_eq!((c.hits(), c.misses(), c.len()), (1, 1, 1));
        let err = c.get_or_compute(SizeKey::Single("b".into()), || Err(CoreError::Degenerate("x")));
        assert!(err.is_err());
        assert_eq!(c.len(), 1);
    }
}
