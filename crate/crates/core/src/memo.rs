use std::hash::Hash;
use std::sync::{Arc, Mutex, PoisonError, RwLock};

use rustc_hash::FxHashMap;

use crate::error::Result;

type Cell<V> = Arc<Mutex<Option<V>>>;

/// A concurrent memo table with one initializer per key: concurrent callers
/// asking for the same key wait for the first one instead of recomputing.
pub(crate) struct Memo<K, V> {
    cells: RwLock<FxHashMap<K, Cell<V>>>,
}

impl<K: Hash + Eq + Clone, V: Clone> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Memo { cells: RwLock::new(FxHashMap::default()) }
    }

    fn cell(&self, key: &K) -> Cell<V> {
        if let Some(c) = self.cells.read().unwrap_or_else(PoisonError::into_inner).get(key) {
            return c.clone();
        }
        self.cells
            .write()
            .unwrap_or_else(PoisonError::into_inner)
            .entry(key.clone())
            .or_default()
            .clone()
    }

    pub(crate) fn get_or_try_init(&self, key: &K, init: impl FnOnce() -> Result<V>) -> Result<V> {
        let cell = self.cell(key);
        let mut slot = cell.lock().unwrap_or_else(PoisonError::into_inner);
        if let Some(v) = slot.as_ref() {
            return Ok(v.clone());
        }
        let v = init()?;
        *slot = Some(v.clone());
        Ok(v)
    }
}
