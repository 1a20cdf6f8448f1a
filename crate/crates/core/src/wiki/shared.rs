use std::path::PathBuf;
use std::sync::{Arc, Mutex, PoisonError, RwLock};

use super::{WikiError, WikiState};

/// A wiki shared between threads. Reads see an immutable snapshot; writes
/// run one at a time on a copy that replaces the snapshot when it succeeds.
#[derive(Debug)]
pub struct SharedWiki {
    current: RwLock<Arc<WikiState>>,
    writer: Mutex<Option<PathBuf>>,
}

impl SharedWiki {
    /// With `dir` set, every successful write is saved there before it
    /// becomes visible.
    pub fn new(state: WikiState, dir: Option<PathBuf>) -> SharedWiki {
        SharedWiki {
            current: RwLock::new(Arc::new(state)),
            writer: Mutex::new(dir),
        }
    }

    pub fn snapshot(&self) -> Arc<WikiState> {
        self.current
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .clone()
    }

    pub fn update<T>(
        &self,
        f: impl FnOnce(&mut WikiState) -> Result<T, WikiError>,
    ) -> Result<T, WikiError> {
        let dir = self.writer.lock().unwrap_or_else(PoisonError::into_inner);
        let mut next = WikiState::clone(&self.snapshot());
        let out = f(&mut next)?;
        if let Some(dir) = dir.as_ref() {
            next.save(dir)?;
        }
        *self.current.write().unwrap_or_else(PoisonError::into_inner) = Arc::new(next);
        Ok(out)
    }
}
