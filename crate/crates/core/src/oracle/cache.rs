use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use once_cell::sync::OnceCell;

use super::{Oracle, OracleError};
use crate::syntax::Query;

/// Snapshot of cache counters. `calls_forwarded == misses` always holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub calls_forwarded: u64,
    pub chars_forwarded: u64,
}

type Slot = Arc<OnceCell<bool>>;

/// Memoizes answers of an inner oracle for the lifetime of the cache.
///
/// The first answer for a (query, string) pair is the answer for the rest of
/// the run, even if the inner oracle would change its mind. Concurrent callers
/// asking for the same pair wait for a single forwarded call. Errors are not
/// cached.
pub struct CachingOracle<O> {
    inner: O,
    slots: Mutex<HashMap<Query, HashMap<Vec<u8>, Slot>>>,
    hits: AtomicU64,
    misses: AtomicU64,
    chars: AtomicU64,
}

impl<O: Oracle> CachingOracle<O> {
    pub fn new(inner: O) -> Self {
        CachingOracle {
            inner,
            slots: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            chars: AtomicU64::new(0),
        }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn stats(&self) -> CacheStats {
        let misses = self.misses.load(Ordering::Relaxed);
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses,
            calls_forwarded: misses,
            chars_forwarded: self.chars.load(Ordering::Relaxed),
        }
    }

    /// Number of distinct pairs with a settled answer.
    pub fn len(&self) -> usize {
        let slots = self.slots.lock().unwrap_or_else(|p| p.into_inner());
        slots
            .values()
            .flat_map(|m| m.values())
            .filter(|s| s.get().is_some())
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slot(&self, query: &Query, text: &[u8]) -> Slot {
        let mut slots = self.slots.lock().unwrap_or_else(|p| p.into_inner());
        if !slots.contains_key(query) {
            slots.insert(query.clone(), HashMap::new());
        }
        let per_query = slots.get_mut(query).expect("inserted above");
        if let Some(s) = per_query.get(text) {
            return s.clone();
        }
        per_query.entry(text.to_vec()).or_default().clone()
    }
}

impl<O: Oracle> Oracle for CachingOracle<O> {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        let slot = self.slot(query, text);
        if let Some(&v) = slot.get() {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let mut forwarded = false;
        let v = *slot.get_or_try_init(|| {
            forwarded = true;
            self.misses.fetch_add(1, Ordering::Relaxed);
            self.chars.fetch_add(text.len() as u64, Ordering::Relaxed);
            self.inner.evaluate(query, text)
        })?;
        if !forwarded {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Builtin, FnOracle};
    use std::sync::atomic::AtomicUsize;

    #[test]
    fn repeated_call_is_forwarded_once() {
        let c = CachingOracle::new(Builtin::Palindrome);
        let q = Query::new("pal");
        assert!(c.evaluate(&q, b"abba").unwrap());
        assert!(c.evaluate(&q, b"abba").unwrap());
        let s = c.stats();
        assert_eq!((s.hits, s.misses, s.calls_forwarded, s.chars_forwarded), (1, 1, 1, 4));
    }

    #[test]
    fn distinct_strings_are_forwarded_separately() {
        let c = CachingOracle::new(Builtin::AlwaysFalse);
        let q = Query::new("q");
        c.evaluate(&q, b"a").unwrap();
        c.evaluate(&q, b"b").unwrap();
        assert_eq!(c.stats().calls_forwarded, 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn pins_the_first_answer_of_a_flipping_oracle() {
        let n = AtomicUsize::new(0);
        let flip = FnOracle(move |_: &Query, _: &[u8]| n.fetch_add(1, Ordering::SeqCst).is_multiple_of(2));
        let c = CachingOracle::new(flip);
        let q = Query::new("q");
        let first = c.evaluate(&q, b"w").unwrap();
        for _ in 0..5 {
            assert_eq!(c.evaluate(&q, b"w").unwrap(), first);
        }
    }

    struct FailOnce(AtomicUsize);
    impl Oracle for FailOnce {
        fn evaluate(&self, _: &Query, _: &[u8]) -> Result<bool, OracleError> {
            if self.0.fetch_add(1, Ordering::SeqCst) == 0 {
                Err(OracleError::Backend("transient".into()))
            } else {
                Ok(true)
            }
        }
    }

    #[test]
    fn errors_are_not_cached() {
        let c = CachingOracle::new(FailOnce(AtomicUsize::new(0)));
        let q = Query::new("q");
        assert!(c.evaluate(&q, b"x").is_err());
        assert!(c.evaluate(&q, b"x").unwrap());
        assert_eq!(c.stats().calls_forwarded, 2);
    }

    #[test]
    fn concurrent_misses_forward_once() {
        let calls = Arc::new(AtomicUsize::new(0));
        let counter = calls.clone();
        let slow = FnOracle(move |_: &Query, _: &[u8]| {
            counter.fetch_add(1, Ordering::SeqCst);
            std::thread::sleep(std::time::Duration::from_millis(20));
            true
        });
        let c = CachingOracle::new(slow);
        let q = Query::new("q");
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| assert!(c.evaluate(&q, b"same").unwrap()));
            }
        });
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        let st = c.stats();
        assert_eq!(st.calls_forwarded, 1);
        assert_eq!(st.hits, 7);
    }
}
