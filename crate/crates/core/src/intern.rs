//! Global hash-consing tables.
//!
//! Every interned value lives in a process-wide table guarded by a mutex, so
//! structurally equal values always share one allocation and can be compared
//! by pointer. Tables are append-only.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

/// A shared, immutable node with a process-unique identifier.
#[derive(Debug)]
pub struct Node<K, I> {
    pub kind: K,
    pub info: I,
    pub id: u64,
}

pub(crate) struct Table<K, I> {
    map: Mutex<HashMap<K, Arc<Node<K, I>>>>,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl<K: Hash + Eq + Clone, I> Table<K, I> {
    pub(crate) fn new() -> Self {
        Table {
            map: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn intern(&self, kind: K, info: impl FnOnce(&K) -> I) -> Arc<Node<K, I>> {
        let mut map = self.map.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(node) = map.get(&kind) {
            return node.clone();
        }
        let node = Arc::new(Node {
            info: info(&kind),
            kind: kind.clone(),
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        });
        map.insert(kind, node.clone());
        node
    }

    pub(crate) fn len(&self) -> usize {
        self.map.lock().unwrap_or_else(|e| e.into_inner()).len()
    }
}

/// Implements pointer identity for a newtype around `Arc<Node<..>>`.
macro_rules! node_identity {
    ($ty:ident) => {
        impl PartialEq for $ty {
            fn eq(&self, other: &Self) -> bool {
                std::sync::Arc::ptr_eq(&self.0, &other.0)
            }
        }
        impl Eq for $ty {}
        impl std::hash::Hash for $ty {
            fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
                self.0.id.hash(state)
            }
        }
    };
}
pub(crate) use node_identity;
