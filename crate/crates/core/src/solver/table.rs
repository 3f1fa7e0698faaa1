//! Bounded concurrent transposition table.
//!
//! Entries are proven facts about a position, so concurrent writers can only
//! ever agree; the table never stores guesses. When a shard fills up, the
//! shallowest entries (fewest rounds left) are evicted first.

use std::hash::{BuildHasher, Hash};

use parking_lot::Mutex;
use rustc_hash::{FxBuildHasher, FxHashMap};

const SHARDS: usize = 64;

#[derive(Clone, Copy, Debug)]
struct Entry {
    value: bool,
    depth: u8,
}

struct Shard<K> {
    map: FxHashMap<K, Entry>,
    /// entry count per depth
    hist: [u32; 256],
}

pub struct Table<K> {
    shards: Vec<Mutex<Shard<K>>>,
    shard_cap: usize,
}

impl<K: Hash + Eq + Clone> Table<K> {
    pub fn new(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        Self {
            shards: (0..SHARDS)
                .map(|_| {
                    Mutex::new(Shard {
                        map: FxHashMap::default(),
                        hist: [0; 256],
                    })
                })
                .collect(),
            shard_cap: capacity.div_ceil(SHARDS),
        }
    }

    fn shard(&self, key: &K) -> &Mutex<Shard<K>> {
        // high bits: the map itself uses the low ones
        &self.shards[(FxBuildHasher.hash_one(key) >> 58) as usize % SHARDS]
    }

    pub fn get(&self, key: &K) -> Option<bool> {
        self.shard(key).lock().map.get(key).map(|e| e.value)
    }

    /// `depth` ranks entries for eviction: deeper entries saved more work.
    /// A full shard drops its shallowest entries down to three quarters of
    /// capacity, but never entries at least as deep as the new one; if
    /// nothing shallower exists the new entry is not stored.
    pub fn put(&self, key: K, value: bool, depth: usize) {
        let depth = depth.min(u8::MAX as usize) as u8;
        let mut guard = self.shard(&key).lock();
        let shard = &mut *guard;
        if let Some(e) = shard.map.get_mut(&key) {
            e.value = value;
            return;
        }
        if shard.map.len() >= self.shard_cap {
            let target = shard.map.len() - self.shard_cap * 3 / 4;
            let mut freed = 0usize;
            let mut cut = None;
            for d in 0..depth as usize {
                freed += shard.hist[d] as usize;
                if shard.hist[d] > 0 {
                    cut = Some(d as u8);
                }
                if freed >= target {
                    break;
                }
            }
            let Some(cut) = cut else { return };
            shard.map.retain(|_, e| e.depth > cut);
            shard.hist[..=cut as usize].fill(0);
        }
        shard.hist[depth as usize] += 1;
        shard.map.insert(key, Entry { value, depth });
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(|s| s.lock().map.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
