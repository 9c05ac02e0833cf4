use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

/// Order-independent key of a routing solution: equal exactly when every
/// vehicle has the same arc sequence, up to 64-bit hash collisions (about
/// `k^2 / 2^65` for `k` distinct solutions).
pub fn fingerprint(routes: &BTreeMap<usize, Vec<(usize, usize)>>) -> u64 {
    let mut h = DefaultHasher::new();
    routes.hash(&mut h);
    h.finish()
}
