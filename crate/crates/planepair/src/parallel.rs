use planepair_core::NodeMap;
use rayon::prelude::*;

/// Fans node work out over the rayon pool; results stay in index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl NodeMap for Rayon {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).into_par_iter().map(f).collect()
    }
}
