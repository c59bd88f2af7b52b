//! Shared-memory worker pool over row-slab decompositions.
//!
//! Each SPMD region splits a row-major buffer into `p` contiguous
//! row-slabs, one per worker; workers run concurrently and join at the
//! end of the region (barrier semantics). With `p = 1` everything runs
//! inline on the calling thread, so results are identical and the hot
//! path pays no spawn cost.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct WorkerPool {
    workers: usize,
}

impl WorkerPool {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidConfig("worker count must be >= 1".into()));
        }
        Ok(Self { workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    fn slab_rows(&self, rows: usize) -> usize {
        debug_assert!(rows % self.workers == 0, "worker count must divide rows");
        rows / self.workers
    }

    /// Mutate `data` (row-major, `rows` rows) slab-parallel;
    /// `f(worker, first_row, slab)`.
    pub fn for_each_slab<E, F>(&self, data: &mut [E], rows: usize, f: F)
    where
        E: Send,
        F: Fn(usize, usize, &mut [E]) + Sync,
    {
        if self.workers == 1 {
            f(0, 0, data);
            return;
        }
        let rpw = self.slab_rows(rows);
        let row_len = data.len() / rows;
        std::thread::scope(|scope| {
            for (w, slab) in data.chunks_mut(rpw * row_len).enumerate() {
                let f = &f;
                scope.spawn(move || f(w, w * rpw, slab));
            }
        });
    }

    /// Read-only slab reduction; per-worker results are returned in
    /// worker order so downstream reductions are deterministic.
    pub fn map_slabs<E, R, F>(&self, data: &[E], rows: usize, f: F) -> Vec<R>
    where
        E: Sync,
        R: Send,
        F: Fn(usize, usize, &[E]) -> R + Sync,
    {
        if self.workers == 1 {
            return vec![f(0, 0, data)];
        }
        let rpw = self.slab_rows(rows);
        let row_len = data.len() / rows;
        std::thread::scope(|scope| {
            let handles: Vec<_> = data
                .chunks(rpw * row_len)
                .enumerate()
                .map(|(w, slab)| {
                    let f = &f;
                    scope.spawn(move || f(w, w * rpw, slab))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    }

    /// All-to-all exchange region: every worker reads the whole of
    /// `src` and fills its own disjoint slab of `dst` (`dst_rows` rows
    /// in the destination layout). No worker reads `dst`, so the single
    /// join at the end is the only synchronization point.
    pub fn exchange<E, F>(&self, src: &[E], dst: &mut [E], dst_rows: usize, f: F)
    where
        E: Send + Sync,
        F: Fn(usize, usize, &[E], &mut [E]) + Sync,
    {
        if self.workers == 1 {
            f(0, 0, src, dst);
            return;
        }
        let rpw = self.slab_rows(dst_rows);
        let row_len = dst.len() / dst_rows;
        std::thread::scope(|scope| {
            for (w, slab) in dst.chunks_mut(rpw * row_len).enumerate() {
                let f = &f;
                scope.spawn(move || f(w, w * rpw, src, slab));
            }
        });
    }
}
