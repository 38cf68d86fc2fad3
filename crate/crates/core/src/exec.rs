//! Sequential and data-parallel execution of the enumeration and simulation
//! kernels.
//!
//! Every kernel splits its work into the same fixed pieces in both modes and
//! combines partial results in piece order, so the two modes return
//! bit-identical values. Without the `parallel` feature, [`Execution::Parallel`]
//! runs sequentially.

/// How a kernel distributes its work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Maps `f` over `0..len`, returning results in index order.
    pub(crate) fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    /// Calls `f` on matching `block`-sized pieces of `out` and `src`.
    pub(crate) fn zip_blocks<F>(self, out: &mut [f64], src: &[f64], block: usize, f: F)
    where
        F: Fn(&mut [f64], &[f64]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                out.par_chunks_mut(block).zip(src.par_chunks(block)).for_each(|(o, s)| f(o, s));
            }
            _ => out.chunks_mut(block).zip(src.chunks(block)).for_each(|(o, s)| f(o, s)),
        }
    }
}

/// Element-wise sum of equally sized vectors, folded left to right.
pub(crate) fn sum_in_order(parts: Vec<Vec<f64>>, len: usize) -> Vec<f64> {
    parts.into_iter().fold(vec![0.0; len], |mut acc, part| {
        acc.iter_mut().zip(part).for_each(|(a, x)| *a += x);
        acc
    })
}
