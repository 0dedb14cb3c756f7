//! Data-parallel fan-out with a sequential fallback.
//!
//! With the `parallel` feature (default) work is split across the rayon pool;
//! without it, or with [`Exec::Sequential`], everything runs on the caller's
//! thread. Results keep input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map with early exit on the first error in input order.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// First item (in input order) for which `f` reports a failure.
    pub fn find_failure<T, E, F>(self, items: &[T], f: F) -> Option<E>
    where
        T: Sync,
        E: Send,
        F: Fn(&T) -> Option<E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).find_first(|r| r.is_some()).flatten(),
            _ => items.iter().find_map(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let xs: Vec<u32> = (0..1000).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.map(&xs, |x| x * 2), xs.iter().map(|x| x * 2).collect::<Vec<_>>());
            assert_eq!(exec.find_failure(&xs, |&x| (x % 97 == 96).then_some(x)), Some(96));
            let r: Result<Vec<u32>, u32> = exec.try_map(&xs, |&x| if x == 500 { Err(x) } else { Ok(x) });
            assert_eq!(r, Err(500));
        }
    }
}
