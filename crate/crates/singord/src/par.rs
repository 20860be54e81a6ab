//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the default strategy runs on the rayon pool;
//! without it every call is sequential. Results keep input order either way.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Parallel,
    Sequential,
}

impl Exec {
    /// Parallel when compiled with the `parallel` feature.
    pub fn default_for_build() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_with(Exec::default_for_build(), items, f)
}

pub fn map_with<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let v: Vec<u64> = (0..100).collect();
        let a = map_with(Exec::Parallel, &v, |x| x * x);
        let b = map_with(Exec::Sequential, &v, |x| x * x);
        assert_eq!(a, b);
    }
}
