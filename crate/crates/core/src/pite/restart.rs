use crate::error::Result;

/// Result of one attempt at a sampled evolution.
#[derive(Clone, Debug)]
pub enum Attempt<T> {
    Success(T),
    /// An ancilla measurement returned 1; `T` is the partial result.
    Failure(T),
}

#[derive(Clone, Debug)]
pub struct RestartOutcome<T> {
    /// The successful attempt, or the last failed one when exhausted.
    pub value: T,
    pub restarts: usize,
    pub exhausted: bool,
}

/// Runs `attempt(k)` for `k = 0, 1, ...` until one succeeds, allowing at
/// most `budget` restarts.
pub fn restart_loop<T, F>(budget: usize, mut attempt: F) -> Result<RestartOutcome<T>>
where
    F: FnMut(usize) -> Result<Attempt<T>>,
{
    let mut k = 0;
    loop {
        match attempt(k)? {
            Attempt::Success(value) => {
                return Ok(RestartOutcome {
                    value,
                    restarts: k,
                    exhausted: false,
                })
            }
            Attempt::Failure(value) if k == budget => {
                return Ok(RestartOutcome {
                    value,
                    restarts: k,
                    exhausted: true,
                })
            }
            Attempt::Failure(_) => k += 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn immediate_success() {
        let out = restart_loop(0, |k| Ok(Attempt::Success(k))).unwrap();
        assert_eq!((out.value, out.restarts, out.exhausted), (0, 0, false));
    }

    #[test]
    fn exhaustion_keeps_last_attempt() {
        let out = restart_loop(3, |k| Ok(Attempt::Failure(k))).unwrap();
        assert_eq!((out.value, out.restarts, out.exhausted), (3, 3, true));
    }

    #[test]
    fn geometric_restart_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let runs = 20_000;
        let mut total = 0;
        for _ in 0..runs {
            let out = restart_loop(1000, |_| {
                Ok(if rng.gen::<f64>() < 0.5 {
                    Attempt::Success(())
                } else {
                    Attempt::Failure(())
                })
            })
            .unwrap();
            total += out.restarts;
        }
        let mean = total as f64 / runs as f64;
        // geometric with p = 1/2: mean 1, variance 2
        assert!((mean - 1.0).abs() < 3.0 * (2.0 / runs as f64).sqrt(), "{mean}");
    }
}
