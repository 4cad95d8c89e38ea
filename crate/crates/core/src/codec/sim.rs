use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decoder::{Decoder, Mode};
use super::{place_info, subcodewords, CodeSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;

const ERASED: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpCounts {
    pub encode_xors: u64,
    /// Decoder message computations: one per received symbol read, one per
    /// outer solve and one per inner SC message.
    pub decode_node_updates: u64,
    pub decode_xors: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.encode_xors + self.decode_node_updates + self.decode_xors
    }

    fn add(&mut self, other: &OpCounts) {
        self.encode_xors += other.encode_xors;
        self.decode_node_updates += other.decode_node_updates;
        self.decode_xors += other.decode_xors;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitRate {
    pub index: usize,
    pub erasures: u64,
    pub rate: f64,
    /// Binomial standard error of `rate`.
    pub std_error: f64,
    pub design_erasure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub spec: CodeSpec,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
    /// Genie-aided erasure rate of every unfrozen input bit.
    pub per_bit: Vec<BitRate>,
    pub block_errors: u64,
    pub block_error_rate: f64,
    /// Unerased decisions contradicting the transmitted bit (zero on a BEC).
    pub decision_errors: u64,
    /// Totals over all trials.
    pub ops: OpCounts,
    pub ops_per_trial: OpCounts,
}

impl SimReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bit,erasures,trials,rate,std_error,design_erasure\n");
        for b in &self.per_bit {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                b.index, b.erasures, self.trials, b.rate, b.std_error, b.design_erasure
            )
            .unwrap();
        }
        writeln!(out, "block,{},{},{},,", self.block_errors, self.trials, self.block_error_rate).unwrap();
        out
    }
}

struct Tally {
    erasures: Vec<u64>,
    block_errors: u64,
    wrong: u64,
    ops: OpCounts,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            erasures: vec![0; n],
            block_errors: 0,
            wrong: 0,
            ops: OpCounts::default(),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.erasures.iter_mut().zip(other.erasures) {
            *a += b;
        }
        self.block_errors += other.block_errors;
        self.wrong += other.wrong;
        self.ops.add(&other.ops);
        self
    }
}

/// Trial `i` draws from its own ChaCha stream, so results do not depend on
/// how trials are scheduled.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Random info bits through BEC(`eps`), decoded with a genie.
pub fn monte_carlo(spec: &CodeSpec, eps: f64, trials: u64, seed: u64, exec: Exec) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::out_of_range("trials", 0, "[1, ∞)"));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::out_of_range("eps", eps, "[0, 1]"));
    }
    let decoder = Decoder::new(spec)?;
    let (n, total, len) = (spec.n(), spec.total_len(), spec.inner_len());
    let info = spec.info_indices();
    let frozen = spec.frozen_mask();
    let tally = exec.fold_chunks(
        trials as usize,
        256,
        || Tally::new(n),
        |mut acc, trial| {
            let mut rng = trial_rng(seed, trial);
            let bits: Vec<u8> = (0..info.len()).map(|_| rng.random_range(0..2u8)).collect();
            let u = place_info(spec, &bits).expect("k info bits");
            let (words, mut xors) = subcodewords(spec, &u);
            let mut received = Vec::with_capacity(total);
            for forms in &decoder.layout().forms {
                for &form in forms {
                    xors += (form.count_ones() as usize - 1) * len;
                    for p in 0..len {
                        let mut v = 0u8;
                        for (j, w) in words.iter().enumerate() {
                            if (form >> j) & 1 == 1 {
                                v ^= w[p];
                            }
                        }
                        received.push(v);
                    }
                }
            }
            for s in received.iter_mut() {
                if rng.random::<f64>() < eps {
                    *s = ERASED;
                }
            }
            let trace = decoder
                .run(&received, &Mode::Genie(&u))
                .expect("genie decoding never stops");
            let mut failed = false;
            for (i, &e) in trace.erased.iter().enumerate() {
                if e && !frozen[i] {
                    acc.erasures[i] += 1;
                    failed = true;
                }
            }
            acc.block_errors += u64::from(failed);
            acc.wrong += trace.wrong as u64;
            acc.ops.add(&OpCounts {
                encode_xors: xors as u64,
                decode_node_updates: trace.node_updates as u64,
                decode_xors: trace.xors as u64,
            });
            acc
        },
        Tally::merge,
    );
    let t = trials as f64;
    let per_bit = info
        .iter()
        .map(|&i| {
            let rate = tally.erasures[i] as f64 / t;
            BitRate {
                index: i,
                erasures: tally.erasures[i],
                rate,
                std_error: (rate * (1.0 - rate) / t).sqrt(),
                design_erasure: spec.design_erasures[i],
            }
        })
        .collect();
    let per = |x: u64| x / trials;
    Ok(SimReport {
        spec: spec.clone(),
        eps,
        trials,
        seed,
        per_bit,
        block_errors: tally.block_errors,
        block_error_rate: tally.block_errors as f64 / t,
        decision_errors: tally.wrong,
        ops: tally.ops,
        ops_per_trial: OpCounts {
            encode_xors: per(tally.ops.encode_xors),
            decode_node_updates: per(tally.ops.decode_node_updates),
            decode_xors: per(tally.ops.decode_xors),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::design_code;
    use crate::patterns::{regular_family, PatternAssignment};
    use crate::poly::rational;

    fn spec(m: u32, k: usize) -> CodeSpec {
        design_code(m, &regular_family(1), &PatternAssignment::new(vec![0, 1]), &rational(1, 2), k).unwrap()
    }

    #[test]
    fn extremes() {
        let s = spec(4, 16);
        let clean = monte_carlo(&s, 0.0, 50, 1, Exec::Parallel).unwrap();
        assert!(clean.per_bit.iter().all(|b| b.rate == 0.0));
        assert_eq!(clean.block_error_rate, 0.0);
        let dead = monte_carlo(&s, 1.0, 50, 1, Exec::Parallel).unwrap();
        assert!(dead.per_bit.iter().all(|b| b.rate == 1.0));
        assert_eq!(dead.decision_errors, 0);
    }

    #[test]
    fn deterministic_and_schedule_free() {
        let s = spec(5, 20);
        let a = monte_carlo(&s, 0.4, 700, 42, Exec::Sequential).unwrap();
        let b = monte_carlo(&s, 0.4, 700, 42, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo(&s, 0.4, 700, 43, Exec::Parallel).unwrap();
        assert_ne!(a.per_bit, c.per_bit);
        assert_eq!(a.ops, c.ops);
        assert_eq!(a.decision_errors, 0);
    }

    #[test]
    fn ops_scale_with_length() {
        let small = monte_carlo(&spec(6, 32), 0.5, 10, 3, Exec::Sequential).unwrap();
        let large = monte_carlo(&spec(7, 64), 0.5, 10, 3, Exec::Sequential).unwrap();
        let ratio = large.ops_per_trial.total() as f64 / small.ops_per_trial.total() as f64;
        assert!(ratio > 1.9 && ratio <= 2.5, "ratio {ratio}");
    }

    #[test]
    fn csv_shape() {
        let s = spec(3, 5);
        let rep = monte_carlo(&s, 0.3, 20, 9, Exec::Parallel).unwrap();
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 1 + 5 + 1);
        assert!(csv.lines().last().unwrap().starts_with("block,"));
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = spec(3, 5);
        assert!(monte_carlo(&s, 0.3, 0, 1, Exec::Parallel).is_err());
        assert!(monte_carlo(&s, 1.5, 10, 1, Exec::Parallel).is_err());
    }
}
