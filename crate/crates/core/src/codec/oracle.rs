use super::decoder::{Decoder, Mode};
use super::CodeSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly::{int, Poly};

/// Largest transmitted length the oracle enumerates (`2^24` patterns).
pub const ORACLE_MAX_N: usize = 24;

const ERASED: u8 = 2;

/// Exact genie-aided erasure polynomial of every input bit, by running the
/// decoder on all `2^N` erasure patterns of the all-zero codeword. The
/// frozen set of `spec` is ignored: every bit is measured.
pub fn exact_erasure_oracle(spec: &CodeSpec, exec: Exec) -> Result<Vec<Poly>> {
    let big_n = spec.total_len();
    if big_n > ORACLE_MAX_N {
        return Err(Error::out_of_range("transmitted length", big_n, format!("[1, {ORACLE_MAX_N}]")));
    }
    let n = spec.n();
    let decoder = Decoder::new(spec)?;
    let zeros = vec![0u8; n];
    let width = big_n + 1;
    let counts = exec.fold_chunks(
        1usize << big_n,
        1 << 12,
        || vec![0u64; n * width],
        |mut acc, pattern| {
            let received: Vec<u8> = (0..big_n)
                .map(|i| if (pattern >> i) & 1 == 1 { ERASED } else { 0 })
                .collect();
            let trace = decoder
                .run(&received, &Mode::GenieAll(&zeros))
                .expect("genie decoding never stops");
            let w = pattern.count_ones() as usize;
            for (bit, &e) in trace.erased.iter().enumerate() {
                if e {
                    acc[bit * width + w] += 1;
                }
            }
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    let eps = Poly::epsilon();
    let keep = &Poly::one() - &eps;
    let basis: Vec<Poly> = (0..width)
        .map(|w| &eps.pow(w as u32) * &keep.pow((big_n - w) as u32))
        .collect();
    Ok((0..n)
        .map(|bit| {
            basis.iter().enumerate().fold(Poly::zero(), |acc, (w, b)| {
                let c = counts[bit * width + w];
                if c == 0 {
                    acc
                } else {
                    &acc + &b.scale(&int(c as i64))
                }
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_algebra::synthetic_channels;
    use crate::codec::design_code;
    use crate::patterns::{regular_family, PatternAssignment};
    use crate::poly::rational;

    fn assign(v: &[usize]) -> PatternAssignment {
        PatternAssignment::new(v.to_vec())
    }

    #[test]
    fn two_block_middle_case() {
        let spec = design_code(1, &regular_family(1), &assign(&[0, 1]), &rational(1, 2), 2).unwrap();
        let got = exact_erasure_oracle(&spec, Exec::Sequential).unwrap();
        assert_eq!(got, vec![Poly::from_ints(&[0, 0, 1, 1, -1]), Poly::epsilon().pow(3)]);
    }

    #[test]
    fn single_block_is_standard_polar() {
        let spec = design_code(2, &regular_family(0), &assign(&[0]), &rational(1, 2), 4).unwrap();
        let got = exact_erasure_oracle(&spec, Exec::Parallel).unwrap();
        assert_eq!(got, synthetic_channels(2, &Poly::epsilon()));
    }

    #[test]
    fn identity_blocks_repeat() {
        let spec = design_code(2, &regular_family(2), &assign(&[3, 3, 3, 3]), &rational(1, 2), 4).unwrap();
        let got = exact_erasure_oracle(&spec, Exec::Parallel).unwrap();
        assert_eq!(got, vec![Poly::epsilon().pow(4); 4]);
    }

    #[test]
    fn length_bound() {
        let spec = design_code(4, &regular_family(1), &assign(&[0, 1]), &rational(1, 2), 4).unwrap();
        assert!(exact_erasure_oracle(&spec, Exec::Parallel).is_err());
    }
}
