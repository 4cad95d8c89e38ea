//! The brute-force oracle is ground truth for the analytic erasure
//! polynomials.

use polarrep::codec::{design_code, exact_erasure_oracle};
use polarrep::effective_channels::{paper_expression_set, PaperExample};
use polarrep::patterns::{regular_family, PatternAssignment};
use polarrep::poly::rational;
use polarrep::Exec;

#[test]
fn two_blocks_all_assignments_all_small_lengths() {
    let fam = regular_family(1);
    for a in [[0, 0], [0, 1], [1, 1]] {
        let a = PatternAssignment::new(a.to_vec());
        for m in 1..=3 {
            let spec = design_code(m, &fam, &a, &rational(1, 2), 1 << m).unwrap();
            let oracle = exact_erasure_oracle(&spec, Exec::Parallel).unwrap();
            assert_eq!(oracle, spec.synthetic_polynomials().unwrap(), "{a} m={m}");
        }
    }
}

#[test]
fn four_block_best_schemes() {
    for which in [PaperExample::Ex2RegularBest, PaperExample::Ex3IrregularBest] {
        let spec = design_code(2, &which.family(), &which.assignment(), &rational(1, 2), 4).unwrap();
        let oracle = exact_erasure_oracle(&spec, Exec::Parallel).unwrap();
        assert_eq!(oracle, spec.synthetic_polynomials().unwrap(), "{which:?}");
        // The hand-written expressions are the design recursion, which is
        // only an upper bound on the true erasure.
        let paper = paper_expression_set(which);
        let half = rational(1, 2);
        for (o, p) in oracle.iter().zip(&paper.per_subword) {
            assert!(o.evaluate(&half) <= p.evaluate(&half));
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let fam = regular_family(2);
    let a = PatternAssignment::new(vec![0, 1, 2, 3]);
    let spec = design_code(2, &fam, &a, &rational(1, 2), 4).unwrap();
    assert_eq!(
        exact_erasure_oracle(&spec, Exec::Sequential).unwrap(),
        exact_erasure_oracle(&spec, Exec::Parallel).unwrap()
    );
}
