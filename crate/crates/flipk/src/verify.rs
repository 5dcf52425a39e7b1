//! Independent oracles and seeded sweeps validating the algebra core:
//! the elementary-divisor closed form, presentation-based tensor/Tor
//! oracles, decomposition invariance, and the Smith normal form contracts.
//!
//! Oracles deliberately avoid the code paths of the implementations they
//! check: tensor is recomputed from the block combination of the two
//! presentations, Tor from m-torsion subgroups, both reduced by separate
//! Smith normal form call sites.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fgab::FgAbGroup;
use crate::flipcalc::{decompose, decompose_primary, flip_crossed_from_blocks};
use crate::intlin::{self, cokernel, elementary_divisors, flip_matrix, IntMatrix};
use crate::kdata::KData;
use crate::sweep::map_cases;

/// One failed case: a human-readable input description plus the expected
/// and actual values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one named check; passed iff no failures.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn collect_failures<T: Sync, F: Fn(&T) -> Option<Failure> + Sync + Send>(
    cases: &[T],
    f: F,
) -> Vec<Failure> {
    map_cases(cases, f).into_iter().flatten().collect()
}

/// Sweeps n = 1..=max_n checking that the elementary divisors of the flip
/// relation matrix are (n, n) for odd n and (n/2, 2n) for even n.
pub fn check_lemma_ed(max_n: u64) -> CheckReport {
    let cases: Vec<u64> = (1..=max_n).collect();
    let failures = collect_failures(&cases, |&n| {
        let actual = elementary_divisors(&flip_matrix(n).expect("n >= 1"));
        let big = BigInt::from(n);
        let expected = if big.is_odd() {
            vec![big.clone(), big]
        } else {
            vec![&big / 2, &big * 2]
        };
        (actual != expected).then(|| Failure {
            input: format!("n = {n}"),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        })
    });
    CheckReport {
        name: format!("lemma-ed sweep (n = 1..={max_n})"),
        cases_run: cases.len(),
        failures,
    }
}

/// Diagonal relation matrix of a canonical group: one column per torsion
/// generator carrying its order.
fn relation_matrix(g: &FgAbGroup) -> IntMatrix {
    let orders = g.orders();
    let torsion: Vec<usize> = (0..orders.len())
        .filter(|&i| !orders[i].is_zero())
        .collect();
    IntMatrix::from_fn(orders.len(), torsion.len(), |i, j| {
        if torsion[j] == i {
            orders[i].clone()
        } else {
            BigInt::zero()
        }
    })
}

fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a.get(i / b.rows(), j / b.cols()) * b.get(i % b.rows(), j % b.cols())
    })
}

fn hstack(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows());
    IntMatrix::from_fn(a.rows(), a.cols() + b.cols(), |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b.get(i, j - a.cols()).clone()
        }
    })
}

/// Presentation-based tensor product: generators are the pairs of
/// generators, relations are the block combination R_g ⊗ I and I ⊗ R_h.
pub fn oracle_tensor(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    let rg = relation_matrix(g);
    let rh = relation_matrix(h);
    let ig = IntMatrix::identity(g.gen_count());
    let ih = IntMatrix::identity(h.gen_count());
    let relations = hstack(&kron(&rg, &ih), &kron(&ig, &rh));
    cokernel(&relations).group().clone()
}

/// The m-torsion subgroup h[m] = ker(×m), computed from the Smith normal
/// form of h's relation matrix: in normal-form coordinates the preimage
/// lattice of ×m is spanned by (dᵢ/gcd(dᵢ, m))·eᵢ over the finite rows,
/// and the relations restrict to gcd(dᵢ, m) on that basis.
fn m_torsion_subgroup(h: &FgAbGroup, m: &BigInt) -> FgAbGroup {
    assert!(!m.is_zero());
    let rel = relation_matrix(h);
    let snf = intlin::snf(&rel);
    let min = rel.rows().min(rel.cols());
    let mut restricted = Vec::new();
    for i in 0..min {
        let d = snf.s.get(i, i);
        if !d.is_zero() {
            restricted.push(d.gcd(m));
        }
    }
    let diag = IntMatrix::from_fn(restricted.len(), restricted.len(), |i, j| {
        if i == j {
            restricted[i].clone()
        } else {
            BigInt::zero()
        }
    });
    cokernel(&diag).group().clone()
}

/// Torsion-subgroup-based Tor: Tor(ℤ/m, h) = h[m], summed over the cyclic
/// factors of g; free factors are flat and contribute nothing.
pub fn oracle_tor(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    let mut acc = FgAbGroup::trivial();
    for m in g.torsion() {
        acc = acc.direct_sum(&m_torsion_subgroup(h, m));
    }
    acc
}

fn random_group(rng: &mut ChaCha8Rng, max_coeff: u64) -> FgAbGroup {
    let rank = rng.gen_range(0..=2usize);
    let len = rng.gen_range(0..=3usize);
    let coeffs: Vec<BigInt> = (0..len)
        .map(|_| BigInt::from(rng.gen_range(2..=max_coeff)))
        .collect();
    FgAbGroup::canonicalize(rank, &coeffs).expect("coefficients are positive")
}

/// Compares fgab tensor/tor with the presentation and torsion-subgroup
/// oracles on the exhaustive cyclic grid ℤ/m × ℤ/n for m, n ≤ max_cyclic
/// (0 meaning ℤ) plus `random_cases` random small groups.
pub fn check_oracle_agreement(max_cyclic: u64, random_cases: usize, seed: u64) -> CheckReport {
    let mut cases: Vec<(FgAbGroup, FgAbGroup)> = Vec::new();
    for m in 0..=max_cyclic {
        for n in 0..=max_cyclic {
            cases.push((FgAbGroup::cyclic(m), FgAbGroup::cyclic(n)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_cases {
        let g = random_group(&mut rng, 30);
        let h = random_group(&mut rng, 30);
        cases.push((g, h));
    }
    let failures = collect_failures(&cases, |(g, h)| {
        let tensor = g.tensor(h);
        let tensor_oracle = oracle_tensor(g, h);
        if tensor != tensor_oracle {
            return Some(Failure {
                input: format!("tensor ({g}) (x) ({h})"),
                expected: tensor_oracle.to_string(),
                actual: tensor.to_string(),
            });
        }
        let tor = g.tor(h);
        let tor_oracle = oracle_tor(g, h);
        (tor != tor_oracle).then(|| Failure {
            input: format!("tor ({g}, {h})"),
            expected: tor_oracle.to_string(),
            actual: tor.to_string(),
        })
    });
    CheckReport {
        name: format!(
            "oracle agreement (cyclic grid 0..={max_cyclic}, {random_cases} random, seed {seed})"
        ),
        cases_run: cases.len(),
        failures,
    }
}

/// Checks that the invariant-factor and primary-decomposition block
/// choices assemble isomorphic totals in both degrees for one input.
pub fn check_decomposition_invariance(k: &KData) -> CheckReport {
    let failures = decomposition_failure(k).into_iter().collect();
    CheckReport {
        name: format!("decomposition invariance for {k}"),
        cases_run: 1,
        failures,
    }
}

fn decomposition_failure(k: &KData) -> Option<Failure> {
    let invariant = flip_crossed_from_blocks(k, decompose(k));
    let primary = flip_crossed_from_blocks(k, decompose_primary(k));
    for degree in 0..2 {
        let a = invariant.total.degree(degree);
        let b = primary.total.degree(degree);
        if !a.is_isomorphic(b) {
            return Some(Failure {
                input: format!("{k}, degree {degree}"),
                expected: a.to_string(),
                actual: b.to_string(),
            });
        }
    }
    None
}

/// Seeded sweep of `cases` inputs (torsion coefficients ≤ max_coeff) plus
/// the worked ℤ/6 fixtures, asserting decomposition invariance on each.
pub fn decomposition_invariance_sweep(cases: usize, max_coeff: u64, seed: u64) -> CheckReport {
    let mut inputs = vec![
        KData::new(FgAbGroup::cyclic(6), FgAbGroup::trivial()),
        KData::new(FgAbGroup::trivial(), FgAbGroup::cyclic(6)),
        KData::new(FgAbGroup::cyclic(7), FgAbGroup::trivial()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while inputs.len() < cases {
        let k0 = random_group(&mut rng, max_coeff);
        let k1 = random_group(&mut rng, max_coeff);
        inputs.push(KData::new(k0, k1));
    }
    let failures = collect_failures(&inputs, decomposition_failure);
    CheckReport {
        name: format!(
            "decomposition invariance ({} inputs, coefficients <= {max_coeff}, seed {seed})",
            inputs.len()
        ),
        cases_run: inputs.len(),
        failures,
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=6usize);
    let cols = rng.gen_range(1..=6usize);
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-50i64..=50)))
}

fn snf_contract_failure(m: &IntMatrix) -> Option<Failure> {
    let fail = |expected: &str, actual: String| {
        Some(Failure {
            input: format!("{m:?}"),
            expected: expected.to_owned(),
            actual,
        })
    };
    let res = intlin::snf(m);
    if res.u.mul(m).mul(&res.v) != res.s {
        return fail("u*m*v == s", format!("s = {}", res.s));
    }
    if !res.u.det().abs().is_one() {
        return fail("|det u| == 1", format!("det u = {}", res.u.det()));
    }
    if !res.v.det().abs().is_one() {
        return fail("|det v| == 1", format!("det v = {}", res.v.det()));
    }
    if !res.s.is_diagonal() {
        return fail("diagonal s", format!("s = {}", res.s));
    }
    let diag = res.s.diagonal();
    for pair in diag.windows(2) {
        let chain_ok = if pair[0].is_zero() {
            pair[1].is_zero()
        } else {
            !pair[0].is_negative() && pair[1].mod_floor(&pair[0]).is_zero()
        };
        if !chain_ok {
            return fail("divisibility chain", format!("diagonal = {diag:?}"));
        }
    }
    if m.is_square() {
        let det = m.det();
        if !det.is_zero() {
            let product: BigInt = diag.iter().filter(|d| !d.is_zero()).product();
            if product != det.abs() {
                return fail(
                    "product of nonzero divisors == |det|",
                    format!("product = {product}, |det| = {}", det.abs()),
                );
            }
        }
    }
    None
}

/// Seeded sweep of random matrices (dims ≤ 6, entries in [-50, 50])
/// checking the full Smith normal form contract on each.
pub fn check_snf_contracts(cases: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices: Vec<IntMatrix> = (0..cases).map(|_| random_matrix(&mut rng)).collect();
    let failures = collect_failures(&matrices, snf_contract_failure);
    CheckReport {
        name: format!(
            "snf contracts ({cases} matrices, dims <= 6, entries in [-50, 50], seed {seed})"
        ),
        cases_run: matrices.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: i64) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    #[test]
    fn lemma_ed_small_sweeps() {
        let report = check_lemma_ed(3);
        assert_eq!(report.cases_run, 3);
        assert!(report.passed(), "{:?}", report.failures);

        assert!(check_lemma_ed(1).passed());

        let four = check_lemma_ed(4);
        assert!(four.passed());
        assert_eq!(
            elementary_divisors(&flip_matrix(4u32).unwrap()),
            vec![BigInt::from(2), BigInt::from(8)]
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_tensor(&cyclic(4), &cyclic(6)), cyclic(2));
        assert_eq!(oracle_tor(&cyclic(4), &cyclic(6)), cyclic(2));
        assert!(oracle_tor(&FgAbGroup::free(1), &cyclic(9)).is_trivial());
        assert_eq!(oracle_tensor(&FgAbGroup::free(1), &cyclic(5)), cyclic(5));
    }

    #[test]
    fn oracle_agreement_small_grid() {
        let report = check_oracle_agreement(8, 25, 1);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.cases_run, 81 + 25);
    }

    #[test]
    fn decomposition_invariance_fixtures() {
        let z6 = KData::new(cyclic(6), FgAbGroup::trivial());
        assert!(check_decomposition_invariance(&z6).passed());
        let d6 = KData::new(FgAbGroup::trivial(), cyclic(6));
        assert!(check_decomposition_invariance(&d6).passed());
        let prime = KData::new(cyclic(7), FgAbGroup::trivial());
        assert!(check_decomposition_invariance(&prime).passed());
    }

    #[test]
    fn snf_contract_sweep_small() {
        let report = check_snf_contracts(50, 7);
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = decomposition_invariance_sweep(10, 100, 3);
        let b = decomposition_invariance_sweep(10, 100, 3);
        assert_eq!(a.name, b.name);
        assert_eq!(a.failures, b.failures);
        let c = check_snf_contracts(20, 3);
        let d = check_snf_contracts(20, 3);
        assert_eq!(c.failures, d.failures);
    }
}
