//! Canonical arithmetic of finitely generated abelian groups.
//!
//! Groups are kept in invariant-factor form (free rank plus a divisibility
//! chain of torsion coefficients), so structural equality coincides with
//! isomorphism. Homomorphisms are integer matrices on the canonical
//! generators: free generators first, then torsion generators in
//! invariant-factor order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlin::{self, IntMatrix};
use crate::{Error, Result};

/// A finitely generated abelian group ℤ^rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/tₖ with
/// tᵢ ≥ 2 and tᵢ | tᵢ₊₁. Two values are equal iff the groups are
/// isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// ℤ/n for n ≥ 2, ℤ for n = 0, trivial for n = 1. Panics on negative n.
    pub fn cyclic<T: Into<BigInt>>(n: T) -> Self {
        FgAbGroup::canonicalize(0, &[n.into()]).expect("cyclic order must be nonnegative")
    }

    /// Canonical form of ℤ^rank ⊕ ⊕ᵢ ℤ/cᵢ; a coefficient 0 contributes a
    /// free summand and 1 contributes nothing. Rejects negative
    /// coefficients.
    pub fn canonicalize(rank: usize, coefficients: &[BigInt]) -> Result<Self> {
        for c in coefficients {
            if c.is_negative() {
                return Err(Error::NegativeCoefficient(c.clone()));
            }
        }
        Ok(Self::canonical_from(rank, coefficients.to_vec()))
    }

    /// Like `canonicalize` for coefficients already known nonnegative.
    fn canonical_from(mut rank: usize, coefficients: Vec<BigInt>) -> Self {
        let mut torsion: Vec<BigInt> = Vec::with_capacity(coefficients.len());
        for c in coefficients {
            if c.is_zero() {
                rank += 1;
            } else if !c.is_one() {
                torsion.push(c);
            }
        }
        // CRT merging: replace pairs by (gcd, lcm) until every earlier
        // coefficient divides every later one. Each replacement strictly
        // lowers the earlier coefficient, so the loop terminates.
        loop {
            let mut changed = false;
            for i in 0..torsion.len() {
                for j in i + 1..torsion.len() {
                    let g = torsion[i].gcd(&torsion[j]);
                    if g != torsion[i] {
                        let l = &torsion[i] / &g * &torsion[j];
                        torsion[i] = g;
                        torsion[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        torsion.retain(|t| !t.is_one());
        let group = FgAbGroup { rank, torsion };
        debug_assert!(group.is_canonical());
        group
    }

    /// Constructor for parts already in canonical form (e.g. read off a
    /// Smith normal form diagonal). Panics when the chain is violated.
    pub(crate) fn from_canonical_parts(rank: usize, torsion: Vec<BigInt>) -> Self {
        let group = FgAbGroup { rank, torsion };
        assert!(group.is_canonical(), "torsion {:?} is not a divisibility chain", group.torsion);
        group
    }

    fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|t| *t >= BigInt::from(2))
            && self
                .torsion
                .windows(2)
                .all(|p| p[1].mod_floor(&p[0]).is_zero())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of canonical generators.
    pub fn gen_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Orders of the canonical generators: 0 for each free generator, then
    /// the torsion chain.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut orders = vec![BigInt::zero(); self.rank];
        orders.extend(self.torsion.iter().cloned());
        orders
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut coeffs = self.torsion.clone();
        coeffs.extend(other.torsion.iter().cloned());
        Self::canonical_from(self.rank + other.rank, coeffs)
    }

    /// Tensor product over ℤ: ranks multiply, each torsion coefficient of
    /// one side is replicated across the free rank of the other, and each
    /// pair of torsion coefficients contributes their gcd.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut coeffs = Vec::new();
        for t in &self.torsion {
            for _ in 0..other.rank {
                coeffs.push(t.clone());
            }
        }
        for t in &other.torsion {
            for _ in 0..self.rank {
                coeffs.push(t.clone());
            }
        }
        for a in &self.torsion {
            for b in &other.torsion {
                coeffs.push(a.gcd(b));
            }
        }
        Self::canonical_from(self.rank * other.rank, coeffs)
    }

    /// Tor₁ over ℤ: free parts contribute nothing; each pair of torsion
    /// coefficients contributes their gcd.
    pub fn tor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut coeffs = Vec::new();
        for a in &self.torsion {
            for b in &other.torsion {
                coeffs.push(a.gcd(b));
            }
        }
        Self::canonical_from(0, coeffs)
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self == other
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::with_capacity(1 + self.torsion.len());
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_owned()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homomorphism between groups in canonical form, stored as the integer
/// matrix of generator images (target generators × source generators).
/// Well-definedness is checked at construction; matrices are kept exactly
/// as given, congruence is applied by `map_equal`.
#[derive(Debug, Clone)]
pub struct GroupMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.gen_count() || matrix.cols() != source.gen_count() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", target.gen_count(), source.gen_count()),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let src_orders = source.orders();
        let tgt_orders = target.orders();
        for (j, t) in src_orders.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (i, u) in tgt_orders.iter().enumerate() {
                let scaled = t * matrix.get(i, j);
                let ok = if u.is_zero() {
                    scaled.is_zero()
                } else {
                    scaled.mod_floor(u).is_zero()
                };
                if !ok {
                    return Err(Error::IllDefined(format!(
                        "source generator {j} of order {t} maps to a nonzero multiple \
                         of target generator {i}"
                    )));
                }
            }
        }
        Ok(GroupMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(group: &FgAbGroup) -> Self {
        GroupMap {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.gen_count()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// self ∘ other (apply `other` first). Errors unless other.target equals
    /// self.source.
    pub fn compose(&self, other: &GroupMap) -> Result<GroupMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch {
                expected: format!("map into {}", self.source),
                found: format!("map into {}", other.target),
            });
        }
        GroupMap::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    /// Equality as homomorphisms: same source and target, matrices
    /// congruent coordinatewise (entries over a generator of order t agree
    /// mod t; entries over free generators agree exactly).
    pub fn map_equal(&self, other: &GroupMap) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let orders = self.target.orders();
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                let a = self.matrix.get(i, j);
                let b = other.matrix.get(i, j);
                let equal = if orders[i].is_zero() {
                    a == b
                } else {
                    (a - b).mod_floor(&orders[i]).is_zero()
                };
                if !equal {
                    return false;
                }
            }
        }
        true
    }

    /// True when the map is an endomorphism with self ∘ self = identity.
    pub fn squares_to_identity(&self) -> bool {
        self.source == self.target
            && self
                .compose(self)
                .map(|sq| sq.map_equal(&GroupMap::identity(&self.source)))
                .unwrap_or(false)
    }

    /// True for endomorphisms whose image, together with the relations,
    /// spans the whole generator module (surjective, hence bijective).
    pub fn is_automorphism(&self) -> bool {
        if self.source != self.target {
            return false;
        }
        let k = self.target.gen_count();
        let orders = self.target.orders();
        let torsion: Vec<usize> = (0..k).filter(|&i| !orders[i].is_zero()).collect();
        let aug = IntMatrix::from_fn(k, k + torsion.len(), |i, j| {
            if j < k {
                self.matrix.get(i, j).clone()
            } else if torsion[j - k] == i {
                orders[i].clone()
            } else {
                BigInt::zero()
            }
        });
        intlin::elementary_divisors(&aug)
            .into_iter()
            .take(k)
            .all(|d| d.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn group(rank: usize, coeffs: &[i64]) -> FgAbGroup {
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| z(c)).collect();
        FgAbGroup::canonicalize(rank, &coeffs).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        // SNF of diag(2,3) is diag(1,6)
        assert_eq!(group(0, &[2, 3]).torsion(), &[z(6)]);
        let g = group(1, &[1]);
        assert_eq!(g.rank(), 1);
        assert!(g.torsion().is_empty());
        let h = group(0, &[0]);
        assert_eq!(h.rank(), 1);
        assert!(h.torsion().is_empty());
    }

    #[test]
    fn canonicalize_rejects_negative() {
        assert_eq!(
            FgAbGroup::canonicalize(0, &[z(-2)]),
            Err(Error::NegativeCoefficient(z(-2)))
        );
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(group(0, &[4]).direct_sum(&group(0, &[3])), group(0, &[12]));
        assert_eq!(group(2, &[]).direct_sum(&FgAbGroup::trivial()), group(2, &[]));
        assert_eq!(
            group(0, &[2]).direct_sum(&group(0, &[2])).torsion(),
            &[z(2), z(2)]
        );
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(group(1, &[]).tensor(&group(0, &[5])), group(0, &[5]));
        assert_eq!(group(0, &[4]).tensor(&group(0, &[6])), group(0, &[2]));
        assert!(FgAbGroup::trivial().tensor(&group(2, &[3, 9])).is_trivial());
    }

    #[test]
    fn tor_examples() {
        assert!(group(1, &[]).tor(&group(0, &[7, 7])).is_trivial());
        assert_eq!(group(0, &[2]).tor(&group(0, &[2])), group(0, &[2]));
        assert_eq!(group(0, &[6]).tor(&group(0, &[4])), group(0, &[2]));
    }

    #[test]
    fn isomorphism_examples() {
        // Z12 + Z3 and Z4 + Z3 + Z3 share the invariant factors (3, 12):
        // canonicalizing either yields the same chain.
        assert_eq!(group(0, &[12, 3]).torsion(), &[z(3), z(12)]);
        assert_eq!(group(0, &[4, 3, 3]).torsion(), &[z(3), z(12)]);
        assert!(group(0, &[12, 3]).is_isomorphic(&group(0, &[4, 3, 3])));
        assert!(!group(0, &[12, 3]).is_isomorphic(&group(0, &[9, 4])));
        assert!(group(0, &[2, 3]).is_isomorphic(&group(0, &[6])));
        assert!(group(1, &[]).is_isomorphic(&group(1, &[])));
    }

    #[test]
    fn display_forms() {
        assert_eq!(FgAbGroup::trivial().to_string(), "0");
        assert_eq!(group(1, &[]).to_string(), "Z");
        assert_eq!(group(2, &[2, 4]).to_string(), "Z^2 + Z/2 + Z/4");
    }

    #[test]
    fn map_well_definedness() {
        let z2 = group(0, &[2]);
        let zfree = group(1, &[]);
        // Z/2 -> Z must be zero on the torsion generator
        assert!(GroupMap::new(z2.clone(), zfree.clone(), IntMatrix::from_rows(&[vec![1]])).is_err());
        assert!(GroupMap::new(z2.clone(), zfree, IntMatrix::from_rows(&[vec![0]])).is_ok());
        // Z/2 -> Z/4 needs images killed by 2: only the 2-torsion element works
        let z4 = group(0, &[4]);
        assert!(GroupMap::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![1]])).is_err());
        assert!(GroupMap::new(z2, z4, IntMatrix::from_rows(&[vec![2]])).is_ok());
    }

    #[test]
    fn compose_and_order_two_examples() {
        let z2free = group(2, &[]);
        let swap = GroupMap::new(
            z2free.clone(),
            z2free.clone(),
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        )
        .unwrap();
        assert!(swap.squares_to_identity());
        assert!(swap.is_automorphism());

        // (g, w)-style action [[-1, 1], [0, 1]] squares to the identity as
        // an integer matrix already
        let m = IntMatrix::from_rows(&[vec![-1, 1], vec![0, 1]]);
        assert_eq!(m.mul(&m), IntMatrix::identity(2));

        let zfree = group(1, &[]);
        let neg = GroupMap::new(
            zfree.clone(),
            zfree.clone(),
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        assert!(neg.squares_to_identity());
    }

    #[test]
    fn map_equal_applies_congruence() {
        let z4 = group(0, &[4]);
        let a = GroupMap::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![-1]])).unwrap();
        let b = GroupMap::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![3]])).unwrap();
        assert!(a.map_equal(&b));
        let c = GroupMap::new(z4.clone(), z4, IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(!a.map_equal(&c));
    }

    #[test]
    fn compose_dimension_mismatch() {
        let z2 = group(0, &[2]);
        let z4 = group(0, &[4]);
        let f = GroupMap::identity(&z2);
        let g = GroupMap::identity(&z4);
        assert!(f.compose(&g).is_err());
    }

    #[test]
    fn automorphism_detects_non_surjective() {
        let z4 = group(0, &[4]);
        let dbl = GroupMap::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(!dbl.is_automorphism());
        let neg = GroupMap::new(z4.clone(), z4, IntMatrix::from_rows(&[vec![-1]])).unwrap();
        assert!(neg.is_automorphism());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_group() -> impl Strategy<Value = FgAbGroup> {
            (
                0usize..=2,
                proptest::collection::vec(0i64..=12, 0..=3),
            )
                .prop_map(|(rank, coeffs)| {
                    let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
                    FgAbGroup::canonicalize(rank, &coeffs).unwrap()
                })
        }

        proptest! {
            #[test]
            fn canonicalize_is_idempotent(g in arb_group()) {
                let again = FgAbGroup::canonicalize(g.rank(), g.torsion()).unwrap();
                prop_assert_eq!(again, g);
            }

            #[test]
            fn sum_and_tensor_commute(g in arb_group(), h in arb_group()) {
                prop_assert_eq!(g.direct_sum(&h), h.direct_sum(&g));
                prop_assert_eq!(g.tensor(&h), h.tensor(&g));
                prop_assert_eq!(g.tor(&h), h.tor(&g));
            }

            #[test]
            fn sum_and_tensor_associate(g in arb_group(), h in arb_group(), k in arb_group()) {
                prop_assert_eq!(
                    g.direct_sum(&h).direct_sum(&k),
                    g.direct_sum(&h.direct_sum(&k))
                );
                prop_assert_eq!(g.tensor(&h).tensor(&k), g.tensor(&h.tensor(&k)));
            }

            #[test]
            fn tensor_distributes_over_sum(g in arb_group(), h in arb_group(), k in arb_group()) {
                prop_assert_eq!(
                    g.tensor(&h.direct_sum(&k)),
                    g.tensor(&h).direct_sum(&g.tensor(&k))
                );
            }

            #[test]
            fn tensor_unit_and_flat_tor(g in arb_group()) {
                let unit = FgAbGroup::free(1);
                prop_assert_eq!(g.tensor(&unit), g.clone());
                let free = FgAbGroup::free(3);
                prop_assert!(g.tor(&free).is_trivial());
                prop_assert!(free.tor(&g).is_trivial());
            }
        }
    }
}
