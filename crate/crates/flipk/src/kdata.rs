//! ℤ₂-graded K-theory pairs and the graded Künneth pairing.

use std::fmt;

use crate::fgab::FgAbGroup;

/// The pair (K₀, K₁), both in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KData {
    pub k0: FgAbGroup,
    pub k1: FgAbGroup,
}

impl KData {
    pub fn new(k0: FgAbGroup, k1: FgAbGroup) -> Self {
        KData { k0, k1 }
    }

    pub fn trivial() -> Self {
        KData {
            k0: FgAbGroup::trivial(),
            k1: FgAbGroup::trivial(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.k0.is_trivial() && self.k1.is_trivial()
    }

    pub fn degree(&self, d: usize) -> &FgAbGroup {
        match d % 2 {
            0 => &self.k0,
            _ => &self.k1,
        }
    }

    /// Graded Künneth pairing: in degree k, tensor terms of total degree k
    /// plus Tor terms of total degree k+1 (all mod 2). The extension is
    /// split for finitely generated coefficients, so the isomorphism class
    /// is the direct sum.
    pub fn kunneth(&self, other: &KData) -> KData {
        let t = |i: usize, j: usize| self.degree(i).tensor(other.degree(j));
        let tor = |i: usize, j: usize| self.degree(i).tor(other.degree(j));
        let k0 = t(0, 0)
            .direct_sum(&t(1, 1))
            .direct_sum(&tor(0, 1))
            .direct_sum(&tor(1, 0));
        let k1 = t(0, 1)
            .direct_sum(&t(1, 0))
            .direct_sum(&tor(0, 0))
            .direct_sum(&tor(1, 1));
        KData { k0, k1 }
    }

    /// Suspension swaps the degrees (Bott periodicity).
    pub fn suspend(&self) -> KData {
        KData {
            k0: self.k1.clone(),
            k1: self.k0.clone(),
        }
    }
}

impl fmt::Display for KData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(K0 = {}, K1 = {})", self.k0, self.k1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cyclic(n: i64) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    fn kd(k0: FgAbGroup, k1: FgAbGroup) -> KData {
        KData::new(k0, k1)
    }

    #[test]
    fn kunneth_unit() {
        let unit = kd(FgAbGroup::free(1), FgAbGroup::trivial());
        let a = kd(cyclic(5), FgAbGroup::trivial());
        assert_eq!(unit.kunneth(&a), a);
    }

    #[test]
    fn kunneth_degree_shift() {
        let s = kd(FgAbGroup::trivial(), FgAbGroup::free(1));
        assert_eq!(
            s.kunneth(&s),
            kd(FgAbGroup::free(1), FgAbGroup::trivial())
        );
    }

    #[test]
    fn kunneth_tor_lands_in_shifted_degree() {
        let z2 = kd(cyclic(2), FgAbGroup::trivial());
        assert_eq!(z2.kunneth(&z2), kd(cyclic(2), cyclic(2)));

        let a = kd(cyclic(3), FgAbGroup::trivial());
        let b = kd(FgAbGroup::trivial(), cyclic(6));
        assert_eq!(a.kunneth(&b), kd(cyclic(3), cyclic(3)));
    }

    #[test]
    fn suspend_swaps_degrees() {
        let a = kd(FgAbGroup::free(1), FgAbGroup::trivial());
        assert_eq!(a.suspend(), kd(FgAbGroup::trivial(), FgAbGroup::free(1)));
        let t = kd(FgAbGroup::trivial(), cyclic(7));
        assert_eq!(t.suspend().k0, cyclic(7));
        assert_eq!(t.suspend().suspend(), t);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_group() -> impl Strategy<Value = FgAbGroup> {
            (0usize..=2, proptest::collection::vec(0i64..=12, 0..=3)).prop_map(|(r, cs)| {
                let cs: Vec<BigInt> = cs.into_iter().map(BigInt::from).collect();
                FgAbGroup::canonicalize(r, &cs).unwrap()
            })
        }

        fn arb_kdata() -> impl Strategy<Value = KData> {
            (arb_group(), arb_group()).prop_map(|(k0, k1)| KData::new(k0, k1))
        }

        proptest! {
            #[test]
            fn kunneth_commutes(a in arb_kdata(), b in arb_kdata()) {
                prop_assert_eq!(a.kunneth(&b), b.kunneth(&a));
            }

            #[test]
            fn kunneth_associates(a in arb_kdata(), b in arb_kdata(), c in arb_kdata()) {
                prop_assert_eq!(a.kunneth(&b).kunneth(&c), a.kunneth(&b.kunneth(&c)));
            }

            #[test]
            fn kunneth_units(a in arb_kdata()) {
                let unit = KData::new(FgAbGroup::free(1), FgAbGroup::trivial());
                prop_assert_eq!(a.kunneth(&unit), a.clone());
                let shift = KData::new(FgAbGroup::trivial(), FgAbGroup::free(1));
                prop_assert_eq!(a.kunneth(&shift), a.suspend());
            }

            #[test]
            fn kunneth_rank_bookkeeping(a in arb_kdata(), b in arb_kdata()) {
                let res = a.kunneth(&b);
                prop_assert_eq!(
                    res.k0.rank() + res.k1.rank(),
                    (a.k0.rank() + a.k1.rank()) * (b.k0.rank() + b.k1.rank())
                );
            }
        }
    }
}
