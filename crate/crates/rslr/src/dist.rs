//! Exact finitely supported probability distributions with rational
//! weights.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Prob = BigRational;

pub fn prob(num: u64, den: u64) -> Prob {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn one() -> Prob {
    BigRational::one()
}

pub fn half() -> Prob {
    prob(1, 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist<K: Ord> {
    weights: BTreeMap<K, Prob>,
}

impl<K: Ord> Default for Dist<K> {
    fn default() -> Self {
        Dist {
            weights: BTreeMap::new(),
        }
    }
}

impl<K: Ord> Dist<K> {
    pub fn empty() -> Dist<K> {
        Dist::default()
    }

    pub fn dirac(k: K) -> Dist<K> {
        let mut weights = BTreeMap::new();
        weights.insert(k, one());
        Dist { weights }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, Prob)>) -> Dist<K> {
        let mut d = Dist::empty();
        for (k, p) in pairs {
            d.add(k, p);
        }
        d
    }

    pub fn add(&mut self, k: K, p: Prob) {
        if p.is_zero() {
            return;
        }
        *self.weights.entry(k).or_insert_with(Prob::zero) += p;
    }

    /// Convex mixture. The weights need not sum to one, so this also
    /// serves as scaled union for partial results.
    pub fn mix(parts: impl IntoIterator<Item = (Prob, Dist<K>)>) -> Dist<K> {
        let mut out = Dist::empty();
        for (w, d) in parts {
            for (k, p) in d.weights {
                out.add(k, p * &w);
            }
        }
        out
    }

    pub fn scaled(mut self, w: &Prob) -> Dist<K> {
        for p in self.weights.values_mut() {
            *p *= w;
        }
        self
    }

    pub fn mass(&self) -> Prob {
        self.weights.values().fold(Prob::zero(), |a, b| a + b)
    }

    pub fn pmf(&self, k: &K) -> Prob {
        self.weights.get(k).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Prob)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn map_keys<L: Ord>(self, f: impl Fn(K) -> L) -> Dist<L> {
        let mut out = Dist::empty();
        for (k, p) in self.weights {
            out.add(f(k), p);
        }
        out
    }

    pub fn total_variation(&self, other: &Dist<K>) -> Prob
    where
        K: Clone,
    {
        let mut keys: Vec<&K> = self.weights.keys().collect();
        keys.extend(other.weights.keys());
        keys.sort();
        keys.dedup();
        let mut sum = Prob::zero();
        for k in keys {
            sum += (self.pmf(k) - other.pmf(k)).abs();
        }
        sum / prob(2, 1)
    }

    /// Every weight has a power-of-two denominator once reduced.
    pub fn is_dyadic(&self) -> bool {
        self.weights.values().all(|p| {
            let den: BigUint = p.denom().magnitude().clone();
            den.count_ones() == 1
        })
    }
}

/// Renders a weight as an approximate decimal for display.
pub fn approx(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

impl<K: Ord + fmt::Display> Dist<K> {
    /// One line per outcome, sorted ascending by key:
    /// `key<TAB>num/den<TAB>decimal`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, p) in &self.weights {
            out.push_str(&format!(
                "{}\t{}/{}\t{}\n",
                k,
                p.numer(),
                p.denom(),
                approx(p)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_has_unit_mass() {
        let d = Dist::dirac(7u32);
        assert_eq!(d.mass(), one());
        assert_eq!(d.pmf(&7), one());
        assert_eq!(d.pmf(&3), Prob::zero());
    }

    #[test]
    fn mix_merges_keys() {
        let d = Dist::mix([
            (half(), Dist::dirac(0u32)),
            (half(), Dist::from_pairs([(0u32, half()), (1, half())])),
        ]);
        assert_eq!(d.pmf(&0), prob(3, 4));
        assert_eq!(d.pmf(&1), prob(1, 4));
        assert_eq!(d.mass(), one());
    }

    #[test]
    fn total_variation_examples() {
        let a = Dist::from_pairs([(0u32, half()), (1, half())]);
        let b = Dist::dirac(0u32);
        assert_eq!(a.total_variation(&b), half());
        assert_eq!(a.total_variation(&a), Prob::zero());
    }

    #[test]
    fn dyadic_detection() {
        let d = Dist::from_pairs([(0u32, prob(3, 8)), (1, prob(5, 8))]);
        assert!(d.is_dyadic());
        let e = Dist::from_pairs([(0u32, prob(1, 3)), (1, prob(2, 3))]);
        assert!(!e.is_dyadic());
    }

    #[test]
    fn render_sorted_ascending() {
        let d = Dist::from_pairs([(5u32, half()), (2, half())]);
        let s = d.render();
        assert_eq!(s, "2\t1/2\t0.5\n5\t1/2\t0.5\n");
    }

    #[test]
    fn zero_weights_dropped() {
        let mut d = Dist::dirac(1u32);
        d.add(2, Prob::zero());
        assert_eq!(d.len(), 1);
    }
}
