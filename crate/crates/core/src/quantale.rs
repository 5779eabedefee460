//! Commutative quantales, valuations on finite token sets and the weakness of
//! a relation, `w(H) = join over (u, v) in H of mu(u) (x) mu(v)`.
//!
//! Only finite joins are modelled; every relation here is finite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::gap_statistics::{CountTable, GapDistribution};
use crate::prime_engine::PrimeWindow;
use crate::rational::{self, Rational};
use crate::selberg_sieve::ObstructionPattern;

pub trait Quantale {
    type Value: Clone + PartialEq + Debug;

    fn name(&self) -> &'static str;

    fn unit(&self) -> Self::Value;

    /// Identity of the join; the weakness of the empty relation.
    fn bottom(&self) -> Self::Value;

    fn tensor(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;

    /// `true` when `a (x) (b + c) <= a (x) b + a (x) c` is all that holds in
    /// general (saturating joins).
    fn lax_distributivity(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityJoin {
    /// `min(a + b, 1)`; reproduces sums of probabilities below saturation.
    TruncatedSum,
    Max,
}

/// `([0, 1], *, join, 1, <=)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbabilisticQuantale {
    pub join: ProbabilityJoin,
}

pub fn probabilistic_quantale() -> ProbabilisticQuantale {
    ProbabilisticQuantale {
        join: ProbabilityJoin::TruncatedSum,
    }
}

impl Quantale for ProbabilisticQuantale {
    type Value = Rational;

    fn name(&self) -> &'static str {
        match self.join {
            ProbabilityJoin::TruncatedSum => "probabilistic",
            ProbabilityJoin::Max => "probabilistic-max",
        }
    }

    fn unit(&self) -> Rational {
        rational::one()
    }

    fn bottom(&self) -> Rational {
        rational::zero()
    }

    fn tensor(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn join(&self, a: &Rational, b: &Rational) -> Rational {
        match self.join {
            ProbabilityJoin::TruncatedSum => (a + b).min(rational::one()),
            ProbabilityJoin::Max => a.max(b).clone(),
        }
    }

    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }

    fn lax_distributivity(&self) -> bool {
        self.join == ProbabilityJoin::TruncatedSum
    }
}

/// Element of `N u {inf}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    fn add(self, other: Count) -> Count {
        match (self, other) {
            (Count::Finite(a), Count::Finite(b)) => a.checked_add(b).map_or(Count::Infinite, Count::Finite),
            _ => Count::Infinite,
        }
    }
}

/// `(N u {inf}, +, max, 0, <=)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountingQuantale;

pub fn counting_quantale() -> CountingQuantale {
    CountingQuantale
}

impl Quantale for CountingQuantale {
    type Value = Count;

    fn name(&self) -> &'static str {
        "counting"
    }

    fn unit(&self) -> Count {
        Count::Finite(0)
    }

    fn bottom(&self) -> Count {
        Count::Finite(0)
    }

    fn tensor(&self, a: &Count, b: &Count) -> Count {
        a.add(*b)
    }

    fn join(&self, a: &Count, b: &Count) -> Count {
        *a.max(b)
    }

    fn leq(&self, a: &Count, b: &Count) -> bool {
        a <= b
    }
}

/// `(P(W), intersection, union, W, subset)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetQuantale {
    universe: BTreeSet<u32>,
}

pub fn set_quantale(universe: BTreeSet<u32>) -> SetQuantale {
    SetQuantale { universe }
}

impl SetQuantale {
    pub fn universe(&self) -> &BTreeSet<u32> {
        &self.universe
    }
}

impl Quantale for SetQuantale {
    type Value = BTreeSet<u32>;

    fn name(&self) -> &'static str {
        "set"
    }

    fn unit(&self) -> BTreeSet<u32> {
        self.universe.clone()
    }

    fn bottom(&self) -> BTreeSet<u32> {
        BTreeSet::new()
    }

    fn tensor(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> BTreeSet<u32> {
        a.intersection(b).copied().collect()
    }

    fn join(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> BTreeSet<u32> {
        a.union(b).copied().collect()
    }

    fn leq(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> bool {
        a.is_subset(b)
    }
}

/// `((0, 1], *, max, 1, <=)`, the home of Euler-product survival fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MultiplicativeQuantale;

impl Quantale for MultiplicativeQuantale {
    type Value = Rational;

    fn name(&self) -> &'static str {
        "multiplicative"
    }

    fn unit(&self) -> Rational {
        rational::one()
    }

    fn bottom(&self) -> Rational {
        rational::zero()
    }

    fn tensor(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn join(&self, a: &Rational, b: &Rational) -> Rational {
        a.max(b).clone()
    }

    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
}

/// A finite relation `H` over tokens with a valuation into a quantale carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRelation<K: Ord, V> {
    valuation: BTreeMap<K, V>,
    pairs: Vec<(K, K)>,
}

impl<K: Ord + Clone + Debug, V> WeightedRelation<K, V> {
    pub fn new(valuation: BTreeMap<K, V>, pairs: Vec<(K, K)>) -> Result<Self> {
        if let Some(k) = pairs
            .iter()
            .flat_map(|(u, v)| [u, v])
            .find(|k| !valuation.contains_key(k))
        {
            return Err(Error::MissingValuation(format!("{k:?}")));
        }
        Ok(Self { valuation, pairs })
    }

    /// `{(u, u)}` over every valued token.
    pub fn diagonal(valuation: BTreeMap<K, V>) -> Self {
        let pairs = valuation.keys().map(|k| (k.clone(), k.clone())).collect();
        Self { valuation, pairs }
    }

    /// Same-block relation of a partition: all ordered pairs within a block.
    pub fn same_block(valuation: BTreeMap<K, V>, blocks: &[Vec<K>]) -> Result<Self> {
        let pairs = blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |u| b.iter().map(move |v| (u.clone(), v.clone()))))
            .collect();
        Self::new(valuation, pairs)
    }

    pub fn valuation(&self) -> &BTreeMap<K, V> {
        &self.valuation
    }

    pub fn pairs(&self) -> &[(K, K)] {
        &self.pairs
    }
}

/// `w(H)`; the empty relation yields the bottom element.
pub fn weakness<Q: Quantale, K: Ord>(q: &Q, r: &WeightedRelation<K, Q::Value>) -> Q::Value {
    r.pairs.iter().fold(q.bottom(), |acc, (u, v)| {
        let t = q.tensor(&r.valuation[u], &r.valuation[v]);
        q.join(&acc, &t)
    })
}

/// Sum-aggregated counting weakness: the number of undistinguished pairs
/// when every token has valuation 1, rather than the max-join value.
pub fn counting_sum_weakness<K: Ord>(r: &WeightedRelation<K, Count>) -> Count {
    let q = CountingQuantale;
    r.pairs.iter().fold(Count::Finite(0), |acc, (u, v)| {
        acc.add(q.tensor(&r.valuation[u], &r.valuation[v]))
    })
}

/// `x_1 (x) x_2 (x) ... (x) x_n`, starting from the unit.
pub fn tensor_fold<'a, Q: Quantale + 'a>(
    q: &Q,
    values: impl IntoIterator<Item = &'a Q::Value>,
) -> Q::Value
where
    Q::Value: 'a,
{
    values.into_iter().fold(q.unit(), |acc, v| q.tensor(&acc, v))
}

/// Collision probability as the weakness of the same-gap diagonal in the
/// probabilistic quantale with valuation `mu_X`.
pub fn gap_collision_via_quantale(d: &GapDistribution) -> Rational {
    let valuation = d
        .counts()
        .iter()
        .map(|(&h, &c)| (h, rational::ratio(c, d.total())))
        .collect();
    weakness(&probabilistic_quantale(), &WeightedRelation::diagonal(valuation))
}

/// Primes of the window valued uniformly and partitioned by gap value. The
/// relation has `sum_h count_h^2` pairs, so keep windows small.
pub fn gap_partition_relation(w: &PrimeWindow) -> WeightedRelation<u64, Rational> {
    let mass = rational::ratio(1, w.pi_x());
    let valuation = w.primes().iter().map(|&p| (p, mass.clone())).collect();
    let mut blocks: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (p, g) in w.gaps() {
        blocks.entry(g).or_default().push(p);
    }
    let blocks: Vec<Vec<u64>> = blocks.into_values().collect();
    WeightedRelation::same_block(valuation, &blocks).expect("every prime is valued")
}

/// Survival fractions `1 - omega(p)/(p - 1)` folded by `(x)` in the
/// multiplicative quantale.
pub fn local_weakness_via_quantale(pat: &ObstructionPattern) -> Rational {
    let factors: Vec<Rational> = pat
        .sieving_primes()
        .into_iter()
        .map(|p| rational::ratio(p - 1 - pat.omega(p), p - 1))
        .collect();
    tensor_fold(&MultiplicativeQuantale, factors.iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Associativity,
    Commutativity,
    Unit,
    JoinUpperBound,
    Distributivity,
}

/// Laws violated by one sample triple.
pub fn axiom_violations<Q: Quantale>(q: &Q, a: &Q::Value, b: &Q::Value, c: &Q::Value) -> Vec<Law> {
    let mut bad = Vec::new();
    if q.tensor(&q.tensor(a, b), c) != q.tensor(a, &q.tensor(b, c)) {
        bad.push(Law::Associativity);
    }
    if q.tensor(a, b) != q.tensor(b, a) {
        bad.push(Law::Commutativity);
    }
    if q.tensor(a, &q.unit()) != *a || q.join(a, &q.bottom()) != *a {
        bad.push(Law::Unit);
    }
    let ab = q.join(a, b);
    if !q.leq(a, &ab) || !q.leq(b, &ab) {
        bad.push(Law::JoinUpperBound);
    }
    let lhs = q.tensor(a, &q.join(b, c));
    let rhs = q.join(&q.tensor(a, b), &q.tensor(a, c));
    let distributes = if q.lax_distributivity() {
        // exact whenever the join of b and c does not saturate
        q.leq(&lhs, &rhs) && (lhs == rhs || q.join(b, c) == q.unit())
    } else {
        lhs == rhs
    };
    if !distributes {
        bad.push(Law::Distributivity);
    }
    bad
}
