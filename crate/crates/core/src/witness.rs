//! Constructive equal-sum witnesses: families of pairwise-distinct sums with
//! the same number of terms and the same value, certifying upper bounds on
//! T(n, m, t).
//!
//! Term counts grow exponentially in m (a sum of l3 twos has on the order of
//! 3^m terms), so sums are kept run-length encoded as (base, multiplicity)
//! pairs with arbitrary-precision multiplicities.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::arith::{self, SeedQuantities};
use crate::error::{Error, Result};

/// A sum of m-th powers in run-length form: bases strictly decreasing,
/// multiplicities positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleSum {
    terms: Vec<(u64, BigUint)>,
}

impl RleSum {
    /// Builds a canonical sum from (base, multiplicity) pairs: equal bases are
    /// merged, zero multiplicities dropped, bases sorted in decreasing order.
    pub fn new(terms: impl IntoIterator<Item = (u64, BigUint)>) -> Self {
        let mut collected: Vec<(u64, BigUint)> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        collected.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut merged: Vec<(u64, BigUint)> = Vec::with_capacity(collected.len());
        for (base, count) in collected {
            match merged.last_mut() {
                Some((b, c)) if *b == base => *c += count,
                _ => merged.push((base, count)),
            }
        }
        RleSum { terms: merged }
    }

    pub fn terms(&self) -> &[(u64, BigUint)] {
        &self.terms
    }

    /// Total number of terms when the sum is written out.
    pub fn term_count(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// The value of the sum under the exponent m.
    pub fn power_sum(&self, m: u32) -> BigUint {
        self.terms
            .iter()
            .map(|(b, c)| BigUint::from(*b).pow(m) * c)
            .sum()
    }

    /// The same multiset with one extra term equal to 1.
    pub fn with_extra_one(&self) -> RleSum {
        let mut terms = self.terms.clone();
        RleSum::new(terms.drain(..).chain([(1, BigUint::one())]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Lemma21,
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    Eq6,
    Eq7,
    Thm51,
}

impl std::fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WitnessKind::Lemma21 => "lemma21",
            WitnessKind::Eq1 => "eq1",
            WitnessKind::Eq2 => "eq2",
            WitnessKind::Eq3 => "eq3",
            WitnessKind::Eq4 => "eq4",
            WitnessKind::Eq6 => "eq6",
            WitnessKind::Eq7 => "eq7",
            WitnessKind::Thm51 => "thm51",
        };
        f.write_str(s)
    }
}

/// The named three-sum / two-sum identities exposed by [`equation_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationId {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
    Eq6,
    Eq7,
}

impl EquationId {
    pub const ALL: [EquationId; 6] = [
        EquationId::Eq1,
        EquationId::Eq2,
        EquationId::Eq3,
        EquationId::Eq4,
        EquationId::Eq6,
        EquationId::Eq7,
    ];

    fn kind(self) -> WitnessKind {
        match self {
            EquationId::Eq1 => WitnessKind::Eq1,
            EquationId::Eq2 => WitnessKind::Eq2,
            EquationId::Eq3 => WitnessKind::Eq3,
            EquationId::Eq4 => WitnessKind::Eq4,
            EquationId::Eq6 => WitnessKind::Eq6,
            EquationId::Eq7 => WitnessKind::Eq7,
        }
    }
}

impl std::str::FromStr for EquationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "eq1" => Ok(EquationId::Eq1),
            "eq2" => Ok(EquationId::Eq2),
            "eq3" => Ok(EquationId::Eq3),
            "eq4" => Ok(EquationId::Eq4),
            "eq6" => Ok(EquationId::Eq6),
            "eq7" => Ok(EquationId::Eq7),
            other => Err(format!("unknown equation id: {other}")),
        }
    }
}

/// t pairwise-distinct sums of equal length and equal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSet {
    pub m: u32,
    pub t: u32,
    pub length: BigUint,
    pub sums: Vec<RleSum>,
    pub common_value: BigUint,
    pub kind: WitnessKind,
}

/// Outcome of re-verifying a witness from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub pass: bool,
    /// First discrepancy found, localized to the offending sum.
    pub discrepancy: Option<String>,
}

impl VerificationReport {
    fn pass() -> Self {
        VerificationReport {
            pass: true,
            discrepancy: None,
        }
    }

    fn fail(msg: String) -> Self {
        VerificationReport {
            pass: false,
            discrepancy: Some(msg),
        }
    }
}

/// Recomputes every power sum and term count with exact arithmetic and checks
/// pairwise distinctness. Failures are reported, not thrown.
pub fn verify_witness(w: &WitnessSet) -> VerificationReport {
    if w.sums.len() != w.t as usize {
        return VerificationReport::fail(format!(
            "expected {} sums, found {}",
            w.t,
            w.sums.len()
        ));
    }
    for (i, sum) in w.sums.iter().enumerate() {
        let count = sum.term_count();
        if count != w.length {
            return VerificationReport::fail(format!(
                "sum {i} has {count} terms, expected {}",
                w.length
            ));
        }
        let value = sum.power_sum(w.m);
        if value != w.common_value {
            return VerificationReport::fail(format!(
                "sum {i} evaluates to {value}, expected {}",
                w.common_value
            ));
        }
    }
    for i in 0..w.sums.len() {
        for j in i + 1..w.sums.len() {
            if w.sums[i] == w.sums[j] {
                return VerificationReport::fail(format!("sums {i} and {j} are equal multisets"));
            }
        }
    }
    VerificationReport::pass()
}

/// Appends a 1 to every sum: still a valid witness, one term longer and one
/// larger in value.
pub fn extend_with_ones(w: &WitnessSet) -> WitnessSet {
    WitnessSet {
        m: w.m,
        t: w.t,
        length: &w.length + BigUint::one(),
        sums: w.sums.iter().map(RleSum::with_extra_one).collect(),
        common_value: &w.common_value + BigUint::one(),
        kind: w.kind,
    }
}

fn checked(w: WitnessSet) -> Result<WitnessSet> {
    let report = verify_witness(&w);
    if report.pass {
        Ok(w)
    } else {
        Err(Error::InternalConsistency(format!(
            "{} witness at m = {}: {}",
            w.kind,
            w.m,
            report.discrepancy.unwrap_or_default()
        )))
    }
}

fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InternalConsistency(format!(
            "inexact division while forming {what}: {num} / {den}"
        )))
    }
}

/// t equal sums of n m-th powers built from the bases t and t -+ i: the i-th
/// alternative sum mixes (t-i)^m and (t+i)^m so that every sum equals n * t^m.
pub fn lemma21_construction(m: u32, t: u32) -> Result<WitnessSet> {
    assert!(m >= 1 && t >= 1);
    let tm = arith::pow(t, m);
    if t == 1 {
        // A single sum is trivially a one-way witness.
        let sum = RleSum::new([(u64::from(t), BigUint::one())]);
        return checked(WitnessSet {
            m,
            t,
            length: BigUint::one(),
            common_value: tm,
            sums: vec![sum],
            kind: WitnessKind::Lemma21,
        });
    }

    // For 1 <= i <= t-1:
    //   a_i = t^m - (t-i)^m,  b_i = (t+i)^m - t^m,  l_i = lcm(a_i, b_i),
    //   alpha_i = l_i / a_i,  beta_i = l_i / b_i,   gamma_i = alpha_i + beta_i,
    // n = lcm(gamma_1, ..., gamma_{t-1}), delta_i = n / gamma_i.
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    for i in 1..t {
        let low = arith::pow(t - i, m);
        let high = arith::pow(t + i, m);
        let a = &tm - &low;
        let b = &high - &tm;
        let l = a.lcm(&b);
        let alpha = exact_div(&l, &a, "alpha")?;
        let beta = exact_div(&l, &b, "beta")?;
        gammas.push(&alpha + &beta);
        alphas.push(alpha);
        betas.push(beta);
    }
    let n = gammas
        .iter()
        .fold(BigUint::one(), |acc, g| acc.lcm(g));

    let common_value = &n * &tm;
    let mut sums = vec![RleSum::new([(u64::from(t), n.clone())])];
    for i in 1..t {
        let idx = (i - 1) as usize;
        let delta = exact_div(&n, &gammas[idx], "delta")?;
        sums.push(RleSum::new([
            (u64::from(t - i), &alphas[idx] * &delta),
            (u64::from(t + i), &betas[idx] * &delta),
        ]));
    }
    checked(WitnessSet {
        m,
        t,
        length: n,
        sums,
        common_value,
        kind: WitnessKind::Lemma21,
    })
}

/// The 3s-and-1s block: (2^m - 1)/d threes and (3^m - 2^m)/d ones, worth
/// l3 * 2^m over l3 terms.
fn threes_block(q: &SeedQuantities, copies: &BigUint) -> Vec<(u64, BigUint)> {
    let p2 = arith::pow(2, q.m);
    let p3 = arith::pow(3, q.m);
    let one = BigUint::one();
    let threes = (&p2 - &one) / &q.d;
    let ones = (&p3 - &p2) / &q.d;
    vec![(3, threes * copies), (1, ones * copies)]
}

/// The 4-and-1s block: one four and 2^m ones, worth l4 * 2^m over l4 terms.
fn fours_block(q: &SeedQuantities, copies: &BigUint) -> Vec<(u64, BigUint)> {
    let p2 = arith::pow(2, q.m);
    vec![(4, copies.clone()), (1, p2 * copies)]
}

fn twos(count: BigUint) -> Vec<(u64, BigUint)> {
    vec![(2, count)]
}

/// The literal multisets of one of the named identities at exponent m.
pub fn equation_witness(id: EquationId, m: u32) -> Result<WitnessSet> {
    assert!(m >= 1);
    let q = arith::seed_quantities(m);
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let p2 = arith::pow(2, m);
    let (length, sums): (BigUint, Vec<RleSum>) = match id {
        EquationId::Eq1 => (
            q.l4.clone(),
            vec![
                RleSum::new(fours_block(&q, &one)),
                RleSum::new(twos(q.l4.clone())),
            ],
        ),
        EquationId::Eq2 => (
            q.l3.clone(),
            vec![
                RleSum::new(threes_block(&q, &one)),
                RleSum::new(twos(q.l3.clone())),
            ],
        ),
        EquationId::Eq3 => (
            &two * &q.l4,
            vec![
                RleSum::new(fours_block(&q, &two)),
                RleSum::new(
                    fours_block(&q, &one)
                        .into_iter()
                        .chain(twos(q.l4.clone())),
                ),
                RleSum::new(twos(&two * &q.l4)),
            ],
        ),
        EquationId::Eq4 => {
            if q.l3 > q.l4 {
                return Err(Error::Precondition(format!(
                    "eq4 needs l3 <= l4, but l3 = {} > l4 = {} at m = {m}",
                    q.l3, q.l4
                )));
            }
            (
                q.l4.clone(),
                vec![
                    RleSum::new(fours_block(&q, &one)),
                    RleSum::new(
                        threes_block(&q, &one)
                            .into_iter()
                            .chain(twos(&q.l4 - &q.l3)),
                    ),
                    RleSum::new(twos(q.l4.clone())),
                ],
            )
        }
        EquationId::Eq6 => {
            if q.l4 > q.l3 {
                return Err(Error::Precondition(format!(
                    "eq6 needs l4 <= l3, but l4 = {} > l3 = {} at m = {m}",
                    q.l4, q.l3
                )));
            }
            (
                q.l3.clone(),
                vec![
                    RleSum::new(
                        fours_block(&q, &one)
                            .into_iter()
                            .chain(twos(&q.l3 - &q.l4)),
                    ),
                    RleSum::new(threes_block(&q, &one)),
                    RleSum::new(twos(q.l3.clone())),
                ],
            )
        }
        EquationId::Eq7 => (
            &two * &q.l3,
            vec![
                RleSum::new(threes_block(&q, &two)),
                RleSum::new(
                    threes_block(&q, &one)
                        .into_iter()
                        .chain(twos(q.l3.clone())),
                ),
                RleSum::new(twos(&two * &q.l3)),
            ],
        ),
    };
    let t = sums.len() as u32;
    checked(WitnessSet {
        m,
        t,
        common_value: &length * &p2,
        length,
        sums,
        kind: id.kind(),
    })
}

/// The general-t padding construction: the all-2s sum of length n0 together
/// with, for each of the t-1 cheapest pairs (a, b), a copies of the
/// 3s-and-1s block plus b copies of the 4-and-1s block padded with 2s.
pub fn thm51_construction(m: u32, t: u32) -> Result<WitnessSet> {
    assert!(m >= 1 && t >= 2);
    let q = arith::seed_quantities(m);
    let n0 = arith::conjectured_seed(m, t)?.seed_number;
    let p2 = arith::pow(2, m);
    let common_value = &n0 * &p2;

    let mut sums = vec![RleSum::new(twos(n0.clone()))];
    for pair in arith::smallest_pair_values(&q, (t - 1) as u64) {
        if pair.value > n0 {
            return Err(Error::InternalConsistency(format!(
                "candidate pair ({}, {}) exceeds the seed bound {n0}",
                pair.a, pair.b
            )));
        }
        let a = BigUint::from(pair.a);
        let b = BigUint::from(pair.b);
        let padding = &n0 - &pair.value;
        sums.push(RleSum::new(
            threes_block(&q, &a)
                .into_iter()
                .chain(fours_block(&q, &b))
                .chain(twos(padding)),
        ));
    }
    checked(WitnessSet {
        m,
        t,
        length: n0,
        sums,
        common_value,
        kind: WitnessKind::Thm51,
    })
}

// Serialized as {m, t, kind, common_value: decimal string,
// sums: [[[base, multiplicity-string], ...], ...]}.
impl Serialize for WitnessSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Sum<'a>(&'a RleSum);
        struct Term<'a>(u64, &'a BigUint);

        impl Serialize for Term<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&self.0)?;
                seq.serialize_element(&self.1.to_string())?;
                seq.end()
            }
        }

        impl Serialize for Sum<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.terms().len()))?;
                for (base, count) in self.0.terms() {
                    seq.serialize_element(&Term(*base, count))?;
                }
                seq.end()
            }
        }

        let mut st = serializer.serialize_struct("WitnessSet", 5)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("common_value", &self.common_value.to_string())?;
        let sums: Vec<Sum<'_>> = self.sums.iter().map(Sum).collect();
        st.serialize_field("sums", &sums)?;
        st.end()
    }
}
