//! Published statements about the game that simulation contradicts.
//!
//! Each entry is detected from the verifier's own runs and carries the
//! smallest counterexample found. Errata are reported, they never make a
//! suite fail.

use std::fmt;

use super::Counterexample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErratumId {
    /// Right part of the 2-3 game worth 2 in base 3/2 for every n > 4.
    RightValueTwo,
    /// 2-3 right parts constant on each triple 3k, 3k+1, 3k+2 once n > 4.
    TripletGrouping,
    /// Settlement index advance equal to the longest suffix of left digits >= b.
    SuffixAdvance,
    /// Closed form for settlements starting at index Te_c + 1.
    TetrahedralAnchor,
    /// Highest dormant settlement at index Te_(c-1) + 1.
    TetrahedralDormant,
    /// Total firings equal M / (a - b).
    WeightedSumSign,
    /// 1-b left part equal to R(b)_(n-2).
    ROffset,
    /// Count of digits b-1 in a 1-b right part equal to a sum of b-adic valuations.
    ValuationSum,
    /// c listed as 2k for the family a = 2k-1, b = a+2.
    OddGapC,
}

impl ErratumId {
    pub fn slug(&self) -> &'static str {
        match self {
            ErratumId::RightValueTwo => "right-value-two",
            ErratumId::TripletGrouping => "triplet-grouping",
            ErratumId::SuffixAdvance => "suffix-advance",
            ErratumId::TetrahedralAnchor => "tetrahedral-anchor",
            ErratumId::TetrahedralDormant => "tetrahedral-dormant",
            ErratumId::WeightedSumSign => "weighted-sum-sign",
            ErratumId::ROffset => "r-offset",
            ErratumId::ValuationSum => "valuation-sum",
            ErratumId::OddGapC => "odd-gap-c",
        }
    }

    /// The published claim, paraphrased.
    pub fn claim(&self) -> &'static str {
        match self {
            ErratumId::RightValueTwo => "in the 2-3 game the right part of φ(n) evaluates to 2 in base 3/2 for all n > 4",
            ErratumId::TripletGrouping => "in the 2-3 game φ(3k)^R = φ(3k+1)^R = φ(3k+2)^R whenever n > 4",
            ErratumId::SuffixAdvance => "past H the settlement index grows by the length of the longest suffix of φ(n)^L whose digits are >= b",
            ErratumId::TetrahedralAnchor => "ξ_k = .(cb-ca)_(p+1) δ_q holds from k = Te_c + 1 with k = Te_c + 1 + p*c + q",
            ErratumId::TetrahedralDormant => "the highest index of a dormant settlement is Te_(c-1) + 1",
            ErratumId::WeightedSumSign => "the number of firings leading to σ is M_σ / (a - b)",
            ErratumId::ROffset => "in the 1-b game φ(n)^L = R(b)_(n-2) for n > b+1",
            ErratumId::ValuationSum => "in the 1-b game φ(n)^R holds Σ_{i=1}^{n-b-2} ν_b(i) digits equal to b-1",
            ErratumId::OddGapC => "for a = 2k-1 = b-2 the value of c is 2k",
        }
    }

    /// What holds instead.
    pub fn finding(&self) -> &'static str {
        match self {
            ErratumId::RightValueTwo => "the value is 2 only for 5 <= n <= 12; from the balanced number 13 on it is a*c = 4",
            ErratumId::TripletGrouping => "the grouping breaks at 9, 10, 11 and at 12, 13, 14, and holds from n = 15 on",
            ErratumId::SuffixAdvance => "the advance is the explosion count: 0 unless the units digit is a+b-1, else 1 plus the run of digits >= b left of it",
            ErratumId::TetrahedralAnchor => "the closed form holds from k = T_(c+1) - 1 = c(c+3)/2 on; the two agree only for c <= 2",
            ErratumId::TetrahedralDormant => "the highest dormant index is T_c - 1 = (c-1)(c+2)/2; the count of dormant settlements is c as stated",
            ErratumId::WeightedSumSign => "M_σ = Σ m*s_m grows by b-a per firing, so the count is M_σ / (b - a)",
            ErratumId::ROffset => "φ(n)^L = R(b)_(n-1)",
            ErratumId::ValuationSum => "the count is (n - b - σ(n-1)) / (b-1) with σ the digit sum of R(b)_(n-1)",
            ErratumId::OddGapC => "c = ceil(a/(b-a)) = k, which also gives the stated eventual value (2k-1)k = a*c",
        }
    }
}

impl fmt::Display for ErratumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// A contradicted claim with the smallest counterexample seen.
/// `expected` is what the claim predicts, `actual` what the game does.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Erratum {
    pub id: ErratumId,
    pub example: Counterexample,
}

impl Erratum {
    pub fn new(id: ErratumId, example: Counterexample) -> Self {
        Erratum { id, example }
    }
}

impl fmt::Display for Erratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ERRATUM {}: claim: {}; observed: {}; counterexample: {}",
            self.id,
            self.id.claim(),
            self.id.finding(),
            self.example
        )
    }
}
