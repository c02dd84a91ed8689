//! Reference values: published constants and in-repo golden files.
//!
//! The golden files under `golden/` freeze measured quantities (gap first
//! occurrences, the density constant) so later runs detect regressions.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::IntPolynomial;
use crate::oracle::SetId;

/// Gap lengths between consecutive members of S̄.
pub const SBAR_GAP_LENGTHS: [u64; 34] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 25, 26, 28,
    30, 31, 33, 34, 35, 37, 38, 42,
];

/// Gap lengths between consecutive members of S.
pub const S_GAP_LENGTHS: [u64; 4] = [1, 2, 3, 4];

/// `(length, first start)` anchors for S̄.
pub const SBAR_FIRST_ANCHORS: [(u64, u64); 2] = [(42, 23268), (33, 153828)];

/// Published state counts of the minimal factauto, gaps and sgaps automata.
pub const FACTAUTO_STATES: usize = 33;
pub const GAPS_STATES: usize = 319;
pub const SGAPS_STATES: usize = 203;

/// `(k, S̄(2^k))`.
pub const POW2_VALUES: [(u64, &str); 3] = [(3, "0"), (27, "16773120"), (51, "281474959933440")];

/// `(k, S̄(3·2^k))`.
pub const THREE_POW2_VALUES: [(u64, &str); 3] =
    [(3, "3"), (27, "50327553"), (51, "844424913354753")];

const GAPS_TSV: &str = include_str!("../golden/gaps.tsv");
const DENSITY_TSV: &str = include_str!("../golden/density.tsv");
const H_TXT: &str = include_str!("../golden/h.txt");

fn data_lines(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').collect())
}

/// Golden first occurrences, in order of appearance.
pub fn first_occurrences(set: SetId) -> Vec<(u64, u64)> {
    let tag = match set {
        SetId::S => "S",
        SetId::SBar => "Sbar",
    };
    data_lines(GAPS_TSV)
        .filter(|f| f[0] == tag)
        .map(|f| (f[1].parse().unwrap(), f[2].parse().unwrap()))
        .collect()
}

pub fn first_occurrence_map(set: SetId) -> BTreeMap<u64, u64> {
    first_occurrences(set).into_iter().collect()
}

/// A frozen density measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityGolden {
    pub floor: u64,
    pub limit: u64,
    pub argmax: u64,
    /// 8·S̄(argmax) − argmax
    pub deviation: i64,
}

impl DensityGolden {
    pub fn sup(&self) -> f64 {
        self.deviation.unsigned_abs() as f64 / (8.0 * (self.argmax as f64).sqrt())
    }
}

pub fn density() -> Vec<DensityGolden> {
    data_lines(DENSITY_TSV)
        .map(|f| DensityGolden {
            floor: f[0].parse().unwrap(),
            limit: f[1].parse().unwrap(),
            argmax: f[2].parse().unwrap(),
            deviation: f[3].parse().unwrap(),
        })
        .collect()
}

pub fn density_for(floor: u64, limit: u64) -> Option<DensityGolden> {
    density()
        .into_iter()
        .find(|g| g.floor == floor && g.limit == limit)
}

/// The published degree-20 minimal polynomial h(x).
pub fn reference_h() -> IntPolynomial {
    let line = H_TXT
        .lines()
        .find(|l| !l.starts_with('#') && !l.trim().is_empty())
        .expect("h.txt has a coefficient line");
    IntPolynomial::new(
        line.split_whitespace()
            .map(|c| c.parse::<BigInt>().unwrap())
            .collect(),
    )
}

/// `x^d·(x − 1)·(x − 2)·(x^24 − 4096)`.
pub fn spectral_envelope(d: usize) -> IntPolynomial {
    IntPolynomial::monomial(1, d)
        .mul(&IntPolynomial::from_i64s(&[-1, 1]))
        .mul(&IntPolynomial::from_i64s(&[-2, 1]))
        .mul(&IntPolynomial::monomial(1, 24).sub(&IntPolynomial::monomial(4096, 0)))
}
