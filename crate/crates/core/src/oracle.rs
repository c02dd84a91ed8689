//! Brute-force oracles and range scans. Nothing here touches the automata;
//! every value is computed straight from the definitions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::seed::ThetaTriple;

/// Largest range accepted by [`scan_members`] unless a caller raises it.
pub const DEFAULT_SCAN_MAX: u64 = 1 << 24;

/// Number of 3-bit windows of `n` (zeros past the top bit) with value in `targets`.
pub fn window_count(n: u64, targets: &[u64]) -> u32 {
    let mut count = 0;
    let mut m = n;
    while m != 0 {
        if targets.contains(&(m & 7)) {
            count += 1;
        }
        m >>= 1;
    }
    count
}

pub fn alpha3(n: u64) -> u32 {
    window_count(n, &[3, 4])
}

pub fn alpha5(n: u64) -> u32 {
    window_count(n, &[5, 6])
}

/// ν₂(n!) = n − s₂(n).
pub fn gamma(n: u64) -> u64 {
    n - n.count_ones() as u64
}

pub fn theta_direct(n: u64) -> ThetaTriple {
    ThetaTriple::new(
        (gamma(n) & 1) as u8,
        (alpha3(n) & 1) as u8,
        (alpha5(n) & 1) as u8,
    )
}

pub fn is_non_sum(n: u64) -> bool {
    theta_direct(n) == ThetaTriple::NON_SUM
}

/// 3^a3 · (−1)^a5 mod 8.
pub fn window_residue(n: u64) -> u8 {
    let three = if alpha3(n).is_multiple_of(2) { 1 } else { 3 };
    if alpha5(n).is_multiple_of(2) {
        three
    } else {
        8 - three
    }
}

/// n! = 2^nu2 · Z with Z odd; `odd_mod8` is Z mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorialResidue {
    pub nu2: u64,
    pub odd_mod8: u8,
}

impl FactorialResidue {
    const ONE: FactorialResidue = FactorialResidue {
        nu2: 0,
        odd_mod8: 1,
    };

    fn times(self, i: u64) -> FactorialResidue {
        let tz = i.trailing_zeros();
        FactorialResidue {
            nu2: self.nu2 + tz as u64,
            odd_mod8: ((self.odd_mod8 as u64 * ((i >> tz) & 7)) % 8) as u8,
        }
    }
}

/// Multiplies 1..=n, stripping powers of two as it goes.
pub fn factorial_residue(n: u64) -> FactorialResidue {
    (1..=n).fold(FactorialResidue::ONE, FactorialResidue::times)
}

/// `factorial_residue(n)` for every n in 0..=limit, built incrementally.
pub fn factorial_residues(limit: u64) -> Vec<FactorialResidue> {
    let mut out = Vec::with_capacity(limit as usize + 1);
    let mut acc = FactorialResidue::ONE;
    out.push(acc);
    for i in 1..=limit {
        acc = acc.times(i);
        out.push(acc);
    }
    out
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// Legendre: m is a sum of three squares iff m is not 4^a (8b + 7).
pub fn three_square_test(m: &BigUint) -> bool {
    if m.is_zero() {
        return true;
    }
    let tz = m.trailing_zeros().unwrap_or(0);
    let core = m >> (tz - tz % 2);
    (&core % 8u32).to_u32() != Some(7)
}

/// Membership bitset and prefix counts S̄(n) for 0 <= n <= limit.
#[derive(Clone, Debug)]
pub struct MemberScan {
    limit: u64,
    bits: Vec<u64>,
    prefix: Vec<u32>,
}

impl MemberScan {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && (self.bits[(n / 64) as usize] >> (n % 64)) & 1 == 1
    }

    /// S̄(n) = #{1 <= j <= n : j in S̄}.
    pub fn count(&self, n: u64) -> u64 {
        self.prefix[n as usize] as u64
    }

    /// Members in `(lo, hi]`.
    pub fn count_between(&self, lo: u64, hi: u64) -> u64 {
        self.count(hi) - self.count(lo)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(|&n| self.contains(n))
    }
}

/// Scans `1..=limit` with [`theta_direct`].
///
/// # Panics
/// If `limit` exceeds [`DEFAULT_SCAN_MAX`].
pub fn scan_members(limit: u64) -> MemberScan {
    scan_members_with_max(limit, DEFAULT_SCAN_MAX)
}

pub fn scan_members_with_max(limit: u64, max: u64) -> MemberScan {
    assert!(limit <= max, "scan limit {limit} exceeds maximum {max}");
    scan_class(limit, ThetaTriple::NON_SUM)
}

fn scan_class(limit: u64, theta: ThetaTriple) -> MemberScan {
    let mut bits = vec![0u64; (limit / 64 + 1) as usize];
    let mut prefix = Vec::with_capacity(limit as usize + 1);
    prefix.push(0u32);
    let mut running = 0u32;
    for n in 1..=limit {
        if theta_direct(n) == theta {
            bits[(n / 64) as usize] |= 1 << (n % 64);
            running += 1;
        }
        prefix.push(running);
    }
    MemberScan {
        limit,
        bits,
        prefix,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetId {
    /// n! is a sum of three squares.
    S,
    /// n! is not.
    SBar,
}

/// Consecutive members `start < start + length` of one set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapRecord {
    pub set: SetId,
    pub start: u64,
    pub length: u64,
}

#[derive(Clone, Debug, Default)]
pub struct GapScan {
    pub records: Vec<GapRecord>,
    /// gap length → first start, for S̄
    pub first_sbar: BTreeMap<u64, u64>,
    /// gap length → first start, for S
    pub first_s: BTreeMap<u64, u64>,
}

impl GapScan {
    /// Gap lengths in order of first appearance.
    pub fn appearance_order(&self, set: SetId) -> Vec<(u64, u64)> {
        let map = match set {
            SetId::S => &self.first_s,
            SetId::SBar => &self.first_sbar,
        };
        let mut v: Vec<(u64, u64)> = map.iter().map(|(&len, &start)| (len, start)).collect();
        v.sort_by_key(|&(len, start)| (start, len));
        v
    }
}

/// All gaps between consecutive members of S and of S̄ within `0..=limit`
/// (0 belongs to S since 0! = 1).
pub fn scan_gaps(limit: u64) -> GapScan {
    let mut scan = GapScan::default();
    let mut last_sbar: Option<u64> = None;
    let mut last_s: Option<u64> = None;
    for n in 0..=limit {
        let (set, last, first) = if is_non_sum(n) {
            (SetId::SBar, &mut last_sbar, &mut scan.first_sbar)
        } else {
            (SetId::S, &mut last_s, &mut scan.first_s)
        };
        if let Some(prev) = *last {
            let length = n - prev;
            first.entry(length).or_insert(prev);
            scan.records.push(GapRecord {
                set,
                start: prev,
                length,
            });
        }
        *last = Some(n);
    }
    scan
}

/// sup of |S̄(n) − n/8| / √n over `floor <= n <= limit`.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub sup: f64,
    pub argmax: u64,
    /// 8·S̄(argmax) − argmax
    pub deviation_at_argmax: i64,
    pub positive_seen: bool,
    pub negative_seen: bool,
    /// `(n, 8·S̄(n) − n)` at every power of two in range
    pub table: Vec<(u64, i64)>,
}

pub fn density_profile(scan: &MemberScan, floor: u64, limit: u64) -> DensityProfile {
    assert!(limit <= scan.limit() && floor >= 1 && floor <= limit);
    let mut best = DensityProfile {
        sup: -1.0,
        argmax: floor,
        deviation_at_argmax: 0,
        positive_seen: false,
        negative_seen: false,
        table: Vec::new(),
    };
    for n in floor..=limit {
        let dev = 8 * scan.count(n) as i64 - n as i64;
        best.positive_seen |= dev > 0;
        best.negative_seen |= dev < 0;
        let normalized = dev.unsigned_abs() as f64 / (8.0 * (n as f64).sqrt());
        if normalized > best.sup {
            best.sup = normalized;
            best.argmax = n;
            best.deviation_at_argmax = dev;
        }
        if n.is_power_of_two() {
            best.table.push((n, dev));
        }
    }
    best
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub checked: u64,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// γ(t·2^k + i) ≡ γ(i) + γ(t·2^k) (mod 2) for 1 <= k <= k_max,
/// 1 <= t <= t_max, 0 <= i < 2^k.
pub fn lemma_gamma_additivity(k_max: u32, t_max: u64) -> LemmaReport {
    let mut report = LemmaReport::default();
    for k in 1..=k_max {
        for t in 1..=t_max {
            let base = t << k;
            for i in 0..(1u64 << k) {
                report.checked += 1;
                if gamma(base + i) % 2 != (gamma(i) + gamma(base)) % 2 {
                    report.violations.push(format!("k={k} t={t} i={i}"));
                }
            }
        }
    }
    report
}

/// Quadrant `j` (1-based) of `[0, 2^s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadrantSpec {
    pub s: u32,
    pub j: u8,
}

impl QuadrantSpec {
    pub fn range(self) -> std::ops::Range<u64> {
        let q = 1u64 << (self.s - 2);
        let j = self.j as u64;
        (j - 1) * q..j * q
    }
}

/// For odd t <= t_max, checks that β(t·2^s + i)·β(i)⁻¹ mod 8 (β = 3^α₃(−1)^α₅)
/// is a constant unit on each quadrant. Returns the report and the constants
/// `c(t, j)` found, keyed by `(t, j)`.
pub fn lemma_quadrant_constants(s: u32, t_max: u64) -> (LemmaReport, BTreeMap<(u64, u8), u8>) {
    assert!(s >= 2);
    let mut report = LemmaReport::default();
    let mut constants = BTreeMap::new();
    for t in (1..=t_max).step_by(2) {
        for j in 1..=4u8 {
            let quadrant = QuadrantSpec { s, j };
            let mut seen: Option<u8> = None;
            for i in quadrant.range() {
                report.checked += 1;
                // units mod 8 are their own inverses
                let r = (window_residue((t << s) + i) * window_residue(i)) % 8;
                if r.is_multiple_of(2) {
                    report
                        .violations
                        .push(format!("s={s} t={t} i={i}: ratio {r} not a unit"));
                }
                match seen {
                    None => seen = Some(r),
                    Some(c) if c != r => report
                        .violations
                        .push(format!("s={s} t={t} j={j} i={i}: {r} != {c}")),
                    _ => {}
                }
            }
            if let Some(c) = seen {
                constants.insert((t, j), c);
            }
        }
    }
    (report, constants)
}

/// S̄-members in `(t·2^s, t·2^s + 2^r]` and |count − 2^r/8| / √(2^r).
pub fn lemma_window_count(t: u64, s: u32, r: u32) -> (u64, f64) {
    let lo = t << s;
    let count = (lo + 1..=lo + (1u64 << r))
        .filter(|&n| is_non_sum(n))
        .count() as u64;
    let dev = (8.0 * count as f64 - (1u64 << r) as f64).abs() / 8.0;
    (count, dev / ((1u64 << r) as f64).sqrt())
}

/// `#{1 <= r <= n : Θ(r) = triple}` for all eight triples, indexed by
/// [`ThetaTriple::index`].
pub fn triple_counts(n: u64) -> [u64; 8] {
    let mut counts = [0u64; 8];
    for r in 1..=n {
        counts[theta_direct(r).index()] += 1;
    }
    counts
}

/// Prefix counts for every triple at once, `counts[t][n]`.
pub fn triple_prefix_counts(limit: u64) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..8)
        .map(|_| Vec::with_capacity(limit as usize + 1))
        .collect();
    let mut running = [0u32; 8];
    for (t, col) in out.iter_mut().enumerate() {
        col.push(running[t]);
    }
    for r in 1..=limit {
        running[theta_direct(r).index()] += 1;
        for (t, col) in out.iter_mut().enumerate() {
            col.push(running[t]);
        }
    }
    out
}
