//! Oracles written directly from the definitions, sharing no code with the
//! library: the 2-adic valuation by Legendre's sum, windows read off the
//! binary digit string, and membership decided from n! itself.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// ν₂(n!) = Σ ⌊n / 2^i⌋.
pub fn legendre(n: u64) -> u64 {
    let mut total = 0;
    let mut p = 2u64;
    while p <= n {
        total += n / p;
        p = match p.checked_mul(2) {
            Some(q) => q,
            None => break,
        };
    }
    total
}

/// Values of the 3-bit windows starting at every digit of n, with zeros
/// read past the most significant digit.
pub fn windows(n: u64) -> Vec<u8> {
    let digits: Vec<u8> = format!("{n:b}").bytes().rev().map(|b| b - b'0').collect();
    let bit = |i: usize| digits.get(i).copied().unwrap_or(0);
    (0..digits.len())
        .map(|k| bit(k) + 2 * bit(k + 1) + 4 * bit(k + 2))
        .collect()
}

pub fn alphas(n: u64) -> (u32, u32) {
    if n == 0 {
        return (0, 0);
    }
    let w = windows(n);
    let a3 = w.iter().filter(|&&v| v == 3 || v == 4).count() as u32;
    let a5 = w.iter().filter(|&&v| v == 5 || v == 6).count() as u32;
    (a3, a5)
}

/// (γ, α₃, α₅) mod 2 as a 3-bit code `γ·4 + α₃·2 + α₅`.
pub fn theta_code(n: u64) -> usize {
    let (a3, a5) = alphas(n);
    ((legendre(n) % 2) * 4 + (a3 as u64 % 2) * 2 + a5 as u64 % 2) as usize
}

/// `(ν₂(n!), odd part of n! mod 8)` for every n in 0..=limit.
pub fn factorial_table(limit: u64) -> Vec<(u64, u8)> {
    let mut out = Vec::with_capacity(limit as usize + 1);
    let (mut nu, mut odd) = (0u64, 1u64);
    out.push((nu, odd as u8));
    for i in 1..=limit {
        let tz = i.trailing_zeros() as u64;
        nu += tz;
        odd = odd * ((i >> tz) % 8) % 8;
        out.push((nu, odd as u8));
    }
    out
}

/// n! = 4^a(8b + 7) exactly when ν₂ is even and the odd part is 7 mod 8.
pub fn non_sum_table(limit: u64) -> Vec<bool> {
    factorial_table(limit)
        .into_iter()
        .map(|(nu, odd)| nu % 2 == 0 && odd == 7)
        .collect()
}

/// `prefix[n]` = #{1 <= j <= n : j in S̄}.
pub fn prefix_counts(members: &[bool]) -> Vec<u64> {
    let mut out = Vec::with_capacity(members.len());
    let mut running = 0;
    for (j, &m) in members.iter().enumerate() {
        if j >= 1 && m {
            running += 1;
        }
        out.push(running);
    }
    out
}

/// Legendre's three-square criterion applied to a big integer.
pub fn is_sum_of_three_squares(m: &BigUint) -> bool {
    if m.is_zero() {
        return true;
    }
    let mut m = m.clone();
    let four = BigUint::from(4u8);
    while (&m % &four).is_zero() {
        m /= &four;
    }
    (&m % 8u8).to_u8() != Some(7)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u8), |acc, i| acc * i)
}

/// `(length -> first start)` for gaps between consecutive elements of the
/// set marked `true`, restricted to elements <= limit, scanning from 0.
pub fn gap_firsts(marks: &[bool], want: bool) -> std::collections::BTreeMap<u64, u64> {
    let mut firsts = std::collections::BTreeMap::new();
    let mut last: Option<u64> = None;
    for (n, &m) in marks.iter().enumerate() {
        if m == want {
            if let Some(prev) = last {
                firsts.entry(n as u64 - prev).or_insert(prev);
            }
            last = Some(n as u64);
        }
    }
    firsts
}
