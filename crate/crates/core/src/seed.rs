//! Digit automata for the parities of ν₂(n!), α₃(n) and α₅(n), and the
//! eight Θ-class automata built from them.
//!
//! α₃ and α₅ count the positions `k >= 0` whose three-bit window
//! `a_k + 2 a_{k+1} + 4 a_{k+2}` lies in {3, 4} and {5, 6} respectively.
//! n! = 2^γ Z with Z ≡ 3^α₃ (−1)^α₅ (mod 8), so n! is not a sum of three
//! squares exactly when Θ(n) = (γ, α₃, α₅) mod 2 equals (0, 0, 1).

use std::fmt;

use crate::automata::{complement, minimize, product, BoolOp, Dfa, StateId};
use crate::error::{Error, Result};

/// `(γ mod 2, α₃ mod 2, α₅ mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaTriple {
    pub gamma: u8,
    pub alpha3: u8,
    pub alpha5: u8,
}

impl ThetaTriple {
    pub const NON_SUM: ThetaTriple = ThetaTriple::new(0, 0, 1);

    pub const fn new(gamma: u8, alpha3: u8, alpha5: u8) -> Self {
        ThetaTriple {
            gamma: gamma & 1,
            alpha3: alpha3 & 1,
            alpha5: alpha5 & 1,
        }
    }

    /// All eight triples in lexicographic order.
    pub fn all() -> impl Iterator<Item = ThetaTriple> {
        (0..8u8).map(|i| ThetaTriple::new(i >> 2, i >> 1, i))
    }

    /// Position in [`ThetaTriple::all`].
    pub fn index(self) -> usize {
        ((self.gamma << 2) | (self.alpha3 << 1) | self.alpha5) as usize
    }

    /// Suffix used in file names, e.g. `001`.
    pub fn code(self) -> String {
        format!("{}{}{}", self.gamma, self.alpha3, self.alpha5)
    }
}

impl fmt::Display for ThetaTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.gamma, self.alpha3, self.alpha5)
    }
}

/// Window values counted by a parity automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    targets: u8,
}

impl WindowSpec {
    pub fn new(values: &[u8]) -> Result<Self> {
        let mut targets = 0u8;
        for &v in values {
            // value 0 would make every window past the top bit count
            if v == 0 || v > 7 {
                return Err(Error::InvalidWindow(values.to_vec()));
            }
            targets |= 1 << v;
        }
        if targets == 0 {
            return Err(Error::InvalidWindow(values.to_vec()));
        }
        Ok(WindowSpec { targets })
    }

    pub fn alpha3() -> Self {
        WindowSpec::new(&[3, 4]).unwrap()
    }

    pub fn alpha5() -> Self {
        WindowSpec::new(&[5, 6]).unwrap()
    }

    pub fn contains(&self, value: u32) -> bool {
        value < 8 && (self.targets >> value) & 1 == 1
    }
}

fn one_track() -> Vec<String> {
    vec!["n".to_string()]
}

/// Accepts n with ν₂(n!) even. ν₂(n!) = n − s₂(n), whose parity is the
/// number of 1-bits at positions >= 1.
pub fn gamma_parity_dfa() -> Dfa {
    // 0: nothing read, 1: even so far, 2: odd so far
    let delta = vec![1, 1, 1, 2, 2, 1];
    Dfa::new(one_track(), 0, delta, vec![true, true, false]).unwrap()
}

/// Accepts n whose count of windows with value in `spec` is even.
///
/// State `(stage, last two digits, parity)`; stage 2 covers every prefix of
/// length >= 2. Acceptance pretends two zero digits follow, which settles
/// the windows starting at the last two positions.
pub fn window_parity_dfa(spec: &WindowSpec) -> Dfa {
    #[derive(Clone, Copy)]
    struct St {
        stage: u32,
        older: u32,
        newer: u32,
        parity: u32,
    }
    let id = |s: St| -> StateId {
        match s.stage {
            0 => 0,
            1 => 1 + s.newer,
            _ => 3 + (s.older | (s.newer << 1) | (s.parity << 2)),
        }
    };
    let decode = |q: StateId| -> St {
        match q {
            0 => St {
                stage: 0,
                older: 0,
                newer: 0,
                parity: 0,
            },
            1 | 2 => St {
                stage: 1,
                older: 0,
                newer: q - 1,
                parity: 0,
            },
            _ => {
                let b = q - 3;
                St {
                    stage: 2,
                    older: b & 1,
                    newer: (b >> 1) & 1,
                    parity: b >> 2,
                }
            }
        }
    };
    let states = 11;
    let mut delta = Vec::with_capacity(states * 2);
    let mut accepting = Vec::with_capacity(states);
    for q in 0..states as StateId {
        let s = decode(q);
        for c in 0..2u32 {
            let next = match s.stage {
                0 => St {
                    stage: 1,
                    older: 0,
                    newer: c,
                    parity: 0,
                },
                1 => St {
                    stage: 2,
                    older: s.newer,
                    newer: c,
                    parity: 0,
                },
                _ => {
                    let window = s.older + 2 * s.newer + 4 * c;
                    St {
                        stage: 2,
                        older: s.newer,
                        newer: c,
                        parity: s.parity ^ spec.contains(window) as u32,
                    }
                }
            };
            delta.push(id(next));
        }
        let pending = match s.stage {
            0 => 0,
            1 => spec.contains(s.newer) as u32,
            _ => spec.contains(s.older + 2 * s.newer) as u32 + spec.contains(s.newer) as u32,
        };
        accepting.push((s.parity + pending) % 2 == 0);
    }
    Dfa::new(one_track(), 0, delta, accepting).unwrap()
}

/// Accepts `{n : Θ(n) = theta}`, minimized.
pub fn theta_dfa(theta: ThetaTriple) -> Dfa {
    let pick = |d: Dfa, bit: u8| if bit == 0 { d } else { complement(&d) };
    let g = pick(gamma_parity_dfa(), theta.gamma);
    let a3 = pick(window_parity_dfa(&WindowSpec::alpha3()), theta.alpha3);
    let a5 = pick(window_parity_dfa(&WindowSpec::alpha5()), theta.alpha5);
    let both = product(&g, &a3, BoolOp::And).expect("same track");
    minimize(&product(&both, &a5, BoolOp::And).expect("same track"))
}

/// Accepts n exactly when n! is not a sum of three squares.
pub fn factauto() -> Dfa {
    theta_dfa(ThetaTriple::NON_SUM)
}
