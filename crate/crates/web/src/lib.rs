//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! Every export takes and returns plain strings or numbers so the same
//! methods run natively under `cargo test`.

use num_bigint::{BigInt, BigUint};
use wasm_bindgen::prelude::*;

use factoromata::automata::{Dfa, NumberTuple};
use factoromata::linrep::{sbar_representation, LinearRepresentation};
use factoromata::query::seed_registry;
use factoromata::seed::{theta_dfa, ThetaTriple};

/// Decimal digits only, at most this many.
const MAX_DIGITS: usize = 4000;

fn parse_decimal(s: &str) -> Result<BigUint, String> {
    let s = s.trim();
    if s.is_empty() || s.len() > MAX_DIGITS || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!(
            "expected a natural number of at most {MAX_DIGITS} digits"
        ));
    }
    s.parse().map_err(|_| "not a number".to_string())
}

#[wasm_bindgen]
pub struct Demo {
    theta: Vec<(ThetaTriple, Dfa)>,
    rep: LinearRepresentation,
}

impl Default for Demo {
    fn default() -> Self {
        Self::new()
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo {
            theta: ThetaTriple::all().map(|t| (t, theta_dfa(t))).collect(),
            rep: sbar_representation(&seed_registry()).expect("seed query compiles"),
        }
    }

    /// JSON `{"theta":[g,a3,a5],"nonSum":bool}` for decimal `n`.
    pub fn classify(&self, n: &str) -> Result<String, String> {
        let n = NumberTuple(vec![parse_decimal(n)?]);
        let (t, _) = self
            .theta
            .iter()
            .find(|(_, d)| d.accepts(&n).unwrap_or(false))
            .ok_or("no class accepted the input")?;
        Ok(format!(
            r#"{{"theta":[{},{},{}],"nonSum":{}}}"#,
            t.gamma,
            t.alpha3,
            t.alpha5,
            *t == ThetaTriple::NON_SUM
        ))
    }

    /// S̄(n) in decimal.
    pub fn count(&self, n: &str) -> Result<String, String> {
        Ok(self.rep.eval(&parse_decimal(n)?).to_string())
    }

    /// Pairs `(8·S̄(2^k) − 2^k) / 2^(k/2)` and the same at 3·2^k, for
    /// `0 <= k <= k_max`, flattened.
    pub fn deviation_curve(&self, k_max: u32) -> Vec<f64> {
        let k_max = k_max.min(400) as usize;
        let a = self.rep.pow2_sequence(k_max, &[1]);
        let b = self.rep.pow2_sequence(k_max, &[1, 1]);
        let mut out = Vec::with_capacity(2 * (k_max + 1));
        for k in 0..=k_max {
            let n = BigInt::from(1u8) << k;
            let dev_a = BigInt::from(8) * &a[k] - &n;
            let dev_b = BigInt::from(8) * &b[k] - BigInt::from(3) * &n;
            out.push(normalized(&dev_a, k));
            out.push(normalized(&dev_b, k));
        }
        out
    }
}

/// `dev / 2^(k/2)` as a float; exact for the magnitudes involved since the
/// deviation is a small multiple of a power of two.
fn normalized(dev: &BigInt, k: usize) -> f64 {
    let bits = dev.bits() as i64;
    let shift = (bits - 60).max(0);
    let mantissa: i64 = (dev >> shift as usize).try_into().unwrap_or(0);
    mantissa as f64 * 2f64.powf(shift as f64 - k as f64 / 2.0)
}
