//! Bundled deuteron quadrupole operators (basis sizes 2 and 4, both
//! encodings) and the two-qubit `+-0.5 YY` toy Hamiltonians.

use crate::error::Result;
use crate::pauli::{parse_pauli_sum, PauliSum};

pub const Q2_GC: &str = include_str!("../data/q2_gc.ops");
pub const Q2_JW: &str = include_str!("../data/q2_jw.ops");
pub const Q4_GC: &str = include_str!("../data/q4_gc.ops");
pub const Q4_JW: &str = include_str!("../data/q4_jw.ops");
pub const YY_POS: &str = include_str!("../data/yy_pos.ops");
pub const YY_NEG: &str = include_str!("../data/yy_neg.ops");

/// Basis-2 ground-state mode amplitudes, four decimals (norm 0.99991).
pub const GROUND_STATE_2: [f64; 2] = [0.2759, 0.9611];

/// Looks up a bundled operator by file stem, e.g. `"q2_gc"`.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "q2_gc" => Some(Q2_GC),
        "q2_jw" => Some(Q2_JW),
        "q4_gc" => Some(Q4_GC),
        "q4_jw" => Some(Q4_JW),
        "yy_pos" => Some(YY_POS),
        "yy_neg" => Some(YY_NEG),
        _ => None,
    }
}

pub fn load(text: &'static str) -> Result<PauliSum> {
    parse_pauli_sum(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_files_parse() {
        for name in ["q2_gc", "q2_jw", "q4_gc", "q4_jw", "yy_pos", "yy_neg"] {
            let op = load(bundled(name).unwrap()).unwrap();
            assert!(!op.is_empty(), "{name}");
        }
        assert_eq!(load(Q4_GC).unwrap().len(), 10);
        assert_eq!(load(Q4_JW).unwrap().n_qubits(), 4);
        assert!(bundled("nope").is_none());
    }
}
