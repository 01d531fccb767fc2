//! Brute-force reference checks shared by the integration suites. These
//! recompute verdicts straight from the definitions, with none of the
//! shortcuts the library takes, so agreement is meaningful.

use framecover::{enumerate_ksubsets, BinaryCode, Result, SubsetMask};

/// Every coalition of size 1..=r over `t` users.
pub fn coalitions(t: u8, r: u8) -> Result<Vec<SubsetMask>> {
    let mut out = Vec::new();
    for k in 1..=r.min(t) {
        out.extend(enumerate_ksubsets(t, k)?);
    }
    Ok(out)
}

/// Separation by exhaustion: for each pair of disjoint coalitions, scan
/// every word of the ambient cube for one both sides could produce. A
/// shared feasible word is exactly a failure to separate.
pub fn separating_by_enumeration(code: &BinaryCode, r: u8) -> Result<bool> {
    let v = code.length();
    assert!(
        v <= 16,
        "exhaustive oracle is for short codes, got length {v}"
    );
    let sets = coalitions(code.size(), r)?;
    for (a, c1) in sets.iter().enumerate() {
        for c2 in &sets[a + 1..] {
            if !c1.is_disjoint(c2) {
                continue;
            }
            for word in 0..1u128 << v {
                if code.word_is_feasible(c1, word)? && code.word_is_feasible(c2, word)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
