//! Binary fingerprinting codes and their coalition semantics.
//!
//! A code is a `t x v` binary matrix: `t` codewords (users, numbered `1..=t`)
//! of length `v` (positions, numbered `1..=v`). A coalition is a nonempty set
//! of users. The positions a coalition cannot alter are those where all its
//! codewords agree; the feasible set of a coalition is every length-`v` word
//! that matches the coalition's common values on those positions.
//!
//! Feasible sets are never materialized: two coalitions have disjoint
//! feasible sets exactly when some position is undetectable for both but
//! carries different common values, so disjointness is a mask test.

use crate::combinatorics::{enumerate_ksubsets, subsets_up_to_lex, SubsetMask, MAX_GROUND};
use crate::error::{Error, Result};

/// Maximum code length. Rows are stored as `u128` masks, position `j` in
/// bit `j - 1`.
pub const MAX_CODE_LENGTH: u16 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    t: u8,
    v: u16,
    rows: Vec<u128>,
}

impl BinaryCode {
    pub fn new(rows: Vec<u128>, v: u16) -> Result<Self> {
        let t = rows.len();
        if t == 0 || t as u64 > MAX_GROUND as u64 {
            return Err(Error::parameter(format!(
                "code must have 1..={MAX_GROUND} rows, got {t}"
            )));
        }
        if v == 0 || v > MAX_CODE_LENGTH {
            return Err(Error::parameter(format!(
                "code length must be in 1..={MAX_CODE_LENGTH}, got {v}"
            )));
        }
        let mask = length_mask(v);
        for (i, row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::parameter(format!(
                    "row {} has bits beyond length {v}",
                    i + 1
                )));
            }
        }
        Ok(BinaryCode {
            t: t as u8,
            v,
            rows,
        })
    }

    /// Build a code from column supports: column `j` has ones exactly at
    /// the users in `columns[j - 1]`.
    pub fn from_columns(columns: &[SubsetMask]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::parameter("code needs at least one column"));
        };
        let t = first.ground();
        if columns.len() as u16 > MAX_CODE_LENGTH {
            return Err(Error::parameter(format!(
                "code length must be at most {MAX_CODE_LENGTH}, got {}",
                columns.len()
            )));
        }
        let mut rows = vec![0u128; t as usize];
        for (j, col) in columns.iter().enumerate() {
            if col.ground() != t {
                return Err(Error::parameter(
                    "all columns must share one ground set".to_string(),
                ));
            }
            for e in col.elems() {
                rows[(e - 1) as usize] |= 1u128 << j;
            }
        }
        BinaryCode::new(rows, columns.len() as u16)
    }

    /// Number of codewords (users).
    pub fn size(&self) -> u8 {
        self.t
    }

    /// Code length (number of positions).
    pub fn length(&self) -> u16 {
        self.v
    }

    /// Codeword of `user` (1-based).
    pub fn row(&self, user: u8) -> u128 {
        debug_assert!(user >= 1 && user <= self.t);
        self.rows[(user - 1) as usize]
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    /// Support of column `j` (1-based) as a subset of users.
    pub fn column(&self, j: u16) -> SubsetMask {
        debug_assert!(j >= 1 && j <= self.v);
        let mut bits = 0u64;
        for (i, row) in self.rows.iter().enumerate() {
            if (row >> (j - 1)) & 1 == 1 {
                bits |= 1u64 << i;
            }
        }
        SubsetMask::new(bits, self.t).expect("row count fits the ground cap")
    }

    pub fn columns(&self) -> Vec<SubsetMask> {
        (1..=self.v).map(|j| self.column(j)).collect()
    }

    fn check_coalition(&self, c: &SubsetMask) -> Result<()> {
        if c.ground() != self.t {
            return Err(Error::parameter(format!(
                "coalition ground set {} does not match code size {}",
                c.ground(),
                self.t
            )));
        }
        if c.is_empty() {
            return Err(Error::parameter("coalition must be nonempty"));
        }
        Ok(())
    }

    /// Positions (as a bitmask) where every codeword of the coalition
    /// agrees; these are the positions the coalition cannot detect.
    pub fn undetectable_positions(&self, c: &SubsetMask) -> Result<u128> {
        self.check_coalition(c)?;
        let members = c.elems();
        let first = self.row(members[0]);
        let mut disagree = 0u128;
        for &m in &members[1..] {
            disagree |= first ^ self.row(m);
        }
        Ok(!disagree & length_mask(self.v))
    }

    /// `(positions, values)`: the undetectable positions of `c` and the
    /// common bit values there (zero outside `positions`).
    pub fn common_pattern(&self, c: &SubsetMask) -> Result<(u128, u128)> {
        let positions = self.undetectable_positions(c)?;
        let any_member = c.elems()[0];
        Ok((positions, self.row(any_member) & positions))
    }

    /// Whether some word lies in both feasible sets. Two feasible sets
    /// intersect iff the coalitions' common values agree on every position
    /// undetectable for both.
    pub fn feasible_sets_intersect(&self, c1: &SubsetMask, c2: &SubsetMask) -> Result<bool> {
        Ok(self.separating_position(c1, c2)?.is_none())
    }

    /// The least position (1-based) that is undetectable for both
    /// coalitions but carries different common values, i.e. a witness that
    /// the feasible sets are disjoint. `None` means the feasible sets
    /// intersect.
    pub fn separating_position(&self, c1: &SubsetMask, c2: &SubsetMask) -> Result<Option<u16>> {
        let (u1, p1) = self.common_pattern(c1)?;
        let (u2, p2) = self.common_pattern(c2)?;
        let sep = u1 & u2 & (p1 ^ p2);
        if sep == 0 {
            Ok(None)
        } else {
            Ok(Some(sep.trailing_zeros() as u16 + 1))
        }
    }

    /// Position-wise majority of an odd-size coalition.
    pub fn majority_word(&self, c: &SubsetMask) -> Result<u128> {
        self.check_coalition(c)?;
        if c.size().is_multiple_of(2) {
            return Err(Error::parameter(format!(
                "majority word needs an odd coalition, got size {}",
                c.size()
            )));
        }
        let members = c.elems();
        let need = (members.len() / 2 + 1) as u32;
        let mut word = 0u128;
        for j in 0..self.v as u32 {
            let ones: u32 = members
                .iter()
                .map(|&m| ((self.row(m) >> j) & 1) as u32)
                .sum();
            if ones >= need {
                word |= 1u128 << j;
            }
        }
        Ok(word)
    }

    /// Whether `word` belongs to the feasible set of coalition `c`.
    pub fn word_is_feasible(&self, c: &SubsetMask, word: u128) -> Result<bool> {
        let (u, p) = self.common_pattern(c)?;
        Ok((word ^ p) & u == 0)
    }

    /// Secure-frameproof verification: every pair of disjoint coalitions of
    /// size at most `r` (exactly `r` in [`SfpcMode::SizeROnly`]) must have
    /// disjoint feasible sets.
    ///
    /// The witness, when verification fails, is the lexicographically least
    /// violating pair by sorted member tuples.
    ///
    /// # Errors
    /// Parameter errors for `t < 2`, `r < 1`, or `r >= t`; `SizeROnly`
    /// additionally requires `t >= 2r`, the regime where checking only
    /// maximum-size coalitions is equivalent to the full check.
    pub fn is_sfpc(&self, r: u8, mode: SfpcMode) -> Result<SfpcVerdict> {
        if self.t < 2 {
            return Err(Error::parameter("secure-frameproof check needs t >= 2"));
        }
        if r < 1 {
            return Err(Error::parameter("secure-frameproof check needs r >= 1"));
        }
        if r >= self.t {
            return Err(Error::parameter(format!(
                "secure-frameproof check needs r < t, got r={r}, t={}",
                self.t
            )));
        }
        let coalitions: Vec<SubsetMask> = match mode {
            SfpcMode::AllSizes => subsets_up_to_lex(self.t, r)?,
            SfpcMode::SizeROnly => {
                if (self.t as u16) < 2 * r as u16 {
                    return Err(Error::parameter(format!(
                        "size-r-only mode requires t >= 2r (got t={}, r={r}); \
                         smaller coalitions are not subsumed below that",
                        self.t
                    )));
                }
                let mut subs = enumerate_ksubsets(self.t, r)?;
                subs.sort_by_key(|a| a.elems());
                subs
            }
        };
        let patterns: Vec<(u128, u128)> = coalitions
            .iter()
            .map(|c| self.common_pattern(c))
            .collect::<Result<_>>()?;
        let mut pairs_checked = 0u64;
        for i in 0..coalitions.len() {
            for j in (i + 1)..coalitions.len() {
                if !coalitions[i].is_disjoint(&coalitions[j]) {
                    continue;
                }
                pairs_checked += 1;
                let (u1, p1) = patterns[i];
                let (u2, p2) = patterns[j];
                if u1 & u2 & (p1 ^ p2) == 0 {
                    return Ok(SfpcVerdict {
                        ok: false,
                        r,
                        mode,
                        pairs_checked,
                        witness: Some((coalitions[i], coalitions[j])),
                    });
                }
            }
        }
        Ok(SfpcVerdict {
            ok: true,
            r,
            mode,
            pairs_checked,
            witness: None,
        })
    }

    /// Frameproof verification: no coalition of size at most `r` can frame
    /// an outside user, i.e. no outside codeword lies in the coalition's
    /// feasible set.
    pub fn is_frameproof(&self, r: u8) -> Result<FpcVerdict> {
        if r < 1 || r > self.t {
            return Err(Error::parameter(format!(
                "frameproof check needs 1 <= r <= t, got r={r}, t={}",
                self.t
            )));
        }
        let coalitions = subsets_up_to_lex(self.t, r)?;
        let mut checked = 0u64;
        for c in &coalitions {
            let (u, p) = self.common_pattern(c)?;
            for outsider in 1..=self.t {
                if c.contains(outsider) {
                    continue;
                }
                checked += 1;
                if (self.row(outsider) ^ p) & u == 0 {
                    return Ok(FpcVerdict {
                        ok: false,
                        r,
                        checked,
                        witness: Some((*c, outsider)),
                    });
                }
            }
        }
        Ok(FpcVerdict {
            ok: true,
            r,
            checked,
            witness: None,
        })
    }
}

fn length_mask(v: u16) -> u128 {
    if v as u32 == 128 {
        !0u128
    } else {
        (1u128 << v) - 1
    }
}

/// Scan mode for [`BinaryCode::is_sfpc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfpcMode {
    /// Check all coalition sizes `1..=r`.
    AllSizes,
    /// Check only size-`r` coalitions. Requires `t >= 2r`, where any
    /// violating pair extends to a violating size-`r` pair.
    SizeROnly,
}

#[derive(Clone, Debug)]
pub struct SfpcVerdict {
    pub ok: bool,
    pub r: u8,
    pub mode: SfpcMode,
    pub pairs_checked: u64,
    /// Least violating coalition pair, if verification failed.
    pub witness: Option<(SubsetMask, SubsetMask)>,
}

#[derive(Clone, Debug)]
pub struct FpcVerdict {
    pub ok: bool,
    pub r: u8,
    pub checked: u64,
    /// Least violating `(coalition, framed user)`, if verification failed.
    pub witness: Option<(SubsetMask, u8)>,
}
