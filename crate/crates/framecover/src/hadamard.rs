//! Hadamard matrices and the two optimal covers they induce: a 2d-cover
//! of the complete graph on 8d vertices and a d-cover of the complete
//! bipartite graph on 8d-2 + 8d-2 vertices minus a perfect matching,
//! both of size 4d and both matching the counting lower bound exactly.

use crate::combinatorics::{binomial, GraphFamily, LabeledGraph, SubsetMask};
use crate::covers::{Biclique, BicliqueCover, CoverBiclique, GroundPairBiclique};
use crate::error::{Error, Result};

/// A square +1/-1 matrix, stored row-wise with bit j-1 of row i set
/// exactly when entry (i, j) is +1. Orders up to 128 fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: u16,
    rows: Vec<u128>,
}

impl HadamardMatrix {
    /// Wrap raw rows without checking orthogonality; `verify` decides
    /// whether the matrix is actually Hadamard.
    pub fn from_rows(rows: Vec<u128>, order: u16) -> Result<Self> {
        if order == 0 || order > 128 {
            return Err(Error::parameter("order must be between 1 and 128"));
        }
        if rows.len() != order as usize {
            return Err(Error::parameter(format!(
                "expected {order} rows, got {}",
                rows.len()
            )));
        }
        let mask = row_mask(order);
        if rows.iter().any(|&r| r & !mask != 0) {
            return Err(Error::parameter("row has entries beyond the matrix order"));
        }
        Ok(HadamardMatrix { order, rows })
    }

    /// The Sylvester matrix of the given power-of-two order.
    pub fn sylvester(order: u16) -> Result<Self> {
        if order == 0 || order > 128 || !order.is_power_of_two() {
            return Err(Error::parameter(
                "sylvester orders are powers of two up to 128",
            ));
        }
        let mut rows: Vec<u128> = vec![1];
        let mut n = 1u16;
        while n < order {
            let mask = row_mask(n);
            let mut next = Vec::with_capacity(2 * n as usize);
            for &r in &rows {
                next.push(r | (r << n));
            }
            for &r in &rows {
                next.push(r | ((!r & mask) << n));
            }
            rows = next;
            n *= 2;
        }
        HadamardMatrix::from_rows(rows, order)
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    /// Entry (i, j) as +1 or -1, both indices 1-based.
    pub fn entry(&self, i: u16, j: u16) -> i32 {
        if self.rows[(i - 1) as usize] >> (j - 1) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Check pairwise row orthogonality: every two distinct rows must
    /// differ in exactly half the columns.
    ///
    /// # Errors
    /// `FailedVerification` naming the first offending row pair.
    pub fn verify(&self) -> Result<()> {
        if self.order == 1 {
            return Ok(());
        }
        if self.order != 2 && !self.order.is_multiple_of(4) {
            return Err(Error::FailedVerification(format!(
                "order {} is neither 1, 2, nor a multiple of 4",
                self.order
            )));
        }
        let half = self.order as u32 / 2;
        for i in 0..self.rows.len() {
            for j in (i + 1)..self.rows.len() {
                let diff = (self.rows[i] ^ self.rows[j]).count_ones();
                if diff != half {
                    return Err(Error::FailedVerification(format!(
                        "rows {} and {} differ in {diff} columns, expected {half}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Equivalent matrix whose first row and first column are all +1,
    /// obtained by negating columns and then rows.
    pub fn normalized(&self) -> Self {
        let mask = row_mask(self.order);
        let col_flips = !self.rows[0] & mask;
        let mut rows: Vec<u128> = self.rows.iter().map(|&r| r ^ col_flips).collect();
        for r in rows.iter_mut() {
            if *r & 1 == 0 {
                *r = !*r & mask;
            }
        }
        HadamardMatrix {
            order: self.order,
            rows,
        }
    }
}

fn row_mask(order: u16) -> u128 {
    if order as u32 == 128 {
        u128::MAX
    } else {
        (1u128 << order) - 1
    }
}

/// Require a verified Hadamard matrix of order divisible by 4 and return
/// d = order / 4.
fn quarter_order(h: &HadamardMatrix) -> Result<u32> {
    h.verify()?;
    if !h.order.is_multiple_of(4) {
        return Err(Error::parameter(format!(
            "need an order divisible by 4, got {}",
            h.order
        )));
    }
    Ok(h.order as u32 / 4)
}

/// The 2d-cover of the complete graph on 8d vertices induced by a
/// Hadamard matrix of order 4d: column j yields the cut between
/// `{u_i : h(i,j) = +1} union {v_i : h(i,j) = -1}` and its complement,
/// where u_i is vertex i and v_i is vertex 4d + i.
///
/// Every non-matching edge is covered exactly 2d times and each u_i v_i
/// edge 4d times, so the 4d cuts form a 2d-cover; `k8d_lower_bound`
/// shows no smaller one exists.
pub fn k8d_cover(h: &HadamardMatrix) -> Result<BicliqueCover> {
    let d = quarter_order(h)?;
    let n = 2 * h.order;
    if n > 63 {
        return Err(Error::parameter(format!(
            "complete target needs {n} vertices, the cap is 63"
        )));
    }
    let ground = n as u8;
    let mut bicliques = Vec::with_capacity(h.order as usize);
    for j in 1..=h.order {
        let mut elems = Vec::with_capacity(h.order as usize);
        for i in 1..=h.order {
            if h.entry(i, j) == 1 {
                elems.push(i as u8);
            } else {
                elems.push((h.order + i) as u8);
            }
        }
        let a = SubsetMask::from_elems(&elems, ground)?;
        bicliques.push(CoverBiclique::Ground(GroundPairBiclique::new(
            a,
            a.complement(),
            1,
        )?));
    }
    Ok(BicliqueCover {
        family: GraphFamily::Complete { n: ground },
        d: 2 * d,
        bicliques,
    })
}

/// Counting lower bound for 2d-covers of the complete graph on 8d
/// vertices: ceil(2d |E| / B) with B = (4d)^2, the largest biclique of a
/// complete graph on 8d vertices being a balanced split. Equals 4d.
pub fn k8d_lower_bound(d: u32) -> u64 {
    let n = 8 * d as u128;
    let e = binomial(n as u64, 2);
    let b = (n / 2) * (n / 2);
    (2 * d as u128 * e).div_ceil(b) as u64
}

/// The d-cover of the complete bipartite graph minus a perfect matching
/// on 8d-2 + 8d-2 vertices induced by a Hadamard matrix of order 4d:
/// normalize, drop the all-ones first row, and read each column j of the
/// remainder H' as the biclique with left side
/// `{u_i : h'(i,j) = +1} union {v_i : h'(i,j) = -1}` and right side
/// `{u'_i : h'(i,j) = -1} union {v'_i : h'(i,j) = +1}`, where u_i / v_i
/// are left vertices i and (4d-1) + i, and u'_i / v'_i the same on the
/// right.
///
/// Matching pairs never land in one biclique, every edge is covered at
/// least d times, and `kmm_lower_bound` shows the size 4d is optimal.
pub fn kmm_minus_cover(h: &HadamardMatrix) -> Result<BicliqueCover> {
    let d = quarter_order(h)?;
    let m = 2 * h.order - 2;
    if m > 63 {
        return Err(Error::parameter(format!(
            "bipartite target needs side size {m}, the cap is 63"
        )));
    }
    let half = (h.order - 1) as u32;
    let normalized = h.normalized();
    let rows = &normalized.rows()[1..];
    let mut bicliques = Vec::with_capacity(h.order as usize);
    for j in 0..h.order as u32 {
        let mut x = Vec::with_capacity(half as usize);
        let mut y = Vec::with_capacity(half as usize);
        for (i, &row) in rows.iter().enumerate() {
            let i = i as u32;
            let plus = row >> j & 1 == 1;
            // Left ids: u_i = i, v_i = half + i. Right ids follow after
            // all m left vertices.
            if plus {
                x.push(i);
                y.push(m as u32 + half + i);
            } else {
                x.push(half + i);
                y.push(m as u32 + i);
            }
        }
        bicliques.push(CoverBiclique::Explicit(Biclique::new(x, y)));
    }
    Ok(BicliqueCover {
        family: GraphFamily::CompleteBipartiteMinusMatching { m: m as u8 },
        d,
        bicliques,
    })
}

/// Counting lower bound for d-covers of the complete bipartite graph
/// minus a perfect matching on m + m vertices, m = 8d-2: ceil(d |E| / B)
/// with |E| = m(m-1) and B = floor(m^2 / 4), the largest biclique being
/// a balanced index split. Equals 4d.
pub fn kmm_lower_bound(d: u32) -> u64 {
    let m = (8 * d - 2) as u128;
    let e = m * (m - 1);
    let b = m * m / 4;
    (d as u128 * e).div_ceil(b) as u64
}

/// Build the target graph a Hadamard-derived cover speaks about.
pub fn cover_target(cover: &BicliqueCover) -> Result<LabeledGraph> {
    LabeledGraph::from_family(cover.family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::verify_cover;

    #[test]
    fn sylvester_matrices_verify() {
        for order in [1u16, 2, 4, 8, 16, 32, 64, 128] {
            let h = HadamardMatrix::sylvester(order).unwrap();
            h.verify().unwrap();
        }
        assert!(HadamardMatrix::sylvester(12).is_err());
        assert!(HadamardMatrix::sylvester(0).is_err());
    }

    #[test]
    fn sylvester_4_entries() {
        let h = HadamardMatrix::sylvester(4).unwrap();
        // Row 1 and column 1 are all +1; entry (2,2) = -1.
        for j in 1..=4 {
            assert_eq!(h.entry(1, j), 1);
            assert_eq!(h.entry(j, 1), 1);
        }
        assert_eq!(h.entry(2, 2), -1);
        assert_eq!(h.entry(4, 4), 1, "minus times minus");
    }

    #[test]
    fn verify_rejects_non_orthogonal_rows() {
        let h = HadamardMatrix::from_rows(vec![0b11, 0b11], 2).unwrap();
        match h.verify() {
            Err(Error::FailedVerification(msg)) => {
                assert!(msg.contains("rows 1 and 2"), "{msg}");
            }
            other => panic!("expected failed verification, got {other:?}"),
        }
        let odd = HadamardMatrix::from_rows(vec![0; 6], 6).unwrap();
        assert!(odd.verify().is_err());
    }

    #[test]
    fn normalization_fixes_first_row_and_column() {
        let h = HadamardMatrix::sylvester(8).unwrap();
        // Scramble: negate row 3 and column 5.
        let mask = (1u128 << 8) - 1;
        let mut rows = h.rows().to_vec();
        rows[2] = !rows[2] & mask;
        for r in rows.iter_mut() {
            *r ^= 1 << 4;
        }
        let scrambled = HadamardMatrix::from_rows(rows, 8).unwrap();
        scrambled.verify().unwrap();
        let norm = scrambled.normalized();
        norm.verify().unwrap();
        for j in 1..=8 {
            assert_eq!(norm.entry(1, j), 1);
            assert_eq!(norm.entry(j, 1), 1);
        }
    }

    #[test]
    fn complete_cover_from_order_4() {
        // d = 1: a 2-cover of the complete graph on 8 vertices by 4 cuts.
        let h = HadamardMatrix::sylvester(4).unwrap();
        let cover = k8d_cover(&h).unwrap();
        assert_eq!(cover.size(), 4);
        assert_eq!(cover.d, 2);
        let g = cover_target(&cover).unwrap();
        let report = verify_cover(&g, &cover).unwrap();
        assert!(report.invalid.is_empty());
        assert_eq!(report.min_multiplicity, Some(2));
        // Matching edges u_i v_i are covered by every biclique.
        assert_eq!(report.profile.get(&4), Some(&4));
        assert_eq!(report.profile.get(&2), Some(&24));
        assert_eq!(k8d_lower_bound(1), 4);
    }

    #[test]
    fn complete_cover_from_order_8() {
        let h = HadamardMatrix::sylvester(8).unwrap();
        let cover = k8d_cover(&h).unwrap();
        assert_eq!(cover.size(), 8);
        assert_eq!(cover.d, 4);
        let g = cover_target(&cover).unwrap();
        let report = verify_cover(&g, &cover).unwrap();
        assert_eq!(report.min_multiplicity, Some(4));
        assert_eq!(k8d_lower_bound(2), 8);
    }

    #[test]
    fn bipartite_cover_from_order_4() {
        // d = 1: a 1-cover of the 6 + 6 bipartite graph minus a matching.
        let h = HadamardMatrix::sylvester(4).unwrap();
        let cover = kmm_minus_cover(&h).unwrap();
        assert_eq!(cover.size(), 4);
        assert_eq!(cover.d, 1);
        let g = cover_target(&cover).unwrap();
        assert_eq!(g.vertex_count(), 12);
        let report = verify_cover(&g, &cover).unwrap();
        assert!(report.invalid.is_empty());
        assert_eq!(report.min_multiplicity, Some(1));
        assert_eq!(kmm_lower_bound(1), 4);
    }

    #[test]
    fn bipartite_cover_from_order_8() {
        let h = HadamardMatrix::sylvester(8).unwrap();
        let cover = kmm_minus_cover(&h).unwrap();
        assert_eq!(cover.size(), 8);
        assert_eq!(cover.d, 2);
        let g = cover_target(&cover).unwrap();
        assert_eq!(g.vertex_count(), 28);
        let report = verify_cover(&g, &cover).unwrap();
        assert_eq!(report.min_multiplicity, Some(2));
        assert_eq!(kmm_lower_bound(2), 8);
    }

    #[test]
    fn bipartite_cover_accepts_unnormalized_input() {
        let h = HadamardMatrix::sylvester(4).unwrap();
        let mask = (1u128 << 4) - 1;
        let rows: Vec<u128> = h.rows().iter().map(|&r| !r & mask).collect();
        let negated = HadamardMatrix::from_rows(rows, 4).unwrap();
        let cover = kmm_minus_cover(&negated).unwrap();
        let g = cover_target(&cover).unwrap();
        let report = verify_cover(&g, &cover).unwrap();
        assert_eq!(report.min_multiplicity, Some(1));
    }

    #[test]
    fn cover_construction_rejects_bad_orders() {
        let h2 = HadamardMatrix::sylvester(2).unwrap();
        assert!(k8d_cover(&h2).is_err());
        assert!(kmm_minus_cover(&h2).is_err());
        let bad = HadamardMatrix::from_rows(vec![0b1111; 4], 4).unwrap();
        assert!(k8d_cover(&bad).is_err());
    }
}
