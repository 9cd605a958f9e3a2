#![allow(dead_code)]

use ccilab_core::envelope::Envelope;
use ccilab_core::{ElemSet, Matroid};

/// Rank-6 envelope on 12 elements: `Y` is the unit basis of `x6 = 0`, and
/// `X` element `i` is `(bits of codes[i], 1)`. The hyperplane-partition for
/// `J = Y - {y_j}` then groups `X` by coordinate `j`.
pub fn try_coordinate_envelope(codes: [u32; 7], p: u32) -> Option<Envelope> {
    let mut rows = vec![vec![0i64; 12]; 6];
    for (j, row) in rows.iter_mut().enumerate().take(5) {
        row[j] = 1;
        for (i, &c) in codes.iter().enumerate() {
            row[5 + i] = (c >> j & 1) as i64;
        }
    }
    for i in 0..7 {
        rows[5][5 + i] = 1;
    }
    let m = Matroid::from_matrix(p, 12, &rows).ok()?;
    Envelope::new(m, ElemSet::from_indices(5..12)).ok()
}

pub fn coordinate_envelope(codes: [u32; 7], p: u32) -> Envelope {
    try_coordinate_envelope(codes, p).expect("codes give an envelope")
}

/// Envelopes from xorshift-drawn codes whose coordinates each split `X`
/// 3 + 4, so every hyperplane-partition has type (3,4).
pub fn all34_envelopes(tries: usize, p: u32) -> Vec<Envelope> {
    let mut out = Vec::new();
    let mut state = 0x2545f491u32;
    for _ in 0..tries {
        let mut codes = [0u32; 7];
        for c in codes.iter_mut() {
            state ^= state << 13;
            state ^= state >> 17;
            state ^= state << 5;
            *c = state % 32;
        }
        let split =
            (0..5).all(|j| matches!(codes.iter().filter(|&&c| c >> j & 1 == 1).count(), 3 | 4));
        if split {
            out.extend(try_coordinate_envelope(codes, p));
        }
    }
    out
}

/// Codes whose GF(7) envelopes have no size-2 class in any partition, so
/// they reach the k = 7 census. Their cohyperplane-partitions include the
/// unlisted type (5,1,1).
pub const CENSUS_CODES: [[u32; 7]; 8] = [
    [18, 10, 5, 31, 3, 4, 25],
    [20, 26, 4, 3, 17, 9, 31],
    [3, 22, 27, 21, 8, 12, 16],
    [11, 17, 15, 18, 8, 4, 28],
    [7, 6, 12, 26, 16, 29, 9],
    [3, 4, 14, 8, 18, 21, 29],
    [5, 15, 22, 8, 30, 3, 25],
    [25, 5, 14, 8, 27, 2, 20],
];

pub fn census_envelopes() -> Vec<Envelope> {
    CENSUS_CODES
        .iter()
        .map(|&c| coordinate_envelope(c, 7))
        .collect()
}
