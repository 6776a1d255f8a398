//! Shipped surface models.
//!
//! The three named surfaces are embedded verbatim as JSON assets and parsed
//! at first use; a checksum test in this module guards the transcription.
//! The diagonal quartic family is generated programmatically.

use super::{CountError, SurfaceModel};

const U3_JSON: &str = include_str!("../../assets/u3.json");
const Y3_JSON: &str = include_str!("../../assets/y3.json");
const Y5_JSON: &str = include_str!("../../assets/y5.json");

/// Quartic surface in `P^3` over `F_3` with six tracked divisor classes.
pub fn u3_model() -> SurfaceModel {
    SurfaceModel::from_json(U3_JSON).expect("embedded u3 asset is valid")
}

/// Quadric-cubic complete intersection in `P^4` over `F_3` carrying a line
/// and two conics.
pub fn y3_model() -> SurfaceModel {
    SurfaceModel::from_json(Y3_JSON).expect("embedded y3 asset is valid")
}

/// Quadric-cubic complete intersection in `P^4` over `F_5` carrying two
/// conics and no rational lines.
pub fn y5_model() -> SurfaceModel {
    SurfaceModel::from_json(Y5_JSON).expect("embedded y5 asset is valid")
}

/// The diagonal quartic `x^4 - y^4 = c (z^4 - w^4)` in `P^3` over `F_p`.
pub fn diagonal_quartic_model(p: u32, c: i64) -> Result<SurfaceModel, CountError> {
    SurfaceModel::new(
        &format!("diagonal-quartic-c{c}-p{p}"),
        p,
        3,
        vec![vec![
            (1, vec![4, 0, 0, 0]),
            (-1, vec![0, 4, 0, 0]),
            (-c, vec![0, 0, 4, 0]),
            (c, vec![0, 0, 0, 4]),
        ]],
    )
}

/// Looks up a shipped model by its short name.
pub fn builtin_model(name: &str) -> Option<SurfaceModel> {
    match name {
        "u3" => Some(u3_model()),
        "y3" => Some(y3_model()),
        "y5" => Some(y5_model()),
        _ => None,
    }
}

/// FNV-1a 64-bit hash, used to freeze the shipped assets byte for byte.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Checksums of the embedded assets, for the transcription guard.
pub fn asset_checksums() -> Vec<(&'static str, u64)> {
    vec![
        ("u3", fnv1a64(U3_JSON.as_bytes())),
        ("y3", fnv1a64(Y3_JSON.as_bytes())),
        ("y5", fnv1a64(Y5_JSON.as_bytes())),
    ]
}
