//! Reference patterns used across tests, the CLI and the acceptance suite.

use crate::matrix::BinMatrix;

fn mat(rows: &[&str]) -> BinMatrix {
    BinMatrix::from_row_strs(rows).expect("fixture rows are well formed")
}

/// Degree-4 pattern built from `I_2` and a 2×2 Fourier block; supports a unitary.
pub fn dita_degree4() -> BinMatrix {
    mat(&["1011", "0111", "1011", "0111"])
}

/// Regular SQ matrix of degree 6 with a CondK block and 12 zeros.
pub fn cond_degree6() -> BinMatrix {
    mat(&["101110", "011101", "111100", "110011", "110011", "001111"])
}

/// Symmetric SQ degree-5 matrix with a NewCond block (6 zeros).
pub fn newcond_degree5_first() -> BinMatrix {
    mat(&["10111", "01111", "11110", "11001", "11001"])
}

/// Symmetric SQ degree-5 matrix with a NewCond block (5 zeros).
pub fn newcond_degree5_second() -> BinMatrix {
    mat(&["10111", "01111", "11111", "11001", "11001"])
}

/// Degree-10 SQ matrix carrying both block structures.
pub fn both_degree10() -> BinMatrix {
    mat(&[
        "1011110000",
        "0111001100",
        "1111000011",
        "0010111111",
        "0001111111",
        "1100111111",
        "1100111111",
        "1100111111",
        "1100111111",
        "1100111111",
    ])
}

/// The printed degree-4 indecomposable SQ classes with their automorphism
/// orders and index strings. The two `T` entries stand for two classes each.
pub fn indecomposable_degree4() -> Vec<(BinMatrix, u128, &'static str)> {
    vec![
        (mat(&["0111", "1111", "1111", "1111"]), 36, "S"),
        (mat(&["0111", "1011", "1111", "1111"]), 8, "S"),
        (mat(&["0111", "1011", "1101", "1111"]), 6, "S"),
        (mat(&["0111", "1011", "1101", "1110"]), 24, "RS"),
        (mat(&["0011", "0111", "1111", "1111"]), 4, "S"),
        (mat(&["0011", "1111", "1111", "1111"]), 24, "T"),
        (dita_degree4(), 16, "T"),
        (BinMatrix::ones(4).expect("degree 4"), 576, "RS"),
    ]
}

/// The four regular SQ classes of degree 6 with row sum 4.
pub fn regular_degree6_sigma4() -> Vec<(BinMatrix, u128, &'static str)> {
    vec![
        (
            mat(&["100111", "010111", "001111", "111100", "111010", "111001"]),
            72,
            "RS",
        ),
        (
            mat(&["001111", "001111", "110011", "110011", "111100", "111100"]),
            384,
            "RS",
        ),
        (
            mat(&["111100", "011110", "001111", "100111", "110011", "111001"]),
            12,
            "RS",
        ),
        (
            mat(&["001111", "001111", "111100", "110110", "110011", "111001"]),
            32,
            "NRS",
        ),
    ]
}

/// The two degree-5 classes listed without unitary support.
pub fn no_unitary_degree5() -> Vec<(BinMatrix, u128)> {
    vec![
        (mat(&["00111", "00111", "11011", "11101", "11111"]), 8),
        (mat(&["00111", "00111", "11011", "11101", "11110"]), 24),
    ]
}
