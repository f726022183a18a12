//! Computational toolkit for explicit local class field theory of
//! equal-characteristic local fields: finite fields, truncated Laurent series,
//! Artin–Hasse exponentials, reciprocity pairings, Lubin–Tate towers,
//! two-dimensional symbols and rank-one D-modules.

pub mod gf;
pub mod ring;
pub mod series;
pub mod artin_hasse;
pub mod aj;
pub mod poly;
pub mod reciprocity;
pub mod lubin_tate;
pub mod two_dim;
pub mod dmod;
pub mod acceptance;
