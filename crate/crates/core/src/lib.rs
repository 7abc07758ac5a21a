//! Symbolic spinor L-factors of representations of `GSp(4)` over a
//! nonarchimedean local field, relative to anisotropic Bessel models.

pub mod catalog;
pub mod character;
pub mod error;
pub mod euler;
pub mod export;
pub mod lfactor;
pub mod notation;
pub mod packets;
pub mod verify;

pub use catalog::{
    BesselDatum, CuspDecl, CuspidalGl2, Environment, EnvironmentDecl, Gl2Rep, Gsp4Rep, OpaqueCusp,
    OpaqueDecl, Param, TypeSymbol,
};
pub use character::{
    norm_pullback, CharWord, Character, CharacterK, CharacterKRecord, Context, ContextDecl,
    ExtensionDatum, GeneratorDecl, Ramification,
};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use euler::{tate_factor, EulerFactor, Pole, SatakeMonomial, SpecializedFactor};
pub use packets::{
    endoscopic_packet, gl2_lfactor, sk_packet, verify_packet_identity, Packet, PacketReport,
    PacketSource,
};
