//! ASCII surface syntax for characters, Euler factors and representations.
//!
//! ```text
//! character   := term (('*')? term)*
//! term        := name | 'nu' | 'nu^{' rational '}' | 'chi_{K/k}' | '1' | '(' character ')'
//!                (term '^{' integer '}')
//! character_k := kterm (('*')? kterm)*
//! kterm       := abstract-name | 'norm(' character ')' | '1' | '(' character_k ')'
//! rep         := [type ':'] (induced | named | character 'St_G' | character 'one_G' | 'cusp(' name [',' character] ')')
//! induced     := character 'x' character '|x' character
//!              | factor '|x' factor          (factor: character [St | one | cuspidal-name])
//! named       := ('L' | 'delta' | 'tau' | 'theta_-') '(' arg ',' arg ')'
//! ```

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_character, parse_character_k, parse_gl2, parse_rep};
pub use printer::{print_character, print_character_k, print_factor, print_gl2, print_rep, Style};
