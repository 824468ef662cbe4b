//! Combinatorics of SET-style card decks.
//!
//! A deck `D(k^d)` has one card per choice of `k` values in each of `d`
//! attributes. Two hands are isomorphic when some permutation of the
//! attributes, together with a relabelling of each attribute's values,
//! carries one onto the other. This crate decides isomorphism, classifies
//! and counts hand types, and implements the goal games built on top
//! (Set, Stun, Soot, Quad).
//!
//! ```
//! use setdeck::{Caps, DeckSpec, SymmetryGroup, text::parse_hand, classification::class_of};
//!
//! let spec = DeckSpec::standard();
//! let group = SymmetryGroup::new(&spec, &Caps::default()).unwrap();
//! let set = parse_hand(&spec, "0000 1111 2222").unwrap();
//! let record = class_of(&group, &set).unwrap();
//! assert_eq!(record.size, 216);
//! assert_eq!(record.symbol.unwrap().to_string(), "(0;0,0,0)");
//! ```

pub mod burnside;
pub mod classification;
pub mod deck;
pub mod error;
pub mod games;
pub mod group;
pub mod isomorphism;
pub mod text;
pub mod verify;

pub use deck::{complete_set, make_deck, value_of, Caps, Card, DeckSpec, Hand};
pub use error::{Error, Result};
pub use group::{enumerate_group, group_order, random_element, GroupElement, SymmetryGroup};
