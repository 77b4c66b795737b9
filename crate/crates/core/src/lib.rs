//! Exact-arithmetic construction and verification of necklace
//! representations of algebraic links in the cubic section of the
//! orthoplicial Apollonian sphere packing.
//!
//! Everything is computed over Q(√2) — the coordinate field closed under
//! all the constructions here — so tangency, orthogonality, packing
//! disjointness and crossing detection are exact predicates, never
//! float comparisons. The pipeline:
//!
//! * [`exactnum`] — the field Q(√2) over big rationals;
//! * [`inversive`] — inversive coordinates of spheres and points, the
//!   Minkowski product, Möbius maps as form-preserving matrices;
//! * [`packing`] — the fixed cubic circle packing and z-alternating
//!   orthoplicial sphere packing, their duals, signed-permutation
//!   symmetries, shift maps and the section morphism between the groups;
//! * [`tangle`] — the expression language: Conway coefficient lists,
//!   fractions, sums, mirrors, flips, pretzels, braid words, closures;
//! * [`orthocubic`] — geometric realization: sphere-chain tangles, the
//!   twist calculus, necklace closures and the edge-section braid grid;
//! * [`diagram`] — projection to planar diagrams, planar-diagram codes,
//!   Kauffman bracket and Jones polynomial (the isotopy oracle), SVG;
//! * [`numth`] — tangency points of rational tangles and the solution
//!   family of x⁴ + y⁴ + z⁴ = 2t²;
//! * [`json`] — file formats carrying exact values plus decimal renderings.

pub mod diagram;
pub mod exactnum;
pub mod inversive;
pub mod json;
pub mod linalg;
pub mod numth;
pub mod orthocubic;
pub mod packing;
pub mod tangle;
