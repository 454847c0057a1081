//! Exact computational algebra for formed spaces with boundary.
//!
//! A formed space is a finitely generated free module over Z or Z/m carrying
//! an alternating bilinear form and a boundary functional. This crate
//! implements their monoidal sum, braiding, genus invariants, classification
//! over principal ideal rings, arc complexes with homology, and automorphism
//! groups, all in exact arithmetic.
//!
//! Every constructive routine returns witnesses (morphisms, bases, group
//! elements) that are re-verified at construction time, so a wrong answer
//! surfaces as an error instead of propagating.

pub mod arcs;
pub mod classify;
pub mod complexes;
pub mod error;
pub mod exactlin;
pub mod formed;
pub mod genus;
pub mod groups;
pub mod ring;

pub use arcs::{arc_morphism, cut, is_arc, is_b_simplex, is_d_simplex, is_nonseparating, split_off};
pub use classify::{
    cancel_x, cancel_x_with, form_data, is_isomorphic, is_realizable, reduce_to_standard,
    standard_model, FormData,
};
pub use error::{Error, Result};
pub use exactlin::{
    alternating_normal_form, column_hermite, inverse, is_unimodular_rows, is_unimodular_sequence,
    kernel_basis, random_unimodular, relative_rank, right_inverse, smith_normal_form, solve,
    AltNormalForm, Mat, SnfResult,
};
pub use formed::{
    braid_matrix, characteristic_vector, standardize_x_power, x_power_model, FormedSpace, Morphism,
};
pub use complexes::{
    build_complex, connectivity_report, destabilization_count_check, link, reduced_homology,
    ComplexKind, CountCheck, HomologyReport, SimplicialComplex,
};

pub use groups::{
    aut_group, orbit_nonseparating, sp_generators, stabilization_square_check,
    symplectic_group_order, AutGroup,
};

pub use genus::{
    adapted_hyperbolic_basis, arc_genus, arc_genus_bruteforce, boundary_invariant_rank,
    find_hyperbolic_for_functional, greedy_split, hyperbolic_genus, hyperbolic_genus_of_form,
    maximal_x_split,
    kernel_form_genus, random_formed_space, stable_range_shorten, AdaptedBasis,
    BoundaryRankReport, GenusMethod, GenusReport, GreedySplit,
};
pub use ring::{ideal_gcd, is_unit, ring_profile, RingProfile, RingSpec};
