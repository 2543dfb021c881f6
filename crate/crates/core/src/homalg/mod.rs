//! Based chain complexes over ℤ: construction, shifts, cones, Gaussian
//! elimination, Smith normal form and homology.

mod complex;
mod homology;
mod snf;

pub use complex::{gaussian_eliminate, mapping_cone, reduce, BasedComplex, ChainMap, Generator, Homogeneity, ReductionStrategy};
pub use homology::{filtered_homology_q, homology_z, homology_z_primary, serialize_bidegree_map, BigradedHomology, GradedHomology, HomologyGroup};
pub use snf::{diagonal_form, rank_and_torsion};
