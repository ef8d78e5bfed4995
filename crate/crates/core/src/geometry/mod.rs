//! Lattice geometry of signed supports: faces, lattice reduction, simplices
//! and the nonseparability test.

mod chart;
mod lattice;
mod point;
mod polytope;
mod separability;
mod simplex;

pub use chart::AffineChart;
pub use lattice::{reduce_to_full_dim, AffineLatticeMap};
pub use point::{LatticePoint, SignedSupport};
pub use polytope::{
    affine_dim, enumerate_faces, hull_vertices, smallest_face_containing, truncation_face_set, Face,
};
pub use separability::{
    find_cell_witness, is_nonseparable, separability, simplices_containing_cell, spanning_hyperplanes,
    CellWitness,
    HyperplaneReport, Separability, SeparabilityDiagnostic, SideSign, SimplexFamily,
};
pub use simplex::{barycentric_coordinates, barycentric_coordinates_q};
